//! One line per acceptance criterion; the run fails if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use semistable::complex::{reduce_complex, ComplexMorphism};
use semistable::cone::{clear_denominators, Cone};
use semistable::fan::{
    cartesian_check, is_weakly_semistable, toric_fiber_product, Fan, FanMorphism, StackyMorphism,
};
use semistable::fixtures::*;
use semistable::lattice::{dual_map, fiber_product_lattice, Lattice, LatticeMap, Sublattice};
use semistable::matrix::{ivec, rational_coordinates, IVec, IntMatrix};
use semistable::monoid::{
    dual_monoid, elements_up_to_height, is_saturated, kato_integral, pushout_monoid,
    MonoidMap,
};
use semistable::reduction::{
    factor_through, reduce, reduce_stacky, universal_minimal_modification,
    validate_category_object,
};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn times(k: i64) -> FanMorphism {
    FanMorphism::new(half_line(), half_line(), LatticeMap::from_i64(&[[k]], 1)).unwrap()
}

fn on_quadrant(rows: [[i64; 2]; 2]) -> FanMorphism {
    FanMorphism::new(quadrant(), quadrant(), LatticeMap::from_i64(&rows, 2)).unwrap()
}

/// The projection of the positive orthant of `Z^3` onto the quadrant.
fn orthant_projection() -> FanMorphism {
    let orthant = Fan::from_i64(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
    FanMorphism::new(orthant, quadrant(), LatticeMap::from_i64(&[[1, 0, 0], [0, 1, 0]], 3)).unwrap()
}

fn criterion_1() -> Outcome {
    let (p, q) = fix_blowup();
    let fp = ok(toric_fiber_product(&p, &q))?;
    let triples = ok(cartesian_check(&p, &q))?;
    ensure!(!triples.iter().all(|t| t.cartesian), "cartesian_check reported cartesian");
    ensure!(fp.lattice.lattice.rank == 2, "fiber lattice has rank {}", fp.lattice.lattice.rank);
    let maximal = fp.fan.maximal_cones();
    ensure!(
        maximal == vec![Cone::full(2).intersect(&Cone::from_i64(2, &[[1, 0], [0, 1]])).unwrap()],
        "fiber product is {maximal:?} in the basis {:?}, not the quadrant",
        fp.lattice.basis
    );
    Ok(())
}

fn criterion_2() -> Outcome {
    let (p, q) = fix_23();
    let fp = ok(toric_fiber_product(&p, &q))?;
    ensure!(fp.lattice.basis == vec![ivec(&[3, 2])], "fiber lattice {:?}", fp.lattice.basis);
    ensure!(
        fp.fan.maximal_cones() == vec![Cone::from_i64(1, &[[1]])],
        "fiber cones {:?}",
        fp.fan.maximal_cones()
    );
    let n = ok(dual_monoid(&Cone::from_i64(1, &[[1]]), Lattice::new(1)))?;
    let u = ok(MonoidMap::new(n.clone(), n.clone(), dual_map(p.lattice_map())))?;
    let v = ok(MonoidMap::new(n.clone(), n.clone(), dual_map(q.lattice_map())))?;
    let (_, m) = ok(pushout_monoid(&u, &v))?;
    let gens: Vec<Vec<i64>> = m.generators().iter().map(small).collect();
    let elements = monoid_elements(&gens, 12);
    let expected = monoid_elements(&[vec![2], vec![3]], 12);
    let window = |s: &std::collections::BTreeSet<Vec<i64>>| -> Vec<i64> {
        s.iter().map(|v| v[0].abs()).filter(|&x| x <= 12).collect()
    };
    ensure!(
        window(&elements) == window(&expected),
        "pushout monoid generated by {gens:?}"
    );
    ensure!(!ok(is_saturated(&m))?, "pushout monoid is saturated");
    ensure!(
        !ok(cartesian_check(&p, &q))?.iter().all(|t| t.cartesian),
        "cartesian_check reported cartesian"
    );
    Ok(())
}

fn criterion_3() -> Outcome {
    let p = fix_double();
    let red = ok(reduce(&p))?;
    let r = Cone::from_i64(1, &[[1]]);
    let q = red.base.sublattice(&r).unwrap().clone();
    ensure!(q == Sublattice::from_i64(1, &[[2]]), "Q_κ = {q:?}");
    let contributing = vec![(r.clone(), Sublattice::full(1))];
    let oracle = q_kappa_oracle(p.lattice_map(), &r, &contributing, 12);
    ensure!(q == oracle, "oracle gives {oracle:?}");
    let n = red.total.sublattice(&r).unwrap();
    ensure!(n == &Sublattice::full(1), "N_σ = {n:?}");
    ensure!(ok(red.stacky_map.is_weakly_semistable())?.holds(), "not weakly semistable");
    ensure!(ok(red.stacky_map.is_representable())?, "not representable");
    ensure!(
        image_monoid_oracle(p.lattice_map(), &r, &r, n, &q, 12),
        "image monoid differs from the cone monoid below height 12"
    );
    Ok(())
}

fn criterion_4() -> Outcome {
    let p = fix_semi();
    let red = ok(reduce(&p))?;
    let r = Cone::from_i64(1, &[[1]]);
    let q = red.base.sublattice(&r).unwrap();
    ensure!(q == &Sublattice::from_i64(1, &[[2]]), "Q_κ = {q:?}");
    let even = Sublattice::from_i64(2, &[[1, 1], [0, 2]]);
    for c in red.total.fan().maximal_cones() {
        let n = red.total.sublattice(&c).unwrap();
        ensure!(n == &even, "N_σ on {c:?} is {n:?}");
    }
    let diagonal = red.total.sublattice(&Cone::from_i64(2, &[[1, 1]])).unwrap();
    ensure!(diagonal == &Sublattice::from_i64(2, &[[1, 1]]), "diagonal ray has {diagonal:?}");
    for axis in [[1, 0], [0, 1]] {
        let n = red.total.sublattice(&Cone::from_i64(2, &[axis])).unwrap();
        let expected = Sublattice::from_i64(2, &[[2 * axis[0], 2 * axis[1]]]);
        ensure!(n == &expected, "axis {axis:?} has {n:?}");
    }
    ensure!(ok(red.stacky_map.is_weakly_semistable())?.holds(), "not weakly semistable");
    let obj = ok(universal_minimal_modification(&red, &p, &times(2)))?;
    ensure!(ok(is_weakly_semistable(&obj.pi))?.holds(), "base change is not weakly semistable");
    Ok(())
}

fn criterion_5() -> Outcome {
    let red = ok(reduce(&fix_subdiv()))?;
    ensure!(red.base.fan() == &blowup_fan(), "G' = {:?}", red.base.fan());
    ensure!(red.base.is_trivial(), "base has stacky structure");
    ensure!(red.total.is_trivial(), "total space has stacky structure");
    Ok(())
}

fn criterion_6() -> Outcome {
    for (name, p) in corpus() {
        let red = ok(reduce(&p))?;
        let again = ok(reduce_stacky(&red.stacky_map))?;
        ensure!(again.is_identity_for(&red.stacky_map), "{name} changes on a second pass");
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let cases: Vec<(&str, FanMorphism, Vec<FanMorphism>)> = vec![
        ("semi-proper", fix_semi_proper(), vec![times(2), times(4), times(6)]),
        ("double", fix_double(), vec![times(2), times(4)]),
        (
            "subdiv",
            fix_subdiv(),
            vec![FanMorphism::identity(&quadrant()), on_quadrant([[2, 0], [0, 1]])],
        ),
        ("proj", ws_proj(), vec![times(1), times(3)]),
        ("p1-bundle", p1_bundle(), vec![times(2)]),
    ];
    let mut objects = 0;
    let mut bases = 0;
    for (name, p, alterations) in cases {
        let red = ok(reduce(&p))?;
        bases += 1;
        for i in alterations {
            let obj = ok(universal_minimal_modification(&red, &p, &i))
                .map_err(|e| format!("{name}: {e}"))?;
            if let Err(v) = ok(validate_category_object(&obj, &p, false))? {
                return Err(format!("{name}: {:?} {}", v.condition, v.detail));
            }
            let f = ok(factor_through(&obj, &red)).map_err(|e| format!("{name}: {e}"))?;
            ensure!(f.unique, "{name}: factorization is not unique");
            objects += 1;
        }
    }
    ensure!(objects >= 6 && bases >= 3, "{objects} objects over {bases} bases");
    Ok(())
}

/// `σ` and `κ` in coordinates of `N_σ` and `Q_κ`, with `p` between them.
fn local_chart(m: &StackyMorphism, i: usize) -> Option<(Cone, Cone, LatticeMap)> {
    let sigma = &m.source().fan().cones()[i];
    let kappa = &m.target().fan().cones()[m.underlying().assignment(i)];
    let n = &m.source().sublattices()[i];
    let q = m.target().sublattice(kappa).unwrap();
    if sigma.is_zero() {
        return None;
    }
    let local = |c: &Cone, s: &Sublattice| -> Cone {
        let rays: Vec<IVec> = c
            .rays()
            .iter()
            .map(|r| clear_denominators(&rational_coordinates(s.basis(), r).unwrap()))
            .collect();
        Cone::from_generators(s.rank(), &rays).unwrap()
    };
    let columns: Vec<IVec> = n
        .basis()
        .iter()
        .map(|b| q.coordinates(&m.lattice_map().apply(b)).expect("p(N_σ) lies in Q_κ"))
        .collect();
    let map = if q.rank() == 0 {
        LatticeMap::new(IntMatrix::zeros(0, n.rank()))
    } else {
        LatticeMap::new(IntMatrix::from_columns(&columns, q.rank()).unwrap())
    };
    Some((local(sigma, n), local(kappa, q), map))
}

fn criterion_8() -> Outcome {
    let mut maps: Vec<(String, StackyMorphism)> = Vec::new();
    for (name, p) in corpus() {
        maps.push((format!("reduced {name}"), ok(reduce(&p))?.stacky_map));
    }
    let mut charts = 0;
    for (name, m) in &maps {
        for i in 0..m.source().fan().len() {
            let Some((sigma, kappa, map)) = local_chart(m, i) else {
                continue;
            };
            let s = ok(dual_monoid(&sigma, Lattice::new(sigma.ambient())))?;
            let k = ok(dual_monoid(&kappa, Lattice::new(kappa.ambient())))?;
            if kappa.ambient() == 0 {
                continue;
            }
            let u = ok(MonoidMap::new(k.clone(), s, dual_map(&map)))?;
            if let Some(c) = ok(kato_integral(&u, 8))? {
                return Err(format!("{name}, {sigma:?} over {kappa:?}: {c:?}"));
            }
            for j in 1..=3 {
                let scale = LatticeMap::new(scalar(kappa.ambient(), j));
                let v = ok(MonoidMap::new(k.clone(), k.clone(), dual_map(&scale)))?;
                let (_, pushout) = ok(pushout_monoid(&u, &v))?;
                ensure!(ok(is_saturated(&pushout))?, "{name}: pushout against ×{j} is not saturated");
            }
            charts += 1;
        }
    }
    ensure!(charts > 0, "no charts were checked");
    let q = ok(dual_monoid(&Cone::from_i64(2, &[[1, 0], [0, 1]]), Lattice::new(2)))?;
    let (chart, _) = fix_blowup();
    let dual = ok(MonoidMap::new(q.clone(), q, dual_map(chart.lattice_map())))?;
    ensure!(ok(kato_integral(&dual, 8))?.is_some(), "no counterexample for the blowup chart");
    Ok(())
}

fn scalar(n: usize, k: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
        .collect();
    IntMatrix::from_i64(&rows, n)
}

/// Compares the monoid generated by the restrictions of `σ^∨` and `λ^∨` to
/// the fiber lattice with the dual monoid of the fiber cone.
fn pushout_matches_fiber(p: &FanMorphism, b: &FanMorphism, height: usize) -> Outcome {
    let fp = ok(fiber_product_lattice(p.lattice_map(), b.lattice_map()))?;
    let restrict = dual_map(&fp.inclusion());
    let triples = ok(cartesian_check(p, b))?;
    ensure!(!triples.is_empty(), "no charts");
    for t in &triples {
        let s = ok(dual_monoid(&t.sigma, p.source().lattice()))?;
        let l = ok(dual_monoid(&t.lambda, b.source().lattice()))?;
        let half = height / 2;
        let mut image = std::collections::BTreeSet::new();
        for x in elements_up_to_height(&s, half) {
            for y in elements_up_to_height(&l, half) {
                let mut z = x.clone();
                z.extend(y);
                image.insert(small(&restrict.apply(&z)));
            }
        }
        let dual = ok(dual_monoid(&t.fiber, fp.lattice))?;
        for w in &image {
            ensure!(dual.contains(&ivec(w)).is_some(), "{w:?} lies outside the fiber monoid");
        }
        for g in dual.generators() {
            ensure!(image.contains(&small(g)), "{g:?} is missing from the pushout below height {height}");
        }
        ensure!(t.cartesian, "cartesian_check disagrees on {:?}", t.fiber);
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    while done < 10 {
        if rng.gen_bool(0.5) {
            let p = if rng.gen_bool(0.5) { ws_proj() } else { p1_bundle() };
            let k = rng.gen_range(1..=5);
            pushout_matches_fiber(&p, &times(k), 10).map_err(|e| format!("×{k}: {e}"))?;
        } else {
            let rows = [
                [rng.gen_range(0..=2), rng.gen_range(0..=2)],
                [rng.gen_range(0..=2), rng.gen_range(0..=2)],
            ];
            if rows[0][0] * rows[1][1] == rows[0][1] * rows[1][0] {
                continue;
            }
            pushout_matches_fiber(&orthant_projection(), &on_quadrant(rows), 10)
                .map_err(|e| format!("{rows:?}: {e}"))?;
        }
        done += 1;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut fixtures = corpus();
    fixtures.push((
        "stretch",
        FanMorphism::new(quadrant(), quadrant(), LatticeMap::from_i64(&[[2, 0], [0, 1]], 2)).unwrap(),
    ));
    fixtures.push(("triple", fix_23().1));
    fixtures.push(("blowup identity", FanMorphism::identity(&blowup_fan())));
    for (name, p) in fixtures {
        let (m, se, te) = ok(ComplexMorphism::from_fan_morphism(&p))?;
        let red = ok(reduce_complex(&m))?;
        let realized = ok(red.realize(&m, &se, &te))?;
        let fan = ok(reduce(&p))?;
        ensure!(realized.base == fan.base, "{name}: bases differ");
        ensure!(realized.total == fan.total, "{name}: total spaces differ");
        ensure!(realized.labels == fan.labels, "{name}: labels differ");
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("blowup chart fiber product", criterion_1),
        ("fiber product of ×2 and ×3", criterion_2),
        ("reduction of the doubling map", criterion_3),
        ("reduction of the subdivided quadrant over the line", criterion_4),
        ("reduction of a pure subdivision", criterion_5),
        ("idempotence on the corpus", criterion_6),
        ("terminality suite", criterion_7),
        ("bounded integrality and saturation", criterion_8),
        ("cartesian base changes", criterion_9),
        ("complex and fan reductions agree", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
        match outcome {
            Ok(()) => println!("PASS {}: {name}", k + 1),
            Err(why) => {
                println!("FAIL {}: {name}: {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

