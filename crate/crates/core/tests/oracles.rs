mod common;

use std::collections::BTreeSet;

use common::*;
use semistable::cone::Cone;
use semistable::fan::FanMorphism;
use semistable::fixtures::*;
use semistable::lattice::{LatticeMap, Sublattice};
use semistable::matrix::ivec;
use semistable::monoid::{
    hilbert_basis, image_monoid_equals_cone_monoid, monoid_membership, q_kappa_lattice,
    AffineMonoid,
};
use semistable::reduction::reduce;

fn hb(c: &Cone, sub: &Sublattice) -> BTreeSet<Vec<i64>> {
    hilbert_basis(c, sub).unwrap().iter().map(small).collect()
}

#[test]
fn hilbert_bases_match_enumeration() {
    let cones = [
        Cone::from_i64(2, &[[1, 0], [1, 2]]),
        Cone::from_i64(2, &[[1, 0], [1, 3]]),
        Cone::from_i64(2, &[[2, -1], [-1, 3]]),
        Cone::from_i64(2, &[[1, 0], [0, 1]]),
        Cone::from_i64(2, &[[3, 1], [1, 3]]),
        Cone::from_i64(1, &[[1]]),
        Cone::from_i64(3, &[[1, 0, 0], [0, 1, 0], [1, 1, 2]]),
        Cone::from_i64(3, &[[1, 0, 1], [0, 1, 1], [1, 1, 1], [0, 0, 1]]),
    ];
    let lattices = |n: usize| -> Vec<Sublattice> {
        let mut v = vec![Sublattice::full(n)];
        if n == 2 {
            v.push(Sublattice::from_i64(2, &[[1, 1], [0, 2]]));
            v.push(Sublattice::from_i64(2, &[[2, 0], [0, 1]]));
        }
        if n == 3 {
            v.push(Sublattice::from_i64(3, &[[1, 1, 0], [0, 2, 0], [0, 0, 1]]));
        }
        v
    };
    for c in &cones {
        for sub in lattices(c.ambient()) {
            assert_eq!(hb(c, &sub), hilbert_basis_oracle(c, &sub), "{c:?} in {sub:?}");
        }
    }
}

#[test]
fn lower_dimensional_cones() {
    let c = Cone::from_i64(3, &[[1, 1, 0], [1, -1, 0]]);
    assert_eq!(hb(&c, &Sublattice::full(3)), hilbert_basis_oracle(&c, &Sublattice::full(3)));
}

#[test]
fn membership_matches_enumeration() {
    let generator_sets: [&[[i64; 2]]; 4] = [
        &[[2, 0], [3, 0], [0, 1]],
        &[[1, 0], [1, 1], [1, 2]],
        &[[2, 1], [1, 2]],
        &[[1, 0], [0, 1], [-1, 0]],
    ];
    for gens in generator_sets {
        let m = AffineMonoid::from_i64(2, gens);
        let g: Vec<Vec<i64>> = m.generators().iter().map(small).collect();
        let units = gens.len() == 3 && gens[2] == [-1, 0];
        let reach = monoid_elements(&g, 8);
        for p in box_points(2, 4) {
            let w = ivec(&p);
            let answer = if units {
                assert!(monoid_membership(&w, &m).is_err());
                Ok(m.contains(&w))
            } else {
                monoid_membership(&w, &m)
            };
            match answer {
                Ok(Some(coeffs)) => {
                    let sum = coeffs
                        .iter()
                        .zip(&g)
                        .fold(vec![0i64, 0], |acc, (k, v)| {
                            let k = num_traits::ToPrimitive::to_i64(k).unwrap();
                            assert!(k >= 0);
                            vec![acc[0] + k * v[0], acc[1] + k * v[1]]
                        });
                    assert_eq!(sum, p);
                }
                Ok(None) => assert!(!reach.contains(&p), "{p:?} is reachable from {g:?}"),
                Err(e) => panic!("{e}"),
            }
            if reach.contains(&p) {
                assert!(m.contains(&w).is_some(), "{p:?} in {g:?}");
            }
        }
    }
}

#[test]
fn q_kappa_at_height_twelve() {
    let r = Cone::from_i64(1, &[[1]]);
    let p = fix_semi();
    let contributing: Vec<(Cone, Sublattice)> = p
        .source()
        .cones()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| (c.clone(), Sublattice::full(2)))
        .collect();
    let q = q_kappa_lattice(p.lattice_map(), &r, &contributing).unwrap();
    assert_eq!(q, q_kappa_oracle(p.lattice_map(), &r, &contributing, 12));
    assert_eq!(q, Sublattice::from_i64(1, &[[2]]));
    let double = fix_double();
    let contributing = vec![(r.clone(), Sublattice::full(1))];
    let q = q_kappa_lattice(double.lattice_map(), &r, &contributing).unwrap();
    assert_eq!(q, q_kappa_oracle(double.lattice_map(), &r, &contributing, 12));
    let stretch = LatticeMap::from_i64(&[[2, 0], [0, 3]], 2);
    let quadrant = Cone::from_i64(2, &[[1, 0], [0, 1]]);
    let contributing = vec![(quadrant.clone(), Sublattice::full(2))];
    let q = q_kappa_lattice(&stretch, &quadrant, &contributing).unwrap();
    assert_eq!(q, q_kappa_oracle(&stretch, &quadrant, &contributing, 12));
}

#[test]
fn reduced_morphisms_pass_the_enumerated_criterion() {
    for (name, p) in corpus() {
        let red = reduce(&p).unwrap();
        let m = &red.stacky_map;
        for (i, sigma) in m.source().fan().cones().iter().enumerate() {
            let kappa = m.target().fan().cones()[m.underlying().assignment(i)].clone();
            let n = &m.source().sublattices()[i];
            let q = m.target().sublattice(&kappa).unwrap();
            assert!(
                image_monoid_oracle(m.lattice_map(), sigma, &kappa, n, q, 6),
                "{name}: {sigma:?}"
            );
        }
    }
}

#[test]
fn image_monoids_match_enumeration() {
    let cases = [
        (fix_semi(), Cone::from_i64(2, &[[1, 1]])),
        (fix_semi(), Cone::from_i64(2, &[[1, 0], [1, 1]])),
        (ws_proj(), Cone::from_i64(2, &[[1, 0], [0, 1]])),
        (fix_double(), Cone::from_i64(1, &[[1]])),
    ];
    for (p, sigma) in cases {
        let kappa = Cone::from_i64(1, &[[1]]);
        let full_n = Sublattice::full(sigma.ambient());
        let full_q = Sublattice::full(1);
        let fast = image_monoid_equals_cone_monoid(p.lattice_map(), &sigma, &kappa, &full_n, &full_q).unwrap();
        let slow = image_monoid_oracle(p.lattice_map(), &sigma, &kappa, &full_n, &full_q, 8);
        assert_eq!(fast, slow, "{sigma:?}");
    }
}

#[test]
fn reduction_of_a_stretch() {
    let quadrant = quadrant();
    let p = FanMorphism::new(quadrant.clone(), quadrant.clone(), LatticeMap::from_i64(&[[2, 0], [0, 3]], 2)).unwrap();
    let red = reduce(&p).unwrap();
    assert_eq!(red.base.fan(), &quadrant);
    let q = |c: Cone| red.base.sublattice(&c).unwrap().clone();
    assert_eq!(q(Cone::from_i64(2, &[[1, 0], [0, 1]])), Sublattice::from_i64(2, &[[2, 0], [0, 3]]));
    assert_eq!(q(Cone::from_i64(2, &[[1, 0]])), Sublattice::from_i64(2, &[[2, 0]]));
    assert_eq!(q(Cone::from_i64(2, &[[0, 1]])), Sublattice::from_i64(2, &[[0, 3]]));
    assert!(red.total.is_trivial());
}
