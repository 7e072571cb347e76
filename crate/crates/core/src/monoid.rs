//! Finitely generated submonoids of lattices: Hilbert bases, membership,
//! pushouts, saturation and the bounded integrality check.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cone::{clear_denominators, image_cone, Cone};
use crate::error::{Error, Result};
use crate::lattice::{
    intersect_sublattices, pushout_lattice, right_inverse, Lattice, LatticeMap, Pushout, Sublattice,
};
use crate::matrix::{
    add_vec, dot, integer_kernel, is_zero_vec, rational_coordinates, smith_normal_form, sub_vec,
    IVec, Int, IntMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMonoid {
    lattice: Lattice,
    generators: Vec<IVec>,
    saturation_cone: Option<Cone>,
}

impl AffineMonoid {
    pub fn new(n: usize, generators: &[IVec]) -> Result<Self> {
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Dimension("monoid generator of wrong length".into()));
        }
        let set: BTreeSet<IVec> = generators.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
        Ok(AffineMonoid {
            lattice: Lattice::new(n),
            generators: set.into_iter().collect(),
            saturation_cone: None,
        })
    }

    pub fn from_i64<R: AsRef<[i64]>>(n: usize, generators: &[R]) -> Self {
        let g: Vec<IVec> = generators.iter().map(|r| crate::matrix::ivec(r.as_ref())).collect();
        Self::new(n, &g).expect("literal generators")
    }

    /// `c ∩ sub`, for any cone (lines allowed).
    pub fn of_cone(c: &Cone, sub: &Sublattice) -> Result<Self> {
        let gens = monoid_generators(c, sub)?;
        let mut m = Self::new(c.ambient(), &gens)?;
        m.saturation_cone = Some(c.clone());
        Ok(m)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn generators(&self) -> &[IVec] {
        &self.generators
    }

    pub fn saturation_cone(&self) -> Option<&Cone> {
        self.saturation_cone.as_ref()
    }

    /// The cone spanned by the generators.
    pub fn cone(&self) -> Cone {
        Cone::from_generators(self.lattice.rank, &self.generators).expect("generators")
    }

    /// The group generated by the monoid.
    pub fn group(&self) -> Sublattice {
        Sublattice::from_generators(self.lattice.rank, &self.generators).expect("generators")
    }

    /// Membership with a witness (coefficients per generator). Unlike
    /// [`monoid_membership`] this also handles generators spanning units.
    pub fn contains(&self, w: &[Int]) -> Option<IVec> {
        membership_with_units(w, &self.generators)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidMap {
    source: AffineMonoid,
    target: AffineMonoid,
    map: LatticeMap,
}

impl MonoidMap {
    pub fn new(source: AffineMonoid, target: AffineMonoid, map: LatticeMap) -> Result<Self> {
        if map.domain() != source.lattice || map.codomain() != target.lattice {
            return Err(Error::Dimension("monoid map has wrong shape".into()));
        }
        for g in &source.generators {
            if target.contains(&map.apply(g)).is_none() {
                return Err(Error::NotAMorphism(format!(
                    "generator {:?} does not map into the target monoid",
                    g.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                )));
            }
        }
        Ok(MonoidMap { source, target, map })
    }

    pub fn source(&self) -> &AffineMonoid {
        &self.source
    }

    pub fn target(&self) -> &AffineMonoid {
        &self.target
    }

    pub fn lattice_map(&self) -> &LatticeMap {
        &self.map
    }
}

/// Shrinks `(c, sub)` to `(c ∩ Span G, G)` with `G = sub ∩ Span c` of full rank
/// in the span of the cone.
fn restrict(c: &Cone, sub: &Sublattice) -> Result<(Cone, Sublattice)> {
    let n = c.ambient();
    let mut cone = c.clone();
    loop {
        let g = intersect_sublattices(sub, &cone.span_lattice())?;
        let next = cone.intersect(&Cone::linear_span(n, g.basis())?)?;
        if next == cone {
            return Ok((cone, g));
        }
        cone = next;
    }
}

fn to_coordinates(c: &Cone, g: &Sublattice) -> Cone {
    let gens: Vec<IVec> = c
        .generators()
        .iter()
        .map(|v| {
            let x = rational_coordinates(g.basis(), v).expect("cone lies in the span");
            clear_denominators(&x)
        })
        .collect();
    Cone::from_generators(g.rank(), &gens).expect("coordinates")
}

fn from_coordinates(g: &Sublattice, x: &[Int]) -> IVec {
    let mut v = vec![Int::zero(); g.ambient()];
    for (b, c) in g.basis().iter().zip(x) {
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += c * bi;
        }
    }
    v
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Lattice points `sum λ_i r_i` with `0 <= λ_i < 1` for linearly independent
/// `rays` spanning `Q^d`.
fn parallelepiped_points(rays: &[IVec]) -> Vec<IVec> {
    let d = rays.len();
    let reduce = |z: &IVec| -> IVec {
        let lambda = rational_coordinates(rays, z).expect("full rank");
        let mut p = vec![BigRational::zero(); d];
        for (l, r) in lambda.iter().zip(rays) {
            let frac = l - l.floor();
            for (pi, ri) in p.iter_mut().zip(r) {
                *pi += &frac * BigRational::from_integer(ri.clone());
            }
        }
        p.iter().map(|x| x.to_integer()).collect()
    };
    let mut seen: BTreeSet<IVec> = BTreeSet::new();
    let zero = vec![Int::zero(); d];
    seen.insert(zero.clone());
    let mut queue = vec![zero];
    while let Some(z) = queue.pop() {
        for j in 0..d {
            let mut next = z.clone();
            next[j] += 1;
            let r = reduce(&next);
            if seen.insert(r.clone()) {
                queue.push(r);
            }
        }
    }
    seen.into_iter().filter(|p| !is_zero_vec(p)).collect()
}

/// Hilbert basis of a pointed full-dimensional cone in `Z^d`.
fn hilbert_basis_coordinates(c: &Cone) -> Vec<IVec> {
    let d = c.ambient();
    if d == 0 {
        return Vec::new();
    }
    let rays = c.rays();
    let mut candidates: BTreeSet<IVec> = rays.iter().cloned().collect();
    for s in subsets(rays.len(), d) {
        let chosen: Vec<IVec> = s.iter().map(|&i| rays[i].clone()).collect();
        let m = IntMatrix::from_rows(chosen.clone(), d).expect("rays");
        if m.rank() < d {
            continue;
        }
        candidates.extend(parallelepiped_points(&chosen));
    }
    let candidates: Vec<IVec> = candidates.into_iter().collect();
    candidates
        .iter()
        .filter(|h| {
            !candidates
                .iter()
                .any(|g| g != *h && c.contains(&sub_vec(h, g)))
        })
        .cloned()
        .collect()
}

/// Minimal generators of `c ∩ sub` for a strictly convex cone, sorted.
pub fn hilbert_basis(c: &Cone, sub: &Sublattice) -> Result<Vec<IVec>> {
    if !c.is_strictly_convex() {
        return Err(Error::NotStrictlyConvex(format!("{c:?}")));
    }
    if sub.ambient() != c.ambient() {
        return Err(Error::Dimension("lattice and cone live in different spaces".into()));
    }
    let (cone, g) = restrict(c, sub)?;
    let local = to_coordinates(&cone, &g);
    let mut out: Vec<IVec> = hilbert_basis_coordinates(&local)
        .iter()
        .map(|x| from_coordinates(&g, x))
        .collect();
    out.sort();
    Ok(out)
}

/// Generators of `c ∩ sub` for an arbitrary cone: a lift of the Hilbert
/// basis of the pointed quotient together with both signs of a basis of
/// the unit group.
pub fn monoid_generators(c: &Cone, sub: &Sublattice) -> Result<Vec<IVec>> {
    if c.is_strictly_convex() {
        return hilbert_basis(c, sub);
    }
    let (cone, g) = restrict(c, sub)?;
    let local = to_coordinates(&cone, &g);
    let d = local.ambient();
    let units = Sublattice::saturated_span(d, local.lineality())?;
    let k = units.rank();
    let quotient = if k == d {
        IntMatrix::zeros(0, d)
    } else {
        IntMatrix::from_rows(integer_kernel(&IntMatrix::from_rows(units.basis().to_vec(), d)?), d)?
    };
    let m = quotient.nrows();
    let mut out: BTreeSet<IVec> = BTreeSet::new();
    if m > 0 {
        let q = LatticeMap::new(quotient.clone());
        let section = right_inverse(&q).expect("quotient by a saturated sublattice");
        let pointed = image_cone(&q, &local)?;
        for h in hilbert_basis_coordinates(&pointed) {
            let lift = section.apply(&h);
            out.insert(from_coordinates(&g, &lift));
        }
    }
    for u in units.basis() {
        let v = from_coordinates(&g, u);
        out.insert(crate::matrix::neg_vec(&v));
        out.insert(v);
    }
    Ok(out.into_iter().collect())
}

/// A functional vanishing on the lineality of `cone(gens)` and strictly
/// positive on every generator outside it.
fn grading(n: usize, gens: &[IVec]) -> (Cone, IVec) {
    let c = Cone::from_generators(n, gens).expect("generators");
    let phi = c
        .facets()
        .iter()
        .fold(vec![Int::zero(); n], |acc, f| add_vec(&acc, f));
    (c, phi)
}

struct Search<'a> {
    gens: &'a [IVec],
    values: Vec<Int>,
    units: Sublattice,
    cone: Cone,
    failed: HashSet<(usize, IVec)>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, rem: &IVec, budget: &Int, coeffs: &mut Vec<Int>) -> bool {
        if budget.is_zero() {
            return self.units.contains(rem);
        }
        if i == self.gens.len() || budget.is_negative() || !self.cone.contains(rem) {
            return false;
        }
        if self.failed.contains(&(i, rem.clone())) {
            return false;
        }
        let g = &self.gens[i];
        let v = self.values[i].clone();
        let max = budget / &v;
        let mut k = max.clone();
        loop {
            let next = sub_vec(rem, &crate::matrix::scale_vec(&k, g));
            let b = budget - &k * &v;
            if self.run(i + 1, &next, &b, coeffs) {
                coeffs[i] = k;
                return true;
            }
            if k.is_zero() {
                break;
            }
            k -= 1;
        }
        self.failed.insert((i, rem.clone()));
        false
    }
}

fn membership_with_units(w: &[Int], generators: &[IVec]) -> Option<IVec> {
    let n = w.len();
    let gens: Vec<IVec> = generators.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let (cone, phi) = grading(n, &gens);
    if !cone.contains(w) {
        return None;
    }
    let (units, rest): (Vec<usize>, Vec<usize>) =
        (0..gens.len()).partition(|&i| dot(&phi, &gens[i]).is_zero());
    let unit_vecs: Vec<IVec> = units.iter().map(|&i| gens[i].clone()).collect();
    let rest_vecs: Vec<IVec> = rest.iter().map(|&i| gens[i].clone()).collect();
    let mut search = Search {
        gens: &rest_vecs,
        values: rest_vecs.iter().map(|g| dot(&phi, g)).collect(),
        units: Sublattice::from_generators(n, &unit_vecs).ok()?,
        cone,
        failed: HashSet::new(),
    };
    let mut coeffs = vec![Int::zero(); rest_vecs.len()];
    let budget = dot(&phi, w);
    if !search.run(0, &w.to_vec(), &budget, &mut coeffs) {
        return None;
    }
    let mut witness_by_gen: BTreeMap<IVec, Int> = BTreeMap::new();
    let mut used = vec![Int::zero(); n];
    for (k, g) in coeffs.iter().zip(&rest_vecs) {
        used = add_vec(&used, &crate::matrix::scale_vec(k, g));
        *witness_by_gen.entry(g.clone()).or_default() += k;
    }
    let residue = sub_vec(w, &used);
    if !unit_vecs.is_empty() {
        let coords = unit_coefficients(&unit_vecs, &residue)?;
        for (k, g) in coords.iter().zip(&unit_vecs) {
            *witness_by_gen.entry(g.clone()).or_default() += k;
        }
    }
    Some(
        generators
            .iter()
            .map(|g| witness_by_gen.remove(g).unwrap_or_default())
            .collect(),
    )
}

/// Nonnegative integer coefficients `x` with `sum x_i u_i = v`, where the
/// `u_i` generate a group as a monoid.
fn unit_coefficients(units: &[IVec], v: &[Int]) -> Option<IVec> {
    let n = v.len();
    let m = IntMatrix::from_columns(units, n).ok()?;
    let snf = smith_normal_form(&m);
    // particular integer solution of m x = v
    let y = snf.u.mul_vec(v);
    let diag = snf.diagonal();
    let mut z = vec![Int::zero(); units.len()];
    for (i, yi) in y.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                if !(yi % d).is_zero() {
                    return None;
                }
                z[i] = yi / d;
            }
            _ => {
                if !yi.is_zero() {
                    return None;
                }
            }
        }
    }
    let mut x = snf.v.mul_vec(&z);
    let relation = positive_relation(units)?;
    let mut shift = Int::zero();
    for (xi, ci) in x.iter().zip(&relation) {
        if xi.is_negative() {
            let need = (-xi + ci - Int::one()) / ci;
            if need > shift {
                shift = need;
            }
        }
    }
    for (xi, ci) in x.iter_mut().zip(&relation) {
        *xi += &shift * ci;
    }
    Some(x)
}

/// Strictly positive integer relation `sum c_i u_i = 0`.
fn positive_relation(units: &[IVec]) -> Option<IVec> {
    let k = units.len();
    let n = units[0].len();
    let m = IntMatrix::from_columns(units, n).ok()?;
    let relations = Cone::from_inequalities(k, &IntMatrix::identity(k).rows_vec(), &m.rows_vec()).ok()?;
    let c = relations.interior_sample();
    c.iter().all(Signed::is_positive).then_some(c)
}

/// Nonnegative-integer representation of `w` by the generators of a monoid
/// contained in a strictly convex cone.
pub fn monoid_membership(w: &[Int], m: &AffineMonoid) -> Result<Option<IVec>> {
    let n = m.lattice.rank;
    if w.len() != n {
        return Err(Error::Dimension("vector not in the monoid's lattice".into()));
    }
    let gens: Vec<IVec> = m.generators.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    let (cone, _) = grading(n, &gens);
    if !cone.is_strictly_convex() {
        return Err(Error::NoPositiveFunctional);
    }
    Ok(membership_with_units(w, &m.generators))
}

/// Whether `p(N_sub ∩ sigma) = Q_sub ∩ kappa`.
pub fn image_monoid_equals_cone_monoid(
    p: &LatticeMap,
    sigma: &Cone,
    kappa: &Cone,
    n_sub: &Sublattice,
    q_sub: &Sublattice,
) -> Result<bool> {
    if image_cone(p, sigma)? != *kappa {
        return Err(Error::Precondition(format!(
            "{sigma:?} does not map onto {kappa:?}"
        )));
    }
    let images: Vec<IVec> = hilbert_basis(sigma, n_sub)?
        .iter()
        .map(|h| p.apply(h))
        .filter(|v| !is_zero_vec(v))
        .collect();
    if images.iter().any(|v| !q_sub.contains(v)) {
        return Ok(false);
    }
    let image = AffineMonoid::new(kappa.ambient(), &images)?;
    for h in hilbert_basis(kappa, q_sub)? {
        if monoid_membership(&h, &image)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Span(kappa) ∩ ⋂ p(N_σ ∩ Span σ)`.
pub fn q_kappa_lattice(
    p: &LatticeMap,
    kappa: &Cone,
    contributing: &[(Cone, Sublattice)],
) -> Result<Sublattice> {
    if contributing.is_empty() {
        return Err(Error::Precondition("no contributing cones".into()));
    }
    let mut q = kappa.span_lattice();
    for (sigma, n_sigma) in contributing {
        let local = intersect_sublattices(n_sigma, &sigma.span_lattice())?;
        q = intersect_sublattices(&q, &local.image(p)?)?;
    }
    Ok(q)
}

/// The pushout of two monoid maps out of a common source, as a submonoid of
/// the (torsion-free) pushout lattice.
pub fn pushout_monoid(u: &MonoidMap, v: &MonoidMap) -> Result<(Pushout, AffineMonoid)> {
    if u.source != v.source {
        return Err(Error::Dimension("pushout maps must share their source".into()));
    }
    let po = pushout_lattice(&u.map, &v.map)?;
    let mut gens: Vec<IVec> = u.target.generators.iter().map(|g| po.inc_m.apply(g)).collect();
    gens.extend(v.target.generators.iter().map(|g| po.inc_l.apply(g)));
    let m = AffineMonoid::new(po.lattice.rank, &gens)?;
    Ok((po, m))
}

/// Two elements of `M ⊕ L` with the same image in the pushout group that the
/// pushout congruence does not identify, i.e. a witness that the monoid
/// pushout is not integral. Elements up to `height` are compared; paths of the
/// congruence may pass through elements up to `box_height`.
pub fn pushout_integrality_witness(
    u: &MonoidMap,
    v: &MonoidMap,
    height: usize,
    box_height: usize,
) -> Result<Option<(IVec, IVec)>> {
    if u.source != v.source {
        return Err(Error::Dimension("pushout maps must share their source".into()));
    }
    let (m, l) = (u.target.lattice.rank, v.target.lattice.rank);
    let relations = Sublattice::from_generators(
        m + l,
        &u.source
            .group()
            .basis()
            .iter()
            .map(|d| {
                let mut r = u.map.apply(d);
                r.extend(crate::matrix::neg_vec(&v.map.apply(d)));
                r
            })
            .collect::<Vec<_>>(),
    )?;
    let em = elements_up_to_height(&u.target, box_height);
    let el = elements_up_to_height(&v.target, box_height);
    let small_m: HashSet<IVec> = elements_up_to_height(&u.target, height).into_iter().collect();
    let small_l: HashSet<IVec> = elements_up_to_height(&v.target, height).into_iter().collect();
    let index_m: BTreeMap<IVec, usize> = em.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let index_l: BTreeMap<IVec, usize> = el.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let node = |i: usize, j: usize| i * el.len() + j;
    let mut parent: Vec<usize> = (0..em.len() * el.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let moves: Vec<(IVec, IVec)> = u
        .source
        .generators
        .iter()
        .map(|g| (u.map.apply(g), v.map.apply(g)))
        .collect();
    for (i, x) in em.iter().enumerate() {
        for (du, dv) in &moves {
            let Some(&i2) = index_m.get(&sub_vec(x, du)) else {
                continue;
            };
            for (j, y) in el.iter().enumerate() {
                if let Some(&j2) = index_l.get(&add_vec(y, dv)) {
                    let (a, b) = (find(&mut parent, node(i, j)), find(&mut parent, node(i2, j2)));
                    parent[a] = b;
                }
            }
        }
    }
    let mut points: Vec<(IVec, usize)> = Vec::new();
    for (i, x) in em.iter().enumerate().filter(|(_, x)| small_m.contains(*x)) {
        for (j, y) in el.iter().enumerate().filter(|(_, y)| small_l.contains(*y)) {
            let mut z = x.clone();
            z.extend(y.iter().cloned());
            points.push((z, node(i, j)));
        }
    }
    for (a, (za, na)) in points.iter().enumerate() {
        for (zb, nb) in &points[a + 1..] {
            if relations.contains(&sub_vec(za, zb)) && find(&mut parent, *na) != find(&mut parent, *nb) {
                return Ok(Some((za.clone(), zb.clone())));
            }
        }
    }
    Ok(None)
}

/// `M = cone(M) ∩ group(M)`.
pub fn is_saturated(m: &AffineMonoid) -> Result<bool> {
    let saturation = monoid_generators(&m.cone(), &m.group())?;
    Ok(saturation.iter().all(|h| m.contains(h).is_some()))
}

/// `c^∨ ∩ L^∨` with `L = Z^n`.
pub fn dual_monoid(c: &Cone, lattice: Lattice) -> Result<AffineMonoid> {
    if lattice.rank != c.ambient() {
        return Err(Error::Dimension("cone is not in the given lattice".into()));
    }
    AffineMonoid::of_cone(&c.dual_cone(), &Sublattice::full(lattice.rank))
}

/// A failure of the equational integrality criterion: `p1 + u(a1) = p2 + u(a2)`
/// with no `r1, r2, w` splitting it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatoCounterexample {
    pub p1: IVec,
    pub p2: IVec,
    pub a1: IVec,
    pub a2: IVec,
}

/// All elements expressible as a sum of at most `h` generators.
pub fn elements_up_to_height(m: &AffineMonoid, h: usize) -> Vec<IVec> {
    let n = m.lattice.rank;
    let mut all: BTreeSet<IVec> = BTreeSet::new();
    let mut frontier: BTreeSet<IVec> = BTreeSet::new();
    frontier.insert(vec![Int::zero(); n]);
    all.extend(frontier.iter().cloned());
    for _ in 0..h {
        let mut next = BTreeSet::new();
        for f in &frontier {
            for g in &m.generators {
                let s = add_vec(f, g);
                if !all.contains(&s) {
                    next.insert(s);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.into_iter().collect()
}

/// Bounded check of Kato's equational criterion for `u: P -> M`. Heights are
/// generator word lengths, so monoids with units are handled; the existential
/// search for `r1` runs up to twice the bound.
pub fn kato_integral(u: &MonoidMap, height_bound: usize) -> Result<Option<KatoCounterexample>> {
    if !u.map.is_injective() {
        return Err(Error::NotInjective);
    }
    let target = elements_up_to_height(&u.target, height_bound);
    let target_set: HashSet<IVec> = target.iter().cloned().collect();
    let source = elements_up_to_height(&u.source, height_bound);
    let witnesses = elements_up_to_height(&u.source, 2 * height_bound);
    let mut differences: BTreeMap<IVec, (IVec, IVec)> = BTreeMap::new();
    for a1 in &source {
        for a2 in &source {
            if a1 != a2 {
                differences
                    .entry(sub_vec(a1, a2))
                    .or_insert_with(|| (a1.clone(), a2.clone()));
            }
        }
    }
    let in_target = |v: &IVec| target_set.contains(v) || u.target.contains(v).is_some();
    let in_source = |v: &IVec| u.source.contains(v).is_some();
    for p1 in &target {
        for (d, (a1, a2)) in &differences {
            let p2 = add_vec(p1, &u.map.apply(d));
            if !target_set.contains(&p2) {
                continue;
            }
            let ok = witnesses.iter().any(|r1| {
                in_target(&sub_vec(p1, &u.map.apply(r1))) && in_source(&add_vec(r1, d))
            });
            if !ok {
                return Ok(Some(KatoCounterexample {
                    p1: p1.clone(),
                    p2,
                    a1: a1.clone(),
                    a2: a2.clone(),
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ivec;

    fn vs(rows: &[&[i64]]) -> Vec<IVec> {
        rows.iter().map(|r| ivec(r)).collect()
    }

    #[test]
    fn hilbert_bases() {
        let full = Sublattice::full(2);
        assert_eq!(
            hilbert_basis(&Cone::from_i64(2, &[[1, 0], [0, 1]]), &full).unwrap(),
            vs(&[&[0, 1], &[1, 0]])
        );
        assert_eq!(
            hilbert_basis(&Cone::from_i64(2, &[[1, 0], [1, 2]]), &full).unwrap(),
            vs(&[&[1, 0], &[1, 1], &[1, 2]])
        );
        let even = Sublattice::from_i64(2, &[[1, 1], [2, 0]]);
        assert_eq!(
            hilbert_basis(&Cone::from_i64(2, &[[1, 1]]), &even).unwrap(),
            vs(&[&[1, 1]])
        );
        assert_eq!(
            hilbert_basis(&Cone::from_i64(2, &[[1, 0]]), &even).unwrap(),
            vs(&[&[2, 0]])
        );
        assert!(hilbert_basis(&Cone::full(1), &Sublattice::full(1)).is_err());
    }

    #[test]
    fn membership() {
        let m = AffineMonoid::from_i64(1, &[[2]]);
        assert_eq!(monoid_membership(&ivec(&[3]), &m).unwrap(), None);
        let m23 = AffineMonoid::from_i64(1, &[[2], [3]]);
        assert_eq!(
            monoid_membership(&ivec(&[5]), &m23).unwrap(),
            Some(ivec(&[1, 1]))
        );
        assert_eq!(monoid_membership(&ivec(&[1]), &m23).unwrap(), None);
        let line = AffineMonoid::from_i64(1, &[[1], [-1]]);
        assert_eq!(
            monoid_membership(&ivec(&[1]), &line),
            Err(Error::NoPositiveFunctional)
        );
        let w = line.contains(&ivec(&[-3])).unwrap();
        assert_eq!(&w[1] - &w[0], Int::from(-3));
        assert!(w.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn image_monoids() {
        let p = LatticeMap::from_i64(&[[1, 1]], 2);
        let kappa = Cone::from_i64(1, &[[1]]);
        let (n, q) = (Sublattice::full(2), Sublattice::full(1));
        let s1 = Cone::from_i64(2, &[[1, 0], [1, 1]]);
        assert!(image_monoid_equals_cone_monoid(&p, &s1, &kappa, &n, &q).unwrap());
        let diag = Cone::from_i64(2, &[[1, 1]]);
        assert!(!image_monoid_equals_cone_monoid(&p, &diag, &kappa, &n, &q).unwrap());
        let double = LatticeMap::from_i64(&[[2]], 1);
        assert!(!image_monoid_equals_cone_monoid(&double, &kappa, &kappa, &q, &q).unwrap());
    }

    #[test]
    fn q_kappa_examples() {
        let p = LatticeMap::from_i64(&[[1, 1]], 2);
        let kappa = Cone::from_i64(1, &[[1]]);
        let full = Sublattice::full(2);
        let contributing: Vec<(Cone, Sublattice)> = [
            Cone::from_i64(2, &[[1, 0], [1, 1]]),
            Cone::from_i64(2, &[[1, 1], [0, 1]]),
            Cone::from_i64(2, &[[1, 0]]),
            Cone::from_i64(2, &[[0, 1]]),
            Cone::from_i64(2, &[[1, 1]]),
        ]
        .into_iter()
        .map(|c| (c, full.clone()))
        .collect();
        assert_eq!(
            q_kappa_lattice(&p, &kappa, &contributing).unwrap(),
            Sublattice::from_i64(1, &[[2]])
        );
        let double = LatticeMap::from_i64(&[[2]], 1);
        assert_eq!(
            q_kappa_lattice(&double, &kappa, &[(kappa.clone(), Sublattice::full(1))]).unwrap(),
            Sublattice::from_i64(1, &[[2]])
        );
        assert!(q_kappa_lattice(&double, &kappa, &[]).is_err());
    }

    #[test]
    fn pushouts_and_saturation() {
        let n = AffineMonoid::of_cone(&Cone::from_i64(1, &[[1]]), &Sublattice::full(1)).unwrap();
        let u = MonoidMap::new(n.clone(), n.clone(), LatticeMap::from_i64(&[[2]], 1)).unwrap();
        let v = MonoidMap::new(n.clone(), n.clone(), LatticeMap::from_i64(&[[3]], 1)).unwrap();
        let (po, m) = pushout_monoid(&u, &v).unwrap();
        assert_eq!(po.lattice.rank, 1);
        assert_eq!(m.generators(), &vs(&[&[2], &[3]])[..]);
        assert!(!is_saturated(&m).unwrap());
        let id = MonoidMap::new(n.clone(), n.clone(), LatticeMap::identity(1)).unwrap();
        let (_, m) = pushout_monoid(&id, &id).unwrap();
        assert!(is_saturated(&m).unwrap());
    }

    #[test]
    fn dual_monoids() {
        let d = dual_monoid(&Cone::from_i64(2, &[[1, 0], [0, 1]]), Lattice::new(2)).unwrap();
        assert_eq!(d.generators(), &vs(&[&[0, 1], &[1, 0]])[..]);
        let d = dual_monoid(&Cone::from_i64(2, &[[1, 1]]), Lattice::new(2)).unwrap();
        assert_eq!(d.generators().len(), 3);
        for w in vs(&[&[1, 0], &[0, 1], &[-1, 1], &[1, -1], &[5, -3]]) {
            assert!(d.contains(&w).is_some());
        }
        assert!(d.contains(&ivec(&[-1, 0])).is_none());
        let d = dual_monoid(&Cone::zero(1), Lattice::new(1)).unwrap();
        assert_eq!(d.generators(), &vs(&[&[-1], &[1]])[..]);
    }

    #[test]
    fn kato_examples() {
        let n = AffineMonoid::of_cone(&Cone::from_i64(1, &[[1]]), &Sublattice::full(1)).unwrap();
        let double = MonoidMap::new(n.clone(), n.clone(), LatticeMap::from_i64(&[[2]], 1)).unwrap();
        assert_eq!(kato_integral(&double, 10).unwrap(), None);
        let q = dual_monoid(&Cone::from_i64(2, &[[1, 0], [0, 1]]), Lattice::new(2)).unwrap();
        let chart = LatticeMap::from_i64(&[[1, 0], [1, 1]], 2);
        let dual = MonoidMap::new(q.clone(), q.clone(), crate::lattice::dual_map(&chart)).unwrap();
        assert!(kato_integral(&dual, 4).unwrap().is_some());
        let id = MonoidMap::new(q.clone(), q.clone(), LatticeMap::identity(2)).unwrap();
        assert_eq!(kato_integral(&id, 4).unwrap(), None);
        let sum = LatticeMap::from_i64(&[[1, 1]], 2);
        let bad = MonoidMap::new(q.clone(), n.clone(), sum);
        assert!(kato_integral(&bad.unwrap(), 2).is_err());
    }
}
