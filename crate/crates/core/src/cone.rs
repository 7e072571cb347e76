//! Rational polyhedral cones in `Q^n` with both descriptions cached.
//!
//! A cone is stored canonically: its lineality space by a saturated Hermite
//! basis, its rays as primitive vectors normalised modulo the lineality space,
//! its facet normals (inward, `f.x >= 0`) normalised modulo the span equations.
//! Two cones are equal as sets iff they are equal as values.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dd::{h_to_v, Generators};
use crate::error::{Error, Result};
use crate::lattice::{saturate, Lattice, LatticeMap, Sublattice};
use crate::matrix::{
    add_vec, dot, ivec, neg_vec, rational_rref, reduce_modulo_span, IVec, Int, IntMatrix,
};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    lattice: Lattice,
    rays: Vec<IVec>,
    lineality: Vec<IVec>,
    facets: Vec<IVec>,
    equations: Vec<IVec>,
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |vs: &[IVec]| {
            vs.iter()
                .map(|v| {
                    let e: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    format!("({})", e.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "cone[{}]", show(&self.rays))?;
        if !self.lineality.is_empty() {
            write!(f, "+lin[{}]", show(&self.lineality))?;
        }
        Ok(())
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by dimension, then rays, then lineality.
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim(), &self.rays, &self.lineality, self.lattice)
            .cmp(&(other.dim(), &other.rays, &other.lineality, other.lattice))
    }
}

fn canonical_lineality(n: usize, vectors: &[IVec]) -> Vec<IVec> {
    let s = Sublattice::from_generators(n, vectors).expect("vectors in ambient space");
    saturate(&s).basis().to_vec()
}

fn canonical_modulo(n: usize, vectors: &[IVec], modulo: &[IVec]) -> Vec<IVec> {
    let rref = rational_rref(modulo, n);
    let set: BTreeSet<IVec> = vectors
        .iter()
        .map(|v| reduce_modulo_span(v, &rref))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    set.into_iter().collect()
}

fn canonical(n: usize, g: &Generators) -> (Vec<IVec>, Vec<IVec>) {
    let lineality = canonical_lineality(n, &g.lineality);
    let rays = canonical_modulo(n, &g.rays, &lineality);
    (rays, lineality)
}

impl Cone {
    /// The cone generated by `generators` (redundancy and lines allowed).
    pub fn from_generators(n: usize, generators: &[IVec]) -> Result<Cone> {
        check_lengths(n, generators)?;
        let (facets, equations) = canonical(n, &h_to_v(n, generators, &[]));
        let (rays, lineality) = canonical(n, &h_to_v(n, &facets, &equations));
        Ok(Cone {
            lattice: Lattice::new(n),
            rays,
            lineality,
            facets,
            equations,
        })
    }

    /// `{x : a.x >= 0, e.x = 0}`.
    pub fn from_inequalities(n: usize, inequalities: &[IVec], equations: &[IVec]) -> Result<Cone> {
        check_lengths(n, inequalities)?;
        check_lengths(n, equations)?;
        let g = h_to_v(n, inequalities, equations);
        let mut gens = g.rays;
        for l in &g.lineality {
            gens.push(neg_vec(l));
            gens.push(l.clone());
        }
        Self::from_generators(n, &gens)
    }

    pub fn from_i64<R: AsRef<[i64]>>(n: usize, generators: &[R]) -> Cone {
        let g: Vec<IVec> = generators.iter().map(|r| ivec(r.as_ref())).collect();
        Self::from_generators(n, &g).expect("literal generators")
    }

    pub fn zero(n: usize) -> Cone {
        Self::from_generators(n, &[]).expect("zero cone")
    }

    pub fn full(n: usize) -> Cone {
        Self::from_inequalities(n, &[], &[]).expect("full space")
    }

    /// The linear subspace spanned by `vectors`.
    pub fn linear_span(n: usize, vectors: &[IVec]) -> Result<Cone> {
        let mut gens = vectors.to_vec();
        gens.extend(vectors.iter().map(|v| neg_vec(v)));
        Self::from_generators(n, &gens)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn ambient(&self) -> usize {
        self.lattice.rank
    }

    /// Primitive extreme rays (modulo the lineality space).
    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IVec] {
        &self.lineality
    }

    /// Inward facet normals.
    pub fn facets(&self) -> &[IVec] {
        &self.facets
    }

    /// Integer equations cutting out the linear span.
    pub fn span_equations(&self) -> &[IVec] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.ambient() - self.equations.len()
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Rays together with both orientations of the lineality basis.
    pub fn generators(&self) -> Vec<IVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg_vec(l));
        }
        g
    }

    /// `N ∩ Span(self)` as a saturated sublattice.
    pub fn span_lattice(&self) -> Sublattice {
        let n = self.ambient();
        let mut v = self.rays.clone();
        v.extend(self.lineality.iter().cloned());
        Sublattice::saturated_span(n, &v).expect("generators in ambient")
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient()
            && self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| !dot(f, v).is_negative())
    }

    pub fn relint_contains(&self, v: &[Int]) -> bool {
        v.len() == self.ambient()
            && self.equations.iter().all(|e| dot(e, v).is_zero())
            && self.facets.iter().all(|f| dot(f, v).is_positive())
    }

    pub fn contains_rational(&self, v: &[BigRational]) -> bool {
        self.contains(&clear_denominators(v))
    }

    pub fn relint_contains_rational(&self, v: &[BigRational]) -> bool {
        self.relint_contains(&clear_denominators(v))
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.ambient() == self.ambient() && other.generators().iter().all(|g| self.contains(g))
    }

    /// Sum of the ray generators; lies in the relative interior.
    pub fn interior_sample(&self) -> IVec {
        self.rays
            .iter()
            .fold(vec![Int::zero(); self.ambient()], |acc, r| add_vec(&acc, r))
    }

    pub fn dual_cone(&self) -> Cone {
        Cone {
            lattice: self.lattice,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    /// Face cut out by the functionals in `tight` (each must be >= 0 on the cone).
    fn face_cut(&self, tight: &[IVec]) -> Cone {
        let mut gens: Vec<IVec> = self
            .rays
            .iter()
            .filter(|r| tight.iter().all(|t| dot(t, r).is_zero()))
            .cloned()
            .collect();
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(neg_vec(l));
        }
        Cone::from_generators(self.ambient(), &gens).expect("face of cone")
    }

    /// All faces, sorted by dimension then rays.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<Cone> = BTreeSet::new();
        let mut queue = vec![self.clone()];
        seen.insert(self.clone());
        while let Some(c) = queue.pop() {
            for f in &c.facets {
                let g = c.face_cut(std::slice::from_ref(f));
                if seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn proper_faces(&self) -> Vec<Cone> {
        self.faces().into_iter().filter(|f| f != self).collect()
    }

    pub fn is_face_of(&self, c: &Cone) -> bool {
        if !c.contains_cone(self) {
            return false;
        }
        let gens = self.generators();
        let tight: Vec<IVec> = c
            .facets
            .iter()
            .filter(|f| gens.iter().all(|g| dot(f, g).is_zero()))
            .cloned()
            .collect();
        c.face_cut(&tight) == *self
    }

    /// The smallest face of `self` containing `v`, if `v` lies in the cone.
    pub fn face_containing(&self, v: &[Int]) -> Option<Cone> {
        if !self.contains(v) {
            return None;
        }
        let tight: Vec<IVec> = self
            .facets
            .iter()
            .filter(|f| dot(f, v).is_zero())
            .cloned()
            .collect();
        Some(self.face_cut(&tight))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        same_space(self, other)?;
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(self.ambient(), &ineqs, &eqs)
    }

    /// `(self ∩ {h <= 0}, self ∩ {h >= 0})`.
    pub fn split_by_hyperplane(&self, h: &[Int]) -> Result<(Cone, Cone)> {
        if h.len() != self.ambient() {
            return Err(Error::Dimension("functional has wrong length".into()));
        }
        let half = |g: IVec| {
            let mut ineqs = self.facets.clone();
            ineqs.push(g);
            Cone::from_inequalities(self.ambient(), &ineqs, &self.equations)
        };
        Ok((half(neg_vec(h))?, half(h.to_vec())?))
    }

    pub fn image(&self, f: &LatticeMap) -> Result<Cone> {
        image_cone(f, self)
    }

    pub fn preimage(&self, f: &LatticeMap) -> Result<Cone> {
        preimage_cone(f, self)
    }
}

fn check_lengths(n: usize, vs: &[IVec]) -> Result<()> {
    match vs.iter().find(|v| v.len() != n) {
        Some(v) => Err(Error::Dimension(format!(
            "vector of length {} in a space of dimension {n}",
            v.len()
        ))),
        None => Ok(()),
    }
}

fn same_space(a: &Cone, b: &Cone) -> Result<()> {
    if a.ambient() != b.ambient() {
        return Err(Error::Dimension(format!(
            "cones in Q^{} and Q^{}",
            a.ambient(),
            b.ambient()
        )));
    }
    Ok(())
}

/// Smallest positive integer multiple of a rational vector.
pub fn clear_denominators(v: &[BigRational]) -> IVec {
    let l = v
        .iter()
        .fold(Int::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
}

pub fn double_description(rays: &[IVec], n: usize) -> Result<(Vec<IVec>, Vec<IVec>)> {
    let c = Cone::from_generators(n, rays)?;
    Ok((c.facets, c.equations))
}

pub fn dual_cone(c: &Cone) -> Cone {
    c.dual_cone()
}

pub fn faces(c: &Cone) -> Vec<Cone> {
    c.faces()
}

pub fn is_face(f: &Cone, c: &Cone) -> bool {
    f.is_face_of(c)
}

pub fn intersect(a: &Cone, b: &Cone) -> Result<Cone> {
    a.intersect(b)
}

pub fn split_by_hyperplane(c: &Cone, h: &[Int]) -> Result<(Cone, Cone)> {
    c.split_by_hyperplane(h)
}

pub fn interior_sample(c: &Cone) -> IVec {
    c.interior_sample()
}

pub fn image_cone(f: &LatticeMap, c: &Cone) -> Result<Cone> {
    if f.domain().rank != c.ambient() {
        return Err(Error::Dimension("map domain differs from cone space".into()));
    }
    let gens: Vec<IVec> = c.generators().iter().map(|g| f.apply(g)).collect();
    Cone::from_generators(f.codomain().rank, &gens)
}

/// `f^{-1}(c)`.
pub fn preimage_cone(f: &LatticeMap, c: &Cone) -> Result<Cone> {
    if f.codomain().rank != c.ambient() {
        return Err(Error::Dimension("map codomain differs from cone space".into()));
    }
    let t = f.matrix().transpose();
    let pull = |vs: &[IVec]| vs.iter().map(|v| t.mul_vec(v)).collect::<Vec<_>>();
    Cone::from_inequalities(f.domain().rank, &pull(&c.facets), &pull(&c.equations))
}

/// Matrix with the rays as columns.
pub fn ray_matrix(c: &Cone) -> IntMatrix {
    IntMatrix::from_columns(c.rays(), c.ambient()).expect("rays")
}
