//! Free abelian groups of finite rank and the maps between them.
//!
//! A lattice of rank `r` is identified with `Z^r`; a [`LatticeMap`] is an
//! integer matrix of shape `codomain.rank x domain.rank`. Sublattices are kept
//! in row-style Hermite normal form, so structural equality is lattice
//! equality.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    hermite_rows, integer_kernel, is_zero_vec, smith_normal_form, solve_in_lattice, IVec, Int,
    IntMatrix,
};

pub use crate::matrix::SnfDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lattice {
    pub rank: usize,
}

impl Lattice {
    pub fn new(rank: usize) -> Self {
        Lattice { rank }
    }
}

/// Homomorphism `Z^domain -> Z^codomain`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    domain: Lattice,
    codomain: Lattice,
    matrix: IntMatrix,
}

impl fmt::Debug for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LatticeMap(Z^{} -> Z^{}, {:?})",
            self.domain.rank, self.codomain.rank, self.matrix
        )
    }
}

impl LatticeMap {
    pub fn new(matrix: IntMatrix) -> Self {
        LatticeMap {
            domain: Lattice::new(matrix.ncols()),
            codomain: Lattice::new(matrix.nrows()),
            matrix,
        }
    }

    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R], domain_rank: usize) -> Self {
        Self::new(IntMatrix::from_i64(rows, domain_rank))
    }

    pub fn identity(rank: usize) -> Self {
        Self::new(IntMatrix::identity(rank))
    }

    pub fn zero(domain_rank: usize, codomain_rank: usize) -> Self {
        Self::new(IntMatrix::zeros(codomain_rank, domain_rank))
    }

    pub fn domain(&self) -> Lattice {
        self.domain
    }

    pub fn codomain(&self) -> Lattice {
        self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Int]) -> IVec {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LatticeMap) -> Result<LatticeMap> {
        if inner.codomain != self.domain {
            return Err(Error::Dimension(format!(
                "cannot compose Z^{} -> Z^{} after Z^{} -> Z^{}",
                self.domain.rank, self.codomain.rank, inner.domain.rank, inner.codomain.rank
            )));
        }
        Ok(Self::new(self.matrix.mul(&inner.matrix)))
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn is_injective(&self) -> bool {
        kernel_lattice(self).rank() == 0
    }

    /// Injective with finite cokernel.
    pub fn is_finite_index_injection(&self) -> bool {
        self.domain == self.codomain && !self.matrix.determinant().is_zero()
    }

    /// Index of the image, `|det|`, for square nonsingular maps.
    pub fn finite_index(&self) -> Option<Int> {
        if self.domain != self.codomain {
            return None;
        }
        let d = self.matrix.determinant().abs();
        (!d.is_zero()).then_some(d)
    }
}

/// Sublattice of `Z^ambient`, stored by its Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<IVec>,
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|b| {
                let e: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("({})", e.join(","))
            })
            .collect();
        write!(f, "<{}> in Z^{}", rows.join(", "), self.ambient)
    }
}

impl Sublattice {
    /// Lattice generated by arbitrary (possibly dependent) vectors.
    pub fn from_generators(ambient: usize, generators: &[IVec]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != ambient) {
            return Err(Error::Dimension(format!(
                "generator of length {} in Z^{ambient}",
                g.len()
            )));
        }
        Ok(Sublattice {
            ambient,
            basis: hermite_rows(generators, ambient),
        })
    }

    pub fn from_i64<R: AsRef<[i64]>>(ambient: usize, generators: &[R]) -> Self {
        let g: Vec<IVec> = generators
            .iter()
            .map(|r| crate::matrix::ivec(r.as_ref()))
            .collect();
        Self::from_generators(ambient, &g).expect("literal generators")
    }

    pub fn full(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: IntMatrix::identity(ambient).rows_vec(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice {
            ambient,
            basis: Vec::new(),
        }
    }

    /// `Z^ambient ∩ span(vectors)`.
    pub fn saturated_span(ambient: usize, vectors: &[IVec]) -> Result<Self> {
        Ok(saturate(&Self::from_generators(ambient, vectors)?))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.ambient)
    }

    /// Integer coordinates of `v` in the Hermite basis.
    pub fn coordinates(&self, v: &[Int]) -> Option<IVec> {
        if v.len() != self.ambient {
            return None;
        }
        solve_in_lattice(&self.basis, v)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, outer: &Sublattice) -> bool {
        self.ambient == outer.ambient && self.basis.iter().all(|b| outer.contains(b))
    }

    /// Image under a lattice map.
    pub fn image(&self, f: &LatticeMap) -> Result<Sublattice> {
        if f.domain().rank != self.ambient {
            return Err(Error::Dimension("map domain differs from ambient".into()));
        }
        let gens: Vec<IVec> = self.basis.iter().map(|b| f.apply(b)).collect();
        Self::from_generators(f.codomain().rank, &gens)
    }

    /// Matrix with the basis vectors as columns.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.basis, self.ambient).expect("basis is rectangular")
    }
}

pub fn smith_decomposition(a: &IntMatrix) -> SnfDecomposition {
    smith_normal_form(a)
}

pub fn kernel_lattice(f: &LatticeMap) -> Sublattice {
    Sublattice {
        ambient: f.domain().rank,
        basis: integer_kernel(f.matrix()),
    }
}

pub fn image_lattice(f: &LatticeMap) -> Sublattice {
    Sublattice::from_generators(f.codomain().rank, &f.matrix().columns_vec())
        .expect("columns have codomain length")
}

/// `(Q-span of s) ∩ Z^ambient`.
pub fn saturate(s: &Sublattice) -> Sublattice {
    let n = s.ambient;
    if s.rank() == 0 {
        return Sublattice::zero(n);
    }
    let b = IntMatrix::from_rows(s.basis.clone(), n).expect("basis rows");
    let equations = integer_kernel(&b);
    if equations.is_empty() {
        return Sublattice::full(n);
    }
    let e = IntMatrix::from_rows(equations, n).expect("equation rows");
    Sublattice {
        ambient: n,
        basis: integer_kernel(&e),
    }
}

/// Integer equations (as rows) cutting out the rational span of `s`.
pub fn span_equations(s: &Sublattice) -> Vec<IVec> {
    if s.rank() == 0 {
        return IntMatrix::identity(s.ambient).rows_vec();
    }
    let b = IntMatrix::from_rows(s.basis.clone(), s.ambient).expect("basis rows");
    integer_kernel(&b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(Int),
    Infinite,
}

impl LatticeIndex {
    pub fn is_finite(&self) -> bool {
        matches!(self, LatticeIndex::Finite(_))
    }
}

/// `|outer / inner|`, or `Infinite` on a rank drop.
pub fn lattice_index(inner: &Sublattice, outer: &Sublattice) -> Result<LatticeIndex> {
    if inner.ambient != outer.ambient {
        return Err(Error::Dimension("sublattices live in different lattices".into()));
    }
    let coords: Option<Vec<IVec>> = inner.basis.iter().map(|b| outer.coordinates(b)).collect();
    let Some(coords) = coords else {
        return Err(Error::NotNested);
    };
    if inner.rank() != outer.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    let k = inner.rank();
    let m = IntMatrix::from_rows(coords, k)?;
    Ok(LatticeIndex::Finite(m.determinant().abs()))
}

/// The lattice `{(n, l) : p(n) = i(l)}` with its two projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProduct {
    pub lattice: Lattice,
    /// Basis of the fiber product inside `N ⊕ L`.
    pub basis: Vec<IVec>,
    pub proj_n: LatticeMap,
    pub proj_l: LatticeMap,
}

impl FiberProduct {
    /// The inclusion into `N ⊕ L`.
    pub fn inclusion(&self) -> LatticeMap {
        let n = self.proj_n.codomain().rank + self.proj_l.codomain().rank;
        LatticeMap::new(IntMatrix::from_columns(&self.basis, n).expect("basis"))
    }
}

pub fn fiber_product_lattice(p: &LatticeMap, i: &LatticeMap) -> Result<FiberProduct> {
    if p.codomain() != i.codomain() {
        return Err(Error::Dimension("fiber product maps have different codomains".into()));
    }
    let (n, l) = (p.domain().rank, i.domain().rank);
    let relation = p.matrix().hstack(&i.matrix().neg());
    let basis = integer_kernel(&relation);
    let k = basis.len();
    let proj = |start: usize, len: usize| {
        let cols: Vec<IVec> = basis.iter().map(|b| b[start..start + len].to_vec()).collect();
        LatticeMap::new(if k == 0 {
            IntMatrix::zeros(len, 0)
        } else {
            IntMatrix::from_columns(&cols, len).expect("projection")
        })
    };
    Ok(FiberProduct {
        lattice: Lattice::new(k),
        proj_n: proj(0, n),
        proj_l: proj(n, l),
        basis,
    })
}

/// `(M ⊕ L) / <(u(x), -v(x))>` with torsion removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub lattice: Lattice,
    pub inc_m: LatticeMap,
    pub inc_l: LatticeMap,
    /// Order of the torsion subgroup that was discarded (1 if none).
    pub torsion_order: Int,
}

impl Pushout {
    /// The quotient map `M ⊕ L -> pushout`.
    pub fn quotient(&self) -> LatticeMap {
        LatticeMap::new(self.inc_m.matrix().hstack(self.inc_l.matrix()))
    }
}

pub fn pushout_lattice(u: &LatticeMap, v: &LatticeMap) -> Result<Pushout> {
    if u.domain() != v.domain() {
        return Err(Error::Dimension("pushout maps have different domains".into()));
    }
    let (m, l) = (u.codomain().rank, v.codomain().rank);
    let relations = u.matrix().vstack(&v.matrix().neg());
    // Functionals vanishing on the relations give the torsion-free quotient.
    let annihilator = integer_kernel(&relations.transpose());
    let k = annihilator.len();
    let quotient = if k == 0 {
        IntMatrix::zeros(0, m + l)
    } else {
        IntMatrix::from_rows(annihilator, m + l)?
    };
    let torsion_order = smith_normal_form(&relations)
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_zero())
        .fold(Int::one(), |acc, d| acc * d);
    Ok(Pushout {
        lattice: Lattice::new(k),
        inc_m: LatticeMap::new(quotient.columns_range(0, m)),
        inc_l: LatticeMap::new(quotient.columns_range(m, m + l)),
        torsion_order,
    })
}

pub fn dual_map(f: &LatticeMap) -> LatticeMap {
    LatticeMap::new(f.matrix().transpose())
}

pub fn intersect_sublattices(a: &Sublattice, b: &Sublattice) -> Result<Sublattice> {
    if a.ambient != b.ambient {
        return Err(Error::Dimension("intersecting sublattices of different lattices".into()));
    }
    let n = a.ambient;
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(Sublattice::zero(n));
    }
    let system = a.basis_matrix().hstack(&b.basis_matrix().neg());
    let kernel = integer_kernel(&system);
    let gens: Vec<IVec> = kernel
        .iter()
        .map(|x| a.basis_matrix().mul_vec(&x[..a.rank()]))
        .collect();
    Sublattice::from_generators(n, &gens)
}

/// `{v : f(v) ∈ s}`.
pub fn preimage_sublattice(f: &LatticeMap, s: &Sublattice) -> Result<Sublattice> {
    if f.codomain().rank != s.ambient {
        return Err(Error::Dimension("sublattice is not in the codomain".into()));
    }
    let n = f.domain().rank;
    let system = if s.rank() == 0 {
        f.matrix().clone()
    } else {
        f.matrix().hstack(&s.basis_matrix().neg())
    };
    let kernel = integer_kernel(&system);
    let gens: Vec<IVec> = kernel.iter().map(|x| x[..n].to_vec()).collect();
    Sublattice::from_generators(n, &gens)
}

/// A right inverse `s` with `f ∘ s = id`, when `f` is surjective.
pub fn right_inverse(f: &LatticeMap) -> Option<LatticeMap> {
    let r = f.codomain().rank;
    if r == 0 {
        return Some(LatticeMap::zero(0, f.domain().rank));
    }
    let snf = smith_normal_form(f.matrix());
    if snf.diagonal().len() < r || snf.diagonal().iter().any(|d| !d.is_one()) {
        return None;
    }
    Some(LatticeMap::new(snf.v.columns_range(0, r).mul(&snf.u)))
}

/// Whether the vector lies in the rational span of the sublattice.
pub fn in_rational_span(s: &Sublattice, v: &[Int]) -> bool {
    span_equations(s)
        .iter()
        .all(|e| crate::matrix::dot(e, v).is_zero())
        || is_zero_vec(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int, ivec};

    #[test]
    fn kernel_examples() {
        let sum = LatticeMap::from_i64(&[[1, 1]], 2);
        assert_eq!(kernel_lattice(&sum), Sublattice::from_i64(2, &[[1, -1]]));
        assert_eq!(kernel_lattice(&LatticeMap::identity(2)).rank(), 0);
        assert_eq!(kernel_lattice(&LatticeMap::from_i64(&[[2]], 1)).rank(), 0);
    }

    #[test]
    fn index_and_saturation() {
        let two_z = Sublattice::from_i64(1, &[[2]]);
        assert_eq!(
            lattice_index(&two_z, &Sublattice::full(1)).unwrap(),
            LatticeIndex::Finite(int(2))
        );
        let s = Sublattice::from_i64(2, &[[2, 4]]);
        assert_eq!(saturate(&s), Sublattice::from_i64(2, &[[1, 2]]));
        let line = Sublattice::from_i64(2, &[[3, 2]]);
        assert_eq!(
            lattice_index(&line, &Sublattice::full(2)).unwrap(),
            LatticeIndex::Infinite
        );
        assert_eq!(
            lattice_index(&Sublattice::full(1), &two_z),
            Err(Error::NotNested)
        );
    }

    #[test]
    fn fiber_product_two_three() {
        let fp = fiber_product_lattice(
            &LatticeMap::from_i64(&[[2]], 1),
            &LatticeMap::from_i64(&[[3]], 1),
        )
        .unwrap();
        assert_eq!(fp.lattice.rank, 1);
        assert_eq!(fp.basis, vec![ivec(&[3, 2])]);
    }

    #[test]
    fn fiber_product_identity_is_diagonal() {
        let fp = fiber_product_lattice(&LatticeMap::identity(2), &LatticeMap::identity(2)).unwrap();
        assert_eq!(fp.lattice.rank, 2);
        assert_eq!(fp.proj_n, fp.proj_l);
        assert!(fp.proj_n.is_identity());
    }

    #[test]
    fn fiber_product_blowup_charts() {
        let p = LatticeMap::from_i64(&[[1, 0], [1, 1]], 2);
        let i = LatticeMap::from_i64(&[[1, 1], [0, 1]], 2);
        let fp = fiber_product_lattice(&p, &i).unwrap();
        assert_eq!(fp.lattice.rank, 2);
        for b in &fp.basis {
            let (a, bb, c, d) = (&b[0], &b[1], &b[2], &b[3]);
            assert_eq!(*a, c + d);
            assert_eq!(a + bb, *d);
        }
        // every solution of the two equations is reached
        let all = Sublattice::from_generators(4, &fp.basis).unwrap();
        assert!(all.contains(&ivec(&[1, 0, 0, 1])));
        assert!(all.contains(&ivec(&[0, 1, -1, 1])));
    }

    #[test]
    fn pushout_examples() {
        let po = pushout_lattice(
            &LatticeMap::from_i64(&[[2]], 1),
            &LatticeMap::from_i64(&[[3]], 1),
        )
        .unwrap();
        assert_eq!(po.lattice.rank, 1);
        assert_eq!(po.inc_m.matrix()[(0, 0)].abs(), int(3));
        assert_eq!(po.inc_l.matrix()[(0, 0)].abs(), int(2));
        assert_eq!(po.torsion_order, int(1));

        let id = pushout_lattice(&LatticeMap::identity(2), &LatticeMap::identity(2)).unwrap();
        assert_eq!(id.lattice.rank, 2);
        assert_eq!(id.inc_m, id.inc_l);

        let twice = pushout_lattice(
            &LatticeMap::from_i64(&[[2]], 1),
            &LatticeMap::from_i64(&[[2]], 1),
        )
        .unwrap();
        assert_eq!(twice.lattice.rank, 1);
        assert_eq!(twice.inc_m.matrix()[(0, 0)].abs(), int(1));
        assert_eq!(twice.inc_l.matrix()[(0, 0)].abs(), int(1));
        assert_eq!(twice.torsion_order, int(2));
    }

    #[test]
    fn intersections_and_preimages() {
        let a = Sublattice::from_i64(1, &[[2]]);
        let b = Sublattice::from_i64(1, &[[3]]);
        assert_eq!(
            intersect_sublattices(&a, &b).unwrap(),
            Sublattice::from_i64(1, &[[6]])
        );
        let sum = LatticeMap::from_i64(&[[1, 1]], 2);
        let even = preimage_sublattice(&sum, &a).unwrap();
        assert!(even.contains(&ivec(&[1, 1])));
        assert!(even.contains(&ivec(&[2, 0])));
        assert!(!even.contains(&ivec(&[1, 0])));
        assert_eq!(
            lattice_index(&even, &Sublattice::full(2)).unwrap(),
            LatticeIndex::Finite(int(2))
        );
        assert_eq!(
            dual_map(&LatticeMap::from_i64(&[[2]], 1)),
            LatticeMap::from_i64(&[[2]], 1)
        );
    }
}
