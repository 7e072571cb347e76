//! Dense arbitrary-precision integer matrices and the normal forms built on them.
//!
//! Everything downstream (lattices, cones, monoids) reduces to the routines in
//! this module: Hermite normal form with transform, Smith normal form with both
//! transforms, integer kernels and exact rational row reduction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer scalar used throughout the crate.
pub type Int = BigInt;

/// Integer vector. Also used for rational points, which are always stored as
/// positive integer multiples since every cone is invariant under scaling.
pub type IVec = Vec<Int>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Int::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(k: &Int, a: &[Int]) -> IVec {
    a.iter().map(|x| k * x).collect()
}

pub fn neg_vec(a: &[Int]) -> IVec {
    a.iter().map(|x| -x).collect()
}

/// gcd of the entries (0 for the zero vector).
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The direction (sign) is preserved.
pub fn primitive(v: &[Int]) -> IVec {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector with a positive multiplier and
/// returns the primitive integer vector on the same ray.
pub fn primitive_from_rational(v: &[BigRational]) -> IVec {
    let lcm = v
        .iter()
        .fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: IVec = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(&scaled)
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<IVec>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(columns: &[IVec], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let rows: Vec<IVec> = rows.iter().map(|r| ivec(r.as_ref())).collect();
        Self::from_rows(rows, cols).expect("literal matrix is rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<IVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn columns_vec(&self) -> Vec<IVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Sub-matrix of the given column range.
    pub fn columns_range(&self, start: usize, end: usize) -> IntMatrix {
        let mut out = Self::zeros(self.rows, end - start);
        for i in 0..self.rows {
            for j in start..end {
                out[(i, j - start)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Sub-matrix of the given row range.
    pub fn rows_range(&self, start: usize, end: usize) -> IntMatrix {
        IntMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self[(source, j)].clone();
            if !s.is_zero() {
                self[(target, j)] -= q * s;
            }
        }
    }

    /// col[target] -= q * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self[(i, source)].clone();
            if !s.is_zero() {
                self[(i, target)] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        hermite_rows(&self.rows_vec(), self.cols).len()
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut a = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-style Hermite normal form `H = U * M` with `U` unimodular.
///
/// `H` is upper echelon, pivots are positive and the entries above each pivot
/// lie in `[0, pivot)`. Zero rows are kept at the bottom so that the rows of
/// `U` past the rank span the left kernel of `M`.
pub fn hermite_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.nrows());
    let mut r = 0;
    for c in 0..m.ncols() {
        if r == m.nrows() {
            break;
        }
        loop {
            let pivot = (r..h.nrows())
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(i) = pivot else { break };
            h.swap_rows(r, i);
            u.swap_rows(r, i);
            let mut clean = true;
            for k in r + 1..h.nrows() {
                if h[(k, c)].is_zero() {
                    continue;
                }
                let q = h[(k, c)].div_floor(&h[(r, c)]);
                h.row_axpy(k, r, &q);
                u.row_axpy(k, r, &q);
                if !h[(k, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for k in 0..r {
            let q = h[(k, c)].div_floor(&h[(r, c)]);
            h.row_axpy(k, r, &q);
            u.row_axpy(k, r, &q);
        }
        r += 1;
    }
    (h, u, r)
}

/// Nonzero rows of the row-style Hermite normal form of the given generators.
/// This is the canonical basis of the lattice they span.
pub fn hermite_rows(rows: &[IVec], cols: usize) -> Vec<IVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_rows(rows.to_vec(), cols).expect("rectangular generators");
    let (h, _, rank) = hermite_with_transform(&m);
    (0..rank).map(|i| h.row(i).to_vec()).collect()
}

/// Smith decomposition `U * A * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | ...` including trailing zeros.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.nrows().min(self.d.ncols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.nrows(), a.ncols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if d[(bi, bj)].abs() <= d[(i, j)].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return SnfDecomposition { u, d, v };
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                d.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&d[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    // row_t += row_i, then the next pass reduces the remainder
                    let minus_one = -Int::one();
                    d.row_axpy(t, i, &minus_one);
                    u.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v }
}

/// Basis of the integer kernel `{x : M x = 0}`, in Hermite normal form.
/// The returned lattice is saturated.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IVec> {
    let (_, u, rank) = hermite_with_transform(&m.transpose());
    let rows: Vec<IVec> = (rank..u.nrows()).map(|i| u.row(i).to_vec()).collect();
    hermite_rows(&rows, m.ncols())
}

/// Integer coefficients `x` with `sum x_i * basis_i = v`, if they exist.
/// `basis` must consist of linearly independent vectors.
pub fn solve_in_lattice(basis: &[IVec], v: &[Int]) -> Option<IVec> {
    let k = basis.len();
    if k == 0 {
        return if is_zero_vec(v) { Some(Vec::new()) } else { None };
    }
    let n = v.len();
    let b = IntMatrix::from_rows(basis.to_vec(), n).ok()?;
    let (h, u, rank) = hermite_with_transform(&b);
    // v = y * H, solved along pivot columns
    let mut residual = v.to_vec();
    let mut y = vec![Int::zero(); rank];
    for (i, yi) in y.iter_mut().enumerate() {
        let c = (0..n).find(|&c| !h[(i, c)].is_zero())?;
        let (q, rem) = residual[c].div_rem(&h[(i, c)]);
        if !rem.is_zero() {
            return None;
        }
        for (j, r) in residual.iter_mut().enumerate() {
            *r -= &q * &h[(i, j)];
        }
        *yi = q;
    }
    if !is_zero_vec(&residual) {
        return None;
    }
    let mut x = vec![Int::zero(); k];
    for (i, yi) in y.iter().enumerate() {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += yi * &u[(i, j)];
        }
    }
    Some(x)
}

/// Reduced row echelon form over the rationals. Returns the nonzero rows and
/// their pivot columns.
pub fn rational_rref(rows: &[IVec], cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

/// Canonical representative of `v` modulo the rational span of `subspace`:
/// pivot coordinates of the subspace's RREF are cleared, then the result is
/// scaled (positively) to a primitive integer vector.
pub fn reduce_modulo_span(v: &[Int], rref: &(Vec<Vec<BigRational>>, Vec<usize>)) -> IVec {
    let (rows, pivots) = rref;
    let mut w: Vec<BigRational> = v
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    for (row, &c) in rows.iter().zip(pivots) {
        if w[c].is_zero() {
            continue;
        }
        let f = w[c].clone();
        for (wj, rj) in w.iter_mut().zip(row) {
            *wj -= &f * rj;
        }
    }
    primitive_from_rational(&w)
}

/// Rational solution of `sum x_i * basis_i = v` for independent `basis`.
pub fn rational_coordinates(basis: &[IVec], v: &[Int]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = v.len();
    // Solve via RREF of the augmented transpose system.
    let mut rows: Vec<IVec> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r: IVec = basis.iter().map(|b| b[i].clone()).collect();
        r.push(v[i].clone());
        rows.push(r);
    }
    let (rref, pivots) = rational_rref(&rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &c) in rref.iter().zip(&pivots) {
        x[c] = row[k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {diag:?}");
        }
    }

    #[test]
    fn snf_identity() {
        let s = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3() {
        let a = IntMatrix::from_i64(&[[2, 0], [0, 3]], 2);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), vec![int(1), int(6)]);
        check_snf(&a);
    }

    #[test]
    fn snf_zero_1x1() {
        let s = smith_normal_form(&IntMatrix::zeros(1, 1));
        assert_eq!(s.d, IntMatrix::zeros(1, 1));
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3));
        check_snf(&IntMatrix::from_i64(&[[0, 3], [0, 0], [6, 9]], 2));
        check_snf(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(&[ivec(&[2, 4]), ivec(&[1, 3])], 2);
        let b = hermite_rows(&[ivec(&[1, 3]), ivec(&[3, 7])], 2);
        assert_eq!(a, b);
        assert_eq!(a, vec![ivec(&[1, 1]), ivec(&[0, 2])]);
    }

    #[test]
    fn kernel_of_sum() {
        let k = integer_kernel(&IntMatrix::from_i64(&[[1, 1]], 2));
        assert_eq!(k, vec![ivec(&[1, -1])]);
    }

    #[test]
    fn solve_and_determinant() {
        let basis = vec![ivec(&[1, 1]), ivec(&[0, 2])];
        assert_eq!(solve_in_lattice(&basis, &ivec(&[3, 5])), Some(ivec(&[3, 1])));
        assert_eq!(solve_in_lattice(&basis, &ivec(&[1, 2])), None);
        let m = IntMatrix::from_i64(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]], 3);
        assert_eq!(m.determinant(), int(18));
    }

    #[test]
    fn rational_reduction_is_canonical() {
        let rref = rational_rref(&[ivec(&[1, -1])], 2);
        assert_eq!(reduce_modulo_span(&ivec(&[1, 0]), &rref), ivec(&[0, 1]));
        assert_eq!(reduce_modulo_span(&ivec(&[0, 3]), &rref), ivec(&[0, 1]));
    }
}
