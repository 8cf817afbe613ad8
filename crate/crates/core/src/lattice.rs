//! Exact integer linear algebra on `i64` with overflow detection.
//!
//! Every routine that multiplies entries goes through checked arithmetic (or
//! `i128` intermediates that are checked on the way back), so an overflow is
//! reported as [`LatticeError::Overflow`] instead of wrapping.

use std::fmt;
use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("basis is not unimodular")]
    NotUnimodular,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T, E = LatticeError> = std::result::Result<T, E>;

fn ck(v: Option<i64>) -> Result<i64> {
    v.ok_or(LatticeError::Overflow)
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| LatticeError::Overflow)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Returns `(g, x, y)` with `x*a + y*b == g == gcd(a, b) >= 0`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

/// A point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![0; dim])
    }

    /// The unit vector `e_{index+1}` of `Z^dim` (zero-based `index`).
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = vec![0; dim];
        v[index] = 1;
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    fn same_dim(&self, other: &IntVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(LatticeError::Dimension { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn dot(&self, other: &IntVector) -> Result<i64> {
        self.same_dim(other)?;
        let s: i128 = self.0.iter().zip(&other.0).map(|(&a, &b)| a as i128 * b as i128).sum();
        narrow(s)
    }

    pub fn checked_add(&self, other: &IntVector) -> Result<IntVector> {
        self.same_dim(other)?;
        let v = self.0.iter().zip(&other.0).map(|(&a, &b)| ck(a.checked_add(b))).collect::<Result<_>>()?;
        Ok(IntVector(v))
    }

    pub fn checked_sub(&self, other: &IntVector) -> Result<IntVector> {
        self.same_dim(other)?;
        let v = self.0.iter().zip(&other.0).map(|(&a, &b)| ck(a.checked_sub(b))).collect::<Result<_>>()?;
        Ok(IntVector(v))
    }

    pub fn checked_scale(&self, k: i64) -> Result<IntVector> {
        let v = self.0.iter().map(|&a| ck(a.checked_mul(k))).collect::<Result<_>>()?;
        Ok(IntVector(v))
    }

    pub fn neg(&self) -> Result<IntVector> {
        self.checked_scale(-1)
    }

    /// Sum of a nonempty family of vectors of the same dimension.
    pub fn sum<'a, I: IntoIterator<Item = &'a IntVector>>(dim: usize, vs: I) -> Result<IntVector> {
        vs.into_iter().try_fold(IntVector::zeros(dim), |acc, v| acc.checked_add(v))
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0, |g, &x| gcd(g, x))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl Deref for IntVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(v: [i64; N]) -> Self {
        IntVector(v.to_vec())
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `v / gcd(v)`.
pub fn primitive_part(v: &IntVector) -> Result<IntVector> {
    let g = v.gcd();
    if g == 0 {
        return Err(LatticeError::ZeroVector);
    }
    Ok(IntVector(v.0.iter().map(|x| x / g).collect()))
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(LatticeError::Dimension { expected: rows * cols, found: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Stacks vectors as rows. All vectors must share one dimension.
    pub fn from_rows(rows: &[IntVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.dim());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(LatticeError::Dimension { expected: cols, found: r.dim() });
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> IntVector {
        IntVector(self.row(r).to_vec())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LatticeError::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: i128 = (0..self.cols).map(|k| self.get(r, k) as i128 * other.get(k, c) as i128).sum();
                out.set(r, c, narrow(s)?);
            }
        }
        Ok(out)
    }

    /// `self * v` with `v` as a column vector.
    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.dim() {
            return Err(LatticeError::Dimension { expected: self.cols, found: v.dim() });
        }
        (0..self.rows)
            .map(|r| narrow(self.row(r).iter().zip(v.iter()).map(|(&a, &b)| a as i128 * b as i128).sum()))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    /// `v^T * self`, i.e. the combination `sum_i v_i * row_i`.
    pub fn vec_mul(&self, v: &IntVector) -> Result<IntVector> {
        if self.rows != v.dim() {
            return Err(LatticeError::Dimension { expected: self.rows, found: v.dim() });
        }
        (0..self.cols)
            .map(|c| narrow((0..self.rows).map(|r| v[r] as i128 * self.get(r, c) as i128).sum()))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    /// Replaces rows `(a, b)` by `(x*a + y*b, z*a + w*b)`.
    fn combine_rows(&mut self, a: usize, b: usize, [x, y, z, w]: [i64; 4]) -> Result<()> {
        for c in 0..self.cols {
            let (ra, rb) = (self.get(a, c) as i128, self.get(b, c) as i128);
            self.set(a, c, narrow(x as i128 * ra + y as i128 * rb)?);
            self.set(b, c, narrow(z as i128 * ra + w as i128 * rb)?);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) -> Result<()> {
        for c in 0..self.cols {
            let v = ck(self.get(r, c).checked_neg())?;
            self.set(r, c, v);
        }
        Ok(())
    }

    /// Row `dst -= k * row src`.
    fn sub_row_multiple(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) as i128 - k as i128 * self.get(src, c) as i128;
            self.set(dst, c, narrow(v)?);
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (r, c): (usize, usize)) -> &i64 {
        &self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", self.row_vector(r))?;
        }
        write!(f, "]")
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<i64> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<i128> = m.data.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Ok(0);
            };
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            sign = -sign;
        }
        let piv = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let t = piv
                    .checked_mul(a[i * n + j])
                    .zip(a[i * n + k].checked_mul(a[k * n + j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(LatticeError::Overflow)?;
                a[i * n + j] = t / prev;
            }
            a[i * n + k] = 0;
        }
        prev = piv;
    }
    narrow(sign * a[n * n - 1])
}

/// True iff the `n` vectors form a basis of `Z^n`.
pub fn is_unimodular_basis(vs: &[IntVector]) -> Result<bool> {
    let n = vs.first().map_or(0, |v| v.dim());
    if vs.len() != n {
        return Err(LatticeError::Dimension { expected: n, found: vs.len() });
    }
    Ok(determinant(&IntMatrix::from_rows(vs)?)?.abs() == 1)
}

/// A lattice automorphism of `Z^n`, stored as an `n x n` matrix acting on
/// column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnimodularMap(IntMatrix);

impl UnimodularMap {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
        }
        if determinant(&m)?.abs() != 1 {
            return Err(LatticeError::NotUnimodular);
        }
        Ok(UnimodularMap(m))
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMap(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn apply(&self, v: &IntVector) -> Result<IntVector> {
        self.0.mul_vec(v)
    }

    pub fn compose(&self, other: &UnimodularMap) -> Result<UnimodularMap> {
        Ok(UnimodularMap(self.0.mul(&other.0)?))
    }
}

impl fmt::Debug for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnimodularMap{:?}", self.0)
    }
}

/// Row-style Hermite normal form: returns `(h, u)` with `h = u * m`, `u`
/// unimodular, `h` in row echelon form with positive pivots, zeros below each
/// pivot and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, UnimodularMap)> {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // gcd-combine every lower row into the pivot row
        for r in pivot_row + 1..m.rows {
            let b = h.get(r, col);
            if b == 0 {
                continue;
            }
            let a = h.get(pivot_row, col);
            let (g, x, y) = extended_gcd(a, b);
            let coeffs = [x, y, -b / g, a / g];
            h.combine_rows(pivot_row, r, coeffs)?;
            u.combine_rows(pivot_row, r, coeffs)?;
        }
        if h.get(pivot_row, col) == 0 {
            continue;
        }
        if h.get(pivot_row, col) < 0 {
            h.negate_row(pivot_row)?;
            u.negate_row(pivot_row)?;
        }
        let p = h.get(pivot_row, col);
        for r in 0..pivot_row {
            let q = h.get(r, col).div_euclid(p);
            h.sub_row_multiple(r, pivot_row, q)?;
            u.sub_row_multiple(r, pivot_row, q)?;
        }
        pivot_row += 1;
    }
    Ok((h, UnimodularMap(u)))
}

/// Checks the row-style HNF shape described on [`hermite_normal_form`].
pub fn is_hermite_normal_form(h: &IntMatrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut zero_rows_started = false;
    for r in 0..h.rows {
        let lead = (0..h.cols).find(|&c| h.get(r, c) != 0);
        match lead {
            None => zero_rows_started = true,
            Some(c) => {
                if zero_rows_started || last_pivot.is_some_and(|p| c <= p) {
                    return false;
                }
                let p = h.get(r, c);
                if p <= 0 || (0..r).any(|above| !(0..p).contains(&h.get(above, c))) {
                    return false;
                }
                last_pivot = Some(c);
            }
        }
    }
    true
}

/// Inverse of a square matrix, or `None` when `|det| != 1`.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<Option<IntMatrix>> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let (h, u) = hermite_normal_form(m)?;
    if h == IntMatrix::identity(m.rows) {
        Ok(Some(u.0))
    } else {
        Ok(None)
    }
}

/// The integer coefficients `c` with `sum_i c_i * basis_i == target`.
pub fn solve_integral(basis: &[IntVector], target: &IntVector) -> Result<Vec<i64>> {
    let n = target.dim();
    if basis.len() != n {
        return Err(LatticeError::Dimension { expected: n, found: basis.len() });
    }
    let m = IntMatrix::from_rows(basis)?;
    if m.cols != n {
        return Err(LatticeError::Dimension { expected: n, found: m.cols });
    }
    let inv = unimodular_inverse(&m)?.ok_or(LatticeError::NotUnimodular)?;
    // c^T M = t^T  =>  c^T = t^T M^{-1}
    Ok(inv.vec_mul(target)?.into_inner())
}

/// Rank of the row space, by fraction-free elimination.
pub fn rank(m: &IntMatrix) -> Result<usize> {
    let (h, _) = hermite_normal_form(m)?;
    Ok((0..h.rows).filter(|&r| h.row(r).iter().any(|&x| x != 0)).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector::new(x.to_vec())
    }

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    // Laplace expansion, independent of the elimination path.
    fn cofactor_det(m: &IntMatrix) -> i128 {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0) as i128;
        }
        (0..n)
            .map(|c| {
                let minor: Vec<IntVector> =
                    (1..n).map(|r| v(&(0..n).filter(|&k| k != c).map(|k| m.get(r, k)).collect::<Vec<_>>())).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m.get(0, c) as i128 * cofactor_det(&IntMatrix::from_rows(&minor).unwrap())
            })
            .sum()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), 1);
        assert_eq!(determinant(&mat(&[&[1, 0], &[-1, -1]])).unwrap(), -1);
        let basis = mat(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 1, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 1, 0]]);
        let d = determinant(&basis).unwrap();
        assert_eq!(d as i128, cofactor_det(&basis));
        assert_eq!(d.abs(), 1);
        assert!(matches!(determinant(&IntMatrix::zeros(2, 3)), Err(LatticeError::NotSquare { .. })));
    }

    #[test]
    fn determinant_needs_row_swap() {
        let m = mat(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 1]]);
        assert_eq!(determinant(&m).unwrap() as i128, cofactor_det(&m));
    }

    #[test]
    fn determinant_overflow_is_reported() {
        let big = i64::MAX / 2;
        let m = mat(&[&[big, 1], &[1, big]]);
        assert_eq!(determinant(&m), Err(LatticeError::Overflow));
    }

    #[test]
    fn unimodular_basis_examples() {
        let e = |i| IntVector::unit(3, i);
        assert!(is_unimodular_basis(&[e(0), e(1), e(2)]).unwrap());
        assert!(!is_unimodular_basis(&[v(&[1, 0]), v(&[0, 2])]).unwrap());
        assert!(is_unimodular_basis(&[v(&[1, 0]), v(&[-1, -1])]).unwrap());
        assert!(is_unimodular_basis(&[v(&[1, 0])]).is_err());
    }

    #[test]
    fn hnf_examples() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3)).unwrap();
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u.matrix(), &IntMatrix::identity(3));

        let m = mat(&[&[2, 0], &[1, 1]]);
        let (h, u) = hermite_normal_form(&m).unwrap();
        assert_eq!(h, mat(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.matrix().mul(&m).unwrap(), h);
        assert!(is_hermite_normal_form(&h));

        let unimod = mat(&[&[2, 1, 0], &[1, 1, 0], &[4, 3, 1]]);
        let (h, _) = hermite_normal_form(&unimod).unwrap();
        assert_eq!(h, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_rank_deficient_and_rectangular() {
        let m = mat(&[&[2, 4, 6], &[1, 2, 3], &[0, 0, 5]]);
        let (h, u) = hermite_normal_form(&m).unwrap();
        assert!(is_hermite_normal_form(&h));
        assert_eq!(u.matrix().mul(&m).unwrap(), h);
        assert_eq!(rank(&m).unwrap(), 2);
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&v(&[2, 4, -6])).unwrap(), v(&[1, 2, -3]));
        assert_eq!(primitive_part(&v(&[0, 5])).unwrap(), v(&[0, 1]));
        assert_eq!(primitive_part(&v(&[3, 7])).unwrap(), v(&[3, 7]));
        assert_eq!(primitive_part(&v(&[0, 0])), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn solve_integral_examples() {
        let e = |i| IntVector::unit(2, i);
        assert_eq!(solve_integral(&[e(0), e(1)], &v(&[3, -1])).unwrap(), vec![3, -1]);
        assert_eq!(solve_integral(&[v(&[1, 1]), v(&[0, 1])], &v(&[2, 3])).unwrap(), vec![2, 1]);
        // facet {e1, e2, -(e1+e2+e3)} of T^3, target -(e1+e2+e3)
        let basis = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[-1, -1, -1])];
        assert_eq!(solve_integral(&basis, &v(&[-1, -1, -1])).unwrap(), vec![0, 0, 1]);
        // facet {e1, e2, e3}: -(e1+e2+e3) = -1*e1 - 1*e2 - 1*e3
        let basis = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(solve_integral(&basis, &v(&[-1, -1, -1])).unwrap(), vec![-1, -1, -1]);
        assert_eq!(solve_integral(&[v(&[2, 0]), v(&[0, 1])], &v(&[2, 1])), Err(LatticeError::NotUnimodular));
    }
}
