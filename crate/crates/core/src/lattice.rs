//! Exact integer linear algebra: vectors, matrices, Smith normal form and
//! integer representations of lattice points.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::l1;
use crate::error::{Error, Result};
use crate::sumset::LatticePointSet;

/// A point of `Z^n` with arbitrary-precision coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        IntVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        IntVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        crate::arith::dot(&self.0, &other.0)
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Degenerate("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix::new(r, c, data)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[IntVector]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, IntVector::dim);
        if r == 0 || c == 0 {
            return Err(Error::Degenerate("empty column set".into()));
        }
        let mut m = IntMatrix::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            if v.dim() != r {
                return Err(Error::DimensionMismatch { expected: r, found: v.dim() });
            }
            for i in 0..r {
                m.set(i, j, v[i].clone());
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> IntVector {
        IntVector((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Determinant of a square matrix (fraction-free Bareiss elimination).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i)).collect();
        det_bareiss(rows)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i)).collect();
        rank_of_rows(rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * rhs.get(k, j);
                    out.data[i * rhs.cols + j] += v;
                }
            }
        }
        out
    }
}

pub(crate) fn det_bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn rank_of_rows(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let (f, g) = (pivot_row[c].clone(), row[c].clone());
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = &*x * &f - p * &g;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form by elementary row and column operations.
///
/// The pivot is the entry of least nonzero absolute value in the active
/// submatrix, ties broken by lowest row and then lowest column.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SnfDecomposition> {
    if m.is_zero() {
        return Err(Error::Degenerate("zero matrix has no Smith pivot".into()));
    }
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    if pivot.is_none_or(|(pi, pj)| x.abs() < d.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Ok(finish(u, d, v));
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -(d.get(i, t) / &p);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -(d.get(t, j) / &p);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p))
            });
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok(finish(u, d, v))
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SnfDecomposition {
    for t in 0..d.rows.min(d.cols) {
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v }
}

/// Whether the differences `a - a_0` generate `Z^n` as a group.
pub fn generates_full_lattice(a: &LatticePointSet) -> Result<bool> {
    if a.len() < 2 {
        return Err(Error::InvalidArgument(
            "lattice generation needs at least two points".into(),
        ));
    }
    let pts: Vec<&IntVector> = a.iter().collect();
    let base = pts[0];
    let diffs: Vec<IntVector> = pts[1..].iter().map(|p| *p - base).collect();
    let m = IntMatrix::from_columns(&diffs)?;
    let snf = smith_normal_form(&m)?;
    let factors = snf.invariant_factors();
    Ok(factors.len() == a.dim() && factors.iter().all(One::is_one))
}

/// Whether the points of `A` themselves (not their differences) generate `Z^n`.
pub fn elements_generate_lattice(a: &LatticePointSet) -> Result<bool> {
    let cols: Vec<IntVector> = a.iter().cloned().collect();
    let m = IntMatrix::from_columns(&cols)?;
    if m.is_zero() {
        return Ok(false);
    }
    let factors = smith_normal_form(&m)?.invariant_factors();
    Ok(factors.len() == a.dim() && factors.iter().all(One::is_one))
}

/// Integer representations `z = sum n_i a_i` over the points of `A` (taken in
/// lexicographic order).
///
/// A particular solution comes from SNF back-substitution; it is then reduced
/// by steepest single-step moves along the integer kernel basis until no move
/// lowers the l1 norm. The result is deterministic but not necessarily of
/// minimal l1 norm.
#[derive(Clone, Debug)]
pub struct IntegerRepSolver {
    dim: usize,
    m: usize,
    snf: Option<SnfDecomposition>,
    kernel: Vec<Vec<BigInt>>,
}

impl IntegerRepSolver {
    pub fn new(a: &LatticePointSet) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("empty point set".into()));
        }
        let cols: Vec<IntVector> = a.iter().cloned().collect();
        let m = cols.len();
        let mat = IntMatrix::from_columns(&cols)?;
        if mat.is_zero() {
            // A = {0}: every coefficient vector is in the kernel.
            let kernel = (0..m)
                .map(|j| (0..m).map(|i| BigInt::from(u8::from(i == j))).collect())
                .collect();
            return Ok(IntegerRepSolver { dim: a.dim(), m, snf: None, kernel });
        }
        let snf = smith_normal_form(&mat)?;
        let r = snf.rank();
        let kernel = (r..m).map(|j| snf.v.column(j).into_coords()).collect();
        Ok(IntegerRepSolver { dim: a.dim(), m, snf: Some(snf), kernel })
    }

    /// Integer kernel basis (as coefficient vectors of length `m`).
    pub fn kernel(&self) -> &[Vec<BigInt>] {
        &self.kernel
    }

    /// An integer solution straight from back-substitution, before reduction.
    pub fn particular(&self, z: &IntVector) -> Result<Option<Vec<BigInt>>> {
        if z.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: z.dim() });
        }
        let Some(snf) = &self.snf else {
            return Ok(z.is_zero().then(|| vec![BigInt::zero(); self.m]));
        };
        let w = snf.u.mul_vec(z.coords());
        let factors = snf.invariant_factors();
        let mut y = vec![BigInt::zero(); self.m];
        for (i, wi) in w.iter().enumerate() {
            match factors.get(i) {
                Some(f) => {
                    if !wi.is_multiple_of(f) {
                        return Ok(None);
                    }
                    y[i] = wi / f;
                }
                None => {
                    if !wi.is_zero() {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some(snf.v.mul_vec(&y)))
    }

    pub fn solve(&self, z: &IntVector) -> Result<Option<Vec<BigInt>>> {
        let Some(mut n) = self.particular(z)? else {
            return Ok(None);
        };
        let mut norm = l1(&n);
        loop {
            let mut best: Option<(Vec<BigInt>, BigInt)> = None;
            for k in &self.kernel {
                for sign in [1i32, -1] {
                    let cand: Vec<BigInt> = n
                        .iter()
                        .zip(k)
                        .map(|(x, y)| if sign > 0 { x + y } else { x - y })
                        .collect();
                    let c_norm = l1(&cand);
                    let bound = best.as_ref().map_or(&norm, |(_, b)| b);
                    if c_norm < *bound {
                        best = Some((cand, c_norm));
                    }
                }
            }
            match best {
                Some((cand, c_norm)) => {
                    n = cand;
                    norm = c_norm;
                }
                None => return Ok(Some(n)),
            }
        }
    }
}

/// Deterministic small-l1 integer representation of `z` over the points of
/// `A`, or `None` when `z` is not in the group generated by `A`.
pub fn solve_integer_rep(a: &LatticePointSet, z: &IntVector) -> Result<Option<Vec<BigInt>>> {
    IntegerRepSolver::new(a)?.solve(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[&[i64]]) -> LatticePointSet {
        LatticePointSet::from_i64(points).unwrap()
    }

    fn check_snf(m: &IntMatrix) -> SnfDecomposition {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                } else {
                    assert!(!s.d.get(i, j).is_negative());
                }
            }
        }
        s
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(2);
        let s = check_snf(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.u, m);
        assert_eq!(s.v, m);
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let s = check_snf(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(m.det().abs(), s.d.det().abs());
    }

    #[test]
    fn snf_single_column() {
        let m = IntMatrix::from_rows(&[vec![2], vec![4]]).unwrap();
        let s = check_snf(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2)]);
    }

    #[test]
    fn snf_rejects_zero_matrix() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(smith_normal_form(&m), Err(Error::Degenerate(_))));
    }

    #[test]
    fn lattice_generation_examples() {
        assert!(generates_full_lattice(&set(&[&[0], &[1]])).unwrap());
        assert!(!generates_full_lattice(&set(&[&[0], &[2]])).unwrap());
        assert!(generates_full_lattice(&set(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
        assert!(generates_full_lattice(&set(&[&[0], &[2], &[3]])).unwrap());
        assert!(!generates_full_lattice(&set(&[&[0, 0], &[2, 0], &[0, 1]])).unwrap());
    }

    #[test]
    fn lattice_generation_needs_two_points() {
        assert!(generates_full_lattice(&set(&[&[0]])).is_err());
    }

    #[test]
    fn integer_rep_examples() {
        let n = solve_integer_rep(&set(&[&[0], &[1]]), &IntVector::from_i64(&[1]))
            .unwrap()
            .unwrap();
        assert_eq!(n, vec![BigInt::from(0), BigInt::from(1)]);

        let n = solve_integer_rep(
            &set(&[&[0, 0], &[1, 0], &[0, 1]]),
            &IntVector::from_i64(&[1, 1]),
        )
        .unwrap()
        .unwrap();
        // lexicographic order: (0,0), (0,1), (1,0)
        assert_eq!(n, vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)]);

        let none = solve_integer_rep(&set(&[&[0], &[2]]), &IntVector::from_i64(&[1])).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn integer_rep_with_cancellation() {
        let a = set(&[&[0], &[2], &[3]]);
        let n = solve_integer_rep(&a, &IntVector::from_i64(&[1])).unwrap().unwrap();
        assert_eq!(l1(&n), BigInt::from(2));
        let s: BigInt = n.iter().zip(a.iter()).map(|(c, p)| c * &p[0]).sum();
        assert_eq!(s, BigInt::from(1));
    }

    #[test]
    fn integer_rep_of_origin_only_set() {
        let a = set(&[&[0, 0]]);
        let solver = IntegerRepSolver::new(&a).unwrap();
        assert_eq!(solver.solve(&IntVector::zeros(2)).unwrap(), Some(vec![BigInt::zero()]));
        assert_eq!(solver.solve(&IntVector::from_i64(&[1, 0])).unwrap(), None);
    }
}
