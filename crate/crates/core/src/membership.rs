//! Exact membership in `hA` without enumerating `hA`.
//!
//! With `0 ∈ A`, `z ∈ hA` iff `z = sum n_i a_i` over the nonzero `a_i` with
//! `n_i >= 0` and `sum n_i <= h`. Every integer solution of
//! `sum n_i a_i = z` is `P z + K t` for the SNF-derived particular map `P`
//! and integer kernel basis `K`, so membership reduces to finding a lattice
//! point `t` of a small polytope whose constraint matrix does not depend on
//! `z` or `h`.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{ck_add, ck_dot, ck_mul, ck_sub, to_i128};
use crate::enumerate::ParametricEnumerator;
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMatrix, IntVector};
use crate::sumset::LatticePointSet;

const MAX_PROJECTION_ROWS: usize = 200_000;

#[derive(Clone, Debug)]
pub struct SumsetMembership {
    dim: usize,
    generators: Vec<Vec<i128>>,
    particular: Vec<Vec<i128>>,
    kernel: Vec<Vec<i128>>,
    search: ParametricEnumerator,
}

impl SumsetMembership {
    /// `a` must contain the origin and its elements must generate `Z^n`.
    pub fn new(a: &LatticePointSet) -> Result<Self> {
        if !a.contains_origin() {
            return Err(Error::MissingOrigin);
        }
        let dim = a.dim();
        let gens: Vec<IntVector> = a.iter().filter(|p| !p.is_zero()).cloned().collect();
        if gens.len() < dim {
            return Err(Error::NotGenerating);
        }
        let mat = IntMatrix::from_columns(&gens)?;
        let snf = smith_normal_form(&mat)?;
        let factors = snf.invariant_factors();
        if factors.len() != dim || !factors.iter().all(One::is_one) {
            return Err(Error::NotGenerating);
        }
        let m = gens.len();
        let to_rows = |mat: &IntMatrix, cols: std::ops::Range<usize>| -> Result<Vec<Vec<i128>>> {
            (0..mat.rows())
                .map(|i| cols.clone().map(|j| to_i128(mat.get(i, j), "membership map")).collect())
                .collect()
        };
        // P = V[:, :n] U
        let mut v_head = IntMatrix::zeros(m, dim);
        for i in 0..m {
            for j in 0..dim {
                v_head.set(i, j, snf.v.get(i, j).clone());
            }
        }
        let particular = to_rows(&(&v_head * &snf.u), 0..dim)?;
        let kernel = to_rows(&snf.v, dim..m)?;
        let r = m - dim;

        let mut matrix = kernel.clone();
        let mut total = vec![0i128; r];
        for row in &kernel {
            for (t, k) in total.iter_mut().zip(row) {
                *t = ck_add(*t, *k)?;
            }
        }
        matrix.push(total.iter().map(|t| -t).collect());
        let search = ParametricEnumerator::new(r, &matrix, MAX_PROJECTION_ROWS)?;
        let generators = gens
            .iter()
            .map(|g| g.coords().iter().map(|c| to_i128(c, "generator")).collect())
            .collect::<Result<_>>()?;
        Ok(SumsetMembership { dim, generators, particular, kernel, search })
    }

    /// Nonnegative coefficients over the nonzero elements of `A`
    /// (lexicographic order) with sum at most `h` and combination `z`.
    pub fn witness(&self, z: &IntVector, h: u64) -> Result<Option<Vec<BigInt>>> {
        if z.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: z.dim() });
        }
        let zc: Vec<i128> =
            z.coords().iter().map(|c| to_i128(c, "membership query")).collect::<Result<_>>()?;
        let h = i128::from(h);
        let base: Vec<i128> =
            self.particular.iter().map(|row| ck_dot(row, &zc)).collect::<Result<_>>()?;
        let mut rhs: Vec<i128> = base.iter().map(|b| -b).collect();
        let sum = base.iter().try_fold(0i128, |acc, b| ck_add(acc, *b))?;
        rhs.push(ck_sub(sum, h)?);
        let Some(t) = self.search.first(&rhs)? else {
            return Ok(None);
        };
        let coeffs: Vec<i128> = base
            .iter()
            .zip(&self.kernel)
            .map(|(b, k)| ck_add(*b, ck_dot(k, &t)?))
            .collect::<Result<_>>()?;
        for d in 0..self.dim {
            let s = coeffs
                .iter()
                .zip(&self.generators)
                .try_fold(0i128, |acc, (c, g)| ck_add(acc, ck_mul(*c, g[d])?))?;
            if s != zc[d] || coeffs.iter().any(|&c| c < 0) {
                return Err(Error::Degenerate("membership witness failed verification".into()));
            }
        }
        Ok(Some(coeffs.into_iter().map(BigInt::from).collect()))
    }

    pub fn contains(&self, z: &IntVector, h: u64) -> Result<bool> {
        Ok(self.witness(z, h)?.is_some())
    }

    /// Least `h` with `z ∈ hA`, searched up to `limit`.
    pub fn min_summands(&self, z: &IntVector, limit: u64) -> Result<Option<u64>> {
        if !self.contains(z, limit)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (0u64, limit);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.contains(z, mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo))
    }
}
