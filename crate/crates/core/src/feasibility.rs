//! Exact feasibility of `{lambda : M lambda = b, 0 <= lambda <= u}` by
//! searching the vertices of the feasible region.
//!
//! A nonempty region of this form has a basic feasible solution: a set of
//! `rank(M)` independent columns solved exactly, with every other variable at
//! one of its bounds. All bases are factored once as `adj(B) / det(B)`, so a
//! query only needs integer matrix-vector products.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{ck_mul, ck_sub, to_i128, Rat};
use crate::error::{Error, Result};
use crate::lattice::{det_bareiss, rank_of_rows};

#[derive(Clone, Debug)]
struct Basis {
    cols: Vec<usize>,
    nonbasic: Vec<usize>,
    det: i128,
    adj: Vec<Vec<i128>>,
}

#[derive(Clone, Debug)]
pub(crate) struct BasisFeasibility {
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<i128>>,
    upper: Option<Vec<i128>>,
    bases: Vec<Basis>,
}

const MAX_FREE_NONBASIC: usize = 20;

impl BasisFeasibility {
    /// `matrix` must have full row rank. `upper`, when given, bounds every
    /// variable from above.
    pub(crate) fn new(matrix: Vec<Vec<i128>>, upper: Option<Vec<i128>>) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("feasibility matrix shape".into()));
        }
        let big: Vec<Vec<BigInt>> =
            matrix.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        if rank_of_rows(big.clone()) != rows {
            return Err(Error::Degenerate("feasibility matrix lacks full row rank".into()));
        }
        let zero_col: Vec<bool> = (0..cols).map(|j| matrix.iter().all(|r| r[j] == 0)).collect();
        let mut bases = Vec::new();
        for cset in (0..cols).filter(|&j| !zero_col[j]).combinations(rows) {
            let sub: Vec<Vec<BigInt>> =
                big.iter().map(|r| cset.iter().map(|&j| r[j].clone()).collect()).collect();
            let det = det_bareiss(sub.clone());
            if det.is_zero() {
                continue;
            }
            let mut adj = vec![vec![0i128; rows]; rows];
            for (i, adj_row) in adj.iter_mut().enumerate() {
                for (j, cell) in adj_row.iter_mut().enumerate() {
                    // adj[i][j] = (-1)^(i+j) * minor(j, i)
                    let minor: Vec<Vec<BigInt>> = sub
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != j)
                        .map(|(_, row)| {
                            row.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, v)| v.clone()).collect()
                        })
                        .collect();
                    let m = det_bareiss(minor);
                    let v = if (i + j) % 2 == 0 { m } else { -m };
                    *cell = to_i128(&v, "basis adjugate")?;
                }
            }
            let nonbasic: Vec<usize> =
                (0..cols).filter(|j| !cset.contains(j) && !zero_col[*j]).collect();
            if upper.is_some() && nonbasic.len() > MAX_FREE_NONBASIC {
                return Err(Error::Budget("too many bounded nonbasic variables".into()));
            }
            bases.push(Basis { cols: cset, nonbasic, det: to_i128(&det, "basis determinant")?, adj });
        }
        Ok(BasisFeasibility { rows, cols, matrix, upper, bases })
    }

    /// A feasible `lambda` for right-hand side `b`, if any.
    pub(crate) fn solve(&self, b: &[i128]) -> Result<Option<Vec<Rat>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        for basis in &self.bases {
            let masks: u64 = match self.upper {
                Some(_) => 1u64 << basis.nonbasic.len(),
                None => 1,
            };
            for mask in 0..masks {
                let mut rhs = b.to_vec();
                if let Some(up) = &self.upper {
                    for (bit, &j) in basis.nonbasic.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            for (i, r) in rhs.iter_mut().enumerate() {
                                *r = ck_sub(*r, ck_mul(up[j], self.matrix[i][j])?)?;
                            }
                        }
                    }
                }
                if let Some(sol) = self.try_basis(basis, &rhs, mask)? {
                    return Ok(Some(sol));
                }
            }
        }
        Ok(None)
    }

    fn try_basis(&self, basis: &Basis, rhs: &[i128], mask: u64) -> Result<Option<Vec<Rat>>> {
        let det = basis.det;
        let mut nums = Vec::with_capacity(self.rows);
        for row in &basis.adj {
            let mut acc = 0i128;
            for (a, r) in row.iter().zip(rhs) {
                acc = acc.checked_add(ck_mul(*a, *r)?).ok_or(Error::Overflow("basis solve"))?;
            }
            // lambda = acc / det; require lambda >= 0 (and <= upper)
            let (lo_ok, num) = if det > 0 { (acc >= 0, acc) } else { (acc <= 0, acc) };
            if !lo_ok {
                return Ok(None);
            }
            nums.push(num);
        }
        if let Some(up) = &self.upper {
            for (k, &j) in basis.cols.iter().enumerate() {
                let cap = ck_mul(up[j], det)?;
                let ok = if det > 0 { nums[k] <= cap } else { nums[k] >= cap };
                if !ok {
                    return Ok(None);
                }
            }
        }
        let mut lambda = vec![Rat::zero(); self.cols];
        for (k, &j) in basis.cols.iter().enumerate() {
            lambda[j] = BigRational::new(BigInt::from(nums[k]), BigInt::from(det));
        }
        if let Some(up) = &self.upper {
            for (bit, &j) in basis.nonbasic.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    lambda[j] = Rat::from_integer(BigInt::from(up[j]));
                }
            }
        }
        Ok(Some(lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn check(m: &[Vec<i128>], lambda: &[Rat], b: &[i128]) {
        for (row, bi) in m.iter().zip(b) {
            let s: Rat = row.iter().zip(lambda).map(|(a, l)| Rat::from_integer(BigInt::from(*a)) * l).sum();
            assert_eq!(s, Rat::from_integer(BigInt::from(*bi)));
        }
    }

    #[test]
    fn unit_box_membership() {
        // zonotope of {0, 2}: x = 2 lambda_2, 0 <= lambda <= 1
        let m = vec![vec![0, 2]];
        let f = BasisFeasibility::new(m.clone(), Some(vec![1, 1])).unwrap();
        let sol = f.solve(&[1]).unwrap().unwrap();
        assert_eq!(sol[1], rat(1, 2));
        check(&m, &sol, &[1]);
        assert!(f.solve(&[3]).unwrap().is_none());
        assert!(f.solve(&[-1]).unwrap().is_none());
    }

    #[test]
    fn simplex_with_slack() {
        // lambda_1 * 1 + lambda_2 * 3 = x, lambda_1 + lambda_2 + s = 2
        let m = vec![vec![1, 3, 0], vec![1, 1, 1]];
        let f = BasisFeasibility::new(m.clone(), None).unwrap();
        for x in 0..=6 {
            let sol = f.solve(&[x, 2]).unwrap();
            assert!(sol.is_some(), "x = {x}");
            check(&m, &sol.unwrap(), &[x, 2]);
        }
        assert!(f.solve(&[7, 2]).unwrap().is_none());
        assert!(f.solve(&[-1, 2]).unwrap().is_none());
    }

    #[test]
    fn rank_deficient_rejected() {
        assert!(BasisFeasibility::new(vec![vec![1, 2], vec![2, 4]], None).is_err());
    }
}
