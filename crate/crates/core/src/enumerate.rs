//! Lattice points of H-polytopes by Fourier–Motzkin projection.
//!
//! The system `c . x >= r` is projected onto `x_0..x_k` for every `k`; the
//! enumeration then walks `x_0`, `x_1`, ... inside the exact projected
//! bounds, so the cost is proportional to the points visited rather than to
//! the bounding box.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::arith::{ceil_div, ck_add, ck_dot, ck_mul, ck_sub, floor_div, gcd_i128};
use crate::error::{Error, Result};

/// `coeffs . x >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub coeffs: Vec<i128>,
    pub rhs: i128,
}

/// Projected constraint levels; `levels[k]` bounds `x_k` given `x_0..x_{k-1}`.
#[derive(Clone, Debug)]
pub(crate) struct LatticeEnumerator {
    dim: usize,
    levels: Vec<Vec<Constraint>>,
    infeasible: bool,
}

/// Normalizes rows by the gcd of their coefficients (rounding the bound up,
/// which is exact for integer points) and keeps the tightest row per
/// direction. Returns `None` when a constant row is violated.
fn normalize(rows: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: BTreeMap<Vec<i128>, i128> = BTreeMap::new();
    for row in rows {
        let g = gcd_i128(&row.coeffs);
        if g == 0 {
            if row.rhs > 0 {
                return None;
            }
            continue;
        }
        let coeffs: Vec<i128> = row.coeffs.iter().map(|c| c / g).collect();
        let rhs = ceil_div(row.rhs, g);
        best.entry(coeffs)
            .and_modify(|r| *r = (*r).max(rhs))
            .or_insert(rhs);
    }
    Some(best.into_iter().map(|(coeffs, rhs)| Constraint { coeffs, rhs }).collect())
}

fn combine(p: &Constraint, q: &Constraint, k: usize) -> Result<Constraint> {
    // p has positive, q negative coefficient on x_k
    let (fp, fq) = (-q.coeffs[k], p.coeffs[k]);
    let coeffs = p
        .coeffs
        .iter()
        .zip(&q.coeffs)
        .map(|(a, b)| ck_add(ck_mul(fp, *a)?, ck_mul(fq, *b)?))
        .collect::<Result<Vec<_>>>()?;
    let rhs = ck_add(ck_mul(fp, p.rhs)?, ck_mul(fq, q.rhs)?)?;
    Ok(Constraint { coeffs, rhs })
}

impl LatticeEnumerator {
    pub(crate) fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        if rows.iter().any(|r| r.coeffs.len() != dim) {
            return Err(Error::InvalidArgument("constraint of wrong width".into()));
        }
        let infeasible = LatticeEnumerator { dim, levels: vec![Vec::new(); dim], infeasible: true };
        let Some(mut current) = normalize(rows) else {
            return Ok(infeasible);
        };
        let mut levels = vec![Vec::new(); dim];
        for k in (0..dim).rev() {
            let (with_k, without_k): (Vec<_>, Vec<_>) =
                current.into_iter().partition(|r| r.coeffs[k] != 0);
            let pos: Vec<&Constraint> = with_k.iter().filter(|r| r.coeffs[k] > 0).collect();
            let neg: Vec<&Constraint> = with_k.iter().filter(|r| r.coeffs[k] < 0).collect();
            if pos.is_empty() || neg.is_empty() {
                return Err(Error::Unbounded);
            }
            let mut next = without_k;
            if k > 0 {
                for p in &pos {
                    for q in &neg {
                        next.push(combine(p, q, k)?);
                    }
                }
            }
            levels[k] = with_k;
            match normalize(next) {
                Some(n) => current = n,
                None => return Ok(infeasible),
            }
        }
        Ok(LatticeEnumerator { dim, levels, infeasible: false })
    }

    pub(crate) fn for_each<F>(&self, mut f: F) -> Result<()>
    where
        F: FnMut(&[i128]) -> ControlFlow<()>,
    {
        if self.infeasible || self.dim == 0 {
            return Ok(());
        }
        let mut x = vec![0i128; self.dim];
        walk(&self.levels, 0, &mut x, &mut f).map(|_| ())
    }

    pub(crate) fn count(&self) -> Result<u64> {
        let mut n = 0u64;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }
}

fn bounds(rows: &[Constraint], k: usize, x: &[i128]) -> Result<(i128, i128)> {
    let mut lo = i128::MIN;
    let mut hi = i128::MAX;
    for row in rows {
        let c = row.coeffs[k];
        let r = ck_sub(row.rhs, ck_dot(&row.coeffs[..k], &x[..k])?)?;
        if c > 0 {
            lo = lo.max(ceil_div(r, c));
        } else {
            hi = hi.min(floor_div(r, c));
        }
    }
    Ok((lo, hi))
}

fn walk<F>(levels: &[Vec<Constraint>], k: usize, x: &mut [i128], f: &mut F) -> Result<ControlFlow<()>>
where
    F: FnMut(&[i128]) -> ControlFlow<()>,
{
    let (lo, hi) = bounds(&levels[k], k, x)?;
    let mut v = lo;
    while v <= hi {
        x[k] = v;
        let flow = if k + 1 == levels.len() { f(x) } else { walk(levels, k + 1, x, f)? };
        if flow.is_break() {
            return Ok(ControlFlow::Break(()));
        }
        v += 1;
    }
    Ok(ControlFlow::Continue(()))
}

/// A row whose right-hand side is `weights . b` for a parameter vector `b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ParamRow {
    coeffs: Vec<i128>,
    weights: Vec<i128>,
}

/// Fourier–Motzkin projection with a symbolic right-hand side.
///
/// The constraint matrix is fixed and projected once; each query supplies the
/// base right-hand side vector. Every projected row is a nonnegative
/// combination of base rows, so its bound is that same combination of `b`.
#[derive(Clone, Debug)]
pub(crate) struct ParametricEnumerator {
    dim: usize,
    base_rows: usize,
    levels: Vec<Vec<ParamRow>>,
    constant_rows: Vec<ParamRow>,
}

fn param_normalize(row: ParamRow) -> ParamRow {
    let g = gcd_i128(&row.coeffs).abs();
    let g = row.weights.iter().fold(g, |acc, &w| num_integer::Integer::gcd(&acc, &w));
    if g <= 1 {
        return row;
    }
    ParamRow {
        coeffs: row.coeffs.iter().map(|c| c / g).collect(),
        weights: row.weights.iter().map(|w| w / g).collect(),
    }
}

impl ParametricEnumerator {
    /// `matrix[i] . t >= b_i` for each base row `i`.
    pub(crate) fn new(dim: usize, matrix: &[Vec<i128>], max_rows: usize) -> Result<Self> {
        let base_rows = matrix.len();
        let mut current: BTreeSet<ParamRow> = matrix
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut weights = vec![0; base_rows];
                weights[i] = 1;
                ParamRow { coeffs: c.clone(), weights }
            })
            .collect();
        let mut levels = vec![Vec::new(); dim];
        let mut constant_rows = Vec::new();
        let mut total = current.len();
        for k in (0..dim).rev() {
            let (with_k, without_k): (Vec<_>, Vec<_>) =
                current.into_iter().partition(|r| r.coeffs[k] != 0);
            let pos: Vec<&ParamRow> = with_k.iter().filter(|r| r.coeffs[k] > 0).collect();
            let neg: Vec<&ParamRow> = with_k.iter().filter(|r| r.coeffs[k] < 0).collect();
            if pos.is_empty() || neg.is_empty() {
                return Err(Error::Unbounded);
            }
            let mut next: BTreeSet<ParamRow> = without_k.into_iter().collect();
            if k > 0 {
                for p in &pos {
                    for q in &neg {
                        let (fp, fq) = (-q.coeffs[k], p.coeffs[k]);
                        let lin = |a: &[i128], b: &[i128]| -> Result<Vec<i128>> {
                            a.iter()
                                .zip(b)
                                .map(|(x, y)| ck_add(ck_mul(fp, *x)?, ck_mul(fq, *y)?))
                                .collect()
                        };
                        let row = param_normalize(ParamRow {
                            coeffs: lin(&p.coeffs, &q.coeffs)?,
                            weights: lin(&p.weights, &q.weights)?,
                        });
                        next.insert(row);
                    }
                }
                total += next.len();
                if total > max_rows {
                    return Err(Error::Budget(format!(
                        "projection exceeds {max_rows} rows"
                    )));
                }
            }
            levels[k] = with_k;
            let (zero, rest): (Vec<_>, Vec<_>) =
                next.into_iter().partition(|r| r.coeffs.iter().all(|&c| c == 0));
            constant_rows.extend(zero);
            current = rest.into_iter().collect();
        }
        constant_rows.extend(current);
        Ok(ParametricEnumerator { dim, base_rows, levels, constant_rows })
    }

    fn instantiate(&self, b: &[i128]) -> Result<Option<Vec<Vec<Constraint>>>> {
        for row in &self.constant_rows {
            if ck_dot(&row.weights, b)? > 0 {
                return Ok(None);
            }
        }
        let mut levels = Vec::with_capacity(self.dim);
        for level in &self.levels {
            let mut rows = Vec::with_capacity(level.len());
            for row in level {
                let g = gcd_i128(&row.coeffs);
                rows.push(Constraint {
                    coeffs: row.coeffs.iter().map(|c| c / g).collect(),
                    rhs: ceil_div(ck_dot(&row.weights, b)?, g),
                });
            }
            levels.push(rows);
        }
        Ok(Some(levels))
    }

    /// First lattice point of `{t : matrix . t >= b}` in lexicographic order.
    pub(crate) fn first(&self, b: &[i128]) -> Result<Option<Vec<i128>>> {
        if b.len() != self.base_rows {
            return Err(Error::InvalidArgument("parameter vector of wrong length".into()));
        }
        let Some(levels) = self.instantiate(b)? else {
            return Ok(None);
        };
        if self.dim == 0 {
            return Ok(Some(Vec::new()));
        }
        let mut x = vec![0i128; self.dim];
        let mut found = None;
        let _ = walk(&levels, 0, &mut x, &mut |p: &[i128]| {
            found = Some(p.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(dim: usize, rows: &[Constraint], lo: i128, hi: i128) -> Vec<Vec<i128>> {
        let mut out = Vec::new();
        let mut x = vec![lo; dim];
        loop {
            if rows.iter().all(|r| r.coeffs.iter().zip(&x).map(|(c, v)| c * v).sum::<i128>() >= r.rhs) {
                out.push(x.clone());
            }
            let mut k = dim;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if x[k] < hi {
                    x[k] += 1;
                    break;
                }
                x[k] = lo;
            }
        }
    }

    fn c(coeffs: &[i128], rhs: i128) -> Constraint {
        Constraint { coeffs: coeffs.to_vec(), rhs }
    }

    #[test]
    fn triangle_points() {
        let rows = vec![c(&[1, 0], 0), c(&[0, 1], 0), c(&[-1, -1], -2)];
        let e = LatticeEnumerator::new(2, rows.clone()).unwrap();
        let mut got = Vec::new();
        e.for_each(|x| {
            got.push(x.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(got, brute(2, &rows, -5, 5));
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn thin_polytope_matches_brute_force() {
        let rows = vec![
            c(&[3, -2, 1], -1),
            c(&[-3, 2, -1], -1),
            c(&[1, 0, 0], -4),
            c(&[-1, 0, 0], -4),
            c(&[0, 1, 0], -4),
            c(&[0, -1, 0], -4),
            c(&[0, 0, 1], -4),
            c(&[0, 0, -1], -4),
        ];
        let e = LatticeEnumerator::new(3, rows.clone()).unwrap();
        let mut got = Vec::new();
        e.for_each(|x| {
            got.push(x.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(got, brute(3, &rows, -4, 4));
    }

    #[test]
    fn empty_and_unbounded() {
        let e = LatticeEnumerator::new(1, vec![c(&[2], 1), c(&[-2], -1)]).unwrap();
        assert_eq!(e.count().unwrap(), 0);
        assert!(matches!(LatticeEnumerator::new(1, vec![c(&[1], 0)]), Err(Error::Unbounded)));
    }

    #[test]
    fn parametric_matches_concrete() {
        let matrix = vec![vec![1, 2], vec![-1, 1], vec![0, -1], vec![2, -3]];
        let p = ParametricEnumerator::new(2, &matrix, 1000).unwrap();
        for b in [[-3, -3, -3, -6], [0, 0, -2, 0], [5, 5, 0, 0], [-10, -1, -4, -7]] {
            let rows: Vec<Constraint> =
                matrix.iter().zip(b).map(|(m, r)| c(m, r)).collect();
            let expect = brute(2, &rows, -20, 20).into_iter().next();
            assert_eq!(p.first(&b).unwrap(), expect, "b = {b:?}");
        }
    }
}
