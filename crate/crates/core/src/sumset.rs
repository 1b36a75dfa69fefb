//! Finite lattice point sets and their h-fold sumsets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::geometry::convex_hull;
use crate::lattice::IntVector;

/// A finite subset of `Z^n`, deduplicated and iterated in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePointSet {
    dim: usize,
    points: BTreeSet<IntVector>,
}

impl LatticePointSet {
    pub fn new(dim: usize) -> Self {
        LatticePointSet { dim, points: BTreeSet::new() }
    }

    pub fn from_points<I: IntoIterator<Item = IntVector>>(dim: usize, points: I) -> Result<Self> {
        let mut set = LatticePointSet::new(dim);
        for p in points {
            set.insert(p)?;
        }
        Ok(set)
    }

    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::InvalidArgument("empty point list".into()))?;
        LatticePointSet::from_points(dim, points.iter().map(|p| IntVector::from_i64(p)))
    }

    /// Inserts a point; returns `false` if it was already present.
    pub fn insert(&mut self, p: IntVector) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.dim() });
        }
        Ok(self.points.insert(p))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &IntVector) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &IntVector> + '_ {
        self.points.iter()
    }

    pub fn first(&self) -> Option<&IntVector> {
        self.points.first()
    }

    pub fn is_subset(&self, other: &LatticePointSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn difference(&self, other: &LatticePointSet) -> Vec<IntVector> {
        self.points.difference(&other.points).cloned().collect()
    }

    pub fn translate(&self, b: &IntVector) -> LatticePointSet {
        LatticePointSet {
            dim: self.dim,
            points: self.points.iter().map(|p| p + b).collect(),
        }
    }

    /// `sum_i a_i`.
    pub fn sum(&self) -> IntVector {
        self.points.iter().fold(IntVector::zeros(self.dim), |acc, p| &acc + p)
    }

    /// Pointwise dilation `h * A = {h a : a in A}`.
    pub fn dilate(&self, h: &BigInt) -> LatticePointSet {
        LatticePointSet {
            dim: self.dim,
            points: self.points.iter().map(|p| p.scale(h)).collect(),
        }
    }

    /// Minkowski sum `self + other`.
    pub fn minkowski_sum(&self, other: &LatticePointSet) -> Result<LatticePointSet> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = LatticePointSet::new(self.dim);
        for p in &self.points {
            for q in &other.points {
                out.points.insert(p + q);
            }
        }
        Ok(out)
    }

    pub fn contains_origin(&self) -> bool {
        self.points.iter().any(IntVector::is_zero)
    }
}

impl<'a> IntoIterator for &'a LatticePointSet {
    type Item = &'a IntVector;
    type IntoIter = std::collections::btree_set::Iter<'a, IntVector>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// `|hA|` for `h = 0, 1, ..., H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeries {
    pub counts: Vec<u64>,
}

impl GrowthSeries {
    pub fn horizon(&self) -> u64 {
        self.counts.len() as u64 - 1
    }
}

/// Cap on the number of cells of the bounding box used by the sumset engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumsetBudget {
    pub max_cells: u64,
}

impl Default for SumsetBudget {
    fn default() -> Self {
        SumsetBudget { max_cells: 1 << 30 }
    }
}

/// Incremental `hA` engine.
///
/// `A` is translated so that its lexicographically least point sits at the
/// origin; then `hA ⊆ (h+1)A` and the points new at step `h+1` are exactly
/// `(new_h + A) \ hA`. Points are packed into offsets of a bounding box of
/// `H * conv(A)` and tracked in a bitset.
pub(crate) struct SumsetGrower {
    dim: usize,
    shift: IntVector,
    lo: Vec<i64>,
    strides: Vec<i64>,
    offsets: Vec<i64>,
    bits: Vec<u64>,
    frontier: Vec<u64>,
    level: u64,
    horizon: u64,
    count: u64,
}

impl SumsetGrower {
    pub(crate) fn new(a: &LatticePointSet, horizon: u64, budget: SumsetBudget) -> Result<Self> {
        let dim = a.dim();
        let shift = a
            .first()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
        let gens: Vec<Vec<i64>> = a
            .iter()
            .map(|p| {
                (p - &shift)
                    .coords()
                    .iter()
                    .map(|c| c.to_i64().ok_or(Error::Overflow("sumset coordinates")))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<_>>()?;
        let hz = i64::try_from(horizon).map_err(|_| Error::Overflow("sumset horizon"))?;
        let mut lo = Vec::with_capacity(dim);
        let mut extent = Vec::with_capacity(dim);
        for k in 0..dim {
            let mn = gens.iter().map(|g| g[k]).min().unwrap_or(0).min(0);
            let mx = gens.iter().map(|g| g[k]).max().unwrap_or(0).max(0);
            let l = mn.checked_mul(hz).ok_or(Error::Overflow("sumset box"))?;
            let u = mx.checked_mul(hz).ok_or(Error::Overflow("sumset box"))?;
            lo.push(l);
            extent.push((u - l + 1) as u64);
        }
        let cells = extent
            .iter()
            .try_fold(1u64, |acc, &e| acc.checked_mul(e))
            .filter(|&c| c <= budget.max_cells)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "sumset box for horizon {horizon} exceeds {} cells",
                    budget.max_cells
                ))
            })?;
        let mut strides = vec![1i64; dim];
        for k in (0..dim.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * extent[k + 1] as i64;
        }
        let offsets = gens
            .iter()
            .filter(|g| g.iter().any(|&c| c != 0))
            .map(|g| g.iter().zip(&strides).map(|(c, s)| c * s).sum())
            .collect();
        let origin: i64 = lo.iter().zip(&strides).map(|(l, s)| -l * s).sum();
        let mut bits = vec![0u64; cells.div_ceil(64) as usize];
        let o = origin as u64;
        bits[(o / 64) as usize] |= 1 << (o % 64);
        Ok(SumsetGrower {
            dim,
            shift,
            lo,
            strides,
            offsets,
            bits,
            frontier: vec![o],
            level: 0,
            horizon,
            count: 1,
        })
    }

    pub(crate) fn level(&self) -> u64 {
        self.level
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }

    /// Advances from `hA` to `(h+1)A`.
    pub(crate) fn step(&mut self) -> Result<()> {
        if self.level >= self.horizon {
            return Err(Error::InvalidArgument("sumset engine horizon reached".into()));
        }
        let mut next = Vec::new();
        for &f in &self.frontier {
            for &off in &self.offsets {
                let k = (f as i64 + off) as u64;
                let (w, b) = ((k / 64) as usize, k % 64);
                if self.bits[w] & (1 << b) == 0 {
                    self.bits[w] |= 1 << b;
                    next.push(k);
                }
            }
        }
        self.count += next.len() as u64;
        self.frontier = next;
        self.level += 1;
        Ok(())
    }

    fn decode(&self, key: u64) -> IntVector {
        let mut rem = key as i64;
        let mut coords = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let q = rem / self.strides[k];
            rem -= q * self.strides[k];
            coords.push(BigInt::from(q + self.lo[k]));
        }
        let h = BigInt::from(self.level);
        &IntVector::new(coords) + &self.shift.scale(&h)
    }

    /// Materializes the current `hA` in original coordinates.
    pub(crate) fn points(&self) -> LatticePointSet {
        let mut out = LatticePointSet::new(self.dim);
        for (w, &word) in self.bits.iter().enumerate() {
            let mut bitsleft = word;
            while bitsleft != 0 {
                let b = bitsleft.trailing_zeros() as u64;
                bitsleft &= bitsleft - 1;
                out.points.insert(self.decode(w as u64 * 64 + b));
            }
        }
        out
    }
}

/// `hA = {a_1 + ... + a_h}`; `0A = {0}`.
pub fn h_fold_sumset(a: &LatticePointSet, h: u64) -> Result<LatticePointSet> {
    h_fold_sumset_with_budget(a, h, SumsetBudget::default())
}

pub fn h_fold_sumset_with_budget(
    a: &LatticePointSet,
    h: u64,
    budget: SumsetBudget,
) -> Result<LatticePointSet> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    if h == 0 {
        return LatticePointSet::from_points(a.dim(), [IntVector::zeros(a.dim())]);
    }
    let mut g = SumsetGrower::new(a, h, budget)?;
    while g.level() < h {
        g.step()?;
    }
    Ok(g.points())
}

pub fn growth_series(a: &LatticePointSet, horizon: u64) -> Result<GrowthSeries> {
    growth_series_with_budget(a, horizon, SumsetBudget::default())
}

pub fn growth_series_with_budget(
    a: &LatticePointSet,
    horizon: u64,
    budget: SumsetBudget,
) -> Result<GrowthSeries> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let mut g = SumsetGrower::new(a, horizon, budget)?;
    let mut counts = vec![1u64];
    while g.level() < horizon {
        g.step()?;
        counts.push(g.count());
    }
    Ok(GrowthSeries { counts })
}

/// `hA ⊆ (h * conv A) ∩ Z^n`. A `false` return means an implementation bug.
pub fn sumset_in_dilate_check(a: &LatticePointSet, h: u64) -> Result<bool> {
    if h == 0 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    let dilated = convex_hull(a)?.dilate(h)?;
    let sums = h_fold_sumset(a, h)?;
    let inside = sums.iter().all(|p| dilated.contains_int(p));
    Ok(inside)
}

/// `|hA|` for a single `h`.
pub fn sumset_size(a: &LatticePointSet, h: u64) -> Result<u64> {
    if h == 0 {
        return Ok(1);
    }
    Ok(*growth_series(a, h)?.counts.last().unwrap_or(&1))
}
