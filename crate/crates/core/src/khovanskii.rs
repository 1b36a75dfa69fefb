//! Khovanskii's constant `C`, the inner polytopes `Δ(h, C)` and the depth
//! certificate `ρ`.
//!
//! Throughout, `Δ = conv(A)` and `m = |A|`. Once `0 ∈ A`, every rational
//! combination `z = sum λ_i a_i` that is integral can be rounded to an integer
//! combination within l1 distance `C` of `λ`. Consequently the lattice points
//! of `Δ(h, C) = C sum a_i + (h - C - mC) Δ` all lie in `hA`, and so does
//! every lattice point of `hΔ` farther than `ρ` from its boundary.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{l1, least_root_above, norm_sq, rat_int, to_i128, to_u64, Rat};
use crate::ehrhart::{ehrhart_interpolate, RationalPolynomial};
use crate::error::{Error, Result};
use crate::feasibility::BasisFeasibility;
use crate::geometry::{
    convex_hull, rat_point, sqdiameter, sqdist_parallel_hyperplanes, sqdist_point_boundary,
    zonotope_hull, HalfSpace, Polytope, SqDistance,
};
use crate::lattice::{elements_generate_lattice, IntVector, IntegerRepSolver};
use crate::membership::SumsetMembership;
use crate::sumset::{GrowthSeries, LatticePointSet};

/// Largest `|A|` for which the zonotope of `A` is enumerated.
pub const DEFAULT_ZONOTOPE_BUDGET: usize = 14;

/// Seed used by certificate replay unless another one is given.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

fn coords_i128(p: &IntVector) -> Result<Vec<i128>> {
    p.coords().iter().map(|c| to_i128(c, "point coordinate")).collect()
}

/// Translates `A` so that it contains the origin.
///
/// Sets that already contain `0` are returned unchanged with a zero shift;
/// otherwise the lexicographically least point (always a vertex of the hull)
/// is moved to the origin.
pub fn normalize_to_origin(a: &LatticePointSet) -> Result<(LatticePointSet, IntVector)> {
    let Some(first) = a.first() else {
        return Err(Error::InvalidArgument("empty point set".into()));
    };
    if a.contains_origin() {
        return Ok((a.clone(), IntVector::zeros(a.dim())));
    }
    let shift = first.clone();
    Ok((a.translate(&-&shift), shift))
}

/// Lattice points of the zonotope `{sum λ_i a_i : 0 <= λ_i <= 1}`.
pub fn zonotope_lattice_points(a: &LatticePointSet) -> Result<LatticePointSet> {
    zonotope_lattice_points_with_budget(a, DEFAULT_ZONOTOPE_BUDGET)
}

/// Candidates come from the hull of the subset sums; each one is kept only
/// after an explicit `λ` is found by exact feasibility.
pub fn zonotope_lattice_points_with_budget(
    a: &LatticePointSet,
    budget: usize,
) -> Result<LatticePointSet> {
    if a.len() > budget {
        return Err(Error::ZonotopeTooLarge { generators: a.len(), budget });
    }
    let n = a.dim();
    let gens: Vec<IntVector> = a.iter().filter(|g| !g.is_zero()).cloned().collect();
    let zono = zonotope_hull(&gens, budget)?;
    let candidates: Vec<IntVector> = zono.lattice_points()?.iter().cloned().collect();
    let matrix = (0..n)
        .map(|d| gens.iter().map(|g| to_i128(&g[d], "generator")).collect())
        .collect::<Result<Vec<Vec<i128>>>>()?;
    let feas = BasisFeasibility::new(matrix, Some(vec![1; gens.len()]))?;
    let kept = candidates
        .into_par_iter()
        .map(|x| Ok(feas.solve(&coords_i128(&x)?)?.map(|_| x)))
        .collect::<Result<Vec<Option<IntVector>>>>()?;
    LatticePointSet::from_points(n, kept.into_iter().flatten())
}

/// Witness for the constant `C = m + q`.
///
/// `reps[x]` is an integer coefficient vector over the points of `A` (in
/// lexicographic order) with `sum reps[x]_i a_i = x`, and `q` is the largest
/// l1 norm among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhovanskiiCert {
    pub a: LatticePointSet,
    pub m: u64,
    pub x_set: LatticePointSet,
    pub reps: BTreeMap<IntVector, Vec<BigInt>>,
    pub q: u64,
    pub c: u64,
}

impl KhovanskiiCert {
    /// `C + mC`, the dilation at which `Δ(h, C)` stops being empty.
    pub fn scale(&self) -> u64 {
        self.c * (self.m + 1)
    }
}

pub fn khovanskii_constant(a: &LatticePointSet) -> Result<KhovanskiiCert> {
    khovanskii_constant_with_budget(a, DEFAULT_ZONOTOPE_BUDGET)
}

pub fn khovanskii_constant_with_budget(a: &LatticePointSet, budget: usize) -> Result<KhovanskiiCert> {
    if !a.contains_origin() {
        return Err(Error::MissingOrigin);
    }
    if !elements_generate_lattice(a)? {
        return Err(Error::NotGenerating);
    }
    let x_set = zonotope_lattice_points_with_budget(a, budget)?;
    let solver = IntegerRepSolver::new(a)?;
    let reps = x_set
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            let rep = solver
                .solve(x)?
                .ok_or_else(|| Error::Degenerate(format!("no integer representation of {x}")))?;
            Ok((x.clone(), rep))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let q = reps.values().map(|r| l1(r)).max().unwrap_or_default();
    let q = to_u64(&q, "representation norm")?;
    let m = a.len() as u64;
    Ok(KhovanskiiCert { a: a.clone(), m, x_set, reps, q, c: m + q })
}

/// Replays the rounding argument on random rational coefficient vectors.
///
/// Each trial draws an integer vector `N` and moves it along random rational
/// combinations of the integer kernel of `A`, giving `λ` with
/// `z = sum λ_i a_i = sum N_i a_i` integral. With `x = z - sum ⌊λ_i⌋ a_i`, the
/// coefficients `n = reps[x] + ⌊λ⌋` must satisfy `sum n_i a_i = z` and
/// `sum |n_i - λ_i| < C`. The first trial uses `λ = N`.
pub fn verify_c_certificate(cert: &KhovanskiiCert, trials: u64, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    let pts: Vec<&IntVector> = cert.a.iter().collect();
    let m = pts.len();
    let n = cert.a.dim();
    let solver = IntegerRepSolver::new(&cert.a)?;
    let kernel: Vec<Vec<Rat>> =
        solver.kernel().iter().map(|k| k.iter().map(rat_int).collect()).collect();
    let bound = Rat::from_integer(BigInt::from(cert.c));
    let combine = |coeffs: &[BigInt]| -> IntVector {
        let mut acc = vec![BigInt::zero(); n];
        for (c, p) in coeffs.iter().zip(&pts) {
            for (s, v) in acc.iter_mut().zip(p.coords()) {
                *s += c * v;
            }
        }
        IntVector::new(acc)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let base: Vec<BigInt> = (0..m).map(|_| BigInt::from(rng.gen_range(-8i64..=8))).collect();
        let mut lambda: Vec<Rat> = base.iter().map(rat_int).collect();
        if t > 0 {
            for k in &kernel {
                let coef = Rat::new(
                    BigInt::from(rng.gen_range(-24i64..=24)),
                    BigInt::from(rng.gen_range(1i64..=12)),
                );
                for (l, kv) in lambda.iter_mut().zip(k) {
                    *l += &coef * kv;
                }
            }
        }
        let z = combine(&base);
        let floors: Vec<BigInt> = lambda.iter().map(|l| l.floor().to_integer()).collect();
        let x = &z - &combine(&floors);
        let Some(rep) = cert.reps.get(&x) else {
            return Ok(false);
        };
        let coeffs: Vec<BigInt> = rep.iter().zip(&floors).map(|(r, f)| r + f).collect();
        if combine(&coeffs) != z {
            return Ok(false);
        }
        let dist: Rat = coeffs.iter().zip(&lambda).map(|(c, l)| (rat_int(c) - l).abs()).sum();
        if dist >= bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerShape {
    Empty,
    Point(IntVector),
    Body(Polytope),
}

/// `Δ(h, C) = {sum λ_i a_i : λ_i >= C, sum λ_i <= h - C}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerPolytope {
    pub h: u64,
    pub c: u64,
    pub m: u64,
    pub shape: InnerShape,
}

impl InnerPolytope {
    pub fn lattice_points(&self, dim: usize) -> Result<LatticePointSet> {
        match &self.shape {
            InnerShape::Empty => Ok(LatticePointSet::new(dim)),
            InnerShape::Point(p) => LatticePointSet::from_points(dim, [p.clone()]),
            InnerShape::Body(p) => p.lattice_points(),
        }
    }
}

/// `Δ(h, C)` through the identity `C sum a_i + (h - C - mC) Δ`.
pub fn inner_polytope(a: &LatticePointSet, h: u64, c: u64) -> Result<InnerPolytope> {
    if c == 0 {
        return Err(Error::InvalidArgument("C must be positive".into()));
    }
    if !a.contains_origin() {
        return Err(Error::MissingOrigin);
    }
    let m = a.len() as u64;
    let scale = c
        .checked_mul(m + 1)
        .ok_or(Error::Overflow("inner polytope threshold"))?;
    let anchor = a.sum().scale(&BigInt::from(c));
    let shape = match h.cmp(&scale) {
        std::cmp::Ordering::Less => InnerShape::Empty,
        std::cmp::Ordering::Equal => InnerShape::Point(anchor),
        std::cmp::Ordering::Greater => {
            InnerShape::Body(convex_hull(a)?.dilate(h - scale)?.translate(&anchor)?)
        }
    };
    Ok(InnerPolytope { h, c, m, shape })
}

/// Lattice points of `Δ(h, C)` straight from its definition.
///
/// With `μ_i = λ_i - C`, a point `x` belongs iff
/// `sum μ_i a_i = x - C sum a_i`, `sum μ_i + s = h - C - mC` has a solution
/// with `μ, s >= 0`; every point of the box spanned by the images of the
/// simplex vertices is tested by exact feasibility.
pub fn inner_polytope_direct_lattice_points(
    a: &LatticePointSet,
    h: u64,
    c: u64,
) -> Result<LatticePointSet> {
    let n = a.dim();
    let pts = a.iter().map(coords_i128).collect::<Result<Vec<_>>>()?;
    let m = pts.len() as i128;
    let (h, c) = (i128::from(h), i128::from(c));
    let k = h - c * (m + 1);
    let anchor: Vec<i128> = (0..n).map(|d| c * pts.iter().map(|p| p[d]).sum::<i128>()).collect();

    let mut matrix: Vec<Vec<i128>> = (0..n)
        .map(|d| pts.iter().map(|p| p[d]).chain([0]).collect())
        .collect();
    matrix.push(vec![1; pts.len() + 1]);
    let feas = BasisFeasibility::new(matrix, None)?;

    let corners: Vec<Vec<i128>> = std::iter::once(anchor.clone())
        .chain(pts.iter().map(|p| anchor.iter().zip(p).map(|(s, v)| s + k * v).collect()))
        .collect();
    let ranges: Vec<std::ops::RangeInclusive<i128>> = (0..n)
        .map(|d| {
            let lo = corners.iter().map(|p| p[d]).min().unwrap_or(0);
            let hi = corners.iter().map(|p| p[d]).max().unwrap_or(0);
            lo..=hi
        })
        .collect();
    let mut out = LatticePointSet::new(n);
    for x in ranges.into_iter().multi_cartesian_product() {
        let mut b: Vec<i128> = x.iter().zip(&anchor).map(|(xi, s)| xi - s).collect();
        b.push(k);
        if feas.solve(&b)?.is_some() {
            out.insert(IntVector::new(x.into_iter().map(BigInt::from).collect()))?;
        }
    }
    Ok(out)
}

/// Outcome of checking that the lattice points of `Δ(h, C)` lie in `hA`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma2Report {
    pub h: u64,
    pub c: u64,
    pub m: u64,
    pub inner_points: usize,
    pub missing: Vec<IntVector>,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.missing.is_empty()
    }
}

/// Reusable checker for a fixed `A` and `C`.
pub struct Lemma2Checker {
    a: LatticePointSet,
    c: u64,
    oracle: SumsetMembership,
}

impl Lemma2Checker {
    pub fn new(cert: &KhovanskiiCert) -> Result<Self> {
        Ok(Lemma2Checker { a: cert.a.clone(), c: cert.c, oracle: SumsetMembership::new(&cert.a)? })
    }

    pub fn check(&self, h: u64) -> Result<Lemma2Report> {
        if h == 0 {
            return Err(Error::InvalidArgument("h must be positive".into()));
        }
        let inner = inner_polytope(&self.a, h, self.c)?;
        let points: Vec<IntVector> = inner.lattice_points(self.a.dim())?.iter().cloned().collect();
        let found = points
            .par_iter()
            .map(|z| self.oracle.contains(z, h))
            .collect::<Result<Vec<bool>>>()?;
        let missing = points
            .iter()
            .zip(found)
            .filter(|(_, ok)| !ok)
            .map(|(z, _)| z.clone())
            .collect();
        Ok(Lemma2Report { h, c: self.c, m: inner.m, inner_points: points.len(), missing })
    }
}

pub fn lemma2_check(a: &LatticePointSet, h: u64) -> Result<Lemma2Report> {
    Lemma2Checker::new(&khovanskii_constant(a)?)?.check(h)
}

/// Squared gap between `H_i = h G_i` and `H_i' = (h - C - mC) G_i + C sum a_i`
/// for one facet `G_i` of `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetGap {
    pub facet: HalfSpace,
    pub gap_sq: SqDistance,
    pub gap_sq_next: SqDistance,
    pub formula_sq: SqDistance,
}

impl FacetGap {
    pub fn consistent(&self) -> bool {
        self.gap_sq == self.gap_sq_next && self.gap_sq == self.formula_sq
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoCert {
    /// The point subtracted from `A`; zero when `0 ∈ A` already.
    pub normalization: IntVector,
    pub normalized: LatticePointSet,
    /// `conv` of the normalized set.
    pub delta: Polytope,
    pub c: u64,
    pub m: u64,
    pub q: u64,
    /// `C + mC`.
    pub scale: u64,
    /// `C + mC + 1`, the first dilation at which gaps are measured.
    pub h0: u64,
    /// Squared diameter of `(C + mC) Δ`.
    pub diameter_sq: SqDistance,
    pub facet_gaps: Vec<FacetGap>,
    pub rho_sq: SqDistance,
}

impl RhoCert {
    pub fn gaps_consistent(&self) -> bool {
        self.facet_gaps.iter().all(FacetGap::consistent)
    }
}

pub fn rho_certificate(a: &LatticePointSet) -> Result<RhoCert> {
    let (normalized, shift) = normalize_to_origin(a)?;
    let cert = khovanskii_constant(&normalized)?;
    rho_certificate_from_constant(&cert, shift)
}

/// Builds `ρ` from a constant already computed for the normalized set.
pub fn rho_certificate_from_constant(cert: &KhovanskiiCert, shift: IntVector) -> Result<RhoCert> {
    let delta = convex_hull(&cert.a)?;
    let scale = cert.scale();
    let h0 = scale + 1;
    let anchor = cert.a.sum().scale(&BigInt::from(cert.c));
    let scale_big = BigInt::from(scale);
    let gap_at = |g: &HalfSpace, h: u64| -> Result<SqDistance> {
        let outer = g.hyperplane().dilate(&BigInt::from(h));
        let inner = g.hyperplane().dilate(&BigInt::from(h - scale)).translate(&anchor);
        sqdist_parallel_hyperplanes(&outer, &inner)
    };
    let facet_gaps = delta
        .halfspaces()
        .iter()
        .map(|g| {
            let u = g.normal();
            let num = -(&scale_big * g.offset()) + anchor.dot(u);
            let formula = Rat::new(&num * &num, norm_sq(u.coords()));
            Ok(FacetGap {
                facet: g.clone(),
                gap_sq: gap_at(g, h0)?,
                gap_sq_next: gap_at(g, h0 + 1)?,
                formula_sq: SqDistance::new(formula)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = rat_int(&scale_big);
    let diameter_sq = SqDistance::new(sqdiameter(&delta).into_value() * &s * &s)?;
    let rho_sq = facet_gaps
        .iter()
        .map(|f| f.gap_sq.clone())
        .chain([diameter_sq.clone()])
        .max()
        .unwrap_or_else(SqDistance::zero);
    Ok(RhoCert {
        normalization: shift,
        normalized: cert.a.clone(),
        delta,
        c: cert.c,
        m: cert.m,
        q: cert.q,
        scale,
        h0,
        diameter_sq,
        facet_gaps,
        rho_sq,
    })
}

/// Deep lattice points of `hΔ` and those among them missing from `hA`, in the
/// coordinates of the original (unnormalized) set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub h: u64,
    pub scale: u64,
    pub rho_sq: SqDistance,
    pub deep_points: Vec<IntVector>,
    pub violations: Vec<IntVector>,
    /// `|hΔ ∩ Z^n|`.
    pub lattice_count: u64,
    /// `|hA|`, when a growth series covering `h` was supplied.
    pub sumset_count: Option<u64>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the depth statement for one certificate over many `h`.
///
/// A point at squared distance `> ρ²` from every facet `(x, u_i) >= hα_i`
/// satisfies `(x, u_i) - hα_i >= k_i`, where `k_i` is the least integer with
/// `k_i² > ρ²|u_i|²`; those points are enumerated directly. When the width of
/// `hΔ` in some facet direction is below `k_i` the deep set is empty.
pub struct TheoremChecker {
    cert: RhoCert,
    oracle: SumsetMembership,
    ehrhart: RationalPolynomial,
    widths: Vec<BigInt>,
    margins: Vec<BigInt>,
    growth: Option<GrowthSeries>,
}

impl TheoremChecker {
    pub fn new(cert: &RhoCert) -> Result<Self> {
        let oracle = SumsetMembership::new(&cert.normalized)?;
        let ehrhart = ehrhart_interpolate(&cert.delta)?;
        let mut widths = Vec::new();
        let mut margins = Vec::new();
        for g in cert.delta.halfspaces() {
            let top = cert
                .delta
                .vertices()
                .iter()
                .map(|v| g.hyperplane().excess(v))
                .max()
                .unwrap_or_default();
            widths.push(top.to_integer());
            margins.push(least_root_above(&(cert.rho_sq.value() * rat_int(&norm_sq(g.normal().coords())))));
        }
        Ok(TheoremChecker { cert: cert.clone(), oracle, ehrhart, widths, margins, growth: None })
    }

    /// Supplies `|hA|` counts (translation invariant) for the reports.
    pub fn with_growth_series(mut self, series: GrowthSeries) -> Self {
        self.growth = Some(series);
        self
    }

    pub fn certificate(&self) -> &RhoCert {
        &self.cert
    }

    fn deep_points(&self, h: u64) -> Result<Vec<IntVector>> {
        let hb = BigInt::from(h);
        if self.widths.iter().zip(&self.margins).any(|(w, k)| &(w * &hb) < k) {
            return Ok(Vec::new());
        }
        let body = self.cert.delta.dilate(h)?;
        let mut points = Vec::new();
        body.enumerator_with_margins(&self.margins)?.for_each(|x| {
            points.push(IntVector::new(x.iter().map(|&c| BigInt::from(c)).collect()));
            std::ops::ControlFlow::Continue(())
        })?;
        for z in &points {
            if sqdist_point_boundary(&body, &rat_point(z))? <= self.cert.rho_sq {
                return Err(Error::Degenerate(format!("point {z} is not deeper than rho")));
            }
        }
        Ok(points)
    }

    pub fn check(&self, h: u64) -> Result<TheoremReport> {
        if h == 0 {
            return Err(Error::InvalidArgument("h must be positive".into()));
        }
        let deep = self.deep_points(h)?;
        let found = deep
            .par_iter()
            .map(|z| self.oracle.contains(z, h))
            .collect::<Result<Vec<bool>>>()?;
        let offset = self.cert.normalization.scale(&BigInt::from(h));
        let violations = deep
            .iter()
            .zip(&found)
            .filter(|(_, ok)| !**ok)
            .map(|(z, _)| z + &offset)
            .collect();
        let deep_points = deep.iter().map(|z| z + &offset).collect();
        let count = self.ehrhart.eval(&Rat::from_integer(BigInt::from(h)));
        if !count.is_integer() {
            return Err(Error::Degenerate("non-integral lattice point count".into()));
        }
        let sumset_count = self
            .growth
            .as_ref()
            .and_then(|g| usize::try_from(h).ok().and_then(|i| g.counts.get(i).copied()));
        Ok(TheoremReport {
            h,
            scale: self.cert.scale,
            rho_sq: self.cert.rho_sq.clone(),
            deep_points,
            violations,
            lattice_count: to_u64(&count.to_integer(), "lattice point count")?,
            sumset_count,
        })
    }

    pub fn check_range(&self, from: u64, to: u64) -> Result<Vec<TheoremReport>> {
        (from..=to).map(|h| self.check(h)).collect()
    }
}

/// Runs the depth check for `A` with a certificate built from the same set.
pub fn theorem_check(a: &LatticePointSet, h: u64, cert: &RhoCert) -> Result<TheoremReport> {
    let (normalized, shift) = normalize_to_origin(a)?;
    if normalized != cert.normalized || shift != cert.normalization {
        return Err(Error::InvalidArgument("certificate was built for a different set".into()));
    }
    TheoremChecker::new(cert)?.check(h)
}
