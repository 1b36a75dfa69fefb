//! Ehrhart polynomials of lattice polytopes and eventual polynomiality of
//! `|hA|`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat, rat_int, Rat};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, Polytope};
use crate::lattice::generates_full_lattice;
use crate::sumset::{growth_series, GrowthSeries, LatticePointSet};

/// Polynomial in one variable with exact rational coefficients, lowest
/// degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rat>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rat {
        self.eval(&Rat::from_integer(BigInt::from(x)))
    }

    fn add(&self, other: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        RationalPolynomial::new((0..len).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    fn mul_linear(&self, root: &Rat) -> RationalPolynomial {
        // (x - root) * self
        let mut out = vec![Rat::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        RationalPolynomial::new(out)
    }

    fn scale(&self, k: &Rat) -> RationalPolynomial {
        RationalPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_rat(c),
                1 => format!("{}*h", fmt_rat(c)),
                _ => format!("{}*h^{i}", fmt_rat(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The polynomial of degree `< values.len()` taking `values[j]` at `h0 + j`,
/// by Newton forward differences.
fn interpolate_from(h0: u64, values: &[BigInt]) -> RationalPolynomial {
    let mut table: Vec<BigInt> = values.to_vec();
    let mut leading_diffs = Vec::with_capacity(values.len());
    while let Some(first) = table.first() {
        leading_diffs.push(first.clone());
        table = table.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let start = Rat::from_integer(BigInt::from(h0));
    let mut basis = RationalPolynomial::new(vec![Rat::one()]);
    let mut out = RationalPolynomial::default();
    for (k, d) in leading_diffs.iter().enumerate() {
        out = out.add(&basis.scale(&rat_int(d)));
        // basis_{k+1}(h) = basis_k(h) * (h - h0 - k) / (k + 1)
        let root = &start + Rat::from_integer(BigInt::from(k));
        basis = basis.mul_linear(&root).scale(&Rat::new(BigInt::one(), BigInt::from(k + 1)));
    }
    out
}

fn dilate_count(p: &Polytope, h: u64) -> Result<u64> {
    if h == 0 {
        return Ok(1);
    }
    p.dilate(h)?.count_lattice_points()
}

/// Interpolates `|hP ∩ Z^n|` through `h = 0, ..., n`.
pub fn ehrhart_interpolate(p: &Polytope) -> Result<RationalPolynomial> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { rank: 0, dim: p.dim() });
    }
    if !p.is_lattice_polytope() {
        return Err(Error::NonLatticeVertex);
    }
    let counts = (0..=p.dim() as u64)
        .map(|h| dilate_count(p, h).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(interpolate_from(0, &counts))
}

/// Compares `p(h)` with direct counts for `h = n+1, ..., horizon`.
pub fn verify_ehrhart(p: &Polytope, poly: &RationalPolynomial, horizon: u64) -> Result<bool> {
    for h in p.dim() as u64 + 1..=horizon {
        let direct = Rat::from_integer(BigInt::from(dilate_count(p, h)?));
        if poly.eval(&Rat::from_integer(BigInt::from(h))) != direct {
            return Ok(false);
        }
    }
    Ok(true)
}

fn rat_rank(rows: Vec<Vec<Rat>>) -> usize {
    let mut rows = rows;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

fn rat_det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(pivot) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if pivot != c {
            a.swap(c, pivot);
            det = -det;
        }
        det *= &a[c][c];
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * p;
            }
        }
    }
    det
}

fn affine_dim(p: &Polytope, face: &[usize]) -> usize {
    let v = p.vertices();
    let rows = face[1..]
        .iter()
        .map(|&i| v[i].iter().zip(&v[face[0]]).map(|(a, b)| a - b).collect())
        .collect::<Vec<Vec<Rat>>>();
    if rows.is_empty() {
        0
    } else {
        rat_rank(rows)
    }
}

/// Pulling triangulation of a `d`-dimensional face (given by sorted vertex
/// indices) from its first vertex.
fn triangulate(p: &Polytope, facets: &[Vec<usize>], face: &[usize], d: usize, out: &mut Vec<Vec<usize>>) {
    if d == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let subfaces: BTreeSet<Vec<usize>> = facets
        .iter()
        .map(|f| face.iter().copied().filter(|i| f.contains(i)).collect::<Vec<_>>())
        .filter(|s| !s.is_empty() && !s.contains(&apex) && affine_dim(p, s) + 1 == d)
        .collect();
    for s in subfaces {
        let mut sub = Vec::new();
        triangulate(p, facets, &s, d - 1, &mut sub);
        for mut simplex in sub {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
}

/// Euclidean volume by pulling triangulation from the lexicographically
/// least vertex.
pub fn volume(p: &Polytope) -> Result<Rat> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { rank: 0, dim: p.dim() });
    }
    let n = p.dim();
    let facets: Vec<Vec<usize>> = (0..p.halfspaces().len()).map(|i| p.facet_vertices(i)).collect();
    let all: Vec<usize> = (0..p.vertices().len()).collect();
    let mut simplices = Vec::new();
    triangulate(p, &facets, &all, n, &mut simplices);
    let v = p.vertices();
    let mut total = Rat::zero();
    for s in simplices {
        let rows: Vec<Vec<Rat>> = s[1..]
            .iter()
            .map(|&i| v[i].iter().zip(&v[s[0]]).map(|(a, b)| a - b).collect())
            .collect();
        total += rat_det(rows).abs();
    }
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    Ok(total / rat_int(&fact))
}

/// `|∂P ∩ Z^2|` from the gcd of each edge vector.
fn boundary_points_2d(p: &Polytope) -> Result<u64> {
    let v = p.vertices();
    let mut total = BigInt::zero();
    for i in 0..p.halfspaces().len() {
        let ends = p.facet_vertices(i);
        if ends.len() != 2 {
            return Err(Error::Degenerate("edge without two vertices".into()));
        }
        let dx = (&v[ends[1]][0] - &v[ends[0]][0]).to_integer();
        let dy = (&v[ends[1]][1] - &v[ends[0]][1]).to_integer();
        total += dx.gcd(&dy);
    }
    crate::arith::to_u64(&total, "boundary count")
}

/// Coefficient checks on an Ehrhart polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub constant_term: Rat,
    pub leading: Rat,
    pub volume: Rat,
    /// Boundary lattice points, only in the plane.
    pub boundary_points: Option<u64>,
    pub mismatches: Vec<String>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `c_0 = 1`, `c_n = vol(P)`, and in the plane `c_1 = B/2` and
/// `p(1) = area + B/2 + 1`.
pub fn structural_checks(p: &Polytope, poly: &RationalPolynomial) -> Result<StructuralReport> {
    let n = p.dim();
    let vol = volume(p)?;
    let mut mismatches = Vec::new();
    let c0 = poly.coefficient(0);
    if !c0.is_one() {
        mismatches.push(format!("constant term {} != 1", fmt_rat(&c0)));
    }
    if poly.degree().is_some_and(|d| d > n) {
        mismatches.push(format!("degree {} exceeds dimension {n}", poly.degree().unwrap_or(0)));
    }
    let cn = poly.coefficient(n);
    if cn != vol {
        mismatches.push(format!("leading coefficient {} != volume {}", fmt_rat(&cn), fmt_rat(&vol)));
    }
    let mut boundary_points = None;
    if n == 2 {
        let b = boundary_points_2d(p)?;
        let half_b = Rat::new(BigInt::from(b), BigInt::from(2));
        let c1 = poly.coefficient(1);
        if c1 != half_b {
            mismatches.push(format!("middle coefficient {} != B/2 = {}", fmt_rat(&c1), fmt_rat(&half_b)));
        }
        let p1 = poly.eval_int(1);
        let pick = &vol + &half_b + Rat::one();
        if p1 != pick {
            mismatches.push(format!("p(1) = {} != area + B/2 + 1 = {}", fmt_rat(&p1), fmt_rat(&pick)));
        }
        boundary_points = Some(b);
    }
    Ok(StructuralReport { constant_term: c0, leading: cn, volume: vol, boundary_points, mismatches })
}

/// Polynomial agreeing with `|hA|` from `h0` to the end of the tested range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthFit {
    pub h0: u64,
    pub poly: RationalPolynomial,
    pub verified_range: (u64, u64),
    pub volume: Rat,
    pub leading_matches_volume: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthOutcome {
    Fitted(GrowthFit),
    /// The counts up to `horizon` do not settle on a polynomial of degree
    /// at most `n` over a window of `n + 2` values.
    HorizonTooSmall { horizon: u64 },
}

pub fn growth_fit(a: &LatticePointSet, horizon: u64) -> Result<GrowthOutcome> {
    let series = growth_series(a, horizon)?;
    growth_fit_series(a, &series)
}

/// Finds the least `h0` such that `|hA|` is a polynomial of degree at most
/// `n` on `[h0, H]`, i.e. all `(n+1)`-th differences from `h0` on vanish,
/// with at least one such difference observed.
pub fn growth_fit_series(a: &LatticePointSet, series: &GrowthSeries) -> Result<GrowthOutcome> {
    if !generates_full_lattice(a)? {
        return Err(Error::NotGenerating);
    }
    let n = a.dim();
    let horizon = series.horizon();
    let counts: Vec<BigInt> = series.counts.iter().map(|&c| BigInt::from(c)).collect();
    let mut diffs = counts.clone();
    for _ in 0..=n {
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let Some(last) = diffs.last() else {
        return Ok(GrowthOutcome::HorizonTooSmall { horizon });
    };
    if !last.is_zero() {
        return Ok(GrowthOutcome::HorizonTooSmall { horizon });
    }
    let h0 = diffs.iter().rposition(|d| !d.is_zero()).map_or(0, |i| i + 1);
    let start = h0;
    let poly = interpolate_from(h0 as u64, &counts[start..=start + n]);
    for (h, c) in counts.iter().enumerate().skip(start) {
        if poly.eval_int(h as i64) != rat_int(c) {
            return Err(Error::Degenerate("growth polynomial does not reproduce counts".into()));
        }
    }
    let volume = volume(&convex_hull(a)?)?;
    let leading_matches_volume = poly.degree() == Some(n) && poly.leading() == volume;
    Ok(GrowthOutcome::Fitted(GrowthFit {
        h0: h0 as u64,
        poly,
        verified_range: (h0 as u64, horizon),
        volume,
        leading_matches_volume,
    }))
}
