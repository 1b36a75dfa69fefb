//! Subcommand implementations. Each returns a JSON payload and whether a
//! verification failed.

use std::path::Path;

use anyhow::{bail, Result};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sumset_core::khovanskii::{khovanskii_constant_with_budget, rho_certificate_from_constant};
use sumset_core::sumset::{growth_series_with_budget, h_fold_sumset_with_budget};
use sumset_core::{
    convex_hull, ehrhart_interpolate, generates_full_lattice, growth_fit_series, normalize_to_origin,
    structural_checks, verify_c_certificate, verify_ehrhart, volume, Error, GrowthOutcome,
    GrowthSeries, IntVector, KhovanskiiCert, LatticePointSet, Lemma2Checker, RhoCert, SumsetBudget,
    TheoremChecker,
};

use crate::render;

pub struct Limits {
    pub seed: u64,
    pub trials: u64,
    pub max_m: usize,
    pub h_limit: u64,
    pub max_cells: u64,
}

pub struct Outcome {
    pub result: Value,
    pub violation: bool,
}

impl Outcome {
    fn pass(result: Value) -> Self {
        Outcome { result, violation: false }
    }
}

impl Limits {
    fn budget(&self) -> SumsetBudget {
        SumsetBudget { max_cells: self.max_cells }
    }

    fn check_h(&self, h: u64, flag: &str) -> Result<()> {
        if h > self.h_limit {
            bail!("{flag} {h} exceeds --h-limit {}", self.h_limit);
        }
        Ok(())
    }

    fn check_range(&self, from: u64, to: u64) -> Result<()> {
        if from == 0 {
            bail!("--h-from must be positive");
        }
        if from > to {
            bail!("--h-from {from} is larger than --h-to {to}");
        }
        self.check_h(to, "--h-to")
    }
}

/// Normalized set, its shift and the constant `C`.
struct Constant {
    shift: IntVector,
    cert: KhovanskiiCert,
}

fn constant(a: &LatticePointSet, limits: &Limits) -> Result<Constant> {
    if a.len() > limits.max_m {
        bail!("|A| = {} exceeds --max-m {}", a.len(), limits.max_m);
    }
    if !generates_full_lattice(a)? {
        bail!("the differences of A do not generate Z^{}", a.dim());
    }
    let (normalized, shift) = normalize_to_origin(a)?;
    let cert = khovanskii_constant_with_budget(&normalized, limits.max_m)?;
    Ok(Constant { shift, cert })
}

fn growth_within_budget(a: &LatticePointSet, horizon: u64, limits: &Limits) -> Result<Option<GrowthSeries>> {
    match growth_series_with_budget(a, horizon, limits.budget()) {
        Ok(s) => Ok(Some(s)),
        Err(Error::Budget(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn hull(a: &LatticePointSet) -> Result<Outcome> {
    let p = convex_hull(a)?;
    Ok(Outcome::pass(json!({
        "vertices": p.vertices().iter().map(|v| render::rat_point(v)).collect::<Vec<_>>(),
        "facets": p.halfspaces().iter().map(render::halfspace).collect::<Vec<_>>(),
        "volume": render::rat(&volume(&p)?),
        "lattice_points": p.count_lattice_points()?,
    })))
}

pub fn sumset(a: &LatticePointSet, h: u64, limits: &Limits) -> Result<Outcome> {
    limits.check_h(h, "--h")?;
    let s = h_fold_sumset_with_budget(a, h, limits.budget())?;
    Ok(Outcome::pass(json!({
        "h": h,
        "count": s.len(),
        "points": render::vectors(s.iter()),
    })))
}

fn fit_json(outcome: &GrowthOutcome) -> Value {
    match outcome {
        GrowthOutcome::Fitted(fit) => json!({
            "status": "fitted",
            "h0": fit.h0,
            "poly": render::poly(&fit.poly),
            "verified_range": [fit.verified_range.0, fit.verified_range.1],
            "volume": render::rat(&fit.volume),
            "leading_matches_volume": fit.leading_matches_volume,
        }),
        GrowthOutcome::HorizonTooSmall { horizon } => json!({
            "status": "horizon_too_small",
            "horizon": horizon,
        }),
    }
}

fn write_csv(path: &Path, series: &GrowthSeries, fit: Option<&GrowthOutcome>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["h", "count", "poly_value"])?;
    for (h, c) in series.counts.iter().enumerate() {
        let value = match fit {
            Some(GrowthOutcome::Fitted(f)) => sumset_core::fmt_rat(&f.poly.eval_int(h as i64)),
            _ => String::new(),
        };
        w.write_record([h.to_string(), c.to_string(), value])?;
    }
    w.flush()?;
    Ok(())
}

pub fn growth(a: &LatticePointSet, max_h: u64, csv: Option<&Path>, limits: &Limits) -> Result<Outcome> {
    limits.check_h(max_h, "--max-h")?;
    let series = growth_series_with_budget(a, max_h, limits.budget())?;
    let fit = if generates_full_lattice(a)? { Some(growth_fit_series(a, &series)?) } else { None };
    if let Some(path) = csv {
        write_csv(path, &series, fit.as_ref())?;
    }
    let violation = matches!(&fit, Some(GrowthOutcome::Fitted(f)) if !f.leading_matches_volume);
    Ok(Outcome {
        result: json!({
            "counts": series.counts,
            "fit": fit.as_ref().map(fit_json),
        }),
        violation,
    })
}

fn constant_json(k: &Constant, limits: &Limits, replay: bool) -> Value {
    let cert = &k.cert;
    json!({
        "normalization": render::vector(&k.shift),
        "elements": render::vectors(cert.a.iter()),
        "m": cert.m,
        "q": cert.q,
        "c": cert.c,
        "scale": cert.scale(),
        "x_size": cert.x_set.len(),
        "reps": cert.reps.iter().map(|(x, n)| json!({
            "x": render::vector(x),
            "n": n.iter().map(render::int).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "replay": { "trials": limits.trials, "seed": limits.seed, "passed": replay },
    })
}

pub fn constant_c(a: &LatticePointSet, limits: &Limits) -> Result<Outcome> {
    let k = constant(a, limits)?;
    let replay = verify_c_certificate(&k.cert, limits.trials, limits.seed)?;
    Ok(Outcome { result: constant_json(&k, limits, replay), violation: !replay })
}

fn rho_json(r: &RhoCert) -> Value {
    json!({
        "normalization": render::vector(&r.normalization),
        "c": r.c,
        "m": r.m,
        "q": r.q,
        "scale": r.scale,
        "h0": r.h0,
        "diameter_sq": render::sq(&r.diameter_sq),
        "facet_gaps": r.facet_gaps.iter().map(|g| json!({
            "facet": render::halfspace(&g.facet),
            "gap_sq": render::sq(&g.gap_sq),
            "gap_sq_next": render::sq(&g.gap_sq_next),
            "formula_sq": render::sq(&g.formula_sq),
        })).collect::<Vec<_>>(),
        "gaps_consistent": r.gaps_consistent(),
        "rho_sq": render::sq(&r.rho_sq),
    })
}

fn rho_of(a: &LatticePointSet, limits: &Limits) -> Result<(Constant, RhoCert)> {
    let k = constant(a, limits)?;
    let r = rho_certificate_from_constant(&k.cert, k.shift.clone())?;
    Ok((k, r))
}

pub fn rho(a: &LatticePointSet, limits: &Limits) -> Result<Outcome> {
    let (_, r) = rho_of(a, limits)?;
    Ok(Outcome { result: rho_json(&r), violation: !r.gaps_consistent() })
}

pub fn verify_lemma2(a: &LatticePointSet, from: u64, to: u64, limits: &Limits) -> Result<Outcome> {
    limits.check_range(from, to)?;
    let k = constant(a, limits)?;
    let checker = Lemma2Checker::new(&k.cert)?;
    let mut checks = Vec::new();
    let mut holds = true;
    for h in from..=to {
        let r = checker.check(h)?;
        holds &= r.holds();
        let offset = k.shift.scale(&BigInt::from(h));
        checks.push(json!({
            "h": h,
            "inner_points": r.inner_points,
            "missing": render::vectors(r.missing.iter().map(|z| z + &offset).collect::<Vec<_>>().iter()),
        }));
    }
    Ok(Outcome {
        result: json!({
            "normalization": render::vector(&k.shift),
            "c": k.cert.c,
            "scale": k.cert.scale(),
            "checks": checks,
            "holds": holds,
        }),
        violation: !holds,
    })
}

fn theorem_json(checker: &TheoremChecker, from: u64, to: u64) -> Result<(Value, bool)> {
    let mut checks = Vec::new();
    let mut holds = true;
    let scale = checker.certificate().scale;
    for h in from..=to {
        let r = checker.check(h)?;
        let shallow_ok = h > scale || r.deep_points.is_empty();
        holds &= r.holds() && shallow_ok;
        checks.push(json!({
            "h": h,
            "deep_points": r.deep_points.len(),
            "violations": render::vectors(r.violations.iter()),
            "lattice_count": r.lattice_count,
            "sumset_count": r.sumset_count,
        }));
    }
    Ok((json!({ "rho_sq": render::sq(&checker.certificate().rho_sq), "checks": checks, "holds": holds }), holds))
}

pub fn verify_theorem(a: &LatticePointSet, from: u64, to: u64, limits: &Limits) -> Result<Outcome> {
    limits.check_range(from, to)?;
    let (_, r) = rho_of(a, limits)?;
    let mut checker = TheoremChecker::new(&r)?;
    if let Some(series) = growth_within_budget(a, to, limits)? {
        checker = checker.with_growth_series(series);
    }
    let (result, holds) = theorem_json(&checker, from, to)?;
    Ok(Outcome { result, violation: !holds })
}

fn ehrhart_json(a: &LatticePointSet, verify_to: u64) -> Result<(Value, bool)> {
    let p = convex_hull(a)?;
    let poly = ehrhart_interpolate(&p)?;
    let verified = verify_ehrhart(&p, &poly, verify_to)?;
    let report = structural_checks(&p, &poly)?;
    let ok = verified && report.passed();
    Ok((
        json!({
            "poly": render::poly(&poly),
            "verify_to": verify_to,
            "verified": verified,
            "structural": {
                "constant_term": render::rat(&report.constant_term),
                "leading": render::rat(&report.leading),
                "volume": render::rat(&report.volume),
                "boundary_points": report.boundary_points,
                "mismatches": report.mismatches,
                "passed": report.passed(),
            },
        }),
        ok,
    ))
}

fn default_verify_to(dim: usize) -> u64 {
    if dim <= 2 {
        12
    } else {
        6
    }
}

pub fn ehrhart(a: &LatticePointSet, verify_to: Option<u64>, limits: &Limits) -> Result<Outcome> {
    let verify_to = verify_to.unwrap_or_else(|| default_verify_to(a.dim()));
    limits.check_h(verify_to, "--verify-to")?;
    let (result, ok) = ehrhart_json(a, verify_to)?;
    Ok(Outcome { result, violation: !ok })
}

/// Hull, constant, certificate, theorem over `[1, C+mC+6]`, Ehrhart
/// polynomial and growth fit over `[0, C+mC+12]`, with every `h` clipped to
/// `--h-limit`.
pub fn report(a: &LatticePointSet, limits: &Limits) -> Result<Outcome> {
    let hull = hull(a)?.result;
    let (k, r) = rho_of(a, limits)?;
    let replay = verify_c_certificate(&k.cert, limits.trials, limits.seed)?;
    let theorem_to = (r.scale + 6).min(limits.h_limit);
    let growth_to = (r.scale + 12).min(limits.h_limit);
    let series = growth_within_budget(a, growth_to, limits)?;
    let mut checker = TheoremChecker::new(&r)?;
    if let Some(s) = &series {
        checker = checker.with_growth_series(s.clone());
    }
    let (theorem, theorem_ok) = theorem_json(&checker, 1, theorem_to)?;
    let verify_to = default_verify_to(a.dim()).min(limits.h_limit);
    let (ehrhart, ehrhart_ok) = ehrhart_json(a, verify_to)?;
    let (growth, growth_ok) = match &series {
        Some(s) => {
            let fit = growth_fit_series(a, s)?;
            let ok = !matches!(&fit, GrowthOutcome::Fitted(f) if !f.leading_matches_volume);
            (json!({ "horizon": growth_to, "counts": s.counts, "fit": fit_json(&fit) }), ok)
        }
        None => (json!({ "horizon": growth_to, "skipped": "sumset box exceeds --max-cells" }), true),
    };
    let mut constant = constant_json(&k, limits, replay);
    if let Some(obj) = constant.as_object_mut() {
        obj.remove("reps");
    }
    let violation = !(replay && r.gaps_consistent() && theorem_ok && ehrhart_ok && growth_ok);
    Ok(Outcome {
        result: json!({
            "hull": hull,
            "constant": constant,
            "rho": rho_json(&r),
            "theorem": theorem,
            "ehrhart": ehrhart,
            "growth": growth,
        }),
        violation,
    })
}
