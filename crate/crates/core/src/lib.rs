//! Exact lattice-point geometry of sumsets `hA = A + ... + A`.
//!
//! Hulls, dilations and squared distances are computed over the integers and
//! rationals. On top of them sit Khovanskii's constant `C`, the inner
//! polytopes `Δ(h, C)`, the depth certificate `ρ` and Ehrhart polynomials.

pub mod arith;
pub mod ehrhart;
mod enumerate;
pub mod error;
mod feasibility;
pub mod geometry;
pub mod khovanskii;
pub mod lattice;
pub mod membership;
pub mod sumset;

pub use arith::{fmt_rat, Rat};
pub use ehrhart::{
    ehrhart_interpolate, growth_fit, growth_fit_series, structural_checks, verify_ehrhart, volume,
    GrowthFit, GrowthOutcome, RationalPolynomial, StructuralReport,
};
pub use error::{Error, Result};
pub use geometry::{
    convex_hull, nearest_facet, perpendicular_foot, sqdiameter, sqdist_parallel_hyperplanes,
    sqdist_point_boundary, sqdist_point_hyperplane, sqdist_points, zonotope_hull, HalfSpace,
    Hyperplane, Polytope, RatPoint, SqDistance,
};
pub use khovanskii::{
    inner_polytope, inner_polytope_direct_lattice_points, khovanskii_constant, lemma2_check,
    normalize_to_origin, rho_certificate, theorem_check, verify_c_certificate,
    zonotope_lattice_points, FacetGap, InnerPolytope, InnerShape, KhovanskiiCert, Lemma2Checker,
    Lemma2Report, RhoCert, TheoremChecker, TheoremReport,
};
pub use lattice::{
    elements_generate_lattice, generates_full_lattice, smith_normal_form, solve_integer_rep,
    IntMatrix, IntVector, IntegerRepSolver, SnfDecomposition,
};
pub use membership::SumsetMembership;
pub use sumset::{
    growth_series, h_fold_sumset, sumset_in_dilate_check, sumset_size, GrowthSeries,
    LatticePointSet, SumsetBudget,
};
