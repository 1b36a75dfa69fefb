//! Exact lattice polytopes: hulls, dilations, translations, lattice points
//! and squared distances.
//!
//! Every distance is kept squared so that all comparisons stay rational.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::ControlFlow;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{dot, dot_rat_int, gcd_all, norm_sq, rat_int, to_i128, Rat};
use crate::enumerate::{Constraint, LatticeEnumerator};
use crate::error::{Error, Result};
use crate::lattice::{det_bareiss, rank_of_rows, IntVector};
use crate::sumset::LatticePointSet;

pub type RatPoint = Vec<Rat>;

pub fn rat_point(p: &IntVector) -> RatPoint {
    p.coords().iter().map(rat_int).collect()
}

/// `{x : (x, u) = alpha}` with a primitive integer normal `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: IntVector,
    offset: BigInt,
}

impl Hyperplane {
    /// Requires a nonzero primitive normal.
    pub fn new(normal: IntVector, offset: BigInt) -> Result<Self> {
        let g = gcd_all(normal.coords());
        if g.is_zero() {
            return Err(Error::Degenerate("hyperplane normal is zero".into()));
        }
        if !g.is_one() {
            return Err(Error::InvalidArgument(format!("normal {normal} is not primitive")));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// Divides out the content of `normal`; the offset must stay integral.
    pub fn from_unnormalized(normal: IntVector, offset: BigInt) -> Result<Self> {
        let g = gcd_all(normal.coords());
        if g.is_zero() {
            return Err(Error::Degenerate("hyperplane normal is zero".into()));
        }
        if !offset.is_multiple_of(&g) {
            return Err(Error::InvalidArgument("offset not divisible by normal content".into()));
        }
        let normal = IntVector::new(normal.coords().iter().map(|c| c / &g).collect());
        Hyperplane::new(normal, offset / g)
    }

    pub fn normal(&self) -> &IntVector {
        &self.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `(x, u) - alpha`.
    pub fn excess(&self, x: &[Rat]) -> Rat {
        dot_rat_int(x, self.normal.coords()) - rat_int(&self.offset)
    }

    pub fn excess_int(&self, x: &IntVector) -> BigInt {
        dot(x.coords(), self.normal.coords()) - &self.offset
    }

    /// `h * H = {x : (x, u) = h alpha}`.
    pub fn dilate(&self, h: &BigInt) -> Hyperplane {
        Hyperplane { normal: self.normal.clone(), offset: &self.offset * h }
    }

    /// `H + b = {x : (x, u) = alpha + (b, u)}`.
    pub fn translate(&self, b: &IntVector) -> Hyperplane {
        Hyperplane {
            normal: self.normal.clone(),
            offset: &self.offset + b.dot(&self.normal),
        }
    }

    pub fn flipped(&self) -> Hyperplane {
        Hyperplane { normal: -&self.normal, offset: -&self.offset }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x,{}) = {}", self.normal, self.offset)
    }
}

/// The closed side `(x, u) >= alpha`; normals always point inward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    hyperplane: Hyperplane,
}

impl HalfSpace {
    pub fn new(hyperplane: Hyperplane) -> Self {
        HalfSpace { hyperplane }
    }

    pub fn hyperplane(&self) -> &Hyperplane {
        &self.hyperplane
    }

    pub fn normal(&self) -> &IntVector {
        &self.hyperplane.normal
    }

    pub fn offset(&self) -> &BigInt {
        &self.hyperplane.offset
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.hyperplane.excess(x).is_negative()
    }

    pub fn contains_int(&self, x: &IntVector) -> bool {
        !self.hyperplane.excess_int(x).is_negative()
    }
}

/// A squared Euclidean distance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqDistance(Rat);

impl SqDistance {
    pub fn new(value: Rat) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidArgument("negative squared distance".into()));
        }
        Ok(SqDistance(value))
    }

    pub fn zero() -> Self {
        SqDistance(Rat::zero())
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_value(self) -> Rat {
        self.0
    }
}

impl fmt::Display for SqDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Convex polytope kept in both vertex and inward half-space form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatPoint>,
    halfspaces: Vec<HalfSpace>,
    fulldim: bool,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatPoint] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.fulldim
    }

    /// Assembles a polytope from its facets and a candidate point set that
    /// contains all vertices. Vertices are the candidates whose tight facet
    /// normals span `R^n`.
    fn from_facets(dim: usize, facets: BTreeSet<HalfSpace>, candidates: &[IntVector]) -> Polytope {
        let halfspaces: Vec<HalfSpace> = facets.into_iter().collect();
        let mut verts: BTreeSet<IntVector> = BTreeSet::new();
        for p in candidates {
            let tight: Vec<Vec<BigInt>> = halfspaces
                .iter()
                .filter(|h| h.hyperplane.excess_int(p).is_zero())
                .map(|h| h.normal().coords().to_vec())
                .collect();
            if tight.len() >= dim && rank_of_rows(tight) == dim {
                verts.insert(p.clone());
            }
        }
        Polytope {
            dim,
            vertices: verts.iter().map(rat_point).collect(),
            halfspaces,
            fulldim: true,
        }
    }

    /// `h * P`.
    pub fn dilate(&self, h: u64) -> Result<Polytope> {
        if h == 0 {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        let k = BigInt::from(h);
        let kr = rat_int(&k);
        Ok(Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|c| c * &kr).collect())
                .collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|hs| HalfSpace::new(hs.hyperplane.dilate(&k)))
                .collect(),
            fulldim: self.fulldim,
        })
    }

    /// `P + b`.
    pub fn translate(&self, b: &IntVector) -> Result<Polytope> {
        if b.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: b.dim() });
        }
        let br = rat_point(b);
        Ok(Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().zip(&br).map(|(x, y)| x + y).collect())
                .collect(),
            halfspaces: self
                .halfspaces
                .iter()
                .map(|hs| HalfSpace::new(hs.hyperplane.translate(b)))
                .collect(),
            fulldim: self.fulldim,
        })
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension");
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn contains_int(&self, x: &IntVector) -> bool {
        assert_eq!(x.dim(), self.dim, "point dimension");
        self.halfspaces.iter().all(|h| h.contains_int(x))
    }

    pub fn is_lattice_polytope(&self) -> bool {
        self.vertices.iter().flatten().all(|c| c.is_integer())
    }

    /// Indices of the vertices lying on the hyperplane of facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        let hp = &self.halfspaces[i].hyperplane;
        (0..self.vertices.len())
            .filter(|&j| hp.excess(&self.vertices[j]).is_zero())
            .collect()
    }

    /// Integer bounding box of the vertex set.
    pub fn bounding_box(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lo = (0..self.dim)
            .map(|k| {
                self.vertices.iter().map(|v| v[k].floor().to_integer()).min().unwrap_or_default()
            })
            .collect();
        let hi = (0..self.dim)
            .map(|k| {
                self.vertices.iter().map(|v| v[k].ceil().to_integer()).max().unwrap_or_default()
            })
            .collect();
        (lo, hi)
    }

    /// Enumerator over the integer bounding box intersected with the facets.
    pub(crate) fn enumerator(&self) -> Result<LatticeEnumerator> {
        self.enumerator_with_margins(&vec![BigInt::zero(); self.halfspaces.len()])
    }

    /// Like [`Self::enumerator`] with facet `i` tightened to
    /// `(x, u_i) >= alpha_i + margin_i`.
    pub(crate) fn enumerator_with_margins(&self, margins: &[BigInt]) -> Result<LatticeEnumerator> {
        let (lo, hi) = self.bounding_box();
        let mut rows = Vec::with_capacity(self.halfspaces.len() + 2 * self.dim);
        for (hs, m) in self.halfspaces.iter().zip(margins) {
            rows.push(Constraint {
                coeffs: hs
                    .normal()
                    .coords()
                    .iter()
                    .map(|c| to_i128(c, "facet normal"))
                    .collect::<Result<_>>()?,
                rhs: to_i128(&(hs.offset() + m), "facet offset")?,
            });
        }
        for k in 0..self.dim {
            let mut e = vec![0i128; self.dim];
            e[k] = 1;
            rows.push(Constraint { coeffs: e.clone(), rhs: to_i128(&lo[k], "bounding box")? });
            e[k] = -1;
            rows.push(Constraint { coeffs: e, rhs: -to_i128(&hi[k], "bounding box")? });
        }
        LatticeEnumerator::new(self.dim, rows)
    }

    /// `P ∩ Z^n`.
    pub fn lattice_points(&self) -> Result<LatticePointSet> {
        let mut out = LatticePointSet::new(self.dim);
        let mut err = None;
        self.enumerator()?.for_each(|x| {
            let p = IntVector::new(x.iter().map(|&c| BigInt::from(c)).collect());
            if let Err(e) = out.insert(p) {
                err = Some(e);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// `|P ∩ Z^n|` without materializing the points.
    pub fn count_lattice_points(&self) -> Result<u64> {
        self.enumerator()?.count()
    }
}

/// Generalized cross product of `n-1` vectors in `R^n`.
fn orthogonal_normal(diffs: &[Vec<BigInt>], n: usize) -> Vec<BigInt> {
    if n == 1 {
        return vec![BigInt::one()];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = diffs
                .iter()
                .map(|d| d.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let det = det_bareiss(minor);
            if j % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn primitive(u: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_all(&u);
    u.into_iter().map(|c| c / &g).collect()
}

pub(crate) fn affine_rank(points: &[IntVector]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = points[1..].iter().map(|p| (p - base).into_coords()).collect();
    if rows.is_empty() {
        return 0;
    }
    rank_of_rows(rows)
}

/// `conv(A)` by brute-force facet enumeration over `n`-subsets of `A`.
pub fn convex_hull(a: &LatticePointSet) -> Result<Polytope> {
    let n = a.dim();
    let pts: Vec<IntVector> = a.iter().cloned().collect();
    let rank = affine_rank(&pts);
    if pts.len() < n + 1 || rank < n {
        return Err(Error::NotFullDimensional { rank, dim: n });
    }
    let mut facets = BTreeSet::new();
    for subset in (0..pts.len()).combinations(n) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<BigInt>> =
            subset[1..].iter().map(|&i| (&pts[i] - base).into_coords()).collect();
        let u = orthogonal_normal(&diffs, n);
        if u.iter().all(Zero::is_zero) {
            continue;
        }
        let u = primitive(u);
        let alpha = dot(base.coords(), &u);
        let (mut above, mut below) = (false, false);
        for p in &pts {
            let s = dot(p.coords(), &u) - &alpha;
            above |= s.is_positive();
            below |= s.is_negative();
            if above && below {
                break;
            }
        }
        let hp = match (above, below) {
            (_, false) => Hyperplane { normal: IntVector::new(u), offset: alpha },
            (false, true) => Hyperplane { normal: IntVector::new(u).scale(&-BigInt::one()), offset: -alpha },
            (true, true) => continue,
        };
        facets.insert(HalfSpace::new(hp));
    }
    Ok(Polytope::from_facets(n, facets, &pts))
}

/// The zonotope `sum_i [0, 1] g_i`, i.e. the hull of all subset sums.
///
/// Facet normals are orthogonal to `n-1` independent generators; the offset
/// in direction `u` is `sum_i min(0, (g_i, u))`. Agrees with
/// `convex_hull` of the subset sums.
pub fn zonotope_hull(generators: &[IntVector], max_generators: usize) -> Result<Polytope> {
    let gens: Vec<&IntVector> = generators.iter().filter(|g| !g.is_zero()).collect();
    let Some(first) = gens.first() else {
        return Err(Error::NotFullDimensional { rank: 0, dim: generators.first().map_or(0, IntVector::dim) });
    };
    let n = first.dim();
    if gens.len() > max_generators {
        return Err(Error::ZonotopeTooLarge { generators: gens.len(), budget: max_generators });
    }
    let rows: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    let rank = rank_of_rows(rows);
    if rank < n {
        return Err(Error::NotFullDimensional { rank, dim: n });
    }
    let mut facets = BTreeSet::new();
    for subset in (0..gens.len()).combinations(n - 1) {
        let vecs: Vec<Vec<BigInt>> = subset.iter().map(|&i| gens[i].coords().to_vec()).collect();
        let u = orthogonal_normal(&vecs, n);
        if u.iter().all(Zero::is_zero) {
            continue;
        }
        let u = IntVector::new(primitive(u));
        for dir in [u.clone(), -&u] {
            let alpha: BigInt = gens.iter().map(|g| g.dot(&dir).min(BigInt::zero())).sum();
            facets.insert(HalfSpace::new(Hyperplane { normal: dir, offset: alpha }));
        }
    }
    let sums = subset_sums(&gens);
    Ok(Polytope::from_facets(n, facets, &sums))
}

pub(crate) fn subset_sums(gens: &[&IntVector]) -> Vec<IntVector> {
    let n = gens.first().map_or(0, |g| g.dim());
    let mut sums: BTreeSet<IntVector> = BTreeSet::new();
    sums.insert(IntVector::zeros(n));
    for g in gens {
        let next: Vec<IntVector> = sums.iter().map(|s| s + *g).collect();
        sums.extend(next);
    }
    sums.into_iter().collect()
}

pub fn sqdist_point_hyperplane(x: &[Rat], h: &Hyperplane) -> SqDistance {
    let e = h.excess(x);
    SqDistance(&e * &e / rat_int(&norm_sq(h.normal.coords())))
}

/// Orthogonal projection of `x` onto `h`.
pub fn perpendicular_foot(x: &[Rat], h: &Hyperplane) -> RatPoint {
    let t = h.excess(x) / rat_int(&norm_sq(h.normal.coords()));
    x.iter()
        .zip(h.normal.coords())
        .map(|(xi, ui)| xi - &t * rat_int(ui))
        .collect()
}

pub fn sqdist_parallel_hyperplanes(h1: &Hyperplane, h2: &Hyperplane) -> Result<SqDistance> {
    if h1.dim() != h2.dim() {
        return Err(Error::DimensionMismatch { expected: h1.dim(), found: h2.dim() });
    }
    let other = if h2.normal == h1.normal {
        h2.offset.clone()
    } else if h2.normal == -&h1.normal {
        -&h2.offset
    } else {
        return Err(Error::NotParallel);
    };
    let gap = other - &h1.offset;
    Ok(SqDistance(rat_int(&(&gap * &gap)) / rat_int(&norm_sq(h1.normal.coords()))))
}

/// Squared distance from `z ∈ P` to the boundary of `P`: the least squared
/// distance to a facet hyperplane. Zero on the boundary.
pub fn sqdist_point_boundary(p: &Polytope, z: &[Rat]) -> Result<SqDistance> {
    Ok(nearest_facet(p, z)?.1)
}

/// Index of the nearest facet hyperplane (lowest index on ties) and its
/// squared distance.
pub fn nearest_facet(p: &Polytope, z: &[Rat]) -> Result<(usize, SqDistance)> {
    if z.len() != p.dim {
        return Err(Error::DimensionMismatch { expected: p.dim, found: z.len() });
    }
    if !p.fulldim {
        return Err(Error::NotFullDimensional { rank: 0, dim: p.dim });
    }
    if !p.contains(z) {
        return Err(Error::PointOutside);
    }
    p.halfspaces
        .iter()
        .enumerate()
        .map(|(i, h)| (i, sqdist_point_hyperplane(z, &h.hyperplane)))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or(Error::Degenerate("polytope without facets".into()))
}

/// Squared diameter, attained at a pair of vertices.
pub fn sqdiameter(p: &Polytope) -> SqDistance {
    let mut best = Rat::zero();
    for (i, a) in p.vertices.iter().enumerate() {
        for b in &p.vertices[i + 1..] {
            let d: Rat = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            if d > best {
                best = d;
            }
        }
    }
    SqDistance(best)
}

pub fn sqdist_points(a: &[Rat], b: &[Rat]) -> SqDistance {
    SqDistance(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}
