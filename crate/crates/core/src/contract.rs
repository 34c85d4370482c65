//! Axes, closest-point projections and independence tests on trees.
//!
//! A hyperbolic tree isometry `g = u c u^-1` (with `c` cyclically reduced)
//! translates the line through `u·1` (Cayley) or `u{1}` (Bass–Serre) by its
//! translation length. Axes of trees are 0-contracting, so most of this
//! module computes exact certificates rather than estimates.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::actions::{tree, ActionError, ActionKind, ActionSpace, Vertex};
use crate::group::{random_element, GroupElement, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContractError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{element} is not contracting on {space}")]
    NotContracting { element: String, space: String },
    #[error("members {0} and {1} are not weakly independent on {2}")]
    NotIndependent(usize, usize, String),
    #[error("no pool member is weakly independent from {0}")]
    NoIndependentMember(String),
}

impl From<GroupError> for ContractError {
    fn from(e: GroupError) -> Self {
        ContractError::Action(e.into())
    }
}

/// The invariant line of a hyperbolic tree isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub space: ActionSpace,
    pub element: GroupElement,
    /// `u·1` or `u{1}`: the axis vertex closest to the root.
    pub entry: Vertex,
    pub conjugator: GroupElement,
    pub period: GroupElement,
    pub translation: Rational64,
}

pub fn axis(space: &ActionSpace, g: &GroupElement) -> Result<Axis, ContractError> {
    if !space.is_tree() {
        return Err(ActionError::NotATree(space.to_string()).into());
    }
    let translation = space.translation_length(g)?;
    if translation.is_zero() {
        return Err(ContractError::NotContracting {
            element: space.group().render(g),
            space: space.to_string(),
        });
    }
    let acting = space.acting(g)?;
    let form = space.acting_spec().cyclic_reduce(acting)?;
    let entry = match (&form.conjugator, space.kind()) {
        (GroupElement::Free(u), ActionKind::CayleyTree { .. }) => Vertex::Word(u.clone()),
        (GroupElement::FreeProduct(u), ActionKind::BassSerreTree { .. }) => Vertex::Center(u.clone()),
        _ => unreachable!("tree kinds have matching coordinates"),
    };
    Ok(Axis {
        space: space.clone(),
        element: g.clone(),
        entry,
        conjugator: form.conjugator,
        period: form.core,
        translation,
    })
}

impl Axis {
    /// `g^m · v`.
    pub fn translate(&self, v: &Vertex, m: i64) -> Result<Vertex, ContractError> {
        let gm = self.space.group().pow(&self.element, m)?;
        Ok(self.space.act(&gm, v)?)
    }

    /// `g^m · entry`.
    pub fn point(&self, m: i64) -> Result<Vertex, ContractError> {
        self.translate(&self.entry, m)
    }

    /// All axis vertices between `g^m0·entry` and `g^m1·entry`, in order.
    pub fn segment(&self, m0: i64, m1: i64) -> Result<Vec<Vertex>, ContractError> {
        Ok(tree::geodesic(&self.point(m0)?, &self.point(m1)?))
    }

    /// Number of translates needed so that `g^{±k}·entry` lie beyond the
    /// projection of any point within `radius` of the entry.
    fn reach(&self, radius: Rational64) -> i64 {
        (radius / self.translation).to_integer() + 2
    }

    /// Closest point of the axis to `v`, as the median of `v` and two far
    /// axis points.
    pub fn project(&self, v: &Vertex) -> Result<Vertex, ContractError> {
        let k = self.reach(self.space.vertex_distance(v, &self.entry));
        let ahead = self.point(k)?;
        let behind = self.point(-k)?;
        Ok(tree::median(v, &ahead, &behind))
    }

    /// Closest axis point to `p·o`.
    pub fn project_element(&self, p: &GroupElement) -> Result<Vertex, ContractError> {
        self.project(&self.space.orbit_point(p)?)
    }

    pub fn distance_to(&self, v: &Vertex) -> Result<Rational64, ContractError> {
        Ok(self.space.vertex_distance(v, &self.project(v)?))
    }

    pub fn contains(&self, v: &Vertex) -> Result<bool, ContractError> {
        Ok(self.distance_to(v)?.is_zero())
    }

    /// `d(o, axis)`.
    pub fn basepoint_distance(&self) -> Result<Rational64, ContractError> {
        self.distance_to(&self.space.basepoint())
    }
}

/// Outcome of sampling geodesics that avoid the `C`-neighbourhood of an axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    pub constant: Rational64,
    pub samples_tested: usize,
    pub samples_drawn: usize,
    pub max_projection_diameter: Rational64,
    pub seed: u64,
    pub pass: bool,
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "constant = {}", self.constant)?;
        writeln!(f, "samples_tested = {}", self.samples_tested)?;
        writeln!(f, "samples_drawn = {}", self.samples_drawn)?;
        writeln!(f, "max_projection_diameter = {}", self.max_projection_diameter)?;
        writeln!(f, "seed = {}", self.seed)?;
        write!(f, "pass = {}", self.pass)
    }
}

/// Diameter of the projection of a vertex set onto the axis.
pub fn projection_diameter(ax: &Axis, vertices: &[Vertex]) -> Result<Rational64, ContractError> {
    let proj = vertices
        .iter()
        .map(|v| ax.project(v))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best = Rational64::zero();
    for (i, p) in proj.iter().enumerate() {
        for q in &proj[i + 1..] {
            best = best.max(ax.space.vertex_distance(p, q));
        }
    }
    Ok(best)
}

/// Samples random geodesics `[x·o, y·o]` with endpoints of length at most
/// `endpoint_len`, keeps those disjoint from `N_C(axis)`, and records the
/// largest projection diameter.
pub fn check_contracting(
    ax: &Axis,
    constant: Rational64,
    samples: usize,
    endpoint_len: usize,
    seed: u64,
) -> Result<ContractionReport, ContractError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = ax.space.group();
    let mut tested = 0;
    let mut drawn = 0;
    let mut worst = Rational64::zero();
    let max_draws = samples.saturating_mul(100).max(100);
    while tested < samples && drawn < max_draws {
        drawn += 1;
        let x = random_element(&mut rng, group, endpoint_len);
        let y = random_element(&mut rng, group, endpoint_len);
        let path = tree::geodesic(&ax.space.orbit_point(&x)?, &ax.space.orbit_point(&y)?);
        let mut disjoint = true;
        for v in &path {
            if ax.distance_to(v)? <= constant {
                disjoint = false;
                break;
            }
        }
        if !disjoint {
            continue;
        }
        tested += 1;
        worst = worst.max(projection_diameter(ax, &path)?);
    }
    Ok(ContractionReport {
        constant,
        samples_tested: tested,
        samples_drawn: drawn,
        max_projection_diameter: worst,
        seed,
        pass: worst <= constant,
    })
}

/// Contracting on a tree or line is the same as hyperbolic.
pub fn is_contracting_element(space: &ActionSpace, g: &GroupElement) -> Result<bool, ContractError> {
    Ok(space.is_hyperbolic(g)?)
}

/// Contracting on every listed space.
pub fn is_simul_contracting(spaces: &[ActionSpace], g: &GroupElement) -> Result<bool, ContractError> {
    if spaces.is_empty() {
        return Err(ActionError::NoSpaces.into());
    }
    for s in spaces {
        if !is_contracting_element(s, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(Rational64),
    Unbounded,
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// Whether the acting coordinates commute (for hyperbolic elements on the
/// supported trees: whether `g` and `h` have a common power).
pub fn share_power(space: &ActionSpace, g: &GroupElement, h: &GroupElement) -> Result<bool, ContractError> {
    if !space.is_tree() {
        return Ok(true);
    }
    let (a, b) = (space.acting(g)?, space.acting(h)?);
    Ok(space.acting_spec().commutes(a, b)?)
}

/// Endpoints of the segment shared by two axes without a common power, or
/// `None` when the axes are disjoint.
fn overlap(y: &Axis, z: &Axis) -> Result<Option<(Vertex, Vertex)>, ContractError> {
    let p0 = z.project(&y.entry)?;
    if !y.contains(&p0)? {
        return Ok(None);
    }
    // Walk along Z from p0 in both directions while staying on Y.
    let mut k = 2;
    loop {
        let before = tree::geodesic(&p0, &z.point(-k)?);
        let after = tree::geodesic(&p0, &z.point(k)?);
        let mut ends = Vec::with_capacity(2);
        let mut hit_boundary = false;
        for path in [&before, &after] {
            let mut last = p0.clone();
            let mut left = false;
            for v in path.iter() {
                if y.contains(v)? {
                    last = v.clone();
                } else {
                    left = true;
                    break;
                }
            }
            hit_boundary |= !left;
            ends.push(last);
        }
        if !hit_boundary {
            let end = ends.pop().expect("two ends");
            let start = ends.pop().expect("two ends");
            return Ok(Some((start, end)));
        }
        if k > 1 << 20 {
            unreachable!("axes without a common power share only a finite segment");
        }
        k *= 2;
    }
}

/// Signed overlap length: the shared segment length, or minus the
/// distance between disjoint axes.
pub fn axis_gap(y: &Axis, z: &Axis) -> Result<Rational64, ContractError> {
    match overlap(y, z)? {
        Some((s, e)) => Ok(y.space.vertex_distance(&s, &e)),
        None => {
            let p0 = z.project(&y.entry)?;
            Ok(-y.distance_to(&p0)?)
        }
    }
}

/// `diam(N_r(Y) ∩ N_r(Z))`, exact: unbounded for a common power, otherwise
/// the signed overlap plus `2r` (0 when the neighbourhoods miss).
pub fn bounded_intersection_diam(y: &Axis, z: &Axis, r: Rational64) -> Result<Diameter, ContractError> {
    if share_power(&y.space, &y.element, &z.element)? {
        return Ok(Diameter::Unbounded);
    }
    let gap = axis_gap(y, z)?;
    let d = gap + r * 2;
    Ok(Diameter::Finite(d.max(Rational64::zero())))
}

/// Evidence for weak independence on one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceCert {
    pub overlaps: Vec<(Rational64, Diameter)>,
    pub verdict: bool,
    /// Shared axis segment, when there is one and it is finite.
    pub witness: Option<(Vertex, Vertex)>,
}

pub const OVERLAP_RADII: [i64; 4] = [0, 1, 2, 4];

pub fn weakly_independent(
    space: &ActionSpace,
    g: &GroupElement,
    h: &GroupElement,
) -> Result<IndependenceCert, ContractError> {
    for x in [g, h] {
        if !is_contracting_element(space, x)? {
            return Err(ContractError::NotContracting {
                element: space.group().render(x),
                space: space.to_string(),
            });
        }
    }
    if !space.is_tree() {
        return Ok(IndependenceCert {
            overlaps: OVERLAP_RADII
                .iter()
                .map(|&r| (Rational64::from_integer(r), Diameter::Unbounded))
                .collect(),
            verdict: false,
            witness: None,
        });
    }
    let (y, z) = (axis(space, g)?, axis(space, h)?);
    let mut overlaps = Vec::with_capacity(OVERLAP_RADII.len());
    for r in OVERLAP_RADII {
        let r = Rational64::from_integer(r);
        overlaps.push((r, bounded_intersection_diam(&y, &z, r)?));
    }
    let verdict = !share_power(space, g, h)?;
    let witness = if verdict { overlap(&y, &z)? } else { None };
    Ok(IndependenceCert {
        overlaps,
        verdict,
        witness,
    })
}

/// Lowest-index pool member weakly independent from `g`.
pub fn refine_independent_triple(
    space: &ActionSpace,
    g: &GroupElement,
    pool: &[GroupElement],
) -> Result<usize, ContractError> {
    for (i, p) in pool.iter().enumerate() {
        if weakly_independent(space, g, p)?.verdict {
            return Ok(i);
        }
    }
    Err(ContractError::NoIndependentMember(space.group().render(g)))
}

/// `{(f^n h^n)^k f (f^n h^n)^-k : 0 <= k < count}`, verified contracting on
/// every space and pairwise weakly independent on every space.
pub fn conjugate_family(
    spaces: &[ActionSpace],
    f: &GroupElement,
    h: &GroupElement,
    n: i64,
    count: usize,
) -> Result<Vec<GroupElement>, ContractError> {
    let group = spaces.first().ok_or(ActionError::NoSpaces)?.group();
    let x = group.multiply(&group.pow(f, n)?, &group.pow(h, n)?)?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count as i64 {
        let xk = group.pow(&x, k)?;
        out.push(group.product_of([&xk, f, &group.inverse(&xk)])?);
    }
    for s in spaces {
        for e in &out {
            if !is_contracting_element(s, e)? {
                return Err(ContractError::NotContracting {
                    element: group.render(e),
                    space: s.to_string(),
                });
            }
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if !weakly_independent(s, &out[i], &out[j])?.verdict {
                    return Err(ContractError::NotIndependent(i, j, s.to_string()));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn f2() -> (GroupSpec, ActionSpace) {
        let g = GroupSpec::free(2).unwrap();
        let s = ActionSpace::cayley(g.clone(), None).unwrap();
        (g, s)
    }

    #[test]
    fn axis_of_conjugate() {
        let (g, s) = f2();
        let ax = axis(&s, &g.parse_element("a b A").unwrap()).unwrap();
        assert_eq!(ax.entry, Vertex::Word(g.parse_element("a").map(|e| match e {
            GroupElement::Free(w) => w,
            _ => unreachable!(),
        }).unwrap()));
        assert_eq!(ax.translation, Rational64::from_integer(1));
        assert_eq!(ax.basepoint_distance().unwrap(), Rational64::from_integer(1));
        assert!(axis(&s, &g.identity()).is_err());
    }

    #[test]
    fn projection_onto_b_axis() {
        let (g, s) = f2();
        let ax = axis(&s, &g.parse_element("b").unwrap()).unwrap();
        let p = ax.project_element(&g.parse_element("a").unwrap()).unwrap();
        assert_eq!(p, s.basepoint());
        let on = g.parse_element("b^3").unwrap();
        assert_eq!(ax.project_element(&on).unwrap(), s.orbit_point(&on).unwrap());
    }

    #[test]
    fn intersections() {
        let (g, s) = f2();
        let a = axis(&s, &g.parse_element("a").unwrap()).unwrap();
        let b = axis(&s, &g.parse_element("b").unwrap()).unwrap();
        assert_eq!(bounded_intersection_diam(&a, &a, 0.into()).unwrap(), Diameter::Unbounded);
        assert_eq!(
            bounded_intersection_diam(&a, &b, 0.into()).unwrap(),
            Diameter::Finite(0.into())
        );
        assert_eq!(
            bounded_intersection_diam(&a, &b, 2.into()).unwrap(),
            Diameter::Finite(4.into())
        );
        // The axis of a^3 b a^-3 meets the axis of a at a^3 only.
        let z = axis(&s, &g.parse_element("a^3 b A^3").unwrap()).unwrap();
        assert_eq!(axis_gap(&a, &z).unwrap(), Rational64::zero());
        let w = axis(&s, &g.parse_element("a^3 b").unwrap()).unwrap();
        assert_eq!(axis_gap(&a, &w).unwrap(), Rational64::from_integer(3));
        let far = axis(&s, &g.parse_element("b^2 a b^-2").unwrap()).unwrap();
        assert_eq!(axis_gap(&a, &far).unwrap(), Rational64::from_integer(-2));
    }

    #[test]
    fn independence_verdicts() {
        let (g, s) = f2();
        let a = g.parse_element("a").unwrap();
        let a2 = g.parse_element("a^2").unwrap();
        let b = g.parse_element("b").unwrap();
        assert!(!weakly_independent(&s, &a, &a2).unwrap().verdict);
        assert!(weakly_independent(&s, &a, &b).unwrap().verdict);
        assert!(weakly_independent(&s, &a, &g.identity()).is_err());
    }

    #[test]
    fn refine_picks_first_valid() {
        let (g, s) = f2();
        let a = g.parse_element("a").unwrap();
        let pool: Vec<_> = ["a^2", "b", "a b"].iter().map(|t| g.parse_element(t).unwrap()).collect();
        assert_eq!(refine_independent_triple(&s, &a, &pool).unwrap(), 1);
    }

    #[test]
    fn conjugates_of_a() {
        let (g, s) = f2();
        let a = g.parse_element("a").unwrap();
        let b = g.parse_element("b").unwrap();
        let fam = conjugate_family(std::slice::from_ref(&s), &a, &b, 2, 3).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam[0], a);
        for e in &fam {
            assert_eq!(s.translation_length(e).unwrap(), Rational64::from_integer(1));
        }
    }

    #[test]
    fn zero_constant_passes() {
        let (g, s) = f2();
        let ax = axis(&s, &g.parse_element("a b").unwrap()).unwrap();
        let rep = check_contracting(&ax, Rational64::zero(), 50, 6, 3).unwrap();
        assert!(rep.pass);
        assert!(rep.samples_tested > 0);
        assert_eq!(rep.max_projection_diameter, Rational64::zero());
    }
}
