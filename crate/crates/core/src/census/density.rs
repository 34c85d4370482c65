use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::enumerate::{enumerate_spheres, DEFAULT_BUDGET};
use super::series::{convolve, spheres};
use super::{ball_count, CensusError, Method};
use crate::actions::{is_simul_hyperbolic, ActionKind, ActionSpace};
use crate::group::{GroupElement, GroupSpec};

/// A set of group elements that can be tested one element at a time.
pub trait ElementClass: Sync {
    fn label(&self) -> String;

    fn contains(&self, g: &GroupElement) -> Result<bool, CensusError>;

    /// Exact `|class ∩ S^{<=n}|` for `n = 0..=n_max`, when a closed form
    /// is available.
    fn series_hits(&self, _group: &GroupSpec, _n_max: u32) -> Option<Vec<BigUint>> {
        None
    }
}

/// A class given by a plain predicate.
pub struct ClassFn<F> {
    label: String,
    f: F,
}

impl<F: Fn(&GroupElement) -> bool + Sync> ClassFn<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        ClassFn { label: label.into(), f }
    }
}

impl<F: Fn(&GroupElement) -> bool + Sync> ElementClass for ClassFn<F> {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn contains(&self, g: &GroupElement) -> Result<bool, CensusError> {
        Ok((self.f)(g))
    }
}

/// Elements hyperbolic on every listed space, or the complement.
#[derive(Debug, Clone)]
pub struct SimulHyperbolic {
    spaces: Vec<ActionSpace>,
    complement: bool,
}

impl SimulHyperbolic {
    pub fn new(spaces: Vec<ActionSpace>) -> Self {
        SimulHyperbolic {
            spaces,
            complement: false,
        }
    }

    pub fn complement(mut self) -> Self {
        self.complement = !self.complement;
        self
    }

    /// For Cayley trees of free factors, `g` is hyperbolic exactly when the
    /// acted coordinate is nontrivial; returns those coordinates.
    fn acted_free_factors(&self, group: &GroupSpec) -> Option<Vec<usize>> {
        let mut acted = Vec::new();
        for s in &self.spaces {
            match (s.kind(), group) {
                (ActionKind::CayleyTree { factor: None }, GroupSpec::Free(_)) => acted.push(0),
                (ActionKind::CayleyTree { factor: Some(i) }, GroupSpec::Product(fs))
                    if matches!(fs[*i], GroupSpec::Free(_)) =>
                {
                    acted.push(*i)
                }
                _ => return None,
            }
        }
        Some(acted)
    }
}

impl ElementClass for SimulHyperbolic {
    fn label(&self) -> String {
        let list: Vec<String> = self.spaces.iter().map(|s| s.to_string()).collect();
        let name = if self.complement { "non-sh" } else { "sh" };
        format!("{name}[{}]", list.join("; "))
    }

    fn contains(&self, g: &GroupElement) -> Result<bool, CensusError> {
        Ok(is_simul_hyperbolic(&self.spaces, g)? != self.complement)
    }

    fn series_hits(&self, group: &GroupSpec, n_max: u32) -> Option<Vec<BigUint>> {
        let acted = self.acted_free_factors(group)?;
        let factors: Vec<GroupSpec> = match group {
            GroupSpec::Product(fs) => fs.clone(),
            other => vec![other.clone()],
        };
        let len = n_max as usize + 1;
        let mut acc = vec![BigUint::one()];
        for (i, f) in factors.iter().enumerate() {
            let mut s = spheres(f, n_max).ok()?;
            if acted.contains(&i) {
                s[0] = BigUint::zero();
            }
            acc = convolve(&acc, &s, len);
        }
        let all = spheres(group, n_max).ok()?;
        let (mut hits, mut total) = (BigUint::zero(), BigUint::zero());
        let mut out = Vec::with_capacity(len);
        for (a, t) in acc.iter().zip(&all) {
            hits += a;
            total += t;
            out.push(if self.complement { &total - &hits } else { hits.clone() });
        }
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub n: u32,
    pub ball: BigUint,
    pub hits: BigUint,
    pub ratio: BigRational,
    pub label: String,
    pub method: Method,
}

impl DensityReport {
    fn new(n: u32, ball: BigUint, hits: BigUint, label: String, method: Method) -> Self {
        let ratio = BigRational::new(BigInt::from(hits.clone()), BigInt::from(ball.clone()));
        DensityReport {
            n,
            ball,
            hits,
            ratio,
            label,
            method,
        }
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} ball={} hits={} ratio={} ({}, {})",
            self.n, self.ball, self.hits, self.ratio, self.label, self.method
        )
    }
}

/// Reports for every radius `0..=n_max` from one enumeration (or one
/// series evaluation).
pub fn density_table(
    group: &GroupSpec,
    class: &dyn ElementClass,
    n_max: u32,
    method: Method,
) -> Result<Vec<DensityReport>, CensusError> {
    let label = class.label();
    match method {
        Method::Series => {
            let hits = class
                .series_hits(group, n_max)
                .ok_or_else(|| CensusError::Unsupported(format!("series hits for {label}")))?;
            let mut ball = BigUint::zero();
            Ok(spheres(group, n_max)?
                .into_iter()
                .zip(hits)
                .enumerate()
                .map(|(n, (s, h))| {
                    ball += s;
                    DensityReport::new(n as u32, ball.clone(), h, label.clone(), method)
                })
                .collect())
        }
        Method::Bfs => {
            let spheres = enumerate_spheres(group, n_max, DEFAULT_BUDGET)?;
            let (mut ball, mut hits) = (0u64, 0u64);
            let mut out = Vec::with_capacity(spheres.len());
            for (n, sphere) in spheres.iter().enumerate() {
                let found = sphere
                    .par_iter()
                    .map(|g| class.contains(g).map(u64::from))
                    .try_reduce(|| 0, |a, b| Ok(a + b))?;
                ball += sphere.len() as u64;
                hits += found;
                out.push(DensityReport::new(n as u32, ball.into(), hits.into(), label.clone(), method));
            }
            Ok(out)
        }
    }
}

pub fn density(
    group: &GroupSpec,
    class: &dyn ElementClass,
    n: u32,
    method: Method,
) -> Result<DensityReport, CensusError> {
    Ok(density_table(group, class, n, method)?.pop().expect("n + 1 rows"))
}

/// Lower bound `c = 1 / |S^{<=2M}|` on the density of a class admitting the
/// extension set `F`, where `M` is the longest element of `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityBound {
    pub set_size: usize,
    pub m: u64,
    pub c: BigRational,
}

impl DensityBound {
    /// Whether `report` is at a radius beyond `2M` and meets the bound.
    pub fn applies_to(&self, report: &DensityReport) -> bool {
        u64::from(report.n) > 2 * self.m
    }

    pub fn holds_for(&self, report: &DensityReport) -> bool {
        report.ratio >= self.c
    }
}

impl fmt::Display for DensityBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|F|={} M={} c={}", self.set_size, self.m, self.c)
    }
}

pub fn density_bound_from_extension_set(set: &[GroupElement], group: &GroupSpec) -> Result<DensityBound, CensusError> {
    let m = set.iter().map(|f| group.word_length(f)).max().unwrap_or(0);
    let radius = u32::try_from(2 * m).map_err(|_| CensusError::Budget {
        radius: u32::MAX,
        budget: DEFAULT_BUDGET,
    })?;
    let ball = match ball_count(group, radius, Method::Series) {
        Ok(b) => b,
        Err(CensusError::Unsupported(_)) => ball_count(group, radius, Method::Bfs)?,
        Err(e) => return Err(e),
    };
    Ok(DensityBound {
        set_size: set.len(),
        m,
        c: BigRational::new(BigInt::one(), BigInt::from(ball)),
    })
}

/// Checks that every `g` in `S^{<=n}` has some `f` in `set` with `g f` in the
/// class. Returns the number of elements checked.
pub fn verify_extension_property(
    set: &[GroupElement],
    group: &GroupSpec,
    class: &dyn ElementClass,
    n: u32,
) -> Result<u64, CensusError> {
    let spheres = enumerate_spheres(group, n, DEFAULT_BUDGET)?;
    let mut checked = 0;
    for sphere in &spheres {
        let failure = sphere
            .par_iter()
            .map(|g| first_extension(set, group, class, g).map(|f| (g, f)))
            .find_map_first(|r| match r {
                Ok((_, Some(_))) => None,
                Ok((g, None)) => Some(CensusError::Counterexample {
                    element: group.render(g),
                    reason: format!("no f in F puts g f in {}", class.label()),
                }),
                Err(e) => Some(e),
            });
        if let Some(e) = failure {
            return Err(e);
        }
        checked += sphere.len() as u64;
    }
    Ok(checked)
}

fn first_extension(
    set: &[GroupElement],
    group: &GroupSpec,
    class: &dyn ElementClass,
    g: &GroupElement,
) -> Result<Option<GroupElement>, CensusError> {
    for f in set {
        let gf = group.multiply(g, f)?;
        if class.contains(&gf)? {
            return Ok(Some(gf));
        }
    }
    Ok(None)
}

/// Outcome of [`verify_extension_claim`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionClaim {
    pub radius: u32,
    pub m: u64,
    pub checked: u64,
    /// Elements with `|g| <= M`, extended directly.
    pub direct: u64,
    /// Elements extended after truncating `M` letters of a geodesic.
    pub via_prefix: u64,
    pub max_witness_distance: u64,
}

/// For every `g` in `S^{<=n}` builds a witness `h` in the class with
/// `d(g, h) <= 2M`: `h = g f` when `|g| <= M`, otherwise `h = g' f` where `g'`
/// is `g` with the last `M` letters of a geodesic removed. When `n >= 2M`
/// the witness must also lie in `S^{<=n}`.
pub fn verify_extension_claim(
    set: &[GroupElement],
    group: &GroupSpec,
    class: &dyn ElementClass,
    n: u32,
) -> Result<ExtensionClaim, CensusError> {
    let m = set.iter().map(|f| group.word_length(f)).max().unwrap_or(0);
    let spheres = enumerate_spheres(group, n, DEFAULT_BUDGET)?;
    let mut claim = ExtensionClaim {
        radius: n,
        m,
        checked: 0,
        direct: 0,
        via_prefix: 0,
        max_witness_distance: 0,
    };
    for (len, sphere) in spheres.iter().enumerate() {
        let len = len as u64;
        let results: Vec<u64> = sphere
            .par_iter()
            .map(|g| -> Result<u64, CensusError> {
                let fail = |reason: String| CensusError::Counterexample {
                    element: group.render(g),
                    reason,
                };
                let base = if len <= m {
                    g.clone()
                } else {
                    let letters = group.geodesic_letters(g);
                    group.from_letters(letters[..(len - m) as usize].iter().copied())?
                };
                let h = first_extension(set, group, class, &base)?
                    .ok_or_else(|| fail(format!("no f in F puts {} f in {}", group.render(&base), class.label())))?;
                let d = group.distance(g, &h)?;
                if d > 2 * m {
                    return Err(fail(format!("witness {} at distance {d} > 2M", group.render(&h))));
                }
                if u64::from(n) >= 2 * m && group.word_length(&h) > u64::from(n) {
                    return Err(fail(format!("witness {} leaves the ball", group.render(&h))));
                }
                Ok(d)
            })
            .collect::<Result<_, _>>()?;
        claim.checked += results.len() as u64;
        if len <= m {
            claim.direct += results.len() as u64;
        } else {
            claim.via_prefix += results.len() as u64;
        }
        claim.max_witness_distance = results.into_iter().fold(claim.max_witness_distance, u64::max);
    }
    Ok(claim)
}
