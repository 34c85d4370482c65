//! Finite extension sets: `F` such that every `g` has some `f` in `F` with
//! `g f` simultaneously contracting (or hyperbolic with nonvanishing
//! quasimorphisms on the lineal spaces).
//!
//! From independent `h_1..h_s` take `f_i = h_i^{n_i}` moving every basepoint
//! by at least `2D`, `L_k = d(o_k, f_1 o_k)`, and a ladder
//! `0 = j_0 < j_1 < ... < j_l` with `d(o_k, f_1^{j_r} o_k) > 2D + j_{r-1} L_k`.
//! The displacement of `g` on tree `k` falls in one of `l + 1` intervals
//! `[0, D]`, `(D + j_{r-1} L_k, D + j_r L_k]`, `(D + j_{l-1} L_k, ∞)`; an
//! interval index hit on no tree gives a column `r` with `g f_1^{j_r}`
//! moving every basepoint by more than `D`, and the sweep then finds `f_i`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::family::{search_family_with, SEARCH_RADIUS};
use super::simul_sc::{CALIBRATION_BUDGET, CALIBRATION_SEED};
use super::{
    calibrate_extension_constant, hyperbolic_on_all, independent_sc_family, orbit_distances, ConstructError,
    FamilyRoute, POWER_LIMIT,
};
use crate::actions::{ActionSpace, ActionType};
use crate::census::{self, CensusError};
use crate::group::{GroupElement, GroupSpec};
use crate::qm::{lineal_focal_extension_set, QmEvaluator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionTarget {
    /// Contracting on every tree.
    Sc,
    /// Additionally nonzero on every evaluator of the lineal part.
    Sh,
}

impl fmt::Display for ExtensionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionTarget::Sc => "sc",
            ExtensionTarget::Sh => "sh",
        })
    }
}

/// One ladder inequality `d(o_k, f_1^{j_r} o_k) > 2D + j_{r-1} L_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderCheck {
    pub space: usize,
    pub r: usize,
    pub lhs: Rational64,
    pub rhs: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSet {
    pub target: ExtensionTarget,
    pub elements: Vec<GroupElement>,
    /// `(r, i, p)`: the element is `f_1^{j_r} f_i^p` (0-based `i`).
    pub labels: Vec<(usize, usize, i64)>,
    pub base: Vec<GroupElement>,
    pub exponents: Vec<i64>,
    pub ladder: Vec<i64>,
    pub step_lengths: Vec<Rational64>,
    pub window: i64,
    pub d: Rational64,
    /// Largest word length in the set.
    pub m: u64,
    pub ladder_checks: Vec<LadderCheck>,
    pub verified_radius: Option<u32>,
    pub checked: u64,
    pub trees: Vec<ActionSpace>,
    pub evaluators: Vec<QmEvaluator>,
}

impl ExtensionSet {
    /// Whether `x` lies in the target class.
    pub fn in_target(&self, x: &GroupElement) -> Result<bool, ConstructError> {
        if !self.trees.is_empty() && !hyperbolic_on_all(&self.trees, x)? {
            return Ok(false);
        }
        for q in &self.evaluators {
            if q.evaluate(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lowest-index `f` with `g f` in the target class.
    pub fn pick(&self, g: &GroupElement) -> Result<Option<usize>, ConstructError> {
        let group = self.group();
        for (i, f) in self.elements.iter().enumerate() {
            if self.in_target(&group.multiply(g, f)?)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn group(&self) -> &GroupSpec {
        match (self.trees.first(), self.evaluators.first()) {
            (Some(s), _) => s.group(),
            (None, Some(q)) => q.group(),
            (None, None) => unreachable!("extension sets have a tree or an evaluator"),
        }
    }

    /// Column `r` whose interval index is hit on no tree.
    pub fn empty_column(&self, g: &GroupElement) -> Result<usize, ConstructError> {
        let l = self.trees.len();
        let mut hit = vec![false; l + 1];
        for (k, space) in self.trees.iter().enumerate() {
            let x = space.orbit_distance(g)?;
            let lk = self.step_lengths[k];
            let mut idx = l;
            if x <= self.d {
                idx = 0;
            } else {
                for r in 1..l {
                    if x <= self.d + lk * self.ladder[r] {
                        idx = r;
                        break;
                    }
                }
            }
            hit[idx] = true;
        }
        Ok(hit.iter().position(|h| !h).expect("l trees cannot fill l + 1 columns"))
    }

    /// The interval claim for `g`: `g f_1^{j_r}` moves every basepoint by
    /// more than `D` for the empty column `r`.
    pub fn interval_claim(&self, g: &GroupElement) -> Result<bool, ConstructError> {
        if self.trees.is_empty() {
            return Ok(true);
        }
        let r = self.empty_column(g)?;
        let group = self.group();
        let shifted = group.multiply(g, &group.pow(&self.base_power(0), self.ladder[r])?)?;
        for space in &self.trees {
            if space.orbit_distance(&shifted)? <= self.d {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn base_power(&self, i: usize) -> GroupElement {
        self.group().pow(&self.base[i], self.exponents[i]).expect("valid element")
    }

    /// Exhaustive check over `S^{<=radius}`: the interval claim, the
    /// evaluator window, and membership of some `g f`.
    pub fn verify(&mut self, radius: u32) -> Result<u64, ConstructError> {
        let group = self.group().clone();
        let spheres = census::enumerate_spheres(&group, radius, census::DEFAULT_BUDGET)?;
        let mut checked = 0;
        for sphere in &spheres {
            let failure = sphere
                .par_iter()
                .map(|g| self.check_one(&group, g).map(|ok| (g, ok)))
                .find_map_first(|r| match r {
                    Ok((_, None)) => None,
                    Ok((g, Some(reason))) => Some(ConstructError::Census(CensusError::Counterexample {
                        element: group.render(g),
                        reason,
                    })),
                    Err(e) => Some(e),
                });
            if let Some(e) = failure {
                return Err(e);
            }
            checked += sphere.len() as u64;
        }
        self.verified_radius = Some(radius);
        self.checked = checked;
        Ok(checked)
    }

    fn check_one(&self, group: &GroupSpec, g: &GroupElement) -> Result<Option<String>, ConstructError> {
        if !self.interval_claim(g)? {
            return Ok(Some("interval claim fails".into()));
        }
        if !self.evaluators.is_empty() && !self.trees.is_empty() {
            for i in 0..self.base.len() {
                let fi = self.base_power(i);
                let mut x = g.clone();
                let mut ok = false;
                for _ in 0..self.window {
                    x = group.multiply(&x, &fi)?;
                    let mut all = true;
                    for q in &self.evaluators {
                        all &= !q.evaluate(&x)?.is_zero();
                    }
                    if all {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return Ok(Some(format!("evaluator window fails for f_{}", i + 1)));
                }
            }
        }
        Ok(match self.pick(g)? {
            Some(_) => None,
            None => Some(format!("no f in F puts g f in the {} class", self.target)),
        })
    }

    pub fn render(&self, group: &GroupSpec) -> String {
        let mut out = String::new();
        out.push_str(&format!("target\t{}\n", self.target));
        out.push_str(&format!("D\t{}\nsize\t{}\nM\t{}\n", self.d, self.elements.len(), self.m));
        let ladder: Vec<_> = self.ladder.iter().map(|j| j.to_string()).collect();
        out.push_str(&format!("ladder\t{}\n", ladder.join(",")));
        out.push_str(&format!("window\t{}\n", self.window));
        for (i, (b, n)) in self.base.iter().zip(&self.exponents).enumerate() {
            out.push_str(&format!("f_{}\t({})^{n}\n", i + 1, group.render(b)));
        }
        for c in &self.ladder_checks {
            out.push_str(&format!("ladder_check\tk={} r={} {} > {}\n", c.space + 1, c.r, c.lhs, c.rhs));
        }
        for (e, (r, i, p)) in self.elements.iter().zip(&self.labels) {
            out.push_str(&format!("element\tr={r} i={} p={p}\t{}\n", i + 1, group.render(e)));
        }
        match self.verified_radius {
            Some(r) => out.push_str(&format!("verified\tradius={r} checked={}\n", self.checked)),
            None => out.push_str("verified\tno\n"),
        }
        out
    }
}

/// Extension set for simultaneously contracting elements on trees of
/// general type.
pub fn sc_extension_set(
    spaces: &[ActionSpace],
    verify_radius: Option<u32>,
    route: FamilyRoute,
) -> Result<ExtensionSet, ConstructError> {
    for s in spaces {
        if s.action_type() != ActionType::GeneralType {
            return Err(ConstructError::Precondition(format!("{s} is not a tree of general type")));
        }
    }
    let l = spaces.len();
    let base = independent_sc_family(spaces, 2 * l + 2, route)?.elements;
    build(spaces, &[], base, verify_radius)
}

/// Extension set for simultaneously hyperbolic elements: trees of general
/// type plus lineal spaces and evaluators.
pub fn sh_extension_set(
    spaces: &[ActionSpace],
    qms: &[QmEvaluator],
    verify_radius: Option<u32>,
) -> Result<ExtensionSet, ConstructError> {
    let (trees, tail) = split_spaces(spaces, qms)?;
    let l = trees.len() + tail.len();
    if trees.is_empty() {
        let lin = lineal_focal_extension_set(&tail, SEARCH_RADIUS)?;
        let group = tail[0].group();
        let mut set = ExtensionSet {
            target: ExtensionTarget::Sh,
            m: lin.set.iter().map(|f| group.word_length(f)).max().unwrap_or(0),
            labels: (1..=lin.set.len()).map(|j| (0, 0, j as i64 * lin.k)).collect(),
            elements: lin.set,
            base: vec![lin.base],
            exponents: vec![1],
            ladder: vec![0],
            step_lengths: vec![],
            window: l as i64 + 1,
            d: Rational64::zero(),
            ladder_checks: vec![],
            verified_radius: None,
            checked: 0,
            trees,
            evaluators: tail,
        };
        if let Some(r) = verify_radius {
            set.verify(r)?;
        }
        return Ok(set);
    }
    let accept = |x: &GroupElement| -> Result<bool, ConstructError> {
        for q in &tail {
            if q.evaluate(x)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let base = search_family_with(&trees, 2 * l + 2, SEARCH_RADIUS, accept)?;
    build(&trees, &tail, base, verify_radius)
}

/// Trees of general type, and evaluators for everything else.
pub(crate) fn split_spaces(
    spaces: &[ActionSpace],
    qms: &[QmEvaluator],
) -> Result<(Vec<ActionSpace>, Vec<QmEvaluator>), ConstructError> {
    let mut trees = Vec::new();
    let mut tail = qms.to_vec();
    for s in spaces {
        match s.action_type() {
            ActionType::GeneralType => trees.push(s.clone()),
            ActionType::Lineal { orientable: true } => tail.push(QmEvaluator::busemann(s)?),
            ActionType::Elliptic => return Err(ConstructError::Precondition(format!("{s} is elliptic"))),
            other => {
                return Err(ConstructError::Precondition(format!(
                    "{s} has type {other:?}; pass to an orientable subgroup first"
                )))
            }
        }
    }
    if trees.is_empty() && tail.is_empty() {
        return Err(ConstructError::Precondition("no spaces".into()));
    }
    Ok((trees, tail))
}

fn build(
    trees: &[ActionSpace],
    tail: &[QmEvaluator],
    base: Vec<GroupElement>,
    verify_radius: Option<u32>,
) -> Result<ExtensionSet, ConstructError> {
    let group = trees[0].group().clone();
    let l = trees.len();
    let d = calibrate_extension_constant(trees, &base, CALIBRATION_BUDGET, CALIBRATION_SEED)?.d;
    let two_delta = tail.iter().map(|q| q.defect()).max().unwrap_or_else(Rational64::zero) * 2;

    let mut exponents = Vec::with_capacity(base.len());
    for h in &base {
        let mut n = 1;
        loop {
            let p = group.pow(h, n)?;
            let ds = orbit_distances(trees, &p)?;
            let mut ok = ds.iter().all(|x| *x >= d * 2);
            for q in tail {
                ok &= q.evaluate(&p)?.abs() > two_delta;
            }
            if ok {
                break;
            }
            n += 1;
            if n > POWER_LIMIT {
                return Err(ConstructError::Budget("base exponent".into()));
            }
        }
        exponents.push(n);
    }
    let f1 = group.pow(&base[0], exponents[0])?;
    let step_lengths = orbit_distances(trees, &f1)?;

    let mut ladder = vec![0i64];
    let mut ladder_checks = Vec::new();
    for r in 1..=l {
        let prev = ladder[r - 1];
        let mut j = prev + 1;
        loop {
            let ds = orbit_distances(trees, &group.pow(&f1, j)?)?;
            let rhs: Vec<Rational64> = step_lengths.iter().map(|lk| d * 2 + *lk * prev).collect();
            if ds.iter().zip(&rhs).all(|(x, y)| x > y) {
                for k in 0..l {
                    ladder_checks.push(LadderCheck {
                        space: k,
                        r,
                        lhs: ds[k],
                        rhs: rhs[k],
                    });
                }
                break;
            }
            j += 1;
            if j > POWER_LIMIT {
                return Err(ConstructError::Budget("ladder".into()));
            }
        }
        ladder.push(j);
    }

    let window = if tail.is_empty() { 1 } else { tail.len() as i64 + 1 };
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (r, &jr) in ladder.iter().enumerate() {
        let shift = group.pow(&f1, jr)?;
        for (i, h) in base.iter().enumerate() {
            for p in 1..=window {
                let fp = group.pow(h, exponents[i] * p)?;
                elements.push(group.multiply(&shift, &fp)?);
                labels.push((r, i, p));
            }
        }
    }
    let mut set = ExtensionSet {
        target: if tail.is_empty() { ExtensionTarget::Sc } else { ExtensionTarget::Sh },
        m: elements.iter().map(|f| group.word_length(f)).max().unwrap_or(0),
        elements,
        labels,
        base,
        exponents,
        ladder,
        step_lengths,
        window,
        d,
        ladder_checks,
        verified_radius: None,
        checked: 0,
        trees: trees.to_vec(),
        evaluators: tail.to_vec(),
    };
    if let Some(r) = verify_radius {
        set.verify(r)?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_tree_set() {
        let f2 = GroupSpec::free(2).unwrap();
        let space = ActionSpace::cayley(f2.clone(), None).unwrap();
        let set = sc_extension_set(&[space], Some(5), FamilyRoute::Search).unwrap();
        assert_eq!(set.d, Rational64::from_integer(1));
        assert_eq!(set.base.len(), 4);
        assert_eq!(set.ladder.len(), 2);
        assert_eq!(set.elements.len(), 8);
        assert_eq!(set.checked, 485);
    }

    #[test]
    fn tree_and_line() {
        let f2 = GroupSpec::free(2).unwrap();
        let spaces = vec![
            ActionSpace::cayley(f2.clone(), None).unwrap(),
            ActionSpace::line(f2.clone(), vec![1.into(), 0.into()]).unwrap(),
        ];
        let set = sh_extension_set(&spaces, &[], Some(4)).unwrap();
        assert_eq!(set.target, ExtensionTarget::Sh);
        assert_eq!(set.window, 2);
        assert!(set.checked > 0);
    }

    #[test]
    fn lineal_only() {
        let f2 = GroupSpec::free(2).unwrap();
        let spaces = vec![ActionSpace::line(f2.clone(), vec![1.into(), (-1).into()]).unwrap()];
        let set = sh_extension_set(&spaces, &[], Some(4)).unwrap();
        assert_eq!(set.elements.len(), 2);
    }
}
