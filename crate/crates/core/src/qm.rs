//! Homogeneous quasimorphisms and the searches that combine them.
//!
//! Three evaluator kinds are exact: homomorphisms (weighted exponent sums),
//! homogenized counting quasimorphisms of a pattern word (evaluated on the
//! cyclic core), and the Busemann quasimorphism of a line action, which is
//! the line's defining homomorphism.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::actions::{weighted_sum, ActionError, ActionKind, ActionSpace, ActionType};
use crate::census;
use crate::group::parse::Cursor;
use crate::group::{random_element, GroupElement, GroupError, GroupSpec, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QmError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("invalid evaluator: {0}")]
    Invalid(String),
    #[error("{label} vanishes on the whole ball of radius {radius}")]
    Vanishes { label: String, radius: u32 },
    #[error("{label}: sampled defect {sampled} exceeds declared {declared}")]
    DefectExceeded {
        label: String,
        sampled: Rational64,
        declared: Rational64,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("enumeration failed: {0}")]
    Census(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QmKind {
    Homomorphism { weights: Vec<Rational64> },
    /// Cyclic occurrences of `pattern` minus those of its inverse, per period,
    /// in the free coordinate `factor`; `pattern` uses that coordinate's
    /// local generator indices.
    HomogenizedCounting { pattern: Word, factor: Option<usize> },
    BusemannLine { space: ActionSpace },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmEvaluator {
    group: GroupSpec,
    kind: QmKind,
    defect: Rational64,
    label: String,
}

/// Largest ball used for the defect scan at construction time.
const DEFECT_SCAN_BALL_LIMIT: u64 = 2000;

/// Defect scans over all pairs with `|g|, |h| <= 8`, computed ahead of time
/// and rechecked by the test suite: (rank, pattern, scanned maximum).
pub const PRESCANNED_DEFECTS: &[(u32, &str, i64)] = &[(2, "ab", 2), (2, "aB", 2), (2, "a", 0), (2, "b", 0)];
pub const PRESCAN_RADIUS: usize = 8;

impl QmEvaluator {
    pub fn homomorphism(group: GroupSpec, weights: Vec<Rational64>) -> Result<Self, QmError> {
        // A homomorphism has the same constraints as a line action.
        let space = ActionSpace::line(group.clone(), weights.clone())?;
        let label = format!("hom{}", &space.to_string()["line".len()..]);
        Ok(QmEvaluator {
            group,
            kind: QmKind::Homomorphism { weights },
            defect: Rational64::zero(),
            label,
        })
    }

    /// Busemann quasimorphism of an orientable lineal action. Rank-one Cayley
    /// trees are converted to the equivalent line.
    pub fn busemann(space: &ActionSpace) -> Result<Self, QmError> {
        let line = match space.kind() {
            ActionKind::Line { .. } => space.clone(),
            ActionKind::CayleyTree { factor } if space.action_type() == (ActionType::Lineal { orientable: true }) => {
                let group = space.group().clone();
                let mut weights = vec![Rational64::zero(); group.rank() as usize];
                weights[group.generator_offset(factor.unwrap_or(0)) as usize] = Rational64::from_integer(1);
                ActionSpace::line(group, weights)?
            }
            _ => {
                return Err(QmError::Invalid(format!(
                    "{space} is not an orientable lineal action"
                )))
            }
        };
        Ok(QmEvaluator {
            group: line.group().clone(),
            label: format!("busemann({line})"),
            kind: QmKind::BusemannLine { space: line },
            defect: Rational64::zero(),
        })
    }

    /// Homogenized counting quasimorphism of a reduced pattern written over
    /// the global generators of one free coordinate.
    pub fn counting(group: GroupSpec, pattern: &GroupElement) -> Result<Self, QmError> {
        let letters = group.geodesic_letters(pattern);
        if letters.is_empty() {
            return Err(QmError::Invalid("empty pattern".into()));
        }
        let (factor, offset) = locate_free_coordinate(&group, letters[0].gen)?;
        let local = group.factor_spec(factor)?;
        let rank = local.rank();
        let mut shifted = Vec::with_capacity(letters.len());
        for l in &letters {
            let g = l.gen.checked_sub(offset).filter(|g| *g < rank).ok_or_else(|| {
                QmError::Invalid("pattern letters must lie in one free coordinate".into())
            })?;
            shifted.push(crate::group::Letter::new(g, l.inv));
        }
        let pattern = Word::reduce(shifted, rank)?;
        let scanned = cached_defect(rank, &pattern);
        let names = group.generator_names();
        let text: String = letters
            .iter()
            .map(|l| {
                let name = &names[l.gen as usize];
                if l.inv {
                    name.to_uppercase()
                } else {
                    name.clone()
                }
            })
            .collect();
        let label = format!("count(w={text})");
        Ok(QmEvaluator {
            group,
            kind: QmKind::HomogenizedCounting { pattern, factor },
            defect: Rational64::from_integer(2 * scanned),
            label,
        })
    }

    pub fn parse_list(group: &GroupSpec, actions: &[ActionSpace], text: &str) -> Result<Vec<Self>, QmError> {
        parse_qms(group, actions, text)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn kind(&self) -> &QmKind {
        &self.kind
    }

    /// Declared upper bound on the defect.
    pub fn defect(&self) -> Rational64 {
        self.defect
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, g: &GroupElement) -> Result<Rational64, QmError> {
        self.group.check(g)?;
        Ok(match &self.kind {
            QmKind::Homomorphism { weights } => weighted_sum(&self.group, weights, g),
            QmKind::BusemannLine { space } => space.line_value(g).expect("line kind"),
            QmKind::HomogenizedCounting { pattern, factor } => {
                let coord = self.group.coordinate(g, *factor)?;
                match coord {
                    GroupElement::Free(w) => Rational64::from_integer(homogenized_count(
                        &ranks(w.letters()),
                        &ranks(pattern.letters()),
                    )),
                    _ => unreachable!("checked at construction"),
                }
            }
        })
    }

    fn nonzero(&self, g: &GroupElement) -> Result<bool, QmError> {
        Ok(!self.evaluate(g)?.is_zero())
    }
}

impl fmt::Display for QmEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

fn locate_free_coordinate(group: &GroupSpec, global: u32) -> Result<(Option<usize>, u32), QmError> {
    match group {
        GroupSpec::Free(_) => Ok((None, 0)),
        GroupSpec::Product(fs) => {
            for (i, f) in fs.iter().enumerate() {
                let off = group.generator_offset(i);
                if global < off + f.rank() {
                    return match f {
                        GroupSpec::Free(_) => Ok((Some(i), off)),
                        _ => Err(QmError::Invalid("counting needs a free coordinate".into())),
                    };
                }
            }
            Err(GroupError::LetterOutOfRange { gen: global, rank: group.rank() }.into())
        }
        GroupSpec::FreeProduct(_) => Err(QmError::Invalid("counting needs a free coordinate".into())),
    }
}

/// Letter ranks `2·gen + inv`; the inverse of rank `r` is `r ^ 1`.
fn ranks(letters: &[crate::group::Letter]) -> Vec<u8> {
    letters.iter().map(|l| l.rank() as u8).collect()
}

/// Occurrences of `w` starting in one period of the bi-infinite word `c^∞`.
fn cyclic_occurrences(c: &[u8], w: &[u8]) -> i64 {
    let m = c.len();
    if m == 0 {
        return 0;
    }
    let mut count = 0;
    for i in 0..m {
        let mut j = i;
        let mut hit = true;
        for &x in w {
            if c[j] != x {
                hit = false;
                break;
            }
            j += 1;
            if j == m {
                j = 0;
            }
        }
        count += i64::from(hit);
    }
    count
}

/// Homogenized count on a reduced word given as letter ranks, with the
/// pattern and its inverse precomputed.
fn homogenized_count_with(word: &[u8], pattern: &[u8], inverse: &[u8]) -> i64 {
    let n = word.len();
    let mut k = 0;
    while 2 * k + 1 < n && word[k] == word[n - 1 - k] ^ 1 {
        k += 1;
    }
    let core = &word[k..n - k];
    cyclic_occurrences(core, pattern) - cyclic_occurrences(core, inverse)
}

pub(crate) fn homogenized_count(word: &[u8], pattern: &[u8]) -> i64 {
    homogenized_count_with(word, pattern, &inverse_ranks(pattern))
}

fn inverse_ranks(pattern: &[u8]) -> Vec<u8> {
    pattern.iter().rev().map(|r| r ^ 1).collect()
}

/// All reduced words of length `<= radius` in `F_rank`, as letter ranks.
fn free_ball_ranks(rank: u32, radius: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            for r in 0..(2 * rank) as u8 {
                if w.last().is_some_and(|&l| l == r ^ 1) {
                    continue;
                }
                let mut x = w.clone();
                x.push(r);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `max |β(gh) − β(g) − β(h)|` over all `|g|, |h| <= radius` in `F_rank`.
pub fn counting_defect_scan(rank: u32, pattern: &Word, radius: usize) -> i64 {
    let pat = ranks(pattern.letters());
    let inv = inverse_ranks(&pat);
    let ball = free_ball_ranks(rank, radius);
    let values: Vec<i64> = ball.iter().map(|w| homogenized_count_with(w, &pat, &inv)).collect();
    let mut buf: Vec<u8> = Vec::with_capacity(2 * radius);
    let mut worst = 0;
    for (g, bg) in ball.iter().zip(&values) {
        for (h, bh) in ball.iter().zip(&values) {
            let mut k = 0;
            while k < g.len() && k < h.len() && g[g.len() - 1 - k] == h[k] ^ 1 {
                k += 1;
            }
            buf.clear();
            buf.extend_from_slice(&g[..g.len() - k]);
            buf.extend_from_slice(&h[k..]);
            let d = (homogenized_count_with(&buf, &pat, &inv) - bg - bh).abs();
            worst = worst.max(d);
        }
    }
    worst
}

/// Radius used at construction time when no prescanned value exists.
pub fn runtime_scan_radius(rank: u32) -> usize {
    let mut r = 1;
    while census::free_ball_size(rank, r as u32 + 1) <= DEFECT_SCAN_BALL_LIMIT.into() {
        r += 1;
    }
    r
}

fn cached_defect(rank: u32, pattern: &Word) -> i64 {
    let text: String = pattern
        .letters()
        .iter()
        .map(|l| {
            let c = (b'a' + l.gen as u8) as char;
            if l.inv {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect();
    if let Some(&(_, _, v)) = PRESCANNED_DEFECTS.iter().find(|(r, p, _)| *r == rank && *p == text) {
        return v;
    }
    static CACHE: OnceLock<Mutex<HashMap<(u32, Word), i64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("poisoned").get(&(rank, pattern.clone())) {
        return *v;
    }
    let v = counting_defect_scan(rank, pattern, runtime_scan_radius(rank).max(pattern.len()));
    cache.lock().expect("poisoned").insert((rank, pattern.clone()), v);
    v
}

/// Largest observed `|β(gh) − β(g) − β(h)|` over random pairs; errors when
/// it exceeds the declared defect.
pub fn defect_sample(q: &QmEvaluator, pairs: usize, max_len: usize, seed: u64) -> Result<Rational64, QmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Rational64::zero();
    for _ in 0..pairs {
        let g = random_element(&mut rng, &q.group, max_len);
        let h = random_element(&mut rng, &q.group, max_len);
        let gh = q.group.multiply(&g, &h)?;
        let d = (q.evaluate(&gh)? - q.evaluate(&g)? - q.evaluate(&h)?).abs();
        worst = worst.max(d);
    }
    if worst > q.defect {
        return Err(QmError::DefectExceeded {
            label: q.label.clone(),
            sampled: worst,
            declared: q.defect,
        });
    }
    Ok(worst)
}

/// `β(g^n) = n β(g)` for all `|n| <= n_max`.
pub fn homogeneity_check(q: &QmEvaluator, g: &GroupElement, n_max: u32) -> Result<bool, QmError> {
    let b = q.evaluate(g)?;
    for n in -(n_max as i64)..=(n_max as i64) {
        if q.evaluate(&q.group.pow(g, n)?)? != b * n {
            return Ok(false);
        }
    }
    Ok(true)
}

fn max_defect(qms: &[QmEvaluator]) -> Rational64 {
    qms.iter().map(|q| q.defect).max().unwrap_or_else(Rational64::zero)
}

/// Smallest `k >= 1` with `k·|value| > bound`.
fn smallest_multiple_above(value: Rational64, bound: Rational64) -> i64 {
    debug_assert!(!value.is_zero());
    let q = (bound / value.abs()).floor().to_integer();
    (q + 1).max(1)
}

/// How [`combine_nonvanishing`] produced an element for an index interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CombineStep {
    /// First element of the ball (length-lexicographic) with `β_i ≠ 0`.
    Base { index: usize },
    /// The inductive element was already nonzero on the whole interval.
    ShortCircuit { lo: usize, hi: usize },
    /// `g^p h^q` from the two sub-intervals.
    Power { lo: usize, hi: usize, p: i64, q: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combined {
    pub element: GroupElement,
    pub values: Vec<Rational64>,
    pub steps: Vec<CombineStep>,
}

/// An element on which every evaluator is nonzero, by induction on the
/// number of evaluators: from `g` (nonzero on `β_lo..β_{hi-1}`) and `h`
/// (nonzero on `β_{lo+1}..β_hi`), return `g` or `h` when already valid,
/// otherwise `g^p h^q` with the smallest valid exponents.
pub fn combine_nonvanishing(qms: &[QmEvaluator], search_radius: u32) -> Result<Combined, QmError> {
    let l = qms.len();
    if l == 0 {
        return Err(QmError::Invalid("no evaluators".into()));
    }
    let group = qms[0].group.clone();
    if qms.iter().any(|q| q.group != group) {
        return Err(QmError::Invalid("evaluators over different groups".into()));
    }
    let ball = census::enumerate_ball(&group, search_radius).map_err(|e| QmError::Census(e.to_string()))?;
    let mut memo: HashMap<(usize, usize), GroupElement> = HashMap::new();
    let mut steps = Vec::new();
    let element = combine_interval(qms, &group, &ball, search_radius, 0, l - 1, &mut memo, &mut steps)?;
    let values = qms.iter().map(|q| q.evaluate(&element)).collect::<Result<Vec<_>, _>>()?;
    if values.iter().any(|v| v.is_zero()) {
        return Err(QmError::Verification(format!(
            "combined element {} vanishes on some evaluator",
            group.render(&element)
        )));
    }
    Ok(Combined { element, values, steps })
}

#[allow(clippy::too_many_arguments)]
fn combine_interval(
    qms: &[QmEvaluator],
    group: &GroupSpec,
    ball: &[GroupElement],
    radius: u32,
    lo: usize,
    hi: usize,
    memo: &mut HashMap<(usize, usize), GroupElement>,
    steps: &mut Vec<CombineStep>,
) -> Result<GroupElement, QmError> {
    if let Some(g) = memo.get(&(lo, hi)) {
        return Ok(g.clone());
    }
    let result = if lo == hi {
        let mut found = None;
        for x in ball {
            if qms[lo].nonzero(x)? {
                found = Some(x.clone());
                break;
            }
        }
        steps.push(CombineStep::Base { index: lo });
        found.ok_or_else(|| QmError::Vanishes {
            label: qms[lo].label.clone(),
            radius,
        })?
    } else {
        let g = combine_interval(qms, group, ball, radius, lo, hi - 1, memo, steps)?;
        let h = combine_interval(qms, group, ball, radius, lo + 1, hi, memo, steps)?;
        let all_nonzero = |x: &GroupElement| -> Result<bool, QmError> {
            for q in &qms[lo..=hi] {
                if !q.nonzero(x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if all_nonzero(&g)? {
            steps.push(CombineStep::ShortCircuit { lo, hi });
            g
        } else if all_nonzero(&h)? {
            steps.push(CombineStep::ShortCircuit { lo, hi });
            h
        } else {
            // Here β_hi(g) = 0 and β_lo(h) = 0.
            let delta = max_defect(&qms[lo..=hi]);
            let p = smallest_multiple_above(qms[lo].evaluate(&g)?, delta * 2);
            let gp = group.pow(&g, p)?;
            let mut q = smallest_multiple_above(qms[hi].evaluate(&h)?, delta * 2);
            for qm in &qms[lo + 1..hi] {
                let bound = qm.evaluate(&gp)?.abs() + delta * 2;
                q = q.max(smallest_multiple_above(qm.evaluate(&h)?, bound));
            }
            let hq = group.pow(&h, q)?;
            steps.push(CombineStep::Power { lo, hi, p, q });
            group.multiply(&gp, &hq)?
        }
    };
    for q in &qms[lo..=hi] {
        if !q.nonzero(&result)? {
            return Err(QmError::Verification(format!(
                "{} vanishes on {} for indices {lo}..={hi}",
                q.label,
                group.render(&result)
            )));
        }
    }
    memo.insert((lo, hi), result.clone());
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Avoided {
    pub element: GroupElement,
    pub k: i64,
}

/// `g^k` with the smallest `k` such that `|β_i(g^k)| > max_j |β_i(f_j)| + Δ`
/// for every `i`; then `g^k` avoids every `A_i` and every coset `A_i f_j`,
/// which is also checked directly.
pub fn avoid_cosets(qms: &[QmEvaluator], g: &GroupElement, fs: &[GroupElement]) -> Result<Avoided, QmError> {
    let group = qms.first().ok_or_else(|| QmError::Invalid("no evaluators".into()))?.group.clone();
    let delta = max_defect(qms);
    let mut k = 1;
    for q in qms {
        let b = q.evaluate(g)?;
        if b.is_zero() {
            return Err(QmError::Invalid(format!("{} vanishes on {}", q.label, group.render(g))));
        }
        let mut bound = Rational64::zero();
        for f in fs {
            bound = bound.max(q.evaluate(f)?.abs());
        }
        k = k.max(smallest_multiple_above(b, bound + delta));
    }
    let gk = group.pow(g, k)?;
    for q in qms {
        let v = q.evaluate(&gk)?.abs();
        for f in fs {
            if v <= q.evaluate(f)?.abs() + delta {
                return Err(QmError::Verification(format!("{}: bound fails for k = {k}", q.label)));
            }
            let shifted = group.multiply(&gk, &group.inverse(f))?;
            if q.evaluate(&shifted)?.is_zero() {
                return Err(QmError::Verification(format!(
                    "{}: g^k lies in a coset A·f for k = {k}",
                    q.label
                )));
            }
        }
        if v.is_zero() {
            return Err(QmError::Verification(format!("{} vanishes on g^{k}", q.label)));
        }
    }
    Ok(Avoided { element: gk, k })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinealExtension {
    pub base: GroupElement,
    pub k: i64,
    /// `h^k, h^{2k}, ..., h^{(l+1)k}`.
    pub set: Vec<GroupElement>,
}

/// Extension set for actions that are all lineal or focal: for every `g`
/// some `g h^{jk}` is nonzero on every evaluator.
pub fn lineal_focal_extension_set(qms: &[QmEvaluator], search_radius: u32) -> Result<LinealExtension, QmError> {
    let combined = combine_nonvanishing(qms, search_radius)?;
    let h = combined.element;
    let group = &qms[0].group;
    let delta = max_defect(qms);
    let mut k = 1;
    for q in qms {
        k = k.max(smallest_multiple_above(q.evaluate(&h)?, delta * 2));
    }
    let set = (1..=qms.len() as i64 + 1)
        .map(|j| group.pow(&h, j * k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinealExtension { base: h, k, set })
}

/// Some `f` in `set` with `β_i(g f) ≠ 0` for every evaluator.
pub fn lineal_extension_pick(
    qms: &[QmEvaluator],
    set: &[GroupElement],
    g: &GroupElement,
) -> Result<Option<usize>, QmError> {
    let group = &qms[0].group;
    'outer: for (j, f) in set.iter().enumerate() {
        let gf = group.multiply(g, f)?;
        for q in qms {
            if !q.nonzero(&gf)? {
                continue 'outer;
            }
        }
        return Ok(Some(j));
    }
    Ok(None)
}

/// Evaluator grammar, case-insensitive, `;`-separated:
/// `hom(a=1,b=-1/2)`, `count(w=ab)`, `busemann(k)` for the `k`-th declared
/// action (from 1), or `busemann(line(a=1))`.
pub fn parse_qms(group: &GroupSpec, actions: &[ActionSpace], text: &str) -> Result<Vec<QmEvaluator>, QmError> {
    let mut out = Vec::new();
    for part in text.split(';') {
        if part.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(part);
        let kw = cur.keyword()?;
        cur.expect('(')?;
        let q = match kw.as_str() {
            "hom" => {
                let space = crate::actions::parse_actions(group, &format!("line({}", cur.rest()))?;
                let weights = match space[0].kind() {
                    ActionKind::Line { weights } => weights.clone(),
                    _ => unreachable!(),
                };
                QmEvaluator::homomorphism(group.clone(), weights)?
            }
            "count" => {
                let key = cur.keyword()?;
                if key != "w" {
                    return Err(cur.error(format!("expected 'w', found '{key}'")).into());
                }
                cur.expect('=')?;
                let rest = cur.rest();
                let close = rest.rfind(')').ok_or_else(|| cur.error("expected ')'"))?;
                if !rest[close + 1..].trim().is_empty() {
                    return Err(cur.error("unexpected trailing input").into());
                }
                let pattern = group.parse_element(&rest[..close])?;
                QmEvaluator::counting(group.clone(), &pattern)?
            }
            "busemann" => {
                if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let k = cur.integer()?;
                    cur.expect(')')?;
                    cur.finish()?;
                    let space = usize::try_from(k)
                        .ok()
                        .and_then(|k| k.checked_sub(1))
                        .and_then(|i| actions.get(i))
                        .ok_or_else(|| QmError::Invalid(format!("no action number {k}")))?;
                    QmEvaluator::busemann(space)?
                } else {
                    let rest = cur.rest();
                    let close = rest.rfind(')').ok_or_else(|| cur.error("expected ')'"))?;
                    let spaces = crate::actions::parse_actions(group, &rest[..close])?;
                    if spaces.len() != 1 {
                        return Err(QmError::Invalid("busemann takes one action".into()));
                    }
                    QmEvaluator::busemann(&spaces[0])?
                }
            }
            other => return Err(cur.error(format!("unknown evaluator '{other}'")).into()),
        };
        out.push(q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupSpec {
        GroupSpec::free(2).unwrap()
    }

    fn el(g: &GroupSpec, t: &str) -> GroupElement {
        g.parse_element(t).unwrap()
    }

    #[test]
    fn counting_values() {
        let g = f2();
        let q = QmEvaluator::counting(g.clone(), &el(&g, "ab")).unwrap();
        assert_eq!(q.evaluate(&el(&g, "a b a b a b")).unwrap(), Rational64::from_integer(3));
        assert_eq!(q.evaluate(&el(&g, "B A")).unwrap(), Rational64::from_integer(-1));
        assert_eq!(q.evaluate(&el(&g, "a b a B")).unwrap(), Rational64::from_integer(1));
        assert_eq!(q.evaluate(&g.identity()).unwrap(), Rational64::zero());
        assert_eq!(q.label(), "count(w=ab)");
        assert_eq!(q.defect(), Rational64::from_integer(4));
    }

    #[test]
    fn homomorphism_and_busemann() {
        let g = f2();
        let h = QmEvaluator::homomorphism(g.clone(), vec![1.into(), 0.into()]).unwrap();
        assert_eq!(h.evaluate(&el(&g, "a^3 b a^2")).unwrap(), Rational64::from_integer(5));
        assert_eq!(h.label(), "hom(a=1)");
        let line = ActionSpace::line(g.clone(), vec![1.into(), 0.into()]).unwrap();
        let b = QmEvaluator::busemann(&line).unwrap();
        assert_eq!(b.evaluate(&el(&g, "a^5 b")).unwrap(), Rational64::from_integer(5));
        assert!(QmEvaluator::busemann(&ActionSpace::cayley(g, None).unwrap()).is_err());
    }

    #[test]
    fn combine_two_homomorphisms() {
        let g = f2();
        let qs = parse_qms(&g, &[], "hom(a=1); hom(b=1)").unwrap();
        let c = combine_nonvanishing(&qs, 2).unwrap();
        assert!(c.values.iter().all(|v| !v.is_zero()));
        assert!(c.steps.iter().any(|s| matches!(s, CombineStep::Power { .. })));
        let single = combine_nonvanishing(&qs[..1], 2).unwrap();
        assert_eq!(single.element, el(&g, "a"));
    }

    #[test]
    fn avoid_single_coset() {
        let g = f2();
        let qs = parse_qms(&g, &[], "hom(a=1)").unwrap();
        let r = avoid_cosets(&qs, &el(&g, "a"), &[el(&g, "a^3")]).unwrap();
        assert_eq!(r.k, 4);
        let r = avoid_cosets(&qs, &el(&g, "a"), &[]).unwrap();
        assert_eq!(r.k, 1);
    }

    #[test]
    fn lineal_set_shape() {
        let g = f2();
        let qs = parse_qms(&g, &[], "hom(a=1)").unwrap();
        let e = lineal_focal_extension_set(&qs, 2).unwrap();
        assert_eq!(e.set, vec![el(&g, "a"), el(&g, "a^2")]);
        let qs = parse_qms(&g, &[], "hom(a=1);hom(b=1)").unwrap();
        assert_eq!(lineal_focal_extension_set(&qs, 2).unwrap().set.len(), 3);
    }

    #[test]
    fn parse_errors() {
        let g = f2();
        assert!(parse_qms(&g, &[], "hom(c=1)").is_err());
        assert!(parse_qms(&g, &[], "count(w=)").is_err());
        assert!(parse_qms(&g, &[], "busemann(3)").is_err());
        assert!(parse_qms(&g, &[], "mystery(1)").is_err());
    }

    #[test]
    fn vanishing_is_reported() {
        let g = f2();
        let qs = parse_qms(&g, &[], "hom()").unwrap();
        assert!(matches!(combine_nonvanishing(&qs, 3), Err(QmError::Vanishes { .. })));
    }
}
