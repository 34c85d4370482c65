//! Simultaneously contracting elements on `l` trees of general type, by
//! induction on `l`.
//!
//! Two pools of `4s` elements (`s = 2l + 2`) are powered up: `F` contracting
//! on the first `l - 1` trees, `T` on the last `l - 1`. Pigeonhole keeps
//! `2s` of each according to whether `T` moves the first basepoint more than
//! `D` and whether `F` moves the last one more than `D`; each of the four
//! cases pairs two sweeps whose survivor sets must intersect.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;

use super::{
    calibrate_extension_constant, hyperbolic_on_all, power_up, power_up_with_floor, sc_construction, search_family,
    CalibrationResult, ConstructError, PoweredFamily, ShCertificate,
};
use crate::actions::{ActionSpace, ActionType};
use crate::group::{GroupElement, GroupSpec};

type Candidate<'a> = Box<dyn Fn(usize, usize) -> Result<GroupElement, ConstructError> + 'a>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitSide {
    /// Displacement above `D`.
    Far,
    /// Displacement at most `D`.
    Near,
}

impl fmt::Display for SplitSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitSide::Far => ">D",
            SplitSide::Near => "<=D",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PigeonholeCase {
    /// A single tree.
    Base,
    /// `f_i g_j`.
    FarFar,
    /// `f_i f_1 g_1 g_j`.
    NearNear,
    /// `g_j f_1 f_i` (far) or `g_j g_1 f_1 f_i` (near), split on
    /// `d(o_l, f_1 f_i o_l)`.
    FarNear(SplitSide),
    /// `g_j g_1 f_i` (far) or `g_j g_1 f_1 f_i` (near), split on
    /// `d(o_1, g_j g_1 o_1)`.
    NearFar(SplitSide),
    /// Lineal spaces present: trees by extension set, the rest by
    /// quasimorphisms.
    LinealTail,
}

impl fmt::Display for PigeonholeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PigeonholeCase::Base => f.write_str("base"),
            PigeonholeCase::FarFar => f.write_str("f>D g>D: f_i g_j"),
            PigeonholeCase::NearNear => f.write_str("f<=D g<=D: f_i f_1 g_1 g_j"),
            PigeonholeCase::FarNear(SplitSide::Far) => f.write_str("f>D g<=D, f_1 f_i >D: g_j f_1 f_i"),
            PigeonholeCase::FarNear(SplitSide::Near) => f.write_str("f>D g<=D, f_1 f_i <=D: g_j g_1 f_1 f_i"),
            PigeonholeCase::NearFar(SplitSide::Far) => f.write_str("f<=D g>D, g_j g_1 >D: g_j g_1 f_i"),
            PigeonholeCase::NearFar(SplitSide::Near) => f.write_str("f<=D g>D, g_j g_1 <=D: g_j g_1 f_1 f_i"),
            PigeonholeCase::LinealTail => f.write_str("lineal tail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScCertificate {
    pub element: GroupElement,
    pub case: PigeonholeCase,
    pub l: usize,
    pub s: usize,
    pub d: Rational64,
    pub calibration: Option<CalibrationResult>,
    /// The kept `2s` members, after re-indexing.
    pub f_family: Option<PoweredFamily>,
    pub t_family: Option<PoweredFamily>,
    /// Original pool positions of the kept members.
    pub f_kept: Vec<usize>,
    pub t_kept: Vec<usize>,
    /// Second pigeonhole, as positions in the kept family.
    pub sub_kept: Vec<usize>,
    /// `(i, j)` of the returned product.
    pub pair: Option<(usize, usize)>,
    /// `|A|`, `|B|` and the number of candidate pairs.
    pub counts: (usize, usize, usize),
    pub identity: Option<(String, i64)>,
    /// `D` values rejected by a failed sweep before success.
    pub retries: Vec<Rational64>,
    pub translation_lengths: Vec<Rational64>,
    pub tail: Option<Box<ShCertificate>>,
}

impl ScCertificate {
    /// Recomputes hyperbolicity on every space.
    pub fn recheck(&self, spaces: &[ActionSpace]) -> Result<bool, ConstructError> {
        hyperbolic_on_all(spaces, &self.element)
    }

    pub fn render(&self, group: &GroupSpec) -> String {
        let mut out = String::new();
        out.push_str(&format!("element\t{}\n", group.render(&self.element)));
        out.push_str(&format!("word_length\t{}\n", group.word_length(&self.element)));
        out.push_str(&format!("case\t{}\n", self.case));
        out.push_str(&format!("trees\t{}\ns\t{}\nD\t{}\n", self.l, self.s, self.d));
        if !self.retries.is_empty() {
            let r: Vec<_> = self.retries.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("rejected_D\t{}\n", r.join(",")));
        }
        if let Some(c) = &self.calibration {
            out.push_str(&format!("calibration\tD={} trials={} seed={}\n", c.d, c.trials, c.seed));
        }
        for (name, fam, kept, offset) in [("F", &self.f_family, &self.f_kept, 1), ("T", &self.t_family, &self.t_kept, 2)] {
            if let Some(fam) = fam {
                let e: Vec<_> = fam.exponents.iter().map(|m| m.to_string()).collect();
                let k: Vec<_> = kept.iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!("{name}_kept\t{}\n{name}_exponents\t{}\n", k.join(","), e.join(",")));
                for k in 0..fam.floors.len() {
                    let ds: Vec<_> = fam.distances.iter().map(|row| row[k].to_string()).collect();
                    out.push_str(&format!(
                        "{name}_chain\tspace={} distances={} floor={} holds={}\n",
                        k + offset,
                        ds.join(","),
                        fam.floors[k],
                        fam.chain_holds()
                    ));
                }
            }
        }
        if !self.sub_kept.is_empty() {
            let k: Vec<_> = self.sub_kept.iter().map(|i| (i + 1).to_string()).collect();
            out.push_str(&format!("sub_kept\t{}\n", k.join(",")));
        }
        if let Some((i, j)) = self.pair {
            out.push_str(&format!("pair\ti={} j={}\n", i + 1, j + 1));
        }
        let (a, b, t) = self.counts;
        if t > 0 {
            out.push_str(&format!("counts\t|A|={a} |B|={b} pairs={t} overlap>={}\n", a + b - t));
        }
        if let Some((text, v)) = &self.identity {
            out.push_str(&format!("identity\t{text} = {v}\n"));
        }
        let tl: Vec<_> = self.translation_lengths.iter().map(|t| t.to_string()).collect();
        out.push_str(&format!("translation_lengths\t{}\n", tl.join(",")));
        if let Some(tail) = &self.tail {
            out.push_str(&tail.render(group));
        }
        out
    }
}

/// The four counting identities for given `s` and `l`, each required to be
/// positive.
pub fn pigeonhole_identities(s: usize, l: usize) -> Vec<(String, i64)> {
    let (s, l) = (s as i64, l as i64);
    vec![
        ("4s^2-4sl".to_string(), 4 * s * s - 4 * s * l),
        ("4s^2-(8l-4)s".to_string(), 4 * s * s - (8 * l - 4) * s),
        ("2s^2-(4l-2)s".to_string(), 2 * s * s - (4 * l - 2) * s),
        ("2s^2-(2l+2)s".to_string(), 2 * s * s - (2 * l + 2) * s),
    ]
}

pub(crate) const CALIBRATION_BUDGET: usize = 2000;
pub(crate) const CALIBRATION_SEED: u64 = 0x5eed;
const MAX_RETRIES: usize = 4;

/// An element contracting on every space. Trees of general type go through
/// the induction; other spaces through quasimorphisms. Seeds default to
/// length-lexicographic independent families.
pub fn find_simul_contracting(
    spaces: &[ActionSpace],
    seed_f: Option<&[GroupElement]>,
    seed_t: Option<&[GroupElement]>,
) -> Result<ScCertificate, ConstructError> {
    if spaces.is_empty() {
        return Err(ConstructError::Precondition("no spaces".into()));
    }
    let mut block = Vec::new();
    let mut tail = false;
    for s in spaces {
        match s.action_type() {
            ActionType::GeneralType => block.push(s.clone()),
            ActionType::Elliptic => {
                return Err(ConstructError::Precondition(format!("{s} is elliptic")));
            }
            _ => tail = true,
        }
    }
    if tail {
        let sh = super::simul_hyp::find_simul_hyperbolic(spaces, &[], super::simul_hyp::DEFAULT_SEARCH_RADIUS)?;
        return Ok(ScCertificate {
            element: sh.element.clone(),
            case: PigeonholeCase::LinealTail,
            l: block.len(),
            s: 0,
            d: sh.d,
            calibration: None,
            f_family: None,
            t_family: None,
            f_kept: vec![],
            t_kept: vec![],
            sub_kept: vec![],
            pair: None,
            counts: (0, 0, 0),
            identity: None,
            retries: vec![],
            translation_lengths: translation_lengths(spaces, &sh.element)?,
            tail: Some(Box::new(sh)),
        });
    }
    let l = block.len();
    if l == 1 {
        return base_case(&block, seed_f);
    }
    let s = 2 * l + 2;
    for (text, v) in pigeonhole_identities(s, l) {
        if v <= 0 {
            return Err(ConstructError::Verification(format!("{text} = {v} for s = {s}, l = {l}")));
        }
    }
    let pool_size = 4 * s;
    let f_pool = seed_pool(&block[..l - 1], seed_f, pool_size)?;
    let t_pool = seed_pool(&block[1..], seed_t, pool_size)?;
    let joint: Vec<GroupElement> = f_pool.iter().chain(&t_pool).cloned().collect();
    let calibration = calibrate_extension_constant(&block, &joint, CALIBRATION_BUDGET, CALIBRATION_SEED)?;
    let mut d = calibration.d;
    let mut retries = Vec::new();
    for _ in 0..MAX_RETRIES {
        match induction_step(&block, &f_pool, &t_pool, s, d) {
            Ok(mut cert) => {
                cert.calibration = Some(calibration);
                cert.retries = retries;
                return Ok(cert);
            }
            Err(ConstructError::NoValidPick { .. }) => {
                retries.push(d);
                d *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(ConstructError::Calibration(d))
}

fn translation_lengths(spaces: &[ActionSpace], g: &GroupElement) -> Result<Vec<Rational64>, ConstructError> {
    spaces.iter().map(|s| Ok(s.translation_length(g)?)).collect()
}

fn seed_pool(
    spaces: &[ActionSpace],
    seed: Option<&[GroupElement]>,
    size: usize,
) -> Result<Vec<GroupElement>, ConstructError> {
    match seed {
        Some(xs) if xs.len() >= size => Ok(xs[..size].to_vec()),
        Some(xs) => Err(ConstructError::Precondition(format!(
            "seed pool has {} elements, {size} needed",
            xs.len()
        ))),
        None => search_family(spaces, size, super::family::SEARCH_RADIUS),
    }
}

fn base_case(block: &[ActionSpace], seed: Option<&[GroupElement]>) -> Result<ScCertificate, ConstructError> {
    let space = &block[0];
    let mut element = None;
    if let Some(xs) = seed {
        for x in xs {
            if space.is_hyperbolic(x)? {
                element = Some(x.clone());
                break;
            }
        }
    }
    if element.is_none() {
        element = search_family(block, 1, super::family::SEARCH_RADIUS)?.pop();
    }
    let element = element.ok_or_else(|| ConstructError::Budget("no hyperbolic element".into()))?;
    Ok(ScCertificate {
        translation_lengths: translation_lengths(block, &element)?,
        element,
        case: PigeonholeCase::Base,
        l: 1,
        s: 0,
        d: Rational64::from_integer(0),
        calibration: None,
        f_family: None,
        t_family: None,
        f_kept: vec![],
        t_kept: vec![],
        sub_kept: vec![],
        pair: None,
        counts: (0, 0, 0),
        identity: None,
        retries: vec![],
        tail: None,
    })
}

/// First `want` positions on the majority side (`Far` on ties).
fn pigeonhole(distances: &[Rational64], d: Rational64, want: usize) -> (SplitSide, Vec<usize>) {
    let far: Vec<usize> = (0..distances.len()).filter(|&i| distances[i] > d).collect();
    let near: Vec<usize> = (0..distances.len()).filter(|&i| distances[i] <= d).collect();
    if far.len() >= want {
        (SplitSide::Far, far[..want].to_vec())
    } else {
        (SplitSide::Near, near[..want.min(near.len())].to_vec())
    }
}

/// Survivor pairs `(i, j)` of one sweep.
struct Sweep<'a> {
    spaces: &'a [ActionSpace],
    /// `(label, element)` of targets and pool members.
    targets: Vec<(usize, GroupElement)>,
    pool: Vec<(usize, GroupElement)>,
    /// Whether targets carry the `i` label (else `j`).
    target_is_i: bool,
}

impl Sweep<'_> {
    fn run(&self, d: Rational64) -> Result<BTreeSet<(usize, usize)>, ConstructError> {
        let targets: Vec<_> = self.targets.iter().map(|(_, e)| e.clone()).collect();
        let pool: Vec<_> = self.pool.iter().map(|(_, e)| e.clone()).collect();
        let products = sc_construction(self.spaces, &targets, &pool, d)?;
        Ok(products
            .iter()
            .map(|p| {
                let (t, q) = (self.targets[p.target].0, self.pool[p.pool_index].0);
                if self.target_is_i {
                    (t, q)
                } else {
                    (q, t)
                }
            })
            .collect())
    }
}

fn induction_step(
    block: &[ActionSpace],
    f_pool: &[GroupElement],
    t_pool: &[GroupElement],
    s: usize,
    d: Rational64,
) -> Result<ScCertificate, ConstructError> {
    let l = block.len();
    let group = block[0].group().clone();
    let head = &block[..l - 1];
    let rest = &block[1..];
    let first = std::slice::from_ref(&block[0]);
    let last = std::slice::from_ref(&block[l - 1]);

    let f_all = power_up(head, f_pool, d)?;
    // Trees strictly between the first and the last also need T far beyond F.
    let mut floors = vec![d * 3; rest.len()];
    for k in 1..l - 1 {
        let bound = f_all.distances[0][k] * 2 + d * 2;
        floors[k - 1] = floors[k - 1].max(bound);
    }
    let t_all = power_up_with_floor(rest, t_pool, d, &floors)?;

    let g_on_first: Vec<Rational64> =
        t_all.elements.iter().map(|g| block[0].orbit_distance(g)).collect::<Result<_, _>>()?;
    let f_on_last: Vec<Rational64> =
        f_all.elements.iter().map(|f| block[l - 1].orbit_distance(f)).collect::<Result<_, _>>()?;
    let (g_side, t_kept) = pigeonhole(&g_on_first, d, 2 * s);
    let (f_side, f_kept) = pigeonhole(&f_on_last, d, 2 * s);
    if t_kept.len() < 2 * s || f_kept.len() < 2 * s {
        return Err(ConstructError::Verification("pigeonhole kept fewer than 2s".into()));
    }
    let ff = f_all.select(&f_kept);
    let tt = t_all.select(&t_kept);
    let f = &ff.elements;
    let g = &tt.elements;
    let mul = |xs: &[&GroupElement]| group.product_of(xs.iter().copied());
    let idx = |n: usize| 0..n;
    let ids = pigeonhole_identities(s, l);

    let mut sub_kept = Vec::new();
    let (case, a, b, total, candidate, identity): (
        PigeonholeCase,
        Sweep,
        Sweep,
        usize,
        Candidate<'_>,
        (String, i64),
    ) = match (f_side, g_side) {
        (SplitSide::Far, SplitSide::Far) => (
            PigeonholeCase::FarFar,
            Sweep {
                spaces: head,
                targets: idx(2 * s).map(|j| (j, g[j].clone())).collect(),
                pool: idx(2 * s).map(|i| (i, f[i].clone())).collect(),
                target_is_i: false,
            },
            Sweep {
                spaces: last,
                targets: idx(2 * s).map(|i| (i, f[i].clone())).collect(),
                pool: idx(2 * s).map(|j| (j, g[j].clone())).collect(),
                target_is_i: true,
            },
            4 * s * s,
            Box::new(|i, j| Ok(mul(&[&f[i], &g[j]])?)),
            ids[0].clone(),
        ),
        (SplitSide::Near, SplitSide::Near) => (
            PigeonholeCase::NearNear,
            Sweep {
                spaces: first,
                targets: idx(2 * s).map(|j| Ok((j, mul(&[&f[0], &g[0], &g[j]])?))).collect::<Result<_, ConstructError>>()?,
                pool: idx(2 * s).map(|i| (i, f[i].clone())).collect(),
                target_is_i: false,
            },
            Sweep {
                spaces: rest,
                targets: idx(2 * s).map(|i| Ok((i, mul(&[&f[i], &f[0], &g[0]])?))).collect::<Result<_, ConstructError>>()?,
                pool: idx(2 * s).map(|j| (j, g[j].clone())).collect(),
                target_is_i: true,
            },
            4 * s * s,
            Box::new(|i, j| Ok(mul(&[&f[i], &f[0], &g[0], &g[j]])?)),
            ids[1].clone(),
        ),
        (SplitSide::Far, SplitSide::Near) => {
            let f1fi: Vec<GroupElement> = idx(2 * s).map(|i| mul(&[&f[0], &f[i]])).collect::<Result<_, _>>()?;
            let dist: Vec<Rational64> =
                f1fi.iter().map(|x| block[l - 1].orbit_distance(x)).collect::<Result<_, _>>()?;
            let (side, sub) = pigeonhole(&dist, d, s);
            sub_kept = sub.clone();
            match side {
                SplitSide::Far => (
                    PigeonholeCase::FarNear(SplitSide::Far),
                    Sweep {
                        spaces: head,
                        targets: idx(2 * s).map(|j| Ok((j, mul(&[&g[j], &f[0]])?))).collect::<Result<_, ConstructError>>()?,
                        pool: sub.iter().map(|&i| (i, f[i].clone())).collect(),
                        target_is_i: false,
                    },
                    Sweep {
                        spaces: last,
                        targets: sub.iter().map(|&i| (i, f1fi[i].clone())).collect(),
                        pool: idx(2 * s).map(|j| (j, g[j].clone())).collect(),
                        target_is_i: true,
                    },
                    2 * s * s,
                    Box::new(|i, j| Ok(mul(&[&g[j], &f[0], &f[i]])?)),
                    ids[2].clone(),
                ),
                SplitSide::Near => (
                    PigeonholeCase::FarNear(SplitSide::Near),
                    Sweep {
                        spaces: first,
                        targets: idx(2 * s)
                            .map(|j| Ok((j, mul(&[&g[j], &g[0], &f[0]])?)))
                            .collect::<Result<_, ConstructError>>()?,
                        pool: sub.iter().map(|&i| (i, f[i].clone())).collect(),
                        target_is_i: false,
                    },
                    Sweep {
                        spaces: rest,
                        targets: sub.iter().map(|&i| Ok((i, mul(&[&g[0], &f1fi[i]])?))).collect::<Result<_, ConstructError>>()?,
                        pool: idx(2 * s).map(|j| (j, g[j].clone())).collect(),
                        target_is_i: true,
                    },
                    2 * s * s,
                    Box::new(|i, j| Ok(mul(&[&g[j], &g[0], &f[0], &f[i]])?)),
                    ids[3].clone(),
                ),
            }
        }
        (SplitSide::Near, SplitSide::Far) => {
            let gjg1: Vec<GroupElement> = idx(2 * s).map(|j| mul(&[&g[j], &g[0]])).collect::<Result<_, _>>()?;
            let dist: Vec<Rational64> = gjg1.iter().map(|x| block[0].orbit_distance(x)).collect::<Result<_, _>>()?;
            let (side, sub) = pigeonhole(&dist, d, s);
            sub_kept = sub.clone();
            match side {
                SplitSide::Far => (
                    PigeonholeCase::NearFar(SplitSide::Far),
                    Sweep {
                        spaces: first,
                        targets: sub.iter().map(|&j| (j, gjg1[j].clone())).collect(),
                        pool: idx(2 * s).map(|i| (i, f[i].clone())).collect(),
                        target_is_i: false,
                    },
                    Sweep {
                        spaces: rest,
                        targets: idx(2 * s).map(|i| Ok((i, mul(&[&g[0], &f[i]])?))).collect::<Result<_, ConstructError>>()?,
                        pool: sub.iter().map(|&j| (j, g[j].clone())).collect(),
                        target_is_i: true,
                    },
                    2 * s * s,
                    Box::new(|i, j| Ok(mul(&[&g[j], &g[0], &f[i]])?)),
                    ids[2].clone(),
                ),
                SplitSide::Near => (
                    PigeonholeCase::NearFar(SplitSide::Near),
                    Sweep {
                        spaces: first,
                        targets: sub.iter().map(|&j| Ok((j, mul(&[&gjg1[j], &f[0]])?))).collect::<Result<_, ConstructError>>()?,
                        pool: idx(2 * s).map(|i| (i, f[i].clone())).collect(),
                        target_is_i: false,
                    },
                    Sweep {
                        spaces: rest,
                        targets: idx(2 * s)
                            .map(|i| Ok((i, mul(&[&g[0], &f[0], &f[i]])?)))
                            .collect::<Result<_, ConstructError>>()?,
                        pool: sub.iter().map(|&j| (j, g[j].clone())).collect(),
                        target_is_i: true,
                    },
                    2 * s * s,
                    Box::new(|i, j| Ok(mul(&[&g[j], &g[0], &f[0], &f[i]])?)),
                    ids[2].clone(),
                ),
            }
        }
    };

    let set_a = a.run(d)?;
    let set_b = b.run(d)?;
    if set_a.len() + set_b.len() <= total {
        return Err(ConstructError::Verification(format!(
            "pigeonhole count |A| + |B| = {} does not exceed {total}",
            set_a.len() + set_b.len()
        )));
    }
    let (i, j) = *set_a
        .intersection(&set_b)
        .next()
        .ok_or_else(|| ConstructError::Verification("sweeps share no pair".into()))?;
    let element = candidate(i, j)?;
    if !hyperbolic_on_all(block, &element)? {
        return Err(ConstructError::Verification(format!(
            "{} is not contracting on every tree",
            group.render(&element)
        )));
    }
    let counts = (set_a.len(), set_b.len(), total);
    drop(candidate);
    Ok(ScCertificate {
        translation_lengths: translation_lengths(block, &element)?,
        element,
        case,
        l,
        s,
        d,
        calibration: None,
        f_family: Some(ff),
        t_family: Some(tt),
        f_kept,
        t_kept,
        sub_kept,
        pair: Some((i, j)),
        counts,
        identity: Some(identity),
        retries: vec![],
        tail: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn identities_positive_for_chosen_s() {
        for l in 2..6 {
            assert!(pigeonhole_identities(2 * l + 2, l).iter().all(|(_, v)| *v > 0));
        }
        assert_eq!(pigeonhole_identities(6, 2)[0].1, 96);
    }

    #[test]
    fn two_free_factors() {
        let g = GroupSpec::parse("product(free(2),free(3))").unwrap();
        let spaces = vec![
            ActionSpace::cayley(g.clone(), Some(0)).unwrap(),
            ActionSpace::cayley(g.clone(), Some(1)).unwrap(),
        ];
        let cert = find_simul_contracting(&spaces, None, None).unwrap();
        assert!(cert.recheck(&spaces).unwrap());
        assert_eq!(cert.case, PigeonholeCase::NearNear);
        assert_eq!(cert.f_kept.len(), 12);
        let (a, b, t) = cert.counts;
        assert!(a + b > t);
    }

    #[test]
    fn single_tree_base() {
        let f2 = GroupSpec::free(2).unwrap();
        let spaces = vec![ActionSpace::cayley(f2.clone(), None).unwrap()];
        let cert = find_simul_contracting(&spaces, None, None).unwrap();
        assert_eq!(cert.case, PigeonholeCase::Base);
        assert_eq!(f2.render(&cert.element), "a");
    }
}
