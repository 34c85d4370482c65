//! Empirical extension constant: the smallest `D` (doubling from 1) for
//! which every sampled triple of pairwise independent elements with
//! displacement above `D` extends every sampled `g` with displacement above
//! `D`.

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{smallest_power_beyond, ConstructError, POWER_LIMIT};
use crate::actions::ActionSpace;
use crate::contract::share_power;
use crate::group::{random_element, GroupElement};

/// A sampled `(triple, g)` with no valid pick at a rejected `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationFailure {
    pub d: Rational64,
    pub space: usize,
    pub triple: [GroupElement; 3],
    pub element: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationResult {
    pub d: Rational64,
    /// Trials run at the accepted `D`.
    pub trials: usize,
    /// Draws discarded because `g` was too close to the basepoint.
    pub skipped: usize,
    pub failures: Vec<CalibrationFailure>,
    pub seed: u64,
}

/// Candidates `f` in `triple` (in order); returns the first with `f g` and
/// `g f` both hyperbolic on `space`.
pub fn extension_pick(
    space: &ActionSpace,
    g: &GroupElement,
    triple: &[GroupElement],
) -> Result<Option<usize>, ConstructError> {
    let group = space.group();
    for (i, f) in triple.iter().enumerate() {
        if space.is_hyperbolic(&group.multiply(f, g)?)? && space.is_hyperbolic(&group.multiply(g, f)?)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

const MAX_DOUBLINGS: u32 = 12;

pub fn calibrate_extension_constant(
    spaces: &[ActionSpace],
    pool: &[GroupElement],
    budget: usize,
    seed: u64,
) -> Result<CalibrationResult, ConstructError> {
    // Pool members hyperbolic on each space.
    let mut members = Vec::with_capacity(spaces.len());
    for s in spaces {
        let mut m = Vec::new();
        for f in pool {
            if s.is_hyperbolic(f)? {
                m.push(f.clone());
            }
        }
        members.push(m);
    }
    let usable: Vec<usize> = (0..spaces.len()).filter(|&k| members[k].len() >= 3).collect();
    if usable.is_empty() {
        return Err(ConstructError::Precondition(
            "no space has three hyperbolic pool members".into(),
        ));
    }
    let mut failures = Vec::new();
    let mut d = Rational64::from_integer(1);
    for _ in 0..MAX_DOUBLINGS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_len = (2 * d.to_integer() + 6) as usize;
        let mut trials = 0;
        let mut skipped = 0;
        let mut failed = false;
        let mut draws = 0;
        while trials < budget && draws < budget.saturating_mul(20) {
            draws += 1;
            let k = usable[rng.gen_range(0..usable.len())];
            let space = &spaces[k];
            let Some(triple) = sample_triple(&mut rng, space, &members[k])? else {
                skipped += 1;
                continue;
            };
            let g = random_element(&mut rng, space.group(), max_len);
            if space.orbit_distance(&g)? <= d {
                skipped += 1;
                continue;
            }
            let mut powered = Vec::with_capacity(3);
            for f in &triple {
                let m = smallest_power_beyond(space, f, d, POWER_LIMIT)?
                    .ok_or_else(|| ConstructError::Budget("power scan in calibration".into()))?;
                let m = m + rng.gen_range(0..3);
                powered.push(space.group().pow(f, m)?);
            }
            trials += 1;
            if extension_pick(space, &g, &powered)?.is_none() {
                let [a, b, c]: [GroupElement; 3] = powered.try_into().expect("three members");
                failures.push(CalibrationFailure {
                    d,
                    space: k,
                    triple: [a, b, c],
                    element: g,
                });
                failed = true;
                break;
            }
        }
        if !failed {
            return Ok(CalibrationResult {
                d,
                trials,
                skipped,
                failures,
                seed,
            });
        }
        d *= 2;
    }
    Err(ConstructError::Calibration(d))
}

/// Three pairwise independent members, or `None` after a few rejections.
fn sample_triple(
    rng: &mut ChaCha8Rng,
    space: &ActionSpace,
    members: &[GroupElement],
) -> Result<Option<[GroupElement; 3]>, ConstructError> {
    'draw: for _ in 0..32 {
        let picked: Vec<&GroupElement> = members.choose_multiple(rng, 3).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                if share_power(space, picked[i], picked[j])? {
                    continue 'draw;
                }
            }
        }
        return Ok(Some([picked[0].clone(), picked[1].clone(), picked[2].clone()]));
    }
    Ok(None)
}
