//! The SC sweep: for a target `h` and a pool `f_1..f_s` of pairwise
//! independent elements, walk the spaces in order keeping a window of three
//! candidates; each valid pick survives, the next pool member refills the
//! window. After `q` spaces, `s - 2q` survivors `f` have `f h` and `h f`
//! hyperbolic on every space.

use num_rational::Rational64;

use super::{extension_pick, hyperbolic_on_all, ConstructError};
use crate::actions::ActionSpace;
use crate::contract::share_power;
use crate::group::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepProduct {
    pub target: usize,
    pub pool_index: usize,
    /// `f h`.
    pub left: GroupElement,
    /// `h f`.
    pub right: GroupElement,
}

pub fn sc_construction(
    spaces: &[ActionSpace],
    targets: &[GroupElement],
    pool: &[GroupElement],
    d: Rational64,
) -> Result<Vec<SweepProduct>, ConstructError> {
    let Some(first) = spaces.first() else {
        return Err(ConstructError::Precondition("no spaces".into()));
    };
    let group = first.group();
    if pool.len() < 2 * spaces.len() + 1 {
        return Err(ConstructError::Precondition(format!(
            "pool of {} is too small for {} spaces",
            pool.len(),
            spaces.len()
        )));
    }
    for space in spaces {
        for (i, f) in pool.iter().enumerate() {
            if space.orbit_distance(f)? <= d {
                return Err(ConstructError::Precondition(format!(
                    "pool member {} moves the basepoint of {space} by at most {d}",
                    group.render(f)
                )));
            }
            for g in &pool[i + 1..] {
                if share_power(space, f, g)? {
                    return Err(ConstructError::Precondition(format!(
                        "pool members {} and {} are not independent on {space}",
                        group.render(f),
                        group.render(g)
                    )));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (t, h) in targets.iter().enumerate() {
        let mut candidates: Vec<usize> = (0..pool.len()).collect();
        for space in spaces {
            if space.orbit_distance(h)? <= d {
                return Err(ConstructError::Precondition(format!(
                    "target {} moves the basepoint of {space} by at most {d}",
                    group.render(h)
                )));
            }
            candidates = sweep_space(space, h, pool, &candidates, d)?;
        }
        for i in candidates {
            let left = group.multiply(&pool[i], h)?;
            let right = group.multiply(h, &pool[i])?;
            if !hyperbolic_on_all(spaces, &left)? || !hyperbolic_on_all(spaces, &right)? {
                return Err(ConstructError::Verification(format!(
                    "sweep survivor {} fails for target {}",
                    group.render(&pool[i]),
                    group.render(h)
                )));
            }
            out.push(SweepProduct {
                target: t,
                pool_index: i,
                left,
                right,
            });
        }
    }
    Ok(out)
}

fn sweep_space(
    space: &ActionSpace,
    h: &GroupElement,
    pool: &[GroupElement],
    candidates: &[usize],
    d: Rational64,
) -> Result<Vec<usize>, ConstructError> {
    let mut window: Vec<usize> = candidates[..3].to_vec();
    let mut next = 3;
    let mut survivors = Vec::with_capacity(candidates.len() - 2);
    loop {
        let triple: Vec<GroupElement> = window.iter().map(|&i| pool[i].clone()).collect();
        let Some(pick) = extension_pick(space, h, &triple)? else {
            let group = space.group();
            return Err(ConstructError::NoValidPick {
                element: group.render(h),
                space: space.to_string(),
                candidates: triple.iter().map(|f| group.render(f)).collect::<Vec<_>>().join(" | "),
                d,
            });
        };
        survivors.push(window.remove(pick));
        if next == candidates.len() {
            break;
        }
        window.push(candidates[next]);
        next += 1;
    }
    survivors.sort_unstable();
    Ok(survivors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn inverse_square_target() {
        let f2 = GroupSpec::free(2).unwrap();
        let space = ActionSpace::cayley(f2.clone(), None).unwrap();
        let pool: Vec<_> = ["a^2", "b^2", "(ab)^2", "(ba)^2", "(a^2 b)^2"]
            .iter()
            .map(|w| parse(&f2, w))
            .collect();
        let h = f2.parse_element("B^2").unwrap();
        let out = sc_construction(std::slice::from_ref(&space), &[h], &pool, Rational64::from_integer(1)).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|p| p.pool_index != 1));
    }

    fn parse(f2: &GroupSpec, w: &str) -> GroupElement {
        match w.strip_prefix('(').and_then(|r| r.strip_suffix(")^2")) {
            Some(inner) => f2.pow(&f2.parse_element(inner).unwrap(), 2).unwrap(),
            None => f2.parse_element(w).unwrap(),
        }
    }

    #[test]
    fn small_pool_rejected() {
        let f2 = GroupSpec::free(2).unwrap();
        let space = ActionSpace::cayley(f2.clone(), None).unwrap();
        let pool = vec![f2.parse_element("a^2").unwrap(), f2.parse_element("b^2").unwrap()];
        let h = f2.parse_element("ab").unwrap();
        assert!(matches!(
            sc_construction(&[space], &[h], &pool, Rational64::from_integer(1)),
            Err(ConstructError::Precondition(_))
        ));
    }
}
