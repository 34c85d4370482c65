//! Families of elements hyperbolic on every space and pairwise independent
//! on every tree.

use std::fmt;

use super::{find_simul_contracting, hyperbolic_on_all, ConstructError};
use crate::actions::ActionSpace;
use crate::census;
use crate::contract::{conjugate_family, share_power, weakly_independent};
use crate::group::GroupElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FamilyRoute {
    /// Greedy length-lexicographic scan of the ball.
    #[default]
    Search,
    /// Conjugates of one simultaneously contracting element.
    Literal,
}

impl fmt::Display for FamilyRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyRoute::Search => "search",
            FamilyRoute::Literal => "literal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentFamily {
    pub elements: Vec<GroupElement>,
    pub route: FamilyRoute,
}

/// Largest radius scanned by the search route.
pub(crate) const SEARCH_RADIUS: u32 = 8;

/// The search route falls back to the literal one when the ball runs out.
pub fn independent_sc_family(
    spaces: &[ActionSpace],
    count: usize,
    route: FamilyRoute,
) -> Result<IndependentFamily, ConstructError> {
    let (elements, route) = match route {
        FamilyRoute::Search => match search_family(spaces, count, SEARCH_RADIUS) {
            Ok(xs) => (xs, FamilyRoute::Search),
            Err(ConstructError::Budget(_)) => (literal_family(spaces, count)?, FamilyRoute::Literal),
            Err(e) => return Err(e),
        },
        FamilyRoute::Literal => (literal_family(spaces, count)?, FamilyRoute::Literal),
    };
    verify_family(spaces, &elements)?;
    Ok(IndependentFamily { elements, route })
}

/// The first `count` cyclically reduced elements of the ball, in
/// length-lexicographic order, that are hyperbolic on every space and
/// independent from all earlier picks.
pub fn search_family(spaces: &[ActionSpace], count: usize, max_radius: u32) -> Result<Vec<GroupElement>, ConstructError> {
    search_family_with(spaces, count, max_radius, |_| Ok(true))
}

pub(crate) fn search_family_with(
    spaces: &[ActionSpace],
    count: usize,
    max_radius: u32,
    accept: impl Fn(&GroupElement) -> Result<bool, ConstructError>,
) -> Result<Vec<GroupElement>, ConstructError> {
    let group = spaces
        .first()
        .ok_or_else(|| ConstructError::Precondition("no spaces".into()))?
        .group();
    let mut out: Vec<GroupElement> = Vec::with_capacity(count);
    for radius in 1..=max_radius {
        for x in census::enumerate_sphere(group, radius)? {
            if !group.is_identity(&group.cyclic_reduce(&x)?.conjugator) || !hyperbolic_on_all(spaces, &x)? {
                continue;
            }
            let mut fresh = true;
            'members: for y in &out {
                for s in spaces.iter().filter(|s| s.is_tree()) {
                    if share_power(s, &x, y)? {
                        fresh = false;
                        break 'members;
                    }
                }
            }
            if fresh && accept(&x)? {
                out.push(x);
                if out.len() == count {
                    return Ok(out);
                }
            }
        }
    }
    Err(ConstructError::Budget(format!(
        "found {} of {count} independent elements up to radius {max_radius}",
        out.len()
    )))
}

/// `f` from the simultaneous search, a conjugate of `f` independent from it
/// on every tree, then the conjugate family of that pair.
fn literal_family(spaces: &[ActionSpace], count: usize) -> Result<Vec<GroupElement>, ConstructError> {
    let group = spaces[0].group();
    let f = find_simul_contracting(spaces, None, None)?.element;
    let mut partner = None;
    'scan: for radius in 1..=SEARCH_RADIUS {
        for x in census::enumerate_sphere(group, radius)? {
            let c = group.product_of([&x, &f, &group.inverse(&x)])?;
            let mut independent = true;
            for s in spaces.iter().filter(|s| s.is_tree()) {
                independent &= !share_power(s, &f, &c)?;
            }
            if independent {
                partner = Some(c);
                break 'scan;
            }
        }
    }
    let h = partner.ok_or_else(|| ConstructError::Budget("no independent conjugate".into()))?;
    let mut last = None;
    for n in 1..=4 {
        match conjugate_family(spaces, &f, &h, n, count) {
            Ok(fam) => return Ok(fam),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("tried at least once").into())
}

fn verify_family(spaces: &[ActionSpace], elements: &[GroupElement]) -> Result<(), ConstructError> {
    for s in spaces {
        for (i, x) in elements.iter().enumerate() {
            if !s.is_hyperbolic(x)? {
                return Err(ConstructError::Verification(format!("member {i} is elliptic on {s}")));
            }
            if !s.is_tree() {
                continue;
            }
            for (j, y) in elements.iter().enumerate().skip(i + 1) {
                if !weakly_independent(s, x, y)?.verdict {
                    return Err(ConstructError::Verification(format!("members {i} and {j} on {s}")));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn search_on_product() {
        let g = GroupSpec::parse("product(free(2),free(3))").unwrap();
        let spaces = vec![
            ActionSpace::cayley(g.clone(), Some(0)).unwrap(),
            ActionSpace::cayley(g.clone(), Some(1)).unwrap(),
        ];
        let fam = independent_sc_family(&spaces, 6, FamilyRoute::Search).unwrap();
        let shown: Vec<_> = fam.elements.iter().map(|x| g.render(x)).collect();
        assert_eq!(shown[0], "(a, x)");
        assert_eq!(fam.elements.len(), 6);
    }

    #[test]
    fn literal_route_on_two_trees() {
        let g = GroupSpec::parse("product(free(2),free(2))").unwrap();
        let spaces = vec![
            ActionSpace::cayley(g.clone(), Some(0)).unwrap(),
            ActionSpace::cayley(g.clone(), Some(1)).unwrap(),
        ];
        let fam = independent_sc_family(&spaces, 3, FamilyRoute::Literal).unwrap();
        assert_eq!(fam.route, FamilyRoute::Literal);
        assert_eq!(fam.elements.len(), 3);
    }
}
