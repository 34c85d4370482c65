//! Exponent ladders: powers `f_i^{M_i}` whose displacements satisfy
//! `d(o, f_i^{M_i} o) - 2(n-i)D > d(o, f_{i+1}^{M_{i+1}} o) - 2(n-i-1)D`
//! on every listed space, with the last one above a floor (default `3D`).

use num_rational::Rational64;

use super::{orbit_distances, smallest_power_beyond, ConstructError, POWER_LIMIT};
use crate::actions::ActionSpace;
use crate::group::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoweredFamily {
    pub base: Vec<GroupElement>,
    pub exponents: Vec<i64>,
    pub elements: Vec<GroupElement>,
    /// `distances[i][k] = d(o_k, f_i^{M_i} o_k)`.
    pub distances: Vec<Vec<Rational64>>,
    pub d: Rational64,
    pub floors: Vec<Rational64>,
}

impl PoweredFamily {
    /// Rechecks the chain and the floor from the stored distances.
    pub fn chain_holds(&self) -> bool {
        let n = self.elements.len();
        let two_d = self.d * 2;
        for k in 0..self.floors.len() {
            if n > 0 && self.distances[n - 1][k] <= self.floors[k] {
                return false;
            }
            for i in 0..n.saturating_sub(1) {
                let lhs = self.distances[i][k] - two_d * (n - 1 - i) as i64;
                let rhs = self.distances[i + 1][k] - two_d * (n - 2 - i) as i64;
                if lhs <= rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Keeps the listed members (in order); gaps only grow, so the chain
    /// survives.
    pub fn select(&self, indices: &[usize]) -> PoweredFamily {
        fn pick<T: Clone>(v: &[T], indices: &[usize]) -> Vec<T> {
            indices.iter().map(|&i| v[i].clone()).collect()
        }
        PoweredFamily {
            base: pick(&self.base, indices),
            exponents: pick(&self.exponents, indices),
            elements: pick(&self.elements, indices),
            distances: pick(&self.distances, indices),
            d: self.d,
            floors: self.floors.clone(),
        }
    }
}

pub fn power_up(spaces: &[ActionSpace], base: &[GroupElement], d: Rational64) -> Result<PoweredFamily, ConstructError> {
    let floors = vec![d * 3; spaces.len()];
    power_up_with_floor(spaces, base, d, &floors)
}

/// Smallest exponents, chosen from the last member backwards.
pub fn power_up_with_floor(
    spaces: &[ActionSpace],
    base: &[GroupElement],
    d: Rational64,
    floors: &[Rational64],
) -> Result<PoweredFamily, ConstructError> {
    let n = base.len();
    let mut exponents = Vec::with_capacity(n);
    let mut elements = Vec::with_capacity(n);
    let mut distances = Vec::with_capacity(n);
    let mut bounds: Vec<Rational64> = floors.to_vec();
    for i in (0..n).rev() {
        let mut m = 1;
        for (k, space) in spaces.iter().enumerate() {
            let mk = smallest_power_beyond(space, &base[i], bounds[k], POWER_LIMIT)?.ok_or_else(|| {
                ConstructError::Precondition(format!(
                    "{} is not hyperbolic on {space}",
                    space.group().render(&base[i])
                ))
            })?;
            m = m.max(mk);
        }
        let group = spaces.first().map(|s| s.group()).ok_or_else(|| {
            ConstructError::Precondition("no spaces".into())
        })?;
        let e = group.pow(&base[i], m)?;
        let ds = orbit_distances(spaces, &e)?;
        for k in 0..spaces.len() {
            bounds[k] = ds[k] + d * 2;
        }
        exponents.push(m);
        elements.push(e);
        distances.push(ds);
    }
    exponents.reverse();
    elements.reverse();
    distances.reverse();
    let family = PoweredFamily {
        base: base.to_vec(),
        exponents,
        elements,
        distances,
        d,
        floors: floors.to_vec(),
    };
    if !family.chain_holds() {
        return Err(ConstructError::Verification("exponent chain".into()));
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn chain_on_free_tree() {
        let f2 = GroupSpec::free(2).unwrap();
        let space = ActionSpace::cayley(f2.clone(), None).unwrap();
        let base: Vec<_> = ["a", "b", "ab"].iter().map(|w| f2.parse_element(w).unwrap()).collect();
        let fam = power_up(std::slice::from_ref(&space), &base, Rational64::from_integer(1)).unwrap();
        // Last above 3, then each more than 2 above the next.
        assert_eq!(fam.exponents, vec![10, 7, 2]);
        assert!(fam.chain_holds());
        assert!(fam.select(&[0, 2]).chain_holds());
    }
}
