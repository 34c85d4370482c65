use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::CensusError;
use crate::group::GroupSpec;

/// Sphere sizes `s(0), s(1), ..., s(n_max)` of the standard word metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereSeries {
    pub group: GroupSpec,
    pub sizes: Vec<BigUint>,
}

impl SphereSeries {
    pub fn n_max(&self) -> u32 {
        self.sizes.len() as u32 - 1
    }

    pub fn ball(&self, n: u32) -> BigUint {
        self.sizes[..=n as usize].iter().sum()
    }

    /// Cumulative sums `ball(0), ..., ball(n_max)`.
    pub fn balls(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.sizes
            .iter()
            .map(|s| {
                acc += s;
                acc.clone()
            })
            .collect()
    }
}

/// Coefficient-wise convolution, truncated to `len` terms.
pub(crate) fn convolve(a: &[BigUint], b: &[BigUint], len: usize) -> Vec<BigUint> {
    (0..len)
        .map(|n| {
            (0..=n)
                .filter(|&i| i < a.len() && n - i < b.len())
                .map(|i| &a[i] * &b[n - i])
                .sum()
        })
        .collect()
}

fn free_spheres(k: u32, n_max: u32) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    if n_max == 0 {
        return out;
    }
    let mut s = BigUint::from(2 * k);
    for _ in 1..=n_max {
        out.push(s.clone());
        s *= 2 * k - 1;
    }
    out
}

/// Sphere series of a free group or a direct product of free groups.
pub fn sphere_series(group: &GroupSpec, n_max: u32) -> Result<SphereSeries, CensusError> {
    let sizes = spheres(group, n_max)?;
    Ok(SphereSeries {
        group: group.clone(),
        sizes,
    })
}

pub(crate) fn spheres(group: &GroupSpec, n_max: u32) -> Result<Vec<BigUint>, CensusError> {
    match group {
        GroupSpec::Free(k) => Ok(free_spheres(*k, n_max)),
        GroupSpec::Product(fs) => {
            let len = n_max as usize + 1;
            let mut acc = vec![BigUint::one()];
            for f in fs {
                acc = convolve(&acc, &spheres(f, n_max)?, len);
            }
            Ok(acc)
        }
        GroupSpec::FreeProduct(_) => Err(CensusError::Unsupported(group.to_string())),
    }
}

/// `|B(n)|` in `F_rank`, as a machine integer (saturating).
pub fn free_ball_size(rank: u32, n: u32) -> u128 {
    let mut total: u128 = 1;
    let mut s: u128 = 2 * rank as u128;
    for _ in 0..n {
        total = total.saturating_add(s);
        s = s.saturating_mul(2 * rank as u128 - 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_and_product_balls() {
        let f2 = GroupSpec::free(2).unwrap();
        assert_eq!(sphere_series(&f2, 3).unwrap().ball(3), BigUint::from(53u32));
        let f3 = GroupSpec::free(3).unwrap();
        assert_eq!(sphere_series(&f3, 2).unwrap().ball(2), BigUint::from(37u32));
        let p = GroupSpec::product(vec![f2, f3]).unwrap();
        let s = sphere_series(&p, 2).unwrap();
        assert_eq!(s.balls(), vec![1u32, 11, 77].into_iter().map(BigUint::from).collect::<Vec<_>>());
        assert_eq!(free_ball_size(2, 8), 13121);
    }

    #[test]
    fn free_products_have_no_series() {
        let g = GroupSpec::parse("freeprod(z,z/2)").unwrap();
        assert!(matches!(sphere_series(&g, 2), Err(CensusError::Unsupported(_))));
    }
}
