//! Growth audit of `F2 × F3` acting on the Cayley trees of its factors.
//!
//! The printed product-ball closed form and limit are evaluated verbatim
//! next to the exact counts, and every disagreement is reported.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::density::{density_table, SimulHyperbolic};
use super::enumerate::{bfs_sphere_sizes, DEFAULT_BUDGET};
use super::series::spheres;
use super::{CensusError, Method};
use crate::actions::ActionSpace;
use crate::group::GroupSpec;

/// The limit of the non-SH fraction as printed alongside the closed form.
pub const PRINTED_LIMIT: (i64, i64) = (48, 225);

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn pow(base: u32, n: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(n))
}

/// `2·3^n − 1`.
pub fn f2_ball_formula(n: u32) -> BigRational {
    pow(3, n) * ratio(2, 1) - BigRational::one()
}

/// `(3·5^n − 1) / 2`.
pub fn f3_ball_formula(n: u32) -> BigRational {
    (pow(5, n) * ratio(3, 1) - BigRational::one()) / ratio(2, 1)
}

/// `45/32·(5^{n+1} − 1) + 3·(−3^{n+1} + 1) + (n+1)(2n+11)/8`, as printed.
pub fn printed_product_ball(n: u32) -> BigRational {
    let k = i64::from(n);
    ratio(45, 32) * (pow(5, n + 1) - BigRational::one())
        + ratio(3, 1) * (BigRational::one() - pow(3, n + 1))
        + ratio((k + 1) * (2 * k + 11), 8)
}

/// `(3/2)·5^n + 2·3^n − 5/2`, the printed non-SH count.
pub fn printed_non_sh(n: u32) -> BigRational {
    ratio(3, 2) * pow(5, n) + ratio(2, 1) * pow(3, n) - ratio(5, 2)
}

/// Coefficient `A` of `r^n` in the expansion of `P(x) / ∏ (1 − r_j x)`
/// (distinct `r_j`, `r` among them, `deg P` below the number of factors).
pub fn partial_fraction_leading(numerator: &[i64], roots: &[i64], r: i64) -> BigRational {
    let x = ratio(1, r);
    let mut p = BigRational::zero();
    for c in numerator.iter().rev() {
        p = p * &x + ratio(*c, 1);
    }
    for &rj in roots.iter().filter(|&&rj| rj != r) {
        p /= BigRational::one() - ratio(rj, r);
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub n: u32,
    pub f2_ball: BigUint,
    pub f2_formula: BigRational,
    pub f3_ball: BigUint,
    pub f3_formula: BigRational,
    pub printed_ball: BigRational,
    pub convolution_ball: BigUint,
    pub bfs_ball: Option<BigUint>,
    pub printed_non_sh: BigRational,
    pub exhaustive_non_sh: Option<BigUint>,
    /// Non-SH count over the printed ball.
    pub fraction_printed: BigRational,
    /// Non-SH count over the convolution ball.
    pub fraction_exact: BigRational,
}

impl AuditRow {
    pub fn diverges(&self) -> bool {
        self.printed_ball != big(&self.convolution_ball)
    }

    /// Every check that must hold exactly.
    pub fn consistent(&self) -> bool {
        big(&self.f2_ball) == self.f2_formula
            && big(&self.f3_ball) == self.f3_formula
            && self.bfs_ball.as_ref().is_none_or(|b| *b == self.convolution_ball)
            && self
                .exhaustive_non_sh
                .as_ref()
                .is_none_or(|h| big(h) == self.printed_non_sh)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthAudit {
    pub rows: Vec<AuditRow>,
    pub bfs_limit: u32,
    pub printed_limit: BigRational,
    /// Limit of the printed non-SH count over the printed ball.
    pub printed_formula_limit: BigRational,
    /// Limit of the exact non-SH fraction, from partial fractions of the
    /// growth series.
    pub oracle_limit: BigRational,
    pub first_divergence: Option<u32>,
}

impl GrowthAudit {
    /// Smallest non-SH fraction over `1 <= n`, under both balls.
    pub fn min_fractions(&self) -> (BigRational, BigRational) {
        let rows = self.rows.iter().filter(|r| r.n >= 1);
        let p = rows.clone().map(|r| r.fraction_printed.clone()).min().unwrap_or_else(BigRational::zero);
        let e = rows.map(|r| r.fraction_exact.clone()).min().unwrap_or_else(BigRational::zero);
        (p, e)
    }

    pub fn consistent(&self) -> bool {
        self.rows.iter().all(AuditRow::consistent)
    }

    /// Tab-separated table with a header line.
    pub fn to_tsv(&self) -> String {
        let opt = |o: &Option<BigUint>| o.as_ref().map_or("-".to_string(), |v| v.to_string());
        let mut s = String::from(
            "n\tf2_ball\tf3_ball\tprinted_ball\tconvolution_ball\tbfs_ball\tprinted_non_sh\texhaustive_non_sh\tfraction_printed\tfraction_exact\tdiverges\n",
        );
        for r in &self.rows {
            s += &format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.n,
                r.f2_ball,
                r.f3_ball,
                r.printed_ball,
                r.convolution_ball,
                opt(&r.bfs_ball),
                r.printed_non_sh,
                opt(&r.exhaustive_non_sh),
                r.fraction_printed,
                r.fraction_exact,
                if r.diverges() { "yes" } else { "no" }
            );
        }
        s += &format!("# printed_limit\t{}/{}\n", PRINTED_LIMIT.0, PRINTED_LIMIT.1);
        s += &format!("# printed_formula_limit\t{}\n", self.printed_formula_limit);
        s += &format!("# oracle_limit\t{}\n", self.oracle_limit);
        s += &format!(
            "# first_divergence\t{}\n",
            self.first_divergence.map_or("none".to_string(), |n| n.to_string())
        );
        s
    }
}

impl fmt::Display for GrowthAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3} {:>16} {:>16} {:>10} {:>16} {:>16} {:>5}",
            "n", "printed ball", "convolution", "bfs", "non-SH", "exhaustive", "diff"
        )?;
        for r in &self.rows {
            let opt = |o: &Option<BigUint>| o.as_ref().map_or("-".to_string(), |v| v.to_string());
            writeln!(
                f,
                "{:>3} {:>16} {:>16} {:>10} {:>16} {:>16} {:>5}",
                r.n,
                r.printed_ball.to_string(),
                r.convolution_ball.to_string(),
                opt(&r.bfs_ball),
                r.printed_non_sh.to_string(),
                opt(&r.exhaustive_non_sh),
                if r.diverges() { "yes" } else { "" }
            )?;
        }
        writeln!(f, "printed limit:          {}/{}", PRINTED_LIMIT.0, PRINTED_LIMIT.1)?;
        writeln!(f, "printed formula limit:  {}", self.printed_formula_limit)?;
        writeln!(f, "oracle limit (exact):   {}", self.oracle_limit)?;
        match self.first_divergence {
            Some(n) => writeln!(f, "printed ball diverges from the exact ball first at n = {n}"),
            None => writeln!(f, "printed ball agrees with the exact ball"),
        }
    }
}

/// Exact non-SH fraction of `F2 × F3` at radius `n`, from the series.
pub fn exact_non_sh_fraction(n: u32) -> BigRational {
    let g = f2xf3();
    let ball: BigUint = spheres(&g, n).expect("product of free groups").iter().sum();
    printed_non_sh(n) / big(&ball)
}

fn f2xf3() -> GroupSpec {
    GroupSpec::product(vec![GroupSpec::Free(2), GroupSpec::Free(3)]).expect("valid")
}

/// Audit table for `n <= n_max`; breadth-first and exhaustive counts are
/// included for `n <= bfs_limit`.
pub fn example_4_9_report(n_max: u32, bfs_limit: u32) -> Result<GrowthAudit, CensusError> {
    let g = f2xf3();
    let bfs_limit = bfs_limit.min(n_max);
    let f2 = spheres(&GroupSpec::Free(2), n_max)?;
    let f3 = spheres(&GroupSpec::Free(3), n_max)?;
    let prod = spheres(&g, n_max)?;
    let bfs = bfs_sphere_sizes(&g, bfs_limit, DEFAULT_BUDGET)?;
    let spaces = vec![ActionSpace::cayley(g.clone(), Some(0))?, ActionSpace::cayley(g.clone(), Some(1))?];
    let exhaustive = density_table(&g, &SimulHyperbolic::new(spaces).complement(), bfs_limit, Method::Bfs)?;

    let mut rows = Vec::new();
    let (mut b2, mut b3, mut bp, mut bb) = (BigUint::zero(), BigUint::zero(), BigUint::zero(), 0u64);
    for n in 0..=n_max {
        let i = n as usize;
        b2 += &f2[i];
        b3 += &f3[i];
        bp += &prod[i];
        let bfs_ball = bfs.get(i).map(|s| {
            bb += s;
            BigUint::from(bb)
        });
        let printed_ball = printed_product_ball(n);
        let non_sh = printed_non_sh(n);
        rows.push(AuditRow {
            n,
            f2_ball: b2.clone(),
            f2_formula: f2_ball_formula(n),
            f3_ball: b3.clone(),
            f3_formula: f3_ball_formula(n),
            fraction_printed: &non_sh / &printed_ball,
            fraction_exact: &non_sh / big(&bp),
            printed_ball,
            convolution_ball: bp.clone(),
            bfs_ball,
            printed_non_sh: non_sh,
            exhaustive_non_sh: exhaustive.get(i).map(|r| r.hits.clone()),
        });
    }
    let first_divergence = rows.iter().find(|r| r.diverges()).map(|r| r.n);

    // Leading 5^n coefficients: non-SH count from the F3 ball series
    // (1 + x) / ((1 − x)(1 − 5x)); product ball (1 + x)^2 / ((1 − x)(1 − 3x)(1 − 5x)).
    let non_sh_leading = partial_fraction_leading(&[1, 1], &[1, 5], 5);
    let ball_leading = partial_fraction_leading(&[1, 2, 1], &[1, 3, 5], 5);
    let printed_ball_leading = ratio(45 * 5, 32);
    Ok(GrowthAudit {
        rows,
        bfs_limit,
        printed_limit: ratio(PRINTED_LIMIT.0, PRINTED_LIMIT.1),
        printed_formula_limit: &non_sh_leading / printed_ball_leading,
        oracle_limit: non_sh_leading / ball_leading,
        first_divergence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        assert_eq!(printed_product_ball(1), ratio(13, 1));
        assert_eq!(printed_product_ball(0), ratio(1, 1));
        assert_eq!(printed_non_sh(2), ratio(53, 1));
    }

    #[test]
    fn small_audit() {
        let a = example_4_9_report(4, 3).unwrap();
        assert!(a.consistent());
        assert_eq!(a.first_divergence, Some(1));
        assert_eq!(a.rows[1].convolution_ball, BigUint::from(11u32));
        assert_eq!(a.rows[2].bfs_ball, Some(BigUint::from(77u32)));
        assert_eq!(a.rows[4].bfs_ball, None);
        assert_eq!(a.printed_formula_limit, a.printed_limit);
        assert_eq!(a.oracle_limit, ratio(1, 3));
    }
}
