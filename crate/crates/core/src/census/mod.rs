//! Exact ball counts, ball enumeration, densities of element classes and the
//! growth audit for `F2 × F3`.
//!
//! All counts are big integers and all ratios exact rationals.

mod audit;
mod density;
mod enumerate;
mod series;

pub use audit::{
    example_4_9_report, exact_non_sh_fraction, f2_ball_formula, f3_ball_formula, partial_fraction_leading,
    printed_non_sh, printed_product_ball, AuditRow, GrowthAudit, PRINTED_LIMIT,
};
pub use density::{
    density, density_bound_from_extension_set, density_table, verify_extension_claim,
    verify_extension_property, ClassFn, DensityBound, DensityReport, ElementClass, ExtensionClaim,
    SimulHyperbolic,
};
pub use enumerate::{ball_count, bfs_sphere_sizes, bfs_spheres, enumerate_spheres, enumerate_ball, enumerate_sphere, DEFAULT_BUDGET};
pub use series::{free_ball_size, sphere_series, SphereSeries};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::actions::ActionError;
use crate::group::GroupError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("no closed-form series for {0}")]
    Unsupported(String),
    #[error("ball of radius {radius} exceeds the budget of {budget} elements")]
    Budget { radius: u32, budget: u64 },
    #[error("extension claim fails at {element}: {reason}")]
    Counterexample { element: String, reason: String },
}

/// How a count is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// Closed-form series (sphere convolution).
    #[default]
    Series,
    /// Exhaustive enumeration of the ball.
    Bfs,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Bfs => "bfs",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "series" => Ok(Method::Series),
            "bfs" | "enumeration" => Ok(Method::Bfs),
            other => Err(format!("unknown method '{other}' (expected series or bfs)")),
        }
    }
}
