//! Constructive engines: the calibrated extension constant, the sweep that
//! pairs a pool with targets, simultaneously contracting and hyperbolic
//! elements, independent families and finite extension sets.
//!
//! Every output is rechecked by direct classification before it is
//! returned.

mod calibrate;
mod extension;
mod family;
mod power;
mod simul_hyp;
mod simul_sc;
mod sweep;

pub use calibrate::{calibrate_extension_constant, extension_pick, CalibrationFailure, CalibrationResult};
pub use extension::{sc_extension_set, sh_extension_set, ExtensionSet, ExtensionTarget, LadderCheck};
pub use family::{independent_sc_family, search_family, FamilyRoute, IndependentFamily};
pub use power::{power_up, power_up_with_floor, PoweredFamily};
pub use simul_hyp::{find_simul_hyperbolic, ShCertificate, ShRoute, DEFAULT_SEARCH_RADIUS};
pub use simul_sc::{find_simul_contracting, pigeonhole_identities, PigeonholeCase, ScCertificate, SplitSide};
pub use sweep::{sc_construction, SweepProduct};

use num_rational::Rational64;
use thiserror::Error;

use crate::actions::{ActionError, ActionSpace};
use crate::census::CensusError;
use crate::contract::ContractError;
use crate::group::{GroupElement, GroupError};
use crate::qm::QmError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Qm(#[from] QmError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error("calibration did not stabilise below D = {0}")]
    Calibration(Rational64),
    #[error("no valid pick for {element} on {space} among {candidates} (D = {d})")]
    NoValidPick {
        element: String,
        space: String,
        candidates: String,
        d: Rational64,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<ActionError> for ConstructError {
    fn from(e: ActionError) -> Self {
        ConstructError::Contract(e.into())
    }
}

impl From<GroupError> for ConstructError {
    fn from(e: GroupError) -> Self {
        ConstructError::Contract(e.into())
    }
}

/// `d(o, g·o)` on every space.
pub(crate) fn orbit_distances(spaces: &[ActionSpace], g: &GroupElement) -> Result<Vec<Rational64>, ConstructError> {
    spaces.iter().map(|s| Ok(s.orbit_distance(g)?)).collect()
}

pub(crate) fn hyperbolic_on_all(spaces: &[ActionSpace], g: &GroupElement) -> Result<bool, ConstructError> {
    for s in spaces {
        if !s.is_hyperbolic(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest `m >= 1` with `d(o, g^m o) > bound`, scanning up to `limit`.
pub(crate) fn smallest_power_beyond(
    space: &ActionSpace,
    g: &GroupElement,
    bound: Rational64,
    limit: i64,
) -> Result<Option<i64>, ConstructError> {
    let group = space.group();
    let mut p = g.clone();
    for m in 1..=limit {
        if space.orbit_distance(&p)? > bound {
            return Ok(Some(m));
        }
        p = group.multiply(&p, g)?;
    }
    Ok(None)
}

/// Upper bound on power scans.
pub(crate) const POWER_LIMIT: i64 = 100_000;
