//! Simultaneously hyperbolic and contracting elements for groups acting on
//! several trees and lines at once, with exact density counts.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: free groups, direct products of them and free products of
//!   cyclic groups, with exact normal forms.
//! - [`actions`]: Cayley trees of factors, Bass–Serre trees and lines, with
//!   exact distances and translation lengths.
//! - [`contract`]: axes, projections, bounded intersections and weak
//!   independence on trees.
//! - [`qm`]: homogeneous quasimorphisms and the power-combination searches.
//! - [`construct`]: calibrated extension constant, the SC construction,
//!   simultaneous elements and extension sets.
//! - [`census`]: ball enumeration, growth series, densities and the
//!   `F2 × F3` growth audit.
//! - [`cli`]: the `simhyp` command line.

pub mod group;
pub mod actions;
pub mod contract;
pub mod qm;
pub mod construct;
pub mod census;
pub mod cli;
