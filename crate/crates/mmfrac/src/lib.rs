//! Mixtures of independent fractional Brownian motions and the stationary
//! mean-reverting processes they drive.
//!
//! The crate covers four layers:
//!
//! * analytic covariance kernels and spectral densities ([`kernels`],
//!   [`spectral`]),
//! * exact Gaussian path simulation on equidistant grids ([`simulate`]),
//! * path-property estimators: equidistant p-variation, variogram Hölder
//!   index, long-range-dependence slope ([`estimate`]),
//! * a Monte Carlo harness that compares simulated ensembles against the
//!   analytic moments with z-score tolerances ([`mc`]).
//!
//! Everything is deterministic: quadrature uses fixed nodes, random paths
//! are reproduced bit-for-bit from a seed, Monte Carlo reductions run in a
//! fixed order.

pub mod error;
pub mod estimate;
pub mod kernels;
pub mod mc;
pub mod mixture;
pub mod simulate;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use mixture::{HurstIndex, MixtureSpec, ScheduleFamily, ScheduleKind};
pub use special::QuadratureSpec;
