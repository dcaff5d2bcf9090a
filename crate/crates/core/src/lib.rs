//! Exact caustic, level-surface and Maxwell-set geometry for the inviscid
//! stochastic Burgers equation with polynomial initial data, plus simulation
//! of the associated turbulence processes.

pub mod polyalg;
pub mod action;
pub mod geometry;
pub mod turbulence;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
