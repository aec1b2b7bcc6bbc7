//! Power-field trajectory optimization for spatial hardness control in
//! electron-beam powder bed fusion.
//!
//! The pipeline: a finite-volume thermal model of the part ([`thermal`]),
//! JMAK/Arrhenius tempering kinetics in overflow-safe transformed
//! coordinates ([`microstructure`]), kinetics parameter identification from
//! heat-treatment records ([`sysid`]), a constrained finite-horizon optimal
//! control problem over coupled thermal/microstructure dynamics ([`ocp`]),
//! an augmented-Lagrangian differential dynamic programming solver
//! ([`ddp`]), and a greedy dwell-schedule approximation that realizes the
//! optimized power fields as beam motions ([`beamplan`]).

pub mod error;
pub mod expm;
pub mod microstructure;
pub mod sparse;
pub mod thermal;

pub use error::{Error, Result};
