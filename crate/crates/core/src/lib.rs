//! Stochastic mass-action reaction networks: exact simulation, network
//! reconstruction from transition rates, identifiability checks and
//! accuracy measures for networks inferred from trajectory data.
//!
//! The crate is organised in four layers:
//!
//! * [`network`]: reactions, intensities, state enumeration, the `.crn` format.
//! * [`sim`]: Gillespie direct-method simulation, ensembles and their statistics.
//! * [`infer`]: unique reconstruction of a network from rates on a simplex,
//!   hyperplane constructions, polynomial fitting and identifiability verdicts.
//! * [`estimate`]: rate estimation from trajectories, confidence radii and
//!   distances between systems.
//!
//! [`cli`] wires these into the `crn` command-line tool.

pub mod cli;
pub mod error;
pub mod estimate;
pub mod infer;
pub mod network;
pub mod sim;

pub use error::{Error, Result};
