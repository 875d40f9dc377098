//! Exact stochastic simulation of mass-action systems and ensemble statistics.

mod io;
mod rng;
mod ssa;
mod stats;
mod trajectory;

pub use io::{format_time, read_trajectories, read_trajectory_file, write_trajectories, write_trajectory_file};
pub use rng::{derive_stream_seed, splitmix64_mix, StreamRng};
pub use ssa::{simulate, simulate_ensemble, SimOptions, Simulator, DEFAULT_MAX_JUMPS};
pub use stats::{empirical_distribution, ensemble_moments, EmpiricalDistribution, EnsembleMoments, MomentAccumulator};
pub use trajectory::{Termination, Trajectory};
