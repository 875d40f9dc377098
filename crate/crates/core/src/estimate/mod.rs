//! Rate estimation from complete jump data, confidence radii and distances.

mod confidence;
mod distance;
mod pipeline;
mod visits;

pub use confidence::{confidence_epsilon, normal_quantile, z_alpha};
pub use distance::{distance_intensity, distance_tv, DistanceResult, Metric};
pub use pipeline::{
    collect_visits, infer_from_trajectories, infer_from_visits, CollectOptions, TrajectoryInference,
    NOISE_SIGMAS,
};
pub use visits::{
    collect_transition_vectors, estimate_from_index, estimate_rates, read_estimated_rates, write_estimated_rates,
    write_estimated_rates_file, EstimatedRates, StateTally, VisitIndex, DEFAULT_MIN_VISITS,
};
