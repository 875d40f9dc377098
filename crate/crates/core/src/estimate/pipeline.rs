//! Estimate rates from jump data, then reconstruct the network on `S_N`.

use rayon::prelude::*;

use super::visits::{estimate_from_index, EstimatedRates, VisitIndex};
use crate::error::{EstimateError, Result};
use crate::infer::{infer_on_simplex_with_noise, InferenceReport, NoiseModel};
use crate::network::{enumerate_simplex, ReactionSystem, StateVector};
use crate::sim::{derive_stream_seed, SimOptions, Simulator, Trajectory};

/// Coefficients within this many standard errors of zero count as sampling noise.
pub const NOISE_SIGMAS: f64 = 4.0;

#[derive(Clone, Debug)]
pub struct TrajectoryInference {
    pub estimates: EstimatedRates,
    pub report: InferenceReport,
}

pub fn infer_from_trajectories(
    trajs: &[Trajectory],
    order: u64,
    threshold: f64,
    min_visits: u64,
) -> Result<TrajectoryInference> {
    let dim = trajs.first().map(Trajectory::dim).ok_or(EstimateError::EmptyStateSet)?;
    let index = VisitIndex::from_trajectories(dim, trajs)?;
    infer_from_visits(&index, order, threshold, min_visits)
}

pub fn infer_from_visits(
    index: &VisitIndex,
    order: u64,
    threshold: f64,
    min_visits: u64,
) -> Result<TrajectoryInference> {
    let states = enumerate_simplex(index.dim(), order)?;
    let estimates = estimate_from_index(index, &states, min_visits)?;
    // n_z / H with H a sum of |G_x| Exp(lambda) holding times independent of the
    // jump directions has variance lambda_z * lambda / |G_x| to first order.
    let standard_error = estimates
        .rates
        .iter()
        .map(|(z, x, r)| {
            let se = (r.to_f64() * estimates.total[x] / estimates.visits[x] as f64).sqrt();
            ((z.clone(), x.clone()), se)
        })
        .collect();
    let noise = NoiseModel { standard_error: &standard_error, sigmas: NOISE_SIGMAS };
    let report = infer_on_simplex_with_noise(&estimates.rates, order, threshold, noise)?;
    Ok(TrajectoryInference { estimates, report })
}

/// How [`collect_visits`] lays out its simulations.
#[derive(Clone, Debug)]
pub struct CollectOptions {
    /// Jumps per trajectory; every trajectory restarts from the initial state.
    pub jumps_per_trajectory: u64,
    /// Trajectories simulated in parallel between coverage checks.
    pub batch: u64,
    /// Give up with `InsufficientVisits` after this many trajectories.
    pub max_trajectories: u64,
}

impl Default for CollectOptions {
    fn default() -> Self {
        CollectOptions { jumps_per_trajectory: 10_000, batch: 64, max_trajectories: 1_000_000 }
    }
}

/// Visit statistics from fresh trajectories started at `x0`, simulated until
/// every state in `states` has at least `min_visits` visits. Trajectory `i`
/// uses seed `derive_stream_seed(seed, i)`, so the result depends only on the
/// arguments. Only states up to the largest norm in `states` are tallied.
pub fn collect_visits(
    sys: &ReactionSystem,
    x0: &StateVector,
    states: &[StateVector],
    min_visits: u64,
    opts: &CollectOptions,
    seed: u64,
) -> Result<(VisitIndex, u64)> {
    let sim = Simulator::new(sys)?;
    let sim_opts = SimOptions::jumps(opts.jumps_per_trajectory);
    let max_norm = states.iter().map(StateVector::l1_norm).max().unwrap_or(0);
    let mut index = VisitIndex::focused(sys.dim(), max_norm);
    let mut next = 0u64;
    while !index.uncovered(states, min_visits).is_empty() {
        if next >= opts.max_trajectories {
            return Err(EstimateError::InsufficientVisits { states: index.uncovered(states, min_visits), min_visits }
                .into());
        }
        let end = (next + opts.batch.max(1)).min(opts.max_trajectories);
        let parts: Vec<VisitIndex> = (next..end)
            .into_par_iter()
            .map(|i| {
                let mut part = VisitIndex::focused(sys.dim(), max_norm);
                let mut slots: Vec<Option<usize>> = vec![None; sys.len()];
                let mut prev = (0.0, x0.counts().to_vec());
                sim.run_streaming(x0, &sim_opts, derive_stream_seed(seed, i), |t, x, r| {
                    let slot = *slots[r].get_or_insert_with(|| part.register_direction(sys.reactions()[r].transition()));
                    part.record_slot(&prev.1, t - prev.0, slot);
                    prev.0 = t;
                    prev.1.copy_from_slice(x);
                })?;
                Ok(part)
            })
            .collect::<Result<_>>()?;
        for part in &parts {
            index.merge(part);
        }
        next = end;
    }
    Ok((index, next))
}
