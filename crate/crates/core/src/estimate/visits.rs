//! Visit statistics and the holding-time rate estimator.
//!
//! A visit to `x` is a record `(tau_k, x)` followed by another record. It
//! contributes its holding time `tau_{k+1} - tau_k` and the departure
//! direction `X(tau_{k+1}) - x`. Then
//!
//! ```text
//! lambda_z(x) ~ #{departures along z} / sum of holding times at x
//! ```
//!
//! The per-visit samples `1{departure = z} * lambda(x)` whose variance bounds
//! the estimate depend only on these counts, so a visit list reduces to a
//! tally without losing information.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{CoreError, Error, EstimateError, Result};
use crate::infer::{rate_table_header, rate_table_key, RateTable};
use crate::network::{Rate, StateVector, TransitionVector};
use crate::sim::Trajectory;

pub const DEFAULT_MIN_VISITS: u64 = 100;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateTally {
    /// `|G_x|`.
    pub visits: u64,
    /// Sum of holding times over `G_x`.
    pub holding: f64,
    /// Departures per direction, indexed like `VisitIndex::directions`.
    departures: Vec<u64>,
}

/// Visits per state, pooled over trajectories.
#[derive(Clone, Debug)]
pub struct VisitIndex {
    dim: usize,
    /// Only states with `||x||_1` up to this bound get a tally.
    max_norm: Option<u64>,
    states: FxHashMap<Vec<u64>, StateTally>,
    /// Every jump direction seen, tallied state or not.
    directions: Vec<Vec<i64>>,
    scratch: Vec<i64>,
}

impl VisitIndex {
    pub fn new(dim: usize) -> Self {
        VisitIndex { dim, max_norm: None, states: FxHashMap::default(), directions: Vec::new(), scratch: Vec::new() }
    }

    /// Tallies only states of `S_N`; jump directions are still collected everywhere.
    pub fn focused(dim: usize, max_norm: u64) -> Self {
        VisitIndex { max_norm: Some(max_norm), ..VisitIndex::new(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn direction_slot(&mut self, delta: &[i64]) -> usize {
        match self.directions.iter().position(|d| d == delta) {
            Some(k) => k,
            None => {
                self.directions.push(delta.to_vec());
                self.directions.len() - 1
            }
        }
    }

    /// One visit to `from` lasting `holding`, followed by a jump to `to`.
    pub fn record(&mut self, from: &[u64], holding: f64, to: &[u64]) {
        let mut delta = std::mem::take(&mut self.scratch);
        delta.clear();
        delta.extend(from.iter().zip(to).map(|(&a, &b)| b as i64 - a as i64));
        let slot = self.direction_slot(&delta);
        self.scratch = delta;
        self.record_slot(from, holding, slot);
    }

    /// Registers a jump direction and returns its slot for [`VisitIndex::record_slot`].
    pub fn register_direction(&mut self, z: &TransitionVector) -> usize {
        self.direction_slot(z.deltas())
    }

    /// Like [`VisitIndex::record`] with the direction given by a registered slot.
    pub fn record_slot(&mut self, from: &[u64], holding: f64, slot: usize) {
        if self.max_norm.is_some_and(|n| from.iter().sum::<u64>() > n) {
            return;
        }
        let tally = match self.states.get_mut(from) {
            Some(tally) => tally,
            None => self.states.entry(from.to_vec()).or_default(),
        };
        tally.visits += 1;
        tally.holding += holding;
        if tally.departures.len() <= slot {
            tally.departures.resize(slot + 1, 0);
        }
        tally.departures[slot] += 1;
    }

    pub fn observe(&mut self, traj: &Trajectory) -> Result<()> {
        if traj.dim() != self.dim {
            return Err(malformed(format!(
                "trajectory {} has {} species, expected {}",
                traj.id(),
                traj.dim(),
                self.dim
            )));
        }
        let times = traj.times();
        for k in 1..times.len() {
            let holding = times[k] - times[k - 1];
            if !(holding > 0.0 && holding.is_finite()) {
                return Err(malformed(format!("trajectory {} has non-increasing times at record {k}", traj.id())));
            }
            let (from, to) = (traj.state(k - 1), traj.state(k));
            if from == to {
                return Err(malformed(format!("trajectory {} repeats a state at record {k}", traj.id())));
            }
            self.record(from, holding, to);
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &VisitIndex) {
        let slots: Vec<usize> = other.directions.iter().map(|d| self.direction_slot(d)).collect();
        for (x, theirs) in &other.states {
            if self.max_norm.is_some_and(|n| x.iter().sum::<u64>() > n) {
                continue;
            }
            let ours = self.states.entry(x.clone()).or_default();
            ours.visits += theirs.visits;
            ours.holding += theirs.holding;
            for (k, &n) in theirs.departures.iter().enumerate() {
                if ours.departures.len() <= slots[k] {
                    ours.departures.resize(slots[k] + 1, 0);
                }
                ours.departures[slots[k]] += n;
            }
        }
    }

    /// Tallies each trajectory in parallel, then merges in input order so the
    /// floating-point sums do not depend on scheduling.
    pub fn from_trajectories(dim: usize, trajs: &[Trajectory]) -> Result<Self> {
        let parts: Vec<VisitIndex> = trajs
            .par_iter()
            .map(|t| {
                let mut part = VisitIndex::new(dim);
                part.observe(t).map(|_| part)
            })
            .collect::<Result<_>>()?;
        let mut index = VisitIndex::new(dim);
        for part in &parts {
            index.merge(part);
        }
        Ok(index)
    }

    pub fn get(&self, x: &StateVector) -> Option<&StateTally> {
        self.states.get(x.counts())
    }

    pub fn visits(&self, x: &StateVector) -> u64 {
        self.get(x).map_or(0, |t| t.visits)
    }

    /// Departures from `x` along `z`.
    pub fn count(&self, x: &StateVector, z: &TransitionVector) -> u64 {
        let Some(slot) = self.directions.iter().position(|d| d.as_slice() == z.deltas()) else {
            return 0;
        };
        self.get(x).and_then(|t| t.departures.get(slot).copied()).unwrap_or(0)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn transition_vectors(&self) -> BTreeSet<TransitionVector> {
        self.directions.iter().map(|d| TransitionVector::new(d.clone()).expect("jumps change the state")).collect()
    }

    /// States from `wanted` with fewer than `min_visits` visits.
    pub fn uncovered(&self, wanted: &[StateVector], min_visits: u64) -> Vec<StateVector> {
        wanted.iter().filter(|x| self.visits(x) < min_visits).cloned().collect()
    }
}

fn malformed(msg: String) -> Error {
    EstimateError::MalformedTrajectory(msg).into()
}

/// Distinct jump vectors over all consecutive record pairs.
pub fn collect_transition_vectors(trajs: &[Trajectory]) -> BTreeSet<TransitionVector> {
    let mut out = BTreeSet::new();
    for traj in trajs {
        for k in 0..traj.n_jumps() {
            if let Some(z) = traj.jump_vector(k) {
                out.insert(z);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct EstimatedRates {
    /// Sample means `lambda_z(x)` as floats; every observed `z` at every requested state.
    pub rates: RateTable,
    /// Sample variance of the per-visit samples `1{z} * lambda(x)`.
    pub variance: BTreeMap<(TransitionVector, StateVector), f64>,
    /// `|G_x|`.
    pub visits: BTreeMap<StateVector, u64>,
    /// Total intensity estimate `|G_x| / sum of holding times`.
    pub total: BTreeMap<StateVector, f64>,
}

impl EstimatedRates {
    pub fn sigma(&self, z: &TransitionVector, x: &StateVector) -> Option<f64> {
        self.variance.get(&(z.clone(), x.clone())).map(|v| v.sqrt())
    }
}

pub fn estimate_rates(trajs: &[Trajectory], states: &[StateVector], min_visits: u64) -> Result<EstimatedRates> {
    let dim = match (trajs.first(), states.first()) {
        (Some(t), _) => t.dim(),
        (None, Some(x)) => x.dim(),
        (None, None) => return Err(EstimateError::EmptyStateSet.into()),
    };
    let index = VisitIndex::from_trajectories(dim, trajs)?;
    estimate_from_index(&index, states, min_visits)
}

/// The estimator applied to pooled visit statistics.
///
/// Transition vectors are those seen anywhere in the data; a vector never seen
/// leaving `x` gets rate 0 there.
pub fn estimate_from_index(index: &VisitIndex, states: &[StateVector], min_visits: u64) -> Result<EstimatedRates> {
    if states.is_empty() {
        return Err(EstimateError::EmptyStateSet.into());
    }
    if let Some(x) = states.iter().find(|x| x.dim() != index.dim()) {
        return Err(CoreError::DimensionMismatch { expected: index.dim(), found: x.dim() }.into());
    }
    let min_visits = min_visits.max(1);
    let uncovered = index.uncovered(states, min_visits);
    if !uncovered.is_empty() {
        return Err(EstimateError::InsufficientVisits { states: uncovered, min_visits }.into());
    }

    let zs = index.transition_vectors();
    let mut est = EstimatedRates {
        rates: RateTable::new(index.dim()),
        variance: BTreeMap::new(),
        visits: BTreeMap::new(),
        total: BTreeMap::new(),
    };
    for x in states {
        let tally = index.get(x).expect("covered state has visits");
        let g = tally.visits as f64;
        let total = g / tally.holding;
        for z in &zs {
            let n = index.count(x, z) as f64;
            est.rates.insert(z.clone(), x.clone(), Rate::Float(n / tally.holding))?;
            let variance = if tally.visits > 1 { total * total * n * (g - n) / (g * (g - 1.0)) } else { 0.0 };
            est.variance.insert((z.clone(), x.clone()), variance);
        }
        est.visits.insert(x.clone(), tally.visits);
        est.total.insert(x.clone(), total);
    }
    Ok(est)
}

/// Rate table with `sigma` and `visits` columns appended.
pub fn write_estimated_rates<W: Write>(mut out: W, est: &EstimatedRates) -> Result<()> {
    writeln!(out, "{},sigma,visits", rate_table_header(est.rates.dim()))?;
    for (z, x, rate) in est.rates.iter() {
        let sigma = est.sigma(z, x).unwrap_or(f64::NAN);
        let visits = est.visits.get(x).copied().unwrap_or(0);
        writeln!(out, "{},{rate},{sigma},{visits}", rate_table_key(z, x))?;
    }
    Ok(())
}

pub fn write_estimated_rates_file(path: impl AsRef<Path>, est: &EstimatedRates) -> Result<()> {
    let mut buf = Vec::new();
    write_estimated_rates(&mut buf, est)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Reads a file written by [`write_estimated_rates`].
pub fn read_estimated_rates<R: Read>(input: R) -> Result<EstimatedRates> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| malformed(e.to_string()))?.clone();
    let dim = headers.iter().filter(|h| h.starts_with('z')).count();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or_else(|| malformed(format!("missing column {name}")));
    let (rate_col, sigma_col, visits_col) = (col("rate")?, col("sigma")?, col("visits")?);
    if dim == 0 || rate_col != 2 * dim {
        return Err(malformed(format!("unexpected header {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut est = EstimatedRates {
        rates: RateTable::new(dim),
        variance: BTreeMap::new(),
        visits: BTreeMap::new(),
        total: BTreeMap::new(),
    };
    for (row, record) in reader.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| malformed(e.to_string()))?;
        let bad = |what: &str| malformed(format!("line {line}: bad {what}"));
        let field = |i: usize| record.get(i).unwrap_or("");
        let z = (0..dim).map(|i| field(i).parse::<i64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("z"))?;
        let x = (dim..2 * dim).map(|i| field(i).parse::<u64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad("x"))?;
        let z = TransitionVector::new(z).map_err(|_| bad("z"))?;
        let x = StateVector::new(x);
        let rate: Rate = field(rate_col).parse().map_err(|_| bad("rate"))?;
        let sigma: f64 = field(sigma_col).parse().map_err(|_| bad("sigma"))?;
        let visits: u64 = field(visits_col).parse().map_err(|_| bad("visits"))?;
        *est.total.entry(x.clone()).or_default() += rate.to_f64();
        est.rates.insert(z.clone(), x.clone(), rate)?;
        est.variance.insert((z, x.clone()), sigma * sigma);
        est.visits.insert(x, visits);
    }
    Ok(est)
}
