//! Ensemble statistics at fixed observation times.
//!
//! Accumulators hold exact integer sums, so merging partial results in any
//! order gives bit-identical output.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::trajectory::Trajectory;
use crate::error::{Result, SimError};
use crate::network::StateVector;

/// Sample mean and unbiased variance per species on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleMoments {
    pub time_grid: Vec<f64>,
    /// `mean[k][i]`: species `i` at `time_grid[k]`.
    pub mean: Vec<Vec<f64>>,
    pub variance: Vec<Vec<f64>>,
    pub n_realizations: u64,
}

/// Order-independent running sums of counts and squared counts.
#[derive(Clone, Debug)]
pub struct MomentAccumulator {
    time_grid: Vec<f64>,
    dim: usize,
    n: u64,
    sum: Vec<u128>,
    sum_sq: Vec<u128>,
}

impl MomentAccumulator {
    pub fn new(time_grid: Vec<f64>, dim: usize) -> Self {
        let cells = time_grid.len() * dim;
        MomentAccumulator { time_grid, dim, n: 0, sum: vec![0; cells], sum_sq: vec![0; cells] }
    }

    pub fn observe(&mut self, traj: &Trajectory) -> Result<()> {
        for (k, &t) in self.time_grid.iter().enumerate() {
            let x = traj
                .state_at(t)
                .ok_or(SimError::OutsideHorizon { t, horizon: traj.observed_until() })?;
            for (i, &xi) in x.iter().enumerate() {
                let cell = k * self.dim + i;
                self.sum[cell] += xi as u128;
                self.sum_sq[cell] += (xi as u128) * (xi as u128);
            }
        }
        self.n += 1;
        Ok(())
    }

    pub fn merge(mut self, other: MomentAccumulator) -> Self {
        for (a, b) in self.sum.iter_mut().zip(other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(other.sum_sq) {
            *a += b;
        }
        self.n += other.n;
        self
    }

    pub fn finish(self) -> Result<EnsembleMoments> {
        if self.n == 0 {
            return Err(SimError::EmptyEnsemble.into());
        }
        let n = self.n as f64;
        let mut mean = Vec::with_capacity(self.time_grid.len());
        let mut variance = Vec::with_capacity(self.time_grid.len());
        for k in 0..self.time_grid.len() {
            let mut m = Vec::with_capacity(self.dim);
            let mut v = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                let s = self.sum[k * self.dim + i];
                let s2 = self.sum_sq[k * self.dim + i];
                m.push(s as f64 / n);
                if self.n < 2 {
                    v.push(0.0);
                } else {
                    // n*S2 - S1^2 >= 0 exactly (Cauchy-Schwarz on integers).
                    let numer = (self.n as u128) * s2 - s * s;
                    v.push(numer as f64 / (n * (n - 1.0)));
                }
            }
            mean.push(m);
            variance.push(v);
        }
        Ok(EnsembleMoments { time_grid: self.time_grid, mean, variance, n_realizations: self.n })
    }
}

/// Per-species sample mean and unbiased variance at each grid time.
pub fn ensemble_moments(trajs: &[Trajectory], time_grid: &[f64]) -> Result<EnsembleMoments> {
    let first = trajs.first().ok_or(SimError::EmptyEnsemble)?;
    let dim = first.dim();
    let grid = time_grid.to_vec();
    trajs
        .par_iter()
        .try_fold(
            || MomentAccumulator::new(grid.clone(), dim),
            |mut acc, traj| acc.observe(traj).map(|_| acc),
        )
        .try_reduce(|| MomentAccumulator::new(grid.clone(), dim), |a, b| Ok(a.merge(b)))?
        .finish()
}

/// Relative state frequencies at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution {
    pub time: f64,
    pub support: BTreeMap<StateVector, f64>,
    /// Probability of states outside the restriction set (0 when unrestricted).
    pub escaped_mass: f64,
    pub n_realizations: u64,
}

impl EmpiricalDistribution {
    pub fn probability(&self, x: &StateVector) -> f64 {
        self.support.get(x).copied().unwrap_or(0.0)
    }
}

pub fn empirical_distribution(
    trajs: &[Trajectory],
    t: f64,
    restrict_to: Option<&BTreeSet<StateVector>>,
) -> Result<EmpiricalDistribution> {
    if trajs.is_empty() {
        return Err(SimError::EmptyEnsemble.into());
    }
    let mut counts: BTreeMap<StateVector, u64> = BTreeMap::new();
    let mut escaped = 0u64;
    for traj in trajs {
        let x = traj
            .state_at(t)
            .ok_or(SimError::OutsideHorizon { t, horizon: traj.observed_until() })?;
        let x = StateVector::new(x.to_vec());
        match restrict_to {
            Some(set) if !set.contains(&x) => escaped += 1,
            _ => *counts.entry(x).or_default() += 1,
        }
    }
    let n = trajs.len() as f64;
    Ok(EmpiricalDistribution {
        time: t,
        support: counts.into_iter().map(|(x, c)| (x, c as f64 / n)).collect(),
        escaped_mass: escaped as f64 / n,
        n_realizations: trajs.len() as u64,
    })
}
