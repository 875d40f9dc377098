//! Unique reconstruction of an order-`N` mass-action system from its
//! transition rates on the simplex `S_N`.
//!
//! For each transition vector `z` the states `x^1 < ... < x^n` of `S_N` are
//! visited in lexicographic order. Every later state `x^j` exceeds `x^i` in
//! some coordinate, so `x^i^(x^j) = 0`: the falling-factorial basis is
//! triangular and
//!
//! ```text
//! c^i = (lambda*(x^i) - sum_{j<i} c^j x^i^(x^j)) / x^i^(x^i)
//! ```
//!
//! determines each coefficient in one pass. A positive `c^i` becomes the
//! reaction `x^i -> x^i + z` with rate constant `c^i`.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::rate_table::RateTable;
use crate::error::{InferError, Result};
use crate::network::{
    enumerate_simplex, falling_factorial, falling_factorial_f64, Rate, Reaction, ReactionSystem, StateVector, TransitionVector,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InferenceMode {
    /// Any negative coefficient is an error; the output reproduces the input exactly.
    Strict,
    /// Coefficients whose residual `c^i * x^i^(x^i)` lies within
    /// `threshold * Lambda(x^i)` of zero are set to zero, where `Lambda(x^i)` is
    /// the total tabulated rate out of `x^i`. Residuals below that band abort.
    Clamp { threshold: f64 },
}

impl InferenceMode {
    pub fn threshold(&self) -> f64 {
        match self {
            InferenceMode::Strict => 0.0,
            InferenceMode::Clamp { threshold } => *threshold,
        }
    }
}

/// Standard errors of estimated rates, used to widen the clamp band to what
/// sampling noise explains.
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel<'a> {
    pub standard_error: &'a BTreeMap<(TransitionVector, StateVector), f64>,
    /// A residual within this many standard errors of zero is rejected as noise.
    pub sigmas: f64,
}

/// One emitted reaction's coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Coefficient {
    pub z: TransitionVector,
    /// Position of the source state in the lexicographic enumeration of `S_N` (0-based).
    pub state_index: usize,
    pub state: StateVector,
    pub value: Rate,
}

/// A nonzero coefficient that clamping set to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RejectedCoefficient {
    pub z: TransitionVector,
    pub state: StateVector,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct InferenceReport {
    pub system: ReactionSystem,
    pub coefficients: Vec<Coefficient>,
    /// Max `|reproduced - input|` over the input states.
    pub residual_max: f64,
    pub rejected: Vec<RejectedCoefficient>,
    pub threshold_used: f64,
}

pub fn infer_on_simplex(rates: &RateTable, order: u64, mode: InferenceMode) -> Result<InferenceReport> {
    infer(rates, order, mode, None)
}

/// Clamp-mode inference for estimated rates. A residual is set to zero when it
/// lies within `threshold * Lambda(x)` or within `noise.sigmas` standard errors
/// of zero, the latter propagated linearly through the recursion from the
/// per-state standard errors (estimates at distinct states are independent).
/// Negative residuals outside that band abort.
pub fn infer_on_simplex_with_noise(
    rates: &RateTable,
    order: u64,
    threshold: f64,
    noise: NoiseModel<'_>,
) -> Result<InferenceReport> {
    infer(rates, order, InferenceMode::Clamp { threshold }, Some(noise))
}

fn infer(rates: &RateTable, order: u64, mode: InferenceMode, noise: Option<NoiseModel<'_>>) -> Result<InferenceReport> {
    let dim = rates.dim();
    let states = enumerate_simplex(dim, order)?;
    let threshold = mode.threshold();

    // Own-state falling factorials x^(x) for every basis state.
    let self_ff: Vec<BigUint> = states.iter().map(|x| falling_factorial(x, &x.as_complex()).unwrap()).collect();

    let mut reactions = Vec::new();
    let mut coefficients = Vec::new();
    let mut rejected = Vec::new();

    for z in rates.transition_vectors() {
        let per_z = rates.rates_for(z).expect("listed transition has rates");
        let observed: Vec<&Rate> = states
            .iter()
            .map(|x| per_z.get(x).ok_or_else(|| InferError::MissingRate { z: z.clone(), state: x.clone() }))
            .collect::<Result<_, _>>()?;
        if observed.iter().all(|r| r.is_zero()) {
            continue;
        }
        let errors: Option<Vec<f64>> = noise.map(|n| {
            states.iter().map(|x| n.standard_error.get(&(z.clone(), x.clone())).copied().unwrap_or(0.0)).collect()
        });

        // Kept coefficients, with the weights expressing each residual in terms of the inputs.
        let mut kept: Vec<(usize, Rate)> = Vec::new();
        let mut kept_weights: Vec<Vec<f64>> = Vec::new();
        for (i, x) in states.iter().enumerate() {
            let fitted: Rate = kept
                .iter()
                .map(|(j, c)| c.scale(&falling_factorial(x, &states[*j].as_complex()).unwrap()))
                .sum();
            let residual = observed[i] - &fitted;
            if residual.is_zero() {
                continue;
            }
            let coefficient = &residual / &Rate::from_biguint(&self_ff[i]);

            let mut weights = Vec::new();
            if let InferenceMode::Clamp { .. } = mode {
                let r = residual.to_f64();
                let mut band = threshold * rates.total_rate(x).to_f64();
                if let (Some(errors), Some(n)) = (&errors, noise) {
                    weights = residual_weights(&states, &kept, &kept_weights, &self_ff, i);
                    let se = weights.iter().zip(errors).map(|(w, e)| (w * e).powi(2)).sum::<f64>().sqrt();
                    band = band.max(n.sigmas * se);
                }
                if r.abs() <= band {
                    rejected.push(RejectedCoefficient { z: z.clone(), state: x.clone(), value: coefficient.to_f64() });
                    continue;
                }
            }
            if coefficient.is_negative() {
                return Err(InferError::NonRealizable {
                    z: z.clone(),
                    state: x.clone(),
                    coefficient: coefficient.to_f64(),
                }
                .into());
            }
            let product = x
                .shifted(z)
                .ok_or_else(|| InferError::InvalidProduct { z: z.clone(), state: x.clone() })?;
            reactions.push(Reaction::new(x.as_complex(), product.as_complex(), coefficient.clone())?);
            coefficients.push(Coefficient { z: z.clone(), state_index: i, state: x.clone(), value: coefficient.clone() });
            kept.push((i, coefficient));
            kept_weights.push(weights);
        }
    }

    let system = ReactionSystem::with_dimension(dim, reactions)?;
    let residual_max = max_residual(&system, rates, &states)?;
    Ok(InferenceReport { system, coefficients, residual_max, rejected, threshold_used: threshold })
}

/// Weights `w` with `residual_i = sum_k w_k * rate(x^k)`, given the weights of
/// the kept residuals before `i`: `e_i - sum_j x^i^(x^j) / x^j^(x^j) * w_j`.
fn residual_weights(
    states: &[StateVector],
    kept: &[(usize, Rate)],
    kept_weights: &[Vec<f64>],
    self_ff: &[BigUint],
    i: usize,
) -> Vec<f64> {
    let mut w = vec![0.0; states.len()];
    w[i] = 1.0;
    for ((j, _), wj) in kept.iter().zip(kept_weights) {
        let ff = falling_factorial_f64(states[i].counts(), states[*j].counts());
        if ff == 0.0 {
            continue;
        }
        let scale = ff / Rate::from_biguint(&self_ff[*j]).to_f64();
        for (a, b) in w.iter_mut().zip(wj) {
            *a -= scale * b;
        }
    }
    w
}

/// Largest `|transition_rate(sys, z, x) - rates(z, x)|` over tabulated `(z, x)` with `x` in `states`.
pub(crate) fn max_residual(sys: &ReactionSystem, rates: &RateTable, states: &[StateVector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for z in rates.transition_vectors() {
        let per_z = rates.rates_for(z).unwrap();
        for x in states {
            if let Some(target) = per_z.get(x) {
                let diff = (&sys.transition_rate(z, x)? - target).abs();
                worst = worst.max(diff.to_f64());
            }
        }
    }
    Ok(worst)
}
