//! Networks reproducing given rates on a conservation hyperplane `v . x = N`.
//!
//! Distinct states of the hyperplane are pairwise incomparable, so a reaction
//! whose source is a hyperplane state `x` is charged at `x` alone. Emitting
//! `x -> x + z` with rate constant `lambda_z(x) / x^(x)` therefore reproduces
//! every rate independently.

use super::rate_table::RateTable;
use crate::error::{CoreError, InferError, Result};
use crate::network::{enumerate_hyperplane, falling_factorial, ConservationVector, Rate, Reaction, ReactionSystem};

pub fn infer_on_hyperplane(rates: &RateTable, v: &ConservationVector, level: u64) -> Result<ReactionSystem> {
    if v.dim() != rates.dim() {
        return Err(CoreError::DimensionMismatch { expected: rates.dim(), found: v.dim() }.into());
    }
    let states = enumerate_hyperplane(v, level)?;
    let mut reactions = Vec::new();
    for z in rates.transition_vectors() {
        let per_z = rates.rates_for(z).unwrap();
        for x in &states {
            let rate = per_z
                .get(x)
                .ok_or_else(|| InferError::MissingRate { z: z.clone(), state: x.clone() })?;
            if !rate.is_positive() {
                continue;
            }
            let product = x
                .shifted(z)
                .ok_or_else(|| InferError::InvalidProduct { z: z.clone(), state: x.clone() })?;
            let ff = falling_factorial(x, &x.as_complex())?;
            let kappa = rate / &Rate::from_biguint(&ff);
            reactions.push(Reaction::new(x.as_complex(), product.as_complex(), kappa)?);
        }
    }
    ReactionSystem::with_dimension(rates.dim(), reactions)
}
