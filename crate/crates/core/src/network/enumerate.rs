//! Finite state sets: the simplex `||x||_1 <= N` and hyperplanes `v . x = N`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::vector::StateVector;
use super::ConservationVector;
use crate::error::{CoreError, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// `C(n, k)` in arbitrary precision.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of states with `||x||_1 <= order` in dimension `dim`.
pub fn simplex_size(dim: usize, order: u64) -> BigUint {
    binomial(order + dim as u64, dim as u64)
}

/// All states with `||x||_1 <= order`, in increasing lexicographic order.
pub fn enumerate_simplex(dim: usize, order: u64) -> Result<Vec<StateVector>> {
    enumerate_simplex_capped(dim, order, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_simplex_capped(dim: usize, order: u64, cap: u64) -> Result<Vec<StateVector>> {
    if dim == 0 {
        return Err(CoreError::ZeroDimension.into());
    }
    let count = simplex_size(dim, order);
    let n = match count.to_u64() {
        Some(n) if n <= cap => n as usize,
        _ => return Err(CoreError::EnumerationTooLarge { count: count.to_string(), cap }.into()),
    };
    let mut out = Vec::with_capacity(n);
    let mut current = vec![0u64; dim];
    fill_simplex(&mut current, 0, order, &mut out);
    debug_assert_eq!(out.len(), n);
    Ok(out)
}

fn fill_simplex(current: &mut [u64], pos: usize, budget: u64, out: &mut Vec<StateVector>) {
    if pos == current.len() {
        out.push(StateVector::new(current.to_vec()));
        return;
    }
    for value in 0..=budget {
        current[pos] = value;
        fill_simplex(current, pos + 1, budget - value, out);
    }
    current[pos] = 0;
}

/// All `x >= 0` with `v . x = level`, in increasing lexicographic order.
pub fn enumerate_hyperplane(v: &ConservationVector, level: u64) -> Result<Vec<StateVector>> {
    enumerate_hyperplane_capped(v, level, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_hyperplane_capped(v: &ConservationVector, level: u64, cap: u64) -> Result<Vec<StateVector>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; v.dim()];
    if !fill_hyperplane(v.weights(), &mut current, 0, level, &mut out, cap) {
        return Err(CoreError::EnumerationTooLarge { count: format!("more than {cap}"), cap }.into());
    }
    Ok(out)
}

fn fill_hyperplane(
    weights: &[u64],
    current: &mut [u64],
    pos: usize,
    remaining: u64,
    out: &mut Vec<StateVector>,
    cap: u64,
) -> bool {
    if pos + 1 == weights.len() {
        if remaining.is_multiple_of(weights[pos]) {
            if out.len() as u64 >= cap {
                return false;
            }
            current[pos] = remaining / weights[pos];
            out.push(StateVector::new(current.to_vec()));
            current[pos] = 0;
        }
        return true;
    }
    for value in 0..=remaining / weights[pos] {
        current[pos] = value;
        if !fill_hyperplane(weights, current, pos + 1, remaining - value * weights[pos], out, cap) {
            return false;
        }
    }
    current[pos] = 0;
    true
}
