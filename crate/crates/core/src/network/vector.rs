//! Dense integer vectors: molecule counts, complexes and jump directions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{CoreError, Result};

/// Molecule counts `x`, one entry per species.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector(pub Vec<u64>);

/// Stoichiometric coefficients of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplexVector(pub Vec<u64>);

/// Net change `y' - y` of a reaction. Never all-zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransitionVector(Vec<i64>);

impl StateVector {
    pub fn new(counts: Vec<u64>) -> Self {
        StateVector(counts)
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `x + z`, or `None` if a coordinate would go negative.
    pub fn shifted(&self, z: &TransitionVector) -> Option<StateVector> {
        if self.dim() != z.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(z.deltas())
            .map(|(&x, &dz)| x.checked_add_signed(dz))
            .collect::<Option<Vec<_>>>()
            .map(StateVector)
    }

    /// Reinterprets the counts as a complex, as the inference constructions do.
    pub fn as_complex(&self) -> ComplexVector {
        ComplexVector(self.0.clone())
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ComplexVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn dot(&self, weights: &[u64]) -> u64 {
        self.0.iter().zip(weights).map(|(a, b)| a * b).sum()
    }
}

impl ComplexVector {
    pub fn new(coeffs: Vec<u64>) -> Self {
        ComplexVector(coeffs)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_empty_complex(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn as_state(&self) -> StateVector {
        StateVector(self.0.clone())
    }
}

impl TransitionVector {
    /// Fails on the zero vector, which no reaction can realize.
    pub fn new(delta: Vec<i64>) -> Result<Self> {
        if delta.iter().all(|&d| d == 0) {
            return Err(CoreError::ZeroTransition.into());
        }
        Ok(TransitionVector(delta))
    }

    /// `target - source`. `None` when they coincide.
    pub fn between(source: &ComplexVector, target: &ComplexVector) -> Option<Self> {
        let delta: Vec<i64> = source
            .0
            .iter()
            .zip(&target.0)
            .map(|(&s, &t)| t as i64 - s as i64)
            .collect();
        TransitionVector::new(delta).ok()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn deltas(&self) -> &[i64] {
        &self.0
    }

    pub fn dot(&self, weights: &[u64]) -> i64 {
        self.0.iter().zip(weights).map(|(&a, &b)| a * b as i64).sum()
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, ")")
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for TransitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(CoreError::DimensionMismatch { expected: a, found: b }.into());
    }
    Ok(())
}

/// The mass-action combinatorial factor `u^(v) = prod_i u_i (u_i - 1) ... (u_i - v_i + 1)`.
///
/// Zero whenever some `u_i < v_i`. Computed in arbitrary precision.
pub fn falling_factorial(u: &StateVector, v: &ComplexVector) -> Result<BigUint> {
    check_dims(u.dim(), v.dim())?;
    Ok(falling_factorial_unchecked(u.counts(), v.coeffs()))
}

pub(crate) fn falling_factorial_unchecked(u: &[u64], v: &[u64]) -> BigUint {
    let mut product = BigUint::one();
    for (&ui, &vi) in u.iter().zip(v) {
        if ui < vi {
            return BigUint::ZERO;
        }
        for k in 0..vi {
            product *= ui - k;
        }
    }
    product
}

/// Floating-point falling factorial for the simulation hot path.
#[inline]
pub(crate) fn falling_factorial_f64(u: &[u64], v: &[u64]) -> f64 {
    let mut product = 1.0;
    for (&ui, &vi) in u.iter().zip(v) {
        if ui < vi {
            return 0.0;
        }
        for k in 0..vi {
            product *= (ui - k) as f64;
        }
    }
    product
}

/// Lexicographic order: `u < v` iff the first differing coordinate is smaller in `u`.
pub fn lex_compare(u: &StateVector, v: &StateVector) -> Result<Ordering> {
    check_dims(u.dim(), v.dim())?;
    Ok(u.0.cmp(&v.0))
}
