//! Strictly positive conservation laws `v . (y' - y) = 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::system::ReactionSystem;
use super::vector::TransitionVector;
use crate::error::{CoreError, InferError, Result};

pub const DEFAULT_CONSERVATION_BOUND: u64 = 100;

/// Upper limit on candidate combinations tried by [`detect_conservation_laws`].
const SEARCH_BUDGET: u64 = 4_000_000;

/// Weights `v` with every entry strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConservationVector(Vec<u64>);

impl ConservationVector {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CoreError::ZeroDimension.into());
        }
        if weights.contains(&0) {
            return Err(CoreError::NonPositiveWeight(format!("{weights:?}")).into());
        }
        Ok(ConservationVector(weights))
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `Ok(())` when `v . z = 0` for every reaction of `sys`.
    pub fn certify(&self, sys: &ReactionSystem) -> Result<()> {
        if sys.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch { expected: sys.dim(), found: self.dim() }.into());
        }
        match sys.transition_vectors().into_iter().find(|z| z.dot(&self.0) != 0) {
            Some(z) => Err(InferError::UnverifiedConservation { v: self.to_string(), z }.into()),
            None => Ok(()),
        }
    }
}

impl std::fmt::Display for ConservationVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Searches for a strictly positive integer conservation law with entries at
/// most [`DEFAULT_CONSERVATION_BOUND`].
pub fn detect_conservation_laws(sys: &ReactionSystem) -> Option<ConservationVector> {
    detect_conservation_laws_bounded(sys, DEFAULT_CONSERVATION_BOUND)
}

/// Rational nullspace of the stoichiometric matrix, then a search over the
/// free coordinates `1..=bound` in order of increasing sum. The search is
/// complete within the bound unless the combination budget runs out first.
pub fn detect_conservation_laws_bounded(sys: &ReactionSystem, bound: u64) -> Option<ConservationVector> {
    let dim = sys.dim();
    let rows: Vec<&TransitionVector> = sys.reactions().iter().map(|r| r.transition()).collect();
    let (rref, pivots) = row_reduce(&rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() || bound == 0 {
        return None;
    }

    let mut budget = SEARCH_BUDGET;
    let k = free.len() as u64;
    for total in k..=k * bound {
        let mut t = vec![0u64; free.len()];
        let mut found = None;
        compositions(&mut t, 0, total, bound, &mut |t| {
            if budget == 0 {
                return true;
            }
            budget -= 1;
            if let Some(v) = candidate(&rref, &pivots, &free, t, dim, bound) {
                found = Some(v);
                return true;
            }
            false
        });
        if let Some(v) = found {
            let v = ConservationVector(v);
            // Re-verify against the raw reactions.
            return v.certify(sys).ok().map(|_| v);
        }
        if budget == 0 {
            return None;
        }
    }
    None
}

/// Calls `visit` on every `t` with entries in `1..=bound` summing to `total`,
/// in lexicographic order. Stops early when `visit` returns true.
fn compositions(t: &mut [u64], pos: usize, total: u64, bound: u64, visit: &mut impl FnMut(&[u64]) -> bool) -> bool {
    let rest = (t.len() - pos - 1) as u64;
    if rest == 0 {
        if (1..=bound).contains(&total) {
            t[pos] = total;
            return visit(t);
        }
        return false;
    }
    let lo = 1.max(total.saturating_sub(rest * bound));
    let hi = bound.min(total.saturating_sub(rest));
    for value in lo..=hi {
        t[pos] = value;
        if compositions(t, pos + 1, total - value, bound, visit) {
            return true;
        }
    }
    false
}

fn candidate(
    rref: &[Vec<BigRational>],
    pivots: &[usize],
    free: &[usize],
    t: &[u64],
    dim: usize,
    bound: u64,
) -> Option<Vec<u64>> {
    let mut w = vec![BigRational::zero(); dim];
    for (&col, &value) in free.iter().zip(t) {
        w[col] = BigRational::from_integer(BigInt::from(value));
    }
    for (row, &p) in pivots.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (&col, &value) in free.iter().zip(t) {
            acc -= &rref[row][col] * BigRational::from_integer(BigInt::from(value));
        }
        if !acc.is_positive() {
            return None;
        }
        w[p] = acc;
    }
    // Clear denominators, then reduce to a primitive vector.
    let lcm = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = w.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| (x / &gcd).to_u64().filter(|&v| v >= 1 && v <= bound))
        .collect()
}

/// Reduced row echelon form over the rationals. Returns rows and pivot columns.
fn row_reduce(rows: &[&TransitionVector], dim: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|z| z.deltas().iter().map(|&d| BigRational::from_integer(BigInt::from(d))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = m[i][col].clone();
                for j in 0..dim {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}
