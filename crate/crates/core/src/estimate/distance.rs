//! Distances between two reaction systems over a finite state set `U`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{CoreError, EstimateError, Result};
use crate::network::{Rate, ReactionSystem, StateVector};
use crate::sim::{derive_stream_seed, empirical_distribution, simulate_ensemble, SimOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Tv,
    Intensity,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Tv => "tv",
            Metric::Intensity => "intensity",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceResult {
    pub metric: Metric,
    pub set_u: String,
    pub value: f64,
    pub t: Option<f64>,
    pub n_realizations: Option<u64>,
    /// Probability mass outside `U` for each system (tv only).
    pub escaped_a: Option<f64>,
    pub escaped_b: Option<f64>,
}

impl DistanceResult {
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.set_u = label.into();
        self
    }
}

fn default_label(u: &[StateVector]) -> String {
    format!("{} states", u.len())
}

fn check_dims(a: &ReactionSystem, b: &ReactionSystem, u: &[StateVector]) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(CoreError::DimensionMismatch { expected: a.dim(), found: b.dim() }.into());
    }
    if let Some(x) = u.iter().find(|x| x.dim() != a.dim()) {
        return Err(CoreError::DimensionMismatch { expected: a.dim(), found: x.dim() }.into());
    }
    if u.is_empty() {
        return Err(EstimateError::EmptyStateSet.into());
    }
    Ok(())
}

/// `max_{x in U} max_z |lambda_z(x) - lambda'_z(x)|`, `z` ranging over the
/// transition vectors of either system; a vector missing from one system
/// contributes the other's rate alone.
pub fn distance_intensity(a: &ReactionSystem, b: &ReactionSystem, u: &[StateVector]) -> Result<DistanceResult> {
    check_dims(a, b, u)?;
    let zs: BTreeSet<_> = a.transition_vectors().union(&b.transition_vectors()).cloned().collect();
    let mut worst = Rate::zero();
    for x in u {
        for z in &zs {
            let diff = (&a.transition_rate(z, x)? - &b.transition_rate(z, x)?).abs();
            if diff > worst {
                worst = diff;
            }
        }
    }
    Ok(DistanceResult {
        metric: Metric::Intensity,
        set_u: default_label(u),
        value: worst.to_f64(),
        t: None,
        n_realizations: None,
        escaped_a: None,
        escaped_b: None,
    })
}

/// `1/2 sum_{x in U} |p(x,t) - p'(x,t)|` from two independent ensembles of
/// `n` paths. System `a` uses base seed `derive_stream_seed(seed, 0)`, system
/// `b` uses `derive_stream_seed(seed, 1)`.
#[allow(clippy::too_many_arguments)]
pub fn distance_tv(
    a: &ReactionSystem,
    b: &ReactionSystem,
    x0a: &StateVector,
    x0b: &StateVector,
    t: f64,
    u: &[StateVector],
    n: u64,
    seed: u64,
) -> Result<DistanceResult> {
    check_dims(a, b, u)?;
    let opts = SimOptions::until(t);
    let set: BTreeSet<StateVector> = u.iter().cloned().collect();
    let (pa, pb) = rayon::join(
        || {
            simulate_ensemble(a, x0a, &opts, n, derive_stream_seed(seed, 0))
                .and_then(|trajs| empirical_distribution(&trajs, t, Some(&set)))
        },
        || {
            simulate_ensemble(b, x0b, &opts, n, derive_stream_seed(seed, 1))
                .and_then(|trajs| empirical_distribution(&trajs, t, Some(&set)))
        },
    );
    let (pa, pb) = (pa?, pb?);
    let value = 0.5 * set.iter().map(|x| (pa.probability(x) - pb.probability(x)).abs()).sum::<f64>();
    Ok(DistanceResult {
        metric: Metric::Tv,
        set_u: default_label(u),
        value,
        t: Some(t),
        n_realizations: Some(n),
        escaped_a: Some(pa.escaped_mass),
        escaped_b: Some(pb.escaped_mass),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{enumerate_simplex, parse_network};

    #[test]
    fn identical_systems_have_zero_intensity_distance() {
        let sys = parse_network("species: A B\nA -> B @ 2\n0 -> A @ 1/3").unwrap();
        let u = enumerate_simplex(2, 4).unwrap();
        assert_eq!(distance_intensity(&sys, &sys, &u).unwrap().value, 0.0);
    }

    #[test]
    fn missing_transition_counts_fully() {
        let a = parse_network("species: A\nA -> 0 @ 2").unwrap();
        let b = parse_network("species: A\n0 -> A @ 1").unwrap();
        let u = vec![StateVector::new(vec![3])];
        // max(|6 - 0|, |0 - 1|)
        assert_eq!(distance_intensity(&a, &b, &u).unwrap().value, 6.0);
    }

    #[test]
    fn disjoint_point_masses() {
        let a = parse_network("species: A\nA -> 2*A @ 1e-300").unwrap();
        let u = vec![StateVector::new(vec![0]), StateVector::new(vec![1])];
        let d = distance_tv(&a, &a, &u[0], &u[1], 1.0, &u, 50, 7).unwrap();
        assert_eq!(d.value, 1.0);
        assert_eq!(d.escaped_a, Some(0.0));
    }

    #[test]
    fn errors() {
        let a = parse_network("species: A\nA -> 0 @ 1").unwrap();
        let b = parse_network("species: A B\nA -> B @ 1").unwrap();
        let u = vec![StateVector::new(vec![1])];
        assert!(distance_intensity(&a, &b, &u).is_err());
        assert!(distance_intensity(&a, &a, &[]).is_err());
    }
}
