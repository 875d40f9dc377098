#![allow(dead_code)]

use proptest::prelude::*;

use crnkit::network::{ComplexVector, ConservationVector, Rate, Reaction, ReactionSystem};

/// A complex with `d` species and at most `max_norm` molecules.
pub fn complex(d: usize, max_norm: u64) -> impl Strategy<Value = ComplexVector> {
    prop::collection::vec(0..=max_norm, d)
        .prop_filter("norm bound", move |c| c.iter().sum::<u64>() <= max_norm)
        .prop_map(ComplexVector::new)
}

/// Rate constants in {1/4, 2/4, ..., 16/4}.
pub fn quarter_rate() -> impl Strategy<Value = Rate> {
    (1i64..=16).prop_map(|k| Rate::ratio(k, 4))
}

fn build(d: usize, raw: Vec<(ComplexVector, ComplexVector, Rate)>) -> ReactionSystem {
    let mut seen = std::collections::BTreeSet::new();
    let reactions = raw
        .into_iter()
        .filter(|(s, t, _)| s != t && seen.insert((s.clone(), t.clone())))
        .map(|(s, t, k)| Reaction::new(s, t, k).unwrap())
        .collect();
    ReactionSystem::with_dimension(d, reactions).unwrap()
}

/// Random systems with `d` species, sources of norm at most `order` and
/// targets of norm at most 3.
pub fn system_of(d: usize, order: u64, max_reactions: usize) -> impl Strategy<Value = ReactionSystem> {
    prop::collection::vec((complex(d, order), complex(d, 3), quarter_rate()), 1..=max_reactions)
        .prop_map(move |raw| build(d, raw))
        .prop_filter("at least one reaction", |s| !s.is_empty())
}

/// `(system, N)` with `d <= 3`, `N <= 3` and system order at most `N`.
pub fn system_up_to_order() -> impl Strategy<Value = (ReactionSystem, u64)> {
    (1usize..=3, 0u64..=3).prop_flat_map(|(d, n)| system_of(d, n, 5).prop_map(move |s| (s, n)))
}

/// Systems whose reactions all preserve `v . x`.
pub fn conserving_system() -> impl Strategy<Value = (ReactionSystem, ConservationVector)> {
    (2usize..=3)
        .prop_flat_map(|d| (Just(d), prop::collection::vec(1u64..=2, d)))
        .prop_flat_map(|(d, v)| {
            let weights = v.clone();
            let pairs = prop::collection::vec((complex(d, 3), complex(d, 3), quarter_rate()), 1..=12).prop_map(
                move |raw| {
                    let dot = |c: &ComplexVector| c.coeffs().iter().zip(&weights).map(|(a, b)| a * b).sum::<u64>();
                    raw.into_iter().filter(|(s, t, _)| dot(s) == dot(t)).collect::<Vec<_>>()
                },
            );
            (Just(d), Just(v), pairs)
        })
        .prop_map(|(d, v, raw)| (build(d, raw), ConservationVector::new(v).unwrap()))
        .prop_filter("at least one reaction", |(s, _)| !s.is_empty())
}

/// Brute-force simplex: all vectors in `0..=n` per coordinate with norm at most `n`.
pub fn brute_force_simplex(d: usize, n: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<u64>| {
                (0..=n).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out.retain(|x| x.iter().sum::<u64>() <= n);
    out
}
