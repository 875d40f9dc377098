//! Identifiability verdicts for a system confined to a given state space.

use std::collections::BTreeSet;
use std::fmt;

use super::hyperplane::infer_on_hyperplane;
use super::rate_table::RateTable;
use crate::error::{CoreError, InferError, Result};
use crate::network::{
    enumerate_hyperplane, enumerate_simplex, systems_equal, ConservationVector, ReactionSystem, StateVector,
};

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpace {
    FullLattice,
    /// `||x||_1 <= N`.
    Simplex(u64),
    /// `v . x = N`.
    Hyperplane(ConservationVector, u64),
    /// An explicit finite set of states.
    States(Vec<StateVector>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictReason {
    SimplexCovered,
    HyperplaneConfined,
    InsufficientData,
}

impl fmt::Display for VerdictReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictReason::SimplexCovered => "simplex-covered",
            VerdictReason::HyperplaneConfined => "hyperplane-confined",
            VerdictReason::InsufficientData => "insufficient-data",
        })
    }
}

#[derive(Clone, Debug)]
pub struct IdentifiabilityVerdict {
    pub identifiable: bool,
    pub reason: VerdictReason,
    /// A different system with identical transition rates on the state space.
    pub witness: Option<ReactionSystem>,
}

/// Whether `sys` is the only system producing its transition rates on `space`.
///
/// * Full lattice, or a simplex `S_N'` with `N'` at least the system order:
///   identifiable.
/// * Simplex `S_N'` below the system order: reactions of order above `N'` are
///   never charged there, so the order-`N'` part of the system is a witness.
/// * Hyperplane `S_{v,N'}`: the single-state construction applied to the
///   system's own rates yields a candidate. The system is identifiable exactly
///   when that candidate equals it; otherwise the candidate is the witness.
/// * Explicit states: identifiable when they include `S_N`; otherwise
///   insufficient data, without a witness.
///
/// Every witness is checked to reproduce the rates and differ from `sys`.
pub fn check_identifiability(sys: &ReactionSystem, space: &StateSpace) -> Result<IdentifiabilityVerdict> {
    let order = sys.order();
    match space {
        StateSpace::FullLattice => Ok(identifiable(VerdictReason::SimplexCovered)),
        StateSpace::Simplex(level) if *level >= order => Ok(identifiable(VerdictReason::SimplexCovered)),
        StateSpace::Simplex(level) => {
            let witness = sys.restrict_order(*level);
            let states = enumerate_simplex(sys.dim(), *level)?;
            verify_witness(sys, &witness, &states)?;
            Ok(IdentifiabilityVerdict {
                identifiable: false,
                reason: VerdictReason::InsufficientData,
                witness: Some(witness),
            })
        }
        StateSpace::Hyperplane(v, level) => {
            v.certify(sys)?;
            let states = enumerate_hyperplane(v, *level)?;
            let rates = RateTable::from_system(sys, &states)?;
            let candidate = infer_on_hyperplane(&rates, v, *level)?.with_species(sys.species().to_vec())?;
            if systems_equal(&candidate, sys)? {
                return Ok(identifiable(VerdictReason::HyperplaneConfined));
            }
            verify_witness(sys, &candidate, &states)?;
            Ok(IdentifiabilityVerdict {
                identifiable: false,
                reason: VerdictReason::HyperplaneConfined,
                witness: Some(candidate),
            })
        }
        StateSpace::States(list) => {
            for x in list {
                if x.dim() != sys.dim() {
                    return Err(CoreError::DimensionMismatch { expected: sys.dim(), found: x.dim() }.into());
                }
            }
            let have: BTreeSet<&StateVector> = list.iter().collect();
            let needed = enumerate_simplex(sys.dim(), order)?;
            if needed.iter().all(|x| have.contains(x)) {
                Ok(identifiable(VerdictReason::SimplexCovered))
            } else {
                Ok(IdentifiabilityVerdict { identifiable: false, reason: VerdictReason::InsufficientData, witness: None })
            }
        }
    }
}

fn identifiable(reason: VerdictReason) -> IdentifiabilityVerdict {
    IdentifiabilityVerdict { identifiable: true, reason, witness: None }
}

fn verify_witness(sys: &ReactionSystem, witness: &ReactionSystem, states: &[StateVector]) -> Result<()> {
    if !systems_agree_on(sys, witness, states)? {
        return Err(InferError::WitnessCheckFailed("rates differ on the state space".into()).into());
    }
    if systems_equal(sys, witness)? {
        return Err(InferError::WitnessCheckFailed("witness equals the system".into()).into());
    }
    Ok(())
}

/// Equal transition rates for every transition vector of either system at every listed state.
pub fn systems_agree_on(a: &ReactionSystem, b: &ReactionSystem, states: &[StateVector]) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(CoreError::DimensionMismatch { expected: a.dim(), found: b.dim() }.into());
    }
    let zs: BTreeSet<_> = a.transition_vectors().union(&b.transition_vectors()).cloned().collect();
    for z in &zs {
        for x in states {
            if a.transition_rate(z, x)? != b.transition_rate(z, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;

    fn v11() -> ConservationVector {
        ConservationVector::new(vec![1, 1]).unwrap()
    }

    fn isomerization() -> ReactionSystem {
        parse_network("species: X1 X2\nX1 -> X2 @ 1\nX2 -> X1 @ 1").unwrap()
    }

    fn ladder() -> ReactionSystem {
        parse_network(
            "species: X1 X2\n2*X1 -> X1 + X2 @ 1\nX1 + X2 -> 2*X1 @ 1\nX1 + X2 -> 2*X2 @ 1\n2*X2 -> X1 + X2 @ 1",
        )
        .unwrap()
    }

    #[test]
    fn hyperplane_witness_for_isomerization() {
        let verdict = check_identifiability(&isomerization(), &StateSpace::Hyperplane(v11(), 2)).unwrap();
        assert!(!verdict.identifiable);
        assert_eq!(verdict.reason, VerdictReason::HyperplaneConfined);
        assert!(systems_equal(verdict.witness.as_ref().unwrap(), &ladder()).unwrap());
    }

    #[test]
    fn agreement_depends_on_level() {
        let s2 = enumerate_hyperplane(&v11(), 2).unwrap();
        let s4 = enumerate_hyperplane(&v11(), 4).unwrap();
        assert!(systems_agree_on(&isomerization(), &ladder(), &s2).unwrap());
        assert!(!systems_agree_on(&isomerization(), &ladder(), &s4).unwrap());
        assert!(systems_agree_on(&ladder(), &ladder(), &s4).unwrap());
    }

    #[test]
    fn same_v_order_is_identifiable() {
        let sys = parse_network("species: X1 X2\n2*X1 -> 2*X2 @ 1\n2*X2 -> 2*X1 @ 3").unwrap();
        let verdict = check_identifiability(&sys, &StateSpace::Hyperplane(v11(), 2)).unwrap();
        assert!(verdict.identifiable);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn unverified_conservation() {
        let sys = parse_network("species: X1 X2\n0 -> X1 @ 1").unwrap();
        let err = check_identifiability(&sys, &StateSpace::Hyperplane(v11(), 2)).unwrap_err();
        assert!(matches!(err, crate::Error::Infer(InferError::UnverifiedConservation { .. })));
    }

    #[test]
    fn simplex_cases() {
        let sys = parse_network("species: X1 X2\n0 -> X1 @ 1\n2*X1 + X2 -> 0 @ 1").unwrap();
        assert!(check_identifiability(&sys, &StateSpace::Simplex(3)).unwrap().identifiable);
        assert!(check_identifiability(&sys, &StateSpace::FullLattice).unwrap().identifiable);
        let low = check_identifiability(&sys, &StateSpace::Simplex(2)).unwrap();
        assert!(!low.identifiable);
        assert_eq!(low.reason, VerdictReason::InsufficientData);
        assert_eq!(low.witness.unwrap().len(), 1);
    }

    #[test]
    fn explicit_states() {
        let sys = parse_network("species: X1\nX1 -> 0 @ 1").unwrap();
        let states = |v: &[u64]| v.iter().map(|&x| StateVector::new(vec![x])).collect::<Vec<_>>();
        assert!(check_identifiability(&sys, &StateSpace::States(states(&[0, 1, 5]))).unwrap().identifiable);
        let partial = check_identifiability(&sys, &StateSpace::States(states(&[1, 5]))).unwrap();
        assert!(!partial.identifiable);
        assert!(partial.witness.is_none());
    }
}
