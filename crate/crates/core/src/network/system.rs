//! Reactions, reaction systems and their mass-action intensities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::rate::Rate;
use super::vector::{falling_factorial_unchecked, ComplexVector, StateVector, TransitionVector};
use super::ConservationVector;
use crate::error::{CoreError, Result};

/// A reaction `source -> target` with mass-action rate constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    source: ComplexVector,
    target: ComplexVector,
    rate: Rate,
    transition: TransitionVector,
}

impl Reaction {
    pub fn new(source: ComplexVector, target: ComplexVector, rate: Rate) -> Result<Self> {
        if source.dim() != target.dim() {
            return Err(CoreError::DimensionMismatch { expected: source.dim(), found: target.dim() }.into());
        }
        if !rate.is_positive() || !rate.is_finite() {
            return Err(CoreError::NonPositiveRate(rate.to_string()).into());
        }
        let transition = TransitionVector::between(&source, &target)
            .ok_or_else(|| CoreError::SourceEqualsTarget(source.to_string()))?;
        Ok(Reaction { source, target, rate, transition })
    }

    pub fn source(&self) -> &ComplexVector {
        &self.source
    }

    pub fn target(&self) -> &ComplexVector {
        &self.target
    }

    pub fn rate(&self) -> &Rate {
        &self.rate
    }

    pub fn transition(&self) -> &TransitionVector {
        &self.transition
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// `||source||_1`.
    pub fn order(&self) -> u64 {
        self.source.l1_norm()
    }

    pub fn v_order(&self, v: &ConservationVector) -> Result<u64> {
        check_dim(v.dim(), self.dim())?;
        Ok(self.source.as_state().dot(v.weights()))
    }

    /// `kappa * x^(source)`. Positive exactly when `x >= source`.
    pub fn intensity(&self, x: &StateVector) -> Result<Rate> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.intensity_unchecked(x))
    }

    pub(crate) fn intensity_unchecked(&self, x: &StateVector) -> Rate {
        let ff = falling_factorial_unchecked(x.counts(), self.source.coeffs());
        if ff == num_bigint::BigUint::ZERO {
            return Rate::zero();
        }
        self.rate.scale(&ff)
    }

    fn key(&self) -> (&ComplexVector, &ComplexVector) {
        (&self.source, &self.target)
    }
}

/// A finite set of reactions over `d` named species.
///
/// Reactions are kept sorted by `(source, target)` in lexicographic order;
/// that order is also the scan order used by the simulator.
#[derive(Clone, Debug)]
pub struct ReactionSystem {
    species: Vec<String>,
    reactions: Vec<Reaction>,
}

pub fn default_species_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("X{i}")).collect()
}

impl ReactionSystem {
    pub fn new(species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self> {
        if species.is_empty() {
            return Err(CoreError::ZeroDimension.into());
        }
        let dim = species.len();
        let mut reactions = reactions;
        for r in &reactions {
            check_dim(dim, r.dim())?;
        }
        reactions.sort_by(|a, b| a.key().cmp(&b.key()));
        for pair in reactions.windows(2) {
            if pair[0].key() == pair[1].key() {
                return Err(CoreError::DuplicateReaction {
                    from: pair[0].source.to_string(),
                    to: pair[0].target.to_string(),
                }
                .into());
            }
        }
        Ok(ReactionSystem { species, reactions })
    }

    /// A system whose species are named `X1 .. Xd`.
    pub fn with_dimension(dim: usize, reactions: Vec<Reaction>) -> Result<Self> {
        Self::new(default_species_names(dim), reactions)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::with_dimension(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.species.len()
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn len(&self) -> usize {
        self.reactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reactions.is_empty()
    }

    /// Same reactions under different species labels.
    pub fn with_species(mut self, species: Vec<String>) -> Result<Self> {
        check_dim(self.dim(), species.len())?;
        self.species = species;
        Ok(self)
    }

    /// Maximum reaction order; 0 for an empty system.
    pub fn order(&self) -> u64 {
        self.reactions.iter().map(Reaction::order).max().unwrap_or(0)
    }

    pub fn v_order(&self, v: &ConservationVector) -> Result<u64> {
        check_dim(self.dim(), v.dim())?;
        Ok(self.reactions.iter().map(|r| r.source.as_state().dot(v.weights())).max().unwrap_or(0))
    }

    pub fn transition_vectors(&self) -> BTreeSet<TransitionVector> {
        self.reactions.iter().map(|r| r.transition.clone()).collect()
    }

    /// Reactions grouped by their transition vector.
    pub fn by_transition(&self) -> BTreeMap<TransitionVector, Vec<&Reaction>> {
        let mut map: BTreeMap<TransitionVector, Vec<&Reaction>> = BTreeMap::new();
        for r in &self.reactions {
            map.entry(r.transition.clone()).or_default().push(r);
        }
        map
    }

    /// Sum of intensities of the reactions with `target - source = z`.
    pub fn transition_rate(&self, z: &TransitionVector, x: &StateVector) -> Result<Rate> {
        check_dim(self.dim(), z.dim())?;
        check_dim(self.dim(), x.dim())?;
        Ok(self
            .reactions
            .iter()
            .filter(|r| &r.transition == z)
            .map(|r| r.intensity_unchecked(x))
            .sum())
    }

    /// Total intensity out of `x`.
    pub fn total_rate(&self, x: &StateVector) -> Result<Rate> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.reactions.iter().map(|r| r.intensity_unchecked(x)).sum())
    }

    /// Reactions of order at most `max_order`.
    pub fn restrict_order(&self, max_order: u64) -> ReactionSystem {
        ReactionSystem {
            species: self.species.clone(),
            reactions: self.reactions.iter().filter(|r| r.order() <= max_order).cloned().collect(),
        }
    }

    fn find(&self, source: &ComplexVector, target: &ComplexVector) -> Option<&Reaction> {
        self.reactions
            .binary_search_by(|r| r.key().cmp(&(source, target)))
            .ok()
            .map(|i| &self.reactions[i])
    }
}

impl PartialEq for ReactionSystem {
    /// Equality of reaction sets and rate constants; species labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.reactions == other.reactions
    }
}

/// Every reaction of `a` appears in `b` with an equal rate constant.
pub fn is_subsystem(a: &ReactionSystem, b: &ReactionSystem) -> Result<bool> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.reactions.iter().all(|r| b.find(&r.source, &r.target).is_some_and(|s| s.rate == r.rate)))
}

pub fn systems_equal(a: &ReactionSystem, b: &ReactionSystem) -> Result<bool> {
    Ok(is_subsystem(a, b)? && is_subsystem(b, a)?)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(CoreError::DimensionMismatch { expected, found }.into());
    }
    Ok(())
}

impl fmt::Display for ReactionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format::write_network(self))
    }
}
