//! Gillespie direct method.

use rayon::prelude::*;

use super::rng::{derive_stream_seed, StreamRng};
use super::trajectory::{Termination, Trajectory};
use crate::error::{CoreError, Result, SimError};
use crate::network::{falling_factorial_f64, ReactionSystem, StateVector};

pub const DEFAULT_MAX_JUMPS: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct SimOptions {
    pub t_end: f64,
    /// Stop after this many recorded jumps.
    pub stop_after_jumps: Option<u64>,
    /// Hard guard against runaway systems; exceeding it is an error.
    pub max_jumps: u64,
}

impl SimOptions {
    pub fn until(t_end: f64) -> Self {
        SimOptions { t_end, stop_after_jumps: None, max_jumps: DEFAULT_MAX_JUMPS }
    }

    pub fn jumps(n: u64) -> Self {
        SimOptions { t_end: f64::INFINITY, stop_after_jumps: Some(n), max_jumps: DEFAULT_MAX_JUMPS }
    }

    fn validate(&self) -> Result<()> {
        let bounded_time = self.t_end > 0.0 && !self.t_end.is_nan();
        let has_stop = self.t_end.is_finite() || self.stop_after_jumps.is_some();
        if !bounded_time || !has_stop {
            return Err(SimError::InvalidHorizon(self.t_end).into());
        }
        Ok(())
    }
}

struct CompiledReaction {
    /// Source complex restricted to its nonzero coefficients.
    species: Vec<usize>,
    coeffs: Vec<u64>,
    delta: Vec<(usize, i64)>,
    rate: f64,
}

/// A reaction system lowered to `f64` rates for fast repeated simulation.
pub struct Simulator {
    dim: usize,
    reactions: Vec<CompiledReaction>,
    /// For each reaction, the reactions whose intensity its firing can change.
    affects: Vec<Vec<usize>>,
}

impl Simulator {
    pub fn new(sys: &ReactionSystem) -> Result<Self> {
        if sys.is_empty() {
            return Err(SimError::EmptySystem.into());
        }
        let reactions = sys
            .reactions()
            .iter()
            .map(|r| {
                let (species, coeffs) = r
                    .source()
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(i, &c)| (i, c))
                    .unzip();
                let delta = r
                    .transition()
                    .deltas()
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(i, &d)| (i, d))
                    .collect();
                CompiledReaction { species, coeffs, delta, rate: r.rate().to_f64() }
            })
            .collect::<Vec<CompiledReaction>>();
        let affects = reactions
            .iter()
            .map(|fired| {
                (0..reactions.len())
                    .filter(|&j| reactions[j].species.iter().any(|s| fired.delta.iter().any(|(i, _)| i == s)))
                    .collect()
            })
            .collect();
        Ok(Simulator { dim: sys.dim(), reactions, affects })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn intensity(r: &CompiledReaction, x: &[u64]) -> f64 {
        let mut value = r.rate;
        for (&i, &c) in r.species.iter().zip(&r.coeffs) {
            let f = falling_factorial_f64(&x[i..=i], &[c]);
            if f == 0.0 {
                return 0.0;
            }
            value *= f;
        }
        value
    }

    /// Simulates one path. Each jump consumes two uniforms: one for the
    /// exponential holding time, one for the cumulative-intensity scan.
    pub fn run(&self, x0: &StateVector, opts: &SimOptions, seed: u64, id: u64) -> Result<Trajectory> {
        self.run_with(x0, opts, seed, id, |_, _| {})
    }

    /// Like [`Simulator::run`], calling `on_jump(time, new_state)` after each jump.
    pub fn run_with(
        &self,
        x0: &StateVector,
        opts: &SimOptions,
        seed: u64,
        id: u64,
        mut on_jump: impl FnMut(f64, &[u64]),
    ) -> Result<Trajectory> {
        let mut traj = Trajectory::start(id, x0.counts());
        let (end, termination) = self.run_streaming(x0, opts, seed, |t, x, _| {
            traj.push(t, x);
            on_jump(t, x);
        })?;
        traj.finish(end, termination);
        Ok(traj)
    }

    /// The jump sequence of [`Simulator::run`] without storing it. Calls
    /// `on_jump(time, new_state, reaction)` with the index of the reaction
    /// that fired (in the system's sorted order). Returns the end of the
    /// observation window and why the path stopped.
    pub fn run_streaming(
        &self,
        x0: &StateVector,
        opts: &SimOptions,
        seed: u64,
        mut on_jump: impl FnMut(f64, &[u64], usize),
    ) -> Result<(f64, Termination)> {
        opts.validate()?;
        if x0.dim() != self.dim {
            return Err(CoreError::DimensionMismatch { expected: self.dim, found: x0.dim() }.into());
        }
        let mut rng = StreamRng::new(seed);
        let mut x = x0.counts().to_vec();
        let mut props: Vec<f64> = self.reactions.iter().map(|r| Self::intensity(r, &x)).collect();
        let mut t = 0.0;
        let mut jumps = 0u64;

        loop {
            if opts.stop_after_jumps.is_some_and(|limit| jumps >= limit) {
                return Ok((t, Termination::JumpBudget));
            }
            let total: f64 = props.iter().sum();
            if total <= 0.0 {
                return Ok((opts.t_end, Termination::Absorbed));
            }
            let dt = -rng.next_open_f64().ln() / total;
            let target = rng.next_f64() * total;
            if t + dt > opts.t_end {
                return Ok((opts.t_end, Termination::Horizon));
            }
            if jumps >= opts.max_jumps {
                return Err(SimError::JumpCapExceeded { cap: opts.max_jumps }.into());
            }
            t += dt;

            let mut chosen = props.len() - 1;
            let mut acc = 0.0;
            for (j, &p) in props.iter().enumerate() {
                acc += p;
                if target < acc {
                    chosen = j;
                    break;
                }
            }
            // Rounding can leave `target` at the very top of the scan; never pick a reaction that is off.
            while props[chosen] == 0.0 {
                chosen -= 1;
            }
            for &(i, d) in &self.reactions[chosen].delta {
                x[i] = x[i]
                    .checked_add_signed(d)
                    .expect("mass-action kinetics cannot drive a count negative");
            }
            for &j in &self.affects[chosen] {
                props[j] = Self::intensity(&self.reactions[j], &x);
            }
            jumps += 1;
            on_jump(t, &x, chosen);
        }
    }
}

/// Simulates one trajectory (id 0).
pub fn simulate(
    sys: &ReactionSystem,
    x0: &StateVector,
    t_end: f64,
    seed: u64,
    stop_after_jumps: Option<u64>,
) -> Result<Trajectory> {
    let opts = SimOptions { t_end, stop_after_jumps, max_jumps: DEFAULT_MAX_JUMPS };
    Simulator::new(sys)?.run(x0, &opts, seed, 0)
}

/// `n` independent trajectories; realization `i` uses `derive_stream_seed(base_seed, i)`
/// and carries id `i`. Runs in parallel; the result does not depend on scheduling.
pub fn simulate_ensemble(
    sys: &ReactionSystem,
    x0: &StateVector,
    opts: &SimOptions,
    n: u64,
    base_seed: u64,
) -> Result<Vec<Trajectory>> {
    if n == 0 {
        return Err(SimError::EmptyEnsemble.into());
    }
    let sim = Simulator::new(sys)?;
    (0..n)
        .into_par_iter()
        .map(|i| sim.run(x0, opts, derive_stream_seed(base_seed, i), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;

    #[test]
    fn absorbed_without_jumps() {
        let sys = parse_network("species: A\nA -> 0 @ 1").unwrap();
        let traj = simulate(&sys, &StateVector::new(vec![0]), 10.0, 1, None).unwrap();
        assert_eq!(traj.n_jumps(), 0);
        assert!(traj.is_absorbed());
        assert_eq!(traj.state_at(1e6), Some(&[0][..]));
    }

    #[test]
    fn decay_is_absorbed_after_initial_molecules() {
        let sys = parse_network("species: A\nA -> 0 @ 1").unwrap();
        let traj = simulate(&sys, &StateVector::new(vec![5]), 1e9, 3, None).unwrap();
        assert_eq!(traj.n_jumps(), 5);
        assert_eq!(traj.final_state().counts(), &[0]);
    }

    #[test]
    fn conservation_holds_along_path() {
        let sys = parse_network("species: A B\nA -> B @ 1\nB -> A @ 1").unwrap();
        let traj = simulate(&sys, &StateVector::new(vec![2, 0]), 50.0, 11, None).unwrap();
        assert!(traj.n_jumps() > 10);
        assert!(traj.records().all(|(_, x)| x[0] + x[1] == 2));
    }

    #[test]
    fn jump_budget_and_guard() {
        let sys = parse_network("species: A\n0 -> A @ 1").unwrap();
        let x0 = StateVector::new(vec![0]);
        let traj = simulate(&sys, &x0, f64::INFINITY, 1, Some(7)).unwrap();
        assert_eq!(traj.n_jumps(), 7);
        let opts = SimOptions { t_end: 1e9, stop_after_jumps: None, max_jumps: 10 };
        let err = Simulator::new(&sys).unwrap().run(&x0, &opts, 1, 0).unwrap_err();
        assert!(matches!(err, crate::Error::Sim(SimError::JumpCapExceeded { cap: 10 })));
    }

    #[test]
    fn invalid_inputs() {
        let sys = parse_network("species: A\n0 -> A @ 1").unwrap();
        let x0 = StateVector::new(vec![0]);
        assert!(simulate(&sys, &x0, 0.0, 1, None).is_err());
        assert!(simulate(&sys, &x0, f64::INFINITY, 1, None).is_err());
        assert!(simulate(&sys, &StateVector::new(vec![0, 0]), 1.0, 1, None).is_err());
        let empty = crate::network::ReactionSystem::empty(1).unwrap();
        assert!(simulate(&empty, &x0, 1.0, 1, None).is_err());
    }

    #[test]
    fn ensemble_singleton_matches_derived_seed() {
        let sys = parse_network("species: A\n0 -> A @ 1\nA -> 0 @ 1").unwrap();
        let x0 = StateVector::new(vec![0]);
        let ens = simulate_ensemble(&sys, &x0, &SimOptions::until(5.0), 1, 99).unwrap();
        let single = simulate(&sys, &x0, 5.0, derive_stream_seed(99, 0), None).unwrap();
        assert_eq!(ens[0], single);
        assert!(simulate_ensemble(&sys, &x0, &SimOptions::until(5.0), 0, 99).is_err());
    }
}
