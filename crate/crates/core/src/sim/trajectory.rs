use crate::network::{StateVector, TransitionVector};

/// Why recording stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Reached the requested end time.
    Horizon,
    /// Recorded the requested number of jumps.
    JumpBudget,
    /// Total intensity vanished; the state is held forever.
    Absorbed,
    /// Loaded from a file; nothing is known past the last record.
    Recorded,
}

/// One sample path: the initial state at `t = 0` followed by one record per jump.
///
/// States are stored flat (`dim` counts per record).
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    id: u64,
    dim: usize,
    times: Vec<f64>,
    states: Vec<u64>,
    horizon: f64,
    termination: Termination,
}

impl Trajectory {
    pub(crate) fn start(id: u64, initial: &[u64]) -> Self {
        Trajectory {
            id,
            dim: initial.len(),
            times: vec![0.0],
            states: initial.to_vec(),
            horizon: 0.0,
            termination: Termination::Horizon,
        }
    }

    pub(crate) fn push(&mut self, t: f64, state: &[u64]) {
        debug_assert_eq!(state.len(), self.dim);
        self.times.push(t);
        self.states.extend_from_slice(state);
    }

    pub(crate) fn finish(&mut self, horizon: f64, termination: Termination) {
        self.horizon = horizon;
        self.termination = termination;
    }

    /// Builds a trajectory from explicit records; the first must be at `t = 0`.
    pub fn from_records(id: u64, records: Vec<(f64, StateVector)>) -> Result<Self, String> {
        let mut iter = records.into_iter();
        let (t0, x0) = iter.next().ok_or("trajectory has no records")?;
        if t0 != 0.0 {
            return Err(format!("trajectory {id} starts at t = {t0}, expected 0"));
        }
        let mut traj = Trajectory::start(id, x0.counts());
        for (t, x) in iter {
            if x.dim() != traj.dim {
                return Err(format!("trajectory {id}: inconsistent dimension at t = {t}"));
            }
            if t.is_nan() || t <= *traj.times.last().unwrap() {
                return Err(format!("trajectory {id}: jump times must be strictly increasing (t = {t})"));
            }
            traj.push(t, x.counts());
        }
        let last = *traj.times.last().unwrap();
        traj.finish(last, Termination::Recorded);
        Ok(traj)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn is_absorbed(&self) -> bool {
        self.termination == Termination::Absorbed
    }

    /// Number of records, including the initial state.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn n_jumps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn state(&self, k: usize) -> &[u64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn initial_state(&self) -> StateVector {
        StateVector::new(self.state(0).to_vec())
    }

    pub fn final_state(&self) -> StateVector {
        StateVector::new(self.state(self.len() - 1).to_vec())
    }

    /// `(time, state)` for every record.
    pub fn records(&self) -> impl Iterator<Item = (f64, &[u64])> + '_ {
        self.times.iter().copied().zip(self.states.chunks_exact(self.dim))
    }

    /// Latest time at which the state is known.
    pub fn observed_until(&self) -> f64 {
        match self.termination {
            Termination::Absorbed => f64::INFINITY,
            Termination::Horizon => self.horizon,
            Termination::JumpBudget | Termination::Recorded => *self.times.last().unwrap(),
        }
    }

    /// State held at time `t` (the one entered by the last jump at or before `t`).
    pub fn state_at(&self, t: f64) -> Option<&[u64]> {
        if !(0.0..=self.observed_until()).contains(&t) {
            return None;
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        Some(self.state(k))
    }

    /// Net change of the jump into record `k + 1`.
    pub fn jump_vector(&self, k: usize) -> Option<TransitionVector> {
        let (a, b) = (self.state(k), self.state(k + 1));
        TransitionVector::new(a.iter().zip(b).map(|(&x, &y)| y as i64 - x as i64).collect()).ok()
    }
}
