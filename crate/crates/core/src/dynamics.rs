//! Serial and parallel update modes.

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::structure::realify;
use crate::types::{sign_real, split_sign, Network, RealMatrix, StateVector};

/// Visit order for serial sweeps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScanOrder {
    /// `0, 1, …, n−1` every sweep.
    Cyclic,
    /// A fresh seeded permutation for every sweep.
    RandomPermutationPerSweep { seed: u64 },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UpdateMode {
    Parallel,
    Serial(ScanOrder),
}

/// Consecutive states related by one application of the mode's step:
/// a full synchronous update for [`UpdateMode::Parallel`], a single neuron
/// update for [`UpdateMode::Serial`].
#[derive(Clone, PartialEq, Debug)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub mode: UpdateMode,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &StateVector {
        self.states.last().expect("trajectory holds its initial state")
    }
}

fn check_len(net: &Network, s: &StateVector) -> Result<()> {
    if s.len() != net.n() {
        return Err(Error::DimensionMismatch { expected: net.n(), got: s.len() });
    }
    Ok(())
}

/// Synchronous update of every neuron from the same input state.
pub fn step_parallel(net: &Network, s: &StateVector) -> Result<StateVector> {
    check_len(net, s)?;
    let comps = s.components();
    let next = (0..net.n()).map(|i| split_sign(net.field_unchecked(comps, i))).collect::<Result<Vec<_>>>()?;
    StateVector::new(next)
}

/// Updates neuron `i` only.
pub fn step_serial(net: &Network, s: &StateVector, i: usize) -> Result<StateVector> {
    let mut next = s.clone();
    update_in_place(net, &mut next, i)?;
    Ok(next)
}

/// Returns whether the component changed.
fn update_in_place(net: &Network, s: &mut StateVector, i: usize) -> Result<bool> {
    let field = net.local_field(s, i)?;
    let q = split_sign(field)?;
    let changed = q != s.get(i);
    s.set(i, q);
    Ok(changed)
}

fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidPermutation { n });
    }
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPermutation { n });
        }
    }
    Ok(())
}

/// Applies [`step_serial`] once per neuron in `order`, threading the state.
pub fn sweep_serial(net: &Network, s: &StateVector, order: &[usize]) -> Result<(StateVector, bool)> {
    check_len(net, s)?;
    check_permutation(order, net.n())?;
    let mut state = s.clone();
    let mut changed = false;
    for &i in order {
        changed |= update_in_place(net, &mut state, i)?;
    }
    Ok((state, changed))
}

/// Iterates [`step_parallel`] for `max_steps` steps, recording every state.
pub fn run_parallel(net: &Network, s0: &StateVector, max_steps: usize) -> Result<Trajectory> {
    if max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    check_len(net, s0)?;
    let mut states = Vec::with_capacity(max_steps + 1);
    states.push(s0.clone());
    for _ in 0..max_steps {
        let next = step_parallel(net, states.last().unwrap())?;
        states.push(next);
    }
    Ok(Trajectory { states, mode: UpdateMode::Parallel })
}

struct SweepOrders {
    order: ScanOrder,
    n: usize,
    rng: Option<SeededRng>,
    cyclic: Vec<usize>,
}

impl SweepOrders {
    fn new(order: ScanOrder, n: usize) -> Self {
        let rng = match order {
            ScanOrder::Cyclic => None,
            ScanOrder::RandomPermutationPerSweep { seed } => Some(SeededRng::new(seed, 0)),
        };
        SweepOrders { order, n, rng, cyclic: (0..n).collect() }
    }

    fn next(&mut self) -> Vec<usize> {
        match (self.order, self.rng.as_mut()) {
            (ScanOrder::RandomPermutationPerSweep { .. }, Some(rng)) => rng.permutation(self.n),
            _ => self.cyclic.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SerialOutcome {
    pub state: StateVector,
    pub sweeps_used: usize,
    pub converged: bool,
}

/// Sweeps until a sweep changes nothing or `max_sweeps` is exhausted.
///
/// The sweep that detects convergence is counted, so starting at a stable
/// state reports one sweep.
pub fn run_serial_to_fixpoint(
    net: &Network,
    s0: &StateVector,
    order: ScanOrder,
    max_sweeps: usize,
) -> Result<SerialOutcome> {
    if max_sweeps == 0 {
        return Err(Error::InvalidArgument("max_sweeps must be at least 1".into()));
    }
    check_len(net, s0)?;
    let mut orders = SweepOrders::new(order, net.n());
    let mut state = s0.clone();
    for sweep in 1..=max_sweeps {
        let (next, changed) = sweep_serial(net, &state, &orders.next())?;
        state = next;
        if !changed {
            return Ok(SerialOutcome { state, sweeps_used: sweep, converged: true });
        }
    }
    Ok(SerialOutcome { state, sweeps_used: max_sweeps, converged: false })
}

/// Like [`run_serial_to_fixpoint`] but records the state after every single
/// neuron update, for energy audits.
pub fn run_serial(net: &Network, s0: &StateVector, order: ScanOrder, max_sweeps: usize) -> Result<Trajectory> {
    check_len(net, s0)?;
    let mut orders = SweepOrders::new(order, net.n());
    let mut states = vec![s0.clone()];
    for _ in 0..max_sweeps {
        let mut changed = false;
        for i in orders.next() {
            let mut next = states.last().unwrap().clone();
            changed |= update_in_place(net, &mut next, i)?;
            states.push(next);
        }
        if !changed {
            break;
        }
    }
    Ok(Trajectory { states, mode: UpdateMode::Serial(order) })
}

/// Real-valued network `x ↦ sign(W x − θ)` obtained by stacking real and
/// imaginary parts.
#[derive(Clone, PartialEq, Debug)]
pub struct RealNetwork {
    pub weights: RealMatrix,
    pub thresholds: Vec<f64>,
}

impl RealNetwork {
    /// `W = [[A, −B], [B, A]]`, `θ = [Re T; Im T]`.
    pub fn realify(net: &Network) -> Self {
        let thresholds = net.thresholds().iter().map(|t| t.re).chain(net.thresholds().iter().map(|t| t.im)).collect();
        RealNetwork { weights: realify(net.weights()), thresholds }
    }

    pub fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.weights.n() {
            return Err(Error::DimensionMismatch { expected: self.weights.n(), got: x.len() });
        }
        (0..x.len())
            .map(|i| {
                let mut acc = 0.0;
                for (w, xj) in self.weights.row(i).iter().zip(x) {
                    acc += w * xj;
                }
                sign_real(acc - self.thresholds[i]).map(f64::from)
            })
            .collect()
    }
}
