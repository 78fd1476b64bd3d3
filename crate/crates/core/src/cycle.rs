//! Eventual-cycle detection for parallel-mode orbits.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::dynamics::{step_parallel, Trajectory};
use crate::error::{Error, Result};
use crate::types::{Network, StateVector};

/// Transient length and period of one orbit. `period == None` means the
/// cap was reached before the orbit closed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleReport {
    pub period: Option<u64>,
    pub transient: u64,
    pub steps_executed: u64,
}

impl CycleReport {
    fn unresolved(cap: u64) -> Self {
        CycleReport { period: None, transient: 0, steps_executed: cap }
    }

    pub fn is_resolved(&self) -> bool {
        self.period.is_some()
    }
}

/// Which detector to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Brent,
    Hashed,
}

impl Engine {
    pub fn detect(self, net: &Network, s0: &StateVector, cap: u64) -> Result<CycleReport> {
        match self {
            Engine::Brent => detect_cycle_brent(net, s0, cap),
            Engine::Hashed => detect_cycle_hashed(net, s0, cap),
        }
    }
}

fn check_cap(cap: u64) -> Result<()> {
    if cap == 0 {
        Err(Error::InvalidArgument("cap must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Remembers every visited state (packed) with its time; the first revisit
/// closes the cycle.
pub fn detect_cycle_hashed(net: &Network, s0: &StateVector, cap: u64) -> Result<CycleReport> {
    check_cap(cap)?;
    let mut seen = HashMap::new();
    let mut state = s0.clone();
    let mut t = 0u64;
    loop {
        if let Some(&first) = seen.get(&state.packed()) {
            return Ok(CycleReport { period: Some(t - first), transient: first, steps_executed: t });
        }
        if t == cap {
            return Ok(CycleReport::unresolved(cap));
        }
        seen.insert(state.packed(), t);
        state = step_parallel(net, &state)?;
        t += 1;
    }
}

/// Brent's power-of-two tortoise; constant memory.
///
/// The cap bounds the first phase. Once the period is known, locating the
/// transient costs at most `transient + period` further steps, which are
/// included in `steps_executed`.
pub fn detect_cycle_brent(net: &Network, s0: &StateVector, cap: u64) -> Result<CycleReport> {
    check_cap(cap)?;
    let mut power = 1u64;
    let mut period = 1u64;
    let mut tortoise = s0.clone();
    let mut hare = step_parallel(net, s0)?;
    let mut steps = 1u64;
    while tortoise != hare {
        if steps == cap {
            return Ok(CycleReport::unresolved(cap));
        }
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = step_parallel(net, &hare)?;
        period += 1;
        steps += 1;
    }

    let mut tortoise = s0.clone();
    let mut hare = s0.clone();
    for _ in 0..period {
        hare = step_parallel(net, &hare)?;
    }
    steps += period;
    let mut transient = 0u64;
    while tortoise != hare {
        tortoise = step_parallel(net, &tortoise)?;
        hare = step_parallel(net, &hare)?;
        transient += 1;
        steps += 2;
    }
    Ok(CycleReport { period: Some(period), transient, steps_executed: steps })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EnergyMode {
    /// `E_S` along single-neuron updates.
    SerialEnergy,
    /// `E_P(S(t+1), S(t))` along synchronous updates.
    ParallelPairEnergy,
}

pub const ENERGY_TOLERANCE: f64 = 1e-12;

/// Indices where the energy failed to descend.
///
/// Serial: `t` such that `S(t+1) ≠ S(t)` but `E_S(t+1) ≥ E_S(t) − tol`.
/// Parallel: `t ≥ 1` such that `E_P(S(t+1), S(t)) > E_P(S(t), S(t−1)) + tol`.
pub fn check_energy_monotone(net: &Network, trajectory: &Trajectory, mode: EnergyMode) -> Result<Vec<usize>> {
    let states = &trajectory.states;
    if states.is_empty() {
        return Err(Error::InvalidArgument("trajectory is empty".into()));
    }
    let mut violations = Vec::new();
    match mode {
        EnergyMode::SerialEnergy => {
            let energies = states.iter().map(|s| net.energy_serial(s)).collect::<Result<Vec<_>>>()?;
            for t in 0..states.len() - 1 {
                if states[t + 1] != states[t] && energies[t + 1] >= energies[t] - ENERGY_TOLERANCE {
                    violations.push(t);
                }
            }
        }
        EnergyMode::ParallelPairEnergy => {
            let pairs = states.windows(2).map(|w| net.energy_parallel(&w[1], &w[0])).collect::<Result<Vec<_>>>()?;
            for t in 1..pairs.len() {
                if pairs[t] > pairs[t - 1] + ENERGY_TOLERANCE {
                    violations.push(t);
                }
            }
        }
    }
    Ok(violations)
}
