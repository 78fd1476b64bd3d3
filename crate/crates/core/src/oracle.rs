//! Exhaustive ground truth for small networks: the parallel-mode update as
//! a functional graph on all `4^n` states.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{detect_cycle_brent, CycleReport};
use crate::dynamics::step_parallel;
use crate::error::{Error, Result};
use crate::types::{Network, QuadState, StateVector};

/// Largest `n` enumerated exhaustively (`4^10` states).
pub const ORACLE_LIMIT: usize = 10;

/// A state packed two bits per neuron, same layout as
/// [`StateVector::packed`]: neuron `k` contributes `code_k << 2k`.
pub type StateCode = u32;

fn check_limit(n: usize) -> Result<()> {
    if n == 0 || n > ORACLE_LIMIT {
        return Err(Error::OracleLimit { n, limit: ORACLE_LIMIT });
    }
    Ok(())
}

pub fn state_count(n: usize) -> u64 {
    1u64 << (2 * n)
}

pub fn encode_state(s: &StateVector) -> Result<StateCode> {
    check_limit(s.len())?;
    Ok(s.components().iter().enumerate().fold(0, |acc, (k, q)| acc | (q.code() as u32) << (2 * k)))
}

pub fn decode_state(code: StateCode, n: usize) -> Result<StateVector> {
    check_limit(n)?;
    if code as u64 >= state_count(n) {
        return Err(Error::CodeOutOfRange { code: code as u64, n });
    }
    let comps = (0..n).map(|k| QuadState::from_code(((code >> (2 * k)) & 3) as u8)).collect::<Result<_>>()?;
    StateVector::new(comps)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleEntry {
    pub period: u64,
    /// Smallest code on the cycle.
    pub representative: StateCode,
    /// Number of states (cycle members included) whose orbit ends here.
    pub basin_size: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CycleInventory {
    pub n: usize,
    pub total_states: u64,
    pub cycles: Vec<CycleEntry>,
}

impl CycleInventory {
    pub fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        self.cycles.iter().map(|c| c.period)
    }
}

/// Successor array plus per-state attractor and distance to it.
pub struct FunctionalGraph {
    n: usize,
    successor: Vec<StateCode>,
    attractor: Vec<u32>,
    depth: Vec<u32>,
    cycles: Vec<CycleEntry>,
}

const UNSEEN: u32 = u32::MAX;

impl FunctionalGraph {
    pub fn build(net: &Network) -> Result<Self> {
        let n = net.n();
        check_limit(n)?;
        let total = state_count(n) as usize;
        let successor = (0..total as u32)
            .into_par_iter()
            .map(|code| {
                let s = decode_state(code, n)?;
                encode_state(&step_parallel(net, &s)?)
            })
            .collect::<Result<Vec<_>>>()?;

        // Walk each unvisited chain; a node revisited while still on the
        // current chain closes a new cycle.
        let mut visited = vec![false; total];
        let mut on_path = vec![false; total];
        let mut cycles: Vec<CycleEntry> = Vec::new();
        let mut cycle_nodes: Vec<StateCode> = Vec::new();
        let mut path = Vec::new();
        for start in 0..total {
            if visited[start] {
                continue;
            }
            path.clear();
            let mut node = start;
            while !visited[node] && !on_path[node] {
                on_path[node] = true;
                path.push(node);
                node = successor[node] as usize;
            }
            if on_path[node] {
                let mut member = node;
                let mut period = 0;
                let mut smallest = node;
                loop {
                    cycle_nodes.push(member as StateCode);
                    smallest = smallest.min(member);
                    period += 1;
                    member = successor[member] as usize;
                    if member == node {
                        break;
                    }
                }
                cycles.push(CycleEntry { period, representative: smallest as StateCode, basin_size: 0 });
            }
            for &p in &path {
                on_path[p] = false;
                visited[p] = true;
            }
        }

        // Reverse BFS from cycle nodes over the predecessor lists.
        let mut offsets = vec![0u32; total + 1];
        for &s in &successor {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..total {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut preds = vec![0 as StateCode; total];
        for (v, &s) in successor.iter().enumerate() {
            preds[fill[s as usize] as usize] = v as StateCode;
            fill[s as usize] += 1;
        }

        let mut attractor = vec![UNSEEN; total];
        let mut depth = vec![UNSEEN; total];
        let mut queue = VecDeque::new();
        let mut members = cycle_nodes.iter();
        for (id, entry) in cycles.iter().enumerate() {
            for &node in members.by_ref().take(entry.period as usize) {
                attractor[node as usize] = id as u32;
                depth[node as usize] = 0;
                queue.push_back(node as usize);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &p in &preds[offsets[v] as usize..offsets[v + 1] as usize] {
                let p = p as usize;
                if attractor[p] == UNSEEN {
                    attractor[p] = attractor[v];
                    depth[p] = depth[v] + 1;
                    queue.push_back(p);
                }
            }
        }
        for &a in &attractor {
            cycles[a as usize].basin_size += 1;
        }

        Ok(FunctionalGraph { n, successor, attractor, depth, cycles })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn successor(&self, code: StateCode) -> StateCode {
        self.successor[code as usize]
    }

    pub fn period_from(&self, code: StateCode) -> u64 {
        self.cycles[self.attractor[code as usize] as usize].period
    }

    pub fn transient_from(&self, code: StateCode) -> u64 {
        self.depth[code as usize] as u64
    }

    pub fn inventory(&self) -> CycleInventory {
        let mut cycles = self.cycles.clone();
        cycles.sort_by_key(|c| c.representative);
        CycleInventory { n: self.n, total_states: state_count(self.n), cycles }
    }

    /// Checks a detector against the graph from every start state. A
    /// disagreement on period or transient, or an unresolved report,
    /// counts as failure.
    pub fn agrees_with(&self, mut detector: impl FnMut(&StateVector) -> Result<CycleReport>) -> Result<bool> {
        for code in 0..state_count(self.n) as StateCode {
            let report = detector(&decode_state(code, self.n)?)?;
            if report.period != Some(self.period_from(code)) || report.transient != self.transient_from(code) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exact cycle inventory of the parallel-mode dynamics.
pub fn functional_graph_cycles(net: &Network) -> Result<CycleInventory> {
    Ok(FunctionalGraph::build(net)?.inventory())
}

/// Whether [`detect_cycle_brent`] reproduces the exact period and transient
/// from every start state.
pub fn exhaustive_agreement(net: &Network, cap: u64) -> Result<bool> {
    FunctionalGraph::build(net)?.agrees_with(|s| detect_cycle_brent(net, s, cap))
}
