use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Cycle-length counts for one experiment cell.
///
/// Only counts are stored; every statistic is derived on demand, so merging
/// two histograms is plain addition and independent of order.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: BTreeMap<u64, u64>,
    pub unresolved: u64,
}

impl Histogram {
    pub fn record(&mut self, period: Option<u64>) {
        match period {
            Some(p) => *self.counts.entry(p).or_insert(0) += 1,
            None => self.unresolved += 1,
        }
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&p, &c) in &other.counts {
            *self.counts.entry(p).or_insert(0) += c;
        }
        self.unresolved += other.unresolved;
    }

    pub fn from_periods(periods: impl IntoIterator<Item = Option<u64>>) -> Self {
        let mut h = Histogram::default();
        for p in periods {
            h.record(p);
        }
        h
    }

    pub fn resolved(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Resolved plus unresolved runs.
    pub fn trials(&self) -> u64 {
        self.resolved() + self.unresolved
    }

    pub fn probability(&self, period: u64) -> f64 {
        match self.trials() {
            0 => 0.0,
            t => self.counts.get(&period).copied().unwrap_or(0) as f64 / t as f64,
        }
    }

    /// Most frequent period; ties go to the shorter period.
    pub fn mode_period(&self) -> Option<u64> {
        let mut best: Option<(u64, u64)> = None;
        for (&p, &c) in &self.counts {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((p, c));
            }
        }
        best.map(|(p, _)| p)
    }

    /// `counts[mode] / trials`, 0 when nothing resolved.
    pub fn mode_probability(&self) -> f64 {
        self.mode_period().map_or(0.0, |p| self.probability(p))
    }

    /// Mean over resolved runs.
    pub fn mean_period(&self) -> Option<f64> {
        let resolved = self.resolved();
        if resolved == 0 {
            return None;
        }
        let total: f64 = self.counts.iter().map(|(&p, &c)| p as f64 * c as f64).sum();
        Some(total / resolved as f64)
    }

    /// Population standard deviation over resolved runs.
    pub fn stddev_period(&self) -> Option<f64> {
        let mean = self.mean_period()?;
        let resolved = self.resolved() as f64;
        let ss: f64 = self.counts.iter().map(|(&p, &c)| c as f64 * (p as f64 - mean).powi(2)).sum();
        Some((ss / resolved).sqrt())
    }

    /// Probability mass on periods outside `allowed`, unresolved runs included.
    pub fn mass_outside(&self, allowed: &[u64]) -> f64 {
        let t = self.trials();
        if t == 0 {
            return 0.0;
        }
        let outside: u64 =
            self.counts.iter().filter(|(p, _)| !allowed.contains(p)).map(|(_, c)| c).sum::<u64>() + self.unresolved;
        outside as f64 / t as f64
    }
}
