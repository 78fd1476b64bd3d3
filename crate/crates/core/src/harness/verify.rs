//! Exact, per-instance checks of the convergence theorems. Each check
//! samples its own networks from `(seed, stream = instance)`.

use std::fmt;

use super::spec::{random_state, sample_network, StructureFamily};
use super::HarnessError;
use crate::cycle::{check_energy_monotone, detect_cycle_brent, detect_cycle_hashed, EnergyMode};
use crate::dynamics::{run_parallel, run_serial, step_parallel, RealNetwork, ScanOrder};
use crate::oracle::FunctionalGraph;
use crate::rng::SeededRng;
use crate::structure::{classify_with_tolerance, ThresholdMode};
use crate::types::{Network, StructureTag};

#[derive(Clone, PartialEq, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn outcome(name: impl Into<String>, failures: usize, total: usize, detail: impl fmt::Display) -> CheckOutcome {
    CheckOutcome { name: name.into(), passed: failures == 0, detail: format!("{failures}/{total} failing; {detail}") }
}

fn sample(
    family: StructureFamily,
    threshold: ThresholdMode,
    n_range: (usize, usize),
    seed: u64,
    k: u64,
) -> Result<(Network, crate::types::StateVector), HarnessError> {
    let mut rng = SeededRng::new(seed, k);
    let n = rng.range_inclusive(n_range.0 as u64, n_range.1 as u64) as usize;
    Ok(sample_network(family, threshold, n, &mut rng)?)
}

fn threshold_for(k: u64) -> ThresholdMode {
    if k.is_multiple_of(2) {
        ThresholdMode::Zero
    } else {
        ThresholdMode::UniformScaled
    }
}

/// Hermitian weights with non-negative diagonal under cyclic serial sweeps:
/// every run reaches a fixed point within `max_sweeps`, and every state
/// change strictly lowers the serial energy. Odd instances carry random
/// thresholds.
pub fn hermitian_serial(
    count: u64,
    n_range: (usize, usize),
    max_sweeps: usize,
    seed: u64,
) -> Result<CheckOutcome, HarnessError> {
    let mut failures = 0;
    let mut violations = 0;
    let mut worst_sweeps = 0;
    for k in 0..count {
        let (net, s0) = sample(StructureFamily::Hermitian, threshold_for(k), n_range, seed, k)?;
        let t = run_serial(&net, &s0, ScanOrder::Cyclic, max_sweeps)?;
        let sweeps = (t.len() - 1) / net.n();
        worst_sweeps = worst_sweeps.max(sweeps);
        let stable = step_parallel(&net, t.last())? == *t.last();
        let v = check_energy_monotone(&net, &t, EnergyMode::SerialEnergy)?.len();
        violations += v;
        if !stable || v > 0 {
            failures += 1;
        }
    }
    Ok(outcome(
        "hermitian serial fixed point",
        failures,
        count as usize,
        format!("{violations} energy violations, at most {worst_sweeps} sweeps"),
    ))
}

/// Hermitian weights under parallel updates: every period is 1 or 2 and
/// the pair energy never rises.
pub fn hermitian_parallel(
    count: u64,
    n_range: (usize, usize),
    cap: u64,
    seed: u64,
) -> Result<CheckOutcome, HarnessError> {
    let mut failures = 0;
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..count {
        let (net, s0) = sample(StructureFamily::Hermitian, threshold_for(k), n_range, seed, k)?;
        let r = detect_cycle_brent(&net, &s0, cap)?;
        let ok_period = matches!(r.period, Some(1 | 2));
        if let Some(p) = r.period {
            seen.insert(p);
        }
        let steps = (r.transient + r.period.unwrap_or(0) + 2) as usize;
        let traj = run_parallel(&net, &s0, steps.min(cap as usize).max(1))?;
        let v = check_energy_monotone(&net, &traj, EnergyMode::ParallelPairEnergy)?;
        if !ok_period || !v.is_empty() {
            failures += 1;
        }
    }
    Ok(outcome("hermitian parallel period ≤ 2", failures, count as usize, format!("periods seen {seen:?}")))
}

/// Every period over all `4^n` start states divides `divisor`.
pub fn exhaustive_divides(
    family: StructureFamily,
    count: u64,
    n: usize,
    divisor: u64,
    seed: u64,
) -> Result<CheckOutcome, HarnessError> {
    let mut failures = 0;
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..count {
        let (net, _) = sample(family, ThresholdMode::Zero, (n, n), seed, k)?;
        let inv = FunctionalGraph::build(&net)?.inventory();
        seen.extend(inv.periods());
        if inv.periods().any(|p| !divisor.is_multiple_of(p)) {
            failures += 1;
        }
    }
    Ok(outcome(
        format!("{family} exhaustive periods divide {divisor}"),
        failures,
        count as usize,
        format!("n = {n}, periods seen {seen:?}"),
    ))
}

/// Both detectors reproduce the functional graph's period and transient
/// from every start state.
pub fn detector_agreement(
    family: StructureFamily,
    count: u64,
    n: usize,
    cap: u64,
    seed: u64,
) -> Result<CheckOutcome, HarnessError> {
    let mut failures = 0;
    for k in 0..count {
        let (net, _) = sample(family, threshold_for(k), (n, n), seed, k)?;
        let g = FunctionalGraph::build(&net)?;
        let brent = g.agrees_with(|s| detect_cycle_brent(&net, s, cap))?;
        let hashed = g.agrees_with(|s| detect_cycle_hashed(&net, s, cap))?;
        if !(brent && hashed) {
            failures += 1;
        }
    }
    Ok(outcome(format!("{family} detectors match oracle"), failures, count as usize, format!("n = {n}")))
}

/// Complex parallel trajectories equal the stacked real trajectories of
/// `W = [[A, −B], [B, A]]`, bit for bit.
pub fn realification(
    count: u64,
    n_range: (usize, usize),
    steps: usize,
    seed: u64,
) -> Result<CheckOutcome, HarnessError> {
    let family = StructureFamily::RectGrid {
        sym_a: crate::structure::SymmetryKind::Arbitrary,
        sign_a: crate::structure::SignKind::Arbitrary,
        sym_b: crate::structure::SymmetryKind::Arbitrary,
        sign_b: crate::structure::SignKind::Arbitrary,
    };
    let mut failures = 0;
    for k in 0..count {
        let (net, s0) = sample(family, threshold_for(k), n_range, seed, k)?;
        let real = RealNetwork::realify(&net);
        let traj = run_parallel(&net, &s0, steps)?;
        let mut x = s0.stacked();
        let mut ok = true;
        for s in &traj.states[1..] {
            x = real.step(&x)?;
            let expected = s.stacked();
            ok &= x.iter().zip(&expected).all(|(a, b)| a.to_bits() == b.to_bits());
        }
        if !ok {
            failures += 1;
        }
    }
    Ok(outcome("realification equivalence", failures, count as usize, format!("{steps} steps each")))
}

/// `E_P(s, s) == E_S(s)` exactly on arbitrary networks, and `s* M s` real
/// within 1e-9 for Hermitian `M`.
pub fn energy_identities(count: u64, n_range: (usize, usize), seed: u64) -> Result<CheckOutcome, HarnessError> {
    let mut failures = 0;
    let mut worst_im: f64 = 0.0;
    for k in 0..count {
        let (herm, s) = sample(StructureFamily::Hermitian, threshold_for(k), n_range, seed, k)?;
        let im = herm.quadratic_form(&s)?.im.abs();
        worst_im = worst_im.max(im);
        let tags = classify_with_tolerance(herm.weights(), 0.0);
        let mut ok = im <= 1e-9 && tags.contains(&StructureTag::Hermitian);
        let mut rng = SeededRng::new(seed ^ 0x5eed, k);
        for family in [StructureFamily::BraidedHermitian, StructureFamily::SkewHermitian] {
            let (net, _) = sample_network(family, ThresholdMode::UniformScaled, s.len(), &mut rng)?;
            let t = random_state(s.len(), &mut rng);
            ok &= net.energy_parallel(&t, &t)?.to_bits() == net.energy_serial(&t)?.to_bits();
        }
        ok &= herm.energy_parallel(&s, &s)?.to_bits() == herm.energy_serial(&s)?.to_bits();
        if !ok {
            failures += 1;
        }
    }
    Ok(outcome("energy identities", failures, count as usize, format!("max |Im s*Ms| = {worst_im:.3e}")))
}

/// Modest-size run of every check, for the `verify` subcommand.
pub fn run_suite(instances: u64, seed: u64) -> Result<Vec<CheckOutcome>, HarnessError> {
    let few = (instances / 10).max(1);
    Ok(vec![
        energy_identities(instances, (1, 30), seed)?,
        hermitian_serial(instances, (5, 30), 10_000, seed)?,
        hermitian_parallel(instances, (5, 30), 100_000, seed)?,
        exhaustive_divides(StructureFamily::SkewHermitian, few, 5, 4, seed)?,
        exhaustive_divides(StructureFamily::BraidedHermitian, few, 5, 8, seed)?,
        exhaustive_divides(StructureFamily::BraidedSkewHermitian, few, 5, 8, seed)?,
        realification(instances, (2, 12), 64, seed)?,
        detector_agreement(StructureFamily::SkewHermitian, few, 4, 10_000, seed)?,
        detector_agreement(StructureFamily::BraidedHermitian, few, 4, 10_000, seed)?,
        detector_agreement(StructureFamily::Hermitian, few, 4, 10_000, seed)?,
    ])
}
