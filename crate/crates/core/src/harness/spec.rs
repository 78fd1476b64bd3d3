use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::cycle::Engine;
use crate::error::Error;
use crate::rng::SeededRng;
use crate::structure::{
    compose_weights, gen_braided_hermitian, gen_braided_skew_hermitian, gen_hermitian, gen_polar, gen_real_constrained,
    gen_skew_hermitian, gen_threshold, PolarSpec, RealMatrixSpec, SignKind, SymmetryKind, ThresholdMode,
};
use crate::types::{ComplexMatrix, Network, QuadState, StateVector};

pub const DEFAULT_TRIALS: u64 = 2_000;
pub const DEFAULT_CAP: u64 = 100_000;
pub const DEFAULT_N_RANGE: (usize, usize) = (5, 70);
pub const MAX_N: usize = 512;

/// Weight-matrix family sampled by an experiment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureFamily {
    /// Hermitian, entries on `[−1, 1]`, diagonal on `[0, 1]`.
    Hermitian,
    /// Skew-Hermitian, components on `[−1, 1]`.
    SkewHermitian,
    /// `A + Aᵀ i` with `A` uniform on `[−1, 1]`.
    BraidedHermitian,
    /// `A − Aᵀ i` with `A` uniform on `[−1, 1]`.
    BraidedSkewHermitian,
    /// `A + B i` with independently constrained real matrices.
    RectGrid { sym_a: SymmetryKind, sign_a: SignKind, sym_b: SymmetryKind, sign_b: SignKind },
    /// `G ∘ exp(i P)` with magnitude and phase symmetry constraints.
    PolarGrid { sym_g: SymmetryKind, sym_p: SymmetryKind },
}

impl StructureFamily {
    pub fn generate(&self, n: usize, rng: &mut SeededRng) -> Result<ComplexMatrix, Error> {
        let full = RealMatrixSpec { n, symmetry: SymmetryKind::Arbitrary, sign: SignKind::Arbitrary };
        match *self {
            StructureFamily::Hermitian => gen_hermitian(n, SignKind::Arbitrary, SignKind::Arbitrary, true, rng),
            StructureFamily::SkewHermitian => gen_skew_hermitian(n, rng),
            StructureFamily::BraidedHermitian => Ok(gen_braided_hermitian(&gen_real_constrained(full, rng)?)),
            StructureFamily::BraidedSkewHermitian => Ok(gen_braided_skew_hermitian(&gen_real_constrained(full, rng)?)),
            StructureFamily::RectGrid { sym_a, sign_a, sym_b, sign_b } => {
                let a = gen_real_constrained(RealMatrixSpec { n, symmetry: sym_a, sign: sign_a }, rng)?;
                let b = gen_real_constrained(RealMatrixSpec { n, symmetry: sym_b, sign: sign_b }, rng)?;
                compose_weights(&a, &b)
            }
            StructureFamily::PolarGrid { sym_g, sym_p } => {
                gen_polar(PolarSpec { n, magnitude_symmetry: sym_g, phase_symmetry: sym_p }, rng)
            }
        }
    }

    /// `(sign_a, sign_b)` columns of the per-instance CSV.
    pub fn sign_labels(&self) -> (&'static str, &'static str) {
        match self {
            StructureFamily::RectGrid { sign_a, sign_b, .. } => (sign_a.as_str(), sign_b.as_str()),
            _ => ("n/a", "n/a"),
        }
    }
}

impl fmt::Display for StructureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureFamily::Hermitian => f.write_str("hermitian"),
            StructureFamily::SkewHermitian => f.write_str("skew-hermitian"),
            StructureFamily::BraidedHermitian => f.write_str("braided-hermitian"),
            StructureFamily::BraidedSkewHermitian => f.write_str("braided-skew-hermitian"),
            StructureFamily::RectGrid { sym_a, sign_a, sym_b, sign_b } => {
                write!(f, "rect:{sym_a}:{sign_a}:{sym_b}:{sign_b}")
            }
            StructureFamily::PolarGrid { sym_g, sym_p } => write!(f, "polar:{sym_g}:{sym_p}"),
        }
    }
}

impl FromStr for StructureFamily {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g.
    /// `rect:symmetric:positive:arbitrary:negative` or `polar:symmetric:antisymmetric`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["hermitian"] => Ok(StructureFamily::Hermitian),
            ["skew-hermitian"] => Ok(StructureFamily::SkewHermitian),
            ["braided-hermitian"] => Ok(StructureFamily::BraidedHermitian),
            ["braided-skew-hermitian"] => Ok(StructureFamily::BraidedSkewHermitian),
            ["rect", sym_a, sign_a, sym_b, sign_b] => Ok(StructureFamily::RectGrid {
                sym_a: sym_a.parse()?,
                sign_a: sign_a.parse()?,
                sym_b: sym_b.parse()?,
                sign_b: sign_b.parse()?,
            }),
            ["polar", sym_g, sym_p] => Ok(StructureFamily::PolarGrid { sym_g: sym_g.parse()?, sym_p: sym_p.parse()? }),
            _ => Err(Error::InvalidArgument(format!("unknown structure family `{s}`"))),
        }
    }
}

/// One experiment cell, fully resolved.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub family: StructureFamily,
    pub threshold_mode: ThresholdMode,
    pub trials: u64,
    pub n_range: (usize, usize),
    pub cap: u64,
    pub master_seed: u64,
    pub engine: Engine,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, family: StructureFamily, threshold_mode: ThresholdMode) -> Self {
        ExperimentSpec {
            name: name.into(),
            family,
            threshold_mode,
            trials: DEFAULT_TRIALS,
            n_range: DEFAULT_N_RANGE,
            cap: DEFAULT_CAP,
            master_seed: 0,
            engine: Engine::Brent,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let (lo, hi) = self.n_range;
        let bad = |msg: String| Err(HarnessError::InvalidSpec(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.cap == 0 {
            return bad("cap must be at least 1".into());
        }
        if lo == 0 || lo > hi || hi > MAX_N {
            return bad(format!("n_range [{lo}, {hi}] must satisfy 1 ≤ lo ≤ hi ≤ {MAX_N}"));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!("name `{}` is not usable as a file stem", self.name));
        }
        Ok(())
    }

    /// Draws network and start state for instance `k` from stream `k`:
    /// `n`, then weights, then thresholds, then two sign bits per neuron.
    pub fn sample(&self, k: u64) -> Result<(Network, StateVector), Error> {
        let mut rng = SeededRng::new(self.master_seed, k);
        let (lo, hi) = self.n_range;
        let n = rng.range_inclusive(lo as u64, hi as u64) as usize;
        sample_network(self.family, self.threshold_mode, n, &mut rng)
    }
}

/// Generates weights, thresholds and a uniform start state, in that order.
pub fn sample_network(
    family: StructureFamily,
    threshold_mode: ThresholdMode,
    n: usize,
    rng: &mut SeededRng,
) -> Result<(Network, StateVector), Error> {
    let weights = family.generate(n, rng)?;
    let thresholds: Vec<Complex64> = gen_threshold(n, threshold_mode, rng)?;
    let net = Network::new(weights, thresholds)?;
    let s0 = random_state(n, rng);
    Ok((net, s0))
}

pub fn random_state(n: usize, rng: &mut SeededRng) -> StateVector {
    let comps = (0..n)
        .map(|_| {
            let re = rng.coin();
            let im = rng.coin();
            QuadState::new(re, im)
        })
        .collect();
    StateVector::new(comps).expect("n ≥ 1")
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}
fn default_cap() -> u64 {
    DEFAULT_CAP
}
fn default_n_range() -> (usize, usize) {
    DEFAULT_N_RANGE
}
fn default_threshold() -> ThresholdMode {
    ThresholdMode::Zero
}

/// On-disk TOML form of an experiment; `seed` may be left to the command
/// line or the `CVHNN_SEED` environment variable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub family: StructureFamily,
    #[serde(default = "default_threshold")]
    pub threshold: ThresholdMode,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_n_range")]
    pub n_range: (usize, usize),
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub engine: Engine,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| HarnessError::Config { path: path.into(), source })
    }

    /// Seed precedence: explicit override, then the file, then `fallback`
    /// (the environment), then 0.
    pub fn resolve(&self, seed_override: Option<u64>, fallback: Option<u64>) -> Result<ExperimentSpec, HarnessError> {
        let spec = ExperimentSpec {
            name: self.name.clone(),
            family: self.family,
            threshold_mode: self.threshold,
            trials: self.trials,
            n_range: self.n_range,
            cap: self.cap,
            master_seed: seed_override.or(self.seed).or(fallback).unwrap_or(0),
            engine: self.engine,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &ExperimentSpec) -> Self {
        ExperimentConfig {
            name: spec.name.clone(),
            family: spec.family,
            threshold: spec.threshold_mode,
            trials: spec.trials,
            n_range: spec.n_range,
            cap: spec.cap,
            seed: Some(spec.master_seed),
            engine: spec.engine,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_text_round_trip() {
        let families = [
            StructureFamily::Hermitian,
            StructureFamily::SkewHermitian,
            StructureFamily::BraidedHermitian,
            StructureFamily::BraidedSkewHermitian,
            StructureFamily::RectGrid {
                sym_a: SymmetryKind::Antisymmetric,
                sign_a: SignKind::Positive,
                sym_b: SymmetryKind::Arbitrary,
                sign_b: SignKind::Negative,
            },
            StructureFamily::PolarGrid { sym_g: SymmetryKind::Symmetric, sym_p: SymmetryKind::Antisymmetric },
        ];
        for f in families {
            assert_eq!(f.to_string().parse::<StructureFamily>().unwrap(), f);
        }
        assert!("rect:symmetric".parse::<StructureFamily>().is_err());
        assert!("polar:symmetric:diagonal".parse::<StructureFamily>().is_err());
    }

    #[test]
    fn config_parses_with_defaults() {
        let text = r#"
            name = "cell"
            [family]
            kind = "rect-grid"
            sym_a = "symmetric"
            sign_a = "positive"
            sym_b = "symmetric"
            sign_b = "negative"
        "#;
        let cfg: ExperimentConfig = toml::from_str(text).unwrap();
        let spec = cfg.resolve(None, Some(99)).unwrap();
        assert_eq!(spec.trials, DEFAULT_TRIALS);
        assert_eq!(spec.n_range, (5, 70));
        assert_eq!(spec.cap, DEFAULT_CAP);
        assert_eq!(spec.master_seed, 99);
        assert_eq!(spec.threshold_mode, ThresholdMode::Zero);
        assert_eq!(cfg.resolve(Some(3), Some(99)).unwrap().master_seed, 3);
        let round: ExperimentConfig = toml::from_str(&ExperimentConfig::from_spec(&spec).to_toml()).unwrap();
        assert_eq!(round.resolve(None, None).unwrap(), spec);
    }

    #[test]
    fn config_rejects_bad_values() {
        let base = ExperimentSpec::new("x", StructureFamily::Hermitian, ThresholdMode::Zero);
        let mut s = base.clone();
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.n_range = (0, 5);
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.n_range = (10, 600);
        assert!(s.validate().is_err());
        let mut s = base;
        s.cap = 0;
        assert!(s.validate().is_err());
        assert!(
            toml::from_str::<ExperimentConfig>("name = \"a\"\nfamily = { kind = \"hermitian\" }\nbogus = 1").is_err()
        );
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let spec = ExperimentSpec::new("x", StructureFamily::BraidedHermitian, ThresholdMode::UniformScaled);
        for k in 0..20 {
            let (a, s) = spec.sample(k).unwrap();
            let (b, t) = spec.sample(k).unwrap();
            assert_eq!(a, b);
            assert_eq!(s, t);
            assert!((5..=70).contains(&a.n()));
        }
    }
}
