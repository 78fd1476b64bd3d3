//! Structured weight-matrix generators and classifiers.
//!
//! Draw order is part of the reproducibility contract: every generator
//! consumes its stream row-major over the entries it draws (upper triangle
//! including the diagonal for symmetric parts, strict upper triangle for
//! antisymmetric parts, every entry for arbitrary parts).

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::types::{ComplexMatrix, Matrix, RealMatrix, StructureTag};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    Symmetric,
    Antisymmetric,
    Arbitrary,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignKind {
    Positive,
    Negative,
    Arbitrary,
}

impl SignKind {
    pub fn interval(self) -> (f64, f64) {
        match self {
            SignKind::Positive => (0.0, 1.0),
            SignKind::Negative => (-1.0, 0.0),
            SignKind::Arbitrary => (-1.0, 1.0),
        }
    }
}

macro_rules! kebab_enum_text {
    ($ty:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $text),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($ty::$variant),)+
                    other => Err(Error::InvalidArgument(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

kebab_enum_text!(SymmetryKind { Symmetric => "symmetric", Antisymmetric => "antisymmetric", Arbitrary => "arbitrary" });
kebab_enum_text!(SignKind { Positive => "positive", Negative => "negative", Arbitrary => "arbitrary" });

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RealMatrixSpec {
    pub n: usize,
    pub symmetry: SymmetryKind,
    pub sign: SignKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PolarSpec {
    pub n: usize,
    pub magnitude_symmetry: SymmetryKind,
    pub phase_symmetry: SymmetryKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    Zero,
    /// Real and imaginary parts independently uniform on `[−n, n]`.
    UniformScaled,
}

kebab_enum_text!(ThresholdMode { Zero => "zero", UniformScaled => "uniform-scaled" });

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("matrix size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Draws a real matrix with the given symmetry, entries uniform on `[lo, hi)`.
fn gen_real_in(n: usize, symmetry: SymmetryKind, lo: f64, hi: f64, rng: &mut SeededRng) -> RealMatrix {
    let mut a = RealMatrix::zeros(n);
    match symmetry {
        SymmetryKind::Symmetric => {
            for i in 0..n {
                for j in i..n {
                    let v = rng.uniform(lo, hi);
                    a.set(i, j, v);
                    a.set(j, i, v);
                }
            }
        }
        SymmetryKind::Antisymmetric => {
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.uniform(lo, hi);
                    a.set(i, j, v);
                    a.set(j, i, -v);
                }
            }
        }
        SymmetryKind::Arbitrary => {
            for i in 0..n {
                for j in 0..n {
                    a.set(i, j, rng.uniform(lo, hi));
                }
            }
        }
    }
    a
}

/// Real matrix with a symmetry constraint and a sign interval.
///
/// For antisymmetric matrices the interval applies to the strict upper
/// triangle and the diagonal is exactly zero; for arbitrary matrices it
/// applies to every entry.
pub fn gen_real_constrained(spec: RealMatrixSpec, rng: &mut SeededRng) -> Result<RealMatrix> {
    check_n(spec.n)?;
    let (lo, hi) = spec.sign.interval();
    Ok(gen_real_in(spec.n, spec.symmetry, lo, hi, rng))
}

/// `M = A + B i`.
pub fn compose_weights(a: &RealMatrix, b: &RealMatrix) -> Result<ComplexMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), got: b.n() });
    }
    Ok(Matrix::from_fn(a.n(), |i, j| Complex64::new(a.get(i, j), b.get(i, j))))
}

/// `M = A + Aᵀ i`.
pub fn gen_braided_hermitian(a: &RealMatrix) -> ComplexMatrix {
    compose_weights(a, &a.transpose()).expect("transpose has the same shape")
}

/// `M = A − Aᵀ i`.
pub fn gen_braided_skew_hermitian(a: &RealMatrix) -> ComplexMatrix {
    compose_weights(a, &a.transpose().map(|x| -x)).expect("transpose has the same shape")
}

/// Hermitian matrix: symmetric real part drawn from `sign_re`, antisymmetric
/// imaginary part drawn from `sign_im`.
///
/// The diagonal is drawn from `[0, 1]` when `diag_nonneg` is set and from
/// `[−1, 1]` otherwise, regardless of `sign_re`.
pub fn gen_hermitian(
    n: usize,
    sign_re: SignKind,
    sign_im: SignKind,
    diag_nonneg: bool,
    rng: &mut SeededRng,
) -> Result<ComplexMatrix> {
    check_n(n)?;
    let (lo, hi) = sign_re.interval();
    let (dlo, dhi) = if diag_nonneg { (0.0, 1.0) } else { (-1.0, 1.0) };
    let mut re = RealMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v = if i == j { rng.uniform(dlo, dhi) } else { rng.uniform(lo, hi) };
            re.set(i, j, v);
            re.set(j, i, v);
        }
    }
    let (ilo, ihi) = sign_im.interval();
    let im = gen_real_in(n, SymmetryKind::Antisymmetric, ilo, ihi, rng);
    compose_weights(&re, &im)
}

/// Skew-Hermitian matrix with all drawn components uniform on `[−1, 1]`:
/// antisymmetric real part, symmetric imaginary part (diagonal included).
pub fn gen_skew_hermitian(n: usize, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    check_n(n)?;
    let re = gen_real_in(n, SymmetryKind::Antisymmetric, -1.0, 1.0, rng);
    let im = gen_real_in(n, SymmetryKind::Symmetric, -1.0, 1.0, rng);
    compose_weights(&re, &im)
}

/// Polar-form matrix `M_ij = G_ij (cos P_ij + i sin P_ij)` with magnitudes
/// `G` on `[0, 1]` and phases `P` on `[−π, π]`.
///
/// An antisymmetric `G` is negate-mirrored like any other antisymmetric
/// matrix, so its lower triangle holds negative magnitudes.
pub fn gen_polar(spec: PolarSpec, rng: &mut SeededRng) -> Result<ComplexMatrix> {
    check_n(spec.n)?;
    let g = gen_real_in(spec.n, spec.magnitude_symmetry, 0.0, 1.0, rng);
    let p = gen_real_in(spec.n, spec.phase_symmetry, -PI, PI, rng);
    Ok(Matrix::from_fn(spec.n, |i, j| {
        let (sin, cos) = p.get(i, j).sin_cos();
        let mag = g.get(i, j);
        Complex64::new(mag * cos, mag * sin)
    }))
}

pub fn gen_threshold(n: usize, mode: ThresholdMode, rng: &mut SeededRng) -> Result<Vec<Complex64>> {
    check_n(n)?;
    Ok(match mode {
        ThresholdMode::Zero => vec![Complex64::new(0.0, 0.0); n],
        ThresholdMode::UniformScaled => {
            let bound = n as f64;
            (0..n)
                .map(|_| {
                    let re = rng.uniform(-bound, bound);
                    let im = rng.uniform(-bound, bound);
                    Complex64::new(re, im)
                })
                .collect()
        }
    })
}

/// Exact structural classification (tolerance 0).
pub fn classify(m: &ComplexMatrix) -> BTreeSet<StructureTag> {
    classify_with_tolerance(m, 0.0)
}

/// Classification where each defining relation may be violated by at most
/// `tol` per component.
pub fn classify_with_tolerance(m: &ComplexMatrix, tol: f64) -> BTreeSet<StructureTag> {
    let n = m.n();
    let close = |a: f64, b: f64| (a - b).abs() <= tol;
    let holds =
        |rel: &dyn Fn(Complex64, Complex64) -> bool| (0..n).all(|i| (0..n).all(|j| rel(m.get(i, j), m.get(j, i))));
    // Each relation is stated for (M_ij, M_ji).
    type Relation<'a> = &'a dyn Fn(Complex64, Complex64) -> bool;
    let relations: [(StructureTag, Relation); 6] = [
        (StructureTag::Hermitian, &|a, b| close(a.re, b.re) && close(a.im, -b.im)),
        (StructureTag::SkewHermitian, &|a, b| close(a.re, -b.re) && close(a.im, b.im)),
        // Im(M_ij) = Re(M_ji)
        (StructureTag::BraidedHermitian, &|a, b| close(a.im, b.re)),
        (StructureTag::BraidedSkewHermitian, &|a, b| close(a.im, -b.re)),
        (StructureTag::SymmetricComplex, &|a, b| close(a.re, b.re) && close(a.im, b.im)),
        (StructureTag::AntisymmetricComplex, &|a, b| close(a.re, -b.re) && close(a.im, -b.im)),
    ];
    let mut tags: BTreeSet<StructureTag> =
        relations.iter().filter(|(_, rel)| holds(*rel)).map(|(tag, _)| *tag).collect();
    if tags.is_empty() {
        tags.insert(StructureTag::Unstructured);
    }
    tags
}

/// Block matrix `[[A, −B], [B, A]]` for `M = A + B i`.
pub fn realify(m: &ComplexMatrix) -> RealMatrix {
    let n = m.n();
    Matrix::from_fn(2 * n, |r, c| {
        let z = m.get(r % n, c % n);
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}
