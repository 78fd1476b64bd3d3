//! Value model: quadrant states, state vectors, dense square matrices,
//! the network record and its two energy functions.
//!
//! Neuron indices are zero-based throughout the crate.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real sign with `sign(0) = +1`. Comparison is exact, no tolerance.
pub fn sign_real(x: f64) -> Result<i8> {
    if !x.is_finite() {
        return Err(Error::NonFinite { context: "sign argument" });
    }
    Ok(if x >= 0.0 { 1 } else { -1 })
}

/// Applies [`sign_real`] separately to the real and imaginary parts.
pub fn split_sign(z: Complex64) -> Result<QuadState> {
    let re = sign_real(z.re)?;
    let im = sign_real(z.im)?;
    Ok(QuadState::new(re > 0, im > 0))
}

/// One of the four values `±1 ± i`.
///
/// Stored as a 2-bit code: bit 0 set when the real part is −1, bit 1 set
/// when the imaginary part is −1. So `1+i → 0`, `−1+i → 1`, `1−i → 2`,
/// `−1−i → 3`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadState(u8);

impl QuadState {
    pub const ALL: [QuadState; 4] = [QuadState(0), QuadState(1), QuadState(2), QuadState(3)];
    /// `1 + i`, the image of a zero field.
    pub const ONE_PLUS_I: QuadState = QuadState(0);

    pub const fn new(re_positive: bool, im_positive: bool) -> Self {
        QuadState((!re_positive) as u8 | (((!im_positive) as u8) << 1))
    }

    pub fn from_code(code: u8) -> Result<Self> {
        if code < 4 {
            Ok(QuadState(code))
        } else {
            Err(Error::CodeOutOfRange { code: code as u64, n: 1 })
        }
    }

    /// Accepts only values whose components are exactly ±1.
    pub fn from_complex(z: Complex64) -> Result<Self> {
        let unit = |x: f64| x == 1.0 || x == -1.0;
        if unit(z.re) && unit(z.im) {
            Ok(QuadState::new(z.re > 0.0, z.im > 0.0))
        } else {
            Err(Error::NotQuadrant { re: z.re, im: z.im })
        }
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn re(self) -> f64 {
        if self.0 & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn im(self) -> f64 {
        if self.0 & 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re(), self.im())
    }
}

impl fmt::Debug for QuadState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = if self.0 & 1 == 0 { '+' } else { '-' };
        let im = if self.0 & 2 == 0 { '+' } else { '-' };
        write!(f, "{re}1{im}i")
    }
}

/// Full network state. Equality is exact component-wise equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateVector(Vec<QuadState>);

impl StateVector {
    pub fn new(components: Vec<QuadState>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty);
        }
        Ok(StateVector(components))
    }

    pub fn uniform(n: usize, q: QuadState) -> Self {
        assert!(n >= 1, "state vector needs at least one neuron");
        StateVector(vec![q; n])
    }

    pub fn from_complex(values: &[Complex64]) -> Result<Self> {
        let comps = values.iter().map(|&z| QuadState::from_complex(z)).collect::<Result<Vec<_>>>()?;
        StateVector::new(comps)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn components(&self) -> &[QuadState] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize) -> QuadState {
        self.0[i]
    }

    pub(crate) fn set(&mut self, i: usize, q: QuadState) {
        self.0[i] = q;
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(|q| q.to_complex()).collect()
    }

    /// Canonical little-endian 2-bit packing: neuron `k` occupies bits
    /// `2k` (real negative) and `2k+1` (imaginary negative).
    pub fn packed(&self) -> PackedState {
        let mut words = vec![0u64; (2 * self.0.len()).div_ceil(64)];
        for (k, q) in self.0.iter().enumerate() {
            let bit = 2 * k;
            words[bit / 64] |= (q.code() as u64) << (bit % 64);
        }
        PackedState(words)
    }

    pub fn from_packed(packed: &PackedState, n: usize) -> Result<Self> {
        if packed.0.len() != (2 * n).div_ceil(64) {
            return Err(Error::DimensionMismatch { expected: (2 * n).div_ceil(64), got: packed.0.len() });
        }
        let comps = (0..n)
            .map(|k| {
                let bit = 2 * k;
                QuadState(((packed.0[bit / 64] >> (bit % 64)) & 3) as u8)
            })
            .collect();
        StateVector::new(comps)
    }

    /// Stacked real parts followed by stacked imaginary parts.
    pub fn stacked(&self) -> Vec<f64> {
        self.0.iter().map(|q| q.re()).chain(self.0.iter().map(|q| q.im())).collect()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, q) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "]")
    }
}

/// Bit-packed state used as a hash key.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PackedState(pub Vec<u64>);

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Copy> Matrix<T> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), n });
            }
            data.extend(r);
        }
        Ok(Matrix { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(|&x| f(x)).collect() }
    }
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| 0.0)
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Matrix::from_fn(n, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn re(&self) -> RealMatrix {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> RealMatrix {
        self.map(|z| z.im)
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }
}

/// Structural classes a weight matrix may belong to. A matrix can carry
/// several at once.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Hermitian,
    SkewHermitian,
    BraidedHermitian,
    BraidedSkewHermitian,
    SymmetricComplex,
    AntisymmetricComplex,
    Unstructured,
}

/// A complex-valued Hopfield network `(M, T)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Network {
    weights: ComplexMatrix,
    thresholds: Vec<Complex64>,
}

impl Network {
    pub fn new(weights: ComplexMatrix, thresholds: Vec<Complex64>) -> Result<Self> {
        if thresholds.len() != weights.n() {
            return Err(Error::DimensionMismatch { expected: weights.n(), got: thresholds.len() });
        }
        if weights.as_slice().iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite { context: "weights" });
        }
        if thresholds.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite { context: "thresholds" });
        }
        Ok(Network { weights, thresholds })
    }

    /// Network with all-zero thresholds.
    pub fn without_thresholds(weights: ComplexMatrix) -> Result<Self> {
        let n = weights.n();
        Network::new(weights, vec![Complex64::new(0.0, 0.0); n])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &ComplexMatrix {
        &self.weights
    }

    pub fn thresholds(&self) -> &[Complex64] {
        &self.thresholds
    }

    fn check_len(&self, s: &StateVector) -> Result<()> {
        if s.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: s.len() });
        }
        Ok(())
    }

    /// `Σ_j M_ij s_j − T_i`, summed in ascending `j`.
    pub fn local_field(&self, s: &StateVector, i: usize) -> Result<Complex64> {
        self.check_len(s)?;
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(self.field_unchecked(s.components(), i))
    }

    #[inline]
    pub(crate) fn field_unchecked(&self, s: &[QuadState], i: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, q) in self.weights.row(i).iter().zip(s) {
            acc += m * q.to_complex();
        }
        acc - self.thresholds[i]
    }

    /// `Σ_i conj(a_i) (Σ_j M_ij b_j)` in ascending index order.
    fn bilinear(&self, a: &StateVector, b: &StateVector) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, qa) in a.components().iter().enumerate() {
            let mut row = Complex64::new(0.0, 0.0);
            for (m, qb) in self.weights.row(i).iter().zip(b.components()) {
                row += m * qb.to_complex();
            }
            acc += qa.to_complex().conj() * row;
        }
        acc
    }

    /// `E_S(s) = −Re(s* M s − 2 s* T)`.
    pub fn energy_serial(&self, s: &StateVector) -> Result<f64> {
        self.check_len(s)?;
        let quad = self.bilinear(s, s);
        let mut lin = Complex64::new(0.0, 0.0);
        for (q, t) in s.components().iter().zip(&self.thresholds) {
            lin += (q.to_complex() + q.to_complex()).conj() * t;
        }
        Ok(-(quad - lin).re)
    }

    /// `E_P(s1, s2) = −Re(s1* M s2 − (s1 + s2)* T)`.
    ///
    /// Uses the same summation order as [`Network::energy_serial`], so
    /// `energy_parallel(s, s) == energy_serial(s)` holds bit for bit.
    pub fn energy_parallel(&self, s1: &StateVector, s2: &StateVector) -> Result<f64> {
        self.check_len(s1)?;
        self.check_len(s2)?;
        let quad = self.bilinear(s1, s2);
        let mut lin = Complex64::new(0.0, 0.0);
        for ((a, b), t) in s1.components().iter().zip(s2.components()).zip(&self.thresholds) {
            lin += (a.to_complex() + b.to_complex()).conj() * t;
        }
        Ok(-(quad - lin).re)
    }

    /// `s* M s` without taking the real part.
    pub fn quadratic_form(&self, s: &StateVector) -> Result<Complex64> {
        self.check_len(s)?;
        Ok(self.bilinear(s, s))
    }
}
