//! Fully symmetric tensors over R³, stored as homogeneous polynomials.
//!
//! A rank-`n` tensor `A` is kept as the coefficients `c_α` of
//! `A(r) = Σ_α c_α x^p y^q z^s`, one slot per multi-index `α = (p, q, s)` with
//! `p + q + s = n`, in descending lexicographic order. The Cartesian entry for
//! an index multiset with exponents `α` is `c_α / multinomial(n; p, q, s)`.
//! With this storage the symmetrized product is a polynomial product and the
//! traces are powers of the Laplacian.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};
use num_complex::Complex64;
use num_traits::Zero;

use crate::vec3::{complexify, CVec3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum TensorError {
    #[error("cannot take a {fold}-fold trace of a rank-{rank} tensor")]
    FoldTooLarge { fold: usize, rank: usize },
    #[error("cannot contract {pairs} index pairs between ranks {left} and {right}")]
    PairCountTooLarge { pairs: usize, left: usize, right: usize },
    #[error("expected {expected} vectors, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("wrong number of coefficients for rank {rank}: expected {expected}, got {got}")]
    CoefficientCount { rank: usize, expected: usize, got: usize },
}

/// Exponents `(p, q, s)` of `x^p y^q z^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    pub p: usize,
    pub q: usize,
    pub s: usize,
}

impl MultiIndex {
    pub const fn new(p: usize, q: usize, s: usize) -> Self {
        MultiIndex { p, q, s }
    }

    pub fn rank(&self) -> usize {
        self.p + self.q + self.s
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.p, self.q, self.s]
    }

    pub fn from_array(a: [usize; 3]) -> Self {
        MultiIndex::new(a[0], a[1], a[2])
    }

    /// `n! / (p! q! s!)`
    pub fn multinomial(&self) -> f64 {
        factorial_f64(self.rank()) / (factorial_f64(self.p) * factorial_f64(self.q) * factorial_f64(self.s))
    }
}

pub(crate) fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Number of coefficient slots of a rank-`n` tensor.
pub const fn slot_count(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

/// Position of `x^p y^q z^(n-p-q)` in the canonical ordering.
#[inline]
pub const fn slot_index(n: usize, p: usize, q: usize) -> usize {
    (n - p) * (n - p + 1) / 2 + (n - p - q)
}

/// Multi-indices of rank `n`, descending lexicographic.
pub fn multi_indices(n: usize) -> impl Iterator<Item = MultiIndex> {
    (0..=n).rev().flat_map(move |p| (0..=n - p).rev().map(move |q| MultiIndex::new(p, q, n - p - q)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Real,
    Complex,
}

impl ScalarKind {
    pub fn join(self, other: ScalarKind) -> ScalarKind {
        if self == ScalarKind::Complex || other == ScalarKind::Complex {
            ScalarKind::Complex
        } else {
            ScalarKind::Real
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    rank: usize,
    kind: ScalarKind,
    coeffs: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl SymTensor {
    pub fn zero(rank: usize, kind: ScalarKind) -> Self {
        SymTensor { rank, kind, coeffs: alloc::vec![ZERO; slot_count(rank)] }
    }

    pub fn real_scalar(v: f64) -> Self {
        Self::scalar(Complex64::new(v, 0.0), ScalarKind::Real)
    }

    pub fn scalar(v: Complex64, kind: ScalarKind) -> Self {
        SymTensor { rank: 0, kind, coeffs: alloc::vec![v] }
    }

    /// Tensor from polynomial coefficients in canonical order. A real kind
    /// drops any imaginary parts.
    pub fn from_coeffs(rank: usize, kind: ScalarKind, mut coeffs: Vec<Complex64>) -> Result<Self, TensorError> {
        if coeffs.len() != slot_count(rank) {
            return Err(TensorError::CoefficientCount { rank, expected: slot_count(rank), got: coeffs.len() });
        }
        if kind == ScalarKind::Real {
            for c in coeffs.iter_mut() {
                c.im = 0.0;
            }
        }
        Ok(SymTensor { rank, kind, coeffs })
    }

    pub fn from_real_coeffs(rank: usize, coeffs: &[f64]) -> Result<Self, TensorError> {
        Self::from_coeffs(rank, ScalarKind::Real, coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mi: MultiIndex) -> Complex64 {
        debug_assert_eq!(mi.rank(), self.rank);
        self.coeffs[slot_index(self.rank, mi.p, mi.q)]
    }

    pub fn set_coeff(&mut self, mi: MultiIndex, v: Complex64) {
        debug_assert_eq!(mi.rank(), self.rank);
        let v = if self.kind == ScalarKind::Real { Complex64::new(v.re, 0.0) } else { v };
        self.coeffs[slot_index(self.rank, mi.p, mi.q)] = v;
    }

    /// Iterates `(multi-index, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        multi_indices(self.rank).zip(self.coeffs.iter().copied())
    }

    /// Value of a rank-0 tensor (or the leading coefficient otherwise).
    pub fn scalar_value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when every imaginary part vanishes, whatever the kind tag says.
    pub fn is_numerically_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn with_kind(mut self, kind: ScalarKind) -> Self {
        if kind == ScalarKind::Real {
            for c in self.coeffs.iter_mut() {
                c.im = 0.0;
            }
        }
        self.kind = kind;
        self
    }

    pub fn real_part(&self) -> SymTensor {
        self.clone().with_kind(ScalarKind::Real)
    }

    pub fn imag_part(&self) -> SymTensor {
        SymTensor {
            rank: self.rank,
            kind: ScalarKind::Real,
            coeffs: self.coeffs.iter().map(|c| Complex64::new(c.im, 0.0)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> SymTensor {
        let kind = if s.im == 0.0 { self.kind } else { ScalarKind::Complex };
        SymTensor { rank: self.rank, kind, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> SymTensor {
        SymTensor { rank: self.rank, kind: self.kind, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn try_add(&self, other: &SymTensor) -> Result<SymTensor, TensorError> {
        if self.rank != other.rank {
            return Err(TensorError::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(SymTensor {
            rank: self.rank,
            kind: self.kind.join(other.kind),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Rank-1 tensor of a real vector.
    pub fn vector(v: &Vec3) -> SymTensor {
        SymTensor { rank: 1, kind: ScalarKind::Real, coeffs: alloc::vec![v[0].into(), v[1].into(), v[2].into()] }
    }

    pub fn complex_vector(v: &CVec3) -> SymTensor {
        SymTensor { rank: 1, kind: ScalarKind::Complex, coeffs: alloc::vec![v[0], v[1], v[2]] }
    }

    /// `v₁ ⊙ … ⊙ v_n`, i.e. the polynomial `Π (v_i · r)`.
    ///
    /// The factors are multiplied in sorted order, so the result is
    /// bit-identical for every permutation of the input.
    pub fn from_vectors(vectors: &[Vec3]) -> SymTensor {
        let mut sorted: Vec<Vec3> = vectors.to_vec();
        sorted.sort_by(cmp_lex);
        let mut acc = SymTensor::real_scalar(1.0);
        for v in &sorted {
            acc = acc.sym_product(&SymTensor::vector(v));
        }
        acc
    }

    pub fn from_complex_vectors(vectors: &[CVec3]) -> SymTensor {
        let mut sorted: Vec<CVec3> = vectors.to_vec();
        sorted.sort_by(|a, b| {
            let ka = [a[0].re, a[0].im, a[1].re, a[1].im, a[2].re, a[2].im];
            let kb = [b[0].re, b[0].im, b[1].re, b[1].im, b[2].re, b[2].im];
            ka.iter().zip(&kb).map(|(x, y)| x.total_cmp(y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
        });
        let mut acc = SymTensor::scalar(Complex64::new(1.0, 0.0), ScalarKind::Complex);
        for v in &sorted {
            acc = acc.sym_product(&SymTensor::complex_vector(v));
        }
        acc
    }

    /// Fully symmetrized product: the product of the two polynomials.
    pub fn sym_product(&self, other: &SymTensor) -> SymTensor {
        let n = self.rank + other.rank;
        let mut out = SymTensor::zero(n, self.kind.join(other.kind));
        for (a, ca) in self.terms() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.terms() {
                let idx = slot_index(n, a.p + b.p, a.q + b.q);
                out.coeffs[idx] += ca * cb;
            }
        }
        out
    }

    /// `δ^{⊙k}`, the polynomial `(x² + y² + z²)^k`.
    pub fn delta(k: usize) -> SymTensor {
        let d = SymTensor::from_real_coeffs(2, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]).expect("six slots");
        let mut acc = SymTensor::real_scalar(1.0);
        for _ in 0..k {
            acc = acc.sym_product(&d);
        }
        acc
    }

    /// `(r·r)^k A(r)`, i.e. `δ^{⊙k} ⊙ A`.
    pub fn times_delta(&self, k: usize) -> SymTensor {
        if k == 0 {
            self.clone()
        } else {
            self.sym_product(&SymTensor::delta(k))
        }
    }

    /// Partial derivative `∂/∂x_axis` of the polynomial (rank drops by one).
    pub fn partial(&self, axis: usize) -> SymTensor {
        if self.rank == 0 {
            return SymTensor::zero(0, self.kind);
        }
        let n = self.rank - 1;
        let mut out = SymTensor::zero(n, self.kind);
        for (mi, c) in self.terms() {
            let mut e = mi.as_array();
            let k = e[axis];
            if k == 0 {
                continue;
            }
            e[axis] -= 1;
            out.coeffs[slot_index(n, e[0], e[1])] += c * k as f64;
        }
        out
    }

    /// Directional derivative `(v · ∂_r) A(r)`.
    pub fn directional_derivative(&self, v: &CVec3) -> SymTensor {
        let mut out = self.partial(0).scale(v[0]);
        for axis in 1..3 {
            let d = self.partial(axis).scale(v[axis]);
            for (o, c) in out.coeffs.iter_mut().zip(&d.coeffs) {
                *o += c;
            }
            out.kind = out.kind.join(d.kind);
        }
        if self.kind == ScalarKind::Real && v.iter().all(|c| c.im == 0.0) {
            out.kind = ScalarKind::Real;
        }
        out
    }

    /// Polynomial Laplacian; exact integer factors.
    pub fn laplacian(&self) -> SymTensor {
        if self.rank < 2 {
            return SymTensor::zero(0, self.kind);
        }
        let n = self.rank - 2;
        let mut out = SymTensor::zero(n, self.kind);
        for (mi, c) in self.terms() {
            let e = mi.as_array();
            for axis in 0..3 {
                let k = e[axis];
                if k >= 2 {
                    let mut f = e;
                    f[axis] -= 2;
                    out.coeffs[slot_index(n, f[0], f[1])] += c * (k * (k - 1)) as f64;
                }
            }
        }
        out
    }

    /// `p`-fold trace `A^{(n,p)} = ((n-2p)!/n!) Δ^p A`.
    pub fn trace(&self, p: usize) -> Result<SymTensor, TensorError> {
        if 2 * p > self.rank {
            return Err(TensorError::FoldTooLarge { fold: p, rank: self.rank });
        }
        let mut t = self.clone();
        for _ in 0..p {
            t = t.laplacian();
        }
        // n!/(n-2p)! is an integer well inside the exact f64 range
        let falling = ((self.rank - 2 * p + 1)..=self.rank).fold(1.0, |a, k| a * k as f64);
        Ok(t.scale_real(1.0 / falling))
    }

    /// `p`-fold contraction, a rank `n + m - 2p` symmetric tensor.
    ///
    /// Cartesian summation over the `p` shared indices, written through
    /// `Σ_I A_{I K} r^I = ((n-p)!/n!) ∂_K A(r)`; summing over ordered `K`
    /// gives the multinomial weight of each derivative multi-index.
    /// No complex conjugation is applied.
    pub fn contract(&self, other: &SymTensor, p: usize) -> Result<SymTensor, TensorError> {
        let (n, m) = (self.rank, other.rank);
        if p > n.min(m) {
            return Err(TensorError::PairCountTooLarge { pairs: p, left: n, right: m });
        }
        let out_rank = n + m - 2 * p;
        let mut out = SymTensor::zero(out_rank, self.kind.join(other.kind));
        let fa = factorial_f64(n - p) / factorial_f64(n);
        let fb = factorial_f64(m - p) / factorial_f64(m);
        for k in multi_indices(p) {
            let da = self.derivative(k).scale_real(fa);
            let db = other.derivative(k).scale_real(fb);
            let prod = da.sym_product(&db);
            let w = k.multinomial();
            for (o, c) in out.coeffs.iter_mut().zip(&prod.coeffs) {
                *o += c * w;
            }
        }
        Ok(out)
    }

    /// Full contraction `A : B` of equal-rank tensors as a scalar.
    pub fn full_contraction(&self, other: &SymTensor) -> Result<Complex64, TensorError> {
        if self.rank != other.rank {
            return Err(TensorError::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(self
            .terms()
            .zip(other.coeffs.iter())
            .map(|((mi, a), b)| a * b / mi.multinomial())
            .fold(ZERO, |acc, t| acc + t))
    }

    /// Mixed partial `∂_x^p ∂_y^q ∂_z^s`.
    pub fn derivative(&self, k: MultiIndex) -> SymTensor {
        let mut t = self.clone();
        for (axis, count) in k.as_array().iter().enumerate() {
            for _ in 0..*count {
                t = t.partial(axis);
            }
        }
        t
    }

    /// Cartesian entry `A_{i₁…i_n}` for the given index list (each in 0..3).
    pub fn cartesian_entry(&self, indices: &[usize]) -> Result<Complex64, TensorError> {
        if indices.len() != self.rank {
            return Err(TensorError::ArityMismatch { expected: self.rank, got: indices.len() });
        }
        let mut e = [0usize; 3];
        for &i in indices {
            e[i] += 1;
        }
        let mi = MultiIndex::from_array(e);
        Ok(self.coeff(mi) / mi.multinomial())
    }

    /// Multilinear value `A(v₁, …, v_n) = (1/n!) Π (v_k · ∂_r) A(r)`.
    pub fn apply_polarization(&self, vectors: &[Vec3]) -> Result<Complex64, TensorError> {
        let cv: Vec<CVec3> = vectors.iter().map(complexify).collect();
        self.apply_polarization_complex(&cv)
    }

    pub fn apply_polarization_complex(&self, vectors: &[CVec3]) -> Result<Complex64, TensorError> {
        if vectors.len() != self.rank {
            return Err(TensorError::ArityMismatch { expected: self.rank, got: vectors.len() });
        }
        let mut t = self.clone();
        for v in vectors {
            t = t.directional_derivative(v);
        }
        Ok(t.coeffs[0] / factorial_f64(self.rank))
    }

    /// `A(r)`, the homogeneous polynomial value.
    pub fn evaluate(&self, r: &Vec3) -> Complex64 {
        let n = self.rank;
        let pw = |x: f64| {
            let mut v = Vec::with_capacity(n + 1);
            let mut acc = 1.0;
            for _ in 0..=n {
                v.push(acc);
                acc *= x;
            }
            v
        };
        let (px, py, pz) = (pw(r[0]), pw(r[1]), pw(r[2]));
        self.terms().map(|(mi, c)| c * (px[mi.p] * py[mi.q] * pz[mi.s])).fold(ZERO, |a, b| a + b)
    }

    pub fn evaluate_real(&self, r: &Vec3) -> f64 {
        self.evaluate(r).re
    }

    /// `A(r)` at a complex argument.
    pub fn evaluate_complex(&self, r: &CVec3) -> Complex64 {
        self.terms()
            .map(|(mi, c)| c * r[0].powu(mi.p as u32) * r[1].powu(mi.q as u32) * r[2].powu(mi.s as u32))
            .fold(ZERO, |a, b| a + b)
    }

    /// Polynomial `r ↦ A(Mᵀ r)`. For a rotation `R` this is the rotated
    /// tensor `R·A`.
    pub fn rotated(&self, m: &[[f64; 3]; 3]) -> SymTensor {
        // x_i ↦ (Mᵀ r)_i = Σ_j M_{j i} r_j
        let images: [SymTensor; 3] = core::array::from_fn(|i| SymTensor::vector(&[m[0][i], m[1][i], m[2][i]]));
        let powers = |t: &SymTensor| {
            let mut v = Vec::with_capacity(self.rank + 1);
            let mut acc = SymTensor::real_scalar(1.0);
            for _ in 0..=self.rank {
                v.push(acc.clone());
                acc = acc.sym_product(t);
            }
            v
        };
        let (px, py, pz) = (powers(&images[0]), powers(&images[1]), powers(&images[2]));
        let mut out = SymTensor::zero(self.rank, self.kind);
        for (mi, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let term = px[mi.p].sym_product(&py[mi.q]).sym_product(&pz[mi.s]);
            for (o, t) in out.coeffs.iter_mut().zip(&term.coeffs) {
                *o += c * t;
            }
        }
        out
    }
}

fn cmp_lex(a: &Vec3, b: &Vec3) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
}

impl Add for &SymTensor {
    type Output = SymTensor;
    fn add(self, rhs: &SymTensor) -> SymTensor {
        self.try_add(rhs).expect("adding tensors of different rank")
    }
}

impl Sub for &SymTensor {
    type Output = SymTensor;
    fn sub(self, rhs: &SymTensor) -> SymTensor {
        self.try_add(&-rhs).expect("subtracting tensors of different rank")
    }
}

impl Neg for &SymTensor {
    type Output = SymTensor;
    fn neg(self) -> SymTensor {
        self.scale_real(-1.0)
    }
}

impl Mul<f64> for &SymTensor {
    type Output = SymTensor;
    fn mul(self, rhs: f64) -> SymTensor {
        self.scale_real(rhs)
    }
}
