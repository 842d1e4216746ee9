//! Spin observables as harmonic components of their classical symbol, the Q
//! and P symbols, and expectation values computed geometrically.
//!
//! With `A_cl = Σ_ℓ A_ℓ` on the unit sphere, the Q symbol is `Σ α_{J,ℓ} A_ℓ`
//! and the P symbol `Σ β_{J,ℓ} A_ℓ`, both truncated at `ℓ = 2J`. Then
//! `⟨ψ|Â|ψ⟩ = (2J+1) Σ_ℓ ⟨Q_ψ,ℓ  β_{J,ℓ} A_ℓ⟩` over the sphere.

use alloc::vec::Vec;

use crate::harmonic::{self, inner_product_weight, trace_norm, trace_pair_weight, HarmonicError, HarmonicTensor};
use crate::legendre::{factorial, to_f64, Rational};
use crate::multipole::{self, MultipoleError};
use crate::oracle::{self, OracleError};
use crate::spinstate::{husimi_harmonic_components, SpinError, SpinState};
use crate::symtensor::{ScalarKind, SymTensor};
use crate::vec3::{dot, Vec3};
use crate::MAX_ORDER;

/// Components smaller than this fraction of the largest one are skipped by
/// the skeleton route.
pub const NEGLIGIBLE_COMPONENT: f64 = 1e-14;
/// Relative trace tolerance for observable components.
pub const COMPONENT_TRACE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("observable components must be real")]
    ComplexComponent,
    #[error("observable component of order {0} is not traceless")]
    NotTraceless(usize),
    #[error("rank {0} exceeds the supported maximum")]
    RankTooLarge(usize),
    #[error("expected a {expected:?} symbol, got {got:?}")]
    KindMismatch { expected: SymbolKind, got: SymbolKind },
    #[error("cannot convert to the classical kind with to_symbol")]
    ClassicalTarget,
    #[error("observable order {order} exceeds 2J = {two_j}")]
    OrderAboveBand { order: usize, two_j: usize },
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Multipole(#[from] MultipoleError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Classical,
    Q,
    P,
}

/// Real harmonic components of a function on the unit sphere, one per
/// order, sorted by order, tagged with the kind of symbol they represent.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalObservable {
    kind: SymbolKind,
    components: Vec<HarmonicTensor>,
}

impl ClassicalObservable {
    /// Checks every component is real and traceless; components of equal
    /// order are summed.
    pub fn new(kind: SymbolKind, components: Vec<HarmonicTensor>) -> Result<Self, OperatorError> {
        let mut out: Vec<HarmonicTensor> = Vec::new();
        for h in components {
            let t = h.tensor();
            if t.rank() > MAX_ORDER {
                return Err(OperatorError::RankTooLarge(t.rank()));
            }
            if !t.is_numerically_real() {
                return Err(OperatorError::ComplexComponent);
            }
            if trace_norm(t) > COMPONENT_TRACE_TOLERANCE * t.max_abs().max(1.0) {
                return Err(OperatorError::NotTraceless(t.rank()));
            }
            let h = HarmonicTensor::new_unchecked(t.real_part());
            match out.iter_mut().find(|c| c.order() == h.order()) {
                Some(c) => *c = HarmonicTensor::new_unchecked(c.tensor() + h.tensor()),
                None => out.push(h),
            }
        }
        out.sort_by_key(|h| h.order());
        Ok(ClassicalObservable { kind, components: out })
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> Self {
        ClassicalObservable {
            kind: SymbolKind::Classical,
            components: alloc::vec![HarmonicTensor::new_unchecked(SymTensor::real_scalar(c))],
        }
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn components(&self) -> &[HarmonicTensor] {
        &self.components
    }

    pub fn component(&self, l: usize) -> Option<&HarmonicTensor> {
        self.components.iter().find(|h| h.order() == l)
    }

    /// Highest order carrying a nonzero component.
    pub fn max_order(&self) -> Option<usize> {
        self.components.iter().filter(|h| !h.tensor().is_zero()).map(|h| h.order()).max()
    }

    /// Value on the unit sphere.
    pub fn evaluate(&self, n: &Vec3) -> f64 {
        self.components.iter().map(|h| h.eval_spherical(n).re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        ClassicalObservable { kind: self.kind, components: self.components.iter().map(|h| h.scale_real(s)).collect() }
    }

    /// Sum of two symbols of the same kind.
    pub fn try_add(&self, other: &Self) -> Result<Self, OperatorError> {
        if self.kind != other.kind {
            return Err(OperatorError::KindMismatch { expected: self.kind, got: other.kind });
        }
        let mut all = self.components.clone();
        all.extend(other.components.iter().cloned());
        ClassicalObservable::new(self.kind, all)
    }
}

/// Classical observable of a real homogeneous polynomial in `(j_x, j_y, j_z)`,
/// restricted to the unit sphere.
pub fn classical_from_polynomial(poly: &SymTensor) -> Result<ClassicalObservable, OperatorError> {
    classical_from_polynomials(core::slice::from_ref(poly))
}

/// Classical observable of a sum of homogeneous polynomials of any degrees.
pub fn classical_from_polynomials(polys: &[SymTensor]) -> Result<ClassicalObservable, OperatorError> {
    let mut comps = Vec::new();
    for p in polys {
        if p.rank() > MAX_ORDER {
            return Err(OperatorError::RankTooLarge(p.rank()));
        }
        if p.kind() == ScalarKind::Complex && !p.is_numerically_real() {
            return Err(OperatorError::ComplexComponent);
        }
        comps.extend(harmonic::harmonic_components(&p.real_part())?);
    }
    ClassicalObservable::new(SymbolKind::Classical, comps)
}

fn falling(top: usize, count: usize) -> i128 {
    (0..count).map(|k| (top - k) as i128).product()
}

/// `α_{J,ℓ} = (2J)! / (2^ℓ (2J-ℓ)!)`, zero for `ℓ > 2J`.
pub fn alpha(two_j: usize, l: usize) -> Rational {
    if l > two_j {
        return Rational::from_integer(0);
    }
    Rational::new(falling(two_j, l), 1i128 << l)
}

/// `β_{J,ℓ} = (2J+ℓ+1)! / (2^ℓ (2J+1)!)`, zero for `ℓ > 2J`.
pub fn beta(two_j: usize, l: usize) -> Rational {
    if l > two_j {
        return Rational::from_integer(0);
    }
    Rational::new(falling(two_j + l + 1, l), 1i128 << l)
}

/// The tables converting classical symbols into Q and P symbols. Swappable so
/// that the self-check can be run against a deliberately wrong table.
#[derive(Debug, Clone, Copy)]
pub struct SymbolCoefficients {
    pub alpha: fn(usize, usize) -> Rational,
    pub beta: fn(usize, usize) -> Rational,
}

impl SymbolCoefficients {
    pub const EXACT: SymbolCoefficients = SymbolCoefficients { alpha, beta };
}

impl Default for SymbolCoefficients {
    fn default() -> Self {
        SymbolCoefficients::EXACT
    }
}

/// Q or P symbol of a classical observable; orders above `2J` are dropped.
pub fn to_symbol(
    obs: &ClassicalObservable,
    two_j: usize,
    kind: SymbolKind,
) -> Result<ClassicalObservable, OperatorError> {
    to_symbol_with(obs, two_j, kind, &SymbolCoefficients::EXACT)
}

/// [`to_symbol`] with explicit coefficient tables.
pub fn to_symbol_with(
    obs: &ClassicalObservable,
    two_j: usize,
    kind: SymbolKind,
    table: &SymbolCoefficients,
) -> Result<ClassicalObservable, OperatorError> {
    if obs.kind != SymbolKind::Classical {
        return Err(OperatorError::KindMismatch { expected: SymbolKind::Classical, got: obs.kind });
    }
    let f = match kind {
        SymbolKind::Classical => return Err(OperatorError::ClassicalTarget),
        SymbolKind::Q => table.alpha,
        SymbolKind::P => table.beta,
    };
    let components = obs
        .components
        .iter()
        .filter(|h| h.order() <= two_j)
        .map(|h| h.scale_real(to_f64(&f(two_j, h.order()))))
        .collect();
    Ok(ClassicalObservable { kind, components })
}

/// Classical observable behind a Q or P symbol (orders up to `2J`).
pub fn to_classical(symbol: &ClassicalObservable, two_j: usize) -> Result<ClassicalObservable, OperatorError> {
    to_classical_with(symbol, two_j, &SymbolCoefficients::EXACT)
}

fn to_classical_with(
    symbol: &ClassicalObservable,
    two_j: usize,
    table: &SymbolCoefficients,
) -> Result<ClassicalObservable, OperatorError> {
    let f = match symbol.kind {
        SymbolKind::Classical => return Ok(symbol.clone()),
        SymbolKind::Q => table.alpha,
        SymbolKind::P => table.beta,
    };
    let mut components = Vec::new();
    for h in &symbol.components {
        if h.order() > two_j {
            if h.tensor().is_zero() {
                continue;
            }
            return Err(OperatorError::OrderAboveBand { order: h.order(), two_j });
        }
        components.push(h.scale_real(1.0 / to_f64(&f(two_j, h.order()))));
    }
    Ok(ClassicalObservable { kind: SymbolKind::Classical, components })
}

/// P-symbol components of an observable of any kind, rejecting nonzero
/// orders above `2J`.
fn p_components(
    obs: &ClassicalObservable,
    two_j: usize,
    table: &SymbolCoefficients,
) -> Result<Vec<HarmonicTensor>, OperatorError> {
    if let Some(l) = obs.max_order() {
        if l > two_j {
            return Err(OperatorError::OrderAboveBand { order: l, two_j });
        }
    }
    let classical = to_classical_with(obs, two_j, table)?;
    Ok(to_symbol_with(&classical, two_j, SymbolKind::P, table)?.components)
}

/// `⟨ψ|Â|ψ⟩ = (2J+1) Σ_ℓ ⟨Q_ψ,ℓ  P_ℓ⟩` by harmonic inner products.
pub fn expectation_tensor(psi: &SpinState, obs: &ClassicalObservable) -> Result<f64, OperatorError> {
    expectation_tensor_with(psi, obs, &SymbolCoefficients::EXACT)
}

/// [`expectation_tensor`] with explicit coefficient tables.
pub fn expectation_tensor_with(
    psi: &SpinState,
    obs: &ClassicalObservable,
    table: &SymbolCoefficients,
) -> Result<f64, OperatorError> {
    let two_j = psi.two_j();
    let p = p_components(obs, two_j, table)?;
    let q = husimi_harmonic_components(psi)?;
    let mut acc = 0.0;
    for a in &p {
        acc += harmonic::harmonic_inner_product(&q[a.order()], a)?.re;
    }
    Ok((two_j + 1) as f64 * acc)
}

/// `⟨ψ|Â|ψ⟩` from multipole vectors alone:
/// `(2J+1) Σ_ℓ ℓ!/(2ℓ+1)!! Σ_p (p_{ℓ,p}/p_{ℓ,0}) Q^{(ℓ,p)} : A^{(ℓ,p)}`,
/// where `Q^{(ℓ)}` and `A^{(ℓ)}` are the products of the multipole vectors of
/// `Q_ψ,ℓ` and `P_ℓ`, each of length `scale^{1/ℓ}`.
pub fn expectation_skeleton(psi: &SpinState, obs: &ClassicalObservable) -> Result<f64, OperatorError> {
    let two_j = psi.two_j();
    let p = p_components(obs, two_j, &SymbolCoefficients::EXACT)?;
    let q = husimi_harmonic_components(psi)?;
    let q_max = q.iter().map(|h| h.tensor().max_abs()).fold(0.0, f64::max);
    let p_max = p.iter().map(|h| h.tensor().max_abs()).fold(0.0, f64::max);
    let mut acc = 0.0;
    for a in &p {
        let l = a.order();
        let qa = &q[l];
        if a.tensor().max_abs() <= NEGLIGIBLE_COMPONENT * p_max || qa.tensor().max_abs() <= NEGLIGIBLE_COMPONENT * q_max
        {
            continue;
        }
        if l == 0 {
            acc += qa.tensor().scalar_value().re * a.tensor().scalar_value().re;
            continue;
        }
        let sq = multipole::sylvester_decompose(qa)?;
        let sa = multipole::sylvester_decompose(a)?;
        let sign = f64::from(sq.sign() * sa.sign());
        acc += inner_product_weight(l)
            * sign
            * harmonic_contraction_from_vectors(&sq.multipole_vectors(), &sa.multipole_vectors())?;
    }
    Ok((two_j + 1) as f64 * acc)
}

/// `H(⊙q_i) : H(⊙a_i)` for the harmonic parts of two vector products, via
/// `Σ_p (p_{ℓ,p}/p_{ℓ,0}) Q^{(ℓ,p)} : A^{(ℓ,p)}` with every trace expressed
/// through dot products.
///
/// `Q^{(ℓ,p)}` is the mean over the matchings of `p` pairs among the `q_i` of
/// the pair products times the product of the unmatched vectors. Grouping by
/// the unmatched set `R` gives hafnians of the Gram matrix on the complement,
/// and the contraction of two products of `k` vectors is `perm(q_i·a_j)/k!`.
pub fn harmonic_contraction_from_vectors(qs: &[Vec3], as_: &[Vec3]) -> Result<f64, OperatorError> {
    let l = qs.len();
    if as_.len() != l {
        return Err(HarmonicError::OrderMismatch(l, as_.len()).into());
    }
    if l > multipole::MAX_SYLVESTER_ORDER {
        return Err(OperatorError::RankTooLarge(l));
    }
    let haf_q = hafnians(qs);
    let haf_a = hafnians(as_);
    let full = (1usize << l) - 1;
    let mut total = 0.0;
    for p in 0..=l / 2 {
        let k = l - 2 * p;
        let rest: Vec<usize> = (0..=full).filter(|m: &usize| m.count_ones() as usize == k).collect();
        let mut sum = 0.0;
        for &rq in &rest {
            let hq = haf_q[full & !rq];
            if hq == 0.0 {
                continue;
            }
            for &ra in &rest {
                let ha = haf_a[full & !ra];
                if ha == 0.0 {
                    continue;
                }
                sum += hq * ha * permanent(qs, rq, as_, ra);
            }
        }
        // mean over matchings: p! 2^p k! / ℓ!, squared; perm / k!
        let w = (factorial(p as u32) as f64) * 2f64.powi(p as i32) * (factorial(k as u32) as f64)
            / factorial(l as u32) as f64;
        let pair = w * w * sum / factorial(k as u32) as f64;
        total += to_f64(&trace_pair_weight(l, p)?) * pair;
    }
    Ok(total)
}

/// Hafnian of the Gram matrix restricted to every vertex subset (zero for odd
/// subsets), indexed by bitmask.
fn hafnians(v: &[Vec3]) -> Vec<f64> {
    let n = v.len();
    let mut h = alloc::vec![0.0; 1 << n];
    h[0] = 1.0;
    for mask in 1usize..(1 << n) {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << first);
        let mut s = 0.0;
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            s += dot(&v[first], &v[j]) * h[rest & !(1 << j)];
        }
        h[mask] = s;
    }
    h
}

/// Permanent of `[q_i · a_j]` over the selected rows and columns.
fn permanent(qs: &[Vec3], rows: usize, as_: &[Vec3], cols: usize) -> f64 {
    let ri: Vec<usize> = (0..qs.len()).filter(|i| rows >> i & 1 == 1).collect();
    let ci: Vec<usize> = (0..as_.len()).filter(|i| cols >> i & 1 == 1).collect();
    let k = ri.len();
    if k == 0 {
        return 1.0;
    }
    // dynamic programming over used columns, one row at a time
    let mut dp = alloc::vec![0.0; 1 << k];
    dp[0] = 1.0;
    for mask in 0usize..(1 << k) {
        let row = mask.count_ones() as usize;
        if row >= k || dp[mask] == 0.0 {
            continue;
        }
        for (c, &cj) in ci.iter().enumerate() {
            if mask >> c & 1 == 0 {
                dp[mask | 1 << c] += dp[mask] * dot(&qs[ri[row]], &as_[cj]);
            }
        }
    }
    dp[(1 << k) - 1]
}

/// `⟨ψ|Â|ψ⟩` with `Â` the sum of the symmetrized quantizations of the
/// components of a classical observable.
pub fn expectation_oracle(psi: &SpinState, obs: &ClassicalObservable) -> Result<f64, OperatorError> {
    let classical = to_classical(obs, psi.two_j())?;
    let m = oracle::quantize_components(&classical.components, psi.two_j())?;
    Ok(oracle::expectation_matrix(psi, &m)?)
}
