//! Spin-`J` pure states and their geometric pictures: coherent states, the
//! Husimi function and the Majorana constellation.
//!
//! Amplitudes are indexed by `k = J - m`, so `k = 0` is `|J, J⟩`. Coherent
//! states use
//! `a_k(n̂) = √C(2J, k) cos^{2J-k}(θ/2) sin^k(θ/2) e^{ikφ}`,
//! the `2J`-th symmetric power of the spinor `(cos θ/2, sin θ/2 e^{iφ})`.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

use crate::harmonic::{self, HarmonicError, HarmonicTensor};
use crate::quadrature::SphereQuadrature;
use crate::roots::{self, RootError};
use crate::vec3::{self, cross, dot, norm, Vec3};
use crate::MAX_ORDER;

/// Largest `2J` accepted.
pub const MAX_TWO_J: usize = MAX_ORDER;
/// Largest chordal distance over which numerically multiple roots of the
/// Majorana polynomial are merged.
pub const STAR_CLUSTER_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SpinError {
    #[error("expected {expected} amplitudes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("2J = {0} exceeds the supported maximum")]
    SpinTooLarge(usize),
    #[error("the zero vector is not a state")]
    ZeroState,
    #[error("star or direction has zero length")]
    ZeroDirection,
    #[error("two vertices are antipodal; the triangle area is undefined")]
    Antipodal,
    #[error("order {order} exceeds 2J = {two_j}")]
    OrderAboveBand { order: usize, two_j: usize },
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Normalized state in the `|J, m⟩` basis, `m = J, J-1, …, -J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    two_j: usize,
    amplitudes: Vec<Complex64>,
}

/// `2J` unit vectors, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    two_j: usize,
    stars: Vec<Vec3>,
}

fn sqrt_binomials(n: usize) -> Vec<f64> {
    let mut c = alloc::vec![1.0f64; n + 1];
    for k in 1..=n {
        c[k] = c[k - 1] * (n + 1 - k) as f64 / k as f64;
    }
    c.into_iter().map(f64::sqrt).collect()
}

fn check_two_j(two_j: usize) -> Result<(), SpinError> {
    if two_j > MAX_TWO_J {
        return Err(SpinError::SpinTooLarge(two_j));
    }
    Ok(())
}

impl SpinState {
    /// Normalizes `amplitudes`, which must have `2J + 1` entries.
    pub fn new(two_j: usize, amplitudes: Vec<Complex64>) -> Result<Self, SpinError> {
        check_two_j(two_j)?;
        if amplitudes.len() != two_j + 1 {
            return Err(SpinError::WrongLength { expected: two_j + 1, got: amplitudes.len() });
        }
        let n = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(SpinError::ZeroState);
        }
        Ok(SpinState { two_j, amplitudes: amplitudes.into_iter().map(|a| a / n).collect() })
    }

    /// `|J, J - k⟩`.
    pub fn basis(two_j: usize, k: usize) -> Result<Self, SpinError> {
        check_two_j(two_j)?;
        let mut a = alloc::vec![Complex64::zero(); two_j + 1];
        *a.get_mut(k).ok_or(SpinError::WrongLength { expected: two_j + 1, got: k + 1 })? = Complex64::new(1.0, 0.0);
        Ok(SpinState { two_j, amplitudes: a })
    }

    pub fn two_j(&self) -> usize {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j + 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`; zero when the spins differ.
    pub fn inner(&self, other: &SpinState) -> Complex64 {
        if self.two_j != other.two_j {
            return Complex64::zero();
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &SpinState) -> f64 {
        self.inner(other).norm_sqr()
    }
}

impl Constellation {
    /// Normalizes each star; `2J` is the star count.
    pub fn new(stars: Vec<Vec3>) -> Result<Self, SpinError> {
        check_two_j(stars.len())?;
        let mut out = Vec::with_capacity(stars.len());
        for s in &stars {
            let n = norm(s);
            if n == 0.0 || !n.is_finite() {
                return Err(SpinError::ZeroDirection);
            }
            out.push(vec3::scale(s, 1.0 / n));
        }
        Ok(Constellation { two_j: out.len(), stars: out })
    }

    pub fn two_j(&self) -> usize {
        self.two_j
    }

    pub fn stars(&self) -> &[Vec3] {
        &self.stars
    }
}

/// Spin-½ coherent spinor `(cos θ/2, sin θ/2 e^{iφ})`.
pub fn coherent_spinor(n: &Vec3) -> (Complex64, Complex64) {
    let (theta, phi) = vec3::polar_angles(n);
    let (s, c) = (0.5 * theta).sin_cos();
    (Complex64::new(c, 0.0), Complex64::from_polar(s, phi))
}

/// Coherent state `|n̂⟩`, the eigenvector of `J·n̂` with eigenvalue `J`.
pub fn coherent_state(two_j: usize, n: &Vec3) -> Result<SpinState, SpinError> {
    check_two_j(two_j)?;
    if norm(n) == 0.0 {
        return Err(SpinError::ZeroDirection);
    }
    let (u, v) = coherent_spinor(n);
    let sb = sqrt_binomials(two_j);
    let amplitudes = (0..=two_j).map(|k| u.powu((two_j - k) as u32) * v.powu(k as u32) * sb[k]).collect();
    Ok(SpinState { two_j, amplitudes })
}

/// Oriented area of the spherical triangle `(a, b, c)`:
/// `2 arg(1 + a·b + b·c + c·a + i a·(b×c))`, in `(-2π, 2π]`.
pub fn spherical_triangle_area(a: &Vec3, b: &Vec3, c: &Vec3) -> Result<f64, SpinError> {
    let re = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    let im = dot(a, &cross(b, c));
    if re.hypot(im) < 1e-14 {
        return Err(SpinError::Antipodal);
    }
    Ok(2.0 * im.atan2(re))
}

/// `⟨n̂|n̂′⟩ = ((1 + n̂·n̂′)/2)^J e^{iJΣ(ẑ, n̂, n̂′)}`; zero for antipodal
/// directions. When either direction is `-ẑ` the area is undefined and the
/// phase is taken from the spinor product instead.
pub fn overlap_geometric(two_j: usize, n: &Vec3, m: &Vec3) -> Complex64 {
    let (n, m) = (vec3::normalize(n), vec3::normalize(m));
    let half_j = two_j as f64 / 2.0;
    let c = (1.0 + dot(&n, &m)) / 2.0;
    if c <= 0.0 {
        return Complex64::zero();
    }
    match spherical_triangle_area(&vec3::Z, &n, &m) {
        Ok(area) => Complex64::from_polar(c.powf(half_j), half_j * area),
        Err(_) => {
            let (a, b) = coherent_spinor(&n);
            let (p, q) = coherent_spinor(&m);
            (a.conj() * p + b.conj() * q).powu(two_j as u32)
        }
    }
}

/// Husimi function `Q_ψ(n̂) = |⟨n̂|ψ⟩|²`.
pub fn husimi(psi: &SpinState, n: &Vec3) -> f64 {
    match coherent_state(psi.two_j, n) {
        Ok(c) => c.fidelity(psi),
        Err(_) => 0.0,
    }
}

/// Majorana constellation: the antipodes of the `2J` zeros of `⟨n̂|ψ⟩`.
///
/// The zeros are the roots of `Σ_k ψ_k √C(2J, k) ξ^k`; a root `ξ` is the
/// point `w = ξ̄` under stereographic projection from the south pole, and
/// roots at infinity give stars at `ẑ`.
pub fn majorana_stars(psi: &SpinState) -> Result<Constellation, SpinError> {
    let sb = sqrt_binomials(psi.two_j);
    let coeffs: Vec<Complex64> = psi.amplitudes.iter().zip(&sb).map(|(a, s)| a * s).collect();
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(SpinError::ZeroState);
    }
    let mut stars = Vec::with_capacity(psi.two_j);
    for cl in roots::projective_root_clusters(&coeffs, STAR_CLUSTER_RADIUS)? {
        // stereographic from the south pole is the north-pole map of -w
        let zero = match cl.root {
            None => vec3::neg(&vec3::Z),
            Some(xi) => {
                let w = xi.conj();
                vec3::scale(&vec3::inverse_stereographic(Some(-w)), -1.0)
            }
        };
        stars.extend(core::iter::repeat_n(vec3::neg(&zero), cl.multiplicity));
    }
    Ok(Constellation { two_j: psi.two_j, stars })
}

/// State whose constellation is `c`, unique up to a global phase.
///
/// Multiplies the homogeneous factors `(α ξ - β)` of each star, choosing the
/// better conditioned of the two equivalent forms.
pub fn state_from_stars(c: &Constellation) -> Result<SpinState, SpinError> {
    let mut poly = alloc::vec![Complex64::new(1.0, 0.0)];
    for s in &c.stars {
        let (alpha, beta) = if s[2] <= 0.0 {
            (Complex64::new(1.0 - s[2], 0.0), Complex64::new(-s[0], s[1]))
        } else {
            (Complex64::new(s[0], s[1]), Complex64::new(-(1.0 + s[2]), 0.0))
        };
        let mut next = alloc::vec![Complex64::zero(); poly.len() + 1];
        for (k, p) in poly.iter().enumerate() {
            next[k + 1] += p * alpha;
            next[k] -= p * beta;
        }
        poly = next;
    }
    let sb = sqrt_binomials(c.two_j);
    SpinState::new(c.two_j, poly.iter().zip(&sb).map(|(p, s)| p / s).collect())
}

/// Harmonic components `Q_ψ,ℓ` for `ℓ = 0..=2J` of the Husimi function.
pub fn husimi_harmonic_components(psi: &SpinState) -> Result<Vec<HarmonicTensor>, SpinError> {
    let quad = SphereQuadrature::exact_to(3 * psi.two_j);
    (0..=psi.two_j).map(|l| husimi_component_with(&quad, psi, l)).collect()
}

/// The single component `Q_ψ,ℓ`; an error above `2J`.
pub fn husimi_component(psi: &SpinState, l: usize) -> Result<HarmonicTensor, SpinError> {
    if l > psi.two_j {
        return Err(SpinError::OrderAboveBand { order: l, two_j: psi.two_j });
    }
    husimi_component_with(&SphereQuadrature::exact_to(psi.two_j + l), psi, l)
}

fn husimi_component_with(quad: &SphereQuadrature, psi: &SpinState, l: usize) -> Result<HarmonicTensor, SpinError> {
    Ok(harmonic::project_with(quad, |n| husimi(psi, n), l)?)
}
