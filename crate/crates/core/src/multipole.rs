//! Maxwell-Sylvester multipole vectors.
//!
//! A real harmonic tensor of order `ℓ` is, up to sign pairs, the harmonic part
//! of `c · û₁ ⊙ … ⊙ û_ℓ` for unit axes `û_i`. [`skeleton_to_harmonic`] is the
//! forward map and [`sylvester_decompose`] recovers the axes by restricting the
//! harmonic polynomial to the null cone, where the trace terms vanish and the
//! polynomial factors into `Π (û_i · m)`.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

use crate::harmonic::{self, harmonic_inner_product, trace_norm, HarmonicError, HarmonicTensor};
use crate::legendre::{double_factorial, factorial};
use crate::roots::{self, RootError};
use crate::symtensor::{ScalarKind, SymTensor};
use crate::vec3::{self, complexify, cross, dot, norm, Vec3};

/// Highest order accepted by [`sylvester_decompose`].
pub const MAX_SYLVESTER_ORDER: usize = 12;
/// Largest relative trace norm accepted by [`sylvester_decompose`].
pub const SYLVESTER_TRACE_TOLERANCE: f64 = 1e-9;
/// Largest distance between a root direction and the antipode of its partner.
pub const PAIRING_TOLERANCE: f64 = 1e-6;
/// Largest chordal distance over which numerically multiple roots are
/// merged before pairing; a cluster of `m` roots stands for an axis of
/// multiplicity `m`.
pub const CLUSTER_RADIUS: f64 = 0.25;
/// Tolerance on `|â|`, `|b̂|` and `â·b̂` for sectorial frames.
pub const FRAME_TOLERANCE: f64 = 1e-10;

const SIGN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MultipoleError {
    #[error("tensor is not traceless (trace norm {0:e})")]
    NotTraceless(f64),
    #[error("cannot decompose the zero tensor")]
    ZeroTensor,
    #[error("order {0} exceeds the Sylvester limit")]
    OrderTooLarge(usize),
    #[error("no antipodal partner for a root direction (distance {0:e})")]
    PairingFailure(f64),
    #[error("skeleton axis has zero length")]
    ZeroAxis,
    #[error("skeleton sign must be +1 or -1, got {0}")]
    BadSign(i8),
    #[error("sectorial frame is not orthonormal")]
    NonOrthonormal,
    #[error("interaction energy needs order at least 1")]
    ZeroOrder,
    #[error("at least 3 samples per circle are needed, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// `ℓ` unit axes, a non-negative scale and an overall sign.
///
/// Axes are canonicalized (first nonzero of z, x, y positive, with each flip
/// toggling the sign) and sorted, so equal skeletons compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct Skeleton {
    axes: Vec<Vec3>,
    scale: f64,
    sign: i8,
}

fn canonical_axis(u: &Vec3) -> (Vec3, bool) {
    for &k in &[2usize, 0, 1] {
        if u[k] > SIGN_THRESHOLD {
            return (*u, false);
        }
        if u[k] < -SIGN_THRESHOLD {
            return (vec3::neg(u), true);
        }
    }
    (*u, false)
}

fn lex_cmp(a: &Vec3, b: &Vec3) -> core::cmp::Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2]))
}

impl Skeleton {
    /// Normalizes the axes (their lengths multiply the scale), folds a
    /// negative scale into the sign and canonicalizes.
    pub fn new(axes: Vec<Vec3>, scale: f64, sign: i8) -> Result<Self, MultipoleError> {
        if sign != 1 && sign != -1 {
            return Err(MultipoleError::BadSign(sign));
        }
        let mut sign = if scale < 0.0 { -sign } else { sign };
        let mut scale = scale.abs();
        let mut out = Vec::with_capacity(axes.len());
        for u in &axes {
            let n = norm(u);
            if n == 0.0 || !n.is_finite() {
                return Err(MultipoleError::ZeroAxis);
            }
            scale *= n;
            let unit = if (n - 1.0).abs() < f64::EPSILON { *u } else { vec3::scale(u, 1.0 / n) };
            let (c, flipped) = canonical_axis(&unit);
            if flipped {
                sign = -sign;
            }
            out.push(c);
        }
        out.sort_by(lex_cmp);
        Ok(Skeleton { axes: out, scale, sign })
    }

    /// Skeleton of `charge · v₁ ⊙ … ⊙ v_ℓ`.
    pub fn from_vectors(vectors: &[Vec3], charge: f64) -> Result<Self, MultipoleError> {
        Skeleton::new(vectors.to_vec(), charge, 1)
    }

    pub fn order(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec3] {
        &self.axes
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Signed scale `sign · scale`.
    pub fn charge(&self) -> f64 {
        f64::from(self.sign) * self.scale
    }

    /// Axes rescaled to length `scale^{1/ℓ}`, so that their product carries
    /// the whole scale. Empty for order 0.
    pub fn multipole_vectors(&self) -> Vec<Vec3> {
        let l = self.order();
        if l == 0 {
            return Vec::new();
        }
        let m = self.scale.powf(1.0 / l as f64);
        self.axes.iter().map(|u| vec3::scale(u, m)).collect()
    }

    /// `sign · scale · ⊙ û_i`, before removing traces.
    pub fn tensor(&self) -> SymTensor {
        SymTensor::from_vectors(&self.axes).scale_real(self.charge())
    }

    /// `sign · scale · Π (û_i · r)`.
    pub fn evaluate(&self, r: &Vec3) -> f64 {
        self.axes.iter().fold(self.charge(), |acc, u| acc * dot(u, r))
    }
}

/// `sign · scale` times the order-`ℓ` harmonic part of `⊙ û_i`.
pub fn skeleton_to_harmonic(s: &Skeleton) -> Result<HarmonicTensor, MultipoleError> {
    Ok(harmonic::harmonic_part(&s.tensor())?)
}

/// Numerator `N` of `Π (û_i·∂)(1/r) = N(r) / r^{2ℓ+1}`, built one derivative
/// at a time: `(u·∂)(N/r^{2k+1}) = (r²(u·∇N) - (2k+1)(u·r)N) / r^{2k+3}`.
pub fn maxwell_numerator(s: &Skeleton) -> SymTensor {
    let mut n = SymTensor::real_scalar(1.0);
    for (k, u) in s.axes.iter().enumerate() {
        let grad = if k == 0 {
            SymTensor::zero(1, ScalarKind::Real)
        } else {
            n.directional_derivative(&complexify(u)).times_delta(1)
        };
        let radial = SymTensor::vector(u).sym_product(&n).scale_real((2 * k + 1) as f64);
        n = &grad - &radial;
    }
    n
}

/// Maxwell's potential `q (-1)^ℓ / ℓ! · Π (û_i·∂)(1/r)` with `q = sign · scale`.
pub fn maxwell_potential(s: &Skeleton, r: &Vec3) -> Result<f64, MultipoleError> {
    let rr = norm(r);
    if rr == 0.0 {
        return Err(HarmonicError::SingularOrigin.into());
    }
    let l = s.order();
    let parity = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pref = s.charge() * parity / factorial(l as u32) as f64;
    Ok(pref * maxwell_numerator(s).evaluate_real(r) / rr.powi(2 * l as i32 + 1))
}

/// `(2ℓ-1)!!/ℓ!`, the ratio between [`maxwell_potential`] and the irregular
/// harmonic of [`skeleton_to_harmonic`].
pub fn maxwell_ratio(l: usize) -> f64 {
    double_factorial(2 * l as i64 - 1) as f64 / factorial(l as u32) as f64
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = alloc::vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_powers(base: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(alloc::vec![Complex64::new(1.0, 0.0)]);
    for k in 1..=n {
        let next = poly_mul(&out[k - 1], base);
        out.push(next);
    }
    out
}

/// Coefficients (ascending, length `2ℓ+1`) of `H(m(z))` on the null curve
/// `m(z) = ((1-z²)/2, -i(1+z²)/2, z)`.
pub fn null_cone_polynomial(h: &SymTensor) -> Vec<Complex64> {
    let l = h.rank();
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, -0.5);
    let mx = [half, Complex64::zero(), -half];
    let my = [ihalf, Complex64::zero(), ihalf];
    let mz = [Complex64::zero(), Complex64::new(1.0, 0.0)];
    let (xp, yp, zp) = (poly_powers(&mx, l), poly_powers(&my, l), poly_powers(&mz, l));
    let mut out = alloc::vec![Complex64::zero(); 2 * l + 1];
    for (mi, c) in h.terms() {
        if c.is_zero() {
            continue;
        }
        let term = poly_mul(&poly_mul(&xp[mi.p], &yp[mi.q]), &zp[mi.s]);
        for (o, t) in out.iter_mut().zip(term) {
            *o += c * t;
        }
    }
    out
}

/// An axis together with the number of coincident root pairs behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisCluster {
    pub axis: Vec3,
    pub multiplicity: usize,
}

/// Full result of a Sylvester decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterDecomposition {
    pub skeleton: Skeleton,
    /// Distinct axes with their multiplicities, canonical and sorted.
    pub clusters: Vec<AxisCluster>,
    /// `max |H - skeleton_to_harmonic(S)| / max |H|`.
    pub residual: f64,
}

/// Multipole vectors of a real harmonic tensor.
pub fn sylvester_decompose(h: &HarmonicTensor) -> Result<Skeleton, MultipoleError> {
    Ok(sylvester_decompose_detailed(h)?.skeleton)
}

/// [`sylvester_decompose`] with the cluster multiplicities and the round-trip
/// residual.
pub fn sylvester_decompose_detailed(h: &HarmonicTensor) -> Result<SylvesterDecomposition, MultipoleError> {
    let t = h.tensor();
    let l = t.rank();
    if l > MAX_SYLVESTER_ORDER {
        return Err(MultipoleError::OrderTooLarge(l));
    }
    let size = t.max_abs();
    if size == 0.0 {
        return Err(MultipoleError::ZeroTensor);
    }
    let tn = trace_norm(t);
    if tn > SYLVESTER_TRACE_TOLERANCE * size.max(1.0) {
        return Err(MultipoleError::NotTraceless(tn));
    }

    let clusters: Vec<(Vec3, usize)> = roots::projective_root_clusters(&null_cone_polynomial(t), CLUSTER_RADIUS)?
        .into_iter()
        .map(|c| (vec3::inverse_stereographic(c.root.map(|w| w.conj())), c.multiplicity))
        .collect();
    let mut used = alloc::vec![false; clusters.len()];
    let mut axes = Vec::with_capacity(l);
    let mut found = Vec::new();
    for i in 0..clusters.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (ci, count) = clusters[i];
        let anti = vec3::neg(&ci);
        let best = (0..clusters.len())
            .filter(|&j| !used[j] && clusters[j].1 == count)
            .map(|j| (j, norm(&vec3::sub(&clusters[j].0, &anti))))
            .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                Some(a) if a.1 <= x.1 => Some(a),
                _ => Some(x),
            });
        let (j, d) = best.ok_or(MultipoleError::PairingFailure(f64::INFINITY))?;
        if d > PAIRING_TOLERANCE {
            return Err(MultipoleError::PairingFailure(d));
        }
        used[j] = true;
        let axis = vec3::normalize(&vec3::sub(&ci, &clusters[j].0));
        let (axis, _) = canonical_axis(&axis);
        axes.extend(core::iter::repeat_n(axis, count));
        found.push(AxisCluster { axis, multiplicity: count });
    }
    found.sort_by(|a, b| lex_cmp(&a.axis, &b.axis));

    // scale and sign by least squares against the unit-charge skeleton
    let unit = Skeleton::new(axes, 1.0, 1)?;
    let basis = skeleton_to_harmonic(&unit)?;
    let num = basis.tensor().full_contraction(t).map_err(HarmonicError::from)?;
    let den = basis.tensor().full_contraction(basis.tensor()).map_err(HarmonicError::from)?;
    let c = num / den;
    if c.im.abs() > 1e-8 * c.norm().max(f64::MIN_POSITIVE) {
        return Err(MultipoleError::PairingFailure(c.im.abs() / c.norm()));
    }
    let skeleton = Skeleton::new(unit.axes, c.re.abs(), if c.re < 0.0 { -unit.sign } else { unit.sign })?;
    let rebuilt = skeleton_to_harmonic(&skeleton)?;
    let diff = t - rebuilt.tensor();
    Ok(SylvesterDecomposition { skeleton, clusters: found, residual: diff.max_abs() / size })
}

fn check_frame(a: &Vec3, b: &Vec3) -> Result<(), MultipoleError> {
    if (norm(a) - 1.0).abs() > FRAME_TOLERANCE
        || (norm(b) - 1.0).abs() > FRAME_TOLERANCE
        || dot(a, b).abs() > FRAME_TOLERANCE
    {
        return Err(MultipoleError::NonOrthonormal);
    }
    Ok(())
}

/// `((â + i b̂) e^{iφ})^{⊙ℓ}`, traceless because `â + i b̂` is null. Its axis
/// is `â × b̂`.
pub fn sectorial(a: &Vec3, b: &Vec3, phi: f64, l: usize) -> Result<HarmonicTensor, MultipoleError> {
    check_frame(a, b)?;
    let e = Complex64::from_polar(1.0, phi);
    let v = [Complex64::new(a[0], b[0]) * e, Complex64::new(a[1], b[1]) * e, Complex64::new(a[2], b[2]) * e];
    let vs = alloc::vec![v; l];
    Ok(HarmonicTensor::new_unchecked(SymTensor::from_complex_vectors(&vs).with_kind(ScalarKind::Complex)))
}

/// Real part of [`sectorial`].
pub fn real_sectorial(a: &Vec3, b: &Vec3, phi: f64, l: usize) -> Result<HarmonicTensor, MultipoleError> {
    Ok(sectorial(a, b, phi, l)?.real_part())
}

/// Cross term of the electrostatic energy of two superposed multipoles of the
/// same order: `⟨A B⟩ / (ℓ(ℓ+1))` (real part).
pub fn interaction_energy(a: &HarmonicTensor, b: &HarmonicTensor) -> Result<f64, MultipoleError> {
    if a.order() != b.order() {
        return Err(HarmonicError::OrderMismatch(a.order(), b.order()).into());
    }
    let l = a.order();
    if l == 0 {
        return Err(MultipoleError::ZeroOrder);
    }
    Ok(harmonic_inner_product(a, b)?.re / (l * (l + 1)) as f64)
}

/// Plot data for a skeleton: one great circle per axis (its nodal circle) and
/// the sign of the skeleton polynomial at the centres of an equiangular cell
/// grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSamples {
    pub circles: Vec<Vec<Vec3>>,
    /// Grid size `(n_theta, n_phi)` of the cell centres.
    pub grid: (usize, usize),
    /// `(centre, sign)` in row-major order over (θ, φ) cells; sign is -1, 0
    /// or 1.
    pub faces: Vec<(Vec3, i8)>,
}

/// Unit vectors `e1`, `e2` completing `u` to a right-handed frame.
pub fn perpendicular_frame(u: &Vec3) -> (Vec3, Vec3) {
    let k = (0..3).min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs())).unwrap_or(0);
    let mut helper = [0.0; 3];
    helper[k] = 1.0;
    let e1 = vec3::normalize(&cross(u, &helper));
    let e2 = cross(u, &e1);
    (e1, e2)
}

/// `count` points on the great circle orthogonal to each axis, plus the
/// face signs on a `(count/2) × count` cell grid.
pub fn great_circle_samples(s: &Skeleton, count: usize) -> Result<CircleSamples, MultipoleError> {
    if count < 3 {
        return Err(MultipoleError::TooFewSamples(count));
    }
    let tau = 2.0 * core::f64::consts::PI;
    let circles = s
        .axes
        .iter()
        .map(|u| {
            let (e1, e2) = perpendicular_frame(u);
            (0..count)
                .map(|k| {
                    let (sn, cs) = (tau * k as f64 / count as f64).sin_cos();
                    vec3::add(&vec3::scale(&e1, cs), &vec3::scale(&e2, sn))
                })
                .collect()
        })
        .collect();
    let (nt, np) = ((count / 2).max(1), count);
    let mut faces = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = core::f64::consts::PI * (i as f64 + 0.5) / nt as f64;
        for j in 0..np {
            let phi = tau * (j as f64 + 0.5) / np as f64;
            let n = vec3::from_polar(theta, phi);
            let v = s.evaluate(&n);
            let sg = if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            };
            faces.push((n, sg));
        }
    }
    Ok(CircleSamples { circles, grid: (nt, np), faces })
}
