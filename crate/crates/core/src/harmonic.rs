//! Canonical decomposition of symmetric tensors into harmonic (traceless)
//! parts, harmonic inner products, sphere integrals and harmonic projection
//! of sampled spherical functions.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

use crate::legendre::{self, double_factorial, factorial, to_f64, Rational};
use crate::quadrature::SphereQuadrature;
use crate::symtensor::{multi_indices, ScalarKind, SymTensor, TensorError};
use crate::vec3::{dot, norm, Vec3};
use crate::MAX_ORDER;

/// Default tolerance on the largest trace coefficient of a harmonic tensor.
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// Highest polynomial degree accepted by [`project_function`].
pub const MAX_BAND_LIMIT: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum HarmonicError {
    #[error("tensor is not traceless (trace norm {0:e})")]
    NotTraceless(f64),
    #[error("rank {0} exceeds the supported maximum")]
    RankTooLarge(usize),
    #[error("components must have ranks descending by two from the top rank")]
    BadRankLadder,
    #[error("harmonic orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("the irregular harmonic is singular at the origin")]
    SingularOrigin,
    #[error("band limit {0} exceeds the supported maximum")]
    BandLimitTooHigh(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A traceless symmetric tensor, equivalently a solid harmonic of order `ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTensor(SymTensor);

/// Largest coefficient of the single trace, scaled by the tensor size when the
/// tensor is large.
pub fn trace_norm(t: &SymTensor) -> f64 {
    if t.rank() < 2 {
        return 0.0;
    }
    t.trace(1).map(|tr| tr.max_abs()).unwrap_or(0.0)
}

impl HarmonicTensor {
    /// Wraps a tensor after checking `max |Tr A| ≤ tol · max(1, max |A|)`.
    pub fn new(t: SymTensor, tol: f64) -> Result<Self, HarmonicError> {
        let tn = trace_norm(&t);
        if tn > tol * t.max_abs().max(1.0) {
            return Err(HarmonicError::NotTraceless(tn));
        }
        Ok(HarmonicTensor(t))
    }

    /// Wraps a tensor known to be traceless by construction.
    pub fn new_unchecked(t: SymTensor) -> Self {
        HarmonicTensor(t)
    }

    pub fn zero(order: usize) -> Self {
        HarmonicTensor(SymTensor::zero(order, ScalarKind::Real))
    }

    pub fn order(&self) -> usize {
        self.0.rank()
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.0
    }

    pub fn into_tensor(self) -> SymTensor {
        self.0
    }

    pub fn scale_real(&self, s: f64) -> HarmonicTensor {
        HarmonicTensor(self.0.scale_real(s))
    }

    pub fn real_part(&self) -> HarmonicTensor {
        HarmonicTensor(self.0.real_part())
    }

    /// `Y(n̂) = H(n̂/|n̂|)`.
    pub fn eval_spherical(&self, n: &Vec3) -> Complex64 {
        let r = norm(n);
        self.0.evaluate(&crate::vec3::scale(n, 1.0 / r))
    }

    /// `H(r)`, the regular solid harmonic.
    pub fn eval_regular(&self, r: &Vec3) -> Complex64 {
        self.0.evaluate(r)
    }

    /// `V(r) = H(r) / r^{2ℓ+1}`, the irregular solid harmonic.
    pub fn eval_irregular(&self, r: &Vec3) -> Result<Complex64, HarmonicError> {
        let rr = norm(r);
        if rr == 0.0 {
            return Err(HarmonicError::SingularOrigin);
        }
        Ok(self.0.evaluate(r) / rr.powi(2 * self.order() as i32 + 1))
    }
}

/// `q_{n,k} p_{n-2k,j}` for the component of order `n - 2k`, exact.
fn decomposition_coefficient(n: usize, k: usize, j: usize) -> Result<Rational, HarmonicError> {
    let q = legendre::monomial_coeffs(n).map_err(|_| HarmonicError::RankTooLarge(n))?;
    let p = legendre::legendre_coeffs(n - 2 * k).map_err(|_| HarmonicError::RankTooLarge(n))?;
    Ok(q[k] * p.get(j))
}

/// Harmonic components `A_(n), A_(n-2), …` with
/// `A = Σ_k A_(n-2k) ⊙ δ^{⊙k}`.
///
/// `A_(n-2k) = q_{n,k} Σ_{p≥k} p_{n-2k,p-k} δ^{⊙(p-k)} ⊙ A^{(n,p)}`, traces
/// taken through the Laplacian and the coefficients formed exactly.
pub fn harmonic_components(a: &SymTensor) -> Result<Vec<HarmonicTensor>, HarmonicError> {
    let n = a.rank();
    if n > MAX_ORDER {
        return Err(HarmonicError::RankTooLarge(n));
    }
    let half = n / 2;
    let traces: Vec<SymTensor> = (0..=half).map(|p| a.trace(p)).collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(half + 1);
    for k in 0..=half {
        let l = n - 2 * k;
        let mut h = SymTensor::zero(l, a.kind());
        for (j, t) in traces.iter().enumerate().skip(k) {
            let c = to_f64(&decomposition_coefficient(n, k, j - k)?);
            let term = t.times_delta(j - k).scale_real(c);
            h = &h + &term;
        }
        out.push(HarmonicTensor(h));
    }
    Ok(out)
}

/// Order-`n` harmonic part of a rank-`n` tensor.
pub fn harmonic_part(a: &SymTensor) -> Result<HarmonicTensor, HarmonicError> {
    Ok(harmonic_components(a)?.swap_remove(0))
}

/// `Σ_k components[k] ⊙ δ^{⊙k}`.
pub fn reconstruct(components: &[HarmonicTensor]) -> Result<SymTensor, HarmonicError> {
    let first = components.first().ok_or(HarmonicError::BadRankLadder)?;
    let n = first.order();
    if n / 2 + 1 != components.len() {
        return Err(HarmonicError::BadRankLadder);
    }
    let mut acc = SymTensor::zero(n, ScalarKind::Real);
    for (k, h) in components.iter().enumerate() {
        if h.order() + 2 * k != n {
            return Err(HarmonicError::BadRankLadder);
        }
        acc = &acc + &h.0.times_delta(k);
    }
    Ok(acc)
}

/// `(1/4π) ∫ Π (a_i·n̂) d²n̂` by the pairing formula: zero for odd counts,
/// otherwise the mean over the `(2m-1)!!` pairings of `Π (a_i·a_j)` divided
/// by `2m + 1`.
pub fn sphere_average_product(vectors: &[Vec3]) -> f64 {
    let n = vectors.len();
    if n % 2 == 1 {
        return 0.0;
    }
    let m = n / 2;
    let idx: Vec<usize> = (0..n).collect();
    let total = sum_over_pairings(vectors, &idx);
    total / double_factorial(2 * m as i64 - 1) as f64 / (2 * m + 1) as f64
}

fn sum_over_pairings(vectors: &[Vec3], idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let first = idx[0];
    let mut total = 0.0;
    for k in 1..idx.len() {
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|(i, _)| *i + 1 != k).map(|(_, v)| *v).collect();
        total += dot(&vectors[first], &vectors[idx[k]]) * sum_over_pairings(vectors, &rest);
    }
    total
}

/// `(1/4π) ∫ n_x^{2p} n_y^{2q} n_z^{2r} d²n̂`, exact.
pub fn monomial_sphere_integral(p: usize, q: usize, r: usize) -> Rational {
    let f = |k: usize| Rational::new(factorial(2 * k as u32), factorial(k as u32));
    let s = p + q + r;
    f(p) * f(q) * f(r) * Rational::new(factorial(s as u32), factorial(2 * s as u32 + 1))
}

/// `(1/4π) ∫ A(n̂) d²n̂` of a polynomial, exact monomial by monomial.
pub fn sphere_average_polynomial(a: &SymTensor) -> Complex64 {
    a.terms()
        .filter(|(mi, _)| mi.p % 2 == 0 && mi.q % 2 == 0 && mi.s % 2 == 0)
        .map(|(mi, c)| c * to_f64(&monomial_sphere_integral(mi.p / 2, mi.q / 2, mi.s / 2)))
        .fold(Complex64::zero(), |a, b| a + b)
}

/// `n! / (2n+1)!!` as a float.
pub fn inner_product_weight(n: usize) -> f64 {
    to_f64(&Rational::new(factorial(n as u32), double_factorial(2 * n as i64 + 1)))
}

/// `⟨A B⟩ = (1/4π) ∫ A(n̂) B(n̂) d²n̂ = (n!/(2n+1)!!) A : B` (bilinear, no
/// conjugation).
pub fn harmonic_inner_product(a: &HarmonicTensor, b: &HarmonicTensor) -> Result<Complex64, HarmonicError> {
    if a.order() != b.order() {
        return Err(HarmonicError::OrderMismatch(a.order(), b.order()));
    }
    let n = a.order();
    Ok(a.0.full_contraction(&b.0)? * inner_product_weight(n))
}

/// `p_{n,p}/p_{n,0}`, the weight of `A^{(n,p)} : B^{(n,p)}` in
/// [`harmonic_contraction_via_traces`].
pub fn trace_pair_weight(n: usize, p: usize) -> Result<Rational, HarmonicError> {
    let t = legendre::legendre_coeffs(n).map_err(|_| HarmonicError::RankTooLarge(n))?;
    Ok(t.get(p) / t.get(0))
}

/// `A_(n) : B_(n) = Σ_p (p_{n,p}/p_{n,0}) A^{(n,p)} : B^{(n,p)}`, without
/// extracting either harmonic part.
pub fn harmonic_contraction_via_traces(a: &SymTensor, b: &SymTensor) -> Result<Complex64, HarmonicError> {
    if a.rank() != b.rank() {
        return Err(HarmonicError::OrderMismatch(a.rank(), b.rank()));
    }
    let n = a.rank();
    if n > MAX_ORDER {
        return Err(HarmonicError::RankTooLarge(n));
    }
    let mut acc = Complex64::zero();
    for p in 0..=n / 2 {
        let w = to_f64(&trace_pair_weight(n, p)?);
        acc += a.trace(p)?.full_contraction(&b.trace(p)?)? * w;
    }
    Ok(acc)
}

/// Order-`ℓ` harmonic component of a spherical function that is a polynomial
/// of degree `≤ band_limit` in `n̂`:
/// `f_ℓ(n̂) = ((2ℓ+1)/4π) ∫ f(û) P_ℓ(û·n̂) d²û`.
pub fn project_function<F: FnMut(&Vec3) -> f64>(
    f: F,
    l: usize,
    band_limit: usize,
) -> Result<HarmonicTensor, HarmonicError> {
    if band_limit > MAX_BAND_LIMIT {
        return Err(HarmonicError::BandLimitTooHigh(band_limit));
    }
    if l > MAX_ORDER {
        return Err(HarmonicError::RankTooLarge(l));
    }
    let quad = SphereQuadrature::exact_to(band_limit + l);
    project_with(&quad, f, l)
}

/// [`project_function`] with a caller-supplied quadrature, which must be
/// exact to degree `band_limit + ℓ`.
///
/// Uses `r^ℓ P_ℓ(û·r̂) = p_{ℓ,0} H_ℓ(û^{⊙ℓ})(r)`: the projection is
/// `(2ℓ+1) p_{ℓ,0}` times the harmonic part of the moment tensor
/// `(1/4π) ∫ f(û) û^{⊙ℓ}`.
pub fn project_with<F: FnMut(&Vec3) -> f64>(
    quad: &SphereQuadrature,
    mut f: F,
    l: usize,
) -> Result<HarmonicTensor, HarmonicError> {
    if l > MAX_ORDER {
        return Err(HarmonicError::RankTooLarge(l));
    }
    let indices: Vec<_> = multi_indices(l).collect();
    let weights: Vec<f64> = indices.iter().map(|mi| mi.multinomial()).collect();
    let mut moment = alloc::vec![0.0; indices.len()];
    for (u, w) in quad.nodes() {
        let fw = f(u) * w;
        if fw == 0.0 {
            continue;
        }
        for ((m, mi), mw) in moment.iter_mut().zip(&indices).zip(&weights) {
            *m += fw * mw * u[0].powi(mi.p as i32) * u[1].powi(mi.q as i32) * u[2].powi(mi.s as i32);
        }
    }
    let moment = SymTensor::from_real_coeffs(l, &moment)?;
    let p0 = to_f64(&legendre::legendre_coeffs(l).map_err(|_| HarmonicError::RankTooLarge(l))?.get(0));
    Ok(harmonic_part(&moment)?.scale_real((2 * l + 1) as f64 * p0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symtensor::slot_count;
    use crate::vec3::{normalize, Z};
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_tensor(rng: &mut ChaCha8Rng, n: usize) -> SymTensor {
        let v: Vec<f64> = (0..slot_count(n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymTensor::from_real_coeffs(n, &v).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng) -> Vec3 {
        [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
    }

    fn max_diff(a: &SymTensor, b: &SymTensor) -> f64 {
        a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    fn zz_traceless() -> SymTensor {
        &SymTensor::from_vectors(&[Z, Z]) - &SymTensor::delta(1).scale_real(1.0 / 3.0)
    }

    #[test]
    fn components_of_b_squared() {
        let b = [0.3, -1.2, 0.8];
        let bb = dot(&b, &b);
        let comps = harmonic_components(&SymTensor::from_vectors(&[b, b])).unwrap();
        assert_eq!(comps.len(), 2);
        let want2 = &SymTensor::from_vectors(&[b, b]) - &SymTensor::delta(1).scale_real(bb / 3.0);
        assert!(max_diff(comps[0].tensor(), &want2) < 1e-15);
        assert!((comps[1].tensor().scalar_value().re - bb / 3.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_input_is_fixed_point() {
        let h = zz_traceless();
        let comps = harmonic_components(&h).unwrap();
        assert!(max_diff(comps[0].tensor(), &h) < 1e-16);
        assert!(comps[1].tensor().max_abs() < 1e-16);
        let d = harmonic_components(&SymTensor::delta(1)).unwrap();
        assert!(d[0].tensor().max_abs() < 1e-16);
        assert!((d[1].tensor().scalar_value().re - 1.0).abs() < 1e-16);
    }

    #[test]
    fn round_trip_and_tracelessness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=8 {
            for _ in 0..20 {
                let a = random_tensor(&mut rng, n);
                let comps = harmonic_components(&a).unwrap();
                for c in &comps {
                    assert!(trace_norm(c.tensor()) < 1e-12, "n={n}");
                }
                let back = reconstruct(&comps).unwrap();
                assert!(max_diff(&back, &a) < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn reconstruct_small_cases() {
        let h = HarmonicTensor::new(zz_traceless(), TRACE_TOLERANCE).unwrap();
        let back = reconstruct(&[h.clone(), HarmonicTensor::zero(0)]).unwrap();
        assert_eq!(&back, h.tensor());
        let one = HarmonicTensor::new_unchecked(SymTensor::real_scalar(1.0));
        assert_eq!(reconstruct(&[HarmonicTensor::zero(2), one.clone()]).unwrap(), SymTensor::delta(1));
        assert_eq!(reconstruct(&[h.clone(), h.clone()]), Err(HarmonicError::BadRankLadder));
        assert_eq!(reconstruct(&[h]), Err(HarmonicError::BadRankLadder));
        assert_eq!(reconstruct(&[]), Err(HarmonicError::BadRankLadder));
    }

    #[test]
    fn not_traceless_is_rejected() {
        assert!(matches!(
            HarmonicTensor::new(SymTensor::from_vectors(&[Z, Z]), TRACE_TOLERANCE),
            Err(HarmonicError::NotTraceless(_))
        ));
        assert!(harmonic_components(&SymTensor::zero(17, ScalarKind::Real)).is_err());
    }

    #[test]
    fn spherical_regular_irregular_consistency() {
        let dip = HarmonicTensor::new_unchecked(SymTensor::vector(&Z));
        let r = [0.3, -0.4, 1.2];
        let rn = norm(&r);
        assert!((dip.eval_irregular(&r).unwrap().re - r[2] / rn.powi(3)).abs() < 1e-15);
        assert_eq!(dip.eval_irregular(&[0.0; 3]), Err(HarmonicError::SingularOrigin));

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for l in 0..7 {
            let h = harmonic_part(&random_tensor(&mut rng, l)).unwrap();
            let r = random_vec(&mut rng);
            let rn = norm(&r);
            let reg = h.eval_regular(&r).re;
            let sph = h.eval_spherical(&r).re;
            let irr = h.eval_irregular(&r).unwrap().re;
            assert!((reg - rn.powi(l as i32) * sph).abs() <= 1e-13 * reg.abs().max(1e-3));
            assert!((reg - rn.powi(2 * l as i32 + 1) * irr).abs() <= 1e-13 * reg.abs().max(1e-3));
            // scaling of the direction does not matter
            let s = h.eval_spherical(&crate::vec3::scale(&r, 3.7)).re;
            assert!((s - sph).abs() < 1e-13);
        }
    }

    #[test]
    fn sphere_average_examples() {
        let a = [0.3, 0.5, -0.2];
        let b = [1.0, 0.1, 0.4];
        assert!((sphere_average_product(&[a, b]) - dot(&a, &b) / 3.0).abs() < 1e-16);
        assert!((sphere_average_product(&[Z, Z, Z, Z]) - 0.2).abs() < 1e-16);
        assert_eq!(sphere_average_product(&[a, b, a]), 0.0);
        assert_eq!(sphere_average_product(&[]), 1.0);
    }

    #[test]
    fn monomial_integral_examples() {
        assert_eq!(monomial_sphere_integral(0, 0, 0), Rational::from_integer(1));
        assert_eq!(monomial_sphere_integral(0, 0, 1), Rational::new(1, 3));
        assert_eq!(monomial_sphere_integral(1, 1, 0), Rational::new(1, 15));
        let q = SphereQuadrature::exact_to(12);
        for (p, qq, r) in [(1, 1, 0), (2, 1, 3), (0, 3, 1), (2, 2, 2)] {
            let quad = q.average(|n| n[0].powi(2 * p as i32) * n[1].powi(2 * qq as i32) * n[2].powi(2 * r as i32));
            assert!((quad - to_f64(&monomial_sphere_integral(p, qq, r))).abs() < 1e-15);
        }
    }

    #[test]
    fn pairing_formula_against_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=8 {
            let vs: Vec<Vec3> = (0..n).map(|_| random_vec(&mut rng)).collect();
            let q = SphereQuadrature::exact_to(n);
            let quad = q.average(|u| vs.iter().map(|a| dot(a, u)).product());
            let pair = sphere_average_product(&vs);
            assert!((quad - pair).abs() < 1e-10 * (1.0 + pair.abs()), "n={n}");
        }
    }

    #[test]
    fn inner_product_examples() {
        let h = HarmonicTensor::new_unchecked(zz_traceless());
        let v = harmonic_inner_product(&h, &h).unwrap().re;
        assert!((v - 4.0 / 45.0).abs() < 1e-16);
        let q = SphereQuadrature::exact_to(4);
        let quad = q.average(|n| (n[2] * n[2] - 1.0 / 3.0).powi(2));
        assert!((quad - 4.0 / 45.0).abs() < 1e-16);
        let zero = HarmonicTensor::zero(2);
        assert_eq!(harmonic_inner_product(&zero, &h).unwrap().re, 0.0);
        let h4 = harmonic_part(&SymTensor::from_vectors(&[[1.0, 2.0, 0.0], Z, Z, [0.0, 1.0, 1.0]])).unwrap();
        assert_eq!(harmonic_inner_product(&h, &h4), Err(HarmonicError::OrderMismatch(2, 4)));
        // orthogonality across orders
        let q = SphereQuadrature::exact_to(6);
        let cross = q.average(|n| h.eval_spherical(n).re * h4.eval_spherical(n).re);
        assert!(cross.abs() < 1e-15);
    }

    #[test]
    fn contraction_via_traces() {
        let zz = SymTensor::from_vectors(&[Z, Z]);
        let v = harmonic_contraction_via_traces(&zz, &zz).unwrap().re;
        assert!((v - 2.0 / 3.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in 0..=6 {
            let a = random_tensor(&mut rng, n);
            let b = random_tensor(&mut rng, n);
            let ha = harmonic_part(&a).unwrap();
            let hb = harmonic_part(&b).unwrap();
            let direct = ha.tensor().full_contraction(hb.tensor()).unwrap().re;
            let traces = harmonic_contraction_via_traces(&a, &b).unwrap().re;
            assert!((direct - traces).abs() <= 1e-10 * direct.abs().max(1e-3), "n={n}");
            // traceless argument: corrections vanish
            let mixed = ha.tensor().full_contraction(&b).unwrap().re;
            assert!((mixed - direct).abs() <= 1e-10 * direct.abs().max(1e-3));
            let via = harmonic_contraction_via_traces(ha.tensor(), &b).unwrap().re;
            assert!((via - direct).abs() <= 1e-10 * direct.abs().max(1e-3));
        }
    }

    #[test]
    fn weights_match_closed_form() {
        for n in 0..=MAX_ORDER {
            for p in 0..=n / 2 {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let num = sign * factorial(n as u32) * double_factorial(2 * n as i64 - 2 * p as i64 - 1);
                let den = (1i128 << p)
                    * factorial(p as u32)
                    * double_factorial(2 * n as i64 - 1)
                    * factorial((n - 2 * p) as u32);
                assert_eq!(trace_pair_weight(n, p).unwrap(), Rational::new(num, den));
            }
        }
    }

    #[test]
    fn projection_examples() {
        let f = project_function(|n| n[2] * n[2], 2, 2).unwrap();
        assert!(max_diff(f.tensor(), &zz_traceless()) < 1e-15);
        let c = project_function(|_| 2.5, 3, 0).unwrap();
        assert!(c.tensor().max_abs() < 1e-14);
        let half = project_function(|n| (1.0 + n[2]) / 2.0, 1, 1).unwrap();
        assert!(max_diff(half.tensor(), &SymTensor::vector(&Z).scale_real(0.5)) < 1e-15);
        assert_eq!(project_function(|_| 1.0, 1, 33).unwrap_err(), HarmonicError::BandLimitTooHigh(33));
    }

    #[test]
    fn reproducing_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for l in 0..=8 {
            let h = harmonic_part(&random_tensor(&mut rng, l)).unwrap();
            let back = project_function(|n| h.eval_spherical(n).re, l, l).unwrap();
            assert!(max_diff(back.tensor(), h.tensor()) < 1e-11 * h.tensor().max_abs().max(1.0), "l={l}");
            // projecting onto another order gives zero
            if l >= 1 {
                let other = project_function(|n| h.eval_spherical(n).re, l - 1, l).unwrap();
                assert!(other.tensor().max_abs() < 1e-11);
            }
        }
    }

    #[test]
    fn triple_equality_of_inner_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for n in 0..=6 {
            let a = random_tensor(&mut rng, n);
            let b = random_tensor(&mut rng, n);
            let (ha, hb) = (harmonic_part(&a).unwrap(), harmonic_part(&b).unwrap());
            let q = SphereQuadrature::exact_to(2 * n);
            let quad = q.average(|u| ha.eval_regular(u).re * hb.eval_regular(u).re);
            let contr = harmonic_inner_product(&ha, &hb).unwrap().re;
            let tr = inner_product_weight(n) * harmonic_contraction_via_traces(&a, &b).unwrap().re;
            let s = quad.abs().max(1e-3);
            assert!((quad - contr).abs() < 1e-10 * s);
            assert!((quad - tr).abs() < 1e-10 * s);
        }
    }

    #[test]
    fn polynomial_average_matches_pairings() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let vs: Vec<Vec3> = (0..6).map(|_| normalize(&random_vec(&mut rng))).collect();
        let t = SymTensor::from_vectors(&vs);
        let exact = sphere_average_polynomial(&t).re;
        assert!((exact - sphere_average_product(&vs)).abs() < 1e-14);
        let _ = vec![0];
    }
}
