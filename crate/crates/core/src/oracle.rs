//! Plain matrix mechanics used as ground truth for the geometric routes.
//!
//! Rows and columns are indexed by `k = J - m`, matching [`SpinState`].

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;
use num_traits::Zero;

use crate::harmonic::HarmonicTensor;
use crate::quadrature::SphereQuadrature;
use crate::spinstate::{coherent_state, SpinError, SpinState, MAX_TWO_J};
use crate::symtensor::{multi_indices, MultiIndex, ScalarKind, SymTensor};
use crate::vec3::Vec3;

/// Highest polynomial degree accepted by [`quantize_symmetrized`].
pub const MAX_QUANTIZE_RANK: usize = 8;
/// Largest `max |M - M†|` accepted by [`expectation_matrix`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("polynomial rank {0} exceeds the quantization limit")]
    RankTooLarge(usize),
    #[error("only real polynomials can be quantized")]
    ComplexPolynomial,
    #[error("matrix is for 2J = {matrix}, state has 2J = {state}")]
    DimensionMismatch { matrix: usize, state: usize },
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error(transparent)]
    Spin(#[from] SpinError),
}

/// Dense complex `(2J+1) × (2J+1)` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrix {
    two_j: usize,
    entries: Vec<Complex64>,
}

impl SpinMatrix {
    pub fn zeros(two_j: usize) -> Self {
        let d = two_j + 1;
        SpinMatrix { two_j, entries: alloc::vec![Complex64::zero(); d * d] }
    }

    pub fn identity(two_j: usize) -> Self {
        let mut m = SpinMatrix::zeros(two_j);
        for k in 0..=two_j {
            m.set(k, k, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_entries(two_j: usize, entries: Vec<Complex64>) -> Result<Self, OracleError> {
        let d = two_j + 1;
        if entries.len() != d * d {
            return Err(OracleError::WrongLength { expected: d * d, got: entries.len() });
        }
        Ok(SpinMatrix { two_j, entries })
    }

    pub fn two_j(&self) -> usize {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j + 1
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        let d = self.dim();
        self.entries[row * d + col] = v;
    }

    pub fn scale(&self, s: Complex64) -> SpinMatrix {
        SpinMatrix { two_j: self.two_j, entries: self.entries.iter().map(|e| e * s).collect() }
    }

    pub fn adjoint(&self) -> SpinMatrix {
        let d = self.dim();
        let mut out = SpinMatrix::zeros(self.two_j);
        for r in 0..d {
            for c in 0..d {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// `max |M - M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &SpinMatrix) -> SpinMatrix {
        &(self * other) - &(other * self)
    }

    /// `M v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim();
        (0..d).map(|r| (0..d).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    /// `⟨ψ|M|φ⟩`.
    pub fn sandwich(&self, psi: &[Complex64], phi: &[Complex64]) -> Complex64 {
        psi.iter().zip(self.apply(phi)).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest absolute row sum.
    fn row_norm(&self) -> f64 {
        let d = self.dim();
        (0..d).map(|r| (0..d).map(|c| self.get(r, c).norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

impl Add for &SpinMatrix {
    type Output = SpinMatrix;
    fn add(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.two_j, rhs.two_j, "adding matrices of different size");
        SpinMatrix { two_j: self.two_j, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &SpinMatrix {
    type Output = SpinMatrix;
    fn sub(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.two_j, rhs.two_j, "subtracting matrices of different size");
        SpinMatrix { two_j: self.two_j, entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, rhs: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.two_j, rhs.two_j, "multiplying matrices of different size");
        let d = self.dim();
        let mut out = SpinMatrix::zeros(self.two_j);
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        out
    }
}

/// `(J_x, J_y, J_z)` from the ladder operators.
pub fn angular_momentum_matrices(two_j: usize) -> [SpinMatrix; 3] {
    let j = two_j as f64 / 2.0;
    let mut jp = SpinMatrix::zeros(two_j);
    let mut jz = SpinMatrix::zeros(two_j);
    for k in 0..=two_j {
        let m = j - k as f64;
        jz.set(k, k, Complex64::new(m, 0.0));
        if k > 0 {
            // J+ |J, m⟩ = √(J(J+1) - m(m+1)) |J, m+1⟩
            jp.set(k - 1, k, Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0));
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm).scale(Complex64::new(0.5, 0.0));
    let jy = (&jp - &jm).scale(Complex64::new(0.0, -0.5));
    [jx, jy, jz]
}

/// Symmetrized quantization of a real polynomial in `(j_x, j_y, j_z)`: every
/// monomial becomes the mean of all distinct orderings of the matching
/// product of spin matrices.
///
/// Ordering sums are built by degree with
/// `N(p,q,s) = J_x N(p-1,q,s) + J_y N(p,q-1,s) + J_z N(p,q,s-1)`, then divided
/// by the number of orderings.
pub fn quantize_symmetrized(poly: &SymTensor, two_j: usize) -> Result<SpinMatrix, OracleError> {
    let n = poly.rank();
    if n > MAX_QUANTIZE_RANK {
        return Err(OracleError::RankTooLarge(n));
    }
    if two_j > MAX_TWO_J {
        return Err(SpinError::SpinTooLarge(two_j).into());
    }
    if poly.kind() == ScalarKind::Complex && !poly.is_numerically_real() {
        return Err(OracleError::ComplexPolynomial);
    }
    let js = angular_momentum_matrices(two_j);
    let ordered = ordering_sums(&js, n);
    let mut out = SpinMatrix::zeros(two_j);
    for (mi, c) in poly.terms() {
        if c.re == 0.0 {
            continue;
        }
        let sum = &ordered[crate::symtensor::slot_index(n, mi.p, mi.q)];
        out = &out + &sum.scale(Complex64::new(c.re / mi.multinomial(), 0.0));
    }
    Ok(out)
}

/// Ordering sums `N(α)` for every multi-index of degree `n`.
fn ordering_sums(js: &[SpinMatrix; 3], n: usize) -> Vec<SpinMatrix> {
    let two_j = js[0].two_j;
    let mut level = alloc::vec![SpinMatrix::identity(two_j)];
    for d in 1..=n {
        let next = multi_indices(d)
            .map(|mi| {
                let mut acc = SpinMatrix::zeros(two_j);
                let e = mi.as_array();
                for (axis, j) in js.iter().enumerate() {
                    if e[axis] == 0 {
                        continue;
                    }
                    let mut lower = e;
                    lower[axis] -= 1;
                    let lo = MultiIndex::from_array(lower);
                    acc = &acc + &(j * &level[crate::symtensor::slot_index(d - 1, lo.p, lo.q)]);
                }
                acc
            })
            .collect();
        level = next;
    }
    level
}

/// Quantum operator of a classical symbol given by its harmonic components:
/// the sum of the symmetrized quantizations of the components.
pub fn quantize_components(components: &[HarmonicTensor], two_j: usize) -> Result<SpinMatrix, OracleError> {
    let mut out = SpinMatrix::zeros(two_j);
    for h in components {
        out = &out + &quantize_symmetrized(h.tensor(), two_j)?;
    }
    Ok(out)
}

/// `⟨ψ|M|ψ⟩` for Hermitian `M`.
pub fn expectation_matrix(psi: &SpinState, m: &SpinMatrix) -> Result<f64, OracleError> {
    if psi.two_j() != m.two_j {
        return Err(OracleError::DimensionMismatch { matrix: m.two_j, state: psi.two_j() });
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE {
        return Err(OracleError::NotHermitian(defect));
    }
    Ok(m.sandwich(psi.amplitudes(), psi.amplitudes()).re)
}

/// `⟨n̂|M|n̂⟩`, the Q symbol of `M` at `n̂`.
pub fn q_symbol(m: &SpinMatrix, n: &Vec3) -> Result<f64, OracleError> {
    let c = coherent_state(m.two_j, n)?;
    Ok(m.sandwich(c.amplitudes(), c.amplitudes()).re)
}

/// `((2J+1)/4π) ∫ P(n̂) |n̂⟩⟨n̂| d²n̂` by the given quadrature.
pub fn assemble_from_p_symbol<F: FnMut(&Vec3) -> f64>(
    two_j: usize,
    quad: &SphereQuadrature,
    mut p: F,
) -> Result<SpinMatrix, OracleError> {
    let d = two_j + 1;
    let mut out = SpinMatrix::zeros(two_j);
    for (n, w) in quad.nodes() {
        let fw = p(n) * w * d as f64;
        if fw == 0.0 {
            continue;
        }
        let c = coherent_state(two_j, n)?;
        let a = c.amplitudes();
        for r in 0..d {
            for k in 0..d {
                out.entries[r * d + k] += a[r] * a[k].conj() * fw;
            }
        }
    }
    Ok(out)
}

/// `max |((2J+1)/4π) ∫ |n̂⟩⟨n̂| - 1|` with a rule exact to `band_limit`.
pub fn resolution_of_unity_check(two_j: usize, band_limit: usize) -> Result<f64, OracleError> {
    let quad = SphereQuadrature::exact_to(band_limit);
    let m = assemble_from_p_symbol(two_j, &quad, |_| 1.0)?;
    Ok(m.max_abs_diff(&SpinMatrix::identity(two_j)))
}

/// `exp(A)` by scaling and squaring with a Taylor series.
pub fn exp_matrix(a: &SpinMatrix) -> SpinMatrix {
    let norm = a.row_norm();
    let mut squarings = 0u32;
    let mut s = 1.0;
    while norm * s > 0.5 {
        s *= 0.5;
        squarings += 1;
    }
    let x = a.scale(Complex64::new(s, 0.0));
    let mut term = SpinMatrix::identity(a.two_j);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = (&term * &x).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.max_abs() < f64::EPSILON * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(-iθ n̂·J)`, the spin-`J` representative of the right-handed rotation
/// by `θ` about `n̂`.
pub fn rotation_operator(two_j: usize, axis: &Vec3, angle: f64) -> SpinMatrix {
    let u = crate::vec3::normalize(axis);
    let [jx, jy, jz] = angular_momentum_matrices(two_j);
    let gen = &(&jx.scale(Complex64::new(u[0], 0.0)) + &jy.scale(Complex64::new(u[1], 0.0)))
        + &jz.scale(Complex64::new(u[2], 0.0));
    exp_matrix(&gen.scale(Complex64::new(0.0, -angle)))
}

/// `D ψ` for the rotation by `angle` about `axis`.
pub fn rotate_state(psi: &SpinState, axis: &Vec3, angle: f64) -> Result<SpinState, OracleError> {
    let d = rotation_operator(psi.two_j(), axis, angle);
    Ok(SpinState::new(psi.two_j(), d.apply(psi.amplitudes()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::{self, Z};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
        let z: f64 = rng.gen_range(-1.0..1.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * core::f64::consts::PI);
        let rho = (1.0 - z * z).sqrt();
        [rho * phi.cos(), rho * phi.sin(), z]
    }

    fn random_real_tensor(rng: &mut ChaCha8Rng, n: usize) -> SymTensor {
        let coeffs: Vec<f64> = (0..crate::symtensor::slot_count(n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymTensor::from_real_coeffs(n, &coeffs).unwrap()
    }

    #[test]
    fn spin_half_matrices() {
        let [jx, jy, jz] = angular_momentum_matrices(1);
        assert_eq!(jz.entries(), &[c(0.5), c(0.0), c(0.0), c(-0.5)]);
        assert_eq!(jx.entries(), &[c(0.0), c(0.5), c(0.5), c(0.0)]);
        assert_eq!(jy.get(0, 1), Complex64::new(0.0, -0.5));
    }

    #[test]
    fn algebra_identities() {
        for two_j in 0..=12 {
            let j = two_j as f64 / 2.0;
            let [jx, jy, jz] = angular_momentum_matrices(two_j);
            let cas = &(&(&jx * &jx) + &(&jy * &jy)) + &(&jz * &jz);
            assert!(cas.max_abs_diff(&SpinMatrix::identity(two_j).scale(c(j * (j + 1.0)))) < 1e-13);
            let comm = jx.commutator(&jy);
            assert!(comm.max_abs_diff(&jz.scale(Complex64::new(0.0, 1.0))) < 1e-13);
            for m in [&jx, &jy, &jz] {
                assert!(m.hermiticity_defect() < 1e-15);
            }
        }
    }

    #[test]
    fn quantization_examples() {
        let [jx, jy, jz] = angular_momentum_matrices(3);
        let z = SymTensor::vector(&Z);
        assert!(quantize_symmetrized(&z, 3).unwrap().max_abs_diff(&jz) < 1e-15);
        let mut xy = SymTensor::zero(2, ScalarKind::Real);
        xy.set_coeff(MultiIndex::new(1, 1, 0), c(1.0));
        let want = (&(&jx * &jy) + &(&jy * &jx)).scale(c(0.5));
        assert!(quantize_symmetrized(&xy, 3).unwrap().max_abs_diff(&want) < 1e-15);

        // z² at J = 1: ⟨ẑ|Jz²|ẑ⟩ - J(J+1)/3 = (1/2)(1 - 1/3)
        let zz = SymTensor::from_vectors(&[Z, Z]);
        let q = quantize_symmetrized(&zz, 2).unwrap();
        assert!((q_symbol(&q, &Z).unwrap() - 2.0 / 3.0 - 0.5 * (2.0 / 3.0)).abs() < 1e-15);

        assert_eq!(quantize_symmetrized(&SymTensor::zero(9, ScalarKind::Real), 2), Err(OracleError::RankTooLarge(9)));
        let cz = SymTensor::complex_vector(&[c(0.0), c(0.0), Complex64::new(0.0, 1.0)]);
        assert_eq!(quantize_symmetrized(&cz, 2), Err(OracleError::ComplexPolynomial));
    }

    #[test]
    fn quantized_polynomials_are_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for two_j in 1..=6 {
            for n in 0..=MAX_QUANTIZE_RANK {
                let t = random_real_tensor(&mut rng, n);
                assert!(quantize_symmetrized(&t, two_j).unwrap().hermiticity_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        for two_j in 0..5 {
            let top = SpinState::basis(two_j, 0).unwrap();
            let [_, _, jz] = angular_momentum_matrices(two_j);
            assert!((expectation_matrix(&top, &jz).unwrap() - two_j as f64 / 2.0).abs() < 1e-15);
            assert!((expectation_matrix(&top, &SpinMatrix::identity(two_j)).unwrap() - 1.0).abs() < 1e-15);
        }
        let [_, _, jz] = angular_momentum_matrices(2);
        let zero = SpinState::basis(2, 1).unwrap();
        assert_eq!(expectation_matrix(&zero, &(&jz * &jz)).unwrap(), 0.0);
        assert_eq!(
            expectation_matrix(&zero, &SpinMatrix::identity(3)),
            Err(OracleError::DimensionMismatch { matrix: 3, state: 2 })
        );
        let mut skew = SpinMatrix::zeros(2);
        skew.set(0, 1, c(1.0));
        assert!(matches!(expectation_matrix(&zero, &skew), Err(OracleError::NotHermitian(_))));
    }

    #[test]
    fn resolution_of_unity() {
        assert!(resolution_of_unity_check(1, 2).unwrap() < 1e-12);
        for two_j in 0..=6 {
            assert!(resolution_of_unity_check(two_j, 2 * two_j).unwrap() < 1e-10);
        }
        assert!(resolution_of_unity_check(6, 2).unwrap() > 1e-3);
    }

    #[test]
    fn coherent_states_are_eigenvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for two_j in 0..=10 {
            let [jx, jy, jz] = angular_momentum_matrices(two_j);
            for _ in 0..5 {
                let n = random_unit(&mut rng);
                let jn = &(&jx.scale(c(n[0])) + &jy.scale(c(n[1]))) + &jz.scale(c(n[2]));
                let psi = coherent_state(two_j, &n).unwrap();
                let lhs = jn.apply(psi.amplitudes());
                let res = lhs
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(a, b)| (a - b * (two_j as f64 / 2.0)).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_operator_is_unitary_and_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for two_j in 1..=6 {
            let axis = random_unit(&mut rng);
            let angle = rng.gen_range(-3.0..3.0);
            let d = rotation_operator(two_j, &axis, angle);
            assert!((&d * &d.adjoint()).max_abs_diff(&SpinMatrix::identity(two_j)) < 1e-12);
            // D |n̂⟩ ∝ |R n̂⟩
            let n = random_unit(&mut rng);
            let r = vec3::rotation_matrix(&axis, angle);
            let moved = rotate_state(&coherent_state(two_j, &n).unwrap(), &axis, angle).unwrap();
            let want = coherent_state(two_j, &vec3::mat_vec(&r, &n)).unwrap();
            assert!((moved.fidelity(&want) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn quantization_commutes_with_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for two_j in 1..=6 {
            for n in 1..=4 {
                let t = random_real_tensor(&mut rng, n);
                let axis = random_unit(&mut rng);
                let angle = rng.gen_range(-3.0..3.0);
                let r = vec3::rotation_matrix(&axis, angle);
                let d = rotation_operator(two_j, &axis, angle);
                let lhs = quantize_symmetrized(&t.rotated(&r), two_j).unwrap();
                let rhs = &(&d * &quantize_symmetrized(&t, two_j).unwrap()) * &d.adjoint();
                assert!(lhs.max_abs_diff(&rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn quantization_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let (a, b) = (random_real_tensor(&mut rng, 3), random_real_tensor(&mut rng, 3));
        let sum = &a.scale_real(2.0) + &b;
        let lhs = quantize_symmetrized(&sum, 4).unwrap();
        let rhs = &quantize_symmetrized(&a, 4).unwrap().scale(c(2.0)) + &quantize_symmetrized(&b, 4).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
