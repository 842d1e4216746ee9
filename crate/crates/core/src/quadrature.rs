//! Gauss-Legendre × trapezoid product rules on the unit sphere.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use crate::vec3::Vec3;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Exact for polynomials of degree `2n - 1`. Nodes are sorted ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on the three-term recurrence.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product quadrature normalized to the sphere average `(1/4π)∫ f d²n`.
///
/// Built once per degree and reused; the value is immutable.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    degree: usize,
    points: Vec<Vec3>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// Rule exact for every polynomial in `n̂` of total degree `≤ degree`:
    /// `⌈degree/2⌉ + 1` Gauss nodes in `cos θ` and `degree + 1` equally spaced
    /// azimuths.
    pub fn exact_to(degree: usize) -> Self {
        let n_theta = degree.div_ceil(2) + 1;
        let n_phi = degree + 1;
        let (x, w) = gauss_legendre(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (ct, wt) in x.iter().zip(&w) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let (sp, cp) = phi.sin_cos();
                points.push([st * cp, st * sp, *ct]);
                // Gauss weights sum to 2; azimuth weights to 1.
                weights.push(wt / (2.0 * n_phi as f64));
            }
        }
        SphereQuadrature { degree, points, weights }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&Vec3, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// `(1/4π) ∫ f(n̂) d²n̂`
    pub fn average<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.nodes().map(|(p, w)| w * f(p)).sum()
    }

    pub fn average_complex<F: FnMut(&Vec3) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes().map(|(p, w)| f(p) * w).fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }
}
