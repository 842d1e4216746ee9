//! Small helpers for real and complex 3-vectors.

use num_complex::Complex64;

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub const X: Vec3 = [1.0, 0.0, 0.0];
pub const Y: Vec3 = [0.0, 1.0, 0.0];
pub const Z: Vec3 = [0.0, 0.0, 1.0];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn add(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn neg(a: &Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

/// Unit vector along `a`; the zero vector is returned unchanged.
pub fn normalize(a: &Vec3) -> Vec3 {
    let n = norm(a);
    if n == 0.0 {
        *a
    } else {
        scale(a, 1.0 / n)
    }
}

/// Angle between two directions, accurate for nearly parallel vectors.
pub fn angle(a: &Vec3, b: &Vec3) -> f64 {
    let c = cross(a, b);
    norm(&c).atan2(dot(a, b))
}

/// Angle between two lines through the origin (sign of either vector ignored).
pub fn axis_angle_between(a: &Vec3, b: &Vec3) -> f64 {
    let t = angle(a, b);
    t.min(core::f64::consts::PI - t)
}

pub fn complexify(a: &Vec3) -> CVec3 {
    [Complex64::new(a[0], 0.0), Complex64::new(a[1], 0.0), Complex64::new(a[2], 0.0)]
}

#[inline]
pub fn cdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rotation matrix (row-major) for a right-handed rotation by `angle` about `axis`.
pub fn rotation_matrix(axis: &Vec3, angle: f64) -> [[f64; 3]; 3] {
    let u = normalize(axis);
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + u[0] * u[0] * t, u[0] * u[1] * t - u[2] * s, u[0] * u[2] * t + u[1] * s],
        [u[1] * u[0] * t + u[2] * s, c + u[1] * u[1] * t, u[1] * u[2] * t - u[0] * s],
        [u[2] * u[0] * t - u[1] * s, u[2] * u[1] * t + u[0] * s, c + u[2] * u[2] * t],
    ]
}

pub fn mat_vec(m: &[[f64; 3]; 3], v: &Vec3) -> Vec3 {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn transpose(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Spherical angles (θ, φ) of a direction; φ = 0 at the poles.
pub fn polar_angles(n: &Vec3) -> (f64, f64) {
    let rho = (n[0] * n[0] + n[1] * n[1]).sqrt();
    let theta = rho.atan2(n[2]);
    let phi = if rho == 0.0 { 0.0 } else { n[1].atan2(n[0]) };
    (theta, phi)
}

pub fn from_polar(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Point of the unit sphere for a point of the Riemann sphere, projecting from
/// the north pole: `w = (x + iy)/(1 - z)`. `None` stands for infinity, which
/// maps to the north pole.
pub fn inverse_stereographic(w: Option<Complex64>) -> Vec3 {
    match w {
        None => Z,
        Some(w) => {
            let r2 = w.norm_sqr();
            if !r2.is_finite() {
                return Z;
            }
            let d = 1.0 + r2;
            [2.0 * w.re / d, 2.0 * w.im / d, (r2 - 1.0) / d]
        }
    }
}
