//! Simultaneous polynomial root finding.
//!
//! Aberth-Ehrlich iteration on the monic polynomial, falling back to the
//! eigenvalues of the companion matrix (complex shifted QR) when the iteration
//! stalls. [`projective_roots`] adds the bookkeeping for roots at zero and at
//! infinity used by the multipole and Majorana decompositions.

use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Zero;

/// Convergence tolerance on the relative Aberth correction.
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Coefficients smaller than this fraction of the largest one are treated as
/// exact zeros by [`projective_roots`].
pub const NEGLIGIBLE_COEFFICIENT: f64 = 1e-14;

const MAX_ABERTH_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("root iteration did not converge")]
    NoConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Aberth,
    Companion,
}

/// `p(z)` and `p'(z)` by Horner; coefficients ascending.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn strip_leading_zeros(coeffs: &[Complex64]) -> &[Complex64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1].is_zero() {
        n -= 1;
    }
    &coeffs[..n]
}

/// All complex roots of `Σ coeffs[k] z^k` (ascending order, exact zero
/// leading coefficients ignored), with the method that produced them.
pub fn find_roots(coeffs: &[Complex64]) -> Result<(Vec<Complex64>, RootMethod), RootError> {
    let c = strip_leading_zeros(coeffs);
    if c.is_empty() {
        return Err(RootError::ZeroPolynomial);
    }
    if c.len() == 1 {
        return Ok((Vec::new(), RootMethod::Aberth));
    }
    let lead = c[c.len() - 1];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let (mut roots, method) = match aberth(&monic, ROOT_TOLERANCE, MAX_ABERTH_ITERATIONS) {
        Ok(r) => (r, RootMethod::Aberth),
        Err(_) => (companion_roots(&monic)?, RootMethod::Companion),
    };
    polish(&monic, &mut roots);
    Ok((roots, method))
}

/// Aberth-Ehrlich iteration; `Err(NoConvergence)` if the corrections have not
/// dropped below `tol` (relative) after `max_iter` sweeps.
pub fn aberth(monic: &[Complex64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>, RootError> {
    let n = monic.len() - 1;
    let mut z = initial_guesses(monic);
    for _ in 0..max_iter {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(monic, z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return Err(RootError::NoConvergence);
            }
            z[i] -= w;
            worst = worst.max(w.norm() / z[i].norm().max(1.0));
        }
        if worst <= tol {
            return Ok(z);
        }
    }
    Err(RootError::NoConvergence)
}

fn initial_guesses(monic: &[Complex64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    // geometric mean of root moduli, guarded against a zero constant term
    let a0 = monic[0].norm();
    let radius = if a0 > 0.0 { a0.powf(1.0 / n as f64) } else { 1.0 };
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    (0..n)
        .map(|k| {
            let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect()
}

/// Newton steps kept only while they reduce `|p|`; clustered roots are left
/// alone.
fn polish(monic: &[Complex64], roots: &mut [Complex64]) {
    let n = roots.len();
    for i in 0..n {
        let scale = roots[i].norm().max(1.0);
        let isolated = (0..n).all(|j| j == i || (roots[i] - roots[j]).norm() > 1e-6 * scale);
        if !isolated {
            continue;
        }
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(monic, roots[i]);
            if p.is_zero() || dp.is_zero() {
                break;
            }
            let cand = roots[i] - p / dp;
            let (pc, _) = eval_with_derivative(monic, cand);
            if pc.norm() < p.norm() {
                roots[i] = cand;
            } else {
                break;
            }
        }
    }
}

/// Eigenvalues of the companion matrix of a monic polynomial.
pub fn companion_roots(monic: &[Complex64]) -> Result<Vec<Complex64>, RootError> {
    let n = monic.len() - 1;
    let mut h = alloc::vec![alloc::vec![Complex64::zero(); n]; n];
    for j in 0..n {
        h[0][j] = -monic[n - 1 - j];
    }
    for i in 1..n {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    hessenberg_eigenvalues(h)
}

/// Eigenvalues of an upper-Hessenberg matrix by explicit single-shift QR with
/// Wilkinson shifts and deflation.
pub fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>, RootError> {
    let n = h.len();
    let mut eig = alloc::vec![Complex64::zero(); n];
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0usize;
    let budget = 60 * n;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let off = h[l][l - 1].norm();
            let diag = h[l][l].norm() + h[l - 1][l - 1].norm();
            if off <= f64::EPSILON * diag || off < f64::MIN_POSITIVE {
                h[l][l - 1] = Complex64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        total += 1;
        if total > budget {
            return Err(RootError::NoConvergence);
        }
        iter += 1;
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift
            h[hi][hi] + Complex64::new(0.75 * h[hi][hi - 1].norm(), 0.0)
        } else {
            let (a, b, c, d) = (h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let m1 = (a + d) * 0.5 + disc;
            let m2 = (a + d) * 0.5 - disc;
            if (m1 - d).norm() < (m2 - d).norm() {
                m1
            } else {
                m2
            }
        };
        for i in l..=hi {
            h[i][i] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let a = h[k][k];
            let b = h[k + 1][k];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 { (Complex64::new(1.0, 0.0), Complex64::zero()) } else { (a / r, b / r) };
            for j in k..=hi {
                let (x, y) = (h[k][j], h[k + 1][j]);
                h[k][j] = c.conj() * x + s.conj() * y;
                h[k + 1][j] = -s * x + c * y;
            }
            rotations.push((c, s));
        }
        for (idx, (c, s)) in rotations.into_iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for row in h.iter_mut().take(top + 1).skip(l) {
                let (x, y) = (row[k], row[k + 1]);
                row[k] = x * c + y * s;
                row[k + 1] = -x * s.conj() + y * c.conj();
            }
        }
        for i in l..=hi {
            h[i][i] += mu;
        }
    }
    Ok(eig)
}

/// Roots of a degree-`degree` polynomial on the Riemann sphere.
///
/// `coeffs` holds `degree + 1` ascending coefficients. Leading coefficients
/// below [`NEGLIGIBLE_COEFFICIENT`] times the largest count as roots at
/// infinity (`None`); trailing ones as exact roots at zero. The result always
/// has `degree` entries.
pub fn projective_roots(coeffs: &[Complex64]) -> Result<Vec<Option<Complex64>>, RootError> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return Err(RootError::ZeroPolynomial);
    }
    let cut = NEGLIGIBLE_COEFFICIENT * scale;
    let degree = coeffs.len() - 1;
    let mut top = degree;
    while coeffs[top].norm() <= cut {
        top -= 1;
    }
    let mut bottom = 0;
    while coeffs[bottom].norm() <= cut {
        bottom += 1;
    }
    let mut out: Vec<Option<Complex64>> = Vec::with_capacity(degree);
    out.extend(core::iter::repeat_n(None, degree - top));
    out.extend(core::iter::repeat_n(Some(Complex64::zero()), bottom));
    if top > bottom {
        let (r, _) = find_roots(&coeffs[bottom..=top])?;
        out.extend(r.into_iter().map(Some));
    }
    Ok(out)
}

/// A root of multiplicity `multiplicity`; `None` is the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub root: Option<Complex64>,
    pub multiplicity: usize,
}

/// Chordal distance between two points of the Riemann sphere.
pub fn chordal_distance(a: Complex64, b: Complex64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
}

/// [`projective_roots`] with numerically multiple roots merged.
///
/// Roots are merged agglomeratively, closest pairs first and never beyond
/// chordal distance `radius`. A merge into `m` roots is kept only if the
/// refined centre (a simple root of the `(m-1)`-th derivative, computed in
/// `1/z` outside the unit disk) explains the spread of the members as
/// rounding noise of an `m`-fold root. The centre is then accurate to full
/// precision even though the individual roots are not.
pub fn projective_root_clusters(coeffs: &[Complex64], radius: f64) -> Result<Vec<RootCluster>, RootError> {
    let all = projective_roots(coeffs)?;
    let mut out = Vec::new();
    let infinite = all.iter().filter(|z| z.is_none()).count();
    if infinite > 0 {
        out.push(RootCluster { root: None, multiplicity: infinite });
    }
    let zeros = all.iter().filter(|z| **z == Some(Complex64::zero())).count();
    if zeros > 0 {
        out.push(RootCluster { root: Some(Complex64::zero()), multiplicity: zeros });
    }
    let finite: Vec<Complex64> = all.into_iter().flatten().filter(|z| !z.is_zero()).collect();
    if finite.is_empty() {
        return Ok(out);
    }
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let cut = NEGLIGIBLE_COEFFICIENT * scale;
    let top = coeffs.iter().rposition(|c| c.norm() > cut).unwrap_or(0);
    let bottom = coeffs.iter().position(|c| c.norm() > cut).unwrap_or(0);
    let core_poly = &coeffs[bottom..=top];

    let n = finite.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = chordal_distance(finite[i], finite[j]);
            if d < radius {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut label: Vec<usize> = (0..n).collect();
    let mut centre: Vec<Complex64> = finite.clone();
    for (_, i, j) in pairs {
        let (li, lj) = (label[i], label[j]);
        if li == lj {
            continue;
        }
        let members: Vec<Complex64> = (0..n).filter(|&k| label[k] == li || label[k] == lj).map(|k| finite[k]).collect();
        if let Some(c) = validated_centre(core_poly, &members) {
            for l in label.iter_mut() {
                if *l == lj {
                    *l = li;
                }
            }
            centre[li] = c;
        }
    }
    for g in 0..n {
        let m = label.iter().filter(|&&l| l == g).count();
        if m > 0 {
            out.push(RootCluster { root: Some(centre[g]), multiplicity: m });
        }
    }
    Ok(out)
}

/// Refined centre of `members` if they plausibly form one multiple root.
fn validated_centre(poly: &[Complex64], members: &[Complex64]) -> Option<Complex64> {
    let m = members.len();
    let centroid = members.iter().fold(Complex64::zero(), |a, b| a + b) / m as f64;
    let outside = centroid.norm() > 1.0;
    let (base, local): (Vec<Complex64>, Vec<Complex64>) = if outside {
        (poly.iter().rev().copied().collect(), members.iter().map(|z| z.inv()).collect())
    } else {
        (poly.to_vec(), members.to_vec())
    };
    let guess = local.iter().fold(Complex64::zero(), |a, b| a + b) / m as f64;
    let derivs = derivative_chain(&base, m);
    let c = newton_refine(&derivs[m - 1], guess);
    // noise radius of an m-fold root: (δ m! / |p^(m)(c)|)^(1/m)
    let magnitude: f64 = base.iter().rev().fold(0.0, |acc, a| acc * c.norm() + a.norm());
    let delta = 64.0 * base.len() as f64 * f64::EPSILON * magnitude;
    let pm = eval_with_derivative(&derivs[m], c).0.norm();
    let m_fact: f64 = (1..=m).map(|k| k as f64).product();
    let noise = if pm == 0.0 { f64::INFINITY } else { (delta * m_fact / pm).powf(1.0 / m as f64) };
    let spread = local.iter().map(|z| (z - c).norm()).fold(0.0, f64::max);
    if spread <= 10.0 * noise {
        Some(if outside { c.inv() } else { c })
    } else {
        None
    }
}

/// `[p, p', …, p^(m)]`, each ascending.
fn derivative_chain(p: &[Complex64], m: usize) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(p.to_vec());
    for k in 1..=m {
        let prev = &out[k - 1];
        let d: Vec<Complex64> = if prev.len() <= 1 {
            alloc::vec![Complex64::zero()]
        } else {
            prev.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
        };
        out.push(d);
    }
    out
}

/// Newton steps kept while `|p|` decreases.
fn newton_refine(p: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = eval_with_derivative(p, z).0.norm();
    for _ in 0..8 {
        let (v, dv) = eval_with_derivative(p, z);
        if v.is_zero() || dv.is_zero() {
            break;
        }
        let cand = z - v / dv;
        let pc = eval_with_derivative(p, cand).0.norm();
        if pc < best {
            best = pc;
            z = cand;
        } else {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::zero(); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            p = next;
        }
        p
    }

    /// Every expected root is matched by a distinct found root.
    fn assert_same_roots(found: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(found.len(), want.len());
        let mut used = vec![false; found.len()];
        for w in want {
            let (best, d) = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .map(|(i, f)| (i, (f - w).norm()))
                .fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            assert!(d < tol, "root {w} missed by {d}");
            used[best] = true;
        }
    }

    #[test]
    fn quadratic() {
        let (r, m) = find_roots(&[c(-2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(m, RootMethod::Aberth);
        assert_same_roots(&r, &[c(2f64.sqrt(), 0.0), c(-(2f64.sqrt()), 0.0)], 1e-14);
    }

    #[test]
    fn random_polynomials_both_methods() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for deg in 1..=24 {
            let want: Vec<Complex64> =
                (0..deg).map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
            let p = poly_from_roots(&want);
            let (r, _) = find_roots(&p).unwrap();
            assert_same_roots(&r, &want, 1e-8);
            let comp = companion_roots(&p).unwrap();
            assert_same_roots(&comp, &want, 1e-6);
        }
    }

    #[test]
    fn companion_small_cases() {
        let p = poly_from_roots(&[c(1.0, 1.0), c(-3.0, 0.5), c(0.0, -2.0)]);
        let r = companion_roots(&p).unwrap();
        assert_same_roots(&r, &[c(1.0, 1.0), c(-3.0, 0.5), c(0.0, -2.0)], 1e-12);
        assert_eq!(companion_roots(&[c(-4.0, 0.0), c(1.0, 0.0)]).unwrap(), vec![c(4.0, 0.0)]);
    }

    #[test]
    fn multiple_roots_fall_back_gracefully() {
        // (z-1)^4 (z+2): a fourfold root is only resolved to about eps^(1/4)
        let p = poly_from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        let (r, _) = find_roots(&p).unwrap();
        assert_same_roots(&r, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)], 1e-3);
        let mean = r.iter().filter(|z| (*z - c(1.0, 0.0)).norm() < 0.1).fold(Complex64::zero(), |a, b| a + b) / 4.0;
        assert!((mean - c(1.0, 0.0)).norm() < 1e-4, "{mean}");
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(find_roots(&[Complex64::zero(); 3]), Err(RootError::ZeroPolynomial));
        assert_eq!(projective_roots(&[Complex64::zero(); 3]), Err(RootError::ZeroPolynomial));
    }

    #[test]
    fn projective_bookkeeping() {
        // z^2 as a degree-4 polynomial: two roots at zero, two at infinity
        let p = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1e-17, 0.0)];
        let r = projective_roots(&p).unwrap();
        assert_eq!(r.iter().filter(|z| z.is_none()).count(), 2);
        assert_eq!(r.iter().filter(|z| **z == Some(Complex64::zero())).count(), 2);
        // constant: every root at infinity
        let r = projective_roots(&[c(3.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(r, vec![None]);
    }

    #[test]
    fn clusters_recover_multiple_roots() {
        let a = c(0.4, -1.3);
        let b = c(-2.5, 0.7);
        let p = poly_from_roots(&[a, a, a, b, b, c(0.2, 0.1)]);
        let cl = projective_root_clusters(&p, 0.25).unwrap();
        let mut mult: Vec<usize> = cl.iter().map(|k| k.multiplicity).collect();
        mult.sort();
        assert_eq!(mult, vec![1, 2, 3]);
        for k in &cl {
            let want = match k.multiplicity {
                3 => a,
                2 => b,
                _ => c(0.2, 0.1),
            };
            assert!((k.root.unwrap() - want).norm() < 1e-10, "{k:?}");
        }
        // a cluster outside the unit disk and the bookkeeping clusters
        let big = c(40.0, -25.0);
        let mut p = poly_from_roots(&[big, big, big, c(0.5, 0.0)]);
        p.insert(0, Complex64::zero());
        p.push(Complex64::zero());
        let cl = projective_root_clusters(&p, 0.25).unwrap();
        assert_eq!(cl[0], RootCluster { root: None, multiplicity: 1 });
        assert_eq!(cl[1], RootCluster { root: Some(Complex64::zero()), multiplicity: 1 });
        let triple = cl.iter().find(|k| k.multiplicity == 3).unwrap();
        assert!((triple.root.unwrap() - big).norm() / big.norm() < 1e-10);
    }

    #[test]
    fn close_simple_roots_stay_apart() {
        let want = [c(0.3, 0.2), c(0.3 + 1e-3, 0.2), c(0.3, 0.2 + 2e-3), c(-1.0, 0.0)];
        let cl = projective_root_clusters(&poly_from_roots(&want), 0.25).unwrap();
        assert_eq!(cl.len(), 4);
        assert!(cl.iter().all(|k| k.multiplicity == 1));
    }

    #[test]
    fn high_multiplicity_cluster() {
        let a = c(0.6, -0.3);
        let p = poly_from_roots(&[a; 8]);
        let cl = projective_root_clusters(&p, 0.25).unwrap();
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].multiplicity, 8);
        assert!((cl[0].root.unwrap() - a).norm() < 1e-10);
    }

    #[test]
    fn chordal_distance_is_symmetric_and_bounded() {
        assert!((chordal_distance(c(0.0, 0.0), c(1e100, 0.0)) - 2.0).abs() < 1e-12);
        assert_eq!(chordal_distance(c(1.0, 2.0), c(-3.0, 0.5)), chordal_distance(c(-3.0, 0.5), c(1.0, 2.0)));
    }
}
