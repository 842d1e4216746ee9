//! Exact Legendre-polynomial coefficient tables.
//!
//! All combinatorial factors are built in 128-bit rational arithmetic and only
//! turned into `f64` by the caller. Orders and degrees are capped at
//! [`MAX_ORDER`](crate::MAX_ORDER).

use alloc::vec::Vec;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::MAX_ORDER;

/// Reduced fraction with a positive denominator.
pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LegendreError {
    #[error("order {0} is outside the supported range 0..={max}", max = MAX_ORDER)]
    OrderOutOfRange(usize),
}

/// `n!`
pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// `n!!`, with the usual convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> i128 {
    let mut acc: i128 = 1;
    let mut k = n;
    while k > 1 {
        acc *= k as i128;
        k -= 2;
    }
    acc
}

pub fn to_f64(r: &Rational) -> f64 {
    // Numerator and denominator stay far below 2^100, so the quotient of the
    // two rounded values is within an ulp or two of the exact ratio.
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn check_order(l: usize) -> Result<(), LegendreError> {
    if l > MAX_ORDER {
        Err(LegendreError::OrderOutOfRange(l))
    } else {
        Ok(())
    }
}

/// Coefficients `p_{l,k}` of `P_l(x) = Σ_k p_{l,k} x^{l-2k}`, `k = 0..=l/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegendreCoeffs {
    pub order: usize,
    pub coeffs: Vec<Rational>,
}

impl LegendreCoeffs {
    pub fn get(&self, k: usize) -> Rational {
        self.coeffs.get(k).copied().unwrap_or_else(Rational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }
}

/// `p_{l,k} = (-1)^k (2l-2k-1)!! / (2^k k! (l-2k)!)`.
pub fn legendre_coeffs(l: usize) -> Result<LegendreCoeffs, LegendreError> {
    check_order(l)?;
    let coeffs = (0..=l / 2)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let num = sign * double_factorial(2 * l as i64 - 2 * k as i64 - 1);
            let den = (1i128 << k) * factorial(k as u32) * factorial((l - 2 * k) as u32);
            Rational::new(num, den)
        })
        .collect();
    Ok(LegendreCoeffs { order: l, coeffs })
}

/// `q_{n,k}` with `x^n = Σ_k q_{n,k} P_{n-2k}(x)`.
pub fn monomial_coeffs(n: usize) -> Result<Vec<Rational>, LegendreError> {
    check_order(n)?;
    Ok((0..=n / 2)
        .map(|k| {
            let num = (2 * n as i128 - 4 * k as i128 + 1) * factorial(n as u32);
            let den = (1i128 << k) * factorial(k as u32) * double_factorial(2 * n as i64 - 2 * k as i64 + 1);
            Rational::new(num, den)
        })
        .collect())
}

/// `P_l(x)` from the exact coefficient table, Horner in `x²`.
///
/// Arguments are clamped to `[-1, 1]`.
pub fn eval_legendre(l: usize, x: f64) -> Result<f64, LegendreError> {
    let table = legendre_coeffs(l)?;
    Ok(eval_with_table(&table.to_f64(), l, x))
}

/// Evaluates `Σ_k c[k] x^{l-2k}` for a precomputed `f64` table.
pub fn eval_with_table(c: &[f64], l: usize, x: f64) -> f64 {
    let x = x.clamp(-1.0, 1.0);
    let y = x * x;
    let mut acc = 0.0;
    for ck in c {
        acc = acc * y + ck;
    }
    if l % 2 == 1 {
        acc * x
    } else {
        acc
    }
}

/// Coefficients `c_l` of `(1+x)^n = Σ_{l=0}^{n} c_l P_l(x)`.
pub fn binomial_legendre_coeffs(n: usize) -> Result<Vec<Rational>, LegendreError> {
    check_order(n)?;
    let nf = factorial(n as u32);
    Ok((0..=n)
        .map(|l| {
            let num = (1i128 << n) * nf * nf * (2 * l as i128 + 1);
            let den = factorial((n + l + 1) as u32) * factorial((n - l) as u32);
            Rational::new(num, den)
        })
        .collect())
}

/// Expands `Σ_l c_l P_l(x)` into monomial coefficients (index = power).
pub fn legendre_series_to_monomials(series: &[(usize, Rational)]) -> Result<Vec<Rational>, LegendreError> {
    let top = series.iter().map(|(l, _)| *l).max().unwrap_or(0);
    let mut out = alloc::vec![Rational::zero(); top + 1];
    for (l, c) in series {
        let table = legendre_coeffs(*l)?;
        for (k, p) in table.coeffs.iter().enumerate() {
            out[l - 2 * k] += *c * *p;
        }
    }
    Ok(out)
}

/// `p_{l,0} q_{l,0}`; equal to one for every supported order.
pub fn leading_product(l: usize) -> Result<Rational, LegendreError> {
    Ok(legendre_coeffs(l)?.get(0) * monomial_coeffs(l)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use alloc::vec;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    /// Rodrigues: P_l = (1/(2^l l!)) d^l/dx^l (x²-1)^l, done on integer
    /// coefficient vectors.
    fn rodrigues(l: usize) -> Vec<Rational> {
        // (x² - 1)^l
        let mut poly: Vec<i128> = vec![1];
        for _ in 0..l {
            let mut next = vec![0i128; poly.len() + 2];
            for (i, c) in poly.iter().enumerate() {
                next[i + 2] += c;
                next[i] -= c;
            }
            poly = next;
        }
        for _ in 0..l {
            poly = poly.iter().enumerate().skip(1).map(|(i, c)| c * i as i128).collect();
        }
        let den = (1i128 << l) * factorial(l as u32);
        poly.into_iter().map(|c| Rational::new(c, den)).collect()
    }

    #[test]
    fn small_tables() {
        assert_eq!(legendre_coeffs(0).unwrap().coeffs, vec![r(1, 1)]);
        assert_eq!(legendre_coeffs(1).unwrap().coeffs, vec![r(1, 1)]);
        assert_eq!(legendre_coeffs(2).unwrap().coeffs, vec![r(3, 2), r(-1, 2)]);
        assert_eq!(monomial_coeffs(1).unwrap(), vec![r(1, 1)]);
        assert_eq!(monomial_coeffs(2).unwrap(), vec![r(2, 3), r(1, 3)]);
        assert_eq!(binomial_legendre_coeffs(0).unwrap(), vec![r(1, 1)]);
        assert_eq!(binomial_legendre_coeffs(1).unwrap(), vec![r(1, 1), r(1, 1)]);
        assert_eq!(binomial_legendre_coeffs(2).unwrap(), vec![r(4, 3), r(2, 1), r(2, 3)]);
    }

    #[test]
    fn table_matches_rodrigues() {
        for l in 0..=MAX_ORDER {
            let table = legendre_coeffs(l).unwrap();
            let rod = rodrigues(l);
            for (k, p) in table.coeffs.iter().enumerate() {
                assert_eq!(*p, rod[l - 2 * k], "l={l} k={k}");
            }
            // leading coefficient and alternating signs
            assert_eq!(table.coeffs[0], Rational::new(double_factorial(2 * l as i64 - 1), factorial(l as u32)));
            for w in table.coeffs.windows(2) {
                assert!(w[0] * w[1] < Rational::zero());
            }
        }
    }

    #[test]
    fn out_of_range() {
        assert_eq!(legendre_coeffs(17), Err(LegendreError::OrderOutOfRange(17)));
        assert!(monomial_coeffs(17).is_err());
        assert!(binomial_legendre_coeffs(40).is_err());
        assert!(eval_legendre(17, 0.0).is_err());
    }

    #[test]
    fn monomials_round_trip_exactly() {
        for n in 0..=MAX_ORDER {
            let q = monomial_coeffs(n).unwrap();
            assert_eq!(q[0] * legendre_coeffs(n).unwrap().coeffs[0], Rational::one());
            assert_eq!(leading_product(n).unwrap(), Rational::one());
            let series: Vec<_> = q.iter().enumerate().map(|(k, c)| (n - 2 * k, *c)).collect();
            let mono = legendre_series_to_monomials(&series).unwrap();
            for (p, c) in mono.iter().enumerate() {
                let want = if p == n { Rational::one() } else { Rational::zero() };
                assert_eq!(*c, want, "n={n} power={p}");
            }
        }
    }

    #[test]
    fn binomial_expansion_exact() {
        for n in 0..=MAX_ORDER {
            let c = binomial_legendre_coeffs(n).unwrap();
            let series: Vec<_> = c.iter().enumerate().map(|(l, c)| (l, *c)).collect();
            let mono = legendre_series_to_monomials(&series).unwrap();
            // binomial coefficients of (1+x)^n
            let mut binom = Rational::one();
            for (k, m) in mono.iter().enumerate() {
                assert_eq!(*m, binom, "n={n} k={k}");
                binom = binom * Rational::from_integer((n - k) as i128) / Rational::from_integer(k as i128 + 1);
            }
        }
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(eval_legendre(5, 1.0).unwrap(), 1.0);
        assert_eq!(eval_legendre(3, 0.0).unwrap(), 0.0);
        assert!((eval_legendre(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
        // clamped
        assert_eq!(eval_legendre(4, 1.0 + 1e-13).unwrap(), 1.0);
    }

    #[test]
    fn orthogonality_by_gauss_quadrature() {
        for l in 0..=12usize {
            for lp in 0..=12usize {
                let (x, w) = gauss_legendre(l.max(lp) + 1);
                let s: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(x, w)| w * eval_legendre(l, *x).unwrap() * eval_legendre(lp, *x).unwrap())
                    .sum();
                let want = if l == lp { 1.0 / (2 * l + 1) as f64 } else { 0.0 };
                // weights sum to 2, so s/2 is the normalized integral
                assert!((s / 2.0 - want).abs() < 1e-13, "l={l} lp={lp} got {}", s / 2.0);
            }
        }
    }

    #[test]
    fn parity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            for l in 0..=MAX_ORDER {
                let a = eval_legendre(l, x).unwrap();
                let b = eval_legendre(l, -x).unwrap();
                let s = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(a, s * b);
            }
        }
    }
}
