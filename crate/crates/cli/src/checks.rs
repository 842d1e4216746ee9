//! The self-check suite: every acceptance property, run on seeded random
//! inputs, with one outcome per check.
//!
//! Each check draws from its own ChaCha stream of the suite seed, so checks
//! are reproducible individually and the rendered report is byte-identical
//! across runs with the same seed.

use std::fmt::{self, Write as _};

use multipole_core::harmonic::{
    harmonic_components, harmonic_contraction_via_traces, harmonic_inner_product, harmonic_part, inner_product_weight,
    reconstruct, sphere_average_polynomial, sphere_average_product, trace_norm,
};
use multipole_core::multipole::{
    interaction_energy, maxwell_potential, maxwell_ratio, perpendicular_frame, real_sectorial, skeleton_to_harmonic,
    sylvester_decompose,
};
use multipole_core::operator::{
    classical_from_polynomials, expectation_skeleton, expectation_tensor_with, to_symbol_with, SymbolCoefficients,
};
use multipole_core::oracle::{
    assemble_from_p_symbol, expectation_matrix, q_symbol, quantize_components, resolution_of_unity_check, rotate_state,
};
use multipole_core::quadrature::SphereQuadrature;
use multipole_core::spinstate::{coherent_state, majorana_stars, overlap_geometric, state_from_stars};
use multipole_core::symtensor::slot_count;
use multipole_core::vec3::{angle, axis_angle_between, dot, mat_vec, norm, normalize, rotation_matrix, Vec3};
use multipole_core::{ClassicalObservable, Complex64, Rational, Skeleton, SpinState, SymTensor, SymbolKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 42;

/// One measured quantity; it passes when strictly below its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub label: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl Measure {
    fn new(label: &'static str, value: f64, tolerance: f64) -> Self {
        Measure { label, value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub measures: Vec<Measure>,
    /// Set when the check could not run to completion.
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.measures.iter().all(Measure::passed)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<9} {}", self.id, self.title)?;
        if let Some(e) = &self.error {
            return write!(f, ": error: {e}");
        }
        for (i, m) in self.measures.iter().enumerate() {
            let sep = if i == 0 { ":" } else { ";" };
            let rel = if m.passed() { "<" } else { ">=" };
            write!(f, "{sep} {} {:.3e} {rel} {:.0e}", m.label, m.value, m.tolerance)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub seed: u64,
    pub coefficients: SymbolCoefficients,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { seed: DEFAULT_SEED, coefficients: SymbolCoefficients::EXACT }
    }
}

type CheckFn = fn(&mut ChaCha8Rng, &SymbolCoefficients) -> Result<Vec<Measure>, String>;

pub struct Check {
    pub id: &'static str,
    pub title: &'static str,
    run: CheckFn,
}

pub const CHECKS: &[Check] = &[
    Check { id: "C1", title: "canonical decomposition round trip", run: decomposition_round_trip },
    Check { id: "C2", title: "sphere integral of vector products", run: sphere_integrals },
    Check { id: "C3", title: "harmonic inner product, three ways", run: inner_product_routes },
    Check { id: "C4", title: "Sylvester round trip", run: sylvester_round_trip },
    Check { id: "C5", title: "Maxwell potential constant", run: maxwell_constant },
    Check { id: "C6", title: "coherent-state overlap", run: coherent_overlap },
    Check { id: "C7", title: "resolution of unity", run: resolution_of_unity },
    Check { id: "C8", title: "expectation value, three routes", run: expectation_routes },
    Check { id: "C9", title: "sectorial interaction vanishes", run: sectorial_vanishing },
    Check { id: "C10", title: "Majorana round trip and covariance", run: majorana_round_trip },
    Check { id: "Q-symbol", title: "Q symbol of the quantized operator", run: q_symbol_consistency },
    Check { id: "P-symbol", title: "operator assembled from its P symbol", run: p_symbol_consistency },
    Check { id: "linearity", title: "expectation is linear in the observable", run: expectation_linearity },
];

pub fn find_check(id: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.id.eq_ignore_ascii_case(id))
}

pub fn run_check(check: &Check, config: &CheckConfig) -> CheckOutcome {
    let index = CHECKS.iter().position(|c| c.id == check.id).unwrap_or(CHECKS.len()) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let (measures, error) = match (check.run)(&mut rng, &config.coefficients) {
        Ok(m) => (m, None),
        Err(e) => (Vec::new(), Some(e)),
    };
    CheckOutcome { id: check.id, title: check.title, measures, error }
}

pub fn run_all(config: &CheckConfig) -> Vec<CheckOutcome> {
    CHECKS.iter().map(|c| run_check(c, config)).collect()
}

pub fn render_report(seed: u64, outcomes: &[CheckOutcome]) -> String {
    let mut s = format!("multipole self-check, seed {seed}\n");
    for o in outcomes {
        let _ = writeln!(s, "{o}");
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    let _ = writeln!(s, "{passed} of {} checks passed", outcomes.len());
    s
}

fn msg<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = norm(&v);
        if n > 0.1 && n <= 1.0 {
            return normalize(&v);
        }
    }
}

fn random_vector(rng: &mut impl Rng) -> Vec3 {
    [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
}

pub fn random_tensor(rng: &mut impl Rng, n: usize) -> SymTensor {
    let c: Vec<f64> = (0..slot_count(n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymTensor::from_real_coeffs(n, &c).expect("slot count matches")
}

pub fn random_state(rng: &mut impl Rng, two_j: usize) -> SpinState {
    loop {
        let a = (0..=two_j).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        if let Ok(s) = SpinState::new(two_j, a) {
            return s;
        }
    }
}

/// Sum of random homogeneous polynomials of every degree up to `degree`.
pub fn random_observable(rng: &mut impl Rng, degree: usize) -> Result<ClassicalObservable, String> {
    let polys: Vec<SymTensor> = (0..=degree).map(|n| random_tensor(rng, n)).collect();
    classical_from_polynomials(&polys).map_err(msg)
}

fn random_skeleton(rng: &mut impl Rng, l: usize, scale: f64) -> Result<Skeleton, String> {
    let axes = (0..l).map(|_| random_unit(rng)).collect();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Skeleton::new(axes, scale, sign).map_err(msg)
}

/// Largest angle between greedily matched directions.
fn matched_angle(a: &[Vec3], b: &[Vec3], up_to_sign: bool) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for u in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, v)| (k, if up_to_sign { axis_angle_between(u, v) } else { angle(u, v) }))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((k, d)) => {
                used[k] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

fn decomposition_round_trip(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let (mut err, mut trace): (f64, f64) = (0.0, 0.0);
    for n in 2..=8 {
        for _ in 0..100 {
            let a = random_tensor(rng, n);
            let comps = harmonic_components(&a).map_err(msg)?;
            err = err.max((&reconstruct(&comps).map_err(msg)? - &a).max_abs());
            for h in &comps {
                trace = trace.max(trace_norm(h.tensor()));
            }
        }
    }
    Ok(vec![Measure::new("reconstruction error", err, 1e-12), Measure::new("component trace norm", trace, 1e-12)])
}

fn sphere_integrals(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let (mut vs_quad, mut vs_exact): (f64, f64) = (0.0, 0.0);
    for n in [2, 4, 6, 8] {
        let quad = SphereQuadrature::exact_to(n);
        for _ in 0..50 {
            let vs: Vec<Vec3> = (0..n).map(|_| random_vector(rng)).collect();
            let pairing = sphere_average_product(&vs);
            let by_quad = quad.average(|u| vs.iter().map(|v| dot(v, u)).product());
            let exact = sphere_average_polynomial(&SymTensor::from_vectors(&vs)).re;
            // the integrand is bounded by the product of the lengths
            let size: f64 = vs.iter().map(norm).product();
            vs_quad = vs_quad.max((pairing - by_quad).abs() / size);
            vs_exact = vs_exact.max((pairing - exact).abs() / size);
        }
    }
    Ok(vec![Measure::new("vs quadrature", vs_quad, 1e-10), Measure::new("vs exact monomials", vs_exact, 1e-10)])
}

fn inner_product_routes(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for n in 0..=6 {
        let quad = SphereQuadrature::exact_to(2 * n);
        for _ in 0..20 {
            let (a, b) = (random_tensor(rng, n), random_tensor(rng, n));
            let (ha, hb) = (harmonic_part(&a).map_err(msg)?, harmonic_part(&b).map_err(msg)?);
            let by_quad = quad.average(|u| ha.eval_spherical(u).re * hb.eval_spherical(u).re);
            let contraction = harmonic_inner_product(&ha, &hb).map_err(msg)?.re;
            let traces = inner_product_weight(n) * harmonic_contraction_via_traces(&a, &b).map_err(msg)?.re;
            let na = harmonic_inner_product(&ha, &ha).map_err(msg)?.re;
            let nb = harmonic_inner_product(&hb, &hb).map_err(msg)?.re;
            let size = (na * nb).sqrt();
            let d = [(by_quad - contraction).abs(), (by_quad - traces).abs(), (contraction - traces).abs()];
            worst = worst.max(d.into_iter().fold(0.0, f64::max) / size);
        }
    }
    Ok(vec![Measure::new("pairwise relative error", worst, 1e-10)])
}

fn sylvester_round_trip(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let (mut ang, mut scale_err): (f64, f64) = (0.0, 0.0);
    for l in 1..=6 {
        for _ in 0..100 {
            let scale = rng.gen_range(0.5..2.0);
            let s = random_skeleton(rng, l, scale)?;
            let h = skeleton_to_harmonic(&s).map_err(msg)?;
            let back = sylvester_decompose(&h).map_err(msg)?;
            ang = ang.max(matched_angle(s.axes(), back.axes(), true));
            scale_err = scale_err.max((back.charge() - s.charge()).abs() / s.scale());
        }
    }
    Ok(vec![Measure::new("axis angle (rad)", ang, 1e-6), Measure::new("signed scale relative error", scale_err, 1e-8)])
}

fn maxwell_constant(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let (mut spread, mut offset): (f64, f64) = (0.0, 0.0);
    for l in 1..=6 {
        let expected = maxwell_ratio(l);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..20 {
            let s = random_skeleton(rng, l, 1.0)?;
            let h = skeleton_to_harmonic(&s).map_err(msg)?;
            let harmonic_size = harmonic_inner_product(&h, &h).map_err(msg)?.re.sqrt();
            // points near a nodal line would only measure cancellation
            let (r, irr) = loop {
                let r = multipole_core::vec3::scale(&random_unit(rng), rng.gen_range(0.5..2.0));
                let irr = h.eval_irregular(&r).map_err(msg)?.re;
                if irr.abs() * norm(&r).powi(l as i32 + 1) > 1e-2 * harmonic_size {
                    break (r, irr);
                }
            };
            let ratio = maxwell_potential(&s, &r).map_err(msg)? / irr;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            offset = offset.max((ratio - expected).abs() / expected);
        }
        spread = spread.max((hi - lo) / expected);
    }
    Ok(vec![
        Measure::new("relative spread", spread, 1e-10),
        Measure::new("relative offset from (2l-1)!!/l!", offset, 1e-10),
    ])
}

fn coherent_overlap(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in [1, 2, 3, 4, 5, 10] {
        for _ in 0..100 {
            let (n, m) = (random_unit(rng), random_unit(rng));
            let direct = coherent_state(two_j, &n).map_err(msg)?.inner(&coherent_state(two_j, &m).map_err(msg)?);
            worst = worst.max((direct - overlap_geometric(two_j, &n, &m)).norm());
        }
    }
    Ok(vec![Measure::new("complex deviation", worst, 1e-9)])
}

fn resolution_of_unity(_: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in 1..=6 {
        worst = worst.max(resolution_of_unity_check(two_j, 2 * two_j).map_err(msg)?);
    }
    Ok(vec![Measure::new("max entry deviation", worst, 1e-10)])
}

fn alpha_beta_mismatches(table: &SymbolCoefficients) -> f64 {
    (1..=16i128)
        .filter(|&two_j| {
            let j = Rational::new(two_j, 2);
            (table.alpha)(two_j as usize, 1) != j || (table.beta)(two_j as usize, 1) != j + 1
        })
        .count() as f64
}

fn expectation_routes(rng: &mut ChaCha8Rng, table: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in [1, 2, 3, 4, 6] {
        for _ in 0..50 {
            let psi = random_state(rng, two_j);
            let obs = random_observable(rng, two_j.min(4))?;
            let t = expectation_tensor_with(&psi, &obs, table).map_err(msg)?;
            let s = expectation_skeleton(&psi, &obs).map_err(msg)?;
            let m = quantize_components(obs.components(), two_j).map_err(msg)?;
            let o = expectation_matrix(&psi, &m).map_err(msg)?;
            worst = worst.max((t - s).abs()).max((t - o).abs()).max((s - o).abs());
        }
    }
    Ok(vec![
        Measure::new("pairwise deviation", worst, 1e-8),
        Measure::new("alpha(J,1) != J or beta(J,1) != J+1, count", alpha_beta_mismatches(table), 1.0),
    ])
}

fn sectorial_vanishing(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for l in 1..=5 {
        for _ in 0..10 {
            let s = random_skeleton(rng, l, 1.0)?;
            let h = skeleton_to_harmonic(&s).map_err(msg)?;
            for axis in s.axes() {
                let (a, b) = perpendicular_frame(axis);
                for _ in 0..8 {
                    let sec = real_sectorial(&a, &b, rng.gen_range(0.0..std::f64::consts::TAU), l).map_err(msg)?;
                    worst = worst.max(interaction_energy(&h, &sec).map_err(msg)?.abs());
                }
            }
        }
    }
    Ok(vec![Measure::new("interaction energy", worst, 1e-10)])
}

fn majorana_round_trip(rng: &mut ChaCha8Rng, _: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let (mut infidelity, mut ang): (f64, f64) = (0.0, 0.0);
    for two_j in 1..=10 {
        for trial in 0..10 {
            let psi = random_state(rng, two_j);
            let stars = majorana_stars(&psi).map_err(msg)?;
            let back = state_from_stars(&stars).map_err(msg)?;
            infidelity = infidelity.max(1.0 - back.fidelity(&psi));
            if trial == 0 {
                for _ in 0..10 {
                    let axis = random_unit(rng);
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    let rotated = majorana_stars(&rotate_state(&psi, &axis, theta).map_err(msg)?).map_err(msg)?;
                    let r = rotation_matrix(&axis, theta);
                    let moved: Vec<Vec3> = stars.stars().iter().map(|s| mat_vec(&r, s)).collect();
                    ang = ang.max(matched_angle(&moved, rotated.stars(), false));
                }
            }
        }
    }
    Ok(vec![Measure::new("infidelity", infidelity, 1e-10), Measure::new("star angle after rotation (rad)", ang, 1e-8)])
}

fn q_symbol_consistency(rng: &mut ChaCha8Rng, table: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in 1..=6 {
        for _ in 0..5 {
            let degree = 4;
            let obs = random_observable(rng, degree)?;
            let m = quantize_components(obs.components(), two_j).map_err(msg)?;
            let expected = to_symbol_with(&obs, two_j, SymbolKind::Q, table).map_err(msg)?;
            for l in 0..=degree {
                let mut failure = None;
                let projected = multipole_core::harmonic::project_function(
                    |n| {
                        q_symbol(&m, n).unwrap_or_else(|e| {
                            failure = Some(msg(e));
                            0.0
                        })
                    },
                    l,
                    degree,
                )
                .map_err(msg)?;
                if let Some(e) = failure {
                    return Err(e);
                }
                let diff = match expected.component(l) {
                    Some(want) => (projected.tensor() - want.tensor()).max_abs(),
                    None => projected.tensor().max_abs(),
                };
                worst = worst.max(diff);
            }
        }
    }
    Ok(vec![Measure::new("component deviation", worst, 1e-9)])
}

fn p_symbol_consistency(rng: &mut ChaCha8Rng, table: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in 1..=6 {
        let degree = 4;
        let quad = SphereQuadrature::exact_to(degree + two_j);
        for _ in 0..5 {
            let obs = random_observable(rng, degree)?;
            let m = quantize_components(obs.components(), two_j).map_err(msg)?;
            let p = to_symbol_with(&obs, two_j, SymbolKind::P, table).map_err(msg)?;
            let assembled = assemble_from_p_symbol(two_j, &quad, |n| p.evaluate(n)).map_err(msg)?;
            worst = worst.max(assembled.max_abs_diff(&m));
        }
    }
    Ok(vec![Measure::new("entry deviation", worst, 1e-9)])
}

fn expectation_linearity(rng: &mut ChaCha8Rng, table: &SymbolCoefficients) -> Result<Vec<Measure>, String> {
    let mut worst: f64 = 0.0;
    for two_j in [1, 2, 3, 4, 6] {
        for _ in 0..10 {
            let psi = random_state(rng, two_j);
            let (a, b) = (random_observable(rng, two_j.min(4))?, random_observable(rng, two_j.min(4))?);
            let (x, y) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let sum = a.scale(x).try_add(&b.scale(y)).map_err(msg)?;
            let lhs = expectation_tensor_with(&psi, &sum, table).map_err(msg)?;
            let rhs = x * expectation_tensor_with(&psi, &a, table).map_err(msg)?
                + y * expectation_tensor_with(&psi, &b, table).map_err(msg)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(vec![Measure::new("superposition deviation", worst, 1e-10)])
}
