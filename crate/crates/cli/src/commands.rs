//! Command implementations. Each command computes its whole output in memory
//! before anything is written, so a failing command leaves no files behind.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use multipole_core::harmonic::{harmonic_components, reconstruct, HarmonicTensor};
use multipole_core::multipole::{
    great_circle_samples, sylvester_decompose_detailed, MAX_SYLVESTER_ORDER, SYLVESTER_TRACE_TOLERANCE,
};
use multipole_core::operator::{expectation_oracle, expectation_skeleton, expectation_tensor};
use multipole_core::spinstate::{husimi, majorana_stars};
use multipole_core::vec3::from_polar;
use multipole_core::{ScalarKind, MAX_ORDER};
use serde::Serialize;

use crate::checks::{self, CheckConfig};
use crate::error::{CliError, Status};
use crate::formats::{
    parse_json, to_json, ComponentsJson, ConstellationJson, ObservableJson, SkeletonJson, StateJson, TensorJson,
};

pub const RANK_CAP_VAR: &str = "MULTIPOLE_MAX_ORDER";
/// Routes must agree to this for `expect` to succeed.
pub const EXPECT_TOLERANCE: f64 = 1e-7;
pub const MIN_GRID: usize = 8;

/// Result of a command: the main payload, auxiliary files keyed by the
/// suffix appended to the output path, and a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub status: Status,
    pub payload: String,
    pub aux: Vec<(&'static str, String)>,
    pub summary: String,
}

impl Output {
    fn ok(payload: String, summary: String) -> Self {
        Output { status: Status::Ok, payload, aux: Vec::new(), summary }
    }
}

/// Rank cap from the environment value, if any; it can only lower the
/// built-in maximum.
pub fn rank_cap(env_value: Option<&str>) -> Result<usize, CliError> {
    match env_value {
        None => Ok(MAX_ORDER),
        Some(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| CliError::parse(format!("{RANK_CAP_VAR} must be a non-negative integer, got {v:?}")))?;
            Ok(cap.min(MAX_ORDER))
        }
    }
}

pub fn decompose(input: &str, cap: usize) -> Result<Output, CliError> {
    let t = parse_json::<TensorJson>(input, "tensor")?.to_tensor(cap)?;
    let comps = harmonic_components(&t)?;
    let residual = (&reconstruct(&comps)? - &t).max_abs();
    let out =
        ComponentsJson { rank: t.rank(), components: comps.iter().map(TensorJson::from_harmonic).collect(), residual };
    let orders: Vec<String> = comps.iter().map(|h| h.order().to_string()).collect();
    let summary = format!(
        "rank {}: {} harmonic components (orders {}), residual {residual:.3e}",
        t.rank(),
        comps.len(),
        orders.join(", ")
    );
    Ok(Output::ok(to_json(&out), summary))
}

pub fn sylvester(input: &str, cap: usize, circles: Option<usize>) -> Result<Output, CliError> {
    let t = parse_json::<TensorJson>(input, "harmonic tensor")?.to_tensor(cap.min(MAX_SYLVESTER_ORDER))?;
    if t.kind() == ScalarKind::Complex {
        return Err(CliError::parse("multipole vectors need a real tensor"));
    }
    let h = HarmonicTensor::new(t, SYLVESTER_TRACE_TOLERANCE)?;
    let d = sylvester_decompose_detailed(&h)?;
    let json = SkeletonJson::from_skeleton(&d.skeleton).with_details(d.residual, &d.clusters);
    let mut out = Output::ok(
        to_json(&json),
        format!(
            "order {}: scale {:.6e}, sign {:+}, residual {:.3e}",
            d.skeleton.order(),
            d.skeleton.scale(),
            d.skeleton.sign(),
            d.residual
        ),
    );
    if let Some(count) = circles {
        let samples = great_circle_samples(&d.skeleton, count)?;
        let mut csv = String::from("circle_index,x,y,z\n");
        for (i, circle) in samples.circles.iter().enumerate() {
            for p in circle {
                let _ = writeln!(csv, "{i},{:.17e},{:.17e},{:.17e}", p[0], p[1], p[2]);
            }
        }
        out.aux.push((".circles.csv", csv));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Tensor,
    Skeleton,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Tensor, Method::Skeleton, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tensor => "tensor",
            Method::Skeleton => "skeleton",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Serialize)]
struct ExpectJson {
    two_j: usize,
    values: Vec<MethodValue>,
    max_delta: f64,
}

#[derive(Serialize)]
struct MethodValue {
    method: &'static str,
    value: f64,
}

pub fn expect(state: &str, observable: &str, cap: usize, methods: &[Method]) -> Result<Output, CliError> {
    let psi = parse_json::<StateJson>(state, "state")?.to_state(cap)?;
    let obs = parse_json::<ObservableJson>(observable, "observable")?.to_observable(cap)?;
    let mut methods = if methods.is_empty() { Method::ALL.to_vec() } else { methods.to_vec() };
    methods.sort();
    methods.dedup();
    let mut values = Vec::with_capacity(methods.len());
    for &m in &methods {
        let value = match m {
            Method::Tensor => expectation_tensor(&psi, &obs)?,
            Method::Skeleton => expectation_skeleton(&psi, &obs)?,
            Method::Oracle => expectation_oracle(&psi, &obs)?,
        };
        values.push(MethodValue { method: m.name(), value });
    }
    let mut max_delta: f64 = 0.0;
    for a in &values {
        for b in &values {
            max_delta = max_delta.max((a.value - b.value).abs());
        }
    }
    let summary = values.iter().map(|v| format!("{} {:.12}", v.method, v.value)).collect::<Vec<_>>().join(", ");
    let status = if max_delta < EXPECT_TOLERANCE { Status::Ok } else { Status::CheckFailed };
    Ok(Output {
        status,
        payload: to_json(&ExpectJson { two_j: psi.two_j(), values, max_delta }),
        aux: Vec::new(),
        summary: format!("{summary}; max delta {max_delta:.3e}"),
    })
}

/// Husimi function on an `N × 2N` equiangular grid of cell centres, as CSV,
/// with the Majorana constellation as an auxiliary JSON file.
pub fn husimi_grid(state: &str, cap: usize, grid: usize) -> Result<Output, CliError> {
    if grid < MIN_GRID {
        return Err(CliError::parse(format!("--grid must be at least {MIN_GRID}, got {grid}")));
    }
    let psi = parse_json::<StateJson>(state, "state")?.to_state(cap)?;
    let stars = majorana_stars(&psi)?;
    let (nt, np) = (grid, 2 * grid);
    let mut csv = String::from("theta_index,phi_index,theta,phi,Q\n");
    let mut integral = 0.0;
    let cell = (std::f64::consts::PI / nt as f64) * (std::f64::consts::TAU / np as f64);
    for i in 0..nt {
        let theta = std::f64::consts::PI * (i as f64 + 0.5) / nt as f64;
        for k in 0..np {
            let phi = std::f64::consts::TAU * (k as f64 + 0.5) / np as f64;
            let q = husimi(&psi, &from_polar(theta, phi));
            integral += q * theta.sin() * cell;
            let _ = writeln!(csv, "{i},{k},{theta:.17e},{phi:.17e},{q:.17e}");
        }
    }
    Ok(Output {
        status: Status::Ok,
        payload: csv,
        aux: vec![(".stars.json", to_json(&ConstellationJson::from_constellation(&stars)))],
        summary: format!(
            "2J = {}: {nt}x{np} grid, integral {integral:.6} (exact {:.6}), {} stars",
            psi.two_j(),
            4.0 * std::f64::consts::PI / (psi.two_j() + 1) as f64,
            stars.stars().len()
        ),
    })
}

pub fn check(seed: u64) -> Output {
    let outcomes = checks::run_all(&CheckConfig { seed, ..CheckConfig::default() });
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    let summary = if failed.is_empty() {
        format!("all {} checks passed", outcomes.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Output {
        status: if failed.is_empty() { Status::Ok } else { Status::CheckFailed },
        payload: checks::render_report(seed, &outcomes),
        aux: Vec::new(),
        summary,
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn aux_path(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes the payload to `path` and every auxiliary file next to it. Files
/// are staged in the target directory and renamed into place together; on
/// failure nothing new is left behind.
pub fn write_files(path: &Path, output: &Output) -> Result<Vec<PathBuf>, CliError> {
    let io = |e: std::io::Error| CliError::new(Status::CheckFailed, format!("cannot write output: {e}"));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut targets = vec![(path.to_path_buf(), output.payload.as_str())];
    for (suffix, text) in &output.aux {
        targets.push((aux_path(path, suffix), text.as_str()));
    }
    let mut staged = Vec::with_capacity(targets.len());
    for (target, text) in &targets {
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
        tmp.write_all(text.as_bytes()).map_err(io)?;
        staged.push((tmp, target.clone()));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, target) in staged {
        if let Err(e) = tmp.persist(&target) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(io(e.error));
        }
        written.push(target);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZZ: &str = r#"{"rank":2,"kind":"real","coeffs":[{"pqs":[0,0,2],"re":1}]}"#;

    #[test]
    fn rank_cap_parsing() {
        assert_eq!(rank_cap(None).unwrap(), MAX_ORDER);
        assert_eq!(rank_cap(Some("4")).unwrap(), 4);
        assert_eq!(rank_cap(Some("99")).unwrap(), MAX_ORDER);
        assert_eq!(rank_cap(Some("x")).unwrap_err().status, Status::Parse);
    }

    #[test]
    fn decompose_z_squared() {
        let out = decompose(ZZ, MAX_ORDER).unwrap();
        let j: ComponentsJson = parse_json(&out.payload, "components").unwrap();
        assert_eq!(j.components.len(), 2);
        assert!(j.residual < 1e-12);
        assert_eq!(decompose(ZZ, 1).unwrap_err().status, Status::RankCap);
    }

    #[test]
    fn sylvester_statuses() {
        assert_eq!(sylvester(ZZ, MAX_ORDER, None).unwrap_err().status, Status::NotTraceless);
        let h = r#"{"order":2,"rank":2,"kind":"real","coeffs":[
            {"pqs":[2,0,0],"re":-0.3333333333333333},{"pqs":[0,2,0],"re":-0.3333333333333333},{"pqs":[0,0,2],"re":0.6666666666666666}]}"#;
        let out = sylvester(h, MAX_ORDER, Some(12)).unwrap();
        let s: SkeletonJson = parse_json(&out.payload, "skeleton").unwrap();
        for a in &s.axes {
            assert!((a[2] - 1.0).abs() < 1e-6);
        }
        assert_eq!(out.aux[0].1.lines().count(), 1 + 2 * 12);
    }

    #[test]
    fn check_report_is_deterministic_text() {
        let out = check(7);
        assert!(out.payload.starts_with("multipole self-check, seed 7\n"));
        assert_eq!(out.payload, check(7).payload);
    }
}
