//! JSON file formats for tensors, harmonic components, skeletons, states,
//! constellations and observables.
//!
//! Parsing validates the schema fully before any value is built; writers emit
//! canonical, deterministic output.

use std::collections::BTreeSet;

use multipole_core::harmonic::HarmonicTensor;
use multipole_core::multipole::AxisCluster;
use multipole_core::symtensor::multi_indices;
use multipole_core::vec3::Vec3;
use multipole_core::{
    ClassicalObservable, Complex64, Constellation, MultiIndex, ScalarKind, Skeleton, SpinState, SymTensor, SymbolKind,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindJson {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffJson {
    pub pqs: [usize; 3],
    pub re: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
}

/// `{ "rank", "kind", "coeffs": [{ "pqs", "re", "im" }] }`, with an optional
/// `"order"` annotating harmonic tensors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub rank: usize,
    pub kind: KindJson,
    pub coeffs: Vec<CoeffJson>,
}

impl TensorJson {
    /// Nonzero coefficients in descending lexicographic `(p, q, s)` order.
    pub fn from_tensor(t: &SymTensor) -> Self {
        let complex = t.kind() == ScalarKind::Complex;
        let coeffs = multi_indices(t.rank())
            .filter_map(|mi| {
                let c = t.coeff(mi);
                if c == Complex64::new(0.0, 0.0) {
                    return None;
                }
                Some(CoeffJson { pqs: mi.as_array(), re: c.re, im: complex.then_some(c.im) })
            })
            .collect();
        TensorJson {
            order: None,
            rank: t.rank(),
            kind: if complex { KindJson::Complex } else { KindJson::Real },
            coeffs,
        }
    }

    pub fn from_harmonic(h: &HarmonicTensor) -> Self {
        TensorJson { order: Some(h.order()), ..TensorJson::from_tensor(h.tensor()) }
    }

    pub fn to_tensor(&self, rank_cap: usize) -> Result<SymTensor, CliError> {
        if self.rank > rank_cap {
            return Err(CliError::new(Status::RankCap, format!("rank {} exceeds the cap {rank_cap}", self.rank)));
        }
        if let Some(order) = self.order {
            if order != self.rank {
                return Err(CliError::parse(format!("order {order} does not match rank {}", self.rank)));
            }
        }
        let kind = match self.kind {
            KindJson::Real => ScalarKind::Real,
            KindJson::Complex => ScalarKind::Complex,
        };
        let mut t = SymTensor::zero(self.rank, kind);
        let mut seen = BTreeSet::new();
        for c in &self.coeffs {
            let [p, q, s] = c.pqs;
            if p + q + s != self.rank {
                return Err(CliError::parse(format!("pqs {:?} does not sum to rank {}", c.pqs, self.rank)));
            }
            if !seen.insert(c.pqs) {
                return Err(CliError::parse(format!("duplicate pqs {:?}", c.pqs)));
            }
            let im = c.im.unwrap_or(0.0);
            if kind == ScalarKind::Real && im != 0.0 {
                return Err(CliError::parse(format!("real tensor has imaginary part at {:?}", c.pqs)));
            }
            if !c.re.is_finite() || !im.is_finite() {
                return Err(CliError::parse(format!("non-finite coefficient at {:?}", c.pqs)));
            }
            t.set_coeff(MultiIndex::from_array(c.pqs), Complex64::new(c.re, im));
        }
        Ok(t)
    }
}

/// Output of `decompose`: harmonic components from the top order down, and
/// the reconstruction error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentsJson {
    pub rank: usize,
    pub components: Vec<TensorJson>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub axis: Vec3,
    pub multiplicity: usize,
}

/// `{ "order", "scale", "sign", "axes" }`; the decomposer adds the round-trip
/// residual and the root cluster multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkeletonJson {
    pub order: usize,
    pub scale: f64,
    pub sign: i8,
    pub axes: Vec<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<ClusterJson>,
}

impl SkeletonJson {
    pub fn from_skeleton(s: &Skeleton) -> Self {
        SkeletonJson {
            order: s.order(),
            scale: s.scale(),
            sign: s.sign(),
            axes: s.axes().to_vec(),
            residual: None,
            clusters: Vec::new(),
        }
    }

    pub fn with_details(mut self, residual: f64, clusters: &[AxisCluster]) -> Self {
        self.residual = Some(residual);
        self.clusters = clusters.iter().map(|c| ClusterJson { axis: c.axis, multiplicity: c.multiplicity }).collect();
        self
    }

    pub fn to_skeleton(&self) -> Result<Skeleton, CliError> {
        if self.axes.len() != self.order {
            return Err(CliError::parse(format!("order {} but {} axes", self.order, self.axes.len())));
        }
        Skeleton::new(self.axes.clone(), self.scale, self.sign).map_err(|e| CliError::parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `{ "two_j", "amplitudes": [{ "re", "im" }] }`, ordered `m = J` down to `-J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub two_j: usize,
    pub amplitudes: Vec<ComplexJson>,
}

impl StateJson {
    pub fn from_state(psi: &SpinState) -> Self {
        StateJson {
            two_j: psi.two_j(),
            amplitudes: psi.amplitudes().iter().map(|a| ComplexJson { re: a.re, im: a.im }).collect(),
        }
    }

    pub fn to_state(&self, rank_cap: usize) -> Result<SpinState, CliError> {
        if self.two_j > rank_cap {
            return Err(CliError::new(Status::RankCap, format!("2J = {} exceeds the cap {rank_cap}", self.two_j)));
        }
        if self.amplitudes.len() != self.two_j + 1 {
            return Err(CliError::parse(format!(
                "2J = {} needs {} amplitudes, got {}",
                self.two_j,
                self.two_j + 1,
                self.amplitudes.len()
            )));
        }
        if self.amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(CliError::parse("non-finite amplitude"));
        }
        let a = self.amplitudes.iter().map(|a| Complex64::new(a.re, a.im)).collect();
        Ok(SpinState::new(self.two_j, a)?)
    }
}

/// Mirrors the skeleton axes format: `{ "two_j", "stars": [[x, y, z]] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstellationJson {
    pub two_j: usize,
    pub stars: Vec<Vec3>,
}

impl ConstellationJson {
    pub fn from_constellation(c: &Constellation) -> Self {
        ConstellationJson { two_j: c.two_j(), stars: c.stars().to_vec() }
    }

    pub fn to_constellation(&self) -> Result<Constellation, CliError> {
        if self.stars.len() != self.two_j {
            return Err(CliError::parse(format!("2J = {} but {} stars", self.two_j, self.stars.len())));
        }
        Ok(Constellation::new(self.stars.clone())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObservableKindJson {
    #[serde(rename = "classical")]
    Classical,
    Q,
    P,
}

impl From<SymbolKind> for ObservableKindJson {
    fn from(k: SymbolKind) -> Self {
        match k {
            SymbolKind::Classical => ObservableKindJson::Classical,
            SymbolKind::Q => ObservableKindJson::Q,
            SymbolKind::P => ObservableKindJson::P,
        }
    }
}

impl From<ObservableKindJson> for SymbolKind {
    fn from(k: ObservableKindJson) -> Self {
        match k {
            ObservableKindJson::Classical => SymbolKind::Classical,
            ObservableKindJson::Q => SymbolKind::Q,
            ObservableKindJson::P => SymbolKind::P,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableComponentJson {
    pub order: usize,
    pub tensor: TensorJson,
}

/// `{ "components": [{ "order", "tensor" }], "kind": "classical" | "Q" | "P" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableJson {
    pub components: Vec<ObservableComponentJson>,
    pub kind: ObservableKindJson,
}

impl ObservableJson {
    pub fn from_observable(obs: &ClassicalObservable) -> Self {
        ObservableJson {
            components: obs
                .components()
                .iter()
                .map(|h| ObservableComponentJson { order: h.order(), tensor: TensorJson::from_tensor(h.tensor()) })
                .collect(),
            kind: obs.kind().into(),
        }
    }

    pub fn to_observable(&self, rank_cap: usize) -> Result<ClassicalObservable, CliError> {
        let mut comps = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let t = c.tensor.to_tensor(rank_cap)?;
            if t.rank() != c.order {
                return Err(CliError::parse(format!("component order {} holds a rank-{} tensor", c.order, t.rank())));
            }
            comps.push(HarmonicTensor::new_unchecked(t));
        }
        Ok(ClassicalObservable::new(self.kind.into(), comps)?)
    }
}

/// Parses JSON, mapping every failure to the parse status.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(format!("malformed {what} JSON: {e}")))
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use multipole_core::vec3::Z;

    #[test]
    fn tensor_round_trip_is_canonical() {
        let t = SymTensor::from_real_coeffs(2, &[1.0, 0.0, 2.0, 0.0, -3.0, 0.5]).unwrap();
        let j = TensorJson::from_tensor(&t);
        let pqs: Vec<[usize; 3]> = j.coeffs.iter().map(|c| c.pqs).collect();
        assert_eq!(pqs, vec![[2, 0, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]]);
        assert!(j.coeffs.iter().all(|c| c.im.is_none()));
        let back: TensorJson = parse_json(&to_json(&j), "tensor").unwrap();
        assert_eq!(back.to_tensor(16).unwrap(), t);
    }

    #[test]
    fn tensor_validation() {
        let bad_sum = r#"{"rank":2,"kind":"real","coeffs":[{"pqs":[1,0,0],"re":1}]}"#;
        let dup = r#"{"rank":1,"kind":"real","coeffs":[{"pqs":[1,0,0],"re":1},{"pqs":[1,0,0],"re":2}]}"#;
        let im = r#"{"rank":1,"kind":"real","coeffs":[{"pqs":[1,0,0],"re":1,"im":1}]}"#;
        for text in [bad_sum, dup, im] {
            let j: TensorJson = parse_json(text, "tensor").unwrap();
            assert_eq!(j.to_tensor(16).unwrap_err().status, Status::Parse);
        }
        let big = r#"{"rank":5,"kind":"real","coeffs":[]}"#;
        let j: TensorJson = parse_json(big, "tensor").unwrap();
        assert_eq!(j.to_tensor(4).unwrap_err().status, Status::RankCap);
        assert_eq!(parse_json::<TensorJson>("{", "tensor").unwrap_err().status, Status::Parse);
        assert_eq!(
            parse_json::<TensorJson>(r#"{"rank":1,"kind":"quaternion","coeffs":[]}"#, "tensor").unwrap_err().status,
            Status::Parse
        );
    }

    #[test]
    fn state_and_observable_round_trip() {
        let psi = SpinState::new(1, vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]).unwrap();
        let j = StateJson::from_state(&psi);
        let back: StateJson = parse_json(&to_json(&j), "state").unwrap();
        assert_eq!(back.to_state(16).unwrap(), psi);
        let zero = StateJson { two_j: 1, amplitudes: vec![ComplexJson { re: 0.0, im: 0.0 }; 2] };
        assert_eq!(zero.to_state(16).unwrap_err().status, Status::ZeroState);

        let obs = multipole_core::operator::classical_from_polynomial(&SymTensor::from_vectors(&[Z, Z])).unwrap();
        let j = ObservableJson::from_observable(&obs);
        let text = to_json(&j);
        assert!(text.contains("\"classical\""));
        let back: ObservableJson = parse_json(&text, "observable").unwrap();
        assert_eq!(back.to_observable(16).unwrap(), obs);
    }

    #[test]
    fn skeleton_round_trip() {
        let s = Skeleton::new(vec![Z, [1.0, 0.0, 0.0]], 2.0, -1).unwrap();
        let j = SkeletonJson::from_skeleton(&s);
        let back: SkeletonJson = parse_json(&to_json(&j), "skeleton").unwrap();
        assert_eq!(back.to_skeleton().unwrap(), s);
    }
}
