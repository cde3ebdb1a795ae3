//! Experiment configuration files.
//!
//! ```toml
//! experiment = "counterexample"
//! seed = 0
//!
//! [system]
//! variant = "weyl"
//! alpha = "golden"
//!
//! [params]
//! y = [0.1, 0.2, 0.45]
//! epsilon = 0.01
//! n_max = 1000000
//! ```
//!
//! `[system]` uses the keys of [`SystemDescription`]; `[params]` depends on the
//! experiment kind. Angles are numbers in `[0, 1)` or strings accepted by
//! `FixedAngle::from_str` (`"golden"`, `"1/3"`, `"0x..."`).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use torus_ap::averages::{BoxSet, Observable};
use torus_ap::{FixedAngle, SystemDescription, TorusPoint};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    RelationScan,
    Counterexample,
    CubeResidual,
    Averages,
    MotionScan,
    TransitivityProbe,
}

impl ExperimentKind {
    pub const ALL: [Self; 6] = [
        Self::RelationScan,
        Self::Counterexample,
        Self::CubeResidual,
        Self::Averages,
        Self::MotionScan,
        Self::TransitivityProbe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RelationScan => "relation-scan",
            Self::Counterexample => "counterexample",
            Self::CubeResidual => "cube-residual",
            Self::Averages => "averages",
            Self::MotionScan => "motion-scan",
            Self::TransitivityProbe => "transitivity-probe",
        }
    }

    pub fn parse(name: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| CliError::UnknownExperiment(name.to_string()))
    }
}

/// A parsed configuration file plus command-line overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub system: Option<SystemDescription>,
    pub params: Params,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: u64,
    /// Directory of the orbit cache, if any.
    pub cache: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    system: Option<SystemDescription>,
    #[serde(default)]
    params: toml::Table,
    out: Option<PathBuf>,
    workers: Option<usize>,
    #[serde(default)]
    seed: u64,
    cache: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let kind = ExperimentKind::parse(&raw.experiment)?;
        let params = Params::parse(kind, raw.params)?;
        let cfg = Self {
            kind,
            system: raw.system,
            params,
            out: raw.out,
            workers: raw.workers,
            seed: raw.seed,
            cache: raw.cache,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> CliResult<()> {
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        let needs_system = !matches!(self.params, Params::Counterexample(_));
        if needs_system && self.system.is_none() {
            return Err(CliError::Config(format!(
                "experiment `{}` needs a [system] table",
                self.kind.name()
            )));
        }
        if let Some(desc) = &self.system {
            desc.build::<f64>()?;
        }
        Ok(())
    }

    /// Hex SHA-256 of everything that determines the data files
    /// (kind, system, parameters, seed); output location and workers are excluded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "experiment": self.kind.name(),
            "system": self.system,
            "params": self.params,
            "seed": self.seed,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }
}

/// An angle written as a number or as a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleSpec {
    Number(f64),
    Text(String),
}

impl AngleSpec {
    pub fn angle(&self) -> CliResult<FixedAngle> {
        match self {
            Self::Number(v) if v.is_finite() => Ok(FixedAngle::from_f64(*v)),
            Self::Number(v) => Err(CliError::Config(format!("angle must be finite, got {v}"))),
            Self::Text(s) => Ok(s.parse::<FixedAngle>()?),
        }
    }
}

pub type PointSpec = Vec<AngleSpec>;

pub fn point(spec: &PointSpec) -> CliResult<TorusPoint> {
    let coords = spec.iter().map(AngleSpec::angle).collect::<CliResult<Vec<_>>>()?;
    Ok(TorusPoint::from_coords(&coords)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    Proximal,
    Ap,
    Rp,
    IndAp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub x: PointSpec,
    pub y: PointSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationParams {
    pub relation: RelationKind,
    #[serde(default = "one")]
    pub d: usize,
    pub delta: f64,
    pub n_max: u64,
    #[serde(default = "one")]
    pub ball_grid: usize,
    #[serde(default)]
    pub restarts: usize,
    /// Phase-space samples per axis for independence searches.
    #[serde(default = "default_sample_grid")]
    pub sample_grid: usize,
    pub pairs: Vec<PairSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    /// Defaults to the `[system]` rotation number, else the golden mean.
    pub alpha: Option<AngleSpec>,
    pub y: Vec<AngleSpec>,
    pub epsilon: f64,
    pub n_max: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeSampleSpec {
    pub x: PointSpec,
    pub nvec: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeParams {
    pub d: usize,
    pub x: PointSpec,
    pub y: PointSpec,
    pub budgets: Vec<u64>,
    pub z_grid: usize,
    #[serde(default)]
    pub samples: Vec<CubeSampleSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AverageMode {
    Birkhoff,
    Multiple,
    Recurrence,
    CircleExtension,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxSpec {
    pub fn build(&self) -> CliResult<BoxSet> {
        Ok(BoxSet::new(&self.lo, &self.hi)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AverageParams {
    pub mode: AverageMode,
    pub x: Option<PointSpec>,
    pub n_list: Option<Vec<u64>>,
    #[serde(default)]
    pub observables: Vec<Observable>,
    pub set: Option<BoxSpec>,
    pub k: Option<usize>,
    pub n_max: Option<u64>,
    pub grid: Option<usize>,
    /// Also export the first `orbit_points` points of the orbit of `x`.
    pub orbit_points: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionParams {
    pub grid: usize,
    pub n_max: u64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitivityParams {
    #[serde(default = "one")]
    pub d: usize,
    pub delta: f64,
    pub n_max: u64,
    #[serde(default = "one")]
    pub ball_grid: usize,
    pub triples: Vec<[PointSpec; 3]>,
}

fn one() -> usize {
    1
}

fn default_sample_grid() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Relation(RelationParams),
    Counterexample(CounterexampleParams),
    Cube(CubeParams),
    Average(AverageParams),
    Motion(MotionParams),
    Transitivity(TransitivityParams),
}

impl Params {
    fn parse(kind: ExperimentKind, table: toml::Table) -> CliResult<Self> {
        fn typed<T: serde::de::DeserializeOwned>(table: toml::Table) -> CliResult<T> {
            toml::Value::Table(table)
                .try_into()
                .map_err(|e: toml::de::Error| CliError::Config(format!("[params]: {}", e.message())))
        }
        Ok(match kind {
            ExperimentKind::RelationScan => Self::Relation(typed(table)?),
            ExperimentKind::Counterexample => Self::Counterexample(typed(table)?),
            ExperimentKind::CubeResidual => Self::Cube(typed(table)?),
            ExperimentKind::Averages => Self::Average(typed(table)?),
            ExperimentKind::MotionScan => Self::Motion(typed(table)?),
            ExperimentKind::TransitivityProbe => Self::Transitivity(typed(table)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_counterexample() {
        let cfg = ExperimentConfig::from_toml(
            "experiment = \"counterexample\"\n[params]\ny = [0.1, \"1/3\"]\nepsilon = 0.01\nn_max = 100\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Counterexample);
        let Params::Counterexample(p) = &cfg.params else { panic!() };
        assert_eq!(p.y[1].angle().unwrap(), FixedAngle::from_ratio(1, 3));
    }

    #[test]
    fn rejects_unknown_kind_and_keys() {
        let err = ExperimentConfig::from_toml("experiment = \"nope\"\n").unwrap_err();
        assert!(matches!(err, CliError::UnknownExperiment(_)));
        let err = ExperimentConfig::from_toml(
            "experiment = \"motion-scan\"\n[system]\nvariant = \"cocycle\"\nalpha = \"liouville\"\n[params]\ngrid = 4\nn_max = 10\nthreshold = 1\nextra = 1\n",
        )
        .unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn hash_ignores_location_and_workers() {
        let base = "experiment = \"counterexample\"\n[params]\ny = [0.1]\nepsilon = 0.01\nn_max = 100\n";
        let a = ExperimentConfig::from_toml(base).unwrap();
        let b = ExperimentConfig::from_toml(&format!("out = \"elsewhere\"\nworkers = 4\n{base}")).unwrap();
        assert_eq!(a.hash(), b.hash());
        let c = ExperimentConfig::from_toml(&base.replace("0.01", "0.02")).unwrap();
        assert_ne!(a.hash(), c.hash());
    }
}
