//! Experiment configuration files.
//!
//! ```json
//! {
//!   "command": "theorem3",
//!   "series": {"generator": "factorial_lacunary", "terms": 170},
//!   "parameters": { ... },
//!   "output": "runs/theorem3",
//!   "seed": 1
//! }
//! ```
//!
//! `series` is an inline series object, `{"path": "file.json"}` (relative to the
//! config file) or a generator. Parse errors carry the line and column in the
//! config file.

use std::fmt;
use std::path::{Path, PathBuf};

use dirichlet_lab_core::experiments::{CounterexampleParams, Theorem2Params, Theorem3Params};
use dirichlet_lab_core::potential::{BoundaryMeasure, BoundaryPart, WosDomain};
use dirichlet_lab_core::series::Route;
use dirichlet_lab_core::{ApproachRegion, GeneralDirichletSeries, NtParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::formats::SeriesFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Eval,
    Scan,
    Theorem1,
    Theorem2,
    Theorem3,
    Corollary6,
    Counterexample,
    Potential,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = serde_json::to_value(self).expect("command serializes");
        f.write_str(v.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    Geometric { terms: usize },
    ZetaShift { k: u32, terms: usize },
    FactorialLacunary { terms: usize },
    PowerExponents { base: f64, ratio: f64, terms: usize },
}

impl Generator {
    pub fn build(&self) -> dirichlet_lab_core::Result<GeneralDirichletSeries> {
        match *self {
            Generator::Geometric { terms } => GeneralDirichletSeries::geometric(terms),
            Generator::ZetaShift { k, terms } => GeneralDirichletSeries::zeta_shift(k, terms),
            Generator::FactorialLacunary { terms } => GeneralDirichletSeries::factorial_lacunary(terms),
            Generator::PowerExponents { base, ratio, terms } => {
                GeneralDirichletSeries::power_exponents(base, ratio, terms)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSource {
    Inline(SeriesFile),
    /// Resolved against the config file's directory.
    Path(PathBuf),
    Generator(Generator),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelectorSpec {
    /// `1..=count`, or every stored term.
    Full {
        #[serde(default)]
        count: Option<usize>,
    },
    Arithmetic { start: usize, step: usize, count: usize },
    Explicit { indices: Vec<usize> },
}

impl Default for SelectorSpec {
    fn default() -> Self {
        SelectorSpec::Full { count: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    /// `points` equally spaced ordinates, both ends included.
    Range { from: f64, to: f64, points: usize },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range { from, to, points } => match points {
                0 => Vec::new(),
                1 => vec![*from],
                n => (0..*n).map(|j| from + (to - from) * j as f64 / (n - 1) as f64).collect(),
            },
        }
    }
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalParams {
    /// `[σ, t]` pairs.
    pub points: Vec<[f64; 2]>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub route: Route,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    pub grid: GridSpec,
    #[serde(default)]
    pub selector: SelectorSpec,
    pub tol: f64,
    /// Only used by `theorem1`.
    #[serde(default)]
    pub nt: NtParams,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem2Config {
    #[serde(default)]
    pub selector: SelectorSpec,
    pub t1: f64,
    pub t2: f64,
    pub regions: [ApproachRegion; 2],
    #[serde(default)]
    pub measure: BoundaryMeasure,
    pub rect_eps: f64,
    pub mesh: f64,
    #[serde(default)]
    pub levels: Option<usize>,
    #[serde(default)]
    pub eval_tol: Option<f64>,
    #[serde(default)]
    pub stabilization_ratio: Option<f64>,
    #[serde(default)]
    pub interval_points: Option<usize>,
}

impl Theorem2Config {
    pub fn probe_params(&self) -> Theorem2Params {
        let d = Theorem2Params::default();
        Theorem2Params {
            levels: self.levels.unwrap_or(d.levels),
            eval_tol: self.eval_tol.unwrap_or(d.eval_tol),
            stabilization_ratio: self.stabilization_ratio.unwrap_or(d.stabilization_ratio),
            interval_points: self.interval_points.unwrap_or(d.interval_points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditOptions {
    #[serde(default)]
    pub interval_points: Option<usize>,
    #[serde(default)]
    pub region_mesh: Option<f64>,
    #[serde(default)]
    pub nt: Option<NtParams>,
}

impl AuditOptions {
    pub fn theorem3_params(&self) -> Theorem3Params {
        let d = Theorem3Params::default();
        Theorem3Params {
            interval_points: self.interval_points.unwrap_or(d.interval_points),
            region_mesh: self.region_mesh.unwrap_or(d.region_mesh),
            nt: self.nt.unwrap_or(d.nt),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem3Config {
    #[serde(default)]
    pub selector: SelectorSpec,
    pub t0: f64,
    pub interval: (f64, f64),
    pub region: ApproachRegion,
    pub tol: f64,
    #[serde(default)]
    pub interval_points: Option<usize>,
    #[serde(default)]
    pub region_mesh: Option<f64>,
    #[serde(default)]
    pub nt: Option<NtParams>,
}

impl Theorem3Config {
    pub fn audit(&self) -> AuditOptions {
        AuditOptions {
            interval_points: self.interval_points,
            region_mesh: self.region_mesh,
            nt: self.nt,
        }
    }
}

fn default_ratio_min() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corollary6Config {
    /// Dense coefficients `[re, im]` from degree 0.
    #[serde(default)]
    pub taylor: Option<Vec<[f64; 2]>>,
    /// `[degree, re, im]` triples with increasing degrees.
    #[serde(default)]
    pub taylor_sparse: Option<Vec<(usize, f64, f64)>>,
    pub w: [f64; 2],
    pub p: Vec<usize>,
    /// Angle offsets from `arg w`.
    pub arc: (f64, f64),
    pub region: ApproachRegion,
    pub tol: f64,
    #[serde(default = "default_ratio_min")]
    pub ratio_min: f64,
    #[serde(default)]
    pub polynomial: bool,
    #[serde(default)]
    pub interval_points: Option<usize>,
    #[serde(default)]
    pub region_mesh: Option<f64>,
    #[serde(default)]
    pub nt: Option<NtParams>,
}

impl Corollary6Config {
    pub fn audit(&self) -> AuditOptions {
        AuditOptions {
            interval_points: self.interval_points,
            region_mesh: self.region_mesh,
            nt: self.nt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default)]
    pub mesh_points: Option<usize>,
    #[serde(default)]
    pub nt_tol: Option<f64>,
    #[serde(default)]
    pub nt: Option<NtParams>,
    #[serde(default)]
    pub region_mesh: Option<f64>,
}

impl CounterexampleConfig {
    pub fn params(&self) -> CounterexampleParams {
        let d = CounterexampleParams::default();
        CounterexampleParams {
            k_max: self.k_max.unwrap_or(d.k_max),
            mesh_points: self.mesh_points.unwrap_or(d.mesh_points),
            nt_tol: self.nt_tol.unwrap_or(d.nt_tol),
            nt: self.nt.unwrap_or(d.nt),
            region_mesh: self.region_mesh.unwrap_or(d.region_mesh),
        }
    }
}

fn default_k_mesh() -> usize {
    201
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    Poisson {
        measure: BoundaryMeasure,
        points: Vec<[f64; 2]>,
    },
    Green {
        segment: [f64; 2],
        pole: [f64; 2],
        points: Vec<[f64; 2]>,
    },
    LemmaL {
        segment: [f64; 2],
        sigma0: f64,
        m: Vec<usize>,
        samples: Vec<[f64; 2]>,
        #[serde(default = "default_k_mesh")]
        k_mesh_points: usize,
    },
    HarmonicMeasure {
        domain: WosDomain,
        z: [f64; 2],
        parts: Vec<BoundaryPart>,
        walks: usize,
        #[serde(default)]
        eps_boundary: Option<f64>,
        #[serde(default)]
        max_steps: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Eval(EvalParams),
    Scan(ScanParams),
    Theorem1(ScanParams),
    Theorem2(Box<Theorem2Config>),
    Theorem3(Box<Theorem3Config>),
    Corollary6(Box<Corollary6Config>),
    Counterexample(CounterexampleConfig),
    Potential(Box<PotentialConfig>),
}

impl Params {
    pub fn needs_series(&self) -> bool {
        match self {
            Params::Corollary6(_) | Params::Counterexample(_) => false,
            Params::Potential(p) => matches!(**p, PotentialConfig::LemmaL { .. }),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub origin: PathBuf,
    pub command: Command,
    pub series: Option<SeriesSource>,
    pub params: Params,
    pub output: Option<String>,
    pub seed: Option<u64>,
    /// The file as parsed, embedded verbatim in reports.
    pub raw: serde_json::Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig<'a> {
    command: Command,
    #[serde(borrow, default)]
    series: Option<&'a RawValue>,
    #[serde(borrow, default)]
    parameters: Option<&'a RawValue>,
    #[serde(default)]
    output: Option<String>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathSpec {
    path: PathBuf,
}

struct Source<'a> {
    text: &'a str,
    path: String,
}

impl Source<'_> {
    fn syntax(&self, e: &serde_json::Error, base: (usize, usize)) -> ConfigError {
        let (line, column) = if e.line() <= 1 {
            (base.0, base.1 + e.column().saturating_sub(1))
        } else {
            (base.0 + e.line() - 1, e.column())
        };
        let message = e.to_string();
        // serde_json appends " at line L column C" relative to the fragment.
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_owned(),
            None => message,
        };
        ConfigError::Syntax {
            path: self.path.clone(),
            line,
            column,
            message,
        }
    }

    fn position_of(&self, raw: &RawValue) -> (usize, usize) {
        let offset = raw.get().as_ptr() as usize - self.text.as_ptr() as usize;
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
        (line, column)
    }

    fn parse<T: DeserializeOwned>(&self, raw: &RawValue) -> Result<T, ConfigError> {
        serde_json::from_str(raw.get()).map_err(|e| self.syntax(&e, self.position_of(raw)))
    }

    fn semantic(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::Semantic {
            path: self.path.clone(),
            message: message.into(),
        }
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, path)
}

/// Parses a config; `origin` names the file in messages and anchors relative
/// series paths.
pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig, ConfigError> {
    let src = Source {
        text,
        path: origin.display().to_string(),
    };
    let raw_config: RawConfig<'_> = serde_json::from_str(text).map_err(|e| src.syntax(&e, (1, 1)))?;
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| src.syntax(&e, (1, 1)))?;

    let series = match raw_config.series {
        None => None,
        Some(r) => {
            let probe: serde_json::Value = src.parse(r)?;
            let obj = probe
                .as_object()
                .ok_or_else(|| src.semantic("`series` must be an object"))?;
            Some(if obj.contains_key("path") {
                let spec: PathSpec = src.parse(r)?;
                let base = origin.parent().unwrap_or(Path::new(""));
                SeriesSource::Path(base.join(spec.path))
            } else if obj.contains_key("generator") {
                SeriesSource::Generator(src.parse(r)?)
            } else {
                SeriesSource::Inline(src.parse(r)?)
            })
        }
    };

    let empty = RawValue::from_string("{}".to_owned()).expect("valid JSON");
    let praw: &RawValue = raw_config.parameters.unwrap_or(&empty);
    let parse_params = |raw: &RawValue| -> Result<Params, ConfigError> {
        if std::ptr::eq(raw, &*empty) {
            // No `parameters` key: report missing fields against line 1.
            let f = |e: serde_json::Error| src.syntax(&e, (1, 1));
            return Ok(match raw_config.command {
                Command::Eval => Params::Eval(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Scan => Params::Scan(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Theorem1 => Params::Theorem1(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Theorem2 => Params::Theorem2(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Theorem3 => Params::Theorem3(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Corollary6 => Params::Corollary6(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Counterexample => Params::Counterexample(serde_json::from_str(raw.get()).map_err(f)?),
                Command::Potential => Params::Potential(serde_json::from_str(raw.get()).map_err(f)?),
            });
        }
        Ok(match raw_config.command {
            Command::Eval => Params::Eval(src.parse(raw)?),
            Command::Scan => Params::Scan(src.parse(raw)?),
            Command::Theorem1 => Params::Theorem1(src.parse(raw)?),
            Command::Theorem2 => Params::Theorem2(src.parse(raw)?),
            Command::Theorem3 => Params::Theorem3(src.parse(raw)?),
            Command::Corollary6 => Params::Corollary6(src.parse(raw)?),
            Command::Counterexample => Params::Counterexample(src.parse(raw)?),
            Command::Potential => Params::Potential(src.parse(raw)?),
        })
    };
    let params = parse_params(praw)?;

    if params.needs_series() && series.is_none() {
        return Err(src.semantic(format!("command `{}` needs a `series`", raw_config.command)));
    }
    if let Params::Corollary6(c) = &params {
        if c.taylor.is_some() == c.taylor_sparse.is_some() {
            return Err(src.semantic("corollary6 needs exactly one of `taylor` and `taylor_sparse`"));
        }
    }
    Ok(ExperimentConfig {
        origin: origin.to_path_buf(),
        command: raw_config.command,
        series,
        params,
        output: raw_config.output,
        seed: raw_config.seed,
        raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        parse_config(text, Path::new("cfg.json"))
    }

    #[test]
    fn parses_generator_and_defaults() {
        let c = parse(
            r#"{"command": "scan",
                "series": {"generator": "geometric", "terms": 21},
                "parameters": {"grid": {"from": 1, "to": 2, "points": 3}, "tol": 1e-8}}"#,
        )
        .unwrap();
        assert_eq!(c.series, Some(SeriesSource::Generator(Generator::Geometric { terms: 21 })));
        match c.params {
            Params::Scan(p) => {
                assert_eq!(p.grid.points(), vec![1.0, 1.5, 2.0]);
                assert_eq!(p.selector, SelectorSpec::Full { count: None });
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nested_errors_report_absolute_lines() {
        let text = "{\n  \"command\": \"theorem3\",\n  \"series\": {\"generator\": \"geometric\", \"terms\": 5},\n  \"parameters\": {\n    \"t0\": 1.0,\n    \"bogus\": 3\n  }\n}";
        match parse(text).unwrap_err() {
            ConfigError::Syntax { line, message, .. } => {
                assert_eq!(line, 6, "{message}");
                assert!(message.contains("bogus"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn top_level_errors_have_lines() {
        match parse("{\n\"command\": \"frobnicate\"\n}").unwrap_err() {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 2),
            e => panic!("{e}"),
        }
        match parse("{\n\"command\": \"eval\",\n").unwrap_err() {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn missing_series_is_semantic() {
        assert!(matches!(
            parse(r#"{"command": "eval", "parameters": {"points": [[1, 0]]}}"#),
            Err(ConfigError::Semantic { .. })
        ));
        assert!(parse(r#"{"command": "counterexample"}"#).is_ok());
    }

    #[test]
    fn series_path_is_relative_to_config() {
        let c = parse_config(
            r#"{"command": "eval", "series": {"path": "s.json"}, "parameters": {"points": [[1, 0]]}}"#,
            Path::new("dir/cfg.json"),
        )
        .unwrap();
        assert_eq!(c.series, Some(SeriesSource::Path(PathBuf::from("dir/s.json"))));
    }
}
