//! Command dispatch, report assembly and artifact writing.
//!
//! Exit codes: 0 completed, 2 malformed config or failed precondition,
//! 3 undecided outcome under `--strict`, 4 I/O failure, 1 internal error.

use std::path::{Path, PathBuf};

use dirichlet_lab_core::experiments::{
    corollary6_run, counterexample_reproduce, sparse_taylor, theorem2_probe, theorem3_run, BoundaryScan, PointFlag,
};
use dirichlet_lab_core::potential::{
    green_segment, lemma_l_constant, poisson_integral, SegmentK, WalkConfig,
};
use dirichlet_lab_core::series::Route;
use dirichlet_lab_core::{
    Complex64, ComplexPoint, GeneralDirichletSeries, LabError, Status, SubsequenceSelector,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ConfigError, ExperimentConfig, Params, PotentialConfig, SelectorSpec, SeriesSource};
use crate::formats::SeriesFile;
use crate::par;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("precondition failed: {0}")]
    Precondition(LabError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(ConfigError::Io { .. }) | RunError::Io { .. } => EXIT_IO,
            RunError::Config(_) | RunError::Precondition(_) => EXIT_PRECONDITION,
            RunError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<LabError> for RunError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Internal(m) => RunError::Internal(m),
            e => RunError::Precondition(e),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub strict: bool,
    /// Overrides the config seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct Artifacts {
    pub report: Value,
    pub csv: String,
    /// Some decision the command exists to make came out undecided, or the run
    /// aborted because an input limit was undecided.
    pub critical_undecided: bool,
}

impl Artifacts {
    pub fn exit_code(&self, strict: bool) -> i32 {
        if strict && self.critical_undecided {
            EXIT_UNDECIDED
        } else {
            EXIT_OK
        }
    }
}

pub fn load_series(cfg: &ExperimentConfig) -> Result<Option<GeneralDirichletSeries>, RunError> {
    let Some(source) = &cfg.series else {
        return Ok(None);
    };
    let series = match source {
        SeriesSource::Inline(f) => f.to_series()?,
        SeriesSource::Generator(g) => g.build()?,
        SeriesSource::Path(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                path: p.display().to_string(),
                source,
            })?;
            let file: SeriesFile = serde_json::from_str(&text).map_err(|e| ConfigError::Syntax {
                path: p.display().to_string(),
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            file.to_series()?
        }
    };
    Ok(Some(series))
}

pub fn build_selector(spec: &SelectorSpec, series: &GeneralDirichletSeries) -> Result<SubsequenceSelector, LabError> {
    let sel = match spec {
        SelectorSpec::Full { count } => SubsequenceSelector::full(count.unwrap_or(series.len()))?,
        SelectorSpec::Arithmetic { start, step, count } => SubsequenceSelector::arithmetic(*start, *step, *count)?,
        SelectorSpec::Explicit { indices } => SubsequenceSelector::new(indices.clone())?,
    };
    sel.check_against(series)?;
    Ok(sel)
}

pub fn point(p: [f64; 2]) -> ComplexPoint {
    ComplexPoint::new(p[0], p[1])
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, RunError> {
    serde_json::to_value(v).map_err(|e| RunError::Internal(format!("serialization: {e}")))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, RunError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| RunError::Internal(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| RunError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| RunError::Internal(format!("csv: {e}")))
}

fn require(series: &Option<GeneralDirichletSeries>) -> Result<&GeneralDirichletSeries, RunError> {
    series
        .as_ref()
        .ok_or_else(|| RunError::Precondition(LabError::Domain("this command needs a series".into())))
}

struct Outcome {
    result: Value,
    csv: String,
    critical_undecided: bool,
}

#[derive(Serialize)]
struct EvalRow {
    sigma: f64,
    t: f64,
    re: f64,
    im: f64,
    abs: f64,
    method: &'static str,
    terms_used: Option<usize>,
    tail_bound: Option<f64>,
    tol_met: bool,
    heuristic: bool,
}

#[derive(Serialize)]
struct ScanRow {
    t: f64,
    s_status: Status,
    s_re: Option<f64>,
    s_im: Option<f64>,
    s_error: f64,
    f_status: Option<Status>,
    f_re: Option<f64>,
    f_im: Option<f64>,
    f_error: Option<f64>,
    mismatch: Option<f64>,
    flag: PointFlag,
}

fn scan_rows(scan: &BoundaryScan) -> Vec<ScanRow> {
    scan.points
        .iter()
        .map(|p| ScanRow {
            t: p.t,
            s_status: p.subsequence.status,
            s_re: p.subsequence.limit.map(|v| v.re),
            s_im: p.subsequence.limit.map(|v| v.im),
            s_error: p.subsequence.error_estimate,
            f_status: p.nt.as_ref().map(|r| r.status),
            f_re: p.nt.as_ref().and_then(|r| r.limit).map(|v| v.re),
            f_im: p.nt.as_ref().and_then(|r| r.limit).map(|v| v.im),
            f_error: p.nt.as_ref().map(|r| r.error_estimate),
            mismatch: p.mismatch,
            flag: p.flag,
        })
        .collect()
}

#[derive(Serialize)]
struct DistanceCsvRow {
    k: usize,
    p: Option<usize>,
    m: usize,
    re: f64,
    im: f64,
    distance: f64,
    gap_ratio: f64,
}

fn eval_point(
    series: &GeneralDirichletSeries,
    s: ComplexPoint,
    tol: f64,
    route: Route,
) -> Result<EvalRow, LabError> {
    let closed = match route {
        Route::ClosedForm => true,
        Route::Auto => series.closed_form().is_some(),
        Route::Series => false,
    };
    let row = |v: Complex64, method, terms_used, tail_bound, tol_met, heuristic| EvalRow {
        sigma: s.sigma,
        t: s.t,
        re: v.re,
        im: v.im,
        abs: v.norm(),
        method,
        terms_used,
        tail_bound,
        tol_met,
        heuristic,
    };
    if closed {
        let v = series.value(s, tol, Route::ClosedForm)?;
        return Ok(row(v, "closed_form", None, None, true, false));
    }
    if series.is_finite() {
        return Ok(row(series.full_sum(s), "exact", Some(series.len()), Some(0.0), true, false));
    }
    let r = series.evaluate(s, tol)?;
    Ok(row(r.value, "truncated", Some(r.terms_used), Some(r.tail_bound), r.tol_met, r.heuristic))
}

fn dispatch(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome, RunError> {
    let series = load_series(cfg)?;
    match &cfg.params {
        Params::Eval(p) => {
            let series = require(&series)?;
            let rows = p
                .points
                .iter()
                .map(|&q| eval_point(series, point(q), p.tol, p.route))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome {
                critical_undecided: rows.iter().any(|r| !r.tol_met),
                result: json!({ "tol": p.tol, "route": p.route, "points": to_value(&rows)? }),
                csv: to_csv(&rows)?,
            })
        }
        Params::Scan(p) | Params::Theorem1(p) => {
            let series = require(&series)?;
            let sel = build_selector(&p.selector, series)?;
            let nt = matches!(cfg.params, Params::Theorem1(_)).then_some(p.nt);
            let scan = par::scan(series, &sel, &p.grid.points(), p.tol, nt)?;
            let undecided = scan.points.iter().any(|q| {
                q.subsequence.status == Status::Undecided
                    || q.nt.as_ref().is_some_and(|r| r.status == Status::Undecided)
            });
            Ok(Outcome {
                critical_undecided: undecided,
                csv: to_csv(&scan_rows(&scan))?,
                result: to_value(&scan)?,
            })
        }
        Params::Theorem2(p) => {
            let series = require(&series)?;
            let sel = build_selector(&p.selector, series)?;
            for r in &p.regions {
                r.validate()?;
            }
            let rep = theorem2_probe(
                series,
                &sel,
                p.t1,
                p.t2,
                [&p.regions[0], &p.regions[1]],
                &p.measure,
                p.rect_eps,
                p.mesh,
                p.probe_params(),
            )?;
            #[derive(Serialize)]
            struct Row {
                sigma_min: f64,
                sup: f64,
                at_sigma: Option<f64>,
                at_t: Option<f64>,
                failures: usize,
                growth: Option<f64>,
            }
            let rows: Vec<Row> = rep
                .levels
                .iter()
                .map(|l| Row {
                    sigma_min: l.sigma_min,
                    sup: l.sup,
                    at_sigma: l.at.map(|a| a.sigma),
                    at_t: l.at.map(|a| a.t),
                    failures: l.failures,
                    growth: l.growth,
                })
                .collect();
            Ok(Outcome {
                critical_undecided: !rep.stabilized,
                csv: to_csv(&rows)?,
                result: to_value(&rep)?,
            })
        }
        Params::Theorem3(p) => {
            let series = require(&series)?;
            let sel = build_selector(&p.selector, series)?;
            p.region.validate()?;
            let rep = theorem3_run(
                series,
                &sel,
                p.t0,
                p.interval,
                &p.region,
                p.tol,
                p.audit().theorem3_params(),
            )?;
            let rows: Vec<DistanceCsvRow> = rep
                .distances
                .iter()
                .zip(&rep.gaps.ratios)
                .map(|(d, &g)| DistanceCsvRow {
                    k: d.k,
                    p: None,
                    m: d.m,
                    re: d.value.re,
                    im: d.value.im,
                    distance: d.distance,
                    gap_ratio: g,
                })
                .collect();
            Ok(Outcome {
                critical_undecided: rep.status == Status::Undecided,
                csv: to_csv(&rows)?,
                result: to_value(&rep)?,
            })
        }
        Params::Corollary6(p) => {
            p.region.validate()?;
            let terms: Vec<(usize, Complex64)> = match (&p.taylor, &p.taylor_sparse) {
                (Some(dense), _) => {
                    sparse_taylor(&dense.iter().map(|&[a, b]| Complex64::new(a, b)).collect::<Vec<_>>())
                }
                (None, Some(sparse)) => sparse.iter().map(|&(n, a, b)| (n, Complex64::new(a, b))).collect(),
                (None, None) => unreachable!("rejected by the config parser"),
            };
            let params = dirichlet_lab_core::experiments::Corollary6Params {
                ratio_min: p.ratio_min,
                polynomial: p.polynomial,
                theorem3: p.audit().theorem3_params(),
            };
            let rep = corollary6_run(
                &terms,
                Complex64::new(p.w[0], p.w[1]),
                &p.p,
                p.arc,
                &p.region,
                p.tol,
                params,
            )?;
            let rows: Vec<DistanceCsvRow> = rep
                .theorem3
                .distances
                .iter()
                .zip(&rep.theorem3.gaps.ratios)
                .zip(&rep.p)
                .map(|((d, &g), &pk)| DistanceCsvRow {
                    k: d.k,
                    p: Some(pk),
                    m: d.m,
                    re: d.value.re,
                    im: d.value.im,
                    distance: d.distance,
                    gap_ratio: g,
                })
                .collect();
            Ok(Outcome {
                critical_undecided: rep.status == Status::Undecided,
                csv: to_csv(&rows)?,
                result: to_value(&rep)?,
            })
        }
        Params::Counterexample(p) => {
            let rep = counterexample_reproduce(p.params())?;
            #[derive(Serialize)]
            struct Row {
                k: usize,
                m: usize,
                s_at_pi_re: f64,
                s_at_pi_im: f64,
                mesh_max: f64,
                mesh_argmax_t: f64,
                bound: f64,
                within_bound: bool,
                gap_ratio: f64,
                nt_limit_re: Option<f64>,
                nt_limit_im: Option<f64>,
            }
            let rows: Vec<Row> = rep
                .rows
                .iter()
                .map(|r| Row {
                    k: r.k,
                    m: r.m,
                    s_at_pi_re: r.s_at_pi.re,
                    s_at_pi_im: r.s_at_pi.im,
                    mesh_max: r.mesh_max,
                    mesh_argmax_t: r.mesh_argmax_t,
                    bound: r.bound,
                    within_bound: r.within_bound,
                    gap_ratio: r.gap_ratio,
                    nt_limit_re: rep.nt.limit.map(|v| v.re),
                    nt_limit_im: rep.nt.limit.map(|v| v.im),
                })
                .collect();
            Ok(Outcome {
                critical_undecided: !rep.nt.is_converged(),
                csv: to_csv(&rows)?,
                result: to_value(&rep)?,
            })
        }
        Params::Potential(p) => potential(p, series.as_ref(), seed),
    }
}

fn potential(p: &PotentialConfig, series: Option<&GeneralDirichletSeries>, seed: u64) -> Result<Outcome, RunError> {
    #[derive(Serialize)]
    struct FieldRow {
        sigma: f64,
        t: f64,
        value: f64,
    }
    match p {
        PotentialConfig::Poisson { measure, points } => {
            let rows = points
                .iter()
                .map(|&q| {
                    Ok(FieldRow {
                        sigma: q[0],
                        t: q[1],
                        value: poisson_integral(measure, point(q))?,
                    })
                })
                .collect::<Result<Vec<_>, LabError>>()?;
            Ok(Outcome {
                result: json!({ "task": "poisson", "values": to_value(&rows)? }),
                csv: to_csv(&rows)?,
                critical_undecided: false,
            })
        }
        PotentialConfig::Green { segment, pole, points } => {
            let k = SegmentK::new(segment[0], segment[1])?;
            let rows = points
                .iter()
                .map(|&q| {
                    Ok(FieldRow {
                        sigma: q[0],
                        t: q[1],
                        value: green_segment(&k, point(*pole), point(q))?,
                    })
                })
                .collect::<Result<Vec<_>, LabError>>()?;
            Ok(Outcome {
                result: json!({ "task": "green", "segment": k, "pole": point(*pole), "values": to_value(&rows)? }),
                csv: to_csv(&rows)?,
                critical_undecided: false,
            })
        }
        PotentialConfig::LemmaL {
            segment,
            sigma0,
            m,
            samples,
            k_mesh_points,
        } => {
            let series = series.ok_or_else(|| RunError::Precondition(LabError::Domain("lemma_l needs a series".into())))?;
            let k = SegmentK::new(segment[0], segment[1])?;
            let samples: Vec<ComplexPoint> = samples.iter().map(|&q| point(q)).collect();
            let rep = lemma_l_constant(series, &k, *sigma0, m, &samples, *k_mesh_points)?;
            #[derive(Serialize)]
            struct Row {
                m: usize,
                b_m: f64,
            }
            let rows: Vec<Row> = m.iter().zip(&rep.b).map(|(&m, &b_m)| Row { m, b_m }).collect();
            Ok(Outcome {
                result: json!({ "task": "lemma_l", "report": to_value(&rep)? }),
                csv: to_csv(&rows)?,
                critical_undecided: false,
            })
        }
        PotentialConfig::HarmonicMeasure {
            domain,
            z,
            parts,
            walks,
            eps_boundary,
            max_steps,
        } => {
            let mut cfg = WalkConfig::for_domain(seed, *walks, domain);
            if let Some(e) = eps_boundary {
                cfg.eps_boundary = *e;
            }
            if let Some(m) = max_steps {
                cfg.max_steps = *m;
            }
            let hm = par::harmonic_measure(domain, point(*z), parts, &cfg)?;
            #[derive(Serialize)]
            struct Row<'a> {
                label: &'a str,
                frequency: f64,
                std_error: f64,
                count: usize,
            }
            let rows: Vec<Row<'_>> = hm
                .labels
                .iter()
                .zip(&hm.frequencies)
                .zip(&hm.std_errors)
                .zip(&hm.counts)
                .map(|(((l, &f), &s), &c)| Row {
                    label: l,
                    frequency: f,
                    std_error: s,
                    count: c,
                })
                .collect();
            Ok(Outcome {
                result: json!({ "task": "harmonic_measure", "walk_config": cfg, "measure": to_value(&hm)? }),
                csv: to_csv(&rows)?,
                critical_undecided: false,
            })
        }
    }
}

/// Runs the experiment in memory. Undecided inputs and unreliable Monte Carlo
/// runs are recorded in the report rather than returned as errors.
pub fn execute(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Artifacts, RunError> {
    let seed = opts.seed.or(cfg.seed).unwrap_or(0);
    let (result, csv, critical, aborted) = match dispatch(cfg, seed) {
        Ok(o) => (o.result, o.csv, o.critical_undecided, None),
        Err(RunError::Precondition(e @ (LabError::Undecided(_) | LabError::Reliability(_)))) => {
            (Value::Null, String::new(), true, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let report = json!({
        "tool": "dirichlet-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cfg.command,
        "seed": seed,
        "config": cfg.raw,
        "critical_undecided": critical,
        "aborted": aborted,
        "result": result,
    });
    Ok(Artifacts {
        report,
        csv,
        critical_undecided: critical,
    })
}

pub fn artifact_paths(prefix: &Path) -> (PathBuf, PathBuf) {
    let base = prefix.as_os_str().to_string_lossy();
    (
        PathBuf::from(format!("{base}.report.json")),
        PathBuf::from(format!("{base}.csv")),
    )
}

pub fn write_artifacts(prefix: &Path, a: &Artifacts) -> Result<(PathBuf, PathBuf), RunError> {
    let (report_path, csv_path) = artifact_paths(prefix);
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| RunError::Io { path, source }
    };
    if let Some(dir) = report_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    let mut text = serde_json::to_string_pretty(&a.report).map_err(|e| RunError::Internal(e.to_string()))?;
    text.push('\n');
    std::fs::write(&report_path, text).map_err(io(&report_path))?;
    std::fs::write(&csv_path, &a.csv).map_err(io(&csv_path))?;
    Ok((report_path, csv_path))
}

/// Output prefix: explicit, else the config's `output`, else the config file
/// stem in the working directory.
pub fn output_prefix(cfg: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(o) = &cfg.output {
        return PathBuf::from(o);
    }
    PathBuf::from(cfg.origin.file_stem().unwrap_or_else(|| "experiment".as_ref()))
}
