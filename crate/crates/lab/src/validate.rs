//! Static config checks, run without evaluating anything expensive.

use std::fmt;
use std::path::Path;

use dirichlet_lab_core::geometry::is_fat;
use dirichlet_lab_core::potential::{check_inputs, WalkConfig};
use dirichlet_lab_core::ApproachRegion;
use serde::Serialize;

use crate::config::{load_config, ExperimentConfig, Params, PotentialConfig};
use crate::runner::{build_selector, load_series, point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

#[derive(Default)]
struct Sink(Vec<Diagnostic>);

impl Sink {
    fn error(&mut self, m: impl fmt::Display) {
        self.0.push(Diagnostic {
            severity: Severity::Error,
            message: m.to_string(),
        });
    }

    fn warn(&mut self, m: impl fmt::Display) {
        self.0.push(Diagnostic {
            severity: Severity::Warning,
            message: m.to_string(),
        });
    }

    fn region(&mut self, name: &str, r: &ApproachRegion, vertex: f64) {
        if let Err(e) = r.validate() {
            self.error(format!("{name}: {e}"));
            return;
        }
        if r.vertex() != vertex {
            self.error(format!("{name}: vertex {} should be {vertex}", r.vertex()));
        }
        match is_fat(r) {
            Ok(v) if !v.fat => self.warn(format!("{name}: fatness test failed: the integral of phi(y)/y^2 near the vertex diverges")),
            Ok(_) => {}
            Err(e) => self.error(format!("{name}: {e}")),
        }
    }

    fn positive(&mut self, name: &str, x: f64) {
        if !(x > 0.0 && x.is_finite()) {
            self.error(format!("{name} = {x} must be positive"));
        }
    }
}

pub fn validate_file(path: &Path) -> Vec<Diagnostic> {
    match load_config(path) {
        Ok(cfg) => validate(&cfg),
        Err(e) => vec![Diagnostic {
            severity: Severity::Error,
            message: e.to_string(),
        }],
    }
}

pub fn validate(cfg: &ExperimentConfig) -> Vec<Diagnostic> {
    let mut d = Sink::default();
    let series = match load_series(cfg) {
        Ok(s) => s,
        Err(e) => {
            d.error(format!("series: {e}"));
            None
        }
    };
    let selector = |d: &mut Sink, spec| {
        if let Some(s) = &series {
            if let Err(e) = build_selector(spec, s) {
                d.error(format!("selector: {e}"));
            }
        }
    };
    match &cfg.params {
        Params::Eval(p) => {
            d.positive("tol", p.tol);
            if p.points.is_empty() {
                d.warn("no evaluation points");
            }
        }
        Params::Scan(p) | Params::Theorem1(p) => {
            d.positive("tol", p.tol);
            selector(&mut d, &p.selector);
            if let Err(e) = dirichlet_lab_core::experiments::check_grid(&p.grid.points()) {
                d.error(format!("grid: {e}"));
            }
        }
        Params::Theorem2(p) => {
            selector(&mut d, &p.selector);
            if !(p.t1 < p.t2) {
                d.error(format!("need t1 < t2, got {}, {}", p.t1, p.t2));
            } else if !(p.rect_eps > 0.0 && p.rect_eps < 0.5 * (p.t2 - p.t1)) {
                d.error(format!("rect_eps = {} must lie in (0, {})", p.rect_eps, 0.5 * (p.t2 - p.t1)));
            }
            if !(p.mesh > 0.0 && p.mesh < 1.0) {
                d.error(format!("mesh {} must lie in (0, 1)", p.mesh));
            }
            d.region("regions[0]", &p.regions[0], p.t1);
            d.region("regions[1]", &p.regions[1], p.t2);
        }
        Params::Theorem3(p) => {
            selector(&mut d, &p.selector);
            d.positive("tol", p.tol);
            if !(p.interval.0 < p.t0 && p.t0 < p.interval.1) {
                d.error(format!(
                    "t0 = {} is not inside the open interval ({}, {})",
                    p.t0, p.interval.0, p.interval.1
                ));
            }
            d.region("region", &p.region, p.t0);
        }
        Params::Corollary6(p) => {
            d.positive("tol", p.tol);
            let r = (p.w[0] * p.w[0] + p.w[1] * p.w[1]).sqrt();
            if (r - 1.0).abs() > 1e-12 {
                d.error(format!("|w| = {r} must be 1"));
            }
            if !(p.arc.0 < 0.0 && 0.0 < p.arc.1) {
                d.error(format!("arc offsets ({}, {}) must contain 0", p.arc.0, p.arc.1));
            }
            if p.p.is_empty() {
                d.error("empty p sequence");
            } else if p.p.windows(2).any(|w| w[0] >= w[1]) {
                d.error("p must be strictly increasing");
            }
            d.region("region", &p.region, 0.0);
        }
        Params::Counterexample(_) => {}
        Params::Potential(p) => match p.as_ref() {
            PotentialConfig::Poisson { points, .. } | PotentialConfig::Green { points, .. } => {
                if points.is_empty() {
                    d.warn("no evaluation points");
                }
            }
            PotentialConfig::LemmaL { sigma0, m, samples, .. } => {
                d.positive("sigma0", *sigma0);
                if m.is_empty() || samples.is_empty() {
                    d.error("lemma_l needs at least one m and one sample");
                }
                if series.is_none() {
                    d.error("lemma_l needs a series");
                }
            }
            PotentialConfig::HarmonicMeasure {
                domain,
                z,
                parts,
                walks,
                eps_boundary,
                max_steps,
            } => {
                let mut wc = WalkConfig::for_domain(cfg.seed.unwrap_or(0), *walks, domain);
                if let Some(e) = eps_boundary {
                    wc.eps_boundary = *e;
                }
                if let Some(m) = max_steps {
                    wc.max_steps = *m;
                }
                if let Err(e) = check_inputs(domain, point(*z), parts, &wc) {
                    d.error(e);
                }
            }
        },
    }
    d.0
}
