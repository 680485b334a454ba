//! Windowed limit detectors.
//!
//! Both detectors look at a window of late samples and compare its diameter
//! with the tolerance: `≤ tol` is converged, `≥ 10·tol` is diverged, anything
//! in between is undecided.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::geometry::stolz_sample;
use crate::point::ComplexPoint;
use crate::series::{GeneralDirichletSeries, Route, SubsequenceSelector};

/// Number of radii in the nontangential window.
pub const NT_WINDOW_RADII: usize = 4;
/// Upper limit on the number of radius halvings in [`nt_limit`].
pub const NT_MAX_HALVINGS: usize = 60;
/// Minimum number of selector entries in the subsequence window.
pub const MIN_SUBSEQUENCE_WINDOW: usize = 4;
/// Divergence threshold in units of the tolerance.
pub const DIVERGENCE_FACTOR: f64 = 10.0;
/// Samples kept from the end of a subsequence for the audit trail.
pub const AUDIT_TAIL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Status {
    Converged,
    Diverged,
    Undecided,
}

/// One retained sample. `param` is the radius for nontangential ladders and
/// the partial-sum index `m_k` for subsequences; `angle` is the ray angle from
/// the inward normal (ladders only).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sample {
    pub param: f64,
    pub angle: Option<f64>,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceReport {
    pub status: Status,
    /// Meaningful only when `status` is converged.
    pub limit: Option<Complex64>,
    /// Diameter of the final window.
    pub error_estimate: f64,
    pub tol: f64,
    pub samples: Vec<Sample>,
    /// The two window samples realising the diameter.
    pub witness: Option<(Sample, Sample)>,
    pub diagnostic: Option<String>,
}

impl ConvergenceReport {
    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    fn exact(value: Complex64, tol: f64, samples: Vec<Sample>, note: &str) -> Self {
        Self {
            status: Status::Converged,
            limit: Some(value),
            error_estimate: 0.0,
            tol,
            samples,
            witness: None,
            diagnostic: Some(String::from(note)),
        }
    }
}

/// Classifies a window diameter against `tol`.
pub fn classify(diameter: f64, tol: f64) -> Status {
    if diameter <= tol {
        Status::Converged
    } else if !(diameter < DIVERGENCE_FACTOR * tol) {
        // Also catches NaN.
        Status::Diverged
    } else {
        Status::Undecided
    }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Exact diameter of a finite point set and the indices realising it.
///
/// Reduces to the convex hull (monotone chain) and scans hull vertex pairs.
/// Non-finite points make the diameter infinite.
pub fn diameter(points: &[Complex64]) -> (f64, usize, usize) {
    if points.len() < 2 {
        return (0.0, 0, 0);
    }
    if let Some(i) = points.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        let j = if i == 0 { 1 } else { 0 };
        return (f64::INFINITY, j, i);
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .re
            .total_cmp(&points[b].re)
            .then(points[a].im.total_cmp(&points[b].im))
    });
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &i in order.iter() {
        while hull.len() >= 2
            && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() < 2 {
        // All points coincide.
        return (0.0, 0, 1);
    }
    // Rotating calipers on the counterclockwise hull: the farthest pair is
    // antipodal, and the opposite pointer only moves forward.
    let h = hull.len();
    let p = |k: usize| points[hull[k % h]];
    let dist = |a: usize, b: usize| (p(a) - p(b)).norm();
    let mut best = (dist(0, 1), hull[0], hull[1]);
    let mut j = 1;
    for i in 0..h {
        let (a, b) = (p(i), p(i + 1));
        let mut steps = 0;
        while steps < h && cross(a, b, p(j + 1)) > cross(a, b, p(j)) {
            j += 1;
            steps += 1;
        }
        for (u, v) in [(i, j), (i + 1, j)] {
            let d = dist(u, v);
            if d > best.0 {
                best = (d, hull[u % h], hull[v % h]);
            }
        }
    }
    best
}

/// Parameters of the Stolz ladder used for nontangential limits.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NtParams {
    pub delta: f64,
    pub r0: f64,
}

impl Default for NtParams {
    fn default() -> Self {
        Self {
            delta: FRAC_PI_4,
            r0: 0.5,
        }
    }
}

/// Nontangential limit at `it₀` of an arbitrary evaluator.
///
/// Samples the three Stolz rays at radii `r0·2^(−j)` until the last
/// [`NT_WINDOW_RADII`] radii fit in a disc of diameter `tol`, or
/// [`NT_MAX_HALVINGS`] halvings have been spent. The limit is the value on the
/// normal ray at the smallest radius. A failed evaluation stops the ladder
/// with status undecided.
pub fn nt_limit_with<F>(f: F, t0: f64, params: NtParams, tol: f64) -> Result<ConvergenceReport>
where
    F: Fn(ComplexPoint) -> Result<Complex64>,
{
    let NtParams { delta, r0 } = params;
    if !(delta > 0.0 && delta < core::f64::consts::FRAC_PI_2) {
        return Err(LabError::domain(format!("delta {delta} outside (0, pi/2)")));
    }
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(LabError::domain("r0 must be positive"));
    }
    if !(tol > 0.0) {
        return Err(LabError::domain("tolerance must be positive"));
    }
    if !t0.is_finite() {
        return Err(LabError::domain("t0 must be finite"));
    }
    let half_aperture = core::f64::consts::FRAC_PI_2 - delta;
    let angles = [-half_aperture, 0.0, half_aperture];

    let mut samples: Vec<Sample> = Vec::with_capacity(3 * (NT_MAX_HALVINGS + 1));
    let mut last_diam = f64::NAN;
    let mut last_witness = None;
    for j in 0..=NT_MAX_HALVINGS {
        let r = r0 * libm::ldexp(1.0, -(j as i32));
        let pts = stolz_sample(t0, delta, &[r])?;
        for (p, &angle) in pts.iter().zip(&angles) {
            match f(*p) {
                Ok(v) => samples.push(Sample {
                    param: r,
                    angle: Some(angle),
                    value: v,
                }),
                Err(e) => {
                    return Ok(ConvergenceReport {
                        status: Status::Undecided,
                        limit: None,
                        error_estimate: last_diam,
                        tol,
                        samples,
                        witness: last_witness,
                        diagnostic: Some(format!(
                            "evaluation failed at s = {} + {}i: {e}",
                            p.sigma, p.t
                        )),
                    });
                }
            }
        }
        if j + 1 < NT_WINDOW_RADII {
            continue;
        }
        let window = &samples[samples.len() - 3 * NT_WINDOW_RADII..];
        let values: Vec<Complex64> = window.iter().map(|s| s.value).collect();
        let (d, a, b) = diameter(&values);
        last_diam = d;
        last_witness = Some((window[a], window[b]));
        if d <= tol {
            let normal = samples[samples.len() - 2].value;
            return Ok(ConvergenceReport {
                status: Status::Converged,
                limit: Some(normal),
                error_estimate: d,
                tol,
                samples,
                witness: last_witness,
                diagnostic: None,
            });
        }
        if !d.is_finite() {
            break;
        }
    }
    let status = classify(last_diam, tol);
    let diagnostic = match status {
        Status::Diverged => format!("final window diameter {last_diam:e} >= {DIVERGENCE_FACTOR} * tol"),
        _ => format!("final window diameter {last_diam:e} between tol and {DIVERGENCE_FACTOR} * tol"),
    };
    Ok(ConvergenceReport {
        status,
        limit: None,
        error_estimate: last_diam,
        tol,
        samples,
        witness: last_witness,
        diagnostic: Some(diagnostic),
    })
}

/// Nontangential limit of `f` at `it₀`.
///
/// Points are evaluated with tolerance `tol/10` through the registered
/// closed form when there is one, else by certified truncation. A finite
/// series is entire, so its limit is the exact value `S_N(it₀)`.
pub fn nt_limit(
    series: &GeneralDirichletSeries,
    t0: f64,
    params: NtParams,
    tol: f64,
) -> Result<ConvergenceReport> {
    if series.is_finite() && series.closed_form().is_none() {
        if !(tol > 0.0) {
            return Err(LabError::domain("tolerance must be positive"));
        }
        let v = series.full_sum(ComplexPoint::on_axis(t0));
        let sample = Sample {
            param: 0.0,
            angle: Some(0.0),
            value: v,
        };
        return Ok(ConvergenceReport::exact(
            v,
            tol,
            alloc::vec![sample],
            "finite series: exact value at the vertex",
        ));
    }
    let point_tol = tol / 10.0;
    nt_limit_with(|s| series.value(s, point_tol, Route::Auto), t0, params, tol)
}

/// Classifies the boundary sequence `S_{m_k}(it)`.
///
/// The window is the tail half of the selector (`k ≥ ⌈K/2⌉`), and at least the
/// last [`MIN_SUBSEQUENCE_WINDOW`] entries. A selector ending at `N` on a finite
/// series is converged to `S_N(it)` exactly.
pub fn subsequence_limit(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    t: f64,
    tol: f64,
) -> Result<ConvergenceReport> {
    if !(tol > 0.0) {
        return Err(LabError::domain("tolerance must be positive"));
    }
    let sums = series.partial_sums_along(sel, ComplexPoint::on_axis(t))?;
    Ok(classify_sequence(sel.indices(), &sums, tol, series.is_finite() && sel.last() == series.len()))
}

/// The windowed test on a precomputed sequence `values[k] = S_{indices[k]}`.
pub fn classify_sequence(indices: &[usize], values: &[Complex64], tol: f64, reaches_end: bool) -> ConvergenceReport {
    let k = values.len();
    let tail_start = k.saturating_sub(AUDIT_TAIL);
    let samples: Vec<Sample> = indices[tail_start..]
        .iter()
        .zip(&values[tail_start..])
        .map(|(&m, &v)| Sample {
            param: m as f64,
            angle: None,
            value: v,
        })
        .collect();
    if reaches_end {
        return ConvergenceReport::exact(
            values[k - 1],
            tol,
            samples,
            "finite series: selector reaches the last term",
        );
    }
    if k < MIN_SUBSEQUENCE_WINDOW {
        return ConvergenceReport {
            status: Status::Undecided,
            limit: None,
            error_estimate: f64::NAN,
            tol,
            samples,
            witness: None,
            diagnostic: Some(format!(
                "selector has {k} entries, the window needs {MIN_SUBSEQUENCE_WINDOW}"
            )),
        };
    }
    let start = (k / 2).min(k - MIN_SUBSEQUENCE_WINDOW);
    let (d, a, b) = diameter(&values[start..]);
    let at = |i: usize| Sample {
        param: indices[start + i] as f64,
        angle: None,
        value: values[start + i],
    };
    let status = classify(d, tol);
    ConvergenceReport {
        status,
        limit: (status == Status::Converged).then_some(values[k - 1]),
        error_estimate: d,
        tol,
        samples,
        witness: Some((at(a), at(b))),
        diagnostic: match status {
            Status::Converged => None,
            Status::Diverged => Some(format!(
                "window k >= {} has diameter {d:e} >= {DIVERGENCE_FACTOR} * tol",
                start + 1
            )),
            Status::Undecided => Some(format!(
                "window k >= {} has diameter {d:e} between tol and {DIVERGENCE_FACTOR} * tol",
                start + 1
            )),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::ClosedForm;
    use crate::series::TailKind;
    use alloc::vec;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diameter_matches_brute_force() {
        let mut pts = Vec::new();
        let mut x = 0.3f64;
        for _ in 0..200 {
            x = libm::fmod(x * 7.919 + 0.137, 1.0);
            let y = libm::fmod(x * 13.7 + 0.71, 1.0);
            pts.push(c(x * 3.0 - 1.0, y - 0.5));
        }
        let (d, i, j) = diameter(&pts);
        let mut brute = 0.0f64;
        for a in &pts {
            for b in &pts {
                brute = brute.max((a - b).norm());
            }
        }
        assert_eq!(d, brute);
        assert_eq!((pts[i] - pts[j]).norm(), d);
    }

    #[test]
    fn diameter_matches_brute_force_on_hull_heavy_sets() {
        let mut x = 0.123f64;
        let mut next = || {
            x = libm::fmod(x * 9.871 + 0.3137, 1.0);
            x
        };
        for trial in 0..60 {
            let n = 3 + trial * 5;
            let pts: Vec<Complex64> = (0..n)
                .map(|k| {
                    let th = core::f64::consts::TAU * next();
                    let r = if trial % 2 == 0 { 1.0 } else { 1.0 + 0.01 * k as f64 };
                    c(r * libm::cos(th) + 0.2 * next() * (trial % 3) as f64, r * libm::sin(th))
                })
                .collect();
            let (d, i, j) = diameter(&pts);
            let mut brute = 0.0f64;
            for a in &pts {
                for b in &pts {
                    brute = brute.max((a - b).norm());
                }
            }
            assert_eq!(d, brute, "trial {trial}");
            assert_eq!((pts[i] - pts[j]).norm(), d);
        }
    }

    #[test]
    fn diameter_degenerate_sets() {
        assert_eq!(diameter(&[c(1.0, 1.0)]).0, 0.0);
        assert_eq!(diameter(&[c(1.0, 1.0); 5]).0, 0.0);
        let collinear = [c(0.0, 0.0), c(1.0, 1.0), c(2.0, 2.0), c(0.5, 0.5)];
        assert!((diameter(&collinear).0 - 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(diameter(&[c(0.0, 0.0), c(f64::NAN, 0.0)]).0, f64::INFINITY);
    }

    #[test]
    fn classify_thresholds() {
        assert_eq!(classify(0.5, 1.0), Status::Converged);
        assert_eq!(classify(1.0, 1.0), Status::Converged);
        assert_eq!(classify(5.0, 1.0), Status::Undecided);
        assert_eq!(classify(10.0, 1.0), Status::Diverged);
        assert_eq!(classify(f64::NAN, 1.0), Status::Diverged);
    }

    #[test]
    fn geometric_nt_limit_at_pi() {
        let g = GeneralDirichletSeries::geometric(8).unwrap();
        let r = nt_limit(&g, PI, NtParams::default(), 1e-8).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.limit.unwrap() - c(-0.5, 0.0)).norm() < 1e-8);
        assert!(r.error_estimate <= 1e-8);
    }

    #[test]
    fn geometric_nt_limit_at_pole_diverges() {
        let g = GeneralDirichletSeries::geometric(8).unwrap();
        let r = nt_limit(&g, 0.0, NtParams::default(), 1e-8).unwrap();
        assert_eq!(r.status, Status::Diverged);
        let (a, b) = r.witness.unwrap();
        assert!((a.value - b.value).norm() >= 1e-7);
    }

    #[test]
    fn identity_closed_form_limit() {
        let s = GeneralDirichletSeries::new(vec![0.0], vec![c(0.0, 0.0)], TailKind::Truncated)
            .unwrap()
            .with_closed_form(Some(ClosedForm::Identity));
        let r = nt_limit(&s, 1.0, NtParams::default(), 1e-9).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!((r.limit.unwrap() - c(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn finite_series_limit_is_exact() {
        let s = GeneralDirichletSeries::new(vec![0.0, 1.0, 2.5], vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)], TailKind::Finite)
            .unwrap();
        let r = nt_limit(&s, 0.7, NtParams::default(), 1e-10).unwrap();
        assert_eq!(r.limit.unwrap(), s.full_sum(ComplexPoint::on_axis(0.7)));
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn exhausted_prefix_is_undecided() {
        // Σ n^(−1/2) e^(−n s) has no closed form registered and a slowly
        // decaying prefix bound near the axis.
        let n = 40;
        let s = GeneralDirichletSeries::new(
            (1..=n).map(|k| k as f64).collect(),
            (1..=n).map(|k| c(1.0 / libm::sqrt(k as f64), 0.0)).collect(),
            TailKind::Truncated,
        )
        .unwrap();
        let r = nt_limit(&s, 1.0, NtParams::default(), 1e-10).unwrap();
        assert_eq!(r.status, Status::Undecided);
        assert!(r.diagnostic.unwrap().contains("evaluation failed"));
    }

    #[test]
    fn counterexample_subsequence_at_pi_and_half_pi() {
        let g = GeneralDirichletSeries::geometric(41).unwrap();
        let sel = SubsequenceSelector::arithmetic(2, 2, 20).unwrap();
        let at_pi = subsequence_limit(&g, &sel, PI, 1e-10).unwrap();
        assert_eq!(at_pi.status, Status::Converged);
        assert!(at_pi.limit.unwrap().norm() < 1e-12);
        let at_half = subsequence_limit(&g, &sel, PI / 2.0, 1e-10).unwrap();
        assert_eq!(at_half.status, Status::Diverged);
        let (a, b) = at_half.witness.unwrap();
        assert!(((a.value - b.value).norm() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn finite_selector_reaching_end_converges() {
        let s = GeneralDirichletSeries::new(vec![1.0, 2.0], vec![c(1.0, 0.0), c(1.0, 0.0)], TailKind::Finite).unwrap();
        let sel = SubsequenceSelector::full(2).unwrap();
        let r = subsequence_limit(&s, &sel, 0.3, 1e-12).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert_eq!(r.limit.unwrap(), s.full_sum(ComplexPoint::on_axis(0.3)));
    }

    #[test]
    fn short_selector_is_undecided() {
        let g = GeneralDirichletSeries::geometric(10).unwrap();
        let sel = SubsequenceSelector::new(vec![1, 2, 3]).unwrap();
        assert_eq!(subsequence_limit(&g, &sel, 1.0, 1e-3).unwrap().status, Status::Undecided);
    }
}
