//! Boundary scans and theorem-level probes.
//!
//! Per-point work is exposed separately ([`scan_point`], [`compare_point`])
//! and folded by [`assemble_scan`], so a parallel driver produces exactly the
//! serial result.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::gaps::{detect_pure_ostrowski_sparse, OstrowskiGapReport};
use crate::geometry::{is_fat, region_sup, ApproachRegion, FatnessVerdict, RegionSup};
use crate::limits::{nt_limit, subsequence_limit, ConvergenceReport, NtParams, Status, DIVERGENCE_FACTOR};
use crate::point::ComplexPoint;
use crate::potential::{poisson_integral, BoundaryMeasure};
use crate::series::{GeneralDirichletSeries, Route, SubsequenceSelector, TailKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PointFlag {
    None,
    /// Mismatch above `10·tol` not reproduced by either grid neighbour.
    Isolated,
    /// Mismatch above `10·tol` shared with a neighbour.
    Anomaly,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointReport {
    pub t: f64,
    pub subsequence: ConvergenceReport,
    pub nt: Option<ConvergenceReport>,
    /// `|S(it) − f(it)|` when both limits converged.
    pub mismatch: Option<f64>,
    pub flag: PointFlag,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparison {
    /// Points where the subsequence converged (the empirical `E`).
    pub in_e: usize,
    /// Points where the nontangential limit converged (the empirical `F`).
    pub in_f: usize,
    pub in_both: usize,
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub max_excluding_isolated: Option<f64>,
    pub isolated: Vec<f64>,
    pub anomalies: Vec<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryScan {
    pub grid: Vec<f64>,
    pub tol: f64,
    pub points: Vec<PointReport>,
    pub comparison: Option<Comparison>,
}

/// Nonempty, finite and strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(LabError::domain("empty boundary grid"));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(LabError::domain("grid ordinates must be finite"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LabError::domain("grid must be strictly increasing"));
    }
    Ok(())
}

/// Subsequence side only.
pub fn scan_point(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    t: f64,
    tol: f64,
) -> Result<PointReport> {
    Ok(PointReport {
        t,
        subsequence: subsequence_limit(series, sel, t, tol)?,
        nt: None,
        mismatch: None,
        flag: PointFlag::None,
    })
}

/// Subsequence limit and nontangential limit at `it`.
pub fn compare_point(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    t: f64,
    nt: NtParams,
    tol: f64,
) -> Result<PointReport> {
    let subsequence = subsequence_limit(series, sel, t, tol)?;
    let nt = nt_limit(series, t, nt, tol)?;
    let mismatch = match (subsequence.limit, nt.limit) {
        (Some(a), Some(b)) if subsequence.is_converged() && nt.is_converged() => Some((a - b).norm()),
        _ => None,
    };
    Ok(PointReport {
        t,
        subsequence,
        nt: Some(nt),
        mismatch,
        flag: PointFlag::None,
    })
}

/// Orders per-point reports by grid position, sets isolation flags and
/// computes the comparison over the points where both limits converged.
pub fn assemble_scan(grid: Vec<f64>, tol: f64, points: Vec<PointReport>) -> BoundaryScan {
    let compare = points.iter().any(|p| p.nt.is_some());
    if !compare {
        return BoundaryScan {
            grid,
            tol,
            points,
            comparison: None,
        };
    }
    let mut points = points;
    let threshold = DIVERGENCE_FACTOR * tol;
    let large: Vec<bool> = points
        .iter()
        .map(|p| p.mismatch.is_some_and(|m| m > threshold))
        .collect();
    for i in 0..points.len() {
        if !large[i] {
            continue;
        }
        let left = i > 0 && large[i - 1];
        let right = i + 1 < points.len() && large[i + 1];
        points[i].flag = if left || right {
            PointFlag::Anomaly
        } else {
            PointFlag::Isolated
        };
    }

    let in_e = points.iter().filter(|p| p.subsequence.is_converged()).count();
    let in_f = points
        .iter()
        .filter(|p| p.nt.as_ref().is_some_and(|r| r.is_converged()))
        .count();
    let mismatches: Vec<f64> = points.iter().filter_map(|p| p.mismatch).collect();
    let max = mismatches.iter().copied().reduce(f64::max);
    let mean = (!mismatches.is_empty()).then(|| mismatches.iter().sum::<f64>() / mismatches.len() as f64);
    let max_excluding_isolated = points
        .iter()
        .filter(|p| p.flag != PointFlag::Isolated)
        .filter_map(|p| p.mismatch)
        .reduce(f64::max);
    let pick = |flag| points.iter().filter(|p| p.flag == flag).map(|p| p.t).collect();
    let comparison = Comparison {
        in_e,
        in_f,
        in_both: mismatches.len(),
        max,
        mean,
        max_excluding_isolated,
        isolated: pick(PointFlag::Isolated),
        anomalies: pick(PointFlag::Anomaly),
        note: String::from(
            "max and mean of |S - f| over grid points where both limits converged; \
             a finite grid cannot resolve null sets, so isolated points are listed, not averaged away",
        ),
    };
    BoundaryScan {
        grid,
        tol,
        points,
        comparison: Some(comparison),
    }
}

/// Classifies `S_{m_k}(it)` at every grid point.
pub fn subsequence_limits(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    grid: &[f64],
    tol: f64,
) -> Result<BoundaryScan> {
    check_grid(grid)?;
    sel.check_against(series)?;
    let points = grid
        .iter()
        .map(|&t| scan_point(series, sel, t, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_scan(grid.to_vec(), tol, points))
}

/// Joins the subsequence limit `S(it)` with the nontangential limit `f(it)` at
/// every grid point.
pub fn theorem1_compare(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    grid: &[f64],
    nt: NtParams,
    tol: f64,
) -> Result<BoundaryScan> {
    check_grid(grid)?;
    sel.check_against(series)?;
    let points = grid
        .iter()
        .map(|&t| compare_point(series, sel, t, nt, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_scan(grid.to_vec(), tol, points))
}

/// `u_m(s) = log|S_m(s) − f(s)| / λ_{m+1}` for a finite series.
pub fn lemma_l0_exponent(series: &GeneralDirichletSeries, m: usize, s: ComplexPoint) -> Result<f64> {
    if series.tail() != TailKind::Finite {
        return Err(LabError::domain("u_m needs the exact remainder of a finite series"));
    }
    if m == 0 || m >= series.len() {
        return Err(LabError::IndexOutOfRange {
            index: m,
            len: series.len() - 1,
        });
    }
    let r = series.remainder(m, s)?;
    Ok(libm::log(r.norm()) / series.exponent(m + 1))
}

/// Ratios `λ_{m_k+1}/λ_{m_k}`, with `+∞` for a finite series whose selector
/// reaches the last term.
pub fn selector_gap_ratios(series: &GeneralDirichletSeries, sel: &SubsequenceSelector) -> Result<Vec<f64>> {
    sel.check_against(series)?;
    let n = series.len();
    let mut out = Vec::with_capacity(sel.len());
    for (k, &m) in sel.indices().iter().enumerate() {
        if m == n {
            if series.is_finite() {
                out.push(f64::INFINITY);
                continue;
            }
            return Err(LabError::domain(format!(
                "m_{} = {m} is the last stored term of a truncated series; its gap ratio is unknown",
                k + 1
            )));
        }
        let lo = series.exponent(m);
        if lo == 0.0 {
            return Err(LabError::domain(format!("lambda_(m_k) = 0 at k = {}", k + 1)));
        }
        out.push(series.exponent(m + 1) / lo);
    }
    Ok(out)
}

/// Gap ratios reaching this value with a nondecreasing trend count as growing.
pub const GAP_GROWTH_SIGNAL: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapTrend {
    pub ratios: Vec<f64>,
    pub strictly_increasing: bool,
    pub nondecreasing: bool,
    pub last: f64,
    pub growing: bool,
}

impl GapTrend {
    pub fn new(ratios: Vec<f64>) -> Self {
        let strictly_increasing = ratios.windows(2).all(|w| w[1] > w[0]);
        let nondecreasing = ratios.windows(2).all(|w| w[1] >= w[0]);
        let last = ratios.last().copied().unwrap_or(f64::NAN);
        Self {
            growing: nondecreasing && last >= GAP_GROWTH_SIGNAL,
            strictly_increasing,
            nondecreasing,
            last,
            ratios,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theorem3Params {
    /// Interior points of the interval on which `|S_{m_k}|` is sampled.
    pub interval_points: usize,
    /// Lattice spacing for the sup of `|f′|` on the region.
    pub region_mesh: f64,
    pub nt: NtParams,
}

impl Default for Theorem3Params {
    fn default() -> Self {
        Self {
            interval_points: 201,
            region_mesh: 0.02,
            nt: NtParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalSup {
    pub sup: f64,
    pub k: usize,
    pub t: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theorem3Hypotheses {
    pub bounded_on_interval: bool,
    pub derivative_bounded_on_region: bool,
    pub region_fat: bool,
    pub gap_ratios_growing: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceRow {
    pub k: usize,
    pub m: usize,
    pub value: Complex64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theorem3Report {
    pub t0: f64,
    pub interval: (f64, f64),
    pub tol: f64,
    pub interval_sup: IntervalSup,
    pub derivative_sup: Option<RegionSup>,
    pub derivative_error: Option<String>,
    pub fatness: FatnessVerdict,
    pub gaps: GapTrend,
    pub hypotheses: Theorem3Hypotheses,
    /// `f(it₀)` from the nontangential detector at tolerance `tol/10`.
    pub f_value: ConvergenceReport,
    pub distances: Vec<DistanceRow>,
    /// First `k` from which every `d_k` stays below `tol`.
    pub entered_at: Option<usize>,
    pub status: Status,
}

/// `sup |S_{m_k}(it)|` over all `k` and `n` interior points of `[a, b]`.
pub fn interval_sup(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    (a, b): (f64, f64),
    n: usize,
) -> Result<IntervalSup> {
    if !(a < b) || n == 0 {
        return Err(LabError::domain(format!("degenerate interval ({a}, {b})")));
    }
    let mut best = IntervalSup {
        sup: 0.0,
        k: 1,
        t: a,
        points: n,
    };
    for j in 0..n {
        let t = a + (j as f64 + 0.5) * (b - a) / n as f64;
        let sums = series.partial_sums_along(sel, ComplexPoint::on_axis(t))?;
        for (k, v) in sums.iter().enumerate() {
            let r = v.norm();
            if r > best.sup || !r.is_finite() {
                best.sup = r;
                best.k = k + 1;
                best.t = t;
            }
        }
    }
    Ok(best)
}

/// Gap-condition check at `it₀`: hypothesis audit, then `|S_{m_k}(it₀) − f(it₀)|`.
///
/// Fails if `f(it₀)` cannot be determined (the detector does not converge).
pub fn theorem3_run(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    t0: f64,
    interval: (f64, f64),
    region: &ApproachRegion,
    tol: f64,
    params: Theorem3Params,
) -> Result<Theorem3Report> {
    if !(tol > 0.0) {
        return Err(LabError::domain("tolerance must be positive"));
    }
    if !(interval.0 < t0 && t0 < interval.1) {
        return Err(LabError::domain(format!(
            "t0 = {t0} is not inside the open interval ({}, {})",
            interval.0, interval.1
        )));
    }
    if region.vertex() != t0 {
        return Err(LabError::domain(format!(
            "region vertex {} differs from t0 = {t0}",
            region.vertex()
        )));
    }
    sel.check_against(series)?;

    let isup = interval_sup(series, sel, interval, params.interval_points)?;
    let derivative = series.derivative();
    let (derivative_sup, derivative_error) = match region_sup(
        |s| Ok(derivative.value(s, tol, Route::Auto)?.norm()),
        region,
        params.region_mesh,
    ) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(format!("{e}"))),
    };
    let fatness = is_fat(region)?;
    let gaps = GapTrend::new(selector_gap_ratios(series, sel)?);
    let hypotheses = Theorem3Hypotheses {
        bounded_on_interval: isup.sup.is_finite(),
        derivative_bounded_on_region: derivative_sup
            .as_ref()
            .is_some_and(|r| r.failures == 0 && r.sup.is_finite()),
        region_fat: fatness.fat,
        gap_ratios_growing: gaps.growing,
    };

    let f_value = nt_limit(series, t0, params.nt, tol / 10.0)?;
    let f = match (f_value.status, f_value.limit) {
        (Status::Converged, Some(v)) => v,
        _ => {
            return Err(LabError::Undecided(format!(
                "f(i·{t0}) could not be determined: nontangential detector {:?}{}",
                f_value.status,
                f_value
                    .diagnostic
                    .as_deref()
                    .map(|d| format!(" ({d})"))
                    .unwrap_or_default()
            )))
        }
    };

    let sums = series.partial_sums_along(sel, ComplexPoint::on_axis(t0))?;
    let distances: Vec<DistanceRow> = sel
        .indices()
        .iter()
        .zip(&sums)
        .enumerate()
        .map(|(k, (&m, &v))| DistanceRow {
            k: k + 1,
            m,
            value: v,
            distance: (v - f).norm(),
        })
        .collect();
    let entered_at = distances
        .iter()
        .rposition(|d| !(d.distance < tol))
        .map_or(Some(1), |i| (i + 1 < distances.len()).then_some(i + 2));
    let last = distances[distances.len() - 1].distance;
    let status = if last < tol {
        Status::Converged
    } else if last >= DIVERGENCE_FACTOR * tol {
        Status::Diverged
    } else {
        Status::Undecided
    };
    Ok(Theorem3Report {
        t0,
        interval,
        tol,
        interval_sup: isup,
        derivative_sup,
        derivative_error,
        fatness,
        gaps,
        hypotheses,
        f_value,
        distances,
        entered_at,
        status,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theorem2Params {
    /// Number of dyadic halvings of `σ_min` below `mesh`.
    pub levels: usize,
    /// Per-point evaluation tolerance for `f`.
    pub eval_tol: f64,
    /// Growth ratio at or below which the rectangle sup counts as stable.
    pub stabilization_ratio: f64,
    pub interval_points: usize,
}

impl Default for Theorem2Params {
    fn default() -> Self {
        Self {
            levels: 10,
            eval_tol: 1e-10,
            stabilization_ratio: 1.01,
            interval_points: 201,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RectangleLevel {
    pub sigma_min: f64,
    /// Sup of `|f|` over all rows with `σ ≥ sigma_min`.
    pub sup: f64,
    pub at: Option<ComplexPoint>,
    pub failures: usize,
    /// `sup / previous sup`.
    pub growth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theorem2Report {
    pub t1: f64,
    pub t2: f64,
    pub rect_eps: f64,
    pub mesh: f64,
    /// Sup of `e^(−h)|f|` on each region lattice.
    pub region_sups: Vec<RegionSup>,
    pub regions_fat: Vec<bool>,
    /// The interval `[t1 − ε, t2 + ε]` carrying the boundedness hypothesis.
    pub interval: (f64, f64),
    pub interval_sup: IntervalSup,
    pub levels: Vec<RectangleLevel>,
    pub stabilized: bool,
}

/// Rectangle-growth probe: audits the hypotheses and reports the trend of the
/// rectangle sup of `|f|` as `σ_min` halves.
#[allow(clippy::too_many_arguments)]
pub fn theorem2_probe(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    t1: f64,
    t2: f64,
    regions: [&ApproachRegion; 2],
    h: &BoundaryMeasure,
    rect_eps: f64,
    mesh: f64,
    params: Theorem2Params,
) -> Result<Theorem2Report> {
    if !(t1 < t2) {
        return Err(LabError::domain(format!("need t1 < t2, got {t1}, {t2}")));
    }
    if !(rect_eps > 0.0 && rect_eps < 0.5 * (t2 - t1)) {
        return Err(LabError::domain(format!(
            "degenerate rectangle: rect_eps = {rect_eps} must lie in (0, {})",
            0.5 * (t2 - t1)
        )));
    }
    if !(mesh > 0.0 && mesh < 1.0) {
        return Err(LabError::domain(format!("mesh {mesh} must lie in (0, 1)")));
    }
    for (r, t) in regions.iter().zip([t1, t2]) {
        if r.vertex() != t {
            return Err(LabError::domain(format!(
                "region vertex {} should be {t}",
                r.vertex()
            )));
        }
    }
    sel.check_against(series)?;

    let f_abs = |s: ComplexPoint| -> Result<f64> { Ok(series.value(s, params.eval_tol, Route::Auto)?.norm()) };
    let mut region_sups = Vec::with_capacity(2);
    let mut regions_fat = Vec::with_capacity(2);
    for r in regions {
        region_sups.push(region_sup(
            |s| Ok(libm::exp(-poisson_integral(h, s)?) * f_abs(s)?),
            r,
            mesh,
        )?);
        regions_fat.push(is_fat(r)?.fat);
    }
    let interval = (t1 - rect_eps, t2 + rect_eps);
    let isup = interval_sup(series, sel, interval, params.interval_points)?;

    let (lo, hi) = (t1 + rect_eps, t2 - rect_eps);
    // Rows at height σ are sampled with t-spacing min(mesh, σ), so features of
    // width comparable to σ stay resolved as the floor drops.
    let row = |sigma: f64| {
        let n_t = libm::ceil((hi - lo) / mesh.min(sigma)).max(1.0) as usize;
        let mut sup = 0.0f64;
        let mut at = None;
        let mut failures = 0;
        for j in 0..n_t {
            let t = lo + (j as f64 + 0.5) * (hi - lo) / n_t as f64;
            let p = ComplexPoint::new(sigma, t);
            match f_abs(p) {
                Ok(v) if at.is_none() || v > sup || !v.is_finite() => {
                    sup = v;
                    at = Some(p);
                }
                Ok(_) => {}
                Err(_) => failures += 1,
            }
        }
        (sup, at, failures)
    };

    // Base level: rows σ = mesh, 2·mesh, … below 1.
    let mut sup = 0.0f64;
    let mut at = None;
    let mut failures = 0;
    let mut i = 1;
    while (i as f64) * mesh < 1.0 {
        let (s, a, f) = row(i as f64 * mesh);
        if a.is_some() && (at.is_none() || s > sup) {
            sup = s;
            at = a;
        }
        failures += f;
        i += 1;
    }
    if at.is_none() {
        return Err(LabError::domain("f could not be evaluated anywhere on the rectangle"));
    }
    let mut levels = alloc::vec![RectangleLevel {
        sigma_min: mesh,
        sup,
        at,
        failures,
        growth: None,
    }];
    for j in 1..=params.levels {
        let sigma_min = mesh * libm::ldexp(1.0, -(j as i32));
        let (s, a, f) = row(sigma_min);
        let prev = sup;
        if a.is_some() && s > sup {
            sup = s;
            at = a;
        }
        failures += f;
        levels.push(RectangleLevel {
            sigma_min,
            sup,
            at,
            failures,
            growth: Some(sup / prev),
        });
    }
    let stabilized = levels
        .last()
        .and_then(|l| l.growth)
        .is_none_or(|g| g <= params.stabilization_ratio);
    Ok(Theorem2Report {
        t1,
        t2,
        rect_eps,
        mesh,
        region_sups,
        regions_fat,
        interval,
        interval_sup: isup,
        levels,
        stabilized,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Corollary6Params {
    pub ratio_min: f64,
    /// The coefficients are the whole polynomial, not a truncated series.
    pub polynomial: bool,
    pub theorem3: Theorem3Params,
}

impl Default for Corollary6Params {
    fn default() -> Self {
        Self {
            ratio_min: 2.0,
            polynomial: false,
            theorem3: Theorem3Params::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Corollary6Report {
    pub gaps: OstrowskiGapReport,
    /// Degree after which every coefficient vanishes (polynomials only).
    pub terminal_gap: Option<usize>,
    pub p: Vec<usize>,
    /// Indices into the bridged series with zero terms removed; `S_{m_k} = T_{p_k}`.
    pub dirichlet_selector: Vec<usize>,
    /// Arc offsets `(θ1, θ2)` relative to `arg w` become `t ∈ (−θ2, −θ1)`.
    pub t_interval: (f64, f64),
    pub theorem3: Theorem3Report,
    /// `T_{p_k}(w)` for every `k`.
    pub taylor_at_w: Vec<Complex64>,
    /// `f(w)`, the nontangential limit at `s = 0`.
    pub f_w: Complex64,
    pub status: Status,
}

/// Nonzero `(degree, c)` pairs of a dense coefficient list.
pub fn sparse_taylor(coeffs: &[Complex64]) -> Vec<(usize, Complex64)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !(c.re == 0.0 && c.im == 0.0))
        .map(|(j, &c)| (j, c))
        .collect()
}

/// Taylor series with Ostrowski gaps, via the bridge `z = w·e^(−s)` and
/// [`theorem3_run`] at `t₀ = 0`.
///
/// `taylor` lists `(degree, c)` with strictly increasing degrees; unlisted
/// coefficients are zero. `sel` lists the `p_k`; each must start a detected
/// pure Ostrowski gap (or the terminal gap of a polynomial). `arc` is given as
/// angle offsets from `arg w` and must contain 0.
///
/// Zero coefficients are not terms of the bridged series, so a gap `(p, q)`
/// becomes the exponent jump from `p` to `q + 1`, and `m_k` counts the nonzero
/// coefficients of degree at most `p_k`. Then `S_{m_k} = T_{p_k}`.
pub fn corollary6_run(
    taylor: &[(usize, Complex64)],
    w: Complex64,
    sel: &[usize],
    arc: (f64, f64),
    region: &ApproachRegion,
    tol: f64,
    params: Corollary6Params,
) -> Result<Corollary6Report> {
    if !(arc.0 < 0.0 && 0.0 < arc.1) {
        return Err(LabError::domain(format!(
            "arc offsets ({}, {}) must contain 0",
            arc.0, arc.1
        )));
    }
    let gaps = detect_pure_ostrowski_sparse(taylor, params.ratio_min)?;
    let series = GeneralDirichletSeries::from_sparse_taylor(
        taylor,
        w,
        if params.polynomial {
            TailKind::Finite
        } else {
            TailKind::Truncated
        },
    )?;
    let degrees: Vec<usize> = series.exponents().iter().map(|&l| l as usize).collect();
    let terminal_gap = params
        .polynomial
        .then(|| degrees.last().copied().unwrap_or(0).max(1));
    if gaps.is_empty() && terminal_gap.is_none() {
        return Err(LabError::domain(format!(
            "no pure Ostrowski gaps with ratio >= {}",
            params.ratio_min
        )));
    }
    let starts = gaps.gap_starts();
    if let Some(&p) = sel
        .iter()
        .find(|p| !starts.contains(p) && Some(**p) != terminal_gap)
    {
        return Err(LabError::domain(format!("p = {p} does not start a detected gap")));
    }
    let dsel = SubsequenceSelector::new(sel.iter().map(|&p| degrees.partition_point(|&j| j <= p)).collect())?;
    let t_interval = (-arc.1, -arc.0);
    let theorem3 = theorem3_run(&series, &dsel, 0.0, t_interval, region, tol, params.theorem3)?;
    let taylor_at_w = theorem3.distances.iter().map(|d| d.value).collect();
    let f_w = theorem3.f_value.limit.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Ok(Corollary6Report {
        gaps,
        terminal_gap,
        p: sel.to_vec(),
        dirichlet_selector: dsel.indices().to_vec(),
        t_interval,
        status: theorem3.status,
        theorem3,
        taylor_at_w,
        f_w,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleParams {
    pub k_max: usize,
    pub mesh_points: usize,
    pub nt_tol: f64,
    pub nt: NtParams,
    pub region_mesh: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        Self {
            k_max: 20,
            mesh_points: 1000,
            nt_tol: 1e-8,
            nt: NtParams::default(),
            region_mesh: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleRow {
    pub k: usize,
    pub m: usize,
    pub s_at_pi: Complex64,
    pub mesh_max: f64,
    pub mesh_argmax_t: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleVerdict {
    pub zeros_at_pi: bool,
    pub bounded_on_interval: bool,
    pub derivative_bounded: bool,
    pub gap_condition_holds: bool,
    /// `S_{2k}(iπ) ↛ f(iπ)`.
    pub conclusion_fails: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleReport {
    pub rows: Vec<CounterexampleRow>,
    pub bound: f64,
    pub nt: ConvergenceReport,
    /// Sup of `|f′|` on the half-disc of radius `π/4` tangent at `iπ`, inside
    /// `{|s − iπ| < π/2}`.
    pub derivative_sup: RegionSup,
    pub verdict: CounterexampleVerdict,
}

/// `S_{2k}(it) = (1 − e^(−2kit))/(e^(it) − 1)` on `(π/2, 3π/2)`, its zeros at
/// `iπ`, and the limit `f(iπ) = −1/2` of `f(s) = 1/(e^s − 1)`.
pub fn counterexample_reproduce(params: CounterexampleParams) -> Result<CounterexampleReport> {
    let k_max = params.k_max;
    if k_max == 0 || params.mesh_points == 0 {
        return Err(LabError::domain("k_max and mesh_points must be positive"));
    }
    let series = GeneralDirichletSeries::geometric(2 * k_max + 1)?;
    let sel = SubsequenceSelector::arithmetic(2, 2, k_max)?;
    let bound = SQRT_2;
    let n = params.mesh_points;
    let mesh: Vec<f64> = (1..=n)
        .map(|j| FRAC_PI_2 + j as f64 * PI / (n + 1) as f64)
        .collect();
    let mut mesh_max = alloc::vec![(0.0f64, FRAC_PI_2); k_max];
    for &t in &mesh {
        let sums = series.partial_sums_along(&sel, ComplexPoint::on_axis(t))?;
        for (slot, v) in mesh_max.iter_mut().zip(&sums) {
            if v.norm() > slot.0 {
                *slot = (v.norm(), t);
            }
        }
    }
    let at_pi = series.partial_sums_along(&sel, ComplexPoint::on_axis(PI))?;
    let ratios = selector_gap_ratios(&series, &sel)?;
    let rows: Vec<CounterexampleRow> = (0..k_max)
        .map(|i| CounterexampleRow {
            k: i + 1,
            m: 2 * (i + 1),
            s_at_pi: at_pi[i],
            mesh_max: mesh_max[i].0,
            mesh_argmax_t: mesh_max[i].1,
            bound,
            within_bound: mesh_max[i].0 <= bound + 1e-12,
            gap_ratio: ratios[i],
        })
        .collect();
    let nt = nt_limit(&series, PI, params.nt, params.nt_tol)?;
    let derivative = series.derivative();
    let region = ApproachRegion::half_disc(PI, PI / 4.0)?;
    let derivative_sup = region_sup(
        |s| Ok(derivative.value(s, params.nt_tol, Route::Auto)?.norm()),
        &region,
        params.region_mesh,
    )?;
    let zeros_at_pi = rows.iter().all(|r| r.s_at_pi.norm() <= 1e-12);
    let conclusion_fails = match nt.limit {
        Some(f) if nt.is_converged() => rows
            .last()
            .is_some_and(|r| (r.s_at_pi - f).norm() > DIVERGENCE_FACTOR * params.nt_tol),
        _ => false,
    };
    let verdict = CounterexampleVerdict {
        zeros_at_pi,
        bounded_on_interval: rows.iter().all(|r| r.within_bound),
        derivative_bounded: derivative_sup.failures == 0 && derivative_sup.sup.is_finite(),
        gap_condition_holds: GapTrend::new(ratios).growing,
        conclusion_fails,
    };
    Ok(CounterexampleReport {
        rows,
        bound,
        nt,
        derivative_sup,
        verdict,
    })
}
