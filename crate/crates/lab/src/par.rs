//! Rayon drivers over the per-item kernels of the core crate. Results are
//! assembled in item order, so they equal the serial functions bit for bit.

use dirichlet_lab_core::experiments::{assemble_scan, check_grid, compare_point, scan_point, BoundaryScan};
use dirichlet_lab_core::potential::{check_inputs, tally, walk_once, BoundaryPart, HarmonicMeasure, WalkConfig, WosDomain};
use dirichlet_lab_core::{ComplexPoint, GeneralDirichletSeries, NtParams, Result, SubsequenceSelector};
use rayon::prelude::*;

/// Parallel `subsequence_limits` (`nt = None`) or `theorem1_compare`.
pub fn scan(
    series: &GeneralDirichletSeries,
    sel: &SubsequenceSelector,
    grid: &[f64],
    tol: f64,
    nt: Option<NtParams>,
) -> Result<BoundaryScan> {
    check_grid(grid)?;
    sel.check_against(series)?;
    let points = grid
        .par_iter()
        .map(|&t| match nt {
            Some(p) => compare_point(series, sel, t, p, tol),
            None => scan_point(series, sel, t, tol),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_scan(grid.to_vec(), tol, points))
}

/// Parallel `harmonic_measure_wos`.
pub fn harmonic_measure(
    domain: &WosDomain,
    z: ComplexPoint,
    parts: &[BoundaryPart],
    cfg: &WalkConfig,
) -> Result<HarmonicMeasure> {
    check_inputs(domain, z, parts, cfg)?;
    let outcomes: Vec<_> = (0..cfg.walks as u64)
        .into_par_iter()
        .map(|i| walk_once(domain, z, parts, cfg, i))
        .collect();
    tally(parts, &outcomes)
}
