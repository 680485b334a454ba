//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use alloc::collections::BinaryHeap;
use alloc::format;
use core::cmp::Ordering;

use crate::error::{LabError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];

// Gauss weights for the 7-point rule live on the odd Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_intervals: 2000,
        }
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest error
/// estimate until `err ≤ max(abs_tol, rel_tol·|value|)`.
///
/// Fails if the interval budget runs out or the integrand produces a non-finite
/// value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(LabError::domain("quadrature limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let (v0, e0) = kronrod15(&f, lo, hi);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a: lo,
        b: hi,
        value: v0,
        err: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut intervals = 1;

    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(LabError::domain("integrand is not finite on the interval"));
        }
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if intervals >= cfg.max_intervals {
            return Err(LabError::domain(format!(
                "quadrature did not reach tolerance: error {total_err:e} > {target:e}"
            )));
        }
        let worst = heap.pop().expect("heap holds every live piece");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // The interval cannot be split further in f64.
            heap.push(worst);
            break;
        }
        let (lv, le) = kronrod15(&f, worst.a, mid);
        let (rv, re) = kronrod15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Piece {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
        });
        heap.push(Piece {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
        });
        intervals += 1;
    }

    // Re-sum from the pieces to shed drift from the running updates.
    let mut value = crate::sum::NeumaierSum::new();
    let mut abs_error = 0.0;
    for p in heap.iter() {
        value.add(p.value);
        abs_error += p.err;
    }
    Ok(QuadResult {
        value: sign * value.value(),
        abs_error,
        intervals,
    })
}

/// Integrates over `[a, b]` split at the given interior breakpoints.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: QuadConfig,
) -> Result<QuadResult> {
    let mut nodes: alloc::vec::Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut value = crate::sum::NeumaierSum::new();
    let mut abs_error = 0.0;
    let mut intervals = 0;
    let mut left = a;
    for &right in nodes.iter().chain(core::iter::once(&b)) {
        let r = integrate(&f, left, right, cfg)?;
        value.add(r.value);
        abs_error += r.abs_error;
        intervals += r.intervals;
        left = right;
    }
    Ok(QuadResult {
        value: value.value(),
        abs_error,
        intervals,
    })
}
