use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::point::ComplexPoint;
use crate::quad::{integrate_with_breaks, QuadConfig};
use crate::sum::NeumaierSum;

/// `P_{it₀}(s) = σ/(σ² + (t − t₀)²)`.
pub fn poisson_kernel(t0: f64, s: ComplexPoint) -> Result<f64> {
    if !(s.sigma > 0.0) {
        return Err(LabError::domain(format!(
            "Poisson kernel needs Re s > 0, got {}",
            s.sigma
        )));
    }
    let dt = s.t - t0;
    Ok(s.sigma / (s.sigma * s.sigma + dt * dt))
}

/// Positive measure on the line: point masses plus a piecewise-constant
/// density that vanishes outside `[breakpoints[0], breakpoints[last]]`.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawMeasure", into = "RawMeasure"))]
pub struct BoundaryMeasure {
    atoms: Vec<(f64, f64)>,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawMeasure {
    #[serde(default)]
    atoms: Vec<(f64, f64)>,
    #[serde(default)]
    breakpoints: Vec<f64>,
    #[serde(default)]
    values: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawMeasure> for BoundaryMeasure {
    type Error = LabError;
    fn try_from(r: RawMeasure) -> Result<Self> {
        BoundaryMeasure::new(r.atoms, r.breakpoints, r.values)
    }
}

#[cfg(feature = "serde")]
impl From<BoundaryMeasure> for RawMeasure {
    fn from(m: BoundaryMeasure) -> Self {
        RawMeasure {
            atoms: m.atoms,
            breakpoints: m.breakpoints,
            values: m.values,
        }
    }
}

impl BoundaryMeasure {
    /// `values[i]` is the density on `[breakpoints[i], breakpoints[i+1])`.
    pub fn new(atoms: Vec<(f64, f64)>, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |reason: alloc::string::String| Err(LabError::invalid("measure", reason));
        for (i, &(t, m)) in atoms.iter().enumerate() {
            if !t.is_finite() || !(m >= 0.0 && m.is_finite()) {
                return bad(format!("atom {} at {t} with mass {m}", i + 1));
            }
        }
        if breakpoints.is_empty() {
            if !values.is_empty() {
                return bad(format!("{} density values but no breakpoints", values.len()));
            }
        } else if values.len() + 1 != breakpoints.len() {
            return bad(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            ));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return bad("breakpoints must be finite".into());
        }
        if let Some(i) = breakpoints.windows(2).position(|w| !(w[1] > w[0])) {
            return bad(format!("breakpoints not strictly increasing at index {}", i + 2));
        }
        if let Some(i) = values.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
            return bad(format!("density value {} is {}", i + 1, values[i]));
        }
        Ok(Self {
            atoms,
            breakpoints,
            values,
        })
    }

    pub fn atom(t: f64, mass: f64) -> Result<Self> {
        Self::new(alloc::vec![(t, mass)], Vec::new(), Vec::new())
    }

    /// Constant density on `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, density: f64) -> Result<Self> {
        Self::new(Vec::new(), alloc::vec![lo, hi], alloc::vec![density])
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn density_at(&self, t: f64) -> f64 {
        if self.breakpoints.len() < 2 || t < self.breakpoints[0] {
            return 0.0;
        }
        match self.breakpoints.partition_point(|&b| b <= t) {
            i if i >= self.breakpoints.len() => 0.0,
            i => self.values[i - 1],
        }
    }

    /// `μ([lo, hi])`, atoms at the endpoints included.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let mut m = NeumaierSum::new();
        for &(t, w) in &self.atoms {
            if t >= lo && t <= hi {
                m.add(w);
            }
        }
        for (i, &v) in self.values.iter().enumerate() {
            let a = self.breakpoints[i].max(lo);
            let b = self.breakpoints[i + 1].min(hi);
            if b > a {
                m.add(v * (b - a));
            }
        }
        m.value()
    }

    pub fn total_mass(&self) -> f64 {
        self.mass_in(f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// `h(s) = (σ/π) ∫ |s − iζ|^(−2) dμ(ζ)`.
///
/// Atoms are summed in closed form; each density piece is integrated by
/// adaptive Gauss–Kronrod to relative tolerance `1e−10`, with a breakpoint at
/// `t` where the kernel peaks.
pub fn poisson_integral(mu: &BoundaryMeasure, s: ComplexPoint) -> Result<f64> {
    if !(s.sigma > 0.0) {
        return Err(LabError::domain(format!(
            "Poisson integral needs Re s > 0, got {}",
            s.sigma
        )));
    }
    let mut total = NeumaierSum::new();
    for &(t0, mass) in &mu.atoms {
        total.add(mass * poisson_kernel(t0, s)?);
    }
    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        max_intervals: 2000,
    };
    let sigma = s.sigma;
    let kernel = |zeta: f64| {
        let dt = s.t - zeta;
        sigma / (sigma * sigma + dt * dt)
    };
    for (i, &v) in mu.values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (a, b) = (mu.breakpoints[i], mu.breakpoints[i + 1]);
        let r = integrate_with_breaks(kernel, a, b, &[s.t], cfg)?;
        total.add(v * r.value);
    }
    Ok((total.value() / PI).max(0.0))
}

/// The measure behind `h₁`: `μ` restricted to `ℝ ∖ I` plus atoms of mass
/// `μ(I)` at both endpoints of `I = [lo, hi]`.
pub fn h1_decompose(mu: &BoundaryMeasure, interval: (f64, f64)) -> Result<BoundaryMeasure> {
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(LabError::domain(format!("empty interval [{lo}, {hi}]")));
    }
    let inside = mu.mass_in(lo, hi);
    let mut atoms: Vec<(f64, f64)> = mu
        .atoms
        .iter()
        .copied()
        .filter(|&(t, _)| t < lo || t > hi)
        .collect();
    if inside > 0.0 {
        atoms.push((lo, inside));
        atoms.push((hi, inside));
    }

    let (breakpoints, values) = if mu.breakpoints.len() < 2 {
        (Vec::new(), Vec::new())
    } else {
        let first = mu.breakpoints[0];
        let last = mu.breakpoints[mu.breakpoints.len() - 1];
        let mut cuts: Vec<f64> = mu.breakpoints.clone();
        for x in [lo, hi] {
            if x > first && x < last {
                cuts.push(x);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let values = cuts
            .windows(2)
            .map(|w| {
                if w[0] >= lo && w[1] <= hi {
                    0.0
                } else {
                    mu.density_at(0.5 * (w[0] + w[1]))
                }
            })
            .collect();
        (cuts, values)
    };
    BoundaryMeasure::new(atoms, breakpoints, values)
}
