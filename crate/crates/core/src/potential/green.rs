use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::point::ComplexPoint;
use crate::series::GeneralDirichletSeries;

/// The vertical segment `K = [i·t_lo, i·t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SegmentK {
    pub t_lo: f64,
    pub t_hi: f64,
}

impl SegmentK {
    pub fn new(t_lo: f64, t_hi: f64) -> Result<Self> {
        if !(t_lo.is_finite() && t_hi.is_finite() && t_lo < t_hi) {
            return Err(LabError::invalid(
                "segment",
                format!("need finite t_lo < t_hi, got [{t_lo}, {t_hi}]"),
            ));
        }
        Ok(Self { t_lo, t_hi })
    }

    pub fn contains(&self, s: ComplexPoint) -> bool {
        s.sigma == 0.0 && s.t >= self.t_lo && s.t <= self.t_hi
    }

    /// `n ≥ 2` equally spaced points of `K`, endpoints included.
    pub fn mesh(&self, n: usize) -> Vec<ComplexPoint> {
        let n = n.max(2);
        (0..n)
            .map(|j| {
                let x = j as f64 / (n - 1) as f64;
                ComplexPoint::on_axis(self.t_lo + x * (self.t_hi - self.t_lo))
            })
            .collect()
    }

    /// Image in the unit disc of the exterior inverse Joukowski map.
    ///
    /// `w = (s − ic)/(ih)` takes `K` to `[−1, 1]`; the roots of
    /// `z + 1/z = 2w` are `z` and `1/z`, and the one inside the unit disc is
    /// returned. This choice is continuous off `K`, which is the cut.
    fn disc_image(&self, s: ComplexPoint) -> Complex64 {
        let c = 0.5 * (self.t_lo + self.t_hi);
        let h = 0.5 * (self.t_hi - self.t_lo);
        let w = Complex64::new((s.t - c) / h, -s.sigma / h);
        let one = Complex64::new(1.0, 0.0);
        let z = w + (w - one).sqrt() * (w + one).sqrt();
        if z.norm() > 1.0 {
            z.inv()
        } else {
            z
        }
    }
}

/// Green function `G_{ℂ∖K}(pole, s)`, by conformal transfer to the unit disc.
///
/// Returns `+∞` when `s == pole`.
pub fn green_segment(k: &SegmentK, pole: ComplexPoint, s: ComplexPoint) -> Result<f64> {
    if k.contains(pole) {
        return Err(LabError::domain(format!("pole {} + {}i lies on K", pole.sigma, pole.t)));
    }
    if k.contains(s) {
        return Err(LabError::domain(format!("point {} + {}i lies on K", s.sigma, s.t)));
    }
    if !(pole.is_finite() && s.is_finite()) {
        return Err(LabError::domain("points must be finite"));
    }
    if s == pole {
        return Ok(f64::INFINITY);
    }
    let a = k.disc_image(pole);
    let u = k.disc_image(s);
    let num = Complex64::new(1.0, 0.0) - a.conj() * u;
    let den = u - a;
    if den.norm() == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(libm::log(num.norm() / den.norm()).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LemmaLReport {
    /// Smallest `c` making the inequality hold on the samples.
    pub c: f64,
    /// `(m, s)` attaining `c`, if any sample contributed.
    pub at: Option<(usize, ComplexPoint)>,
    /// `b_m = max(sup_K |S_m|, 1)` in `m_set` order.
    pub b: Vec<f64>,
    pub k_mesh_points: usize,
}

/// Empirical constant in `|S_m| ≤ max(sup_K |S_m|, 1)·exp(c λ_m G(σ₀−1, ·))`.
///
/// `c = max over (m, s) of log⁺(|S_m(s)|/b_m) / (λ_m G(σ₀−1, s))`, with the
/// sup over `K` taken on `k_mesh_points` equally spaced points. Indices with
/// `λ_m = 0` are skipped since the right side does not depend on `c` there.
pub fn lemma_l_constant(
    series: &GeneralDirichletSeries,
    k: &SegmentK,
    sigma0: f64,
    m_set: &[usize],
    samples: &[ComplexPoint],
    k_mesh_points: usize,
) -> Result<LemmaLReport> {
    if !(sigma0 < 0.0) {
        return Err(LabError::domain(format!("sigma0 must be negative, got {sigma0}")));
    }
    if let Some(p) = samples.iter().find(|p| !(p.sigma > sigma0) || k.contains(**p)) {
        return Err(LabError::domain(format!(
            "sample {} + {}i is not in {{sigma > sigma0}} minus K",
            p.sigma, p.t
        )));
    }
    let pole = ComplexPoint::new(sigma0 - 1.0, 0.0);
    let greens: Vec<f64> = samples
        .iter()
        .map(|&s| green_segment(k, pole, s))
        .collect::<Result<_>>()?;
    if let Some(i) = greens.iter().position(|&g| !(g > 0.0)) {
        return Err(LabError::Internal(format!(
            "Green function vanished at sample {} + {}i",
            samples[i].sigma, samples[i].t
        )));
    }

    let k_mesh = k.mesh(k_mesh_points);
    let mut best = 0.0f64;
    let mut at = None;
    let mut b = Vec::with_capacity(m_set.len());
    for &m in m_set {
        let mut sup_k = 0.0f64;
        for &p in &k_mesh {
            sup_k = sup_k.max(series.partial_sum(m, p)?.norm());
        }
        let b_m = sup_k.max(1.0);
        b.push(b_m);
        let lambda = series.exponent(m);
        if lambda == 0.0 {
            continue;
        }
        for (&s, &g) in samples.iter().zip(&greens) {
            let ratio = series.partial_sum(m, s)?.norm() / b_m;
            if ratio <= 1.0 {
                continue;
            }
            let c = libm::log(ratio) / (lambda * g);
            if c > best {
                best = c;
                at = Some((m, s));
            }
        }
    }
    Ok(LemmaLReport {
        c: best,
        at,
        b,
        k_mesh_points: k_mesh.len(),
    })
}
