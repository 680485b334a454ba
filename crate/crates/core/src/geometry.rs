//! Approach regions to boundary points `it₀` of the right half-plane.
//!
//! Stolz sectors are parameterized by `δ ∈ (0, π/2)` with half-aperture
//! `π/2 − δ` measured from the inward normal, i.e. the sector is
//! `{|arg(s − it₀)| < π/2 − δ}` cut at radius `r`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::point::ComplexPoint;
use crate::quad::{integrate_with_breaks, QuadConfig};

/// Piecewise-linear cusp profile `φ` given on an increasing grid of `y` values.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSampled", into = "RawSampled"))]
pub struct SampledProfile {
    y: Vec<f64>,
    phi: Vec<f64>,
    lipschitz_bound: f64,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawSampled {
    y: Vec<f64>,
    phi: Vec<f64>,
    lipschitz_bound: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSampled> for SampledProfile {
    type Error = LabError;
    fn try_from(raw: RawSampled) -> Result<Self> {
        SampledProfile::new(raw.y, raw.phi, raw.lipschitz_bound)
    }
}

#[cfg(feature = "serde")]
impl From<SampledProfile> for RawSampled {
    fn from(p: SampledProfile) -> Self {
        RawSampled {
            y: p.y,
            phi: p.phi,
            lipschitz_bound: p.lipschitz_bound,
        }
    }
}

impl SampledProfile {
    /// Validates the grid and checks the Lipschitz bound on every grid
    /// segment, which is where the slope of the interpolant is attained.
    pub fn new(y: Vec<f64>, phi: Vec<f64>, lipschitz_bound: f64) -> Result<Self> {
        if y.len() < 2 || y.len() != phi.len() {
            return Err(LabError::invalid(
                "sampled profile",
                "needs at least two grid nodes and one value per node",
            ));
        }
        if !(lipschitz_bound >= 0.0 && lipschitz_bound.is_finite()) {
            return Err(LabError::invalid("sampled profile", "Lipschitz bound must be finite and >= 0"));
        }
        if let Some(i) = y.windows(2).position(|w| !(w[1] > w[0]) || !w[0].is_finite() || !w[1].is_finite()) {
            return Err(LabError::invalid(
                "sampled profile",
                format!("grid not strictly increasing at node {}", i + 1),
            ));
        }
        if let Some(i) = phi.iter().position(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(LabError::invalid("sampled profile", format!("phi[{i}] is negative or not finite")));
        }
        for i in 0..y.len() - 1 {
            let slope = (phi[i + 1] - phi[i]).abs() / (y[i + 1] - y[i]);
            if slope > lipschitz_bound * (1.0 + 1e-12) {
                return Err(LabError::invalid(
                    "sampled profile",
                    format!(
                        "slope {slope} on [{}, {}] exceeds the Lipschitz bound {lipschitz_bound}",
                        y[i],
                        y[i + 1]
                    ),
                ));
            }
        }
        Ok(Self {
            y,
            phi,
            lipschitz_bound,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.y
    }

    pub fn values(&self) -> &[f64] {
        &self.phi
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz_bound
    }

    /// Linear interpolation; `None` outside the grid.
    pub fn eval(&self, y: f64) -> Option<f64> {
        let n = self.y.len();
        if !(y >= self.y[0] && y <= self.y[n - 1]) {
            return None;
        }
        let idx = self.y.partition_point(|&g| g <= y);
        if idx == 0 {
            return Some(self.phi[0]);
        }
        if idx >= n {
            return Some(self.phi[n - 1]);
        }
        let (y0, y1) = (self.y[idx - 1], self.y[idx]);
        if y == y0 {
            return Some(self.phi[idx - 1]);
        }
        let w = (y - y0) / (y1 - y0);
        Some(self.phi[idx - 1] + w * (self.phi[idx] - self.phi[idx - 1]))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum CuspProfile {
    /// `φ(y) = c|y|^α`.
    Power { c: f64, alpha: f64 },
    Sampled(SampledProfile),
}

impl CuspProfile {
    pub fn eval(&self, y: f64) -> Option<f64> {
        match self {
            CuspProfile::Power { c, alpha } => Some(c * libm::pow(y.abs(), *alpha)),
            CuspProfile::Sampled(p) => p.eval(y),
        }
    }

    /// Lipschitz constant on `[−a, a]`; infinite for `α < 1`.
    pub fn lipschitz_bound(&self, a: f64) -> f64 {
        match self {
            CuspProfile::Power { c, alpha } => {
                if *alpha < 1.0 {
                    f64::INFINITY
                } else {
                    c * alpha * libm::pow(a, alpha - 1.0)
                }
            }
            CuspProfile::Sampled(p) => p.lipschitz_bound(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ApproachRegion {
    /// `{s : |s − it₀| < r, |arg(s − it₀)| < π/2 − δ}`.
    Stolz { t0: f64, delta: f64, radius: f64 },
    /// `{s : |s − (a + it₀)| < a, σ < a}`, tangent to the axis at `it₀`.
    HalfDisc { t0: f64, radius: f64 },
    /// `{σ + it : |t − t₀| < a, φ(t − t₀) < σ < b}`.
    Fat {
        t0: f64,
        a: f64,
        b: f64,
        profile: CuspProfile,
    },
}

/// The open triangle with vertices `it₀`, `it₀ + 1 + i`, `it₀ + 1 − i`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriangleGamma {
    pub t0: f64,
}

impl TriangleGamma {
    pub fn contains(&self, s: ComplexPoint) -> bool {
        s.sigma > 0.0 && s.sigma < 1.0 && (s.t - self.t0).abs() < s.sigma
    }
}

impl ApproachRegion {
    pub fn stolz(t0: f64, delta: f64, radius: f64) -> Result<Self> {
        let r = ApproachRegion::Stolz { t0, delta, radius };
        r.validate()?;
        Ok(r)
    }

    pub fn half_disc(t0: f64, radius: f64) -> Result<Self> {
        let r = ApproachRegion::HalfDisc { t0, radius };
        r.validate()?;
        Ok(r)
    }

    pub fn fat(t0: f64, a: f64, b: f64, profile: CuspProfile) -> Result<Self> {
        let r = ApproachRegion::Fat { t0, a, b, profile };
        r.validate()?;
        Ok(r)
    }

    pub fn power_cusp(t0: f64, a: f64, b: f64, c: f64, alpha: f64) -> Result<Self> {
        Self::fat(t0, a, b, CuspProfile::Power { c, alpha })
    }

    pub fn vertex(&self) -> f64 {
        match self {
            ApproachRegion::Stolz { t0, .. }
            | ApproachRegion::HalfDisc { t0, .. }
            | ApproachRegion::Fat { t0, .. } => *t0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: alloc::string::String| Err(LabError::invalid("region", reason));
        match self {
            ApproachRegion::Stolz { t0, delta, radius } => {
                if !t0.is_finite() {
                    return bad(format!("vertex {t0} is not finite"));
                }
                if !(*delta > 0.0 && *delta < FRAC_PI_2) {
                    return bad(format!("delta {delta} outside (0, pi/2)"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius {radius} must be positive"));
                }
            }
            ApproachRegion::HalfDisc { t0, radius } => {
                if !t0.is_finite() {
                    return bad(format!("vertex {t0} is not finite"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius {radius} must be positive"));
                }
            }
            ApproachRegion::Fat { t0, a, b, profile } => {
                if !t0.is_finite() {
                    return bad(format!("vertex {t0} is not finite"));
                }
                if !(*a > 0.0 && a.is_finite() && *b > 0.0 && b.is_finite()) {
                    return bad(format!("a = {a} and b = {b} must be positive"));
                }
                match profile {
                    CuspProfile::Power { c, alpha } => {
                        if !(*c > 0.0 && c.is_finite() && *alpha > 0.0 && alpha.is_finite()) {
                            return bad(format!("power profile needs c > 0 and alpha > 0, got c = {c}, alpha = {alpha}"));
                        }
                    }
                    CuspProfile::Sampled(p) => {
                        let g = p.grid();
                        if g[0] > -a || g[g.len() - 1] < *a {
                            return bad(format!(
                                "sampled grid [{}, {}] does not cover [-{a}, {a}]",
                                g[0],
                                g[g.len() - 1]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Strict membership in the open region.
    pub fn contains(&self, s: ComplexPoint) -> bool {
        if !(s.sigma > 0.0) {
            return false;
        }
        match self {
            ApproachRegion::Stolz { t0, delta, radius } => {
                let z = Complex64::new(s.sigma, s.t - t0);
                z.norm() < *radius && libm::atan2(z.im, z.re).abs() < FRAC_PI_2 - delta
            }
            ApproachRegion::HalfDisc { t0, radius } => {
                let z = Complex64::new(s.sigma - radius, s.t - t0);
                z.norm() < *radius && s.sigma < *radius
            }
            ApproachRegion::Fat { t0, a, b, profile } => {
                let y = s.t - t0;
                if !(y.abs() < *a && s.sigma < *b) {
                    return false;
                }
                match profile.eval(y) {
                    Some(phi) => phi < s.sigma,
                    None => false,
                }
            }
        }
    }

    /// `(σ_max, t_min, t_max)` of a box containing the region.
    pub fn bounding_box(&self) -> (f64, f64, f64) {
        match self {
            ApproachRegion::Stolz { t0, radius, .. } => (*radius, t0 - radius, t0 + radius),
            ApproachRegion::HalfDisc { t0, radius } => (*radius, t0 - radius, t0 + radius),
            ApproachRegion::Fat { t0, a, b, .. } => (*b, t0 - a, t0 + a),
        }
    }

    /// Radius below which every Stolz ray of parameter `delta` (half-aperture
    /// `π/2 − δ`) from the vertex stays inside the region.
    ///
    /// `None` when no such radius exists (a Stolz sector with a narrower
    /// aperture, or a power cusp with `α ≤ 1` whose cusp is too wide) or when
    /// the profile is sampled.
    pub fn stolz_radius_threshold(&self, delta: f64) -> Option<f64> {
        let (sin_d, cos_d) = libm::sincos(delta);
        match self {
            ApproachRegion::Stolz {
                delta: own, radius, ..
            } => (delta > *own).then_some(*radius),
            ApproachRegion::HalfDisc { radius, .. } => Some(radius.min(2.0 * radius * sin_d)),
            ApproachRegion::Fat {
                a,
                b,
                profile: CuspProfile::Power { c, alpha },
                ..
            } => {
                // Worst ray: σ = r sin δ, |y| = r cos δ; need c (r cos δ)^α < r sin δ.
                let cusp = if *alpha > 1.0 {
                    libm::pow(sin_d / (c * libm::pow(cos_d, *alpha)), 1.0 / (alpha - 1.0))
                } else if *alpha == 1.0 && c * cos_d < sin_d {
                    f64::INFINITY
                } else {
                    return None;
                };
                Some(cusp.min(*a).min(*b))
            }
            ApproachRegion::Fat { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum VerdictMethod {
    Analytic,
    /// Quadrature with the geometric-refinement divergence test.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FatnessVerdict {
    pub fat: bool,
    pub method: VerdictMethod,
    /// Partial integrals `I_j` over `[−a, a] ∖ (−a·2^(−j), a·2^(−j))`, heuristic only.
    pub partial_integrals: Vec<f64>,
}

pub const FATNESS_REFINEMENTS: usize = 30;
pub const FATNESS_WINDOW: usize = 5;
pub const FATNESS_GROWTH_FACTOR: f64 = 1.05;

/// Decides whether `∫_{−a}^{a} y^(−2) φ(y) dy < ∞`.
///
/// Half-discs are fat. Stolz sectors are not: their profile is linear at the
/// vertex and the integral diverges logarithmically. Power cusps are fat iff
/// `α > 1`. Sampled profiles get a heuristic verdict: the integral is computed
/// outside `(−η_j, η_j)` with `η_j = a·2^(−j)`, `j = 1..=30`, and declared
/// divergent if it grows by more than a factor 1.05 over the last 5 steps.
pub fn is_fat(region: &ApproachRegion) -> Result<FatnessVerdict> {
    region.validate()?;
    let analytic = |fat| FatnessVerdict {
        fat,
        method: VerdictMethod::Analytic,
        partial_integrals: Vec::new(),
    };
    match region {
        ApproachRegion::HalfDisc { .. } => Ok(analytic(true)),
        ApproachRegion::Stolz { .. } => Ok(analytic(false)),
        ApproachRegion::Fat {
            profile: CuspProfile::Power { alpha, .. },
            ..
        } => Ok(analytic(*alpha > 1.0)),
        ApproachRegion::Fat {
            a,
            profile: CuspProfile::Sampled(p),
            ..
        } => sampled_fatness(p, *a),
    }
}

fn sampled_fatness(profile: &SampledProfile, a: f64) -> Result<FatnessVerdict> {
    let eval = |y: f64| profile.eval(y).unwrap_or(0.0);
    // Folded integrand on (0, a]: (φ(y) + φ(−y)) / y².
    let folded = |y: f64| (eval(y) + eval(-y)) / (y * y);
    let mut breaks: Vec<f64> = profile
        .grid()
        .iter()
        .map(|g| g.abs())
        .filter(|&g| g > 0.0 && g < a)
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-10,
        max_intervals: 4000,
    };
    let mut total = 0.0;
    let mut partial_integrals = Vec::with_capacity(FATNESS_REFINEMENTS);
    let mut upper = a;
    for j in 1..=FATNESS_REFINEMENTS {
        let lower = a * libm::ldexp(1.0, -(j as i32));
        let piece = integrate_with_breaks(folded, lower, upper, &breaks, cfg)?;
        total += piece.value;
        partial_integrals.push(total);
        upper = lower;
    }
    let last = partial_integrals[FATNESS_REFINEMENTS - 1];
    let earlier = partial_integrals[FATNESS_REFINEMENTS - 1 - FATNESS_WINDOW];
    let divergent = !last.is_finite() || last > FATNESS_GROWTH_FACTOR * earlier;
    Ok(FatnessVerdict {
        fat: !divergent,
        method: VerdictMethod::Heuristic,
        partial_integrals,
    })
}

/// Three points per radius on the rays at angles `−(π/2−δ)`, `0`, `+(π/2−δ)`
/// from the inward normal at `it₀`.
pub fn stolz_sample(t0: f64, delta: f64, radii: &[f64]) -> Result<Vec<ComplexPoint>> {
    if !(delta > 0.0 && delta < FRAC_PI_2) {
        return Err(LabError::domain(format!("delta {delta} outside (0, pi/2)")));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(LabError::domain("radii must be positive"));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(LabError::domain("radii must be strictly decreasing"));
    }
    let half_aperture = FRAC_PI_2 - delta;
    let mut out = Vec::with_capacity(3 * radii.len());
    for &r in radii {
        for theta in [-half_aperture, 0.0, half_aperture] {
            let (sin, cos) = libm::sincos(theta);
            out.push(ComplexPoint::new(r * cos, t0 + r * sin));
        }
    }
    Ok(out)
}

/// Lattice `σ = i·mesh` (`i ≥ 1`), `t = t₀ + j·mesh`, restricted to the region.
///
/// Anchored at the vertex, so halving `mesh` refines the lattice.
pub fn region_lattice(region: &ApproachRegion, mesh: f64) -> Result<Vec<ComplexPoint>> {
    if !(mesh > 0.0 && mesh.is_finite()) {
        return Err(LabError::domain("mesh must be positive"));
    }
    let t0 = region.vertex();
    let (sigma_max, t_min, t_max) = region.bounding_box();
    let i_max = libm::ceil(sigma_max / mesh) as i64;
    let j_lo = libm::floor((t_min - t0) / mesh) as i64;
    let j_hi = libm::ceil((t_max - t0) / mesh) as i64;
    let mut pts = Vec::new();
    for i in 1..=i_max {
        for j in j_lo..=j_hi {
            let p = ComplexPoint::new(i as f64 * mesh, t0 + j as f64 * mesh);
            if region.contains(p) {
                pts.push(p);
            }
        }
    }
    if pts.is_empty() {
        return Err(LabError::domain(format!(
            "no lattice point of spacing {mesh} falls inside the region"
        )));
    }
    Ok(pts)
}

/// Empirical sup of `|f|` on a lattice. A lower bound for the true sup.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegionSup {
    pub sup: f64,
    pub at: Option<ComplexPoint>,
    pub mesh: f64,
    pub points: usize,
    /// Lattice points where the evaluator failed; they do not enter `sup`.
    pub failures: usize,
}

impl RegionSup {
    /// Folds per-point results in lattice order.
    pub fn from_values(
        mesh: f64,
        points: &[ComplexPoint],
        values: impl IntoIterator<Item = Result<f64>>,
    ) -> Result<Self> {
        let mut sup = 0.0f64;
        let mut at = None;
        let mut failures = 0;
        let mut first_err = None;
        for (p, v) in points.iter().zip(values) {
            match v {
                Ok(v) => {
                    if at.is_none() || v > sup {
                        sup = v;
                        at = Some(*p);
                    }
                }
                Err(e) => {
                    failures += 1;
                    first_err.get_or_insert(e);
                }
            }
        }
        if at.is_none() {
            return Err(first_err.unwrap_or_else(|| LabError::domain("empty lattice")));
        }
        Ok(Self {
            sup,
            at,
            mesh,
            points: points.len(),
            failures,
        })
    }
}

/// `sup |f|` over [`region_lattice`].
pub fn region_sup<F>(f: F, region: &ApproachRegion, mesh: f64) -> Result<RegionSup>
where
    F: Fn(ComplexPoint) -> Result<f64>,
{
    let pts = region_lattice(region, mesh)?;
    let values: Vec<Result<f64>> = pts.iter().map(|&p| f(p)).collect();
    RegionSup::from_values(mesh, &pts, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn half_disc_membership() {
        let h = ApproachRegion::half_disc(0.0, 1.0).unwrap();
        assert!(h.contains(ComplexPoint::new(0.5, 0.0)));
        assert!(!h.contains(ComplexPoint::new(0.0, 0.0)));
        assert!(!h.contains(ComplexPoint::new(1.2, 0.0)));
    }

    #[test]
    fn vertices_are_excluded() {
        let regions = [
            ApproachRegion::stolz(2.0, 0.3, 1.0).unwrap(),
            ApproachRegion::half_disc(2.0, 1.0).unwrap(),
            ApproachRegion::power_cusp(2.0, 1.0, 1.0, 1.0, 2.0).unwrap(),
        ];
        for r in &regions {
            assert!(!r.contains(ComplexPoint::on_axis(2.0)));
        }
        assert!(!TriangleGamma { t0: 2.0 }.contains(ComplexPoint::on_axis(2.0)));
    }

    #[test]
    fn power_cusp_excludes_points_below_profile() {
        let f = ApproachRegion::power_cusp(0.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        assert!(!f.contains(ComplexPoint::new(0.005, 0.1)));
        assert!(f.contains(ComplexPoint::new(0.02, 0.1)));
    }

    #[test]
    fn triangle_gamma() {
        let g = TriangleGamma { t0: -1.0 };
        for eps in [1e-9, 0.25, 0.999] {
            assert!(g.contains(ComplexPoint::new(eps, -1.0)));
        }
        assert!(!g.contains(ComplexPoint::new(0.5, -0.4)));
    }

    #[test]
    fn fatness_classes() {
        for (alpha, fat) in [(0.5, false), (1.0, false), (1.01, true), (2.0, true), (3.0, true)] {
            let r = ApproachRegion::power_cusp(0.0, 1.0, 1.0, 1.0, alpha).unwrap();
            assert_eq!(is_fat(&r).unwrap().fat, fat, "alpha = {alpha}");
        }
        assert!(is_fat(&ApproachRegion::half_disc(0.0, 1.0).unwrap()).unwrap().fat);
        assert!(!is_fat(&ApproachRegion::stolz(0.0, 0.5, 1.0).unwrap()).unwrap().fat);
    }

    #[test]
    fn sampled_linear_profile_is_not_fat() {
        let p = SampledProfile::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], 1.0).unwrap();
        let r = ApproachRegion::fat(0.0, 1.0, 1.0, CuspProfile::Sampled(p)).unwrap();
        let v = is_fat(&r).unwrap();
        assert_eq!(v.method, VerdictMethod::Heuristic);
        assert!(!v.fat);
        // I_j = 2 j log 2
        for (j, val) in v.partial_integrals.iter().enumerate() {
            let expected = 2.0 * (j as f64 + 1.0) * core::f64::consts::LN_2;
            assert!((val - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn sampled_flat_bottom_profile_is_fat() {
        // φ = 0 on [−0.1, 0.1], rising linearly outside: the integrand vanishes near 0.
        let p = SampledProfile::new(vec![-1.0, -0.1, 0.1, 1.0], vec![0.9, 0.0, 0.0, 0.9], 1.0).unwrap();
        let r = ApproachRegion::fat(0.0, 1.0, 1.0, CuspProfile::Sampled(p)).unwrap();
        assert!(is_fat(&r).unwrap().fat);
    }

    #[test]
    fn sampled_profile_validation() {
        assert!(SampledProfile::new(vec![-1.0, 0.0, 1.0], vec![2.0, 0.0, 2.0], 1.0).is_err());
        assert!(SampledProfile::new(vec![-1.0, 1.0, 0.5], vec![0.0; 3], 1.0).is_err());
        assert!(SampledProfile::new(vec![-1.0, 1.0], vec![-0.1, 0.0], 1.0).is_err());
        let narrow = SampledProfile::new(vec![-0.5, 0.5], vec![0.0, 0.0], 1.0).unwrap();
        assert!(ApproachRegion::fat(0.0, 1.0, 1.0, CuspProfile::Sampled(narrow)).is_err());
    }

    #[test]
    fn sampled_interpolation_exact_on_nodes() {
        let p = SampledProfile::new(vec![-1.0, -0.5, 0.0, 0.5, 1.0], vec![1.0, 0.25, 0.0, 0.25, 1.0], 1.5).unwrap();
        assert_eq!(p.eval(-0.5), Some(0.25));
        assert_eq!(p.eval(0.25), Some(0.125));
        assert_eq!(p.eval(1.0), Some(1.0));
        assert_eq!(p.eval(1.5), None);
    }

    #[test]
    fn stolz_sample_geometry() {
        let pts = stolz_sample(3.0, FRAC_PI_4, &[1.0]).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[1], ComplexPoint::new(1.0, 3.0));
        let pts = stolz_sample(0.0, 0.2, &[1.0, 0.5, 0.25]).unwrap();
        for p in &pts {
            let arg = libm::atan2(p.t, p.sigma).abs();
            assert!(arg <= FRAC_PI_2 - 0.2 + 1e-15);
            assert!(p.sigma > 0.0);
        }
        assert!(stolz_sample(0.0, 0.0, &[1.0]).is_err());
        assert!(stolz_sample(0.0, 0.2, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn stolz_samples_inside_wider_sector() {
        let delta = 0.4;
        let pts = stolz_sample(1.0, delta, &[1.0, 0.5, 0.25]).unwrap();
        let wider = ApproachRegion::stolz(1.0, delta / 2.0, 1.5).unwrap();
        assert!(pts.iter().all(|&p| wider.contains(p)));
        let same = ApproachRegion::stolz(1.0, delta, 1.5).unwrap();
        // The outer rays lie on the boundary of the sector with the same δ.
        assert!(!same.contains(pts[0]));
        assert!(same.contains(pts[1]));
    }

    #[test]
    fn constant_region_sup() {
        let r = ApproachRegion::power_cusp(0.0, 1.0, 1.0, 1.0, 2.0).unwrap();
        let s = region_sup(|_| Ok(2.5), &r, 0.05).unwrap();
        assert_eq!(s.sup, 2.5);
    }

    #[test]
    fn identity_sup_on_half_disc_increases_under_refinement() {
        // sup |s| over {|s − 1| < 1, σ < 1} is √2, approached from below.
        let h = ApproachRegion::half_disc(0.0, 1.0).unwrap();
        let mut prev = 0.0;
        for k in 2..8 {
            let mesh = libm::ldexp(1.0, -k);
            let s = region_sup(|p| Ok(p.to_complex().norm()), &h, mesh).unwrap();
            assert!(s.sup >= prev);
            assert!(s.sup < SQRT_2);
            prev = s.sup;
        }
        assert!(SQRT_2 - prev < 0.02);
    }

    #[test]
    fn empty_lattice_is_an_error() {
        let h = ApproachRegion::half_disc(0.0, 0.1).unwrap();
        assert!(region_sup(|_| Ok(1.0), &h, 1.0).is_err());
    }
}
