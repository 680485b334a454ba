use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabError, Result};
use crate::point::ComplexPoint;

/// Bounded planar domains for walk-on-spheres. Coordinates are `(σ, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum WosDomain {
    Disc { center: ComplexPoint, radius: f64 },
    Rectangle { sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    /// `σ = sigma_lo`, parameterized by `t`.
    Left,
    /// `σ = sigma_hi`, parameterized by `t`.
    Right,
    /// `t = t_lo`, parameterized by `σ`.
    Bottom,
    /// `t = t_hi`, parameterized by `σ`.
    Top,
}

/// A piece of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Piece {
    /// Circle arc of angles `[from, to)`, radians counterclockwise from the
    /// `+σ` direction; `0 < to − from ≤ 2π`.
    Arc { from: f64, to: f64 },
    /// Closed parameter interval `[from, to]` on one side of a rectangle.
    Segment { side: Side, from: f64, to: f64 },
    /// Everything not claimed by an earlier part.
    Rest,
}

/// Parts are matched in order; the first match wins.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryPart {
    pub label: String,
    pub piece: Piece,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WalkConfig {
    pub seed: u64,
    pub walks: usize,
    pub eps_boundary: f64,
    pub max_steps: usize,
}

impl WalkConfig {
    /// Absorption at `1e−6 ×` the domain diameter and at most 10⁴ jumps.
    pub fn for_domain(seed: u64, walks: usize, domain: &WosDomain) -> Self {
        Self {
            seed,
            walks,
            eps_boundary: 1e-6 * domain.diameter(),
            max_steps: 10_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.walks == 0 || self.max_steps == 0 || !(self.eps_boundary > 0.0) {
            return Err(LabError::invalid(
                "walk config",
                "walks, max_steps and eps_boundary must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkOutcome {
    Absorbed { part: usize, steps: usize },
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HarmonicMeasure {
    pub labels: Vec<String>,
    /// Sums to exactly 1 when added left to right.
    pub frequencies: Vec<f64>,
    /// Binomial standard errors `√(p(1−p)/n)`.
    pub std_errors: Vec<f64>,
    pub counts: Vec<usize>,
    /// Walks that reached the boundary; the frequencies are relative to these.
    pub absorbed: usize,
    pub exhausted: usize,
    pub mean_steps: f64,
}

impl WosDomain {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            WosDomain::Disc { center, radius } => center.is_finite() && radius > 0.0 && radius.is_finite(),
            WosDomain::Rectangle {
                sigma_lo,
                sigma_hi,
                t_lo,
                t_hi,
            } => {
                [sigma_lo, sigma_hi, t_lo, t_hi].iter().all(|x| x.is_finite())
                    && sigma_lo < sigma_hi
                    && t_lo < t_hi
            }
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::invalid("domain", format!("{self:?}")))
        }
    }

    pub fn diameter(&self) -> f64 {
        match *self {
            WosDomain::Disc { radius, .. } => 2.0 * radius,
            WosDomain::Rectangle {
                sigma_lo,
                sigma_hi,
                t_lo,
                t_hi,
            } => libm::hypot(sigma_hi - sigma_lo, t_hi - t_lo),
        }
    }

    /// Distance from an interior point to the boundary (negative outside).
    pub fn distance(&self, p: ComplexPoint) -> f64 {
        match *self {
            WosDomain::Disc { center, radius } => radius - libm::hypot(p.sigma - center.sigma, p.t - center.t),
            WosDomain::Rectangle {
                sigma_lo,
                sigma_hi,
                t_lo,
                t_hi,
            } => (p.sigma - sigma_lo)
                .min(sigma_hi - p.sigma)
                .min(p.t - t_lo)
                .min(t_hi - p.t),
        }
    }

    fn locate(&self, p: ComplexPoint) -> Locus {
        match *self {
            WosDomain::Disc { center, .. } => {
                let a = libm::atan2(p.t - center.t, p.sigma - center.sigma);
                Locus::Angle(if a < 0.0 { a + TAU } else { a })
            }
            WosDomain::Rectangle {
                sigma_lo,
                sigma_hi,
                t_lo,
                t_hi,
            } => {
                let cands = [
                    (p.sigma - sigma_lo, Side::Left, p.t),
                    (sigma_hi - p.sigma, Side::Right, p.t),
                    (p.t - t_lo, Side::Bottom, p.sigma),
                    (t_hi - p.t, Side::Top, p.sigma),
                ];
                let mut best = cands[0];
                for c in &cands[1..] {
                    if c.0 < best.0 {
                        best = *c;
                    }
                }
                let (lo, hi) = match best.1 {
                    Side::Left | Side::Right => (t_lo, t_hi),
                    Side::Bottom | Side::Top => (sigma_lo, sigma_hi),
                };
                Locus::Side(best.1, best.2.clamp(lo, hi))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Locus {
    Angle(f64),
    Side(Side, f64),
}

fn arc_contains(from: f64, to: f64, angle: f64) -> bool {
    let start = libm::fmod(from, TAU);
    let start = if start < 0.0 { start + TAU } else { start };
    let mut rel = angle - start;
    if rel < 0.0 {
        rel += TAU;
    }
    rel < to - from
}

fn matches(piece: &Piece, locus: Locus) -> bool {
    match (*piece, locus) {
        (Piece::Rest, _) => true,
        (Piece::Arc { from, to }, Locus::Angle(a)) => arc_contains(from, to, a),
        (Piece::Segment { side, from, to }, Locus::Side(s, x)) => side == s && x >= from && x <= to,
        _ => false,
    }
}

/// Whether the sorted intervals cover `[lo, hi]`.
fn covers(mut intervals: Vec<(f64, f64)>, lo: f64, hi: f64) -> bool {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = lo;
    for (a, b) in intervals {
        if a > reach {
            return false;
        }
        reach = reach.max(b);
    }
    reach >= hi
}

fn validate_partition(domain: &WosDomain, parts: &[BoundaryPart]) -> Result<()> {
    if parts.is_empty() {
        return Err(LabError::invalid("partition", "no boundary parts"));
    }
    let bad = |reason: String| Err(LabError::invalid("partition", reason));
    for (i, p) in parts.iter().enumerate() {
        match (domain, p.piece) {
            (_, Piece::Rest) => {}
            (WosDomain::Disc { .. }, Piece::Arc { from, to }) => {
                if !(from.is_finite() && to.is_finite() && to > from && to - from <= TAU) {
                    return bad(format!("part {} ({}): arc needs 0 < to - from <= 2pi", i + 1, p.label));
                }
            }
            (WosDomain::Rectangle { .. }, Piece::Segment { from, to, .. }) => {
                if !(from.is_finite() && to.is_finite() && to >= from) {
                    return bad(format!("part {} ({}): segment needs from <= to", i + 1, p.label));
                }
            }
            _ => {
                return bad(format!(
                    "part {} ({}) does not fit the domain kind",
                    i + 1,
                    p.label
                ))
            }
        }
    }
    if parts.iter().any(|p| p.piece == Piece::Rest) {
        return Ok(());
    }
    let covered = match *domain {
        WosDomain::Disc { .. } => {
            let mut iv = Vec::new();
            for p in parts {
                if let Piece::Arc { from, to } = p.piece {
                    let s = libm::fmod(from, TAU);
                    let s = if s < 0.0 { s + TAU } else { s };
                    let e = s + (to - from);
                    if e > TAU {
                        iv.push((s, TAU));
                        iv.push((0.0, e - TAU));
                    } else {
                        iv.push((s, e));
                    }
                }
            }
            covers(iv, 0.0, TAU)
        }
        WosDomain::Rectangle {
            sigma_lo,
            sigma_hi,
            t_lo,
            t_hi,
        } => [Side::Left, Side::Right, Side::Bottom, Side::Top].iter().all(|&side| {
            let iv = parts
                .iter()
                .filter_map(|p| match p.piece {
                    Piece::Segment { side: s, from, to } if s == side => Some((from, to)),
                    _ => None,
                })
                .collect();
            match side {
                Side::Left | Side::Right => covers(iv, t_lo, t_hi),
                Side::Bottom | Side::Top => covers(iv, sigma_lo, sigma_hi),
            }
        }),
    };
    if covered {
        Ok(())
    } else {
        bad(String::from("parts do not cover the boundary; add a `rest` part"))
    }
}

/// Runs walk number `index`. Its random stream depends only on
/// `(cfg.seed, index)`, so walks can be run in any order or in parallel.
pub fn walk_once(
    domain: &WosDomain,
    z: ComplexPoint,
    parts: &[BoundaryPart],
    cfg: &WalkConfig,
    index: u64,
) -> WalkOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut p = z;
    for step in 0..cfg.max_steps {
        let d = domain.distance(p);
        if d <= cfg.eps_boundary {
            let locus = domain.locate(p);
            let part = parts
                .iter()
                .position(|q| matches(&q.piece, locus))
                .unwrap_or(parts.len() - 1);
            return WalkOutcome::Absorbed { part, steps: step };
        }
        let theta = rng.random::<f64>() * TAU;
        let (sin, cos) = libm::sincos(theta);
        p = ComplexPoint::new(p.sigma + d * cos, p.t + d * sin);
    }
    WalkOutcome::Exhausted
}

/// Aggregates walk outcomes (in walk-index order) into frequencies.
pub fn tally(parts: &[BoundaryPart], outcomes: &[WalkOutcome]) -> Result<HarmonicMeasure> {
    let mut counts = alloc::vec![0usize; parts.len()];
    let mut exhausted = 0usize;
    let mut steps = 0u64;
    for o in outcomes {
        match *o {
            WalkOutcome::Absorbed { part, steps: s } => {
                counts[part] += 1;
                steps += s as u64;
            }
            WalkOutcome::Exhausted => exhausted += 1,
        }
    }
    let walks = outcomes.len();
    if walks == 0 {
        return Err(LabError::domain("no walks"));
    }
    if exhausted * 100 > walks {
        return Err(LabError::Reliability(format!(
            "{exhausted} of {walks} walks exceeded max_steps"
        )));
    }
    let absorbed = walks - exhausted;
    let n = absorbed as f64;
    let k = parts.len();
    let mut frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let head: f64 = frequencies[..k - 1].iter().sum();
    frequencies[k - 1] = 1.0 - head;
    for _ in 0..4 {
        let total: f64 = frequencies.iter().sum();
        if total == 1.0 {
            break;
        }
        frequencies[k - 1] += 1.0 - total;
    }
    let std_errors = frequencies
        .iter()
        .map(|&p| libm::sqrt((p * (1.0 - p)).max(0.0) / n))
        .collect();
    Ok(HarmonicMeasure {
        labels: parts.iter().map(|p| p.label.clone()).collect(),
        frequencies,
        std_errors,
        counts,
        absorbed,
        exhausted,
        mean_steps: steps as f64 / n.max(1.0),
    })
}

/// Walk-on-spheres estimate of the harmonic measure of each boundary part
/// seen from `z`.
pub fn harmonic_measure_wos(
    domain: &WosDomain,
    z: ComplexPoint,
    parts: &[BoundaryPart],
    cfg: &WalkConfig,
) -> Result<HarmonicMeasure> {
    check_inputs(domain, z, parts, cfg)?;
    let outcomes: Vec<WalkOutcome> = (0..cfg.walks as u64)
        .map(|i| walk_once(domain, z, parts, cfg, i))
        .collect();
    tally(parts, &outcomes)
}

/// Precondition checks shared by serial and parallel drivers.
pub fn check_inputs(domain: &WosDomain, z: ComplexPoint, parts: &[BoundaryPart], cfg: &WalkConfig) -> Result<()> {
    domain.validate()?;
    cfg.validate()?;
    validate_partition(domain, parts)?;
    if !(domain.distance(z) > 0.0) {
        return Err(LabError::domain(format!(
            "start point {} + {}i is not interior",
            z.sigma, z.t
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn part(label: &str, piece: Piece) -> BoundaryPart {
        BoundaryPart {
            label: String::from(label),
            piece,
        }
    }

    #[test]
    fn arc_membership_wraps() {
        assert!(arc_contains(-0.5, 0.5, 0.1));
        assert!(arc_contains(-0.5, 0.5, TAU - 0.1));
        assert!(!arc_contains(-0.5, 0.5, 1.0));
        assert!(arc_contains(0.0, TAU, 6.0));
    }

    #[test]
    fn coverage_is_checked() {
        let disc = WosDomain::Disc {
            center: ComplexPoint::new(0.0, 0.0),
            radius: 1.0,
        };
        let half = vec![part("a", Piece::Arc { from: 0.0, to: 3.0 })];
        assert!(validate_partition(&disc, &half).is_err());
        let full = vec![
            part("a", Piece::Arc { from: -1.0, to: 3.0 }),
            part("b", Piece::Arc { from: 3.0, to: TAU - 1.0 }),
        ];
        assert!(validate_partition(&disc, &full).is_ok());
        let wrong_kind = vec![part(
            "s",
            Piece::Segment {
                side: Side::Left,
                from: 0.0,
                to: 1.0,
            },
        )];
        assert!(validate_partition(&disc, &wrong_kind).is_err());
    }

    #[test]
    fn frequencies_sum_to_one_and_reproduce() {
        let disc = WosDomain::Disc {
            center: ComplexPoint::new(0.0, 0.0),
            radius: 1.0,
        };
        let parts: Vec<BoundaryPart> = (0..3)
            .map(|q| {
                let from = q as f64 * FRAC_PI_2;
                part("q", Piece::Arc { from, to: from + FRAC_PI_2 })
            })
            .chain(core::iter::once(part("rest", Piece::Rest)))
            .collect();
        let cfg = WalkConfig::for_domain(7, 2000, &disc);
        let a = harmonic_measure_wos(&disc, ComplexPoint::new(0.1, 0.2), &parts, &cfg).unwrap();
        let b = harmonic_measure_wos(&disc, ComplexPoint::new(0.1, 0.2), &parts, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.frequencies.iter().sum::<f64>(), 1.0);
        assert_eq!(a.counts.iter().sum::<usize>(), 2000);
    }

    #[test]
    fn exhausted_walks_are_a_reliability_error() {
        let disc = WosDomain::Disc {
            center: ComplexPoint::new(0.0, 0.0),
            radius: 1.0,
        };
        let parts = vec![part("all", Piece::Rest)];
        let cfg = WalkConfig {
            seed: 1,
            walks: 100,
            eps_boundary: 1e-12,
            max_steps: 2,
        };
        // Off-centre start: the first jump cannot reach the circle.
        let r = harmonic_measure_wos(&disc, ComplexPoint::new(0.5, 0.0), &parts, &cfg);
        assert!(matches!(r, Err(LabError::Reliability(_))));
    }

    #[test]
    fn start_must_be_interior() {
        let sq = WosDomain::Rectangle {
            sigma_lo: 0.0,
            sigma_hi: 1.0,
            t_lo: 0.0,
            t_hi: 1.0,
        };
        let parts = vec![part("all", Piece::Rest)];
        let cfg = WalkConfig::for_domain(1, 10, &sq);
        assert!(harmonic_measure_wos(&sq, ComplexPoint::new(0.0, 0.5), &parts, &cfg).is_err());
    }
}
