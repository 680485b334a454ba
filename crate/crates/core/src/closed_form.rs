//! Known closed forms, used as exact evaluators and as cross-check oracles.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{LabError, Result};
use crate::point::{exp_neg, expm1, ComplexPoint};

/// Identifier of a closed form attached to a series.
///
/// Tags serialize as short strings: `geometric`, `geometric_derivative`,
/// `zeta_shift:K` and `identity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `Σ_{n≥1} e^(−ns) = 1/(e^s − 1)`.
    Geometric,
    /// `−e^s/(e^s − 1)²`, the derivative of [`ClosedForm::Geometric`].
    GeometricDerivative,
    /// `ζ(s + k) = Σ n^(−k) e^(−s log n)`.
    ZetaShift(u32),
    /// `f(s) = s`. Not representable as a Dirichlet series; used to drive the
    /// limit detectors with a known continuous function.
    Identity,
}

impl ClosedForm {
    pub fn eval(self, s: ComplexPoint) -> Result<Complex64> {
        let z = s.to_complex();
        match self {
            ClosedForm::Geometric => {
                let d = expm1(z);
                if d.norm() == 0.0 {
                    return Err(LabError::domain("pole of 1/(e^s - 1)"));
                }
                Ok(d.inv())
            }
            ClosedForm::GeometricDerivative => {
                let d = expm1(z);
                if d.norm() == 0.0 {
                    return Err(LabError::domain("pole of 1/(e^s - 1)"));
                }
                Ok(-z.exp() / (d * d))
            }
            ClosedForm::ZetaShift(k) => zeta(ComplexPoint::new(s.sigma + f64::from(k), s.t)),
            ClosedForm::Identity => Ok(z),
        }
    }

    pub fn derivative(self) -> Option<ClosedForm> {
        match self {
            ClosedForm::Geometric => Some(ClosedForm::GeometricDerivative),
            _ => None,
        }
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::Geometric => f.write_str("geometric"),
            ClosedForm::GeometricDerivative => f.write_str("geometric_derivative"),
            ClosedForm::ZetaShift(k) => write!(f, "zeta_shift:{k}"),
            ClosedForm::Identity => f.write_str("identity"),
        }
    }
}

impl FromStr for ClosedForm {
    type Err = LabError;

    fn from_str(tag: &str) -> Result<Self> {
        match tag {
            "geometric" => Ok(ClosedForm::Geometric),
            "geometric_derivative" => Ok(ClosedForm::GeometricDerivative),
            "identity" => Ok(ClosedForm::Identity),
            _ => {
                if let Some(k) = tag.strip_prefix("zeta_shift:") {
                    let k: u32 = k
                        .parse()
                        .map_err(|_| LabError::invalid("closed form", format!("bad shift in {tag:?}")))?;
                    return Ok(ClosedForm::ZetaShift(k));
                }
                Err(LabError::invalid("closed form", format!("unknown tag {tag:?}")))
            }
        }
    }
}

const BORWEIN_TERMS: usize = 64;

/// Riemann zeta for `Re s > 0`, `s ≠ 1`, through the Dirichlet eta function.
///
/// Uses Borwein's accelerated alternating series
/// `η(s) = −(1/d_n) Σ_{k<n} (−1)^k (d_k − d_n)/(k+1)^s` with 64 terms and
/// `ζ(s) = η(s)/(1 − 2^(1−s))`. The truncation error is below
/// `3(1+2|t|)e^(π|t|/2)/(3+√8)^64`, negligible for `|t| ≲ 40`.
pub fn zeta(s: ComplexPoint) -> Result<Complex64> {
    if !(s.sigma > 0.0) {
        return Err(LabError::domain(format!("zeta route needs Re s > 0, got {}", s.sigma)));
    }
    let one_minus_s = ComplexPoint::new(1.0 - s.sigma, -s.t);
    // 1 − 2^(1−s)
    let denom = -expm1(core::f64::consts::LN_2 * one_minus_s.to_complex());
    if denom.norm() < 1e-12 {
        return Err(LabError::domain(format!(
            "zeta route is singular at s = {} + {}i",
            s.sigma, s.t
        )));
    }

    let n = BORWEIN_TERMS;
    let nf = n as f64;
    // d_k = n Σ_{i≤k} (n+i−1)! 4^i / ((n−i)! (2i)!), built from the term ratio.
    let mut partial = [0.0f64; BORWEIN_TERMS + 1];
    let mut term = 1.0f64;
    let mut acc = 0.0f64;
    for (i, slot) in partial.iter_mut().enumerate() {
        acc += term;
        *slot = acc;
        let fi = i as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    let d_n = partial[n];

    let mut eta = crate::sum::ComplexSum::new();
    for (k, &d_k) in partial[..n].iter().enumerate() {
        let weight = (d_n - d_k) / d_n;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = (k + 1) as f64;
        eta.add(exp_neg(libm::log(kf), s) * (sign * weight));
    }
    Ok(eta.value() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for cf in [
            ClosedForm::Geometric,
            ClosedForm::GeometricDerivative,
            ClosedForm::ZetaShift(2),
            ClosedForm::Identity,
        ] {
            let tag = alloc::string::ToString::to_string(&cf);
            assert_eq!(tag.parse::<ClosedForm>().unwrap(), cf);
        }
        assert!("zeta_shift:x".parse::<ClosedForm>().is_err());
        assert!("nope".parse::<ClosedForm>().is_err());
    }

    #[test]
    fn zeta_real_values() {
        let z2 = zeta(ComplexPoint::new(2.0, 0.0)).unwrap();
        assert!((z2.re - core::f64::consts::PI * core::f64::consts::PI / 6.0).abs() < 1e-14);
        assert!(z2.im.abs() < 1e-15);
        // ζ(3), Apéry's constant
        let z3 = zeta(ComplexPoint::new(3.0, 0.0)).unwrap();
        assert!((z3.re - 1.202_056_903_159_594_3).abs() < 1e-14);
    }

    #[test]
    fn zeta_on_critical_line_first_zero() {
        let v = zeta(ComplexPoint::new(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
    }

    #[test]
    fn geometric_closed_form() {
        let v = ClosedForm::Geometric.eval(ComplexPoint::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / (core::f64::consts::E - 1.0)).abs() < 1e-15);
        let at_pi = ClosedForm::Geometric
            .eval(ComplexPoint::new(1e-9, core::f64::consts::PI))
            .unwrap();
        assert!((at_pi + 0.5).norm() < 1e-9);
        assert!(ClosedForm::Geometric.eval(ComplexPoint::new(0.0, 0.0)).is_err());
    }
}
