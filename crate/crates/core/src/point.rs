use num_complex::Complex64;

/// A point `s = σ + it` of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub const fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    /// The boundary point `it` on the imaginary axis.
    pub const fn on_axis(t: f64) -> Self {
        Self { sigma: 0.0, t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn is_finite(self) -> bool {
        self.sigma.is_finite() && self.t.is_finite()
    }

    pub fn shifted(self, d_sigma: f64, d_t: f64) -> Self {
        Self::new(self.sigma + d_sigma, self.t + d_t)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

/// `e^(−λ s)` for real `λ ≥ 0`.
///
/// The phase `λ·t` is formed once in f64, so large exponents keep the full
/// accuracy of the platform `sin`/`cos` range reduction.
#[inline]
pub fn exp_neg(lambda: f64, s: ComplexPoint) -> Complex64 {
    if lambda == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let modulus = libm::exp(-lambda * s.sigma);
    let phase = lambda * s.t;
    let (sin, cos) = libm::sincos(phase);
    Complex64::new(modulus * cos, -modulus * sin)
}

/// `e^z − 1` without cancellation near `z = 0`.
pub fn expm1(z: Complex64) -> Complex64 {
    let em1 = libm::expm1(z.re);
    let (sin, cos) = libm::sincos(z.im);
    let half_sin = libm::sin(0.5 * z.im);
    // cos t − 1 = −2 sin²(t/2)
    let cos_m1 = -2.0 * half_sin * half_sin;
    Complex64::new(em1 * cos + cos_m1, (em1 + 1.0) * sin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_neg_matches_complex_exp() {
        let s = ComplexPoint::new(0.3, -1.7);
        for &lambda in &[0.0, 0.5, 1.0, 7.25, 40.0] {
            let direct = (-(lambda * s.to_complex())).exp();
            let fast = exp_neg(lambda, s);
            assert!((direct - fast).norm() < 1e-14 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn expm1_is_accurate_near_zero() {
        let z = Complex64::new(1e-12, -3e-13);
        let v = expm1(z);
        assert!((v - z).norm() < 1e-24);
        let w = Complex64::new(0.7, 2.1);
        assert!((expm1(w) - (w.exp() - 1.0)).norm() < 1e-14);
    }
}
