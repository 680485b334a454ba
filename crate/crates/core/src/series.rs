//! General Dirichlet series `f(s) = Σ aₙ e^(−λₙ s)` with a finite stored prefix.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::closed_form::ClosedForm;
use crate::error::{LabError, Result};
use crate::point::{exp_neg, ComplexPoint};
use crate::sum::{ComplexSum, NeumaierSum};

/// Whether the stored terms are the whole series or a prefix of an infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TailKind {
    /// The series has exactly the stored terms; it is an entire function.
    Finite,
    /// The stored terms are a prefix. Bounds computed from them are heuristic.
    Truncated,
}

/// Which evaluator to use for `f` off the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Route {
    /// The registered closed form if any, else truncated summation.
    #[default]
    Auto,
    Series,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralDirichletSeries {
    exponents: Vec<f64>,
    coefficients: Vec<Complex64>,
    tail: TailKind,
    closed_form: Option<ClosedForm>,
}

/// `c·w^j` for `|w| = 1`, `w = e^(iθ)`.
fn bridge_coefficient(c: Complex64, j: usize, theta: f64) -> Complex64 {
    if j == 0 {
        c
    } else {
        let (sin, cos) = libm::sincos(j as f64 * theta);
        c * Complex64::new(cos, sin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub tol_met: bool,
    /// The bound only covers stored terms (truncated series).
    pub heuristic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub bound: f64,
    pub heuristic: bool,
}

/// Prefix estimate of `lim sup log(Σ₁^m |aₙ|)/λ_m`, the quantity that controls
/// the abscissa of absolute convergence when it is nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbscissaEstimate {
    pub value: f64,
    /// Index at which the maximum over the upper half of the prefix was attained.
    pub at_m: usize,
}

/// Ratios `λ_{n+1}/λ_n` within this margin of 1 count as "no gap" in
/// [`GeneralDirichletSeries::high_indices_check`].
pub const HIGH_INDICES_MARGIN: f64 = 1e-3;

const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

impl GeneralDirichletSeries {
    pub fn new(exponents: Vec<f64>, coefficients: Vec<Complex64>, tail: TailKind) -> Result<Self> {
        if exponents.is_empty() {
            return Err(LabError::invalid("series", "no terms"));
        }
        if exponents.len() != coefficients.len() {
            return Err(LabError::invalid(
                "series",
                format!(
                    "{} exponents but {} coefficients",
                    exponents.len(),
                    coefficients.len()
                ),
            ));
        }
        if let Some(i) = exponents.iter().position(|x| !x.is_finite()) {
            return Err(LabError::invalid("series", format!("exponent {} is not finite", i + 1)));
        }
        if let Some(i) = coefficients
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(LabError::invalid("series", format!("coefficient {} is not finite", i + 1)));
        }
        if exponents[0] < 0.0 {
            return Err(LabError::invalid("series", "first exponent is negative"));
        }
        if let Some(i) = exponents.windows(2).position(|w| w[1] <= w[0]) {
            return Err(LabError::invalid(
                "series",
                format!("exponents not strictly increasing at index {} (1-based)", i + 2),
            ));
        }
        Ok(Self {
            exponents,
            coefficients,
            tail,
            closed_form: None,
        })
    }

    pub fn with_closed_form(mut self, closed_form: Option<ClosedForm>) -> Self {
        self.closed_form = closed_form;
        self
    }

    pub fn with_tail(mut self, tail: TailKind) -> Self {
        self.tail = tail;
        self
    }

    /// `aₙ = 1`, `λₙ = n`: the prefix of `1/(e^s − 1)`.
    pub fn geometric(terms: usize) -> Result<Self> {
        let exponents = (1..=terms).map(|n| n as f64).collect();
        let coefficients = alloc::vec![Complex64::new(1.0, 0.0); terms];
        Ok(Self::new(exponents, coefficients, TailKind::Truncated)?
            .with_closed_form(Some(ClosedForm::Geometric)))
    }

    /// Ordinary series `aₙ = n^(−k)`, `λₙ = log n`: the prefix of `ζ(s + k)`.
    pub fn zeta_shift(k: u32, terms: usize) -> Result<Self> {
        let mut exponents = Vec::with_capacity(terms);
        let mut coefficients = Vec::with_capacity(terms);
        for n in 1..=terms {
            let nf = n as f64;
            exponents.push(libm::log(nf));
            coefficients.push(Complex64::new(libm::pow(nf, -f64::from(k)), 0.0));
        }
        Ok(Self::new(exponents, coefficients, TailKind::Truncated)?
            .with_closed_form(Some(ClosedForm::ZetaShift(k))))
    }

    /// `a_k = 2^(−k)/k!`, `λ_k = k!` for `k = 1..=terms`.
    ///
    /// `Σ |a_k| λ_k < ∞`, so the derivative is bounded up to the boundary and
    /// the exponent ratios `λ_{k+1}/λ_k = k + 1` grow without bound.
    pub fn factorial_lacunary(terms: usize) -> Result<Self> {
        if terms > 170 {
            return Err(LabError::domain("k! overflows f64 beyond k = 170"));
        }
        let mut exponents = Vec::with_capacity(terms);
        let mut coefficients = Vec::with_capacity(terms);
        let mut fact = 1.0f64;
        for k in 1..=terms {
            fact *= k as f64;
            exponents.push(fact);
            coefficients.push(Complex64::new(libm::ldexp(1.0, -(k as i32)) / fact, 0.0));
        }
        Self::new(exponents, coefficients, TailKind::Truncated)
    }

    /// `aₙ = ratioⁿ`, `λₙ = baseⁿ` for `n = 1..=terms` (Hadamard-lacunary).
    pub fn power_exponents(base: f64, ratio: f64, terms: usize) -> Result<Self> {
        if !(base > 1.0) {
            return Err(LabError::domain("exponent base must exceed 1"));
        }
        let exponents = (1..=terms).map(|n| libm::pow(base, n as f64)).collect();
        let coefficients = (1..=terms)
            .map(|n| Complex64::new(libm::pow(ratio, n as f64), 0.0))
            .collect();
        Self::new(exponents, coefficients, TailKind::Truncated)
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn tail(&self) -> TailKind {
        self.tail
    }

    pub fn is_finite(&self) -> bool {
        self.tail == TailKind::Finite
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// `λ_m` with 1-based `m`.
    pub fn exponent(&self, m: usize) -> f64 {
        self.exponents[m - 1]
    }

    fn check_index(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.len() {
            return Err(LabError::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// `S_m(s) = Σ_{n=1}^{m} aₙ e^(−λₙ s)`, summed in increasing `n`.
    pub fn partial_sum(&self, m: usize, s: ComplexPoint) -> Result<Complex64> {
        self.check_index(m)?;
        Ok(self.sum_range(0, m, s))
    }

    fn sum_range(&self, from: usize, to: usize, s: ComplexPoint) -> Complex64 {
        let mut acc = ComplexSum::new();
        for (a, &lambda) in self.coefficients[from..to]
            .iter()
            .zip(&self.exponents[from..to])
        {
            acc.add(a * exp_neg(lambda, s));
        }
        acc.value()
    }

    /// `Σ_{n>m} aₙ e^(−λₙ s)` over the stored terms. For a finite series this is
    /// exactly `f(s) − S_m(s)`.
    pub fn remainder(&self, m: usize, s: ComplexPoint) -> Result<Complex64> {
        if m > self.len() {
            return Err(LabError::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        Ok(self.sum_range(m, self.len(), s))
    }

    /// Partial sums `S_{m_k}(s)` for every index of the selector, computed in a
    /// single compensated pass.
    pub fn partial_sums_along(&self, sel: &SubsequenceSelector, s: ComplexPoint) -> Result<Vec<Complex64>> {
        sel.check_against(self)?;
        let mut out = Vec::with_capacity(sel.len());
        let mut acc = ComplexSum::new();
        let mut n = 0;
        for &m in sel.indices() {
            while n < m {
                acc.add(self.coefficients[n] * exp_neg(self.exponents[n], s));
                n += 1;
            }
            out.push(acc.value());
        }
        Ok(out)
    }

    /// The full stored sum. Exact value of `f` for a finite series.
    pub fn full_sum(&self, s: ComplexPoint) -> Complex64 {
        self.sum_range(0, self.len(), s)
    }

    fn rounding_guard(&self, m: usize, sigma: f64) -> f64 {
        let terms = (self.len() - m) as f64;
        let scale = self.exponents[self.len() - 1] * sigma.abs();
        1.0 + 4.0 * UNIT_ROUNDOFF * (terms + 4.0 + 2.0 * scale)
    }

    /// Bound on `|f(s) − S_m(s)|` on the line `Re s = σ`:
    /// `e^(λ_{m+1}(ε−σ)) Σ_{n>m} |aₙ| e^(−λₙ ε)`.
    ///
    /// The result carries a small relative guard for floating-point evaluation
    /// error. For a truncated series only the stored terms enter, and the bound
    /// is marked heuristic.
    pub fn tail_bound(&self, m: usize, sigma: f64, eps: f64) -> Result<TailBound> {
        if !(eps > 0.0 && eps < sigma) {
            return Err(LabError::domain(format!(
                "tail bound needs 0 < eps < sigma, got eps = {eps}, sigma = {sigma}"
            )));
        }
        if m > self.len() {
            return Err(LabError::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        let heuristic = self.tail == TailKind::Truncated;
        if m == self.len() {
            return Ok(TailBound {
                bound: 0.0,
                heuristic,
            });
        }
        let weighted: NeumaierSum = self.coefficients[m..]
            .iter()
            .zip(&self.exponents[m..])
            .map(|(a, &lambda)| a.norm() * libm::exp(-lambda * eps))
            .collect();
        let lead = libm::exp(self.exponents[m] * (eps - sigma));
        Ok(TailBound {
            bound: lead * weighted.value() * self.rounding_guard(m, sigma),
            heuristic,
        })
    }

    /// Evaluates `f(s)` for `Re s > 0` by the shortest prefix whose tail bound
    /// (with `ε = σ/2`) is within `tol`.
    ///
    /// For a truncated series the candidate prefixes stop at `⌊N/2⌋`, so that
    /// the heuristic tail always sees at least as many stored terms as the
    /// partial sum uses. Running out of candidates is reported through
    /// `tol_met = false`, not as an error.
    pub fn evaluate(&self, s: ComplexPoint, tol: f64) -> Result<EvaluationResult> {
        if !(s.sigma > 0.0) {
            return Err(LabError::domain(format!(
                "evaluate needs Re s > 0, got {}",
                s.sigma
            )));
        }
        if !(tol > 0.0) {
            return Err(LabError::domain("tolerance must be positive"));
        }
        let n = self.len();
        let sigma = s.sigma;
        let eps = 0.5 * sigma;
        let heuristic = self.tail == TailKind::Truncated;
        let max_m = if heuristic { (n / 2).max(1) } else { n };

        // suffix[m] = Σ_{k>m} |a_k| e^(−λ_k ε), accumulated from the far end.
        let mut suffix = alloc::vec![0.0f64; n + 1];
        let mut acc = NeumaierSum::new();
        for k in (0..n).rev() {
            acc.add(self.coefficients[k].norm() * libm::exp(-self.exponents[k] * eps));
            suffix[k] = acc.value();
        }

        let bound_at = |m: usize| -> f64 {
            if m == n {
                0.0
            } else {
                libm::exp(self.exponents[m] * (eps - sigma)) * suffix[m] * self.rounding_guard(m, sigma)
            }
        };

        let mut chosen = None;
        for m in 1..=max_m {
            let b = bound_at(m);
            if b <= tol {
                chosen = Some((m, b));
                break;
            }
        }
        let (m, bound, met) = match chosen {
            Some((m, b)) => (m, b, true),
            None => (max_m, bound_at(max_m), false),
        };
        Ok(EvaluationResult {
            value: self.sum_range(0, m, s),
            terms_used: m,
            tail_bound: bound,
            tol_met: met,
            heuristic,
        })
    }

    /// `f(s)` through the chosen route.
    ///
    /// A finite series is summed exactly at any `s`. Otherwise `Route::Series`
    /// requires `Re s > 0` and a met tolerance.
    pub fn value(&self, s: ComplexPoint, tol: f64, route: Route) -> Result<Complex64> {
        let use_closed = match route {
            Route::ClosedForm => true,
            Route::Auto => self.closed_form.is_some(),
            Route::Series => false,
        };
        if use_closed {
            let cf = self
                .closed_form
                .ok_or_else(|| LabError::domain("no closed form registered for this series"))?;
            return cf.eval(s);
        }
        if self.is_finite() {
            return Ok(self.full_sum(s));
        }
        let r = self.evaluate(s, tol)?;
        if !r.tol_met {
            return Err(LabError::PrefixExhausted {
                tail_bound: r.tail_bound,
                tol,
            });
        }
        Ok(r.value)
    }

    /// Termwise derivative: `aₙ ↦ −λₙ aₙ` over the same exponents.
    pub fn derivative(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .zip(&self.exponents)
            .map(|(a, &lambda)| {
                if lambda == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    a * (-lambda)
                }
            })
            .collect();
        Self {
            exponents: self.exponents.clone(),
            coefficients,
            tail: self.tail,
            closed_form: self.closed_form.and_then(ClosedForm::derivative),
        }
    }

    /// Bridges the Taylor series `Σ c_j z^j` through `z = w·e^(−s)`.
    ///
    /// The result has `λₙ = n − 1` and `aₙ = c_{n−1} w^(n−1)`, so
    /// `S_m(s) = T_{m−1}(w e^(−s))` where `T_p = Σ_{j≤p} c_j z^j`. Zero
    /// coefficients are kept, so gap structure survives the bridge. The
    /// result is marked truncated; use [`Self::with_tail`] for polynomials.
    pub fn from_taylor(coeffs: &[Complex64], w: Complex64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::domain("empty Taylor coefficient list"));
        }
        if (w.norm() - 1.0).abs() > 1e-12 {
            return Err(LabError::domain(format!("|w| = {} is not 1", w.norm())));
        }
        let theta = w.arg();
        let exponents = (0..coeffs.len()).map(|j| j as f64).collect();
        let coefficients = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| bridge_coefficient(c, j, theta))
            .collect();
        Self::new(exponents, coefficients, TailKind::Truncated)
    }

    /// [`Self::from_taylor`] for `(degree, c)` pairs, keeping only nonzero
    /// coefficients. Degrees must be strictly increasing.
    pub fn from_sparse_taylor(terms: &[(usize, Complex64)], w: Complex64, tail: TailKind) -> Result<Self> {
        if (w.norm() - 1.0).abs() > 1e-12 {
            return Err(LabError::domain(format!("|w| = {} is not 1", w.norm())));
        }
        let theta = w.arg();
        let (exponents, coefficients) = terms
            .iter()
            .filter(|(_, c)| !(c.re == 0.0 && c.im == 0.0))
            .map(|&(j, c)| (j as f64, bridge_coefficient(c, j, theta)))
            .unzip();
        Self::new(exponents, coefficients, tail)
    }

    /// `(λ_{m_k+1}/λ_{m_k})_k`.
    pub fn gap_ratio_sequence(&self, sel: &SubsequenceSelector) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(sel.len());
        for (k, &m) in sel.indices().iter().enumerate() {
            if m >= self.len() {
                return Err(LabError::IndexOutOfRange {
                    index: m + 1,
                    len: self.len(),
                });
            }
            let lo = self.exponents[m - 1];
            if lo == 0.0 {
                return Err(LabError::domain(format!(
                    "lambda_(m_k) = 0 at k = {} (m_k = {m})",
                    k + 1
                )));
            }
            out.push(self.exponents[m] / lo);
        }
        Ok(out)
    }

    /// `(inf_n λ_{n+1}/λ_n, flag)` over the stored prefix.
    ///
    /// Every strictly increasing positive prefix has all ratios above 1, so the
    /// flag asks for the infimum to clear `1 + HIGH_INDICES_MARGIN`.
    pub fn high_indices_check(&self) -> Result<(f64, bool)> {
        if self.exponents[0] == 0.0 {
            return Err(LabError::domain("high-indices ratio undefined with lambda_1 = 0"));
        }
        if self.len() < 2 {
            return Err(LabError::domain("high-indices check needs at least two exponents"));
        }
        let inf = self
            .exponents
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(f64::INFINITY, f64::min);
        Ok((inf, inf > 1.0 + HIGH_INDICES_MARGIN))
    }

    /// Maximum of `log(Σ₁^m |aₙ|)/λ_m` over the upper half of the prefix.
    pub fn abscissa_estimate(&self) -> Result<AbscissaEstimate> {
        let n = self.len();
        let start = (n / 2).max(1);
        let mut acc = NeumaierSum::new();
        let mut best: Option<AbscissaEstimate> = None;
        for m in 1..=n {
            acc.add(self.coefficients[m - 1].norm());
            let lambda = self.exponents[m - 1];
            if m < start || lambda == 0.0 || acc.value() == 0.0 {
                continue;
            }
            let v = libm::log(acc.value()) / lambda;
            if best.is_none_or(|b| v > b.value) {
                best = Some(AbscissaEstimate { value: v, at_m: m });
            }
        }
        best.ok_or_else(|| LabError::domain("no index with positive exponent and nonzero mass"))
    }
}

/// Strictly increasing 1-based partial-sum indices `m₁ < m₂ < … < m_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct SubsequenceSelector {
    indices: Vec<usize>,
}

impl SubsequenceSelector {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(LabError::invalid("selector", "no indices"));
        }
        if indices[0] == 0 {
            return Err(LabError::invalid("selector", "indices are 1-based"));
        }
        if let Some(i) = indices.windows(2).position(|w| w[1] <= w[0]) {
            return Err(LabError::invalid(
                "selector",
                format!("indices not strictly increasing at position {}", i + 2),
            ));
        }
        Ok(Self { indices })
    }

    /// `m_k = k` for `k = 1..=n`.
    pub fn full(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    /// `m_k = start + (k−1)·step` for `k = 1..=count`.
    pub fn arithmetic(start: usize, step: usize, count: usize) -> Result<Self> {
        if step == 0 {
            return Err(LabError::invalid("selector", "step must be positive"));
        }
        Self::new((0..count).map(|k| start + k * step).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn last(&self) -> usize {
        self.indices[self.indices.len() - 1]
    }

    pub fn check_against(&self, series: &GeneralDirichletSeries) -> Result<()> {
        let last = self.last();
        if last > series.len() {
            return Err(LabError::IndexOutOfRange {
                index: last,
                len: series.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for SubsequenceSelector {
    type Error = LabError;

    fn try_from(indices: Vec<usize>) -> Result<Self> {
        Self::new(indices)
    }
}

impl From<SubsequenceSelector> for Vec<usize> {
    fn from(sel: SubsequenceSelector) -> Self {
        sel.indices
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{E, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_series() {
        assert!(GeneralDirichletSeries::new(vec![], vec![], TailKind::Finite).is_err());
        assert!(GeneralDirichletSeries::new(vec![0.0, 1.0], vec![c(1.0)], TailKind::Finite).is_err());
        assert!(GeneralDirichletSeries::new(vec![-1.0], vec![c(1.0)], TailKind::Finite).is_err());
        let err = GeneralDirichletSeries::new(vec![0.0, 2.0, 1.0], vec![c(1.0); 3], TailKind::Finite)
            .unwrap_err();
        assert!(alloc::string::ToString::to_string(&err).contains("index 3"));
    }

    #[test]
    fn geometric_partial_sum_vanishes_at_i_pi() {
        let g = GeneralDirichletSeries::geometric(50).unwrap();
        let v = g.partial_sum(4, ComplexPoint::on_axis(PI)).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn constant_and_ordinary_partial_sums() {
        let k = GeneralDirichletSeries::new(vec![0.0], vec![Complex64::new(2.5, -1.0)], TailKind::Finite).unwrap();
        assert_eq!(k.partial_sum(1, ComplexPoint::new(3.0, 7.0)).unwrap(), Complex64::new(2.5, -1.0));
        let z = GeneralDirichletSeries::zeta_shift(0, 10).unwrap();
        assert_eq!(z.partial_sum(2, ComplexPoint::new(0.0, 0.0)).unwrap(), c(2.0));
        assert!(matches!(
            z.partial_sum(11, ComplexPoint::new(1.0, 0.0)),
            Err(LabError::IndexOutOfRange { index: 11, len: 10 })
        ));
        assert!(z.partial_sum(0, ComplexPoint::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn tail_bound_edge_cases() {
        let f = GeneralDirichletSeries::new(vec![1.0, 2.0], vec![c(1.0), c(1.0)], TailKind::Finite).unwrap();
        assert_eq!(f.tail_bound(2, 1.0, 0.5).unwrap().bound, 0.0);
        assert!(f.tail_bound(1, 1.0, 1.0).is_err());
        assert!(f.tail_bound(1, 1.0, 0.0).is_err());
    }

    #[test]
    fn geometric_tail_bound_matches_closed_form() {
        // Σ_{n>m} e^(−nε) = e^(−(m+1)ε)/(1 − e^(−ε)); the stored prefix is long
        // enough that the neglected part is below f64 resolution.
        let g = GeneralDirichletSeries::geometric(200).unwrap();
        let (m, sigma, eps) = (10usize, 1.0, 0.5);
        let b = g.tail_bound(m, sigma, eps).unwrap();
        let geometric_tail = libm::exp(-(m as f64 + 1.0) * eps) / (1.0 - libm::exp(-eps));
        let expected = libm::exp((m as f64 + 1.0) * (eps - sigma)) * geometric_tail;
        assert!(b.heuristic);
        assert!(((b.bound - expected) / expected).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_nonincreasing_in_sigma() {
        let g = GeneralDirichletSeries::geometric(100).unwrap();
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let sigma = 0.6 + 0.1 * i as f64;
            let b = g.tail_bound(5, sigma, 0.5).unwrap().bound;
            assert!(b <= prev);
            prev = b;
        }
    }

    #[test]
    fn evaluate_geometric_at_one() {
        let g = GeneralDirichletSeries::geometric(200).unwrap();
        let r = g.evaluate(ComplexPoint::new(1.0, 0.0), 1e-10).unwrap();
        assert!(r.tol_met);
        assert!((r.value.re - 1.0 / (E - 1.0)).abs() <= 1e-10);
        assert!(r.tail_bound <= 1e-10);
    }

    #[test]
    fn evaluate_finite_series_is_exact() {
        let f = GeneralDirichletSeries::new(vec![0.0, 1.0, 3.0], vec![c(1.0), c(-2.0), c(0.5)], TailKind::Finite)
            .unwrap();
        let s = ComplexPoint::new(1.0, 0.0);
        let r = f.evaluate(s, 1e-300).unwrap();
        assert_eq!(r.terms_used, 3);
        assert_eq!(r.tail_bound, 0.0);
        assert_eq!(r.value, f.full_sum(s));
    }

    #[test]
    fn evaluate_reports_exhausted_prefix() {
        let g = GeneralDirichletSeries::geometric(20).unwrap();
        let r = g.evaluate(ComplexPoint::new(0.01, 0.0), 1e-6).unwrap();
        assert!(!r.tol_met);
        assert!(r.tail_bound > 1e-6);
        assert!(matches!(
            g.value(ComplexPoint::new(0.01, 0.0), 1e-6, Route::Series),
            Err(LabError::PrefixExhausted { .. })
        ));
        assert!(g.evaluate(ComplexPoint::new(0.0, 1.0), 1e-6).is_err());
        assert!(g.evaluate(ComplexPoint::new(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn derivative_of_geometric_at_one() {
        let g = GeneralDirichletSeries::geometric(400).unwrap();
        let d = g.derivative();
        let r = d.evaluate(ComplexPoint::new(1.0, 0.0), 1e-12).unwrap();
        let em1 = libm::exp(-1.0);
        let expected = -em1 / ((1.0 - em1) * (1.0 - em1));
        assert!((r.value.re - expected).abs() < 1e-12);
        assert_eq!(d.closed_form(), Some(ClosedForm::GeometricDerivative));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let k = GeneralDirichletSeries::new(vec![0.0], vec![c(3.0)], TailKind::Finite).unwrap();
        assert_eq!(k.derivative().coefficients(), &[c(0.0)]);
    }

    #[test]
    fn taylor_bridge_examples() {
        let z = GeneralDirichletSeries::from_taylor(&[c(0.0), c(1.0)], c(1.0)).unwrap();
        assert_eq!(z.exponents(), &[0.0, 1.0]);
        assert_eq!(z.coefficients()[1], c(1.0));
        let geo = GeneralDirichletSeries::from_taylor(&[c(1.0); 5], c(1.0)).unwrap();
        assert_eq!(geo.exponents(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        let gappy = GeneralDirichletSeries::from_taylor(&[c(1.0), c(0.0), c(0.0), c(2.0)], Complex64::i()).unwrap();
        assert_eq!(gappy.coefficients()[1], c(0.0));
        assert_eq!(gappy.coefficients()[2], c(0.0));
        assert!(GeneralDirichletSeries::from_taylor(&[], c(1.0)).is_err());
        assert!(GeneralDirichletSeries::from_taylor(&[c(1.0)], c(1.1)).is_err());
    }

    #[test]
    fn gap_ratios() {
        let lin = GeneralDirichletSeries::new((1..=50).map(|n| n as f64).collect(), vec![c(1.0); 50], TailKind::Finite)
            .unwrap();
        let sel = SubsequenceSelector::arithmetic(2, 2, 10).unwrap();
        let r = lin.gap_ratio_sequence(&sel).unwrap();
        for (k, ratio) in r.iter().enumerate() {
            let m = 2.0 * (k as f64 + 1.0);
            assert_eq!(*ratio, (m + 1.0) / m);
        }
        let fact = GeneralDirichletSeries::factorial_lacunary(20).unwrap();
        let r = fact.gap_ratio_sequence(&SubsequenceSelector::full(19).unwrap()).unwrap();
        for (k, ratio) in r.iter().enumerate() {
            assert!((ratio - (k as f64 + 2.0)).abs() < 1e-9);
        }
        let with_zero = GeneralDirichletSeries::new(vec![0.0, 1.0, 2.0], vec![c(1.0); 3], TailKind::Finite).unwrap();
        let err = with_zero
            .gap_ratio_sequence(&SubsequenceSelector::new(vec![1, 2]).unwrap())
            .unwrap_err();
        assert!(alloc::string::ToString::to_string(&err).contains("k = 1"));
    }

    #[test]
    fn ordinary_gap_ratios_near_one() {
        // m_k = 2^(2^k) for k = 1..4 → 4, 16, 256, 65536
        let z = GeneralDirichletSeries::zeta_shift(1, 65_537).unwrap();
        let sel = SubsequenceSelector::new(vec![4, 16, 256, 65_536]).unwrap();
        let r = z.gap_ratio_sequence(&sel).unwrap();
        for (&m, ratio) in sel.indices().iter().zip(&r) {
            let mf = m as f64;
            let expected = libm::log(mf + 1.0) / libm::log(mf);
            assert!((ratio - expected).abs() < 1e-15);
            assert!(*ratio > 1.0 && *ratio < 1.2);
        }
    }

    #[test]
    fn high_indices() {
        let pow2 = GeneralDirichletSeries::power_exponents(2.0, 1.0 / 3.0, 30).unwrap();
        assert_eq!(pow2.high_indices_check().unwrap(), (2.0, true));
        let lin = GeneralDirichletSeries::new((1..=100).map(|n| n as f64).collect(), vec![c(1.0); 100], TailKind::Finite)
            .unwrap();
        assert_eq!(lin.high_indices_check().unwrap(), (100.0 / 99.0, true));
        let log = GeneralDirichletSeries::zeta_shift(1, 10_000).unwrap();
        assert!(log.high_indices_check().is_err());
        let log_shifted = GeneralDirichletSeries::new(
            (2..=10_001).map(|n| libm::log(n as f64)).collect(),
            vec![c(1.0); 10_000],
            TailKind::Truncated,
        )
        .unwrap();
        let (inf, flag) = log_shifted.high_indices_check().unwrap();
        let expected = libm::log(10_001.0) / libm::log(10_000.0);
        assert!((inf - expected).abs() < 1e-15);
        assert!(!flag);
    }

    #[test]
    fn abscissa_diagnostic() {
        let g = GeneralDirichletSeries::geometric(1000).unwrap();
        let est = g.abscissa_estimate().unwrap();
        // log(m)/m at the midpoint of the prefix
        assert_eq!(est.at_m, 500);
        assert!((est.value - libm::log(500.0) / 500.0).abs() < 1e-15);
    }

    #[test]
    fn selector_validation() {
        assert!(SubsequenceSelector::new(vec![]).is_err());
        assert!(SubsequenceSelector::new(vec![0, 1]).is_err());
        assert!(SubsequenceSelector::new(vec![1, 3, 3]).is_err());
        assert!(SubsequenceSelector::arithmetic(1, 0, 3).is_err());
        let g = GeneralDirichletSeries::geometric(5).unwrap();
        assert!(SubsequenceSelector::full(6).unwrap().check_against(&g).is_err());
    }
}
