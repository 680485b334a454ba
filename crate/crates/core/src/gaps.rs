//! Pure Ostrowski gaps in Taylor coefficient sequences.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Zero runs `c_n = 0` for `p_k + 1 ≤ n ≤ q_k` (0-based Taylor indices).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OstrowskiGapReport {
    pub pairs: Vec<(usize, usize)>,
    pub ratios: Vec<f64>,
}

impl OstrowskiGapReport {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The `p_k`, i.e. the degrees of the Taylor partial sums `T_{p_k}` that
    /// end just before each gap.
    pub fn gap_starts(&self) -> Vec<usize> {
        self.pairs.iter().map(|&(p, _)| p).collect()
    }
}

/// Finds maximal runs of exact zeros closed by a later nonzero coefficient,
/// keeping those with `q/p ≥ ratio_min`.
///
/// A run must start after a nonzero coefficient at index `p ≥ 1`; a leading run
/// from index 0 and an open trailing run are not gaps. Exact zeros only.
pub fn detect_pure_ostrowski(coeffs: &[Complex64], ratio_min: f64) -> Result<OstrowskiGapReport> {
    let is_zero = |c: &Complex64| c.re == 0.0 && c.im == 0.0;
    let support = coeffs.iter().enumerate().filter(|(_, c)| !is_zero(c)).map(|(n, _)| n);
    scan(support, ratio_min)
}

/// [`detect_pure_ostrowski`] for coefficients given as `(degree, c)` pairs with
/// strictly increasing degrees; unlisted degrees are zero.
pub fn detect_pure_ostrowski_sparse(terms: &[(usize, Complex64)], ratio_min: f64) -> Result<OstrowskiGapReport> {
    if let Some(i) = terms.windows(2).position(|w| w[1].0 <= w[0].0) {
        return Err(LabError::invalid(
            "sparse coefficients",
            alloc::format!("degrees not strictly increasing at entry {}", i + 2),
        ));
    }
    let support = terms
        .iter()
        .filter(|(_, c)| !(c.re == 0.0 && c.im == 0.0))
        .map(|&(n, _)| n);
    scan(support, ratio_min)
}

fn scan(support: impl Iterator<Item = usize>, ratio_min: f64) -> Result<OstrowskiGapReport> {
    if !(ratio_min > 1.0) {
        return Err(LabError::domain("ratio_min must exceed 1"));
    }
    let mut pairs = Vec::new();
    let mut ratios = Vec::new();
    let mut last_nonzero: Option<usize> = None;
    for n in support {
        if let Some(p) = last_nonzero {
            if n > p + 1 && p >= 1 {
                let q = n - 1;
                let ratio = q as f64 / p as f64;
                if ratio >= ratio_min {
                    pairs.push((p, q));
                    ratios.push(ratio);
                }
            }
        }
        last_nonzero = Some(n);
    }
    if last_nonzero.is_none() {
        return Err(LabError::domain("all coefficients are zero"));
    }
    Ok(OstrowskiGapReport { pairs, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn support(indices: &[usize], len: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        for &i in indices {
            v[i] = Complex64::new(1.0, 0.0);
        }
        v
    }

    #[test]
    fn sparse_matches_dense() {
        let dense = support(&[1, 2, 4, 16, 256], 300);
        let sparse: Vec<(usize, Complex64)> = [1, 2, 4, 16, 256].iter().map(|&n| (n, Complex64::new(1.0, 0.0))).collect();
        assert_eq!(
            detect_pure_ostrowski_sparse(&sparse, 1.2).unwrap(),
            detect_pure_ostrowski(&dense, 1.2).unwrap()
        );
        assert!(detect_pure_ostrowski_sparse(&[(3, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))], 2.0).is_err());
    }

    #[test]
    fn dyadic_tower_support() {
        let coeffs = support(&[1, 2, 4, 16, 256], 257);
        let r = detect_pure_ostrowski(&coeffs, 1.01).unwrap();
        assert_eq!(r.pairs, vec![(2, 3), (4, 15), (16, 255)]);
        assert_eq!(r.ratios, vec![1.5, 3.75, 255.0 / 16.0]);
    }

    #[test]
    fn no_zeros_no_gaps() {
        let coeffs = vec![Complex64::new(1.0, 1.0); 10];
        assert!(detect_pure_ostrowski(&coeffs, 2.0).unwrap().is_empty());
    }

    #[test]
    fn ratio_filter() {
        let coeffs = support(&[1, 2, 4, 16, 256], 257);
        let r = detect_pure_ostrowski(&coeffs, 10.0).unwrap();
        assert_eq!(r.pairs, vec![(16, 255)]);
    }

    #[test]
    fn errors() {
        assert!(detect_pure_ostrowski(&[Complex64::new(0.0, 0.0); 4], 2.0).is_err());
        assert!(detect_pure_ostrowski(&[Complex64::new(1.0, 0.0)], 1.0).is_err());
    }

    #[test]
    fn leading_and_trailing_runs_are_not_gaps() {
        let coeffs = support(&[3, 4], 20);
        assert!(detect_pure_ostrowski(&coeffs, 1.01).unwrap().is_empty());
    }
}
