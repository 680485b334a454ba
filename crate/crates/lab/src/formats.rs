//! Series interchange format.
//!
//! ```json
//! {"exponents": [...], "coefficients": [[re, im], ...], "finite": true, "closed_form": null}
//! ```
//!
//! Numbers are written with 17 significant digits.

use dirichlet_lab_core::{ClosedForm, Complex64, GeneralDirichletSeries, LabError, TailKind};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    #[serde(serialize_with = "seventeen_digits")]
    pub exponents: Vec<f64>,
    #[serde(serialize_with = "seventeen_digit_pairs")]
    pub coefficients: Vec<[f64; 2]>,
    pub finite: bool,
    #[serde(default)]
    pub closed_form: Option<String>,
}

fn number(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() { format!("{x:.16e}") } else { "null".to_owned() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

fn seventeen_digits<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| number(x)))
}

fn seventeen_digit_pairs<S: Serializer>(xs: &[[f64; 2]], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|[a, b]| [number(*a), number(*b)]))
}

impl SeriesFile {
    pub fn from_series(series: &GeneralDirichletSeries) -> Self {
        Self {
            exponents: series.exponents().to_vec(),
            coefficients: series.coefficients().iter().map(|c| [c.re, c.im]).collect(),
            finite: series.is_finite(),
            closed_form: series.closed_form().map(|c| c.to_string()),
        }
    }

    pub fn to_series(&self) -> Result<GeneralDirichletSeries, LabError> {
        let closed_form = self
            .closed_form
            .as_deref()
            .map(str::parse::<ClosedForm>)
            .transpose()?;
        let tail = if self.finite { TailKind::Finite } else { TailKind::Truncated };
        let coefficients = self.coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(GeneralDirichletSeries::new(self.exponents.clone(), coefficients, tail)?.with_closed_form(closed_form))
    }
}

pub fn series_to_json(series: &GeneralDirichletSeries) -> String {
    serde_json::to_string(&SeriesFile::from_series(series)).expect("series serializes")
}
