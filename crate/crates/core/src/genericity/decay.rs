use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::experiment::ExperimentReport;

/// What to do with rows that observed no failures, where `ln(1 - p)` is
/// undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroPolicy {
    /// Leave the row out of the fit.
    #[default]
    Exclude,
    /// Use half a failure, `0.5 / N`, in place of zero.
    HalfCount,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    /// Least-squares slope of `ln(1 - p)` against `t`; `None` when vacuous.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// `(t, ln(1 - p))` for each row used.
    pub points: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
    /// Every proportion was 1, so there is no decay to measure.
    pub vacuous: bool,
    pub note: String,
}

/// Fits `ln(1 - p_t) ≈ a + s t` by least squares; needs at least three usable
/// rows unless every proportion is 1.
pub fn fit_decay(report: &ExperimentReport, policy: ZeroPolicy) -> Result<DecayFit> {
    let rows: Vec<(f64, f64, u64)> = report
        .rows
        .iter()
        .map(|r| (r.t as f64, r.proportion, r.total))
        .collect();
    fit_decay_points(&rows, policy)
}

/// Same fit on raw `(t, proportion, sample size)` rows.
pub fn fit_decay_points(rows: &[(f64, f64, u64)], policy: ZeroPolicy) -> Result<DecayFit> {
    if !rows.is_empty() && rows.iter().all(|&(_, p, _)| p >= 1.0) {
        return Ok(DecayFit {
            slope: None,
            intercept: None,
            points: Vec::new(),
            residuals: Vec::new(),
            vacuous: true,
            note: "every proportion is 1; decay is vacuous".into(),
        });
    }
    let mut zeros = 0;
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|&(t, p, n)| {
            let failure = 1.0 - p;
            if failure > 0.0 {
                Some((t, failure.ln()))
            } else {
                zeros += 1;
                match policy {
                    ZeroPolicy::Exclude => None,
                    ZeroPolicy::HalfCount => Some((t, (0.5 / n.max(1) as f64).ln())),
                }
            }
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 rows with observed failures, have {}",
            points.len()
        )));
    }
    let k = points.len() as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_t).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all t values are equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_t) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_t;
    let residuals = points.iter().map(|p| p.1 - (intercept + slope * p.0)).collect();
    let mut note = if slope < 0.0 {
        "negative slope: failures decay exponentially in t".to_string()
    } else {
        "no exponential decay detected".to_string()
    };
    if zeros > 0 {
        let how = match policy {
            ZeroPolicy::Exclude => "excluded",
            ZeroPolicy::HalfCount => "counted as half a failure",
        };
        note.push_str(&format!("; {zeros} row(s) without failures {how}"));
    }
    Ok(DecayFit {
        slope: Some(slope),
        intercept: Some(intercept),
        points,
        residuals,
        vacuous: false,
        note,
    })
}
