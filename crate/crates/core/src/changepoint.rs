//! Piecewise-linear change detection on sampled correlation curves, plus the
//! autocorrelation probe used to spot coupling-period oscillations.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChangePointError {
    #[error("change detection needs at least 8 samples, got {0}")]
    TooFewPoints(usize),
    #[error("time and value series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

/// How a change point was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionMethod {
    TwoSegmentFit,
    Analytic,
}

/// A detected change in decay behavior.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuddenChangeReport {
    /// Estimated change time (sub-grid, from the intersection of the local
    /// segment fits).
    pub t_star: f64,
    /// Slope of the regime before the change (transition sample excluded).
    pub slope_before: f64,
    /// Slope of the regime after the change (transition zone excluded).
    pub slope_after: f64,
    pub method: DetectionMethod,
    /// Total squared residual of the winning two-segment fit.
    pub residual: f64,
}

/// Detector outcome: either a change or an explicit no-change answer.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum SuddenChangeDetection {
    Change(SuddenChangeReport),
    NoChange { residual: f64 },
}

impl SuddenChangeDetection {
    pub fn report(&self) -> Option<&SuddenChangeReport> {
        match self {
            SuddenChangeDetection::Change(r) => Some(r),
            SuddenChangeDetection::NoChange { .. } => None,
        }
    }
}

/// Ordinary least squares line fit; returns (intercept, slope, rss).
fn fit_line(t: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let mut stt = 0.0;
    let mut sty = 0.0;
    for (ti, yi) in t.iter().zip(y) {
        stt += (ti - tm) * (ti - tm);
        sty += (ti - tm) * (yi - ym);
    }
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    let intercept = ym - slope * tm;
    let mut rss = 0.0;
    for (ti, yi) in t.iter().zip(y) {
        let r = yi - (intercept + slope * ti);
        rss += r * r;
    }
    (intercept, slope, rss)
}

/// Minimum relative residual improvement of the two-segment fit over a single
/// line for a change to be reported.
const IMPROVEMENT_THRESHOLD: f64 = 0.05;
/// Window (in samples, each side of the breakpoint) for the local fits whose
/// intersection gives the sub-grid change time.
const REFINE_WINDOW: usize = 8;

/// Two-segment least-squares change detection on a sampled curve.
///
/// Every interior breakpoint is scanned; the two segments share the
/// breakpoint sample. A change is reported only when the best split improves
/// on the single-line residual by at least 5%; a series that is already flat
/// to rounding noise is a no-change outcome as well.
pub fn detect_in_series(
    times: &[f64],
    values: &[f64],
) -> Result<SuddenChangeDetection, ChangePointError> {
    let n = times.len();
    if values.len() != n {
        return Err(ChangePointError::LengthMismatch(n, values.len()));
    }
    if n < 8 {
        return Err(ChangePointError::TooFewPoints(n));
    }

    let (_, _, rss_single) = fit_line(times, values);
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let noise_floor = n as f64 * (1e-10 * scale).powi(2) + f64::MIN_POSITIVE;
    if rss_single <= noise_floor {
        return Ok(SuddenChangeDetection::NoChange {
            residual: rss_single,
        });
    }

    let mut best_k = 0;
    let mut best_rss = f64::INFINITY;
    for k in 2..=(n - 4) {
        let (_, _, r1) = fit_line(&times[..=k], &values[..=k]);
        let (_, _, r2) = fit_line(&times[k..], &values[k..]);
        if r1 + r2 < best_rss {
            best_rss = r1 + r2;
            best_k = k;
        }
    }

    if (rss_single - best_rss) / rss_single < IMPROVEMENT_THRESHOLD {
        return Ok(SuddenChangeDetection::NoChange {
            residual: rss_single,
        });
    }

    // sub-grid refinement: intersect line fits over short windows on each
    // side of the breakpoint, clamped to the neighboring samples
    let k = best_k;
    let lo = k.saturating_sub(REFINE_WINDOW);
    let hi = (k + REFINE_WINDOW).min(n - 1);
    let (b1, s1, _) = fit_line(&times[lo..=k], &values[lo..=k]);
    let (b2, s2, _) = fit_line(&times[k..=hi], &values[k..=hi]);
    let t_star = if (s1 - s2).abs() > 1e-300 {
        ((b2 - b1) / (s1 - s2)).clamp(times[k - 1], times[k + 1])
    } else {
        times[k]
    };

    // regime slopes with the transition sample(s) excluded
    let (_, slope_before, _) = fit_line(&times[..k], &values[..k]);
    let (_, slope_after, _) = fit_line(&times[k + 2..], &values[k + 2..]);

    Ok(SuddenChangeDetection::Change(SuddenChangeReport {
        t_star,
        slope_before,
        slope_after,
        method: DetectionMethod::TwoSegmentFit,
        residual: best_rss,
    }))
}

/// Detrends with a centered moving average that annihilates a `lag`-periodic
/// component exactly (half weights at both ends), then returns the
/// autocorrelation of the residual at `lag` minus its flanking lags.
///
/// A clearly positive score (the residual autocorrelation peaks at `lag`)
/// flags an oscillation of that period; smooth curves come out near or below
/// zero. Returns `None` when the residual is flat to rounding noise or the
/// series is too short.
pub fn oscillation_lag_score(values: &[f64], lag: usize) -> Option<f64> {
    let n = values.len();
    if lag < 2 || n < 3 * lag + 2 {
        return None;
    }
    // centered 2xL moving average, kernel [1, 2, ..., 2, 1] / (2L)
    let half = lag / 2;
    let mut resid = Vec::with_capacity(n - lag);
    for i in half..(n - (lag - half)) {
        let mut acc = values[i - half] + values[i + lag - half];
        for j in 1..lag {
            acc += 2.0 * values[i - half + j];
        }
        resid.push(values[i] - acc / (2.0 * lag as f64));
    }
    let m = resid.len();
    let mean = resid.iter().sum::<f64>() / m as f64;
    for r in resid.iter_mut() {
        *r -= mean;
    }
    let var: f64 = resid.iter().map(|r| r * r).sum();
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if var <= m as f64 * (1e-12 * scale).powi(2) + f64::MIN_POSITIVE {
        return None;
    }
    let auto = |k: usize| -> f64 {
        resid[..m - k].iter().zip(&resid[k..]).map(|(a, b)| a * b).sum::<f64>() / var
    };
    Some(auto(lag) - auto(lag - 1).max(auto(lag + 1)))
}
