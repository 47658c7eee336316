//! Least-squares fits of critical scaling laws.

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `g = A ln|β_c/β - 1| + B`.
    LogDivergence,
    /// `g = A x^p`, fitted on log–log axes.
    PowerLaw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWarning {
    /// The response has no variance; R² is reported as 0.
    FlatResponse,
}

/// Ordinary least squares `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub slope_err: f64,
    pub intercept: f64,
    pub intercept_err: f64,
    /// 0 when the response is constant.
    pub r_squared: f64,
    pub n_points: usize,
}

/// OLS with standard errors from the residual variance (n - 2 dof). Points
/// are sorted first so the result does not depend on input order.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {}", points.len())));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Fit("non-finite sample".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n = pts.len() as f64;
    let mx = compensated_sum(pts.iter().map(|p| p.0)) / n;
    let my = compensated_sum(pts.iter().map(|p| p.1)) / n;
    let sxx = compensated_sum(pts.iter().map(|p| (p.0 - mx).powi(2)));
    let sxy = compensated_sum(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)));
    let syy = compensated_sum(pts.iter().map(|p| (p.1 - my).powi(2)));
    if sxx == 0.0 {
        return Err(Error::Fit("degenerate design: all regressor values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr = compensated_sum(pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)));
    let dof = pts.len().saturating_sub(2);
    let s2 = if dof > 0 { ssr / dof as f64 } else { 0.0 };
    let slope_err = (s2 / sxx).sqrt();
    let sum_x2 = compensated_sum(pts.iter().map(|p| p.0 * p.0));
    let intercept_err = (s2 * sum_x2 / (n * sxx)).sqrt();
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (1.0 - ssr / syy).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        slope_err,
        intercept,
        intercept_err,
        r_squared,
        n_points: pts.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub model: FitModel,
    pub amplitude: f64,
    pub amplitude_err: f64,
    /// Additive constant `B` of the log fit; 0 for the power law.
    pub offset: f64,
    pub offset_err: f64,
    /// Power-law exponent `p`; `None` for the log fit.
    pub exponent: Option<f64>,
    pub exponent_err: Option<f64>,
    pub r_squared: f64,
    pub n_points: usize,
    /// Regressor interval the samples were restricted to.
    pub window: (f64, f64),
    pub warnings: Vec<FitWarning>,
}

impl ScalingFit {
    /// `|p - expected| / σ_p` for a power-law fit.
    pub fn exponent_z_score(&self, expected: f64) -> Option<f64> {
        let (p, e) = (self.exponent?, self.exponent_err?);
        Some(if e == 0.0 {
            if p == expected {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (p - expected).abs() / e
        })
    }
}

fn in_window(x: f64, window: (f64, f64)) -> bool {
    x >= window.0 && x <= window.1
}

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0 <= window.1) {
        return Err(Error::Fit(format!("empty fit window {window:?}")));
    }
    Ok(())
}

fn flat_warning(points: &[(f64, f64)]) -> Vec<FitWarning> {
    let first = points[0].1;
    if points.iter().all(|p| p.1 == first) {
        vec![FitWarning::FlatResponse]
    } else {
        Vec::new()
    }
}

/// Fit `g = A ln|β_c/β - 1| + B` to the `(β, g)` samples inside `window`.
pub fn fit_log_divergence(samples: &[(f64, f64)], beta_c: f64, window: (f64, f64)) -> Result<ScalingFit> {
    check_window(window)?;
    if in_window(beta_c, window) {
        return Err(Error::Fit(format!(
            "fit window {window:?} contains the critical point {beta_c}"
        )));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(b, _)| in_window(*b, window))
        .map(|&(b, g)| ((beta_c / b - 1.0).abs().ln(), g))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 samples in the window, got {}", pts.len())));
    }
    if pts.iter().any(|p| !p.0.is_finite()) {
        return Err(Error::Fit("sample at β = 0 or β = β_c".into()));
    }
    let lf = linear_fit(&pts)?;
    Ok(ScalingFit {
        model: FitModel::LogDivergence,
        amplitude: lf.slope,
        amplitude_err: lf.slope_err,
        offset: lf.intercept,
        offset_err: lf.intercept_err,
        exponent: None,
        exponent_err: None,
        r_squared: lf.r_squared,
        n_points: lf.n_points,
        window,
        warnings: flat_warning(&pts),
    })
}

/// Fit `g = A x^p` to `(x, g)` samples inside `window` (x = distance to the
/// critical line).
pub fn fit_power_law(samples: &[(f64, f64)], window: (f64, f64)) -> Result<ScalingFit> {
    check_window(window)?;
    if !(window.0 > 0.0) {
        return Err(Error::Fit("power-law window must exclude the critical point (x > 0)".into()));
    }
    let selected: Vec<(f64, f64)> = samples.iter().copied().filter(|(x, _)| in_window(*x, window)).collect();
    if selected.iter().any(|&(x, g)| !(x > 0.0) || !(g > 0.0)) {
        return Err(Error::Fit("power-law fit needs positive distances and values".into()));
    }
    if selected.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 samples in the window, got {}",
            selected.len()
        )));
    }
    let pts: Vec<(f64, f64)> = selected.iter().map(|&(x, g)| (x.ln(), g.ln())).collect();
    let lf = linear_fit(&pts)?;
    let amplitude = lf.intercept.exp();
    Ok(ScalingFit {
        model: FitModel::PowerLaw,
        amplitude,
        amplitude_err: amplitude * lf.intercept_err,
        offset: 0.0,
        offset_err: 0.0,
        exponent: Some(lf.slope),
        exponent_err: Some(lf.slope_err),
        r_squared: lf.r_squared,
        n_points: lf.n_points,
        window,
        warnings: flat_warning(&pts),
    })
}
