//! `fit` subcommand: scaling fits and peak scans over a sweep CSV.

use crate::error::{CliError, Result};
use crate::sweep::{format_f64, SweepResult, SweepRow};
use fidmet_core::analysis::{fit_log_divergence, fit_power_law, peak_scan, Curve, FitModel, PeakScan, ScalingFit};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FitKind {
    /// `g = A ln|β_c/β - 1| + B` in `param1`.
    Log,
    /// `g = A x^p` with `x = |param1 - critical|`.
    Power,
    /// Peak of each size's curve, then height against ln L.
    Peaks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRequest {
    pub kind: FitKind,
    pub observable: String,
    /// Restrict to one lattice size; required when the CSV holds several
    /// (except for peak scans).
    pub l: Option<usize>,
    pub critical: f64,
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitReport {
    Scaling(ScalingFit),
    Peaks(PeakScan),
}

fn selected<'a>(result: &'a SweepResult, req: &'a FitRequest) -> impl Iterator<Item = &'a SweepRow> + 'a {
    result
        .rows_for(&req.observable)
        .filter(move |r| !r.is_error() && req.l.is_none_or(|l| r.l == l))
}

/// Mean of repeated rows at the same `(L, param1)` (several seeds), with
/// the combined standard error.
fn averaged(rows: &[&SweepRow]) -> BTreeMap<usize, Vec<(f64, f64, f64)>> {
    let mut groups: BTreeMap<(usize, u64), Vec<&SweepRow>> = BTreeMap::new();
    for r in rows {
        // order-preserving key for nonnegative and negative floats alike
        let bits = r.param1.to_bits();
        let key = if r.param1.is_sign_negative() { !bits } else { bits | (1 << 63) };
        groups.entry((r.l, key)).or_default().push(r);
    }
    let mut out: BTreeMap<usize, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for ((l, _), g) in groups {
        let n = g.len() as f64;
        let mean = g.iter().map(|r| r.value).sum::<f64>() / n;
        let err = g.iter().map(|r| r.std_error * r.std_error).sum::<f64>().sqrt() / n;
        out.entry(l).or_default().push((g[0].param1, mean, err));
    }
    out
}

pub fn fit_sweep(result: &SweepResult, req: &FitRequest) -> Result<FitReport> {
    let rows: Vec<&SweepRow> = selected(result, req).collect();
    if rows.is_empty() {
        return Err(CliError::Usage(format!(
            "no rows with observable `{}`{}",
            req.observable,
            req.l.map(|l| format!(" at L = {l}")).unwrap_or_default()
        )));
    }
    let by_size = averaged(&rows);
    if req.kind == FitKind::Peaks {
        let curves: Vec<Curve> = by_size.into_iter().map(|(l, pts)| Curve::new(l, pts)).collect();
        return Ok(FitReport::Peaks(peak_scan(&curves)?));
    }
    if by_size.len() > 1 {
        return Err(CliError::Usage(format!(
            "rows span {} lattice sizes; pick one with --L",
            by_size.len()
        )));
    }
    let pts = by_size.into_values().next().unwrap_or_default();
    let fit = match req.kind {
        FitKind::Log => {
            let samples: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.1)).collect();
            fit_log_divergence(&samples, req.critical, req.window)?
        }
        _ => {
            let samples: Vec<(f64, f64)> = pts.iter().map(|p| ((p.0 - req.critical).abs(), p.1)).collect();
            fit_power_law(&samples, req.window)?
        }
    };
    Ok(FitReport::Scaling(fit))
}

impl FitReport {
    /// Plain `key = value` text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            FitReport::Scaling(f) => {
                let model = match f.model {
                    FitModel::LogDivergence => "log_divergence",
                    FitModel::PowerLaw => "power_law",
                };
                let _ = writeln!(s, "model = {model}");
                let _ = writeln!(s, "amplitude = {}", format_f64(f.amplitude));
                let _ = writeln!(s, "amplitude_err = {}", format_f64(f.amplitude_err));
                if f.model == FitModel::LogDivergence {
                    let _ = writeln!(s, "offset = {}", format_f64(f.offset));
                    let _ = writeln!(s, "offset_err = {}", format_f64(f.offset_err));
                }
                if let (Some(p), Some(e)) = (f.exponent, f.exponent_err) {
                    let _ = writeln!(s, "exponent = {}", format_f64(p));
                    let _ = writeln!(s, "exponent_err = {}", format_f64(e));
                }
                let _ = writeln!(s, "r_squared = {}", format_f64(f.r_squared));
                let _ = writeln!(s, "n_points = {}", f.n_points);
                let _ = writeln!(s, "window = {}:{}", format_f64(f.window.0), format_f64(f.window.1));
                for w in &f.warnings {
                    let _ = writeln!(s, "warning = {w:?}");
                }
            }
            FitReport::Peaks(scan) => {
                let _ = writeln!(s, "model = peak_scan");
                for p in &scan.peaks {
                    let _ = writeln!(
                        s,
                        "peak.L{} = {} +- {} at {} +- {}",
                        p.l,
                        format_f64(p.height),
                        format_f64(p.height_err),
                        format_f64(p.x),
                        format_f64(p.x_err)
                    );
                }
                let _ = writeln!(s, "slope_vs_lnL = {}", format_f64(scan.fit.slope));
                let _ = writeln!(s, "slope_err = {}", format_f64(scan.fit.slope_err));
                let _ = writeln!(s, "intercept = {}", format_f64(scan.fit.intercept));
                let _ = writeln!(s, "intercept_err = {}", format_f64(scan.fit.intercept_err));
                let _ = writeln!(s, "r_squared = {}", format_f64(scan.fit.r_squared));
            }
        }
        s
    }

    /// Peak rows (`peak_height` and `peak_location`) in the sweep schema,
    /// for the `peak_scaling` plot.
    pub fn peak_rows(&self, template: &SweepRow) -> Option<SweepResult> {
        let FitReport::Peaks(scan) = self else {
            return None;
        };
        let mut rows = Vec::new();
        for p in &scan.peaks {
            let base = SweepRow {
                l: p.l,
                param1: p.x,
                param2: None,
                method: template.method,
                seed: None,
                ..template.clone()
            };
            rows.push(SweepRow {
                observable: "peak_height".into(),
                value: p.height,
                std_error: p.height_err,
                ..base.clone()
            });
            rows.push(SweepRow {
                observable: "peak_location".into(),
                value: p.x,
                std_error: p.x_err,
                ..base
            });
        }
        Some(SweepResult { rows })
    }
}

/// First usable row, used as a template for derived rows.
pub fn template_row(result: &SweepResult, observable: &str) -> Option<SweepRow> {
    result
        .rows_for(observable)
        .find(|r| !r.is_error())
        .cloned()
}
