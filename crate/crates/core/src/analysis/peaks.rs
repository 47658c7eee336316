//! Finite-size peak analysis: locate the maximum of each curve and regress
//! peak height on `ln L`.

use super::fit::{linear_fit, LinearFit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    /// Standard error of `y` (0 for exact data).
    pub sigma: f64,
}

/// One lattice size's sampled curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub l: usize,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    pub fn new(l: usize, points: impl IntoIterator<Item = (f64, f64, f64)>) -> Self {
        Self {
            l,
            points: points
                .into_iter()
                .map(|(x, y, sigma)| CurvePoint { x, y, sigma })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub l: usize,
    pub x: f64,
    pub x_err: f64,
    pub height: f64,
    pub height_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakScan {
    /// Peaks in increasing L.
    pub peaks: Vec<Peak>,
    /// Height regressed on `ln L`.
    pub fit: LinearFit,
}

/// Vertex `(x*, y*)` of the parabola through three points.
fn parabola_vertex(p: [(f64, f64); 3]) -> Option<(f64, f64)> {
    let [(x0, y0), (x1, y1), (x2, y2)] = p;
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return None;
    }
    let xv = x1 - 0.5 * num / den;
    // Lagrange form evaluated at the vertex
    let l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    Some((xv, y0 * l0 + y1 * l1 + y2 * l2))
}

fn locate_peak(curve: &Curve) -> Result<Peak> {
    if curve.points.len() < 5 {
        return Err(Error::Fit(format!(
            "curve for L = {} has {} points, need at least 5",
            curve.l,
            curve.points.len()
        )));
    }
    let mut pts = curve.points.clone();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x));
    let imax = pts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.y.total_cmp(&b.1.y))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if imax == 0 || imax == pts.len() - 1 {
        return Err(Error::Fit(format!(
            "curve for L = {} has no interior maximum",
            curve.l
        )));
    }
    let tri = [pts[imax - 1], pts[imax], pts[imax + 1]];
    let xy = tri.map(|p| (p.x, p.y));
    let (x, height) = parabola_vertex(xy).ok_or_else(|| Error::Fit("collinear peak points".into()))?;

    // Linear error propagation through numerical derivatives in each y.
    let mut var_x = 0.0;
    let mut var_h = 0.0;
    for k in 0..3 {
        if tri[k].sigma == 0.0 {
            continue;
        }
        let h = 1e-4 * tri[k].sigma;
        let mut up = xy;
        let mut dn = xy;
        up[k].1 += h;
        dn[k].1 -= h;
        if let (Some(a), Some(b)) = (parabola_vertex(up), parabola_vertex(dn)) {
            let dx = (a.0 - b.0) / (2.0 * h);
            let dh = (a.1 - b.1) / (2.0 * h);
            var_x += (dx * tri[k].sigma).powi(2);
            var_h += (dh * tri[k].sigma).powi(2);
        }
    }
    Ok(Peak {
        l: curve.l,
        x,
        x_err: var_x.sqrt(),
        height,
        height_err: var_h.sqrt(),
    })
}

/// Peak of each curve by quadratic interpolation through the sample maximum
/// and its two neighbours, then a linear fit of height against `ln L`.
pub fn peak_scan(curves: &[Curve]) -> Result<PeakScan> {
    let mut sizes: Vec<usize> = curves.iter().map(|c| c.l).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::Fit("peak scan needs at least two lattice sizes".into()));
    }
    let mut peaks = curves.iter().map(locate_peak).collect::<Result<Vec<_>>>()?;
    peaks.sort_by_key(|p| p.l);
    let pts: Vec<(f64, f64)> = peaks.iter().map(|p| ((p.l as f64).ln(), p.height)).collect();
    let fit = linear_fit(&pts)?;
    Ok(PeakScan { peaks, fit })
}
