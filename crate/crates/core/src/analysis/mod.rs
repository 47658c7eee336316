//! Model-agnostic fidelity numerics and critical-scaling fits.

mod fit;
mod peaks;

pub use fit::{fit_log_divergence, fit_power_law, linear_fit, FitModel, FitWarning, LinearFit, ScalingFit};
pub use peaks::{peak_scan, Curve, CurvePoint, Peak, PeakScan};

use crate::eight_vertex::{EightVertexSpectrum, MetricTensor2};
use crate::error::{Error, Result};
use crate::numerics::compensated_sum;
use crate::smf::SmfSpectrum;

/// Normalization tolerance for [`fidelity_overlap`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Infidelity below which a finite-difference step is rejected.
pub const NOISE_FLOOR: f64 = 100.0 * f64::EPSILON;

/// Default finite-difference step in natural parameter units.
pub const DEFAULT_DELTA: f64 = 1e-2;

/// Bhattacharyya overlap `F = Σ_i sqrt(p_i q_i)` of two distributions over
/// the same index set.
pub fn fidelity_overlap(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    for dist in [p, q] {
        if dist.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidParameter("probabilities must be nonnegative".into()));
        }
        let total = compensated_sum(dist.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(total));
        }
    }
    let f = compensated_sum(p.iter().zip(q).map(|(a, b)| (a * b).sqrt()));
    Ok(f.clamp(0.0, 1.0))
}

/// A parameterized family of states whose ground-state overlap can be
/// evaluated between any two parameter points.
pub trait FidelityFamily {
    /// Number of parameters.
    fn dim(&self) -> usize;

    /// `1 - F(a, b)`.
    fn infidelity(&self, a: &[f64], b: &[f64]) -> Result<f64>;

    fn fidelity(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        Ok(1.0 - self.infidelity(a, b)?)
    }
}

impl FidelityFamily for SmfSpectrum {
    fn dim(&self) -> usize {
        1
    }

    fn infidelity(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        check_dim(1, a, b)?;
        if !a[0].is_finite() || !b[0].is_finite() {
            return Err(Error::InvalidParameter("beta must be finite".into()));
        }
        Ok(SmfSpectrum::infidelity(self, a[0], b[0]))
    }
}

impl FidelityFamily for EightVertexSpectrum {
    fn dim(&self) -> usize {
        2
    }

    /// Parameters are `(u, v) = (c², d²)`.
    fn infidelity(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        check_dim(2, a, b)?;
        if a.iter().chain(b).any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eight-vertex parameters must be finite and >= 0 ({a:?}, {b:?})"
            )));
        }
        Ok(EightVertexSpectrum::infidelity(self, (a[0], a[1]), (b[0], b[1])))
    }
}

/// Adapter for a closure returning the fidelity `F(a, b)` directly.
pub struct FidelityFn<F> {
    dim: usize,
    f: F,
}

impl<F> FidelityFn<F>
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> FidelityFamily for FidelityFn<F>
where
    F: Fn(&[f64], &[f64]) -> Result<f64>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn infidelity(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        check_dim(self.dim, a, b)?;
        Ok(1.0 - (self.f)(a, b)?)
    }
}

fn check_dim(dim: usize, a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != dim || b.len() != dim {
        return Err(Error::InvalidParameter(format!(
            "expected {dim} parameters, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Metric along `direction` from one centered step:
/// `g = 2 (1 - F(x - δ/2·n, x + δ/2·n)) / δ²`.
///
/// The two states sit symmetrically about `point`, so the truncation error
/// is even in `δ`, i.e. O(δ²).
pub fn metric_along<M: FidelityFamily + ?Sized>(
    family: &M,
    point: &[f64],
    direction: &[f64],
    delta: f64,
) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("step must be > 0, got {delta}")));
    }
    if point.len() != family.dim() || direction.len() != family.dim() {
        return Err(Error::InvalidParameter("point/direction dimension mismatch".into()));
    }
    let lo: Vec<f64> = point.iter().zip(direction).map(|(x, n)| x - 0.5 * delta * n).collect();
    let hi: Vec<f64> = point.iter().zip(direction).map(|(x, n)| x + 0.5 * delta * n).collect();
    let inf = family.infidelity(&lo, &hi)?;
    // An exactly flat family is only trusted when the step is large enough
    // that a nonzero metric could not have rounded away.
    if inf == 0.0 && delta * delta >= 1e6 * NOISE_FLOOR {
        return Ok(0.0);
    }
    if inf < NOISE_FLOOR {
        return Err(Error::StepTooSmall {
            delta,
            infidelity: inf,
        });
    }
    Ok(2.0 * inf / (delta * delta))
}

/// Finite-difference metric at steps δ, δ/2 and δ/4 with convergence
/// diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdMetric {
    pub delta: f64,
    /// Estimates at δ, δ/2, δ/4.
    pub g: [f64; 3],
}

impl FdMetric {
    /// Estimate at the largest step.
    pub fn value(&self) -> f64 {
        self.g[0]
    }

    /// Richardson extrapolation from δ and δ/2, exact for an O(δ²) error.
    pub fn richardson(&self) -> f64 {
        (4.0 * self.g[1] - self.g[0]) / 3.0
    }

    /// `(g(δ) - g(δ/2)) / (g(δ/2) - g(δ/4))`, which tends to 4 for O(δ²)
    /// convergence. NaN when the estimates do not change.
    pub fn convergence_ratio(&self) -> f64 {
        let den = self.g[1] - self.g[2];
        if den == 0.0 {
            f64::NAN
        } else {
            (self.g[0] - self.g[1]) / den
        }
    }

    /// Ratio of the errors at δ and δ/2 against a known value.
    pub fn error_ratio(&self, exact: f64) -> f64 {
        (self.g[0] - exact) / (self.g[1] - exact)
    }
}

pub fn finite_difference_metric<M: FidelityFamily + ?Sized>(
    family: &M,
    point: &[f64],
    direction: &[f64],
    delta: f64,
) -> Result<FdMetric> {
    let mut g = [0.0; 3];
    for (k, slot) in g.iter_mut().enumerate() {
        *slot = metric_along(family, point, direction, delta / (1 << k) as f64)?;
    }
    Ok(FdMetric { delta, g })
}

/// Finite-difference estimates of a two-parameter metric along the two
/// axes and the `(1, 1)` diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdTensor2 {
    pub xx: FdMetric,
    pub yy: FdMetric,
    pub diag: FdMetric,
}

impl FdTensor2 {
    /// Off-diagonal entry of the symmetric matrix by polarization,
    /// `(g_diag - g_xx - g_yy) / 2`, at step level `k` (δ / 2^k).
    pub fn g_xy(&self, k: usize) -> f64 {
        0.5 * (self.diag.g[k] - self.xx.g[k] - self.yy.g[k])
    }

    /// The estimate at step level `k` in the `(g_cc, g_dd, g_cd)` layout,
    /// where `g_cd` is twice the matrix off-diagonal.
    pub fn tensor(&self, k: usize) -> MetricTensor2 {
        MetricTensor2 {
            g_cc: self.xx.g[k],
            g_dd: self.yy.g[k],
            g_cd: 2.0 * self.g_xy(k),
        }
    }
}

pub fn finite_difference_tensor2<M: FidelityFamily + ?Sized>(
    family: &M,
    point: [f64; 2],
    delta: f64,
) -> Result<FdTensor2> {
    Ok(FdTensor2 {
        xx: finite_difference_metric(family, &point, &[1.0, 0.0], delta)?,
        yy: finite_difference_metric(family, &point, &[0.0, 1.0], delta)?,
        diag: finite_difference_metric(family, &point, &[1.0, 1.0], delta)?,
    })
}
