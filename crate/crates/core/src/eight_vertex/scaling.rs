//! Critical exponent of the metric and phase diagram in `(u, v) = (c², d²)`.
//!
//! Near the critical lines `|v - u| = 2` the singular free energy scales as
//! `||v - u| - 2|^(π/μ)` with `μ = 2 arctan sqrt(uv)`, so the metric (a
//! second derivative) scales with exponent `π/μ - 2`. The metric diverges as
//! a power law for `uv > 1` and logarithmically at `uv = 1`. When `π/μ` is an
//! integer the power law carries an extra logarithm.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Tolerance for `uv = 1` and for the critical lines `|v - u| = 2`.
pub const CRITICAL_TOL: f64 = 1e-12;
/// Tolerance for flagging an integer `π/μ`.
pub const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceClass {
    /// `π/μ - 2 < 0`.
    PowerLaw,
    /// `π/μ - 2 = 0`.
    Logarithmic,
    /// `π/μ - 2 > 0`: the metric stays finite.
    NonDivergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingExponent {
    pub mu: f64,
    pub pi_over_mu: f64,
    /// `π/μ - 2`.
    pub exponent: f64,
    pub class: DivergenceClass,
    /// `π/μ` is an integer: the singular part picks up an extra log factor.
    pub log_correction: bool,
}

pub fn scaling_exponent(u: f64, v: f64) -> Result<ScalingExponent> {
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "scaling exponent needs u, v > 0 (got u = {u}, v = {v})"
        )));
    }
    let uv = u * v;
    let mu = 2.0 * uv.sqrt().atan();
    let pi_over_mu = PI / mu;
    let exponent = pi_over_mu - 2.0;
    let class = if (uv - 1.0).abs() <= CRITICAL_TOL {
        DivergenceClass::Logarithmic
    } else if uv > 1.0 {
        DivergenceClass::PowerLaw
    } else {
        DivergenceClass::NonDivergent
    };
    Ok(ScalingExponent {
        mu,
        pi_over_mu,
        exponent,
        class,
        log_correction: (pi_over_mu - pi_over_mu.round()).abs() <= INTEGER_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// `|v - u| < 2`: disordered classically, topologically ordered quantum.
    Topological,
    /// `v > u + 2`: d vertices dominate.
    OrderedD,
    /// `v < u - 2`: c vertices dominate.
    OrderedC,
    /// On `|v - u| = 2`.
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub phase: Phase,
    /// `||v - u| - 2|`.
    pub distance: f64,
}

pub fn phase_classifier(u: f64, v: f64) -> PhasePoint {
    let gap = (v - u).abs() - 2.0;
    let phase = if gap.abs() <= CRITICAL_TOL {
        Phase::Critical
    } else if gap < 0.0 {
        Phase::Topological
    } else if v > u {
        Phase::OrderedD
    } else {
        Phase::OrderedC
    };
    PhasePoint {
        phase,
        distance: gap.abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_points() {
        let s = scaling_exponent(1.0, 1.0).unwrap();
        assert_eq!(s.exponent, 0.0);
        assert_eq!(s.mu, PI / 2.0);
        assert_eq!(s.class, DivergenceClass::Logarithmic);

        let s = scaling_exponent(3.0, 1.0).unwrap();
        assert!((s.mu - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((s.exponent + 0.5).abs() < 1e-12);
        assert_eq!(s.class, DivergenceClass::PowerLaw);
        assert!(!s.log_correction);

        let s = scaling_exponent(1.0 / 3.0, 1.0).unwrap();
        assert!((s.mu - PI / 3.0).abs() < 1e-15);
        assert!((s.exponent - 1.0).abs() < 1e-12);
        assert_eq!(s.class, DivergenceClass::NonDivergent);
        assert!(s.log_correction);

        assert!(scaling_exponent(0.0, 1.0).is_err());
        assert!(scaling_exponent(1.0, -2.0).is_err());
    }

    #[test]
    fn exponent_decreases_in_uv() {
        let mut prev = f64::INFINITY;
        for i in 1..400 {
            let uv = i as f64 * 0.025;
            let e = scaling_exponent(uv, 1.0).unwrap().exponent;
            assert!(e < prev);
            prev = e;
        }
    }

    #[test]
    fn phases() {
        assert_eq!(phase_classifier(1.0, 1.0), PhasePoint { phase: Phase::Topological, distance: 2.0 });
        assert_eq!(phase_classifier(1.0, 4.0), PhasePoint { phase: Phase::OrderedD, distance: 1.0 });
        assert_eq!(phase_classifier(4.0, 1.0).phase, Phase::OrderedC);
        assert_eq!(phase_classifier(0.5, 2.5).phase, Phase::Critical);
        assert_eq!(phase_classifier(0.5, 2.5).distance, 0.0);
    }
}
