//! Exact densities of states for exponential-family ground states.
//!
//! Both models reduce to distributions `p(x) ∝ exp(η · T(x))` over
//! configurations, where `T` is an integer statistic (the SMF bond energy, or
//! the eight-vertex counts `(n_c, n_d)`). Grouping configurations by `T`
//! turns every exact sum into a short sum over distinct statistic values.

use crate::numerics::{compensated_sum, CompensatedSum};
use std::collections::BTreeMap;

/// Multiplicities of each value of a `K`-component integer statistic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityOfStates<const K: usize> {
    entries: Vec<([i64; K], u64)>,
}

impl<const K: usize> DensityOfStates<K> {
    pub fn from_counts(counts: BTreeMap<[i64; K], u64>) -> Self {
        Self {
            entries: counts.into_iter().filter(|&(_, n)| n > 0).collect(),
        }
    }

    pub fn entries(&self) -> &[([i64; K], u64)] {
        &self.entries
    }

    /// Total number of configurations.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, n)| n).sum()
    }

    /// Unnormalized log-weight of one configuration with statistic `t`.
    /// A zero component contributes nothing even when `η_k = -∞`.
    pub fn log_weight(eta: &[f64; K], t: &[i64; K]) -> f64 {
        let mut acc = 0.0;
        for k in 0..K {
            if t[k] != 0 {
                acc += eta[k] * t[k] as f64;
            }
        }
        acc
    }

    fn max_log_weight(&self, eta: &[f64; K]) -> f64 {
        self.entries
            .iter()
            .map(|(t, _)| Self::log_weight(eta, t))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `ln Σ_x exp(η·T(x))`; `-∞` if every configuration has zero weight.
    pub fn log_partition(&self, eta: &[f64; K]) -> f64 {
        let shift = self.max_log_weight(eta);
        if shift == f64::NEG_INFINITY {
            return shift;
        }
        let s = compensated_sum(
            self.entries
                .iter()
                .map(|(t, n)| *n as f64 * (Self::log_weight(eta, t) - shift).exp()),
        );
        shift + s.ln()
    }

    /// Probability of each distinct statistic value (multiplicity included).
    pub fn class_probabilities(&self, eta: &[f64; K]) -> Vec<f64> {
        let shift = self.max_log_weight(eta);
        if shift == f64::NEG_INFINITY {
            return vec![f64::NAN; self.entries.len()];
        }
        // Weights relative to the largest; exact when all exponents vanish.
        let w: Vec<f64> = self
            .entries
            .iter()
            .map(|(t, n)| *n as f64 * (Self::log_weight(eta, t) - shift).exp())
            .collect();
        let total = compensated_sum(w.iter().copied());
        w.into_iter().map(|x| x / total).collect()
    }

    /// Mean vector and covariance matrix of `T` (two-pass, compensated).
    pub fn moments(&self, eta: &[f64; K]) -> ([f64; K], [[f64; K]; K]) {
        let probs = self.class_probabilities(eta);
        let mut mean = [0.0; K];
        for k in 0..K {
            mean[k] = compensated_sum(
                self.entries
                    .iter()
                    .zip(&probs)
                    .map(|((t, _), p)| p * t[k] as f64),
            );
        }
        let mut cov = [[0.0; K]; K];
        for i in 0..K {
            for j in i..K {
                let c = compensated_sum(self.entries.iter().zip(&probs).map(|((t, _), p)| {
                    p * (t[i] as f64 - mean[i]) * (t[j] as f64 - mean[j])
                }));
                cov[i][j] = c;
                cov[j][i] = c;
            }
        }
        (mean, cov)
    }

    /// `1 - Σ_x sqrt(p(x) q(x))` evaluated as the squared Hellinger
    /// distance `½ Σ_x (sqrt p - sqrt q)²`, which has no cancellation when
    /// the two distributions are close.
    pub fn infidelity(&self, eta_p: &[f64; K], eta_q: &[f64; K]) -> f64 {
        let lzp = self.log_partition(eta_p);
        let lzq = self.log_partition(eta_q);
        let mut acc = CompensatedSum::new();
        for (t, n) in &self.entries {
            let a = (0.5 * (Self::log_weight(eta_p, t) - lzp)).exp();
            let b = (0.5 * (Self::log_weight(eta_q, t) - lzq)).exp();
            let d = a - b;
            acc.add(*n as f64 * d * d);
        }
        (0.5 * acc.value()).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> DensityOfStates<1> {
        // two configurations with T = 0 and T = 1
        DensityOfStates::from_counts(BTreeMap::from([([0], 1), ([1], 1)]))
    }

    #[test]
    fn bernoulli_moments() {
        let d = coin();
        let eta = [0.7_f64];
        let p = eta[0].exp() / (1.0 + eta[0].exp());
        let (m, c) = d.moments(&eta);
        assert!((m[0] - p).abs() < 1e-15);
        assert!((c[0][0] - p * (1.0 - p)).abs() < 1e-15);
        assert!((d.log_partition(&eta) - (1.0 + eta[0].exp()).ln()).abs() < 1e-15);
    }

    #[test]
    fn infidelity_matches_direct_overlap() {
        let d = coin();
        let p = 0.5_f64;
        let q = 1.0 / (1.0 + (-1.0_f64).exp());
        let direct = 1.0 - ((p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt());
        assert!((d.infidelity(&[0.0], &[1.0]) - direct).abs() < 1e-15);
        assert_eq!(d.infidelity(&[0.3], &[0.3]), 0.0);
    }

    #[test]
    fn zero_statistic_survives_infinite_eta() {
        let d = coin();
        let lz = d.log_partition(&[f64::NEG_INFINITY]);
        assert_eq!(lz, 0.0);
        let (m, _) = d.moments(&[f64::NEG_INFINITY]);
        assert_eq!(m[0], 0.0);
    }
}
