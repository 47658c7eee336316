//! Monte Carlo error analysis: integrated autocorrelation times and
//! blocked jackknife.

use crate::numerics::compensated_sum;

/// One Monte Carlo observable with its statistical uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Integrated autocorrelation time in sweeps (≥ 0.5).
    pub tau_int: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// |mean - reference| in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.mean - reference).abs();
        if self.std_error == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_error
        }
    }

    pub fn agrees_with(&self, reference: f64, n_sigma: f64) -> bool {
        self.z_score(reference) <= n_sigma
    }

    /// Whether the run is long enough (≥ 100 τ_int) for the error bar to be
    /// trusted.
    pub fn is_reliable(&self) -> bool {
        self.n_samples as f64 >= 100.0 * self.tau_int
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Integrated autocorrelation time with Sokal's automatic window
/// (smallest `W` with `W ≥ c·τ(W)`, `c = 6`). Returns 0.5 for
/// uncorrelated or constant series.
pub fn integrated_autocorrelation_time(xs: &[f64]) -> f64 {
    const WINDOW_FACTOR: f64 = 6.0;
    let n = xs.len();
    if n < 4 {
        return 0.5;
    }
    let m = mean(xs);
    let d: Vec<f64> = xs.iter().map(|x| x - m).collect();
    let c0 = compensated_sum(d.iter().map(|x| x * x)) / n as f64;
    if c0 <= 0.0 {
        return 0.5;
    }
    let mut tau = 0.5;
    for t in 1..n / 2 {
        let ct = compensated_sum(d[..n - t].iter().zip(&d[t..]).map(|(a, b)| a * b))
            / (n - t) as f64;
        tau += ct / c0;
        if t as f64 >= WINDOW_FACTOR * tau {
            break;
        }
    }
    tau.max(0.5)
}

/// Blocked jackknife for a smooth function of several sample means.
///
/// `series[k]` is the time series of the k-th primary quantity (all of equal
/// length). The series are cut into blocks of `block_len`; trailing samples
/// that do not fill a block are dropped. Returns `(f(full means), error)`.
pub fn jackknife<F>(series: &[&[f64]], block_len: usize, f: F) -> (f64, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = series[0].len();
    debug_assert!(series.iter().all(|s| s.len() == n));
    let block_len = block_len.max(1);
    let n_blocks = n / block_len;
    let used = n_blocks * block_len;
    let k = series.len();

    let full: Vec<f64> = series.iter().map(|s| mean(s)).collect();
    let estimate = f(&full);
    if n_blocks < 2 {
        return (estimate, f64::NAN);
    }

    let block_sums: Vec<Vec<f64>> = series
        .iter()
        .map(|s| {
            s[..used]
                .chunks(block_len)
                .map(|c| compensated_sum(c.iter().copied()))
                .collect()
        })
        .collect();
    let totals: Vec<f64> = block_sums
        .iter()
        .map(|b| compensated_sum(b.iter().copied()))
        .collect();

    let denom = (used - block_len) as f64;
    let mut leave_out = Vec::with_capacity(n_blocks);
    let mut buf = vec![0.0; k];
    for b in 0..n_blocks {
        for q in 0..k {
            buf[q] = (totals[q] - block_sums[q][b]) / denom;
        }
        leave_out.push(f(&buf));
    }
    let jm = mean(&leave_out);
    let var = compensated_sum(leave_out.iter().map(|x| (x - jm) * (x - jm)))
        * (n_blocks - 1) as f64
        / n_blocks as f64;
    (estimate, var.sqrt())
}

/// Block length `2·ceil(τ)` used for jackknife binning.
pub fn block_length(tau_int: f64) -> usize {
    (2.0 * tau_int.ceil()) as usize
}
