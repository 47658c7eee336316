//! Classical square-lattice Ising model in the sign convention of the SMF
//! mapping: weight `exp(-β E)`, `E = Σ_<s,s'> θ_s θ_s'` (antiferromagnetic
//! for β > 0, coupling J = 1).
//!
//! Exact enumeration covers L ≤ 4. The thermodynamic limit uses Onsager's
//! closed form. Larger lattices are sampled on the ferromagnetic model
//! obtained by flipping one sublattice, which maps `E` to the ferromagnetic
//! energy `-Σ s s'` exactly for even L.

use crate::dos::DensityOfStates;
use crate::error::{Error, Result};
use crate::lattice::TorusLattice;
use crate::numerics::{compensated_sum, elliptic_ke};
use crate::stats::{block_length, integrated_autocorrelation_time, jackknife, McEstimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest L enumerated by brute force (2^(L²) configurations).
pub const ISING_MAX_L: usize = 4;

/// One spin per site of a torus lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingConfig {
    spins: Vec<i8>,
}

impl IsingConfig {
    pub fn new(lattice: &TorusLattice, spins: Vec<i8>) -> Result<Self> {
        if spins.len() != lattice.num_sites() || spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(
                "Ising configuration needs one ±1 spin per site".into(),
            ));
        }
        Ok(Self { spins })
    }

    /// Configuration number `index`: bit s set means `θ_s = -1`.
    pub fn from_index(lattice: &TorusLattice, index: u64) -> Self {
        let spins = (0..lattice.num_sites())
            .map(|s| if (index >> s) & 1 == 1 { -1 } else { 1 })
            .collect();
        Self { spins }
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// `Σ_<s,s'> θ_s θ_s'` over all 2L² bonds.
    pub fn energy(&self, lattice: &TorusLattice) -> i64 {
        lattice
            .bond_endpoints()
            .iter()
            .map(|&[a, b]| (self.spins[a] * self.spins[b]) as i64)
            .sum()
    }

    /// Flip every spin on the checkerboard sublattice `(row + col)` odd.
    pub fn sublattice_flipped(&self, lattice: &TorusLattice) -> Self {
        let l = lattice.size();
        let spins = self
            .spins
            .iter()
            .enumerate()
            .map(|(s, &x)| if (s / l + s % l) % 2 == 1 { -x } else { x })
            .collect();
        Self { spins }
    }
}

fn check_enum_budget(l: usize) -> Result<TorusLattice> {
    let lattice = TorusLattice::new(l)?;
    if l > ISING_MAX_L {
        return Err(Error::BudgetExceeded {
            what: "Ising",
            l,
            max: ISING_MAX_L,
        });
    }
    Ok(lattice)
}

/// `Σ_θ exp(-β J E(θ))` summed term by term over all 2^(L²) configurations.
pub fn ising_partition_enum_with_coupling(beta: f64, coupling: f64, l: usize) -> Result<f64> {
    let lattice = check_enum_budget(l)?;
    let n = lattice.num_sites();
    Ok(compensated_sum((0..1u64 << n).map(|i| {
        let e = IsingConfig::from_index(&lattice, i).energy(&lattice) as f64;
        (-beta * coupling * e).exp()
    })))
}

/// `Z_Ising(β) = Σ_θ exp(-β Σ θθ')`.
pub fn ising_partition_enum(beta: f64, l: usize) -> Result<f64> {
    ising_partition_enum_with_coupling(beta, 1.0, l)
}

/// Brute-force energy histogram over all 2^(L²) configurations.
pub fn ising_energy_histogram(l: usize) -> Result<DensityOfStates<1>> {
    let lattice = check_enum_budget(l)?;
    let mut counts = BTreeMap::new();
    for i in 0..1u64 << lattice.num_sites() {
        let e = IsingConfig::from_index(&lattice, i).energy(&lattice);
        *counts.entry([e]).or_insert(0u64) += 1;
    }
    Ok(DensityOfStates::from_counts(counts))
}

/// Per-site specific heat `β² Var(E) / L²` by exact enumeration.
pub fn specific_heat_exact(beta: f64, l: usize) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
    }
    let dos = ising_energy_histogram(l)?;
    let (_, [[var]]) = dos.moments(&[-beta]);
    Ok(beta * beta * var / (l * l) as f64)
}

/// Critical coupling `½ ln(1 + √2)`.
pub fn beta_c() -> f64 {
    0.5 * (1.0 + 2.0_f64.sqrt()).ln()
}

/// Thermodynamic-limit specific heat per site (Onsager):
///
/// ```text
/// c = (2/π) (β coth 2β)² [2K(k) - 2E(k) - (1 - k₁)(π/2 + k₁ K(k))]
/// k = 2 sinh 2β / cosh² 2β,   k₁ = 2 tanh² 2β - 1
/// ```
///
/// `k₁` carries a sign (negative above the critical temperature) and
/// `|k₁| = sqrt(1 - k²)`. Returns `+∞` exactly at `β_c`.
pub fn onsager_specific_heat(beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Onsager specific heat needs finite β > 0, got {beta}"
        )));
    }
    let x = 2.0 * beta;
    let t = x.tanh();
    let k = 2.0 * x.sinh() / x.cosh().powi(2);
    let k1 = 2.0 * t * t - 1.0;
    if k1 == 0.0 {
        return Ok(f64::INFINITY);
    }
    let (kk, ee) = elliptic_ke(k.min(1.0), k1.abs());
    let pref = 2.0 / PI * (beta / t).powi(2);
    Ok(pref * (2.0 * kk - 2.0 * ee - (1.0 - k1) * (FRAC_PI_2 + k1 * kk)))
}

/// Update scheme for the Markov chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    /// Single-cluster updates. A sweep is a fixed number of clusters whose
    /// mean total size is about L², calibrated during thermalization.
    Wolff,
    /// Sequential single-spin Metropolis; one sweep visits every site once.
    Metropolis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McParams {
    pub n_therm: usize,
    pub n_sweeps: usize,
    pub seed: u64,
    pub sampler: Sampler,
}

/// Estimates from one energy-sampling run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub beta: f64,
    pub l: usize,
    /// `⟨E⟩` (extensive).
    pub energy: McEstimate,
    /// `Var(E)` (extensive).
    pub variance: McEstimate,
    /// `β² Var(E) / L²`.
    pub specific_heat: McEstimate,
}

/// Smallest number of measurement sweeps accepted.
pub const MIN_SWEEPS: usize = 100;

struct FerroChain {
    spins: Vec<i8>,
    nbr: Vec<[usize; 4]>,
    rng: ChaCha8Rng,
    beta: f64,
    p_add: f64,
    stack: Vec<usize>,
    accept: [f64; 5],
    /// Clusters per Wolff sweep; fixed after thermalization.
    clusters_per_sweep: usize,
    flipped_in_therm: usize,
    clusters_in_therm: usize,
}

impl FerroChain {
    fn new(lattice: &TorusLattice, beta: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spins = (0..lattice.num_sites())
            .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
            .collect();
        // indexed by s·h/2 + 2 for h = sum of the four neighbours
        let accept = [-4.0, -2.0, 0.0, 2.0, 4.0].map(|sh: f64| (-2.0 * beta * sh).exp().min(1.0));
        Self {
            spins,
            nbr: lattice.neighbor_table(),
            rng,
            beta,
            p_add: 1.0 - (-2.0 * beta).exp(),
            stack: Vec::new(),
            accept,
            clusters_per_sweep: 1,
            flipped_in_therm: 0,
            clusters_in_therm: 0,
        }
    }

    /// Ferromagnetic energy `-Σ s s'` (equal to the SMF energy of the
    /// unflipped configuration).
    fn energy(&self) -> i64 {
        let mut e = 0i64;
        for (s, nb) in self.nbr.iter().enumerate() {
            // right and up bonds only
            e -= (self.spins[s] * (self.spins[nb[0]] + self.spins[nb[2]])) as i64;
        }
        e
    }

    fn wolff_cluster(&mut self) -> usize {
        let n = self.spins.len();
        let seed_site = self.rng.gen_range(0..n);
        let old = self.spins[seed_site];
        self.spins[seed_site] = -old;
        self.stack.clear();
        self.stack.push(seed_site);
        let mut size = 1;
        while let Some(s) = self.stack.pop() {
            for k in 0..4 {
                let t = self.nbr[s][k];
                if self.spins[t] == old && self.rng.gen::<f64>() < self.p_add {
                    self.spins[t] = -old;
                    self.stack.push(t);
                    size += 1;
                }
            }
        }
        size
    }

    /// During thermalization: flip clusters until at least N spins have
    /// flipped, recording the mean cluster size.
    fn wolff_therm_sweep(&mut self) {
        let n = self.spins.len();
        let mut flipped = 0;
        while flipped < n {
            flipped += self.wolff_cluster();
            self.clusters_in_therm += 1;
        }
        self.flipped_in_therm += flipped;
    }

    /// Measuring at a state-dependent stopping time would bias the
    /// estimates, so the cluster count is frozen here.
    fn end_thermalization(&mut self) {
        if self.clusters_in_therm == 0 {
            self.wolff_therm_sweep();
        }
        let mean_size = self.flipped_in_therm as f64 / self.clusters_in_therm as f64;
        self.clusters_per_sweep = ((self.spins.len() as f64 / mean_size).round() as usize).max(1);
    }

    fn wolff_sweep(&mut self) {
        for _ in 0..self.clusters_per_sweep {
            self.wolff_cluster();
        }
    }

    fn metropolis_sweep(&mut self) {
        for s in 0..self.spins.len() {
            let h: i8 = self.nbr[s].iter().map(|&t| self.spins[t]).sum();
            let idx = (self.spins[s] * h / 2 + 2) as usize;
            let a = self.accept[idx];
            if a >= 1.0 || self.rng.gen::<f64>() < a {
                self.spins[s] = -self.spins[s];
            }
        }
    }

    fn sweep(&mut self, sampler: Sampler) {
        match sampler {
            Sampler::Wolff => self.wolff_sweep(),
            Sampler::Metropolis => self.metropolis_sweep(),
        }
    }
}

/// Sample `⟨E⟩` and `Var(E)` at `(β, L)` with Wolff updates.
pub fn mc_sample_energy(
    beta: f64,
    l: usize,
    n_therm: usize,
    n_sweeps: usize,
    seed: u64,
) -> Result<EnergyEstimate> {
    mc_sample_energy_with(
        beta,
        l,
        &McParams {
            n_therm,
            n_sweeps,
            seed,
            sampler: Sampler::Wolff,
        },
    )
}

/// Energy time series (one value per sweep) after thermalization.
pub fn mc_energy_series(beta: f64, l: usize, params: &McParams) -> Result<Vec<f64>> {
    if l < 4 || l % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "Monte Carlo needs even L >= 4 (got L = {l})"
        )));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
    }
    if params.n_sweeps < MIN_SWEEPS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_SWEEPS} measurement sweeps (got {})",
            params.n_sweeps
        )));
    }
    let lattice = TorusLattice::new(l)?;
    let mut chain = FerroChain::new(&lattice, beta, params.seed);
    debug_assert!(chain.beta == beta);
    for _ in 0..params.n_therm {
        match params.sampler {
            Sampler::Wolff => chain.wolff_therm_sweep(),
            Sampler::Metropolis => chain.metropolis_sweep(),
        }
    }
    if params.sampler == Sampler::Wolff {
        chain.end_thermalization();
    }
    let mut series = Vec::with_capacity(params.n_sweeps);
    for _ in 0..params.n_sweeps {
        chain.sweep(params.sampler);
        series.push(chain.energy() as f64);
    }
    Ok(series)
}

pub fn mc_sample_energy_with(beta: f64, l: usize, params: &McParams) -> Result<EnergyEstimate> {
    let e = mc_energy_series(beta, l, params)?;
    let e2: Vec<f64> = e.iter().map(|x| x * x).collect();
    let tau = integrated_autocorrelation_time(&e).max(integrated_autocorrelation_time(&e2));
    let block = block_length(tau);
    let n_sites = (l * l) as f64;
    let mk = |(mean, std_error): (f64, f64)| McEstimate {
        mean,
        std_error,
        tau_int: tau,
        n_samples: e.len(),
        seed: params.seed,
    };
    let energy = mk(jackknife(&[&e], block, |m| m[0]));
    let variance = mk(jackknife(&[&e, &e2], block, |m| m[1] - m[0] * m[0]));
    let specific_heat = mk(jackknife(&[&e, &e2], block, |m| {
        beta * beta * (m[1] - m[0] * m[0]) / n_sites
    }));
    Ok(EnergyEstimate {
        beta,
        l,
        energy,
        variance,
        specific_heat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_at_beta_zero() {
        assert_eq!(ising_partition_enum(0.0, 2).unwrap(), 16.0);
        assert_eq!(ising_partition_enum(0.0, 3).unwrap(), 512.0);
    }

    #[test]
    fn budget() {
        assert!(matches!(ising_partition_enum(0.1, 5), Err(Error::BudgetExceeded { .. })));
        assert!(specific_heat_exact(0.1, 5).is_err());
    }

    #[test]
    fn coupling_sign_symmetry_even_l() {
        for &beta in &[0.1, 0.3, 0.7] {
            let a = ising_partition_enum_with_coupling(beta, 1.0, 2).unwrap();
            let b = ising_partition_enum_with_coupling(beta, -1.0, 2).unwrap();
            assert!((a - b).abs() / a < 1e-14);
            let a = ising_partition_enum_with_coupling(beta, 1.0, 4).unwrap();
            let b = ising_partition_enum_with_coupling(beta, -1.0, 4).unwrap();
            assert!((a - b).abs() / a < 1e-13);
        }
        // Odd L is frustrated: the two signs differ.
        let a = ising_partition_enum_with_coupling(0.5, 1.0, 3).unwrap();
        let b = ising_partition_enum_with_coupling(0.5, -1.0, 3).unwrap();
        assert!((a - b).abs() / a > 1e-3);
    }

    #[test]
    fn sublattice_flip_negates_energy() {
        let lat = TorusLattice::new(4).unwrap();
        for idx in [0u64, 1, 0xBEEF, 0x1234] {
            let c = IsingConfig::from_index(&lat, idx);
            assert_eq!(c.sublattice_flipped(&lat).energy(&lat), -c.energy(&lat));
        }
    }

    #[test]
    fn specific_heat_limits_and_ordering() {
        assert_eq!(specific_heat_exact(0.0, 4).unwrap(), 0.0);
        assert!(specific_heat_exact(40.0, 4).unwrap() < 1e-10);
        assert!(specific_heat_exact(0.44, 4).unwrap() > specific_heat_exact(0.2, 4).unwrap());
    }

    /// `ln Z / N` in the thermodynamic limit from Onsager's single integral,
    /// by Simpson quadrature; second derivative taken numerically.
    fn onsager_free_energy(beta: f64) -> f64 {
        let x = 2.0 * beta;
        let k = 2.0 * x.sinh() / x.cosh().powi(2);
        let n = 20_000;
        let h = PI / n as f64;
        let f = |phi: f64| (0.5 * (1.0 + (1.0 - (k * phi.sin()).powi(2)).sqrt())).ln();
        let mut s = f(0.0) + f(PI);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
        }
        (2.0 * x.cosh()).ln() + s * h / 3.0 / (2.0 * PI)
    }

    #[test]
    fn onsager_matches_free_energy_curvature() {
        for &beta in &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.9] {
            let d = 2e-4;
            let curv = (onsager_free_energy(beta + d) - 2.0 * onsager_free_energy(beta)
                + onsager_free_energy(beta - d))
                / (d * d);
            let c = onsager_specific_heat(beta).unwrap();
            assert!(
                (c - beta * beta * curv).abs() < 1e-5,
                "β = {beta}: {c} vs {}",
                beta * beta * curv
            );
        }
    }

    #[test]
    fn onsager_high_temperature_limit() {
        // Independent bonds: c ≈ 2β².
        let beta = 1e-3;
        let c = onsager_specific_heat(beta).unwrap();
        assert!((c / (2.0 * beta * beta) - 1.0).abs() < 1e-4, "{c}");
    }

    #[test]
    fn onsager_log_divergence() {
        let bc = beta_c();
        for sign in [-1.0, 1.0] {
            let near = onsager_specific_heat(bc + sign * 1e-6).unwrap();
            let far = onsager_specific_heat(bc + sign * 1e-2).unwrap();
            assert!(near > far);
        }
        // c(β_c - t) - c(β_c - 2t) ≈ A ln 2 with A = 8β_c²/π.
        let amp = 8.0 * bc * bc / PI;
        let step = |t: f64| {
            onsager_specific_heat(bc - t).unwrap() - onsager_specific_heat(bc - 2.0 * t).unwrap()
        };
        let (s1, s2) = (step(1e-3), step(5e-4));
        assert!((s1 - s2).abs() < 5e-3, "{s1} vs {s2}");
        assert!((s2 - amp * 2f64.ln()).abs() < 1e-2, "{s2}");
        assert!(onsager_specific_heat(0.0).is_err());
    }

    #[test]
    fn mc_rejects_bad_sizes() {
        assert!(mc_sample_energy(0.3, 5, 10, 200, 1).is_err());
        assert!(mc_sample_energy(0.3, 2, 10, 200, 1).is_err());
        assert!(mc_sample_energy(0.3, 4, 10, 10, 1).is_err());
    }

    #[test]
    fn mc_is_deterministic() {
        let a = mc_sample_energy(0.4, 8, 50, 300, 9).unwrap();
        let b = mc_sample_energy(0.4, 8, 50, 300, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mc_matches_enumeration_at_l4() {
        let exact = specific_heat_exact(0.3, 4).unwrap();
        let dos = ising_energy_histogram(4).unwrap();
        let ([mean], _) = dos.moments(&[-0.3]);
        for sampler in [Sampler::Wolff, Sampler::Metropolis] {
            let params = McParams {
                n_therm: 1000,
                n_sweeps: 40_000,
                seed: 11,
                sampler,
            };
            let est = mc_sample_energy_with(0.3, 4, &params).unwrap();
            assert!(est.specific_heat.agrees_with(exact, 3.0), "{sampler:?}: {:?} vs {exact}", est.specific_heat);
            assert!(est.energy.agrees_with(mean, 3.0), "{sampler:?}: {:?} vs {mean}", est.energy);
            assert!(est.specific_heat.is_reliable());
        }
    }

    #[test]
    fn mc_infinite_temperature() {
        let est = mc_sample_energy(0.0, 8, 10, 2000, 5).unwrap();
        assert!(est.energy.agrees_with(0.0, 3.0), "{:?}", est.energy);
    }
}
