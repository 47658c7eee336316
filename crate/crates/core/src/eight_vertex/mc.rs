//! Markov chain over valid arrow configurations.
//!
//! Moves reverse the arrows around one face (plaquette move) or along one
//! non-contractible row or column of bonds (winding move). Both keep every
//! site's parity, and together they generate the whole cycle space of the
//! torus. Each move is accepted with probability `min(1, u^Δn_c v^Δn_d)`.
//! A sweep is as many proposals as there are moves, each drawn uniformly
//! from the moves plus a "stay" option. On even L the number of moves used
//! is conserved mod 2, so without the stay option the chain is periodic
//! when acceptance is close to one.

use super::{MetricTensor2, VertexClass, VertexType};
use crate::error::{Error, Result};
use crate::lattice::TorusLattice;
use crate::stats::{block_length, integrated_autocorrelation_time, jackknife, McEstimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct VertexMcEstimate {
    pub u: f64,
    pub v: f64,
    pub l: usize,
    pub mean_nc: McEstimate,
    pub mean_nd: McEstimate,
    pub var_nc: McEstimate,
    pub var_nd: McEstimate,
    pub cov: McEstimate,
    /// Fraction of accepted proposals during measurement.
    pub acceptance: f64,
}

impl VertexMcEstimate {
    /// Metric tensor from the sampled fluctuations.
    pub fn metric(&self) -> MetricTensor2 {
        MetricTensor2::from_counts_covariance(
            self.u,
            self.v,
            [
                [self.var_nc.mean, self.cov.mean],
                [self.cov.mean, self.var_nd.mean],
            ],
        )
    }

    /// Standard errors of the metric entries (same layout as [`Self::metric`]).
    pub fn metric_errors(&self) -> MetricTensor2 {
        MetricTensor2::from_counts_covariance(
            self.u,
            self.v,
            [
                [self.var_nc.std_error, self.cov.std_error],
                [self.cov.std_error, self.var_nd.std_error],
            ],
        )
    }
}

/// A set of bonds to reverse together and the sites they touch.
struct Move {
    bonds: Vec<usize>,
    sites: Vec<usize>,
}

fn moves(l: usize, plaquettes: &[[usize; 4]]) -> Vec<Move> {
    let n = l * l;
    let mut out = Vec::with_capacity(n + 2 * l);
    for (p, bonds) in plaquettes.iter().enumerate() {
        let (r, c) = (p / l, p % l);
        out.push(Move {
            bonds: bonds.to_vec(),
            sites: vec![
                r * l + c,
                r * l + (c + 1) % l,
                ((r + 1) % l) * l + c,
                ((r + 1) % l) * l + (c + 1) % l,
            ],
        });
    }
    for r in 0..l {
        // horizontal bond r*l + c starts at site r*l + c
        let sites: Vec<usize> = (0..l).map(|c| r * l + c).collect();
        out.push(Move { bonds: sites.clone(), sites });
    }
    for c in 0..l {
        let sites: Vec<usize> = (0..l).map(|r| r * l + c).collect();
        out.push(Move { bonds: sites.iter().map(|s| n + s).collect(), sites });
    }
    out
}

struct VertexChain {
    reversed: Vec<bool>,
    stars: Vec<[usize; 4]>,
    moves: Vec<Move>,
    n_c: i64,
    n_d: i64,
    log_u: f64,
    log_v: f64,
    rng: ChaCha8Rng,
    accepted: u64,
    proposed: u64,
}

impl VertexChain {
    fn new(lattice: &TorusLattice, u: f64, v: f64, seed: u64) -> Result<Self> {
        let n = lattice.num_sites();
        let stars = (0..n).map(|s| lattice.star(s)).collect::<Result<Vec<_>>>()?;
        let plaquettes = (0..n).map(|p| lattice.plaquette(p)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            reversed: vec![false; lattice.num_bonds()],
            stars,
            moves: moves(lattice.size(), &plaquettes),
            n_c: 0,
            n_d: 0,
            log_u: u.ln(),
            log_v: v.ln(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            accepted: 0,
            proposed: 0,
        })
    }

    fn class_at(&self, s: usize) -> VertexClass {
        let [r, l, u, d] = self.stars[s];
        VertexType::from_reversals(self.reversed[r], self.reversed[l], self.reversed[u], self.reversed[d])
            .expect("chain left the valid configuration space")
            .class()
    }

    fn count_cd(&self, sites: &[usize]) -> (i64, i64) {
        let mut dc = 0;
        let mut dd = 0;
        for &s in sites {
            match self.class_at(s) {
                VertexClass::C => dc += 1,
                VertexClass::D => dd += 1,
                _ => {}
            }
        }
        (dc, dd)
    }

    fn flip(&mut self, m: usize) {
        for &b in &self.moves[m].bonds {
            self.reversed[b] = !self.reversed[b];
        }
    }

    fn propose(&mut self, m: usize) {
        self.proposed += 1;
        let (c0, d0) = self.count_cd(&self.moves[m].sites);
        self.flip(m);
        let (c1, d1) = self.count_cd(&self.moves[m].sites);
        let (dc, dd) = (c1 - c0, d1 - d0);
        let mut log_ratio = 0.0;
        if dc != 0 {
            log_ratio += dc as f64 * self.log_u;
        }
        if dd != 0 {
            log_ratio += dd as f64 * self.log_v;
        }
        if log_ratio >= 0.0 || self.rng.gen::<f64>() < log_ratio.exp() {
            self.n_c += dc;
            self.n_d += dd;
            self.accepted += 1;
        } else {
            self.flip(m);
        }
    }

    fn sweep(&mut self) {
        let k = self.moves.len();
        for _ in 0..k {
            let m = self.rng.gen_range(0..=k);
            if m < k {
                self.propose(m);
            }
        }
    }
}

/// Sample vertex-count moments at weights `(u, v) = (c², d²)`.
pub fn mc_sample_vertices(
    u: f64,
    v: f64,
    l: usize,
    n_therm: usize,
    n_sweeps: usize,
    seed: u64,
) -> Result<VertexMcEstimate> {
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "vertex Monte Carlo needs u, v > 0 (got u = {u}, v = {v})"
        )));
    }
    if n_sweeps < crate::ising::MIN_SWEEPS {
        return Err(Error::InvalidParameter(format!(
            "need at least {} measurement sweeps (got {n_sweeps})",
            crate::ising::MIN_SWEEPS
        )));
    }
    let lattice = TorusLattice::new(l)?;
    let mut chain = VertexChain::new(&lattice, u, v, seed)?;
    for _ in 0..n_therm {
        chain.sweep();
    }
    chain.accepted = 0;
    chain.proposed = 0;

    let mut nc = Vec::with_capacity(n_sweeps);
    let mut nd = Vec::with_capacity(n_sweeps);
    for _ in 0..n_sweeps {
        chain.sweep();
        nc.push(chain.n_c as f64);
        nd.push(chain.n_d as f64);
    }
    let nc2: Vec<f64> = nc.iter().map(|x| x * x).collect();
    let nd2: Vec<f64> = nd.iter().map(|x| x * x).collect();
    let ncd: Vec<f64> = nc.iter().zip(&nd).map(|(a, b)| a * b).collect();
    let tau = [&nc, &nd, &nc2, &nd2, &ncd]
        .iter()
        .map(|s| integrated_autocorrelation_time(s))
        .fold(0.5, f64::max);
    let block = block_length(tau);
    let series: [&[f64]; 5] = [&nc, &nd, &nc2, &nd2, &ncd];
    let mk = |(mean, std_error): (f64, f64)| McEstimate {
        mean,
        std_error,
        tau_int: tau,
        n_samples: n_sweeps,
        seed,
    };
    Ok(VertexMcEstimate {
        u,
        v,
        l,
        mean_nc: mk(jackknife(&series, block, |m| m[0])),
        mean_nd: mk(jackknife(&series, block, |m| m[1])),
        var_nc: mk(jackknife(&series, block, |m| m[2] - m[0] * m[0])),
        var_nd: mk(jackknife(&series, block, |m| m[3] - m[1] * m[1])),
        cov: mk(jackknife(&series, block, |m| m[4] - m[0] * m[1])),
        acceptance: chain.accepted as f64 / chain.proposed.max(1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{classify_vertices, ArrowConfig, EightVertexSpectrum};
    use super::*;

    #[test]
    fn chain_counts_stay_consistent() {
        let lat = TorusLattice::new(3).unwrap();
        let mut chain = VertexChain::new(&lat, 1.7, 0.6, 3).unwrap();
        for _ in 0..200 {
            chain.sweep();
            let cfg = ArrowConfig::from_reversals(&lat, chain.reversed.clone()).unwrap();
            let vc = classify_vertices(&lat, &cfg).unwrap();
            assert_eq!((vc.n_c as i64, vc.n_d as i64), (chain.n_c, chain.n_d));
        }
    }

    #[test]
    fn uniform_target_accepts_everything() {
        let est = mc_sample_vertices(1.0, 1.0, 4, 10, 200, 1).unwrap();
        assert_eq!(est.acceptance, 1.0);
    }

    #[test]
    fn chain_visits_every_configuration_on_l2() {
        let lat = TorusLattice::new(2).unwrap();
        let mut chain = VertexChain::new(&lat, 1.0, 1.0, 8).unwrap();
        let mut seen = std::collections::HashSet::new();
        for _ in 0..2000 {
            chain.sweep();
            seen.insert(chain.reversed.clone());
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn deterministic() {
        let a = mc_sample_vertices(1.2, 0.8, 4, 20, 300, 42).unwrap();
        let b = mc_sample_vertices(1.2, 0.8, 4, 20, 300, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matches_enumeration_on_l2() {
        let spec = EightVertexSpectrum::cached(2).unwrap();
        let ([mc, md], cov) = spec.count_moments(1.2, 0.8);
        let est = mc_sample_vertices(1.2, 0.8, 2, 500, 50_000, 17).unwrap();
        assert!(est.mean_nc.agrees_with(mc, 3.0), "{:?} vs {mc}", est.mean_nc);
        assert!(est.mean_nd.agrees_with(md, 3.0), "{:?} vs {md}", est.mean_nd);
        assert!(est.var_nc.agrees_with(cov[0][0], 3.0));
        assert!(est.var_nd.agrees_with(cov[1][1], 3.0));
        assert!(est.cov.agrees_with(cov[0][1], 3.0));
    }

    #[test]
    fn two_seeds_agree_at_l4() {
        let a = mc_sample_vertices(1.0, 1.0, 4, 200, 20_000, 1).unwrap();
        let b = mc_sample_vertices(1.0, 1.0, 4, 200, 20_000, 2).unwrap();
        let z = (a.mean_nc.mean - b.mean_nc.mean).abs()
            / (a.mean_nc.std_error.powi(2) + b.mean_nc.std_error.powi(2)).sqrt();
        assert!(z < 3.0, "z = {z}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(mc_sample_vertices(0.0, 1.0, 4, 10, 200, 1).is_err());
        assert!(mc_sample_vertices(1.0, 1.0, 1, 10, 200, 1).is_err());
    }
}
