//! Stochastic-matrix-form toric code.
//!
//! The ground state is a Boltzmann-weighted superposition over the group `G`
//! generated by the star operators,
//!
//! ```text
//! |gs(β)> = Σ_g exp(-β E(g) / 2) / sqrt(Z(β)) · g|0>,   E(g) = Σ_i σ_i^z(g),
//! ```
//!
//! so every ground-state quantity is a sum over `G`. An element `g` is the
//! set of stars it applies; flipping every star is the identity on the
//! torus, so subsets are taken modulo complement and the star at site 0 is
//! never stored. With `θ_s = -1` for applied stars, `σ_i = θ_s θ_s'` on each
//! bond and `E(g)` is the energy of an antiferromagnetic Ising model.
//!
//! The fidelity metric is `g_ββ = ¼ Var_β(E)`, i.e. `C_v / (4β²)` with the
//! extensive specific heat `C_v = β² Var(E)`.

use crate::dos::DensityOfStates;
use crate::error::{Error, Result};
use crate::ising;
use crate::lattice::TorusLattice;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Largest L for which `G` (2^(L²-1) elements) is enumerated.
pub const SMF_MAX_L: usize = 5;

/// Critical coupling `½ ln(1 + √2)`.
pub fn beta_c() -> f64 {
    0.5 * (1.0 + 2.0_f64.sqrt()).ln()
}

/// A group element as a canonical set of applied stars (site 0 excluded).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarSubset {
    members: Vec<bool>,
}

impl StarSubset {
    /// Canonical element for the given set of star sites. A set containing
    /// site 0 is replaced by its complement, which is the same operator.
    pub fn new(lattice: &TorusLattice, sites: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = lattice.num_sites();
        let mut members = vec![false; n];
        for s in sites {
            if s >= n {
                return Err(Error::IndexOutOfRange {
                    what: "star",
                    index: s,
                    len: n,
                });
            }
            members[s] = true;
        }
        if members[0] {
            members.iter_mut().for_each(|m| *m = !*m);
        }
        Ok(Self { members })
    }

    pub fn identity(lattice: &TorusLattice) -> Self {
        Self {
            members: vec![false; lattice.num_sites()],
        }
    }

    /// Element number `index` in `0..2^(L²-1)`: bit k applies the star at
    /// site k + 1.
    pub fn from_index(lattice: &TorusLattice, index: u64) -> Result<Self> {
        let n = lattice.num_sites();
        if n > 64 || (n - 1 < 64 && index >> (n - 1) != 0) {
            return Err(Error::InvalidParameter(format!(
                "group element index {index} out of range for L = {}",
                lattice.size()
            )));
        }
        let mut members = vec![false; n];
        for (k, m) in members.iter_mut().enumerate().skip(1) {
            *m = (index >> (k - 1)) & 1 == 1;
        }
        Ok(Self { members })
    }

    pub fn contains(&self, site: usize) -> bool {
        self.members.get(site).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(s, &m)| m.then_some(s))
    }

    /// Classical Ising spin `θ_s` (−1 where a star is applied).
    pub fn theta(&self, site: usize) -> i64 {
        if self.contains(site) {
            -1
        } else {
            1
        }
    }

    fn check(&self, lattice: &TorusLattice) -> Result<()> {
        if self.members.len() != lattice.num_sites() {
            return Err(Error::InvalidParameter(format!(
                "star subset built for {} sites used on a lattice with {}",
                self.members.len(),
                lattice.num_sites()
            )));
        }
        Ok(())
    }
}

/// `σ_i^z` of every bond in the state `g|0>`.
pub fn bond_spins(lattice: &TorusLattice, g: &StarSubset) -> Result<Vec<i8>> {
    g.check(lattice)?;
    Ok(lattice
        .bond_endpoints()
        .iter()
        .map(|&[a, b]| (g.theta(a) * g.theta(b)) as i8)
        .collect())
}

/// `E(g) = Σ_i σ_i^z(g)`.
pub fn smf_energy(lattice: &TorusLattice, g: &StarSubset) -> Result<i64> {
    Ok(bond_spins(lattice, g)?.iter().map(|&s| s as i64).sum())
}

/// Energy histogram of the whole group for one lattice size.
#[derive(Debug, Clone)]
pub struct SmfSpectrum {
    l: usize,
    dos: DensityOfStates<1>,
}

const GRAY_CHUNK_BITS: u32 = 16;

impl SmfSpectrum {
    /// Enumerate all 2^(L²-1) canonical elements with a Gray-code walk, in
    /// parallel over fixed index ranges. Counts are integers, so the result
    /// does not depend on how the range is split.
    pub fn enumerate(l: usize) -> Result<Self> {
        let lattice = TorusLattice::new(l)?;
        if l > SMF_MAX_L {
            return Err(Error::BudgetExceeded {
                what: "SMF group",
                l,
                max: SMF_MAX_L,
            });
        }
        let n = lattice.num_sites();
        let free_bits = (n - 1) as u32;
        let total: u64 = 1 << free_bits;
        let chunk_bits = GRAY_CHUNK_BITS.min(free_bits);
        let chunk: u64 = 1 << chunk_bits;
        let nbr = lattice.neighbor_table();
        let offset = 2 * n as i64;

        let hist = (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                let mut hist = vec![0u64; 4 * n + 1];
                let start = c * chunk;
                let gray = start ^ (start >> 1);
                let mut theta = vec![1i64; n];
                for (k, t) in theta.iter_mut().enumerate().skip(1) {
                    if (gray >> (k - 1)) & 1 == 1 {
                        *t = -1;
                    }
                }
                let mut e: i64 = lattice
                    .bond_endpoints()
                    .iter()
                    .map(|&[a, b]| theta[a] * theta[b])
                    .sum();
                hist[(e + offset) as usize] += 1;
                for i in start + 1..start + chunk {
                    let s = i.trailing_zeros() as usize + 1;
                    let field: i64 = nbr[s].iter().map(|&t| theta[t]).sum();
                    e -= 2 * theta[s] * field;
                    theta[s] = -theta[s];
                    hist[(e + offset) as usize] += 1;
                }
                hist
            })
            .reduce(
                || vec![0u64; 4 * n + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );

        let counts: BTreeMap<[i64; 1], u64> = hist
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| ([i as i64 - offset], c))
            .collect();
        Ok(Self {
            l,
            dos: DensityOfStates::from_counts(counts),
        })
    }

    /// Shared spectrum for size `l`, enumerated once per process.
    pub fn cached(l: usize) -> Result<&'static Self> {
        static CACHE: [OnceLock<SmfSpectrum>; SMF_MAX_L + 1] =
            [const { OnceLock::new() }; SMF_MAX_L + 1];
        if l < 2 {
            return Err(Error::LatticeTooSmall(l));
        }
        if l > SMF_MAX_L {
            return Err(Error::BudgetExceeded {
                what: "SMF group",
                l,
                max: SMF_MAX_L,
            });
        }
        if let Some(s) = CACHE[l].get() {
            return Ok(s);
        }
        let s = Self::enumerate(l)?;
        Ok(CACHE[l].get_or_init(|| s))
    }

    pub fn size(&self) -> usize {
        self.l
    }

    pub fn num_bonds(&self) -> usize {
        2 * self.l * self.l
    }

    /// `(E, multiplicity)` pairs in increasing energy.
    pub fn levels(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.dos.entries().iter().map(|&([e], n)| (e, n))
    }

    pub fn group_order(&self) -> u64 {
        self.dos.total()
    }

    pub fn log_partition_function(&self, beta: f64) -> f64 {
        self.dos.log_partition(&[-beta])
    }

    pub fn partition_function(&self, beta: f64) -> f64 {
        self.log_partition_function(beta).exp()
    }

    /// `1 - F(β1, β2)`, free of cancellation.
    pub fn infidelity(&self, beta1: f64, beta2: f64) -> f64 {
        self.dos.infidelity(&[-beta1], &[-beta2])
    }

    /// `F(β1, β2) = Σ_g exp(-(β1+β2)E/2) / sqrt(Z(β1) Z(β2))`.
    pub fn fidelity(&self, beta1: f64, beta2: f64) -> f64 {
        1.0 - self.infidelity(beta1, beta2)
    }

    /// `(⟨E⟩, Var(E))` under `p(g) ∝ exp(-βE(g))`.
    pub fn energy_moments(&self, beta: f64) -> (f64, f64) {
        let ([m], [[v]]) = self.dos.moments(&[-beta]);
        (m, v)
    }

    /// `g_ββ = ¼ (⟨E²⟩ - ⟨E⟩²)`.
    pub fn metric(&self, beta: f64) -> f64 {
        0.25 * self.energy_moments(beta).1
    }

    /// `m = ⟨E⟩ / (number of bonds)`.
    pub fn magnetization(&self, beta: f64) -> f64 {
        self.energy_moments(beta).0 / self.num_bonds() as f64
    }

    /// `dm/dβ = -Var(E) / (number of bonds)`.
    pub fn magnetization_slope(&self, beta: f64) -> f64 {
        -self.energy_moments(beta).1 / self.num_bonds() as f64
    }
}

/// Exact ground state at a given β.
#[derive(Debug, Clone)]
pub struct SmfGroundState {
    beta: f64,
    lattice: TorusLattice,
    log_z: f64,
}

impl SmfGroundState {
    pub fn new(beta: f64, l: usize) -> Result<Self> {
        check_beta(beta)?;
        let spectrum = SmfSpectrum::cached(l)?;
        Ok(Self {
            beta,
            lattice: TorusLattice::new(l)?,
            log_z: spectrum.log_partition_function(beta),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    /// `ψ(g) = exp(-β E(g) / 2) / sqrt(Z)`.
    pub fn amplitude(&self, g: &StarSubset) -> Result<f64> {
        let e = smf_energy(&self.lattice, g)? as f64;
        Ok((-0.5 * self.beta * e - 0.5 * self.log_z).exp())
    }

    /// `Σ_g ψ(g)²` by explicit iteration over the group.
    pub fn norm_squared(&self) -> Result<f64> {
        let n = self.lattice.num_sites();
        let order = 1u64 << (n - 1);
        let mut acc = crate::numerics::CompensatedSum::new();
        for idx in 0..order {
            let g = StarSubset::from_index(&self.lattice, idx)?;
            let a = self.amplitude(&g)?;
            acc.add(a * a);
        }
        Ok(acc.value())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
    }
    Ok(())
}

/// `Z(β)` by exact enumeration of `G`.
pub fn partition_function(beta: f64, l: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok(SmfSpectrum::cached(l)?.partition_function(beta))
}

/// Ground-state overlap `F(β1, β2)`.
pub fn fidelity(beta1: f64, beta2: f64, l: usize) -> Result<f64> {
    check_beta(beta1)?;
    check_beta(beta2)?;
    Ok(SmfSpectrum::cached(l)?.fidelity(beta1, beta2))
}

/// `g_ββ = ¼ Var_β(E)` from the exact energy distribution.
pub fn metric_fluctuation(beta: f64, l: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok(SmfSpectrum::cached(l)?.metric(beta))
}

/// `g_ββ = C_v / (4β²)` with the extensive specific heat of the mapped
/// Ising model, computed by brute-force Ising enumeration.
pub fn metric_from_specific_heat(beta: f64, l: usize) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "C_v/(4β²) needs β > 0 (got {beta}); use metric_fluctuation at β = 0"
        )));
    }
    let per_site = ising::specific_heat_exact(beta, l)?;
    let extensive = per_site * (l * l) as f64;
    Ok(extensive / (4.0 * beta * beta))
}

/// `m(β) = ⟨E⟩_β / (2L²)`.
pub fn magnetization(beta: f64, l: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok(SmfSpectrum::cached(l)?.magnetization(beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spins_of_trivial_subsets() {
        let lat = TorusLattice::new(3).unwrap();
        let empty = StarSubset::identity(&lat);
        assert!(bond_spins(&lat, &empty).unwrap().iter().all(|&s| s == 1));
        let full = StarSubset::new(&lat, 0..9).unwrap();
        assert!(full.is_empty());
        assert!(bond_spins(&lat, &full).unwrap().iter().all(|&s| s == 1));
        let single = StarSubset::new(&lat, [4]).unwrap();
        let flipped = bond_spins(&lat, &single).unwrap().iter().filter(|&&s| s == -1).count();
        assert_eq!(flipped, 4);
    }

    #[test]
    fn complement_is_same_element() {
        let lat = TorusLattice::new(3).unwrap();
        let a = StarSubset::new(&lat, [1, 5, 7]).unwrap();
        let b = StarSubset::new(&lat, (0..9).filter(|s| ![1, 5, 7].contains(s))).unwrap();
        assert_eq!(a, b);
        assert_eq!(bond_spins(&lat, &a).unwrap(), bond_spins(&lat, &b).unwrap());
    }

    #[test]
    fn energies() {
        let lat = TorusLattice::new(3).unwrap();
        assert_eq!(smf_energy(&lat, &StarSubset::identity(&lat)).unwrap(), 18);
        assert_eq!(smf_energy(&lat, &StarSubset::new(&lat, [3]).unwrap()).unwrap(), 10);
        let lat = TorusLattice::new(2).unwrap();
        assert_eq!(smf_energy(&lat, &StarSubset::new(&lat, [1]).unwrap()).unwrap(), 0);
    }

    #[test]
    fn from_index_is_bijective_on_l2() {
        let lat = TorusLattice::new(2).unwrap();
        let all: std::collections::HashSet<_> =
            (0..8).map(|i| StarSubset::from_index(&lat, i).unwrap()).collect();
        assert_eq!(all.len(), 8);
        assert!(StarSubset::from_index(&lat, 8).is_err());
        assert!(all.iter().all(|g| !g.contains(0)));
    }

    #[test]
    fn l2_energy_table() {
        // Direct evaluation over the 8 canonical elements.
        let lat = TorusLattice::new(2).unwrap();
        let mut es: Vec<i64> = (0..8)
            .map(|i| smf_energy(&lat, &StarSubset::from_index(&lat, i).unwrap()).unwrap())
            .collect();
        es.sort();
        assert_eq!(es, vec![-8, 0, 0, 0, 0, 0, 0, 8]);
        let spec = SmfSpectrum::enumerate(2).unwrap();
        let levels: Vec<_> = spec.levels().collect();
        assert_eq!(levels, vec![(-8, 1), (0, 6), (8, 1)]);
    }

    #[test]
    fn gray_walk_matches_direct_energies_on_l4() {
        let lat = TorusLattice::new(4).unwrap();
        let mut direct = BTreeMap::new();
        for i in 0..(1u64 << 15) {
            let e = smf_energy(&lat, &StarSubset::from_index(&lat, i).unwrap()).unwrap();
            *direct.entry(e).or_insert(0u64) += 1;
        }
        let spec = SmfSpectrum::enumerate(4).unwrap();
        let walked: BTreeMap<i64, u64> = spec.levels().collect();
        assert_eq!(walked, direct);
        assert_eq!(spec.group_order(), 1 << 15);
    }

    #[test]
    fn budget() {
        assert!(matches!(SmfSpectrum::enumerate(6), Err(Error::BudgetExceeded { .. })));
        assert!(partition_function(0.1, 6).is_err());
        assert!(SmfSpectrum::enumerate(1).is_err());
    }

    #[test]
    fn z_at_zero_and_large_beta() {
        assert!((partition_function(0.0, 2).unwrap() - 8.0).abs() < 1e-12);
        let beta = 20.0;
        let z = partition_function(beta, 2).unwrap();
        assert!((z / (8.0 * beta).exp() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn metric_at_beta_zero_l2() {
        assert_eq!(metric_fluctuation(0.0, 2).unwrap(), 4.0);
        assert!(metric_fluctuation(30.0, 2).unwrap() < 1e-20);
    }

    #[test]
    fn fidelity_basics() {
        for l in 2..=4 {
            assert_eq!(fidelity(0.37, 0.37, l).unwrap(), 1.0);
            let a = fidelity(0.1, 0.5, l).unwrap();
            let b = fidelity(0.5, 0.1, l).unwrap();
            assert!((a - b).abs() <= 1e-14);
            assert!(a > 0.0 && a < 1.0);
        }
        // Direct overlap over the L = 2 energy table.
        let z = |b: f64| (8.0 * b).exp() + 6.0 + (-8.0 * b).exp();
        let direct = (z(0.1) / (z(0.0) * z(0.2)).sqrt()).min(1.0);
        assert!((fidelity(0.0, 0.2, 2).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn magnetization_limits() {
        for l in 2..=4 {
            assert!(magnetization(0.0, l).unwrap().abs() < 1e-15);
        }
        assert!((magnetization(40.0, 2).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization() {
        for (beta, l) in [(0.0, 2), (0.3, 3), (0.44, 4), (1.5, 3)] {
            let gs = SmfGroundState::new(beta, l).unwrap();
            assert!((gs.norm_squared().unwrap() - 1.0).abs() < 1e-12);
            let a = gs.amplitude(&StarSubset::new(gs.lattice(), [1]).unwrap()).unwrap();
            assert!(a > 0.0);
        }
    }

    #[test]
    fn specific_heat_route_rejects_zero_beta() {
        assert!(metric_from_specific_heat(0.0, 2).is_err());
    }
}
