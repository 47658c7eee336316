//! Classical and quantum eight-vertex model on the L×L torus.
//!
//! A configuration assigns an arrow to every bond. It is stored as a
//! reversal bit per bond relative to the reference orientation (horizontal
//! arrows point right, vertical arrows point up). Every site must have an
//! even number of incoming arrows, which is the same as an even number of
//! reversed incident bonds, so valid configurations are exactly the
//! even-degree subgraphs of the torus: 2^(L²+1) of them.
//!
//! Vertex types (arrows on the left/right/down/up bonds; Baxter's labels):
//!
//! | type | horizontal | vertical | class |
//! |------|------------|----------|-------|
//! | 1    | → →        | ↑ ↑      | a     |
//! | 2    | ← ←        | ↓ ↓      | a     |
//! | 3    | → →        | ↓ ↓      | b     |
//! | 4    | ← ←        | ↑ ↑      | b     |
//! | 5    | both in    | both out | c     |
//! | 6    | both out   | both in  | c     |
//! | 7    | all four in           || d     |
//! | 8    | all four out          || d     |
//!
//! With `a = b = 1` the classical weight is `c^n_c d^n_d`. The quantum
//! ground state is `ψ_C ∝ c^n_c d^n_d`, whose probabilities
//! `p_C ∝ u^n_c v^n_d` (`u = c²`, `v = d²`) form the classical model at
//! weights `(u, v)`. Everything here is parameterized by `(u, v)` unless a
//! function takes [`VertexWeights`].

mod mc;
mod scaling;

pub use mc::{mc_sample_vertices, VertexMcEstimate};
pub use scaling::{phase_classifier, scaling_exponent, DivergenceClass, Phase, PhasePoint, ScalingExponent};

use crate::dos::DensityOfStates;
use crate::error::{Error, Result};
use crate::lattice::TorusLattice;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Largest L for which configurations are enumerated (2^(2L²) candidates).
pub const EIGHT_VERTEX_MAX_L: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexType {
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
    D1,
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    A,
    B,
    C,
    D,
}

impl VertexType {
    /// Type from the reversal bits of the right, left, up and down bonds.
    /// Returns `None` if an odd number of them is reversed.
    pub fn from_reversals(right: bool, left: bool, up: bool, down: bool) -> Option<Self> {
        if (right ^ left) != (up ^ down) {
            return None;
        }
        Some(match (left == right, left, down) {
            (true, false, false) => Self::A1,
            (true, true, true) => Self::A2,
            (true, false, true) => Self::B1,
            (true, true, false) => Self::B2,
            // horizontal both in when the left bond keeps its orientation
            (false, false, true) => Self::C1,
            (false, true, false) => Self::C2,
            (false, false, false) => Self::D1,
            (false, true, true) => Self::D2,
        })
    }

    pub fn class(self) -> VertexClass {
        match self {
            Self::A1 | Self::A2 => VertexClass::A,
            Self::B1 | Self::B2 => VertexClass::B,
            Self::C1 | Self::C2 => VertexClass::C,
            Self::D1 | Self::D2 => VertexClass::D,
        }
    }

    /// The type obtained by reversing all four arrows.
    pub fn reversed(self) -> Self {
        match self {
            Self::A1 => Self::A2,
            Self::A2 => Self::A1,
            Self::B1 => Self::B2,
            Self::B2 => Self::B1,
            Self::C1 => Self::C2,
            Self::C2 => Self::C1,
            Self::D1 => Self::D2,
            Self::D2 => Self::D1,
        }
    }
}

/// Per-class vertex counts of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexCounts {
    pub n_a: usize,
    pub n_b: usize,
    pub n_c: usize,
    pub n_d: usize,
}

impl VertexCounts {
    pub fn total(&self) -> usize {
        self.n_a + self.n_b + self.n_c + self.n_d
    }

    fn add(&mut self, class: VertexClass) {
        match class {
            VertexClass::A => self.n_a += 1,
            VertexClass::B => self.n_b += 1,
            VertexClass::C => self.n_c += 1,
            VertexClass::D => self.n_d += 1,
        }
    }
}

/// An arrow configuration as one reversal bit per bond.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowConfig {
    reversed: Vec<bool>,
}

impl ArrowConfig {
    /// All arrows right/up.
    pub fn reference(lattice: &TorusLattice) -> Self {
        Self {
            reversed: vec![false; lattice.num_bonds()],
        }
    }

    /// Build from reversal bits, checking the parity rule at every site.
    pub fn from_reversals(lattice: &TorusLattice, reversed: Vec<bool>) -> Result<Self> {
        if reversed.len() != lattice.num_bonds() {
            return Err(Error::InvalidParameter(format!(
                "expected {} bonds, got {}",
                lattice.num_bonds(),
                reversed.len()
            )));
        }
        let cfg = Self { reversed };
        cfg.validate(lattice)?;
        Ok(cfg)
    }

    /// Bit b of `mask` reverses bond b. Does not validate.
    fn from_mask_unchecked(lattice: &TorusLattice, mask: u64) -> Self {
        Self {
            reversed: (0..lattice.num_bonds()).map(|b| (mask >> b) & 1 == 1).collect(),
        }
    }

    pub fn is_reversed(&self, bond: usize) -> bool {
        self.reversed[bond]
    }

    pub fn reversals(&self) -> &[bool] {
        &self.reversed
    }

    /// Reverse every arrow.
    pub fn reversed_all(&self) -> Self {
        Self {
            reversed: self.reversed.iter().map(|&r| !r).collect(),
        }
    }

    /// Number of arrows pointing into `site`.
    pub fn in_degree(&self, lattice: &TorusLattice, site: usize) -> Result<usize> {
        let [r, l, u, d] = lattice.star(site)?;
        Ok([
            self.reversed[r],
            !self.reversed[l],
            self.reversed[u],
            !self.reversed[d],
        ]
        .iter()
        .filter(|&&x| x)
        .count())
    }

    pub fn validate(&self, lattice: &TorusLattice) -> Result<()> {
        if self.reversed.len() != lattice.num_bonds() {
            return Err(Error::InvalidParameter("configuration size does not match lattice".into()));
        }
        for s in 0..lattice.num_sites() {
            if self.in_degree(lattice, s)? % 2 == 1 {
                return Err(Error::InvalidConfig(s));
            }
        }
        Ok(())
    }

    pub fn vertex_type(&self, lattice: &TorusLattice, site: usize) -> Result<VertexType> {
        let [r, l, u, d] = lattice.star(site)?;
        VertexType::from_reversals(
            self.reversed[r],
            self.reversed[l],
            self.reversed[u],
            self.reversed[d],
        )
        .ok_or(Error::InvalidConfig(site))
    }
}

/// Count vertices of each class.
pub fn classify_vertices(lattice: &TorusLattice, config: &ArrowConfig) -> Result<VertexCounts> {
    if config.reversed.len() != lattice.num_bonds() {
        return Err(Error::InvalidParameter("configuration size does not match lattice".into()));
    }
    let mut counts = VertexCounts::default();
    for s in 0..lattice.num_sites() {
        counts.add(config.vertex_type(lattice, s)?.class());
    }
    Ok(counts)
}

fn check_budget(l: usize) -> Result<TorusLattice> {
    let lattice = TorusLattice::new(l)?;
    if l > EIGHT_VERTEX_MAX_L {
        return Err(Error::BudgetExceeded {
            what: "eight-vertex",
            l,
            max: EIGHT_VERTEX_MAX_L,
        });
    }
    Ok(lattice)
}

/// Every valid configuration, found by screening all 2^(2L²) orientations
/// against the parity rule.
pub fn enumerate_arrow_configs(l: usize) -> Result<Vec<ArrowConfig>> {
    let lattice = check_budget(l)?;
    let site_masks: Vec<u64> = (0..lattice.num_sites())
        .map(|s| lattice.star(s).map(|bs| bs.iter().fold(0u64, |m, &b| m | 1 << b)))
        .collect::<Result<_>>()?;
    Ok((0..1u64 << lattice.num_bonds())
        .filter(|&mask| site_masks.iter().all(|&sm| (mask & sm).count_ones() % 2 == 0))
        .map(|mask| ArrowConfig::from_mask_unchecked(&lattice, mask))
        .collect())
}

/// Boltzmann weights with `a = b = 1`. In terms of vertex energies,
/// `c = exp(-ε_c/T)` and `d = exp(-ε_d/T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexWeights {
    pub c: f64,
    pub d: f64,
}

impl VertexWeights {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c >= 0.0 && d >= 0.0 && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "vertex weights must be finite and >= 0 (c = {c}, d = {d})"
            )));
        }
        Ok(Self { c, d })
    }

    /// `(c², d²)`, the quantum-state coordinates.
    pub fn squared(&self) -> (f64, f64) {
        (self.c * self.c, self.d * self.d)
    }
}

fn check_uv(u: f64, v: f64) -> Result<()> {
    VertexWeights::new(u, v).map(|_| ())
}

fn eta(u: f64, v: f64) -> [f64; 2] {
    [u.ln(), v.ln()]
}

/// Multiplicities of `(n_c, n_d)` over all valid configurations.
#[derive(Debug, Clone)]
pub struct EightVertexSpectrum {
    l: usize,
    dos: DensityOfStates<2>,
}

impl EightVertexSpectrum {
    pub fn enumerate(l: usize) -> Result<Self> {
        let lattice = check_budget(l)?;
        let mut counts = BTreeMap::new();
        for cfg in enumerate_arrow_configs(l)? {
            let vc = classify_vertices(&lattice, &cfg)?;
            *counts.entry([vc.n_c as i64, vc.n_d as i64]).or_insert(0u64) += 1;
        }
        Ok(Self {
            l,
            dos: DensityOfStates::from_counts(counts),
        })
    }

    pub fn cached(l: usize) -> Result<&'static Self> {
        static CACHE: [OnceLock<EightVertexSpectrum>; EIGHT_VERTEX_MAX_L + 1] =
            [const { OnceLock::new() }; EIGHT_VERTEX_MAX_L + 1];
        check_budget(l)?;
        if let Some(s) = CACHE[l].get() {
            return Ok(s);
        }
        let s = Self::enumerate(l)?;
        Ok(CACHE[l].get_or_init(|| s))
    }

    pub fn size(&self) -> usize {
        self.l
    }

    pub fn num_configs(&self) -> u64 {
        self.dos.total()
    }

    /// `((n_c, n_d), multiplicity)` pairs.
    pub fn levels(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.dos
            .entries()
            .iter()
            .map(|&([c, d], n)| ((c as usize, d as usize), n))
    }

    /// `ln Σ_C u^n_c v^n_d`.
    pub fn log_z(&self, u: f64, v: f64) -> f64 {
        self.dos.log_partition(&eta(u, v))
    }

    /// Classical partition function `Z(c, d) = Σ_C c^n_c d^n_d`.
    pub fn z(&self, weights: VertexWeights) -> f64 {
        self.log_z(weights.c, weights.d).exp()
    }

    pub fn infidelity(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        self.dos.infidelity(&eta(p.0, p.1), &eta(q.0, q.1))
    }

    pub fn fidelity(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        1.0 - self.infidelity(p, q)
    }

    /// Means and covariance of `(n_c, n_d)` under `p_C ∝ u^n_c v^n_d`.
    pub fn count_moments(&self, u: f64, v: f64) -> ([f64; 2], [[f64; 2]; 2]) {
        self.dos.moments(&eta(u, v))
    }

    pub fn metric(&self, u: f64, v: f64) -> MetricTensor2 {
        let (_, cov) = self.count_moments(u, v);
        MetricTensor2::from_counts_covariance(u, v, cov)
    }
}

/// Fidelity metric in coordinates `(c², d²)`:
/// `g_cc = Var(n_c)/(4u²)`, `g_dd = Var(n_d)/(4v²)`,
/// `g_cd = Cov(n_c, n_d)/(2uv)`.
///
/// `g_cd` multiplies `δu δv` once in `1 - F`, so the symmetric matrix of the
/// quadratic form is `[[g_cc, g_cd/2], [g_cd/2, g_dd]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor2 {
    pub g_cc: f64,
    pub g_dd: f64,
    pub g_cd: f64,
}

impl MetricTensor2 {
    pub fn from_counts_covariance(u: f64, v: f64, cov: [[f64; 2]; 2]) -> Self {
        Self {
            g_cc: cov[0][0] / (4.0 * u * u),
            g_dd: cov[1][1] / (4.0 * v * v),
            g_cd: cov[0][1] / (2.0 * u * v),
        }
    }

    pub fn quadratic_form(&self) -> [[f64; 2]; 2] {
        [[self.g_cc, 0.5 * self.g_cd], [0.5 * self.g_cd, self.g_dd]]
    }

    /// Metric along `direction`: `g_cc x² + g_dd y² + g_cd x y`.
    pub fn along(&self, direction: [f64; 2]) -> f64 {
        let [x, y] = direction;
        self.g_cc * x * x + self.g_dd * y * y + self.g_cd * x * y
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.quadratic_form();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mid - rad, mid + rad]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `g_cd² ≤ 4 g_cc g_dd`, with a relative slack for roundoff.
    pub fn satisfies_cauchy_schwarz(&self) -> bool {
        self.g_cd * self.g_cd <= 4.0 * self.g_cc * self.g_dd * (1.0 + 1e-12) + 1e-300
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            g_cc: self.g_cc * factor,
            g_dd: self.g_dd * factor,
            g_cd: self.g_cd * factor,
        }
    }
}

/// `Z(c, d)` by enumeration.
pub fn z8v(weights: VertexWeights, l: usize) -> Result<f64> {
    Ok(EightVertexSpectrum::cached(l)?.z(weights))
}

/// Normalized quantum ground state over all valid configurations.
#[derive(Debug, Clone)]
pub struct QuantumGroundState {
    pub u: f64,
    pub v: f64,
    pub configs: Vec<ArrowConfig>,
    pub counts: Vec<VertexCounts>,
    pub amplitudes: Vec<f64>,
    /// `Z(u, v)`, the classical partition function at weights `(c², d²)`.
    pub normalization: f64,
}

/// `ψ_C = c^n_c d^n_d / sqrt(Z(c², d²))` for every configuration, with
/// `u = c²` and `v = d²`.
pub fn quantum_amplitudes(u: f64, v: f64, l: usize) -> Result<QuantumGroundState> {
    check_uv(u, v)?;
    let lattice = check_budget(l)?;
    let spectrum = EightVertexSpectrum::cached(l)?;
    let log_z = spectrum.log_z(u, v);
    if log_z == f64::NEG_INFINITY {
        return Err(Error::Degenerate(format!(
            "every configuration has zero weight at (u, v) = ({u}, {v})"
        )));
    }
    let configs = enumerate_arrow_configs(l)?;
    let counts: Vec<VertexCounts> = configs
        .iter()
        .map(|c| classify_vertices(&lattice, c))
        .collect::<Result<_>>()?;
    let e = eta(u, v);
    let amplitudes = counts
        .iter()
        .map(|vc| {
            let lw = DensityOfStates::<2>::log_weight(&e, &[vc.n_c as i64, vc.n_d as i64]);
            (0.5 * (lw - log_z)).exp()
        })
        .collect();
    Ok(QuantumGroundState {
        u,
        v,
        configs,
        counts,
        amplitudes,
        normalization: log_z.exp(),
    })
}

/// `F = Σ_C sqrt(p_C(u, v) p_C(u', v'))`.
pub fn fidelity8v(p: (f64, f64), q: (f64, f64), l: usize) -> Result<f64> {
    check_uv(p.0, p.1)?;
    check_uv(q.0, q.1)?;
    let spectrum = EightVertexSpectrum::cached(l)?;
    for (u, v) in [p, q] {
        if spectrum.log_z(u, v) == f64::NEG_INFINITY {
            return Err(Error::Degenerate(format!("zero weight at ({u}, {v})")));
        }
    }
    Ok(spectrum.fidelity(p, q))
}

fn check_metric_point(u: f64, v: f64) -> Result<()> {
    if !(u > 0.0 && v > 0.0 && u.is_finite() && v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "metric needs u, v > 0 (got u = {u}, v = {v}); six-vertex boundaries are not supported"
        )));
    }
    Ok(())
}

/// Exact metric tensor from vertex-count fluctuations.
pub fn metric_fluctuations(u: f64, v: f64, l: usize) -> Result<MetricTensor2> {
    check_metric_point(u, v)?;
    Ok(EightVertexSpectrum::cached(l)?.metric(u, v))
}
