//! Oracle suite: closed forms and brute-force sums against the production
//! code paths. Every check is deterministic, so the report is too.

use crate::error::{io_err, Result};
use crate::sweep::format_f64;
use fidmet_core::analysis::finite_difference_metric;
use fidmet_core::analysis::finite_difference_tensor2;
use fidmet_core::eight_vertex::{
    enumerate_arrow_configs, mc_sample_vertices, scaling_exponent, z8v, EightVertexSpectrum, VertexWeights,
};
use fidmet_core::ising::{self, McParams, Sampler};
use fidmet_core::smf::{self, SmfSpectrum};
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    /// Allowed `|value - reference|`.
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let passed = (value - reference).abs() <= tolerance;
        Self {
            name: name.into(),
            value,
            reference,
            tolerance,
            passed,
        }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            name: format!("{}: {err}", name.into()),
            value: f64::NAN,
            reference: f64::NAN,
            tolerance: 0.0,
            passed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn num_failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "value", "reference", "tolerance", "passed"])?;
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                format_f64(c.value),
                format_f64(c.reference),
                format_f64(c.tolerance),
                c.passed.to_string(),
            ])?;
        }
        w.flush().map_err(io_err("<selftest output>"))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?).map_err(io_err(path))
    }
}

fn push(checks: &mut Vec<Check>, name: String, r: fidmet_core::Result<Check>) {
    checks.push(r.unwrap_or_else(|e| Check::failed(name, e)));
}

fn smf_checks(out: &mut Vec<Check>) {
    for l in [2usize, 3, 4] {
        for beta in [0.1, 0.3, 0.44, 0.7] {
            let name = format!("smf_mapping_L{l}_beta{beta}");
            push(out, name.clone(), (|| {
                let z_smf = smf::partition_function(beta, l)?;
                let z_ising = ising::ising_partition_enum(beta, l)?;
                Ok(Check::new(name, 2.0 * z_smf / z_ising, 1.0, 1e-12))
            })());
        }
    }
    for l in [2usize, 3] {
        for beta in [0.2, 0.44] {
            let name = format!("smf_metric_cv_route_L{l}_beta{beta}");
            push(out, name.clone(), (|| {
                let g = smf::metric_fluctuation(beta, l)?;
                let g_cv = smf::metric_from_specific_heat(beta, l)?;
                Ok(Check::new(name, g_cv / g, 1.0, 1e-10))
            })());
            let name = format!("smf_fd_error_ratio_L{l}_beta{beta}");
            push(out, name.clone(), (|| {
                let spec = SmfSpectrum::cached(l)?;
                let fd = finite_difference_metric(spec, &[beta], &[1.0], 1e-2)?;
                Ok(Check::new(name, fd.error_ratio(spec.metric(beta)), 4.0, 0.8))
            })());
        }
    }
    let name = "smf_metric_L2_beta0".to_string();
    push(out, name.clone(), smf::metric_fluctuation(0.0, 2).map(|g| Check::new(name, g, 4.0, 0.0)));
}

/// `-βf` of the infinite square lattice from Onsager's single integral,
/// by composite Simpson quadrature.
fn onsager_free_energy(beta: f64) -> f64 {
    use std::f64::consts::PI;
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

fn ising_checks(out: &mut Vec<Check>) {
    let name = "onsager_high_temperature".to_string();
    push(out, name.clone(), (|| {
        let beta = 1e-3;
        Ok(Check::new(name, ising::onsager_specific_heat(beta)? / (2.0 * beta * beta), 1.0, 1e-4))
    })());
    for beta in [0.3, 0.6] {
        let name = format!("onsager_vs_free_energy_curvature_beta{beta}");
        push(out, name.clone(), (|| {
            let d = 2e-4;
            let f = onsager_free_energy;
            let curv = (f(beta + d) - 2.0 * f(beta) + f(beta - d)) / (d * d);
            Ok(Check::new(name, ising::onsager_specific_heat(beta)?, beta * beta * curv, 1e-5))
        })());
    }
    for sampler in [Sampler::Wolff, Sampler::Metropolis] {
        let name = format!("ising_mc_{sampler:?}_L4_beta0.3").to_lowercase();
        push(out, name.clone(), (|| {
            let params = McParams {
                n_therm: 500,
                n_sweeps: 20_000,
                seed: 7,
                sampler,
            };
            let est = ising::mc_sample_energy_with(0.3, 4, &params)?;
            let exact = ising::specific_heat_exact(0.3, 4)?;
            Ok(Check::new(name, est.specific_heat.mean, exact, 3.0 * est.specific_heat.std_error))
        })());
    }
}

fn eight_vertex_checks(out: &mut Vec<Check>) {
    for (l, n) in [(2usize, 32.0), (3, 1024.0)] {
        let name = format!("8v_config_count_L{l}");
        push(out, name.clone(), enumerate_arrow_configs(l).map(|c| Check::new(name, c.len() as f64, n, 0.0)));
    }
    let name = "8v_z_kitaev_L2".to_string();
    push(out, name.clone(), (|| {
        Ok(Check::new(name, z8v(VertexWeights::new(1.0, 1.0)?, 2)?, 32.0, 1e-12))
    })());
    for &(c, d) in &[(0.3, 1.7), (2.2, 0.4), (1.1, 0.9)] {
        let name = format!("8v_z_symmetry_L3_c{c}_d{d}");
        push(out, name.clone(), (|| {
            let a = z8v(VertexWeights::new(c, d)?, 3)?;
            let b = z8v(VertexWeights::new(d, c)?, 3)?;
            Ok(Check::new(name, a / b, 1.0, 1e-12))
        })());
    }
    for &(u, v) in &[(1.0, 1.0), (1.2, 0.8), (0.6, 2.4)] {
        let base = format!("8v_u{u}_v{v}_L2");
        let res: fidmet_core::Result<Vec<Check>> = (|| {
            let spec = EightVertexSpectrum::cached(2)?;
            let exact = spec.metric(u, v);
            let fd = finite_difference_tensor2(spec, [u, v], 1e-2)?;
            let ratio_cd = (fd.tensor(0).g_cd - exact.g_cd) / (fd.tensor(1).g_cd - exact.g_cd);
            Ok(vec![
                Check::new(format!("{base}_fd_ratio_cc"), fd.xx.error_ratio(exact.g_cc), 4.0, 0.8),
                Check::new(format!("{base}_fd_ratio_dd"), fd.yy.error_ratio(exact.g_dd), 4.0, 0.8),
                Check::new(format!("{base}_fd_ratio_cd"), ratio_cd, 4.0, 0.8),
                Check::new(
                    format!("{base}_min_eigenvalue_nonneg"),
                    exact.min_eigenvalue().min(0.0),
                    0.0,
                    1e-12,
                ),
            ])
        })();
        match res {
            Ok(cs) => out.extend(cs),
            Err(e) => out.push(Check::failed(base, e)),
        }
    }
    for &(uv, expected) in &[(1.0, 0.0), (3.0, -0.5), (1.0 / 3.0, 1.0)] {
        let name = format!("8v_exponent_uv{uv:.4}");
        push(out, name.clone(), scaling_exponent(uv, 1.0).map(|s| Check::new(name, s.exponent, expected, 1e-12)));
    }
    let name = "8v_mc_mean_nc_L2_u1.2_v0.8".to_string();
    push(out, name.clone(), (|| {
        let spec = EightVertexSpectrum::cached(2)?;
        let ([mc, _], _) = spec.count_moments(1.2, 0.8);
        let est = mc_sample_vertices(1.2, 0.8, 2, 500, 20_000, 5)?;
        Ok(Check::new(name, est.mean_nc.mean, mc, 3.0 * est.mean_nc.std_error))
    })());
}

pub fn run_selftest() -> SelftestReport {
    let mut checks = Vec::new();
    smf_checks(&mut checks);
    ising_checks(&mut checks);
    eight_vertex_checks(&mut checks);
    SelftestReport { checks }
}
