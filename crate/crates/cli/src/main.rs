use clap::{Args, Parser, Subcommand};
use fidmet::config::merge_config_args;
use fidmet::fit_report::{fit_sweep, template_row, FitKind, FitReport, FitRequest};
use fidmet::plot::{emit_plot_script, PlotKind};
use fidmet::sweep::{resolve_threads, with_threads};
use fidmet::{run_selftest, run_sweep, Axis, CliError, Coords, Grid, McSettings, Method, Model, Result, SweepResult, SweepSpec};
use fidmet_core::eight_vertex::{phase_classifier, scaling_exponent};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

/// Comma-separated list, e.g. `2,3,4`.
#[derive(Debug, Clone)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: std::fmt::Display,
{
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<T>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

/// `lo:hi`.
#[derive(Debug, Clone, Copy)]
struct Window(f64, f64);

impl FromStr for Window {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Window(num(a)?, num(b)?))
    }
}

#[derive(Parser)]
#[command(name = "fidmet", version, about = "Ground-state fidelity metrics of the SMF toric code and the quantum eight-vertex model")]
#[command(args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Worker threads (0 = all cores); falls back to FIDMET_THREADS.
    #[arg(long)]
    threads: Option<usize>,
    /// `key = value` file of default flags; explicit flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct McArgs {
    #[arg(long, default_value_t = 1000)]
    n_therm: usize,
    #[arg(long, default_value_t = 10_000)]
    n_sweeps: usize,
    /// Seeds, comma separated; one run per seed.
    #[arg(long, alias = "seed", default_value = "1")]
    seeds: List<u64>,
}

impl McArgs {
    fn settings(&self) -> McSettings {
        McSettings {
            n_therm: self.n_therm,
            n_sweeps: self.n_sweeps,
            seeds: self.seeds.0.clone(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity metric g_ββ, m and Z of the SMF toric code over a β grid.
    #[command(name = "smf-sweep", args_override_self = true)]
    SmfSweep {
        /// β value or `start:stop:count`.
        #[arg(long)]
        beta: Axis,
        /// Lattice sizes, comma separated.
        #[arg(long = "L", alias = "sizes", default_value = "2,3")]
        sizes: List<usize>,
        #[arg(long, value_enum, default_value_t = Method::Enumerate)]
        method: Method,
        #[command(flatten)]
        mc: McArgs,
        /// CSV output (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Per-site specific heat and energy of the 2D Ising model.
    #[command(name = "ising-cv", args_override_self = true)]
    IsingCv {
        #[arg(long)]
        beta: Axis,
        #[arg(long = "L", alias = "sizes", default_value = "4")]
        sizes: List<usize>,
        #[arg(long, value_enum, default_value_t = Method::Enumerate)]
        method: Method,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Eight-vertex metric tensor over a (u, v) grid.
    #[command(name = "8v-sweep", args_override_self = true)]
    EightVertexSweep {
        #[arg(long)]
        u: Axis,
        #[arg(long)]
        v: Axis,
        /// Pair the u and v values instead of taking their product.
        #[arg(long)]
        line: bool,
        #[arg(long, value_enum, default_value_t = Coords::Squared)]
        coords: Coords,
        #[arg(long = "L", alias = "sizes", default_value = "2")]
        sizes: List<usize>,
        #[arg(long, value_enum, default_value_t = Method::Enumerate)]
        method: Method,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Scaling exponent π/μ - 2 and phase at (u, v), or a CSV over a grid.
    #[command(name = "8v-exponent", args_override_self = true)]
    EightVertexExponent {
        #[arg(long)]
        u: Axis,
        #[arg(long)]
        v: Axis,
        #[arg(long, value_enum, default_value_t = Coords::Squared)]
        coords: Coords,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit a scaling law or scan peaks in a sweep CSV.
    #[command(args_override_self = true)]
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: FitKind,
        #[arg(long)]
        observable: String,
        #[arg(long = "L")]
        l: Option<usize>,
        /// Critical parameter (default: β_c for `log`, 0 for `power`).
        #[arg(long)]
        critical: Option<f64>,
        /// Fit window `lo:hi` in the regressor.
        #[arg(long)]
        window: Option<Window>,
        /// Report output (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// For `peaks`: write the peak rows as a sweep CSV.
        #[arg(long)]
        peaks_csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the enumeration and finite-difference oracle suite.
    #[command(args_override_self = true)]
    Selftest {
        /// CSV report (default: none).
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a matplotlib script for a sweep CSV.
    #[command(args_override_self = true)]
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[arg(long)]
        observable: Option<String>,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn emit(result: &SweepResult, output: Option<&PathBuf>) -> Result<()> {
    if output.is_none() {
        let stdout = std::io::stdout();
        result.write_csv(stdout.lock())?;
    }
    if result.num_errors() > 0 {
        eprintln!("warning: {} error row(s) in output", result.num_errors());
    }
    Ok(())
}

fn sweep(spec: SweepSpec, common: &Common) -> Result<ExitCode> {
    let threads = resolve_threads(common.threads)?;
    let result = with_threads(threads, || run_sweep(&spec))??;
    emit(&result, spec.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn write_text(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.clone(), source }),
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn exponent(u: Axis, v: Axis, coords: Coords, output: Option<PathBuf>) -> Result<ExitCode> {
    let sq = |x: f64| if coords == Coords::Plain { x * x } else { x };
    if u.count == 1 && v.count == 1 && output.is_none() {
        let (uu, vv) = (sq(u.start), sq(v.start));
        let s = scaling_exponent(uu, vv)?;
        let p = phase_classifier(uu, vv);
        let text = format!(
            "u = {uu}\nv = {vv}\nmu = {}\npi_over_mu = {}\nexponent = {}\nclass = {:?}\nlog_correction = {}\nphase = {:?}\nphase_distance = {}\n",
            s.mu, s.pi_over_mu, s.exponent, s.class, s.log_correction, p.phase, p.distance
        );
        write_text(&text, None)?;
        return Ok(ExitCode::SUCCESS);
    }
    let mut rows = Vec::new();
    for (a, b) in Grid::Rect(u, v).points() {
        let (uu, vv) = (sq(a), sq(b.unwrap_or(f64::NAN)));
        let row = |observable: String, value: f64| fidmet::SweepRow {
            model: Model::EightVertex,
            method: Method::ExactFormula,
            l: 0,
            param1: uu,
            param2: Some(vv),
            observable,
            value,
            std_error: 0.0,
            seed: None,
        };
        match scaling_exponent(uu, vv) {
            Ok(s) => {
                rows.push(row("exponent".into(), s.exponent));
                rows.push(row("pi_over_mu".into(), s.pi_over_mu));
            }
            Err(e) => rows.push(row(format!("error: {e}"), f64::NAN)),
        }
    }
    let result = SweepResult { rows };
    if let Some(p) = &output {
        result.save(p)?;
    }
    emit(&result, output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::SmfSweep { beta, sizes, method, mc, output, common } => sweep(
            SweepSpec {
                model: Model::Smf,
                grid: Grid::Line(beta),
                coords: Coords::Squared,
                sizes: sizes.0,
                method,
                mc: mc.settings(),
                output,
            },
            &common,
        ),
        Command::IsingCv { beta, sizes, method, mc, output, common } => sweep(
            SweepSpec {
                model: Model::Ising,
                grid: Grid::Line(beta),
                coords: Coords::Squared,
                sizes: sizes.0,
                method,
                mc: mc.settings(),
                output,
            },
            &common,
        ),
        Command::EightVertexSweep { u, v, line, coords, sizes, method, mc, output, common } => sweep(
            SweepSpec {
                model: Model::EightVertex,
                grid: if line { Grid::Zip(u, v) } else { Grid::Rect(u, v) },
                coords,
                sizes: sizes.0,
                method,
                mc: mc.settings(),
                output,
            },
            &common,
        ),
        Command::EightVertexExponent { u, v, coords, output, common: _ } => exponent(u, v, coords, output),
        Command::Fit { input, kind, observable, l, critical, window, output, peaks_csv, common: _ } => {
            let result = SweepResult::load(&input)?;
            let critical = critical.unwrap_or(match kind {
                FitKind::Log => fidmet_core::ising::beta_c(),
                _ => 0.0,
            });
            let window = match (window, kind) {
                (Some(w), _) => (w.0, w.1),
                (None, FitKind::Log) => (f64::NEG_INFINITY, critical.next_down_compat()),
                (None, _) => (f64::MIN_POSITIVE, f64::INFINITY),
            };
            let req = FitRequest { kind, observable: observable.clone(), l, critical, window };
            let report = fit_sweep(&result, &req)?;
            write_text(&report.to_text(), output.as_ref())?;
            if let (Some(path), FitReport::Peaks(_)) = (&peaks_csv, &report) {
                if let Some(peaks) = template_row(&result, &observable).and_then(|t| report.peak_rows(&t)) {
                    peaks.save(path)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { output, common } => {
            let threads = resolve_threads(common.threads)?;
            let report = with_threads(threads, run_selftest)?;
            for c in &report.checks {
                println!(
                    "{} {}: value {:.10e}, reference {:.10e}, tolerance {:.3e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.reference,
                    c.tolerance
                );
            }
            if let Some(p) = &output {
                report.save(p)?;
            }
            if report.passed() {
                println!("selftest: all {} checks passed", report.checks.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("selftest: {} of {} checks failed", report.num_failed(), report.checks.len());
                Ok(ExitCode::from(1))
            }
        }
        Command::Plot { input, kind, observable, output, common: _ } => {
            emit_plot_script(&input, kind, observable.as_deref(), &output)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

trait NextDown {
    fn next_down_compat(self) -> f64;
}

impl NextDown for f64 {
    /// Largest float below `self` (for finite positive values).
    fn next_down_compat(self) -> f64 {
        if self > 0.0 && self.is_finite() {
            f64::from_bits(self.to_bits() - 1)
        } else {
            self
        }
    }
}

fn main() -> ExitCode {
    let argv = match merge_config_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
