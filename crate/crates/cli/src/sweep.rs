//! Parameter sweeps and their CSV persistence.

use crate::error::{io_err, CliError, Result};
use fidmet_core::eight_vertex::{mc_sample_vertices, EightVertexSpectrum, EIGHT_VERTEX_MAX_L};
use fidmet_core::ising::{self, McParams, Sampler, ISING_MAX_L};
use fidmet_core::smf::{SmfSpectrum, SMF_MAX_L};
use rayon::prelude::*;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const CSV_HEADER: [&str; 9] = [
    "model",
    "method",
    "L",
    "param1",
    "param2",
    "observable",
    "value",
    "std_error",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Smf,
    Ising,
    EightVertex,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Smf => "smf",
            Model::Ising => "ising",
            Model::EightVertex => "eight_vertex",
        }
    }

    fn num_params(self) -> usize {
        match self {
            Model::EightVertex => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smf" => Ok(Model::Smf),
            "ising" => Ok(Model::Ising),
            "eight_vertex" | "8v" => Ok(Model::EightVertex),
            _ => Err(CliError::Usage(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Method {
    Enumerate,
    Mc,
    #[value(name = "exact_formula")]
    ExactFormula,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Enumerate => "enumerate",
            Method::Mc => "mc",
            Method::ExactFormula => "exact_formula",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "mc" => Ok(Method::Mc),
            "exact_formula" => Ok(Method::ExactFormula),
            _ => Err(CliError::Usage(format!("unknown method `{s}`"))),
        }
    }
}

/// Evenly spaced values `start..=stop`; a single value when `count == 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            count: 1,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == self.count - 1 {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Accepts `x` or `start:stop:count`.
impl FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        match parts.as_slice() {
            [x] => Ok(Axis::single(num(x)?)),
            [a, b, n] => {
                let count = n.trim().parse::<usize>().map_err(|e| format!("`{n}`: {e}"))?;
                Ok(Axis {
                    start: num(a)?,
                    stop: num(b)?,
                    count,
                })
            }
            _ => Err(format!("expected `x` or `start:stop:count`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// One parameter (β).
    Line(Axis),
    /// Cartesian product, first axis outermost.
    Rect(Axis, Axis),
    /// Paired points `(a_i, b_i)`; both axes must have the same count.
    Zip(Axis, Axis),
}

impl Grid {
    fn num_params(&self) -> usize {
        match self {
            Grid::Line(_) => 1,
            _ => 2,
        }
    }

    fn axes(&self) -> Vec<&Axis> {
        match self {
            Grid::Line(a) => vec![a],
            Grid::Rect(a, b) | Grid::Zip(a, b) => vec![a, b],
        }
    }

    /// Grid points in order; the second coordinate is `None` for a line.
    pub fn points(&self) -> Vec<(f64, Option<f64>)> {
        match self {
            Grid::Line(a) => a.points().into_iter().map(|x| (x, None)).collect(),
            Grid::Rect(a, b) => {
                let bs = b.points();
                a.points()
                    .into_iter()
                    .flat_map(|x| bs.iter().map(move |&y| (x, Some(y))))
                    .collect()
            }
            Grid::Zip(a, b) => a.points().into_iter().zip(b.points()).map(|(x, y)| (x, Some(y))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McSettings {
    pub n_therm: usize,
    pub n_sweeps: usize,
    pub seeds: Vec<u64>,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            n_therm: 1000,
            n_sweeps: 10_000,
            seeds: vec![1],
        }
    }
}

/// How eight-vertex grid values are given. Rows always report `(c², d²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Coords {
    /// `(u, v) = (c², d²)`.
    #[default]
    Squared,
    /// `(c, d)`, squared before evaluation.
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: Model,
    pub grid: Grid,
    pub coords: Coords,
    /// Ignored (a single `L = 0` row) for `exact_formula`.
    pub sizes: Vec<usize>,
    pub method: Method,
    pub mc: McSettings,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let spec_err = |m: String| Err(CliError::Spec(m));
        for axis in self.grid.axes() {
            if axis.count == 0 {
                return spec_err("grid counts must be >= 1".into());
            }
            if !axis.start.is_finite() || !axis.stop.is_finite() {
                return spec_err("grid bounds must be finite".into());
            }
        }
        if let Grid::Zip(a, b) = &self.grid {
            if a.count != b.count {
                return spec_err(format!("paired axes need equal counts ({} vs {})", a.count, b.count));
            }
        }
        if self.grid.num_params() != self.model.num_params() {
            return spec_err(format!(
                "{} takes {} parameter(s), grid has {}",
                self.model,
                self.model.num_params(),
                self.grid.num_params()
            ));
        }
        if self.coords == Coords::Plain {
            if self.model != Model::EightVertex {
                return spec_err("plain coordinates apply to eight_vertex only".into());
            }
            if self.grid.axes().iter().any(|a| a.start < 0.0 || a.stop < 0.0) {
                return spec_err("vertex weights c, d must be >= 0".into());
            }
        }
        if self.method != Method::ExactFormula && self.sizes.is_empty() {
            return spec_err("no lattice sizes given".into());
        }
        match (self.model, self.method) {
            (Model::EightVertex, Method::ExactFormula) => {
                return spec_err("eight_vertex has no exact_formula method; use 8v-exponent".into())
            }
            (_, Method::Mc) => {
                if self.mc.seeds.is_empty() {
                    return spec_err("Monte Carlo needs at least one seed".into());
                }
                let mut seeds = self.mc.seeds.clone();
                seeds.sort_unstable();
                seeds.dedup();
                if seeds.len() != self.mc.seeds.len() {
                    return spec_err("seeds must be unique".into());
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Largest L the enumeration method accepts for this model.
    pub fn enumeration_budget(&self) -> usize {
        match self.model {
            Model::Smf => SMF_MAX_L,
            Model::Ising => ISING_MAX_L,
            Model::EightVertex => EIGHT_VERTEX_MAX_L,
        }
    }
}

/// One CSV row. Equality compares floats bitwise so NaN in error rows
/// round-trips.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub model: Model,
    pub method: Method,
    pub l: usize,
    pub param1: f64,
    pub param2: Option<f64>,
    pub observable: String,
    pub value: f64,
    pub std_error: f64,
    pub seed: Option<u64>,
}

impl PartialEq for SweepRow {
    fn eq(&self, o: &Self) -> bool {
        self.model == o.model
            && self.method == o.method
            && self.l == o.l
            && self.param1.to_bits() == o.param1.to_bits()
            && self.param2.map(f64::to_bits) == o.param2.map(f64::to_bits)
            && self.observable == o.observable
            && self.value.to_bits() == o.value.to_bits()
            && self.std_error.to_bits() == o.std_error.to_bits()
            && self.seed == o.seed
    }
}

impl SweepRow {
    pub fn is_error(&self) -> bool {
        self.observable.starts_with("error:")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// 17 significant digits, enough to reproduce every f64 exactly.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepResult {
    pub fn rows_for<'a>(&'a self, observable: &'a str) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows.iter().filter(move |r| r.observable == observable)
    }

    pub fn num_errors(&self) -> usize {
        self.rows.iter().filter(|r| r.is_error()).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            w.write_record([
                r.model.as_str().to_string(),
                r.method.as_str().to_string(),
                r.l.to_string(),
                format_f64(r.param1),
                r.param2.map(format_f64).unwrap_or_default(),
                r.observable.clone(),
                format_f64(r.value),
                format_f64(r.std_error),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(io_err("<csv output>"))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(io_err(path))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::MissingColumn(name.to_string()))
        };
        let idx: Vec<usize> = CSV_HEADER.iter().map(|h| col(h)).collect::<Result<_>>()?;
        let mut rows = Vec::new();
        for (n, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let row_err = |msg: String| CliError::Row { row: n + 1, msg };
            let field = |k: usize| rec.get(idx[k]).unwrap_or("");
            let float = |k: usize| {
                field(k)
                    .parse::<f64>()
                    .map_err(|e| row_err(format!("{}: {e}", CSV_HEADER[k])))
            };
            rows.push(SweepRow {
                model: field(0).parse()?,
                method: field(1).parse()?,
                l: field(2).parse().map_err(|e| row_err(format!("L: {e}")))?,
                param1: float(3)?,
                param2: if field(4).is_empty() { None } else { Some(float(4)?) },
                observable: field(5).to_string(),
                value: float(6)?,
                std_error: float(7)?,
                seed: if field(8).is_empty() {
                    None
                } else {
                    Some(field(8).parse().map_err(|e| row_err(format!("seed: {e}")))?)
                },
            });
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(io_err(path))?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// One unit of work: a grid point at one size with one seed.
#[derive(Debug, Clone, Copy)]
struct Task {
    p1: f64,
    p2: Option<f64>,
    l: usize,
    seed: Option<u64>,
}

fn tasks(spec: &SweepSpec) -> Vec<Task> {
    let sizes: Vec<usize> = if spec.method == Method::ExactFormula {
        vec![0]
    } else {
        spec.sizes.clone()
    };
    let seeds: Vec<Option<u64>> = if spec.method == Method::Mc {
        spec.mc.seeds.iter().map(|&s| Some(s)).collect()
    } else {
        vec![None]
    };
    let mut out = Vec::new();
    for (mut p1, mut p2) in spec.grid.points() {
        if spec.coords == Coords::Plain {
            p1 *= p1;
            p2 = p2.map(|x| x * x);
        }
        for &l in &sizes {
            for &seed in &seeds {
                out.push(Task { p1, p2, l, seed });
            }
        }
    }
    out
}

type Obs = Vec<(&'static str, f64, f64)>;

fn evaluate(spec: &SweepSpec, t: &Task) -> fidmet_core::Result<Obs> {
    let mc = |seed: u64| McParams {
        n_therm: spec.mc.n_therm,
        n_sweeps: spec.mc.n_sweeps,
        seed,
        sampler: Sampler::Wolff,
    };
    let beta = t.p1;
    match (spec.model, spec.method) {
        (Model::Smf, Method::Enumerate) => {
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(fidmet_core::Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
            }
            let s = SmfSpectrum::cached(t.l)?;
            let g = s.metric(beta);
            Ok(vec![
                ("g_bb", g, 0.0),
                ("g_bb_per_site", g / (t.l * t.l) as f64, 0.0),
                ("m", s.magnetization(beta), 0.0),
                ("Z", s.partition_function(beta), 0.0),
            ])
        }
        (Model::Smf, Method::Mc) => {
            let est = ising::mc_sample_energy_with(beta, t.l, &mc(t.seed.unwrap_or(0)))?;
            let bonds = (2 * t.l * t.l) as f64;
            let n = (t.l * t.l) as f64;
            Ok(vec![
                ("g_bb", 0.25 * est.variance.mean, 0.25 * est.variance.std_error),
                ("g_bb_per_site", 0.25 * est.variance.mean / n, 0.25 * est.variance.std_error / n),
                ("m", est.energy.mean / bonds, est.energy.std_error / bonds),
            ])
        }
        (Model::Smf, Method::ExactFormula) => {
            // Thermodynamic limit, per site: C_v/(4β² L²).
            let c = ising::onsager_specific_heat(beta)?;
            Ok(vec![("g_bb_per_site", c / (4.0 * beta * beta), 0.0)])
        }
        (Model::Ising, Method::Enumerate) => {
            let dos = ising::ising_energy_histogram(t.l)?;
            let ([e], [[var]]) = dos.moments(&[-beta]);
            let n = (t.l * t.l) as f64;
            Ok(vec![("c_v", beta * beta * var / n, 0.0), ("e", e / n, 0.0)])
        }
        (Model::Ising, Method::Mc) => {
            let est = ising::mc_sample_energy_with(beta, t.l, &mc(t.seed.unwrap_or(0)))?;
            let n = (t.l * t.l) as f64;
            Ok(vec![
                ("c_v", est.specific_heat.mean, est.specific_heat.std_error),
                ("e", est.energy.mean / n, est.energy.std_error / n),
            ])
        }
        (Model::Ising, Method::ExactFormula) => Ok(vec![("c_v", ising::onsager_specific_heat(beta)?, 0.0)]),
        (Model::EightVertex, Method::Enumerate) => {
            let (u, v) = (t.p1, t.p2.unwrap_or(f64::NAN));
            let spec8 = EightVertexSpectrum::cached(t.l)?;
            let g = fidmet_core::eight_vertex::metric_fluctuations(u, v, t.l)?;
            let n = (t.l * t.l) as f64;
            Ok(vec![
                ("g_cc", g.g_cc, 0.0),
                ("g_dd", g.g_dd, 0.0),
                ("g_cd", g.g_cd, 0.0),
                ("g_cc_per_site", g.g_cc / n, 0.0),
                ("g_dd_per_site", g.g_dd / n, 0.0),
                ("g_cd_per_site", g.g_cd / n, 0.0),
                ("Z", spec8.log_z(u, v).exp(), 0.0),
            ])
        }
        (Model::EightVertex, Method::Mc) => {
            let (u, v) = (t.p1, t.p2.unwrap_or(f64::NAN));
            let est = mc_sample_vertices(u, v, t.l, spec.mc.n_therm, spec.mc.n_sweeps, t.seed.unwrap_or(0))?;
            let (g, e) = (est.metric(), est.metric_errors());
            let n = (t.l * t.l) as f64;
            Ok(vec![
                ("g_cc", g.g_cc, e.g_cc),
                ("g_dd", g.g_dd, e.g_dd),
                ("g_cd", g.g_cd, e.g_cd),
                ("g_cc_per_site", g.g_cc / n, e.g_cc / n),
                ("g_dd_per_site", g.g_dd / n, e.g_dd / n),
                ("g_cd_per_site", g.g_cd / n, e.g_cd / n),
                ("n_c", est.mean_nc.mean, est.mean_nc.std_error),
                ("n_d", est.mean_nd.mean, est.mean_nd.std_error),
            ])
        }
        (Model::EightVertex, Method::ExactFormula) => Err(fidmet_core::Error::InvalidParameter(
            "eight_vertex has no exact_formula method".into(),
        )),
    }
}

/// Run every task on the current rayon pool. Rows come back in grid order,
/// then size, then seed, whatever order the tasks finish in. Failures
/// become `error: ...` rows.
pub fn compute_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let rows: Vec<Vec<SweepRow>> = tasks(spec)
        .par_iter()
        .map(|t| {
            let row = |observable: String, value: f64, std_error: f64| SweepRow {
                model: spec.model,
                method: spec.method,
                l: t.l,
                param1: t.p1,
                param2: t.p2,
                observable,
                value,
                std_error,
                seed: t.seed,
            };
            match evaluate(spec, t) {
                Ok(obs) => obs.into_iter().map(|(name, v, e)| row(name.to_string(), v, e)).collect(),
                Err(e) => vec![row(format!("error: {e}"), f64::NAN, f64::NAN)],
            }
        })
        .collect();
    Ok(SweepResult {
        rows: rows.into_iter().flatten().collect(),
    })
}

/// Compute the sweep and, if the spec names an output file, write it.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let result = compute_sweep(spec)?;
    if let Some(path) = &spec.output {
        result.save(path)?;
    }
    Ok(result)
}

/// Run `f` on a pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

/// `--threads` if given, else `FIDMET_THREADS`, else 0 (automatic).
pub fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("FIDMET_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("FIDMET_THREADS must be a non-negative integer, got `{s}`"))),
        _ => Ok(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smf_spec() -> SweepSpec {
        SweepSpec {
            model: Model::Smf,
            grid: Grid::Line("0.1:0.7:13".parse().unwrap()),
            coords: Coords::Squared,
            sizes: vec![2, 3],
            method: Method::Enumerate,
            mc: McSettings::default(),
            output: None,
        }
    }

    #[test]
    fn axis_parsing_and_endpoints() {
        let a: Axis = "0.1:0.7:13".parse().unwrap();
        let p = a.points();
        assert_eq!(p.len(), 13);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[12], 0.7);
        assert_eq!("0.3".parse::<Axis>().unwrap().points(), vec![0.3]);
        assert!("1:2".parse::<Axis>().is_err());
    }

    #[test]
    fn smf_row_counts() {
        let r = compute_sweep(&smf_spec()).unwrap();
        for obs in ["g_bb", "g_bb_per_site", "m", "Z"] {
            assert_eq!(r.rows_for(obs).count(), 26);
        }
        assert_eq!(r.rows.len(), 104);
        // grid index outermost, then size
        assert_eq!((r.rows[0].l, r.rows[4].l, r.rows[8].l), (2, 3, 2));
        assert!(r.rows.iter().all(|row| row.std_error == 0.0 && row.seed.is_none()));
    }

    #[test]
    fn kitaev_point_on_diagonal_line() {
        let spec = SweepSpec {
            model: Model::EightVertex,
            grid: Grid::Zip("0.5:1.5:11".parse().unwrap(), "0.5:1.5:11".parse().unwrap()),
            coords: Coords::Squared,
            sizes: vec![2],
            method: Method::Enumerate,
            mc: McSettings::default(),
            output: None,
        };
        let r = compute_sweep(&spec).unwrap();
        let kitaev: Vec<_> = r
            .rows_for("Z")
            .filter(|row| row.param1 == 1.0 && row.param2 == Some(1.0))
            .collect();
        assert_eq!(kitaev.len(), 1);
        assert!((kitaev[0].value - 32.0).abs() < 1e-12);
    }

    #[test]
    fn plain_coordinates_are_squared() {
        let spec = SweepSpec {
            model: Model::EightVertex,
            grid: Grid::Rect(Axis::single(2.0), Axis::single(0.5)),
            coords: Coords::Plain,
            sizes: vec![2],
            method: Method::Enumerate,
            mc: McSettings::default(),
            output: None,
        };
        let r = compute_sweep(&spec).unwrap();
        assert_eq!((r.rows[0].param1, r.rows[0].param2), (4.0, Some(0.25)));
    }

    #[test]
    fn budget_violations_become_error_rows() {
        let mut spec = smf_spec();
        spec.sizes = vec![2, 6];
        let r = compute_sweep(&spec).unwrap();
        assert_eq!(r.num_errors(), 13);
        assert_eq!(r.rows_for("g_bb").count(), 13);
    }

    #[test]
    fn csv_round_trip() {
        let mut spec = smf_spec();
        spec.sizes = vec![2, 6];
        let r = compute_sweep(&spec).unwrap();
        let text = r.to_csv_string().unwrap();
        assert!(text.starts_with("model,method,L,param1,param2,observable,value,std_error,seed\n"));
        let back = SweepResult::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn spec_validation() {
        let mut spec = smf_spec();
        spec.method = Method::Mc;
        spec.mc.seeds = vec![3, 3];
        assert!(spec.validate().is_err());
        let mut spec = smf_spec();
        spec.grid = Grid::Line(Axis {
            start: 0.1,
            stop: 0.2,
            count: 0,
        });
        assert!(spec.validate().is_err());
        let mut spec = smf_spec();
        spec.grid = Grid::Rect(Axis::single(1.0), Axis::single(1.0));
        assert!(spec.validate().is_err());
    }

    #[test]
    fn missing_column_is_named() {
        let text = "model,method,L,param1,param2,observable,value,seed\n";
        match SweepResult::read_csv(text.as_bytes()) {
            Err(CliError::MissingColumn(c)) => assert_eq!(c, "std_error"),
            other => panic!("{other:?}"),
        }
    }
}
