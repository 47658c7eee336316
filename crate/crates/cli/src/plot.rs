//! Standalone matplotlib scripts for sweep CSVs. The scripts only select
//! columns and rows; all numbers come from the CSV.

use crate::error::{io_err, CliError, Result};
use std::path::{Component, Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotKind {
    /// One curve of `value` against `param1` per lattice size.
    #[value(name = "metric_vs_beta")]
    MetricVsBeta,
    /// Peak height against L on a log axis (rows with observable `peak_height`).
    #[value(name = "peak_scaling")]
    PeakScaling,
    /// Heat map of the `exponent` observable over `(param1, param2)`.
    #[value(name = "exponent_map")]
    ExponentMap,
}

impl PlotKind {
    pub fn required_columns(self) -> &'static [&'static str] {
        match self {
            PlotKind::MetricVsBeta => &["L", "param1", "observable", "value", "std_error"],
            PlotKind::PeakScaling => &["L", "param1", "observable", "value", "std_error"],
            PlotKind::ExponentMap => &["param1", "param2", "observable", "value"],
        }
    }
}

/// Path of `target` relative to directory `base`. Both are made absolute
/// against the current directory first.
pub fn relative_path(base: &Path, target: &Path) -> Result<PathBuf> {
    let cwd = std::env::current_dir().map_err(io_err("."))?;
    let abs = |p: &Path| normalize(&if p.is_absolute() { p.to_path_buf() } else { cwd.join(p) });
    let (base, target) = (abs(base), abs(target));
    let b: Vec<Component> = base.components().collect();
    let t: Vec<Component> = target.components().collect();
    let common = b.iter().zip(&t).take_while(|(x, y)| x == y).count();
    let mut out = PathBuf::new();
    for _ in common..b.len() {
        out.push("..");
    }
    for c in &t[common..] {
        out.push(c.as_os_str());
    }
    Ok(out)
}

fn normalize(p: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for c in p.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                out.pop();
            }
            other => out.push(other.as_os_str()),
        }
    }
    out
}

fn check_columns(csv_path: &Path, kind: PlotKind) -> Result<()> {
    let file = std::fs::File::open(csv_path).map_err(io_err(csv_path))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers()?;
    for &col in kind.required_columns() {
        if !headers.iter().any(|h| h == col) {
            return Err(CliError::MissingColumn(col.to_string()));
        }
    }
    Ok(())
}

const PRELUDE: &str = r#"import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
"#;

fn body(kind: PlotKind, observable: &str) -> String {
    match kind {
        PlotKind::MetricVsBeta => format!(
            r#"OBSERVABLE = {observable:?}

curves = {{}}
with open(CSV) as fh:
    for row in csv.DictReader(fh):
        if row["observable"] != OBSERVABLE:
            continue
        curves.setdefault(int(row["L"]), []).append(
            (float(row["param1"]), float(row["value"]), float(row["std_error"]))
        )

fig, ax = plt.subplots()
for size in sorted(curves):
    x, y, e = zip(*curves[size])
    ax.errorbar(x, y, yerr=e, marker="o", ms=3, label=f"L = {{size}}")
ax.set_xlabel("param1")
ax.set_ylabel(OBSERVABLE)
ax.legend()
"#
        ),
        PlotKind::PeakScaling => format!(
            r#"OBSERVABLE = {observable:?}

sizes, heights, errors = [], [], []
with open(CSV) as fh:
    for row in csv.DictReader(fh):
        if row["observable"] != OBSERVABLE:
            continue
        sizes.append(int(row["L"]))
        heights.append(float(row["value"]))
        errors.append(float(row["std_error"]))

fig, ax = plt.subplots()
ax.errorbar(sizes, heights, yerr=errors, marker="o", ls="")
ax.set_xscale("log")
ax.set_xlabel("L")
ax.set_ylabel(OBSERVABLE)
"#
        ),
        PlotKind::ExponentMap => format!(
            r#"OBSERVABLE = {observable:?}

u, v, z = [], [], []
with open(CSV) as fh:
    for row in csv.DictReader(fh):
        if row["observable"] != OBSERVABLE:
            continue
        u.append(float(row["param1"]))
        v.append(float(row["param2"]))
        z.append(float(row["value"]))

fig, ax = plt.subplots()
sc = ax.scatter(u, v, c=z, cmap="coolwarm", marker="s")
fig.colorbar(sc, ax=ax, label=OBSERVABLE)
ax.set_xlabel("u = c^2")
ax.set_ylabel("v = d^2")
"#
        ),
    }
}

/// Default observable plotted by each kind.
pub fn default_observable(kind: PlotKind) -> &'static str {
    match kind {
        PlotKind::MetricVsBeta => "g_bb",
        PlotKind::PeakScaling => "peak_height",
        PlotKind::ExponentMap => "exponent",
    }
}

/// Write a plotting script for `csv_path` to `script_path` and return its
/// text. The CSV is referenced relative to the script's directory.
pub fn emit_plot_script(
    csv_path: &Path,
    kind: PlotKind,
    observable: Option<&str>,
    script_path: &Path,
) -> Result<String> {
    check_columns(csv_path, kind)?;
    let script_dir = match script_path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let rel = relative_path(&script_dir, csv_path)?;
    let rel = rel.to_string_lossy().replace('\\', "/");
    let observable = observable.unwrap_or(default_observable(kind));
    let stem = script_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "plot".into());
    let text = format!(
        "{PRELUDE}CSV = os.path.join(HERE, {rel:?})\n\n{}\nfig.tight_layout()\nfig.savefig(os.path.join(HERE, {:?}))\n",
        body(kind, observable),
        format!("{stem}.png"),
    );
    std::fs::write(script_path, &text).map_err(io_err(script_path))?;
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_paths() {
        assert_eq!(relative_path(Path::new("/a/b"), Path::new("/a/c/d.csv")).unwrap(), PathBuf::from("../c/d.csv"));
        assert_eq!(relative_path(Path::new("/a"), Path::new("/a/d.csv")).unwrap(), PathBuf::from("d.csv"));
        assert_eq!(relative_path(Path::new("/a/./b/.."), Path::new("/a/x")).unwrap(), PathBuf::from("x"));
    }
}
