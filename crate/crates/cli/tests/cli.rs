use std::path::Path;
use std::process::{Command, Output};

fn fidmet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fidmet"))
        .args(args)
        .env_remove("FIDMET_THREADS")
        .output()
        .expect("run fidmet")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(csv: &str, observable: &str, col: usize) -> Vec<String> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>())
        .filter(|f| f[5] == observable)
        .map(|f| f[col].clone())
        .collect()
}

#[test]
fn exponent_at_kitaev_point() {
    let o = fidmet(&["8v-exponent", "--u", "1", "--v", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("exponent = 0\n"), "{text}");
    assert!(text.contains("class = Logarithmic"));
}

#[test]
fn ising_enumeration_and_mc_agree() {
    let exact = stdout(&fidmet(&["ising-cv", "--L", "4", "--beta", "0.3", "--method", "enumerate"]));
    let mc = stdout(&fidmet(&["ising-cv", "--L", "4", "--beta", "0.3", "--method", "mc", "--seed", "7"]));
    let e: f64 = field(&exact, "c_v", 6)[0].parse().unwrap();
    let m: f64 = field(&mc, "c_v", 6)[0].parse().unwrap();
    let s: f64 = field(&mc, "c_v", 7)[0].parse().unwrap();
    assert_eq!(field(&mc, "c_v", 8)[0], "7");
    assert!((m - e).abs() <= 3.0 * s, "{m} +- {s} vs {e}");
}

#[test]
fn unknown_flags_are_rejected() {
    let o = fidmet(&["smf-sweep", "--beta", "0.3", "--frobnicate", "1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--frobnicate"));
}

#[test]
fn config_file_merges_under_explicit_flags() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "# defaults\nbeta = 0.1:0.7:13\nL = 2,3   # two sizes\nmethod = enumerate\n").unwrap();
    let conf = conf.to_str().unwrap();

    let o = fidmet(&["smf-sweep", "--config", conf]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "g_bb", 6).len(), 26);

    let o = fidmet(&["smf-sweep", "--config", conf, "--L", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sizes = field(&stdout(&o), "g_bb", 2);
    assert_eq!(sizes.len(), 13);
    assert!(sizes.iter().all(|s| s == "2"));

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "nonsense = 1\n").unwrap();
    assert!(!fidmet(&["smf-sweep", "--beta", "0.3", "--config", bad.to_str().unwrap()]).status.success());
}

#[test]
fn threads_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fidmet"))
        .args(["smf-sweep", "--beta", "0.2", "--L", "2"])
        .env("FIDMET_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("FIDMET_THREADS"));
}

#[test]
fn budget_violation_is_an_error_row() {
    let o = fidmet(&["8v-sweep", "--u", "1", "--v", "1", "--L", "2,5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains(",5,") && l.contains("error:")), "{text}");
    assert_eq!(field(&text, "Z", 2), vec!["2"]);
}

#[test]
fn plain_coordinates_flag() {
    let sq = stdout(&fidmet(&["8v-sweep", "--u", "1.44", "--v", "0.64", "--L", "2"]));
    let plain = stdout(&fidmet(&["8v-sweep", "--u", "1.2", "--v", "0.8", "--coords", "plain", "--L", "2"]));
    let a: f64 = field(&sq, "g_cc", 6)[0].parse().unwrap();
    let b: f64 = field(&plain, "g_cc", 6)[0].parse().unwrap();
    assert!((a - b).abs() <= 1e-12 * a);
}

fn check_script(script: &Path, csv_name: &str) {
    let text = std::fs::read_to_string(script).unwrap();
    assert!(text.contains(&format!("{csv_name:?}")), "{text}");
    assert!(text.contains("matplotlib"));
}

#[test]
fn sweep_fit_and_plot_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data").join("smf.csv");
    std::fs::create_dir_all(csv.parent().unwrap()).unwrap();
    let csv_s = csv.to_str().unwrap();
    let o = fidmet(&["smf-sweep", "--beta", "0.1:0.7:13", "--L", "2,3", "--output", csv_s]);
    assert!(o.status.success());

    let plots = dir.path().join("plots");
    std::fs::create_dir_all(&plots).unwrap();
    let script = plots.join("metric.py");
    let o = fidmet(&["plot", "--input", csv_s, "--kind", "metric_vs_beta", "--output", script.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    check_script(&script, "../data/smf.csv");

    let cv = dir.path().join("cv.csv");
    let o = fidmet(&[
        "ising-cv", "--beta", "0.25:0.6:8", "--L", "4,8", "--method", "mc", "--n-sweeps", "4000", "--seeds", "3",
        "--output", cv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let peaks = dir.path().join("peaks.csv");
    let o = fidmet(&[
        "fit", "--input", cv.to_str().unwrap(), "--kind", "peaks", "--observable", "c_v",
        "--peaks-csv", peaks.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("model = peak_scan"));
    let script = dir.path().join("peaks.py");
    let o = fidmet(&["plot", "--input", peaks.to_str().unwrap(), "--kind", "peak_scaling", "--output", script.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    check_script(&script, "peaks.csv");

    let o = fidmet(&["fit", "--input", csv_s, "--kind", "log", "--observable", "g_bb", "--L", "4", "--window", "0.1:0.3"]);
    assert!(!o.status.success(), "no L = 4 rows in this sweep");

    let exp_csv = dir.path().join("exp.csv");
    let o = fidmet(&["8v-exponent", "--u", "0.2:3:8", "--v", "0.2:3:8", "--output", exp_csv.to_str().unwrap()]);
    assert!(o.status.success());
    let script = dir.path().join("map.py");
    let o = fidmet(&["plot", "--input", exp_csv.to_str().unwrap(), "--kind", "exponent_map", "--output", script.to_str().unwrap()]);
    assert!(o.status.success());
    check_script(&script, "exp.csv");
}

#[test]
fn plot_reports_missing_column() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("partial.csv");
    std::fs::write(&csv, "model,method,L,param1,param2,observable,value,seed\n").unwrap();
    let o = fidmet(&[
        "plot",
        "--input",
        csv.to_str().unwrap(),
        "--kind",
        "metric_vs_beta",
        "--output",
        dir.path().join("x.py").to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("`std_error`"));
}

#[test]
fn selftest_exits_zero() {
    let o = fidmet(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
}
