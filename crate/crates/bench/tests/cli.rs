use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cevbench");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn cevbench")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_price(o: &Output) -> f64 {
    let line = stdout(o);
    line.trim().split(',').nth(1).unwrap().parse().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn ncx2_quote_matches_table_value() {
    let o = run(&[
        "--engine", "ncx2", "--sigma", "0.5", "--alpha", "1.9", "--format", "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = csv_price(&o);
    assert!((p - 8.2636).abs() <= 1e-3 * 8.2636, "{p}");
}

#[test]
fn bs_quote_without_volatility_is_discounted_forward_payoff() {
    let o = run(&["--engine", "bs", "--sigma", "0", "--spot", "150", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let expected = (-0.025f64).exp() * (150.0 * 0.025f64.exp() - 110.0);
    assert!((csv_price(&o) - expected).abs() < 1e-10);
}

#[test]
fn semiclassical_human_line_reports_mode() {
    let o = run(&["--engine", "semiclassical", "--sigma", "0.2", "--alpha", "1.45"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("semiclassical price="), "{line}");
    assert!(line.contains("exponent_mode=transform_consistent"), "{line}");
    let p: f64 = line["semiclassical price=".len()..]
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((p - 0.0580).abs() <= 0.01 * 0.0580, "{p}");
}

#[test]
fn csv_quote_is_one_row() {
    let o = run(&[
        "--engine", "ncx2", "--alpha", "1.45", "--format", "csv", "--reps", "3", "--warmup", "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("ncx2,"));
}

#[test]
fn domain_errors_exit_with_two() {
    let o = run(&["--engine", "ncx2", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DomainError"), "{}", stderr(&o));
    let o = run(&["--engine", "semiclassical", "--spot=-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["--sigma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"sigmas":[0.5],"alphas":[1.9],"maturities":[0.5],"engines":["ncx2"],"repetitions":2,"warmup":0,"max_terms":3}"#,
    );
    let out = dir.path().join("out.csv").display().to_string();
    let o = run(&["sweep", "--config", &cfg, "--out", &out]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("SeriesNonConvergence"), "{}", stderr(&o));
}

#[test]
fn io_errors_exit_with_four() {
    let o = run(&[
        "sweep",
        "--config",
        "/nonexistent/config.json",
        "--out",
        "/tmp/never.csv",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_csv_header_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"sigmas":[0.5],"alphas":[1.45],"maturities":[0.5],"repetitions":3,"warmup":1}"#,
    );
    let out = dir.path().join("out.csv");
    let o = run(&["sweep", "--config", &cfg, "--out", &out.display().to_string()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sigma,alpha,maturity,engine,price,abs_err,rel_err,time_ns,diagnostics"
    );
    let engines: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(engines, ["semiclassical", "ncx2"]);
}

#[test]
fn single_cell_sweep_agrees_with_quote() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"sigmas":[0.9],"alphas":[1.0],"maturities":[0.5],"engines":["ncx2"],"repetitions":2,"warmup":0}"#,
    );
    let out = dir.path().join("out.csv");
    assert!(run(&["sweep", "--config", &cfg, "--out", &out.display().to_string()])
        .status
        .success());
    let text = fs::read_to_string(&out).unwrap();
    let row = text.lines().nth(1).unwrap();
    let swept: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    let quoted = csv_price(&run(&[
        "--engine", "ncx2", "--sigma", "0.9", "--alpha", "1", "--format", "csv",
    ]));
    assert_eq!(swept.to_bits(), quoted.to_bits());
}

fn price_column(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').take(5).collect::<Vec<_>>().join(","))
        .collect()
}

#[test]
fn seeded_sweeps_reproduce_prices() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"sigmas":[0.5],"alphas":[1.45,1.9],"maturities":[0.5],"engines":["semiclassical","ncx2","mc"],"repetitions":2,"warmup":0,"mc_paths":5000,"mc_steps":32}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, jobs) in [(&a, "1"), (&b, "2")] {
        let o = run(&[
            "sweep",
            "--config",
            &cfg,
            "--out",
            &path.display().to_string(),
            "--seed",
            "11",
            "--jobs",
            jobs,
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(price_column(&a), price_column(&b));
}

#[test]
fn surface_from_sweep_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"sigmas":[0.5,0.9],"alphas":[1.45],"maturities":[0.5],"repetitions":2,"warmup":0}"#,
    );
    let sweep = dir.path().join("sweep.csv").display().to_string();
    assert!(run(&["sweep", "--config", &cfg, "--out", &sweep]).status.success());
    let surface = dir.path().join("surface.csv");
    let svg = dir.path().join("surface.svg");
    let o = run(&[
        "surface",
        "--input",
        &sweep,
        "--out",
        &surface.display().to_string(),
        "--svg",
        &svg.display().to_string(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&surface).unwrap();
    assert_eq!(text.lines().next().unwrap(), "sigma,alpha,maturity,abs_err,rel_err");
    assert_eq!(text.lines().count(), 3);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn surface_rejects_inputs_without_required_columns() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "sigma,alpha,price\n0.5,1.45,1.0\n").unwrap();
    let out = dir.path().join("s.csv").display().to_string();
    let o = run(&["surface", "--input", &input.display().to_string(), "--out", &out]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("MissingColumn"), "{}", stderr(&o));
}

#[test]
fn header_only_input_gives_empty_surface() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.csv");
    fs::write(
        &input,
        "sigma,alpha,maturity,engine,price,abs_err,rel_err,time_ns,diagnostics\n",
    )
    .unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&[
        "surface",
        "--input",
        &input.display().to_string(),
        "--out",
        &out.display().to_string(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1);
}
