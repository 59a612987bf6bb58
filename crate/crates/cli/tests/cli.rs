use std::path::Path;
use std::process::{Command, Output};

use frale_cli::svg::polyline_svg;

/// Runs the binary with a whitespace-separated argument line.
fn frale(args: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frale"));
    cmd.args(args.split_whitespace());
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, header: &str) -> Vec<f64> {
    csv.lines()
        .skip_while(|l| *l != header)
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

fn write_spec(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

const RADEMACHER: &str = r#"{"atoms": [{"x": -1.0, "rate": 0.5}, {"x": 1.0, "rate": 0.5}]}"#;

#[test]
fn brownian_kernel_column_is_one() {
    let o = frale("kernel --kind mg --hurst 0.5 --t 1 --points 512", &[]);
    assert_eq!(o.status.code(), Some(0));
    let values = column(&stdout(&o), "s,value");
    assert_eq!(values.len(), 512);
    assert!(values.iter().all(|&v| v == 1.0));
}

#[test]
fn divergent_moment_is_reported() {
    let o = frale("kernel --moment 4 --hurst 0.8 --kind mg --points 4", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().ends_with("divergent"));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let bad_h = frale("kernel --hurst 1.5", &[]);
    assert_eq!(bad_h.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_h.stderr).contains("Hurst"));
    assert_eq!(frale("kernel --hurst 0.7 --moment 1", &[]).status.code(), Some(2));
    assert_eq!(frale("kernel", &[]).status.code(), Some(2));
    let threads = frale("verify --suite constants --seed 1", &[("FRALE_THREADS", "0")]);
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn nonzero_mean_spec_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let biased = r#"{"atoms": [{"x": 1.0, "rate": 1.0}, {"x": -1.0, "rate": 0.4}]}"#;
    let spec = write_spec(dir.path(), "biased.json", biased);
    let o = frale(
        &format!("simulate --process mg --hurst 0.75 --spec {spec} --seed 3"),
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero mean"));
}

#[test]
fn simulation_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "spec.json", RADEMACHER);
    for process in ["mg", "mvn", "fbm", "mixed"] {
        let args = format!("simulate --process {process} --hurst 0.75 --spec {spec} --horizon 2 --grid 64 --seed 11");
        let a = frale(&args, &[("FRALE_THREADS", "1")]);
        let b = frale(&args, &[("FRALE_THREADS", "3")]);
        assert_eq!(
            a.status.code(),
            Some(0),
            "{process}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{process}");
        assert!(stdout(&a).starts_with("# process: "));
        assert_eq!(column(&stdout(&a), "t,value").len(), 65);
    }
    let run = |seed| {
        frale(
            &format!("simulate --process mvn --hurst 0.75 --spec {spec} --grid 64 --seed {seed}"),
            &[],
        )
    };
    assert_ne!(run(11).stdout, run(12).stdout);
}

#[test]
fn svg_is_a_function_of_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "spec.json", RADEMACHER);
    let csv = dir.path().join("path.csv");
    let svg = dir.path().join("path.svg");
    let o = frale(
        &format!(
            "simulate --process mg --hurst 0.25 --spec {spec} --seed 5 --out {} --svg {}",
            csv.display(),
            svg.display()
        ),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        std::fs::read_to_string(&svg).unwrap(),
        polyline_svg(&text, "value").unwrap()
    );
}

#[test]
fn pathwise_scheme_matches_jump_sum() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "spec.json", RADEMACHER);
    let run = |scheme: &str| {
        let o = frale(
            &format!("simulate --process mg --hurst 0.8 --spec {spec} --grid 16 --seed 9 --scheme {scheme}"),
            &[],
        );
        assert_eq!(o.status.code(), Some(0));
        column(&stdout(&o), "t,value")
    };
    let a = run("jump-sum");
    let b = run("pathwise-ibp");
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-6));
    let o = frale(
        &format!("simulate --process mvn --hurst 0.8 --spec {spec} --seed 9 --scheme pathwise-ibp"),
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_json_and_exit_codes() {
    let o = frale("verify --suite constants --seed 1", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["verdicts"][0]["status"], "pass");

    let o = frale("verify --suite qv --hurst 0.75 --seed 2", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let exponent = v["verdicts"][0]["details"]["fitted_exponent"].as_f64().unwrap();
    assert!((exponent - 0.5).abs() <= 0.1);

    let o = frale("verify --suite zeroprob --seed 3", &[]);
    assert_eq!(o.status.code(), Some(0));

    let o = frale("verify --suite covariance --seed 1 --budget 0", &[]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["complete"], false);
}

#[test]
fn verify_verdicts_do_not_depend_on_thread_count() {
    let verdicts = |threads| {
        let o = frale(
            "verify --suite covariance --seed 4 --paths 3000",
            &[("FRALE_THREADS", threads)],
        );
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["verdicts"].clone()
    };
    assert_eq!(verdicts("1"), verdicts("4"));
}
