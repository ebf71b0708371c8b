use std::process::{Command, Output};

use outcome_types::cli::{self, Format, Report, RunSpec};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outcome-types"))
        .args(args)
        .env_remove(cli::SEED_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn estimate_degenerate_data() {
    let o = bin(&["estimate", "--g", "0,5,0,5", "--p", "0.5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "estimate");
    assert_eq!(v["estimate"]["t_hat"], serde_json::json!([10, 0, 0, 0]));
    assert_eq!(v["estimate"]["objective"], 0.0);
}

#[test]
fn reduced_form_prowess() {
    let o = bin(&["reduced-form", "--g", "210,640,259,581", "--format", "text"]);
    assert!(o.status.success());
    assert!(
        stdout(&o).contains("reduced form:                -0.0613"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn input_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let output = dir.path().join("out.json");
    std::fs::write(&input, r#"{"g": [3, 4, 2, 5], "p": 0.5, "seed": 4}"#).unwrap();
    let o = bin(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&output).unwrap();
    let direct = cli::run(
        &RunSpec::new(cli::Command::Estimate)
            .with_g([3, 4, 2, 5])
            .with_seed(4),
    )
    .unwrap();
    assert_eq!(written, direct.to_json());
}

#[test]
fn flags_override_the_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    std::fs::write(&input, r#"{"g": [3, 4, 2, 5], "p": 0.5}"#).unwrap();
    let o = bin(&[
        "reduced-form",
        "--input",
        input.to_str().unwrap(),
        "--g",
        "5,5,0,10",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reduced_form"], 0.5);
}

#[test]
fn malformed_input_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(
        &input,
        "{\n  \"g\": [1, 2, 3, 4],\n  \"p\": 0.5,\n  \"colour\": 1\n}",
    )
    .unwrap();
    let o = bin(&["estimate", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("unknown field `colour`") && err.contains("line 4"),
        "{err}"
    );

    std::fs::write(&input, r#"{"g": [1, 2, 3, 4], "p": "half"}"#).unwrap();
    let o = bin(&["estimate", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1 column"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    assert_eq!(
        bin(&["estimate", "--g", "1,1,1,1", "--p", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["estimate"]).status.code(), Some(2));
    assert_eq!(bin(&["estimate", "--g", "1,1,1"]).status.code(), Some(2));
    assert_eq!(
        bin(&["reduced-form", "--g", "0,0,3,3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bin(&["estimate", "--g", "1,1,1,1", "--mode", "fastest"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    let o = bin(&["mle", "--g", "100,100,100,100", "--mode", "exact"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("heuristic"));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn likelihood_of_impossible_data_is_null() {
    let o = bin(&["likelihood", "--g", "1,0,0,0", "--t", "1,0,0,0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["log_likelihood"].is_null());
    assert_eq!(v["probability"], 0.0);
    let o = bin(&["likelihood", "--g", "0,1,0,0", "--t", "1,0,0,0"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v["log_likelihood"],
        serde_json::json!(cli::sig12(0.5f64.ln()))
    );
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_outcome-types"));
        c.args(["bootstrap", "--g", "6,9,5,8", "--iterations", "30"]);
        match env {
            Some(s) => c.env(cli::SEED_ENV, s),
            None => c.env_remove(cli::SEED_ENV),
        };
        let v: serde_json::Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None), cli::DEFAULT_SEED);
    assert_eq!(run(Some("77")), 77);
}

#[test]
fn replicate_csv_stream() {
    let o = bin(&[
        "montecarlo",
        "--t",
        "20,8,6,6",
        "--iterations",
        "12",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "replicate,g1,g2,g3,g4,t1,t2,t3,t4,objective");
    assert_eq!(lines.len(), 13);
    for (k, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[0], k.to_string());
        let g: u64 = fields[1..5].iter().map(|f| f.parse::<u64>().unwrap()).sum();
        let t: u64 = fields[5..9].iter().map(|f| f.parse::<u64>().unwrap()).sum();
        assert_eq!((g, t), (40, 40));
    }
}

#[test]
fn json_reports_round_trip() {
    let specs = [
        RunSpec::new(cli::Command::Estimate)
            .with_g([7, 12, 9, 10])
            .with_p(0.4),
        RunSpec::new(cli::Command::Likelihood)
            .with_g([2, 3, 1, 4])
            .with_t([4, 2, 1, 3])
            .with_p(0.3),
        RunSpec::new(cli::Command::Mle).with_g([4, 6, 5, 5]),
        RunSpec::new(cli::Command::Bootstrap)
            .with_g([8, 14, 10, 12])
            .with_iterations(40),
        RunSpec::new(cli::Command::Montecarlo)
            .with_t([15, 6, 4, 5])
            .with_iterations(40),
        RunSpec::new(cli::Command::ReducedForm).with_g([210, 640, 259, 581]),
    ];
    for spec in specs {
        let report = cli::run(&spec).unwrap();
        let json = report.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        let strip = |r: &Report| {
            let mut r = r.clone();
            match &mut r {
                Report::Bootstrap(b) => b.replicates.clear(),
                Report::Montecarlo(m) => m.replicates.clear(),
                _ => {}
            }
            r
        };
        assert_eq!(back, strip(&report), "{json}");
        assert_eq!(back.to_json(), json);
        let again = cli::run(&spec).unwrap();
        assert_eq!(again.to_json(), json);
        assert!(!report.render(Format::Text).is_empty());
        assert!(!report.render(Format::Csv).is_empty());
    }
}
