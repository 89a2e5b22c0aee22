//! End-to-end checks of the `mtf-limit` binary: flag surface, golden values,
//! reproducibility, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mtf-limit"));
    cmd.env_remove("MTF_LIMIT_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn mtf-limit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_json(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("mtf_limit_{}_{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn help_lists_flags_and_defaults_for_every_subcommand() {
    let expected: &[(&str, &[&str])] = &[
        (
            "density",
            &[
                "--family",
                "--alpha",
                "--p",
                "--lambda",
                "--custom-spec",
                "--grid",
                "--out",
                "--format",
                "--threads",
            ],
        ),
        ("cdf", &["--family", "--grid", "--out", "--format"]),
        ("moments", &["--family", "--q", "--out", "--format"]),
        ("laplace", &["--family", "--s", "--out", "--format"]),
        (
            "simulate",
            &[
                "--family",
                "--n",
                "--samples",
                "--method",
                "--seed",
                "--out",
                "--format",
            ],
        ),
        (
            "converge",
            &[
                "--family",
                "--n",
                "--samples",
                "--method",
                "--seed",
                "--out",
                "--format",
            ],
        ),
        ("miss-curve", &["--family", "--grid", "--out", "--format"]),
        (
            "size-cache",
            &["--family", "--pi-target", "--out", "--format"],
        ),
        (
            "conjecture",
            &[
                "--family",
                "--grid",
                "--tol",
                "--sweep",
                "--max-components",
                "--seed",
                "--out",
            ],
        ),
        ("validate", &["--family", "--tol", "--out"]),
    ];
    for (sub, flags) in expected {
        let out = run(&[sub, "--help"]);
        assert!(out.status.success(), "{sub} --help failed");
        let text = stdout(&out);
        for flag in *flags {
            assert!(text.contains(flag), "{sub} --help missing {flag}:\n{text}");
        }
        assert!(
            text.contains("[default:") || text.contains("default"),
            "{sub} --help lists no defaults:\n{text}"
        );
    }
    // Seed flags document the environment override.
    let text = stdout(&run(&["simulate", "--help"]));
    assert!(text.contains("MTF_LIMIT_SEED"), "{text}");
}

#[test]
fn density_golden_values_for_gamma_one() {
    let out = run(&[
        "density", "--family", "gamma", "--alpha", "1", "--grid", "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,f,F"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    // Density 2(1-x), CDF 1-(1-x)^2.
    assert_eq!(rows[0], vec![0.0, 2.0, 0.0]);
    assert_eq!(rows[2][1], 1.0);
    assert_eq!(rows[2][2], 0.75);
    assert_eq!(rows[4], vec![1.0, 0.0, 1.0]);
}

#[test]
fn density_rows_outside_support_are_zero() {
    // Geometric p = 0.5: support ends at 0.5, but the grid spans [0, 1].
    let out = run(&[
        "density",
        "--family",
        "geometric",
        "--p",
        "0.5",
        "--grid",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[3], vec![0.75, 0.0, 1.0]);
    assert_eq!(rows[4], vec![1.0, 0.0, 1.0]);
}

#[test]
fn simulate_single_item_emits_zero_costs() {
    let out = run(&[
        "simulate",
        "--family",
        "dirac",
        "--n",
        "1",
        "--samples",
        "10",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "cost\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "simulate",
        "--family",
        "gamma",
        "--alpha",
        "2",
        "--n",
        "50",
        "--samples",
        "200",
        "--seed",
        "99",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = run(&[
        "simulate",
        "--family",
        "gamma",
        "--alpha",
        "2",
        "--n",
        "50",
        "--samples",
        "200",
        "--seed",
        "100",
    ]);
    assert_ne!(a.stdout, c.stdout, "different seeds must differ");
}

#[test]
fn env_seed_applies_only_without_flag() {
    let args = [
        "simulate",
        "--family",
        "dirac",
        "--n",
        "5",
        "--samples",
        "20",
    ];
    let by_flag = bin().args(args).arg("--seed").arg("123").output().unwrap();
    let by_env = bin()
        .args(args)
        .env("MTF_LIMIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(by_flag.stdout, by_env.stdout);

    let flag_wins = bin()
        .args(args)
        .arg("--seed")
        .arg("123")
        .env("MTF_LIMIT_SEED", "456")
        .output()
        .unwrap();
    assert_eq!(flag_wins.stdout, by_flag.stdout);
}

#[test]
fn invalid_arguments_exit_2() {
    // Invalid shape parameter.
    let out = run(&["density", "--family", "gamma", "--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"), "{}", stderr(&out));

    // Missing family parameter.
    let out = run(&["density", "--family", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--alpha"), "{}", stderr(&out));

    // Parameter from the wrong family.
    let out = run(&["density", "--family", "dirac", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // Moment order outside q > -1.
    let out = run(&["moments", "--family", "dirac", "--q", "-2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("q > -1"), "{}", stderr(&out));

    // Unknown flag (clap-level error).
    let out = run(&["density", "--family", "dirac", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nonconvergent_transform_tail_exits_3() {
    // Weights at the 1e-320 scale are valid input, but the transform tail
    // then sits beyond f64 range and the truncation search must give up.
    let spec = temp_json(
        "tiny.json",
        r#"{"kind": "atomic", "params": {"atoms": [{"weight": 1.0, "value": 1e-320}]}}"#,
    );
    let out = run(&[
        "moments",
        "--family",
        "custom",
        "--custom-spec",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("non-convergence"), "{}", stderr(&out));
    std::fs::remove_file(spec).ok();
}

#[test]
fn conjecture_single_family_report() {
    let out = run(&[
        "conjecture",
        "--family",
        "gamma",
        "--alpha",
        "2",
        "--grid",
        "1000",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert!(report["max_violation"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn conjecture_sweep_reports_all_families() {
    let out = run(&[
        "conjecture",
        "--sweep",
        "3",
        "--grid",
        "500",
        "--seed",
        "11",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 3);
    for r in reports.as_array().unwrap() {
        assert!(r["descriptor"]["params"]["components"].is_array(), "{r}");
    }

    let out = run(&["conjecture", "--sweep", "2", "--family", "dirac"]);
    assert_eq!(out.status.code(), Some(2), "sweep excludes --family");
}

#[test]
fn validate_reports_pass_for_builtin() {
    let out = run(&["validate", "--family", "poisson", "--lambda", "1.5"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["passed"], serde_json::Value::Bool(true));
}

#[test]
fn miss_curve_and_size_cache_golden() {
    let out = run(&["miss-curve", "--family", "dirac", "--grid", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "alpha,pi\n0,1.00000\n0.500000,0.500000\n1.00000,0\n"
    );

    let out = run(&["size-cache", "--family", "dirac", "--pi-target", "0.3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let alpha: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((alpha - 0.7).abs() <= 1e-9, "{row}");
}

#[test]
fn custom_spec_round_trips_through_cli() {
    let spec = temp_json(
        "mixture.json",
        r#"{"kind": "gamma_mixture", "params": {"components": [
            {"weight": 0.5, "shape": 1.0, "scale": 1.0},
            {"weight": 0.5, "shape": 2.0, "scale": 0.5}
        ]}}"#,
    );
    let out = run(&[
        "cdf",
        "--family",
        "custom",
        "--custom-spec",
        spec.to_str().unwrap(),
        "--grid",
        "11",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 12);
    // Last row: x = 1, density at the one-sided limit (~0), CDF exactly 1.
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(last[0], 1.0);
    assert!(last[1].abs() <= 1e-8, "{text}");
    assert_eq!(last[2], 1.0);
    std::fs::remove_file(spec).ok();
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("mtf_limit_out_{}.csv", std::process::id()));
    let to_file = run(&[
        "density",
        "--family",
        "dirac",
        "--grid",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let direct = run(&["density", "--family", "dirac", "--grid", "3"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_file(path).ok();
}

#[test]
fn json_format_emits_parseable_rows() {
    let out = run(&[
        "converge",
        "--family",
        "gamma",
        "--alpha",
        "1",
        "--n",
        "10,20",
        "--samples",
        "500",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert!(rows[0]["ks"].as_f64().unwrap() > 0.0);
}
