use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_springer-rca"));
    c.env_remove("SPRINGER_RCA_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn fixed_point_strata() {
    let out = run(&[
        "fixed-points",
        "--n",
        "2",
        "--k",
        "3",
        "--max-degree",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["command"], "fixed-points");
    assert_eq!(v["results"]["counts"], serde_json::json!([1, 1, 2, 2]));
    assert_eq!(
        v["results"]["strata"][2]["points"],
        serde_json::json!([[0, 2], [1, 1]])
    );
    for key in ["params", "command", "results", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }

    let v = json(&run(&[
        "fixed-points",
        "--n",
        "2",
        "--k",
        "3",
        "--max-degree",
        "0",
    ]));
    assert_eq!(
        v["results"]["strata"],
        serde_json::json!([{ "degree": 0, "points": [[0, 0]] }])
    );
}

#[test]
fn non_coprime_is_unsupported() {
    let out = run(&["fixed-points", "--n", "2", "--k", "4", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not isolated"));
}

#[test]
fn x_matrix_block() {
    let v = json(&run(&[
        "operator",
        "--op",
        "X",
        "--n",
        "2",
        "--k",
        "3",
        "--max-degree",
        "2",
    ]));
    let block = &v["results"]["blocks"][0];
    assert_eq!(block["degree"], 0);
    assert_eq!(block["entries"], serde_json::json!([[0, 0, "2"]]));
    assert_eq!(block["targets"], serde_json::json!(["(0,1)"]));
    assert_eq!(v["results"]["shift"], 1);
}

#[test]
fn commutator_is_twice_the_identity() {
    let v = json(&run(&[
        "operator",
        "--op",
        "commutator-XY",
        "--n",
        "2",
        "--k",
        "3",
        "--max-degree",
        "6",
    ]));
    let blocks = v["results"]["blocks"].as_array().unwrap();
    assert!(!blocks.is_empty());
    for b in blocks {
        let entries = b["entries"].as_array().unwrap();
        assert_eq!(entries.len(), b["rows"].as_u64().unwrap() as usize);
        for e in entries {
            assert_eq!(e[0], e[1]);
            assert_eq!(e[2], "2");
        }
    }
}

#[test]
fn h_needs_rank_two() {
    let out = run(&[
        "operator",
        "--op",
        "H",
        "--n",
        "3",
        "--k",
        "4",
        "--max-degree",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn monopole_matches_lowering_operator() {
    let a = json(&run(&[
        "operator", "--op", "monopole", "--lambda", "0,-1,-1", "--n", "3", "--k", "4",
    ]));
    let b = json(&run(&[
        "operator", "--op", "Fr", "--r", "2", "--n", "3", "--k", "4",
    ]));
    assert_eq!(a["results"]["blocks"], b["results"]["blocks"]);

    let out = run(&[
        "operator", "--op", "monopole", "--lambda", "2,0", "--n", "2", "--k", "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "operator", "--op", "monopole", "--lambda", "1,0,0", "--n", "2", "--k", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dressed_operators() {
    let out = run(&[
        "operator",
        "--op",
        "Er",
        "--r",
        "1",
        "--dress",
        "e1",
        "--n",
        "3",
        "--k",
        "4",
        "--max-degree",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "operator", "--op", "Fr", "--r", "2", "--dress", "e2-block", "--n", "3", "--k", "4",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    for bad in [
        vec![
            "operator", "--op", "X", "--dress", "e1", "--n", "2", "--k", "3",
        ],
        vec![
            "operator", "--op", "Er", "--r", "1", "--dress", "q7", "--n", "2", "--k", "3",
        ],
        vec!["operator", "--op", "Er", "--n", "2", "--k", "3"],
        vec!["operator", "--op", "Er", "--r", "5", "--n", "2", "--k", "3"],
    ] {
        assert_eq!(run(&bad).status.code(), Some(2), "{bad:?}");
    }
}

#[test]
fn rationals_are_reduced() {
    let v = json(&run(&[
        "operator",
        "--op",
        "Y",
        "--n",
        "3",
        "--k",
        "5",
        "--max-degree",
        "8",
    ]));
    let mut seen = 0;
    for b in v["results"]["blocks"].as_array().unwrap() {
        for e in b["entries"].as_array().unwrap() {
            let s = e[2].as_str().unwrap();
            seen += 1;
            if let Some((p, q)) = s.split_once('/') {
                let (mut a, mut b): (i64, i64) =
                    (p.parse::<i64>().unwrap().abs(), q.parse().unwrap());
                assert!(b > 1, "{s}");
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                assert_eq!(a, 1, "{s}");
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn verify_all_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "all",
        "--n",
        "2",
        "--k",
        "3",
        "--max-degree",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["results"]["passed"], true);
    assert!(v["results"]["reports"].as_array().unwrap().len() >= 9);

    let v = json(&run(&[
        "verify",
        "--suite",
        "all",
        "--n",
        "3",
        "--k",
        "4",
        "--max-degree",
        "9",
    ]));
    let skipped: Vec<_> = v["results"]["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].clone())
        .collect();
    assert_eq!(skipped, ["sl2", "appendix-b"]);
}

#[test]
fn under_truncation_reports_minimal_degree() {
    let out = run(&[
        "verify",
        "--suite",
        "kernel-y",
        "--n",
        "4",
        "--k",
        "5",
        "--max-degree",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("16"));
}

#[test]
fn oracle_suite() {
    let out = run(&[
        "verify",
        "--suite",
        "oracle",
        "--n",
        "3",
        "--k",
        "4",
        "--max-degree",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["reports"][0]["status"], "pass");
}

#[test]
fn usage_errors() {
    assert_eq!(
        run(&["verify", "--suite", "nope", "--n", "2", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["fixed-points", "--k", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["fixed-points", "--n", "2", "--k", "3", "--threads", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    let out = bin()
        .args(["fixed-points", "--n", "2", "--k", "3"])
        .env("SPRINGER_RCA_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_independent_of_thread_count() {
    for args in [
        vec![
            "verify",
            "--suite",
            "all",
            "--n",
            "2",
            "--k",
            "5",
            "--max-degree",
            "8",
        ],
        vec![
            "operator",
            "--op",
            "Fr",
            "--r",
            "1",
            "--n",
            "4",
            "--k",
            "5",
            "--max-degree",
            "9",
        ],
    ] {
        let one = bin().args(&args).args(["--threads", "1"]).output().unwrap();
        let four = bin()
            .args(&args)
            .env("SPRINGER_RCA_THREADS", "4")
            .output()
            .unwrap();
        assert!(one.status.success() && four.status.success());
        assert_eq!(one.stdout, four.stdout);
    }
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 2\nk = 5\nmax-degree = 4\nformat = \"csv\"\n").unwrap();
    let out_path = dir.path().join("points.csv");
    let out = run(&[
        "fixed-points",
        "--config",
        cfg.to_str().unwrap(),
        "--max-degree",
        "2",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(
        text,
        "degree,index,point\n0,0,\"(0,0)\"\n1,0,\"(0,1)\"\n2,0,\"(0,2)\"\n2,1,\"(1,1)\"\n"
    );

    std::fs::write(&cfg, "n = 2\nunknown = 1\n").unwrap();
    assert_eq!(
        run(&["fixed-points", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
