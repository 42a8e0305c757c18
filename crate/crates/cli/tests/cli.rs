mod common;

use common::{bisym, catalog_names, core_fixture, random_dsl_corpus, write_map};

fn verdict_of(report: &serde_json::Value, property: &str) -> String {
    report["result"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["property"] == property)
        .unwrap_or_else(|| panic!("no {property} report"))["verdict"]
        .as_str()
        .unwrap()
        .to_string()
}

#[test]
fn check_example_2_fails_only_strict_properties() {
    let run = bisym(&["check", "--map", "paper-example-2", "--json"]);
    assert_eq!(run.code, 1, "{}", run.stderr);
    let j = run.json();
    assert_eq!(verdict_of(&j, "bisymmetric"), "holds-on-sample");
    assert_eq!(verdict_of(&j, "reflexive"), "holds-on-sample");
    assert_eq!(verdict_of(&j, "partially-strictly-increasing"), "fails");
    assert_eq!(j["result"]["all_hold"], false);
}

#[test]
fn check_arithmetic_passes_everything() {
    let run = bisym(&["check", "--map", "arithmetic", "--interval", "0", "1"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert_eq!(run.stdout.matches('✓').count(), 6);
    assert!(!run.stdout.contains('✗'));
}

#[test]
fn check_reports_table_and_subset_of_axioms() {
    let run = bisym(&[
        "check",
        "--map",
        "projection-left",
        "--axioms",
        "mean,reflexive",
        "--json",
    ]);
    assert_eq!(run.code, 0);
    let reports = run.json()["result"]["reports"].as_array().unwrap().clone();
    assert_eq!(reports.len(), 2);
    let strict = bisym(&[
        "check",
        "--map",
        "projection-left",
        "--axioms",
        "mean",
        "--strict-mean",
    ]);
    assert_eq!(strict.code, 1);
    assert!(strict.stdout.contains("strict-mean"));
}

#[test]
fn broken_map_file_exits_65_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_map(
        dir.path(),
        "broken.map",
        "piecewise { if x < : y; else: x }",
    );
    let run = bisym(&["check", "--dsl-file", &path]);
    assert_eq!(run.code, 65);
    assert!(run.stderr.contains("1:20"), "{}", run.stderr);
    assert!(run.stderr.contains('^'));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["check"],
        vec!["check", "--map", "no-such-mean"],
        vec!["check", "--map", "geometric", "--interval", "0", "1"],
        vec!["check", "--map", "arithmetic", "--interval", "1", "0"],
        vec!["check", "--map", "arithmetic", "--n", "1"],
        vec!["check", "--map", "arithmetic", "--tolerance", "-1"],
        vec!["check", "--map", "arithmetic", "--dsl-file", "x.map"],
        vec!["check", "--dsl-file", "/nonexistent/file.map"],
        vec!["check", "--map", "arithmetic", "--bogus"],
        vec!["extract", "--map", "arithmetic", "--depth", "21"],
        vec!["extract", "--map", "arithmetic", "--u", "0.5", "--v", "0.5"],
        vec!["enumerate", "--depth", "7"],
        vec!["enumerate", "--depth", "5", "--list-trees"],
        vec!["eval", "--map", "arithmetic", "--x", "2", "--y", "0"],
        vec!["frobnicate"],
    ] {
        let run = bisym(&args);
        assert_eq!(run.code, 64, "{args:?}: {}", run.stderr);
    }
    assert_eq!(bisym(&["--help"]).code, 0);
    assert_eq!(bisym(&["--version"]).code, 0);
}

#[test]
fn dichotomy_exit_codes() {
    let run = bisym(&["dichotomy", "--map", "paper-example-1", "--json"]);
    assert_eq!(run.code, 2);
    let j = run.json();
    assert_eq!(j["result"]["verdict"], "hypothesis-violated");
    let failed: Vec<&str> = j["result"]["failed_hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(failed.contains(&"bisymmetric"));

    let run = bisym(&["dichotomy", "--map", "geometric"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("symmetric-everywhere"));
}

#[test]
fn extract_geometric_has_two_at_one_half() {
    let run = bisym(&[
        "extract",
        "--map",
        "geometric",
        "--u",
        "1",
        "--v",
        "4",
        "--depth",
        "3",
        "--json",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let j = run.json();
    let r = &j["result"];
    assert_eq!(r["table_depth"], 3);
    assert_eq!(r["monotone"], true);
    let row = &r["table"][4];
    assert_eq!(row["dyadic"], 0.5);
    assert!((row["value"].as_f64().unwrap() - 2.0).abs() < 1e-15);
    assert_eq!(j["config"]["interval"], serde_json::json!([1.0, 4.0]));
    for key in ["max_gap", "symmetric_defect"] {
        assert!(r[key].is_number(), "{key}");
    }
    assert!(r["residual"]["max"].is_number());
    assert_eq!(r["residual"]["argmax"].as_array().unwrap().len(), 2);
}

#[test]
fn extract_flags_flat_table_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let run = bisym(&[
        "extract",
        "--map",
        "paper-example-2",
        "--u",
        "0.6",
        "--v",
        "0.9",
        "--depth",
        "1",
        "--interval",
        "0",
        "1",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(run.code, 1);
    let j = run.json();
    assert_eq!(j["result"]["monotone"], false);
    assert!(j["result"]["residual"].is_null());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text, "index,dyadic,value\n0,0,0.6\n1,0.5,0.9\n2,1,0.9\n");
}

#[test]
fn enumerate_depth_one() {
    let run = bisym(&["enumerate", "--depth", "1", "--json", "--list-trees"]);
    assert_eq!(run.code, 0);
    let j = run.json();
    assert_eq!(j["result"]["tree_count"], 6);
    assert_eq!(j["result"]["trees"].as_array().unwrap().len(), 6);
    assert_eq!(j["result"]["trees"][3]["tree"], "F(u,v)");
    // counts beyond 64 bits are still printed exactly
    let deep = bisym(&["enumerate", "--depth", "6", "--json"]);
    assert_eq!(deep.code, 0);
    assert!(deep
        .stdout
        .contains("\"tree_count\": 19113842599189892819591078"));
}

#[test]
fn eval_map_file_and_builtin() {
    let run = bisym(&[
        "eval",
        "--dsl-file",
        &core_fixture("paper_example_1.map"),
        "--x",
        "0.2",
        "--y",
        "0.6",
        "--json",
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let v = run.json()["result"]["value"].as_f64().unwrap();
    assert!((v - 0.346410).abs() < 1e-6);
    let origin = bisym(&[
        "eval",
        "--dsl-file",
        &core_fixture("paper_example_1.map"),
        "--x",
        "0",
        "--y",
        "0",
    ]);
    assert_eq!(origin.code, 1);
    assert!(origin.stderr.contains("division by zero"));
    let b = bisym(&["eval", "--map", "paper-example-1", "--x", "0", "--y", "0"]);
    assert_eq!(b.code, 0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_map(dir.path(), "m.map", &random_dsl_corpus(1, 7)[0]);
    for args in [
        vec![
            "check", "--map", "harmonic", "--seed", "3", "--n", "31", "--quad-n", "9", "--json",
        ],
        vec![
            "dichotomy",
            "--map",
            "paper-example-2",
            "--seed",
            "5",
            "--json",
        ],
        vec!["extract", "--map", "power(3)", "--depth", "8", "--json"],
        vec!["enumerate", "--map", "geometric", "--depth", "3", "--json"],
        vec![
            "check",
            "--dsl-file",
            &path,
            "--interval",
            "1",
            "2",
            "--json",
        ],
    ] {
        let a = bisym(&args);
        let b = bisym(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
        assert!(a.stdout.starts_with("{\n  \"tool_version\""));
    }
}

#[test]
fn every_subcommand_handles_every_builtin() {
    for name in catalog_names() {
        let runs = [
            bisym(&[
                "check", "--map", &name, "--n", "21", "--quad-n", "9", "--json",
            ]),
            bisym(&["dichotomy", "--map", &name, "--n", "21", "--json"]),
            bisym(&[
                "extract", "--map", &name, "--depth", "6", "--grid", "21", "--json",
            ]),
            bisym(&["enumerate", "--map", &name, "--depth", "3", "--json"]),
            bisym(&["eval", "--map", &name, "--x", "1", "--y", "1", "--json"]),
        ];
        for (i, run) in runs.iter().enumerate() {
            assert!(
                [0, 1, 2].contains(&run.code),
                "{name} subcommand #{i} exited {}: {}",
                run.code,
                run.stderr
            );
            if run.code != 1 || i != 2 {
                run.json();
            }
        }
    }
}

#[test]
fn random_corpus_maps_run_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    for (i, src) in random_dsl_corpus(20, 2024).iter().enumerate() {
        let path = write_map(dir.path(), &format!("m{i}.map"), src);
        let run = bisym(&[
            "check",
            "--dsl-file",
            &path,
            "--interval",
            "1",
            "2",
            "--n",
            "21",
            "--quad-n",
            "9",
            "--json",
        ]);
        assert!([0, 1].contains(&run.code), "{src}: {}", run.stderr);
        run.json();
    }
}
