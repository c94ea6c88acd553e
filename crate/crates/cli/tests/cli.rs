use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use weier_cli::{parse_poly, CliError};
use weier_core::exact::{BPoly, Rational};

const CUBIC: &str = "x^3-y^3+2*x*y+x-2*y+1";

fn weier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weier")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "--no-timings"]);
    let out = weier(&all);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

#[test]
fn genus_of_the_cubic() {
    let (code, doc) = json(&["genus", "-f", CUBIC]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "weier/1");
    assert_eq!(doc["result"]["genus"], 1);
    assert_eq!(doc["curve"]["canonical"], CUBIC);
}

#[test]
fn third_kind_report_is_complete() {
    let (code, doc) = json(&["third-kind", "-f", CUBIC, "--x1", "0", "--x2", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    let sys = &doc["result"]["system"];
    assert_eq!(sys["naive"]["equations"], 6);
    assert_eq!(sys["symmetrized"]["rank"], 5);
    assert_eq!(sys["symmetrized"]["nullspace_dim"], 1);
    let residues = doc["result"]["residues"]["points"].as_array().unwrap();
    assert_eq!(residues.len(), 6);
    assert!(residues.iter().all(|r| r["passed"] == true && r["residue"].is_string()));
    assert_eq!(doc["input"]["x1"], "0");
}

#[test]
fn structured_output_is_deterministic() {
    let args = ["haupt", "-f", CUBIC, "--x1", "0", "--x2", "1", "--a", "2", "--xp", "3", "--json", "--no-timings"];
    let a = weier(&args);
    let b = weier(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timings_are_reported_by_default() {
    let out = weier(&["third-kind", "-f", CUBIC, "--x1", "0", "--x2", "1", "--json"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let stages: Vec<&str> = doc["timings_ms"].as_array().unwrap().iter().map(|t| t["stage"].as_str().unwrap()).collect();
    assert!(stages.contains(&"construct") && stages.contains(&"residues"));
}

#[test]
fn verify_passes_on_fixtures() {
    for (curve, x2) in [(CUBIC, "1"), ("x^2+y^2-1", "1/2")] {
        let (code, doc) = json(&["verify", "-f", curve, "--x1", "0", "--x2", x2]);
        assert_eq!(code, 0, "{doc}");
        assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn injected_fault_is_pinpointed() {
    let (code, doc) = json(&["verify", "-f", CUBIC, "--x1", "0", "--x2", "1", "--inject-fault"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "VerificationFailed");
    let msg = doc["error"]["message"].as_str().unwrap();
    assert!(msg.contains("root 0 over x = 0"), "{msg}");
}

#[test]
fn conic_haupt_matches_closed_form() {
    let (code, doc) = json(&["haupt", "-f", "x^2+y^2-1", "--x1", "0", "--x2", "1/2", "--xp", "3/5", "--yp", "4/5"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["result"]["value"], doc["result"]["closed_form"]);
}

#[test]
fn error_exit_codes() {
    let cases: [(&[&str], &str, i32); 8] = [
        (&["genus", "-f", "x^3-y^3+2xy"], "SyntaxError", 3),
        (&["genus", "-f", "x+w"], "UnknownVariable", 4),
        (&["genus", "-f", "y^2-x^3"], "NotSmooth", 10),
        (&["third-kind", "-f", "x^2+y^2-1", "--x1", "1", "--x2", "0"], "MultipleRoots", 11),
        (&["third-kind", "-f", "x^2+y^2-1", "--x1", "0", "--x2", "0", "--root2", "1"], "SameAbscissa", 12),
        (&["third-kind", "-f", "x^2+y^2-1", "--x1", "0", "--y1", "2", "--x2", "1/2"], "PointNotOnCurve", 13),
        (&["haupt", "-f", CUBIC, "--x1", "0", "--x2", "1", "--xp", "3"], "WrongPoleCount", 21),
        (&["third-kind", "-f", "x^2+y^2-1", "--x1", "0", "--x2", "1/2", "--root1", "5"], "RootIndex", 23),
    ];
    for (args, kind, code) in cases {
        let (got, doc) = json(args);
        assert_eq!(doc["error"]["kind"], kind, "{args:?}");
        assert_eq!(got, code, "{args:?}");
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let (_, doc) = json(&["genus", "-f", "x^3-y^3+2xy"]);
    assert_eq!(doc["error"]["position"], 9);
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = weier(&["genus", "-f", CUBIC, "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn human_output_mentions_generators() {
    let out = weier(&["third-kind", "-f", CUBIC, "--x1", "0", "--x2", "1", "--digits", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("t1: root 0 of -t^3-2*t+1"), "{text}");
    assert!(text.contains("[PASS]"));
}

#[test]
fn parse_errors_are_typed() {
    assert!(matches!(parse_poly("x^2 y"), Err(CliError::Syntax { .. })));
}

fn canonical_poly() -> impl Strategy<Value = BPoly<Rational>> {
    prop::collection::vec(((0u32..4, 0u32..4), -9i64..=9, 1i64..=4), 0..8).prop_map(|terms| {
        BPoly::from_terms(terms.into_iter().map(|(k, n, d)| (k, Rational::new(n.into(), d.into()))))
    })
}

proptest! {
    #[test]
    fn pretty_print_round_trips(p in canonical_poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }
}
