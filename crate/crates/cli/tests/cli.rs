use std::path::PathBuf;
use std::process::{Command, Output};

use cbr_core::axioms::{AnalysisReport, AxiomId};
use cbr_core::identification::IdentificationReport;
use cbr_core::oracle::{ClassificationProfile, ModelFlavor, SweepReport};
use cbr_core::representation::{RepresentationDocument, RepresentationPair};
use cbr_core::{BinaryRelation, ChoiceFunction};
use serde_json::Value;

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn cbr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn validate_accepts_a_complete_table() {
    let out = cbr(&["validate", &data("two_reversals.json"), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["menus"], 11);
}

#[test]
fn validate_rejects_a_missing_menu_with_one_line() {
    let out = cbr(&["validate", &data("incomplete.json")]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains("{x,y,z}"), "{err}");
}

#[test]
fn missing_files_and_bad_flags_are_input_errors() {
    assert_eq!(code(&cbr(&["axioms", "no-such-file.json"])), 2);
    assert_eq!(code(&cbr(&["frobnicate"])), 2);
    assert_eq!(
        code(&cbr(&["sweep", "--n", "3", "--check", "NOT_A_SWEEP"])),
        2
    );
    assert_eq!(code(&cbr(&["sweep", "--n", "7"])), 2);
    assert_eq!(code(&cbr(&["oracle"])), 2);
}

#[test]
fn axioms_pass_on_the_two_reversal_table() {
    let out = cbr(&["axioms", &data("two_reversals.json")]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["NC", "WCC*", "NBC*", "R-WARP"] {
        assert!(
            text.lines()
                .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["PASS", name]),
            "{text}"
        );
    }
}

#[test]
fn axioms_json_round_trips() {
    let out = cbr(&["axioms", &data("two_reversals.json"), "--json"]);
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    let c = ChoiceFunction::parse(&std::fs::read_to_string(data("two_reversals.json")).unwrap())
        .unwrap();
    assert_eq!(report, cbr_core::axioms::report(&c));
    assert!(!report.axioms[&AxiomId::Wwarp].pass);
}

#[test]
fn axioms_fail_with_exit_one_on_reject_warp_violation() {
    let out = cbr(&["axioms", &data("reject_warp_violation.json"), "--json"]);
    assert_eq!(code(&out), 1);
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.cbr_representable);
    assert!(report.axioms[&AxiomId::RWarp].witness.is_some());
}

#[test]
fn represent_reports_the_reject_warp_witness() {
    let out = cbr(&["represent", &data("reject_warp_violation.json"), "--json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["status"], "axiom_failure");
    assert_eq!(v["verdict"]["axiom"], "R_WARP");
    assert_eq!(v["verdict"]["witness"]["kind"], "dominance_cycle");
}

#[test]
fn represent_synthesizes_and_cross_checks() {
    let out = cbr(&[
        "represent",
        &data("two_reversals.json"),
        "--oracle",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["status"], "synthesized");
    assert_eq!(v["verification"]["pass"], true);
    assert_eq!(v["oracle"]["includes_synthesized"], true);
    let doc: RepresentationDocument = serde_json::from_value(v["representation"].clone()).unwrap();
    let (universe, pair) = RepresentationPair::from_document(&doc).unwrap();
    let c = ChoiceFunction::parse(&std::fs::read_to_string(data("two_reversals.json")).unwrap())
        .unwrap();
    assert_eq!(pair.induced_choice(&universe).unwrap().table(), c.table());
}

#[test]
fn represent_with_linear_second_rationale() {
    let out = cbr(&[
        "represent",
        &data("two_reversals.json"),
        "--transitive-p",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["representation"]["flavor"], "TCBR");
    assert_eq!(v["representation"]["P"].as_array().unwrap().len(), 6);
}

#[test]
fn reversals_lists_both_kinds() {
    let out = cbr(&["reversals", &data("two_reversals.json"), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let kinds: Vec<&str> = v["reversals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["Strong", "Weak"]);
    let full: BinaryRelation = serde_json::from_value(v["revealed_full_menu"].clone()).unwrap();
    let small: BinaryRelation = serde_json::from_value(v["revealed_small_menu"].clone()).unwrap();
    assert_eq!(full, BinaryRelation::from_pairs(4, [(2, 0), (0, 3)]));
    assert_eq!(full, small);
}

#[test]
fn identify_round_trips_and_fails_on_non_representable_input() {
    let out = cbr(&["identify", &data("two_reversals.json"), "--json"]);
    assert_eq!(code(&out), 0);
    let mut v = json(&out);
    assert_eq!(v["status"], "identified");
    v.as_object_mut().unwrap().remove("status");
    let report: IdentificationReport = serde_json::from_value(v).unwrap();
    assert!(report.q_hat.contains(0, 1));
    assert!(report.r_max.iter().all(|r| report.r_min.is_subset_of(r)));

    let out = cbr(&["identify", &data("reject_warp_violation.json"), "--json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "not_representable");
}

#[test]
fn classify_reports_every_model() {
    let out = cbr(&["classify", &data("rational3.json"), "--json"]);
    assert_eq!(code(&out), 0);
    let profile: ClassificationProfile = serde_json::from_slice(&out.stdout).unwrap();
    assert!(profile.representable.values().all(|&b| b));
    assert!(profile.disagreements.is_empty());
    assert!(profile.representable[&ModelFlavor::WarpRational]);
}

#[test]
fn oracle_counts_representations_and_populations() {
    let out = cbr(&[
        "oracle",
        &data("two_reversals.json"),
        "--cap",
        "2",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["total"].as_u64().unwrap() >= 1);
    assert_eq!(v["listed"].as_array().unwrap().len(), 2);

    assert_eq!(
        code(&cbr(&["oracle", &data("reject_warp_violation.json")])),
        1
    );

    let out = cbr(&["oracle", "--n", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["rationales"]["partial_orders"], 19);
    assert_eq!(v["rationales"]["tournaments"], 8);
    assert_eq!(v["rationales"]["linear_orders"], 6);
    assert_eq!(v["choice_functions"], 24);
}

#[test]
fn sweep_single_check_at_three() {
    let out = cbr(&["sweep", "--n", "3", "--check", "theorem1", "--threads", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("population 24, 0 counterexamples"), "{text}");
}

#[test]
fn sweep_json_round_trips_and_is_deterministic() {
    let run = |seed: &str| {
        let out = cbr(&[
            "sweep", "--n", "3", "--check", "IDEN2", "--seed", seed, "--json",
        ]);
        assert_eq!(code(&out), 0);
        let reports: Vec<SweepReport> = serde_json::from_slice(&out.stdout).unwrap();
        reports
            .into_iter()
            .map(|r| r.without_runtime())
            .collect::<Vec<_>>()
    };
    let first = run("7");
    assert_eq!(first.len(), 1);
    assert_eq!(first[0].population, 24);
    assert_eq!(first, run("7"));
}
