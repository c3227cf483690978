use std::path::PathBuf;
use std::process::Command;

use lcsknot::io::cli::{dispatch, Outcome};
use lcsknot::io::report::digest;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("lcsknot".to_string()).chain(args.iter().map(|a| {
        if a.contains('.') && !a.starts_with('-') {
            fixture(a)
        } else {
            a.to_string()
        }
    }));
    dispatch(argv)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("not json ({e}): {} / {}", o.stdout, o.stderr))
}

#[test]
fn h1_with_oracle() {
    let o = run(&["h1", "f2_over_z4.knot", "--oracle"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["invariants"]["h1"]["free_rank"], 5);
    assert_eq!(v["invariants"]["oracle_agrees"], true);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn extendable_check_with_map() {
    let o = run(&["extendable-check", "trefoil.knot", "trefoil_tietze.knot", "--map", "trefoil_to_tietze.map", "--class", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["invariants"]["candidate"]["report"]["mu_condition"], true);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 3);
}

#[test]
fn nq_free_class_five() {
    let v = json(&run(&["nq", "free2.knot", "--class", "5"]));
    assert_eq!(v["invariants"]["layer_sizes"], serde_json::json!([2, 1, 2, 3, 6]));
    assert_eq!(v["invariants"]["hirsch_length"], 14);
}

#[test]
fn report_schema() {
    let o = run(&["relquo", "f2_over_z2.knot", "--class", "2"]);
    let v = json(&o);
    for key in ["schema_version", "command", "inputs", "verdict", "invariants", "assumptions", "exhaustive", "timing"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let bytes = std::fs::read(fixture("f2_over_z2.knot")).unwrap();
    assert_eq!(v["inputs"][0]["sha256"], digest(&bytes));
    assert_eq!(v["invariants"]["quotient"]["hirsch_length"], 3);
}

#[test]
fn pretty_output_is_the_same_document() {
    let a = json(&run(&["h2", "free2.knot", "--class", "2"]));
    let b = json(&run(&["h2", "free2.knot", "--class", "2", "--pretty"]));
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn failing_verdict_exits_one() {
    let o = run(&["extendable-check", "trefoil.knot", "trefoil.knot", "--map", "trefoil_inverting.map"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["verdict"], "fail");
    let o = run(&["stallings", "meridian_over_z2.knot", "trefoil_over_z2.knot", "--map", "meridian.map", "--class", "2"]);
    assert_eq!(o.code, 1);
}

#[test]
fn oversized_search_is_undecided() {
    let o = run(&["extendable-search", "f2_over_z4.knot", "f2_over_z4.knot", "--class", "3"]);
    assert_eq!(o.code, 2);
    let v = json(&o);
    assert_eq!(v["verdict"], "undecided-at-bound");
    assert_eq!(v["exhaustive"], false);
}

#[test]
fn input_errors_exit_three_with_position() {
    let dir = std::env::temp_dir().join(format!("lcsknot-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.knot");
    std::fs::write(&bad, "[group]\ngenerators = a, b\nrelators = abq\n").unwrap();
    let o = dispatch(["lcsknot", "nq", bad.to_str().unwrap()]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("group:3") && o.stderr.contains("'q'"), "{}", o.stderr);
    assert!(o.stdout.is_empty());

    std::fs::write(&bad, "[group]\ngenerators = a\n[extra]\nx = 1\n").unwrap();
    let o = dispatch(["lcsknot", "nq", bad.to_str().unwrap()]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("extra:3"), "{}", o.stderr);

    assert_eq!(run(&["kernel", "no_such_file.knot"]).code, 3);
    assert_eq!(run(&["extendable-check", "trefoil.knot", "trefoil_tietze.knot"]).code, 3);
    assert_eq!(run(&["frobnicate"]).code, 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn certificate_references_are_digested() {
    let o = run(&["concordance-check", "free2_product.cert", "--class", "3", "--based"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    let inputs = v["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 3);
    assert!(inputs[1]["path"].as_str().unwrap().ends_with("free2.knot"));
    assert!(v["assumptions"].as_array().unwrap().iter().any(|a| a.as_str().unwrap().contains("boundary")));
}

#[test]
fn based_check_catches_conjugate_meridian() {
    assert_eq!(run(&["concordance-check", "free2_conjugate.cert", "--class", "3", "--based"]).code, 1);
    assert_eq!(run(&["concordance-check", "free2_conjugate.cert", "--class", "3"]).code, 0);
}

#[test]
fn satellite_records_asphericity() {
    let o = run(&["satellite", "satellite_trefoil_unknot.sat", "--class", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["invariants"]["collapse"]["relators_die"], true);
    assert!(v["assumptions"].as_array().unwrap().iter().any(|a| a.as_str().unwrap().contains("aspherical")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_lcsknot");
    let ok = Command::new(bin).args(["h1", &fixture("trefoil_over_z2.knot")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["invariants"]["h1"]["torsion"], serde_json::json!([3]));
    let bad = Command::new(bin).args(["h1", &fixture("missing.knot")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
