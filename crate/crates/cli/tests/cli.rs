use std::path::PathBuf;
use std::process::{Command, Output};

fn qhc(args: &[&str]) -> (i32, String) {
    let out: Output = Command::new(env!("CARGO_BIN_EXE_qhc")).args(args).current_dir(env!("CARGO_MANIFEST_DIR")).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qhc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn valid_prints_falsifying_valuation() {
    let (code, out) = qhc(&["valid", "--model", "models/sierpinski-interior.json", "--principle", "H"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("gamma |-> {1}"), "{out}");
    let (code, out) = qhc(&["valid", "--model", "models/sierpinski-interior.json", "--principle", "PC"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn eval_reports_value() {
    let (code, out) = qhc(&["eval", "--model", "models/sierpinski-interior.json", "gamma | ~gamma"]);
    assert_eq!(code, 1);
    assert!(out.contains("value: {1}"), "{out}");
    let (code, _) = qhc(&["eval", "--model", "models/sierpinski-interior.json", "!p -> gamma"]);
    assert_eq!(code, 0);
}

#[test]
fn check_accepts_and_rejects() {
    let (code, out) = qhc(&["check", "../core/scripts/galois-dir1.qp"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = qhc(&["check", "../core/scripts/lem-cheat.qp"]);
    assert_eq!(code, 1);
    assert!(out.contains("BAD_INSTANCE"), "{out}");
}

#[test]
fn translations_reparse() {
    for (via, f) in [("refined", "exists x. p(x)"), ("nabla", "alpha -> beta"), ("box-godel", "alpha | ~alpha"), ("kuroda", "forall x. p(x)")] {
        let (code, out) = qhc(&["translate", "--via", via, f]);
        assert_eq!(code, 0, "{out}");
        let (code, back) = qhc(&["parse", out.trim()]);
        assert_eq!(code, 0, "{back}");
        assert_eq!(back.lines().next().unwrap(), out.trim());
    }
    let (_, out) = qhc(&["translate", "--via", "refined", "exists x. p(x)"]);
    assert_eq!(out.trim(), "~?~exists x. ~!~p(x)");
}

#[test]
fn search_writes_a_verifiable_witness() {
    let path = scratch("h-not-k.json");
    let p = path.to_str().unwrap();
    let (code, out) = qhc(&["search", "--valid", "H", "--fails", "K", "--classes", "dense-image", "--max-points", "2", "--out", p]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = qhc(&["verify", p]);
    assert_eq!(code, 0, "{out}");
    let tampered = std::fs::read_to_string(&path).unwrap().replace("\"fails\":\"K\"", "\"fails\":\"H\"");
    std::fs::write(&path, tampered).unwrap();
    let (code, _) = qhc(&["verify", p]);
    assert_eq!(code, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(qhc(&["search", "--fails", "alpha -> alpha", "--max-points", "2"]).0, 1);
    assert_eq!(qhc(&["search", "--fails", "H", "--classes", "bogus"]).0, 2);
    assert_eq!(qhc(&["parse", "alpha &"]).0, 2);
    assert_eq!(qhc(&["frobnicate"]).0, 2);
    assert_eq!(qhc(&["search", "--fails", "alpha -> alpha", "--budget", "0"]).0, 3);
}

#[test]
fn matrix_on_a_small_bound() {
    let path = scratch("matrix.json");
    let (code, out) = qhc(&["matrix", "--principles", "H,K,PC", "--max-points", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("columns: 1=H 2=K 3=PC"), "{out}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["entries"].as_array().unwrap().len(), 9);
}

#[test]
fn catalog_lists_principles() {
    let (code, out) = qhc(&["catalog", "--claims"]);
    assert_eq!(code, 0);
    assert!(out.contains("Jankov"));
    assert!(out.contains("SEPARATE QHC -/-> H"));
}
