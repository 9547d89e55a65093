use std::process::{Command, Output};

fn piforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_piforge"))
        .args(args)
        .env_remove("PIFORGE_PREC_BITS")
        .output()
        .expect("run piforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn modulus_one() {
    let o = piforge(&["modulus", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("k       = 7.0710678118654752440"));
}

#[test]
fn alpha_two() {
    let o = piforge(&["alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4.1421356237309504880"));
}

#[test]
fn alpha_reduction_routes_agree() {
    for (r, route) in [("9", "9r"), ("8", "4r"), ("25", "25r")] {
        let o = piforge(&["alpha", r, "--route", route]);
        assert_eq!(o.status.code(), Some(0), "{r} {route}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("PASS\n"));
    }
}

#[test]
fn alpha_json() {
    let o = piforge(&["--format", "json", "alpha", "4", "--route", "4r"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "piforge/1");
    assert_eq!(v["route"], "4r");
    assert_eq!(v["passed"], true);
}

#[test]
fn series_nu3_r7_reports_digits() {
    let o = piforge(&["series", "--nu", "3", "--r", "7", "--terms", "60"]);
    let out = stdout(&o);
    assert!(out.contains("digits matched = 98."), "{out}");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn series_nu2_r2_passes_with_few_terms() {
    let o = piforge(&["--prec", "256", "series", "--nu", "2", "--r", "2", "--terms", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn series_error_codes() {
    assert_eq!(piforge(&["series", "--nu", "2", "--r", "100000000"]).status.code(), Some(3));
    assert_eq!(piforge(&["series", "--nu", "2", "--r", "1"]).status.code(), Some(2));
    assert_eq!(piforge(&["series", "--nu", "4", "--r", "2"]).status.code(), Some(2));
    assert_eq!(piforge(&["modulus", "0"]).status.code(), Some(2));
}

#[test]
fn precision_too_small_is_rejected() {
    let o = piforge(&["--prec", "32", "modulus", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 64"));
}

#[test]
fn emit_writes_schema_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let p = path.to_str().unwrap();
    let o = piforge(&["--prec", "256", "series", "--nu", "2", "--r", "2", "--terms", "20", "--emit", p]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "piforge/1");
    assert_eq!(v["nu"], 2);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--format", "json", "--prec", "256", "series", "--nu", "2", "--r", "3", "--terms", "20"];
    let a = piforge(&args);
    let b = piforge(&args);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_piforge"))
        .args(["--format", "json", "modulus", "2"])
        .env("PIFORGE_PREC_BITS", "128")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["prec_bits"], 128);
}

#[test]
fn verify_paper_exit_codes() {
    assert_eq!(piforge(&["verify-paper"]).status.code(), Some(1));
    let o = piforge(&["--prec", "128", "verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
