//! End-to-end tests of the command-line surface, run in-process through the
//! same entry point `main` uses. A shared lock keeps the global degree cap
//! from racing between tests.

use std::sync::Mutex;

use serde_json::Value;

static LOCK: Mutex<()> = Mutex::new(());

fn run(args: &[&str]) -> (i32, String, String) {
    let _guard = LOCK.lock().unwrap();
    let mut argv: Vec<String> = vec!["shalika".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = shalika_cli::run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn msf_five_term_expansion() {
    let (code, out, _) = run(&["msf", "--newton", "2,1;2,3"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "q^8*e[4] + (q^7+q^6+2*q^5+q^4)*e[3,1] + (q^6+q^4+q^2)*e[2,2] + \
         (q^5+2*q^4+4*q^3+2*q^2+2*q)*e[2,1,1] + (q^2+q+1)*e[1,1,1,1]\n"
    );
}

#[test]
fn orbital_spherical_polynomial() {
    let (code, out, _) = run(&["orbital", "--newton", "2,1;2,3", "--parahoric", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1+q+2*q^2+3*q^3+4*q^4+4*q^5+4*q^6+3*q^7+q^8\n");
}

#[test]
fn orbital_report_lists_all_parahorics() {
    let (code, out, _) = run(&["orbital", "--newton", "2,3", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(out, "dim: 1\n[2]: 1+q\n[1,1]: 1+2*q\ncomponents: 2\ntop frobenius: h[1,1]\n");
}

#[test]
fn convert_to_cabling() {
    let (code, out, _) = run(&["convert", "--puiseux", "7/4,3/2", "--to", "cabling"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[[2,13],[2,3]]\n");
}

#[test]
fn convert_round_trip() {
    let (code, out, _) = run(&["convert", "--newton", "2,1;2,3", "--to", "puiseux"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[\"7/4\",\"3/2\"]\n");
    let (code, out, _) = run(&["convert", "--puiseux", "7/4,3/2", "--to", "newton"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[[2,1],[2,3]]\n");
}

#[test]
fn delta_values() {
    let (code, out, _) = run(&["delta", "--newton", "2,1;2,1;2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "42\n");
    let (code, out, _) = run(&["delta", "--puiseux", "3/2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1\n");
}

#[test]
fn germs_check_passes_and_tables_print() {
    let (code, out, _) = run(&["germs", "--newton", "2,3", "--check"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("check: ok\n"));
    assert!(out.contains("shalika germs:"));
    let (code, out, _) = run(&["germs", "--newton", "2,3+2,3", "--kind", "shalika"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "[2,2]: q^2/(q^2-2*q+1)\n[2,1,1]: (-2*q)/(q^2-2*q+1)\n[1,1,1,1]: 1/(q^2-2*q+1)\n"
    );
}

#[test]
fn unramified_inline_syntax() {
    let (code, out, _) = run(&["orbital", "--newton", "u:2,1", "--parahoric", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2+q\n");
    let (code, out, _) = run(&["msf", "--newton", "u:2,1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2*q*e[2] + e[1,1]\n");
}

#[test]
fn components_and_jacobian() {
    let (code, out, _) = run(&["components", "--newton", "2,1;2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "24\n");
    let (code, out, _) = run(&["jacobian", "--newton", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1+q\n");
}

#[test]
fn superpoly_of_trefoil() {
    let (code, out, _) = run(&["superpoly", "--newton", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "a^0: 1\na^1: -q-t-1\na^2: q+t\n");
    let (code, out, _) = run(&["superpoly", "--newton", "2,3", "--qt"]);
    assert_eq!(code, 0);
    assert!(out.contains("H[2]: (q)/(q-t)\n"));
}

#[test]
fn json_outputs_round_trip() {
    let (code, out, _) = run(&["msf", "--json", "--newton", "2,1;2,3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let f = shalika_core::symfunc::SymFun::from_json(&v).unwrap();
    assert_eq!(f.degree(), 4);
    assert_eq!(f.basis(), shalika_core::symfunc::Basis::E);
    let (code, out, _) = run(&["orbital", "--json", "--newton", "2,3", "--all"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dim_sp"], 1);
    let (code, out, _) = run(&["jacobian", "--json", "--newton", "2,3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let p = shalika_core::QPoly::from_json(&v).unwrap();
    assert_eq!(p.render("q", true), "1+q");
}

#[test]
fn spec_file_input() {
    let dir = std::env::temp_dir();
    let path = dir.join("shalika_cli_test_spec.json");
    std::fs::write(
        &path,
        r#"{"branches": [{"steps": [{"ramified": [2,3]}]}, {"steps": [{"ramified": [2,3]}]}],
            "contact": {"0,1": "3/2"}}"#,
    )
    .unwrap();
    let (code, out, _) = run(&["orbital", "--file", path.to_str().unwrap(), "--parahoric", "4"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(out, "q^6+2*q^7+q^8\n");
}

#[test]
fn parse_errors_exit_two() {
    let (code, _, err) = run(&["msf", "--newton", "2,banana"]);
    assert_eq!(code, 2);
    assert!(err.contains("bad q"));
    let (code, _, err) = run(&["msf"]);
    assert_eq!(code, 2);
    assert!(err.contains("exactly one of"));
    let (code, _, _) = run(&["nonsense"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["orbital", "--newton", "2,3", "--parahoric", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("parahoric"));
}

#[test]
fn computation_errors_exit_one() {
    // Two trivial branches with no computable default contact.
    let dir = std::env::temp_dir();
    let path = dir.join("shalika_cli_test_badspec.json");
    std::fs::write(
        &path,
        r#"{"branches": [{"steps": []}, {"steps": []}], "contact": {"0,1": "1/2"}}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["orbital", "--file", path.to_str().unwrap(), "--all"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 1);
    assert!(err.contains("non-integer"));
}

#[test]
fn degree_cap_flag_is_respected() {
    let (code, _, err) = run(&["msf", "--newton", "3,4;2,3", "--cap", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("cap"));
    // Restore the default for other tests (the lock serializes us).
    shalika_core::set_degree_cap(12);
    shalika_core::set_qt_degree_cap(6);
}

#[test]
fn degree_cap_env_var_overrides_flag() {
    let _guard = LOCK.lock().unwrap();
    std::env::set_var("SHALIKA_DEGREE_CAP", "2");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<String> = ["shalika", "msf", "--newton", "2,3;2,3", "--cap", "12"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let code = shalika_cli::run(&argv, &mut out, &mut err);
    std::env::remove_var("SHALIKA_DEGREE_CAP");
    shalika_core::set_degree_cap(12);
    shalika_core::set_qt_degree_cap(6);
    assert_eq!(code, 1);
    assert!(String::from_utf8(err).unwrap().contains("cap"));
}

#[test]
fn low_slope_warning_goes_to_stderr() {
    let (code, _, err) = run(&["msf", "--newton", "2,1"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"));
}

#[test]
fn deterministic_output() {
    let a = run(&["germs", "--newton", "2,1;2,3"]);
    let b = run(&["germs", "--newton", "2,1;2,3"]);
    assert_eq!(a, b);
}
