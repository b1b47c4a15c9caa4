use super::*;
use vertex_core::scalars::{Rational, Scalar};

fn run_ok(args: &[&str]) -> Outcome {
    let mut v = vec!["vertex"];
    v.extend_from_slice(args);
    run(v)
}

fn h(n: i64) -> Half {
    Half::from_int(n)
}

#[test]
fn verify_renders_the_library_report() {
    let out = run_ok(&["verify", "--algebra", "heisenberg", "--degree", "3"]);
    assert_eq!(out.code, 0);
    let inst = presets::preset("heisenberg").unwrap();
    let report = verify_axioms(inst.name(), inst.va(), h(3));
    assert_eq!(out.stdout, format!("{}all axioms pass\n", report.table()));
}

#[test]
fn corrupted_bracket_fails_with_a_witness() {
    let out = run_ok(&["verify", "--algebra", "corrupted:heisenberg", "--degree", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("FAIL"));
    assert!(out.stdout.contains("  A = "));
    assert!(out.stdout.ends_with("axiom check failed\n"));
}

#[test]
fn ope_matches_singular_part() {
    let out = run_ok(&["ope", "--algebra", "virasoro", "--a", "L(-2)|0>", "--b", "L(-2)|0>"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "4: (1/2*c) v_c\n2: 2 L(-2) v_c\n1: L(-3) v_c\n");
    let inst = presets::preset("virasoro").unwrap();
    let w = inst.parse("L(-2)|0>").unwrap();
    assert_eq!(out.stdout, singular_part(inst.va(), &w, &w).render(inst.va()) + "\n");
}

#[test]
fn ope_json_lists_poles_by_order() {
    let out = run_ok(&["--json", "ope", "--algebra", "heisenberg", "--a", "b(-1)|0>", "--b", "b(-1)|0>"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["poles"]["2"], "|0>");
    assert_eq!(v["poles"].as_object().unwrap().len(), 1);
}

#[test]
fn character_matches_library() {
    let out = run_ok(&["character", "--algebra", "heisenberg", "--lambda", "0", "--cutoff", "6"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "q^{-1/24}(1 + q + 2q^2 + 3q^3 + 5q^4 + 7q^5 + 11q^6)\n");
    let inst = presets::heisenberg(Scalar::param("lambda"));
    let p = ParamPoint::new().with("lambda", Rational::from_integer(0.into()));
    assert_eq!(out.stdout, format!("{}\n", character(&inst, 0, h(6), &p).unwrap()));
}

#[test]
fn lattice_sectors_agree_with_theta_form() {
    let out = run_ok(&["character", "--algebra", "lattice:3", "--cutoff", "3", "--all-sectors"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.ends_with("theta form agrees\n"));
    let first = out.stdout.lines().next().unwrap();
    assert_eq!(first, lattice_theta_character(3, h(3)).to_string());
}

#[test]
fn npoint_formula_and_recursion() {
    let out = run_ok(&["npoint", "--n", "4"]);
    assert_eq!(out.code, 0);
    let f = heisenberg_npoint(&State::vacuum(), 4).unwrap();
    assert!(out.stdout.starts_with(&format!("{}\n", f.render())));
    let out = run_ok(&["npoint", "--algebra", "heisenberg", "--states", "b(-1)|0>; b(-1)|0>"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("1/(z1-z2)^2\n2 regions"));
}

#[test]
fn center_at_critical_level() {
    let out = run_ok(&["--json", "center", "--algebra", "affine:sl2", "--param", "k=-2", "--degree", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 0, 0, 1]);
    let generic = run_ok(&["center", "--algebra", "affine:sl2", "--degree", "2"]);
    assert!(generic.stdout.contains("degree 2: dim 0"));
}

#[test]
fn coset_of_the_vacuum_is_everything() {
    let out = run_ok(&["--json", "coset", "--algebra", "heisenberg", "--states", "|0>", "--degree", "3"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let inst = presets::preset("heisenberg").unwrap();
    assert_eq!(v[6]["dimension"].as_u64().unwrap() as usize, inst.fock().graded_dim(h(3)).unwrap());
}

#[test]
fn coord_check_reports() {
    let out = run_ok(&["coord-check", "--algebra", "heisenberg", "--a", "b(-1)|0>", "--rho", "1, e", "--first-order", "e", "--degree", "3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let inst = presets::preset("heisenberg").unwrap();
    let b = inst.parse("b(-1)|0>").unwrap();
    let r = huang_check(&inst, &b, &CoordChange::parse("1, e").unwrap(), h(3), &Truncation::FirstOrder("e".into())).unwrap();
    assert!(out.stdout.ends_with(&format!("b(-1) |0>: {}\n", r.summary())));
    let bad = run_ok(&["coord-check", "--algebra", "heisenberg", "--lambda", "1", "--a", "b(-1)|0>", "--rho", "2", "--primary"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("not primary"));
}

#[test]
fn bracket_agrees_with_direct_commutators() {
    let out = run_ok(&["bracket", "--algebra", "heisenberg", "--a", "b(-1)|0>", "--b", "b(-1)|0>", "--m", "2", "--n", "-2", "--degree", "3"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("[A_(2), B_(-2)] = (2) (|0>)_(0)\n"), "{}", out.stdout);
}

#[test]
fn bf_check_passes() {
    let out = run_ok(&["bf-check", "--degree", "3/2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("graded dimensions by enumeration: equal"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "--degree", "x"][..],
        &["ope", "--a", "b(-1"],
        &["character", "--algebra", "nowhere"],
        &["npoint"],
        &["frobnicate"],
        &["coord-check", "--rho", "0, 1"],
    ] {
        let out = run_ok(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("vertex-cli-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run_ok(&["--out", p, "npoint", "--n", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("1/(z1-z2)^2\n"));
    std::fs::remove_file(path).ok();
}
