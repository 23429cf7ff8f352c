use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rkforge::tableau::{lookup, parse_tableau};
use rkforge::AnyTableau;

fn rkforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkforge"))
        .args(args)
        .env_remove("RKFORGE_TOL")
        .output()
        .expect("spawn rkforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn emit(dir: &Path, key: &str) -> String {
    let path = dir.join(format!("{key}.json"));
    fs::write(&path, lookup(key).unwrap().tableau.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_exact(path: &Path) -> rkforge::ExactTableau {
    match parse_tableau(&fs::read_to_string(path).unwrap()).unwrap() {
        AnyTableau::Exact(t) => t,
        AnyTableau::Float(_) => panic!("expected exact tableau"),
    }
}

#[test]
fn symplectic_adjoint_of_euler_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = emit(dir.path(), "euler");
    let out = dir.path().join("adj.json");
    let o = rkforge(&[
        "adjoint",
        "--kind",
        "symplectic",
        &input,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = read_exact(&out);
    let ie = lookup("implicit-euler").unwrap().tableau;
    assert_eq!(t.a(), ie.a());
    assert_eq!(t.b(), ie.b());
    assert!(stdout(&o).contains("symplectic: no"));

    let o = rkforge(&[
        "average",
        "--kind",
        "symplectic",
        &input,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("symplectic: yes"));
    assert_eq!(read_exact(&out).a()[(0, 0)], rkforge::QSqrt5::ratio(1, 2));
}

#[test]
fn symmetric_adjoint_of_radau_ib_is_iib() {
    let dir = tempfile::tempdir().unwrap();
    let input = emit(dir.path(), "radau-ib-2");
    let out = dir.path().join("iib.json");
    let o = rkforge(&["adjoint", "--kind", "symmetric", &input, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(read_exact(&out).same_coefficients(&lookup("radau-iib-2").unwrap().tableau, 0.0));
}

#[test]
fn zero_weight_is_a_domain_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    fs::write(
        &path,
        r#"{"name":"z","stages":2,"scalar":"rational","A":[["0","0"],["1","0"]],"b":["1","0"],"c":["0","1"]}"#,
    )
    .unwrap();
    let o = rkforge(&["adjoint", "--kind", "symplectic", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("b_2"));
}

#[test]
fn check_order_reports() {
    let o = rkforge(&["check-order", "catalog:rk4", "--max", "6"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("order 4"));
    assert!(text.lines().any(|l| l.starts_with("tree t59") && l.contains(" no ")));
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert!(rows[..8].iter().all(|l| l.contains(" yes ")));

    let o = rkforge(&["check-order", "catalog:example-4.1", "--max", "6", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["order"], 5);
    let conds = doc["conditions"].as_array().unwrap();
    assert!(conds[..17].iter().all(|c| c["residual"] == "0"));

    let o = rkforge(&["check-order", "catalog:euler", "--max", "2"]);
    assert!(stdout(&o).starts_with("order 1"));
}

#[test]
fn check_order_cap_is_usage_error() {
    assert_eq!(code(&rkforge(&["check-order", "catalog:rk4", "--max", "11"])), 2);
    assert_eq!(
        code(&rkforge(&["check-order", "catalog:rk4", "--simplified", "3,2"])),
        2
    );
}

#[test]
fn simplified_conditions() {
    let o = rkforge(&[
        "check-order",
        "catalog:radau-iia-2",
        "--max",
        "4",
        "--simplified",
        "3,2,1",
    ]);
    assert!(stdout(&o).contains("simplified B(3) C(2) D(1): sufficient: yes"));
}

#[test]
fn construct_writes_tableau_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex3.json");
    let o = rkforge(&[
        "construct",
        "ssrk5",
        "--c2",
        "1/4",
        "--alpha",
        "1/2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(read_exact(&out).same_coefficients(&lookup("example-4.3").unwrap().tableau, 0.0));
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("ex3.trace.json")).unwrap()).unwrap();
    assert_eq!(trace["3"]["b1"], "1/6");

    let out = dir.path().join("ex1.json");
    let o = rkforge(&[
        "construct",
        "ssrk5",
        "--c2",
        "1/2+-1/6*sqrt5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(read_exact(&out).same_coefficients(&lookup("example-4.1").unwrap().tableau, 0.0));
}

#[test]
fn construct_rejects_boundary_and_garbage() {
    assert_eq!(code(&rkforge(&["construct", "ssrk5", "--c2", "1/2"])), 1);
    assert_eq!(code(&rkforge(&["construct", "ssrk5", "--c2", "one half"])), 2);
}

#[test]
fn sweep_marks_degenerate_points() {
    let o = rkforge(&["construct", "sweep", "--c2", "1/8,1/4,3/8", "--json"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ok: Vec<bool> = doc["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["ok"].as_bool().unwrap())
        .collect();
    assert_eq!(ok, vec![true, true, false]);
}

#[test]
fn convergence_table() {
    let o = rkforge(&[
        "convergence",
        "catalog:example-4.1",
        "--problem",
        "kepler",
        "--h0",
        "0.2",
        "--halvings",
        "5",
        "--T",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("1.552315e-06"));
    assert!(text.contains("5.06"));
}

#[test]
fn convergence_step_mismatch_is_usage_error() {
    assert_eq!(
        code(&rkforge(&["convergence", "catalog:euler", "--h0", "0.3", "--T", "1"])),
        2
    );
}

#[test]
fn euler_converges_at_first_order() {
    let o = rkforge(&[
        "convergence",
        "catalog:euler",
        "--h0",
        "0.2",
        "--halvings",
        "3",
        "--T",
        "1",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in doc["rows"].as_array().unwrap().iter().skip(1) {
        let order = row["order"].as_f64().unwrap();
        assert!((order - 1.0).abs() < 0.2, "{order}");
    }
}

#[test]
fn stability_summary_and_region_files() {
    let o = rkforge(&["stability", "catalog:implicit-euler"]);
    let text = stdout(&o);
    assert!(text.contains("A-stable: yes"));
    assert!(text.contains("L-stable: yes"));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let svg = dir.path().join("r.svg");
    let o = rkforge(&[
        "stability",
        "catalog:euler",
        "--window",
        "-3,1,-2,2",
        "--grid",
        "21,21",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 21 * 21);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["show", "catalog:example-4.2", "--json"];
    assert_eq!(rkforge(&args).stdout, rkforge(&args).stdout);
}

#[test]
fn catalog_emit_all_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = rkforge(&["catalog", "--emit-all", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for e in rkforge::tableau::catalog() {
        let t = read_exact(&dir.path().join(format!("{}.json", e.key)));
        assert!(t.same_coefficients(&e.tableau, 0.0), "{}", e.key);
    }
}

#[test]
fn float_tolerance_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mid.json");
    fs::write(
        &path,
        r#"{"name":"mid","stages":1,"scalar":"float","A":[[0.5000001]],"b":[1.0],"c":[0.5]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let strict = stdout(&rkforge(&["show", p]));
    assert!(strict.contains("symplectic: no"));
    let loose = Command::new(env!("CARGO_BIN_EXE_rkforge"))
        .args(["show", p])
        .env("RKFORGE_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(stdout(&loose).contains("symplectic: yes"));
}

#[test]
fn missing_input_is_usage_error() {
    assert_eq!(code(&rkforge(&["show", "/nonexistent/x.json"])), 2);
    assert_eq!(code(&rkforge(&["show", "catalog:nope"])), 2);
}

#[test]
fn integrate_reports_error() {
    let o = rkforge(&[
        "integrate",
        "catalog:euler",
        "--problem",
        "decay",
        "--h",
        "0.5",
        "--T",
        "1",
        "--json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["state"][0], 0.25);
}
