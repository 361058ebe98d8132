use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qig_core::cli::MatrixDocument;
use qig_core::manifold::validate_density;
use tempfile::TempDir;

fn qig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qig")).args(args).output().expect("qig runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn diag(dir: &TempDir, name: &str, d: &[f64]) -> PathBuf {
    let n = d.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n)
                .map(|j| format!("[{}, 0]", if i == j { d[i] } else { 0.0 }))
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    write(dir, name, &format!("{{\"n\": {n}, \"matrix\": [{}]}}", rows.join(", ")))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn document(out: &Output) -> MatrixDocument {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn divergence_of_diagonal_pair() {
    let dir = TempDir::new().unwrap();
    let a = diag(&dir, "a.json", &[0.5, 0.5]);
    let b = diag(&dir, "b.json", &[0.75, 0.25]);
    let out = qig(&["divergence", p(&a), p(&b)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.143841036225890");
    assert_eq!(stdout(&qig(&["divergence", p(&a), p(&a)])).trim(), "0");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let a = diag(&dir, "a.json", &[0.5, 0.5]);
    let nh = write(&dir, "nh.json", r#"{"n": 2, "matrix": [[[0.5, 0], [0.1, 0]], [[0, 0], [0.5, 0]]]}"#);
    let out = qig(&["divergence", p(&nh), p(&a)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotHermitian"));

    let garbage = write(&dir, "g.json", "not json");
    assert_eq!(qig(&["divergence", p(&garbage), p(&a)]).status.code(), Some(2));
    assert_eq!(qig(&["divergence", "/nonexistent.json", p(&a)]).status.code(), Some(2));

    let trace = diag(&dir, "t.json", &[0.5, 0.6]);
    let out = qig(&["divergence", p(&trace), p(&a)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TraceNotOne"));

    let singular = diag(&dir, "s.json", &[1.0, 0.0]);
    let out = qig(&["divergence", p(&singular), p(&a)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Degenerate"));

    let uncentered = diag(&dir, "u.json", &[1.0, 0.0]);
    let out = qig(&["chart-inverse", p(&a), p(&uncentered)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotCentered"));

    let b3 = diag(&dir, "b3.json", &[0.2, 0.3, 0.5]);
    assert_eq!(qig(&["divergence", p(&a), p(&b3)]).status.code(), Some(4));
    assert_eq!(qig(&["transport", p(&a), p(&a), p(&uncentered), "--kind", "m"]).status.code(), Some(4));
    assert_eq!(qig(&["transport", p(&a), p(&a), p(&a), "--kind", "x"]).status.code(), Some(2));
}

#[test]
fn tolerance_override() {
    let dir = TempDir::new().unwrap();
    let a = diag(&dir, "a.json", &[0.5, 0.5]);
    let near = diag(&dir, "n.json", &[0.5, 0.5 + 1e-7]);
    assert_eq!(qig(&["divergence", p(&near), p(&a)]).status.code(), Some(3));
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_qig"))
            .env("QIG_TOL", tol)
            .args(["divergence", p(&near), p(&a)])
            .output()
            .unwrap()
    };
    assert_eq!(run("1e-6").status.code(), Some(0));
    assert_eq!(run("bogus").status.code(), Some(2));
}

#[test]
fn arc_outputs() {
    let dir = TempDir::new().unwrap();
    let a = diag(&dir, "a.json", &[0.5, 0.5]);
    let b = diag(&dir, "b.json", &[0.75, 0.25]);
    let out = qig(&["arc", p(&a), p(&b), "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["matrix"][0][0][0].as_f64().unwrap() - 0.633_974_596_215_561).abs() < 1e-14);
    assert!((v["matrix"][1][1][0].as_f64().unwrap() - 0.366_025_403_784_439).abs() < 1e-14);
    assert!(v["alpha"].as_f64().unwrap() < 0.0);

    let start = document(&qig(&["arc", p(&a), p(&b), "--t", "0"]));
    assert_eq!(start.matrix[0][0], [0.5, 0.0]);

    let grid: Vec<serde_json::Value> = serde_json::from_slice(&qig(&["arc", p(&a), p(&b), "--grid", "4"]).stdout).unwrap();
    assert_eq!(grid.len(), 5);
    assert!((grid[4]["matrix"][0][0][0].as_f64().unwrap() - 0.75).abs() < 1e-15);
    assert_eq!(qig(&["arc", p(&a), p(&b)]).status.code(), Some(2));
    assert_eq!(qig(&["arc", p(&a), p(&b), "--t", "0", "--grid", "2"]).status.code(), Some(2));
}

#[test]
fn wrappers() {
    let dir = TempDir::new().unwrap();
    let a = diag(&dir, "a.json", &[0.5, 0.5]);
    let b = diag(&dir, "b.json", &[0.75, 0.25]);

    let zero = document(&qig(&["chart", p(&b), p(&b)]));
    assert!(zero.matrix.iter().flatten().all(|c| c[0].abs() < 1e-15 && c[1] == 0.0));

    let g: serde_json::Value = serde_json::from_slice(&qig(&["metric-tensor", p(&a)]).stdout).unwrap();
    assert_eq!(g["size"], 3);
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 0.5 } else { 0.0 };
            assert!((g["matrix"][i][j].as_f64().unwrap() - want).abs() < 1e-12);
        }
    }

    let v = write(&dir, "v.json", r#"{"n": 2, "matrix": [[[0.1, 0], [0.2, -0.3]], [[0.2, 0.3], [-0.1, 0]]]}"#);
    let moved = document(&qig(&["transport", p(&a), p(&b), p(&v), "--kind", "m"]));
    assert_eq!(moved.matrix[0][1], [0.2, -0.3]);
    assert_eq!(moved.matrix[0][0], [0.1, 0.0]);
    assert_eq!(qig(&["transport", p(&a), p(&b), p(&v), "--kind", "e"]).status.code(), Some(0));

    let z = diag(&dir, "z.json", &[1.0, -1.0]);
    let phi: serde_json::Value = serde_json::from_slice(&qig(&["potential", p(&a), p(&z)]).stdout).unwrap();
    assert!((phi["value"].as_f64().unwrap() - 1f64.cosh().ln()).abs() < 1e-15);
    assert!((phi["contact"]["matrix"][0][0][0].as_f64().unwrap() - 0.880_797_077_977_882_4).abs() < 1e-15);

    let chart_ab = qig(&["chart", p(&a), p(&b)]);
    let c = write(&dir, "c.json", &stdout(&chart_ab));
    let back = document(&qig(&["chart-inverse", p(&a), p(&c)]));
    assert!((back.matrix[0][0][0] - 0.75).abs() < 1e-14);

    let y = write(&dir, "y.json", &stdout(&qig(&["tangent", p(&a), p(&b)])));
    let kinv = write(&dir, "k.json", &stdout(&qig(&["kubo-inverse", p(&a), p(&y)])));
    let again = document(&qig(&["kubo", p(&a), p(&kinv)]));
    let y_doc: MatrixDocument = serde_json::from_str(&std::fs::read_to_string(&y).unwrap()).unwrap();
    assert!((again.matrix[0][0][0] - y_doc.matrix[0][0][0]).abs() < 1e-14);

    let x: serde_json::Value = serde_json::from_slice(&qig(&["coords", p(&b)]).stdout).unwrap();
    assert!((x["coords"][2].as_f64().unwrap() - 3f64.ln() / 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn random_documents() {
    let first = qig(&["random", "--n", "3", "--seed", "9"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, qig(&["random", "--n", "3", "--seed", "9"]).stdout);
    let doc = document(&first);
    let rho = validate_density(&doc.to_matrix().unwrap()).unwrap();
    let again = MatrixDocument::from_hermitian(rho.matrix());
    for (r, s) in doc.matrix.iter().flatten().zip(again.matrix.iter().flatten()) {
        assert!((r[0] - s[0]).abs() < 1e-15 && (r[1] - s[1]).abs() < 1e-15);
    }

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "r.json", &stdout(&first));
    assert_eq!(stdout(&qig(&["divergence", p(&f), p(&f)])).trim(), "0");
    assert_eq!(qig(&["random", "--n", "1"]).status.code(), Some(2));
    assert_eq!(qig(&["random", "--n", "x"]).status.code(), Some(2));
}

#[test]
fn selftest_variants() {
    let out = qig(&["selftest", "--n", "2", "--samples", "3", "--seed", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports.len(), qig_core::numcheck::CHECK_NAMES.len());
    for r in &reports {
        assert_eq!(r["passed"], true);
        assert!(r["name"].is_string() && r["residual"].is_number() && r["tolerance"].is_number());
    }
    let table = qig(&["selftest", "--n", "2", "--samples", "2"]);
    assert_eq!(table.status.code(), Some(0));
    assert!(stdout(&table).contains("0 failed"));

    let empty = qig(&["selftest", "--samples", "0"]);
    assert_eq!(empty.status.code(), Some(0));

    let broken = qig(&["selftest", "--n", "1", "--samples", "1"]);
    assert_eq!(broken.status.code(), Some(1));
}
