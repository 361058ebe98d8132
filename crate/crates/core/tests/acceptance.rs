//! Acceptance run: every criterion on n ∈ {2, 3, 4, 8}, 50 samples, seed 42.
//!
//! Prints one PASS/FAIL line per criterion, then fails if any criterion did.

use std::collections::HashMap;
use std::process::Command;

use qig_core::coords::{gellmann_basis, metric_tensor};
use qig_core::numcheck::{run_suite, CheckReport};
use qig_core::{DensityMatrix, HermitianMatrix};

const DIMS: [usize; 4] = [2, 3, 4, 8];
const SAMPLES: usize = 50;
const SEED: u64 = 42;

/// (criterion, [(check, bound on its residual)]).
fn criteria() -> Vec<(&'static str, Vec<(&'static str, f64)>)> {
    vec![
        ("1 arc endpoints and normalization", vec![("arc_endpoints", 1e-11)]),
        ("2 kubo roundtrip and quadrature", vec![("kubo_roundtrip", 1e-11), ("kubo_quadrature", 1e-10)]),
        (
            "3 chart roundtrip, centering, transitions",
            vec![
                ("chart_roundtrip", 1e-10),
                ("chart_centering", 1e-12),
                ("chart_transition", 1e-10),
                ("chart_transition_roundtrip", 1e-10),
            ],
        ),
        (
            "4 bogoliubov product and eguchi construction",
            vec![
                ("bogoliubov_symmetry", 1e-12),
                ("bogoliubov_bilinearity", 1e-11),
                ("bogoliubov_positivity", 1e-12),
                ("eguchi_fd", 1e-5),
                ("eguchi_fd_diagonal", 1e-5),
                // |log10(ratio / 100)| <= log10 2  ⇔  ratio ∈ [50, 200].
                ("eguchi_convergence", std::f64::consts::LOG10_2),
            ],
        ),
        (
            "5 transport duality and flatness",
            vec![("transport_duality", 1e-11), ("e_transport_flatness", 1e-11)],
        ),
        (
            "6 geodesics",
            vec![("m_geodesic_residual", 0.0), ("e_geodesic_residual", 1e-10)],
        ),
        (
            "7 legendre structure",
            vec![
                ("potential_divergence", 1e-11),
                ("legendre_supremum", 1e-11),
                ("legendre_gap_divergence", 1e-10),
                ("potential_convexity", 1e-11),
            ],
        ),
        (
            "8 frechet derivatives",
            vec![("potential_derivative_fd", 1e-8), ("tau_derivative_fd", 1e-8)],
        ),
        ("9 mixed identity", vec![("mixed_identity", 1e-10)]),
        (
            "10 coordinates",
            vec![
                ("gellmann_orthonormality", 1e-12),
                ("metric_tensor_maximally_mixed", 1e-12),
                ("quadratic_form", 1e-10),
                ("dual_pairing", 1e-10),
            ],
        ),
    ]
}

fn check_criterion(by_name: &HashMap<&str, Vec<&CheckReport>>, checks: &[(&str, f64)]) -> (bool, String) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, bound) in checks {
        let Some(reports) = by_name.get(name) else {
            return (false, format!("missing check {name}"));
        };
        if reports.len() != DIMS.len() {
            ok = false;
        }
        let worst = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
        let pass = reports.iter().all(|r| r.passed && r.residual <= *bound && r.tolerance <= *bound);
        ok &= pass;
        detail.push(format!("{name}={worst:.2e}"));
    }
    (ok, detail.join(" "))
}

fn maximally_mixed_qubit() -> (bool, String) {
    let mixed = DensityMatrix::from_hermitian(HermitianMatrix::identity(2).scale(0.5), 1e-12).unwrap();
    let g = metric_tensor(&mixed, &gellmann_basis(2).unwrap()).unwrap();
    let dev = (&g.entries - nalgebra::DMatrix::<f64>::identity(3, 3).scale(0.5)).amax();
    (g.size() == 3 && dev <= 1e-12, format!("g(1/2)-0.5*I={dev:.2e}"))
}

fn selftest_json() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_qig"))
        .args(["selftest", "--json"])
        .output()
        .expect("qig runs");
    assert!(out.status.code().is_some());
    out.stdout
}

#[test]
fn acceptance() {
    let reports = run_suite(&DIMS, SAMPLES, SEED);
    let mut by_name: HashMap<&str, Vec<&CheckReport>> = HashMap::new();
    for r in &reports {
        by_name.entry(r.name.as_str()).or_default().push(r);
    }

    let mut lines = Vec::new();
    for (label, checks) in criteria() {
        let (mut ok, mut detail) = check_criterion(&by_name, &checks);
        if label.starts_with("10 ") {
            let (qubit_ok, qubit_detail) = maximally_mixed_qubit();
            ok &= qubit_ok;
            detail = format!("{detail} {qubit_detail}");
        }
        lines.push((label.to_string(), ok, detail));
    }

    let first = selftest_json();
    let second = selftest_json();
    let same_suite = run_suite(&DIMS, SAMPLES, SEED) == reports;
    let deterministic = !first.is_empty() && first == second && same_suite;
    lines.push((
        "11 selftest determinism".to_string(),
        deterministic,
        format!("{} bytes, identical={}", first.len(), first == second),
    ));

    for (label, ok, detail) in &lines {
        println!("{} criterion {label}: {detail}", if *ok { "PASS" } else { "FAIL" });
    }
    let failed: Vec<&str> = lines.iter().filter(|l| !l.1).map(|l| l.0.as_str()).collect();
    let other_failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} (n={})", r.name, r.metadata["n"]))
        .collect();
    println!("other suite failures: {}", if other_failures.is_empty() { "none".into() } else { other_failures.join(", ") });
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(other_failures.is_empty(), "failed checks: {other_failures:?}");
}
