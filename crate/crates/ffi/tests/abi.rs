use std::ffi::CStr;
use std::ptr;

use qig_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qig_last_error_message()) }.to_string_lossy().into_owned()
}

fn diag(d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut v = vec![0.0; 2 * n * n];
    for (i, x) in d.iter().enumerate() {
        v[2 * (i * n + i)] = *x;
    }
    v
}

fn density(d: &[f64]) -> *mut QigDensity {
    let entries = diag(d);
    let mut out = ptr::null_mut();
    let status = unsafe { qig_density_new(d.len(), entries.as_ptr(), entries.len(), 0.0, &mut out) };
    assert_eq!(status, QigStatus::Ok);
    out
}

#[test]
fn divergence_and_arc() {
    let a = density(&[0.5, 0.5]);
    let b = density(&[0.75, 0.25]);
    unsafe {
        assert_eq!(qig_density_dim(a), 2);
        assert_eq!(qig_density_dim(ptr::null()), 0);
        let mut d = 0.0;
        assert_eq!(qig_relative_entropy(a, b, &mut d), QigStatus::Ok);
        assert!((d - 0.143_841_036_225_890_2).abs() < 1e-15);
        assert!(last_error().is_empty());

        let mut mid = ptr::null_mut();
        assert_eq!(qig_arc_point(a, b, 0.5, &mut mid), QigStatus::Ok);
        let mut buf = [0.0; 8];
        assert_eq!(qig_density_copy_entries(mid, buf.as_mut_ptr(), buf.len()), QigStatus::Ok);
        assert!((buf[0] - 0.633_974_596_215_561_4).abs() < 1e-15);
        assert!((buf[6] - 0.366_025_403_784_438_6).abs() < 1e-15);
        let mut alpha = 0.0;
        assert_eq!(qig_arc_alpha(a, b, 0.5, &mut alpha), QigStatus::Ok);
        assert!((alpha + 0.034_668_232_097_537_04).abs() < 1e-15);
        qig_density_free(mid);
        qig_density_free(a);
        qig_density_free(b);
        qig_density_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    unsafe {
        let bad = diag(&[0.5, 0.6]);
        assert_eq!(qig_density_new(2, bad.as_ptr(), bad.len(), 0.0, &mut out), QigStatus::InvalidState);
        assert!(last_error().contains("TraceNotOne"));

        let mut nh = diag(&[0.5, 0.5]);
        nh[2] = 0.1;
        assert_eq!(qig_density_new(2, nh.as_ptr(), nh.len(), 0.0, &mut out), QigStatus::InvalidMatrix);
        assert!(last_error().contains("NotHermitian"));

        assert_eq!(qig_density_new(2, nh.as_ptr(), 3, 0.0, &mut out), QigStatus::InvalidMatrix);
        assert_eq!(qig_density_new(1, nh.as_ptr(), 2, 0.0, &mut out), QigStatus::InvalidMatrix);
        assert_eq!(qig_density_new(2, ptr::null(), 8, 0.0, &mut out), QigStatus::NullPointer);
        assert!(out.is_null());

        let a = density(&[0.5, 0.5]);
        let uncentered = diag(&[1.0, 0.0]);
        assert_eq!(
            qig_chart_inverse(a, uncentered.as_ptr(), uncentered.len(), &mut out),
            QigStatus::ContractViolation
        );
        assert!(last_error().contains("NotCentered"));

        let b3 = density(&[0.2, 0.3, 0.5]);
        let mut d = 0.0;
        assert_eq!(qig_relative_entropy(a, b3, &mut d), QigStatus::ContractViolation);
        let mut small = [0.0; 4];
        assert_eq!(qig_density_copy_entries(a, small.as_mut_ptr(), small.len()), QigStatus::BufferTooSmall);
        assert_eq!(qig_relative_entropy(a, ptr::null(), &mut d), QigStatus::NullPointer);
        qig_density_free(a);
        qig_density_free(b3);
    }
}

#[test]
fn geometry_roundtrips() {
    unsafe {
        let (mut rho, mut sigma, mut tau) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(qig_density_random(3, 1, &mut rho), QigStatus::Ok);
        assert_eq!(qig_density_random(3, 2, &mut sigma), QigStatus::Ok);
        assert_eq!(qig_density_random(3, 3, &mut tau), QigStatus::Ok);
        let len = 18;

        let mut a = vec![0.0; len];
        assert_eq!(qig_chart(rho, sigma, a.as_mut_ptr(), len), QigStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(qig_chart_inverse(rho, a.as_ptr(), len, &mut back), QigStatus::Ok);
        let (mut s1, mut s2) = (vec![0.0; len], vec![0.0; len]);
        qig_density_copy_entries(sigma, s1.as_mut_ptr(), len);
        qig_density_copy_entries(back, s2.as_mut_ptr(), len);
        assert!(s1.iter().zip(&s2).all(|(x, y)| (x - y).abs() < 1e-10));

        let mut y = vec![0.0; len];
        assert_eq!(qig_tangent(rho, sigma, y.as_mut_ptr(), len), QigStatus::Ok);
        let mut ky = vec![0.0; len];
        assert_eq!(qig_kubo(rho, a.as_ptr(), ky.as_mut_ptr(), len), QigStatus::Ok);
        assert!(y.iter().zip(&ky).all(|(x, z)| (x - z).abs() < 1e-12));
        let mut kinv = vec![0.0; len];
        assert_eq!(qig_kubo_inverse(rho, y.as_ptr(), kinv.as_mut_ptr(), len), QigStatus::Ok);
        assert!(a.iter().zip(&kinv).all(|(x, z)| (x - z).abs() < 1e-10));

        let mut moved = vec![0.0; len];
        assert_eq!(
            qig_transport(QigTransportKind::Mixture, rho, tau, y.as_ptr(), moved.as_mut_ptr(), len),
            QigStatus::Ok
        );
        assert_eq!(moved, y);
        assert_eq!(
            qig_transport(QigTransportKind::Exponential, rho, tau, y.as_ptr(), moved.as_mut_ptr(), len),
            QigStatus::Ok
        );

        let mut b = vec![0.0; len];
        qig_chart(rho, tau, b.as_mut_ptr(), len);
        let (mut g, mut via_b) = (0.0, 0.0);
        assert_eq!(qig_inner_tangent(rho, sigma, tau, &mut g), QigStatus::Ok);
        assert_eq!(qig_bogoliubov(rho, a.as_ptr(), b.as_ptr(), len, &mut via_b), QigStatus::Ok);
        assert!((g - via_b).abs() < 1e-11);

        let mut phi = 0.0;
        let mut contact = ptr::null_mut();
        assert_eq!(qig_potential(rho, a.as_ptr(), len, &mut phi, &mut contact), QigStatus::Ok);
        let mut d = 0.0;
        qig_relative_entropy(rho, contact, &mut d);
        assert!((phi - d).abs() < 1e-11);
        assert_eq!(qig_potential(rho, a.as_ptr(), len, &mut phi, ptr::null_mut()), QigStatus::Ok);

        let mut metric = vec![0.0; 64];
        assert_eq!(qig_metric_tensor(rho, metric.as_mut_ptr(), metric.len()), QigStatus::Ok);
        assert!((metric[1] - metric[8]).abs() < 1e-14);
        let mut x = vec![0.0; 8];
        assert_eq!(qig_affine_coords(sigma, x.as_mut_ptr(), x.len()), QigStatus::Ok);
        assert_eq!(qig_affine_coords(sigma, x.as_mut_ptr(), 7), QigStatus::BufferTooSmall);

        for h in [rho, sigma, tau, back, contact] {
            qig_density_free(h);
        }
    }
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/qig.h");
    for symbol in [
        "typedef struct QigDensity QigDensity",
        "QIG_STATUS_OK = 0",
        "QIG_STATUS_CONTRACT_VIOLATION = 4",
        "QIG_TRANSPORT_KIND_EXPONENTIAL",
        "qig_last_error_message",
        "qig_density_new",
        "qig_density_random",
        "qig_density_free",
        "qig_density_copy_entries",
        "qig_relative_entropy",
        "qig_arc_point",
        "qig_arc_alpha",
        "qig_chart",
        "qig_chart_inverse",
        "qig_kubo",
        "qig_kubo_inverse",
        "qig_tangent",
        "qig_transport",
        "qig_bogoliubov",
        "qig_inner_tangent",
        "qig_potential",
        "qig_metric_tensor",
        "qig_affine_coords",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}
