use std::ffi::CStr;
use std::ptr;

use toroid_ffi::*;

#[test]
fn torus_curvatures_through_abi() {
    let mut out = ToroidCurvature::default();
    let st = unsafe { toroid_torus_curvatures(0.5, 1.0, std::f64::consts::FRAC_PI_2, &mut out) };
    assert_eq!(st, ToroidStatus::Ok);
    assert!((out.k1 - 2.0).abs() < 1e-15);
    assert!((out.potential + 0.5).abs() < 1e-14);
    assert_eq!(unsafe { toroid_norm_weight(0.0, &out) }, 1.0);
    assert!(unsafe { toroid_norm_weight(0.1, ptr::null()) }.is_nan());
}

#[test]
fn invalid_radii_sets_last_error() {
    let mut out = ToroidCurvature::default();
    let st = unsafe { toroid_torus_curvatures(2.0, 1.0, 0.0, &mut out) };
    assert_eq!(st, ToroidStatus::InvalidAlpha);
    let mut buf = [0i8; 128];
    let len = unsafe { toroid_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(len > 0);
    let msg = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    assert!(msg.contains("invalid torus radii"), "{msg}");
    let st = unsafe { toroid_torus_curvatures(0.5, 1.0, 0.0, ptr::null_mut()) };
    assert_eq!(st, ToroidStatus::NullPointer);
}

unsafe extern "C" fn sphere_d1(rho: f64, data: *mut std::ffi::c_void) -> f64 {
    let r = *(data as *const f64);
    -rho / (r * r - rho * rho).sqrt()
}

unsafe extern "C" fn sphere_d2(rho: f64, data: *mut std::ffi::c_void) -> f64 {
    let r = *(data as *const f64);
    -r * r / (r * r - rho * rho).powf(1.5)
}

#[test]
fn monge_callbacks() {
    let mut radius = 2.0f64;
    let data = &mut radius as *mut f64 as *mut std::ffi::c_void;
    let mut out = ToroidCurvature::default();
    let st = unsafe { toroid_monge_curvatures(Some(sphere_d1), Some(sphere_d2), data, 0.8, &mut out) };
    assert_eq!(st, ToroidStatus::Ok);
    assert!((out.k1 - 0.5).abs() < 1e-12 && (out.k2 - 0.5).abs() < 1e-12);
    assert!(out.potential.abs() < 1e-12);
    let st = unsafe { toroid_monge_curvatures(Some(sphere_d1), Some(sphere_d2), data, 0.0, &mut out) };
    assert_eq!(st, ToroidStatus::Domain);
    let st = unsafe { toroid_monge_curvatures(None, Some(sphere_d2), data, 1.0, &mut out) };
    assert_eq!(st, ToroidStatus::NullPointer);
}

#[test]
fn spectrum_handle_lifecycle() {
    let mut h: *mut ToroidSpectrum = ptr::null_mut();
    let st = unsafe { toroid_spectrum_solve(0.5, 0, TOROID_PARITY_EVEN, true, 64, &mut h) };
    assert_eq!(st, ToroidStatus::Ok);
    unsafe {
        assert_eq!(toroid_spectrum_len(h), 65);
        assert_eq!(toroid_spectrum_truncation(h), 64);
        assert!(toroid_spectrum_converged(h));
        let mut info = ToroidStateInfo::default();
        assert_eq!(toroid_spectrum_state(h, 0, &mut info), ToroidStatus::Ok);
        assert!((info.beta + 0.3512).abs() < 2e-3);
        assert_eq!(info.node_count, 0);
        assert_eq!(info.coeff_count, 65);
        let mut total = 0usize;
        let mut buf = [0.0f64; 3];
        assert_eq!(toroid_spectrum_coeffs(h, 0, buf.as_mut_ptr(), 3, &mut total), ToroidStatus::Ok);
        assert_eq!(total, 65);
        assert_eq!(buf[0], info.norm_constant);
        assert!((buf[1] / buf[0] + 0.9015 / 2.4509).abs() < 2e-2 * 0.9015 / 2.4509);
        let mut psi = 0.0;
        assert_eq!(toroid_spectrum_eval(h, 0, 0.0, &mut psi), ToroidStatus::Ok);
        assert!(psi > 0.0);
        assert_eq!(toroid_spectrum_state(h, 65, &mut info), ToroidStatus::OutOfRange);
        toroid_spectrum_free(h);
        toroid_spectrum_free(ptr::null_mut());
        assert_eq!(toroid_spectrum_len(ptr::null()), 0);
    }
}

#[test]
fn spectrum_argument_errors() {
    let mut h: *mut ToroidSpectrum = ptr::null_mut();
    unsafe {
        assert_eq!(toroid_spectrum_solve(0.5, 0, 7, true, 64, &mut h), ToroidStatus::InvalidArgument);
        assert_eq!(toroid_spectrum_solve(1.5, 0, 0, true, 64, &mut h), ToroidStatus::InvalidAlpha);
        assert_eq!(toroid_spectrum_solve(0.5, 0, 0, true, 2, &mut h), ToroidStatus::InvalidTruncation);
        assert_eq!(
            toroid_spectrum_converge(0.5, 0, 0, true, 1e-8, 2, &mut h),
            ToroidStatus::InvalidArgument
        );
        assert!(h.is_null());
    }
}

#[test]
fn converge_and_scan() {
    unsafe {
        let mut h: *mut ToroidSpectrum = ptr::null_mut();
        assert_eq!(toroid_spectrum_converge(0.25, 1, 0, false, 1e-8, 8, &mut h), ToroidStatus::Ok);
        let mut info = ToroidStateInfo::default();
        toroid_spectrum_state(h, 0, &mut info);
        assert!((info.beta - 0.0641).abs() < 2e-3);
        toroid_spectrum_free(h);

        let mut t: *mut ToroidBoundTable = ptr::null_mut();
        assert_eq!(toroid_bound_state_scan(0.25, 3, &mut t), ToroidStatus::Ok);
        assert_eq!(toroid_bound_table_len(t), 2);
        assert_eq!(toroid_bound_table_degenerate_count(t), 3);
        assert_eq!(toroid_bound_table_entry(t, 1, &mut info), ToroidStatus::Ok);
        assert_eq!(info.m, 1);
        assert_eq!(info.degeneracy, 2);
        assert_eq!(toroid_bound_table_entry(t, 2, &mut info), ToroidStatus::OutOfRange);
        toroid_bound_table_free(t);

        let mut cut = 99u32;
        assert_eq!(toroid_cutoff_m(0.05, &mut cut), ToroidStatus::Ok);
        assert_eq!(cut, 9);
    }
}

#[test]
fn status_messages() {
    let msg = |c: i32| unsafe { CStr::from_ptr(toroid_status_message(c)) }.to_str().unwrap().to_owned();
    assert_eq!(msg(ToroidStatus::Ok as i32), "ok");
    assert_eq!(msg(ToroidStatus::OutOfRange as i32), "index out of range");
    assert_eq!(msg(-3), "unknown status");
}
