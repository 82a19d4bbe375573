//! Exercises the C ABI through the exported extern "C" functions, plus a
//! compile-link-run smoke test of the generated header with a real C
//! compiler.

use loewner_pencil_capi::*;
use std::ffi::CStr;
use std::ptr;

fn example1() -> *mut LpSystem {
    let poles_re = [-2.1, -0.1];
    let poles_im = [0.0, 0.0];
    let res_re = [0.5, 0.5];
    let res_im = [0.0, 0.0];
    let mut handle: *mut LpSystem = ptr::null_mut();
    let status = unsafe {
        lp_system_pole_residue_new(
            2,
            poles_re.as_ptr(),
            poles_im.as_ptr(),
            res_re.as_ptr(),
            res_im.as_ptr(),
            &mut handle,
        )
    };
    assert_eq!(status, LpStatus::Ok);
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_non_empty() {
    let v = unsafe { CStr::from_ptr(lp_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn system_lifecycle_and_eval() {
    let sys = example1();
    assert_eq!(unsafe { lp_system_order(sys) }, 2);
    let (mut re, mut im) = (0.0, 0.0);
    let status = unsafe { lp_system_transfer_eval(sys, 0.0, 0.0, &mut re, &mut im) };
    assert_eq!(status, LpStatus::Ok);
    // H(0) = 0.5/2.1 + 0.5/0.1.
    assert!((re - (0.5 / 2.1 + 0.5 / 0.1)).abs() < 1e-12);
    assert!(im.abs() < 1e-15);
    unsafe { lp_system_free(sys) };
}

#[test]
fn invalid_system_reports_message() {
    // Zero residue is rejected.
    let poles_re = [-1.0];
    let poles_im = [0.0];
    let res_re = [0.0];
    let res_im = [0.0];
    let mut handle: *mut LpSystem = ptr::null_mut();
    let status = unsafe {
        lp_system_pole_residue_new(
            1,
            poles_re.as_ptr(),
            poles_im.as_ptr(),
            res_re.as_ptr(),
            res_im.as_ptr(),
            &mut handle,
        )
    };
    assert_eq!(status, LpStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(lp_last_error_message()) };
    assert!(msg.to_str().unwrap().contains("residue"));
}

#[test]
fn quadruple_pencil_and_recovery() {
    let sys = example1();
    let mu_re = [0.0, 0.0];
    let mu_im = [1.0, -1.0];
    let lam_re = [0.0, 1.0];
    let lam_im = [0.0, 0.0];
    let mut quad: *mut LpQuadruple = ptr::null_mut();
    let status = unsafe {
        lp_quadruple_build(
            sys,
            2,
            mu_re.as_ptr(),
            mu_im.as_ptr(),
            2,
            lam_re.as_ptr(),
            lam_im.as_ptr(),
            &mut quad,
        )
    };
    assert_eq!(status, LpStatus::Ok);

    let (mut rows, mut cols) = (0usize, 0usize);
    unsafe { lp_quadruple_matrix_dims(quad, LpMatrixKind::L, &mut rows, &mut cols) };
    assert_eq!((rows, cols), (2, 2));
    let mut l_re = [0.0; 4];
    let mut l_im = [0.0; 4];
    let status = unsafe { lp_quadruple_matrix(quad, LpMatrixKind::L, l_re.as_mut_ptr(), l_im.as_mut_ptr()) };
    assert_eq!(status, LpStatus::Ok);
    assert!(l_re.iter().any(|&x| x != 0.0));

    let mut ev_re = [0.0; 2];
    let mut ev_im = [0.0; 2];
    let status = unsafe { lp_quadruple_pencil_eigenvalues(quad, ev_re.as_mut_ptr(), ev_im.as_mut_ptr()) };
    assert_eq!(status, LpStatus::Ok);
    let mut evs: Vec<f64> = ev_re.to_vec();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((evs[0] + 2.1).abs() < 1e-9 && (evs[1] + 0.1).abs() < 1e-9, "{evs:?}");

    let (mut hre, mut him) = (0.0, 0.0);
    let status = unsafe { lp_quadruple_recover_transfer(quad, 2.0, 0.0, &mut hre, &mut him) };
    assert_eq!(status, LpStatus::Ok);
    let want = 0.5 / 4.1 + 0.5 / 2.1;
    assert!((hre - want).abs() < 1e-10 && him.abs() < 1e-10);

    unsafe { lp_quadruple_free(quad) };
    unsafe { lp_system_free(sys) };
}

#[test]
fn sensitivities_match_tabulated_values() {
    let sys = example1();
    let mu_re = [0.0, 0.0];
    let mu_im = [1.0, -1.0];
    let lam_re = [0.0, 1.0];
    let lam_im = [0.0, 0.0];
    let mut rho = [0.0; 2];
    let mut bound = [0.0; 2];
    let status = unsafe {
        lp_sensitivity_rho(
            sys,
            2,
            mu_re.as_ptr(),
            mu_im.as_ptr(),
            2,
            lam_re.as_ptr(),
            lam_im.as_ptr(),
            rho.as_mut_ptr(),
            bound.as_mut_ptr(),
        )
    };
    assert_eq!(status, LpStatus::Ok);
    assert!((rho[0] - 2.202e2).abs() / 2.202e2 < 5e-3, "rho_1 = {}", rho[0]);
    assert!((rho[1] - 5.609e-1).abs() / 5.609e-1 < 5e-3, "rho_2 = {}", rho[1]);
    assert!((bound[0] - 4.348e2).abs() / 4.348e2 < 5e-3);

    let mut eta = [0.0; 2];
    let status = unsafe {
        lp_sensitivity_eta(
            sys,
            2,
            mu_re.as_ptr(),
            mu_im.as_ptr(),
            2,
            lam_re.as_ptr(),
            lam_im.as_ptr(),
            eta.as_mut_ptr(),
        )
    };
    assert_eq!(status, LpStatus::Ok);
    assert!(eta.iter().all(|&e| e > 0.0));
    unsafe { lp_system_free(sys) };
}

#[test]
fn hankel_singular_value_of_one_pole_system() {
    let poles_re = [-1.0];
    let poles_im = [0.0];
    let res_re = [1.0];
    let res_im = [0.0];
    let mut sys: *mut LpSystem = ptr::null_mut();
    unsafe {
        lp_system_pole_residue_new(
            1,
            poles_re.as_ptr(),
            poles_im.as_ptr(),
            res_re.as_ptr(),
            res_im.as_ptr(),
            &mut sys,
        )
    };
    let mut sv = [0.0];
    let status = unsafe { lp_hankel_singular_values(sys, sv.as_mut_ptr()) };
    assert_eq!(status, LpStatus::Ok);
    assert!((sv[0] - 0.5).abs() < 1e-12);
    unsafe { lp_system_free(sys) };
}

#[test]
fn pseudospectra_grid_through_the_abi() {
    let sys = example1();
    let mu_re = [0.0, 0.0];
    let mu_im = [1.0, -1.0];
    let lam_re = [0.0, 1.0];
    let lam_im = [0.0, 0.0];
    let mut quad: *mut LpQuadruple = ptr::null_mut();
    unsafe {
        lp_quadruple_build(
            sys,
            2,
            mu_re.as_ptr(),
            mu_im.as_ptr(),
            2,
            lam_re.as_ptr(),
            lam_im.as_ptr(),
            &mut quad,
        )
    };
    let mut grid: *mut LpGrid = ptr::null_mut();
    let status = unsafe {
        lp_pseudospectra_grid_new(quad, -3.0, 1.0, -1.0, 1.0, 21, 11, -1.0, -1.0, &mut grid)
    };
    assert_eq!(status, LpStatus::Ok);
    let mut values = vec![0.0; 21 * 11];
    let status = unsafe { lp_grid_values(grid, values.as_mut_ptr()) };
    assert_eq!(status, LpStatus::Ok);
    assert!(values.iter().all(|&v| v >= 0.0));
    assert!(values.iter().any(|&v| v > 0.0));
    unsafe { lp_grid_free(grid) };
    unsafe { lp_quadruple_free(quad) };
    unsafe { lp_system_free(sys) };
}

#[test]
fn null_pointers_are_rejected_not_fatal() {
    let status = unsafe {
        lp_system_pole_residue_new(1, ptr::null(), ptr::null(), ptr::null(), ptr::null(), ptr::null_mut())
    };
    assert_eq!(status, LpStatus::NullPointer);
    unsafe {
        lp_system_free(ptr::null_mut());
        lp_quadruple_free(ptr::null_mut());
        lp_grid_free(ptr::null_mut());
    }
    assert_eq!(unsafe { lp_system_order(ptr::null()) }, 0);
}

/// Compiles a small C program against the generated header and the cdylib
/// and checks its output end to end.
#[test]
fn c_program_links_and_runs() {
    let target_dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("target")
        .join(if cfg!(debug_assertions) { "debug" } else { "release" });
    let lib = target_dir.join("libloewner_pencil_capi.so");
    if !lib.exists() {
        // The cdylib is produced by `cargo build`; `cargo test` alone may
        // not have linked it yet on a fresh tree.
        let ok = std::process::Command::new(env!("CARGO"))
            .args(["build", "-p", "loewner-pencil-capi"])
            .status()
            .map(|s| s.success())
            .unwrap_or(false);
        assert!(ok, "building the cdylib failed");
    }
    let include_dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let work = std::env::temp_dir().join(format!("lp-capi-c-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let c_path = work.join("smoke.c");
    std::fs::write(
        &c_path,
        r#"
#include "loewner_pencil.h"
#include <stdio.h>

int main(void) {
    double pre[2] = {-2.1, -0.1}, pim[2] = {0.0, 0.0};
    double rre[2] = {0.5, 0.5}, rim[2] = {0.0, 0.0};
    LpSystem *sys = NULL;
    if (lp_system_pole_residue_new(2, pre, pim, rre, rim, &sys) != LP_STATUS_OK) return 1;
    double mre[2] = {0.0, 0.0}, mim[2] = {1.0, -1.0};
    double lre[2] = {0.0, 1.0}, lim[2] = {0.0, 0.0};
    double rho[2] = {0.0, 0.0};
    if (lp_sensitivity_rho(sys, 2, mre, mim, 2, lre, lim, rho, NULL) != LP_STATUS_OK) return 2;
    printf("rho %.4e %.4e\n", rho[0], rho[1]);
    lp_system_free(sys);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = work.join("smoke");
    let status = std::process::Command::new("cc")
        .arg(&c_path)
        .arg("-I")
        .arg(&include_dir)
        .arg("-L")
        .arg(&target_dir)
        .arg("-lloewner_pencil_capi")
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success(), "C compilation failed");
    let out = std::process::Command::new(&exe)
        .env("LD_LIBRARY_PATH", &target_dir)
        .output()
        .expect("smoke test runs");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("2.2019e+02") || text.contains("2.202e+02"), "stdout: {text}");
    std::fs::remove_dir_all(work).ok();
}
