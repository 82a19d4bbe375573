//! C ABI for the loewner-pencil library.
//!
//! Opaque handles wrap the Rust objects; every function returns an
//! [`LpStatus`] code and reports detail through a thread-local message
//! readable with [`lp_last_error_message`]. Complex data crosses the
//! boundary as parallel `re`/`im` arrays of `double`, matrices in
//! row-major order. All `_new`/`_build` outputs must be released with the
//! matching `_free`.
//!
//! The committed C header lives at `include/loewner_pencil.h` and is
//! regenerated by the build script when cbindgen is available.

use loewner_pencil::loewner::{
    build_hermite_loewner, build_loewner, hankel_singular_values_via_loewner, HermiteDataSet,
    LoewnerQuadruple, TangentialDataSet,
};
use loewner_pencil::numerics::{c64, C64, ComplexMatrix};
use loewner_pencil::pseudospectra::{default_scales, grid_epsilon, GridRegion, PseudospectraGrid};
use loewner_pencil::sensitivity::{
    eta_report_distinct, eta_report_same_point, rho_unstructured, HermitePencilContext,
    SisoPencilContext,
};
use loewner_pencil::systems::{transfer_eval, SisoPoleResidue, SystemModel};
use loewner_pencil::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CString};

/// Status code returned by every API function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Singular = 4,
    NoConvergence = 5,
    NumericalFailure = 6,
}

/// Which matrix of the quadruple to copy out.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMatrixKind {
    W = 0,
    L = 1,
    Ls = 2,
    V = 3,
}

/// Opaque SISO pole-residue system.
pub struct LpSystem {
    inner: SisoPoleResidue,
}

/// Opaque Loewner quadruple.
pub struct LpQuadruple {
    inner: LoewnerQuadruple,
}

/// Opaque pseudospectra grid.
pub struct LpGrid {
    inner: PseudospectraGrid,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn status_of(err: &Error) -> LpStatus {
    match err {
        Error::Dimension(_) => LpStatus::DimensionMismatch,
        Error::SvdNoConvergence { .. } | Error::EigNoConvergence { .. } => LpStatus::NoConvergence,
        Error::Singular(_) | Error::SingularPencilFactor { .. } | Error::ZeroMatrix => {
            LpStatus::Singular
        }
        Error::InvalidArgument(_) | Error::ScenarioValidation(_) | Error::NonFinite { .. } => {
            LpStatus::InvalidArgument
        }
        _ => LpStatus::NumericalFailure,
    }
}

fn fail(err: Error) -> LpStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

/// Message for the most recent error on this thread. The pointer stays
/// valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn lp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lp_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

unsafe fn slice_complex(re: *const f64, im: *const f64, len: usize) -> Option<Vec<C64>> {
    if len > 0 && (re.is_null() || im.is_null()) {
        return None;
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = std::slice::from_raw_parts(im, len);
    Some(re.iter().zip(im).map(|(&a, &b)| c64(a, b)).collect())
}

unsafe fn write_complex_slice(values: &[C64], out_re: *mut f64, out_im: *mut f64) {
    for (i, z) in values.iter().enumerate() {
        *out_re.add(i) = z.re;
        *out_im.add(i) = z.im;
    }
}

// ---------------------------------------------------------------------------
// Systems
// ---------------------------------------------------------------------------

/// Creates a SISO pole-residue system from `n` poles and residues.
///
/// # Safety
/// `poles_re`, `poles_im`, `residues_re`, `residues_im` must point to `n`
/// readable doubles each; `out` must be a valid writable pointer. The
/// returned handle is released with [`lp_system_free`].
#[no_mangle]
pub unsafe extern "C" fn lp_system_pole_residue_new(
    n: usize,
    poles_re: *const f64,
    poles_im: *const f64,
    residues_re: *const f64,
    residues_im: *const f64,
    out: *mut *mut LpSystem,
) -> LpStatus {
    if out.is_null() {
        set_error("out pointer is null");
        return LpStatus::NullPointer;
    }
    let (Some(poles), Some(residues)) = (
        slice_complex(poles_re, poles_im, n),
        slice_complex(residues_re, residues_im, n),
    ) else {
        set_error("pole/residue arrays are null");
        return LpStatus::NullPointer;
    };
    match SisoPoleResidue::new(poles, residues) {
        Ok(sys) => {
            *out = Box::into_raw(Box::new(LpSystem { inner: sys }));
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `handle` must be null or a pointer returned by
/// [`lp_system_pole_residue_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lp_system_free(handle: *mut LpSystem) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of poles; 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live system handle.
#[no_mangle]
pub unsafe extern "C" fn lp_system_order(handle: *const LpSystem) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).inner.order()
}

/// Evaluates the transfer function at `s`.
///
/// # Safety
/// `handle` must be a live system handle; `out_re`, `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_system_transfer_eval(
    handle: *const LpSystem,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LpStatus {
    if handle.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let sys = SystemModel::PoleResidue((*handle).inner.clone());
    match transfer_eval(&sys, c64(s_re, s_im)) {
        Ok(h) => {
            *out_re = h[(0, 0)].re;
            *out_im = h[(0, 0)].im;
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// Quadruples
// ---------------------------------------------------------------------------

/// Samples the system at distinct left/right points and builds the
/// Loewner quadruple.
///
/// # Safety
/// Point arrays must hold `q` (respectively `k`) readable doubles; `out`
/// must be writable. Release the handle with [`lp_quadruple_free`].
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_build(
    system: *const LpSystem,
    q: usize,
    mu_re: *const f64,
    mu_im: *const f64,
    k: usize,
    lambda_re: *const f64,
    lambda_im: *const f64,
    out: *mut *mut LpQuadruple,
) -> LpStatus {
    if system.is_null() || out.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let (Some(mu), Some(lambda)) =
        (slice_complex(mu_re, mu_im, q), slice_complex(lambda_re, lambda_im, k))
    else {
        set_error("point arrays are null");
        return LpStatus::NullPointer;
    };
    let sys = SystemModel::PoleResidue((*system).inner.clone());
    let result = TangentialDataSet::sample_siso(&sys, mu, lambda).and_then(|d| build_loewner(&d));
    match result {
        Ok(quad) => {
            *out = Box::into_raw(Box::new(LpQuadruple { inner: quad }));
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Same-point (Hermite) quadruple: values and derivatives at `mu`.
///
/// # Safety
/// As [`lp_quadruple_build`], with `q` points.
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_build_hermite(
    system: *const LpSystem,
    q: usize,
    mu_re: *const f64,
    mu_im: *const f64,
    out: *mut *mut LpQuadruple,
) -> LpStatus {
    if system.is_null() || out.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let Some(mu) = slice_complex(mu_re, mu_im, q) else {
        set_error("point array is null");
        return LpStatus::NullPointer;
    };
    let sys = SystemModel::PoleResidue((*system).inner.clone());
    let result = HermiteDataSet::sample(&sys, mu).and_then(|d| build_hermite_loewner(&d));
    match result {
        Ok(quad) => {
            *out = Box::into_raw(Box::new(LpQuadruple { inner: quad }));
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `handle` must be null or a live quadruple handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_free(handle: *mut LpQuadruple) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn pick_matrix(quad: &LoewnerQuadruple, which: LpMatrixKind) -> &ComplexMatrix {
    match which {
        LpMatrixKind::W => &quad.w,
        LpMatrixKind::L => &quad.l,
        LpMatrixKind::Ls => &quad.ls,
        LpMatrixKind::V => &quad.v,
    }
}

/// Dimensions of one quadruple matrix.
///
/// # Safety
/// `handle` live; `rows`, `cols` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_matrix_dims(
    handle: *const LpQuadruple,
    which: LpMatrixKind,
    rows: *mut usize,
    cols: *mut usize,
) -> LpStatus {
    if handle.is_null() || rows.is_null() || cols.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let m = pick_matrix(&(*handle).inner, which);
    *rows = m.rows();
    *cols = m.cols();
    LpStatus::Ok
}

/// Copies one quadruple matrix out, row major.
///
/// # Safety
/// `out_re`, `out_im` must hold rows*cols writable doubles (query the
/// dims with [`lp_quadruple_matrix_dims`]).
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_matrix(
    handle: *const LpQuadruple,
    which: LpMatrixKind,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LpStatus {
    if handle.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let m = pick_matrix(&(*handle).inner, which);
    write_complex_slice(m.data(), out_re, out_im);
    LpStatus::Ok
}

/// Eigenvalues of the pencil (Ls, L): the model poles. Needs a square
/// quadruple with invertible L; writes rows(L) values.
///
/// # Safety
/// `out_re`, `out_im` must hold rows(L) writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_pencil_eigenvalues(
    handle: *const LpQuadruple,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LpStatus {
    if handle.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    match (*handle).inner.pencil_eigenvalues() {
        Ok(eig) => {
            write_complex_slice(&eig.values, out_re, out_im);
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Evaluates the recovered transfer function `W (Ls - sL)^+ V` at `s`
/// (SISO quadruple: scalar out).
///
/// # Safety
/// `handle` live; `out_re`, `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_quadruple_recover_transfer(
    handle: *const LpQuadruple,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> LpStatus {
    if handle.is_null() || out_re.is_null() || out_im.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    match (*handle).inner.recover_transfer(c64(s_re, s_im)) {
        Ok(h) => {
            *out_re = h[(0, 0)].re;
            *out_im = h[(0, 0)].im;
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// Sensitivities
// ---------------------------------------------------------------------------

/// Unstructured sensitivity rho and its per-pole bound for the pencil
/// sampled at the given points; writes order(system) doubles into each
/// non-null output.
///
/// # Safety
/// Arrays per [`lp_quadruple_build`]; `out_rho`, `out_bound` must each be
/// null or hold order(system) writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_sensitivity_rho(
    system: *const LpSystem,
    q: usize,
    mu_re: *const f64,
    mu_im: *const f64,
    k: usize,
    lambda_re: *const f64,
    lambda_im: *const f64,
    out_rho: *mut f64,
    out_bound: *mut f64,
) -> LpStatus {
    if system.is_null() {
        set_error("null system");
        return LpStatus::NullPointer;
    }
    let (Some(mu), Some(lambda)) =
        (slice_complex(mu_re, mu_im, q), slice_complex(lambda_re, lambda_im, k))
    else {
        set_error("point arrays are null");
        return LpStatus::NullPointer;
    };
    let result = SisoPencilContext::new(&(*system).inner, mu, lambda)
        .and_then(|ctx| rho_unstructured(&ctx, None));
    match result {
        Ok(report) => {
            for (i, r) in report.rho.iter().enumerate() {
                if !out_rho.is_null() {
                    *out_rho.add(i) = *r;
                }
                if !out_bound.is_null() {
                    *out_bound.add(i) = report.bound_per_pole[i];
                }
            }
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Structured sensitivity eta per pole for distinct points; writes
/// order(system) doubles.
///
/// # Safety
/// Arrays per [`lp_sensitivity_rho`]; `out_eta` writable.
#[no_mangle]
pub unsafe extern "C" fn lp_sensitivity_eta(
    system: *const LpSystem,
    q: usize,
    mu_re: *const f64,
    mu_im: *const f64,
    k: usize,
    lambda_re: *const f64,
    lambda_im: *const f64,
    out_eta: *mut f64,
) -> LpStatus {
    if system.is_null() || out_eta.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let (Some(mu), Some(lambda)) =
        (slice_complex(mu_re, mu_im, q), slice_complex(lambda_re, lambda_im, k))
    else {
        set_error("point arrays are null");
        return LpStatus::NullPointer;
    };
    let result = SisoPencilContext::new(&(*system).inner, mu, lambda)
        .and_then(|ctx| eta_report_distinct(&ctx, &[]));
    match result {
        Ok(report) => {
            for (i, e) in report.eta.iter().enumerate() {
                *out_eta.add(i) = *e;
            }
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Same-point (value + derivative) structured sensitivity eta.
///
/// # Safety
/// As [`lp_sensitivity_eta`] with `q` points.
#[no_mangle]
pub unsafe extern "C" fn lp_sensitivity_eta_hermite(
    system: *const LpSystem,
    q: usize,
    mu_re: *const f64,
    mu_im: *const f64,
    out_eta: *mut f64,
) -> LpStatus {
    if system.is_null() || out_eta.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let Some(mu) = slice_complex(mu_re, mu_im, q) else {
        set_error("point array is null");
        return LpStatus::NullPointer;
    };
    let result = HermitePencilContext::new(&(*system).inner, mu)
        .and_then(|ctx| eta_report_same_point(&ctx, &[]));
    match result {
        Ok(report) => {
            for (i, e) in report.eta.iter().enumerate() {
                *out_eta.add(i) = *e;
            }
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Hankel singular values via the mirrored-point Loewner matrix; writes
/// order(system) doubles, sorted non-increasing.
///
/// # Safety
/// `out` must hold order(system) writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_hankel_singular_values(
    system: *const LpSystem,
    out: *mut f64,
) -> LpStatus {
    if system.is_null() || out.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    match hankel_singular_values_via_loewner(&(*system).inner) {
        Ok(sv) => {
            for (i, s) in sv.iter().enumerate() {
                *out.add(i) = *s;
            }
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

// ---------------------------------------------------------------------------
// Pseudospectra
// ---------------------------------------------------------------------------

/// Samples the pseudospectra surface of the quadruple's pencil on an
/// nx-by-ny grid. Pass `nu <= 0` or `delta <= 0` to use the defaults
/// `||L||_2` and `||Ls||_2`.
///
/// # Safety
/// `quadruple` live; `out` writable. Release with [`lp_grid_free`].
#[no_mangle]
pub unsafe extern "C" fn lp_pseudospectra_grid_new(
    quadruple: *const LpQuadruple,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    nx: usize,
    ny: usize,
    nu: f64,
    delta: f64,
    out: *mut *mut LpGrid,
) -> LpStatus {
    if quadruple.is_null() || out.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let quad = &(*quadruple).inner;
    let result = GridRegion::new(re_min, re_max, im_min, im_max).and_then(|region| {
        let (nu_default, delta_default) = default_scales(&quad.ls, &quad.l)?;
        let nu = if nu > 0.0 { nu } else { nu_default };
        let delta = if delta > 0.0 { delta } else { delta_default };
        grid_epsilon(&quad.ls, &quad.l, region, nx, ny, nu, delta)
    });
    match result {
        Ok(grid) => {
            *out = Box::into_raw(Box::new(LpGrid { inner: grid }));
            LpStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `handle` must be null or a live grid handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lp_grid_free(handle: *mut LpGrid) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Copies the ny-by-nx epsilon surface out, row major over iy then ix.
///
/// # Safety
/// `out` must hold nx*ny writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lp_grid_values(handle: *const LpGrid, out: *mut f64) -> LpStatus {
    if handle.is_null() || out.is_null() {
        set_error("null pointer");
        return LpStatus::NullPointer;
    }
    let grid = &(*handle).inner;
    for (i, v) in grid.values.data().iter().enumerate() {
        *out.add(i) = *v;
    }
    LpStatus::Ok
}
