//! C ABI for `lagbasis`.
//!
//! Every function returns an [`LgbStatus`] and writes results through out
//! pointers. On failure the out pointers are left untouched and a message is
//! available from [`lgb_last_error`] on the same thread. Operators are passed
//! as `LGB_OP_*` codes.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lagbasis::hamiltonian::{assemble, coulomb_hamiltonian, solve_spectrum, BlockOperator, OperatorMatrix};
use lagbasis::matrix_elements::{me_exact, me_general};
use lagbasis::special_fn::{gauss_gen_laguerre, QuadratureRule};
use lagbasis::tensor_me::{clebsch_gordan2, reduced_me_gradient, reduced_me_laplacian, GradientForm, LaplacianForm};
use lagbasis::{eval_S, quadrature_me, BasisIndex, Error, LengthScale, OperatorTag};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LgbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Annihilated = 4,
    NotSymmetric = 5,
    Convergence = 6,
    Parse = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

pub const LGB_OP_OVERLAP: u32 = 0;
pub const LGB_OP_R: u32 = 1;
pub const LGB_OP_R2: u32 = 2;
pub const LGB_OP_RINV: u32 = 3;
pub const LGB_OP_RINV2: u32 = 4;
pub const LGB_OP_RDDR: u32 = 5;
pub const LGB_OP_DDR: u32 = 6;
pub const LGB_OP_D2DR2: u32 = 7;
/// Radial part of the Laplacian; accepted by `lgb_assemble` only.
pub const LGB_OP_LAPLACIAN: u32 = 100;

/// A square operator block. Free with `lgb_matrix_free`.
pub struct LgbMatrix(OperatorMatrix);

/// A Gauss-Laguerre rule. Free with `lgb_quadrature_free`.
pub struct LgbQuadrature(QuadratureRule);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Fail {
    Null,
    Lib(Error),
    Status(LgbStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_of(e: &Error) -> LgbStatus {
    match e {
        Error::Domain(_) => LgbStatus::InvalidArgument,
        Error::Unsupported { .. } => LgbStatus::Unsupported,
        Error::Annihilated { .. } => LgbStatus::Annihilated,
        Error::NotSymmetric(_) => LgbStatus::NotSymmetric,
        Error::Convergence(_) => LgbStatus::Convergence,
        Error::Parse(_) => LgbStatus::Parse,
        _ => LgbStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LgbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LgbStatus::Ok
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument");
            LgbStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            LgbStatus::Internal
        }
    }
}

fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    unsafe { out.write(value) };
    Ok(())
}

fn operator(code: u32) -> Result<OperatorTag, Fail> {
    let tag = match code {
        LGB_OP_OVERLAP => OperatorTag::Overlap,
        LGB_OP_R => OperatorTag::R,
        LGB_OP_R2 => OperatorTag::R2,
        LGB_OP_RINV => OperatorTag::RInv,
        LGB_OP_RINV2 => OperatorTag::RInv2,
        LGB_OP_RDDR => OperatorTag::RDdr,
        LGB_OP_DDR => OperatorTag::Ddr,
        LGB_OP_D2DR2 => OperatorTag::D2dr2,
        _ => return Err(Fail::Status(LgbStatus::InvalidArgument, format!("unknown operator code {code}"))),
    };
    Ok(tag)
}

fn scale(b: f64) -> Result<LengthScale, Fail> {
    Ok(LengthScale::new(b)?)
}

fn matrix<'a>(m: *const LgbMatrix) -> Result<&'a OperatorMatrix, Fail> {
    unsafe { m.as_ref() }.map(|m| &m.0).ok_or(Fail::Null)
}

/// Static description of a status code. Never null; do not free.
#[no_mangle]
pub extern "C" fn lgb_status_message(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer argument",
        2 => c"invalid argument",
        3 => c"no closed form for this operator and dl",
        4 => c"shift of an annihilated state",
        5 => c"matrix is not symmetric",
        6 => c"eigensolver did not converge",
        7 => c"parse error",
        8 => c"output buffer too small",
        9 => c"internal error",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or "" after a success.
/// Valid until the next library call on this thread; do not free.
#[no_mangle]
pub extern "C" fn lgb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `<n_bra l_bra|op|n_ket l_ket>` at length scale `b`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_me_general(op: u32, n_bra: u32, l_bra: u32, n_ket: u32, l_ket: u32, b: f64, out: *mut f64) -> LgbStatus {
    guard(|| {
        let v = me_general(operator(op)?, BasisIndex::new(n_bra, l_bra), BasisIndex::new(n_ket, l_ket), scale(b)?)?;
        write(out, v)
    })
}

/// The same element by direct numerical integration; works for any `l` pair.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_quadrature_me(op: u32, n_bra: u32, l_bra: u32, n_ket: u32, l_ket: u32, b: f64, out: *mut f64) -> LgbStatus {
    guard(|| {
        let t = operator(op)?;
        let v = quadrature_me(BasisIndex::new(n_bra, l_bra), BasisIndex::new(n_ket, l_ket), &t.into(), scale(b)?)?;
        write(out, v)
    })
}

/// Exact value at `b = 1` as `p/q*sqrt(r/1)`. Free the string with
/// `lgb_string_free`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_me_exact(op: u32, n_bra: u32, l_bra: u32, n_ket: u32, l_ket: u32, out: *mut *mut c_char) -> LgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let s = me_exact(operator(op)?, BasisIndex::new(n_bra, l_bra), BasisIndex::new(n_ket, l_ket))?;
        let c = CString::new(s.to_string()).map_err(|e| Fail::Status(LgbStatus::Internal, e.to_string()))?;
        write(out, c.into_raw())
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lgb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `S_nl(r)` at length scale `b`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_eval_s(n: u32, l: u32, b: f64, r: f64, out: *mut f64) -> LgbStatus {
    guard(|| write(out, eval_S(BasisIndex::new(n, l), scale(b)?, r)?))
}

/// Reduced element `<n_bra l||nabla^2||n_ket l>`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_reduced_laplacian(n_bra: u32, n_ket: u32, l: u32, b: f64, out: *mut f64) -> LgbStatus {
    guard(|| write(out, reduced_me_laplacian(n_bra, n_ket, l, scale(b)?, LaplacianForm::Assembled)))
}

/// Reduced element `<n_bra l_bra||nabla_1||n_ket l_ket>`; zero unless the
/// angular momenta differ by one.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_reduced_gradient(n_bra: u32, l_bra: u32, n_ket: u32, l_ket: u32, b: f64, out: *mut f64) -> LgbStatus {
    guard(|| {
        let v = reduced_me_gradient(BasisIndex::new(n_bra, l_bra), BasisIndex::new(n_ket, l_ket), scale(b)?, GradientForm::Corrected);
        write(out, v)
    })
}

/// `<j1 m1 j2 m2|j m>` with every argument doubled, so half-integers are odd.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_clebsch_gordan(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32, out: *mut f64) -> LgbStatus {
    guard(|| write(out, clebsch_gordan2(tj1 as i64, tm1 as i64, tj2 as i64, tm2 as i64, tj as i64, tm as i64)))
}

/// Same-`l` block of `op` (an `LGB_OP_*` code, including `LGB_OP_LAPLACIAN`)
/// for `n = 0..=n_max`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_assemble(op: u32, l: u32, n_max: u32, b: f64, out: *mut *mut LgbMatrix) -> LgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let op = if op == LGB_OP_LAPLACIAN { BlockOperator::Laplacian } else { BlockOperator::Radial(operator(op)?) };
        let m = assemble(op, l, n_max, scale(b)?)?;
        write(out, Box::into_raw(Box::new(LgbMatrix(m))))
    })
}

/// `H = -1/2 nabla^2 - Z/r` on the `l` block, `n = 0..=n_max`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_coulomb_hamiltonian(z: f64, b: f64, l: u32, n_max: u32, out: *mut *mut LgbMatrix) -> LgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let m = coulomb_hamiltonian(z, scale(b)?, l, n_max)?;
        write(out, Box::into_raw(Box::new(LgbMatrix(m))))
    })
}

/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_matrix_dim(m: *const LgbMatrix, out: *mut usize) -> LgbStatus {
    guard(|| write(out, matrix(m)?.dim()))
}

/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_matrix_get(m: *const LgbMatrix, row: usize, col: usize, out: *mut f64) -> LgbStatus {
    guard(|| {
        let m = matrix(m)?;
        if row >= m.dim() || col >= m.dim() {
            return Err(Fail::Status(LgbStatus::InvalidArgument, format!("index ({row},{col}) outside {0}x{0}", m.dim())));
        }
        write(out, m.entries[(row, col)])
    })
}

/// Copies the matrix row-major into `buf`, which must hold `dim * dim` values.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_matrix_copy(m: *const LgbMatrix, buf: *mut f64, len: usize) -> LgbStatus {
    guard(|| {
        let m = matrix(m)?;
        let d = m.dim();
        if buf.is_null() {
            return Err(Fail::Null);
        }
        if len < d * d {
            return Err(Fail::Status(LgbStatus::BufferTooSmall, format!("need {} values, got {len}", d * d)));
        }
        let dst = unsafe { std::slice::from_raw_parts_mut(buf, d * d) };
        for i in 0..d {
            for j in 0..d {
                dst[i * d + j] = m.entries[(i, j)];
            }
        }
        Ok(())
    })
}

/// Lowest `count` eigenvalues, ascending, into `buf`; `written` receives how
/// many were stored (fewer than `count` when the block is smaller).
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_matrix_eigenvalues(
    m: *const LgbMatrix,
    count: usize,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> LgbStatus {
    guard(|| {
        let m = matrix(m)?;
        if buf.is_null() || written.is_null() {
            return Err(Fail::Null);
        }
        let want = count.min(m.dim());
        if len < want {
            return Err(Fail::Status(LgbStatus::BufferTooSmall, format!("need {want} values, got {len}")));
        }
        let ev = solve_spectrum(m, count)?;
        unsafe { ptr::copy_nonoverlapping(ev.as_ptr(), buf, ev.len()) };
        write(written, ev.len())
    })
}

/// # Safety
/// `m` must come from `lgb_assemble` or `lgb_coulomb_hamiltonian` and not
/// have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lgb_matrix_free(m: *mut LgbMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `k`-point Gauss rule for the weight `x^alpha e^-x` on `(0, inf)`.
///
/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_quadrature_new(k: usize, alpha: f64, out: *mut *mut LgbQuadrature) -> LgbStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null);
        }
        let rule = gauss_gen_laguerre(k, alpha)?;
        write(out, Box::into_raw(Box::new(LgbQuadrature(rule))))
    })
}

/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_quadrature_len(q: *const LgbQuadrature, out: *mut usize) -> LgbStatus {
    guard(|| {
        let q = unsafe { q.as_ref() }.ok_or(Fail::Null)?;
        write(out, q.0.nodes.len())
    })
}

/// # Safety
/// Out pointers must be null or valid for writes; handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn lgb_quadrature_get(q: *const LgbQuadrature, i: usize, node: *mut f64, weight: *mut f64) -> LgbStatus {
    guard(|| {
        let q = unsafe { q.as_ref() }.ok_or(Fail::Null)?;
        if node.is_null() || weight.is_null() {
            return Err(Fail::Null);
        }
        if i >= q.0.nodes.len() {
            return Err(Fail::Status(LgbStatus::InvalidArgument, format!("node {i} outside rule of order {}", q.0.nodes.len())));
        }
        write(node, q.0.nodes[i])?;
        write(weight, q.0.weights[i])
    })
}

/// # Safety
/// `q` must come from `lgb_quadrature_new` and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn lgb_quadrature_free(q: *mut LgbQuadrature) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}
