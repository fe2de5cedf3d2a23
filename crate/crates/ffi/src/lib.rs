//! C ABI over `fjlt-core`.
//!
//! Every entry point returns an [`FjltStatus`]. On failure a description is
//! stored per thread and can be read with [`fjlt_last_error_message`]. Plans
//! are exposed as opaque [`FjltPlanHandle`] pointers owned by the caller and
//! released with [`fjlt_plan_free`]. Panics never cross the boundary; they
//! surface as `FJLT_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fjlt_core::chaining::{chain_dimension, ChainingRequest, CoveringModel};
use fjlt_core::fjlt::io::{deserialize_plan, serialize_plan, PLAN_LEN};
use fjlt_core::{fwht_inplace, FjltError, FjltPlan};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FjltStatus {
    Ok = 0,
    Dimension = 1,
    Index = 2,
    InfeasibleDimensions = 3,
    Argument = 4,
    Format = 5,
    Resource = 6,
    Fit = 7,
    Range = 8,
    TruncationUncertain = 9,
    Io = 10,
    NullPointer = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

impl From<&FjltError> for FjltStatus {
    fn from(e: &FjltError) -> Self {
        match e {
            FjltError::Dimension(_) => FjltStatus::Dimension,
            FjltError::Index { .. } => FjltStatus::Index,
            FjltError::InfeasibleDimensions { .. } => FjltStatus::InfeasibleDimensions,
            FjltError::Argument(_) => FjltStatus::Argument,
            FjltError::Format(_) => FjltStatus::Format,
            FjltError::Resource(_) => FjltStatus::Resource,
            FjltError::Fit(_) => FjltStatus::Fit,
            FjltError::Range(_) => FjltStatus::Range,
            FjltError::TruncationUncertain(_) => FjltStatus::TruncationUncertain,
            FjltError::Io(_) => FjltStatus::Io,
        }
    }
}

/// Covering model selector for [`fjlt_chain_dimension`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FjltCoveringKind {
    /// `a` = number of points.
    Finite = 0,
    /// `a` = subspace dimension.
    Subspace = 1,
    /// `a` = ambient dimension, `b` = sparsity.
    Sparse = 2,
}

/// Opaque transform plan.
pub struct FjltPlanHandle {
    plan: FjltPlan,
}

struct Failure {
    status: FjltStatus,
    message: String,
}

impl From<FjltError> for Failure {
    fn from(e: FjltError) -> Self {
        Failure { status: FjltStatus::from(&e), message: e.to_string() }
    }
}

fn fail(status: FjltStatus, message: &str) -> Failure {
    Failure { status, message: message.to_owned() }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard<F>(f: F) -> FjltStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            FjltStatus::Ok
        }
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_last_error("internal panic");
            FjltStatus::Panic
        }
    }
}

unsafe fn plan_ref<'a>(plan: *const FjltPlanHandle) -> Result<&'a FjltPlan, Failure> {
    plan.as_ref()
        .map(|h| &h.plan)
        .ok_or_else(|| fail(FjltStatus::NullPointer, "plan handle is null"))
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fjlt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a plan mapping `R^d` to `R^k`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle pointer.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_new(
    d: usize,
    k: usize,
    seed: u64,
    out: *mut *mut FjltPlanHandle,
) -> FjltStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(FjltStatus::NullPointer, "output pointer is null"));
        }
        let plan = FjltPlan::new(d, k, seed)?;
        *out = Box::into_raw(Box::new(FjltPlanHandle { plan }));
        Ok(())
    })
}

/// Releases a plan. Null is ignored.
///
/// # Safety
/// `plan` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_free(plan: *mut FjltPlanHandle) {
    if !plan.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(plan))));
    }
}

/// Input dimension `d`, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_input_dim(plan: *const FjltPlanHandle) -> usize {
    plan.as_ref().map_or(0, |h| h.plan.input_dim())
}

/// Output dimension `k`, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_output_dim(plan: *const FjltPlanHandle) -> usize {
    plan.as_ref().map_or(0, |h| h.plan.output_dim())
}

/// Master seed the plan was built from.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_seed(plan: *const FjltPlanHandle) -> u64 {
    plan.as_ref().map_or(0, |h| h.plan.master_seed())
}

/// Embeds `x` (length `x_len == d`) into `out` (length `out_len == k`).
///
/// # Safety
/// `x` and `out` must point to `x_len` and `out_len` valid doubles.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_apply(
    plan: *const FjltPlanHandle,
    x: *const f64,
    x_len: usize,
    out: *mut f64,
    out_len: usize,
) -> FjltStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        if x.is_null() || out.is_null() {
            return Err(fail(FjltStatus::NullPointer, "vector pointer is null"));
        }
        if out_len != plan.output_dim() {
            return Err(fail(
                FjltStatus::Dimension,
                &format!("output length {out_len} does not match k={}", plan.output_dim()),
            ));
        }
        let y = plan.apply(slice::from_raw_parts(x, x_len))?;
        slice::from_raw_parts_mut(out, out_len).copy_from_slice(&y);
        Ok(())
    })
}

/// Writes the binary plan into `buf`. `written` always receives the
/// required length; pass a null `buf` to query it.
///
/// # Safety
/// `buf` must be null or point to `buf_len` writable bytes; `written` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_serialize(
    plan: *const FjltPlanHandle,
    buf: *mut u8,
    buf_len: usize,
    written: *mut usize,
) -> FjltStatus {
    guard(|| {
        let plan = plan_ref(plan)?;
        if written.is_null() {
            return Err(fail(FjltStatus::NullPointer, "length pointer is null"));
        }
        *written = PLAN_LEN;
        if buf.is_null() {
            return Ok(());
        }
        if buf_len < PLAN_LEN {
            return Err(fail(
                FjltStatus::BufferTooSmall,
                &format!("plan needs {PLAN_LEN} bytes, buffer has {buf_len}"),
            ));
        }
        let bytes = serialize_plan(plan);
        slice::from_raw_parts_mut(buf, bytes.len()).copy_from_slice(&bytes);
        Ok(())
    })
}

/// Rebuilds a plan from bytes produced by [`fjlt_plan_serialize`].
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fjlt_plan_deserialize(
    bytes: *const u8,
    len: usize,
    out: *mut *mut FjltPlanHandle,
) -> FjltStatus {
    guard(|| {
        if bytes.is_null() || out.is_null() {
            return Err(fail(FjltStatus::NullPointer, "pointer argument is null"));
        }
        let plan = deserialize_plan(slice::from_raw_parts(bytes, len))?;
        *out = Box::into_raw(Box::new(FjltPlanHandle { plan }));
        Ok(())
    })
}

/// Orthonormal Walsh-Hadamard transform of `v` in place; `len` must be a
/// power of two.
///
/// # Safety
/// `v` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fjlt_fwht(v: *mut f64, len: usize) -> FjltStatus {
    guard(|| {
        if v.is_null() {
            return Err(fail(FjltStatus::NullPointer, "vector pointer is null"));
        }
        fwht_inplace(slice::from_raw_parts_mut(v, len))?;
        Ok(())
    })
}

/// Target dimension from the chaining bound. `series` may be null.
///
/// # Safety
/// `k_out` must be valid; `series` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn fjlt_chain_dimension(
    kind: FjltCoveringKind,
    a: u64,
    b: u64,
    eps: f64,
    p: f64,
    c: f64,
    k_out: *mut u64,
    series: *mut f64,
) -> FjltStatus {
    guard(|| {
        if k_out.is_null() {
            return Err(fail(FjltStatus::NullPointer, "output pointer is null"));
        }
        let model = match kind {
            FjltCoveringKind::Finite => CoveringModel::Finite { n: a },
            FjltCoveringKind::Subspace => {
                let m = u32::try_from(a)
                    .map_err(|_| fail(FjltStatus::Argument, "subspace dimension too large"))?;
                CoveringModel::Subspace { m }
            }
            FjltCoveringKind::Sparse => CoveringModel::Sparse { d: a, s: b },
        };
        let mut req = ChainingRequest::new(model, eps, p);
        req.c = c;
        let bound = chain_dimension(&req)?;
        *k_out = bound.k;
        if !series.is_null() {
            *series = bound.series;
        }
        Ok(())
    })
}
