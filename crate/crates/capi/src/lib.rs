//! C ABI over the mrrk integrator.
//!
//! Handles are opaque pointers created and destroyed by this library;
//! results are written through caller-provided out pointers and every
//! function returns an [`MrrkStatus`]. The generated header lives in
//! `include/mrrk.h`.

use mrrk::multirate::{self, MultirateConfig};
use mrrk::problems::{self, ExactSolution, MassSpringChain};
use mrrk::rk::ButcherTableau;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Status code returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrrkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Parameters were rejected (bad chain data, step sizes, grids).
    InvalidArgument = 2,
    /// The integration or the eigensolver failed.
    IntegrationFailed = 3,
    /// An internal panic was caught at the ABI boundary.
    Internal = 4,
}

/// Opaque chain configuration handle.
pub struct MrrkChain {
    chain: MassSpringChain,
}

/// Opaque result handle of one integration.
pub struct MrrkRun {
    t_final: f64,
    positions: Vec<f64>,
    velocities: Vec<f64>,
    slow_calls: u64,
    fast_calls: u64,
    scalar_total: u64,
}

fn classify(err: &mrrk::Error) -> MrrkStatus {
    use mrrk::Error;
    match err {
        Error::InvalidParameter { .. }
        | Error::GridMismatch { .. }
        | Error::NonPositiveStep { .. }
        | Error::InvalidTableau { .. }
        | Error::DimensionMismatch { .. }
        | Error::Config { .. } => MrrkStatus::InvalidArgument,
        _ => MrrkStatus::IntegrationFailed,
    }
}

fn guarded(body: impl FnOnce() -> MrrkStatus) -> MrrkStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(MrrkStatus::Internal)
}

/// Version of the underlying library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mrrk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static human-readable name of a status code.
#[no_mangle]
pub extern "C" fn mrrk_status_name(status: MrrkStatus) -> *const c_char {
    let name: &'static str = match status {
        MrrkStatus::Ok => "ok\0",
        MrrkStatus::NullPointer => "null pointer\0",
        MrrkStatus::InvalidArgument => "invalid argument\0",
        MrrkStatus::IntegrationFailed => "integration failed\0",
        MrrkStatus::Internal => "internal error\0",
    };
    name.as_ptr() as *const c_char
}

/// Create a chain with explicit initial data.
///
/// `x0` and `v0` must point to `n` doubles each. On success `*out` owns the
/// new handle; free it with [`mrrk_chain_free`].
///
/// # Safety
/// `x0` and `v0` must be valid for reads of `n` doubles; `out` must be a
/// valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_chain_new(
    n: usize,
    m1: f64,
    m2: f64,
    k1: f64,
    k2: f64,
    x0: *const f64,
    v0: *const f64,
    out: *mut *mut MrrkChain,
) -> MrrkStatus {
    if out.is_null() || x0.is_null() || v0.is_null() {
        return MrrkStatus::NullPointer;
    }
    let x0 = std::slice::from_raw_parts(x0, n).to_vec();
    let v0 = std::slice::from_raw_parts(v0, n).to_vec();
    guarded(|| match MassSpringChain::new(n, m1, m2, k1, k2, x0, v0) {
        Ok(chain) => {
            unsafe { *out = Box::into_raw(Box::new(MrrkChain { chain })) };
            MrrkStatus::Ok
        }
        Err(e) => classify(&e),
    })
}

/// Create the bundled ten-mass benchmark chain.
///
/// # Safety
/// `out` must be a valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_chain_default(out: *mut *mut MrrkChain) -> MrrkStatus {
    if out.is_null() {
        return MrrkStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(MrrkChain {
        chain: MassSpringChain::default(),
    }));
    MrrkStatus::Ok
}

/// Destroy a chain handle; a null handle is ignored.
///
/// # Safety
/// `chain` must be null or a pointer obtained from a `mrrk_chain_*`
/// constructor that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn mrrk_chain_free(chain: *mut MrrkChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of masses in the chain.
///
/// # Safety
/// `chain` must be a live chain handle; `n` a valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_chain_mass_count(
    chain: *const MrrkChain,
    n: *mut usize,
) -> MrrkStatus {
    let (Some(chain), false) = (chain.as_ref(), n.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    *n = chain.chain.n;
    MrrkStatus::Ok
}

fn finish_run(
    t_final: f64,
    y_slow: &[f64],
    y_fast: &[f64],
    slow_calls: u64,
    fast_calls: u64,
    scalar_total: u64,
    out: *mut *mut MrrkRun,
) -> MrrkStatus {
    let (positions, velocities) = problems::physical_from_blocks(y_slow, y_fast);
    let run = MrrkRun {
        t_final,
        positions,
        velocities,
        slow_calls,
        fast_calls,
        scalar_total,
    };
    unsafe { *out = Box::into_raw(Box::new(run)) };
    MrrkStatus::Ok
}

/// Integrate `[0, t_end]` with the spline-coupled multirate scheme (RK4,
/// macro step `h_macro`, `mrfactor` micro steps per macro step).
///
/// # Safety
/// `chain` must be a live chain handle; `out` a valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_solve_multirate(
    chain: *const MrrkChain,
    t_end: f64,
    h_macro: f64,
    mrfactor: usize,
    out: *mut *mut MrrkRun,
) -> MrrkStatus {
    let (Some(handle), false) = (chain.as_ref(), out.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    guarded(|| {
        let result = problems::build_chain_ivp(&handle.chain, 0.0, t_end).and_then(|ivp| {
            let cfg = MultirateConfig::new(ButcherTableau::rk4(), h_macro, mrfactor);
            multirate::integrate(&ivp, &cfg)
        });
        match result {
            Ok(run) => {
                let (t, y_slow, y_fast) = run.final_state();
                finish_run(
                    t,
                    y_slow,
                    y_fast,
                    run.totals.stage.slow_calls,
                    run.totals.stage.fast_calls,
                    run.totals.stage.scalar_total,
                    out,
                )
            }
            Err(e) => classify(&e),
        }
    })
}

/// Integrate `[0, t_end]` with plain singlerate RK4 at step `h`.
///
/// # Safety
/// `chain` must be a live chain handle; `out` a valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_solve_singlerate(
    chain: *const MrrkChain,
    t_end: f64,
    h: f64,
    out: *mut *mut MrrkRun,
) -> MrrkStatus {
    let (Some(handle), false) = (chain.as_ref(), out.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    guarded(|| {
        let result = problems::build_chain_ivp(&handle.chain, 0.0, t_end).and_then(|ivp| {
            let run = multirate::integrate_singlerate(&ivp, &ButcherTableau::rk4(), h)?;
            let (t, y_end) = run.final_state();
            let (y_slow, y_fast) = ivp.split(y_end)?;
            Ok((t, y_slow.to_vec(), y_fast.to_vec(), run.totals))
        });
        match result {
            Ok((t, y_slow, y_fast, totals)) => finish_run(
                t,
                &y_slow,
                &y_fast,
                totals.slow_calls,
                totals.fast_calls,
                totals.scalar_total,
                out,
            ),
            Err(e) => classify(&e),
        }
    })
}

/// Destroy a run handle; a null handle is ignored.
///
/// # Safety
/// `run` must be null or a pointer obtained from a `mrrk_solve_*` function
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn mrrk_run_free(run: *mut MrrkRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Final time reached by the run.
///
/// # Safety
/// `run` must be a live run handle; `t` a valid write target.
#[no_mangle]
pub unsafe extern "C" fn mrrk_run_final_time(run: *const MrrkRun, t: *mut f64) -> MrrkStatus {
    let (Some(run), false) = (run.as_ref(), t.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    *t = run.t_final;
    MrrkStatus::Ok
}

/// Final positions and velocities, one entry per mass.
///
/// # Safety
/// `run` must be a live run handle; `x` and `v` must be valid for writes of
/// as many doubles as the chain has masses.
#[no_mangle]
pub unsafe extern "C" fn mrrk_run_final_state(
    run: *const MrrkRun,
    x: *mut f64,
    v: *mut f64,
) -> MrrkStatus {
    let (Some(run), false) = (run.as_ref(), x.is_null() || v.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    ptr::copy_nonoverlapping(run.positions.as_ptr(), x, run.positions.len());
    ptr::copy_nonoverlapping(run.velocities.as_ptr(), v, run.velocities.len());
    MrrkStatus::Ok
}

/// Right-hand-side call counters of the run (RK stage calls and their
/// scalar-evaluation total).
///
/// # Safety
/// `run` must be a live run handle; the out pointers valid write targets.
#[no_mangle]
pub unsafe extern "C" fn mrrk_run_eval_counts(
    run: *const MrrkRun,
    slow_calls: *mut u64,
    fast_calls: *mut u64,
    scalar_total: *mut u64,
) -> MrrkStatus {
    let (Some(run), false) = (
        run.as_ref(),
        slow_calls.is_null() || fast_calls.is_null() || scalar_total.is_null(),
    ) else {
        return MrrkStatus::NullPointer;
    };
    *slow_calls = run.slow_calls;
    *fast_calls = run.fast_calls;
    *scalar_total = run.scalar_total;
    MrrkStatus::Ok
}

/// Exact chain state at time `t` from the eigendecomposition solution.
///
/// # Safety
/// `chain` must be a live chain handle; `x` and `v` must be valid for writes
/// of as many doubles as the chain has masses.
#[no_mangle]
pub unsafe extern "C" fn mrrk_exact_solution(
    chain: *const MrrkChain,
    t: f64,
    x: *mut f64,
    v: *mut f64,
) -> MrrkStatus {
    let (Some(handle), false) = (chain.as_ref(), x.is_null() || v.is_null()) else {
        return MrrkStatus::NullPointer;
    };
    guarded(|| match ExactSolution::new(&handle.chain) {
        Ok(solution) => {
            let (xs, vs) = solution.state_at(t);
            ptr::copy_nonoverlapping(xs.as_ptr(), x, xs.len());
            ptr::copy_nonoverlapping(vs.as_ptr(), v, vs.len());
            MrrkStatus::Ok
        }
        Err(e) => classify(&e),
    })
}
