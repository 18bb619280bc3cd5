//! C ABI for the `spinring` simulator.
//!
//! Networks live behind an opaque [`SpinringNetwork`] handle created from a
//! JSON configuration. Every fallible call returns a [`SpinringStatus`]; on
//! failure a message is kept per thread and can be read with
//! [`spinring_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinring::analysis::{cluster_sum, reduced_bloch, sum_rule_check, SUM_RULE_QUBIT_LIMIT};
use spinring::network::{run_from_step, NetworkConfig, NetworkConfigFile};
use spinring::primitives::RecursionState;
use spinring::statevec::StateVector;
use spinring::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinringStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or a configuration that fails validation.
    InvalidConfig = 3,
    /// Qubit index, subset or dimension out of range.
    OutOfRange = 4,
    /// Request exceeds a size guard.
    TooLarge = 5,
    /// Output buffer shorter than required.
    BufferTooSmall = 6,
    /// Numerical check failed.
    Numeric = 7,
    Internal = 8,
}

/// Opaque network: configuration, current state and steps done per agent.
pub struct SpinringNetwork {
    config: NetworkConfig,
    state: StateVector,
    steps: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SpinringStatus {
    match err {
        Error::InvalidConfig(_)
        | Error::Json(_)
        | Error::InvalidPattern(_)
        | Error::InvalidWeights(_)
        | Error::Io(_) => SpinringStatus::InvalidConfig,
        Error::DimensionMismatch { .. }
        | Error::IndexOutOfRange { .. }
        | Error::SameQubit(_)
        | Error::StepOutOfRange { .. }
        | Error::EmptySubset
        | Error::EmptyOrbit
        | Error::MissingTrajectory(_)
        | Error::TrajectoryTooShort { .. }
        | Error::MissingHistory { .. } => SpinringStatus::OutOfRange,
        Error::DenseGuard { .. } | Error::EnumerationGuard { .. } => SpinringStatus::TooLarge,
        Error::NotNormalized(_) | Error::NonHermitian(_) => SpinringStatus::Numeric,
    }
}

/// Runs `body`, recording errors and catching panics.
fn guarded<F>(body: F) -> SpinringStatus
where
    F: FnOnce() -> Result<(), (SpinringStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SpinringStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SpinringStatus::Internal
        }
    }
}

fn lib<T>(r: spinring::Result<T>) -> Result<T, (SpinringStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (SpinringStatus, String) {
    (SpinringStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(
    h: *const SpinringNetwork,
) -> Result<&'a SpinringNetwork, (SpinringStatus, String)> {
    h.as_ref().ok_or_else(|| null("network handle"))
}

/// Creates a network from a JSON configuration (keys `K`, `M`, `theta`,
/// `alpha`, `offsets`, `schedule`, `initial`; `steps` is ignored).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer. On
/// success `*out` owns a handle to release with [`spinring_network_free`].
#[no_mangle]
pub unsafe extern "C" fn spinring_network_new_from_json(
    json: *const c_char,
    out: *mut *mut SpinringNetwork,
) -> SpinringStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (SpinringStatus::InvalidUtf8, e.to_string()))?;
        let file: NetworkConfigFile = serde_json::from_str(text)
            .map_err(|e| (SpinringStatus::InvalidConfig, e.to_string()))?;
        let config = lib(file.into_config())?;
        let state = lib(config.initial_state())?;
        *out = Box::into_raw(Box::new(SpinringNetwork {
            config,
            state,
            steps: 0,
        }));
        Ok(())
    })
}

/// # Safety
/// `network` must come from [`spinring_network_new_from_json`] and not be
/// used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_free(network: *mut SpinringNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Advances every agent by `steps` steps. Each call schedules its own steps,
/// so splitting a multi-agent run at an odd step count can reorder gates of
/// different agents. If the run fails the network is reset to its initial
/// state.
///
/// # Safety
/// `network` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_run(
    network: *mut SpinringNetwork,
    steps: usize,
) -> SpinringStatus {
    guarded(|| {
        let net = network.as_mut().ok_or_else(|| null("network handle"))?;
        let state = std::mem::replace(&mut net.state, StateVector::new(0));
        match run_from_step(&net.config, state, net.steps, steps, |_| {}) {
            Ok(next) => {
                net.state = next;
                net.steps += steps;
                Ok(())
            }
            Err(e) => {
                net.state = lib(net.config.initial_state())?;
                net.steps = 0;
                lib(Err(e))
            }
        }
    })
}

/// Steps done per agent since creation.
///
/// # Safety
/// `network` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_steps(
    network: *const SpinringNetwork,
    out: *mut usize,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        *out.as_mut().ok_or_else(|| null("out"))? = net.steps;
        Ok(())
    })
}

/// Number of qubits, agents first, then ring sites.
///
/// # Safety
/// `network` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_n_qubits(
    network: *const SpinringNetwork,
    out: *mut usize,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        *out.as_mut().ok_or_else(|| null("out"))? = net.state.n_qubits();
        Ok(())
    })
}

/// Writes the reduced Bloch vector `(λ1, λ2, λ3)` of `qubit` to `out[0..3]`.
///
/// # Safety
/// `network` must be a live handle and `out` point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_bloch(
    network: *const SpinringNetwork,
    qubit: usize,
    out: *mut f64,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let b = lib(reduced_bloch(&net.state, qubit))?;
        std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&b.components());
        Ok(())
    })
}

/// Copies the amplitudes as interleaved `re, im` pairs. `len` counts
/// doubles and must be at least `2 * 2^n_qubits`.
///
/// # Safety
/// `network` must be a live handle and `buf` hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_amplitudes(
    network: *const SpinringNetwork,
    buf: *mut f64,
    len: usize,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let amps = net.state.amplitudes();
        if len < 2 * amps.len() {
            return Err((
                SpinringStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", 2 * amps.len()),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, 2 * amps.len());
        for (pair, a) in out.chunks_exact_mut(2).zip(amps) {
            pair[0] = a.re;
            pair[1] = a.im;
        }
        Ok(())
    })
}

/// Total of all cluster sums and its distance from `2^N - 1`.
///
/// # Safety
/// `network` must be a live handle; `total` and `defect` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_sum_rule(
    network: *const SpinringNetwork,
    total: *mut f64,
    defect: *mut f64,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        if total.is_null() || defect.is_null() {
            return Err(null("output pointer"));
        }
        if net.state.n_qubits() > SUM_RULE_QUBIT_LIMIT {
            return Err((
                SpinringStatus::TooLarge,
                format!(
                    "sum rule limited to {SUM_RULE_QUBIT_LIMIT} qubits, have {}",
                    net.state.n_qubits()
                ),
            ));
        }
        let r = lib(sum_rule_check(&net.state))?;
        *total = r.total;
        *defect = r.defect;
        Ok(())
    })
}

/// Cluster sum `Y` and bound `Z` of the qubits in `subset[0..len]`.
///
/// # Safety
/// `network` must be a live handle, `subset` hold `len` indices, and `y`,
/// `z` be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn spinring_network_cluster_sum(
    network: *const SpinringNetwork,
    subset: *const usize,
    len: usize,
    y: *mut f64,
    z: *mut f64,
) -> SpinringStatus {
    guarded(|| {
        let net = handle(network)?;
        if y.is_null() || z.is_null() {
            return Err(null("output pointer"));
        }
        let subset = if len == 0 {
            &[][..]
        } else if subset.is_null() {
            return Err(null("subset"));
        } else {
            std::slice::from_raw_parts(subset, len)
        };
        let c = lib(cluster_sum(&net.state, subset))?;
        *y = c.y;
        *z = c.z;
        Ok(())
    })
}

/// Closed recursion for one type-0 agent on a ground-state ring of `sites`
/// sites. Writes `(Y_m, Z_m)` for `m = 1..=steps` to `y_out` and `z_out`.
///
/// # Safety
/// `y_out` and `z_out` must each hold `len >= steps` doubles.
#[no_mangle]
pub unsafe extern "C" fn spinring_recursion(
    sites: usize,
    alpha: f64,
    steps: usize,
    y_out: *mut f64,
    z_out: *mut f64,
    len: usize,
) -> SpinringStatus {
    guarded(|| {
        if steps == 0 {
            return Ok(());
        }
        if y_out.is_null() || z_out.is_null() {
            return Err(null("output pointer"));
        }
        if len < steps {
            return Err((
                SpinringStatus::BufferTooSmall,
                format!("need {steps} values, got {len}"),
            ));
        }
        let ys = std::slice::from_raw_parts_mut(y_out, steps);
        let zs = std::slice::from_raw_parts_mut(z_out, steps);
        let mut state = lib(RecursionState::new(sites, alpha))?;
        for (y, z) in ys.iter_mut().zip(zs.iter_mut()) {
            (*y, *z) = lib(state.advance())?;
        }
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spinring_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, NUL-terminated and static.
#[no_mangle]
pub extern "C" fn spinring_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
