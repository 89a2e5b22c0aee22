//! C ABI for the mtf-limit library.
//!
//! Conventions:
//! - Handles (`MtfFamily`, `MtfLaw`) are opaque pointers created and freed by
//!   this library; never free them with anything else.
//! - Every fallible call returns an [`MtfStatus`]; outputs are written through
//!   pointers only on `MTF_STATUS_OK`.
//! - On failure, [`mtf_last_error_message`] returns a thread-local,
//!   NUL-terminated description valid until the next failing call on the same
//!   thread.
//! - Strings returned through `char **` are owned by the caller and must be
//!   released with [`mtf_string_free`].
//!
//! # Safety
//!
//! All pointer-taking functions require: handles were created by this
//! library and not yet freed; array pointers reference valid allocations of
//! the stated length; C strings are NUL-terminated. NULL handles and output
//! pointers are detected and reported as `MTF_STATUS_NULL_POINTER`.

#![deny(unsafe_op_in_unsafe_fn)]
// The safety contract is crate-level (see above); it is identical for every
// export, so per-function sections would only repeat it.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mtf_limit::cache_analysis;
use mtf_limit::limit_law::LimitLaw;
use mtf_limit::mtf_sim::{self, RequestProbabilities, SampleMethod, SearchCostSamples};
use mtf_limit::weights::WeightFamily;
use mtf_limit::Error;

/// Result of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtfStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A parameter violated its constraints.
    InvalidArgument = 2,
    /// An argument lay outside the mathematical domain of the operation.
    DomainError = 3,
    /// The input makes the requested quantity undefined.
    DegenerateInput = 4,
    /// The problem size exceeds a hard limit.
    SizeLimit = 5,
    /// A numerical routine did not reach its tolerance.
    NonConvergence = 6,
    /// Malformed JSON or UTF-8 input.
    ParseError = 7,
    IoError = 8,
    /// A panic was caught at the ABI boundary.
    InternalPanic = 9,
}

/// How stationary search costs are drawn.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtfSampleMethod {
    /// Backward request replay until coverage; exact, coupon-collector cost.
    Chain = 0,
    /// Exponential-clock indicator sum; exact, linear cost per sample.
    Bernoulli = 1,
}

/// Opaque weight-family handle.
pub struct MtfFamily {
    inner: WeightFamily,
}

/// Opaque limit-law handle.
pub struct MtfLaw {
    inner: LimitLaw,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let cstring = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn fail(err: &Error) -> MtfStatus {
    set_error(&err.to_string());
    match err {
        Error::Domain(_) => MtfStatus::DomainError,
        Error::InvalidParameter(_) => MtfStatus::InvalidArgument,
        Error::Degenerate(_) => MtfStatus::DegenerateInput,
        Error::SizeLimit(_) => MtfStatus::SizeLimit,
        Error::NonConvergence(_) => MtfStatus::NonConvergence,
        Error::Io(_) => MtfStatus::IoError,
        Error::Parse(_) => MtfStatus::ParseError,
    }
}

fn null_pointer(what: &str) -> MtfStatus {
    set_error(&format!("{what} must not be NULL"));
    MtfStatus::NullPointer
}

fn guard(f: impl FnOnce() -> MtfStatus) -> MtfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the ABI boundary");
            MtfStatus::InternalPanic
        }
    }
}

unsafe fn family_ref<'a>(ptr: *const MtfFamily) -> Option<&'a WeightFamily> {
    unsafe { ptr.as_ref() }.map(|f| &f.inner)
}

unsafe fn law_ref<'a>(ptr: *const MtfLaw) -> Option<&'a LimitLaw> {
    unsafe { ptr.as_ref() }.map(|l| &l.inner)
}

fn emit_family(family: WeightFamily, out: *mut *mut MtfFamily) -> MtfStatus {
    let handle = Box::new(MtfFamily { inner: family });
    unsafe { *out = Box::into_raw(handle) };
    MtfStatus::Ok
}

fn emit_string(text: String, out: *mut *mut c_char) -> MtfStatus {
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            MtfStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            MtfStatus::InternalPanic
        }
    }
}

/// Last error message for this thread, or NULL if none was recorded.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mtf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Release a string returned through a `char **` output.
#[no_mangle]
pub unsafe extern "C" fn mtf_string_free(s: *mut c_char) {
    if !s.is_null() {
        unsafe { drop(CString::from_raw(s)) };
    }
}

/// Unit point-mass weights (equally popular items).
#[no_mangle]
pub unsafe extern "C" fn mtf_family_new_dirac(out: *mut *mut MtfFamily) -> MtfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        emit_family(WeightFamily::dirac(), out)
    })
}

/// Gamma weights with shape `alpha` and unit scale.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_new_gamma(alpha: f64, out: *mut *mut MtfFamily) -> MtfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        match WeightFamily::gamma(alpha) {
            Ok(family) => emit_family(family, out),
            Err(err) => fail(&err),
        }
    })
}

/// Geometric weights on {0, 1, 2, ...} with success probability `p`.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_new_geometric(p: f64, out: *mut *mut MtfFamily) -> MtfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        match WeightFamily::geometric(p) {
            Ok(family) => emit_family(family, out),
            Err(err) => fail(&err),
        }
    })
}

/// Poisson weights with rate `lambda`.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_new_poisson(
    lambda: f64,
    out: *mut *mut MtfFamily,
) -> MtfStatus {
    guard(|| {
        if out.is_null() {
            return null_pointer("out");
        }
        match WeightFamily::poisson(lambda) {
            Ok(family) => emit_family(family, out),
            Err(err) => fail(&err),
        }
    })
}

/// Build a family from a JSON descriptor, `{"kind": "...", "params": {...}}`.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_from_json(
    json: *const c_char,
    out: *mut *mut MtfFamily,
) -> MtfStatus {
    guard(|| {
        if json.is_null() {
            return null_pointer("json");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("descriptor is not valid UTF-8");
                return MtfStatus::ParseError;
            }
        };
        match WeightFamily::from_json(text) {
            Ok(family) => emit_family(family, out),
            Err(err) => fail(&err),
        }
    })
}

/// Release a family handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_free(family: *mut MtfFamily) {
    if !family.is_null() {
        unsafe { drop(Box::from_raw(family)) };
    }
}

/// Mean weight and atom at zero.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_stats(
    family: *const MtfFamily,
    mu: *mut f64,
    p0: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if mu.is_null() || p0.is_null() {
            return null_pointer("mu/p0");
        }
        let (m, p) = fam.stats();
        unsafe {
            *mu = m;
            *p0 = p;
        }
        MtfStatus::Ok
    })
}

/// Laplace transform of one weight, or its derivative: `order` 0 for phi,
/// 1 for phi', 2 for phi''.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_phi(
    family: *const MtfFamily,
    r: f64,
    order: u32,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        let order = u8::try_from(order).unwrap_or(u8::MAX);
        match fam.phi_eval(r, order) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Solve `phi(r) = y` for `y` in `(p0, 1]`.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_phi_inverse(
    family: *const MtfFamily,
    y: f64,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match fam.phi_inverse(y) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Fill `out` (length `len`) with iid weights, reproducible from the seed.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_sample_weights(
    family: *const MtfFamily,
    seed: u64,
    len: usize,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        let weights = fam.sample_weights(len, seed);
        unsafe { std::ptr::copy_nonoverlapping(weights.as_ptr(), out, len) };
        MtfStatus::Ok
    })
}

/// Validate the family's transform invariants; writes a JSON report.
#[no_mangle]
pub unsafe extern "C" fn mtf_family_validate_json(
    family: *const MtfFamily,
    tol: f64,
    out_json: *mut *mut c_char,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out_json.is_null() {
            return null_pointer("out_json");
        }
        match fam.validate(tol) {
            Ok(report) => match serde_json::to_string(&report) {
                Ok(json) => emit_string(json, out_json),
                Err(err) => fail(&Error::Parse(err)),
            },
            Err(err) => fail(&err),
        }
    })
}

/// Limiting search-cost law for the family.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_new(family: *const MtfFamily, out: *mut *mut MtfLaw) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        let law = Box::new(MtfLaw {
            inner: LimitLaw::new(fam.clone()),
        });
        unsafe { *out = Box::into_raw(law) };
        MtfStatus::Ok
    })
}

/// Release a law handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_free(law: *mut MtfLaw) {
    if !law.is_null() {
        unsafe { drop(Box::from_raw(law)) };
    }
}

/// Upper end of the support, `1 - p0`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_support_end(law: *const MtfLaw, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = l.support_end() };
        MtfStatus::Ok
    })
}

/// Density of the limit law at `x` (zero outside the support).
#[no_mangle]
pub unsafe extern "C" fn mtf_law_density(law: *const MtfLaw, x: f64, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = l.density(x) };
        MtfStatus::Ok
    })
}

/// CDF of the limit law at `x`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_cdf(law: *const MtfLaw, x: f64, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        unsafe { *out = l.cdf(x) };
        MtfStatus::Ok
    })
}

/// Smallest `x` with `F(x) >= u`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_quantile(law: *const MtfLaw, u: f64, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match l.quantile(u) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Moment `E[S^q]` for `q > -1`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_moment(law: *const MtfLaw, q: f64, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match l.moment(q) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Laplace transform `E[exp(-s S)]` for `s >= 0`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_laplace(law: *const MtfLaw, s: f64, out: *mut f64) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match l.laplace(s) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Asymptotic LRU miss probability at cache fraction `alpha`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_page_default(
    law: *const MtfLaw,
    alpha: f64,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match cache_analysis::page_default_asymptotic(l, alpha) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Smallest cache fraction with miss probability at most `pi_target`.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_cache_size_for_target(
    law: *const MtfLaw,
    pi_target: f64,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match cache_analysis::cache_size_for_target(l, pi_target) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Fill `alphas` and `pis` (both length `grid`) with the asymptotic miss
/// curve on a uniform grid over [0, 1].
#[no_mangle]
pub unsafe extern "C" fn mtf_law_miss_curve(
    law: *const MtfLaw,
    grid: usize,
    alphas: *mut f64,
    pis: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if alphas.is_null() || pis.is_null() {
            return null_pointer("alphas/pis");
        }
        match cache_analysis::miss_curve(l, grid) {
            Ok(curve) => {
                for (i, &(alpha, pi)) in curve.points.iter().enumerate() {
                    unsafe {
                        *alphas.add(i) = alpha;
                        *pis.add(i) = pi;
                    }
                }
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Dominance report against the uniform law, as JSON.
#[no_mangle]
pub unsafe extern "C" fn mtf_law_dominance_json(
    law: *const MtfLaw,
    grid: usize,
    tolerance: f64,
    out_json: *mut *mut c_char,
) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if out_json.is_null() {
            return null_pointer("out_json");
        }
        match mtf_limit::stochastic_order::dominance_report(l, grid, tolerance) {
            Ok(report) => match serde_json::to_string(&report) {
                Ok(json) => emit_string(json, out_json),
                Err(err) => fail(&Error::Parse(err)),
            },
            Err(err) => fail(&err),
        }
    })
}

/// Draw `samples` stationary search costs for the request probabilities in
/// `probs` (length `n`, nonnegative, not all zero) into `out_costs`
/// (length `samples`). Bit-identical for a fixed seed.
#[no_mangle]
pub unsafe extern "C" fn mtf_simulate_costs(
    probs: *const f64,
    n: usize,
    samples: usize,
    seed: u64,
    method: MtfSampleMethod,
    out_costs: *mut u32,
) -> MtfStatus {
    guard(|| {
        if probs.is_null() {
            return null_pointer("probs");
        }
        if out_costs.is_null() {
            return null_pointer("out_costs");
        }
        let weights = unsafe { std::slice::from_raw_parts(probs, n) };
        let p = match RequestProbabilities::from_weights(weights) {
            Ok(p) => p,
            Err(err) => return fail(&err),
        };
        let method = match method {
            MtfSampleMethod::Chain => SampleMethod::Chain,
            MtfSampleMethod::Bernoulli => SampleMethod::Bernoulli,
        };
        match mtf_sim::sample_search_costs(&p, samples, seed, method) {
            Ok(result) => {
                unsafe { std::ptr::copy_nonoverlapping(result.costs.as_ptr(), out_costs, samples) };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Exact stationary search-cost pmf (length `n`) by brute-force enumeration;
/// limited to `n <= 8`.
#[no_mangle]
pub unsafe extern "C" fn mtf_stationary_pmf(
    probs: *const f64,
    n: usize,
    out_pmf: *mut f64,
) -> MtfStatus {
    guard(|| {
        if probs.is_null() {
            return null_pointer("probs");
        }
        if out_pmf.is_null() {
            return null_pointer("out_pmf");
        }
        let weights = unsafe { std::slice::from_raw_parts(probs, n) };
        let p = match RequestProbabilities::from_weights(weights) {
            Ok(p) => p,
            Err(err) => return fail(&err),
        };
        match mtf_sim::stationary_pmf_bruteforce(&p) {
            Ok(pmf) => {
                unsafe { std::ptr::copy_nonoverlapping(pmf.as_ptr(), out_pmf, n) };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Laplace transform of the finite-n stationary search cost (n <= 64).
#[no_mangle]
pub unsafe extern "C" fn mtf_laplace_sn(
    family: *const MtfFamily,
    n: u32,
    s: f64,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(fam) = (unsafe { family_ref(family) }) else {
            return null_pointer("family");
        };
        if out.is_null() {
            return null_pointer("out");
        }
        match mtf_sim::laplace_sn_quadrature(fam, n, s) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}

/// Kolmogorov-Smirnov distance between scaled costs (`costs/n`) and the
/// limit law's CDF.
#[no_mangle]
pub unsafe extern "C" fn mtf_ks_statistic(
    law: *const MtfLaw,
    costs: *const u32,
    len: usize,
    n: usize,
    out: *mut f64,
) -> MtfStatus {
    guard(|| {
        let Some(l) = (unsafe { law_ref(law) }) else {
            return null_pointer("law");
        };
        if costs.is_null() {
            return null_pointer("costs");
        }
        if out.is_null() {
            return null_pointer("out");
        }
        let slice = unsafe { std::slice::from_raw_parts(costs, len) };
        let samples = SearchCostSamples {
            costs: slice.to_vec(),
            n,
            seed: 0,
            method: SampleMethod::Bernoulli,
        };
        match mtf_sim::ks_statistic(&samples, l) {
            Ok(value) => {
                unsafe { *out = value };
                MtfStatus::Ok
            }
            Err(err) => fail(&err),
        }
    })
}
