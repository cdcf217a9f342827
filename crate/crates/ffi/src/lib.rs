//! C ABI over `starseq`.
//!
//! Conventions:
//! - Every fallible function returns a [`StarseqStatus`]; on anything but
//!   `STARSEQ_STATUS_OK` a message is available from [`starseq_last_error`].
//! - Big integers cross the boundary as NUL-terminated decimal strings.
//!   Strings returned by this library are owned by the caller and released
//!   with [`starseq_string_free`].
//! - Handles are opaque and released with their matching `_free` function.
//!   A handle must not be used from two threads at once.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use starseq::analysis::{fmt_rational, recip_check, AnalysisError};
use starseq::embedding::{
    embed, verify_against_mother, verify_numeric, verify_pfd, EmbedError, EmbeddingState, Eta, Mode,
};
use starseq::factoring::{is_prime, FactorBudget, FactorError, PrimePower};
use starseq::mother::{Mother, MotherError};
use starseq::star_core::{star, GrossSeq, StarError};
use starseq::star_stream::{StallPolicy, StarStream, StreamError};
use starseq::Nat;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarseqStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed number, zero where a positive value is required, bad budget.
    InvalidArgument = 2,
    /// The requested term lies past a term the factoring budget could not finish.
    Incomplete = 3,
    /// A term would exceed the configured digit bound.
    TooLarge = 4,
    /// The mother sequence generator reached its ceiling.
    CeilingReached = 5,
    /// A value does not fit the fixed-width output.
    Overflow = 6,
    /// A bug; the library caught a panic.
    Internal = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarseqMode {
    Literal = 0,
    Monotone = 1,
}

/// One capture of an embedding.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct StarseqCapture {
    pub step: u64,
    pub row: u64,
    pub position: u64,
    pub mother_index: u64,
    pub prime: u64,
    pub exponent: u32,
}

pub struct StarseqGross(GrossSeq);
pub struct StarseqStream(StarStream);
pub struct StarseqMother(Mother);
pub struct StarseqEmbedding {
    state: EmbeddingState,
    matches_mother: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(StarseqStatus, String);

impl Failure {
    fn new(status: StarseqStatus, msg: impl Into<String>) -> Self {
        Failure(status, msg.into())
    }
}

impl From<StarError> for Failure {
    fn from(e: StarError) -> Self {
        let status = match e {
            StarError::TermTooLarge { .. } => StarseqStatus::TooLarge,
            _ => StarseqStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

impl From<FactorError> for Failure {
    fn from(e: FactorError) -> Self {
        Failure(StarseqStatus::InvalidArgument, e.to_string())
    }
}

impl From<StreamError> for Failure {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Star(s) => s.into(),
            StreamError::Factor(f) => f.into(),
            other => Failure(StarseqStatus::Incomplete, other.to_string()),
        }
    }
}

impl From<MotherError> for Failure {
    fn from(e: MotherError) -> Self {
        let status = match e {
            MotherError::CeilingReached { .. } => StarseqStatus::CeilingReached,
            MotherError::ValueTooLarge(_) => StarseqStatus::Overflow,
        };
        Failure(status, e.to_string())
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::Stream(s) => s.into(),
            EmbedError::Mother(m) => m.into(),
            other => Failure(StarseqStatus::InvalidArgument, other.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Star(s) => s.into(),
            AnalysisError::Stream(s) => s.into(),
            other => Failure(StarseqStatus::InvalidArgument, other.to_string()),
        }
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::from(c"error message contained NUL"));
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> StarseqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StarseqStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            StarseqStatus::Internal
        }
    }
}

fn nonnull<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(StarseqStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_nat(s: *const c_char, name: &str) -> Result<Nat, Failure> {
    nonnull(s, name)?;
    // SAFETY: checked non-null; validity is the caller's contract.
    let text = unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Failure::new(StarseqStatus::InvalidArgument, format!("{name} is not UTF-8")))?;
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Failure::new(
            StarseqStatus::InvalidArgument,
            format!("{name} = `{text}` is not a decimal integer"),
        ));
    }
    Ok(text.parse().expect("digits parse"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("decimal digits contain no NUL").into_raw()
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    nonnull(out, name)?;
    // SAFETY: checked non-null; validity is the caller's contract.
    unsafe { out.write(value) };
    Ok(())
}

fn small(n: &Nat) -> Result<u64, Failure> {
    u64::try_from(n).map_err(|_| Failure::new(StarseqStatus::Overflow, format!("{n} does not fit in 64 bits")))
}

fn fill_pp(pp: &PrimePower) -> Result<(u64, u32), Failure> {
    Ok((small(pp.prime())?, pp.exponent()))
}

/// Message for the most recent failure on this thread, or null. The caller
/// frees it with [`starseq_string_free`].
#[no_mangle]
pub extern "C" fn starseq_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn starseq_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// `x(x + 1)` as a decimal string.
///
/// # Safety
/// `x` must be a valid string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_star(x: *const c_char, out: *mut *mut c_char) -> StarseqStatus {
    guard(|| {
        let x = unsafe { read_nat(x, "x") }?;
        let s = star(&x)?;
        unsafe { write(out, into_c_string(s.to_string()), "out") }
    })
}

/// Primality of `n`: deterministic below about 3.3e24, 64 random bases above.
///
/// # Safety
/// `n` must be a valid string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_is_prime(n: *const c_char, out: *mut bool) -> StarseqStatus {
    guard(|| {
        let n = unsafe { read_nat(n, "n") }?;
        let p = is_prime(&n)?;
        unsafe { write(out, p, "out") }
    })
}

/// Gross sequence of `x`, refusing terms above `max_digits` decimal digits
/// (0 selects the default).
///
/// # Safety
/// `x` must be a valid string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_gross_new(
    x: *const c_char,
    max_digits: u64,
    out: *mut *mut StarseqGross,
) -> StarseqStatus {
    guard(|| {
        let x = unsafe { read_nat(x, "x") }?;
        let digits = if max_digits == 0 {
            starseq::star_core::DEFAULT_MAX_DIGITS
        } else {
            max_digits
        };
        let g = GrossSeq::new(x, digits)?;
        unsafe { write(out, Box::into_raw(Box::new(StarseqGross(g))), "out") }
    })
}

/// Term `k` of the gross sequence.
///
/// # Safety
/// `h` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_gross_term(h: *mut StarseqGross, k: usize, out: *mut *mut c_char) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        // SAFETY: live handle per contract.
        let g = unsafe { &mut (*h).0 };
        let t = g.term(k)?.to_string();
        unsafe { write(out, into_c_string(t), "out") }
    })
}

/// # Safety
/// `h` must be null or a handle from [`starseq_gross_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn starseq_gross_free(h: *mut StarseqGross) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in this crate.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Star sequence of `x`. Zero budget fields select the defaults.
///
/// # Safety
/// `x` must be a valid string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_stream_new(
    x: *const c_char,
    trial_bound: u64,
    rho_rounds: u32,
    rho_iterations: u64,
    out: *mut *mut StarseqStream,
) -> StarseqStatus {
    guard(|| {
        let x = unsafe { read_nat(x, "x") }?;
        let d = FactorBudget::default();
        let pick = |v: u64, default: u64| if v == 0 { default } else { v };
        let budget = FactorBudget::new(
            pick(trial_bound, d.trial_bound),
            if rho_rounds == 0 { d.rho_rounds } else { rho_rounds },
            pick(rho_iterations, d.rho_iterations),
        )?;
        let s = StarStream::with_options(x, budget, StallPolicy::Strict, starseq::star_core::DEFAULT_MAX_DIGITS)?;
        unsafe { write(out, Box::into_raw(Box::new(StarseqStream(s))), "out") }
    })
}

/// Term `j` of the star sequence: its prime as a string, the exponent and
/// the gross index it came from. Either `gross_index` or `exponent` may be null.
///
/// # Safety
/// `h` must be a live handle and `prime` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_stream_term(
    h: *mut StarseqStream,
    j: usize,
    prime: *mut *mut c_char,
    exponent: *mut u32,
    gross_index: *mut usize,
) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        nonnull(prime, "prime")?;
        // SAFETY: live handle per contract.
        let s = unsafe { &mut (*h).0 };
        let Some(t) = s.get(j)? else {
            let why = match s.horizon() {
                Some(h) => Failure::new(StarseqStatus::TooLarge, h.to_string()),
                None => Failure::new(
                    StarseqStatus::Incomplete,
                    format!("term {j} lies past an unfinished gross term"),
                ),
            };
            return Err(why);
        };
        let (p, e, k) = (t.prime().to_string(), t.pp.exponent(), t.gross_index);
        unsafe {
            write(prime, into_c_string(p), "prime")?;
            if !exponent.is_null() {
                exponent.write(e);
            }
            if !gross_index.is_null() {
                gross_index.write(k);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`starseq_stream_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn starseq_stream_free(h: *mut StarseqStream) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in this crate.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Mother sequence generator over sources up to `ceiling` (0 selects the default).
#[no_mangle]
pub extern "C" fn starseq_mother_new(ceiling: u64) -> *mut StarseqMother {
    let m = if ceiling == 0 {
        Mother::default()
    } else {
        Mother::new(ceiling)
    };
    Box::into_raw(Box::new(StarseqMother(m)))
}

/// Term `index`: prime, exponent and the source integer it was factored from.
/// `source` may be null.
///
/// # Safety
/// `h` must be a live handle; `prime` and `exponent` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn starseq_mother_term(
    h: *mut StarseqMother,
    index: u64,
    prime: *mut u64,
    exponent: *mut u32,
    source: *mut u64,
) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        // SAFETY: live handle per contract.
        let m = unsafe { &mut (*h).0 };
        let t = m.term(index)?;
        let (p, e) = fill_pp(&t.value)?;
        let src = small(&t.source)?;
        unsafe {
            write(prime, p, "prime")?;
            write(exponent, e, "exponent")?;
            if !source.is_null() {
                source.write(src);
            }
        }
        Ok(())
    })
}

/// Writes the first `len` indices at which `prime^exponent` occurs.
///
/// # Safety
/// `h` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn starseq_mother_occurrences(
    h: *mut StarseqMother,
    prime: u64,
    exponent: u32,
    out: *mut u64,
    len: usize,
) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        nonnull(out, "out")?;
        let pp = PrimePower::new(Nat::from(prime), exponent)?;
        // SAFETY: live handle per contract.
        let m = unsafe { &mut (*h).0 };
        let found = m.occurrences(&pp, len)?;
        // SAFETY: `out` holds `len` slots per contract.
        unsafe { ptr::copy_nonoverlapping(found.as_ptr(), out, len) };
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`starseq_mother_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn starseq_mother_free(h: *mut StarseqMother) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in this crate.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Embeds the finite sequence `values[0..len]` (decimal prime powers) for
/// `steps` captures. A run cut short by the mother ceiling still succeeds;
/// see [`starseq_embedding_truncated`].
///
/// # Safety
/// `mother` must be a live handle, `values` must hold `len` valid strings and
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_embed(
    mother: *mut StarseqMother,
    values: *const *const c_char,
    len: usize,
    steps: u64,
    mode: StarseqMode,
    out: *mut *mut StarseqEmbedding,
) -> StarseqStatus {
    guard(|| {
        nonnull(mother, "mother")?;
        nonnull(out, "out")?;
        if len > 0 {
            nonnull(values, "values")?;
        }
        let mut nats = Vec::with_capacity(len);
        for i in 0..len {
            // SAFETY: `values` holds `len` pointers per contract.
            nats.push(unsafe { read_nat(*values.add(i), "value") }?);
        }
        let eta = Eta::from_values(&nats)?;
        let mode = match mode {
            StarseqMode::Literal => Mode::Literal,
            StarseqMode::Monotone => Mode::Monotone,
        };
        // SAFETY: live handle per contract.
        let m = unsafe { &mut (*mother).0 };
        let state = embed(eta, steps, mode, m)?;
        let matches_mother = verify_against_mother(&state, m)?;
        let h = StarseqEmbedding { state, matches_mother };
        unsafe { write(out, Box::into_raw(Box::new(h)), "out") }
    })
}

/// Number of captures performed.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn starseq_embedding_len(h: *const StarseqEmbedding) -> usize {
    if h.is_null() {
        return 0;
    }
    // SAFETY: live handle per contract.
    unsafe { (*h).state.steps() }
}

/// Whether generation stopped before the requested number of steps.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn starseq_embedding_truncated(h: *const StarseqEmbedding) -> bool {
    // SAFETY: live handle per contract.
    !h.is_null() && unsafe { (*h).state.truncated.is_some() }
}

/// # Safety
/// `h` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_embedding_step(
    h: *const StarseqEmbedding,
    i: usize,
    out: *mut StarseqCapture,
) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        // SAFETY: live handle per contract.
        let state = unsafe { &(*h).state };
        let c = state
            .log
            .get(i)
            .ok_or_else(|| Failure::new(StarseqStatus::InvalidArgument, format!("step {i} out of range")))?;
        let (prime, exponent) = fill_pp(&c.value)?;
        let capture = StarseqCapture {
            step: c.step,
            row: c.u,
            position: c.v,
            mother_index: c.captured_index,
            prime,
            exponent,
        };
        unsafe { write(out, capture, "out") }
    })
}

/// Formal disjointness, numeric agreement with the target, and agreement of
/// every captured index with the mother sequence.
///
/// # Safety
/// `h` must be a live handle; each output must be null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn starseq_embedding_verify(
    h: *const StarseqEmbedding,
    pfd: *mut bool,
    numeric: *mut bool,
    matches_mother: *mut bool,
) -> StarseqStatus {
    guard(|| {
        nonnull(h, "handle")?;
        // SAFETY: live handle per contract.
        let e = unsafe { &*h };
        for (out, v) in [
            (pfd, verify_pfd(&e.state)),
            (numeric, verify_numeric(&e.state)),
            (matches_mother, e.matches_mother),
        ] {
            if !out.is_null() {
                // SAFETY: non-null outputs are valid per contract.
                unsafe { out.write(v) };
            }
        }
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`starseq_embed`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn starseq_embedding_free(h: *mut StarseqEmbedding) {
    if !h.is_null() {
        // SAFETY: allocated by `Box::into_raw` in this crate.
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Compares `1/x` with `sum_{k<n} 1/(star^k x + 1) + 1/star^n x`. Fractions
/// come back as `"num/den"` strings; `lhs` and `rhs` may be null.
///
/// # Safety
/// `x` must be a valid string; outputs must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn starseq_recip_check(
    x: *const c_char,
    n: usize,
    equal: *mut bool,
    lhs: *mut *mut c_char,
    rhs: *mut *mut c_char,
) -> StarseqStatus {
    guard(|| {
        nonnull(equal, "equal")?;
        let x = unsafe { read_nat(x, "x") }?;
        if n == 0 {
            return Err(Failure::new(StarseqStatus::InvalidArgument, "n must be at least 1"));
        }
        let r = recip_check(&x, n)?;
        unsafe {
            equal.write(r.equal);
            if !lhs.is_null() {
                lhs.write(into_c_string(fmt_rational(&r.lhs)));
            }
            if !rhs.is_null() {
                rhs.write(into_c_string(fmt_rational(&r.rhs)));
            }
        }
        Ok(())
    })
}
