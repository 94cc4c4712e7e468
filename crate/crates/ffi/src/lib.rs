//! C ABI over `antipower`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every entry point returns an [`ApStatus`]; on failure a description is
//! available from [`ap_last_error_message`] on the same thread. Panics never
//! cross the boundary.
//!
//! Morphisms prolongable only at 1 are accepted: they are handled by
//! exchanging letters internally, and all words handed back (prefixes,
//! witness blocks) are in the caller's letters.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use antipower::construct::MorphicAntiPowerBuilder;
use antipower::{
    build_five_anti_power, gamma, recurrence_constant, verify_witness, AntiPowerWitness, Error,
    Reason, UniformMorphism, DEFAULT_HORIZON,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApStatus {
    Ok = 0,
    /// Malformed input or invalid argument.
    Usage = 1,
    /// A search needed more letters than the horizon allows.
    Horizon = 2,
    /// No block length up to the cap works.
    CapExceeded = 3,
    /// The morphism is outside the supported class.
    Unsupported = 4,
    /// A construction failed a postcondition; indicates a bug.
    TheoremViolation = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Reason reported by [`ap_morphism_classify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApReason {
    None = 0,
    EqualImages = 1,
    ExceptionalWord0000 = 2,
    ExceptionalWord0111 = 3,
    ExceptionalWord0101 = 4,
    AllOnesImage = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ApClassification {
    pub aperiodic: bool,
    pub uniformly_recurrent: bool,
    pub reason: ApReason,
}

/// A parsed uniform binary morphism.
pub struct ApMorphism {
    raw: UniformMorphism,
    normalized: UniformMorphism,
    swapped: bool,
}

/// A k-anti-power witness.
pub struct ApWitness {
    inner: AntiPowerWitness,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> ApStatus {
    match err.exit_code() {
        2 => ApStatus::Horizon,
        3 => ApStatus::CapExceeded,
        4 => ApStatus::Unsupported,
        5 => ApStatus::TheoremViolation,
        _ => ApStatus::Usage,
    }
}

fn fail(status: ApStatus, msg: impl Into<String>) -> ApStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), ApStatus>) -> ApStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(ApStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, ApStatus>;
}

impl<T> OrStatus<T> for antipower::Result<T> {
    fn or_status(self) -> Result<T, ApStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, ApStatus> {
    p.as_ref()
        .ok_or_else(|| fail(ApStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, ApStatus> {
    p.as_mut()
        .ok_or_else(|| fail(ApStatus::NullPointer, format!("{name} is null")))
}

fn restore(m: &ApMorphism, mut w: AntiPowerWitness) -> AntiPowerWitness {
    if m.swapped {
        w.blocks = w.blocks.iter().map(|b| b.swapped()).collect();
    }
    w
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ap_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `"0:A,1:B"`. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_morphism_parse(
    text: *const c_char,
    out_m: *mut *mut ApMorphism,
) -> ApStatus {
    guard(|| {
        let slot = out(out_m, "out")?;
        *slot = ptr::null_mut();
        if text.is_null() {
            return Err(fail(ApStatus::NullPointer, "text is null"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(ApStatus::Usage, "text is not UTF-8"))?;
        let raw: UniformMorphism = s.parse().or_status()?;
        let (normalized, swapped) = raw.normalized().or_status()?;
        *slot = Box::into_raw(Box::new(ApMorphism {
            raw,
            normalized,
            swapped,
        }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from [`ap_morphism_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_morphism_free(m: *mut ApMorphism) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Uniformity parameter `r`, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_morphism_r(m: *const ApMorphism) -> usize {
    m.as_ref().map_or(0, |m| m.raw.r())
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_morphism_classify(
    m: *const ApMorphism,
    out_c: *mut ApClassification,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let slot = out(out_c, "out")?;
        let c = m.normalized.classify().or_status()?;
        *slot = ApClassification {
            aperiodic: c.aperiodic,
            uniformly_recurrent: c.uniformly_recurrent,
            reason: match c.reason {
                Reason::EqualImages => ApReason::EqualImages,
                Reason::ExceptionalWord0000 => ApReason::ExceptionalWord0000,
                Reason::ExceptionalWord0111 => ApReason::ExceptionalWord0111,
                Reason::ExceptionalWord0101 => ApReason::ExceptionalWord0101,
                Reason::AllOnesImage => ApReason::AllOnesImage,
                Reason::None => ApReason::None,
            },
        };
        Ok(())
    })
}

/// Writes the first `len` letters of the fixed point (bytes 0 or 1) to
/// `buf`, which must hold at least `len` bytes.
///
/// # Safety
/// `m` must be a live handle; `buf` must be valid for `buf_len` writes.
#[no_mangle]
pub unsafe extern "C" fn ap_morphism_prefix(
    m: *const ApMorphism,
    len: usize,
    buf: *mut u8,
    buf_len: usize,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        if buf.is_null() && len > 0 {
            return Err(fail(ApStatus::NullPointer, "buf is null"));
        }
        if buf_len < len {
            return Err(fail(
                ApStatus::BufferTooSmall,
                format!("need {len} bytes, have {buf_len}"),
            ));
        }
        let mut stream = m.normalized.fixed_point().or_status()?;
        let mut prefix = stream.prefix(len).or_status()?;
        if m.swapped {
            prefix = prefix.swapped();
        }
        if len > 0 {
            std::slice::from_raw_parts_mut(buf, len).copy_from_slice(prefix.letters());
        }
        Ok(())
    })
}

/// The recurrence constant `c1` and `C = (c1 + 2)·r`. Either output may be
/// null.
///
/// # Safety
/// `m` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_recurrence_constant(
    m: *const ApMorphism,
    c1: *mut usize,
    big_c: *mut usize,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let rc = recurrence_constant(&m.normalized).or_status()?;
        if let Some(c1) = c1.as_mut() {
            *c1 = rc.c1;
        }
        if let Some(big_c) = big_c.as_mut() {
            *big_c = rc.big_c;
        }
        Ok(())
    })
}

/// Least block length `m <= m_cap` such that `k` blocks starting at the
/// 1-based position `start` are pairwise distinct.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_gamma(
    m: *const ApMorphism,
    start: usize,
    k: usize,
    m_cap: usize,
    out_gamma: *mut usize,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let slot = out(out_gamma, "out")?;
        let mut stream = m.normalized.fixed_point().or_status()?;
        *slot = gamma(&mut stream, start, k, m_cap).or_status()?.0;
        Ok(())
    })
}

fn emit(m: &ApMorphism, w: AntiPowerWitness, slot: &mut *mut ApWitness) {
    *slot = Box::into_raw(Box::new(ApWitness {
        inner: restore(m, w),
    }));
}

/// A `k`-anti-power at position `i` with blocks shorter than `C·k`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_build_morphic_anti_power(
    m: *const ApMorphism,
    i: usize,
    k: usize,
    out_w: *mut *mut ApWitness,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let slot = out(out_w, "out")?;
        *slot = ptr::null_mut();
        let w = MorphicAntiPowerBuilder::new(&m.normalized)
            .and_then(|mut b| b.build(i, k))
            .or_status()?;
        emit(m, w, slot);
        Ok(())
    })
}

/// A 5-anti-power from the anchored five-block construction.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_build_five_anti_power(
    m: *const ApMorphism,
    out_w: *mut *mut ApWitness,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let slot = out(out_w, "out")?;
        *slot = ptr::null_mut();
        let class = m.normalized.classify().or_status()?;
        if !class.is_well_behaved() {
            return Err(fail(
                ApStatus::Unsupported,
                format!("{} is not aperiodic and uniformly recurrent", m.raw),
            ));
        }
        let mut stream = m
            .normalized
            .fixed_point_with_horizon(DEFAULT_HORIZON)
            .or_status()?;
        let ap = build_five_anti_power(&mut stream).or_status()?;
        emit(m, ap.witness, slot);
        Ok(())
    })
}

/// Replays a witness against the fixed point of `m`.
///
/// # Safety
/// `m` and `w` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_verify(
    m: *const ApMorphism,
    w: *const ApWitness,
    out_ok: *mut bool,
) -> ApStatus {
    guard(|| {
        let m = deref(m, "morphism")?;
        let w = deref(w, "witness")?;
        let slot = out(out_ok, "out")?;
        let mut stream = m.normalized.fixed_point().or_status()?;
        *slot = verify_witness(&mut stream, &restore(m, w.inner.clone())).or_status()?;
        Ok(())
    })
}

/// # Safety
/// `w` must be null or a live witness handle.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_free(w: *mut ApWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// 1-based start position, or 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_start(w: *const ApWitness) -> usize {
    w.as_ref().map_or(0, |w| w.inner.start)
}

/// Number of blocks, or 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_k(w: *const ApWitness) -> usize {
    w.as_ref().map_or(0, |w| w.inner.k)
}

/// Block length, or 0 for a null handle.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_block_length(w: *const ApWitness) -> usize {
    w.as_ref().map_or(0, |w| w.inner.block_length)
}

/// Candidate index of a five-block witness, or -1.
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_candidate(w: *const ApWitness) -> i64 {
    w.as_ref()
        .and_then(|w| w.inner.candidate_c)
        .map_or(-1, |c| c as i64)
}

/// Copies block `index` (0-based) as bytes 0/1 into `buf`.
///
/// # Safety
/// `w` must be a live handle; `buf` must be valid for `buf_len` writes.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_block(
    w: *const ApWitness,
    index: usize,
    buf: *mut u8,
    buf_len: usize,
) -> ApStatus {
    guard(|| {
        let w = deref(w, "witness")?;
        let block = w
            .inner
            .blocks
            .get(index)
            .ok_or_else(|| fail(ApStatus::Usage, format!("block {index} out of range")))?;
        if buf_len < block.len() {
            return Err(fail(
                ApStatus::BufferTooSmall,
                format!("need {} bytes, have {buf_len}", block.len()),
            ));
        }
        if buf.is_null() {
            return Err(fail(ApStatus::NullPointer, "buf is null"));
        }
        std::slice::from_raw_parts_mut(buf, block.len()).copy_from_slice(block.letters());
        Ok(())
    })
}

/// Witness as JSON. Free the result with [`ap_string_free`].
///
/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ap_witness_to_json(
    w: *const ApWitness,
    out_s: *mut *mut c_char,
) -> ApStatus {
    guard(|| {
        let w = deref(w, "witness")?;
        let slot = out(out_s, "out")?;
        *slot = CString::new(w.inner.to_json())
            .expect("json has no nul")
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ap_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
