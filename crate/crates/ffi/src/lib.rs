//! C ABI over the shiftlab engine.
//!
//! Sets are passed as opaque `ShiftlabSet` handles, always held in canonical
//! form. Every fallible call returns a `ShiftlabStatus`; on failure the
//! message is available from `shiftlab_last_error` on the same thread.
//! Handles come back through out-parameters and are released with
//! `shiftlab_set_free`; strings are released with `shiftlab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use shiftlab::presentation::{self, CanonicalForm, Presentation};
use shiftlab::{entropy, factorize, stability, transform, Alphabet, Error, EventuallyPeriodicWord};

/// Opaque closed set.
pub struct ShiftlabSet {
    inner: CanonicalForm,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    AlphabetMismatch = 3,
    BudgetExceeded = 4,
    BoundExceeded = 5,
    EmptySet = 6,
    AlphabetTooSmall = 7,
    SizeExceeded = 8,
    DepthMismatch = 9,
    InvalidAlphabet = 10,
    UnknownSymbol = 11,
    WordSyntax = 12,
    MalformedPresentation = 13,
    InvalidArgument = 14,
    Inconsistent = 15,
    Panic = 16,
}

impl ShiftlabStatus {
    const ALL: [ShiftlabStatus; 17] = [
        ShiftlabStatus::Ok,
        ShiftlabStatus::NullPointer,
        ShiftlabStatus::InvalidUtf8,
        ShiftlabStatus::AlphabetMismatch,
        ShiftlabStatus::BudgetExceeded,
        ShiftlabStatus::BoundExceeded,
        ShiftlabStatus::EmptySet,
        ShiftlabStatus::AlphabetTooSmall,
        ShiftlabStatus::SizeExceeded,
        ShiftlabStatus::DepthMismatch,
        ShiftlabStatus::InvalidAlphabet,
        ShiftlabStatus::UnknownSymbol,
        ShiftlabStatus::WordSyntax,
        ShiftlabStatus::MalformedPresentation,
        ShiftlabStatus::InvalidArgument,
        ShiftlabStatus::Inconsistent,
        ShiftlabStatus::Panic,
    ];

    pub fn from_code(code: i32) -> Option<Self> {
        Self::ALL.iter().copied().find(|s| *s as i32 == code)
    }
}

impl From<&Error> for ShiftlabStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::AlphabetMismatch { .. } => ShiftlabStatus::AlphabetMismatch,
            Error::BudgetExceeded { .. } => ShiftlabStatus::BudgetExceeded,
            Error::BoundExceeded { .. } => ShiftlabStatus::BoundExceeded,
            Error::EmptySet => ShiftlabStatus::EmptySet,
            Error::AlphabetTooSmall { .. } => ShiftlabStatus::AlphabetTooSmall,
            Error::SizeExceeded { .. } => ShiftlabStatus::SizeExceeded,
            Error::DepthMismatch(_) => ShiftlabStatus::DepthMismatch,
            Error::InvalidAlphabet(_) => ShiftlabStatus::InvalidAlphabet,
            Error::UnknownSymbol(_) => ShiftlabStatus::UnknownSymbol,
            Error::WordSyntax { .. } => ShiftlabStatus::WordSyntax,
            Error::MalformedPresentation(_) => ShiftlabStatus::MalformedPresentation,
            Error::InvalidArgument(_) => ShiftlabStatus::InvalidArgument,
            Error::Inconsistent(_) => ShiftlabStatus::Inconsistent,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(ShiftlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ShiftlabStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ShiftlabStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            ShiftlabStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ShiftlabStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(ShiftlabStatus::InvalidUtf8, e.to_string()))
}

unsafe fn set<'a>(p: *const ShiftlabSet) -> Result<&'a CanonicalForm, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| Failure(ShiftlabStatus::NullPointer, "null set handle".into()))
}

unsafe fn emit_set(out: *mut *mut ShiftlabSet, value: CanonicalForm) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ShiftlabStatus::NullPointer, "null out-parameter".into()));
    }
    *out = Box::into_raw(Box::new(ShiftlabSet { inner: value }));
    Ok(())
}

unsafe fn emit_string(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ShiftlabStatus::NullPointer, "null out-parameter".into()));
    }
    *out = CString::new(value).expect("JSON has no nul").into_raw();
    Ok(())
}

unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(ShiftlabStatus::NullPointer, "null out-parameter".into()));
    }
    *out = value;
    Ok(())
}

fn alphabet_of(spec: &str) -> Result<Alphabet, Error> {
    if spec.contains(',') {
        Alphabet::new(spec.split(',').map(str::trim).filter(|t| !t.is_empty()))
    } else {
        Alphabet::from_chars(spec)
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn shiftlab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, or NULL for an unknown code.
#[no_mangle]
pub extern "C" fn shiftlab_status_name(code: i32) -> *const c_char {
    let Some(status) = ShiftlabStatus::from_code(code) else {
        return ptr::null();
    };
    let name: &'static CStr = match status {
        ShiftlabStatus::Ok => c"Ok",
        ShiftlabStatus::NullPointer => c"NullPointer",
        ShiftlabStatus::InvalidUtf8 => c"InvalidUtf8",
        ShiftlabStatus::AlphabetMismatch => c"AlphabetMismatch",
        ShiftlabStatus::BudgetExceeded => c"BudgetExceeded",
        ShiftlabStatus::BoundExceeded => c"BoundExceeded",
        ShiftlabStatus::EmptySet => c"EmptySet",
        ShiftlabStatus::AlphabetTooSmall => c"AlphabetTooSmall",
        ShiftlabStatus::SizeExceeded => c"SizeExceeded",
        ShiftlabStatus::DepthMismatch => c"DepthMismatch",
        ShiftlabStatus::InvalidAlphabet => c"InvalidAlphabet",
        ShiftlabStatus::UnknownSymbol => c"UnknownSymbol",
        ShiftlabStatus::WordSyntax => c"WordSyntax",
        ShiftlabStatus::MalformedPresentation => c"MalformedPresentation",
        ShiftlabStatus::InvalidArgument => c"InvalidArgument",
        ShiftlabStatus::Inconsistent => c"Inconsistent",
        ShiftlabStatus::Panic => c"Panic",
    };
    name.as_ptr()
}

/// Parse a JSON presentation and normalize it.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_from_json(json: *const c_char, out: *mut *mut ShiftlabSet) -> ShiftlabStatus {
    guard(|| {
        let p = Presentation::from_json(text(json)?)?;
        emit_set(out, p.normalize()?)
    })
}

/// The full shift over `alphabet` (a string of one-character symbols, or a
/// comma-separated list).
///
/// # Safety
/// `alphabet` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_full(alphabet: *const c_char, out: *mut *mut ShiftlabSet) -> ShiftlabStatus {
    guard(|| emit_set(out, presentation::full_shift(&alphabet_of(text(alphabet)?)?)))
}

/// The finite set of `count` eventually periodic words written `u(v)`.
///
/// # Safety
/// `alphabet` must be a nul-terminated string, `literals` must point to
/// `count` nul-terminated strings and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_from_words(
    alphabet: *const c_char,
    literals: *const *const c_char,
    count: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| {
        let a = alphabet_of(text(alphabet)?)?;
        if literals.is_null() && count > 0 {
            return Err(Failure(ShiftlabStatus::NullPointer, "null literal array".into()));
        }
        let mut words = Vec::with_capacity(count);
        for k in 0..count {
            words.push(EventuallyPeriodicWord::parse(&a, text(*literals.add(k))?)?);
        }
        emit_set(out, presentation::from_words(&words)?)
    })
}

/// Words avoiding every block; `blocks` holds `count` finite word literals.
///
/// # Safety
/// As for `shiftlab_set_from_words`.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_from_forbidden_blocks(
    alphabet: *const c_char,
    blocks: *const *const c_char,
    count: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| {
        let a = alphabet_of(text(alphabet)?)?;
        if blocks.is_null() && count > 0 {
            return Err(Failure(ShiftlabStatus::NullPointer, "null block array".into()));
        }
        let mut list = Vec::with_capacity(count);
        for k in 0..count {
            list.push(a.parse_finite(text(*blocks.add(k))?)?);
        }
        emit_set(out, stability::from_forbidden_blocks(&a, &list)?)
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `set` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_free(set: *mut ShiftlabSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of states of the canonical automaton, or 0 for a NULL handle.
///
/// # Safety
/// `set` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_state_count(set: *const ShiftlabSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.state_count())
}

/// Canonical presentation as JSON.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_set_to_json(set: *const ShiftlabSet, out: *mut *mut c_char) -> ShiftlabStatus {
    guard(|| emit_string(out, self::set(set)?.to_json()))
}

/// `ψ_{offset,modulus}(X)`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_decimate(
    set: *const ShiftlabSet,
    offset: usize,
    modulus: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| emit_set(out, transform::decimate(self::set(set)?, offset, modulus)?))
}

/// Interleaving of `count` sets in order.
///
/// # Safety
/// `parts` must point to `count` live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_interleave(
    parts: *const *const ShiftlabSet,
    count: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| {
        if parts.is_null() {
            return Err(Failure(ShiftlabStatus::NullPointer, "null handle array".into()));
        }
        let mut sets = Vec::with_capacity(count);
        for k in 0..count {
            sets.push(set(*parts.add(k))?);
        }
        emit_set(out, transform::interleave(&sets)?)
    })
}

/// `X^[modulus]`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_closure(
    set: *const ShiftlabSet,
    modulus: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| emit_set(out, transform::interleave_closure(self::set(set)?, modulus)?))
}

/// `S^steps X`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_shift(
    set: *const ShiftlabSet,
    steps: usize,
    out: *mut *mut ShiftlabSet,
) -> ShiftlabStatus {
    guard(|| emit_set(out, presentation::shift_set(self::set(set)?, steps)?))
}

/// Set equality.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_equal(
    a: *const ShiftlabSet,
    b: *const ShiftlabSet,
    out: *mut bool,
) -> ShiftlabStatus {
    guard(|| emit(out, presentation::is_equal(set(a)?, set(b)?)?))
}

/// Set inclusion `a ⊆ b`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_subset(
    a: *const ShiftlabSet,
    b: *const ShiftlabSet,
    out: *mut bool,
) -> ShiftlabStatus {
    guard(|| emit(out, presentation::is_subset(set(a)?, set(b)?)?))
}

/// Interleaving closure spectrum report as JSON; `cap` 0 means the default.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_spectrum_json(
    set: *const ShiftlabSet,
    cap: usize,
    out: *mut *mut c_char,
) -> ShiftlabStatus {
    guard(|| {
        let x = self::set(set)?;
        let cap = if cap == 0 { factorize::DEFAULT_CAP } else { cap };
        emit_string(out, factorize::spectrum(x, cap)?.to_json_value(x.alphabet()).to_string())
    })
}

/// Stability report as JSON; `bound` 0 means the default.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_stability_json(
    set: *const ShiftlabSet,
    bound: usize,
    out: *mut *mut c_char,
) -> ShiftlabStatus {
    guard(|| {
        let bound = if bound == 0 { None } else { Some(bound) };
        emit_string(out, stability::stability_report(self::set(set)?, bound)?.to_json_value().to_string())
    })
}

/// Topological and prefix entropy in natural-log units.
///
/// # Safety
/// `set` must be a live handle; the out-parameters must be writable.
#[no_mangle]
pub unsafe extern "C" fn shiftlab_entropy(
    set: *const ShiftlabSet,
    h_top: *mut f64,
    h_prefix: *mut f64,
) -> ShiftlabStatus {
    guard(|| {
        let x = self::set(set)?;
        emit(h_top, entropy::h_top(x)?)?;
        emit(h_prefix, entropy::h_prefix(x)?)
    })
}
