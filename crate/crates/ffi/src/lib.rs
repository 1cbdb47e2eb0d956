//! C ABI over `powerpath`.
//!
//! Tournaments and witnesses are opaque heap handles released with their
//! `*_free` function. Every fallible call returns a [`PpStatus`]; on failure
//! `pp_last_error()` describes it until the next failing call on the same
//! thread. Panics never cross the boundary, they surface as
//! `PP_STATUS_INTERNAL`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use powerpath::embed::{embed_power_path, embed_square_path, hamilton_path, EmbedMode, EmbedParams};
use powerpath::extremal::{ell_exact, longest_power_path};
use powerpath::{format, verify_power_path, Error, Mode, Model, PowerPathWitness, Tournament};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidVertex = 2,
    SelfLoop = 3,
    InvalidParameter = 4,
    Parse = 5,
    Capacity = 6,
    Unsupported = 7,
    /// A step precondition or local-optimality assertion failed.
    Precondition = 8,
    NotFound = 9,
    Internal = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpModel {
    Random = 0,
    Transitive = 1,
    C3chain = 2,
    ImplicitRandom = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpMode {
    Plain = 0,
    BlockTransitive = 1,
}

/// Opaque tournament handle.
pub struct PpTournament(Tournament);

/// Opaque witness handle.
pub struct PpWitness(PowerPathWitness);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PpStatus {
    match e {
        Error::InvalidVertex { .. } => PpStatus::InvalidVertex,
        Error::SelfLoop(_) => PpStatus::SelfLoop,
        Error::InvalidParameter(_) | Error::InvalidOrdering(_) | Error::InvalidCertificate(_) => {
            PpStatus::InvalidParameter
        }
        Error::Parse { .. } => PpStatus::Parse,
        Error::Capacity { .. } => PpStatus::Capacity,
        Error::UnsupportedStorage => PpStatus::Unsupported,
        Error::RotationPrecondition { .. }
        | Error::NotLocallyOptimal(_)
        | Error::Precondition(_)
        | Error::InsufficientTransitive { .. }
        | Error::StepFailed { .. } => PpStatus::Precondition,
        Error::NotFound { .. } => PpStatus::NotFound,
        _ => PpStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (PpStatus, String)>) -> PpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PpStatus::Internal
        }
    }
}

fn lib<T>(r: powerpath::Result<T>) -> Result<T, (PpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PpStatus, String) {
    (PpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn tournament<'a>(t: *const PpTournament) -> Result<&'a Tournament, (PpStatus, String)> {
    t.as_ref().map(|t| &t.0).ok_or_else(|| null("tournament"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (PpStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_witness(out: *mut *mut PpWitness, w: PowerPathWitness) -> Result<(), (PpStatus, String)> {
    put(out, Box::into_raw(Box::new(PpWitness(w))))
}

/// Message for the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn pp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Generate a tournament. `seed` is ignored by the deterministic models.
#[no_mangle]
pub unsafe extern "C" fn pp_tournament_generate(
    model: PpModel,
    n: usize,
    seed: u64,
    out: *mut *mut PpTournament,
) -> PpStatus {
    guard(|| {
        let model = match model {
            PpModel::Random => Model::Random,
            PpModel::Transitive => Model::Transitive,
            PpModel::C3chain => Model::C3Chain,
            PpModel::ImplicitRandom => Model::ImplicitRandom,
        };
        let t = lib(Tournament::generate(model, n, seed))?;
        put(out, Box::into_raw(Box::new(PpTournament(t))))
    })
}

/// Parse NUL-terminated PTv1 text.
#[no_mangle]
pub unsafe extern "C" fn pp_tournament_parse(text: *const c_char, out: *mut *mut PpTournament) -> PpStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| (PpStatus::Parse, format!("input is not UTF-8: {e}")))?;
        let t = lib(format::parse(text))?;
        put(out, Box::into_raw(Box::new(PpTournament(t))))
    })
}

/// PTv1 text of an explicit tournament; release it with `pp_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pp_tournament_serialize(t: *const PpTournament, out: *mut *mut c_char) -> PpStatus {
    guard(|| {
        let text = lib(format::serialize(tournament(t)?))?;
        let c = CString::new(text).expect("PTv1 has no nul bytes");
        put(out, c.into_raw())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pp_tournament_free(t: *mut PpTournament) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Vertex count; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pp_tournament_n(t: *const PpTournament) -> usize {
    t.as_ref().map_or(0, |t| t.0.n())
}

/// `*out = true` iff `u -> v`.
#[no_mangle]
pub unsafe extern "C" fn pp_tournament_orient(t: *const PpTournament, u: usize, v: usize, out: *mut bool) -> PpStatus {
    guard(|| {
        let forward = lib(tournament(t)?.orient(u, v))?;
        put(out, forward)
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_embed_hamilton(t: *const PpTournament, out: *mut *mut PpWitness) -> PpStatus {
    guard(|| {
        let w = lib(hamilton_path(tournament(t)?))?;
        put_witness(out, w)
    })
}

/// Square of a path on at least ceil(2n/3) vertices.
#[no_mangle]
pub unsafe extern "C" fn pp_embed_square(t: *const PpTournament, out: *mut *mut PpWitness) -> PpStatus {
    guard(|| {
        let w = lib(embed_square_path(tournament(t)?))?;
        put_witness(out, w)
    })
}

/// Block-transitive `k`-th power of a path. Zero for `block_size`, `a_star` or
/// `blocks` selects the default; `guaranteed` requires all three zero.
#[no_mangle]
pub unsafe extern "C" fn pp_embed_power(
    t: *const PpTournament,
    k: usize,
    block_size: usize,
    a_star: usize,
    blocks: usize,
    guaranteed: bool,
    out: *mut *mut PpWitness,
) -> PpStatus {
    guard(|| {
        let tour = tournament(t)?;
        let params = if block_size == 0 || a_star == 0 || blocks == 0 {
            let d = lib(EmbedParams::defaults(k))?;
            let pick = |v: usize, default: usize| if v == 0 { default } else { v };
            lib(EmbedParams::new(k, pick(block_size, d.t), pick(a_star, d.a_star), pick(blocks, d.blocks)))?
        } else {
            lib(EmbedParams::new(k, block_size, a_star, blocks))?
        };
        let mode = if guaranteed { EmbedMode::Guaranteed } else { EmbedMode::Heuristic };
        let embedding = lib(embed_power_path(tour, &params, mode))?;
        put_witness(out, embedding.witness)
    })
}

/// Exact longest `k`-th power of a path (small tournaments only).
#[no_mangle]
pub unsafe extern "C" fn pp_longest_power_path(t: *const PpTournament, k: usize, out: *mut *mut PpWitness) -> PpStatus {
    guard(|| {
        let r = lib(longest_power_path(tournament(t)?, k))?;
        put_witness(out, PowerPathWitness::new(k, Mode::Plain, r.witness))
    })
}

#[no_mangle]
pub unsafe extern "C" fn pp_witness_free(w: *mut PpWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Vertex count; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pp_witness_len(w: *const PpWitness) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn pp_witness_k(w: *const PpWitness) -> usize {
    w.as_ref().map_or(0, |w| w.0.k)
}

#[no_mangle]
pub unsafe extern "C" fn pp_witness_mode(w: *const PpWitness) -> PpMode {
    match w.as_ref().map(|w| w.0.mode) {
        Some(Mode::BlockTransitive) => PpMode::BlockTransitive,
        _ => PpMode::Plain,
    }
}

/// `pp_witness_len(w)` vertex ids, valid while `w` lives; null for null.
#[no_mangle]
pub unsafe extern "C" fn pp_witness_vertices(w: *const PpWitness) -> *const usize {
    w.as_ref().map_or(ptr::null(), |w| w.0.vertices.as_ptr())
}

/// `*out = true` iff `vertices[0..len]` spans a `k`-th power of a path.
#[no_mangle]
pub unsafe extern "C" fn pp_verify(
    t: *const PpTournament,
    vertices: *const usize,
    len: usize,
    k: usize,
    mode: PpMode,
    out: *mut bool,
) -> PpStatus {
    guard(|| {
        let tour = tournament(t)?;
        let seq: &[usize] = match (vertices.is_null(), len) {
            (_, 0) => &[],
            (true, _) => return Err(null("vertices")),
            (false, _) => std::slice::from_raw_parts(vertices, len),
        };
        let mode = match mode {
            PpMode::Plain => Mode::Plain,
            PpMode::BlockTransitive => Mode::BlockTransitive,
        };
        let ok = lib(verify_power_path(tour, seq, k, mode))?;
        put(out, ok)
    })
}

/// Exhaustive l_k(n): minimum over all n-vertex tournaments of the longest
/// `k`-th power of a path.
#[no_mangle]
pub unsafe extern "C" fn pp_ell_exact(n: usize, k: usize, long_run: bool, out: *mut usize) -> PpStatus {
    guard(|| {
        let e = lib(ell_exact(n, k, long_run))?;
        put(out, e.value)
    })
}
