use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use powerpath_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(pp_last_error()) }.to_string_lossy().into_owned()
}

fn generate(model: PpModel, n: usize, seed: u64) -> *mut PpTournament {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { pp_tournament_generate(model, n, seed, &mut t) }, PpStatus::Ok);
    t
}

fn vertices(w: *const PpWitness) -> Vec<usize> {
    unsafe { std::slice::from_raw_parts(pp_witness_vertices(w), pp_witness_len(w)) }.to_vec()
}

#[test]
fn parse_orient_serialize_round_trip() {
    let text = CString::new("PTv1 3\n10\n1\n").unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(pp_tournament_parse(text.as_ptr(), &mut t), PpStatus::Ok);
        assert_eq!(pp_tournament_n(t), 3);
        let mut forward = false;
        assert_eq!(pp_tournament_orient(t, 0, 1, &mut forward), PpStatus::Ok);
        assert!(forward);
        assert_eq!(pp_tournament_orient(t, 0, 2, &mut forward), PpStatus::Ok);
        assert!(!forward);
        let mut out = ptr::null_mut();
        assert_eq!(pp_tournament_serialize(t, &mut out), PpStatus::Ok);
        assert_eq!(CStr::from_ptr(out).to_str().unwrap(), "PTv1 3\n10\n1\n");
        pp_string_free(out);
        pp_tournament_free(t);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new("PTv1 3\n1\n1\n").unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(pp_tournament_parse(bad.as_ptr(), &mut t), PpStatus::Parse);
        assert!(last_error().contains("line 2"), "{}", last_error());
        assert!(t.is_null());
        assert_eq!(pp_tournament_parse(ptr::null(), &mut t), PpStatus::NullPointer);
        assert_eq!(pp_tournament_generate(PpModel::C3chain, 7, 0, &mut t), PpStatus::InvalidParameter);

        let t = generate(PpModel::Transitive, 4, 0);
        let mut forward = false;
        assert_eq!(pp_tournament_orient(t, 2, 2, &mut forward), PpStatus::SelfLoop);
        assert_eq!(pp_tournament_orient(t, 0, 9, &mut forward), PpStatus::InvalidVertex);
        assert_eq!(pp_tournament_orient(t, 0, 1, ptr::null_mut()), PpStatus::NullPointer);
        let mut w = ptr::null_mut();
        assert_eq!(pp_longest_power_path(t, 0, &mut w), PpStatus::InvalidParameter);
        pp_tournament_free(t);

        let big = generate(PpModel::Random, 40, 1);
        assert_eq!(pp_longest_power_path(big, 3, &mut w), PpStatus::Capacity);
        pp_tournament_free(big);

        let implicit = generate(PpModel::ImplicitRandom, 10, 1);
        let mut text = ptr::null_mut();
        assert_eq!(pp_tournament_serialize(implicit, &mut text), PpStatus::Unsupported);
        pp_tournament_free(implicit);

        let mut ell = 0;
        assert_eq!(pp_ell_exact(7, 2, false, &mut ell), PpStatus::Capacity);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        pp_tournament_free(ptr::null_mut());
        pp_witness_free(ptr::null_mut());
        pp_string_free(ptr::null_mut());
        assert_eq!(pp_tournament_n(ptr::null()), 0);
        assert_eq!(pp_witness_len(ptr::null()), 0);
        assert!(pp_witness_vertices(ptr::null()).is_null());
        let mut w = ptr::null_mut();
        assert_eq!(pp_embed_square(ptr::null(), &mut w), PpStatus::NullPointer);
    }
}

#[test]
fn embeddings_verify_through_the_abi() {
    unsafe {
        let t = generate(PpModel::Random, 60, 7);
        let mut w = ptr::null_mut();
        assert_eq!(pp_embed_square(t, &mut w), PpStatus::Ok);
        assert!(pp_witness_len(w) >= 40);
        assert_eq!(pp_witness_k(w), 2);
        assert_eq!(pp_witness_mode(w), PpMode::Plain);
        let vs = vertices(w);
        let mut ok = false;
        assert_eq!(pp_verify(t, vs.as_ptr(), vs.len(), 2, PpMode::Plain, &mut ok), PpStatus::Ok);
        assert!(ok);
        let mut swapped = vs.clone();
        swapped.swap(0, 1);
        assert_eq!(pp_verify(t, swapped.as_ptr(), swapped.len(), 2, PpMode::Plain, &mut ok), PpStatus::Ok);
        assert!(!ok);
        pp_witness_free(w);

        assert_eq!(pp_embed_hamilton(t, &mut w), PpStatus::Ok);
        assert_eq!(pp_witness_len(w), 60);
        pp_witness_free(w);
        pp_tournament_free(t);

        let t = generate(PpModel::Transitive, 100, 0);
        assert_eq!(pp_embed_power(t, 2, 8, 5, 5, false, &mut w), PpStatus::Ok);
        assert_eq!(pp_witness_len(w), 19);
        assert_eq!(pp_witness_mode(w), PpMode::BlockTransitive);
        pp_witness_free(w);
        assert_eq!(pp_embed_power(t, 2, 8, 5, 5, true, &mut w), PpStatus::InvalidParameter);
        pp_tournament_free(t);
    }
}

#[test]
fn oracle_and_ell() {
    unsafe {
        let t = generate(PpModel::C3chain, 9, 0);
        let mut w = ptr::null_mut();
        assert_eq!(pp_longest_power_path(t, 2, &mut w), PpStatus::Ok);
        assert_eq!(pp_witness_len(w), 6);
        pp_witness_free(w);
        pp_tournament_free(t);
        let mut ell = 0;
        assert_eq!(pp_ell_exact(6, 2, false, &mut ell), PpStatus::Ok);
        assert_eq!(ell, 4);
    }
}

/// Compiles a C program against the generated header and the static
/// library, when a C compiler is around.
#[test]
fn c_program_links_against_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libpowerpath_ffi.a");
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_header_test");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&out)
        .arg(manifest.join("tests/c_header.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
