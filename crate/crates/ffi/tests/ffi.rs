use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use quintic_kummer_ffi::*;

fn new_report(n: u64, strong: bool) -> (QkStatus, *mut QkReport) {
    let mut h = ptr::null_mut();
    let st = unsafe { qk_report_new(n, strong, &mut h) };
    (st, h)
}

#[test]
fn summary_for_eleven() {
    let (st, h) = new_report(11, true);
    assert_eq!(st, QkStatus::Ok);
    let mut s = QkSummary::default();
    assert_eq!(unsafe { qk_report_summary(h, &mut s) }, QkStatus::Ok);
    assert_eq!((s.t, s.qstar, s.s1, s.rank_lo, s.rank_hi), (2, 0, 2, 2, 2));
    assert_eq!((s.sl_lo, s.sl_hi, s.cyclic_family), (0, 2, 0));
    unsafe { qk_report_free(h) };
}

#[test]
fn json_buffer_protocol() {
    let (_, h) = new_report(42, false);
    let mut needed = 0usize;
    let st = unsafe { qk_report_json(h, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, QkStatus::BufferTooSmall);
    assert!(needed > 10);
    let mut buf = vec![0 as std::ffi::c_char; needed];
    assert_eq!(
        unsafe { qk_report_json(h, buf.as_mut_ptr(), buf.len(), &mut needed) },
        QkStatus::Ok
    );
    let s = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(s).unwrap();
    assert_eq!(v["rank"]["t"], 2);
    assert_eq!(v["schema_version"], 1);
    unsafe { qk_report_free(h) };
}

#[test]
fn errors_are_codes() {
    assert_eq!(new_report(1, true).0, QkStatus::InvalidRadicand);
    assert_eq!(new_report(64, true).0, QkStatus::InvalidRadicand);
    assert!(new_report(64, true).1.is_null());
    assert_eq!(
        unsafe { qk_report_new(11, true, ptr::null_mut()) },
        QkStatus::NullPointer
    );
    let mut s = QkSummary::default();
    assert_eq!(
        unsafe { qk_report_summary(ptr::null(), &mut s) },
        QkStatus::NullPointer
    );
    unsafe { qk_report_free(ptr::null_mut()) };
    let msg = unsafe { CStr::from_ptr(qk_status_message(QkStatus::BufferTooSmall)) };
    assert_eq!(msg.to_str().unwrap(), "buffer too small");
}

#[test]
fn cyclic_family() {
    assert_eq!(qk_trivial_or_cyclic_family(16), 1);
    assert_eq!(qk_trivial_or_cyclic_family(19), 3);
    assert_eq!(qk_trivial_or_cyclic_family(31), 0);
}

#[test]
fn header_declares_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let h = std::fs::read_to_string(dir.join("include/quintic_kummer.h")).unwrap();
    for sym in [
        "qk_report_new",
        "qk_report_free",
        "qk_report_summary",
        "qk_report_json",
        "qk_trivial_or_cyclic_family",
        "qk_status_message",
        "typedef struct QkReport QkReport",
        "QK_STATUS_BUFFER_TOO_SMALL = 4",
    ] {
        assert!(h.contains(sym), "{sym}");
    }
}

/// Compiles and runs a small C program against the header and static library when a C
/// compiler is present.
#[test]
fn c_program_links() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libquintic_kummer_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let tmp = std::env::temp_dir().join(format!("qk_ffi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "quintic_kummer.h"
int main(void) {
    QkReport *r = NULL;
    if (qk_report_new(19, true, &r) != QK_STATUS_OK) return 1;
    QkSummary s;
    if (qk_report_summary(r, &s) != QK_STATUS_OK) return 2;
    printf("%u %u %u %u\n", s.t, s.qstar, s.rank_lo, s.rank_hi);
    qk_report_free(r);
    return s.t == 1 && s.rank_lo == 2 && s.rank_hi == 4 ? 0 : 3;
}
"#,
    )
    .unwrap();
    let bin = tmp.join("main");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run = Command::new(&bin).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stdout)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1 1 2 4");
    std::fs::remove_dir_all(&tmp).ok();
}
