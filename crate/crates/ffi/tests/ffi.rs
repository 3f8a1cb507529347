use std::ffi::{c_char, c_int, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use maritime_relay_ffi::*;

fn last_error() -> String {
    let p = mr_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn new_config(fleet: MrFleet) -> *mut MrConfig {
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { mr_config_new(fleet as c_int, &mut cfg) },
        MrStatus::Ok
    );
    assert!(!cfg.is_null());
    cfg
}

fn set(cfg: *mut MrConfig, key: &str, value: &str) -> MrStatus {
    unsafe { mr_config_set(cfg, c(key).as_ptr(), c(value).as_ptr()) }
}

#[test]
fn run_and_read_back() {
    let cfg = new_config(MrFleet::Multi);
    assert_eq!(set(cfg, "victims.count", "5"), MrStatus::Ok);
    assert_eq!(set(cfg, "sim.n_slots", "3"), MrStatus::Ok);
    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { mr_run(cfg, MrArch::All as c_int, 2, &mut report) },
        MrStatus::Ok
    );

    let mut nr = 0.0;
    let mut e_nr = -1.0;
    let mut e_lsmr = 0.0;
    unsafe {
        assert_eq!(
            mr_report_mean_rate(report, MrArch::Nr as c_int, &mut nr),
            MrStatus::Ok
        );
        assert_eq!(
            mr_report_total_energy(report, MrArch::Nr as c_int, &mut e_nr),
            MrStatus::Ok
        );
        assert_eq!(
            mr_report_total_energy(report, MrArch::Lsmr as c_int, &mut e_lsmr),
            MrStatus::Ok
        );
    }
    assert!(nr > 0.0);
    assert_eq!(e_nr, 0.0);
    assert!(e_lsmr > 0.0);

    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().to_str().unwrap());
    assert_eq!(
        unsafe { mr_report_write(report, path.as_ptr()) },
        MrStatus::Ok
    );
    let slots = std::fs::read_to_string(dir.path().join("slots.csv")).unwrap();
    assert_eq!(slots.lines().count(), 1 + 4 * 2 * 3 * 5);

    unsafe {
        mr_report_free(report);
        mr_config_free(cfg);
    }
}

#[test]
fn errors_are_reported() {
    let cfg = new_config(MrFleet::Single);
    assert_eq!(set(cfg, "arch", "xyz"), MrStatus::Config);
    assert!(last_error().contains("lsmr"), "{}", last_error());
    assert_eq!(set(cfg, "no.such.key", "1"), MrStatus::Config);
    assert!(last_error().contains("no.such.key"));

    let mut report = ptr::null_mut();
    assert_eq!(
        unsafe { mr_run(cfg, 42, 1, &mut report) },
        MrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mr_run(cfg, MrArch::Fpr as c_int, 0, &mut report) },
        MrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mr_run(ptr::null(), MrArch::Fpr as c_int, 1, &mut report) },
        MrStatus::NullPointer
    );
    assert_eq!(
        unsafe { mr_run(cfg, MrArch::Fpr as c_int, 1, ptr::null_mut()) },
        MrStatus::NullPointer
    );

    assert_eq!(
        unsafe { mr_run(cfg, MrArch::Fpr as c_int, 1, &mut report) },
        MrStatus::Ok
    );
    let mut v = 0.0;
    assert_eq!(
        unsafe { mr_report_mean_rate(report, MrArch::Nr as c_int, &mut v) },
        MrStatus::InvalidArgument
    );
    assert!(last_error().contains("nr"));

    let mut missing = ptr::null_mut();
    let path = c("/definitely/not/here.conf");
    assert_eq!(
        unsafe { mr_config_from_file(path.as_ptr(), &mut missing) },
        MrStatus::Io
    );
    assert!(missing.is_null());
    assert_eq!(
        unsafe { mr_config_new(9, &mut missing) },
        MrStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mr_config_set(cfg, ptr::null::<c_char>(), c("1").as_ptr()) },
        MrStatus::NullPointer
    );

    unsafe {
        mr_report_free(report);
        mr_config_free(cfg);
        mr_report_free(ptr::null_mut());
        mr_config_free(ptr::null_mut());
    }
}

#[test]
fn changing_mass_updates_thrust() {
    let cfg = new_config(MrFleet::Single);
    assert_eq!(set(cfg, "energy.payload_weight_kg", "3"), MrStatus::Ok);
    // A mismatched explicit thrust is rejected.
    assert_eq!(set(cfg, "energy.thrust_n", "10"), MrStatus::Config);
    unsafe { mr_config_free(cfg) };
}

#[test]
fn config_from_shipped_file() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/single.conf");
    let mut cfg = ptr::null_mut();
    let p = c(path.to_str().unwrap());
    assert_eq!(
        unsafe { mr_config_from_file(p.as_ptr(), &mut cfg) },
        MrStatus::Ok
    );
    unsafe { mr_config_free(cfg) };
}

#[test]
fn pure_functions() {
    let mut pl = 0.0;
    assert_eq!(unsafe { mr_path_loss_db(100.0, 0, &mut pl) }, MrStatus::Ok);
    assert!((pl - 107.716_343).abs() < 1e-5);
    assert_eq!(mr_noise_power_dbm(), -94.0);
    assert_eq!(mr_rate_direct(1.0), 1.0);
    assert_eq!(mr_rate_df(3.0, 100.0, 100.0), 1.0);
    assert_eq!(mr_rate_df(100.0, 1.0, 2.0), 1.0);
    assert!((mr_hover_power_w() - 724.1).abs() < 0.5);
}

// Compile a C program against the generated header and the static library.
#[test]
fn c_program_links_against_staticlib() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libmaritime_relay_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());

    let out_dir = dir.path().join("out");
    let out = Command::new(&bin).arg(&out_dir).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    assert!(out_dir.join("summary.json").exists());
}
