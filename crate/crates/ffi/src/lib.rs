//! C interface to the maritime relay simulator.
//!
//! Every fallible function returns an [`MrStatus`]; on failure the message is
//! available from [`mr_last_error`] on the same thread. Handles are created
//! by `*_new`/`*_from_file`/[`mr_run`] and released with the matching
//! `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maritime_relay::channel::{noise_power_dbm, path_loss_db, ChannelParams};
use maritime_relay::config::{parse_config_str, parse_config_with, to_config_text};
use maritime_relay::energy::{hover_power, EnergyParams};
use maritime_relay::report::{emit_results, run_study, Study};
use maritime_relay::{Architecture, Error, FleetMode, LosState, ScenarioConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Runtime = 4,
    Io = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrFleet {
    Single = 0,
    Multi = 1,
}

/// Architecture selector; `MR_ARCH_ALL` runs all four.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrArch {
    Nr = 0,
    Fpr = 1,
    Cfmr = 2,
    Lsmr = 3,
    All = 4,
}

/// Opaque scenario configuration.
pub struct MrConfig {
    inner: ScenarioConfig,
}

/// Opaque simulation outcome.
pub struct MrReport {
    inner: Study,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MrStatus, message: impl Into<String>) -> MrStatus {
    set_last_error(message.into());
    status
}

fn status_of(e: &Error) -> MrStatus {
    match e {
        Error::Io { .. } | Error::Csv { .. } | Error::Json { .. } => MrStatus::Io,
        e if e.is_config_error() => MrStatus::Config,
        _ => MrStatus::Runtime,
    }
}

fn guard(f: impl FnOnce() -> Result<(), MrStatus>) -> MrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MrStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(MrStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: maritime_relay::Result<T>) -> Result<T, MrStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, MrStatus> {
    if p.is_null() {
        return Err(fail(MrStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MrStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn arch_list(arch: c_int) -> Result<Vec<Architecture>, MrStatus> {
    Ok(match arch {
        a if a == MrArch::Nr as c_int => vec![Architecture::Nr],
        a if a == MrArch::Fpr as c_int => vec![Architecture::Fpr],
        a if a == MrArch::Cfmr as c_int => vec![Architecture::Cfmr],
        a if a == MrArch::Lsmr as c_int => vec![Architecture::Lsmr],
        a if a == MrArch::All as c_int => Architecture::ALL.to_vec(),
        other => {
            return Err(fail(
                MrStatus::InvalidArgument,
                format!("unknown architecture {other}"),
            ))
        }
    })
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Default configuration for `fleet`, one of `MR_FLEET_*`.
///
/// # Safety
/// `out` must be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn mr_config_new(fleet: c_int, out: *mut *mut MrConfig) -> MrStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(MrStatus::NullPointer, "out is null"));
        }
        let fleet = match fleet {
            f if f == MrFleet::Single as c_int => FleetMode::Single,
            f if f == MrFleet::Multi as c_int => FleetMode::Multi,
            other => {
                return Err(fail(
                    MrStatus::InvalidArgument,
                    format!("unknown fleet {other}"),
                ))
            }
        };
        let inner = ScenarioConfig::defaults(fleet);
        *out = Box::into_raw(Box::new(MrConfig { inner }));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_config_from_file(
    path: *const c_char,
    out: *mut *mut MrConfig,
) -> MrStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(MrStatus::NullPointer, "out is null"));
        }
        let path = str_arg(path, "path")?;
        let inner = lift(parse_config_with(path, None))?;
        *out = Box::into_raw(Box::new(MrConfig { inner }));
        Ok(())
    })
}

/// Set one `key = value` entry using the config file syntax. Setting
/// `scenario` resets every other key to that fleet's defaults.
///
/// # Safety
/// `cfg` must come from this library; `key` and `value` must be
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn mr_config_set(
    cfg: *mut MrConfig,
    key: *const c_char,
    value: *const c_char,
) -> MrStatus {
    guard(|| {
        let cfg = cfg
            .as_mut()
            .ok_or_else(|| fail(MrStatus::NullPointer, "cfg is null"))?;
        let key = str_arg(key, "key")?.trim();
        let value = str_arg(value, "value")?;
        let text = if key == "scenario" {
            format!("scenario = {value}\n")
        } else {
            let mass_changed = matches!(
                key,
                "energy.frame_weight_kg" | "energy.payload_weight_kg" | "energy.gravity"
            );
            let mut text: String = to_config_text(&cfg.inner)
                .lines()
                .filter(|l| {
                    let k = l.split('=').next().unwrap_or("").trim();
                    k != key && !(mass_changed && k == "energy.thrust_n")
                })
                .map(|l| format!("{l}\n"))
                .collect();
            text.push_str(&format!("{key} = {value}\n"));
            text
        };
        cfg.inner = lift(parse_config_str(&text, None))?;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mr_config_free(cfg: *mut MrConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Run `runs` Monte Carlo repetitions of `arch`, one of `MR_ARCH_*`.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_run(
    cfg: *const MrConfig,
    arch: c_int,
    runs: usize,
    out: *mut *mut MrReport,
) -> MrStatus {
    guard(|| {
        let cfg = cfg
            .as_ref()
            .ok_or_else(|| fail(MrStatus::NullPointer, "cfg is null"))?;
        if out.is_null() {
            return Err(fail(MrStatus::NullPointer, "out is null"));
        }
        if runs == 0 {
            return Err(fail(MrStatus::InvalidArgument, "runs must be at least 1"));
        }
        let inner = lift(run_study(&cfg.inner, &arch_list(arch)?, runs))?;
        *out = Box::into_raw(Box::new(MrReport { inner }));
        Ok(())
    })
}

unsafe fn report_value(
    report: *const MrReport,
    arch: c_int,
    out: *mut f64,
    pick: impl FnOnce(&maritime_relay::scenario::AggregateResult) -> f64,
) -> MrStatus {
    guard(|| {
        let report = report
            .as_ref()
            .ok_or_else(|| fail(MrStatus::NullPointer, "report is null"))?;
        if out.is_null() {
            return Err(fail(MrStatus::NullPointer, "out is null"));
        }
        let wanted = match arch_list(arch)?.as_slice() {
            [one] => *one,
            _ => {
                return Err(fail(
                    MrStatus::InvalidArgument,
                    "pick a single architecture",
                ))
            }
        };
        let agg = report.inner.result(wanted).ok_or_else(|| {
            fail(
                MrStatus::InvalidArgument,
                format!("{wanted} was not simulated"),
            )
        })?;
        *out = pick(agg);
        Ok(())
    })
}

/// Mean spectral efficiency (bit/s/Hz) over every ship, slot and run.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_report_mean_rate(
    report: *const MrReport,
    arch: c_int,
    out: *mut f64,
) -> MrStatus {
    report_value(report, arch, out, |a| a.mean_rate())
}

/// Final cumulative relay energy in joules, averaged over runs.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_report_total_energy(
    report: *const MrReport,
    arch: c_int,
    out: *mut f64,
) -> MrStatus {
    report_value(report, arch, out, |a| a.mean_total_energy())
}

/// Write `slots.csv`, `energy.csv`, `cdf.csv` and `summary.json`.
///
/// # Safety
/// `report` must be a live handle; `out_dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mr_report_write(
    report: *const MrReport,
    out_dir: *const c_char,
) -> MrStatus {
    guard(|| {
        let report = report
            .as_ref()
            .ok_or_else(|| fail(MrStatus::NullPointer, "report is null"))?;
        let dir = str_arg(out_dir, "out_dir")?;
        lift(emit_results(&report.inner, dir))?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mr_report_free(report: *mut MrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Path loss in dB at `distance_m` under the default channel.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mr_path_loss_db(distance_m: f64, los: c_int, out: *mut f64) -> MrStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail(MrStatus::NullPointer, "out is null"));
        }
        let state = if los != 0 {
            LosState::Los
        } else {
            LosState::Nlos
        };
        *out = lift(path_loss_db(&ChannelParams::default(), distance_m, state))?;
        Ok(())
    })
}

/// Receiver noise power in dBm under the default channel.
#[no_mangle]
pub extern "C" fn mr_noise_power_dbm() -> f64 {
    noise_power_dbm(&ChannelParams::default())
}

/// `log2(1 + snr)`
#[no_mangle]
pub extern "C" fn mr_rate_direct(snr_linear: f64) -> f64 {
    (1.0 + snr_linear).log2()
}

/// `0.5 * log2(1 + min(br, bv + rv))`
#[no_mangle]
pub extern "C" fn mr_rate_df(snr_br: f64, snr_bv: f64, snr_rv: f64) -> f64 {
    0.5 * (1.0 + snr_br.min(snr_bv + snr_rv)).log2()
}

/// Hover power in watts of the default airframe.
#[no_mangle]
pub extern "C" fn mr_hover_power_w() -> f64 {
    hover_power(&EnergyParams::default())
}
