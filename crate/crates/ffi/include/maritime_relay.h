#ifndef MARITIME_RELAY_H
#define MARITIME_RELAY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Architecture selector; `MR_ARCH_ALL` runs all four.
 */
typedef enum MrArch {
  MR_ARCH_NR = 0,
  MR_ARCH_FPR = 1,
  MR_ARCH_CFMR = 2,
  MR_ARCH_LSMR = 3,
  MR_ARCH_ALL = 4,
} MrArch;

typedef enum MrFleet {
  MR_FLEET_SINGLE = 0,
  MR_FLEET_MULTI = 1,
} MrFleet;

typedef enum MrStatus {
  MR_STATUS_OK = 0,
  MR_STATUS_NULL_POINTER = 1,
  MR_STATUS_INVALID_ARGUMENT = 2,
  MR_STATUS_CONFIG = 3,
  MR_STATUS_RUNTIME = 4,
  MR_STATUS_IO = 5,
  MR_STATUS_PANIC = 6,
} MrStatus;

/**
 * Opaque scenario configuration.
 */
typedef struct MrConfig MrConfig;

/**
 * Opaque simulation outcome.
 */
typedef struct MrReport MrReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *mr_last_error(void);

/**
 * Default configuration for `fleet`, one of `MR_FLEET_*`.
 *
 * # Safety
 * `out` must be a valid pointer to write a handle into.
 */
enum MrStatus mr_config_new(int fleet, struct MrConfig **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MrStatus mr_config_from_file(const char *path, struct MrConfig **out);

/**
 * Set one `key = value` entry using the config file syntax. Setting
 * `scenario` resets every other key to that fleet's defaults.
 *
 * # Safety
 * `cfg` must come from this library; `key` and `value` must be
 * NUL-terminated strings.
 */
enum MrStatus mr_config_set(struct MrConfig *cfg, const char *key, const char *value);

/**
 * # Safety
 * `cfg` must be null or a handle from this library not yet freed.
 */
void mr_config_free(struct MrConfig *cfg);

/**
 * Run `runs` Monte Carlo repetitions of `arch`, one of `MR_ARCH_*`.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_run(const struct MrConfig *cfg, int arch, size_t runs, struct MrReport **out);

/**
 * Mean spectral efficiency (bit/s/Hz) over every ship, slot and run.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_report_mean_rate(const struct MrReport *report, int arch, double *out);

/**
 * Final cumulative relay energy in joules, averaged over runs.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum MrStatus mr_report_total_energy(const struct MrReport *report, int arch, double *out);

/**
 * Write `slots.csv`, `energy.csv`, `cdf.csv` and `summary.json`.
 *
 * # Safety
 * `report` must be a live handle; `out_dir` a NUL-terminated string.
 */
enum MrStatus mr_report_write(const struct MrReport *report, const char *out_dir);

/**
 * # Safety
 * `report` must be null or a handle from this library not yet freed.
 */
void mr_report_free(struct MrReport *report);

/**
 * Path loss in dB at `distance_m` under the default channel.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MrStatus mr_path_loss_db(double distance_m, int los, double *out);

/**
 * Receiver noise power in dBm under the default channel.
 */
double mr_noise_power_dbm(void);

/**
 * `log2(1 + snr)`
 */
double mr_rate_direct(double snr_linear);

/**
 * `0.5 * log2(1 + min(br, bv + rv))`
 */
double mr_rate_df(double snr_br, double snr_bv, double snr_rv);

/**
 * Hover power in watts of the default airframe.
 */
double mr_hover_power_w(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MARITIME_RELAY_H */
