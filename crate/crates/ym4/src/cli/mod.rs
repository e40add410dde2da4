//! Command-line driver: verification suites, gluing experiment sweeps and the
//! phi(tau) grid, with deterministic CSV/JSON output.

pub mod config;
pub mod glue_cmd;
pub mod phi_cmd;
pub mod verify;

/// Floating-point formatting used for all numeric CLI output: 17 significant
/// digits, enough to reproduce the f64 bit pattern.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Exit codes: 0 success, 1 verification failure, 2 configuration error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
