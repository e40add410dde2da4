//! The phi(tau) grid command: closed-form phi for the affine ramp and the
//! matching optimal c0 at unit pairing, with sign changes marked.

use super::config::OutputFormat;
use super::fmt_f64;
use crate::gainopt::{affine_coefficients, optimal_c0, phi_closed_affine};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "tau,phi,c0_star,sign_change";

pub struct PhiRow {
    pub tau: f64,
    pub phi: f64,
    pub c0_star: f64,
    pub sign_change: bool,
}

pub fn phi_grid(tau_min: f64, tau_max: f64, step: f64) -> Result<Vec<PhiRow>> {
    if step <= 0.0 {
        return Err(Error::InvalidParam(format!("step must be positive; got {step}")));
    }
    if !(tau_min > 0.0 && tau_min < tau_max && tau_max < 1.0) {
        return Err(Error::InvalidParam(format!(
            "need 0 < tau_min < tau_max < 1; got [{tau_min}, {tau_max}]"
        )));
    }
    let mut rows = Vec::new();
    let n = ((tau_max - tau_min) / step).round() as usize;
    let mut prev_sign: Option<bool> = None;
    for k in 0..=n {
        let tau = tau_min + k as f64 * step;
        if tau >= 1.0 {
            break;
        }
        let phi = phi_closed_affine(tau)?;
        let c0 = optimal_c0(&affine_coefficients(tau), 1.0)?;
        let sign = phi < 0.0;
        let sign_change = prev_sign.map(|p| p != sign).unwrap_or(false);
        prev_sign = Some(sign);
        rows.push(PhiRow { tau, phi, c0_star: c0, sign_change });
    }
    Ok(rows)
}

pub fn render(rows: &[PhiRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(r.tau),
                    fmt_f64(r.phi),
                    fmt_f64(r.c0_star),
                    r.sign_change
                ));
            }
            s
        }
        OutputFormat::Json => {
            let mut s = String::from("[\n");
            for (n, r) in rows.iter().enumerate() {
                s.push_str(&format!(
                    "  {{\"tau\": {}, \"phi\": {}, \"c0_star\": {}, \"sign_change\": {}}}{}\n",
                    fmt_f64(r.tau),
                    fmt_f64(r.phi),
                    fmt_f64(r.c0_star),
                    r.sign_change,
                    if n + 1 < rows.len() { "," } else { "" }
                ));
            }
            s.push_str("]\n");
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_is_negative_and_bracketed() {
        let rows = phi_grid(0.30, 0.40, 0.01).unwrap();
        assert!(rows.iter().all(|r| r.phi < 0.0));
        assert!(rows.iter().all(|r| !r.sign_change));
        // Wide grid sees both sign changes around the admissible window.
        let rows = phi_grid(0.05, 0.95, 0.01).unwrap();
        let changes = rows.iter().filter(|r| r.sign_change).count();
        assert_eq!(changes, 2, "expected entry and exit of the negative window");
        assert!(phi_grid(0.3, 0.4, 0.0).is_err());
        assert!(phi_grid(0.3, 0.4, -0.1).is_err());
        assert!(phi_grid(0.0, 0.4, 0.1).is_err());
    }
}
