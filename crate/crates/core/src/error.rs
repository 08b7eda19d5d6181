use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input violated a documented precondition (non-unit vector,
    /// negative damping, wavelength outside the model window, ...).
    Domain(String),
    /// A minimization started from the given direction did not converge.
    NoConvergence { start: [f64; 3], iterations: usize },
    /// Fixed-step integration broke the Lyapunov property under a static field.
    Integration { time_ps: f64, energy_increase: f64 },
    /// A pulse was used before its coupling was calibrated.
    Uncalibrated,
    /// Threshold calibration could not bracket a switching coupling.
    Calibration { lo: f64, hi: f64, detail: String },
    /// The rise-time fit found no monotone rise to fit.
    Fit(String),
    /// Inconsistent configuration (empty tables, mismatched image sizes, ...).
    Config(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NoConvergence { start, iterations } => write!(
                f,
                "minimization from ({:.6}, {:.6}, {:.6}) did not converge after {iterations} iterations",
                start[0], start[1], start[2]
            ),
            Error::Integration { time_ps, energy_increase } => write!(
                f,
                "integration failure at t = {time_ps} ps: energy rose by {energy_increase:e} erg/cm3 under a static field; reduce dt"
            ),
            Error::Uncalibrated => write!(
                f,
                "pulse coupling is not calibrated; run the `calibrate` step first"
            ),
            Error::Calibration { lo, hi, detail } => write!(
                f,
                "calibration failed in coupling bracket [{lo:e}, {hi:e}]: {detail}"
            ),
            Error::Fit(msg) => write!(f, "fit failure: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
