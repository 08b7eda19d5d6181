// Thin aliases over libm so call sites read like std float methods.
pub use libm::{atan2, cos, exp, fabs as abs, log, sin, sqrt};

pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn to_rad(deg: f64) -> f64 {
    deg * PI / 180.0
}

