//! Macrospin model of ultrafast photo-magnetic switching in Co-substituted
//! yttrium iron garnet films.
//!
//! The crate is `no_std` (with `alloc`) and contains only the numerics:
//!
//! * [`magnetics`]: free-energy terms and the effective field,
//! * [`landscape`]: metastable states, basin labels and FMR frequencies,
//! * [`dynamics`]: Landau–Lifshitz–Gilbert integration and switching verdicts,
//! * [`photoexcitation`]: pump pulse to photo-induced anisotropy, threshold calibration,
//! * [`symmetry`]: point groups and projection of the rank-4 susceptibility,
//! * [`energetics`]: heating and photon-budget calculators,
//! * [`imaging`]: per-pixel macrospin grids under a Gaussian beam.
//!
//! Units are CGS (erg cm⁻³, Oe, G, emu cm⁻³); time is in picoseconds.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dynamics;
pub mod energetics;
mod error;
pub mod imaging;
pub mod landscape;
pub mod magnetics;
pub(crate) mod math;
pub mod photoexcitation;
pub mod symmetry;
mod vector;

pub use error::{Error, Result};
pub use vector::Vec3;
