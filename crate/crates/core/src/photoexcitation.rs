//! Pump pulse → transient photo-induced anisotropy.
//!
//! The pulse is a step at t = 0 followed by a single-exponential decay with
//! lifetime τ_L; the 50 fs pump duration is not resolved. The amplitude is
//! linear in fluence and follows a Gaussian spectral resonance:
//!
//! A(0) = −coupling · I · exp(−(λ − λ₀)² / 2σ²)
//!
//! The negative sign makes a [100]-polarized pulse favour my > 0 for mx > 0.

use alloc::vec::Vec;

use crate::dynamics::{SwitchSettings, Simulator, Verdict};
use crate::landscape::DomainLabel;
use crate::magnetics::{FilmFrame, MaterialParams, PhotoAnisotropyState};
use crate::math::{cos, exp, sqrt, to_rad};
use crate::{Error, Result};

/// Wavelength window (nm) in which the spectral model is defined.
pub const WAVELENGTH_WINDOW_NM: (f64, f64) = (1100.0, 1500.0);
/// Default threshold fluence targeted by calibration, mJ cm⁻².
pub const DEFAULT_TARGET_IMIN: f64 = 34.0;
/// Default calibration wavelength, nm.
pub const DEFAULT_CALIBRATION_WAVELENGTH: f64 = 1300.0;
/// Default photo-anisotropy lifetime, ps.
pub const DEFAULT_LIFETIME_PS: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpPulse {
    /// mJ cm⁻².
    pub fluence: f64,
    /// nm.
    pub wavelength: f64,
    /// Linear polarization angle from [100] in the (001) plane, degrees.
    pub polarization_angle_deg: f64,
    /// Photo-anisotropy lifetime τ_L, ps.
    pub lifetime_ps: f64,
    /// erg cm⁻³ per mJ cm⁻² at the resonance peak; `None` until calibrated.
    pub coupling: Option<f64>,
}

impl PumpPulse {
    pub fn new(fluence: f64, wavelength: f64, polarization_angle_deg: f64) -> Self {
        PumpPulse {
            fluence,
            wavelength,
            polarization_angle_deg,
            lifetime_ps: DEFAULT_LIFETIME_PS,
            coupling: None,
        }
    }

    pub fn with_coupling(mut self, coupling: f64) -> Self {
        self.coupling = Some(coupling);
        self
    }

    pub fn with_lifetime(mut self, lifetime_ps: f64) -> Self {
        self.lifetime_ps = lifetime_ps;
        self
    }

    pub fn with_fluence(mut self, fluence: f64) -> Self {
        self.fluence = fluence;
        self
    }

    pub fn with_polarization(mut self, deg: f64) -> Self {
        self.polarization_angle_deg = deg;
        self
    }

    pub fn with_wavelength(mut self, nm: f64) -> Self {
        self.wavelength = nm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fluence >= 0.0 && self.fluence.is_finite()) {
            return Err(Error::Domain(alloc::format!("pulse fluence must be >= 0, got {}", self.fluence)));
        }
        check_window(self.wavelength)?;
        if !(self.lifetime_ps > 0.0 && self.lifetime_ps.is_finite()) {
            return Err(Error::Domain(alloc::format!("pulse lifetime must be > 0, got {}", self.lifetime_ps)));
        }
        if !self.polarization_angle_deg.is_finite() {
            return Err(Error::Domain("polarization angle must be finite".into()));
        }
        Ok(())
    }

    /// Time profile of this pulse arriving at t = 0.
    pub fn schedule(&self, spectral: &SpectralModel) -> Result<PhotoSchedule> {
        let state = photo_amplitude(self, spectral)?;
        Ok(PhotoSchedule::single(PhotoEvent {
            onset_ps: 0.0,
            amplitude_a: state.amplitude_a,
            polarization_angle_deg: state.polarization_angle_deg,
            lifetime_ps: self.lifetime_ps,
        }))
    }
}

fn check_window(wavelength: f64) -> Result<()> {
    let (lo, hi) = WAVELENGTH_WINDOW_NM;
    if !(lo..=hi).contains(&wavelength) {
        return Err(Error::Domain(alloc::format!(
            "wavelength {wavelength} nm outside the model window [{lo}, {hi}] nm"
        )));
    }
    Ok(())
}

/// Resonance and absorption spectra of the Co transition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    pub center_nm: f64,
    /// Gaussian σ, nm.
    pub width_nm: f64,
    /// (nm, absorption) nodes, sorted by wavelength.
    pub absorption_table: Vec<(f64, f64)>,
}

impl SpectralModel {
    pub const DEFAULT_CENTER_NM: f64 = 1305.0;
    pub const DEFAULT_WIDTH_NM: f64 = 60.0;
    /// Absorption measured at 1300 nm.
    pub const ANCHOR_ABSORPTION: f64 = 0.12;
    pub const ANCHOR_NM: f64 = 1300.0;

    pub fn new(center_nm: f64, width_nm: f64) -> Self {
        let mut m = SpectralModel { center_nm, width_nm, absorption_table: Vec::new() };
        m.absorption_table = m.scaled_absorption_table();
        m
    }

    /// The anchored absorption a(1300 nm) = 0.12 extended over the window as
    /// a scaled copy of the resonance, tabulated every 10 nm.
    pub fn scaled_absorption_table(&self) -> Vec<(f64, f64)> {
        let anchor = gaussian(Self::ANCHOR_NM, self.center_nm, self.width_nm);
        let (lo, hi) = WAVELENGTH_WINDOW_NM;
        let n = ((hi - lo) / 10.0) as usize;
        (0..=n)
            .map(|i| {
                let nm = lo + 10.0 * i as f64;
                let a = Self::ANCHOR_ABSORPTION * gaussian(nm, self.center_nm, self.width_nm) / anchor;
                (nm, a.min(1.0))
            })
            .collect()
    }

    pub fn with_absorption_table(mut self, mut table: Vec<(f64, f64)>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Config("absorption table is empty".into()));
        }
        if table.iter().any(|&(nm, a)| !nm.is_finite() || !(0.0..=1.0).contains(&a)) {
            return Err(Error::Config("absorption values must lie in [0, 1]".into()));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        self.absorption_table = table;
        Ok(self)
    }
}

impl Default for SpectralModel {
    fn default() -> Self {
        Self::new(Self::DEFAULT_CENTER_NM, Self::DEFAULT_WIDTH_NM)
    }
}

fn gaussian(x: f64, center: f64, sigma: f64) -> f64 {
    let d = x - center;
    exp(-d * d / (2.0 * sigma * sigma))
}

/// Normalized resonance of the photo-induced anisotropy at `wavelength`.
pub fn spectral_response(wavelength: f64, model: &SpectralModel) -> Result<f64> {
    check_window(wavelength)?;
    Ok(gaussian(wavelength, model.center_nm, model.width_nm))
}

/// Piecewise-linear absorption coefficient from the model's table.
pub fn absorption_coeff(wavelength: f64, model: &SpectralModel) -> Result<f64> {
    let t = &model.absorption_table;
    let (first, last) = match (t.first(), t.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(Error::Config("absorption table is empty".into())),
    };
    if t.len() == 1 {
        return Ok(first.1);
    }
    if wavelength < first.0 || wavelength > last.0 {
        return Err(Error::Domain(alloc::format!(
            "wavelength {wavelength} nm outside absorption table [{}, {}] nm",
            first.0, last.0
        )));
    }
    for w in t.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if wavelength <= x1 {
            if x1 == x0 {
                return Ok(y1);
            }
            return Ok(y0 + (y1 - y0) * (wavelength - x0) / (x1 - x0));
        }
    }
    Ok(last.1)
}

/// Photo-induced anisotropy at the instant the pulse arrives.
pub fn photo_amplitude(pulse: &PumpPulse, spectral: &SpectralModel) -> Result<PhotoAnisotropyState> {
    pulse.validate()?;
    let coupling = pulse.coupling.ok_or(Error::Uncalibrated)?;
    let a = -coupling * pulse.fluence * spectral_response(pulse.wavelength, spectral)?;
    Ok(PhotoAnisotropyState::new(a, pulse.polarization_angle_deg))
}

/// Photo-induced field |2·A·mx|/Ms (Oe) at the direction `m`.
pub fn photo_field_magnitude(state: &PhotoAnisotropyState, mx: f64, ms: f64) -> f64 {
    libm::fabs(2.0 * state.amplitude_a * mx) / ms
}

/// One photo-excitation event: step at `onset_ps`, exponential decay after.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotoEvent {
    pub onset_ps: f64,
    pub amplitude_a: f64,
    pub polarization_angle_deg: f64,
    pub lifetime_ps: f64,
}

impl PhotoEvent {
    pub fn amplitude_at(&self, t_ps: f64) -> f64 {
        if t_ps < self.onset_ps {
            0.0
        } else {
            self.amplitude_a * exp(-(t_ps - self.onset_ps) / self.lifetime_ps)
        }
    }

    fn coefficient_at(&self, t_ps: f64) -> f64 {
        self.amplitude_at(t_ps) * cos(2.0 * to_rad(self.polarization_angle_deg))
    }

    fn is_inert(&self) -> bool {
        libm::fabs(cos(2.0 * to_rad(self.polarization_angle_deg))) < 1e-12 || self.amplitude_a == 0.0
    }
}

/// Superposition of photo events; all of them act through the mx·my term,
/// so the instantaneous state reduces to one coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhotoSchedule {
    pub events: Vec<PhotoEvent>,
}

impl PhotoSchedule {
    pub fn none() -> Self {
        PhotoSchedule { events: Vec::new() }
    }

    pub fn single(event: PhotoEvent) -> Self {
        PhotoSchedule { events: alloc::vec![event] }
    }

    pub fn push(&mut self, event: PhotoEvent) {
        self.events.push(event);
    }

    /// Σ A_i(t) cos 2φ_i.
    pub fn coefficient_at(&self, t_ps: f64) -> f64 {
        self.events.iter().map(|e| e.coefficient_at(t_ps)).sum()
    }

    /// Instantaneous state expressed at φ = 0.
    pub fn state_at(&self, t_ps: f64) -> PhotoAnisotropyState {
        PhotoAnisotropyState::new(self.coefficient_at(t_ps), 0.0)
    }

    /// True when the photo term cannot change anywhere in [t0, t1].
    pub fn is_static_over(&self, _t0: f64, t1: f64) -> bool {
        self.events.iter().all(|e| e.is_inert() || t1 < e.onset_ps)
    }
}

/// Inputs of the threshold calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationRequest {
    pub target_imin: f64,
    pub wavelength: f64,
    pub lifetime_ps: f64,
    /// Relative fluence margin ε checked on both sides of the target.
    pub margin: f64,
    /// Search bracket on the coupling, erg cm⁻³ per mJ cm⁻².
    pub bracket: (f64, f64),
    /// Relative width at which bisection stops.
    pub rel_tolerance: f64,
    pub settings: SwitchSettings,
}

impl Default for CalibrationRequest {
    fn default() -> Self {
        CalibrationRequest {
            target_imin: DEFAULT_TARGET_IMIN,
            wavelength: DEFAULT_CALIBRATION_WAVELENGTH,
            lifetime_ps: DEFAULT_LIFETIME_PS,
            margin: 0.02,
            bracket: (1.0, 3000.0),
            rel_tolerance: 1e-4,
            settings: SwitchSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub coupling: f64,
    /// Final (non-switching, switching) coupling bracket.
    pub bracket: (f64, f64),
    pub probes: usize,
}

/// Bisects the coupling so that a φ = 0 pulse at `target_imin` sits on the
/// switching threshold of the L+ state: it switches at target·(1 + ε) and
/// does not at target·(1 − ε).
pub fn calibrate_threshold(
    params: &MaterialParams,
    frame: &FilmFrame,
    spectral: &SpectralModel,
    request: &CalibrationRequest,
) -> Result<Calibration> {
    let sim = Simulator::new(*params, *frame)?;
    calibrate_with(&sim, spectral, request)
}

/// [`calibrate_threshold`] on a prepared simulator.
pub fn calibrate_with(sim: &Simulator, spectral: &SpectralModel, request: &CalibrationRequest) -> Result<Calibration> {
    let base = PumpPulse::new(request.target_imin, request.wavelength, 0.0).with_lifetime(request.lifetime_ps);
    base.validate()?;
    let mut probes = 0usize;
    let mut switches = |coupling: f64, fluence: f64| -> Result<bool> {
        probes += 1;
        let pulse = base.with_coupling(coupling).with_fluence(fluence);
        let out = sim.simulate_switch(DomainLabel::LPlus, &pulse, spectral, &request.settings)?;
        Ok(out.verdict == Verdict::Switched)
    };
    let (mut lo, mut hi) = request.bracket;
    let fail = |lo: f64, hi: f64, detail: &str| Error::Calibration { lo, hi, detail: detail.into() };
    if switches(lo, request.target_imin)? {
        return Err(fail(lo, hi, "lower bracket end already switches"));
    }
    if !switches(hi, request.target_imin)? {
        return Err(fail(lo, hi, "no coupling in the bracket switches L+"));
    }
    while hi / lo - 1.0 > request.rel_tolerance {
        let mid = sqrt(lo * hi);
        if switches(mid, request.target_imin)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let coupling = hi;
    let above = switches(coupling, request.target_imin * (1.0 + request.margin))?;
    let below = switches(coupling, request.target_imin * (1.0 - request.margin))?;
    if !above || below {
        return Err(fail(
            lo,
            hi,
            "threshold is not sharp within the requested margin (switching is non-monotone near the target)",
        ));
    }
    Ok(Calibration { coupling, bracket: (lo, hi), probes })
}
