//! Grid of independent macrospins under a Gaussian pump spot.
//!
//! A pixel's outcome depends only on its initial label and local fluence,
//! so outcomes are tabulated on a quantized fluence grid and the image is
//! assembled from that table.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::dynamics::{Simulator, SwitchOutcome, SwitchSettings, Verdict};
use crate::landscape::{minimum_for, DomainLabel, Equilibrium};
use crate::math::{exp, PI};
use crate::photoexcitation::{PumpPulse, SpectralModel};
use crate::{Error, Result};

/// Number of fluence levels in the outcome table.
pub const FLUENCE_LEVELS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamProfile {
    /// Peak (center) fluence, mJ cm⁻².
    pub peak_fluence: f64,
    /// 1/e² radius, μm.
    pub spot_radius_um: f64,
    /// μm.
    pub center: (f64, f64),
}

impl BeamProfile {
    pub const DEFAULT_RADIUS_UM: f64 = 65.0;

    pub fn new(peak_fluence: f64, center: (f64, f64)) -> Self {
        BeamProfile { peak_fluence, spot_radius_um: Self::DEFAULT_RADIUS_UM, center }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot_radius_um > 0.0 && self.spot_radius_um.is_finite()) {
            return Err(Error::Domain(alloc::format!("spot radius must be > 0, got {}", self.spot_radius_um)));
        }
        if !(self.peak_fluence >= 0.0 && self.peak_fluence.is_finite()) {
            return Err(Error::Domain(alloc::format!("peak fluence must be >= 0, got {}", self.peak_fluence)));
        }
        Ok(())
    }

    /// Spot area πr², μm².
    pub fn spot_area(&self) -> f64 {
        PI * self.spot_radius_um * self.spot_radius_um
    }
}

/// I0·exp(−2ρ²/r²) at (x, y) in μm.
pub fn gaussian_fluence(beam: &BeamProfile, x: f64, y: f64) -> f64 {
    let (dx, dy) = (x - beam.center.0, y - beam.center.1);
    let r = beam.spot_radius_um;
    beam.peak_fluence * exp(-2.0 * (dx * dx + dy * dy) / (r * r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainImage {
    pub width: usize,
    pub height: usize,
    /// μm per pixel.
    pub pixel_pitch: f64,
    /// Row-major.
    pub labels: Vec<DomainLabel>,
    pub mz: Vec<f64>,
}

fn label_mz(label: DomainLabel, minima: &[Equilibrium]) -> f64 {
    minimum_for(label, minima).map_or(label.diagonal().z, |e| e.m.z)
}

impl DomainImage {
    fn check_dims(width: usize, height: usize, pitch: f64) -> Result<()> {
        if width == 0 || height == 0 {
            return Err(Error::Domain("image dimensions must be positive".into()));
        }
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(Error::Domain(alloc::format!("pixel pitch must be > 0, got {pitch}")));
        }
        Ok(())
    }

    /// Image whose label at pixel (i, j) is `f(x, y)` at the pixel center.
    pub fn from_fn(
        width: usize,
        height: usize,
        pitch: f64,
        minima: &[Equilibrium],
        mut f: impl FnMut(f64, f64) -> DomainLabel,
    ) -> Result<Self> {
        Self::check_dims(width, height, pitch)?;
        let mut labels = Vec::with_capacity(width * height);
        for j in 0..height {
            for i in 0..width {
                let (x, y) = Self::center_of(i, j, pitch);
                labels.push(f(x, y));
            }
        }
        let mz = labels.iter().map(|l| label_mz(*l, minima)).collect();
        Ok(DomainImage { width, height, pixel_pitch: pitch, labels, mz })
    }

    fn center_of(i: usize, j: usize, pitch: f64) -> (f64, f64) {
        ((i as f64 + 0.5) * pitch, (j as f64 + 0.5) * pitch)
    }

    pub fn uniform(width: usize, height: usize, pitch: f64, label: DomainLabel, minima: &[Equilibrium]) -> Result<Self> {
        Self::from_fn(width, height, pitch, minima, |_, _| label)
    }

    /// Vertical stripes of `period_um`, first half-period `a`.
    pub fn stripes(
        width: usize,
        height: usize,
        pitch: f64,
        period_um: f64,
        a: DomainLabel,
        b: DomainLabel,
        minima: &[Equilibrium],
    ) -> Result<Self> {
        if !(period_um > 0.0) {
            return Err(Error::Domain("stripe period must be > 0".into()));
        }
        Self::from_fn(width, height, pitch, minima, |x, _| {
            if libm::floor(2.0 * x / period_um) as i64 % 2 == 0 { a } else { b }
        })
    }

    /// Squares of side `period_um / 2`.
    pub fn checkerboard(
        width: usize,
        height: usize,
        pitch: f64,
        period_um: f64,
        a: DomainLabel,
        b: DomainLabel,
        minima: &[Equilibrium],
    ) -> Result<Self> {
        if !(period_um > 0.0) {
            return Err(Error::Domain("checkerboard period must be > 0".into()));
        }
        Self::from_fn(width, height, pitch, minima, |x, y| {
            let s = libm::floor(2.0 * x / period_um) as i64 + libm::floor(2.0 * y / period_um) as i64;
            if s % 2 == 0 { a } else { b }
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn pixel_center(&self, index: usize) -> (f64, f64) {
        Self::center_of(index % self.width, index / self.width, self.pixel_pitch)
    }

    fn same_grid(&self, o: &DomainImage) -> bool {
        self.width == o.width && self.height == o.height && self.pixel_pitch == o.pixel_pitch
    }
}

/// Floor quantization of fluence onto `levels` points spanning [0, peak].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluenceGrid {
    pub peak: f64,
    pub levels: usize,
}

impl FluenceGrid {
    pub fn new(peak: f64, levels: usize) -> Self {
        FluenceGrid { peak, levels: levels.max(2) }
    }

    pub fn level_of(&self, fluence: f64) -> usize {
        if self.peak <= 0.0 {
            return 0;
        }
        let top = (self.levels - 1) as f64;
        let k = libm::floor(fluence / self.peak * top + 1e-9);
        (k.max(0.0) as usize).min(self.levels - 1)
    }

    pub fn fluence_of(&self, level: usize) -> f64 {
        self.peak * level as f64 / (self.levels - 1) as f64
    }
}

pub type OutcomeKey = (DomainLabel, usize);

/// The (label, level) pairs an image needs.
pub fn required_keys(initial: &DomainImage, beam: &BeamProfile, grid: &FluenceGrid) -> Vec<OutcomeKey> {
    let mut keys: Vec<OutcomeKey> = (0..initial.len())
        .map(|n| {
            let (x, y) = initial.pixel_center(n);
            (initial.labels[n], grid.level_of(gaussian_fluence(beam, x, y)))
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageResult {
    pub image: DomainImage,
    /// True where the label changed.
    pub changed: Vec<bool>,
    /// True where the verdict was undecided.
    pub undecided: Vec<bool>,
    pub undecided_count: usize,
}

/// Builds the final image from tabulated outcomes.
pub fn assemble_image(
    initial: &DomainImage,
    beam: &BeamProfile,
    grid: &FluenceGrid,
    outcomes: &BTreeMap<OutcomeKey, SwitchOutcome>,
) -> Result<ImageResult> {
    let mut image = initial.clone();
    let mut changed = alloc::vec![false; initial.len()];
    let mut undecided = alloc::vec![false; initial.len()];
    for n in 0..initial.len() {
        let (x, y) = initial.pixel_center(n);
        let key = (initial.labels[n], grid.level_of(gaussian_fluence(beam, x, y)));
        let out = outcomes
            .get(&key)
            .ok_or_else(|| Error::Domain(alloc::format!("missing outcome for {} at level {}", key.0, key.1)))?;
        if out.final_label != initial.labels[n] {
            image.labels[n] = out.final_label;
            image.mz[n] = out.final_m.z;
            changed[n] = true;
        }
        undecided[n] = out.verdict == Verdict::Undecided;
    }
    let undecided_count = undecided.iter().filter(|u| **u).count();
    Ok(ImageResult { image, changed, undecided, undecided_count })
}

/// Outcome of one table entry.
pub fn pixel_outcome(
    sim: &Simulator,
    key: OutcomeKey,
    grid: &FluenceGrid,
    pulse: &PumpPulse,
    spectral: &SpectralModel,
    settings: &SwitchSettings,
) -> Result<SwitchOutcome> {
    sim.simulate_switch(key.0, &pulse.with_fluence(grid.fluence_of(key.1)), spectral, settings)
}

/// Serial image simulation; `pulse.fluence` is ignored in favour of the beam.
pub fn simulate_image(
    initial: &DomainImage,
    beam: &BeamProfile,
    pulse: &PumpPulse,
    spectral: &SpectralModel,
    sim: &Simulator,
    settings: &SwitchSettings,
) -> Result<ImageResult> {
    beam.validate()?;
    let grid = FluenceGrid::new(beam.peak_fluence, FLUENCE_LEVELS);
    let mut table = BTreeMap::new();
    for key in required_keys(initial, beam, &grid) {
        table.insert(key, pixel_outcome(sim, key, &grid, pulse, spectral, settings)?);
    }
    assemble_image(initial, beam, &grid, &table)
}

/// Changed-pixel area over the spot area πr².
pub fn normalized_switched_area(before: &DomainImage, after: &DomainImage, beam: &BeamProfile) -> Result<f64> {
    if !before.same_grid(after) || before.len() != after.len() {
        return Err(Error::Domain(alloc::format!(
            "image mismatch: {}x{} vs {}x{}",
            before.width, before.height, after.width, after.height
        )));
    }
    beam.validate()?;
    let n = before.labels.iter().zip(&after.labels).filter(|(a, b)| a != b).count();
    Ok(n as f64 * before.pixel_pitch * before.pixel_pitch / beam.spot_area())
}

/// Area of a sharp threshold at `threshold` under the beam: ln(I0/I_th)/2.
pub fn threshold_area_oracle(peak: f64, threshold: f64) -> f64 {
    if peak <= threshold {
        0.0
    } else {
        libm::log(peak / threshold) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::find_minima;
    use crate::magnetics::{FilmFrame, MaterialParams};
    use crate::Vec3;

    fn minima() -> Vec<Equilibrium> {
        let p = MaterialParams::garnet();
        find_minima(&p, &FilmFrame::from_params(&p), Vec3::ZERO).unwrap()
    }

    #[test]
    fn fluence_examples() {
        let b = BeamProfile::new(150.0, (0.0, 0.0));
        assert_eq!(gaussian_fluence(&b, 0.0, 0.0), 150.0);
        assert!((gaussian_fluence(&b, 65.0, 0.0) - 150.0 * exp(-2.0)).abs() < 1e-12);
        // midpoint quadrature over ±4r
        let (n, half) = (800, 4.0 * 65.0);
        let h = 2.0 * half / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let x = -half + (i as f64 + 0.5) * h;
                let y = -half + (j as f64 + 0.5) * h;
                s += gaussian_fluence(&b, x, y) * h * h;
            }
        }
        let exact = 150.0 * PI * 65.0 * 65.0 / 2.0;
        assert!((s / exact - 1.0).abs() < 1e-3);
    }

    #[test]
    fn grid_quantization() {
        let g = FluenceGrid::new(150.0, FLUENCE_LEVELS);
        assert_eq!(g.level_of(150.0), 511);
        assert_eq!(g.level_of(0.0), 0);
        for k in [0, 1, 100, 511] {
            assert_eq!(g.level_of(g.fluence_of(k)), k);
        }
        assert!(g.fluence_of(g.level_of(33.9)) <= 33.9);
    }

    #[test]
    fn generators() {
        let mins = minima();
        let s = DomainImage::stripes(4, 2, 10.0, 40.0, DomainLabel::LPlus, DomainLabel::SMinus, &mins).unwrap();
        assert_eq!(&s.labels[..4], &[DomainLabel::LPlus, DomainLabel::LPlus, DomainLabel::SMinus, DomainLabel::SMinus]);
        let c = DomainImage::checkerboard(2, 2, 10.0, 20.0, DomainLabel::LPlus, DomainLabel::LMinus, &mins).unwrap();
        assert_eq!(c.labels, alloc::vec![DomainLabel::LPlus, DomainLabel::LMinus, DomainLabel::LMinus, DomainLabel::LPlus]);
        assert!(c.mz[0] > 0.0 && c.mz[1] < 0.0);
        assert!(DomainImage::uniform(0, 3, 1.0, DomainLabel::LPlus, &mins).is_err());
    }

    #[test]
    fn area_examples() {
        let mins = minima();
        let beam = BeamProfile::new(150.0, (50.0, 50.0));
        let a = DomainImage::uniform(100, 100, 1.0, DomainLabel::LPlus, &mins).unwrap();
        assert_eq!(normalized_switched_area(&a, &a, &beam).unwrap(), 0.0);
        let small = DomainImage::uniform(10, 10, 1.0, DomainLabel::LPlus, &mins).unwrap();
        assert!(normalized_switched_area(&a, &small, &beam).is_err());
        assert!((threshold_area_oracle(150.0, 34.0) - 0.742).abs() < 1e-3);
        assert!((threshold_area_oracle(34.0 * exp(2.0), 34.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sharp_threshold_table_matches_oracle() {
        let mins = minima();
        let beam = BeamProfile::new(150.0, (150.0, 150.0));
        let grid = FluenceGrid::new(beam.peak_fluence, FLUENCE_LEVELS);
        let init = DomainImage::uniform(300, 300, 1.0, DomainLabel::LPlus, &mins).unwrap();
        let mut table = BTreeMap::new();
        for key in required_keys(&init, &beam, &grid) {
            let flips = grid.fluence_of(key.1) >= 34.0;
            let lab = if flips { DomainLabel::LMinus } else { DomainLabel::LPlus };
            table.insert(key, SwitchOutcome {
                initial_label: key.0,
                final_label: lab,
                verdict: if flips { Verdict::Switched } else { Verdict::NotSwitched },
                crossing_time_ps: None,
                stabilization_time_ps: None,
                fitted_tau_ps: None,
                max_abs_dmz: 0.0,
                final_m: lab.diagonal(),
            });
        }
        let r = assemble_image(&init, &beam, &grid, &table).unwrap();
        let area = normalized_switched_area(&init, &r.image, &beam).unwrap();
        assert!((area - threshold_area_oracle(150.0, 34.0)).abs() < 0.02 * 0.742, "{area}");
    }
}
