//! Sweep and image orchestration on a fixed-size worker pool.
//!
//! Work items are independent and results are collected in index order,
//! so outputs do not depend on the number of workers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use photomag_core::dynamics::{Simulator, SwitchOutcome};
use photomag_core::imaging::{
    assemble_image, normalized_switched_area, pixel_outcome, required_keys, BeamProfile, DomainImage, FluenceGrid,
    ImageResult, FLUENCE_LEVELS,
};
use photomag_core::photoexcitation::{PumpPulse, SpectralModel};

use crate::config::{Observable, Pattern, RunConfig};
use crate::error::{CliError, Result};

pub struct Context {
    pub cfg: RunConfig,
    pub sim: Simulator,
    pub spectral: SpectralModel,
    /// Directory that relative paths in the config are resolved against.
    pub base_dir: PathBuf,
    pool: rayon::ThreadPool,
}

impl Context {
    pub fn new(cfg: RunConfig, base_dir: &Path) -> Result<Self> {
        let sim = Simulator::new(cfg.material, cfg.frame())?;
        let mut spectral = SpectralModel::new(cfg.spectral.center_nm, cfg.spectral.width_nm);
        if let Some(file) = &cfg.spectral.absorption_file {
            let table = crate::tables::load_absorption_table(&base_dir.join(file))?;
            spectral = spectral.with_absorption_table(table)?;
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", cfg.workers)))?;
        Ok(Context { cfg, sim, spectral, base_dir: base_dir.to_path_buf(), pool })
    }

    /// `f(0..n)` evaluated on the pool, returned in index order.
    pub fn map<T: Send>(&self, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }

    pub fn pulse(&self) -> PumpPulse {
        self.cfg.pump_pulse()
    }

    pub fn switch(&self, pulse: &PumpPulse) -> Result<SwitchOutcome> {
        Ok(self.sim.simulate_switch(self.cfg.pulse.initial, pulse, &self.spectral, &self.cfg.simulation)?)
    }

    pub fn initial_image(&self) -> Result<DomainImage> {
        let im = &self.cfg.image;
        let mins = &self.sim.minima;
        if let Some(file) = &im.initial_pgm {
            return crate::pgm::load_pattern(&self.base_dir.join(file), im.pitch_um, mins);
        }
        Ok(match im.pattern {
            Pattern::Uniform => DomainImage::uniform(im.width, im.height, im.pitch_um, im.label_a, mins)?,
            Pattern::Stripes => {
                DomainImage::stripes(im.width, im.height, im.pitch_um, im.period_um, im.label_a, im.label_b, mins)?
            }
            Pattern::Checkerboard => DomainImage::checkerboard(
                im.width, im.height, im.pitch_um, im.period_um, im.label_a, im.label_b, mins,
            )?,
        })
    }

    /// Parallel counterpart of `imaging::simulate_image`.
    pub fn simulate_image(&self, initial: &DomainImage, beam: &BeamProfile, pulse: &PumpPulse) -> Result<ImageResult> {
        beam.validate()?;
        pulse.with_fluence(beam.peak_fluence).validate()?;
        let grid = FluenceGrid::new(beam.peak_fluence, FLUENCE_LEVELS);
        let keys = required_keys(initial, beam, &grid);
        let outcomes = self.map(keys.len(), |i| {
            pixel_outcome(&self.sim, keys[i], &grid, pulse, &self.spectral, &self.cfg.simulation)
        });
        let mut table = BTreeMap::new();
        for (k, o) in keys.into_iter().zip(outcomes) {
            table.insert(k, o?);
        }
        Ok(assemble_image(initial, beam, &grid, &table)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Fluence,
    Polarization,
    Wavelength,
}

impl Variable {
    pub fn column(self) -> &'static str {
        match self {
            Variable::Fluence => "I0_mJcm2",
            Variable::Polarization => "phi_deg",
            Variable::Wavelength => "lambda_nm",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variable::Fluence => "fluence",
            Variable::Polarization => "polarization",
            Variable::Wavelength => "wavelength",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointResult {
    Switch(SwitchOutcome),
    Area { normalized_area: f64, undecided_fraction: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: Variable,
    pub observable: Observable,
    pub values: Vec<f64>,
    /// One entry per value; failures are kept as messages.
    pub points: Vec<std::result::Result<PointResult, String>>,
}

impl Context {
    fn axis(&self, variable: Variable) -> Vec<f64> {
        let s = &self.cfg.sweep;
        match variable {
            Variable::Fluence => s.fluence.values(),
            Variable::Polarization => s.polarization.values(),
            Variable::Wavelength => s.wavelength.values(),
        }
    }

    fn pulse_at(&self, variable: Variable, v: f64) -> PumpPulse {
        let p = self.pulse();
        match variable {
            Variable::Fluence => p.with_fluence(v),
            Variable::Polarization => p.with_polarization(v),
            Variable::Wavelength => p.with_wavelength(v),
        }
    }

    pub fn run_sweep(&self, variable: Variable) -> Result<SweepResult> {
        let values = self.axis(variable);
        let observable = match variable {
            Variable::Polarization => Observable::Switch,
            _ => self.cfg.sweep.observable,
        };
        // surface a missing calibration once instead of on every row
        photomag_core::photoexcitation::photo_amplitude(&self.pulse_at(variable, values[0]), &self.spectral)
            .map(|_| ())
            .or_else(|e| match e {
                photomag_core::Error::Uncalibrated => Err(e),
                _ => Ok(()),
            })?;
        let points = match observable {
            Observable::Switch => self
                .map(values.len(), |i| self.switch(&self.pulse_at(variable, values[i])))
                .into_iter()
                .map(|r| r.map(PointResult::Switch).map_err(|e| e.to_string()))
                .collect(),
            Observable::Area => {
                let initial = self.initial_image()?;
                values
                    .iter()
                    .map(|&v| self.area_point(&initial, variable, v).map_err(|e| e.to_string()))
                    .collect()
            }
        };
        Ok(SweepResult { variable, observable, values, points })
    }

    fn area_point(&self, initial: &DomainImage, variable: Variable, v: f64) -> Result<PointResult> {
        let mut beam = self.cfg.beam();
        let mut pulse = self.pulse();
        match variable {
            Variable::Fluence => beam.peak_fluence = v,
            Variable::Wavelength => pulse = pulse.with_wavelength(v),
            Variable::Polarization => pulse = pulse.with_polarization(v),
        }
        let r = self.simulate_image(initial, &beam, &pulse)?;
        Ok(PointResult::Area {
            normalized_area: normalized_switched_area(initial, &r.image, &beam)?,
            undecided_fraction: r.undecided_count as f64 / initial.len() as f64,
        })
    }
}
