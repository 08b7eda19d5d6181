//! Line-oriented run configuration: `section.key = value`, `#` comments.
//!
//! Every key has a default, so an empty file is a valid configuration.
//! Numeric values may carry a unit suffix, which is checked against the
//! key's dimension and converted to the canonical unit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use photomag_core::dynamics::SwitchSettings;
use photomag_core::energetics::SampleThermo;
use photomag_core::imaging::BeamProfile;
use photomag_core::landscape::DomainLabel;
use photomag_core::magnetics::MaterialParams;
use photomag_core::photoexcitation::{
    CalibrationRequest, PumpPulse, SpectralModel, DEFAULT_LIFETIME_PS, WAVELENGTH_WINDOW_NM,
};
use photomag_core::symmetry::PointGroupName;

use crate::error::{CliError, Result};

/// Physical dimension of a numeric key; fixes the accepted suffixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Plain,
    EnergyDensity,
    Field,
    Induction,
    Time,
    Wavelength,
    LengthUm,
    LengthNm,
    LengthCm,
    Angle,
    Fluence,
    Temperature,
    HeatCapacity,
    MolarMass,
    Density,
    PhotonEnergy,
    Coupling,
}

impl Dim {
    /// (suffix, factor to canonical); the first entry is canonical.
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::Plain => &[],
            Dim::EnergyDensity => &[("erg/cm3", 1.0), ("J/m3", 10.0)],
            Dim::Field => &[("Oe", 1.0), ("mT", 10.0), ("T", 1e4)],
            Dim::Induction => &[("G", 1.0), ("mT", 10.0), ("T", 1e4)],
            Dim::Time => &[("ps", 1.0), ("fs", 1e-3), ("ns", 1e3)],
            Dim::Wavelength => &[("nm", 1.0), ("um", 1e3)],
            Dim::LengthUm => &[("um", 1.0), ("nm", 1e-3), ("mm", 1e3)],
            Dim::LengthNm => &[("nm", 1.0)],
            Dim::LengthCm => &[("cm", 1.0), ("mm", 0.1), ("um", 1e-4), ("nm", 1e-7)],
            Dim::Angle => &[("deg", 1.0), ("rad", 180.0 / std::f64::consts::PI)],
            Dim::Fluence => &[("mJcm2", 1.0), ("mJ/cm2", 1.0), ("J/cm2", 1e3)],
            Dim::Temperature => &[("K", 1.0)],
            Dim::HeatCapacity => &[("J/(mol*K)", 1.0)],
            Dim::MolarMass => &[("g/mol", 1.0)],
            Dim::Density => &[("g/cm3", 1.0)],
            Dim::PhotonEnergy => &[("eV", 1.0)],
            Dim::Coupling => &[("erg/cm3/(mJ/cm2)", 1.0)],
        }
    }

    fn canonical(self) -> Option<&'static str> {
        self.units().first().map(|u| u.0)
    }
}

fn split_number(raw: &str) -> Option<(f64, &str)> {
    let raw = raw.trim();
    if let Some((num, unit)) = raw.split_once(char::is_whitespace) {
        return num.parse().ok().map(|v| (v, unit.trim()));
    }
    let mut cut: Vec<usize> = raw.char_indices().map(|(i, _)| i).skip(1).collect();
    cut.push(raw.len());
    cut.into_iter().rev().find_map(|i| raw[..i].parse().ok().map(|v| (v, &raw[i..])))
}

fn parse_quantity(raw: &str, dim: Dim) -> std::result::Result<f64, String> {
    let (v, unit): (f64, &str) = split_number(raw).ok_or_else(|| format!("expected a number, got {raw:?}"))?;
    if !v.is_finite() {
        return Err(format!("value {raw:?} is not finite"));
    }
    if unit.is_empty() {
        return Ok(v);
    }
    match dim.units().iter().find(|u| u.0.eq_ignore_ascii_case(unit)) {
        Some((_, f)) => Ok(v * f),
        None => {
            let accepted: Vec<&str> = dim.units().iter().map(|u| u.0).collect();
            if accepted.is_empty() {
                Err(format!("unit suffix {unit:?} given for a dimensionless value"))
            } else {
                Err(format!("unit suffix {unit:?} does not match this key (accepted: {})", accepted.join(", ")))
            }
        }
    }
}

/// A value storable in a config key.
pub trait ConfigValue: Sized {
    fn parse_value(raw: &str, dim: Dim) -> std::result::Result<Self, String>;
    fn render(&self, dim: Dim) -> String;
}

impl ConfigValue for f64 {
    fn parse_value(raw: &str, dim: Dim) -> std::result::Result<Self, String> {
        parse_quantity(raw, dim)
    }
    fn render(&self, dim: Dim) -> String {
        match dim.canonical() {
            Some(u) => format!("{self} {u}"),
            None => format!("{self}"),
        }
    }
}

impl ConfigValue for Option<f64> {
    fn parse_value(raw: &str, dim: Dim) -> std::result::Result<Self, String> {
        if raw.trim() == "none" {
            Ok(None)
        } else {
            parse_quantity(raw, dim).map(Some)
        }
    }
    fn render(&self, dim: Dim) -> String {
        match self {
            Some(v) => v.render(dim),
            None => "none".into(),
        }
    }
}

impl ConfigValue for usize {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        raw.trim().parse().map_err(|_| format!("expected a non-negative integer, got {raw:?}"))
    }
    fn render(&self, _: Dim) -> String {
        self.to_string()
    }
}

impl ConfigValue for u64 {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        raw.trim().parse().map_err(|_| format!("expected a non-negative integer, got {raw:?}"))
    }
    fn render(&self, _: Dim) -> String {
        self.to_string()
    }
}

impl ConfigValue for bool {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        match raw.trim() {
            "true" | "yes" | "on" => Ok(true),
            "false" | "no" | "off" => Ok(false),
            _ => Err(format!("expected true or false, got {raw:?}")),
        }
    }
    fn render(&self, _: Dim) -> String {
        self.to_string()
    }
}

impl ConfigValue for String {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        let t = raw.trim();
        if t.is_empty() {
            return Err("expected a non-empty value".into());
        }
        Ok(t.to_string())
    }
    fn render(&self, _: Dim) -> String {
        self.clone()
    }
}

impl ConfigValue for Option<String> {
    fn parse_value(raw: &str, d: Dim) -> std::result::Result<Self, String> {
        if raw.trim() == "none" {
            Ok(None)
        } else {
            String::parse_value(raw, d).map(Some)
        }
    }
    fn render(&self, _: Dim) -> String {
        self.clone().unwrap_or_else(|| "none".into())
    }
}

impl ConfigValue for DomainLabel {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        raw.parse().map_err(|e: photomag_core::Error| e.to_string())
    }
    fn render(&self, _: Dim) -> String {
        self.ascii_name().into()
    }
}

impl ConfigValue for PointGroupName {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        raw.parse().map_err(|e: photomag_core::Error| e.to_string())
    }
    fn render(&self, _: Dim) -> String {
        self.symbol().into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Uniform,
    Stripes,
    Checkerboard,
}

impl ConfigValue for Pattern {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        match raw.trim() {
            "uniform" => Ok(Pattern::Uniform),
            "stripes" => Ok(Pattern::Stripes),
            "checkerboard" => Ok(Pattern::Checkerboard),
            other => Err(format!("unknown pattern {other:?} (uniform, stripes, checkerboard)")),
        }
    }
    fn render(&self, _: Dim) -> String {
        match self {
            Pattern::Uniform => "uniform",
            Pattern::Stripes => "stripes",
            Pattern::Checkerboard => "checkerboard",
        }
        .into()
    }
}

/// What a fluence or wavelength sweep records at each point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Single-macrospin switching outcome.
    Switch,
    /// Normalized switched area of the image grid.
    Area,
}

impl ConfigValue for Observable {
    fn parse_value(raw: &str, _: Dim) -> std::result::Result<Self, String> {
        match raw.trim() {
            "switch" => Ok(Observable::Switch),
            "area" => Ok(Observable::Area),
            other => Err(format!("unknown observable {other:?} (switch, area)")),
        }
    }
    fn render(&self, _: Dim) -> String {
        match self {
            Observable::Switch => "switch",
            Observable::Area => "area",
        }
        .into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseConfig {
    pub fluence: f64,
    pub wavelength: f64,
    pub polarization_deg: f64,
    pub lifetime_ps: f64,
    pub coupling: Option<f64>,
    pub initial: DomainLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    pub center_nm: f64,
    pub width_nm: f64,
    /// CSV of (wavelength_nm, absorption); relative to the config file.
    pub absorption_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConfig {
    pub target_imin: f64,
    pub wavelength: f64,
    pub margin: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxConfig {
    pub field_x: f64,
    pub field_y: f64,
    pub field_z: f64,
    pub duration_ps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + h * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub fluence: Axis,
    pub polarization: Axis,
    pub wavelength: Axis,
    pub observable: Observable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamConfig {
    pub peak_fluence: f64,
    pub radius_um: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageConfig {
    pub width: usize,
    pub height: usize,
    pub pitch_um: f64,
    pub pattern: Pattern,
    pub period_um: f64,
    pub label_a: DomainLabel,
    pub label_b: DomainLabel,
    /// Optional PGM holding the initial pattern; overrides `pattern`.
    pub initial_pgm: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergeticsConfig {
    pub thermo: SampleThermo,
    pub absorption: f64,
    pub fluence: f64,
    pub bit_x_nm: f64,
    pub bit_y_nm: f64,
    pub bit_z_nm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorConfig {
    pub group: PointGroupName,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub pulse: PulseConfig,
    pub spectral: SpectralConfig,
    pub simulation: SwitchSettings,
    pub calibration: CalibrationConfig,
    pub relax: RelaxConfig,
    pub sweep: SweepConfig,
    pub beam: BeamConfig,
    pub image: ImageConfig,
    pub energetics: EnergeticsConfig,
    pub tensor: TensorConfig,
    pub output_dir: String,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cal = CalibrationRequest::default();
        RunConfig {
            material: MaterialParams::garnet(),
            pulse: PulseConfig {
                fluence: 40.0,
                wavelength: 1300.0,
                polarization_deg: 0.0,
                lifetime_ps: DEFAULT_LIFETIME_PS,
                coupling: None,
                initial: DomainLabel::LPlus,
            },
            spectral: SpectralConfig {
                center_nm: SpectralModel::DEFAULT_CENTER_NM,
                width_nm: SpectralModel::DEFAULT_WIDTH_NM,
                absorption_file: None,
            },
            simulation: SwitchSettings { sample_stride: 10, ..SwitchSettings::default() },
            calibration: CalibrationConfig {
                target_imin: cal.target_imin,
                wavelength: cal.wavelength,
                margin: cal.margin,
                bracket_lo: cal.bracket.0,
                bracket_hi: cal.bracket.1,
                tolerance: cal.rel_tolerance,
            },
            relax: RelaxConfig {
                field_x: 800.0 / std::f64::consts::SQRT_2,
                field_y: -800.0 / std::f64::consts::SQRT_2,
                field_z: 0.0,
                duration_ps: 2000.0,
            },
            sweep: SweepConfig {
                fluence: Axis { start: 0.0, stop: 150.0, steps: 151 },
                polarization: Axis { start: 0.0, stop: 180.0, steps: 37 },
                wavelength: Axis { start: 1100.0, stop: 1500.0, steps: 41 },
                observable: Observable::Switch,
            },
            beam: BeamConfig { peak_fluence: 150.0, radius_um: BeamProfile::DEFAULT_RADIUS_UM },
            image: ImageConfig {
                width: 200,
                height: 200,
                pitch_um: 1.0,
                pattern: Pattern::Uniform,
                period_um: 40.0,
                label_a: DomainLabel::LPlus,
                label_b: DomainLabel::SMinus,
                initial_pgm: None,
            },
            energetics: EnergeticsConfig {
                thermo: SampleThermo::garnet(),
                absorption: SpectralModel::ANCHOR_ABSORPTION,
                fluence: 34.0,
                bit_x_nm: 20.0,
                bit_y_nm: 20.0,
                bit_z_nm: 10.0,
            },
            tensor: TensorConfig { group: PointGroupName::Four, seed: 1 },
            output_dir: "out".into(),
            workers: 1,
        }
    }
}

macro_rules! config_keys {
    ($( $key:literal : $dim:ident => $($field:ident).+ ; )*) => {
        /// Every recognized key, in serialization order.
        pub const KEYS: &[(&str, Dim)] = &[ $( ($key, Dim::$dim) ),* ];

        impl RunConfig {
            fn set_raw(&mut self, key: &str, raw: &str) -> std::result::Result<(), String> {
                match key {
                    $( $key => { self.$($field).+ = ConfigValue::parse_value(raw, Dim::$dim)?; } )*
                    _ => return Err(format!("unknown key {key:?}")),
                }
                Ok(())
            }

            fn get_raw(&self, key: &str) -> Option<String> {
                match key {
                    $( $key => Some(ConfigValue::render(&self.$($field).+, Dim::$dim)), )*
                    _ => None,
                }
            }
        }
    };
}

config_keys! {
    "material.k1": EnergyDensity => material.k1;
    "material.ku": EnergyDensity => material.ku;
    "material.four_pi_ms": Induction => material.four_pi_ms;
    "material.alpha": Plain => material.alpha;
    "material.gamma": Plain => material.gamma;
    "material.miscut": Angle => material.miscut_deg;
    "material.miscut_azimuth": Angle => material.miscut_azimuth_deg;
    "material.include_demag": Plain => material.include_demag;
    "material.neel_temperature": Temperature => material.neel_temperature_k;
    "pulse.fluence": Fluence => pulse.fluence;
    "pulse.wavelength": Wavelength => pulse.wavelength;
    "pulse.polarization": Angle => pulse.polarization_deg;
    "pulse.lifetime": Time => pulse.lifetime_ps;
    "pulse.coupling": Coupling => pulse.coupling;
    "pulse.initial": Plain => pulse.initial;
    "spectral.center": Wavelength => spectral.center_nm;
    "spectral.width": Wavelength => spectral.width_nm;
    "spectral.absorption_file": Plain => spectral.absorption_file;
    "simulation.t_end": Time => simulation.t_end_ps;
    "simulation.dt": Time => simulation.dt_ps;
    "simulation.sample_stride": Plain => simulation.sample_stride;
    "calibration.target_imin": Fluence => calibration.target_imin;
    "calibration.wavelength": Wavelength => calibration.wavelength;
    "calibration.margin": Plain => calibration.margin;
    "calibration.bracket_lo": Coupling => calibration.bracket_lo;
    "calibration.bracket_hi": Coupling => calibration.bracket_hi;
    "calibration.tolerance": Plain => calibration.tolerance;
    "relax.field_x": Field => relax.field_x;
    "relax.field_y": Field => relax.field_y;
    "relax.field_z": Field => relax.field_z;
    "relax.duration": Time => relax.duration_ps;
    "sweep.observable": Plain => sweep.observable;
    "sweep.fluence_start": Fluence => sweep.fluence.start;
    "sweep.fluence_stop": Fluence => sweep.fluence.stop;
    "sweep.fluence_steps": Plain => sweep.fluence.steps;
    "sweep.polarization_start": Angle => sweep.polarization.start;
    "sweep.polarization_stop": Angle => sweep.polarization.stop;
    "sweep.polarization_steps": Plain => sweep.polarization.steps;
    "sweep.wavelength_start": Wavelength => sweep.wavelength.start;
    "sweep.wavelength_stop": Wavelength => sweep.wavelength.stop;
    "sweep.wavelength_steps": Plain => sweep.wavelength.steps;
    "beam.peak_fluence": Fluence => beam.peak_fluence;
    "beam.radius": LengthUm => beam.radius_um;
    "image.width": Plain => image.width;
    "image.height": Plain => image.height;
    "image.pitch": LengthUm => image.pitch_um;
    "image.pattern": Plain => image.pattern;
    "image.period": LengthUm => image.period_um;
    "image.label_a": Plain => image.label_a;
    "image.label_b": Plain => image.label_b;
    "image.initial_pgm": Plain => image.initial_pgm;
    "energetics.thickness": LengthCm => energetics.thermo.thickness_d;
    "energetics.heat_capacity": HeatCapacity => energetics.thermo.heat_capacity_c;
    "energetics.molar_mass": MolarMass => energetics.thermo.molar_mass_m;
    "energetics.density": Density => energetics.thermo.density_rho;
    "energetics.photon_energy": PhotonEnergy => energetics.thermo.photon_energy;
    "energetics.absorption": Plain => energetics.absorption;
    "energetics.fluence": Fluence => energetics.fluence;
    "energetics.bit_x": LengthNm => energetics.bit_x_nm;
    "energetics.bit_y": LengthNm => energetics.bit_y_nm;
    "energetics.bit_z": LengthNm => energetics.bit_z_nm;
    "tensor.group": Plain => tensor.group;
    "tensor.seed": Plain => tensor.seed;
    "output.dir": Plain => output_dir;
    "run.workers": Plain => workers;
}

/// Keys that do not influence any output value and are left out of the
/// provenance hash.
pub const NON_PROVENANCE_KEYS: &[&str] = &["output.dir", "run.workers"];

impl RunConfig {
    /// Parses and validates configuration text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut lines: BTreeMap<&str, usize> = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| CliError::ConfigLine { line: line_no, message: format!("expected `section.key = value`, got {content:?}") })?;
            let key = key.trim();
            let Some((canonical, _)) = KEYS.iter().find(|(k, _)| *k == key) else {
                return Err(CliError::ConfigLine { line: line_no, message: format!("unknown key {key:?}") });
            };
            if let Some(prev) = lines.insert(canonical, line_no) {
                return Err(CliError::ConfigLine { line: line_no, message: format!("key {key:?} already set on line {prev}") });
            }
            cfg.set_raw(key, value).map_err(|message| CliError::ConfigLine { line: line_no, message: format!("{key}: {message}") })?;
        }
        if let Err((key, message)) = cfg.check() {
            return Err(match lines.get(key) {
                Some(&line) => CliError::ConfigLine { line, message: format!("{key}: {message}") },
                None => CliError::Config(format!("{key}: {message}")),
            });
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Sets one key from its textual form (used by CLI overrides).
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        self.set_raw(key, raw).map_err(|m| CliError::Config(format!("{key}: {m}")))?;
        self.check().map_err(|(k, m)| CliError::Config(format!("{k}: {m}")))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.get_raw(key)
    }

    /// Canonical text listing every key.
    pub fn to_text(&self) -> String {
        self.render(|_| true)
    }

    /// Canonical text of the keys that determine output values.
    pub fn provenance_text(&self) -> String {
        self.render(|k| !NON_PROVENANCE_KEYS.contains(&k))
    }

    fn render(&self, keep: impl Fn(&str) -> bool) -> String {
        let mut out = String::new();
        let mut section = "";
        for (key, _) in KEYS.iter().filter(|(k, _)| keep(k)) {
            let sec = key.split('.').next().unwrap_or("");
            if sec != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                section = sec;
            }
            let _ = writeln!(out, "{key} = {}", self.get_raw(key).unwrap_or_default());
        }
        out
    }

    /// Invariant check; the error names the offending key.
    fn check(&self) -> std::result::Result<(), (&'static str, String)> {
        fn positive(key: &'static str, v: f64) -> std::result::Result<(), (&'static str, String)> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((key, format!("must be > 0, got {v}")))
            }
        }
        let m = &self.material;
        if m.alpha < 0.0 {
            return Err(("material.alpha", format!("damping must satisfy alpha >= 0, got {}", m.alpha)));
        }
        positive("material.four_pi_ms", m.four_pi_ms)?;
        positive("material.gamma", m.gamma)?;
        if !(0.0..90.0).contains(&m.miscut_deg) {
            return Err(("material.miscut", format!("must lie in [0, 90) deg, got {}", m.miscut_deg)));
        }
        m.validate().map_err(|e| ("material.k1", e.to_string()))?;
        let p = &self.pulse;
        if p.fluence < 0.0 {
            return Err(("pulse.fluence", format!("must be >= 0, got {}", p.fluence)));
        }
        let (lo, hi) = WAVELENGTH_WINDOW_NM;
        for (key, v) in [("pulse.wavelength", p.wavelength), ("calibration.wavelength", self.calibration.wavelength)] {
            if !(lo..=hi).contains(&v) {
                return Err((key, format!("must lie in [{lo}, {hi}] nm, got {v}")));
            }
        }
        positive("pulse.lifetime", p.lifetime_ps)?;
        if let Some(c) = p.coupling {
            positive("pulse.coupling", c)?;
        }
        positive("spectral.width", self.spectral.width_nm)?;
        let s = &self.simulation;
        if !(s.dt_ps > 0.0 && s.dt_ps <= 0.1) {
            return Err(("simulation.dt", format!("must lie in (0, 0.1] ps, got {}", s.dt_ps)));
        }
        positive("simulation.t_end", s.t_end_ps)?;
        if s.sample_stride == 0 {
            return Err(("simulation.sample_stride", "must be >= 1".into()));
        }
        let c = &self.calibration;
        positive("calibration.target_imin", c.target_imin)?;
        positive("calibration.bracket_lo", c.bracket_lo)?;
        if c.bracket_hi <= c.bracket_lo {
            return Err(("calibration.bracket_hi", "must exceed calibration.bracket_lo".into()));
        }
        if !(0.0..1.0).contains(&c.margin) {
            return Err(("calibration.margin", format!("must lie in [0, 1), got {}", c.margin)));
        }
        positive("calibration.tolerance", c.tolerance)?;
        positive("relax.duration", self.relax.duration_ps)?;
        for (key, axis) in [
            ("sweep.fluence_steps", &self.sweep.fluence),
            ("sweep.polarization_steps", &self.sweep.polarization),
            ("sweep.wavelength_steps", &self.sweep.wavelength),
        ] {
            if axis.steps == 0 {
                return Err((key, "must be >= 1".into()));
            }
        }
        if self.sweep.fluence.start < 0.0 {
            return Err(("sweep.fluence_start", "must be >= 0".into()));
        }
        for (key, v) in [("sweep.wavelength_start", self.sweep.wavelength.start), ("sweep.wavelength_stop", self.sweep.wavelength.stop)] {
            if !(lo..=hi).contains(&v) {
                return Err((key, format!("must lie in [{lo}, {hi}] nm, got {v}")));
            }
        }
        if self.beam.peak_fluence < 0.0 {
            return Err(("beam.peak_fluence", "must be >= 0".into()));
        }
        positive("beam.radius", self.beam.radius_um)?;
        if self.image.width == 0 {
            return Err(("image.width", "must be >= 1".into()));
        }
        if self.image.height == 0 {
            return Err(("image.height", "must be >= 1".into()));
        }
        positive("image.pitch", self.image.pitch_um)?;
        positive("image.period", self.image.period_um)?;
        let t = &self.energetics.thermo;
        positive("energetics.thickness", t.thickness_d)?;
        positive("energetics.heat_capacity", t.heat_capacity_c)?;
        positive("energetics.molar_mass", t.molar_mass_m)?;
        positive("energetics.density", t.density_rho)?;
        positive("energetics.photon_energy", t.photon_energy)?;
        if !(0.0..=1.0).contains(&self.energetics.absorption) {
            return Err(("energetics.absorption", "must lie in [0, 1]".into()));
        }
        if self.workers == 0 {
            return Err(("run.workers", "must be >= 1".into()));
        }
        Ok(())
    }

    pub fn frame(&self) -> photomag_core::magnetics::FilmFrame {
        photomag_core::magnetics::FilmFrame::from_params(&self.material)
    }

    pub fn pump_pulse(&self) -> PumpPulse {
        PumpPulse {
            fluence: self.pulse.fluence,
            wavelength: self.pulse.wavelength,
            polarization_angle_deg: self.pulse.polarization_deg,
            lifetime_ps: self.pulse.lifetime_ps,
            coupling: self.pulse.coupling,
        }
    }

    pub fn calibration_request(&self) -> CalibrationRequest {
        let c = &self.calibration;
        CalibrationRequest {
            target_imin: c.target_imin,
            wavelength: c.wavelength,
            lifetime_ps: self.pulse.lifetime_ps,
            margin: c.margin,
            bracket: (c.bracket_lo, c.bracket_hi),
            rel_tolerance: c.tolerance,
            settings: self.simulation,
        }
    }

    pub fn beam(&self) -> BeamProfile {
        let center = (
            self.image.width as f64 * self.image.pitch_um / 2.0,
            self.image.height as f64 * self.image.pitch_um / 2.0,
        );
        BeamProfile { peak_fluence: self.beam.peak_fluence, spot_radius_um: self.beam.radius_um, center }
    }
}
