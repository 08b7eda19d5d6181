//! Heat, photon and per-bit energy budgets of a single pump pulse.

use crate::{Error, Result};

/// Fixed unit conversions (SI-exact).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub joule_per_ev: f64,
    pub cm3_per_nm3: f64,
    pub joule_per_mj: f64,
    pub attojoule_per_joule: f64,
}

pub const CONSTANTS: Constants = Constants {
    joule_per_ev: 1.602176634e-19,
    cm3_per_nm3: 1e-21,
    joule_per_mj: 1e-3,
    attojoule_per_joule: 1e18,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleThermo {
    /// cm.
    pub thickness_d: f64,
    /// J mol⁻¹ K⁻¹.
    pub heat_capacity_c: f64,
    /// g mol⁻¹.
    pub molar_mass_m: f64,
    /// g cm⁻³.
    pub density_rho: f64,
    /// eV.
    pub photon_energy: f64,
}

impl SampleThermo {
    pub const fn garnet() -> Self {
        SampleThermo {
            thickness_d: 7.5e-4,
            heat_capacity_c: 430.0,
            molar_mass_m: 706.0,
            density_rho: 7.12,
            photon_energy: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("thickness", self.thickness_d),
            ("heat capacity", self.heat_capacity_c),
            ("molar mass", self.molar_mass_m),
            ("density", self.density_rho),
            ("photon energy", self.photon_energy),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(alloc::format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for SampleThermo {
    fn default() -> Self {
        Self::garnet()
    }
}

fn check_absorption(a: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::Domain(alloc::format!("absorption must lie in [0, 1], got {a}")));
    }
    Ok(())
}

/// ΔT = a·I·m / (C·d·ρ), K, for fluence I in mJ cm⁻².
pub fn temperature_rise(a: f64, fluence: f64, thermo: &SampleThermo) -> Result<f64> {
    check_absorption(a)?;
    thermo.validate()?;
    let heat = a * fluence * CONSTANTS.joule_per_mj / thermo.thickness_d;
    Ok(heat * thermo.molar_mass_m / (thermo.heat_capacity_c * thermo.density_rho))
}

/// Absorbed energy per volume a·I/d, J cm⁻³.
pub fn heat_density(a: f64, fluence: f64, thickness_cm: f64) -> Result<f64> {
    check_absorption(a)?;
    if !(thickness_cm > 0.0) {
        return Err(Error::Domain(alloc::format!("thickness must be positive, got {thickness_cm}")));
    }
    Ok(a * fluence * CONSTANTS.joule_per_mj / thickness_cm)
}

/// Absorbed photons per area a·I/ħω, cm⁻².
pub fn photon_areal_density(a: f64, fluence: f64, photon_energy_ev: f64) -> Result<f64> {
    check_absorption(a)?;
    if !(photon_energy_ev > 0.0) {
        return Err(Error::Domain(alloc::format!("photon energy must be positive, got {photon_energy_ev}")));
    }
    Ok(a * fluence * CONSTANTS.joule_per_mj / (photon_energy_ev * CONSTANTS.joule_per_ev))
}

/// Absorbed photons per volume, cm⁻³.
pub fn photon_volume_density(a: f64, fluence: f64, photon_energy_ev: f64, thickness_cm: f64) -> Result<f64> {
    if !(thickness_cm > 0.0) {
        return Err(Error::Domain(alloc::format!("thickness must be positive, got {thickness_cm}")));
    }
    Ok(photon_areal_density(a, fluence, photon_energy_ev)? / thickness_cm)
}

/// Heat dissipated in a bit of `dims_nm` (nm × nm × nm), aJ.
pub fn bit_dissipation(heat_density_j_cm3: f64, dims_nm: [f64; 3]) -> Result<f64> {
    if dims_nm.iter().any(|d| !(*d >= 0.0)) {
        return Err(Error::Domain("bit dimensions must be non-negative".into()));
    }
    let volume = dims_nm[0] * dims_nm[1] * dims_nm[2] * CONSTANTS.cm3_per_nm3;
    Ok(heat_density_j_cm3 * volume * CONSTANTS.attojoule_per_joule)
}

/// All four budgets at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBudget {
    pub temperature_rise_k: f64,
    pub heat_density_j_cm3: f64,
    pub photons_cm2: f64,
    pub photons_cm3: f64,
    pub bit_dissipation_aj: f64,
}

pub fn energy_budget(a: f64, fluence: f64, thermo: &SampleThermo, bit_dims_nm: [f64; 3]) -> Result<EnergyBudget> {
    let heat = heat_density(a, fluence, thermo.thickness_d)?;
    Ok(EnergyBudget {
        temperature_rise_k: temperature_rise(a, fluence, thermo)?,
        heat_density_j_cm3: heat,
        photons_cm2: photon_areal_density(a, fluence, thermo.photon_energy)?,
        photons_cm3: photon_volume_density(a, fluence, thermo.photon_energy, thermo.thickness_d)?,
        bit_dissipation_aj: bit_dissipation(heat, bit_dims_nm)?,
    })
}
