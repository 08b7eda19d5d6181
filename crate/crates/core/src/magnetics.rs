//! Free-energy density of the garnet macrospin and the effective field.
//!
//! Energy terms (erg cm⁻³, `m` a unit vector in the crystal frame):
//!
//! | term      | density                         |
//! |-----------|---------------------------------|
//! | cubic     | K1 (mx²my² + my²mz² + mz²mx²)   |
//! | uniaxial  | −Ku (m·u)²                      |
//! | demag     | 2π Ms² (m·n)²  (optional)       |
//! | Zeeman    | −Ms m·H                         |
//! | photo     | A cos 2φ · mx my                |
//!
//! The uniaxial sign convention makes a negative `Ku` (the garnet value) an
//! easy-plane term. The demagnetizing term is off by default: `Ku` is taken
//! to be the effective, shape-inclusive constant.

use crate::math::{abs, cos, sin, to_rad, PI};
use crate::{Error, Result, Vec3};

/// Symmetric 3×3 matrix stored row-major.
pub type Mat3 = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Cubic anisotropy constant, erg cm⁻³.
    pub k1: f64,
    /// Uniaxial anisotropy constant, erg cm⁻³.
    pub ku: f64,
    /// 4π Ms in G.
    pub four_pi_ms: f64,
    /// Gilbert damping.
    pub alpha: f64,
    /// Gyromagnetic ratio, rad s⁻¹ Oe⁻¹.
    pub gamma: f64,
    /// Tilt of the film normal away from [001], degrees.
    pub miscut_deg: f64,
    /// In-plane direction of the tilt, degrees from [100] toward [010].
    pub miscut_azimuth_deg: f64,
    pub include_demag: bool,
    /// Metadata only.
    pub neel_temperature_k: f64,
}

impl MaterialParams {
    /// Room-temperature YIG:Co film constants.
    pub const fn garnet() -> Self {
        MaterialParams {
            k1: -8.4e3,
            ku: -2.5e3,
            four_pi_ms: 90.0,
            alpha: 0.2,
            gamma: 1.76e7,
            miscut_deg: 4.0,
            miscut_azimuth_deg: 90.0,
            include_demag: false,
            neel_temperature_k: 445.0,
        }
    }

    /// Saturation magnetization in emu cm⁻³.
    pub fn ms(&self) -> f64 {
        self.four_pi_ms / (4.0 * PI)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.k1,
            self.ku,
            self.four_pi_ms,
            self.alpha,
            self.gamma,
            self.miscut_deg,
            self.miscut_azimuth_deg,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("material parameters must be finite".into()));
        }
        if self.four_pi_ms <= 0.0 {
            return Err(Error::Domain("material.four_pi_ms must be > 0".into()));
        }
        if self.alpha < 0.0 {
            return Err(Error::Domain("material.alpha must be >= 0".into()));
        }
        if self.gamma <= 0.0 {
            return Err(Error::Domain("material.gamma must be > 0".into()));
        }
        if !(0.0..90.0).contains(&self.miscut_deg) {
            return Err(Error::Domain("material.miscut_deg must be in [0, 90)".into()));
        }
        Ok(())
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::garnet()
    }
}

/// Film geometry derived from the substrate miscut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilmFrame {
    pub film_normal: Vec3,
    pub uniaxial_axis: Vec3,
}

impl FilmFrame {
    /// [001] rotated by `miscut_deg` toward the in-plane direction at `azimuth_deg`.
    pub fn from_miscut(miscut_deg: f64, azimuth_deg: f64) -> Self {
        let (t, a) = (to_rad(miscut_deg), to_rad(azimuth_deg));
        let normal = if miscut_deg == 0.0 {
            Vec3::Z
        } else {
            Vec3::new(sin(t) * cos(a), sin(t) * sin(a), cos(t))
        };
        FilmFrame { film_normal: normal, uniaxial_axis: normal }
    }

    pub fn from_params(p: &MaterialParams) -> Self {
        Self::from_miscut(p.miscut_deg, p.miscut_azimuth_deg)
    }
}

/// Instantaneous photo-induced anisotropy: `amplitude_a` folds the coupling
/// and the pump intensity into one scalar (erg cm⁻³).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhotoAnisotropyState {
    pub amplitude_a: f64,
    pub polarization_angle_deg: f64,
}

impl PhotoAnisotropyState {
    pub const NONE: PhotoAnisotropyState =
        PhotoAnisotropyState { amplitude_a: 0.0, polarization_angle_deg: 0.0 };

    pub fn new(amplitude_a: f64, polarization_angle_deg: f64) -> Self {
        PhotoAnisotropyState { amplitude_a, polarization_angle_deg }
    }

    /// Coefficient of mx·my in the energy, A cos 2φ.
    pub fn coefficient(&self) -> f64 {
        self.amplitude_a * cos(2.0 * to_rad(self.polarization_angle_deg))
    }
}

fn require_unit(name: &str, v: Vec3) -> Result<()> {
    if v.is_unit() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(alloc::format!(
            "{name} must be a unit vector, |{name}| = {}",
            v.norm()
        )))
    }
}

pub fn cubic_energy(m: Vec3, k1: f64) -> Result<f64> {
    require_unit("m", m)?;
    Ok(cubic(m, k1))
}

pub fn uniaxial_energy(m: Vec3, axis: Vec3, ku: f64) -> Result<f64> {
    require_unit("m", m)?;
    require_unit("axis", axis)?;
    Ok(-ku * m.dot(axis) * m.dot(axis))
}

pub fn zeeman_energy(m: Vec3, h: Vec3, ms: f64) -> Result<f64> {
    require_unit("m", m)?;
    Ok(-ms * m.dot(h))
}

pub fn demag_energy(m: Vec3, film_normal: Vec3, ms: f64) -> Result<f64> {
    require_unit("m", m)?;
    require_unit("film_normal", film_normal)?;
    let p = m.dot(film_normal);
    Ok(2.0 * PI * ms * ms * p * p)
}

pub fn photo_anisotropy_energy(m: Vec3, state: &PhotoAnisotropyState) -> Result<f64> {
    require_unit("m", m)?;
    Ok(state.coefficient() * m.x * m.y)
}

pub fn total_energy(
    m: Vec3,
    params: &MaterialParams,
    frame: &FilmFrame,
    h_applied: Vec3,
    photo: &PhotoAnisotropyState,
) -> Result<f64> {
    require_unit("m", m)?;
    Ok(EnergyModel::new(params, frame, h_applied, photo).energy(m))
}

/// −(1/Ms) ∂F/∂m, not projected onto the tangent plane.
pub fn effective_field(
    m: Vec3,
    params: &MaterialParams,
    frame: &FilmFrame,
    h_applied: Vec3,
    photo: &PhotoAnisotropyState,
) -> Result<Vec3> {
    require_unit("m", m)?;
    Ok(EnergyModel::new(params, frame, h_applied, photo).effective_field(m))
}

#[inline]
fn cubic(m: Vec3, k1: f64) -> f64 {
    let (x2, y2, z2) = (m.x * m.x, m.y * m.y, m.z * m.z);
    k1 * (x2 * y2 + y2 * z2 + z2 * x2)
}

/// All energy terms evaluated at one instant, with analytic gradient and
/// Hessian. Evaluation is unchecked so integrators can call it on the
/// slightly non-unit intermediate stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyModel {
    pub k1: f64,
    pub ku: f64,
    pub uniaxial_axis: Vec3,
    pub ms: f64,
    pub include_demag: bool,
    pub film_normal: Vec3,
    pub field: Vec3,
    /// A cos 2φ.
    pub photo_coefficient: f64,
}

impl EnergyModel {
    pub fn new(
        params: &MaterialParams,
        frame: &FilmFrame,
        field: Vec3,
        photo: &PhotoAnisotropyState,
    ) -> Self {
        EnergyModel {
            k1: params.k1,
            ku: params.ku,
            uniaxial_axis: frame.uniaxial_axis,
            ms: params.ms(),
            include_demag: params.include_demag,
            film_normal: frame.film_normal,
            field,
            photo_coefficient: photo.coefficient(),
        }
    }

    pub fn with_photo_coefficient(mut self, c: f64) -> Self {
        self.photo_coefficient = c;
        self
    }

    pub fn with_field(mut self, h: Vec3) -> Self {
        self.field = h;
        self
    }

    fn demag_coefficient(&self) -> f64 {
        if self.include_demag {
            2.0 * PI * self.ms * self.ms
        } else {
            0.0
        }
    }

    pub fn energy(&self, m: Vec3) -> f64 {
        let pu = m.dot(self.uniaxial_axis);
        let pn = m.dot(self.film_normal);
        cubic(m, self.k1) - self.ku * pu * pu + self.demag_coefficient() * pn * pn
            - self.ms * m.dot(self.field)
            + self.photo_coefficient * m.x * m.y
    }

    pub fn gradient(&self, m: Vec3) -> Vec3 {
        let (x2, y2, z2) = (m.x * m.x, m.y * m.y, m.z * m.z);
        let two_k1 = 2.0 * self.k1;
        let cubic = Vec3::new(
            two_k1 * m.x * (y2 + z2),
            two_k1 * m.y * (x2 + z2),
            two_k1 * m.z * (x2 + y2),
        );
        let uni = self.uniaxial_axis * (-2.0 * self.ku * m.dot(self.uniaxial_axis));
        let demag = self.film_normal * (2.0 * self.demag_coefficient() * m.dot(self.film_normal));
        let zeeman = self.field * (-self.ms);
        let c = self.photo_coefficient;
        let photo = Vec3::new(c * m.y, c * m.x, 0.0);
        cubic + uni + demag + zeeman + photo
    }

    pub fn hessian(&self, m: Vec3) -> Mat3 {
        let (x, y, z) = (m.x, m.y, m.z);
        let k = 2.0 * self.k1;
        let mut h = [
            [k * (y * y + z * z), 2.0 * k * x * y, 2.0 * k * x * z],
            [2.0 * k * x * y, k * (x * x + z * z), 2.0 * k * y * z],
            [2.0 * k * x * z, 2.0 * k * y * z, k * (x * x + y * y)],
        ];
        let u = self.uniaxial_axis.to_array();
        let n = self.film_normal.to_array();
        let d = 2.0 * self.demag_coefficient();
        for (i, row) in h.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += -2.0 * self.ku * u[i] * u[j] + d * n[i] * n[j];
            }
        }
        h[0][1] += self.photo_coefficient;
        h[1][0] += self.photo_coefficient;
        h
    }

    pub fn effective_field(&self, m: Vec3) -> Vec3 {
        self.gradient(m) * (-1.0 / self.ms)
    }

    /// Gradient projected onto the tangent plane at the unit vector `m`.
    pub fn tangent_gradient(&self, m: Vec3) -> Vec3 {
        self.gradient(m).reject(m)
    }

    /// Riemannian Hessian of the energy on the unit sphere in the orthonormal
    /// tangent basis (e1, e2) at `m`.
    pub fn tangent_hessian(&self, m: Vec3, e1: Vec3, e2: Vec3) -> [[f64; 2]; 2] {
        let h = self.hessian(m);
        let radial = m.dot(self.gradient(m));
        let quad = |a: Vec3, b: Vec3| {
            let (a, b) = (a.to_array(), b.to_array());
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += a[i] * h[i][j] * b[j];
                }
            }
            s
        };
        let h12 = quad(e1, e2);
        [[quad(e1, e1) - radial, h12], [h12, quad(e2, e2) - radial]]
    }

    /// Characteristic energy density used to scale convergence tolerances.
    pub fn scale(&self) -> f64 {
        let s = abs(self.k1)
            + abs(self.ku)
            + self.demag_coefficient()
            + self.ms * self.field.norm()
            + abs(self.photo_coefficient);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }
}

/// Orthonormal tangent basis at the unit vector `m`.
pub fn tangent_basis(m: Vec3) -> (Vec3, Vec3) {
    let e1 = m.any_orthogonal();
    let e2 = m.cross(e1);
    (e1, e2)
}
