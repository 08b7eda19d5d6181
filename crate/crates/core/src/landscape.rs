//! Metastable magnetization states of the anisotropy landscape.
//!
//! Minima are located by multi-start projected-gradient descent on the unit
//! sphere (backtracking line search) followed by Newton polishing in the
//! tangent plane. Each basin is labelled by the sign pattern of the nearest
//! ⟨111⟩ body diagonal, so labels stay put when parameters are swept.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::magnetics::{tangent_basis, EnergyModel, FilmFrame, MaterialParams, PhotoAnisotropyState};
use crate::math::{abs, sqrt, to_rad, PI};
use crate::{Error, Result, Vec3};

/// Basin label keyed by the nearest ⟨111⟩ diagonal.
///
/// The four states with mx > 0 carry the garnet domain names; the `Down`
/// variants are their inverses (−m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainLabel {
    /// Near [1-11].
    LPlus,
    LPlusDown,
    /// Near [11-1].
    LMinus,
    LMinusDown,
    /// Near [111].
    SPlus,
    SPlusDown,
    /// Near [1-1-1].
    SMinus,
    SMinusDown,
}

impl DomainLabel {
    pub const ALL: [DomainLabel; 8] = [
        DomainLabel::LPlus,
        DomainLabel::LPlusDown,
        DomainLabel::LMinus,
        DomainLabel::LMinusDown,
        DomainLabel::SPlus,
        DomainLabel::SPlusDown,
        DomainLabel::SMinus,
        DomainLabel::SMinusDown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DomainLabel::LPlus => "L+",
            DomainLabel::LPlusDown => "L+↓",
            DomainLabel::LMinus => "L-",
            DomainLabel::LMinusDown => "L-↓",
            DomainLabel::SPlus => "S+",
            DomainLabel::SPlusDown => "S+↓",
            DomainLabel::SMinus => "S-",
            DomainLabel::SMinusDown => "S-↓",
        }
    }

    /// ASCII spelling used in config and CSV files (`L+dn` for `L+↓`).
    pub fn ascii_name(self) -> &'static str {
        match self {
            DomainLabel::LPlusDown => "L+dn",
            DomainLabel::LMinusDown => "L-dn",
            DomainLabel::SPlusDown => "S+dn",
            DomainLabel::SMinusDown => "S-dn",
            l => l.name(),
        }
    }

    /// Sign pattern (±1, ±1, ±1) of the associated diagonal.
    pub fn signs(self) -> [i8; 3] {
        let base = match self {
            DomainLabel::LPlus | DomainLabel::LPlusDown => [1, -1, 1],
            DomainLabel::LMinus | DomainLabel::LMinusDown => [1, 1, -1],
            DomainLabel::SPlus | DomainLabel::SPlusDown => [1, 1, 1],
            DomainLabel::SMinus | DomainLabel::SMinusDown => [1, -1, -1],
        };
        if self.is_down() {
            [-base[0], -base[1], -base[2]]
        } else {
            base
        }
    }

    pub fn is_down(self) -> bool {
        matches!(
            self,
            DomainLabel::LPlusDown
                | DomainLabel::LMinusDown
                | DomainLabel::SPlusDown
                | DomainLabel::SMinusDown
        )
    }

    /// Unit vector along the associated body diagonal.
    pub fn diagonal(self) -> Vec3 {
        let s = self.signs();
        Vec3::new(s[0] as f64, s[1] as f64, s[2] as f64) / sqrt(3.0)
    }

    /// Label of the ⟨111⟩ diagonal nearest to `m` (a zero component counts as positive).
    pub fn nearest_diagonal(m: Vec3) -> DomainLabel {
        let s = |v: f64| if v < 0.0 { -1 } else { 1 };
        Self::from_signs([s(m.x), s(m.y), s(m.z)])
    }

    pub fn from_signs(signs: [i8; 3]) -> DomainLabel {
        *Self::ALL
            .iter()
            .find(|l| l.signs() == signs)
            .expect("every sign pattern names a diagonal")
    }

    /// Same basin with the mz sign flipped is not a label symmetry; this is
    /// the inverse state −m.
    pub fn inverse(self) -> DomainLabel {
        let s = self.signs();
        Self::from_signs([-s[0], -s[1], -s[2]])
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainLabel {
    type Err = Error;

    /// Accepts the display names plus ASCII aliases `L+dn`, `S-dn`, ...
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        for l in Self::ALL {
            let name = l.name();
            if t == name {
                return Ok(l);
            }
            if let Some(stem) = name.strip_suffix('↓') {
                if t.strip_suffix("dn") == Some(stem) {
                    return Ok(l);
                }
            }
        }
        Err(Error::Domain(alloc::format!(
            "unknown domain label '{t}' (expected one of L+, L-, S+, S-, or their inverses L+dn, L-dn, S+dn, S-dn)"
        )))
    }
}

/// A verified local minimum of the energy on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub m: Vec3,
    pub energy: f64,
    pub label: DomainLabel,
    /// Eigenvalues of the tangent-plane Hessian, ascending, erg cm⁻³.
    pub hessian_eigenvalues: [f64; 2],
}

/// Angular tolerance for merging converged start points.
pub const DEDUP_TOLERANCE_DEG: f64 = 0.5;
const MAX_ITERATIONS: usize = 20_000;
const POLISH_TOLERANCE: f64 = 1e-10;

fn sym2_eigenvalues(h: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = h[0][0] + h[1][1];
    let diff = h[0][0] - h[1][1];
    let disc = sqrt(diff * diff / 4.0 + h[0][1] * h[0][1]);
    [tr / 2.0 - disc, tr / 2.0 + disc]
}

fn retract(m: Vec3, v: Vec3) -> Vec3 {
    (m + v).normalized()
}

/// Descends from `start` to the nearest local minimum (or critical point).
pub fn descend(model: &EnergyModel, start: Vec3) -> Result<Vec3> {
    let scale = model.scale();
    let tol = POLISH_TOLERANCE * scale;
    let mut m = start.normalized();
    let mut step = 0.1 / scale;
    for _ in 0..MAX_ITERATIONS {
        let g = model.tangent_gradient(m);
        let gn = g.norm();
        if gn < tol {
            return Ok(m);
        }
        let e0 = model.energy(m);
        if gn < 1e-2 * scale {
            let (e1, e2) = tangent_basis(m);
            let h = model.tangent_hessian(m, e1, e2);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            if h[0][0] > 0.0 && det > 0.0 {
                let (g1, g2) = (g.dot(e1), g.dot(e2));
                let d1 = -(h[1][1] * g1 - h[0][1] * g2) / det;
                let d2 = -(-h[1][0] * g1 + h[0][0] * g2) / det;
                let mut v = e1 * d1 + e2 * d2;
                let vn = v.norm();
                if vn > 0.2 {
                    v = v * (0.2 / vn);
                }
                let trial = retract(m, v);
                if model.energy(trial) <= e0 + 1e-13 * scale
                    && model.tangent_gradient(trial).norm() < gn
                {
                    m = trial;
                    continue;
                }
            }
        }
        // Armijo backtracking along the negative tangent gradient
        let mut t = step;
        loop {
            let trial = retract(m, g * -t);
            if model.energy(trial) <= e0 - 1e-4 * t * gn * gn {
                m = trial;
                step = t * 2.0;
                break;
            }
            t *= 0.5;
            if t * gn < 1e-16 {
                // no representable descent left; accept the point if its
                // gradient is already small on the spec scale
                if gn < 1e-7 * scale {
                    return Ok(m);
                }
                return Err(Error::NoConvergence { start: start.to_array(), iterations: MAX_ITERATIONS });
            }
        }
    }
    Err(Error::NoConvergence { start: start.to_array(), iterations: MAX_ITERATIONS })
}

/// Quasi-uniform points on the sphere (Fibonacci lattice).
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = PI * (3.0 - sqrt(5.0));
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = sqrt(1.0 - z * z);
            let phi = golden * i as f64;
            Vec3::new(r * libm::cos(phi), r * libm::sin(phi), z)
        })
        .collect()
}

/// Builds an [`Equilibrium`] at `m` if it is a strict local minimum.
pub fn equilibrium_at(model: &EnergyModel, m: Vec3) -> Option<Equilibrium> {
    let (e1, e2) = tangent_basis(m);
    let eig = sym2_eigenvalues(model.tangent_hessian(m, e1, e2));
    if eig[0] <= 1e-9 * model.scale() {
        return None;
    }
    Some(Equilibrium {
        m,
        energy: model.energy(m),
        label: DomainLabel::nearest_diagonal(m),
        hessian_eigenvalues: eig,
    })
}

/// All local minima of an arbitrary energy model, sorted by energy.
pub fn find_minima_of(model: &EnergyModel) -> Result<Vec<Equilibrium>> {
    let mut starts: Vec<Vec3> = DomainLabel::ALL.iter().map(|l| l.diagonal()).collect();
    starts.extend(fibonacci_sphere(48));
    let tol = to_rad(DEDUP_TOLERANCE_DEG);
    let mut found: Vec<Equilibrium> = Vec::new();
    for s in starts {
        let m = descend(model, s)?;
        let Some(eq) = equilibrium_at(model, m) else { continue };
        if found.iter().all(|f| f.m.angle_to(eq.m) >= tol) {
            found.push(eq);
        }
    }
    found.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.label.cmp(&b.label)));
    Ok(found)
}

/// Metastable states at zero photo-excitation under the applied field `h`.
pub fn find_minima(params: &MaterialParams, frame: &FilmFrame, h: Vec3) -> Result<Vec<Equilibrium>> {
    params.validate()?;
    find_minima_of(&EnergyModel::new(params, frame, h, &PhotoAnisotropyState::NONE))
}

/// Basin of the nearest minimum (smallest angle; ties by energy, then label).
pub fn classify(m: Vec3, minima: &[Equilibrium]) -> DomainLabel {
    let mut best: Option<(&Equilibrium, f64)> = None;
    for eq in minima {
        let a = m.angle_to(eq.m);
        best = match best {
            None => Some((eq, a)),
            Some((b, ba)) => {
                let better = if abs(a - ba) > 1e-12 {
                    a < ba
                } else if eq.energy != b.energy {
                    eq.energy < b.energy
                } else {
                    eq.label < b.label
                };
                if better {
                    Some((eq, a))
                } else {
                    Some((b, ba))
                }
            }
        };
    }
    match best {
        Some((eq, _)) => eq.label,
        None => DomainLabel::nearest_diagonal(m),
    }
}

/// Looks up the minimum carrying `label`.
pub fn minimum_for(label: DomainLabel, minima: &[Equilibrium]) -> Option<&Equilibrium> {
    minima.iter().find(|e| e.label == label)
}

/// Small-oscillation frequency (GHz) of the model about the unit vector `m`.
///
/// Curvature formula: ω = (γ/Ms)·√det(H_t), with H_t the Hessian of the
/// energy on the sphere in an orthonormal tangent basis. This is the
/// Smit–Beljers expression with the 1/sinθ factor absorbed into the basis.
pub fn fmr_frequency_of(model: &EnergyModel, gamma: f64, m: Vec3) -> Result<f64> {
    let (e1, e2) = tangent_basis(m);
    let h = model.tangent_hessian(m, e1, e2);
    let eig = sym2_eigenvalues(h);
    let scale = model.scale();
    let tiny = 1e-12 * scale;
    if eig[0] < -tiny || eig[1] < -tiny {
        return Err(Error::Domain(alloc::format!(
            "not a minimum: tangent curvatures {:e}, {:e}",
            eig[0], eig[1]
        )));
    }
    let det = (eig[0] * eig[1]).max(0.0);
    let omega = gamma * sqrt(det) / model.ms;
    Ok(omega / (2.0 * PI) / 1e9)
}

/// FMR frequency (GHz) about a zero-field equilibrium.
pub fn fmr_frequency(params: &MaterialParams, frame: &FilmFrame, eq: &Equilibrium) -> Result<f64> {
    let model = EnergyModel::new(params, frame, Vec3::ZERO, &PhotoAnisotropyState::NONE);
    fmr_frequency_of(&model, params.gamma, eq.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};
    use libm::acos;

    fn cubic_only() -> MaterialParams {
        MaterialParams { ku: 0.0, miscut_deg: 0.0, ..MaterialParams::garnet() }
    }

    #[test]
    fn label_names_round_trip() {
        for l in DomainLabel::ALL {
            assert_eq!(l.name().parse::<DomainLabel>().unwrap(), l);
            assert_eq!(DomainLabel::nearest_diagonal(l.diagonal()), l);
            assert_eq!(l.inverse().inverse(), l);
        }
        assert_eq!("S-dn".parse::<DomainLabel>().unwrap(), DomainLabel::SMinusDown);
        assert!("Q+".parse::<DomainLabel>().is_err());
    }

    #[test]
    fn label_diagonals_match_garnet_naming() {
        assert_eq!(DomainLabel::LPlus.signs(), [1, -1, 1]);
        assert_eq!(DomainLabel::LMinus.signs(), [1, 1, -1]);
        assert_eq!(DomainLabel::SPlus.signs(), [1, 1, 1]);
        assert_eq!(DomainLabel::SMinus.signs(), [1, -1, -1]);
    }

    #[test]
    fn pure_cubic_minima_on_diagonals() {
        let p = cubic_only();
        let minima = find_minima(&p, &FilmFrame::from_params(&p), Vec3::ZERO).unwrap();
        assert_eq!(minima.len(), 8);
        for eq in &minima {
            assert!(eq.m.angle_to(eq.label.diagonal()) < 1e-8);
            assert!((eq.energy - p.k1 / 3.0).abs() < 1e-9);
        }
        let mut labels: Vec<_> = minima.iter().map(|e| e.label).collect();
        labels.sort();
        assert_eq!(labels, DomainLabel::ALL.to_vec());
    }

    #[test]
    fn garnet_minima_are_verified() {
        let p = MaterialParams::garnet();
        let frame = FilmFrame::from_params(&p);
        let minima = find_minima(&p, &frame, Vec3::ZERO).unwrap();
        assert_eq!(minima.len(), 8);
        let model = EnergyModel::new(&p, &frame, Vec3::ZERO, &PhotoAnisotropyState::NONE);
        for eq in &minima {
            assert!(model.tangent_gradient(eq.m).norm() < 1e-6 * p.k1.abs());
            assert!(eq.hessian_eigenvalues[0] > 0.0);
            // tilted toward the film plane: |mz| below the diagonal's 1/√3
            assert!(eq.m.z.abs() < 1.0 / sqrt(3.0));
            assert!(eq.m.angle_to(eq.label.diagonal()).to_degrees() < 20.0);
        }
        for w in minima.windows(2) {
            assert!(w[0].energy <= w[1].energy);
        }
    }

    #[test]
    fn classify_examples() {
        let p = MaterialParams::garnet();
        let minima = find_minima(&p, &FilmFrame::from_params(&p), Vec3::ZERO).unwrap();
        for eq in &minima {
            assert_eq!(classify(eq.m, &minima), eq.label);
        }
        assert_eq!(classify(Vec3::new(1.0, 1.0, 1.0).normalized(), &minima), DomainLabel::SPlus);
        assert_eq!(classify(Vec3::new(1.0, -1.0, 1.0), &[]), DomainLabel::LPlus);
    }

    #[test]
    fn fmr_pure_cubic_matches_stiffness_field() {
        let p = cubic_only();
        let frame = FilmFrame::from_params(&p);
        let minima = find_minima(&p, &frame, Vec3::ZERO).unwrap();
        let eq = minimum_for(DomainLabel::SPlus, &minima).unwrap();
        let f = fmr_frequency(&p, &frame, eq).unwrap();
        let expected = p.gamma / (2.0 * PI) * (4.0 / 3.0) * p.k1.abs() / p.ms() / 1e9;
        assert!((f - expected).abs() / expected < 1e-9, "{f} vs {expected}");
        assert!((1e3 / f - 228.0).abs() < 2.0);
    }

    #[test]
    fn fmr_flat_landscape_is_zero() {
        let p = MaterialParams { k1: 0.0, ku: 0.0, ..cubic_only() };
        let frame = FilmFrame::from_params(&p);
        let eq = Equilibrium { m: Vec3::X, energy: 0.0, label: DomainLabel::LPlus, hessian_eigenvalues: [0.0; 2] };
        assert_eq!(fmr_frequency(&p, &frame, &eq).unwrap(), 0.0);
    }

    #[test]
    fn fmr_thin_film_kittel_limit() {
        // in-plane magnetized film with an in-plane uniaxial stiffness Hk:
        // f = γ/2π √(Hk (Hk + 4πMs)); realize Hk with an applied field
        let p = MaterialParams { k1: 0.0, ku: 0.0, include_demag: true, ..cubic_only() };
        let frame = FilmFrame::from_params(&p);
        let h = 500.0;
        let model = EnergyModel::new(&p, &frame, Vec3::new(h, 0.0, 0.0), &PhotoAnisotropyState::NONE);
        let f = fmr_frequency_of(&model, p.gamma, Vec3::X).unwrap();
        let kittel = p.gamma / (2.0 * PI) * sqrt(h * (h + p.four_pi_ms)) / 1e9;
        assert!((f - kittel).abs() / kittel < 1e-12);
    }

    #[test]
    fn fmr_rejects_saddle() {
        let p = cubic_only();
        let frame = FilmFrame::from_params(&p);
        // [110] is a saddle of the K1 < 0 cubic landscape
        let m = Vec3::new(1.0, 1.0, 0.0).normalized();
        let eq = Equilibrium { m, energy: 0.0, label: DomainLabel::SPlus, hessian_eigenvalues: [0.0; 2] };
        assert!(matches!(fmr_frequency(&p, &frame, &eq), Err(Error::Domain(_))));
    }

    /// Independent oracle: second derivatives in spherical angles about a
    /// pole rotated onto the equator of a local frame.
    fn spherical_fd_frequency(model: &EnergyModel, gamma: f64, m: Vec3) -> f64 {
        let (a, b) = tangent_basis(m);
        // local frame: equator through m, pole along `b`
        let point = |theta: f64, phi: f64| {
            // theta measured from b, phi from m toward a
            let s = sin(theta);
            m * (s * cos(phi)) + a * (s * sin(phi)) + b * cos(theta)
        };
        let e = |t: f64, p: f64| model.energy(point(t, p));
        let h = 1e-4;
        let t0 = PI / 2.0;
        let ett = (e(t0 + h, 0.0) - 2.0 * e(t0, 0.0) + e(t0 - h, 0.0)) / (h * h);
        let epp = (e(t0, h) - 2.0 * e(t0, 0.0) + e(t0, -h)) / (h * h);
        let etp = (e(t0 + h, h) - e(t0 + h, -h) - e(t0 - h, h) + e(t0 - h, -h)) / (4.0 * h * h);
        let sin_t = sin(t0);
        gamma / model.ms * sqrt(ett * epp - etp * etp) / sin_t / (2.0 * PI) / 1e9
    }

    #[test]
    fn fmr_matches_spherical_finite_differences() {
        let p = MaterialParams::garnet();
        let frame = FilmFrame::from_params(&p);
        let minima = find_minima(&p, &frame, Vec3::ZERO).unwrap();
        let model = EnergyModel::new(&p, &frame, Vec3::ZERO, &PhotoAnisotropyState::NONE);
        for eq in &minima {
            let f = fmr_frequency(&p, &frame, eq).unwrap();
            let oracle = spherical_fd_frequency(&model, p.gamma, eq.m);
            assert!((f - oracle).abs() / oracle < 1e-5, "{f} {oracle}");
        }
    }

    #[test]
    fn fmr_independent_of_list_order() {
        let p = MaterialParams::garnet();
        let frame = FilmFrame::from_params(&p);
        let mut minima = find_minima(&p, &frame, Vec3::ZERO).unwrap();
        let before: Vec<f64> = minima.iter().map(|e| fmr_frequency(&p, &frame, e).unwrap()).collect();
        minima.reverse();
        let mut after: Vec<f64> = minima.iter().map(|e| fmr_frequency(&p, &frame, e).unwrap()).collect();
        after.reverse();
        assert_eq!(before, after);
    }

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let pts = fibonacci_sphere(48);
        assert_eq!(pts.len(), 48);
        let mut min_sep = PI;
        for (i, a) in pts.iter().enumerate() {
            assert!(a.is_unit());
            for b in &pts[i + 1..] {
                min_sep = min_sep.min(acos(a.dot(*b).clamp(-1.0, 1.0)));
            }
        }
        assert!(min_sep.to_degrees() > 15.0);
    }
}
