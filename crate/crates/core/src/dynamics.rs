//! Landau–Lifshitz–Gilbert dynamics of the macrospin.
//!
//! dm/dt = −γ/(1+α²) [m × H + α m × (m × H)], integrated with classical
//! fourth-order Runge–Kutta and renormalized after every step. Time is in
//! picoseconds throughout.

use alloc::vec::Vec;

use crate::landscape::{classify, descend, equilibrium_at, find_minima, minimum_for, DomainLabel, Equilibrium};
use crate::magnetics::{EnergyModel, FilmFrame, MaterialParams, PhotoAnisotropyState};
use crate::math::{exp, log, sqrt, to_rad};
use crate::photoexcitation::{PhotoSchedule, PumpPulse, SpectralModel};
use crate::{Error, Result, Vec3};

/// Largest accepted time step, ps.
pub const MAX_DT_PS: f64 = 0.1;
/// Minimum residence in the final basin before a verdict is issued, ps.
pub const RESIDENCE_PS: f64 = 100.0;
/// Angular distance from the final minimum that counts as stabilized.
pub const STABILIZATION_DEG: f64 = 5.0;
/// Window of the rise-time fit, ps.
pub const FIT_WINDOW_PS: f64 = 150.0;
const ENERGY_TOLERANCE: f64 = 1e-6;

/// LLG right-hand side in ps⁻¹ for γ in rad s⁻¹ Oe⁻¹ and H in Oe.
pub fn llg_rhs(m: Vec3, h_eff: Vec3, alpha: f64, gamma: f64) -> Vec3 {
    let pre = -gamma * 1e-12 / (1.0 + alpha * alpha);
    let mxh = m.cross(h_eff);
    (mxh + m.cross(mxh) * alpha) * pre
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub m: Vec<Vec3>,
    /// Total energy including the instantaneous photo term, erg cm⁻³.
    pub energies: Vec<f64>,
    pub labels: Vec<DomainLabel>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn push(&mut self, t: f64, m: Vec3, e: f64, label: DomainLabel) {
        self.times.push(t);
        self.m.push(m);
        self.energies.push(e);
        self.labels.push(label);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchSettings {
    pub t_end_ps: f64,
    pub dt_ps: f64,
    /// Keep every n-th step in the trajectory.
    pub sample_stride: usize,
}

impl Default for SwitchSettings {
    fn default() -> Self {
        SwitchSettings { t_end_ps: 1000.0, dt_ps: 0.1, sample_stride: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Switched,
    NotSwitched,
    /// The label was still changing within the last [`RESIDENCE_PS`].
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Switched => "switched",
            Verdict::NotSwitched => "not-switched",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchOutcome {
    pub initial_label: DomainLabel,
    pub final_label: DomainLabel,
    pub verdict: Verdict,
    /// Entry time into the final basin, set when switched.
    pub crossing_time_ps: Option<f64>,
    /// Time after which m stays within 5° of the final minimum.
    pub stabilization_time_ps: Option<f64>,
    /// Rise time of m_z over the first 150 ps, set when switched and fittable.
    pub fitted_tau_ps: Option<f64>,
    /// max |m_z(t) − m_z(0)|.
    pub max_abs_dmz: f64,
    pub final_m: Vec3,
}

impl SwitchOutcome {
    pub fn switched(&self) -> bool {
        self.verdict == Verdict::Switched
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiseFit {
    pub tau_ps: f64,
    pub amplitude: f64,
    /// Coefficient of determination.
    pub r_squared: f64,
}

/// Material, frame and zero-field minima bundled for repeated runs.
#[derive(Debug, Clone)]
pub struct Simulator {
    pub params: MaterialParams,
    pub frame: FilmFrame,
    pub minima: Vec<Equilibrium>,
}

impl Simulator {
    pub fn new(params: MaterialParams, frame: FilmFrame) -> Result<Self> {
        params.validate()?;
        let minima = find_minima(&params, &frame, Vec3::ZERO)?;
        Ok(Simulator { params, frame, minima })
    }

    fn model(&self, h: Vec3) -> EnergyModel {
        EnergyModel::new(&self.params, &self.frame, h, &PhotoAnisotropyState::NONE)
    }

    pub fn minimum(&self, label: DomainLabel) -> Result<&Equilibrium> {
        minimum_for(label, &self.minima)
            .ok_or_else(|| Error::Domain(alloc::format!("{label} is not a metastable state of this material")))
    }

    /// Integrates from `m0` to `t_end_ps` under the applied field `h` and the
    /// photo `schedule`.
    pub fn integrate(
        &self,
        m0: Vec3,
        schedule: &PhotoSchedule,
        h: Vec3,
        t_end_ps: f64,
        dt_ps: f64,
        sample_stride: usize,
    ) -> Result<Trajectory> {
        if !m0.is_unit() {
            return Err(Error::Domain("initial magnetization must be a unit vector".into()));
        }
        if !(dt_ps > 0.0 && dt_ps <= MAX_DT_PS) {
            return Err(Error::Domain(alloc::format!("time step must lie in (0, {MAX_DT_PS}] ps, got {dt_ps}")));
        }
        if !(t_end_ps > 0.0 && t_end_ps.is_finite()) {
            return Err(Error::Domain(alloc::format!("end time must be > 0, got {t_end_ps}")));
        }
        let stride = sample_stride.max(1);
        let base = self.model(h);
        let (alpha, gamma) = (self.params.alpha, self.params.gamma);
        let at = |t: f64| base.with_photo_coefficient(schedule.coefficient_at(t));
        let rhs = |t: f64, m: Vec3| llg_rhs(m, at(t).effective_field(m), alpha, gamma);
        let steps = libm::ceil(t_end_ps / dt_ps - 1e-9) as usize;
        let mut traj = Trajectory::default();
        let mut m = m0;
        let mut e = at(0.0).energy(m);
        traj.push(0.0, m, e, classify(m, &self.minima));
        for i in 0..steps {
            let t = i as f64 * dt_ps;
            let t_next = ((i + 1) as f64 * dt_ps).min(t_end_ps);
            let dt = t_next - t;
            let k1 = rhs(t, m);
            let k2 = rhs(t + dt / 2.0, (m + k1 * (dt / 2.0)).normalized());
            let k3 = rhs(t + dt / 2.0, (m + k2 * (dt / 2.0)).normalized());
            let k4 = rhs(t + dt, (m + k3 * dt).normalized());
            let next = (m + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)).normalized();
            if !next.is_finite() {
                return Err(Error::Integration { time_ps: t_next, energy_increase: f64::NAN });
            }
            let model = at(t_next);
            let e_next = model.energy(next);
            if schedule.is_static_over(t, t_next) {
                let allowed = ENERGY_TOLERANCE * model.scale().max(libm::fabs(e));
                if e_next - e > allowed {
                    return Err(Error::Integration { time_ps: t_next, energy_increase: e_next - e });
                }
            }
            m = next;
            e = e_next;
            if (i + 1) % stride == 0 || i + 1 == steps {
                // snap to the nearest 1e-9 ps so sample times print cleanly
                traj.push(libm::round(t_next * 1e9) / 1e9, m, e, classify(m, &self.minima));
            }
        }
        Ok(traj)
    }

    /// Runs a single pump pulse from the `initial` state.
    pub fn simulate_switch(
        &self,
        initial: DomainLabel,
        pulse: &PumpPulse,
        spectral: &SpectralModel,
        settings: &SwitchSettings,
    ) -> Result<SwitchOutcome> {
        let schedule = pulse.schedule(spectral)?;
        self.simulate_schedule(initial, &schedule, settings)
    }

    /// Runs an arbitrary photo schedule from the `initial` state.
    pub fn simulate_schedule(
        &self,
        initial: DomainLabel,
        schedule: &PhotoSchedule,
        settings: &SwitchSettings,
    ) -> Result<SwitchOutcome> {
        let m0 = self.minimum(initial)?.m;
        let traj = self.integrate(m0, schedule, Vec3::ZERO, settings.t_end_ps, settings.dt_ps, settings.sample_stride)?;
        Ok(self.assess(initial, &traj))
    }

    /// Verdict, timing and fit of a trajectory started in `initial`.
    pub fn assess(&self, initial: DomainLabel, traj: &Trajectory) -> SwitchOutcome {
        let n = traj.len();
        let t_end = traj.times[n - 1];
        let final_label = traj.labels[n - 1];
        let final_m = traj.m[n - 1];
        let mut entry = 0;
        for i in (0..n).rev() {
            if traj.labels[i] != final_label {
                entry = i + 1;
                break;
            }
        }
        let entry_time = traj.times[entry];
        let verdict = if entry > 0 && t_end - entry_time < RESIDENCE_PS {
            Verdict::Undecided
        } else if final_label != initial {
            Verdict::Switched
        } else {
            Verdict::NotSwitched
        };
        let stabilization_time_ps = minimum_for(final_label, &self.minima).and_then(|eq| {
            let tol = to_rad(STABILIZATION_DEG);
            let mut k = None;
            for i in (0..n).rev() {
                if traj.m[i].angle_to(eq.m) >= tol {
                    break;
                }
                k = Some(i);
            }
            k.map(|i| traj.times[i])
        });
        let mz0 = traj.m[0].z;
        let max_abs_dmz = traj.m.iter().map(|m| libm::fabs(m.z - mz0)).fold(0.0, f64::max);
        let switched = verdict == Verdict::Switched;
        SwitchOutcome {
            initial_label: initial,
            final_label,
            verdict,
            crossing_time_ps: switched.then_some(entry_time),
            stabilization_time_ps,
            fitted_tau_ps: if switched { fit_rise_time(traj, Vec3::Z).ok().map(|f| f.tau_ps) } else { None },
            max_abs_dmz,
            final_m,
        }
    }

    /// Applies `h` for `t_relax_ps`, removes it, integrates for another
    /// `t_relax_ps` and polishes to the zero-field minimum.
    pub fn relax_in_field(&self, m0: Vec3, h: Vec3, t_relax_ps: f64) -> Result<Equilibrium> {
        let none = PhotoSchedule::none();
        let on = self.integrate(m0, &none, h, t_relax_ps, MAX_DT_PS, usize::MAX)?;
        let off = self.integrate(*on.m.last().unwrap_or(&m0), &none, Vec3::ZERO, t_relax_ps, MAX_DT_PS, usize::MAX)?;
        let end = *off.m.last().unwrap_or(&m0);
        let model = self.model(Vec3::ZERO);
        let m = descend(&model, end)?;
        let mut eq = equilibrium_at(&model, m).ok_or(Error::NoConvergence { start: m0.to_array(), iterations: 0 })?;
        eq.label = classify(m, &self.minima);
        Ok(eq)
    }
}

/// Free-function form of [`Simulator::integrate`].
pub fn integrate(
    m0: Vec3,
    params: &MaterialParams,
    frame: &FilmFrame,
    schedule: &PhotoSchedule,
    h: Vec3,
    t_end_ps: f64,
    dt_ps: f64,
) -> Result<Trajectory> {
    Simulator::new(*params, *frame)?.integrate(m0, schedule, h, t_end_ps, dt_ps, 1)
}

/// Least-squares fit of a(1 − e^{−t/τ}) to the displacement of m·axis over
/// the first [`FIT_WINDOW_PS`] of the trajectory.
pub fn fit_rise_time(traj: &Trajectory, axis: Vec3) -> Result<RiseFit> {
    if traj.is_empty() {
        return Err(Error::Fit("empty trajectory".into()));
    }
    let t0 = traj.times[0];
    let y0 = traj.m[0].dot(axis);
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.m)
        .filter(|(t, _)| **t - t0 <= FIT_WINDOW_PS + 1e-9)
        .map(|(t, m)| (*t - t0, m.dot(axis) - y0))
        .collect();
    fit_saturating_exponential(&pts)
}

/// Fits y = a(1 − e^{−t/τ}) to (t, y) samples.
pub fn fit_saturating_exponential(pts: &[(f64, f64)]) -> Result<RiseFit> {
    if pts.len() < 4 {
        return Err(Error::Fit("too few samples".into()));
    }
    let syy: f64 = pts.iter().map(|p| p.1 * p.1).sum();
    let mean = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let sst: f64 = pts.iter().map(|p| (p.1 - mean) * (p.1 - mean)).sum();
    if sst <= 1e-24 {
        return Err(Error::Fit("signal does not change".into()));
    }
    let sums = |ln_tau: f64| {
        let tau = exp(ln_tau);
        let (mut sb, mut sbb) = (0.0, 0.0);
        for &(t, y) in pts {
            let b = 1.0 - exp(-t / tau);
            sb += y * b;
            sbb += b * b;
        }
        (sb, sbb)
    };
    let sse = |ln_tau: f64| {
        let (sb, sbb) = sums(ln_tau);
        if sbb <= 0.0 {
            return syy;
        }
        let (a, tau) = (sb / sbb, exp(ln_tau));
        pts.iter().map(|&(t, y)| {
            let r = y - a * (1.0 - exp(-t / tau));
            r * r
        }).sum::<f64>()
    };
    let (lo, hi) = (log(0.1), log(1e4));
    let grid = 200;
    let h = (hi - lo) / grid as f64;
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=grid {
        let v = sse(lo + h * i as f64);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    if best == 0 || best == grid {
        return Err(Error::Fit("rise time outside the resolvable range".into()));
    }
    let (mut a, mut b) = (lo + h * (best - 1) as f64, lo + h * (best + 1) as f64);
    let r = (sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (sse(c), sse(d));
    while b - a > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = sse(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = sse(d);
        }
    }
    let ln_tau = (a + b) / 2.0;
    let (sb, sbb) = sums(ln_tau);
    let amplitude = sb / sbb;
    let r_squared = 1.0 - sse(ln_tau).max(0.0) / sst;
    if !(r_squared > 0.5) {
        return Err(Error::Fit(alloc::format!("signal is not a saturating rise (R² = {r_squared:.3})")));
    }
    Ok(RiseFit { tau_ps: exp(ln_tau), amplitude, r_squared })
}
