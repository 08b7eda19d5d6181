//! Subcommand implementations; each writes its files and returns a report.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use photomag_core::dynamics::Verdict;
use photomag_core::energetics::energy_budget;
use photomag_core::imaging::normalized_switched_area;
use photomag_core::landscape::{fmr_frequency, DomainLabel};
use photomag_core::photoexcitation::{calibrate_with, photo_amplitude, photo_field_magnitude};
use photomag_core::symmetry::{project_tensor, switching_energy, ChiTensor, PointGroup};
use photomag_core::Vec3;

use crate::config::RunConfig;
use crate::tables::{num, opt, Table};
use crate::error::{CliError, Result};
use crate::pgm;
use crate::provenance::header_lines;
use crate::sweep::{Context, PointResult, Variable};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub files: Vec<PathBuf>,
    /// Lines printed on stdout.
    pub summary: Vec<String>,
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    Ok(dir)
}

fn emit(ctx: &Context, report: &mut Report, name: &str, table: &Table) -> Result<()> {
    let path = out_dir(&ctx.cfg)?.join(name);
    table.write(&path, &header_lines(&ctx.cfg, name))?;
    report.files.push(path);
    Ok(())
}

fn emit_pgm(ctx: &Context, report: &mut Report, name: &str, g: &pgm::Gray) -> Result<()> {
    let path = out_dir(&ctx.cfg)?.join(name);
    pgm::write(&path, g, &header_lines(&ctx.cfg, name))?;
    report.files.push(path);
    Ok(())
}

pub fn minima(ctx: &Context) -> Result<Report> {
    let mut t = Table::new(["label", "mx", "my", "mz", "energy_erg_cm3", "fmr_GHz", "period_ps"]);
    for eq in &ctx.sim.minima {
        let f = fmr_frequency(&ctx.cfg.material, &ctx.sim.frame, eq)?;
        t.push(vec![
            eq.label.ascii_name().into(),
            num(eq.m.x),
            num(eq.m.y),
            num(eq.m.z),
            num(eq.energy),
            num(f),
            num(1000.0 / f),
        ]);
    }
    let mut r = Report { summary: vec![format!("{} minima", ctx.sim.minima.len())], ..Default::default() };
    emit(ctx, &mut r, "minima.csv", &t)?;
    Ok(r)
}

pub fn switch(ctx: &Context) -> Result<Report> {
    let pulse = ctx.pulse();
    let schedule = pulse.schedule(&ctx.spectral)?;
    let start = ctx.sim.minimum(ctx.cfg.pulse.initial)?.m;
    let s = &ctx.cfg.simulation;
    let traj = ctx.sim.integrate(start, &schedule, Vec3::ZERO, s.t_end_ps, s.dt_ps, s.sample_stride)?;
    let out = ctx.sim.assess(ctx.cfg.pulse.initial, &traj);
    let mut t = Table::new(["t_ps", "mx", "my", "mz", "energy_erg_cm3", "label"]);
    for i in 0..traj.len() {
        let m = traj.m[i];
        t.push(vec![num(traj.times[i]), num(m.x), num(m.y), num(m.z), num(traj.energies[i]), traj.labels[i].ascii_name().into()]);
    }
    let mut sum = Table::new(["from", "to", "verdict", "switched", "crossing_ps", "stabilization_ps", "tau_ps", "max_abs_dmz"]);
    sum.push(vec![
        out.initial_label.ascii_name().into(),
        out.final_label.ascii_name().into(),
        out.verdict.name().into(),
        out.switched().to_string(),
        opt(out.crossing_time_ps),
        opt(out.stabilization_time_ps),
        opt(out.fitted_tau_ps),
        num(out.max_abs_dmz),
    ]);
    let mut line = format!("{} -> {}, switched={}", out.initial_label, out.final_label, out.switched());
    if out.verdict == Verdict::Undecided {
        line.push_str(" (undecided)");
    }
    let mut r = Report { summary: vec![line], ..Default::default() };
    emit(ctx, &mut r, "switch_trajectory.csv", &t)?;
    emit(ctx, &mut r, "switch_summary.csv", &sum)?;
    Ok(r)
}

pub fn relax(ctx: &Context) -> Result<Report> {
    let rc = &ctx.cfg.relax;
    let h = Vec3::new(rc.field_x, rc.field_y, rc.field_z);
    let starts = DomainLabel::ALL;
    let results = ctx.map(starts.len(), |i| {
        let m0 = ctx.sim.minimum(starts[i])?.m;
        ctx.sim.relax_in_field(m0, h, rc.duration_ps)
    });
    let mut t = Table::new(["from", "hx_Oe", "hy_Oe", "hz_Oe", "label", "mx", "my", "mz", "energy_erg_cm3"]);
    let mut labels = Vec::new();
    for (from, res) in starts.iter().zip(results) {
        let eq = res?;
        labels.push(eq.label);
        t.push(vec![
            from.ascii_name().into(),
            num(h.x),
            num(h.y),
            num(h.z),
            eq.label.ascii_name().into(),
            num(eq.m.x),
            num(eq.m.y),
            num(eq.m.z),
            num(eq.energy),
        ]);
    }
    labels.dedup();
    let summary = if labels.len() == 1 {
        format!("every start relaxes to {}", labels[0])
    } else {
        "relaxed state depends on the start".to_string()
    };
    let mut r = Report { summary: vec![summary], ..Default::default() };
    emit(ctx, &mut r, "relax.csv", &t)?;
    Ok(r)
}

pub fn sweep(ctx: &Context, variable: Variable) -> Result<Report> {
    let res = ctx.run_sweep(variable)?;
    let mut t = match res.observable {
        crate::config::Observable::Switch => Table::new([
            variable.column(),
            "from",
            "to",
            "verdict",
            "switched",
            "crossing_ps",
            "stabilization_ps",
            "tau_ps",
            "max_abs_dmz",
            "error",
        ]),
        crate::config::Observable::Area => {
            Table::new([variable.column(), "normalized_area", "undecided_fraction", "error"])
        }
    };
    let width = t.header.len();
    let mut failures = 0;
    for (v, p) in res.values.iter().zip(&res.points) {
        let mut row = vec![num(*v)];
        match p {
            Ok(PointResult::Switch(o)) => row.extend([
                o.initial_label.ascii_name().into(),
                o.final_label.ascii_name().into(),
                o.verdict.name().into(),
                o.switched().to_string(),
                opt(o.crossing_time_ps),
                opt(o.stabilization_time_ps),
                opt(o.fitted_tau_ps),
                num(o.max_abs_dmz),
                String::new(),
            ]),
            Ok(PointResult::Area { normalized_area, undecided_fraction }) => {
                row.extend([num(*normalized_area), num(*undecided_fraction), String::new()])
            }
            Err(e) => {
                failures += 1;
                row.resize(width - 1, String::new());
                row.push(e.clone());
            }
        }
        t.push(row);
    }
    let name = format!("sweep_{}.csv", variable.name());
    let mut r = Report {
        summary: vec![format!("{} points, {failures} failed", res.values.len())],
        ..Default::default()
    };
    emit(ctx, &mut r, &name, &t)?;
    Ok(r)
}

pub fn image(ctx: &Context) -> Result<Report> {
    let initial = ctx.initial_image()?;
    let beam = ctx.cfg.beam();
    let pulse = ctx.pulse();
    let res = ctx.simulate_image(&initial, &beam, &pulse)?;
    let area = normalized_switched_area(&initial, &res.image, &beam)?;
    let mut r = Report::default();
    emit_pgm(ctx, &mut r, "image_before.pgm", &pgm::render_labels(&initial, None))?;
    emit_pgm(ctx, &mut r, "image_after.pgm", &pgm::render_labels(&res.image, Some(&res.undecided)))?;
    emit_pgm(ctx, &mut r, "image_mz.pgm", &pgm::render_mz(&res.image))?;
    emit_pgm(ctx, &mut r, "image_difference.pgm", &pgm::render_difference(&initial, &res))?;
    let mut t = Table::new(["I0_mJcm2", "lambda_nm", "phi_deg", "normalized_area", "undecided_fraction"]);
    let undecided_fraction = res.undecided_count as f64 / initial.len() as f64;
    t.push(vec![num(beam.peak_fluence), num(pulse.wavelength), num(pulse.polarization_angle_deg), num(area), num(undecided_fraction)]);
    emit(ctx, &mut r, "image.csv", &t)?;
    r.summary.push(format!("normalized switched area {area:.4}, {} undecided pixels", res.undecided_count));
    Ok(r)
}

pub fn energetics(ctx: &Context) -> Result<Report> {
    let e = &ctx.cfg.energetics;
    let b = energy_budget(e.absorption, e.fluence, &e.thermo, [e.bit_x_nm, e.bit_y_nm, e.bit_z_nm])?;
    let mut t = Table::new(["quantity", "value", "unit"]);
    for (q, v, u) in [
        ("temperature_rise", b.temperature_rise_k, "K"),
        ("heat_density", b.heat_density_j_cm3, "J/cm3"),
        ("photon_areal_density", b.photons_cm2, "1/cm2"),
        ("photon_volume_density", b.photons_cm3, "1/cm3"),
        ("bit_dissipation", b.bit_dissipation_aj, "aJ"),
    ] {
        t.push(vec![q.into(), num(v), u.into()]);
    }
    let mut r = Report { summary: vec![format!("temperature rise {:.2} K", b.temperature_rise_k)], ..Default::default() };
    emit(ctx, &mut r, "energetics.csv", &t)?;
    Ok(r)
}

pub fn tensor(ctx: &Context) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.tensor.seed);
    let chi = ChiTensor::from_fn(|_| rng.gen_range(-1.0..1.0));
    let group = PointGroup::new(ctx.cfg.tensor.group);
    let p = project_tensor(&chi, &group);
    let mut t = Table::new(["kind", "name", "value"]);
    for (idx, v) in p.iter() {
        if v.abs() > 1e-12 {
            let name: String = photomag_core::symmetry::index_name(idx).iter().collect();
            t.push(vec!["component".into(), name, num(v)]);
        }
    }
    // W_L(φ)/(mx·my) = c0 + c2·cos 2φ, read off at φ = 0 and 90°
    let m = Vec3::new(1.0, 1.0, 0.0).normalized();
    let mxmy = m.x * m.y;
    let (w0, w90) = (switching_energy(&p, 0.0, m) / mxmy, switching_energy(&p, 90.0, m) / mxmy);
    t.push(vec!["coefficient".into(), "constant_mxmy".into(), num((w0 + w90) / 2.0)]);
    t.push(vec!["coefficient".into(), "cos2phi_mxmy".into(), num((w0 - w90) / 2.0)]);
    t.push(vec!["coefficient".into(), "A".into(), num(p.switching_amplitude())]);
    let mut r = Report {
        summary: vec![format!("group {}: A = {:.6}", group.name, p.switching_amplitude())],
        ..Default::default()
    };
    emit(ctx, &mut r, &format!("tensor_{}.csv", group.name), &t)?;
    Ok(r)
}

/// Calibrates the coupling, stores it in `cfg` and, when given, rewrites
/// the config file.
pub fn calibrate(ctx: &mut Context, config_path: Option<&Path>) -> Result<Report> {
    let cal = calibrate_with(&ctx.sim, &ctx.spectral, &ctx.cfg.calibration_request())?;
    ctx.cfg.pulse.coupling = Some(cal.coupling);
    let c = &ctx.cfg.calibration;
    let pulse = ctx.pulse().with_fluence(c.target_imin).with_wavelength(c.wavelength).with_polarization(0.0);
    let state = photo_amplitude(&pulse, &ctx.spectral)?;
    let mx = ctx.sim.minimum(DomainLabel::LPlus)?.m.x;
    let field = photo_field_magnitude(&state, mx, ctx.cfg.material.ms());
    let mut t = Table::new(["coupling_erg_cm3_per_mJcm2", "bracket_lo", "bracket_hi", "probes", "threshold_amplitude_erg_cm3", "photo_field_Oe"]);
    t.push(vec![num(cal.coupling), num(cal.bracket.0), num(cal.bracket.1), cal.probes.to_string(), num(state.amplitude_a), num(field)]);
    let target = match config_path {
        Some(p) => p.to_path_buf(),
        None => out_dir(&ctx.cfg)?.join("calibrated.conf"),
    };
    std::fs::write(&target, ctx.cfg.to_text()).map_err(|e| CliError::io(&target, e))?;
    let mut r = Report {
        summary: vec![
            format!("coupling = {} erg/cm3 per mJ/cm2", cal.coupling),
            format!("threshold photo field {field:.0} Oe"),
        ],
        files: vec![target],
    };
    emit(ctx, &mut r, "calibration.csv", &t)?;
    Ok(r)
}
