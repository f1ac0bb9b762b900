//! The command registry: parameters, accepted formats and the computation
//! behind each subcommand.

use std::f64::consts::PI;

use handshake_core::dynamics::timescales::{transition_chain, transition_time};
use handshake_core::dynamics::{
    integrate_cascade, integrate_competition, integrate_two_atom, CascadeScenario, CompetitionScenario,
    Trajectory, TwoAtomScenario,
};
use handshake_core::experiments::{
    fc_curve, hbt_coincidence_rate, hbt_scan_period, split_photon_run, split_plateau_prediction,
    split_zero_delay_prediction, EmitterStream, HbtGeometry, PolarimeterPair,
};
use handshake_core::fields::{
    evaluate_quantity, field_movie, flux_balance, lobe_phase_coherence, poynting_streamlines, track_peaks,
    zero_crossing_contours, GridQuantity, GridSpec, HandshakeFieldConfig, StreamlineMode, StreamlineOptions,
};
use handshake_core::io::{format_f64, write_grid_binary, Table};
use handshake_core::paths::{
    amplitude_vs_distance, contributing_half_width, contributing_zone_half_width, enhancement_factor,
    outside_zone_ratio, phasor_sum, DelayModifier, PathEnsemble,
};
use handshake_core::states::{
    d12_exact, dipole_moment, dipole_strength, mixed_density_slice, norm_integral, transition_energy, EigenState,
    QuadratureSpec, SuperpositionState,
};
use handshake_core::PhysicalConstants;

use crate::output::{report, Format, RunOutput};
use crate::params::{choice, flag, float, int, list, ParamSpec, Params};
use crate::CliError;

pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    /// Written into the manifest: which figure or relation the output shows.
    pub reproduces: &'static str,
    pub formats: &'static [Format],
    pub default_formats: &'static [Format],
    pub params: fn() -> Vec<ParamSpec>,
    pub run: fn(&Params, &[Format]) -> Result<RunOutput, CliError>,
}

const CSV: &[Format] = &[Format::Csv];
const CSV_PNG: &[Format] = &[Format::Csv, Format::Png];

pub fn registry() -> Vec<Command> {
    vec![
        Command {
            name: "states",
            about: "Hydrogen 1s/2p overlaps, dipole strength, mixed-state charge slices",
            reproduces: "charge density slices of the mixed 1s/2p state and its oscillating dipole",
            formats: CSV,
            default_formats: CSV,
            params: states_params,
            run: run_states,
        },
        Command {
            name: "two-atom",
            about: "Emitter/absorber transfer integrated against the logistic solution",
            reproduces: "two-atom energy transfer curves (logistic solution)",
            formats: CSV_PNG,
            default_formats: CSV,
            params: two_atom_params,
            run: run_two_atom,
        },
        Command {
            name: "compete",
            about: "One emitter, two absorbers with detuning",
            reproduces: "competing absorbers: winner-take-all and split outcomes",
            formats: CSV_PNG,
            default_formats: CSV,
            params: compete_params,
            run: run_compete,
        },
        Command {
            name: "cascade",
            about: "Three-level cascade with two transitions",
            reproduces: "cascade populations and dipole envelopes",
            formats: CSV_PNG,
            default_formats: CSV,
            params: cascade_params,
            run: run_cascade,
        },
        Command {
            name: "fieldmap",
            about: "Handshake potential over a grid for one optical period",
            reproduces: "field snapshots between emitter and absorber over one period",
            formats: &[Format::Csv, Format::Grid, Format::Png],
            default_formats: &[Format::Csv, Format::Grid],
            params: fieldmap_params,
            run: run_fieldmap,
        },
        Command {
            name: "streamlines",
            about: "Poynting streamlines and flux balance",
            reproduces: "energy-flow lines from emitter to absorber",
            formats: CSV,
            default_formats: CSV,
            params: streamline_params,
            run: run_streamlines,
        },
        Command {
            name: "paths",
            about: "Phasor path sums, contributing zone, 1/r amplitude law",
            reproduces: "path-sum arrows and the 1/r amplitude law",
            formats: CSV,
            default_formats: CSV,
            params: paths_params,
            run: run_paths,
        },
        Command {
            name: "enhancement",
            about: "Gain of an equal-delay optical system over the bare contributing zone",
            reproduces: "enhancement factor 8r/(pi lambda) times the solid angle",
            formats: CSV,
            default_formats: CSV,
            params: enhancement_params,
            run: run_enhancement,
        },
        Command {
            name: "hbt",
            about: "Intensity-interferometry coincidence rate versus detector separation",
            reproduces: "coincidence rate 1 + cos(2 pi d_AB d12 / (lambda L))",
            formats: CSV,
            default_formats: CSV,
            params: hbt_params,
            run: run_hbt,
        },
        Command {
            name: "split",
            about: "Single-photon splitting: coincidence delay histogram",
            reproduces: "beam-splitter coincidence histogram with the zero-delay dip",
            formats: CSV,
            default_formats: CSV,
            params: split_params,
            run: run_split,
        },
        Command {
            name: "fc",
            about: "Cascade-photon polarization coincidences versus polarizer angle",
            reproduces: "coincidence rate versus polarizer angle, with a local-model contrast",
            formats: CSV,
            default_formats: CSV,
            params: fc_params,
            run: run_fc,
        },
        Command {
            name: "constants",
            about: "Physical constants, transition energy and timescales",
            reproduces: "transition energy, frequency and transfer time estimates",
            formats: CSV,
            default_formats: CSV,
            params: Vec::new,
            run: run_constants,
        },
    ]
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

fn usage(key: &str, msg: &str) -> CliError {
    CliError::Usage(format!("invalid value for `{key}`: {msg}"))
}

fn need_at_least(p: &Params, key: &str, n: u64) -> Result<usize, CliError> {
    let v = p.u(key);
    if v < n {
        return Err(usage(key, &format!("must be at least {n}")));
    }
    Ok(v as usize)
}

// ---------------------------------------------------------------------------
// states

fn states_params() -> Vec<ParamSpec> {
    vec![
        float("radial-cutoff", 40.0, "outer radius of the radial quadrature [a0]"),
        int("radial-points", 2000, "radial Gauss-Legendre points"),
        int("angular-points", 200, "cos(theta) Gauss-Legendre points"),
        float("excited-fraction", 0.5, "b^2 of the mixed state"),
        float("phase", 0.0, "relative phase of the mixed state [rad]"),
        list("slice-times", &[0.0, 0.5 * PI, PI, 1.5 * PI], "slice times [1/omega0]"),
        float("z-min", -10.0, "slice grid start [a0]"),
        float("z-max", 10.0, "slice grid end [a0]"),
        int("z-count", 201, "slice grid points"),
        float("dipole-periods", 2.0, "optical periods covered by the dipole table"),
        int("dipole-samples", 201, "dipole table rows"),
    ]
}

fn run_states(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let spec = QuadratureSpec {
        radial_cutoff: p.f("radial-cutoff"),
        radial_points: p.usize("radial-points"),
        angular_points: p.usize("angular-points"),
    };
    spec.validate()?;
    let nz = need_at_least(p, "z-count", 2)?;
    let nd = need_at_least(p, "dipole-samples", 2)?;
    let (z0, z1) = (p.f("z-min"), p.f("z-max"));
    if !(z1 > z0) {
        return Err(usage("z-max", "must exceed z-min"));
    }
    if !(p.f("dipole-periods") > 0.0) {
        return Err(usage("dipole-periods", "must be positive"));
    }
    let state = SuperpositionState::from_excited_fraction(p.f("excited-fraction"), p.f("phase"))?;
    let k = PhysicalConstants::codata2018();
    let (s1, s2) = (EigenState::s100(), EigenState::p210());

    let mut out = RunOutput::default();
    let mut t = Table::new(["quantity", "value", "error_estimate", "converged"]);
    let mut row = |name: &str, v: f64, e: f64, c: bool| {
        t.push_raw(vec![name.into(), format_f64(v), format_f64(e), c.to_string()]);
    };
    let n11 = norm_integral(&s1, &s1, &spec)?;
    let n22 = norm_integral(&s2, &s2, &spec)?;
    let n12 = norm_integral(&s1, &s2, &spec)?;
    let d12 = dipole_strength(&s1, &s2, &spec, &k)?;
    let d11 = dipole_strength(&s1, &s1, &spec, &k)?;
    row("norm_1s", n11.value, n11.error_estimate, n11.converged);
    row("norm_2p", n22.value, n22.error_estimate, n22.converged);
    row("overlap_1s_2p", n12.value, n12.error_estimate, n12.converged);
    row("d12 [q a0]", d12.q_a0, d12.error_estimate, d12.converged);
    row("d12_closed_form [q a0]", d12_exact(), 0.0, true);
    row("d12 [C m]", d12.si, d12.error_estimate * k.electron_charge_q * k.bohr_radius_a0, d12.converged);
    row("d11 [q a0]", d11.q_a0, d11.error_estimate, d11.converged);
    out.table("states_integrals.csv", &t)?;
    out.note("norm_1s", format_f64(n11.value));
    out.note("norm_2p", format_f64(n22.value));
    out.note("overlap_1s_2p", format_f64(n12.value));
    out.note("d12_q_a0", format_f64(d12.q_a0));
    if !(n11.converged && n22.converged && d12.converged) {
        out.note("warning", "quadrature did not converge to 1e-6");
    }

    let z: Vec<f64> = (0..nz).map(|i| z0 + (z1 - z0) * i as f64 / (nz - 1) as f64).collect();
    let mut t = Table::new(["t [1/omega0]", "z [a0]", "ground [q/a0]", "excited [q/a0]", "cross [q/a0]", "total [q/a0]"]);
    for &tt in p.list("slice-times") {
        let s = mixed_density_slice(&state, tt, &z, &spec)?;
        for i in 0..nz {
            t.push(&[tt, s.z[i], s.ground[i], s.excited[i], s.cross[i], s.total[i]]);
        }
    }
    out.table("states_slices.csv", &t)?;

    let te = transition_energy(&k);
    let span = p.f("dipole-periods") * 2.0 * PI / te.omega0;
    let mut t = Table::new(["t [s]", "moment [C m]", "velocity [C m/s]", "acceleration [C m/s^2]"]);
    for i in 0..nd {
        let tt = span * i as f64 / (nd - 1) as f64;
        let m = dipole_moment(&state, d12.si, te.omega0, tt)?;
        t.push(&[tt, m.moment, m.velocity, m.acceleration]);
    }
    out.table("states_dipole.csv", &t)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// dynamics

fn trajectory_table(tr: &Trajectory, extra: &[(&str, Vec<f64>)]) -> Table {
    let mut cols = vec!["t [tau]".to_string()];
    cols.extend(tr.labels.iter().map(|l| format!("{l} [1]")));
    cols.push("power [1/tau]".into());
    cols.extend(tr.extra.iter().map(|(n, _)| n.to_string()));
    cols.extend(extra.iter().map(|(n, _)| n.to_string()));
    let mut t = Table::new(cols);
    for (i, time) in tr.times.iter().enumerate() {
        let mut row = vec![*time];
        row.extend(&tr.states[i]);
        row.push(tr.power[i]);
        row.extend(tr.extra.iter().map(|(_, v)| v[i]));
        row.extend(extra.iter().map(|(_, v)| v[i]));
        t.push(&row);
    }
    t
}

fn dynamics_notes(out: &mut RunOutput, tr: &Trajectory) {
    out.note("conservation_error", format_f64(tr.conservation_error()));
    out.note("max_clamp", format_f64(tr.max_clamp));
    out.note("accepted_steps", tr.stats.accepted);
    out.note("rejected_steps", tr.stats.rejected);
    if tr.clamp_warning() {
        out.note("warning", "square-root arguments were clamped by more than 1e-9");
    }
    for (l, v) in tr.labels.iter().zip(tr.final_state()) {
        out.note(&format!("final_{l}"), format_f64(*v));
    }
}

fn plot_trajectory(out: &mut RunOutput, formats: &[Format], name: &str, tr: &Trajectory) -> Result<(), CliError> {
    if formats.contains(&Format::Png) {
        let series: Vec<Vec<f64>> = (0..tr.labels.len())
            .map(|j| tr.states.iter().map(|r| r[j]).collect())
            .collect();
        out.files.push((name.to_string(), crate::plot::line_png(&tr.times, &series)?));
    }
    Ok(())
}

fn two_atom_params() -> Vec<ParamSpec> {
    let d = TwoAtomScenario::default();
    vec![
        float("tau", d.tau, "transition timescale"),
        float("t-start", d.t_start, "integration start [tau]"),
        float("t-end", d.t_end, "integration end [tau]"),
        float("initial-b2-alpha", d.initial_b2_alpha, "emitter excited population at t-start"),
        float("sin-phi", d.sin_phi, "sine of the emitter/absorber dipole phase"),
        int("samples", d.samples as u64, "output rows"),
        float("tol", 1e-9, "integrator tolerance"),
    ]
}

fn run_two_atom(p: &Params, formats: &[Format]) -> Result<RunOutput, CliError> {
    let s = TwoAtomScenario {
        tau: p.f("tau"),
        t_start: p.f("t-start"),
        t_end: p.f("t-end"),
        initial_b2_alpha: p.f("initial-b2-alpha"),
        sin_phi: p.f("sin-phi"),
        samples: p.usize("samples"),
    };
    s.validate()?;
    let tr = integrate_two_atom(&s, p.f("tol"))?;
    let analytic: Vec<f64> = tr.times.iter().map(|&t| s.analytic_b2_alpha(t)).collect();
    let b2 = tr.column("b2_alpha").expect("b2_alpha column");
    let dev: Vec<f64> = b2.iter().zip(&analytic).map(|(a, b)| a - b).collect();
    let worst = dev.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let mut out = RunOutput::default();
    out.table(
        "two_atom.csv",
        &trajectory_table(&tr, &[("analytic_b2_alpha [1]", analytic), ("deviation [1]", dev)]),
    )?;
    plot_trajectory(&mut out, formats, "two_atom.png", &tr)?;
    out.note("max_deviation_from_logistic", format_f64(worst));
    dynamics_notes(&mut out, &tr);
    Ok(out)
}

fn compete_params() -> Vec<ParamSpec> {
    let d = CompetitionScenario::default();
    vec![
        float("tau", d.tau, "transition timescale"),
        float("delta-omega", d.delta_omega, "detuning of the second absorber [1/tau]"),
        float("initial-b2-beta1", d.initial_b2.0, "first absorber seed population"),
        float("initial-b2-beta2", d.initial_b2.1, "second absorber seed population"),
        float("t-start", d.t_start, "integration start [tau]"),
        float("t-end", d.t_end, "integration end [tau]"),
        int("samples", d.samples as u64, "output rows"),
        float("tol", 1e-9, "integrator tolerance"),
    ]
}

fn run_compete(p: &Params, formats: &[Format]) -> Result<RunOutput, CliError> {
    let s = CompetitionScenario {
        tau: p.f("tau"),
        delta_omega: p.f("delta-omega"),
        initial_b2: (p.f("initial-b2-beta1"), p.f("initial-b2-beta2")),
        t_start: p.f("t-start"),
        t_end: p.f("t-end"),
        samples: p.usize("samples"),
    };
    s.validate()?;
    let tr = integrate_competition(&s, p.f("tol"))?;
    let mut out = RunOutput::default();
    out.table("compete.csv", &trajectory_table(&tr, &[]))?;
    plot_trajectory(&mut out, formats, "compete.png", &tr)?;
    dynamics_notes(&mut out, &tr);
    Ok(out)
}

fn cascade_params() -> Vec<ParamSpec> {
    let d = CascadeScenario::default();
    vec![
        float("tau-alpha", d.tau_alpha, "upper transition timescale"),
        float("tau-beta", d.tau_beta, "lower transition timescale"),
        float("initial-a2", d.initial.0, "ground population at t-start"),
        float("initial-b2", d.initial.1, "middle population at t-start"),
        float("initial-c2", d.initial.2, "upper population at t-start"),
        float("t-start", d.t_start, "integration start [tau_alpha]"),
        float("t-end", d.t_end, "integration end [tau_alpha]"),
        int("samples", d.samples as u64, "output rows"),
        float("tol", 1e-9, "integrator tolerance"),
    ]
}

fn run_cascade(p: &Params, formats: &[Format]) -> Result<RunOutput, CliError> {
    let s = CascadeScenario {
        tau_alpha: p.f("tau-alpha"),
        tau_beta: p.f("tau-beta"),
        initial: (p.f("initial-a2"), p.f("initial-b2"), p.f("initial-c2")),
        t_start: p.f("t-start"),
        t_end: p.f("t-end"),
        samples: p.usize("samples"),
    };
    s.validate()?;
    let tr = integrate_cascade(&s, p.f("tol"))?;
    let mut out = RunOutput::default();
    out.table("cascade.csv", &trajectory_table(&tr, &[]))?;
    plot_trajectory(&mut out, formats, "cascade.png", &tr)?;
    for name in ["upper_envelope", "lower_envelope"] {
        if let Some(t) = tr.peak_time(name) {
            out.note(&format!("{name}_peak_time"), format_f64(t));
        }
    }
    dynamics_notes(&mut out, &tr);
    Ok(out)
}

// ---------------------------------------------------------------------------
// fields

fn field_params() -> Vec<ParamSpec> {
    let d = HandshakeFieldConfig::default();
    vec![
        float("separation", d.separation_dx, "atom separation [lambda/2pi]"),
        float("exclusion-radius", d.exclusion_radius, "radius of the unevaluated discs"),
        float("envelope-rate", d.envelope_rate, "common amplitude factor 1/tau"),
        float("weight-alpha", d.weight_alpha, "weight of the retarded term"),
        float("weight-beta", d.weight_beta, "weight of the advanced term"),
    ]
}

fn field_config(p: &Params) -> HandshakeFieldConfig {
    let mut cfg = HandshakeFieldConfig::with_separation(p.f("separation"));
    cfg.exclusion_radius = p.f("exclusion-radius");
    cfg.envelope_rate = p.f("envelope-rate");
    cfg.weight_alpha = p.f("weight-alpha");
    cfg.weight_beta = p.f("weight-beta");
    cfg
}

fn fieldmap_params() -> Vec<ParamSpec> {
    let mut v = field_params();
    v.extend([
        int("frames", 16, "frames per optical period"),
        float("margin", 5.0, "grid extends this far beyond each atom in x"),
        float("half-height", 10.0, "grid spans [-h, h] in y"),
        int("nx", 800, "grid columns"),
        int("ny", 400, "grid rows"),
        choice("quantity", &["potential", "electric"], "quantity stored in the grid"),
        flag("lobes", true, "also check phase coherence of the high-amplitude lobes"),
    ]);
    v
}

fn run_fieldmap(p: &Params, formats: &[Format]) -> Result<RunOutput, CliError> {
    let mut cfg = field_config(p);
    let frames = need_at_least(p, "frames", 1)?;
    let (m, h) = (p.f("margin"), p.f("half-height"));
    cfg.grid = GridSpec {
        x_min: -m,
        x_max: cfg.separation_dx + m,
        y_min: -h,
        y_max: h,
        nx: p.usize("nx"),
        ny: p.usize("ny"),
    };
    cfg.grid.validate()?;
    cfg.times = (0..frames).map(|k| 2.0 * PI * k as f64 / frames as f64).collect();
    cfg.validate()?;

    let movie = field_movie(&cfg)?;
    let grid = match p.s("quantity") {
        "electric" => evaluate_quantity(&cfg, GridQuantity::Electric)?,
        _ => movie.grid.clone(),
    };
    let mut out = RunOutput::default();
    if formats.contains(&Format::Grid) {
        let mut buf = Vec::new();
        write_grid_binary(&mut buf, &grid)?;
        out.files.push(("fieldmap.grid".into(), buf));
    }
    if formats.contains(&Format::Csv) {
        let mut t = Table::new(["frame", "t [1/omega0]", "x [lambda/2pi]"]);
        for (k, peaks) in movie.peaks.iter().enumerate() {
            for &x in peaks {
                t.push(&[k as f64, cfg.times[k], x]);
            }
        }
        out.table("fieldmap_peaks.csv", &t)?;
        let c = zero_crossing_contours(&cfg, 0.0)?;
        let mut t = Table::new(["polyline", "closed", "x [lambda/2pi]", "y [lambda/2pi]"]);
        for (i, pl) in c.polylines.iter().enumerate() {
            for pt in &pl.points {
                t.push_raw(vec![i.to_string(), pl.closed.to_string(), format_f64(pt[0]), format_f64(pt[1])]);
            }
        }
        out.table("fieldmap_contours.csv", &t)?;
        out.note("contour_polylines", c.polylines.len());
        out.note("contour_saddles", c.saddles.len());
    }
    if formats.contains(&Format::Png) {
        for (k, f) in grid.frames.iter().enumerate() {
            let png = crate::plot::heatmap_png(grid.nx(), grid.ny(), f)?;
            out.files.push((format!("fieldmap_{k:03}.png"), png));
        }
    }
    let track = track_peaks(&movie.peaks, PI);
    out.note("peaks_move_towards_absorber", track.monotone_forward);
    if p.b("lobes") {
        let lc = lobe_phase_coherence(&cfg, h)?;
        out.note("lobes", lc.lobes.len());
        out.note("lobe_phase_deviation_cycles", format_f64(lc.max_deviation_cycles));
    }
    let rows = out.summary.clone();
    out.table("fieldmap_summary.csv", &report(&rows))?;
    Ok(out)
}

fn streamline_params() -> Vec<ParamSpec> {
    let mut v = field_params();
    let d = StreamlineOptions::default();
    v.extend([
        choice("mode", &["averaged", "instant"], "period-averaged or instantaneous flux"),
        float("t", 0.0, "time for instant mode [1/omega0]"),
        list("seed-x", &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0], "seed x positions"),
        list("seed-y", &[0.0, 0.5], "seed y positions (every x is combined with every y)"),
        float("tol", d.tol, "integrator tolerance"),
        float("max-step", d.max_step, "largest arc-length step"),
        float("max-length", d.max_length, "longest streamline"),
        list("box-centre", &[6.0, 3.0, 0.0], "centre of the flux-check cubes (x, y, z)"),
        list("box-half-sides", &[0.5, 1.0, 1.5], "half side of each flux-check cube"),
        int("box-points", 12, "quadrature points per cube edge"),
    ]);
    v
}

fn run_streamlines(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let cfg = field_config(p);
    cfg.validate()?;
    let mode = match p.s("mode") {
        "instant" => StreamlineMode::Instant(p.f("t")),
        _ => StreamlineMode::Averaged,
    };
    let opts = StreamlineOptions {
        tol: p.f("tol"),
        max_step: p.f("max-step"),
        max_length: p.f("max-length"),
        ..StreamlineOptions::default()
    };
    let centre = p.list("box-centre");
    if centre.len() != 3 {
        return Err(usage("box-centre", "needs exactly three coordinates"));
    }
    let seeds: Vec<[f64; 2]> = p
        .list("seed-x")
        .iter()
        .flat_map(|&x| p.list("seed-y").iter().map(move |&y| [x, y]))
        .collect();
    let lines = poynting_streamlines(&cfg, mode, &seeds, &opts)?;
    let boxes = flux_balance(&cfg, [centre[0], centre[1], centre[2]], p.list("box-half-sides"), p.usize("box-points"))?;

    let mut out = RunOutput::default();
    let mut pts = Table::new(["line", "x [lambda/2pi]", "y [lambda/2pi]"]);
    let mut ends = Table::new(["line", "seed_x", "seed_y", "end", "length [lambda/2pi]", "points"]);
    let mut absorbed = 0;
    for (i, l) in lines.iter().enumerate() {
        for q in &l.points {
            pts.push(&[i as f64, q[0], q[1]]);
        }
        ends.push_raw(vec![
            i.to_string(),
            format_f64(l.seed[0]),
            format_f64(l.seed[1]),
            format!("{:?}", l.end),
            format_f64(l.length),
            l.points.len().to_string(),
        ]);
        if l.end == handshake_core::fields::StreamlineEnd::Absorber {
            absorbed += 1;
        }
    }
    out.table("streamlines.csv", &pts)?;
    out.table("streamline_ends.csv", &ends)?;
    let mut fb = Table::new(["half_side", "net", "absolute", "ratio"]);
    for b in &boxes {
        fb.push(&[b.half_side, b.net, b.absolute, b.ratio]);
    }
    out.table("flux_balance.csv", &fb)?;
    out.note("streamlines", lines.len());
    out.note("ending_at_absorber", absorbed);
    let worst = boxes.iter().fold(0.0f64, |m, b| m.max(b.ratio));
    out.note("worst_flux_ratio", format_f64(worst));
    Ok(out)
}

// ---------------------------------------------------------------------------
// paths

fn paths_params() -> Vec<ParamSpec> {
    vec![
        float("r", 1.0, "source-detector distance [m]"),
        float("wavelength", 1e-6, "wavelength [m]"),
        float("aperture", 0.02, "half aperture in the screen plane [m]"),
        float("spacing", 7.8125e-7, "path spacing at distance r [m]"),
        choice("modifier", &["none", "lens", "scaled", "quadratic"], "per-path delay"),
        float("modifier-value", 1.0, "scale s for `scaled`, k for `quadratic`"),
        float("fraction", 0.8, "share of the resultant used for the contributing half-width"),
        float("r-min", 0.1, "smallest distance of the 1/r study [m]"),
        float("r-max", 10.0, "largest distance of the 1/r study [m]"),
        int("r-count", 9, "log-spaced distances in the 1/r study"),
    ]
}

fn run_paths(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let (r, lam) = (p.f("r"), p.f("wavelength"));
    let modifier = match p.s("modifier") {
        "lens" => DelayModifier::EqualDelay,
        "scaled" => DelayModifier::Scaled(p.f("modifier-value")),
        "quadratic" => DelayModifier::Quadratic(p.f("modifier-value")),
        _ => DelayModifier::None,
    };
    let base = PathEnsemble::symmetric(r, lam, p.f("aperture"), p.f("spacing"))?;
    let e = base.clone().with_modifier(modifier);
    let n = need_at_least(p, "r-count", 2)?;
    let (r0, r1) = (p.f("r-min"), p.f("r-max"));
    if !(r0 > 0.0 && r1 > r0) {
        return Err(usage("r-max", "need 0 < r-min < r-max"));
    }
    let rs: Vec<f64> = (0..n)
        .map(|i| r0 * (r1 / r0).powf(i as f64 / (n - 1) as f64))
        .collect();
    let res = phasor_sum(&e)?;
    let study = amplitude_vs_distance(&base, &rs)?;
    let zone = contributing_zone_half_width(r, lam);

    let mut out = RunOutput::default();
    let mut t = Table::new(["y [m]", "excess [m]", "re", "im", "sum_re", "sum_im"]);
    for (i, &y) in e.offsets.iter().enumerate() {
        let (a, s) = (res.arrows[i], res.partial_sums[i]);
        t.push(&[y, e.excess(y), a.re, a.im, s.re, s.im]);
    }
    out.table("paths_arrows.csv", &t)?;
    let mut t = Table::new(["r [m]", "paths", "line_amplitude", "amplitude", "intensity"]);
    for s in &study.samples {
        t.push(&[s.r, s.paths as f64, s.line_amplitude, s.amplitude, s.intensity]);
    }
    out.table("paths_distance.csv", &t)?;

    out.note("paths", res.arrows.len());
    out.note("resultant_norm", format_f64(res.resultant.norm()));
    out.note("amplitude", format_f64(res.amplitude));
    out.note("zone_half_width", format_f64(zone));
    if modifier == DelayModifier::None {
        out.note("contributing_half_width", format_f64(contributing_half_width(&e, p.f("fraction"))?));
        out.note("outside_zone_ratio", format_f64(outside_zone_ratio(&e, zone)?));
    }
    out.note("amplitude_slope", format_f64(study.amplitude_slope));
    out.note("intensity_slope", format_f64(study.intensity_slope));
    let rows = out.summary.clone();
    out.table("paths_summary.csv", &report(&rows))?;
    Ok(out)
}

fn enhancement_params() -> Vec<ParamSpec> {
    vec![
        float("r", 1.0, "source-detector distance [m]"),
        float("wavelength", 1.22e-7, "wavelength [m]"),
        float("solid-angle", 1.0, "solid angle of the optical system [sr]"),
    ]
}

fn run_enhancement(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let (r, lam, omega) = (p.f("r"), p.f("wavelength"), p.f("solid-angle"));
    let factor = enhancement_factor(r, lam, omega)?;
    let k = PhysicalConstants::codata2018();
    let mut out = RunOutput::default();
    out.note("enhancement_factor", format_f64(factor));
    out.note("bare_zone_solid_angle", format_f64(PI * lam / (8.0 * r)));
    out.note("transition_time_bare [s]", format_f64(transition_time(r, &k, None)?));
    out.note("transition_time_with_optics [s]", format_f64(transition_time(r, &k, Some(omega))?));
    let rows = out.summary.clone();
    out.table("enhancement.csv", &report(&rows))?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// experiments

fn hbt_params() -> Vec<ParamSpec> {
    vec![
        float("d12", 1e-3, "source separation [m]"),
        float("l", 10.0, "source to detector-plane distance [m]"),
        float("wavelength", 5e-7, "wavelength [m]"),
        float("d-ab-max", 0.05, "largest detector separation scanned [m]"),
        int("steps", 4000, "scan steps"),
    ]
}

fn run_hbt(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let g = HbtGeometry {
        d12: p.f("d12"),
        d_ab: 0.0,
        l: p.f("l"),
        wavelength: p.f("wavelength"),
    };
    g.validate()?;
    let n = need_at_least(p, "steps", 2)?;
    let dmax = p.f("d-ab-max");
    if !(dmax > 0.0) {
        return Err(usage("d-ab-max", "must be positive"));
    }
    let mut t = Table::new(["d_ab [m]", "rate"]);
    for i in 0..=n {
        let d = dmax * i as f64 / n as f64;
        t.push(&[d, hbt_coincidence_rate(&HbtGeometry { d_ab: d, ..g })?]);
    }
    let mut out = RunOutput::default();
    out.table("hbt.csv", &t)?;
    out.note("rate_at_zero", format_f64(hbt_coincidence_rate(&g)?));
    out.note("fringe_period [m]", format_f64(g.fringe_period()));
    out.note("scanned_period [m]", format_f64(hbt_scan_period(&g, dmax, n)?));
    out.note("far_field", g.far_field());
    let rows = out.summary.clone();
    out.table("hbt_summary.csv", &report(&rows))?;
    Ok(out)
}

fn split_params() -> Vec<ParamSpec> {
    let d = EmitterStream::default();
    vec![
        float("mean-interval", d.mean_interval, "mean time between excitations [s]"),
        float("window", d.window, "coincidence bin width [s]"),
        float("duration", d.duration, "run length [s]"),
        int("seed", d.rng_seed, "random seed"),
        float("recovery-time", d.recovery_time, "minimum time between excitations [s]"),
        float("accidental-fraction", d.accidental_fraction, "stray emitter rate relative to the main one"),
        float("p-loss", d.p_loss, "probability that a photon reaches neither detector"),
        float("max-delay", d.max_delay, "histogram half range [s]"),
        float("plateau-min-delay", 60e-9, "bins at least this far out form the plateau [s]"),
    ]
}

fn run_split(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let s = EmitterStream {
        mean_interval: p.f("mean-interval"),
        window: p.f("window"),
        duration: p.f("duration"),
        rng_seed: p.u("seed"),
        recovery_time: p.f("recovery-time"),
        accidental_fraction: p.f("accidental-fraction"),
        p_loss: p.f("p-loss"),
        max_delay: p.f("max-delay"),
    };
    s.validate()?;
    let h = split_photon_run(&s)?;
    let mut t = Table::new(["delay [s]", "count"]);
    for (c, n) in h.centres.iter().zip(&h.counts) {
        t.push_raw(vec![format_f64(*c), n.to_string()]);
    }
    let mut out = RunOutput::default();
    out.table("split_histogram.csv", &t)?;
    out.note("zero_bin", h.zero_bin());
    if let Ok(z) = split_zero_delay_prediction(&s) {
        out.note("zero_bin_prediction", format_f64(z));
    }
    match h.plateau(p.f("plateau-min-delay")) {
        Ok((m, e)) => {
            out.note("plateau", format_f64(m));
            out.note("plateau_error", format_f64(e));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    }
    out.note("plateau_prediction", format_f64(split_plateau_prediction(&s)?));
    out.note("main_excitations", h.tally.main_excitations);
    out.note("accidental_excitations", h.tally.accidental_excitations);
    out.note("detector_a", h.tally.detector_a);
    out.note("detector_b", h.tally.detector_b);
    out.note("lost", h.tally.lost);
    let rows = out.summary.clone();
    out.table("split_summary.csv", &report(&rows))?;
    Ok(out)
}

fn fc_params() -> Vec<ParamSpec> {
    vec![
        float("theta1", 0.0, "angle of the first polarizer [rad]"),
        float("eff-major", 1.0, "transmittance along the major axis"),
        float("eff-minor", 0.0, "transmittance along the minor axis"),
        int("phi-count", 19, "angles from 0 to 90 degrees inclusive"),
        int("samples", 100_000, "Monte Carlo samples per angle"),
        int("seed", 1, "random seed"),
    ]
}

fn run_fc(p: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let base = PolarimeterPair::new(p.f("theta1"), p.f("theta1"), p.f("eff-major"), p.f("eff-minor"));
    let n = need_at_least(p, "phi-count", 2)?;
    // the last angle is exactly pi/2
    let phis: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { PI / 2.0 } else { 0.5 * PI * i as f64 / (n - 1) as f64 })
        .collect();
    let rows = fc_curve(&base, &phis, p.u("samples"), p.u("seed"))?;
    let mut t = Table::new(["phi [rad]", "phi [deg]", "ti", "classical", "classical_error", "classical_exact"]);
    for r in &rows {
        t.push(&[r.phi, r.phi.to_degrees(), r.ti, r.classical, r.classical_error, r.classical_exact]);
    }
    let mut out = RunOutput::default();
    out.table("fc.csv", &t)?;
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    out.note("ti_at_90", format_f64(last.ti));
    out.note("classical_at_90", format_f64(last.classical));
    out.note("classical_ratio_90_to_0", format_f64(last.classical / first.classical));
    Ok(out)
}

// ---------------------------------------------------------------------------
// constants

fn run_constants(_: &Params, _: &[Format]) -> Result<RunOutput, CliError> {
    let k = PhysicalConstants::codata2018();
    let te = transition_energy(&k);
    let chain = transition_chain(1.0, 3.0, te.printed_j, &k).map_err(numeric)?;
    let (vac, bohr) = k.consistency();
    let mut t = Table::new(["name", "value", "unit"]);
    let mut row = |n: &str, v: f64, u: &str| t.push_raw(vec![n.into(), format_f64(v), u.into()]);
    row("bohr_radius_a0", k.bohr_radius_a0, "m");
    row("electron_charge_q", k.electron_charge_q, "C");
    row("electron_mass_m", k.electron_mass_m, "kg");
    row("hbar", k.hbar, "J s");
    row("c", k.c, "m/s");
    row("mu0", k.mu0, "H/m");
    row("eps0", k.eps0, "F/m");
    row("vacuum_residual", vac, "1");
    row("bohr_residual", bohr, "1");
    row("transition_energy", te.rydberg_ev, "eV");
    row("transition_energy_printed_form", te.printed_ev, "eV");
    row("omega0", te.omega0, "rad/s");
    row("wavelength", te.wavelength, "m");
    row("d12_closed_form", d12_exact(), "q a0");
    row("transition_time_1m", transition_time(1.0, &k, None)?, "s");
    row("transition_time_1m_1sr", transition_time(1.0, &k, Some(1.0))?, "s");
    row("chain_power_1m_d12_3", chain.power, "W");
    row("chain_tau_1m_d12_3", chain.tau, "s");
    let mut out = RunOutput::default();
    out.table("constants.csv", &t)?;
    out.note("transition_energy_ev", format_f64(te.rydberg_ev));
    out.note("energy_forms_disagree", te.discrepancy);
    out.note("transition_time_1m_s", format_f64(transition_time(1.0, &k, None)?));
    Ok(out)
}
