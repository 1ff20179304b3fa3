//! Experiment execution: dispatch of the verification scenarios, parameter
//! sweeps, and deterministic CSV/JSON report emission.
//!
//! Every experiment writes into its output directory:
//!
//! * `scenario_resolved.json` — the materialized scenario (reloadable);
//! * `timeseries.csv` (or `blowup.csv`, `sweep.csv`) — the data rows;
//! * `conditions.json` — all checked conditions with margins;
//! * `summary.json` — pass/fail per check; byte-stable across runs;
//! * `*.plotspec` — column mappings for external plotting;
//! * `timings.json` — wall-clock figures (the one non-deterministic file).

use crate::blowup::{
    check_blowup_conditions, find_min_blowup_a0, g_lower_bound, integrate_f, lifespan_bound,
    omega, omega_inv, BlowupParams,
};
use crate::diag::{
    energy_smallness_condition, exp_decay_smallness_condition, fit_decay_rate,
    fixed_point_conditions, nondecay_lower_bound, ConditionReport, DiagnosticsRecord,
};
use crate::field::{SobolevIndex, SpectralField};
use crate::hyperbolic::{
    assemble_state, energy, gronwall_energy_bound, integrate, ExpDecayParams,
};
use crate::linear::DampingParam;
use crate::scenario::{ExperimentKind, ExperimentSpec, SolverChoice, SweepSpec};
use crate::wave::{run, ForcingModel, Scheme, WaveState};
use crate::{Error, Result};
use serde_json::{json, Value};
use std::path::Path;
use std::time::Instant;

/// Outcome of one experiment: overall pass/fail plus the emitted summary.
pub struct ExperimentOutcome {
    pub passed: bool,
    pub summary: Value,
    pub conditions: Vec<ConditionReport>,
    /// Final second-order state, when the experiment produced one.
    pub final_wave_state: Option<WaveState>,
}

fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn write_timeseries(path: &Path, records: &[DiagnosticsRecord]) -> Result<()> {
    let mut out = String::from("t,hnorm_u,norm_u,energy_E,u0_mean,envelope,forcing_norm,flags\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.t),
            fmt(r.hnorm_u),
            fmt(r.norm_u),
            fmt(r.energy_e),
            fmt(r.u0_mean),
            fmt(r.envelope),
            fmt(r.forcing_norm),
            r.flags
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_plotspec(path: &Path, csv: &str, x: &str, ys: &[&str], logy: bool, title: &str) -> Result<()> {
    let mut s = String::new();
    s.push_str(&format!("file: {csv}\n"));
    s.push_str(&format!("x: {x}\n"));
    s.push_str(&format!("y: {}\n", ys.join(" ")));
    s.push_str(&format!("logy: {logy}\n"));
    s.push_str(&format!("title: {title}\n"));
    std::fs::write(path, s)?;
    Ok(())
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn conditions_json(conds: &[ConditionReport]) -> Value {
    serde_json::to_value(conds).expect("serializable")
}

/// Dispatch an experiment and write its artifacts under `out`.
pub fn run_experiment(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    run_experiment_with_workers(spec, out, None)
}

/// As [`run_experiment`], overriding the sweep worker count.
pub fn run_experiment_with_workers(
    spec: &ExperimentSpec,
    out: &Path,
    workers: Option<usize>,
) -> Result<ExperimentOutcome> {
    std::fs::create_dir_all(out)?;
    let started = Instant::now();
    write_json(
        &out.join("scenario_resolved.json"),
        &serde_json::to_value(&spec.resolved)?,
    )?;
    let outcome = match spec.kind {
        ExperimentKind::Simulate => experiment_simulate(spec, out)?,
        ExperimentKind::BlowupOde => experiment_blowup_ode(spec, out)?,
        ExperimentKind::VerifyThm1 => experiment_thm1(spec, out)?,
        ExperimentKind::VerifyThm32 => experiment_thm32(spec, out)?,
        ExperimentKind::VerifyThm42 => experiment_thm42(spec, out, false)?,
        ExperimentKind::VerifyThm46 => experiment_thm42(spec, out, true)?,
        ExperimentKind::VerifyThm51Blowup => experiment_thm51(spec, out)?,
        ExperimentKind::Sweep => experiment_sweep(spec, out, workers)?,
    };
    write_json(&out.join("summary.json"), &outcome.summary)?;
    write_json(&out.join("conditions.json"), &conditions_json(&outcome.conditions))?;
    // wall-clock lives outside the deterministic artifacts
    write_json(
        &out.join("timings.json"),
        &json!({ "wall_seconds": started.elapsed().as_secs_f64() }),
    )?;
    Ok(outcome)
}

fn experiment_simulate(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    let mut final_wave_state = None;
    let (records, blowup) = match spec.solver {
        SolverChoice::Wave => {
            let r = run(&spec.scenario, spec.scenario.sample_every)?;
            final_wave_state = Some(r.final_state);
            (r.records, r.blowup)
        }
        SolverChoice::Hyperbolic => {
            let r = integrate(&spec.scenario, spec.scenario.sample_every)?;
            (r.records, r.blowup)
        }
    };
    write_timeseries(&out.join("timeseries.csv"), &records)?;
    write_plotspec(
        &out.join("timeseries.plotspec"),
        "timeseries.csv",
        "t",
        &["hnorm_u", "norm_u"],
        true,
        "solution norms",
    )?;
    let passed = blowup.is_none();
    let summary = json!({
        "kind": "simulate",
        "passed": passed,
        "checks": {
            "no_blowup": passed,
        },
        "final": {
            "t": records.last().map(|r| r.t),
            "hnorm_u": records.last().map(|r| r.hnorm_u),
            "norm_u": records.last().map(|r| r.norm_u),
        },
        "blowup_time": blowup.map(|b| b.t),
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions: vec![],
        final_wave_state,
    })
}

fn experiment_blowup_ode(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    let b = &spec.blowup;
    let kappa = DampingParam::new(b.kappa)?;
    let (a0, scan) = match b.a0 {
        Some(v) => (v, None),
        None => {
            let scan = find_min_blowup_a0(kappa, b.f0, b.g0, b.t_max)?;
            (scan.a0_bound, Some(scan))
        }
    };
    let params = BlowupParams::new(kappa, a0, b.f0, b.g0);
    let conditions = check_blowup_conditions(&params);
    let lifespan = lifespan_bound(&params).ok();
    let tr = integrate_f(&params, |_| a0, b.t_max, b.threshold);

    let mut csv = String::from("t,F,Fprime\n");
    for &(t, f, fp) in &tr.samples {
        csv.push_str(&format!("{},{},{}\n", fmt(t), fmt(f), fmt(fp)));
    }
    std::fs::write(out.join("blowup.csv"), csv)?;
    write_plotspec(
        &out.join("blowup.plotspec"),
        "blowup.csv",
        "t",
        &["F"],
        true,
        "zero-mode growth",
    )?;

    let all_conditions = conditions.iter().all(|c| c.satisfied);
    let within_bound = match (tr.blowup_time, lifespan) {
        (Some(tb), Some((_, t1))) => tb <= t1,
        _ => false,
    };
    let passed = all_conditions && tr.blowup_time.is_some() && within_bound;
    let summary = json!({
        "kind": "blowup_ode",
        "passed": passed,
        "a0": a0,
        "a0_bisection": scan.map(|s| json!({
            "a0_bound": s.a0_bound,
            "a0_observed": s.a0_observed,
        })),
        "derived": {
            "alpha": params.alpha(),
            "lambda": params.lambda(),
            "beta": params.beta(),
            "tau1": lifespan.map(|(tau1, _)| tau1),
            "t1": lifespan.map(|(_, t1)| fmt(t1)),
        },
        "checks": {
            "hypotheses": all_conditions,
            "blowup_observed": tr.blowup_time.is_some(),
            "blowup_within_bound": within_bound,
        },
        "blowup_time": tr.blowup_time,
        "terminal_reason": format!("{:?}", tr.terminal_reason),
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions,
        final_wave_state: None,
    })
}

fn experiment_thm1(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    let cfg = &spec.scenario;
    let kappa = cfg.damping()?;
    let m = SobolevIndex::supercritical(cfg.m)?;
    let c_m = cfg.c_m.expect("materialized");
    let sup_a = cfg.forcing.sup_norm_hm(m, cfg.t_final);
    let mut conditions = fixed_point_conditions(&cfg.f, &cfg.g, sup_a, kappa, m, c_m).to_vec();

    let r = run(cfg, cfg.sample_every)?;
    write_timeseries(&out.join("timeseries.csv"), &r.records)?;
    write_plotspec(
        &out.join("timeseries.plotspec"),
        "timeseries.csv",
        "t",
        &["hnorm_u", "envelope"],
        true,
        "norm vs decay envelope",
    )?;

    let mut min_margin = f64::INFINITY;
    for rec in &r.records {
        min_margin = min_margin.min(rec.envelope - rec.hnorm_u);
    }
    conditions.push(ConditionReport::lt(
        "envelope-domination",
        -min_margin,
        0.0,
    ));
    let conds_ok = conditions.iter().all(|c| c.satisfied);
    let passed = conds_ok && r.blowup.is_none();
    let summary = json!({
        "kind": "verify_thm1",
        "passed": passed,
        "checks": {
            "smallness_conditions": conditions[..3].iter().all(|c| c.satisfied),
            "envelope_domination": min_margin > 0.0,
            "no_blowup": r.blowup.is_none(),
        },
        "min_envelope_margin": min_margin,
        "sup_a": sup_a,
        "c_m": c_m,
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions,
        final_wave_state: None,
    })
}

fn experiment_thm32(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    let cfg = &spec.scenario;
    let kappa = cfg.damping()?;
    let f0 = cfg.f.mean_part()?;
    let g0 = cfg.g.mean_part()?;
    // the forcing floor of a constant-profile forcing is its amplitude
    let a0 = cfg.forcing.profile.mean_part()?;
    let bound = nondecay_lower_bound(f0, g0, a0, kappa);

    let r = run(cfg, cfg.sample_every)?;
    write_timeseries(&out.join("timeseries.csv"), &r.records)?;
    write_plotspec(
        &out.join("timeseries.plotspec"),
        "timeseries.csv",
        "t",
        &["u0_mean", "hnorm_u"],
        false,
        "mean floor vs homogeneous decay",
    )?;
    let last = r.records.last().expect("records nonempty");
    let floor_ok = last.u0_mean >= 0.9 * bound.ode_consistent;
    let decay_ok = last.hnorm_u < 1e-4;
    let conditions = vec![
        ConditionReport::le("mean-floor", 0.9 * bound.ode_consistent, last.u0_mean),
        ConditionReport::lt("homogeneous-decay", last.hnorm_u, 1e-4),
    ];
    let passed = floor_ok && decay_ok && r.blowup.is_none();
    let summary = json!({
        "kind": "verify_thm32",
        "passed": passed,
        "checks": {
            "mean_floor": floor_ok,
            "homogeneous_decay": decay_ok,
            "no_blowup": r.blowup.is_none(),
        },
        "lower_bound": {
            "printed": bound.printed,
            "ode_consistent": bound.ode_consistent,
        },
        "final_u0": last.u0_mean,
        "final_hnorm": last.hnorm_u,
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions,
        final_wave_state: None,
    })
}

fn experiment_thm42(spec: &ExperimentSpec, out: &Path, fit_rate: bool) -> Result<ExperimentOutcome> {
    let cfg = &spec.scenario;
    let kappa = cfg.damping()?;
    let m = SobolevIndex::supercritical(cfg.m)?;
    let c_m = cfg.c_m.expect("materialized");
    let sup_a = cfg.forcing.sup_norm_hm(m, cfg.t_final);

    let initial = assemble_state(&cfg.f, &cfg.g, cfg.kappa)?;
    let alpha = energy(&initial, m).sqrt();
    let beta = spec.beta.unwrap_or_else(|| crate::diag::default_beta(cfg.kappa));

    let mut conditions = vec![];
    if fit_rate {
        let params = ExpDecayParams::new(spec.lambda);
        conditions.push(exp_decay_smallness_condition(
            alpha, sup_a, kappa, &params, beta, c_m,
        )?);
    } else {
        conditions.push(energy_smallness_condition(alpha, sup_a, kappa, beta, c_m)?);
    }

    let r = integrate(cfg, cfg.sample_every)?;
    write_timeseries(&out.join("timeseries.csv"), &r.records)?;
    write_plotspec(
        &out.join("timeseries.plotspec"),
        "timeseries.csv",
        "t",
        &["energy_E", "hnorm_u"],
        true,
        "energy monotonicity and decay",
    )?;

    let e0 = r.records[0].energy_e;
    let mut monotone_ok = true;
    let mut worst_excess = f64::NEG_INFINITY;
    for rec in &r.records {
        let excess = rec.energy_e - e0 * (1.0 + 1e-8);
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            monotone_ok = false;
        }
    }
    conditions.push(ConditionReport::le(
        "energy-monotonicity",
        worst_excess,
        0.0,
    ));

    // Gronwall domination with running suprema from t0 = 0
    let mut sup_u = 0.0f64;
    let mut sup_ap = 0.0f64;
    let mut gronwall_ok = true;
    let mut worst_gronwall = f64::INFINITY;
    for (rec, state) in r.records.iter().zip(&r.trajectory) {
        let nu = state.u.sobolev_norm(m, true);
        sup_u = sup_u.max(nu);
        sup_ap = sup_ap.max(rec.forcing_norm * crate::diag::nonlinearity_majorant(nu, c_m));
        let bound = gronwall_energy_bound(
            e0,
            0.0,
            rec.t,
            sup_u,
            sup_ap,
            cfg.kappa,
            cfg.drop_exp_factor,
        );
        let margin = bound * (1.0 + 1e-9) - rec.energy_e.sqrt();
        worst_gronwall = worst_gronwall.min(margin);
        if margin < 0.0 {
            gronwall_ok = false;
        }
    }
    conditions.push(ConditionReport::le(
        "gronwall-domination",
        -worst_gronwall,
        0.0,
    ));

    // asymptotic decay of the homogeneous norm
    let h0 = r.records[0].hnorm_u;
    let decay_ref = r
        .records
        .iter()
        .filter(|rec| rec.t >= 40.0)
        .map(|rec| rec.hnorm_u)
        .fold(f64::INFINITY, f64::min);
    let decay_ok = if cfg.t_final >= 40.0 && h0 > 0.0 {
        decay_ref <= 1e-3 * h0
    } else {
        true
    };

    let mut checks = json!({
        "smallness": conditions[0].satisfied,
        "energy_monotone": monotone_ok,
        "gronwall_domination": gronwall_ok,
        "decay_to_zero": decay_ok,
        "no_blowup": r.blowup.is_none(),
    });

    let mut fitted = None;
    if fit_rate {
        let series: Vec<(f64, f64)> = r.records.iter().map(|rec| (rec.t, rec.hnorm_u)).collect();
        let fit = fit_decay_rate(&series, (10.0, 40.0))?;
        let kappa_prime = cfg.kappa * (1.0 - cfg.kappa) / 2.0;
        conditions.push(ConditionReport::le("decay-rate", kappa_prime, fit.rate));
        checks["decay_rate_admissible"] = json!(fit.rate >= kappa_prime);
        fitted = Some(json!({
            "rate": fit.rate,
            "r_squared": fit.r_squared,
            "samples": fit.samples_used,
            "kappa_prime": kappa_prime,
            "lambda": spec.lambda,
        }));
    }

    let passed = conditions.iter().all(|c| c.satisfied)
        && decay_ok
        && r.blowup.is_none();
    let summary = json!({
        "kind": if fit_rate { "verify_thm46" } else { "verify_thm42" },
        "passed": passed,
        "checks": checks,
        "alpha": alpha,
        "beta": beta,
        "sup_a": sup_a,
        "energy_initial": e0,
        "energy_final": r.records.last().map(|rec| rec.energy_e),
        "fit": fitted,
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions,
        final_wave_state: None,
    })
}

/// Re-integrate the zero-mode ODE landing exactly on the requested times,
/// so comparisons against solver records carry no interpolation error.
fn oracle_at_times(params: &BlowupParams, a0: f64, times: &[f64]) -> Vec<Option<f64>> {
    let kap = params.kappa;
    let mut y = vec![params.f0, params.g0];
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target < t || !y[0].is_finite() || y[0].abs() > 1e10 {
            out.push(None);
            continue;
        }
        if target > t {
            let sol = crate::ode::integrate_adaptive(
                |s, y: &[f64], dy: &mut [f64]| {
                    dy[0] = y[1];
                    dy[1] = -2.0 * kap * y[1]
                        + (-kap * s).exp() * a0 * (1.0 + y[0]).powi(3);
                },
                t,
                &y,
                target,
                1e-12,
                |_, y| !y[0].is_finite() || y[0].abs() > 1e10,
            );
            let (tl, yl) = sol.last();
            t = *tl;
            y = yl.clone();
        }
        out.push(if (t - target).abs() < 1e-12 * target.max(1.0) {
            Some(y[0])
        } else {
            None
        });
    }
    out
}

fn experiment_thm51(spec: &ExperimentSpec, out: &Path) -> Result<ExperimentOutcome> {
    let b = &spec.blowup;
    let kappa = DampingParam::new(b.kappa)?;
    let (a0, scan) = match b.a0 {
        Some(v) => (v, None),
        None => {
            let scan = find_min_blowup_a0(kappa, b.f0, b.g0, b.t_max)?;
            (scan.a0_bound, Some(scan))
        }
    };
    let params = BlowupParams::new(kappa, a0, b.f0, b.g0);
    let mut conditions = check_blowup_conditions(&params);
    let (tau1, t1) = lifespan_bound(&params)?;

    // the scalar oracle
    let tr = integrate_f(&params, |_| a0, b.t_max, b.threshold);
    let mut csv = String::from("t,F,Fprime\n");
    for &(t, f, fp) in &tr.samples {
        csv.push_str(&format!("{},{},{}\n", fmt(t), fmt(f), fmt(fp)));
    }
    std::fs::write(out.join("blowup.csv"), csv)?;
    let ode_blowup = tr.blowup_time;
    let ode_in_bound = ode_blowup.map(|tb| tb < t1).unwrap_or(false);
    conditions.push(ConditionReport::lt(
        "ode-blowup-before-bound",
        ode_blowup.unwrap_or(f64::INFINITY),
        t1,
    ));

    // the full solver on spatially constant data reduces to the same ODE
    let mut cfg = spec.scenario.clone();
    cfg.kappa = b.kappa;
    cfg.n = 1;
    cfg.m = spec.scenario.m;
    cfg.f = SpectralField::constant(1, b.f0);
    cfg.g = SpectralField::constant(1, b.g0);
    cfg.forcing = ForcingModel::constant(1, a0);
    cfg.scheme = Scheme::ExpRk4 { substeps: 1 };
    cfg.dt = 2.5e-4;
    cfg.t_final = ode_blowup.map(|tb| tb + 1.0).unwrap_or(b.t_max).min(b.t_max);
    cfg.blowup_threshold = 1e6;
    cfg.sample_every = 100;
    let pde = run(&cfg, cfg.sample_every)?;
    write_timeseries(&out.join("timeseries.csv"), &pde.records)?;
    write_plotspec(
        &out.join("timeseries.plotspec"),
        "timeseries.csv",
        "t",
        &["u0_mean"],
        true,
        "mean growth toward blow-up",
    )?;

    // agreement while the oracle is well inside the pre-ignition window;
    // the oracle is re-integrated exactly onto the record times
    let record_times: Vec<f64> = pde.records.iter().map(|r| r.t).collect();
    let oracle = oracle_at_times(&params, a0, &record_times);
    let mut max_dev: f64 = 0.0;
    for (rec, f_oracle) in pde.records.iter().zip(&oracle) {
        if let Some(f_oracle) = f_oracle {
            if f_oracle.abs() <= 0.5 {
                max_dev = max_dev.max((rec.u0_mean - f_oracle).abs());
            }
        }
    }
    conditions.push(ConditionReport::le("pde-ode-agreement", max_dev, 1e-8));
    let pde_flagged = pde.blowup.is_some();
    conditions.push(ConditionReport::lt(
        "pde-blowup-flag",
        if pde_flagged { 0.0 } else { 1.0 },
        0.5,
    ));

    // pointwise lower bound at 20 transformed times
    let mut bound_ok = true;
    let mut bound_checked = 0;
    if let Some(tb) = ode_blowup {
        let tau_hi = (omega(tb, b.kappa)).min(tau1) - 1e-9;
        for i in 0..20 {
            let tau = 1.0 + (tau_hi - 1.0) * i as f64 / 19.0;
            let t = omega_inv(tau, b.kappa).min(tb);
            if let (Some((f, _)), Ok(lower)) = (tr.at(t), g_lower_bound(&params, tau)) {
                bound_checked += 1;
                if params.alpha() * (1.0 + f) < lower * (1.0 - 1e-9) {
                    bound_ok = false;
                }
            }
        }
    }
    conditions.push(ConditionReport::le(
        "pointwise-lower-bound",
        if bound_ok && bound_checked == 20 { 0.0 } else { 1.0 },
        0.0,
    ));

    let passed = conditions.iter().all(|c| c.satisfied);
    let summary = json!({
        "kind": "verify_thm51_blowup",
        "passed": passed,
        "a0": a0,
        "a0_bisection": scan.map(|s| json!({
            "a0_bound": s.a0_bound,
            "a0_observed": s.a0_observed,
        })),
        "tau1": tau1,
        "t1": fmt(t1),
        "ode_blowup_time": ode_blowup,
        "pde_blowup_time": pde.blowup.map(|e| e.t),
        "checks": {
            "hypotheses": conditions[..4].iter().all(|c| c.satisfied),
            "ode_blowup_before_bound": ode_in_bound,
            "pde_ode_agreement": max_dev <= 1e-8,
            "pde_flagged": pde_flagged,
            "pointwise_lower_bound": bound_ok && bound_checked == 20,
        },
        "max_mean_deviation": max_dev,
        "terminal_reason": format!("{:?}", tr.terminal_reason),
    });
    Ok(ExperimentOutcome {
        passed,
        summary,
        conditions,
        final_wave_state: None,
    })
}

/// One classified sweep row.
#[derive(Clone, Debug)]
struct SweepRow {
    kappa: f64,
    a0: f64,
    data_scale: f64,
    outcome: &'static str,
    blowup_time: Option<f64>,
    final_norm: f64,
    cond_data_budget: bool,
    cond_forcing_budget: bool,
    cond_contraction: bool,
    cond_energy_smallness: bool,
    cond_blowup: bool,
}

fn sweep_point(spec: &ExperimentSpec, kappa: f64, a0: f64, scale: f64) -> Result<SweepRow> {
    let mut cfg = spec.scenario.clone();
    cfg.kappa = kappa;
    let mut f = cfg.f.clone();
    f.scale(scale);
    let mut g = cfg.g.clone();
    g.scale(scale);
    cfg.f = f;
    cfg.g = g;
    cfg.forcing = ForcingModel::constant(cfg.n, a0);
    cfg.validate()?;

    let m = SobolevIndex::supercritical(cfg.m)?;
    let m1 = SobolevIndex::new(cfg.m + 1.0)?;
    let damping = DampingParam::new(kappa)?;
    let c_m = cfg.c_m.expect("materialized");
    let fp = fixed_point_conditions(&cfg.f, &cfg.g, a0.abs(), damping, m, c_m);
    let initial = assemble_state(&cfg.f, &cfg.g, kappa)?;
    let alpha = energy(&initial, m).sqrt();
    let energy_small = if alpha > 0.0 {
        energy_smallness_condition(
            alpha,
            a0.abs(),
            damping,
            crate::diag::default_beta(kappa),
            c_m,
        )?
        .satisfied
    } else {
        a0 == 0.0
    };
    let blow_conds = check_blowup_conditions(&BlowupParams::new(
        damping,
        a0,
        cfg.f.mean_part()?,
        cfg.g.mean_part()?,
    ));

    let r = run(&cfg, usize::MAX)?;
    let initial_norm = cfg.f.sobolev_norm(m1, false);
    let final_norm = r.final_state.u.sobolev_norm(m1, false);
    let outcome = if r.blowup.is_some() {
        "blowup"
    } else if final_norm <= (1e-3 * initial_norm).max(1e-4) {
        "decayed"
    } else {
        "bounded"
    };
    Ok(SweepRow {
        kappa,
        a0,
        data_scale: scale,
        outcome,
        blowup_time: r.blowup.map(|b| b.t),
        final_norm,
        cond_data_budget: fp[0].satisfied,
        cond_forcing_budget: fp[1].satisfied,
        cond_contraction: fp[2].satisfied,
        cond_energy_smallness: energy_small,
        cond_blowup: blow_conds.iter().all(|c| c.satisfied),
    })
}

/// Grid execution with a worker pool; rows are written in grid order
/// regardless of completion order.
pub fn run_sweep(spec: &ExperimentSpec, grid: &SweepSpec, workers: usize) -> Result<Vec<Value>> {
    if grid.kappa.is_empty() || grid.a0.is_empty() || grid.data_scale.is_empty() {
        return Err(Error::Scenario(
            "sweep grid axes must all be nonempty".into(),
        ));
    }
    let mut points = vec![];
    for &k in &grid.kappa {
        for &a in &grid.a0 {
            for &s in &grid.data_scale {
                points.push((k, a, s));
            }
        }
    }
    let workers = workers.max(1).min(points.len());
    let results: Vec<std::sync::Mutex<Option<Result<SweepRow>>>> =
        points.iter().map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= points.len() {
                    break;
                }
                let (k, a, s) = points[i];
                let row = sweep_point(spec, k, a, s);
                *results[i].lock().unwrap() = Some(row);
            });
        }
    });
    let mut rows = vec![];
    for (cell, (k, a, sc)) in results.into_iter().zip(points) {
        // per-row failures are recorded in place, not propagated
        match cell.into_inner().unwrap().expect("worker finished") {
            Ok(row) => rows.push(json!({
                "kappa": row.kappa,
                "a0": row.a0,
                "data_scale": row.data_scale,
                "outcome": row.outcome,
                "blowup_time": row.blowup_time,
                "final_norm": row.final_norm,
                "cond_data_budget": row.cond_data_budget,
                "cond_forcing_budget": row.cond_forcing_budget,
                "cond_contraction": row.cond_contraction,
                "cond_energy_smallness": row.cond_energy_smallness,
                "cond_blowup": row.cond_blowup,
            })),
            Err(e) => rows.push(json!({
                "kappa": k,
                "a0": a,
                "data_scale": sc,
                "outcome": "error",
                "error": format!("{e}"),
                "blowup_time": Value::Null,
                "final_norm": f64::NAN,
                "cond_data_budget": false,
                "cond_forcing_budget": false,
                "cond_contraction": false,
                "cond_energy_smallness": false,
                "cond_blowup": false,
            })),
        }
    }
    Ok(rows)
}

fn experiment_sweep(
    spec: &ExperimentSpec,
    out: &Path,
    workers: Option<usize>,
) -> Result<ExperimentOutcome> {
    let grid = spec
        .sweep
        .clone()
        .ok_or_else(|| Error::Scenario("sweep experiment needs a sweep grid".into()))?;
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|v| v.get())
            .unwrap_or(1)
    });
    let rows = run_sweep(spec, &grid, workers)?;

    let mut csv = String::from(
        "kappa,a0,data_scale,outcome,blowup_time,final_norm,cond_data_budget,cond_forcing_budget,cond_contraction,cond_energy_smallness,cond_blowup\n",
    );
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row["kappa"],
            row["a0"],
            row["data_scale"],
            row["outcome"].as_str().unwrap(),
            row["blowup_time"]
                .as_f64()
                .map(fmt)
                .unwrap_or_default(),
            fmt(row["final_norm"].as_f64().unwrap_or(f64::NAN)),
            row["cond_data_budget"],
            row["cond_forcing_budget"],
            row["cond_contraction"],
            row["cond_energy_smallness"],
            row["cond_blowup"],
        ));
    }
    std::fs::write(out.join("sweep.csv"), csv)?;
    write_plotspec(
        &out.join("sweep.plotspec"),
        "sweep.csv",
        "a0",
        &["final_norm"],
        true,
        "regime classification over the forcing axis",
    )?;
    let summary = json!({
        "kind": "sweep",
        "passed": true,
        "rows": rows.len(),
        "outcomes": rows.iter().map(|r| r["outcome"].clone()).collect::<Vec<_>>(),
    });
    Ok(ExperimentOutcome {
        passed: true,
        summary,
        conditions: vec![],
        final_wave_state: None,
    })
}
