//! Exponential decay rate: rescale u = e^{λt} w with admissible λ < 0,
//! check the stronger smallness bound, and fit the observed rate of the
//! homogeneous norm against the admissible κ' < κ(1−κ).

use torwave::harness::run_experiment;
use torwave::hyperbolic::{integrate, rescaled_to_physical, transform_exp_decay, ExpDecayParams};
use torwave::field::SobolevIndex;
use torwave::scenario::{default_spec, ExperimentKind};

fn main() -> torwave::Result<()> {
    let spec = default_spec(ExperimentKind::VerifyThm46)?;
    let out = run_experiment(&spec, std::path::Path::new("out/exponential_decay_fit"))?;
    let fit = &out.summary["fit"];
    println!(
        "fitted rate {:.4} over [10,40]  (admissible κ' = {}, λ = {})",
        fit["rate"].as_f64().unwrap(),
        fit["kappa_prime"].as_f64().unwrap(),
        fit["lambda"].as_f64().unwrap(),
    );
    println!("r² of the log-linear fit: {:.6}", fit["r_squared"].as_f64().unwrap());

    // the rescaled system route: integrate w, map back, compare
    let mut cfg = spec.scenario.clone();
    cfg.t_final = 3.0;
    let params = ExpDecayParams::default_for(cfg.kappa);
    let direct = integrate(&cfg, usize::MAX)?;
    let transformed = integrate(&transform_exp_decay(&cfg, params)?, usize::MAX)?;
    let mapped = rescaled_to_physical(transformed.trajectory.last().unwrap(), params, cfg.kappa);
    let m1 = SobolevIndex::new(cfg.m + 1.0)?;
    let mut d = mapped.u.clone();
    d.axpy(-1.0, &direct.trajectory.last().unwrap().u);
    println!(
        "rescaled-system route differs from the direct run by {:.3e} at t = 3",
        d.sobolev_norm(m1, true)
    );
    Ok(())
}
