//! Non-decay under a positive forcing floor: the mean tends to a strictly
//! positive limit while the homogeneous part of the solution dies out.

use torwave::diag::nondecay_lower_bound;
use torwave::harness::run_experiment;
use torwave::linear::DampingParam;
use torwave::scenario::{default_spec, ExperimentKind};

fn main() -> torwave::Result<()> {
    let spec = default_spec(ExperimentKind::VerifyThm32)?;
    let bound = nondecay_lower_bound(0.0, 0.0, 0.05, DampingParam::new(0.5)?);
    println!("lower bound on the limit mean:");
    println!("  as printed:      {:.6}", bound.printed);
    println!("  ODE-consistent:  {:.6}", bound.ode_consistent);

    let out = run_experiment(&spec, std::path::Path::new("out/zero_mode_floor"))?;
    println!(
        "mean at t = 100:   {:.6}",
        out.summary["final_u0"].as_f64().unwrap()
    );
    println!(
        "homogeneous norm:  {:.3e} (decays to zero)",
        out.summary["final_hnorm"].as_f64().unwrap()
    );
    println!("passed: {}", out.passed);
    Ok(())
}
