//! Small-data global existence: the computed norm stays under the explicit
//! decay envelope when the data and forcing budgets hold.

use torwave::harness::run_experiment;
use torwave::scenario::{default_spec, ExperimentKind};

fn main() -> torwave::Result<()> {
    let spec = default_spec(ExperimentKind::VerifyThm1)?;
    println!(
        "scenario: κ = {}, N = {}, data at half budget, forcing at half budget",
        spec.scenario.kappa, spec.scenario.n
    );
    let out = run_experiment(&spec, std::path::Path::new("out/decay_envelope"))?;
    for c in &out.conditions {
        println!(
            "  {} {:<22} margin {:.3e}",
            if c.satisfied { "ok " } else { "FAIL" },
            c.name,
            c.margin
        );
    }
    println!(
        "minimal envelope margin over [0,30]: {:.3e}",
        out.summary["min_envelope_margin"].as_f64().unwrap()
    );
    println!("artifacts in out/decay_envelope/ (timeseries.csv has hnorm_u vs envelope)");
    Ok(())
}
