//! Classify outcomes (decayed / bounded / blow-up) over a forcing-level
//! grid at fixed damping.

use torwave::harness::run_sweep;
use torwave::scenario::{default_spec, ExperimentKind, SweepSpec};

fn main() -> torwave::Result<()> {
    let spec = default_spec(ExperimentKind::Sweep)?;
    let grid = SweepSpec {
        kappa: vec![0.5],
        a0: vec![0.0, 0.01, 0.02, 0.1, 0.5, 2.0],
        data_scale: vec![1.0],
    };
    let rows = run_sweep(&spec, &grid, 4)?;
    println!(
        "{:>8} {:>8} {:>9} {:>10} {:>12}",
        "kappa", "a0", "outcome", "blowup_t", "final_norm"
    );
    for row in rows {
        println!(
            "{:>8} {:>8} {:>9} {:>10} {:>12.4e}",
            row["kappa"].as_f64().unwrap(),
            row["a0"].as_f64().unwrap(),
            row["outcome"].as_str().unwrap(),
            row["blowup_time"]
                .as_f64()
                .map(|t| format!("{t:.3}"))
                .unwrap_or_else(|| "-".into()),
            row["final_norm"].as_f64().unwrap(),
        );
    }
    Ok(())
}
