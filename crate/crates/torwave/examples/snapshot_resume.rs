//! Binary snapshots: save a state mid-run, resume, and compare against the
//! uninterrupted trajectory.

use torwave::field::{SobolevIndex, SpectralField, Wavenumber};
use torwave::snapshot::{load_state_file, save_state_file, SnapshotState};
use torwave::wave::{run, run_from, ForcingModel, ScenarioConfig};

fn main() -> torwave::Result<()> {
    let n = 2;
    let mut cfg = ScenarioConfig::new(0.5, n);
    cfg.f = SpectralField::cosine(n, Wavenumber([1, 0, 0]), 0.1)?;
    cfg.forcing = ForcingModel::constant(n, 0.01);
    cfg.dt = 1e-3;
    cfg.t_final = 5.0;

    let halfway = run(&cfg, usize::MAX)?.final_state;
    let path = std::env::temp_dir().join("torwave_example_state.nws");
    save_state_file(&path, &SnapshotState::Wave(halfway), cfg.m)?;
    println!("saved state at t = 5 to {}", path.display());

    let (loaded, m) = load_state_file(&path)?;
    let state = match loaded {
        SnapshotState::Wave(w) => w,
        _ => unreachable!(),
    };
    println!("loaded: t = {}, n = {}, m = {m}", state.t, state.u.n());

    let mut cfg10 = cfg.clone();
    cfg10.t_final = 10.0;
    let resumed = run_from(&cfg10, state, usize::MAX)?.final_state;
    let direct = run(&cfg10, usize::MAX)?.final_state;
    let m1 = SobolevIndex::new(3.0)?;
    let mut d = resumed.u.clone();
    d.axpy(-1.0, &direct.u);
    println!(
        "resumed vs uninterrupted at t = 10: {:.3e}",
        d.sobolev_norm(m1, false)
    );
    Ok(())
}
