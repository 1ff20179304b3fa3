//! First-order symmetric formulation of the damped wave equation in the
//! unknown `U = (du/dt + κu, ∂x u)`.
//!
//! The system reads
//!
//! ```text
//!     dU/dt = Σ_k B^k ∂_k U − κU + κ²(u,0,0,0)ᵀ + e^{−κt}(a(1+u)³,0,0,0)ᵀ
//! ```
//!
//! with constant symmetric B^k whose action is computed spectrally: the
//! first component receives `div q` and the remaining three `∂_k p`. The
//! scalar `u` itself is carried as an extra evolution variable
//! (`du/dt = p − κu`) so the `κ²u` source stays local.
//!
//! Time integration is classical four-stage Runge–Kutta, deliberately a
//! different algorithm from the exponential steppers of [`crate::wave`] so
//! the two solvers can serve as mutual oracles.
//!
//! The same machinery integrates the rescaled unknown `w = e^{−λt} u`
//! (λ < 0), whose system keeps the `κ²` source coefficient but has damping
//! `γ = κ + λ` and forcing `e^{−γt} a (1 + e^{λt} w)³`.

use crate::diag::DiagnosticsRecord;
use crate::field::{h_inner_product, SobolevIndex, SpectralField, Wavenumber};
use crate::wave::{scaled_nonlinear_forcing, BlowupEvent, ForcingModel, ScenarioConfig, WaveState};
use crate::{Error, Result};
use num_complex::Complex64;

/// Rescaling parameter of the exponential-decay transform `u = e^{λt} w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpDecayParams {
    pub lambda: f64,
}

impl ExpDecayParams {
    pub fn new(lambda: f64) -> Self {
        ExpDecayParams { lambda }
    }

    /// Half the supremum decay rate κ(1−κ): strictly admissible.
    pub fn default_for(kappa: f64) -> Self {
        ExpDecayParams {
            lambda: -kappa * (1.0 - kappa) / 2.0,
        }
    }

    pub fn gamma(&self, kappa: f64) -> f64 {
        kappa + self.lambda
    }

    /// Admissibility: λ < 0, κ + λ > 0 and κ²/(κ+λ) < 1.
    pub fn validate(&self, kappa: f64) -> Result<()> {
        let gamma = self.gamma(kappa);
        if !(self.lambda < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be negative, got {}",
                self.lambda
            )));
        }
        if !(gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa + lambda must be positive, got {gamma}"
            )));
        }
        if !(kappa * kappa / gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "kappa²/(kappa+lambda) must be below 1, got {}",
                kappa * kappa / gamma
            )));
        }
        Ok(())
    }
}

/// `(t, u, p = du/dt + κu, q = ∂x u)`.
#[derive(Clone, Debug)]
pub struct HyperbolicState {
    pub t: f64,
    pub u: SpectralField,
    pub p: SpectralField,
    pub q: [SpectralField; 3],
}

impl HyperbolicState {
    fn zeros_like(&self) -> HyperbolicState {
        let n = self.u.n();
        HyperbolicState {
            t: 0.0,
            u: SpectralField::zeros(n, true),
            p: SpectralField::zeros(n, true),
            q: [
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
            ],
        }
    }

    fn axpy(&mut self, s: f64, other: &HyperbolicState) {
        self.u.axpy(s, &other.u);
        self.p.axpy(s, &other.p);
        for j in 0..3 {
            self.q[j].axpy(s, &other.q[j]);
        }
    }

    fn is_finite(&self) -> bool {
        self.u.is_finite() && self.p.is_finite() && self.q.iter().all(|f| f.is_finite())
    }

    fn symmetrize(&mut self) {
        self.u.symmetrize();
        self.p.symmetrize();
        for f in self.q.iter_mut() {
            f.symmetrize();
        }
    }
}

/// Build the first-order state from `(u, du/dt)`: `p = du/dt + κu`,
/// `q = ∂x u`.
pub fn assemble_state(u: &SpectralField, ut: &SpectralField, kappa: f64) -> Result<HyperbolicState> {
    if u.n() != ut.n() {
        return Err(Error::RadiusMismatch { a: u.n(), b: ut.n() });
    }
    let mut p = ut.clone();
    p.axpy(kappa, u);
    Ok(HyperbolicState {
        t: 0.0,
        u: u.clone(),
        p,
        q: u.gradient(),
    })
}

/// Coefficients of the evolved system; the base equation has
/// `gamma = kappa` and `lambda = 0`, the rescaled one `gamma = kappa + λ`.
#[derive(Clone, Copy, Debug)]
pub struct SystemCoeffs {
    /// Damping of the evolved unknown.
    pub gamma: f64,
    /// Coefficient of the scalar source (κ² of the original equation).
    pub source_coeff: f64,
    /// State rescaling exponent inside the cubic (0 for the base system).
    pub lambda: f64,
    pub drop_exp_factor: bool,
}

impl SystemCoeffs {
    pub fn base(kappa: f64, drop_exp_factor: bool) -> Self {
        SystemCoeffs {
            gamma: kappa,
            source_coeff: kappa * kappa,
            lambda: 0.0,
            drop_exp_factor,
        }
    }

    pub fn rescaled(kappa: f64, params: ExpDecayParams, drop_exp_factor: bool) -> Self {
        SystemCoeffs {
            gamma: params.gamma(kappa),
            // γ² − (2κλ + λ²) collapses to κ²
            source_coeff: kappa * kappa,
            lambda: params.lambda,
            drop_exp_factor,
        }
    }

    pub fn of(cfg: &ScenarioConfig) -> Self {
        match cfg.exp_transform {
            Some(p) => SystemCoeffs::rescaled(cfg.kappa, p, cfg.drop_exp_factor),
            None => SystemCoeffs::base(cfg.kappa, cfg.drop_exp_factor),
        }
    }
}

/// Spectral divergence of the vector field `q`.
fn divergence(q: &[SpectralField; 3]) -> SpectralField {
    let mut out = SpectralField::zeros(q[0].n(), true);
    for i in 0..out.coeffs().len() {
        let k = out.wavenumber_at(i);
        let mut acc = Complex64::default();
        for j in 0..3 {
            acc += Complex64::new(0.0, k.0[j] as f64) * q[j].coeffs()[i];
        }
        out.coeffs_mut()[i] = acc;
    }
    out
}

/// Spectral partial derivative along axis `j`.
fn partial(f: &SpectralField, j: usize) -> SpectralField {
    let mut out = SpectralField::zeros(f.n(), true);
    for i in 0..out.coeffs().len() {
        let k = out.wavenumber_at(i);
        out.coeffs_mut()[i] = Complex64::new(0.0, k.0[j] as f64) * f.coeffs()[i];
    }
    out
}

/// Tendency of the full state under the symmetric system.
pub fn rhs_system(
    state: &HyperbolicState,
    sys: &SystemCoeffs,
    forcing: &ForcingModel,
) -> Result<HyperbolicState> {
    let g = scaled_nonlinear_forcing(
        state.t,
        &state.u,
        forcing,
        sys.drop_exp_factor,
        sys.gamma,
        sys.lambda,
    )?;
    let mut du = state.p.clone();
    du.axpy(-sys.gamma, &state.u);

    let mut dp = divergence(&state.q);
    dp.axpy(-sys.gamma, &state.p);
    dp.axpy(sys.source_coeff, &state.u);
    dp.axpy(1.0, &g);

    let dq = [0, 1, 2].map(|j| {
        let mut d = partial(&state.p, j);
        d.axpy(-sys.gamma, &state.q[j]);
        d
    });
    // the t field of a tendency is unused; stage times are set explicitly
    Ok(HyperbolicState {
        t: 0.0,
        u: du,
        p: dp,
        q: dq,
    })
}

/// Tendency of the base (un-rescaled) system.
pub fn rhs(
    state: &HyperbolicState,
    kappa: f64,
    forcing: &ForcingModel,
    drop_exp_factor: bool,
) -> Result<HyperbolicState> {
    rhs_system(state, &SystemCoeffs::base(kappa, drop_exp_factor), forcing)
}

/// `E = <U,U>_m = ||p||²_{Ḣ^m} + Σ_j ||q_j||²_{Ḣ^m}`.
pub fn energy(state: &HyperbolicState, m: SobolevIndex) -> f64 {
    let parts = [&state.p, &state.q[0], &state.q[1], &state.q[2]];
    h_inner_product(&parts, &parts, m).expect("same shape")
}

/// Result of a first-order integration.
pub struct HyperbolicRunResult {
    pub records: Vec<DiagnosticsRecord>,
    /// States sampled on the same cadence as the records.
    pub trajectory: Vec<HyperbolicState>,
    pub blowup: Option<BlowupEvent>,
}

fn record_of(cfg: &ScenarioConfig, state: &HyperbolicState, flags: &str) -> DiagnosticsRecord {
    let m = SobolevIndex::new(cfg.m).expect("validated");
    let m1 = SobolevIndex::new(cfg.m + 1.0).expect("validated");
    DiagnosticsRecord {
        t: state.t,
        hnorm_u: state.u.sobolev_norm(m1, true),
        norm_u: state.u.sobolev_norm(m1, false),
        energy_e: energy(state, m),
        u0_mean: state.u.coeffs()[state.u.index_of(Wavenumber::ZERO)].re,
        envelope: crate::diag::decay_envelope(cfg.kappa, state.t),
        forcing_norm: cfg.forcing.norm_hm(state.t, m),
        flags: flags.to_string(),
    }
}

/// Classical RK4 on the spectral system defined by `sys`, from the given
/// initial state. Samples (records + states) are taken every
/// `sample_every` accepted steps.
pub fn integrate_system(
    cfg: &ScenarioConfig,
    sys: &SystemCoeffs,
    initial: HyperbolicState,
    sample_every: usize,
) -> Result<HyperbolicRunResult> {
    let every = sample_every.max(1);
    let m1 = SobolevIndex::new(cfg.m + 1.0)?;
    let mut state = initial;
    let mut records = vec![record_of(cfg, &state, "")];
    let mut trajectory = vec![state.clone()];
    let mut blowup = None;
    let mut steps = 0usize;

    while state.t < cfg.t_final - 1e-12 * cfg.t_final.max(1.0) {
        let dt = cfg.dt.min(cfg.t_final - state.t);
        let k1 = rhs_system(&state, sys, &cfg.forcing)?;
        let mut s2 = state.clone();
        s2.axpy(dt / 2.0, &k1);
        s2.t = state.t + dt / 2.0;
        let k2 = rhs_system(&s2, sys, &cfg.forcing)?;
        let mut s3 = state.clone();
        s3.axpy(dt / 2.0, &k2);
        s3.t = state.t + dt / 2.0;
        let k3 = rhs_system(&s3, sys, &cfg.forcing)?;
        let mut s4 = state.clone();
        s4.axpy(dt, &k3);
        s4.t = state.t + dt;
        let k4 = rhs_system(&s4, sys, &cfg.forcing)?;

        let mut acc = k1.zeros_like();
        acc.axpy(1.0, &k1);
        acc.axpy(2.0, &k2);
        acc.axpy(2.0, &k3);
        acc.axpy(1.0, &k4);
        state.axpy(dt / 6.0, &acc);
        state.t += dt;
        state.symmetrize();
        steps += 1;

        let norm = state.u.sobolev_norm(m1, false);
        if !state.is_finite() || norm > cfg.blowup_threshold {
            blowup = Some(BlowupEvent { t: state.t, norm });
            records.push(record_of(cfg, &state, "blowup"));
            trajectory.push(state.clone());
            break;
        }
        if steps % every == 0 {
            records.push(record_of(cfg, &state, ""));
            trajectory.push(state.clone());
        }
    }
    if blowup.is_none() && records.last().map(|r| r.t) != Some(state.t) {
        records.push(record_of(cfg, &state, ""));
        trajectory.push(state.clone());
    }
    Ok(HyperbolicRunResult {
        records,
        trajectory,
        blowup,
    })
}

/// Integrate the scenario's system (base or rescaled per
/// `cfg.exp_transform`) from its initial data.
pub fn integrate(cfg: &ScenarioConfig, sample_every: usize) -> Result<HyperbolicRunResult> {
    cfg.validate()?;
    let sys = SystemCoeffs::of(cfg);
    let initial = assemble_state(&cfg.f, &cfg.g, sys.gamma)?;
    integrate_system(cfg, &sys, initial, sample_every)
}

/// Recommended RK4 step for radius `n`.
pub fn default_dt(n: u32) -> f64 {
    5e-4 * 1.0f64.min(1.0 / n as f64)
}

/// Residual `r(t) = ½ dE/dt + κE − F(t)√E` of the differential energy
/// inequality along a sampled trajectory, with
/// `F(t) = κ²||u||_{Ḣ^m} + e^{−κt} ||a||_{H^m} C_m³ (1+||u||²_{Ḣ^m})^{3/2}`.
/// Centered differences need at least three samples; the two endpoints are
/// dropped. Nonpositive residuals confirm the inequality.
pub fn energy_inequality_residual(
    trajectory: &[HyperbolicState],
    cfg: &ScenarioConfig,
) -> Result<Vec<(f64, f64)>> {
    let m = SobolevIndex::new(cfg.m)?;
    let kap = cfg.kappa;
    let c_m = cfg
        .c_m
        .unwrap_or_else(|| crate::field::analytic_multiplication_constant(m));
    let energies: Vec<f64> = trajectory.iter().map(|s| energy(s, m)).collect();
    let mut out = Vec::new();
    for i in 1..trajectory.len().saturating_sub(1) {
        let (s0, s1, s2) = (&trajectory[i - 1], &trajectory[i], &trajectory[i + 1]);
        let de = (energies[i + 1] - energies[i - 1]) / (s2.t - s0.t);
        let nu = s1.u.sobolev_norm(m, true);
        let damp = if cfg.drop_exp_factor {
            1.0
        } else {
            (-kap * s1.t).exp()
        };
        let f_t = kap * kap * nu
            + damp * cfg.forcing.norm_hm(s1.t, m) * c_m.powi(3) * (1.0 + nu * nu).powf(1.5);
        out.push((s1.t, 0.5 * de + kap * energies[i] - f_t * energies[i].sqrt()));
    }
    Ok(out)
}

/// The closed-form energy bound on `√E(t)`:
///
/// ```text
///   √E(t) <= e^{−κ(t−t₀)}√E(t₀) + κ(1−e^{−κ(t−t₀)}) sup||u||_{Ḣ^m}
///            + e^{−κt}(t−t₀) sup{ ||a||_{H^m} P(u) }
/// ```
///
/// With `drop_exp_factor`, the forced term becomes
/// `(1/κ)(1−e^{−κ(t−t₀)}) sup{...}`.
pub fn gronwall_energy_bound(
    e0: f64,
    t0: f64,
    t: f64,
    sup_u: f64,
    sup_ap: f64,
    kappa: f64,
    drop_exp_factor: bool,
) -> f64 {
    let decay = (-kappa * (t - t0)).exp();
    let forced = if drop_exp_factor {
        (1.0 - decay) / kappa * sup_ap
    } else {
        (-kappa * t).exp() * (t - t0) * sup_ap
    };
    decay * e0.sqrt() + kappa * (1.0 - decay) * sup_u + forced
}

/// Configuration of the rescaled system `w = e^{−λt} u`: same κ and
/// forcing profile, initial data `w(0) = f`, `dw/dt(0) = g − λf`.
pub fn transform_exp_decay(cfg: &ScenarioConfig, params: ExpDecayParams) -> Result<ScenarioConfig> {
    params.validate(cfg.kappa)?;
    let mut out = cfg.clone();
    let mut gw = cfg.g.clone();
    gw.axpy(-params.lambda, &cfg.f);
    out.g = gw;
    out.exp_transform = Some(params);
    Ok(out)
}

/// Map a rescaled-trajectory state back to the physical solution
/// `u = e^{λt} w` (and `du/dt = e^{λt}(dw/dt + λw)`).
pub fn rescaled_to_physical(state: &HyperbolicState, params: ExpDecayParams, kappa: f64) -> WaveState {
    let gamma = params.gamma(kappa);
    let scale = (params.lambda * state.t).exp();
    // dw/dt = p − γw
    let mut wt = state.p.clone();
    wt.axpy(-gamma, &state.u);
    let mut ut = wt;
    ut.axpy(params.lambda, &state.u);
    ut.scale(scale);
    WaveState {
        t: state.t,
        u: state.u.scaled(scale),
        ut,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::analytic_multiplication_constant;
    use crate::linear::{solve_linear, DampingParam};
    use crate::wave::{Modulation, WaveStepper};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k(a: i64, b: i64, c: i64) -> Wavenumber {
        Wavenumber([a, b, c])
    }

    #[test]
    fn assemble_cases() {
        let n = 2;
        let z = SpectralField::zeros(n, true);
        let s = assemble_state(&z, &z, 0.5).unwrap();
        assert_eq!(energy(&s, SobolevIndex::new(2.0).unwrap()), 0.0);

        let u = SpectralField::cosine(n, k(1, 0, 0), 1.0).unwrap();
        let s = assemble_state(&u, &z, 0.5).unwrap();
        // p = 0.5 cos(x1)
        assert!((s.p.get(k(1, 0, 0)).unwrap().re - 0.25).abs() < 1e-15);
        // q1 = -sin(x1)
        assert!((s.q[0].get(k(1, 0, 0)).unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn initial_energy_matches_norms() {
        let n = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = SpectralField::random(n, 0.7, 1.0, &mut rng);
        let g = SpectralField::random(n, 0.7, 1.0, &mut rng);
        let kap = 0.5;
        let m = SobolevIndex::new(2.0).unwrap();
        let m1 = SobolevIndex::new(3.0).unwrap();
        let s = assemble_state(&f, &g, kap).unwrap();
        let mut p = g.clone();
        p.axpy(kap, &f);
        let want = p.sobolev_norm(m, true).powi(2) + f.sobolev_norm(m1, true).powi(2);
        let got = energy(&s, m);
        assert!((got - want).abs() < 1e-12 * (1.0 + want));
    }

    #[test]
    fn rhs_transport_coupling() {
        // u = 0, p = cos(x1), q = 0, κ = 0, no forcing:
        // dp = div q = 0 and dq1 = ∂1 p = −sin(x1)
        let n = 2;
        let mut s = HyperbolicState {
            t: 0.0,
            u: SpectralField::zeros(n, true),
            p: SpectralField::cosine(n, k(1, 0, 0), 1.0).unwrap(),
            q: [
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
            ],
        };
        s.symmetrize();
        let d = rhs_system(
            &s,
            &SystemCoeffs {
                gamma: 0.0,
                source_coeff: 0.0,
                lambda: 0.0,
                drop_exp_factor: false,
            },
            &ForcingModel::zero(n),
        )
        .unwrap();
        assert!(d.p.coeffs().iter().all(|c| c.norm() < 1e-15));
        assert!((d.q[0].get(k(1, 0, 0)).unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(d.q[1].coeffs().iter().all(|c| c.norm() < 1e-15));

        // zero state gives zero tendency
        let z = HyperbolicState {
            t: 0.0,
            u: SpectralField::zeros(n, true),
            p: SpectralField::zeros(n, true),
            q: [
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
                SpectralField::zeros(n, true),
            ],
        };
        let d = rhs(&z, 0.5, &ForcingModel::zero(n), false).unwrap();
        assert!(d.u.coeffs().iter().all(|c| c.norm() == 0.0));
        assert!(d.p.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn rhs_consistent_with_wave_solver() {
        // finite differences of the second-order solver's (p, q) match the
        // first-order tendency to O(dt)
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = SpectralField::random(n, 0.2, 1.5, &mut rng);
        let g = SpectralField::random(n, 0.2, 1.5, &mut rng);
        let kap = 0.5;
        let mut cfg = ScenarioConfig::new(kap, n);
        cfg.f = f.clone();
        cfg.g = g.clone();
        cfg.forcing = ForcingModel::constant(n, 0.1);
        let dt = 1e-5;
        cfg.dt = dt;
        let mut stepper = WaveStepper::new(&cfg).unwrap();
        let s0 = crate::wave::WaveState::initial(&cfg);
        let s1 = stepper.step(&s0).unwrap();

        let h0 = assemble_state(&s0.u, &s0.ut, kap).unwrap();
        let mut h1 = assemble_state(&s1.u, &s1.ut, kap).unwrap();
        h1.t = s1.t;
        let tend = rhs(&h0, kap, &cfg.forcing, false).unwrap();

        let m = SobolevIndex::new(2.0).unwrap();
        let mut dp = h1.p.clone();
        dp.axpy(-1.0, &h0.p);
        dp.scale(1.0 / dt);
        dp.axpy(-1.0, &tend.p);
        assert!(dp.sobolev_norm(m, false) < 1e-3, "{}", dp.sobolev_norm(m, false));
        for j in 0..3 {
            let mut dq = h1.q[j].clone();
            dq.axpy(-1.0, &h0.q[j]);
            dq.scale(1.0 / dt);
            dq.axpy(-1.0, &tend.q[j]);
            assert!(dq.sobolev_norm(m, false) < 1e-3);
        }
    }

    #[test]
    fn zero_scenario_zero_energy() {
        let mut cfg = ScenarioConfig::new(0.5, 2);
        cfg.dt = 1e-2;
        cfg.t_final = 1.0;
        let r = integrate(&cfg, 10).unwrap();
        assert!(r.records.iter().all(|rec| rec.energy_e == 0.0));
    }

    #[test]
    fn conservative_limit_kappa_zero() {
        // forcing-free, κ = 0: E is conserved to RK4 accuracy
        let n = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = SpectralField::random(n, 0.5, 1.5, &mut rng);
        let g = SpectralField::random(n, 0.5, 1.5, &mut rng);
        let mut cfg = ScenarioConfig::new(0.5, n); // κ placeholder for records
        cfg.f = f.clone();
        cfg.g = g.clone();
        cfg.dt = 1e-3;
        cfg.t_final = 10.0;
        let sys = SystemCoeffs {
            gamma: 0.0,
            source_coeff: 0.0,
            lambda: 0.0,
            drop_exp_factor: false,
        };
        let initial = assemble_state(&f, &g, 0.0).unwrap();
        let m = SobolevIndex::new(2.0).unwrap();
        let e0 = energy(&initial, m);
        let r = integrate_system(&cfg, &sys, initial, 1000).unwrap();
        let e_end = r.records.last().unwrap().energy_e;
        assert!(
            (e_end - e0).abs() <= 1e-8 * e0,
            "energy drift {:.3e} over 10 units",
            (e_end - e0).abs() / e0
        );
    }

    #[test]
    fn linear_scenario_matches_exact_solver() {
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let f = SpectralField::random(n, 0.3, 1.5, &mut rng);
        let g = SpectralField::random(n, 0.3, 1.5, &mut rng);
        let kap = 0.5;
        // zero forcing: the system is exactly linear
        let mut cfg = ScenarioConfig::new(kap, n);
        cfg.f = f.clone();
        cfg.g = g.clone();
        cfg.dt = 1e-3;
        cfg.t_final = 5.0;
        let r = integrate(&cfg, usize::MAX).unwrap();
        let last = r.trajectory.last().unwrap();

        let exact = solve_linear(
            &f,
            &g,
            |_| SpectralField::zeros(n, true),
            DampingParam::new(kap).unwrap(),
            &[0.0, 5.0],
        )
        .unwrap();
        let m1 = SobolevIndex::new(3.0).unwrap();
        let mut d = last.u.clone();
        d.axpy(-1.0, &exact.last().unwrap().u);
        assert!(
            d.sobolev_norm(m1, true) < 1e-6,
            "hyperbolic vs exact linear: {:.3e}",
            d.sobolev_norm(m1, true)
        );
    }

    #[test]
    fn gradient_constraint_preserved() {
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let mut cfg = ScenarioConfig::new(0.5, n);
        cfg.f = SpectralField::random(n, 0.2, 1.5, &mut rng);
        cfg.g = SpectralField::random(n, 0.2, 1.5, &mut rng);
        cfg.forcing = ForcingModel::constant(n, 0.02);
        cfg.dt = 2e-3;
        cfg.t_final = 10.0;
        let r = integrate(&cfg, 500).unwrap();
        let mm1 = SobolevIndex::new(1.0).unwrap();
        for s in &r.trajectory {
            let grad = s.u.gradient();
            let mut worst = 0.0f64;
            for j in 0..3 {
                let mut d = s.q[j].clone();
                d.axpy(-1.0, &grad[j]);
                worst = worst.max(d.sobolev_norm(mm1, true));
            }
            assert!(worst < 1e-8, "constraint drift {worst:.3e} at t={}", s.t);
        }
    }

    #[test]
    fn energy_residual_nonpositive_for_small_data() {
        let n = 2;
        let mut cfg = ScenarioConfig::new(0.5, n);
        cfg.f = SpectralField::cosine(n, k(1, 0, 0), 0.1).unwrap();
        cfg.forcing = ForcingModel::constant(n, 1e-5);
        cfg.dt = 1e-3;
        cfg.t_final = 2.0;
        let r = integrate(&cfg, 100).unwrap();
        let res = energy_inequality_residual(&r.trajectory, &cfg).unwrap();
        assert!(!res.is_empty());
        let worst = res.iter().map(|(_, v)| *v).fold(f64::MIN, f64::max);
        assert!(worst <= 1e-4, "residual {worst:.3e} above tolerance");
    }

    #[test]
    fn energy_residual_differencing_converges() {
        // the residual is exact up to the centered-difference error of
        // dE/dt, which is second order in the sample spacing
        let n = 2;
        let mut cfg = ScenarioConfig::new(0.5, n);
        cfg.f = SpectralField::cosine(n, k(1, 0, 0), 0.3).unwrap();
        cfg.forcing = ForcingModel::constant(n, 0.01);
        cfg.dt = 1e-3;
        cfg.t_final = 2.0;

        let residuals_at = |every: usize| {
            let r = integrate(&cfg, every).unwrap();
            energy_inequality_residual(&r.trajectory, &cfg).unwrap()
        };
        let coarse = residuals_at(40); // spacing 0.04
        let medium = residuals_at(20);
        let fine = residuals_at(10);
        // compare on the coarse grid against the finest differencing
        let err_of = |series: &[(f64, f64)]| {
            series
                .iter()
                .filter_map(|(t, v)| {
                    fine.iter()
                        .find(|(tf, _)| (tf - t).abs() < 1e-12)
                        .map(|(_, vf)| (v - vf).abs())
                })
                .fold(0.0f64, f64::max)
        };
        let e_coarse = err_of(&coarse);
        let e_medium = err_of(&medium);
        let ratio = e_coarse / e_medium;
        assert!(
            (3.0..6.0).contains(&ratio),
            "differencing error ratio {ratio:.2} not second order ({e_coarse:.3e} vs {e_medium:.3e})"
        );
    }

    #[test]
    fn gronwall_bound_limits() {
        assert_eq!(gronwall_energy_bound(0.0, 0.0, 5.0, 0.0, 0.0, 0.5, false), 0.0);
        let e0 = 2.0;
        let b = gronwall_energy_bound(e0, 1.0, 1.0, 3.0, 4.0, 0.5, false);
        assert!((b - e0.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rescaled_system_reproduces_original() {
        let n = 2;
        let kap = 0.5;
        let mut cfg = ScenarioConfig::new(kap, n);
        cfg.f = SpectralField::cosine(n, k(1, 0, 0), 0.2).unwrap();
        cfg.g = SpectralField::cosine(n, k(0, 1, 0), 0.1).unwrap();
        cfg.forcing = ForcingModel::separable(
            SpectralField::constant(n, 0.01),
            Modulation::One,
        );
        cfg.dt = 1e-3;
        cfg.t_final = 3.0;

        let params = ExpDecayParams::new(-0.2);
        let direct = integrate(&cfg, usize::MAX).unwrap();
        let transformed_cfg = transform_exp_decay(&cfg, params).unwrap();
        let transformed = integrate(&transformed_cfg, usize::MAX).unwrap();

        let m1 = SobolevIndex::new(3.0).unwrap();
        let w_last = transformed.trajectory.last().unwrap();
        let mapped = rescaled_to_physical(w_last, params, kap);
        let u_last = direct.trajectory.last().unwrap();
        let mut d = mapped.u.clone();
        d.axpy(-1.0, &u_last.u);
        assert!(
            d.sobolev_norm(m1, true) < 1e-6,
            "rescaled route differs by {:.3e}",
            d.sobolev_norm(m1, true)
        );

        // λ → 0 degenerates to the original config
        let limit = transform_exp_decay(&cfg, ExpDecayParams::new(-1e-12)).unwrap();
        let mut dg = limit.g.clone();
        dg.axpy(-1.0, &cfg.g);
        assert!(dg.sobolev_norm(m1, true) < 1e-10);
    }

    #[test]
    fn exp_decay_param_arithmetic() {
        // κ=0.5, λ=−0.2: γ=0.3, κ²/γ = 5/6 < 1, admissible
        let p = ExpDecayParams::new(-0.2);
        assert!((p.gamma(0.5) - 0.3).abs() < 1e-15);
        assert!(p.validate(0.5).is_ok());
        assert!((0.25f64 / 0.3 - 5.0 / 6.0).abs() < 1e-12);
    }
}
