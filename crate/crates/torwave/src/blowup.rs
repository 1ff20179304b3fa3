//! The zero-mode blow-up mechanism: for spatially averaged data the
//! equation collapses to the scalar ODE
//!
//! ```text
//!     F'' + 2κF' = e^{−κt} a₀(t) (1 + F)³,   F(0) = f₀,  F'(0) = g₀,
//! ```
//!
//! which ignites for large enough forcing floor `a₀` despite the decaying
//! prefactor. The time change `τ = ω(t) = 2 − e^{−2κt}` transforms the
//! associated differential inequality into `G'' >= (a₀/4κ²)(1+G)³` on
//! `[1,2)`, whose first integral yields a closed-form upper bound on the
//! lifespan:
//!
//! ```text
//!     τ₁ = (κ / (α√λ)) ln(1/β) + 1,      t₁ = ω⁻¹(τ₁),
//! ```
//!
//! with `α = (a₀/2)^{1/4}`, `λ = sqrt((a₀/2)(1+f₀)⁴ − g₀²)` and
//! `β = (α(1+f₀) − √λ) / (α(1+f₀) + √λ)`. The bound is informative only
//! when `τ₁ < 2`.

use crate::diag::ConditionReport;
use crate::linear::DampingParam;
use crate::ode::{integrate_adaptive, StopReason};
use crate::{Error, Result};

/// Default threshold treated as numerical blow-up of the scalar ODE.
pub const ODE_BLOWUP_THRESHOLD: f64 = 1e8;

/// Parameters of the blow-up scenario with the derived quantities of the
/// lifespan bound. Construction never fails; the hypothesis checks report
/// on invalid combinations instead.
#[derive(Clone, Copy, Debug)]
pub struct BlowupParams {
    pub kappa: f64,
    pub a0: f64,
    pub f0: f64,
    pub g0: f64,
}

impl BlowupParams {
    pub fn new(kappa: DampingParam, a0: f64, f0: f64, g0: f64) -> Self {
        BlowupParams {
            kappa: kappa.value(),
            a0,
            f0,
            g0,
        }
    }

    /// `α = (a₀/2)^{1/4}`.
    pub fn alpha(&self) -> f64 {
        (self.a0 / 2.0).powf(0.25)
    }

    /// `λ² = (a₀/2)(1+f₀)⁴ − g₀²` (may be negative for bad parameters).
    pub fn lambda_sq(&self) -> f64 {
        (self.a0 / 2.0) * (1.0 + self.f0).powi(4) - self.g0 * self.g0
    }

    /// `λ = sqrt(λ²)`; NaN when the discriminant is negative.
    pub fn lambda(&self) -> f64 {
        self.lambda_sq().sqrt()
    }

    /// `β = (α(1+f₀) − √λ) / (α(1+f₀) + √λ)`.
    pub fn beta(&self) -> f64 {
        let c = self.alpha() * (1.0 + self.f0);
        let sl = self.lambda().sqrt();
        (c - sl) / (c + sl)
    }
}

/// `τ = ω(t) = 2 − e^{−2κt}`, mapping `[0,∞)` onto `[1,2)`.
pub fn omega(t: f64, kappa: f64) -> f64 {
    2.0 - (-2.0 * kappa * t).exp()
}

/// Inverse of [`omega`]; `τ >= 2` has no finite preimage and returns +∞.
pub fn omega_inv(tau: f64, kappa: f64) -> f64 {
    if tau >= 2.0 {
        return f64::INFINITY;
    }
    -(2.0 - tau).ln() / (2.0 * kappa)
}

/// The closed-form lifespan bound `(τ₁, t₁)`; `t₁ = +∞` when `τ₁ >= 2`.
/// Degenerate `λ <= 0` is reported as an error (the bound formula is
/// singular there and the comparison argument gives no information).
pub fn lifespan_bound(params: &BlowupParams) -> Result<(f64, f64)> {
    let l2 = params.lambda_sq();
    if !(l2 > 0.0) {
        return Err(Error::DegenerateLifespan(format!(
            "λ² = {l2:.6e} must be positive for the closed-form bound"
        )));
    }
    let alpha = params.alpha();
    let sqrt_lambda = params.lambda().sqrt();
    let beta = params.beta();
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::DegenerateLifespan(format!(
            "β = {beta:.6e} outside (0,1)"
        )));
    }
    let tau1 = params.kappa / (alpha * sqrt_lambda) * (1.0 / beta).ln() + 1.0;
    Ok((tau1, omega_inv(tau1, params.kappa)))
}

/// The four hypothesis checks: data positivity, the forcing floor, the
/// discriminant sign, and the lifespan-in-range condition.
pub fn check_blowup_conditions(params: &BlowupParams) -> Vec<ConditionReport> {
    let positivity = ConditionReport::lt(
        "data-positivity",
        0.0,
        (1.0 + params.f0).min(params.g0),
    );
    let floor = ConditionReport::lt("forcing-floor", 0.0, params.a0);
    let discriminant = ConditionReport::le(
        "discriminant",
        params.g0 * params.g0,
        (params.a0 / 2.0) * (1.0 + params.f0).powi(4),
    );
    let lifespan = match lifespan_bound(params) {
        Ok((tau1, _)) => ConditionReport::lt("lifespan-range", tau1 - 1.0, 1.0),
        Err(_) => ConditionReport::lt("lifespan-range", f64::INFINITY, 1.0),
    };
    vec![positivity, floor, discriminant, lifespan]
}

/// Why [`integrate_f`] stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminalReason {
    Horizon,
    Threshold,
    StepCollapse,
}

/// Trajectory of the scalar ODE with the first threshold crossing, if any.
#[derive(Clone, Debug)]
pub struct OdeTrajectory {
    /// `(t, F, F')` at every accepted step.
    pub samples: Vec<(f64, f64, f64)>,
    pub blowup_time: Option<f64>,
    pub terminal_reason: TerminalReason,
}

impl OdeTrajectory {
    /// Linear interpolation of `(F, F')` at a time inside the sampled range.
    pub fn at(&self, t: f64) -> Option<(f64, f64)> {
        let s = &self.samples;
        if s.is_empty() || t < s[0].0 || t > s.last().unwrap().0 {
            return None;
        }
        let i = s.partition_point(|&(st, _, _)| st <= t).min(s.len() - 1);
        if i == 0 {
            return Some((s[0].1, s[0].2));
        }
        let (t0, f0, d0) = s[i - 1];
        let (t1, f1, d1) = s[i];
        if t1 == t0 {
            return Some((f1, d1));
        }
        let w = (t - t0) / (t1 - t0);
        Some((f0 + w * (f1 - f0), d0 + w * (d1 - d0)))
    }
}

/// Integrate the zero-mode ODE with forcing coefficient `a_hat0(t)` by
/// adaptive embedded Runge–Kutta (local tolerance 1e−10), stopping at the
/// `threshold` or at `t_max`.
pub fn integrate_f<A: Fn(f64) -> f64>(
    params: &BlowupParams,
    a_hat0: A,
    t_max: f64,
    threshold: f64,
) -> OdeTrajectory {
    let kap = params.kappa;
    let sol = integrate_adaptive(
        |t, y, dy| {
            dy[0] = y[1];
            dy[1] = -2.0 * kap * y[1] + (-kap * t).exp() * a_hat0(t) * (1.0 + y[0]).powi(3);
        },
        0.0,
        &[params.f0, params.g0],
        t_max,
        1e-10,
        |_, y| !y[0].is_finite() || y[0].abs() >= threshold,
    );
    let samples: Vec<(f64, f64, f64)> = sol
        .samples
        .iter()
        .map(|(t, y)| (*t, y[0], y[1]))
        .collect();
    let (blowup_time, terminal_reason) = match sol.reason {
        StopReason::Horizon => (None, TerminalReason::Horizon),
        StopReason::Event => (Some(samples.last().unwrap().0), TerminalReason::Threshold),
        StopReason::StepCollapse => {
            // the integrator stalled; treat a huge final value as a crossing
            let last = samples.last().unwrap();
            if last.1.abs() >= threshold {
                (Some(last.0), TerminalReason::Threshold)
            } else {
                (None, TerminalReason::StepCollapse)
            }
        }
    };
    OdeTrajectory {
        samples,
        blowup_time,
        terminal_reason,
    }
}

/// Pointwise lower bound on `α(1+G(τ))` from the first-integral argument:
/// `√λ (βE + 1)/(1 − βE)` with `E = e^{(α√λ/κ)(τ−1)}`, valid while `βE < 1`.
pub fn g_lower_bound(params: &BlowupParams, tau: f64) -> Result<f64> {
    if !(tau >= 1.0) {
        return Err(Error::OutOfValidity {
            tau,
            why: "the transformed time starts at 1".into(),
        });
    }
    let l2 = params.lambda_sq();
    if !(l2 > 0.0) {
        return Err(Error::DegenerateLifespan("λ² <= 0".into()));
    }
    let alpha = params.alpha();
    let sqrt_lambda = params.lambda().sqrt();
    let beta = params.beta();
    let e = (alpha * sqrt_lambda / params.kappa * (tau - 1.0)).exp();
    if beta * e >= 1.0 {
        return Err(Error::OutOfValidity {
            tau,
            why: format!("βE = {:.6e} >= 1 (past the bound's lifespan)", beta * e),
        });
    }
    Ok(sqrt_lambda * (beta * e + 1.0) / (1.0 - beta * e))
}

/// Residual series of the transformed-picture inequalities along an ODE
/// trajectory: the curvature bound `G'' >= (a₀/4κ²)(1+G)³`, the first
/// integral `(G')² >= (a₀/8κ²)(1+G)⁴ − λ²/(4κ²)`, and the slope bound
/// `G' >= (1/2κ)(√(a₀/2)(1+G)² − λ)`. All residuals are nonnegative when
/// the hypotheses hold.
#[derive(Clone, Debug)]
pub struct TransformedResiduals {
    /// `(τ, G'' − (a₀/4κ²)(1+G)³)`; G'' computed through the ODE itself.
    pub curvature: Vec<(f64, f64)>,
    /// `(τ, (G')² − [(a₀/8κ²)(1+G)⁴ − λ²/(4κ²)])`
    pub first_integral: Vec<(f64, f64)>,
    /// `(τ, G' − (1/2κ)(√(a₀/2)(1+G)² − λ))`
    pub slope: Vec<(f64, f64)>,
}

/// Map an [`integrate_f`] trajectory through `τ = ω(t)` and evaluate the
/// three inequality residuals at every sample. `a_hat0` must be the same
/// forcing the trajectory was produced with.
pub fn transformed_comparison<A: Fn(f64) -> f64>(
    params: &BlowupParams,
    trajectory: &OdeTrajectory,
    a_hat0: A,
) -> TransformedResiduals {
    let kap = params.kappa;
    let a0 = params.a0;
    let lambda_sq = params.lambda_sq();
    let mut curvature = Vec::new();
    let mut first_integral = Vec::new();
    let mut slope = Vec::new();
    for &(t, f, fp) in &trajectory.samples {
        let tau = omega(t, kap);
        let wp = 2.0 * kap * (-2.0 * kap * t).exp(); // ω'(t)
        let g = f;
        let gp = fp / wp;
        // F'' + 2κF' = G''(ω')², so G'' follows from the ODE itself
        let f2 = -2.0 * kap * fp + (-kap * t).exp() * a_hat0(t) * (1.0 + f).powi(3);
        let gpp = (f2 + 2.0 * kap * fp) / (wp * wp);
        curvature.push((tau, gpp - a0 / (4.0 * kap * kap) * (1.0 + g).powi(3)));
        first_integral.push((
            tau,
            gp * gp
                - (a0 / (8.0 * kap * kap) * (1.0 + g).powi(4)
                    - lambda_sq / (4.0 * kap * kap)),
        ));
        slope.push((
            tau,
            gp - ((a0 / 2.0).sqrt() * (1.0 + g).powi(2) - lambda_sq.sqrt())
                / (2.0 * kap),
        ));
    }
    TransformedResiduals {
        curvature,
        first_integral,
        slope,
    }
}

/// Result of the forcing-threshold search.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdScan {
    /// Smallest `a₀` whose closed-form lifespan bound is informative
    /// (the sufficient condition of the theorem).
    pub a0_bound: f64,
    /// Smallest `a₀` at which the ODE actually crosses the threshold by
    /// `t_max` (the observed ignition level; at most `a0_bound`).
    pub a0_observed: f64,
}

/// The lifespan-in-range condition as a function of `a₀` (negative means
/// satisfied): `(κ/(α√λ)) ln(1/β) − 1`.
fn lifespan_gap(kappa: f64, f0: f64, g0: f64, a0: f64) -> f64 {
    let p = BlowupParams {
        kappa,
        a0,
        f0,
        g0,
    };
    match lifespan_bound(&p) {
        Ok((tau1, _)) => tau1 - 2.0,
        Err(_) => f64::INFINITY,
    }
}

/// Bisect the smallest forcing floor making the closed-form bound
/// informative, and scan for the smallest floor at which the ODE is
/// observed to blow up by `t_max`. Exposes the gap between the sufficient
/// condition and the actual ignition threshold.
pub fn find_min_blowup_a0(
    kappa: DampingParam,
    f0: f64,
    g0: f64,
    t_max: f64,
) -> Result<ThresholdScan> {
    let kap = kappa.value();
    if !(1.0 + f0 > 0.0) || !(g0 > 0.0) {
        return Err(Error::InvalidParameter(
            "threshold scan needs 1 + f0 > 0 and g0 > 0".into(),
        ));
    }
    // the discriminant demands a0 >= 2 g0² / (1+f0)^4
    let a_floor = 2.0 * g0 * g0 / (1.0 + f0).powi(4);
    let mut lo = a_floor;
    let mut hi = a_floor.max(1e-6);
    let mut guard = 0;
    while lifespan_gap(kap, f0, g0, hi) >= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::DegenerateLifespan(
                "no informative bound found while doubling a0".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lifespan_gap(kap, f0, g0, mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
    }
    let a0_bound = hi;

    // observed threshold: bisect on actual threshold crossings
    let blows = |a0: f64| {
        let p = BlowupParams {
            kappa: kap,
            a0,
            f0,
            g0,
        };
        integrate_f(&p, |_| a0, t_max, ODE_BLOWUP_THRESHOLD)
            .blowup_time
            .is_some()
    };
    let mut ob_hi = a0_bound;
    if !blows(ob_hi) {
        // the sufficient condition should ignite; widen just in case
        let mut guard = 0;
        while !blows(ob_hi) {
            ob_hi *= 2.0;
            guard += 1;
            if guard > 40 {
                return Err(Error::DegenerateLifespan(
                    "ODE does not ignite even far above the bound".into(),
                ));
            }
        }
    }
    let mut ob_lo = a_floor;
    for _ in 0..60 {
        let mid = 0.5 * (ob_lo + ob_hi);
        if blows(mid) {
            ob_hi = mid;
        } else {
            ob_lo = mid;
        }
        if (ob_hi - ob_lo) <= 1e-9 * ob_hi {
            break;
        }
    }
    Ok(ThresholdScan {
        a0_bound,
        a0_observed: ob_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kap(v: f64) -> DampingParam {
        DampingParam::new(v).unwrap()
    }

    #[test]
    fn omega_maps_and_inverts() {
        for &k in &[0.1, 0.5, 0.9] {
            assert!((omega(0.0, k) - 1.0).abs() < 1e-15);
            assert!(omega(10.0 / k, k) < 2.0);
            assert!(omega(1e9, k) <= 2.0); // saturates at the limit in floats
            let t = omega_inv(1.5, k);
            assert!((omega(t, k) - 1.5).abs() < 1e-14);
            assert_eq!(omega_inv(2.0, k), f64::INFINITY);
            assert_eq!(omega_inv(2.5, k), f64::INFINITY);
            // monotone increasing
            assert!(omega(1.0, k) < omega(2.0, k));
        }
    }

    #[test]
    fn linear_control_without_forcing() {
        // a ≡ 0 violates the floor hypothesis and gives the closed form
        // F(t) = f0 + (g0/2κ)(1 − e^{−2κt}), bounded
        let p = BlowupParams::new(kap(0.5), 0.0, 0.3, 0.2);
        let tr = integrate_f(&p, |_| 0.0, 30.0, 1e8);
        assert_eq!(tr.terminal_reason, TerminalReason::Horizon);
        assert!(tr.blowup_time.is_none());
        for &(t, f, _) in tr.samples.iter() {
            let want = 0.3 + 0.2 / 1.0 * (1.0 - (-t).exp());
            assert!((f - want).abs() < 1e-7, "t={t}: {f} vs {want}");
        }
    }

    #[test]
    fn small_forcing_stays_bounded() {
        let p = BlowupParams::new(kap(0.5), 0.01, 0.0, 0.01);
        let tr = integrate_f(&p, |_| 0.01, 200.0, 1e8);
        assert!(tr.blowup_time.is_none());
        assert!(tr.samples.last().unwrap().1 < 1.0);
    }

    #[test]
    fn monotone_growth_under_hypotheses() {
        let p = BlowupParams::new(kap(0.3), 5.0, 0.0, 0.1);
        let tr = integrate_f(&p, |_| 5.0, 50.0, 1e8);
        for &(_, _, fp) in &tr.samples {
            assert!(fp > 0.0, "F' must stay positive under the hypotheses");
        }
    }

    #[test]
    fn conditions_report_cases() {
        // margins per direct arithmetic
        let p = BlowupParams::new(kap(0.3), 100.0, 0.0, 0.1);
        let reps = check_blowup_conditions(&p);
        assert!(reps.iter().all(|r| r.satisfied), "{reps:?}");
        let disc = reps.iter().find(|r| r.name == "discriminant").unwrap();
        assert!((disc.margin - 49.99).abs() < 1e-12);

        // g0 = 0 fails positivity
        let p = BlowupParams::new(kap(0.3), 100.0, 0.0, 0.0);
        let reps = check_blowup_conditions(&p);
        let pos = reps.iter().find(|r| r.name == "data-positivity").unwrap();
        assert!(!pos.satisfied);

        // boundary discriminant: λ = 0, lifespan inconclusive
        let a0 = 2.0 * 0.1f64 * 0.1;
        let p = BlowupParams::new(kap(0.3), a0, 0.0, 0.1);
        let reps = check_blowup_conditions(&p);
        let disc = reps.iter().find(|r| r.name == "discriminant").unwrap();
        assert!(disc.satisfied);
        assert!(disc.margin.abs() < 1e-18);
        assert!(lifespan_bound(&p).is_err());
        let ls = reps.iter().find(|r| r.name == "lifespan-range").unwrap();
        assert!(!ls.satisfied);
    }

    #[test]
    fn lifespan_tightens_with_forcing() {
        let mut prev_tau = f64::INFINITY;
        let mut prev_t = f64::INFINITY;
        for &a0 in &[1e2, 1e4, 1e6] {
            let p = BlowupParams::new(kap(0.4), a0, 0.1, 0.2);
            let (tau1, t1) = lifespan_bound(&p).unwrap();
            assert!(tau1 > 1.0);
            assert!(tau1 < prev_tau);
            assert!(t1 < prev_t);
            prev_tau = tau1;
            prev_t = t1;
        }
        // the bound approaches the initial time as a0 grows
        let p = BlowupParams::new(kap(0.4), 1e12, 0.1, 0.2);
        let (tau1, t1) = lifespan_bound(&p).unwrap();
        assert!(tau1 - 1.0 < 1e-2);
        assert!(t1 < 2e-2);
    }

    #[test]
    fn bound_silent_when_condition_fails() {
        // barely above the discriminant floor: λ > 0 but tiny, τ₁ >= 2
        let g0 = 0.1;
        let a0 = 2.0 * g0 * g0 * 1.000001;
        let p = BlowupParams::new(kap(0.25), a0, 0.0, g0);
        let (tau1, t1) = lifespan_bound(&p).unwrap();
        assert!(tau1 >= 2.0);
        assert_eq!(t1, f64::INFINITY);
    }

    #[test]
    fn ode_crossing_before_bound() {
        let kappa = kap(0.25);
        let scan = find_min_blowup_a0(kappa, 0.0, 0.1, 400.0).unwrap();
        assert!(scan.a0_observed <= scan.a0_bound * (1.0 + 1e-6));
        let p = BlowupParams::new(kappa, scan.a0_bound, 0.0, 0.1);
        let (tau1, t1) = lifespan_bound(&p).unwrap();
        assert!(tau1 < 2.0);
        let tr = integrate_f(&p, |_| scan.a0_bound, 400.0, ODE_BLOWUP_THRESHOLD);
        let tb = tr.blowup_time.expect("must ignite at the bound level");
        assert!(
            tb <= t1,
            "numerical blow-up {tb} after the closed-form bound {t1}"
        );
    }

    #[test]
    fn bound_valid_across_parameter_grid() {
        // whenever the lifespan condition holds, the observed crossing
        // precedes the closed-form bound: 5 x 2 x 2 grid in (κ, g0, a0)
        let mut checked = 0;
        for &k in &[0.2, 0.35, 0.5, 0.65, 0.8] {
            for &g0 in &[0.05, 0.2] {
                let scan = find_min_blowup_a0(kap(k), 0.0, g0, 400.0).unwrap();
                for &factor in &[1.0, 2.0] {
                    let a0 = scan.a0_bound * factor;
                    let p = BlowupParams {
                        kappa: k,
                        a0,
                        f0: 0.0,
                        g0,
                    };
                    let (tau1, t1) = lifespan_bound(&p).unwrap();
                    assert!(tau1 < 2.0 + 1e-9);
                    let tr = integrate_f(&p, |_| a0, 400.0, ODE_BLOWUP_THRESHOLD);
                    let tb = tr
                        .blowup_time
                        .unwrap_or_else(|| panic!("no ignition at κ={k} g0={g0} a0={a0}"));
                    assert!(
                        tb <= t1,
                        "κ={k} g0={g0} a0={a0}: crossing {tb} after bound {t1}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked >= 20);
    }

    #[test]
    fn lower_bound_at_start_and_divergence() {
        let p = BlowupParams::new(kap(0.25), 50.0, 0.2, 0.1);
        // τ = 1 reduces to α(1+f₀) by the definition of β
        let b = g_lower_bound(&p, 1.0).unwrap();
        assert!((b - p.alpha() * (1.0 + p.f0)).abs() < 1e-12);
        let (tau1, _) = lifespan_bound(&p).unwrap();
        // divergence toward τ₁
        let near = g_lower_bound(&p, tau1 * 0.999999 + 1e-9).unwrap_or(f64::INFINITY);
        assert!(near > 1e3 * b);
        // beyond validity
        assert!(g_lower_bound(&p, tau1).is_err());
        assert!(g_lower_bound(&p, 0.5).is_err());
    }

    #[test]
    fn trajectory_dominates_lower_bound() {
        let kappa = kap(0.25);
        let scan = find_min_blowup_a0(kappa, 0.0, 0.1, 400.0).unwrap();
        let a0 = scan.a0_bound * 1.5;
        let p = BlowupParams::new(kappa, a0, 0.0, 0.1);
        let tr = integrate_f(&p, |_| a0, 400.0, ODE_BLOWUP_THRESHOLD);
        assert!(tr.blowup_time.is_some());
        let (tau1, _) = lifespan_bound(&p).unwrap();
        let tau_max = omega(tr.blowup_time.unwrap(), p.kappa).min(tau1) - 1e-9;
        for i in 0..20 {
            let tau = 1.0 + (tau_max - 1.0) * i as f64 / 19.0;
            let t = omega_inv(tau, p.kappa);
            if let (Some((f, _)), Ok(bound)) = (tr.at(t), g_lower_bound(&p, tau)) {
                let lhs = p.alpha() * (1.0 + f);
                assert!(
                    lhs >= bound * (1.0 - 1e-6),
                    "α(1+G) = {lhs} below bound {bound} at τ = {tau}"
                );
            }
        }
    }

    #[test]
    fn transformed_residuals_nonnegative() {
        let kappa = kap(0.25);
        let p = BlowupParams::new(kappa, 10.0, 0.0, 0.1);
        let tr = integrate_f(&p, |_| 10.0, 400.0, ODE_BLOWUP_THRESHOLD);
        let res = transformed_comparison(&p, &tr, |_| 10.0);
        for (tau, r) in res
            .curvature
            .iter()
            .chain(&res.first_integral)
            .chain(&res.slope)
        {
            assert!(*r >= -1e-6, "residual {r:.3e} at τ = {tau}");
        }
        // curvature residual grows with t (the e^{3κt} factor widens it)
        let c = &res.curvature;
        assert!(c.last().unwrap().1 > c[1].1);
    }

    #[test]
    fn floor_violation_can_go_negative() {
        // â₀(t) decaying below the declared floor breaks the curvature bound
        let p = BlowupParams::new(kap(0.25), 10.0, 0.0, 0.1);
        let decaying = |t: f64| 10.0 * (-2.0 * t).exp();
        let tr = integrate_f(&p, decaying, 20.0, ODE_BLOWUP_THRESHOLD);
        let res = transformed_comparison(&p, &tr, decaying);
        let min_curv = res
            .curvature
            .iter()
            .map(|(_, r)| *r)
            .fold(f64::INFINITY, f64::min);
        assert!(min_curv < 0.0, "expected violated curvature, got {min_curv}");
    }
}
