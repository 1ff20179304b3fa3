//! Exact per-mode propagation of the linearized damped wave equation.
//!
//! Each Fourier mode of
//!
//! ```text
//!     d²u/dt² + 2κ du/dt − Δu = e^{−κt} F(t,x)
//! ```
//!
//! is a scalar ODE `u_k'' + 2κ u_k' + |k|² u_k = e^{−κt} F_k(t)`. For
//! `k ≠ 0` the homogeneous solution is
//! `e^{−κt}(f_k cos(νt) + (g_k + κ f_k) sin(νt)/ν)` with
//! `ν = sqrt(|k|² − κ²)`, plus a Duhamel term evaluated here by composite
//! Gauss–Legendre quadrature with panel refinement. The zero mode has the
//! closed form obtained by direct integration of `u_0'' + 2κ u_0' = e^{−κt} F_0`.
//!
//! These formulas double as the linear core of the nonlinear integrators and
//! as the oracle the time steppers are checked against.

use crate::field::{SobolevIndex, SpectralField};
use crate::quad::gl8_panels;
use crate::wave::WaveState;
use crate::{Error, Result};
use num_complex::Complex64;

/// Default convergence tolerance for the Duhamel quadrature.
pub const DUHAMEL_TOL: f64 = 1e-12;

/// Damping coefficient κ, restricted to (0,1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingParam(f64);

impl DampingParam {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa < 1.0) {
            return Err(Error::BadDamping(kappa));
        }
        Ok(DampingParam(kappa))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Amplitude and velocity of a single Fourier mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeState {
    pub u_hat: Complex64,
    pub v_hat: Complex64,
}

impl ModeState {
    pub fn zero() -> Self {
        ModeState {
            u_hat: Complex64::default(),
            v_hat: Complex64::default(),
        }
    }
}

/// sin(x)/x, series-evaluated near zero.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// (1 - e^{-2x}) / (2x) evaluated stably.
fn expm1_ratio(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -(-2.0 * x).exp_m1() / (2.0 * x)
    }
}

/// 2x2 homogeneous propagator over an interval `dt` for squared wavenumber
/// `k2` (k2 = 0 selects the zero-mode form).
pub(crate) fn propagator_matrix(kappa: f64, k2: f64, dt: f64) -> [[f64; 2]; 2] {
    if k2 == 0.0 {
        let a12 = dt * expm1_ratio(kappa * dt);
        [[1.0, a12], [0.0, (-2.0 * kappa * dt).exp()]]
    } else {
        let nu = (k2 - kappa * kappa).sqrt();
        let e = (-kappa * dt).exp();
        let co = (nu * dt).cos();
        let s = dt * sinc(nu * dt);
        [
            [e * (co + kappa * s), e * s],
            [-e * k2 * s, e * (co - kappa * s)],
        ]
    }
}

/// Duhamel kernels in elapsed time `tau = t - s`: the response of
/// `(u, u')` at `t` to a unit impulse of the right-hand side at `s`.
pub(crate) fn duhamel_kernels(kappa: f64, k2: f64, tau: f64) -> (f64, f64) {
    if k2 == 0.0 {
        (tau * expm1_ratio(kappa * tau), (-2.0 * kappa * tau).exp())
    } else {
        let nu = (k2 - kappa * kappa).sqrt();
        let e = (-kappa * tau).exp();
        let s = tau * sinc(nu * tau);
        (e * s, e * ((nu * tau).cos() - kappa * s))
    }
}

/// Duhamel contribution over `[t0, t1]` for a scalar mode with RHS
/// `e^{−κs} f(s)`, refined until two successive panel counts agree.
fn duhamel_scalar<F: FnMut(f64) -> Complex64>(
    kappa: f64,
    k2: f64,
    t0: f64,
    t1: f64,
    mut forcing: F,
    tol: f64,
) -> Result<(Complex64, Complex64)> {
    if t1 == t0 {
        return Ok((Complex64::default(), Complex64::default()));
    }
    let nu = if k2 > 0.0 {
        (k2 - kappa * kappa).sqrt()
    } else {
        2.0 * kappa
    };
    let mut panels = ((t1 - t0) * nu / 3.0).ceil().max(1.0) as usize;
    let eval = |panels: usize, forcing: &mut F| {
        let mut iu = Complex64::default();
        let mut iv = Complex64::default();
        gl8_panels(t0, t1, panels, |s, w| {
            let (ku, kv) = duhamel_kernels(kappa, k2, t1 - s);
            let r = (-kappa * s).exp() * forcing(s);
            iu += w * ku * r;
            iv += w * kv * r;
        });
        (iu, iv)
    };
    let mut prev = eval(panels, &mut forcing);
    for _ in 0..16 {
        panels *= 2;
        let cur = eval(panels, &mut forcing);
        let scale = 1.0 + cur.0.norm().max(cur.1.norm());
        if (cur.0 - prev.0).norm().max((cur.1 - prev.1).norm()) <= tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure { a: t0, b: t1, tol })
}

/// Exact solution of a nonzero mode at time `t`, given the initial state and
/// the forcing coefficient `F_k(s)` (the RHS carries the extra `e^{−κs}`).
pub fn propagate_mode<F: FnMut(f64) -> Complex64>(
    k: crate::field::Wavenumber,
    kappa: DampingParam,
    init: ModeState,
    forcing: F,
    t: f64,
) -> Result<ModeState> {
    let k2 = k.norm_sq();
    if k2 == 0.0 {
        return Err(Error::InvalidParameter(
            "propagate_mode needs k != 0; use propagate_zero_mode".into(),
        ));
    }
    let kap = kappa.value();
    let m = propagator_matrix(kap, k2, t);
    let (iu, iv) = duhamel_scalar(kap, k2, 0.0, t, forcing, DUHAMEL_TOL)?;
    Ok(ModeState {
        u_hat: m[0][0] * init.u_hat + m[0][1] * init.v_hat + iu,
        v_hat: m[1][0] * init.u_hat + m[1][1] * init.v_hat + iv,
    })
}

/// Zero-mode value at time `t` by the ODE-exact formula
///
/// ```text
///   u_0(t) = f0 + (g0 / 2κ)(1 − e^{−2κt})
///          + (1/2κ) ∫_0^t (1 − e^{−2κ(t−s)}) e^{−κs} F_0(s) ds.
/// ```
pub fn propagate_zero_mode<F: FnMut(f64) -> f64>(
    kappa: DampingParam,
    f0: f64,
    g0: f64,
    forcing: F,
    t: f64,
) -> Result<f64> {
    propagate_zero_mode_with_derivative(kappa, f0, g0, forcing, t).map(|(u, _)| u)
}

/// Zero-mode value and time derivative.
pub fn propagate_zero_mode_with_derivative<F: FnMut(f64) -> f64>(
    kappa: DampingParam,
    f0: f64,
    g0: f64,
    mut forcing: F,
    t: f64,
) -> Result<(f64, f64)> {
    let kap = kappa.value();
    let m = propagator_matrix(kap, 0.0, t);
    let (iu, iv) = duhamel_scalar(
        kap,
        0.0,
        0.0,
        t,
        |s| Complex64::new(forcing(s), 0.0),
        DUHAMEL_TOL,
    )?;
    Ok((
        m[0][0] * f0 + m[0][1] * g0 + iu.re,
        m[1][0] * f0 + m[1][1] * g0 + iv.re,
    ))
}

/// Distinct squared wavenumbers of a radius-`n` lattice together with the
/// indices that share them, in increasing |k|² order.
pub(crate) fn group_by_k2(template: &SpectralField) -> Vec<(f64, Vec<usize>)> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for i in 0..template.coeffs().len() {
        let k = template.wavenumber_at(i);
        groups.entry(k.norm_sq() as u64).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(k2, idx)| (k2 as f64, idx))
        .collect()
}

/// Propagate full initial data `(f, g)` through the linear equation with
/// forcing field `F(t,·)`, reporting the state at each requested time.
/// Times must be sorted and start at 0.
pub fn solve_linear<F: FnMut(f64) -> SpectralField>(
    f: &SpectralField,
    g: &SpectralField,
    forcing: F,
    kappa: DampingParam,
    times: &[f64],
) -> Result<Vec<WaveState>> {
    if times.first() != Some(&0.0) {
        return Err(Error::InvalidParameter(
            "times must be sorted and start at 0".into(),
        ));
    }
    solve_linear_anchored(f, g, forcing, kappa, times)
}

/// As [`solve_linear`] but the initial data lives at `times[0]`, which may
/// be positive; the forcing is always evaluated in absolute time.
pub(crate) fn solve_linear_anchored<F: FnMut(f64) -> SpectralField>(
    f: &SpectralField,
    g: &SpectralField,
    mut forcing: F,
    kappa: DampingParam,
    times: &[f64],
) -> Result<Vec<WaveState>> {
    if f.n() != g.n() {
        return Err(Error::RadiusMismatch { a: f.n(), b: g.n() });
    }
    if times.is_empty() || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "times must be sorted and nonempty".into(),
        ));
    }
    let kap = kappa.value();
    let n = f.n();
    let groups = group_by_k2(f);
    let total = f.coeffs().len();

    let mut u: Vec<Complex64> = f.coeffs().to_vec();
    let mut v: Vec<Complex64> = g.coeffs().to_vec();
    let mut out = Vec::with_capacity(times.len());
    let push_state = |t: f64, u: &[Complex64], v: &[Complex64], out: &mut Vec<WaveState>| {
        let mut uf = SpectralField::zeros(n, true);
        let mut vf = SpectralField::zeros(n, true);
        uf.coeffs_mut().copy_from_slice(u);
        vf.coeffs_mut().copy_from_slice(v);
        out.push(WaveState { t, u: uf, ut: vf });
    };
    push_state(times[0], &u, &v, &mut out);

    for w in times.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        if t1 == t0 {
            push_state(t1, &u, &v, &mut out);
            continue;
        }
        // vector Duhamel integral over [t0, t1], panels refined jointly
        let max_nu = (3.0 * (n as f64) * (n as f64)).sqrt().max(2.0 * kap);
        let mut panels = ((t1 - t0) * max_nu / 3.0).ceil().max(1.0) as usize;
        let eval = |panels: usize, forcing: &mut F| {
            let mut iu = vec![Complex64::default(); total];
            let mut iv = vec![Complex64::default(); total];
            gl8_panels(t0, t1, panels, |s, wgt| {
                let fld = forcing(s);
                let damp = (-kap * s).exp();
                for (k2, idx) in &groups {
                    let (ku, kv) = duhamel_kernels(kap, *k2, t1 - s);
                    for &i in idx {
                        let r = damp * fld.coeffs()[i];
                        iu[i] += (wgt * ku) * r;
                        iv[i] += (wgt * kv) * r;
                    }
                }
            });
            (iu, iv)
        };
        let mut prev = eval(panels, &mut forcing);
        let mut converged = false;
        for _ in 0..12 {
            panels *= 2;
            let cur = eval(panels, &mut forcing);
            let mut diff = 0.0f64;
            let mut scale = 1.0f64;
            for i in 0..total {
                diff = diff
                    .max((cur.0[i] - prev.0[i]).norm())
                    .max((cur.1[i] - prev.1[i]).norm());
                scale = scale.max(cur.0[i].norm()).max(cur.1[i].norm());
            }
            prev = cur;
            if diff <= DUHAMEL_TOL * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureFailure {
                a: t0,
                b: t1,
                tol: DUHAMEL_TOL,
            });
        }
        let (iu, iv) = prev;
        for (k2, idx) in &groups {
            let m = propagator_matrix(kap, *k2, t1 - t0);
            for &i in idx {
                let nu_new = m[0][0] * u[i] + m[0][1] * v[i] + iu[i];
                let nv_new = m[1][0] * u[i] + m[1][1] * v[i] + iv[i];
                u[i] = nu_new;
                v[i] = nv_new;
            }
        }
        push_state(t1, &u, &v, &mut out);
    }
    Ok(out)
}

/// Right-hand side of the linear energy estimate
///
/// ```text
///   ||u(t)||²_{Ḣ^{m+1}} ≤ 2 e^{−2κt} { 2(1+κ²) ||f||²_{Ḣ^{m+1}}
///                                + 2 ||g||²_{Ḣ^m} + t ∫_0^t ||F||²_{Ḣ^m} dτ }
/// ```
///
/// with the time integral taken by the trapezoid rule over the provided
/// `(τ, ||F(τ)||_{Ḣ^m})` samples restricted to `[0, t]`.
pub fn linear_energy_bound(
    f: &SpectralField,
    g: &SpectralField,
    forcing_norms: &[(f64, f64)],
    kappa: DampingParam,
    m: SobolevIndex,
    t: f64,
) -> f64 {
    let kap = kappa.value();
    let m1 = SobolevIndex::new(m.value() + 1.0).expect("m+1 valid");
    let nf2 = f.sobolev_norm_sq(m1, true);
    let ng2 = g.sobolev_norm_sq(m, true);
    let mut integral = 0.0;
    for w in forcing_norms.windows(2) {
        let (t0, f0) = w[0];
        let (t1, f1) = w[1];
        if t0 >= t {
            break;
        }
        let hi = t1.min(t);
        // linear interpolation of the norm at the clipped endpoint
        let f_hi = if t1 == t0 {
            f1
        } else {
            f0 + (f1 - f0) * (hi - t0) / (t1 - t0)
        };
        integral += 0.5 * (f0 * f0 + f_hi * f_hi) * (hi - t0);
    }
    2.0 * (-2.0 * kap * t).exp() * (2.0 * (1.0 + kap * kap) * nf2 + 2.0 * ng2 + t * integral)
}
