//! The per-mode propagator is exact: compare one forced mode against a
//! high-order adaptive integration of the same ODE.

use num_complex::Complex64;
use torwave::field::Wavenumber;
use torwave::linear::{propagate_mode, propagate_zero_mode, DampingParam, ModeState};
use torwave::ode::integrate_adaptive;

fn main() -> torwave::Result<()> {
    let kappa = DampingParam::new(0.5)?;
    let k = Wavenumber([2, 1, 0]);
    let init = ModeState {
        u_hat: Complex64::new(0.3, -0.1),
        v_hat: Complex64::new(0.0, 0.2),
    };
    let forcing = |s: f64| Complex64::new((0.4 * s).sin(), 0.1 * (0.3 * s).cos());
    let t = 3.0;

    let exact = propagate_mode(k, kappa, init, forcing, t)?;

    let k2 = k.norm_sq();
    let sol = integrate_adaptive(
        |s, y, dy| {
            let f = (-0.5 * s).exp() * forcing(s);
            dy[0] = y[2];
            dy[1] = y[3];
            dy[2] = -1.0 * y[2] - k2 * y[0] + f.re;
            dy[3] = -1.0 * y[3] - k2 * y[1] + f.im;
        },
        0.0,
        &[init.u_hat.re, init.u_hat.im, init.v_hat.re, init.v_hat.im],
        t,
        1e-12,
        |_, _| false,
    );
    let (_, y) = sol.last();
    let rk = Complex64::new(y[0], y[1]);
    println!("closed form + quadrature: {}", exact.u_hat);
    println!("adaptive Runge–Kutta:     {rk}");
    println!("difference:               {:.3e}", (exact.u_hat - rk).norm());

    // zero mode: constant forcing has the identity
    // (1/2κ)∫(1−e^{−2κ(t−s)})e^{−κs}a0 ds = (a0/2κ²)(1−e^{−κt})²
    let a0 = 0.8;
    let kap = 0.5;
    let u0 = propagate_zero_mode(kappa, 0.0, 0.0, |_| a0, t)?;
    let closed = a0 / (2.0 * kap * kap) * (1.0 - (-kap * t).exp()).powi(2);
    println!("zero mode {u0:.12} vs closed form {closed:.12}");
    Ok(())
}
