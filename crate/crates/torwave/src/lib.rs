//! Pseudospectral solvers and a verification harness for the damped
//! semi-linear wave equation
//!
//! ```text
//!     d²u/dt² + 2κ du/dt − Δu = e^{−κt} a(t,x) (1+u)³
//! ```
//!
//! on the 3-torus `[0,2π)³`, with `0 < κ < 1`. Fields are truncated
//! Fourier series; the linear part is propagated exactly per mode and the
//! cubic nonlinearity is evaluated on a dealiased physical grid.
//!
//! The crate provides:
//!
//! * [`field`] — truncated Fourier fields, Sobolev norms, dealiased products;
//! * [`linear`] — the exact per-mode propagator of the linearized equation;
//! * [`wave`] — exponential integrators and a Picard fixed-point iteration
//!   for the full nonlinear equation in second-order form;
//! * [`hyperbolic`] — the first-order symmetric formulation in the unknown
//!   `U = (du/dt + κu, ∂x u)`, its energy, and the exponential-decay
//!   change of variables `u = e^{λt} w`;
//! * [`diag`] — smallness conditions, decay envelopes, Gronwall bounds,
//!   decay-rate fits;
//! * [`blowup`] — the zero-mode blow-up ODE, closed-form lifespan bounds,
//!   and hypothesis checks;
//! * [`harness`] — scenario files, experiment dispatch, parameter sweeps,
//!   CSV/JSON reports, and binary state snapshots.
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `torwave` binary for the batch CLI.

pub mod blowup;
pub mod diag;
pub mod field;
mod fft;
pub mod harness;
pub mod hyperbolic;
pub mod linear;
pub mod ode;
pub mod quad;
pub mod scenario;
pub mod snapshot;
pub mod wave;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("wavenumber {k:?} outside truncation radius {n}")]
    WavenumberOutOfRange { k: [i64; 3], n: u32 },
    #[error("conflicting Hermitian pair at {k:?}: {a} vs conj({b})")]
    ConflictingHermitianPair {
        k: [i64; 3],
        a: num_complex::Complex64,
        b: num_complex::Complex64,
    },
    #[error("grid of {grid} points per axis is too small for radius {n} (need at least {need})")]
    GridTooSmall { grid: usize, n: u32, need: usize },
    #[error("sample array of length {len} is not a cube of the declared grid {grid}")]
    BadSampleArray { len: usize, grid: usize },
    #[error("truncation radii differ: {a} vs {b}")]
    RadiusMismatch { a: u32, b: u32 },
    #[error("component counts differ: {a} vs {b}")]
    ComponentMismatch { a: usize, b: usize },
    #[error("field is not real: {what}")]
    NotReal { what: String },
    #[error("damping parameter {0} outside (0,1)")]
    BadDamping(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empirical multiplication ratio {ratio} exceeds configured constant {c_m}")]
    MultiplicationConstantViolated { ratio: f64, c_m: f64 },
    #[error("solution norm {norm:.3e} crossed the blow-up threshold at t = {t}")]
    BlowUp { t: f64, norm: f64 },
    #[error("Picard iteration did not contract after {iters} iterations (last delta {delta:.3e})")]
    PicardDiverged { iters: usize, delta: f64 },
    #[error("quadrature failed to reach tolerance {tol:.1e} on [{a}, {b}]")]
    QuadratureFailure { a: f64, b: f64, tol: f64 },
    #[error("time {tau} outside the validity range of the bound: {why}")]
    OutOfValidity { tau: f64, why: String },
    #[error("lifespan bound degenerate: {0}")]
    DegenerateLifespan(String),
    #[error("decay fit requires positive norms in the window; found {bad} nonpositive samples")]
    NonpositiveNorms { bad: usize },
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("snapshot format error: {0}")]
    Snapshot(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
