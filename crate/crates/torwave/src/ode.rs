//! Embedded adaptive Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! Used by the blow-up oracle and as the independent time-integration route
//! when cross-checking the exact per-mode propagator.

/// Why an integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Reached `t_max`.
    Horizon,
    /// The caller's stop predicate fired.
    Event,
    /// The step size collapsed below the floor without the event firing.
    StepCollapse,
}

#[derive(Clone, Debug)]
pub struct OdeSolution {
    /// Accepted steps `(t, y)` including the initial condition.
    pub samples: Vec<(f64, Vec<f64>)>,
    pub reason: StopReason,
}

impl OdeSolution {
    pub fn last(&self) -> (&f64, &Vec<f64>) {
        let (t, y) = self.samples.last().expect("at least the initial sample");
        (t, y)
    }
}

// Dormand-Prince 5(4) tableau
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
// 5th-order weights are the last row of A; 4th-order embedded weights:
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = rhs(t, y)` from `(t0, y0)` to `t_max` with local error
/// tolerance `tol` (mixed absolute/relative). Integration also stops, after
/// accepting a step, once `stop(t, y)` returns true.
pub fn integrate_adaptive<R, S>(
    mut rhs: R,
    t0: f64,
    y0: &[f64],
    t_max: f64,
    tol: f64,
    mut stop: S,
) -> OdeSolution
where
    R: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(f64, &[f64]) -> bool,
{
    let dim = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut samples = vec![(t, y.clone())];
    let mut k = vec![vec![0.0; dim]; 7];
    let mut ytmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];

    let mut dt = ((t_max - t0) / 100.0).min(1e-2).max(1e-10);
    rhs(t, &y, &mut k[0]);

    loop {
        if t >= t_max {
            return OdeSolution {
                samples,
                reason: StopReason::Horizon,
            };
        }
        if dt < 1e-14 * t.abs().max(1.0) {
            return OdeSolution {
                samples,
                reason: StopReason::StepCollapse,
            };
        }
        let h = dt.min(t_max - t);

        // stages 2..7; the last stage uses the 5th-order weights, so after
        // the loop ytmp holds y5 and k[6] = rhs(t+h, y5) (FSAL)
        for stage in 0..6 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    acc += A[stage][j] * kj[i];
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + C[stage] * h;
            rhs(ts, &ytmp, &mut k[stage + 1]);
        }
        y5.copy_from_slice(&ytmp);

        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut v4 = 0.0;
            for (j, kj) in k.iter().enumerate().take(7) {
                v4 += B4[j] * kj[i];
            }
            let y4 = y[i] + h * v4;
            let scale = tol * (1.0 + y[i].abs().max(y5[i].abs()));
            err = err.max(((y5[i] - y4) / scale).abs());
        }

        if err.is_finite() && err <= 1.0 {
            t += h;
            y.copy_from_slice(&y5);
            k.swap(0, 6); // FSAL
            samples.push((t, y.clone()));
            if stop(t, &y) {
                return OdeSolution {
                    samples,
                    reason: StopReason::Event,
                };
            }
            dt = h * (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
        } else if err.is_finite() {
            dt = h * (0.9 * err.powf(-0.2)).clamp(0.05, 1.0);
        } else {
            dt = h * 0.1;
        }
    }
}
