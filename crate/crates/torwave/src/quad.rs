//! Gauss–Legendre panels and adaptive refinement.

use crate::{Error, Result};

/// 8-point Gauss–Legendre nodes on [-1, 1] (positive half; symmetric).
pub const GL8_NODES: [f64; 4] = [
    0.18343464249564980,
    0.52553240991632899,
    0.79666647741362674,
    0.96028985649753623,
];

/// Matching weights.
pub const GL8_WEIGHTS: [f64; 4] = [
    0.36268378337836210,
    0.31370664587788729,
    0.22238103445337447,
    0.10122853629037626,
];

/// Visit the nodes of a composite 8-point rule with `panels` equal panels on
/// `[a, b]`; calls `visit(x, w)` for every node.
pub fn gl8_panels<F: FnMut(f64, f64)>(a: f64, b: f64, panels: usize, mut visit: F) {
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        for j in 0..4 {
            let dx = half * GL8_NODES[j];
            let w = half * GL8_WEIGHTS[j];
            visit(mid - dx, w);
            visit(mid + dx, w);
        }
    }
}

fn gl8_integral<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, f: &mut F) -> f64 {
    let mut acc = 0.0;
    gl8_panels(a, b, panels, |x, w| acc += w * f(x));
    acc
}

/// Integrate a smooth scalar function by panel doubling until two successive
/// composite 8-point estimates agree to `tol` (absolute + relative).
pub fn adaptive_integral<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = 1usize;
    let mut prev = gl8_integral(a, b, panels, &mut f);
    for _ in 0..22 {
        panels *= 2;
        let cur = gl8_integral(a, b, panels, &mut f);
        if (cur - prev).abs() <= tol * (1.0 + cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureFailure { a, b, tol })
}
