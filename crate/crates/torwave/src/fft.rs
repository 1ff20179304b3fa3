//! Cached 3-d FFTs on cubic grids, used for dealiased products.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone)]
pub struct GridFft {
    pub m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

static PLAN_CACHE: OnceLock<Mutex<HashMap<usize, GridFft>>> = OnceLock::new();

pub fn plan(m: usize) -> GridFft {
    let cache = PLAN_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            GridFft {
                m,
                fwd: planner.plan_fft_forward(m),
                inv: planner.plan_fft_inverse(m),
            }
        })
        .clone()
}

/// Smallest integer of the form 2^a 3^b 5^c that is >= `min`.
pub fn next_fast_size(min: usize) -> usize {
    let mut m = min.max(2);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

impl GridFft {
    fn apply_axis(&self, data: &mut [Complex64], inverse: bool, axis: usize) {
        let m = self.m;
        let fft = if inverse { &self.inv } else { &self.fwd };
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        match axis {
            2 => {
                for line in data.chunks_exact_mut(m) {
                    fft.process_with_scratch(line, &mut scratch);
                }
            }
            1 => {
                let mut line = vec![Complex64::default(); m];
                for i0 in 0..m {
                    for i2 in 0..m {
                        let base = i0 * m * m + i2;
                        for i1 in 0..m {
                            line[i1] = data[base + i1 * m];
                        }
                        fft.process_with_scratch(&mut line, &mut scratch);
                        for i1 in 0..m {
                            data[base + i1 * m] = line[i1];
                        }
                    }
                }
            }
            0 => {
                let mut line = vec![Complex64::default(); m];
                let mm = m * m;
                for i1 in 0..m {
                    for i2 in 0..m {
                        let base = i1 * m + i2;
                        for i0 in 0..m {
                            line[i0] = data[base + i0 * mm];
                        }
                        fft.process_with_scratch(&mut line, &mut scratch);
                        for i0 in 0..m {
                            data[base + i0 * mm] = line[i0];
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    /// In-place 3-d transform of an `m x m x m` row-major array
    /// (first index slowest). Forward uses the e^{-i x k} convention and is
    /// unnormalized; inverse uses e^{+i x k}.
    pub fn transform(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.m * self.m * self.m);
        self.apply_axis(data, inverse, 2);
        self.apply_axis(data, inverse, 1);
        self.apply_axis(data, inverse, 0);
    }
}
