//! Truncated Fourier representation of scalar fields on the 3-torus.
//!
//! A [`SpectralField`] stores the coefficients `f_k` for all lattice
//! wavenumbers `k` with components in `[-N, N]`, in lexicographic order
//! (`k1` slowest). Real fields carry Hermitian symmetry
//! `f_{-k} = conj(f_k)`, which is restored after every nonlinear product.
//!
//! Norms follow the Fourier-side convention
//!
//! ```text
//!     ||f||²_{H^m}  = |f_0|² + Σ_{k≠0} |k|^{2m} |f_k|²
//!     ||f||²_{Ḣ^m}  =          Σ_{k≠0} |k|^{2m} |f_k|²
//! ```
//!
//! with real (possibly fractional) regularity order `m >= 0`.

use crate::fft::{next_fast_size, plan};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;

/// Relative tolerance for Hermitian-symmetry validation.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A lattice point of Z³.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Wavenumber(pub [i64; 3]);

impl Wavenumber {
    pub const ZERO: Wavenumber = Wavenumber([0, 0, 0]);

    pub fn norm_sq(&self) -> f64 {
        let [a, b, c] = self.0;
        (a * a + b * b + c * c) as f64
    }

    pub fn neg(&self) -> Wavenumber {
        Wavenumber([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    fn within(&self, n: u32) -> bool {
        self.0.iter().all(|&c| c.unsigned_abs() <= n as u64)
    }
}

/// Sobolev regularity order; theorem checks require `m > 3/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevIndex(f64);

impl SobolevIndex {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Sobolev order must be a finite nonnegative real, got {m}"
            )));
        }
        Ok(SobolevIndex(m))
    }

    /// Order valid for the theorem-side checks (`m > 3/2`).
    pub fn supercritical(m: f64) -> Result<Self> {
        let s = Self::new(m)?;
        if m <= 1.5 {
            return Err(Error::InvalidParameter(format!(
                "theorem checks require m > 3/2, got {m}"
            )));
        }
        Ok(s)
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Truncated Fourier coefficients of a scalar field on `[0,2π)³`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    n: u32,
    coeffs: Vec<Complex64>,
    real: bool,
}

impl SpectralField {
    /// All-zero field of truncation radius `n`.
    pub fn zeros(n: u32, real: bool) -> Self {
        let side = 2 * n as usize + 1;
        SpectralField {
            n,
            coeffs: vec![Complex64::default(); side * side * side],
            real,
        }
    }

    /// Constant field `c`.
    pub fn constant(n: u32, c: f64) -> Self {
        let mut f = Self::zeros(n, true);
        let idx = f.index_of(Wavenumber::ZERO);
        f.coeffs[idx] = Complex64::new(c, 0.0);
        f
    }

    /// `amplitude * cos(k·x)`, i.e. `amplitude/2` at `±k`.
    pub fn cosine(n: u32, k: Wavenumber, amplitude: f64) -> Result<Self> {
        Self::from_modes(
            n,
            &[(k, Complex64::new(amplitude / 2.0, 0.0))],
            true,
        )
    }

    /// Build a field from explicit mode assignments.
    ///
    /// With `real = true` the assignment may be given on a half-space only;
    /// the mirror coefficients `f_{-k} = conj(f_k)` are completed
    /// automatically. Assigning both `k` and `-k` with inconsistent values
    /// (beyond [`HERMITIAN_TOL`]) is an error, as is any out-of-range
    /// wavenumber.
    pub fn from_modes(n: u32, modes: &[(Wavenumber, Complex64)], real: bool) -> Result<Self> {
        let mut f = Self::zeros(n, real);
        let mut assigned = vec![false; f.coeffs.len()];
        for &(k, v) in modes {
            if !k.within(n) {
                return Err(Error::WavenumberOutOfRange { k: k.0, n });
            }
            let i = f.index_of(k);
            if assigned[i] && (f.coeffs[i] - v).norm() > HERMITIAN_TOL * (1.0 + v.norm()) {
                return Err(Error::ConflictingHermitianPair {
                    k: k.0,
                    a: f.coeffs[i],
                    b: v.conj(),
                });
            }
            f.coeffs[i] = v;
            assigned[i] = true;
            if real {
                let j = f.index_of(k.neg());
                if j != i {
                    if assigned[j]
                        && (f.coeffs[j] - v.conj()).norm() > HERMITIAN_TOL * (1.0 + v.norm())
                    {
                        return Err(Error::ConflictingHermitianPair {
                            k: k.neg().0,
                            a: f.coeffs[j],
                            b: v,
                        });
                    }
                    f.coeffs[j] = v.conj();
                    assigned[j] = true;
                }
            }
        }
        if real {
            let z = f.index_of(Wavenumber::ZERO);
            if f.coeffs[z].im.abs() > HERMITIAN_TOL * (1.0 + f.coeffs[z].norm()) {
                return Err(Error::NotReal {
                    what: format!("zero mode {} has an imaginary part", f.coeffs[z]),
                });
            }
            f.coeffs[z].im = 0.0;
        }
        Ok(f)
    }

    /// Random real field: independent Gaussian pairs with amplitude
    /// `amplitude / (1+|k|²)^{decay/2}`, Hermitian-completed.
    pub fn random<R: Rng + ?Sized>(n: u32, amplitude: f64, decay: f64, rng: &mut R) -> Self {
        let mut f = Self::zeros(n, true);
        for i in 0..f.coeffs.len() {
            let k = f.wavenumber_at(i);
            // draw once per conjugate pair, in a fixed order
            if k.0[0] < 0 || (k.0[0] == 0 && (k.0[1] < 0 || (k.0[1] == 0 && k.0[2] < 0))) {
                continue;
            }
            let scale = amplitude / (1.0 + k.norm_sq()).powf(decay / 2.0);
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = if k.is_zero() { 0.0 } else { rng.gen_range(-1.0..1.0) };
            let v = Complex64::new(re * scale, im * scale);
            let idx = f.index_of(k);
            f.coeffs[idx] = v;
            if !k.is_zero() {
                let j = f.index_of(k.neg());
                f.coeffs[j] = v.conj();
            }
        }
        f
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn real_flag(&self) -> bool {
        self.real
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Lexicographic index of `k` (k1 slowest); `k` must be within range.
    pub fn index_of(&self, k: Wavenumber) -> usize {
        let side = 2 * self.n as i64 + 1;
        let off = self.n as i64;
        (((k.0[0] + off) * side + (k.0[1] + off)) * side + (k.0[2] + off)) as usize
    }

    pub fn wavenumber_at(&self, index: usize) -> Wavenumber {
        let side = 2 * self.n as i64 + 1;
        let off = self.n as i64;
        let i = index as i64;
        Wavenumber([i / (side * side) - off, (i / side) % side - off, i % side - off])
    }

    pub fn get(&self, k: Wavenumber) -> Result<Complex64> {
        if !k.within(self.n) {
            return Err(Error::WavenumberOutOfRange { k: k.0, n: self.n });
        }
        Ok(self.coeffs[self.index_of(k)])
    }

    pub fn set(&mut self, k: Wavenumber, v: Complex64) -> Result<()> {
        if !k.within(self.n) {
            return Err(Error::WavenumberOutOfRange { k: k.0, n: self.n });
        }
        let i = self.index_of(k);
        self.coeffs[i] = v;
        Ok(())
    }

    /// Largest relative deviation from Hermitian symmetry.
    pub fn hermitian_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.coeffs.len() {
            let k = self.wavenumber_at(i);
            let j = self.index_of(k.neg());
            let a = self.coeffs[i];
            let b = self.coeffs[j].conj();
            let denom = 1.0 + a.norm().max(b.norm());
            worst = worst.max((a - b).norm() / denom);
        }
        worst
    }

    /// Restore exact Hermitian symmetry by conjugate averaging.
    pub fn symmetrize(&mut self) {
        for i in 0..self.coeffs.len() {
            let k = self.wavenumber_at(i);
            let j = self.index_of(k.neg());
            if j < i {
                continue;
            }
            let avg = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = avg;
            self.coeffs[j] = avg.conj();
        }
        let z = self.index_of(Wavenumber::ZERO);
        self.coeffs[z].im = 0.0;
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Samples of `Σ f_k e^{i x·k}` on the uniform `grid³` lattice of
    /// `[0,2π)³` (row-major, x1 slowest). Requires `grid >= 2N+1`.
    pub fn to_physical(&self, grid: usize) -> Result<Vec<f64>> {
        let data = self.to_physical_complex(grid)?;
        let mut worst = 0.0f64;
        let out = data
            .iter()
            .map(|c| {
                worst = worst.max(c.im.abs());
                c.re
            })
            .collect();
        if self.real && worst > 1e-10 {
            return Err(Error::NotReal {
                what: format!("physical samples have imaginary residue {worst:.3e}"),
            });
        }
        Ok(out)
    }

    fn to_physical_complex(&self, grid: usize) -> Result<Vec<Complex64>> {
        let need = 2 * self.n as usize + 1;
        if grid < need {
            return Err(Error::GridTooSmall {
                grid,
                n: self.n,
                need,
            });
        }
        let g = plan(grid);
        let m = grid as i64;
        let mut data = vec![Complex64::default(); grid * grid * grid];
        for i in 0..self.coeffs.len() {
            let c = self.coeffs[i];
            if c == Complex64::default() {
                continue;
            }
            let k = self.wavenumber_at(i);
            let j = ((k.0[0].rem_euclid(m) * m + k.0[1].rem_euclid(m)) * m
                + k.0[2].rem_euclid(m)) as usize;
            data[j] = c;
        }
        g.transform(&mut data, true);
        Ok(data)
    }

    /// Inverse of [`to_physical`](Self::to_physical): discrete quadrature of
    /// `f_k = (2π)^{-3} ∫ f(x) e^{-i x·k} dx` on the sample lattice.
    /// `samples.len()` must equal `grid³`, and `grid >= 2n+1`.
    pub fn from_physical(samples: &[f64], grid: usize, n: u32) -> Result<Self> {
        let complex: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut f = Self::from_physical_complex(&complex, grid, n)?;
        f.real = true;
        f.symmetrize();
        Ok(f)
    }

    fn from_physical_complex(samples: &[Complex64], grid: usize, n: u32) -> Result<Self> {
        if samples.len() != grid * grid * grid {
            return Err(Error::BadSampleArray {
                len: samples.len(),
                grid,
            });
        }
        let need = 2 * n as usize + 1;
        if grid < need {
            return Err(Error::GridTooSmall { grid, n, need });
        }
        let g = plan(grid);
        let mut data = samples.to_vec();
        g.transform(&mut data, false);
        let scale = 1.0 / (grid * grid * grid) as f64;
        let mut f = Self::zeros(n, false);
        let m = grid as i64;
        for i in 0..f.coeffs.len() {
            let k = f.wavenumber_at(i);
            let j = ((k.0[0].rem_euclid(m) * m + k.0[1].rem_euclid(m)) * m
                + k.0[2].rem_euclid(m)) as usize;
            f.coeffs[i] = data[j] * scale;
        }
        Ok(f)
    }

    /// Squared Sobolev norm; `homogeneous` drops the `|f_0|²` term.
    /// Modes are summed in the fixed lexicographic order.
    pub fn sobolev_norm_sq(&self, m: SobolevIndex, homogeneous: bool) -> f64 {
        let mut acc = 0.0f64;
        for i in 0..self.coeffs.len() {
            let k = self.wavenumber_at(i);
            if k.is_zero() {
                if !homogeneous {
                    acc += self.coeffs[i].norm_sqr();
                }
                continue;
            }
            acc += k.norm_sq().powf(m.value()) * self.coeffs[i].norm_sqr();
        }
        acc
    }

    /// Sobolev norm; `homogeneous` drops the `|f_0|²` term.
    pub fn sobolev_norm(&self, m: SobolevIndex, homogeneous: bool) -> f64 {
        self.sobolev_norm_sq(m, homogeneous).sqrt()
    }

    /// Spectral gradient: component `j` has coefficients `i k_j f_k`.
    pub fn gradient(&self) -> [SpectralField; 3] {
        let mut out = [
            Self::zeros(self.n, self.real),
            Self::zeros(self.n, self.real),
            Self::zeros(self.n, self.real),
        ];
        for i in 0..self.coeffs.len() {
            let k = self.wavenumber_at(i);
            let c = self.coeffs[i];
            for j in 0..3 {
                out[j].coeffs[i] = Complex64::new(0.0, k.0[j] as f64) * c;
            }
        }
        out
    }

    /// The spatial mean, i.e. the zero Fourier coefficient.
    pub fn mean_part(&self) -> Result<f64> {
        let c = self.coeffs[self.index_of(Wavenumber::ZERO)];
        if c.im.abs() > 1e-10 * (1.0 + c.re.abs()) {
            return Err(Error::NotReal {
                what: format!("zero mode {c} is not real"),
            });
        }
        Ok(c.re)
    }

    /// Physical grid used for alias-free cubic products of radius-`n` fields.
    pub fn dealias_grid(n: u32) -> usize {
        next_fast_size(2 * (2 * n as usize + 1))
    }

    /// Dealiased product truncated back to the common radius.
    ///
    /// Both factors are evaluated on a grid of at least `2(2N+1)` points per
    /// axis, multiplied pointwise, and transformed back; on that grid the
    /// result equals the direct convolution truncated to radius `N`.
    pub fn multiply(&self, other: &SpectralField) -> Result<SpectralField> {
        if self.n != other.n {
            return Err(Error::RadiusMismatch {
                a: self.n,
                b: other.n,
            });
        }
        let grid = Self::dealias_grid(self.n);
        let a = self.to_physical_complex(grid)?;
        let b = other.to_physical_complex(grid)?;
        let prod: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let mut f = Self::from_physical_complex(&prod, grid, self.n)?;
        if self.real && other.real {
            f.real = true;
            f.symmetrize();
        }
        Ok(f)
    }

    /// Dealiased `(1+u)³` truncated to radius `N`; requires a real field.
    /// The grid of `2(2N+1)` points keeps a cubic of a radius-`N` field
    /// alias-free before truncation.
    pub fn cubic_one_plus(&self) -> Result<SpectralField> {
        if !self.real {
            return Err(Error::NotReal {
                what: "cubic_one_plus needs a real field".into(),
            });
        }
        let grid = Self::dealias_grid(self.n);
        let u = self.to_physical_complex(grid)?;
        let cubed: Vec<Complex64> = u
            .iter()
            .map(|&v| {
                let w = Complex64::new(1.0, 0.0) + v;
                w * w * w
            })
            .collect();
        let mut f = Self::from_physical_complex(&cubed, grid, self.n)?;
        f.real = true;
        f.symmetrize();
        Ok(f)
    }

    /// In-place `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for c in self.coeffs.iter_mut() {
            *c *= s;
        }
    }

    pub fn scaled(&self, s: f64) -> SpectralField {
        let mut f = self.clone();
        f.scale(s);
        f
    }
}

/// Homogeneous inner product of two field vectors:
/// real part of `Σ_{k≠0} |k|^{2m} (A_k · conj(B_k))` summed over components.
pub fn h_inner_product(
    a: &[&SpectralField],
    b: &[&SpectralField],
    m: SobolevIndex,
) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ComponentMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let mut acc = 0.0f64;
    for (fa, fb) in a.iter().zip(b) {
        if fa.n != fb.n {
            return Err(Error::RadiusMismatch { a: fa.n, b: fb.n });
        }
        for i in 0..fa.coeffs.len() {
            let k = fa.wavenumber_at(i);
            if k.is_zero() {
                continue;
            }
            acc += k.norm_sq().powf(m.value()) * (fa.coeffs[i] * fb.coeffs[i].conj()).re;
        }
    }
    Ok(acc)
}

/// The admissible algebra constant `C_m` with
/// `||fg||_{H^m} <= C_m ||f||_{H^m} ||g||_{H^m}`, evaluated as
/// `2^m sqrt(Σ_{k∈Z³} (1+|k|²)^{-m})` by truncated summation plus a tail
/// bound, so the returned value is an upper estimate regardless of the
/// truncation radius.
pub fn analytic_multiplication_constant(m: SobolevIndex) -> f64 {
    let mv = m.value();
    assert!(mv > 1.5, "algebra constant needs m > 3/2");
    let radius: i64 = 64;
    let mut s = 0.0f64;
    for k1 in -radius..=radius {
        for k2 in -radius..=radius {
            for k3 in -radius..=radius {
                let k2sum = (k1 * k1 + k2 * k2 + k3 * k3) as f64;
                s += (1.0 + k2sum).powf(-mv);
            }
        }
    }
    // lattice points with sup-norm n sit on a shell of < 26 n² points and
    // have 1+|k|² > n², so the tail is bounded by 26 Σ_{n>R} n^{2-2m}
    let mut tail = 0.0f64;
    let mut n = radius + 1;
    loop {
        let term = 26.0 * (n as f64).powf(2.0 - 2.0 * mv);
        tail += term;
        if term < 1e-16 * (s + tail) || n > 10_000_000 {
            // close with an integral bound for the remainder
            tail += 26.0 * (n as f64).powf(3.0 - 2.0 * mv) / (2.0 * mv - 3.0);
            break;
        }
        n += 1;
    }
    2.0f64.powf(mv) * (s + tail).sqrt()
}

/// Result of [`multiplication_constant`]: the configured analytic value and
/// the largest ratio `||fg|| / (||f|| ||g||)` observed over random trials.
#[derive(Clone, Copy, Debug)]
pub struct MultiplicationConstant {
    pub c_m: f64,
    pub empirical_max: f64,
}

/// Return the configured `C_m` together with an empirical check over
/// `trials` random field pairs of radius `n`. Errors if any observed ratio
/// exceeds the configured constant.
pub fn multiplication_constant<R: Rng + ?Sized>(
    m: SobolevIndex,
    trials: usize,
    n: u32,
    c_m_override: Option<f64>,
    rng: &mut R,
) -> Result<MultiplicationConstant> {
    let c_m = c_m_override.unwrap_or_else(|| analytic_multiplication_constant(m));
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = SpectralField::random(n, 1.0, 1.0, rng);
        let g = SpectralField::random(n, 1.0, 1.0, rng);
        let nf = f.sobolev_norm(m, false);
        let ng = g.sobolev_norm(m, false);
        if nf == 0.0 || ng == 0.0 {
            continue;
        }
        let p = f.multiply(&g)?;
        worst = worst.max(p.sobolev_norm(m, false) / (nf * ng));
    }
    if worst > c_m {
        return Err(Error::MultiplicationConstantViolated { ratio: worst, c_m });
    }
    Ok(MultiplicationConstant {
        c_m,
        empirical_max: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k(a: i64, b: i64, c: i64) -> Wavenumber {
        Wavenumber([a, b, c])
    }

    #[test]
    fn constant_field_single_mode() {
        let f = SpectralField::constant(1, 1.0);
        assert_eq!(f.get(k(0, 0, 0)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(f.get(k(1, 0, 0)).unwrap(), Complex64::default());
    }

    #[test]
    fn hermitian_completion() {
        let f =
            SpectralField::from_modes(2, &[(k(1, 0, 0), Complex64::new(0.5, 0.0))], true).unwrap();
        assert_eq!(f.get(k(-1, 0, 0)).unwrap(), Complex64::new(0.5, 0.0));
        let g =
            SpectralField::from_modes(2, &[(k(1, 2, -1), Complex64::new(0.3, 0.4))], true).unwrap();
        assert_eq!(g.get(k(-1, -2, 1)).unwrap(), Complex64::new(0.3, -0.4));
    }

    #[test]
    fn conflicting_pair_rejected() {
        let r = SpectralField::from_modes(
            2,
            &[
                (k(1, 0, 0), Complex64::new(0.5, 0.1)),
                (k(-1, 0, 0), Complex64::new(0.5, 0.1)),
            ],
            true,
        );
        assert!(matches!(r, Err(Error::ConflictingHermitianPair { .. })));
        // consistent explicit pair is fine
        let ok = SpectralField::from_modes(
            2,
            &[
                (k(1, 0, 0), Complex64::new(0.5, 0.1)),
                (k(-1, 0, 0), Complex64::new(0.5, -0.1)),
            ],
            true,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn out_of_range_rejected() {
        let r = SpectralField::from_modes(2, &[(k(3, 0, 0), Complex64::new(1.0, 0.0))], true);
        assert!(matches!(r, Err(Error::WavenumberOutOfRange { .. })));
    }

    #[test]
    fn to_physical_constant_and_cosine() {
        let f = SpectralField::constant(1, 1.0);
        let s = f.to_physical(8).unwrap();
        assert!(s.iter().all(|&v| (v - 1.0).abs() < 1e-13));

        // e^{i x1} + e^{-i x1} = 2 cos(x1)
        let g = SpectralField::from_modes(1, &[(k(1, 0, 0), Complex64::new(1.0, 0.0))], true)
            .unwrap();
        let s = g.to_physical(8).unwrap();
        for i0 in 0..8 {
            let x = 2.0 * std::f64::consts::PI * i0 as f64 / 8.0;
            for i1 in 0..8 {
                for i2 in 0..8 {
                    let got = s[(i0 * 8 + i1) * 8 + i2];
                    assert!((got - 2.0 * x.cos()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn to_physical_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = SpectralField::random(3, 1.0, 1.0, &mut rng);
        let grid = 16;
        let s = f.to_physical(grid).unwrap();
        // five random grid points
        for _ in 0..5 {
            let i0 = rng.gen_range(0..grid);
            let i1 = rng.gen_range(0..grid);
            let i2 = rng.gen_range(0..grid);
            let x = [
                2.0 * std::f64::consts::PI * i0 as f64 / grid as f64,
                2.0 * std::f64::consts::PI * i1 as f64 / grid as f64,
                2.0 * std::f64::consts::PI * i2 as f64 / grid as f64,
            ];
            let mut direct = Complex64::default();
            for i in 0..f.coeffs().len() {
                let kk = f.wavenumber_at(i);
                let phase = x[0] * kk.0[0] as f64 + x[1] * kk.0[1] as f64 + x[2] * kk.0[2] as f64;
                direct += f.coeffs()[i] * Complex64::new(phase.cos(), phase.sin());
            }
            let got = s[(i0 * grid + i1) * grid + i2];
            assert!((got - direct.re).abs() < 1e-12, "direct sum mismatch");
        }
    }

    #[test]
    fn from_physical_cosine() {
        let grid = 8;
        let mut s = vec![0.0; grid * grid * grid];
        for i0 in 0..grid {
            for i1 in 0..grid {
                let x = 2.0 * std::f64::consts::PI * i1 as f64 / grid as f64;
                for i2 in 0..grid {
                    s[(i0 * grid + i1) * grid + i2] = 2.0 * x.cos();
                }
            }
        }
        let f = SpectralField::from_physical(&s, grid, 2).unwrap();
        assert!((f.get(k(0, 1, 0)).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        assert!((f.get(k(0, -1, 0)).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        let total: f64 = f.coeffs().iter().map(|c| c.norm()).sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_bandlimited() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let f = SpectralField::random(4, 1.0, 0.5, &mut rng);
            let s = f.to_physical(12).unwrap();
            let g = SpectralField::from_physical(&s, 12, 4).unwrap();
            let diff: f64 = f
                .coeffs()
                .iter()
                .zip(g.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn undersized_grid_errors() {
        let f = SpectralField::constant(4, 1.0);
        assert!(matches!(
            f.to_physical(8),
            Err(Error::GridTooSmall { .. })
        ));
        let s = vec![0.0; 8 * 8 * 8];
        assert!(matches!(
            SpectralField::from_physical(&s, 8, 4),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            SpectralField::from_physical(&s[..100], 8, 2),
            Err(Error::BadSampleArray { .. })
        ));
    }

    #[test]
    fn sobolev_norm_values() {
        let m2 = SobolevIndex::new(2.0).unwrap();
        let c = SpectralField::constant(2, 5.0);
        assert_eq!(c.sobolev_norm(m2, true), 0.0);
        assert_eq!(c.sobolev_norm(m2, false), 5.0);

        // cos(x1): coefficients 1/2 at ±(1,0,0)
        let f = SpectralField::cosine(2, k(1, 0, 0), 1.0).unwrap();
        let want = (2.0f64 * 0.25).sqrt(); // sqrt(2 · 1^4 · 1/4)
        assert!((f.sobolev_norm(m2, true) - want).abs() < 1e-15);
    }

    #[test]
    fn sobolev_norm_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = SpectralField::random(4, 1.0, 0.0, &mut rng);
        let m = SobolevIndex::new(2.5).unwrap();
        let mut acc = 0.0;
        for i in 0..f.coeffs().len() {
            let kk = f.wavenumber_at(i);
            if kk.is_zero() {
                continue;
            }
            acc += kk.norm_sq().powf(2.5) * f.coeffs()[i].norm_sqr();
        }
        let want = acc.sqrt();
        let got = f.sobolev_norm(m, true);
        assert!((got - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn inner_product_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = SobolevIndex::new(2.0).unwrap();
        let a = SpectralField::random(3, 1.0, 1.0, &mut rng);
        let b = SpectralField::random(3, 1.0, 1.0, &mut rng);
        let aa = h_inner_product(&[&a], &[&a], m).unwrap();
        let na = a.sobolev_norm(m, true);
        assert!((aa - na * na).abs() < 1e-13 * (1.0 + na * na));
        let ab = h_inner_product(&[&a], &[&b], m).unwrap();
        let ba = h_inner_product(&[&b], &[&a], m).unwrap();
        assert!((ab - ba).abs() < 1e-13 * (1.0 + ab.abs()));
        // disjoint supports are orthogonal
        let e1 = SpectralField::cosine(3, k(1, 0, 0), 1.0).unwrap();
        let e2 = SpectralField::cosine(3, k(0, 2, 0), 1.0).unwrap();
        assert_eq!(h_inner_product(&[&e1], &[&e2], m).unwrap(), 0.0);
        // mismatched component counts
        assert!(h_inner_product(&[&a, &b], &[&a], m).is_err());
    }

    #[test]
    fn gradient_cases() {
        let m = SobolevIndex::new(2.0).unwrap();
        let c = SpectralField::constant(2, 3.0);
        for comp in c.gradient() {
            assert_eq!(comp.sobolev_norm(m, false), 0.0);
        }
        // d/dx1 cos(x1) = -sin(x1): coefficients ∓ i/2 at ±(1,0,0)
        let f = SpectralField::cosine(2, k(1, 0, 0), 1.0).unwrap();
        let g = f.gradient();
        assert!((g[0].get(k(1, 0, 0)).unwrap() - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((g[0].get(k(-1, 0, 0)).unwrap() - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(g[1].sobolev_norm(m, false), 0.0);
        assert_eq!(g[2].sobolev_norm(m, false), 0.0);
    }

    #[test]
    fn gradient_shifts_norm_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let u = SpectralField::random(4, 1.0, 1.0, &mut rng);
        for &mv in &[0.0, 1.0, 2.0, 2.5] {
            let m = SobolevIndex::new(mv).unwrap();
            let m1 = SobolevIndex::new(mv + 1.0).unwrap();
            let grad = u.gradient();
            let lhs = h_inner_product(
                &[&grad[0], &grad[1], &grad[2]],
                &[&grad[0], &grad[1], &grad[2]],
                m,
            )
            .unwrap()
            .sqrt();
            let rhs = u.sobolev_norm(m1, true);
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs));
        }
    }

    #[test]
    fn mean_part_cases() {
        assert_eq!(SpectralField::constant(2, 2.5).mean_part().unwrap(), 2.5);
        let f = SpectralField::cosine(2, k(1, 0, 0), 1.0).unwrap();
        assert_eq!(f.mean_part().unwrap(), 0.0);
        let mut g = SpectralField::constant(2, 3.0);
        g.axpy(1.0, &SpectralField::cosine(2, k(0, 1, 0), 1.0).unwrap());
        assert_eq!(g.mean_part().unwrap(), 3.0);
    }

    /// Direct O(N^6) truncated convolution, the dealiasing oracle.
    fn convolve_direct(a: &SpectralField, b: &SpectralField) -> SpectralField {
        let n = a.n();
        let mut out = SpectralField::zeros(n, false);
        let side = 2 * n as i64 + 1;
        let total = (side * side * side) as usize;
        for i in 0..total {
            let ka = a.wavenumber_at(i);
            let ca = a.coeffs()[i];
            if ca == Complex64::default() {
                continue;
            }
            for j in 0..total {
                let kb = b.wavenumber_at(j);
                let ks = Wavenumber([ka.0[0] + kb.0[0], ka.0[1] + kb.0[1], ka.0[2] + kb.0[2]]);
                if !ks.within(n) {
                    continue;
                }
                let idx = out.index_of(ks);
                out.coeffs_mut()[idx] += ca * b.coeffs()[j];
            }
        }
        out
    }

    #[test]
    fn multiply_identity_and_product_to_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let one = SpectralField::constant(3, 1.0);
        let g = SpectralField::random(3, 1.0, 1.0, &mut rng);
        let p = one.multiply(&g).unwrap();
        let diff: f64 = p
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-13);

        // cos(x1)·cos(x1) = 1/2 + cos(2 x1)/2
        let c = SpectralField::cosine(2, k(1, 0, 0), 1.0).unwrap();
        let p = c.multiply(&c).unwrap();
        assert!((p.get(k(0, 0, 0)).unwrap().re - 0.5).abs() < 1e-13);
        assert!((p.get(k(2, 0, 0)).unwrap().re - 0.25).abs() < 1e-13);
        assert!((p.get(k(-2, 0, 0)).unwrap().re - 0.25).abs() < 1e-13);
        // with N = 1 the (2,0,0) mode is truncated away
        let c1 = SpectralField::cosine(1, k(1, 0, 0), 1.0).unwrap();
        let p1 = c1.multiply(&c1).unwrap();
        assert!((p1.get(k(0, 0, 0)).unwrap().re - 0.5).abs() < 1e-13);
        assert!((p1.get(k(1, 0, 0)).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn multiply_matches_direct_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for n in [2, 4, 6] {
            let a = SpectralField::random(n, 1.0, 0.5, &mut rng);
            let b = SpectralField::random(n, 1.0, 0.5, &mut rng);
            let fftp = a.multiply(&b).unwrap();
            let direct = convolve_direct(&a, &b);
            let diff: f64 = fftp
                .coeffs()
                .iter()
                .zip(direct.coeffs())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(
                diff < 1e-11,
                "n={n}: dealiased product differs from convolution by {diff:.3e}"
            );
        }
    }

    #[test]
    fn cubic_cases() {
        let z = SpectralField::zeros(3, true);
        let c = z.cubic_one_plus().unwrap();
        assert!((c.mean_part().unwrap() - 1.0).abs() < 1e-13);
        let rest: f64 = c.sobolev_norm(SobolevIndex::new(0.0).unwrap(), true);
        assert!(rest < 1e-13);

        let k3 = SpectralField::constant(3, 0.5);
        let c = k3.cubic_one_plus().unwrap();
        assert!((c.mean_part().unwrap() - 1.5f64.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn cubic_matches_triple_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let u = SpectralField::random(3, 0.3, 0.5, &mut rng);
        // oracle: convolve (1+u) three times at radius 3N (exact for a
        // cubic of a radius-N field), then restrict to radius N
        let mut wide = SpectralField::zeros(9, false);
        let idx0 = wide.index_of(Wavenumber::ZERO);
        wide.coeffs_mut()[idx0] = Complex64::new(1.0, 0.0);
        for i in 0..u.coeffs().len() {
            let kk = u.wavenumber_at(i);
            let idx = wide.index_of(kk);
            wide.coeffs_mut()[idx] += u.coeffs()[i];
        }
        let sq_wide = convolve_direct(&wide, &wide);
        let cube_wide = convolve_direct(&sq_wide, &wide);
        let mut oracle = SpectralField::zeros(3, false);
        for i in 0..oracle.coeffs().len() {
            let kk = oracle.wavenumber_at(i);
            oracle.coeffs_mut()[i] = cube_wide.coeffs()[cube_wide.index_of(kk)];
        }
        let fftc = u.cubic_one_plus().unwrap();
        let diff: f64 = fftc
            .coeffs()
            .iter()
            .zip(oracle.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-11, "cubic differs from triple convolution by {diff:.3e}");
    }

    #[test]
    fn norm_decomposition_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let m = SobolevIndex::new(2.0).unwrap();
        for _ in 0..20 {
            let f = SpectralField::random(4, 1.0, 0.5, &mut rng);
            let full = f.sobolev_norm(m, false);
            let hom = f.sobolev_norm(m, true);
            let mean = f.mean_part().unwrap();
            assert!((full * full - (mean * mean + hom * hom)).abs() < 1e-12 * (1.0 + full * full));
        }
    }

    #[test]
    fn multiplication_constant_values_and_empirical_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        // frozen values of the configured formula (truncation radius 64
        // plus tail bound); not monotone in m: the lattice sum decays
        // faster than 2^m grows between m = 2 and m = 2.5
        let frozen = [(2.0, 12.79980186972246), (2.5, 11.835333837170927), (3.0, 13.182553017067864)];
        for &(mv, want) in &frozen {
            let m = SobolevIndex::supercritical(mv).unwrap();
            let mc = multiplication_constant(m, 40, 4, None, &mut rng).unwrap();
            assert!(mc.c_m >= 1.0);
            assert!(mc.empirical_max <= mc.c_m);
            assert!(
                (mc.c_m - want).abs() < 1e-9 * want,
                "C_m at m={mv}: got {}, frozen {want}",
                mc.c_m
            );
        }
        // trivial pair f = g = 1 has ratio exactly 1
        let one = SpectralField::constant(2, 1.0);
        let p = one.multiply(&one).unwrap();
        let m = SobolevIndex::new(2.0).unwrap();
        assert!((p.sobolev_norm(m, false) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn bad_constant_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let m = SobolevIndex::supercritical(2.0).unwrap();
        let r = multiplication_constant(m, 20, 4, Some(1e-6), &mut rng);
        assert!(matches!(r, Err(Error::MultiplicationConstantViolated { .. })));
    }
}
