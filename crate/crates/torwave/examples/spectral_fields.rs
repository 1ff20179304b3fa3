//! Tour of the spectral field type: norms, derivatives, and dealiased
//! products on the 3-torus.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torwave::field::{
    analytic_multiplication_constant, h_inner_product, multiplication_constant, SobolevIndex,
    SpectralField, Wavenumber,
};

fn main() -> torwave::Result<()> {
    let n = 4;
    let m = SobolevIndex::new(2.0)?;
    let m3 = SobolevIndex::new(3.0)?;

    // cos(x1) has coefficients 1/2 at ±(1,0,0)
    let f = SpectralField::cosine(n, Wavenumber([1, 0, 0]), 1.0)?;
    println!("||cos x1||_H2  = {:.12}", f.sobolev_norm(m, false));
    println!("||cos x1||_Ḣ2  = {:.12} (same: zero mean)", f.sobolev_norm(m, true));

    // the gradient shifts the homogeneous order by exactly one
    let grad = f.gradient();
    let g_norm = h_inner_product(&[&grad[0], &grad[1], &grad[2]], &[&grad[0], &grad[1], &grad[2]], m)?
        .sqrt();
    println!("||∂x f||_Ḣ2 = {:.12} vs ||f||_Ḣ3 = {:.12}", g_norm, f.sobolev_norm(m3, true));

    // dealiased product: cos² x1 = 1/2 + cos(2 x1)/2
    let sq = f.multiply(&f)?;
    println!("mean of cos² = {:.12}", sq.mean_part()?);
    println!("(2,0,0) mode = {:.12}", sq.get(Wavenumber([2, 0, 0]))?.re);

    // the cubic (1+u)³ stays alias-free on the padded grid
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = SpectralField::random(n, 0.3, 1.0, &mut rng);
    let cubic = u.cubic_one_plus()?;
    println!("hermitian defect of (1+u)³: {:.3e}", cubic.hermitian_error());

    // the algebra constant ||fg|| <= C_m ||f|| ||g|| and its empirical check
    let c = multiplication_constant(m, 100, n, None, &mut rng)?;
    println!(
        "C_2 = {:.6} (analytic {:.6}), largest observed ratio {:.6}",
        c.c_m,
        analytic_multiplication_constant(m),
        c.empirical_max
    );
    Ok(())
}
