//! Growth of the free resolvent `L^p -> L^p'` norm along `z = -t` and near
//! a pole, on the two-torus. The ray needs a grid that resolves the kernel
//! width `t^{-1/2}`, so it runs matrix-free on a 128 x 128 grid.

use num_complex::Complex64;
use spectral_enclosure::bounds::{enclosure_exponents, exterior_exponent, resolvent_exponent_fit, TorusGrid};
use spectral_enclosure::harness::studies::log_spaced;
use spectral_enclosure::linalg::OpNormOptions;
use spectral_enclosure::manifolds::build_torus2;
use spectral_enclosure::regions::lebesgue_pair;

fn main() -> spectral_enclosure::Result<()> {
    let (alpha, q) = (2.0, 1.5);
    let (p, pprime) = lebesgue_pair(q)?;
    let opts = OpNormOptions {
        random_starts: 2,
        ..OpNormOptions::default()
    };
    let ray: Vec<Complex64> = log_spaced(10.0, 1000.0, 12).into_iter().map(|t| Complex64::new(-t, 0.0)).collect();
    let predicted = exterior_exponent(&enclosure_exponents(2, q, alpha)?);

    // a coarse Galerkin model saturates at the truncation: R(-t) ~ 1/t once t >> N^2
    let coarse = resolvent_exponent_fit(&build_torus2(8)?, alpha, p, pprime, &ray, &opts)?;
    println!("N = 8 dense: {p} -> {pprime} slope {:.4}", coarse.slope);

    let grid = TorusGrid::new(2, 63, 128)?;
    let calib = grid.exponent_fit(alpha, 2.0, 2.0, &ray, &opts)?;
    println!("grid: 2 -> 2 slope {:.4} (exact -1)", calib.slope);
    let fit = grid.exponent_fit(alpha, p, pprime, &ray, &opts)?;
    println!("grid: {p} -> {pprime} slope {:.4}, predicted {predicted:.4}", fit.slope);

    let pole = TorusGrid::new(2, 16, 34)?.pole_fit(alpha, p, pprime, 1, &log_spaced(1e-3, 1e-1, 6), &opts)?;
    println!("pole approach slope {:.4} (expected 1)", pole.slope);
    Ok(())
}
