//! Named potential families used by experiments and tests.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ModelKind, PotentialField, SpectralModel};
use crate::error::{invalid, Result};

/// `depth * 1_[center - a, center + a]` on a line model, averaged over each
/// grid cell `[x_m - h/2, x_m + h/2]` so that `sum_m h V_m = 2 a depth` exactly.
pub fn square_well(model: &SpectralModel, depth: Complex64, halfwidth: f64, center: f64) -> Result<PotentialField> {
    multi_well(model, &[(depth, halfwidth, center)])
}

/// Sum of cell-averaged square wells `(depth, halfwidth, center)`.
pub fn multi_well(model: &SpectralModel, wells: &[(Complex64, f64, f64)]) -> Result<PotentialField> {
    if model.kind() != ModelKind::Line {
        return Err(invalid("square wells are defined on the line model"));
    }
    let h = model.spacing().expect("line model has a spacing");
    let box_half = model.halfwidth().expect("line model has a halfwidth");
    for &(_, a, c) in wells {
        if !(a > 0.0) || c - a < -box_half + h || c + a > box_half - h {
            return Err(invalid(format!("well of halfwidth {a} at {c} must lie inside the box")));
        }
    }
    PotentialField::from_fn(model, |[x, _]| {
        wells
            .iter()
            .map(|&(depth, a, c)| {
                let lo = (x - 0.5 * h).max(c - a);
                let hi = (x + 0.5 * h).min(c + a);
                depth * ((hi - lo).max(0.0) / h)
            })
            .sum()
    })
}

/// Random real multi-well potential on a line model: `count` wells with
/// depths in `[-max_depth, 0)`, halfwidths in `[0.05, 0.5]` and centres in
/// `[-spread, spread]`.
pub fn random_multi_well(model: &SpectralModel, count: usize, max_depth: f64, spread: f64, seed: u64) -> Result<PotentialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wells: Vec<(Complex64, f64, f64)> = (0..count)
        .map(|_| {
            let depth = -max_depth * rng.random_range(0.05..1.0);
            let a = rng.random_range(0.05..0.5);
            let c = rng.random_range(-spread..spread);
            (Complex64::new(depth, 0.0), a, c)
        })
        .collect();
    multi_well(model, &wells)
}

/// Random trigonometric polynomial with complex Gaussian coefficients on the
/// frequencies `|k|_inf <= bandwidth` (torus models) plus `mean` added to the
/// zero mode. Coefficients decay like `1/(1 + |k|^2)`.
pub fn band_limited_random(model: &SpectralModel, bandwidth: usize, mean: Complex64, seed: u64) -> Result<PotentialField> {
    let coeffs = band_limited_coefficients(model.dim(), bandwidth, mean, seed);
    band_limited_from_coefficients(model, &coeffs)
}

/// `(frequency, coefficient)` pairs of [`band_limited_random`].
pub fn band_limited_coefficients(dim: usize, bandwidth: usize, mean: Complex64, seed: u64) -> Vec<(Vec<i64>, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bandwidth as i64;
    let freqs: Vec<Vec<i64>> = if dim == 1 {
        (-b..=b).map(|k| vec![k]).collect()
    } else {
        (-b..=b).flat_map(|a| (-b..=b).map(move |c| vec![a, c])).collect()
    };
    freqs
        .into_iter()
        .map(|k| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let k2: i64 = k.iter().map(|c| c * c).sum();
            let mut coeff = Complex64::new(re, im) / (1.0 + k2 as f64);
            if k2 == 0 {
                coeff += mean;
            }
            (k, coeff)
        })
        .collect()
}

/// Evaluates `sum_k c_k e^{i k.x}` at the nodes of a torus model.
pub fn band_limited_from_coefficients(model: &SpectralModel, coeffs: &[(Vec<i64>, Complex64)]) -> Result<PotentialField> {
    match model.kind() {
        ModelKind::Torus1 | ModelKind::Torus2 => {}
        other => return Err(invalid(format!("band-limited potentials need a torus model, got {other}"))),
    }
    PotentialField::from_fn(model, |[x, y]| {
        coeffs
            .iter()
            .map(|(k, c)| {
                let phase = if k.len() == 1 { k[0] as f64 * x } else { k[0] as f64 * x + k[1] as f64 * y };
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    })
}

/// Smooth nonvanishing complex test potential in the chart coordinates,
/// `scale * (1.5 + cos(x)/2 + i (0.2 + 0.4 sin(x + y)))`.
pub fn smooth_test_potential(model: &SpectralModel, scale: f64) -> Result<PotentialField> {
    PotentialField::from_fn(model, |[x, y]| {
        Complex64::new(1.5 + x.cos() * 0.5, 0.4 * (y + x).sin() + 0.2) * scale
    })
}

/// Nonvanishing random complex potential from a few Fourier modes with a
/// dominant mean, so `|V| >= |mean| - sum |c_k| > 0`.
pub fn nonvanishing_random(model: &SpectralModel, seed: u64) -> Result<PotentialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = Complex64::from_polar(rng.random_range(2.0..4.0), rng.random_range(-PI..PI));
    let modes: Vec<(f64, f64, Complex64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(-3i64..=3) as f64,
                rng.random_range(-3i64..=3) as f64,
                Complex64::from_polar(rng.random_range(0.0..0.5), rng.random_range(-PI..PI)),
            )
        })
        .collect();
    PotentialField::from_fn(model, |[x, y]| {
        mean + modes
            .iter()
            .map(|&(a, b, c)| c * Complex64::from_polar(1.0, a * x + b * y))
            .sum::<Complex64>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{build_line, build_torus2, build_torus2_with_grid};

    #[test]
    fn square_well_integral_is_exact() {
        let model = build_line(5.0, 1000).unwrap();
        for a in [0.31, 0.05, 0.0123] {
            let v = square_well(&model, Complex64::new(-1.0 / a, 0.0), a, 0.0).unwrap();
            assert!((v.integral().re + 2.0).abs() < 1e-12);
            assert!((v.lq_norm(1.0).unwrap() - 2.0).abs() < 1e-12);
        }
        assert!(square_well(&model, Complex64::new(-1.0, 0.0), 6.0, 0.0).is_err());
    }

    #[test]
    fn band_limited_matches_coefficients() {
        let model = build_torus2_with_grid(4, 14).unwrap();
        let v = band_limited_random(&model, 2, Complex64::new(3.0, 0.0), 7).unwrap();
        // mean value recovers the zero coefficient
        let coeffs = band_limited_coefficients(2, 2, Complex64::new(3.0, 0.0), 7);
        let zero = coeffs.iter().find(|(k, _)| k.iter().all(|c| *c == 0)).unwrap().1;
        let mean = v.integral() / model.volume();
        assert!((mean - zero).norm() < 1e-12);
    }

    #[test]
    fn nonvanishing_is_nonvanishing() {
        let model = build_torus2(3).unwrap();
        for seed in 0..5 {
            let v = nonvanishing_random(&model, seed).unwrap();
            assert!(v.values().iter().all(|z| z.norm() > 0.4));
        }
    }
}
