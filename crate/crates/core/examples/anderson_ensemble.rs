//! Anderson randomization of a potential on the circle: spectra of a small
//! ensemble and the random-bound statistic across cell sizes.

use num_complex::Complex64;
use spectral_enclosure::harness::studies::{quantile, random_bound_study, RandomBoundConfig};
use spectral_enclosure::manifolds::{build_torus1, build_torus1_with_nodes, PotentialField};
use spectral_enclosure::randomization::{mc_spectrum_ensemble, AndersonConfig, CellDistribution};

fn main() -> spectral_enclosure::Result<()> {
    let model = build_torus1(12)?;
    let v = PotentialField::from_fn(&model, |[x, _]| Complex64::new(1.0 + 0.5 * x.sin(), 0.3))?;
    let cfg = AndersonConfig {
        h: std::f64::consts::PI / 4.0,
        dist: CellDistribution::Gaussian,
        seed: 1,
    };
    for m in mc_spectrum_ensemble(&model, &v, &cfg, 2.0, 2.0, 4)? {
        let spread = m.spectrum.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        println!("seed {}: ||V_w||_2 = {:.4}, max |Im z| = {spread:.4}", m.seed, m.vnorm);
    }

    let model = build_torus1_with_nodes(32, 200)?;
    let v = PotentialField::from_fn(&model, |[x, _]| Complex64::new(1.0 + 0.5 * x.sin(), 0.3))?;
    let study = RandomBoundConfig {
        h: vec![0.25, 0.125, 0.0625],
        dist: CellDistribution::Bernoulli,
        lambdas: vec![2.5, 3.5, 4.5, 5.5],
        eps_ratio: 0.05,
        q: 2.0,
        radius: std::f64::consts::PI,
        samples: 20,
        seed: 9,
    };
    let rows = random_bound_study(&model, &v, &study)?;
    let mut cells: Vec<usize> = rows.iter().map(|r| r.cells).collect();
    cells.dedup();
    for n in cells {
        let xs: Vec<f64> = rows.iter().filter(|r| r.cells == n).map(|r| r.x).collect();
        println!("{n:>4} cells: p95 = {:.5}", quantile(&xs, 0.95));
    }
    Ok(())
}
