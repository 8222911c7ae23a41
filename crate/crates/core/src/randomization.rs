//! Anderson-type randomization `V_omega = sum_j omega_j V 1_{cell j}` with
//! counter-based seeding, and Monte Carlo spectrum ensembles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::linalg::eigvals;
use crate::manifolds::{ModelKind, PotentialField, SpectralModel};
use crate::operators::{assemble_line_schrodinger, assemble_schrodinger};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellDistribution {
    Gaussian,
    Bernoulli,
}

impl CellDistribution {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(Self::Gaussian),
            "bernoulli" => Some(Self::Bernoulli),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::Bernoulli => "bernoulli",
        }
    }
}

/// Cells are `j + h [0, 1)^d` for `j` in `h Z^d`, anchored at the origin of
/// the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndersonConfig {
    pub h: f64,
    pub dist: CellDistribution,
    pub seed: u64,
}

/// Integer cell coordinates of every node plus the cells per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CellLayout {
    pub cell_of_node: Vec<u64>,
    pub cells: u64,
}

fn divides(length: f64, h: f64) -> Result<i64> {
    let ratio = length / h;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-12 * ratio.max(1.0) {
        return Err(invalid(format!("cell size {h} does not divide the chart length {length}")));
    }
    Ok(n as i64)
}

/// Assigns each node of a flat model to its cell.
pub fn cell_layout(model: &SpectralModel, h: f64) -> Result<CellLayout> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(format!("cell size must be positive, got {h}")));
    }
    let index = |x: f64| -> i64 { (x / h + 1e-9).floor() as i64 };
    match model.kind() {
        ModelKind::Torus1 => {
            let n = divides(2.0 * PI, h)?;
            let cell_of_node = model.nodes().iter().map(|p| index(p[0]).rem_euclid(n) as u64).collect();
            Ok(CellLayout { cell_of_node, cells: n as u64 })
        }
        ModelKind::Torus2 => {
            let n = divides(2.0 * PI, h)?;
            let cell_of_node = model
                .nodes()
                .iter()
                .map(|p| (index(p[0]).rem_euclid(n) * n + index(p[1]).rem_euclid(n)) as u64)
                .collect();
            Ok(CellLayout { cell_of_node, cells: (n * n) as u64 })
        }
        ModelKind::Line => {
            let a = model.halfwidth().expect("line model has a halfwidth");
            let n = divides(a, h)?;
            // cells -n..n shifted to 0..2n
            let cell_of_node = model.nodes().iter().map(|p| (index(p[0]) + n).clamp(0, 2 * n - 1) as u64).collect();
            Ok(CellLayout { cell_of_node, cells: (2 * n) as u64 })
        }
        ModelKind::Sphere2 => Err(invalid("the sphere has no canonical cubic tiling; Anderson sampling is not defined")),
    }
}

/// `omega_j` for one cell, drawn from the stream `cell` of a generator keyed
/// by `seed`; independent of evaluation order.
pub fn cell_weight(seed: u64, cell: u64, dist: CellDistribution) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell);
    match dist {
        CellDistribution::Gaussian => StandardNormal.sample(&mut rng),
        CellDistribution::Bernoulli => {
            if rng.random::<bool>() {
                1.0
            } else {
                -1.0
            }
        }
    }
}

/// `V_omega[m] = omega_{cell(m)} V[m]`.
pub fn anderson_sample(model: &SpectralModel, v: &PotentialField, cfg: &AndersonConfig) -> Result<PotentialField> {
    if !v.belongs_to(model) {
        return Err(crate::error::Error::ModelMismatch("potential belongs to another model".into()));
    }
    let layout = cell_layout(model, cfg.h)?;
    let weights: Vec<f64> = (0..layout.cells).map(|c| cell_weight(cfg.seed, c, cfg.dist)).collect();
    v.with_values(
        v.values()
            .iter()
            .zip(&layout.cell_of_node)
            .map(|(x, &c)| x * weights[c as usize])
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct EnsembleMember {
    pub sample: usize,
    pub seed: u64,
    pub potential: PotentialField,
    pub vnorm: f64,
    pub spectrum: Vec<Complex64>,
}

/// Spectra of `(-Delta)^{alpha/2} + V_omega` for seeds `cfg.seed + i`.
pub fn mc_spectrum_ensemble(
    model: &SpectralModel,
    v: &PotentialField,
    cfg: &AndersonConfig,
    alpha: f64,
    q: f64,
    samples: usize,
) -> Result<Vec<EnsembleMember>> {
    if samples == 0 {
        return Err(invalid("an ensemble needs at least one sample"));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let sample_cfg = AndersonConfig { seed, ..*cfg };
            let potential = anderson_sample(model, v, &sample_cfg)?;
            let spectrum = if model.kind() == ModelKind::Line {
                eigvals(&assemble_line_schrodinger(model, &potential)?.to_dense())?
            } else {
                eigvals(&assemble_schrodinger(model, &potential, alpha)?.matrix)?
            };
            let vnorm = potential.lq_norm(q)?;
            Ok(EnsembleMember {
                sample: i,
                seed,
                potential,
                vnorm,
                spectrum,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{build_line, build_sphere2, build_torus1, build_torus1_with_nodes, build_torus2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bernoulli_preserves_modulus() {
        let model = build_torus1_with_nodes(8, 64).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| c(x.sin(), 1.0)).unwrap();
        let cfg = AndersonConfig {
            h: 2.0 * PI / 16.0,
            dist: CellDistribution::Bernoulli,
            seed: 3,
        };
        let w = anderson_sample(&model, &v, &cfg).unwrap();
        for (a, b) in v.values().iter().zip(w.values()) {
            assert_eq!(a.norm(), b.norm());
        }
        let zero = anderson_sample(&model, &PotentialField::zero(&model), &cfg).unwrap();
        assert!(zero.values().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn cell_constancy_and_reproducibility() {
        let model = build_torus2(6).unwrap();
        let v = PotentialField::from_fn(&model, |[x, y]| c(1.0 + x.cos() * y.sin() * 0.5, 0.0)).unwrap();
        let cfg = AndersonConfig {
            h: 2.0 * PI / 7.0,
            dist: CellDistribution::Gaussian,
            seed: 11,
        };
        let a = anderson_sample(&model, &v, &cfg).unwrap();
        let b = anderson_sample(&model, &v, &cfg).unwrap();
        assert_eq!(a.values(), b.values());
        let layout = cell_layout(&model, cfg.h).unwrap();
        let mut seen = std::collections::HashMap::new();
        for ((x, y), cell) in v.values().iter().zip(a.values()).zip(&layout.cell_of_node) {
            let ratio = y.re / x.re;
            let entry = seen.entry(*cell).or_insert(ratio);
            assert!((*entry - ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_mean_four_sigma() {
        let n = 10_000u64;
        let mean: f64 = (0..n).map(|c| cell_weight(42, c, CellDistribution::Gaussian)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());
    }

    #[test]
    fn rejects_sphere_and_nondividing_cells() {
        let sphere = build_sphere2(3).unwrap();
        let cfg = AndersonConfig {
            h: 0.5,
            dist: CellDistribution::Bernoulli,
            seed: 0,
        };
        assert!(anderson_sample(&sphere, &PotentialField::zero(&sphere), &cfg).is_err());
        let torus = build_torus1(8).unwrap();
        assert!(anderson_sample(&torus, &PotentialField::zero(&torus), &cfg).is_err());
        let line = build_line(2.0, 40).unwrap();
        assert!(anderson_sample(&line, &PotentialField::zero(&line), &cfg).is_ok());
    }

    #[test]
    fn single_cell_constant_ensemble() {
        let model = build_torus1(8).unwrap();
        let shift = c(0.5, 0.25);
        let v = PotentialField::constant(&model, shift).unwrap();
        let cfg = AndersonConfig {
            h: 2.0 * PI,
            dist: CellDistribution::Bernoulli,
            seed: 5,
        };
        let ens = mc_spectrum_ensemble(&model, &v, &cfg, 2.0, 2.0, 4).unwrap();
        for member in &ens {
            let sign = cell_weight(member.seed, 0, CellDistribution::Bernoulli);
            for z in &member.spectrum {
                let closest = model
                    .freqs()
                    .iter()
                    .map(|l| (z - (c(l * l, 0.0) + shift * sign)).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(closest < 1e-10);
            }
        }
        let again = mc_spectrum_ensemble(&model, &v, &cfg, 2.0, 2.0, 4).unwrap();
        for (a, b) in ens.iter().zip(&again) {
            assert_eq!(a.spectrum, b.spectrum);
        }
        let one = mc_spectrum_ensemble(&model, &v, &cfg, 2.0, 2.0, 1).unwrap();
        let direct = anderson_sample(&model, &v, &cfg).unwrap();
        let spec = eigvals(&assemble_schrodinger(&model, &direct, 2.0).unwrap().matrix).unwrap();
        assert_eq!(one[0].spectrum, spec);
    }
}
