//! Experiment-level computations: enclosure constant fits, the square-well
//! family on the line, Anderson random-bound statistics and resolution
//! ladders. The runner, the examples and the integration tests share these.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::{aad_check, enclosure_exponents, keller_check, lieb_thirring_check, random_bound_lhs, BoundReport, FitResult};
use crate::error::{invalid, Result};
use crate::linalg::eigvals;
use crate::manifolds::families;
use crate::manifolds::{
    build_line, build_sphere2, build_torus1, build_torus2, ModelKind, PotentialField, SpectralModel,
};
use crate::operators::{assemble_line_schrodinger, assemble_potential, assemble_schrodinger, free_spectrum};
use crate::randomization::{anderson_sample, AndersonConfig, CellDistribution};
use crate::regions::{EnclosureRegion, Exponents, MembershipReport};

/// Named potential family with its parameters; `build` draws the member for
/// one seed.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Constant(Complex64),
    BandLimited { bandwidth: usize, mean: Complex64 },
    Smooth { scale: f64 },
    Nonvanishing,
    SquareWell { depth: Complex64, halfwidth: f64, center: f64 },
    RandomWells { count: usize, max_depth: f64, spread: f64 },
}

impl PotentialSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::Constant(_) => "constant",
            Self::BandLimited { .. } => "band_limited",
            Self::Smooth { .. } => "smooth",
            Self::Nonvanishing => "nonvanishing",
            Self::SquareWell { .. } => "square_well",
            Self::RandomWells { .. } => "random_wells",
        }
    }

    pub fn build(&self, model: &SpectralModel, seed: u64) -> Result<PotentialField> {
        match *self {
            Self::Zero => Ok(PotentialField::zero(model)),
            Self::Constant(c) => PotentialField::constant(model, c),
            Self::BandLimited { bandwidth, mean } => families::band_limited_random(model, bandwidth, mean, seed),
            Self::Smooth { scale } => families::smooth_test_potential(model, scale),
            Self::Nonvanishing => families::nonvanishing_random(model, seed),
            Self::SquareWell { depth, halfwidth, center } => families::square_well(model, depth, halfwidth, center),
            Self::RandomWells { count, max_depth, spread } => {
                families::random_multi_well(model, count, max_depth, spread, seed)
            }
        }
    }

    /// Whether different seeds give different members.
    pub fn is_random(&self) -> bool {
        matches!(self, Self::BandLimited { .. } | Self::Nonvanishing | Self::RandomWells { .. })
    }
}

/// Model from its kind and size parameter (`N` for tori, `L` for the sphere,
/// grid points for the line).
pub fn build_model(kind: ModelKind, size: usize, halfwidth: f64) -> Result<SpectralModel> {
    match kind {
        ModelKind::Torus1 => build_torus1(size),
        ModelKind::Torus2 => build_torus2(size),
        ModelKind::Sphere2 => build_sphere2(size),
        ModelKind::Line => build_line(halfwidth, size),
    }
}

/// Spectrum of `(-Delta)^{alpha/2} + V` (alpha = 2 on the line).
pub fn spectrum(model: &SpectralModel, v: &PotentialField, alpha: f64) -> Result<Vec<Complex64>> {
    if model.kind() == ModelKind::Line {
        let op = assemble_line_schrodinger(model, v)?;
        if op.is_real() {
            let tri = op.to_sym_tridiagonal()?;
            let n = tri.len();
            return (0..n)
                .map(|k| tri.kth_eigenvalue(k, 1e-13).map(|x| Complex64::new(x, 0.0)))
                .collect();
        }
        return eigvals(&op.to_dense());
    }
    eigvals(&assemble_schrodinger(model, v, alpha)?.matrix)
}

#[derive(Debug, Clone)]
pub struct EnclosureSample {
    pub sample: usize,
    pub seed: u64,
    /// Requested `||V||_q`, if the member was rescaled.
    pub target: Option<f64>,
    pub vnorm: f64,
    pub spectrum: Vec<Complex64>,
    pub reports: Vec<MembershipReport>,
}

impl EnclosureSample {
    /// Smallest constant enclosing every eigenvalue of this sample.
    pub fn c_min(&self) -> f64 {
        self.reports.iter().map(|r| r.min_c).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct EnclosureStudy {
    pub exponents: Exponents,
    pub freqs: Vec<f64>,
    pub samples: Vec<EnclosureSample>,
}

impl EnclosureStudy {
    pub fn fit(&self) -> FitResult {
        let mut fit = FitResult::from_samples(self.samples.iter().map(|s| s.c_min()).collect());
        fit.scale = self.scale_trace();
        fit
    }

    pub fn c_emp(&self) -> f64 {
        self.fit().c_emp
    }

    /// `(target norm, C_emp over the samples at that norm)`, in the order the
    /// targets were requested.
    pub fn scale_trace(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for s in &self.samples {
            let Some(t) = s.target else { continue };
            match out.iter_mut().find(|(x, _)| *x == t) {
                Some(entry) => entry.1 = entry.1.max(s.c_min()),
                None => out.push((t, s.c_min())),
            }
        }
        out
    }

    /// Rebuilds each sample's region with constant `c` and counts the
    /// eigenvalues it misses.
    pub fn missed_at(&self, c: f64) -> Result<usize> {
        let mut missed = 0;
        for s in &self.samples {
            let region = EnclosureRegion::new(&self.freqs, self.exponents, c, s.vnorm)?;
            missed += s.spectrum.iter().filter(|z| !region.contains(**z).enclosed).count();
        }
        Ok(missed)
    }
}

/// Draws `samples` members of `spec` (seeds `seed + i`), rescales each to
/// every norm in `norms` (or keeps it as drawn when `norms` is empty), and
/// records the minimal enclosure constant of every eigenvalue.
pub fn enclosure_study(
    model: &SpectralModel,
    spec: &PotentialSpec,
    alpha: f64,
    q: f64,
    norms: &[f64],
    samples: usize,
    seed: u64,
) -> Result<EnclosureStudy> {
    if samples == 0 {
        return Err(invalid("an enclosure study needs at least one sample"));
    }
    let exponents = enclosure_exponents(model.dim(), q, alpha)?;
    let freqs = model.freqs();
    let targets: Vec<Option<f64>> = if norms.is_empty() {
        vec![None]
    } else {
        norms.iter().map(|&t| Some(t)).collect()
    };
    let jobs: Vec<(usize, Option<f64>)> = (0..samples).flat_map(|i| targets.iter().map(move |t| (i, *t))).collect();
    let out: Result<Vec<EnclosureSample>> = jobs
        .into_par_iter()
        .map(|(i, target)| {
            let seed_i = seed.wrapping_add(i as u64);
            let drawn = spec.build(model, seed_i)?;
            let v = match target {
                Some(t) if drawn.lq_norm(q)? > 0.0 => drawn.normalized_to(q, t)?,
                _ => drawn,
            };
            let vnorm = v.lq_norm(q)?;
            let spectrum = spectrum(model, &v, alpha)?;
            let region = EnclosureRegion::new(&freqs, exponents, 1.0, vnorm)?;
            let reports = spectrum.iter().map(|z| region.contains(*z)).collect();
            Ok(EnclosureSample {
                sample: i,
                seed: seed_i,
                target,
                vnorm,
                spectrum,
                reports,
            })
        })
        .collect();
    Ok(EnclosureStudy {
        exponents,
        freqs,
        samples: out?,
    })
}

/// One member of the square-well family `-(kappa/2a) 1_[-a, a]`.
#[derive(Debug, Clone)]
pub struct WellRow {
    pub halfwidth: f64,
    pub depth: f64,
    /// Negative eigenvalues, ascending.
    pub negative: Vec<f64>,
    pub aad: BoundReport,
    pub keller: BoundReport,
    pub lieb_thirring: BoundReport,
}

/// Negative eigenvalues of a real potential on the line model, ascending.
pub fn line_negative_eigenvalues(model: &SpectralModel, v: &PotentialField) -> Result<Vec<f64>> {
    let tri = assemble_line_schrodinger(model, v)?.to_sym_tridiagonal()?;
    tri.eigenvalues_below(0.0, 1e-13)
}

/// AAD, Keller (`p = 1`) and Lieb–Thirring (`gamma = 1/2`) reports for one
/// real potential on the line.
pub fn line_reports(model: &SpectralModel, v: &PotentialField) -> Result<(Vec<f64>, BoundReport, BoundReport, BoundReport)> {
    let negative = line_negative_eigenvalues(model, v)?;
    let spectrum: Vec<Complex64> = negative.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let aad = aad_check(&spectrum, v)?;
    let keller = keller_check(negative.first().copied().unwrap_or(0.0), v, 1.0)?;
    let lt = lieb_thirring_check(&negative, v, 0.5, 1)?;
    Ok((negative, aad, keller, lt))
}

/// Square wells of halfwidth `a` and depth `kappa/(2a)` centred at the origin.
pub fn square_well_family(model: &SpectralModel, kappa: f64, widths: &[f64]) -> Result<Vec<WellRow>> {
    widths
        .iter()
        .map(|&a| {
            let depth = -kappa / (2.0 * a);
            let v = families::square_well(model, Complex64::new(depth, 0.0), a, 0.0)?;
            let (negative, aad, keller, lieb_thirring) = line_reports(model, &v)?;
            Ok(WellRow {
                halfwidth: a,
                depth,
                negative,
                aad: aad.with_param("a", a),
                keller: keller.with_param("a", a),
                lieb_thirring: lieb_thirring.with_param("a", a),
            })
        })
        .collect()
}

/// Richardson-type limit estimate `2 r(a) - r(2a)` for a quantity with a
/// linear leading error in `a`.
pub fn linear_extrapolation(coarse: f64, fine: f64) -> f64 {
    2.0 * fine - coarse
}

/// Anderson random-bound exploration on a torus: for each cell count and
/// sample, `X = max_lambda lhs(lambda, h, R) rho(K_omega(z0)) / ||V_omega||_q`
/// over targets `z0 = (lambda + i eps lambda)^2`, where `rho(K)` is the
/// spectral radius of the Birman–Schwinger operator (computed as that of
/// `R_0(z0) P_V` in mode space, which has the same nonzero spectrum).
/// `1/rho(K)` is the smallest coupling `|t|` making `z0` an eigenvalue of
/// `H_0 + t V_omega`, so `X` is the smallest `M` consistent with that.
#[derive(Debug, Clone)]
pub struct RandomBoundConfig {
    /// Requested cell sizes in chart units; each is rounded to the nearest
    /// exact divisor of the period.
    pub h: Vec<f64>,
    pub dist: CellDistribution,
    pub lambdas: Vec<f64>,
    pub eps_ratio: f64,
    pub q: f64,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RandomBoundRow {
    pub cells: usize,
    pub h: f64,
    pub sample: usize,
    pub seed: u64,
    pub vnorm: f64,
    pub x: f64,
    pub argmax_lambda: f64,
}

/// Cells per period and the exact cell size for a requested `h`.
pub fn exact_cells(period: f64, h: f64) -> Result<(usize, f64)> {
    if !(h > 0.0 && h < period) {
        return Err(invalid(format!("cell size {h} must lie in (0, {period})")));
    }
    let cells = (period / h).round().max(1.0) as usize;
    Ok((cells, period / cells as f64))
}

pub fn random_bound_study(model: &SpectralModel, v: &PotentialField, cfg: &RandomBoundConfig) -> Result<Vec<RandomBoundRow>> {
    if !matches!(model.kind(), ModelKind::Torus1 | ModelKind::Torus2) {
        return Err(invalid("the random-bound exploration runs on torus models"));
    }
    if cfg.lambdas.is_empty() || cfg.samples == 0 {
        return Err(invalid("random-bound exploration needs targets and samples"));
    }
    let period = 2.0 * PI;
    let free = free_spectrum(model, 2.0)?;
    let d = model.dim();
    let mut jobs = Vec::new();
    for &h in &cfg.h {
        let (cells, h_exact) = exact_cells(period, h)?;
        if !(h_exact < cfg.radius) {
            return Err(invalid(format!("cell size {h_exact} must be below the radius {}", cfg.radius)));
        }
        for i in 0..cfg.samples {
            jobs.push((cells, h_exact, i));
        }
    }
    jobs.into_par_iter()
        .map(|(cells, h, i)| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let vw = anderson_sample(model, v, &AndersonConfig { h, dist: cfg.dist, seed })?;
            let vnorm = vw.lq_norm(cfg.q)?;
            let p = assemble_potential(model, &vw)?.matrix;
            let mut best = (0.0, cfg.lambdas[0]);
            for &lambda in &cfg.lambdas {
                let z0 = Complex64::new(lambda, cfg.eps_ratio * lambda).powi(2);
                let mut m = p.clone();
                for (row, mut r) in m.row_iter_mut().enumerate() {
                    r *= Complex64::new(1.0, 0.0) / (free[row] - z0);
                }
                let rho = eigvals(&m)?.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let x = if vnorm > 0.0 {
                    random_bound_lhs(lambda, h, cfg.radius, cfg.q, d)? * rho / vnorm
                } else {
                    0.0
                };
                if x > best.0 {
                    best = (x, lambda);
                }
            }
            Ok(RandomBoundRow {
                cells,
                h,
                sample: i,
                seed,
                vnorm,
                x: best.0,
                argmax_lambda: best.1,
            })
        })
        .collect()
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = p.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// Fraction of values strictly above `m`.
pub fn violation_fraction(values: &[f64], m: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|x| **x > m).count() as f64 / values.len() as f64
}

/// One rung of a resolution ladder.
#[derive(Debug, Clone)]
pub struct ConvergenceRung {
    pub size: usize,
    pub n_modes: usize,
    pub vnorm: f64,
    pub c_emp: f64,
    /// Computed eigenvalues nearest the tracked free eigenvalues.
    pub tracked: Vec<Complex64>,
    /// Largest change of a tracked eigenvalue from the previous rung.
    pub drift: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub rungs: Vec<ConvergenceRung>,
    /// Free eigenvalues `lambda^alpha` that were tracked.
    pub targets: Vec<f64>,
    pub non_monotone: bool,
    /// Some consecutive pair of `C_emp` differs by more than 20%.
    pub drifting: bool,
}

/// Repeats one enclosure fit over a ladder of model sizes and tracks the
/// eigenvalues nearest the free eigenvalues with indices `track` (into the
/// sorted distinct free spectrum of the smallest rung).
pub fn convergence_study(
    kind: ModelKind,
    sizes: &[usize],
    halfwidth: f64,
    spec: &PotentialSpec,
    alpha: f64,
    q: f64,
    seed: u64,
    track: &[usize],
) -> Result<ConvergenceTable> {
    if sizes.len() < 3 {
        return Err(invalid("a convergence study needs at least three ladder rungs"));
    }
    let mut rungs: Vec<ConvergenceRung> = Vec::with_capacity(sizes.len());
    let mut targets: Vec<f64> = Vec::new();
    for (r, &size) in sizes.iter().enumerate() {
        let model = build_model(kind, size, halfwidth)?;
        let v = spec.build(&model, seed)?;
        let spec_r = spectrum(&model, &v, alpha)?;
        let vnorm = v.lq_norm(q)?;
        let c_emp = if model.kind() == ModelKind::Line {
            f64::NAN
        } else {
            let exp = enclosure_exponents(model.dim(), q, alpha)?;
            let region = EnclosureRegion::new(&model.freqs(), exp, 1.0, vnorm)?;
            spec_r.iter().map(|z| region.contains(*z).min_c).fold(0.0, f64::max)
        };
        if r == 0 {
            let mut free = free_spectrum(&model, alpha)?;
            free.sort_by(f64::total_cmp);
            free.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
            for &t in track {
                targets.push(*free.get(t).ok_or_else(|| invalid(format!("tracked index {t} exceeds the smallest rung")))?);
            }
        }
        let tracked: Vec<Complex64> = targets
            .iter()
            .map(|&t| {
                *spec_r
                    .iter()
                    .min_by(|a, b| (*a - t).norm().total_cmp(&(*b - t).norm()))
                    .expect("nonempty spectrum")
            })
            .collect();
        let drift = rungs.last().map(|prev| {
            prev.tracked
                .iter()
                .zip(&tracked)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        });
        rungs.push(ConvergenceRung {
            size,
            n_modes: model.n_modes(),
            vnorm,
            c_emp,
            tracked,
            drift,
        });
    }
    let c: Vec<f64> = rungs.iter().map(|r| r.c_emp).collect();
    let finite = c.iter().all(|x| x.is_finite());
    let increasing = c.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = c.windows(2).all(|w| w[1] <= w[0]);
    let non_monotone = finite && !(increasing || decreasing);
    let drifting = finite && c.windows(2).any(|w| FitResult::variation(&[w[0], w[1]]) > 0.2);
    Ok(ConvergenceTable {
        rungs,
        targets,
        non_monotone,
        drifting,
    })
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::build_torus1_with_nodes;

    #[test]
    fn zero_potential_sits_on_centres() {
        let model = build_torus1(8).unwrap();
        let study = enclosure_study(&model, &PotentialSpec::Zero, 2.0, 2.0, &[], 1, 0).unwrap();
        assert_eq!(study.c_emp(), 0.0);
        assert_eq!(study.missed_at(0.0).unwrap(), 0);
    }

    #[test]
    fn constant_shift_constant() {
        let model = build_torus1(16).unwrap();
        let spec = PotentialSpec::Constant(Complex64::new(1.0, 2.0));
        let study = enclosure_study(&model, &spec, 2.0, 2.0, &[], 1, 0).unwrap();
        assert!((study.c_emp() - (2.0 * PI).powf(-0.5)).abs() < 1e-8);
        // rescaling a constant keeps the constant
        let scaled = enclosure_study(&model, &spec, 2.0, 2.0, &[0.1, 10.0], 1, 0).unwrap();
        for (_, c) in scaled.scale_trace() {
            assert!((c - (2.0 * PI).powf(-0.5)).abs() < 1e-8);
        }
    }

    #[test]
    fn quantiles_and_fractions() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.95), 95.0);
        assert_eq!(quantile(&[2.0, 1.0], 0.5), 1.5);
        assert_eq!(violation_fraction(&v, 89.5), 11.0 / 101.0);
        assert_eq!(violation_fraction(&[], 1.0), 0.0);
    }

    #[test]
    fn exact_cells_rounds_to_divisors() {
        let (n, h) = exact_cells(2.0 * PI, 0.25).unwrap();
        assert_eq!(n, 25);
        assert!((h * 25.0 - 2.0 * PI).abs() < 1e-12);
        assert!(exact_cells(2.0 * PI, 7.0).is_err());
    }

    #[test]
    fn square_well_family_has_one_bound_state_for_narrow_wells() {
        let model = build_line(20.0, 2000).unwrap();
        let rows = square_well_family(&model, 2.0, &[0.32, 0.16]).unwrap();
        for row in &rows {
            assert_eq!(row.negative.len(), 1);
            assert!(row.aad.ratio < 1.0);
        }
        assert!(rows[1].aad.ratio > rows[0].aad.ratio);
    }

    #[test]
    fn random_bound_rows_are_reproducible() {
        let model = build_torus1_with_nodes(16, 100).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| Complex64::new(1.0 + 0.5 * x.sin(), 0.3)).unwrap();
        let cfg = RandomBoundConfig {
            h: vec![2.0 * PI / 5.0, 2.0 * PI / 10.0],
            dist: CellDistribution::Bernoulli,
            lambdas: vec![2.5, 3.0],
            eps_ratio: 0.05,
            q: 2.0,
            radius: PI,
            samples: 3,
            seed: 9,
        };
        let a = random_bound_study(&model, &v, &cfg).unwrap();
        let b = random_bound_study(&model, &v, &cfg).unwrap();
        assert_eq!(a.len(), 6);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.x, y.x);
            assert!((x.vnorm - v.lq_norm(2.0).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn ladder_free_spectrum_is_stable() {
        let table = convergence_study(ModelKind::Torus1, &[8, 12, 16], 0.0, &PotentialSpec::Zero, 2.0, 2.0, 0, &[0, 2, 4]).unwrap();
        for rung in &table.rungs {
            for (z, t) in rung.tracked.iter().zip(&table.targets) {
                assert!((z - t).norm() < 1e-10);
            }
        }
        assert!(!table.drifting);
        assert!(convergence_study(ModelKind::Torus1, &[8, 12], 0.0, &PotentialSpec::Zero, 2.0, 2.0, 0, &[0]).is_err());
    }

    #[test]
    fn log_spacing_endpoints() {
        let t = log_spaced(10.0, 1000.0, 12);
        assert_eq!(t.len(), 12);
        assert!((t[0] - 10.0).abs() < 1e-12 && (t[11] - 1000.0).abs() < 1e-9);
    }
}
