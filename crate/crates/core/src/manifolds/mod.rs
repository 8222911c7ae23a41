//! Discrete spectral models: an orthonormal eigenbasis of the Laplacian
//! sampled on a quadrature grid that integrates products of retained modes
//! exactly.

pub mod families;
mod potential;
mod sphere;

use std::f64::consts::PI;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Result};

pub use potential::PotentialField;
pub use sphere::{gauss_legendre, real_spherical_harmonic};

static NEXT_MODEL_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Torus1,
    Torus2,
    Sphere2,
    Line,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Torus1 => "torus1",
            ModelKind::Torus2 => "torus2",
            ModelKind::Sphere2 => "sphere2",
            ModelKind::Line => "line",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "torus1" => Some(ModelKind::Torus1),
            "torus2" => Some(ModelKind::Torus2),
            "sphere2" => Some(ModelKind::Sphere2),
            "line" => Some(ModelKind::Line),
            _ => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantum numbers of a retained mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeLabel {
    Fourier1(i64),
    Fourier2(i64, i64),
    Harmonic { l: i64, m: i64 },
    GridPoint(usize),
}

/// A retained eigenmode: `freq` is `lambda_k`, so `freq^2` is an eigenvalue
/// of the Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub index: usize,
    pub label: ModeLabel,
    pub freq: f64,
}

/// Discrete eigenbasis of a model manifold on a quadrature grid.
///
/// For eigenbasis models `basis` holds `e_k(x_m)` with nodes along rows and
/// modes along columns. The line model has no eigenbasis; its operators are
/// assembled by finite differences on the grid.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    id: u64,
    kind: ModelKind,
    dim: usize,
    size: usize,
    grid_shape: Vec<usize>,
    halfwidth: Option<f64>,
    modes: Vec<Mode>,
    basis: Option<DMatrix<Complex64>>,
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    volume: f64,
}

/// Serializable summary of a model for result manifests.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    pub size: usize,
    pub halfwidth: Option<f64>,
    pub modes: usize,
    pub nodes: usize,
}

impl fmt::Display for ModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} size={} modes={} nodes={}", self.kind, self.size, self.modes, self.nodes)?;
        if let Some(h) = self.halfwidth {
            write!(f, " halfwidth={h}")?;
        }
        Ok(())
    }
}

impl SpectralModel {
    /// Assembles a model from explicit parts. Columns of `basis` must be
    /// orthonormal under `weights`; `freqs` are sorted into nondecreasing order
    /// together with their columns.
    pub fn from_parts(
        kind: ModelKind,
        dim: usize,
        freqs: Vec<f64>,
        basis: DMatrix<Complex64>,
        nodes: Vec<[f64; 2]>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if basis.ncols() != freqs.len() {
            return Err(invalid("basis column count must equal the number of frequencies"));
        }
        if basis.nrows() != nodes.len() || nodes.len() != weights.len() {
            return Err(invalid("basis rows, nodes and weights must agree in length"));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(invalid("quadrature weights must be positive"));
        }
        if freqs.iter().any(|f| !(*f >= 0.0)) {
            return Err(invalid("frequencies must be nonnegative"));
        }
        let labels = (0..freqs.len()).map(ModeLabel::GridPoint).collect();
        let size = freqs.len();
        Ok(Self::assemble(kind, dim, size, vec![nodes.len()], None, freqs, labels, basis, nodes, weights))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: ModelKind,
        dim: usize,
        size: usize,
        grid_shape: Vec<usize>,
        halfwidth: Option<f64>,
        freqs: Vec<f64>,
        labels: Vec<ModeLabel>,
        basis: DMatrix<Complex64>,
        nodes: Vec<[f64; 2]>,
        weights: Vec<f64>,
    ) -> Self {
        let mut order: Vec<usize> = (0..freqs.len()).collect();
        order.sort_by(|&a, &b| freqs[a].total_cmp(&freqs[b]));
        let sorted = DMatrix::from_fn(basis.nrows(), order.len(), |r, c| basis[(r, order[c])]);
        let modes = order
            .iter()
            .enumerate()
            .map(|(index, &o)| Mode {
                index,
                label: labels[o],
                freq: freqs[o],
            })
            .collect();
        let volume = weights.iter().sum();
        Self {
            id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
            kind,
            dim,
            size,
            grid_shape,
            halfwidth,
            modes,
            basis: Some(sorted),
            nodes,
            weights,
            volume,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size parameter the model was built with (`N` or `L`).
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn halfwidth(&self) -> Option<f64> {
        self.halfwidth
    }

    /// Points per axis of the tensor grid (torus models), or the node count.
    pub fn grid_shape(&self) -> &[usize] {
        &self.grid_shape
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn freqs(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.freq).collect()
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn basis(&self) -> Option<&DMatrix<Complex64>> {
        self.basis.as_ref()
    }

    pub fn has_eigenbasis(&self) -> bool {
        self.basis.is_some()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Grid spacing of the line model.
    pub fn spacing(&self) -> Option<f64> {
        match self.kind {
            ModelKind::Line => Some(self.weights[0]),
            _ => None,
        }
    }

    /// Length of the periodic chart along each axis (tori only).
    pub fn period(&self) -> Option<f64> {
        match self.kind {
            ModelKind::Torus1 | ModelKind::Torus2 => Some(2.0 * PI),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            kind: self.kind,
            size: self.size,
            halfwidth: self.halfwidth,
            modes: self.n_modes(),
            nodes: self.n_nodes(),
        }
    }

    /// Largest `|G_jk - delta_jk|` of the discrete Gram matrix.
    pub fn orthonormality_residual(&self) -> f64 {
        let Some(basis) = &self.basis else {
            return 0.0;
        };
        let weighted = DMatrix::from_fn(basis.nrows(), basis.ncols(), |r, c| {
            basis[(r, c)] * self.weights[r]
        });
        let gram = basis.adjoint() * weighted;
        let mut worst: f64 = 0.0;
        for j in 0..gram.nrows() {
            for k in 0..gram.ncols() {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((gram[(j, k)] - target).norm());
            }
        }
        worst
    }
}

/// Flat circle of length `2 pi` with modes `e^{ikx}/sqrt(2 pi)`, `|k| <= N/2`,
/// on `2N + 2` uniform nodes.
pub fn build_torus1(n: usize) -> Result<SpectralModel> {
    build_torus1_with_nodes(n, 2 * n + 2)
}

/// [`build_torus1`] with an explicit node count (at least `2N + 1`).
pub fn build_torus1_with_nodes(n: usize, nodes: usize) -> Result<SpectralModel> {
    if n < 4 || n % 2 != 0 {
        return Err(invalid(format!("torus1 needs an even N >= 4, got {n}")));
    }
    if nodes < 2 * n + 1 {
        return Err(invalid(format!("torus1 with N = {n} needs at least {} nodes", 2 * n + 1)));
    }
    let half = (n / 2) as i64;
    let ks: Vec<i64> = (0..=half).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).collect();
    let h = 2.0 * PI / nodes as f64;
    let xs: Vec<f64> = (0..nodes).map(|m| m as f64 * h).collect();
    let norm = 1.0 / (2.0 * PI).sqrt();
    let basis = DMatrix::from_fn(nodes, ks.len(), |r, c| {
        Complex64::from_polar(norm, ks[c] as f64 * xs[r])
    });
    let freqs = ks.iter().map(|k| k.unsigned_abs() as f64).collect();
    let labels = ks.iter().map(|&k| ModeLabel::Fourier1(k)).collect();
    Ok(SpectralModel::assemble(
        ModelKind::Torus1,
        1,
        n,
        vec![nodes],
        None,
        freqs,
        labels,
        basis,
        xs.iter().map(|&x| [x, 0.0]).collect(),
        vec![h; nodes],
    ))
}

/// Flat square torus `(R / 2 pi Z)^2` with modes `e^{ik.x}/(2 pi)`,
/// `|k|_inf <= N`, on a `(2N + 2)^2` grid.
pub fn build_torus2(n: usize) -> Result<SpectralModel> {
    build_torus2_with_grid(n, 2 * n + 2)
}

/// [`build_torus2`] with `per_axis` grid points along each axis (at least `2N + 1`).
pub fn build_torus2_with_grid(n: usize, per_axis: usize) -> Result<SpectralModel> {
    if n < 1 {
        return Err(invalid("torus2 needs N >= 1"));
    }
    if per_axis < 2 * n + 1 {
        return Err(invalid(format!("torus2 with N = {n} needs at least {} points per axis", 2 * n + 1)));
    }
    let ni = n as i64;
    let ks: Vec<(i64, i64)> = (-ni..=ni).flat_map(|a| (-ni..=ni).map(move |b| (a, b))).collect();
    let h = 2.0 * PI / per_axis as f64;
    // nodes in row-major order: index = i * per_axis + j, point (x_i, y_j)
    let nodes: Vec<[f64; 2]> = (0..per_axis)
        .flat_map(|i| (0..per_axis).map(move |j| [i as f64 * h, j as f64 * h]))
        .collect();
    let norm = 1.0 / (2.0 * PI);
    let basis = DMatrix::from_fn(nodes.len(), ks.len(), |r, c| {
        let [x, y] = nodes[r];
        let (a, b) = ks[c];
        Complex64::from_polar(norm, a as f64 * x + b as f64 * y)
    });
    let freqs = ks.iter().map(|&(a, b)| ((a * a + b * b) as f64).sqrt()).collect();
    let labels = ks.iter().map(|&(a, b)| ModeLabel::Fourier2(a, b)).collect();
    let count = nodes.len();
    Ok(SpectralModel::assemble(
        ModelKind::Torus2,
        2,
        n,
        vec![per_axis, per_axis],
        None,
        freqs,
        labels,
        basis,
        nodes,
        vec![h * h; count],
    ))
}

/// Round unit sphere with real spherical harmonics `Y_l^m`, `l <= L`, on a
/// Gauss-Legendre (`2L + 2` in `cos theta`) times uniform (`4L + 4` in `phi`) grid.
pub fn build_sphere2(l_max: usize) -> Result<SpectralModel> {
    build_sphere2_with_grid(l_max, 2 * l_max + 2, 4 * l_max + 4)
}

/// [`build_sphere2`] with explicit grid sizes.
pub fn build_sphere2_with_grid(l_max: usize, n_theta: usize, n_phi: usize) -> Result<SpectralModel> {
    if l_max < 2 {
        return Err(invalid(format!("sphere2 needs L >= 2, got {l_max}")));
    }
    if n_theta < l_max + 1 || n_phi < 2 * l_max + 1 {
        return Err(invalid("sphere2 grid too coarse for exact Gram integration"));
    }
    let (xs, wx) = gauss_legendre(n_theta);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in xs.iter().zip(&wx) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            nodes.push([theta, j as f64 * dphi]);
            weights.push(w * dphi);
        }
    }
    let mut lm = Vec::with_capacity((l_max + 1) * (l_max + 1));
    for l in 0..=l_max as i64 {
        for m in -l..=l {
            lm.push((l, m));
        }
    }
    let mut basis = DMatrix::<Complex64>::zeros(nodes.len(), lm.len());
    for (r, node) in nodes.iter().enumerate() {
        let values = sphere::real_harmonics_at(l_max, node[0].cos(), node[1]);
        for (c, &(l, m)) in lm.iter().enumerate() {
            basis[(r, c)] = Complex64::new(values[sphere::harmonic_index(l, m)], 0.0);
        }
    }
    let freqs = lm.iter().map(|&(l, _)| ((l * (l + 1)) as f64).sqrt()).collect();
    let labels = lm.iter().map(|&(l, m)| ModeLabel::Harmonic { l, m }).collect();
    Ok(SpectralModel::assemble(
        ModelKind::Sphere2,
        2,
        l_max,
        vec![n_theta, n_phi],
        None,
        freqs,
        labels,
        basis,
        nodes,
        weights,
    ))
}

/// Uniform grid `x_m = -a + m h`, `m = 1..=N`, `h = 2a/(N + 1)` on the
/// open box `(-a, a)`; the endpoints carry the Dirichlet condition, so the
/// weights sum to `2a - h`.
pub fn build_line(halfwidth: f64, n: usize) -> Result<SpectralModel> {
    if !(halfwidth > 0.0 && halfwidth.is_finite()) {
        return Err(invalid(format!("line halfwidth must be positive, got {halfwidth}")));
    }
    if n < 16 {
        return Err(invalid(format!("line model needs N >= 16, got {n}")));
    }
    let h = 2.0 * halfwidth / (n as f64 + 1.0);
    let nodes: Vec<[f64; 2]> = (1..=n).map(|m| [-halfwidth + m as f64 * h, 0.0]).collect();
    let weights = vec![h; n];
    let modes = (0..n)
        .map(|index| Mode {
            index,
            label: ModeLabel::GridPoint(index),
            freq: 0.0,
        })
        .collect();
    Ok(SpectralModel {
        id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
        kind: ModelKind::Line,
        dim: 1,
        size: n,
        grid_shape: vec![n],
        halfwidth: Some(halfwidth),
        modes,
        basis: None,
        nodes,
        volume: h * n as f64,
        weights,
    })
}

/// `||V||_{L^q}` on the model's quadrature; `q = f64::INFINITY` gives the max.
pub fn lq_norm(v: &PotentialField, q: f64) -> Result<f64> {
    v.lq_norm(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus1_frequencies_and_gram() {
        let model = build_torus1(8).unwrap();
        assert_eq!(model.freqs(), vec![0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0]);
        assert!(model.orthonormality_residual() < 1e-12);
        assert!((model.volume() - 2.0 * PI).abs() < 1e-12);
        assert!(build_torus1(7).is_err());
        assert!(build_torus1(2).is_err());
        assert!(build_torus1_with_nodes(8, 16).is_err());
    }

    #[test]
    fn torus2_frequencies_and_gram() {
        let model = build_torus2(1).unwrap();
        let s = 2f64.sqrt();
        let expected = [0.0, 1.0, 1.0, 1.0, 1.0, s, s, s, s];
        for (f, e) in model.freqs().iter().zip(expected) {
            assert!((f - e).abs() < 1e-15);
        }
        let model = build_torus2(4).unwrap();
        assert_eq!(model.n_modes(), 81);
        assert!(model.orthonormality_residual() < 1e-12);
        assert!((model.volume() - 4.0 * PI * PI).abs() < 1e-10);
        assert!(build_torus2(0).is_err());
    }

    #[test]
    fn sphere_modes_and_gram() {
        let model = build_sphere2(6).unwrap();
        assert_eq!(model.n_modes(), 49);
        assert!(model.orthonormality_residual() < 1e-12);
        assert!((model.volume() - 4.0 * PI).abs() < 1e-12);
        let basis = model.basis().unwrap();
        let y00 = 1.0 / (4.0 * PI).sqrt();
        for r in 0..model.n_nodes() {
            assert!((basis[(r, 0)].re - y00).abs() < 1e-14);
        }
        for l in 0..=6usize {
            let f = ((l * (l + 1)) as f64).sqrt();
            let count = model.freqs().iter().filter(|&&g| (g - f).abs() < 1e-12).count();
            assert_eq!(count, 2 * l + 1);
        }
        assert!(build_sphere2(1).is_err());
    }

    #[test]
    fn line_grid() {
        let model = build_line(2.0, 16).unwrap();
        let h = 4.0 / 17.0;
        assert_eq!(model.kind(), ModelKind::Line);
        assert!((model.volume() - (4.0 - h)).abs() < 1e-14);
        let xs: Vec<f64> = model.nodes().iter().map(|n| n[0]).collect();
        assert!(xs.windows(2).all(|w| w[1] > w[0]));
        assert!(xs[0] > -2.0 && xs[15] < 2.0);
        assert!(build_line(2.0, 15).is_err());
        assert!(build_line(0.0, 32).is_err());
    }

    #[test]
    fn freqs_sorted() {
        for model in [build_torus1(10).unwrap(), build_torus2(3).unwrap(), build_sphere2(4).unwrap()] {
            let f = model.freqs();
            assert!(f.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
