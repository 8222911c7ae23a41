//! Assembly of free, potential, Schrödinger, resolvent and Birman–Schwinger
//! operators on a [`SpectralModel`].

use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::linalg::{solve_tridiagonal, CMatrix, FourierMultiplier, SymTridiagonal};
use crate::manifolds::{ModelKind, PotentialField, SpectralModel};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    Free,
    Potential,
    Schrodinger,
    BirmanSchwinger,
    Resolvent,
}

impl OperatorTag {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorTag::Free => "free",
            OperatorTag::Potential => "potential",
            OperatorTag::Schrodinger => "schrodinger",
            OperatorTag::BirmanSchwinger => "birman_schwinger",
            OperatorTag::Resolvent => "resolvent",
        }
    }
}

/// A dense operator matrix together with where it came from.
///
/// Free, potential, Schrödinger and resolvent operators act on mode
/// coefficients. Birman–Schwinger operators act on node values restricted to
/// `support` (the nodes where `V` is nonzero).
#[derive(Debug, Clone)]
pub struct GalerkinOperator {
    pub matrix: CMatrix,
    pub model_id: u64,
    pub kind: ModelKind,
    pub tag: OperatorTag,
    pub alpha: Option<f64>,
    pub z: Option<Complex64>,
    pub support: Option<Vec<usize>>,
}

impl GalerkinOperator {
    fn new(matrix: CMatrix, model: &SpectralModel, tag: OperatorTag) -> Self {
        Self {
            matrix,
            model_id: model.id(),
            kind: model.kind(),
            tag,
            alpha: None,
            z: None,
            support: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row-major CSV, each entry written as a `re,im` pair.
    pub fn to_csv(&self) -> String {
        matrix_to_csv(&self.matrix)
    }
}

/// Row-major CSV of a complex matrix with `re,im` pairs per entry.
pub fn matrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if c > 0 {
                out.push(',');
            }
            let z = m[(r, c)];
            let _ = write!(out, "{:e},{:e}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

fn require_eigenbasis(model: &SpectralModel) -> Result<&CMatrix> {
    model.basis().ok_or_else(|| {
        invalid(format!(
            "{} model has no eigenbasis; use the finite-difference line assembly",
            model.kind()
        ))
    })
}

fn require_same_model(model: &SpectralModel, v: &PotentialField) -> Result<()> {
    if !v.belongs_to(model) {
        return Err(Error::ModelMismatch(format!(
            "potential was sampled on model {} but the operator uses model {}",
            v.model_id(),
            model.id()
        )));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Eigenvalues of the free operator: `lambda_j^alpha` in mode order, or the
/// discrete Dirichlet Laplacian eigenvalues for the line model (`alpha` = 2 only).
pub fn free_spectrum(model: &SpectralModel, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if model.kind() == ModelKind::Line {
        if alpha != 2.0 {
            return Err(invalid("the line model only carries the Laplacian (alpha = 2)"));
        }
        let n = model.n_nodes();
        let h = model.spacing().expect("line model has a spacing");
        return Ok((1..=n)
            .map(|j| {
                let s = (j as f64 * std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
                4.0 * s * s / (h * h)
            })
            .collect());
    }
    Ok(model.freqs().iter().map(|l| l.powf(alpha)).collect())
}

/// `d(z)`: distance from `z` to the free spectrum.
pub fn free_distance(model: &SpectralModel, alpha: f64, z: Complex64) -> Result<f64> {
    Ok(free_spectrum(model, alpha)?
        .iter()
        .map(|m| (z - m).norm())
        .fold(f64::INFINITY, f64::min))
}

/// `diag(lambda_j^alpha)` in mode order.
pub fn assemble_fractional(model: &SpectralModel, alpha: f64) -> Result<GalerkinOperator> {
    require_eigenbasis(model)?;
    let diag = free_spectrum(model, alpha)?;
    let n = diag.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, d) in diag.iter().enumerate() {
        m[(i, i)] = Complex64::new(*d, 0.0);
    }
    let mut op = GalerkinOperator::new(m, model, OperatorTag::Free);
    op.alpha = Some(alpha);
    Ok(op)
}

/// `V_jk = sum_m w_m conj(e_j(x_m)) V(x_m) e_k(x_m)`.
pub fn assemble_potential(model: &SpectralModel, v: &PotentialField) -> Result<GalerkinOperator> {
    let basis = require_eigenbasis(model)?;
    require_same_model(model, v)?;
    use crate::manifolds::ModeLabel::{Fourier1, Fourier2};
    let fourier = matches!(model.modes().first().map(|m| m.label), Some(Fourier1(_) | Fourier2(..)));
    let matrix = if fourier {
        torus_potential_matrix(model, v)
    } else {
        quadrature_potential_matrix(basis, model.weights(), v.values())
    };
    Ok(GalerkinOperator::new(matrix, model, OperatorTag::Potential))
}

fn quadrature_potential_matrix(basis: &CMatrix, weights: &[f64], values: &[Complex64]) -> CMatrix {
    let mut weighted = basis.clone();
    for (r, (w, v)) in weights.iter().zip(values).enumerate() {
        let f = v * *w;
        for c in 0..weighted.ncols() {
            weighted[(r, c)] *= f;
        }
    }
    basis.ad_mul(&weighted)
}

// On uniform torus grids the quadrature sum is a DFT coefficient of V at the
// frequency difference, so the matrix is filled from one FFT.
fn torus_potential_matrix(model: &SpectralModel, v: &PotentialField) -> CMatrix {
    let shape = model.grid_shape();
    let m = shape[0];
    let mut data = v.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut data);
    if shape.len() == 2 {
        transpose(&mut data, m);
        fft.process(&mut data);
        transpose(&mut data, m);
    }
    // w / (2 pi)^d with w = (2 pi / m)^d
    let scale = 1.0 / (m as f64).powi(shape.len() as i32);
    let wrap = |k: i64| -> usize { k.rem_euclid(m as i64) as usize };
    let modes = model.modes();
    let n = modes.len();
    let mut out = CMatrix::zeros(n, n);
    use crate::manifolds::ModeLabel::*;
    for (j, mj) in modes.iter().enumerate() {
        for (k, mk) in modes.iter().enumerate() {
            // sum_x V(x) e^{-i (k_j - k_k) x}
            let idx = match (mj.label, mk.label) {
                (Fourier1(a), Fourier1(b)) => wrap(a - b),
                (Fourier2(a1, a2), Fourier2(b1, b2)) => wrap(a1 - b1) * m + wrap(a2 - b2),
                _ => unreachable!("torus models carry Fourier labels"),
            };
            out[(j, k)] = data[idx] * scale;
        }
    }
    out
}

fn transpose(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in i + 1..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

/// `(-Delta)^{alpha/2} + V` in the eigenbasis.
pub fn assemble_schrodinger(model: &SpectralModel, v: &PotentialField, alpha: f64) -> Result<GalerkinOperator> {
    let free = assemble_fractional(model, alpha)?;
    let pot = assemble_potential(model, v)?;
    let mut op = GalerkinOperator::new(free.matrix + pot.matrix, model, OperatorTag::Schrodinger);
    op.alpha = Some(alpha);
    Ok(op)
}

/// Finite-difference `-d^2/dx^2 + V` on the Dirichlet box of a line model,
/// stored as a tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct LineOperator {
    pub model_id: u64,
    pub spacing: f64,
    /// `2/h^2 + V_m`.
    pub diag: Vec<Complex64>,
    /// Constant off-diagonal `-1/h^2`.
    pub off: f64,
}

impl LineOperator {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.diag.iter().all(|d| d.im == 0.0)
    }

    /// The real symmetric tridiagonal form (real potentials only).
    pub fn to_sym_tridiagonal(&self) -> Result<SymTridiagonal> {
        if !self.is_real() {
            return Err(invalid("complex potential: the line operator is not symmetric"));
        }
        SymTridiagonal::new(self.diag.iter().map(|d| d.re).collect(), vec![self.off; self.len() - 1])
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = Complex64::new(self.off, 0.0);
                m[(i + 1, i)] = Complex64::new(self.off, 0.0);
            }
        }
        m
    }

    /// Dense wrapper tagged as a Schrödinger operator.
    pub fn to_galerkin(&self, model: &SpectralModel) -> GalerkinOperator {
        let mut op = GalerkinOperator::new(self.to_dense(), model, OperatorTag::Schrodinger);
        op.alpha = Some(2.0);
        op
    }
}

/// Second-order central differences with Dirichlet endpoints plus `diag(V)`.
pub fn assemble_line_schrodinger(model: &SpectralModel, v: &PotentialField) -> Result<LineOperator> {
    if model.kind() != ModelKind::Line {
        return Err(invalid(format!("line assembly needs a line model, got {}", model.kind())));
    }
    require_same_model(model, v)?;
    let h = model.spacing().expect("line model has a spacing");
    let base = 2.0 / (h * h);
    Ok(LineOperator {
        model_id: model.id(),
        spacing: h,
        diag: v.values().iter().map(|x| x + base).collect(),
        off: -1.0 / (h * h),
    })
}

fn check_resolvent_point(model: &SpectralModel, alpha: f64, z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("spectral parameter must be finite"));
    }
    let distance = free_distance(model, alpha, z)?;
    if distance <= 1e-12 * (1.0 + z.norm()) {
        return Err(Error::TooCloseToSpectrum { distance });
    }
    Ok(())
}

/// `K(z) = |V|^{1/2} (H_0 - z)^{-1} sgn(V) |V|^{1/2}` on the nodes where
/// `V != 0`, with `sgn(V) = V/|V|`.
///
/// In node form `-1` is an eigenvalue of `K(z)` exactly when `z` is an
/// eigenvalue of the assembled Schrödinger matrix.
pub fn assemble_birman_schwinger(
    model: &SpectralModel,
    v: &PotentialField,
    z: Complex64,
    alpha: f64,
) -> Result<GalerkinOperator> {
    require_same_model(model, v)?;
    check_resolvent_point(model, alpha, z)?;
    let values = v.values();
    let support: Vec<usize> = (0..values.len()).filter(|&m| values[m] != ZERO).collect();
    let root: Vec<f64> = support.iter().map(|&m| values[m].norm().sqrt()).collect();
    let signed_root: Vec<Complex64> = support
        .iter()
        .zip(&root)
        .map(|(&m, r)| values[m] / values[m].norm() * *r)
        .collect();
    let s = support.len();
    let mut k = CMatrix::zeros(s, s);
    if model.kind() == ModelKind::Line {
        let h = model.spacing().expect("line model has a spacing");
        let n = model.n_nodes();
        let off = vec![Complex64::new(-1.0 / (h * h), 0.0); n - 1];
        let diag = vec![Complex64::new(2.0 / (h * h), 0.0) - z; n];
        let mut rhs = vec![ZERO; n];
        for (b, &mb) in support.iter().enumerate() {
            rhs.fill(ZERO);
            rhs[mb] = Complex64::new(1.0, 0.0);
            let col = solve_tridiagonal(&off, &diag, &off, &rhs)?;
            for (a, &ma) in support.iter().enumerate() {
                k[(a, b)] = root[a] * col[ma] * signed_root[b];
            }
        }
    } else {
        let basis = require_eigenbasis(model)?;
        let free = free_spectrum(model, alpha)?;
        let weights = model.weights();
        // F = W^{1/2} U restricted to the support, then K = D_l F R F^H D_r
        let modes = basis.ncols();
        let left = CMatrix::from_fn(s, modes, |a, j| {
            basis[(support[a], j)] * weights[support[a]].sqrt() * root[a] / (free[j] - z)
        });
        let right = CMatrix::from_fn(s, modes, |b, j| basis[(support[b], j)] * weights[support[b]].sqrt());
        k = left * right.adjoint();
        for b in 0..s {
            let f = signed_root[b];
            for a in 0..s {
                k[(a, b)] *= f;
            }
        }
    }
    let mut op = GalerkinOperator::new(k, model, OperatorTag::BirmanSchwinger);
    op.alpha = Some(alpha);
    op.z = Some(z);
    op.support = Some(support);
    Ok(op)
}

/// `diag((lambda_j^alpha - z)^{-1})` in mode order.
pub fn assemble_resolvent(model: &SpectralModel, alpha: f64, z: Complex64) -> Result<GalerkinOperator> {
    require_eigenbasis(model)?;
    check_resolvent_point(model, alpha, z)?;
    let free = free_spectrum(model, alpha)?;
    let n = free.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, l) in free.iter().enumerate() {
        m[(i, i)] = (l - z).inv();
    }
    let mut op = GalerkinOperator::new(m, model, OperatorTag::Resolvent);
    op.alpha = Some(alpha);
    op.z = Some(z);
    Ok(op)
}

/// Applies `((-Delta)^{alpha/2} - z)^{-1}` to mode coefficients.
pub fn resolvent_apply(model: &SpectralModel, alpha: f64, z: Complex64, f: &[Complex64]) -> Result<Vec<Complex64>> {
    require_eigenbasis(model)?;
    check_resolvent_point(model, alpha, z)?;
    let free = free_spectrum(model, alpha)?;
    if f.len() != free.len() {
        return Err(invalid(format!("expected {} coefficients, got {}", free.len(), f.len())));
    }
    Ok(f.iter().zip(&free).map(|(c, l)| c / (l - z)).collect())
}

/// The resolvent as a map on node values, `U R U^H W`, for norm estimation
/// on the quadrature grid.
pub fn resolvent_node_matrix(model: &SpectralModel, alpha: f64, z: Complex64) -> Result<CMatrix> {
    let basis = require_eigenbasis(model)?;
    check_resolvent_point(model, alpha, z)?;
    let free = free_spectrum(model, alpha)?;
    let weights = model.weights();
    let scaled = CMatrix::from_fn(basis.nrows(), basis.ncols(), |r, j| basis[(r, j)] / (free[j] - z));
    let weighted = CMatrix::from_fn(basis.nrows(), basis.ncols(), |r, j| basis[(r, j)] * weights[r]);
    Ok(scaled * weighted.adjoint())
}

/// Matrix-free version of [`resolvent_node_matrix`] for torus models.
pub fn torus_resolvent_map(model: &SpectralModel, alpha: f64, z: Complex64) -> Result<FourierMultiplier> {
    check_resolvent_point(model, alpha, z)?;
    let shape = model.grid_shape();
    let (m, dim, cutoff) = match model.kind() {
        ModelKind::Torus1 => (shape[0], 1, (model.size() / 2) as i64),
        ModelKind::Torus2 => (shape[0], 2, model.size() as i64),
        other => return Err(invalid(format!("matrix-free resolvent needs a torus model, got {other}"))),
    };
    FourierMultiplier::from_fn(m, dim, |k| {
        if k.iter().any(|c| c.abs() > cutoff) {
            return ZERO;
        }
        let freq = (k.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt();
        (freq.powf(alpha) - z).inv()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig, eigvals};
    use crate::manifolds::{build_line, build_sphere2, build_torus1, build_torus2, build_torus2_with_grid};
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn fractional_diagonals() {
        let t1 = build_torus1(8).unwrap();
        let d2 = assemble_fractional(&t1, 2.0).unwrap();
        let diag: Vec<f64> = (0..5).map(|i| d2.matrix[(i, i)].re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        let d1 = assemble_fractional(&t1, 1.0).unwrap();
        assert_eq!(d1.matrix[(4, 4)].re, 2.0);
        let s = build_sphere2(4).unwrap();
        let ds = assemble_fractional(&s, 2.0).unwrap();
        // l = 3 modes occupy indices 9..16
        assert!((ds.matrix[(9, 9)].re - 12.0).abs() < 1e-12);
        let line = build_line(1.0, 32).unwrap();
        assert!(assemble_fractional(&line, 2.0).is_err());
    }

    #[test]
    fn constant_potential_is_scalar() {
        for model in [build_torus1(8).unwrap(), build_torus2(2).unwrap(), build_sphere2(3).unwrap()] {
            let v = PotentialField::constant(&model, c(0.5, -2.0)).unwrap();
            let p = assemble_potential(&model, &v).unwrap();
            let n = p.dim();
            let diff = &p.matrix - CMatrix::identity(n, n) * c(0.5, -2.0);
            assert!(max_abs(&diff) < 1e-10);
        }
    }

    #[test]
    fn fft_fill_matches_quadrature() {
        let model = build_torus2_with_grid(3, 9).unwrap();
        let v = PotentialField::from_fn(&model, |[x, y]| c((x - y).sin() + x.cos(), (2.0 * y).cos())).unwrap();
        let fast = assemble_potential(&model, &v).unwrap().matrix;
        let slow = quadrature_potential_matrix(model.basis().unwrap(), model.weights(), v.values());
        assert!(max_abs(&(fast - slow)) < 1e-12);
    }

    #[test]
    fn real_potential_is_hermitian() {
        let model = build_sphere2(4).unwrap();
        let v = PotentialField::from_fn(&model, |[t, p]| c(t.cos() * p.sin() + 1.0, 0.0)).unwrap();
        let m = assemble_potential(&model, &v).unwrap().matrix;
        assert!(max_abs(&(&m - m.adjoint())) < 1e-10);
    }

    #[test]
    fn exponential_potential_shifts_modes() {
        let model = build_torus1(8).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| Complex64::from_polar(1.0, x)).unwrap();
        let m = assemble_potential(&model, &v).unwrap().matrix;
        let labels: Vec<i64> = model
            .modes()
            .iter()
            .map(|md| match md.label {
                crate::manifolds::ModeLabel::Fourier1(k) => k,
                _ => unreachable!(),
            })
            .collect();
        for (j, kj) in labels.iter().enumerate() {
            for (k, kk) in labels.iter().enumerate() {
                let expected = if *kj == kk + 1 { 1.0 } else { 0.0 };
                assert!((m[(j, k)] - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn schrodinger_shift_identity() {
        let model = build_torus1(16).unwrap();
        let v = PotentialField::constant(&model, c(1.0, 2.0)).unwrap();
        let h = assemble_schrodinger(&model, &v, 2.0).unwrap();
        let vals = sorted(eigvals(&h.matrix).unwrap());
        let expected = sorted(model.freqs().iter().map(|l| c(l * l + 1.0, 2.0)).collect());
        for (a, b) in vals.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn line_box_spectrum() {
        let a = 1.0;
        let model = build_line(a, 400).unwrap();
        let v = PotentialField::zero(&model);
        let t = assemble_line_schrodinger(&model, &v).unwrap().to_sym_tridiagonal().unwrap();
        for n in 1..=3 {
            let exact = (n as f64 * std::f64::consts::PI / (2.0 * a)).powi(2);
            let got = t.kth_eigenvalue(n - 1, 1e-13).unwrap();
            assert!((got - exact).abs() < 1e-3 * exact);
        }
        let shifted = PotentialField::constant(&model, c(-1.0, 0.0)).unwrap();
        let ts = assemble_line_schrodinger(&model, &shifted).unwrap().to_sym_tridiagonal().unwrap();
        for k in 0..3 {
            let diff = ts.kth_eigenvalue(k, 1e-13).unwrap() - t.kth_eigenvalue(k, 1e-13).unwrap();
            assert!((diff + 1.0).abs() < 1e-9);
        }
        let torus = build_torus1(8).unwrap();
        assert!(assemble_line_schrodinger(&torus, &PotentialField::zero(&torus)).is_err());
    }

    #[test]
    fn line_parity_alternates() {
        let model = build_line(3.0, 63).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| c(x * x, 0.0)).unwrap();
        let t = assemble_line_schrodinger(&model, &v).unwrap().to_sym_tridiagonal().unwrap();
        for k in 0..4 {
            let vec = t.eigenvector(t.kth_eigenvalue(k, 1e-14).unwrap()).unwrap();
            let n = vec.len();
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            for i in 0..n {
                assert!((vec[i] - parity * vec[n - 1 - i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn birman_schwinger_toy() {
        let basis = DMatrix::identity(2, 2);
        let model = SpectralModel::from_parts(
            ModelKind::Torus1,
            1,
            vec![0.0, 1.0],
            basis,
            vec![[0.0, 0.0], [1.0, 0.0]],
            vec![1.0, 1.0],
        )
        .unwrap();
        let vv = c(0.3, 0.4);
        let v = PotentialField::new(&model, vec![vv, ZERO]).unwrap();
        let z = c(-0.7, 0.2);
        let k = assemble_birman_schwinger(&model, &v, z, 2.0).unwrap();
        assert_eq!(k.dim(), 1);
        assert!((k.matrix[(0, 0)] + vv / z).norm() < 1e-14);
        let at_v = assemble_birman_schwinger(&model, &v, vv, 2.0).unwrap();
        assert!((at_v.matrix[(0, 0)] + 1.0).norm() < 1e-14);
        assert!(matches!(
            assemble_birman_schwinger(&model, &v, c(1.0, 0.0), 2.0),
            Err(Error::TooCloseToSpectrum { .. })
        ));
    }

    #[test]
    fn birman_schwinger_zero_and_real_negative() {
        let model = build_torus1(8).unwrap();
        let zero = PotentialField::zero(&model);
        assert_eq!(assemble_birman_schwinger(&model, &zero, c(-1.0, 0.0), 2.0).unwrap().dim(), 0);
        let v = PotentialField::from_fn(&model, |[x, _]| c(-1.0 - x.cos().powi(2), 0.0)).unwrap();
        let k = assemble_birman_schwinger(&model, &v, c(-5.0, 0.0), 2.0).unwrap();
        for e in eigvals(&k.matrix).unwrap() {
            assert!(e.im.abs() < 1e-10);
        }
    }

    #[test]
    fn birman_schwinger_detects_eigenvalues() {
        let model = build_torus1(8).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| c(1.0 + x.sin(), 0.5 + x.cos() * 0.3)).unwrap();
        let h = assemble_schrodinger(&model, &v, 2.0).unwrap();
        for z in eigvals(&h.matrix).unwrap() {
            let k = assemble_birman_schwinger(&model, &v, z, 2.0).unwrap();
            let closest = eigvals(&k.matrix)
                .unwrap()
                .iter()
                .map(|e| (e + 1.0).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(closest < 1e-8, "z = {z}: {closest}");
        }
    }

    #[test]
    fn line_birman_schwinger_detects_bound_state() {
        let model = build_line(5.0, 199).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| c(if x.abs() < 1.0 { -2.0 } else { 0.0 }, 0.0)).unwrap();
        let t = assemble_line_schrodinger(&model, &v).unwrap().to_sym_tridiagonal().unwrap();
        let e0 = t.kth_eigenvalue(0, 1e-14).unwrap();
        assert!(e0 < 0.0);
        let k = assemble_birman_schwinger(&model, &v, c(e0, 0.0), 2.0).unwrap();
        let dec = eig(&k.matrix, false).unwrap();
        let closest = dec.values.iter().map(|e| (e + 1.0).norm()).fold(f64::INFINITY, f64::min);
        assert!(closest < 1e-8);
    }

    #[test]
    fn resolvent_examples() {
        let model = build_torus1(8).unwrap();
        let mut f = vec![ZERO; model.n_modes()];
        f[0] = c(1.0, 0.0);
        let g = resolvent_apply(&model, 2.0, c(-1.0, 0.0), &f).unwrap();
        assert!((g[0] - f[0]).norm() < 1e-15);
        let r = assemble_resolvent(&model, 2.0, c(0.5, 0.5)).unwrap();
        let top = crate::linalg::singular_values(&r.matrix)[0];
        let d = free_distance(&model, 2.0, c(0.5, 0.5)).unwrap();
        assert!((top - 1.0 / d).abs() < 1e-12);
        assert!(resolvent_apply(&model, 2.0, c(1.0, 0.0), &f).is_err());
    }

    #[test]
    fn torus_map_matches_node_matrix() {
        use crate::linalg::LinearMap;
        let model = build_torus2(3).unwrap();
        let z = c(-2.0, 0.5);
        let dense = resolvent_node_matrix(&model, 2.0, z).unwrap();
        let map = torus_resolvent_map(&model, 2.0, z).unwrap();
        let n = model.n_nodes();
        let x: Vec<Complex64> = (0..n).map(|i| c((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let mut y1 = vec![ZERO; n];
        let mut y2 = vec![ZERO; n];
        map.apply(&x, &mut y1);
        LinearMap::apply(&dense, &x, &mut y2);
        for (a, b) in y1.iter().zip(&y2) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
