//! Lower-bound estimation of weighted `L^p -> L^p'` operator norms by the
//! nonlinear power method (Boyd's iteration), plus matrix-free operators.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::CMatrix;
use crate::error::{invalid, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A square linear operator on grid vectors, applied matrix-free.
pub trait LinearMap: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
    fn apply_adjoint(&self, y: &[Complex64], x: &mut [Complex64]);

    /// Dense column `A e_j`, used by the exact `p = 1` formula.
    fn column(&self, j: usize) -> Vec<Complex64> {
        let mut e = vec![ZERO; self.dim()];
        e[j] = Complex64::new(1.0, 0.0);
        let mut out = vec![ZERO; self.dim()];
        self.apply(&e, &mut out);
        out
    }
}

impl LinearMap for CMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let n = self.nrows();
        y.fill(ZERO);
        for (j, xj) in x.iter().enumerate() {
            if *xj == ZERO {
                continue;
            }
            let col = &self.as_slice()[j * n..(j + 1) * n];
            for (yi, a) in y.iter_mut().zip(col) {
                *yi += a * xj;
            }
        }
    }

    fn apply_adjoint(&self, y: &[Complex64], x: &mut [Complex64]) {
        let n = self.nrows();
        for (j, xj) in x.iter_mut().enumerate() {
            let col = &self.as_slice()[j * n..(j + 1) * n];
            *xj = col.iter().zip(y).map(|(a, yi)| a.conj() * yi).sum();
        }
    }

    fn column(&self, j: usize) -> Vec<Complex64> {
        self.column(j).iter().copied().collect()
    }
}

/// Periodic Fourier multiplier on a uniform `m^dim` grid (`dim` 1 or 2):
/// `f -> ifft(symbol * fft(f)) / m^dim`, row-major node order.
pub struct FourierMultiplier {
    m: usize,
    dim: usize,
    symbol: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FourierMultiplier {
    /// `symbol` is indexed like the FFT output: integer frequency `k`
    /// sits at `k mod m` along each axis.
    pub fn new(m: usize, dim: usize, symbol: Vec<Complex64>) -> Result<Self> {
        if !(dim == 1 || dim == 2) || m < 2 {
            return Err(invalid("Fourier multiplier supports dimension 1 or 2 with m >= 2"));
        }
        if symbol.len() != m.pow(dim as u32) {
            return Err(invalid("symbol length must be m^dim"));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            m,
            dim,
            symbol,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        })
    }

    /// Builds the symbol from a function of the integer frequency vector.
    pub fn from_fn(m: usize, dim: usize, f: impl Fn(&[i64]) -> Complex64) -> Result<Self> {
        let freq = |j: usize| -> i64 {
            if j <= m / 2 {
                j as i64
            } else {
                j as i64 - m as i64
            }
        };
        let symbol = if dim == 1 {
            (0..m).map(|j| f(&[freq(j)])).collect()
        } else {
            (0..m * m).map(|idx| f(&[freq(idx / m), freq(idx % m)])).collect()
        };
        Self::new(m, dim, symbol)
    }

    pub fn symbol(&self) -> &[Complex64] {
        &self.symbol
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        fft.process(data);
        if self.dim == 2 {
            transpose_square(data, self.m);
            fft.process(data);
            transpose_square(data, self.m);
        }
    }

    fn multiply(&self, x: &[Complex64], y: &mut [Complex64], conjugate: bool) {
        y.copy_from_slice(x);
        self.transform(y, &self.forward);
        let scale = 1.0 / self.symbol.len() as f64;
        for (v, s) in y.iter_mut().zip(&self.symbol) {
            let s = if conjugate { s.conj() } else { *s };
            *v *= s * scale;
        }
        self.transform(y, &self.inverse);
    }
}

fn transpose_square(data: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in i + 1..m {
            data.swap(i * m + j, j * m + i);
        }
    }
}

impl LinearMap for FourierMultiplier {
    fn dim(&self) -> usize {
        self.symbol.len()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.multiply(x, y, false);
    }

    fn apply_adjoint(&self, y: &[Complex64], x: &mut [Complex64]) {
        self.multiply(y, x, true);
    }
}

/// `W^{1/p'} A W^{-1/p}`: turns weighted norms into plain `l^p` norms.
struct Weighted<'a, M: LinearMap + ?Sized> {
    inner: &'a M,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl<M: LinearMap + ?Sized> LinearMap for Weighted<'_, M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let scaled: Vec<Complex64> = x.iter().zip(&self.right).map(|(v, r)| v * r).collect();
        self.inner.apply(&scaled, y);
        for (v, l) in y.iter_mut().zip(&self.left) {
            *v *= l;
        }
    }

    fn apply_adjoint(&self, y: &[Complex64], x: &mut [Complex64]) {
        let scaled: Vec<Complex64> = y.iter().zip(&self.left).map(|(v, l)| v * l).collect();
        self.inner.apply_adjoint(&scaled, x);
        for (v, r) in x.iter_mut().zip(&self.right) {
            *v *= r;
        }
    }

    fn column(&self, j: usize) -> Vec<Complex64> {
        let mut c = self.inner.column(j);
        for (v, l) in c.iter_mut().zip(&self.left) {
            *v *= l * self.right[j];
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpNormOptions {
    pub random_starts: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub seed: u64,
    /// Dimension up to which the closed forms for `p = 1` / `p' = inf` are used.
    pub exact_limit: usize,
}

impl Default for OpNormOptions {
    fn default() -> Self {
        Self {
            random_starts: 8,
            max_iter: 500,
            rel_tol: 1e-8,
            seed: 0x5eed,
            exact_limit: 4096,
        }
    }
}

/// Achieved ratio `||A x||_{p',w} / ||x||_{p,w}` (a certified lower bound).
#[derive(Debug, Clone, PartialEq)]
pub struct OpNormEstimate {
    pub value: f64,
    /// Ratios along the iterations of the winning start.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub starts: usize,
    /// True when every start produced a nondecreasing ratio sequence.
    pub monotone: bool,
    /// True when the value came from a closed form rather than iteration.
    pub exact: bool,
}

/// Weighted `l^r` norm of a plain vector (`r = inf` allowed).
pub fn lp_norm(x: &[Complex64], r: f64) -> f64 {
    let top = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if r.is_infinite() || top == 0.0 {
        return top;
    }
    let sum: f64 = x.iter().map(|v| (v.norm() / top).powf(r)).sum();
    top * sum.powf(1.0 / r)
}

/// Unit-norm dual vector of `y` for the `l^r` norm: `<J(y), y> = ||y||_r`
/// with `||J(y)||_{r*} = 1`.
fn duality_map(y: &[Complex64], r: f64) -> Vec<Complex64> {
    let top = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut out = vec![ZERO; y.len()];
    if top == 0.0 {
        return out;
    }
    if r.is_infinite() {
        let idx = y.iter().position(|v| v.norm() == top).unwrap_or(0);
        out[idx] = y[idx] / top;
        return out;
    }
    if r == 1.0 {
        for (o, v) in out.iter_mut().zip(y) {
            if v.norm() > 0.0 {
                *o = v / v.norm();
            }
        }
        return out;
    }
    for (o, v) in out.iter_mut().zip(y) {
        let a = v.norm() / top;
        if a > 0.0 {
            *o = (v / v.norm()) * a.powf(r - 1.0);
        }
    }
    let scale = lp_norm(&out, r / (r - 1.0));
    for o in out.iter_mut() {
        *o /= scale;
    }
    out
}

fn conjugate_exponent(r: f64) -> f64 {
    if r == 1.0 {
        f64::INFINITY
    } else if r.is_infinite() {
        1.0
    } else {
        r / (r - 1.0)
    }
}

fn check_exponents(p: f64, pprime: f64) -> Result<()> {
    if !(p >= 1.0 && p <= 2.0 && pprime >= 2.0 && !pprime.is_nan()) {
        return Err(invalid(format!(
            "operator norm estimation needs 1 <= p <= 2 <= p' <= inf, got p = {p}, p' = {pprime}"
        )));
    }
    Ok(())
}

/// Estimates `||A||_{L^p_w -> L^p'_w}` for a dense matrix with default options.
pub fn opnorm_p_pprime(a: &CMatrix, p: f64, pprime: f64, weights: &[f64]) -> Result<OpNormEstimate> {
    if a.nrows() != a.ncols() {
        return Err(invalid("operator norm needs a square matrix"));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(invalid("matrix has non-finite entries"));
    }
    opnorm_map(a, p, pprime, weights, &OpNormOptions::default())
}

/// Estimates `||A||_{L^p_w -> L^p'_w}` for any [`LinearMap`].
pub fn opnorm_map<M: LinearMap + ?Sized>(
    a: &M,
    p: f64,
    pprime: f64,
    weights: &[f64],
    opts: &OpNormOptions,
) -> Result<OpNormEstimate> {
    check_exponents(p, pprime)?;
    let n = a.dim();
    if weights.len() != n {
        return Err(invalid(format!("expected {n} weights, got {}", weights.len())));
    }
    if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(invalid("weights must be positive and finite"));
    }
    let left: Vec<f64> = weights
        .iter()
        .map(|w| if pprime.is_infinite() { 1.0 } else { w.powf(1.0 / pprime) })
        .collect();
    let right: Vec<f64> = weights.iter().map(|w| w.powf(-1.0 / p)).collect();
    let map = Weighted { inner: a, left, right };

    if (p == 1.0 || pprime.is_infinite()) && n <= opts.exact_limit {
        return Ok(exact_extreme(&map, p, pprime));
    }

    let mut starts: Vec<Vec<Complex64>> = Vec::with_capacity(opts.random_starts + 2);
    starts.push(vec![Complex64::new(1.0, 0.0); n]);
    let mut delta = vec![ZERO; n];
    delta[0] = Complex64::new(1.0, 0.0);
    starts.push(delta);
    for i in 0..opts.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        starts.push(
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex64::new(re, im)
                })
                .collect(),
        );
    }
    let runs: Vec<(Vec<f64>, bool)> = starts
        .into_par_iter()
        .map(|x0| power_run(&map, x0, p, pprime, opts))
        .collect();
    let monotone = runs.iter().all(|(_, m)| *m);
    let iterations = runs.iter().map(|(t, _)| t.len()).sum();
    let (trace, _) = runs
        .into_iter()
        .max_by(|a, b| {
            let va = a.0.iter().copied().fold(0.0, f64::max);
            let vb = b.0.iter().copied().fold(0.0, f64::max);
            va.total_cmp(&vb)
        })
        .expect("at least one start");
    let value = trace.iter().copied().fold(0.0, f64::max);
    Ok(OpNormEstimate {
        value,
        trace,
        iterations,
        starts: opts.random_starts + 2,
        monotone,
        exact: false,
    })
}

fn power_run<M: LinearMap + ?Sized>(
    a: &M,
    x0: Vec<Complex64>,
    p: f64,
    pprime: f64,
    opts: &OpNormOptions,
) -> (Vec<f64>, bool) {
    let n = a.dim();
    let pstar = conjugate_exponent(p);
    let norm0 = lp_norm(&x0, p);
    if norm0 == 0.0 {
        return (vec![0.0], true);
    }
    let mut x: Vec<Complex64> = x0.iter().map(|v| v / norm0).collect();
    let mut y = vec![ZERO; n];
    let mut z = vec![ZERO; n];
    let mut trace = Vec::new();
    let mut monotone = true;
    for _ in 0..opts.max_iter {
        a.apply(&x, &mut y);
        let ratio = lp_norm(&y, pprime);
        if let Some(&last) = trace.last() {
            if ratio < last * (1.0 - 1e-10) {
                monotone = false;
            }
        }
        trace.push(ratio);
        if ratio == 0.0 {
            break;
        }
        a.apply_adjoint(&duality_map(&y, pprime), &mut z);
        let next = duality_map(&z, pstar);
        let len = trace.len();
        if len >= 2 && (trace[len - 1] - trace[len - 2]).abs() <= opts.rel_tol * trace[len - 1] {
            break;
        }
        x = next;
    }
    (trace, monotone)
}

// ||A||_{1 -> r} = max_j ||A e_j||_r and ||A||_{r -> inf} = max_i ||A^H e_i||_{r*}.
fn exact_extreme<M: LinearMap + ?Sized>(a: &M, p: f64, pprime: f64) -> OpNormEstimate {
    let n = a.dim();
    let value = if p == 1.0 {
        (0..n).map(|j| lp_norm(&a.column(j), pprime)).fold(0.0, f64::max)
    } else {
        let pstar = conjugate_exponent(p);
        let mut e = vec![ZERO; n];
        let mut row = vec![ZERO; n];
        let mut best: f64 = 0.0;
        for i in 0..n {
            e.fill(ZERO);
            e[i] = Complex64::new(1.0, 0.0);
            a.apply_adjoint(&e, &mut row);
            best = best.max(lp_norm(&row, pstar));
        }
        best
    };
    OpNormEstimate {
        value,
        trace: vec![value],
        iterations: n,
        starts: 0,
        monotone: true,
        exact: true,
    }
}
