//! Tridiagonal kernels: Sturm-sequence bisection for real symmetric
//! matrices and a complex Thomas solver.

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Real symmetric tridiagonal matrix given by its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(invalid("tridiagonal needs n diagonal and n-1 off-diagonal entries"));
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(invalid("tridiagonal entries must be finite"));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence / LDL^T inertia).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut d = self.diag[0] - x;
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let b = self.off[i - 1];
            d = self.diag[i] - x - b * b / d;
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to absolute
    /// width `tol` (or to floating resolution).
    pub fn kth_eigenvalue(&self, k: usize, tol: f64) -> Result<f64> {
        if k >= self.len() {
            return Err(invalid(format!("eigenvalue index {k} out of range for size {}", self.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= tol {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// All eigenvalues strictly below `x`, ascending.
    pub fn eigenvalues_below(&self, x: f64, tol: f64) -> Result<Vec<f64>> {
        let count = self.count_below(x);
        (0..count).map(|k| self.kth_eigenvalue(k, tol)).collect()
    }

    /// Unit eigenvector for an accurately known eigenvalue, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let scale = 1.0 + lambda.abs();
        let shift = lambda + 1e-10 * scale;
        let sub: Vec<Complex64> = self.off.iter().map(|&b| Complex64::new(b, 0.0)).collect();
        let diag: Vec<Complex64> = self.diag.iter().map(|&a| Complex64::new(a - shift, 0.0)).collect();
        let mut x = vec![Complex64::new(1.0, 0.0); n];
        for _ in 0..3 {
            x = solve_tridiagonal(&sub, &diag, &sub, &x)?;
            let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for v in x.iter_mut() {
                *v /= norm;
            }
        }
        Ok(x.iter().map(|v| v.re).collect())
    }
}

/// Solves `T x = rhs` with `T` tridiagonal (`sub`/`sup` of length n-1) by
/// Gaussian elimination without pivoting.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n || rhs.len() != n {
        return Err(invalid("tridiagonal system dimensions disagree"));
    }
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut pivot = diag[0];
    if pivot.norm() == 0.0 {
        return Err(invalid("zero pivot in tridiagonal solve"));
    }
    if n > 1 {
        c[0] = sup[0] / pivot;
    }
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i - 1] * c[i - 1];
        if pivot.norm() == 0.0 {
            return Err(invalid("zero pivot in tridiagonal solve"));
        }
        if i + 1 < n {
            c[i] = sup[i] / pivot;
        }
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in [0, 7, 49] {
            let exact = 2.0 - 2.0 * (PI * (k as f64 + 1.0) / (n as f64 + 1.0)).cos();
            assert!((t.kth_eigenvalue(k, 1e-14).unwrap() - exact).abs() < 1e-12);
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(5.0), n);
        assert!(t.kth_eigenvalue(n, 1e-12).is_err());
    }

    #[test]
    fn eigenvalues_below_and_vector() {
        let t = SymTridiagonal::new(vec![-3.0, 1.0, 2.0], vec![0.5, 0.5]).unwrap();
        let below = t.eigenvalues_below(0.0, 1e-14).unwrap();
        assert_eq!(below.len(), 1);
        let v = t.eigenvector(below[0]).unwrap();
        let av0 = -3.0 * v[0] + 0.5 * v[1];
        assert!((av0 - below[0] * v[0]).abs() < 1e-10);
    }

    #[test]
    fn thomas_matches_dense() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let sub = vec![c(1.0, 0.5), c(-0.3, 0.0)];
        let diag = vec![c(4.0, 1.0), c(3.0, -1.0), c(5.0, 0.0)];
        let sup = vec![c(0.2, 0.0), c(1.0, 1.0)];
        let rhs = vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, -1.0)];
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs).unwrap();
        let r0 = diag[0] * x[0] + sup[0] * x[1] - rhs[0];
        let r1 = sub[0] * x[0] + diag[1] * x[1] + sup[1] * x[2] - rhs[1];
        let r2 = sub[1] * x[1] + diag[2] * x[2] - rhs[2];
        assert!(r0.norm() + r1.norm() + r2.norm() < 1e-14);
    }
}
