use super::CMatrix;
use crate::error::{invalid, Result};

/// Schatten `p`-norm of a matrix together with its singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SchattenReport {
    pub p: f64,
    pub value: f64,
    /// Descending.
    pub singulars: Vec<f64>,
}

/// Singular values in descending order.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// `(sum s_n^p)^(1/p)`, or `max s_n` for `p = inf`.
pub fn schatten_norm(a: &CMatrix, p: f64) -> Result<SchattenReport> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid(format!("Schatten norm needs p >= 1, got {p}")));
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(invalid("matrix has non-finite entries"));
    }
    let singulars = singular_values(a);
    let value = schatten_from_singulars(&singulars, p);
    Ok(SchattenReport { p, value, singulars })
}

pub(crate) fn schatten_from_singulars(s: &[f64], p: f64) -> f64 {
    let top = s.first().copied().unwrap_or(0.0);
    if p.is_infinite() || top == 0.0 {
        return top;
    }
    // scale by the largest value to avoid overflow for large p
    let sum: f64 = s.iter().map(|x| (x / top).powf(p)).sum();
    top * sum.powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn diagonal_values() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 4.0),
        ]));
        assert!((schatten_norm(&a, 1.0).unwrap().value - 7.0).abs() < 1e-12);
        assert!((schatten_norm(&a, 2.0).unwrap().value - 5.0).abs() < 1e-12);
        assert!((schatten_norm(&a, f64::INFINITY).unwrap().value - 4.0).abs() < 1e-12);
        assert!(schatten_norm(&a, 0.5).is_err());
    }

    #[test]
    fn unitary_matrix() {
        let n = 6;
        let f = CMatrix::from_fn(n, n, |j, k| {
            Complex64::from_polar(1.0 / (n as f64).sqrt(), 2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64)
        });
        for p in [1.0, 2.0, 3.5] {
            let v = schatten_norm(&f, p).unwrap().value;
            assert!((v - (n as f64).powf(1.0 / p)).abs() < 1e-12);
        }
    }
}
