use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::SpectralModel;
use crate::error::{invalid, Result};

/// Complex potential sampled at the quadrature nodes of a model.
#[derive(Debug)]
pub struct PotentialField {
    values: Vec<Complex64>,
    model_id: u64,
    weights: Arc<[f64]>,
    norms: Mutex<HashMap<u64, f64>>,
}

impl Clone for PotentialField {
    fn clone(&self) -> Self {
        Self {
            values: self.values.clone(),
            model_id: self.model_id,
            weights: Arc::clone(&self.weights),
            norms: Mutex::new(self.norms.lock().map(|m| m.clone()).unwrap_or_default()),
        }
    }
}

impl PartialEq for PotentialField {
    fn eq(&self, other: &Self) -> bool {
        self.model_id == other.model_id && self.values == other.values
    }
}

impl PotentialField {
    pub fn new(model: &SpectralModel, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != model.n_nodes() {
            return Err(invalid(format!(
                "potential has {} values but the model has {} nodes",
                values.len(),
                model.n_nodes()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid("potential values must be finite"));
        }
        Ok(Self {
            values,
            model_id: model.id(),
            weights: Arc::from(model.weights()),
            norms: Mutex::new(HashMap::new()),
        })
    }

    /// Samples `f(node)` at every quadrature node.
    pub fn from_fn(model: &SpectralModel, f: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        Self::new(model, model.nodes().iter().map(|&n| f(n)).collect())
    }

    pub fn constant(model: &SpectralModel, c: Complex64) -> Result<Self> {
        Self::new(model, vec![c; model.n_nodes()])
    }

    pub fn zero(model: &SpectralModel) -> Self {
        Self::constant(model, Complex64::new(0.0, 0.0)).expect("zero potential is always valid")
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn model_id(&self) -> u64 {
        self.model_id
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn belongs_to(&self, model: &SpectralModel) -> bool {
        self.model_id == model.id()
    }

    /// A potential on the same model with new values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(invalid("replacement values must keep the node count"));
        }
        Ok(Self {
            values,
            model_id: self.model_id,
            weights: Arc::clone(&self.weights),
            norms: Mutex::new(HashMap::new()),
        })
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.with_values(self.values.iter().map(|v| v * s).collect())
            .expect("same length")
    }

    /// Discrete `L^q` norm `(sum_m w_m |V_m|^q)^(1/q)`; `q = inf` gives `max |V_m|`.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if q.is_nan() || q < 1.0 {
            return Err(invalid(format!("L^q norm needs q >= 1, got {q}")));
        }
        if let Some(&cached) = self.norms.lock().ok().and_then(|m| m.get(&q.to_bits()).copied()).as_ref() {
            return Ok(cached);
        }
        let value = if q.is_infinite() {
            self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
        } else {
            let sum: f64 = self
                .values
                .iter()
                .zip(self.weights.iter())
                .map(|(v, w)| w * v.norm().powf(q))
                .sum();
            sum.powf(1.0 / q)
        };
        if let Ok(mut map) = self.norms.lock() {
            map.insert(q.to_bits(), value);
        }
        Ok(value)
    }

    /// Rescales so that `||V||_q` equals `target`.
    pub fn normalized_to(&self, q: f64, target: f64) -> Result<Self> {
        let current = self.lq_norm(q)?;
        if current == 0.0 {
            return Err(invalid("cannot rescale the zero potential"));
        }
        Ok(self.scaled(Complex64::new(target / current, 0.0)))
    }

    /// True when every imaginary part is below `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }

    /// `V_+ = max(Re V, 0)` pointwise.
    pub fn positive_part(&self) -> Result<Self> {
        self.require_real()?;
        self.with_values(self.values.iter().map(|v| Complex64::new(v.re.max(0.0), 0.0)).collect())
    }

    /// `V_- = max(-Re V, 0)` pointwise, so that `V = V_+ - V_-`.
    pub fn negative_part(&self) -> Result<Self> {
        self.require_real()?;
        self.with_values(self.values.iter().map(|v| Complex64::new((-v.re).max(0.0), 0.0)).collect())
    }

    fn require_real(&self) -> Result<()> {
        if !self.is_real(1e-14 * (1.0 + self.lq_norm(f64::INFINITY)?)) {
            return Err(invalid("positive/negative parts are defined for real potentials only"));
        }
        Ok(())
    }

    /// `sum_m w_m V_m`.
    pub fn integral(&self) -> Complex64 {
        self.values
            .iter()
            .zip(self.weights.iter())
            .map(|(v, w)| v * w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{build_line, build_torus1, build_torus1_with_nodes, build_torus2_with_grid};
    use std::f64::consts::PI;

    #[test]
    fn constant_norms() {
        let model = build_torus1(8).unwrap();
        let c = Complex64::new(3.0, -4.0);
        let v = PotentialField::constant(&model, c).unwrap();
        for q in [1.0, 1.5, 2.0, 7.0] {
            let expected = 5.0 * (2.0 * PI).powf(1.0 / q);
            assert!((v.lq_norm(q).unwrap() - expected).abs() < 1e-12 * expected);
        }
        assert!((v.lq_norm(f64::INFINITY).unwrap() - 5.0).abs() < 1e-15);
        assert!(v.lq_norm(0.5).is_err());
    }

    #[test]
    fn holder_sanity() {
        let model = build_torus1(10).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| Complex64::new(x.sin() + 0.3, x.cos() * x.cos())).unwrap();
        let n1 = v.lq_norm(1.0).unwrap();
        let n2 = v.lq_norm(2.0).unwrap();
        assert!(n1 <= n2 * model.volume().sqrt() + 1e-12);
    }

    #[test]
    fn norm_stable_under_refinement() {
        let smooth = |[x, y]: [f64; 2]| Complex64::new((x.sin() * y.cos()).exp(), (x + 2.0 * y).cos());
        let coarse = build_torus2_with_grid(4, 24).unwrap();
        let fine = build_torus2_with_grid(4, 48).unwrap();
        for q in [1.5, 2.0, 3.0] {
            let a = PotentialField::from_fn(&coarse, smooth).unwrap().lq_norm(q).unwrap();
            let b = PotentialField::from_fn(&fine, smooth).unwrap().lq_norm(q).unwrap();
            assert!((a - b).abs() < 1e-6 * b, "q={q}: {a} vs {b}");
        }
        let g = |[x, _]: [f64; 2]| Complex64::new(1.0 / (2.0 + x.cos()), 0.0);
        let a = PotentialField::from_fn(&build_torus1_with_nodes(8, 40).unwrap(), g).unwrap();
        let b = PotentialField::from_fn(&build_torus1_with_nodes(8, 80).unwrap(), g).unwrap();
        assert!((a.lq_norm(3.0).unwrap() / b.lq_norm(3.0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn positive_and_negative_parts() {
        let model = build_line(1.0, 32).unwrap();
        let v = PotentialField::from_fn(&model, |[x, _]| Complex64::new(x, 0.0)).unwrap();
        let plus = v.positive_part().unwrap();
        let minus = v.negative_part().unwrap();
        for ((a, b), c) in plus.values().iter().zip(minus.values()).zip(v.values()) {
            assert!(a.re >= 0.0 && b.re >= 0.0);
            assert!((a.re - b.re - c.re).abs() < 1e-15);
        }
        let complex = v.scaled(Complex64::new(0.0, 1.0));
        assert!(complex.negative_part().is_err());
    }
}
