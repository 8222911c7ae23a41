//! Eigenvalue bounds and functionals as evaluable reports, plus empirical
//! constant fitting for bounds whose constants are not explicit.

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{opnorm_map, FourierMultiplier, LinearMap, OpNormEstimate, OpNormOptions};
use crate::manifolds::{ModelKind, PotentialField, SpectralModel};
use crate::operators::{free_distance, free_spectrum, resolvent_node_matrix, torus_resolvent_map};
use crate::regions::{xi_contains, EnclosureRegion, Exponents, MembershipReport, XiMembership};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No constant supplied; only the ratio is meaningful.
    Unchecked,
    Inapplicable(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Unchecked => f.write_str("unchecked"),
            Verdict::Inapplicable(why) => write!(f, "inapplicable ({why})"),
        }
    }
}

/// One evaluated bound: `lhs <= C * rhs_factor`, with `ratio = lhs / rhs_factor`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs_factor: f64,
    pub ratio: f64,
    pub params: Vec<(String, f64)>,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(name: &str, lhs: f64, rhs_factor: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs_factor,
            ratio: safe_ratio(lhs, rhs_factor),
            params: Vec::new(),
            verdict: Verdict::Unchecked,
        }
    }

    fn inapplicable(name: &str, why: &str) -> Self {
        Self {
            name: name.to_string(),
            lhs: f64::NAN,
            rhs_factor: f64::NAN,
            ratio: f64::NAN,
            params: Vec::new(),
            verdict: Verdict::Inapplicable(why.to_string()),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.push((key.to_string(), value));
        self
    }

    /// Verdict under the constant `c`: pass when `ratio <= c`.
    pub fn judged(mut self, c: f64) -> Self {
        if !matches!(self.verdict, Verdict::Inapplicable(_)) {
            self.verdict = if self.ratio <= c { Verdict::Pass } else { Verdict::Fail };
        }
        self
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self.verdict, Verdict::Inapplicable(_))
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Empirical constant: the largest per-sample minimal constant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitResult {
    pub c_emp: f64,
    pub per_sample: Vec<f64>,
    /// `(model size, C_emp)` pairs.
    pub refinement: Vec<(usize, f64)>,
    /// `(||V||, C_emp)` pairs.
    pub scale: Vec<(f64, f64)>,
}

impl FitResult {
    pub fn from_samples(per_sample: Vec<f64>) -> Self {
        let c_emp = per_sample.iter().copied().fold(0.0, f64::max);
        Self {
            c_emp,
            per_sample,
            ..Self::default()
        }
    }

    /// `max/min - 1` over a trace of constants.
    pub fn variation(values: &[f64]) -> f64 {
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if min > 0.0 {
            max / min - 1.0
        } else if max == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn require_real(v: &PotentialField, name: &str) -> Result<()> {
    let scale = 1.0 + v.lq_norm(f64::INFINITY)?;
    if !v.is_real(1e-12 * scale) {
        return Err(invalid(format!("{name} needs a real potential")));
    }
    Ok(())
}

/// `|lambda_1(V)| <= C ||V_-||_p^{2p/(2p-1)}` on the line.
pub fn keller_check(lowest_eig: f64, v: &PotentialField, p: f64) -> Result<BoundReport> {
    if !(p >= 1.0) {
        return Err(invalid(format!("Keller bound needs p >= 1, got {p}")));
    }
    require_real(v, "Keller bound")?;
    if !(lowest_eig < 0.0) {
        return Ok(BoundReport::inapplicable("keller", "no negative eigenvalue").with_param("p", p));
    }
    let minus = v.negative_part()?.lq_norm(p)?;
    let rhs = minus.powf(2.0 * p / (2.0 * p - 1.0));
    Ok(BoundReport::new("keller", lowest_eig.abs(), rhs).with_param("p", p))
}

/// Eigenvalues off `(0, inf)`: nonreal, or real and nonpositive.
pub fn off_positive_axis(spectrum: &[Complex64]) -> Vec<Complex64> {
    spectrum.iter().copied().filter(|z| z.im != 0.0 || z.re <= 0.0).collect()
}

/// `sup |z|^{1/2} <= (1/2) int |V|` over eigenvalues off `(0, inf)`,
/// judged with the explicit constant 1.
pub fn aad_check(spectrum: &[Complex64], v: &PotentialField) -> Result<BoundReport> {
    let selected = off_positive_axis(spectrum);
    if selected.is_empty() {
        return Ok(BoundReport::inapplicable("aad", "no eigenvalue off the positive axis"));
    }
    let lhs = selected.iter().map(|z| z.norm().sqrt()).fold(0.0, f64::max);
    let rhs = 0.5 * v.lq_norm(1.0)?;
    Ok(BoundReport::new("aad", lhs, rhs)
        .with_param("selected", selected.len() as f64)
        .judged(1.0))
}

/// Checks the admissible `(gamma, d)` branches of the Lieb–Thirring inequality.
pub fn lieb_thirring_admissible(gamma: f64, d: usize) -> Result<()> {
    let violated = match d {
        0 => Some("d >= 1"),
        1 if !(gamma >= 0.5) => Some("gamma >= 1/2 when d = 1"),
        2 if !(gamma > 0.0) => Some("gamma > 0 when d = 2"),
        _ if d >= 3 && !(gamma >= 0.0) => Some("gamma >= 0 when d >= 3"),
        _ => None,
    };
    match violated {
        Some(v) => Err(Error::Inadmissible {
            d,
            q: gamma,
            alpha: 2.0,
            violated: v.to_string(),
        }),
        None => Ok(()),
    }
}

/// `sum |lambda_j|^gamma` against `int V_-^{gamma + d/2}`.
pub fn lieb_thirring_check(negative_eigs: &[f64], v: &PotentialField, gamma: f64, d: usize) -> Result<BoundReport> {
    lieb_thirring_admissible(gamma, d)?;
    require_real(v, "Lieb-Thirring bound")?;
    let lhs: f64 = negative_eigs.iter().filter(|e| **e < 0.0).map(|e| e.abs().powf(gamma)).sum();
    let exponent = gamma + d as f64 / 2.0;
    let minus = v.negative_part()?;
    let rhs: f64 = minus
        .values()
        .iter()
        .zip(v.weights())
        .filter(|(x, _)| x.re > 0.0)
        .map(|(x, w)| w * x.re.powf(exponent))
        .sum();
    Ok(BoundReport::new("lieb_thirring", lhs, rhs)
        .with_param("gamma", gamma)
        .with_param("d", d as f64))
}

/// `|z|^{q - d/2}` against `||V||_q^q`, from the norm directly.
pub fn frank_report(z: Complex64, vnorm: f64, q: f64, d: usize) -> Result<BoundReport> {
    if d < 2 {
        return Err(invalid("the short-range bound is stated for d >= 2"));
    }
    let df = d as f64;
    let in_range = q > df / 2.0 && q <= (df + 1.0) / 2.0;
    let lhs = if z.norm() == 0.0 { 0.0 } else { z.norm().powf(q - df / 2.0) };
    Ok(BoundReport::new("frank", lhs, vnorm.powf(q))
        .with_param("q", q)
        .with_param("d", df)
        .with_param("in_range", if in_range { 1.0 } else { 0.0 }))
}

pub fn frank_check(z: Complex64, v: &PotentialField, q: f64, d: usize) -> Result<BoundReport> {
    frank_report(z, v.lq_norm(q)?, q, d)
}

/// `dist(z, [0, inf))`: `|Im z|` when `Re z >= 0`, else `|z|`.
pub fn distance_to_positive_axis(z: Complex64) -> f64 {
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// `|z|^{q - d/2} / ||V||_q^q` from the norm.
pub fn cex_ratio_from_norm(z: Complex64, vnorm: f64, q: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(invalid("the counterexample functionals are stated for d >= 2"));
    }
    Ok(safe_ratio(z.norm().powf(q - d as f64 / 2.0), vnorm.powf(q)))
}

/// `dist(z, R_+)^{q - (d+1)/2} |z|^{1/2} / ||V||_q^q` from the norm; `+inf`
/// when `z` lies on the positive axis and the exponent is negative.
pub fn cex_distance_ratio_from_norm(z: Complex64, vnorm: f64, q: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(invalid("the counterexample functionals are stated for d >= 2"));
    }
    let dist = distance_to_positive_axis(z);
    let exponent = q - (d as f64 + 1.0) / 2.0;
    let factor = if dist == 0.0 {
        if exponent < 0.0 {
            f64::INFINITY
        } else if exponent == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        dist.powf(exponent)
    };
    Ok(safe_ratio(factor * z.norm().sqrt(), vnorm.powf(q)))
}

pub fn cex_ratio(z: Complex64, v: &PotentialField, q: f64, d: usize) -> Result<f64> {
    cex_ratio_from_norm(z, v.lq_norm(q)?, q, d)
}

pub fn cex_distance_ratio(z: Complex64, v: &PotentialField, q: f64, d: usize) -> Result<f64> {
    cex_distance_ratio_from_norm(z, v.lq_norm(q)?, q, d)
}

/// Exponents for an enclosure check: the fractional window when it applies,
/// otherwise the Laplacian window for `alpha = 2`.
pub fn enclosure_exponents(d: usize, q: f64, alpha: f64) -> Result<Exponents> {
    match Exponents::new(d, q, alpha) {
        Ok(e) => Ok(e),
        Err(err) if alpha == 2.0 => Exponents::relaxed(d, q).map_err(|_| err),
        Err(err) => Err(err),
    }
}

/// Membership of every eigenvalue plus the fitted constant.
#[derive(Debug, Clone)]
pub struct EnclosureCheck {
    pub reports: Vec<MembershipReport>,
    pub fit: FitResult,
    pub region: EnclosureRegion,
}

impl EnclosureCheck {
    pub fn all_enclosed(&self) -> bool {
        self.reports.iter().all(|r| r.enclosed)
    }
}

/// Tests each eigenvalue against the enclosure with centres `lambda_k^alpha`
/// of `model` and constant `c`; the fit gives the smallest constant that
/// encloses the whole spectrum.
pub fn manifold_enclosure_check(
    spectrum: &[Complex64],
    model: &SpectralModel,
    v: &PotentialField,
    q: f64,
    alpha: f64,
    c: f64,
) -> Result<EnclosureCheck> {
    let exp = enclosure_exponents(model.dim(), q, alpha)?;
    let vnorm = v.lq_norm(q)?;
    let region = EnclosureRegion::new(&model.freqs(), exp, c, vnorm)?;
    let reports: Vec<MembershipReport> = spectrum.iter().map(|z| region.contains(*z)).collect();
    let fit = FitResult::from_samples(reports.iter().map(|r| r.min_c).collect());
    Ok(EnclosureCheck { reports, fit, region })
}

/// `lambda^{2 - d/q} / (<lambda h>^{d/2} (log <lambda R>)^{7/2})` with
/// `<x> = (1 + x^2)^{1/2}`.
pub fn random_bound_lhs(lambda: f64, h: f64, r: f64, q: f64, d: usize) -> Result<f64> {
    if !(lambda > 0.0 && h > 0.0 && r > 0.0) {
        return Err(invalid("random bound needs lambda, h, R > 0"));
    }
    if !(h < r) {
        return Err(invalid("random bound needs h < R"));
    }
    let bracket = |x: f64| (1.0 + x * x).sqrt();
    let df = d as f64;
    let num = lambda.powf(2.0 - df / q);
    let den = bracket(lambda * h).powf(df / 2.0) * bracket(lambda * r).ln().powf(3.5);
    Ok(num / den)
}

/// Least-squares line `y = slope x + intercept` with RMS residual.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(invalid("linear fit needs at least two paired points"));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(invalid("linear fit needs distinct abscissae"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Which resolvent estimate a ray is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventRegime {
    /// Points in the exterior region: `log ||R(z)||` against `log |z|`.
    Exterior,
    /// Points off the exterior region: `log(||R(z)|| d(z))` against `log(1 + |z|)`.
    NearSpectrum,
    /// Approach to a pole `lambda_k^alpha + delta`: `log ||R||` against `log(1/delta)`.
    Pole,
}

#[derive(Debug, Clone)]
pub struct ResolventFit {
    pub regime: ResolventRegime,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// `(z, norm estimate)` per ray point.
    pub points: Vec<(Complex64, OpNormEstimate)>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

/// Predicted exterior slope `(2 nu + 1)/alpha - 1`.
pub fn exterior_exponent(exp: &Exponents) -> f64 {
    (2.0 * exp.nu + 1.0) / exp.alpha - 1.0
}

/// Resolvent `L^p -> L^p'` norm at `z` on the node grid of `model`.
pub fn resolvent_norm(
    model: &SpectralModel,
    alpha: f64,
    z: Complex64,
    p: f64,
    pprime: f64,
    opts: &OpNormOptions,
) -> Result<OpNormEstimate> {
    let weights = model.weights();
    match model.kind() {
        ModelKind::Torus1 | ModelKind::Torus2 if model.n_nodes() > 1024 => {
            let map = torus_resolvent_map(model, alpha, z)?;
            opnorm_map(&map, p, pprime, weights, opts)
        }
        _ => {
            let dense = resolvent_node_matrix(model, alpha, z)?;
            opnorm_map(&dense as &dyn LinearMap, p, pprime, weights, opts)
        }
    }
}

/// Fits the growth exponent of the resolvent norm along `ray`. All points
/// must sit on the same side of the contour; mixed rays are rejected.
pub fn resolvent_exponent_fit(
    model: &SpectralModel,
    alpha: f64,
    p: f64,
    pprime: f64,
    ray: &[Complex64],
    opts: &OpNormOptions,
) -> Result<ResolventFit> {
    fit_ray(
        alpha,
        ray,
        |z| resolvent_norm(model, alpha, z, p, pprime, opts),
        |z| free_distance(model, alpha, z),
    )
}

fn fit_ray(
    alpha: f64,
    ray: &[Complex64],
    norm_at: impl Fn(Complex64) -> Result<OpNormEstimate>,
    distance_at: impl Fn(Complex64) -> Result<f64>,
) -> Result<ResolventFit> {
    if ray.len() < 2 {
        return Err(invalid("a ray needs at least two points"));
    }
    let mut inside = Vec::with_capacity(ray.len());
    for z in ray {
        inside.push(xi_contains(*z, alpha, None)?.in_xi());
    }
    let regime = if inside.iter().all(|b| *b) {
        ResolventRegime::Exterior
    } else if inside.iter().all(|b| !*b) {
        ResolventRegime::NearSpectrum
    } else {
        return Err(invalid("ray crosses the contour; split it into one-sided pieces"));
    };
    let mut points = Vec::with_capacity(ray.len());
    let mut xs = Vec::with_capacity(ray.len());
    let mut ys = Vec::with_capacity(ray.len());
    for z in ray {
        let est = norm_at(*z)?;
        match regime {
            ResolventRegime::Exterior => {
                xs.push(z.norm().ln());
                ys.push(est.value.ln());
            }
            _ => {
                let d = distance_at(*z)?;
                xs.push((1.0 + z.norm()).ln());
                ys.push((est.value * d).ln());
            }
        }
        points.push((*z, est));
    }
    let (slope, intercept, residual) = linear_fit(&xs, &ys)?;
    Ok(ResolventFit {
        regime,
        slope,
        intercept,
        residual,
        points,
        xs,
        ys,
    })
}

/// Fits `log ||R(lambda_k^alpha + delta)||` against `log(1/delta)`, with
/// `lambda_k^alpha` the `mode`-th free eigenvalue in model order.
pub fn pole_exponent_fit(
    model: &SpectralModel,
    alpha: f64,
    p: f64,
    pprime: f64,
    mode: usize,
    deltas: &[f64],
    opts: &OpNormOptions,
) -> Result<ResolventFit> {
    let free = free_spectrum(model, alpha)?;
    let center = *free.get(mode).ok_or_else(|| invalid(format!("mode {mode} out of range")))?;
    fit_pole(center, deltas, |z| resolvent_norm(model, alpha, z, p, pprime, opts))
}

fn fit_pole(center: f64, deltas: &[f64], norm_at: impl Fn(Complex64) -> Result<OpNormEstimate>) -> Result<ResolventFit> {
    let mut points = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &delta in deltas {
        if !(delta > 0.0) {
            return Err(invalid("pole offsets must be positive"));
        }
        let z = Complex64::new(center + delta, 0.0);
        let est = norm_at(z)?;
        xs.push((1.0 / delta).ln());
        ys.push(est.value.ln());
        points.push((z, est));
    }
    let (slope, intercept, residual) = linear_fit(&xs, &ys)?;
    Ok(ResolventFit {
        regime: ResolventRegime::Pole,
        slope,
        intercept,
        residual,
        points,
        xs,
        ys,
    })
}

/// Free flat torus `(R / 2 pi Z)^d` (`d = 1, 2`) truncated to `|k|_inf <= cutoff`
/// on a uniform grid, handled matrix-free. Fine grids resolve the resolvent
/// kernel at large `|z|` without storing a mode basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    pub dim: usize,
    pub cutoff: usize,
    pub per_axis: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, cutoff: usize, per_axis: usize) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(invalid(format!("torus grids have dimension 1 or 2, got {dim}")));
        }
        if per_axis < 2 * cutoff + 1 {
            return Err(invalid(format!("cutoff {cutoff} needs at least {} points per axis", 2 * cutoff + 1)));
        }
        Ok(Self { dim, cutoff, per_axis })
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = 2.0 * std::f64::consts::PI / self.per_axis as f64;
        vec![h.powi(self.dim as i32); self.per_axis.pow(self.dim as u32)]
    }

    /// Distinct free eigenvalues `|k|^alpha`, ascending.
    pub fn free_levels(&self, alpha: f64) -> Vec<f64> {
        let c = self.cutoff as i64;
        let mut k2: Vec<i64> = if self.dim == 1 {
            (0..=c).map(|k| k * k).collect()
        } else {
            (0..=c).flat_map(|a| (0..=c).map(move |b| a * a + b * b)).collect()
        };
        k2.sort_unstable();
        k2.dedup();
        k2.into_iter().map(|k| (k as f64).powf(alpha / 2.0)).collect()
    }

    pub fn free_distance(&self, alpha: f64, z: Complex64) -> f64 {
        self.free_levels(alpha)
            .iter()
            .map(|m| (z - m).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn resolvent_map(&self, alpha: f64, z: Complex64) -> Result<FourierMultiplier> {
        let distance = self.free_distance(alpha, z);
        if !(distance > 1e-12 * (1.0 + z.norm())) {
            return Err(Error::TooCloseToSpectrum { distance });
        }
        let cutoff = self.cutoff as i64;
        FourierMultiplier::from_fn(self.per_axis, self.dim, |k| {
            if k.iter().any(|c| c.abs() > cutoff) {
                return Complex64::new(0.0, 0.0);
            }
            let freq = (k.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt();
            (freq.powf(alpha) - z).inv()
        })
    }

    pub fn resolvent_norm(&self, alpha: f64, z: Complex64, p: f64, pprime: f64, opts: &OpNormOptions) -> Result<OpNormEstimate> {
        opnorm_map(&self.resolvent_map(alpha, z)?, p, pprime, &self.weights(), opts)
    }

    /// [`resolvent_exponent_fit`] on the grid.
    pub fn exponent_fit(&self, alpha: f64, p: f64, pprime: f64, ray: &[Complex64], opts: &OpNormOptions) -> Result<ResolventFit> {
        fit_ray(
            alpha,
            ray,
            |z| self.resolvent_norm(alpha, z, p, pprime, opts),
            |z| Ok(self.free_distance(alpha, z)),
        )
    }

    /// [`pole_exponent_fit`] at the `level`-th distinct free eigenvalue.
    pub fn pole_fit(&self, alpha: f64, p: f64, pprime: f64, level: usize, deltas: &[f64], opts: &OpNormOptions) -> Result<ResolventFit> {
        let levels = self.free_levels(alpha);
        let center = *levels.get(level).ok_or_else(|| invalid(format!("level {level} out of range")))?;
        fit_pole(center, deltas, |z| self.resolvent_norm(alpha, z, p, pprime, opts))
    }
}

/// Classifies every ray point, for reporting.
pub fn classify_ray(ray: &[Complex64], alpha: f64) -> Result<Vec<XiMembership>> {
    ray.iter().map(|z| xi_contains(*z, alpha, None)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{build_line, build_torus1, families};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lieb_thirring_lhs_and_admissibility() {
        let model = build_line(5.0, 100).unwrap();
        let v = families::square_well(&model, c(-2.0, 0.0), 1.0, 0.0).unwrap();
        let r = lieb_thirring_check(&[-4.0, -1.0], &v, 0.5, 1).unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-15);
        assert!((r.rhs_factor - 4.0).abs() < 1e-12);
        assert!(lieb_thirring_check(&[-1.0], &v, 0.25, 1).is_err());
        assert!(lieb_thirring_admissible(0.0, 2).is_err());
        assert!(lieb_thirring_admissible(0.0, 3).is_ok());
    }

    #[test]
    fn frank_hand_value() {
        let r = frank_report(c(0.0, 4.0), 2.0, 1.5, 2).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14);
        assert!((r.rhs_factor - 2f64.powf(1.5)).abs() < 1e-14);
        assert!((r.ratio - 0.7071067811865476).abs() < 1e-12);
        assert_eq!(r.param("in_range"), Some(1.0));
        assert_eq!(frank_report(c(0.0, 0.0), 2.0, 1.5, 2).unwrap().lhs, 0.0);
    }

    #[test]
    fn frank_scale_covariance() {
        // (z, V) -> (s^2 z, s^2 V(s .)): |z|^{q-d/2} scales by s^{2q-d} and so does ||V||_q^q
        let (q, d) = (1.4, 2usize);
        let (z, vnorm) = (c(1.5, 2.0), 0.7f64);
        for s in [0.5f64, 3.0] {
            let scaled_norm = (s.powf(2.0 * q - d as f64) * vnorm.powf(q)).powf(1.0 / q);
            let a = frank_report(z, vnorm, q, d).unwrap().ratio;
            let b = frank_report(z * s * s, scaled_norm, q, d).unwrap().ratio;
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn counterexample_functionals() {
        assert_eq!(distance_to_positive_axis(c(1.0, 1.0)), 1.0);
        assert_eq!(distance_to_positive_axis(c(-1.0, 0.0)), 1.0);
        let vnorm = 0.001f64.powf(0.5);
        let r = cex_ratio_from_norm(c(1.0, 0.01), vnorm, 2.0, 2).unwrap();
        assert!((r - 1000.05).abs() < 1e-2);
        let inf = cex_distance_ratio_from_norm(c(2.0, 0.0), 1.0, 1.2, 2).unwrap();
        assert!(inf.is_infinite());
    }

    #[test]
    fn random_bound_hand_value() {
        let v = random_bound_lhs(10.0, 0.1, 1.0, 2.0, 1).unwrap();
        let expected = 10f64.powf(1.5) / (2f64.sqrt().sqrt() * 101f64.sqrt().ln().powf(3.5));
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 1.425).abs() < 2e-3);
        // log<lambda R> ~ (lambda R)^2 / 2 near zero, so the display blows up
        assert!(random_bound_lhs(1e-3, 0.1, 1.0, 2.0, 1).unwrap() > 1e10);
        // increasing once log<lambda R> exceeds 7/2 / (2 - d/q - d/2)
        let scan: Vec<f64> = (0..40).map(|k| random_bound_lhs(200.0 + 50.0 * k as f64, 0.01, 1.0, 2.0, 1).unwrap()).collect();
        assert!(scan.windows(2).all(|w| w[1] > w[0]));
        assert!(random_bound_lhs(1.0, 1.0, 0.5, 2.0, 1).is_err());
    }

    #[test]
    fn constant_potential_enclosure() {
        let model = build_torus1(16).unwrap();
        let v = PotentialField::constant(&model, c(1.0, 2.0)).unwrap();
        let spectrum: Vec<Complex64> = model.freqs().iter().map(|l| c(l * l + 1.0, 2.0)).collect();
        let check = manifold_enclosure_check(&spectrum, &model, &v, 2.0, 2.0, 1.0).unwrap();
        assert!((check.fit.c_emp - (2.0 * PI).powf(-0.5)).abs() < 1e-12);
        let zero = PotentialField::zero(&model);
        let free: Vec<Complex64> = model.freqs().iter().map(|l| c(l * l, 0.0)).collect();
        let check = manifold_enclosure_check(&free, &model, &zero, 2.0, 2.0, 1.0).unwrap();
        assert_eq!(check.fit.c_emp, 0.0);
    }

    #[test]
    fn aad_selection() {
        let model = build_line(5.0, 100).unwrap();
        let zero = PotentialField::zero(&model);
        let r = aad_check(&[c(1.0, 0.0), c(4.0, 0.0)], &zero).unwrap();
        assert!(!r.is_applicable());
        let v = families::square_well(&model, c(-1.0, 0.0), 1.0, 0.0).unwrap();
        let r = aad_check(&[c(-0.25, 0.0), c(3.0, 0.0)], &v).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn keller_inapplicable_for_positive() {
        let model = build_line(5.0, 100).unwrap();
        let v = families::square_well(&model, c(1.0, 0.0), 1.0, 0.0).unwrap();
        assert!(!keller_check(0.5, &v, 1.0).unwrap().is_applicable());
    }

    #[test]
    fn two_to_two_calibration_slope() {
        let model = build_torus1(8).unwrap();
        let ray: Vec<Complex64> = (0..12).map(|i| c(-(10f64.powf(1.0 + i as f64 / 11.0 * 2.0)), 0.0)).collect();
        let fit = resolvent_exponent_fit(&model, 2.0, 2.0, 2.0, &ray, &OpNormOptions::default()).unwrap();
        assert_eq!(fit.regime, ResolventRegime::Exterior);
        assert!((fit.slope + 1.0).abs() < 1e-6);
    }

    #[test]
    fn torus_grid_matches_dense_route() {
        let model = crate::manifolds::build_torus2(4).unwrap();
        let grid = TorusGrid::new(2, 4, 10).unwrap();
        let opts = OpNormOptions::default();
        for (z, p, pp) in [(c(-7.0, 0.0), 2.0, 2.0), (c(-30.0, 2.0), 1.2, 6.0), (c(3.5, 0.1), 1.5, 3.0)] {
            let dense = resolvent_norm(&model, 2.0, z, p, pp, &opts).unwrap().value;
            let fft = grid.resolvent_norm(2.0, z, p, pp, &opts).unwrap().value;
            assert!((dense - fft).abs() < 1e-6 * dense, "{z}: {dense} vs {fft}");
        }
        assert_eq!(&grid.free_levels(2.0)[..5], &[0.0, 1.0, 2.0, 4.0, 5.0]);
        assert!(grid.resolvent_map(2.0, c(5.0, 0.0)).is_err());
        assert!(TorusGrid::new(2, 4, 8).is_err());
    }

    #[test]
    fn mixed_ray_rejected() {
        let model = build_torus1(8).unwrap();
        let ray = [c(-10.0, 0.0), c(5.0, 0.5)];
        assert!(resolvent_exponent_fit(&model, 2.0, 2.0, 2.0, &ray, &OpNormOptions::default()).is_err());
    }

    #[test]
    fn linear_fit_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let (s, i, r) = linear_fit(&xs, &ys).unwrap();
        assert!((s - 2.0).abs() < 1e-14 && (i + 1.0).abs() < 1e-14 && r < 1e-14);
    }
}
