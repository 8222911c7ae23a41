//! Exponent bookkeeping and complex-plane geometry for the enclosure
//! theorems: the piecewise exponent `sigma(q)`, closed discs, the union of
//! discs plus central region, and the exterior region bounded by the
//! conjugate arcs `(lambda +/- i)^alpha`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Dimension, Lebesgue exponent and fractional order together with the
/// derived quantities `sigma(q)`, the dual pair `(p, p')` and `nu = sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub d: usize,
    pub q: f64,
    pub alpha: f64,
    pub sigma: f64,
    pub p: f64,
    pub pprime: f64,
    pub nu: f64,
    /// Built under the relaxed `alpha = 2`, `q >= d/2` window.
    pub relaxed: bool,
}

impl Exponents {
    /// Exponents inside the window of the fractional enclosure theorem:
    /// `d >= 2`, `2d/(d+1) <= alpha <= d`, and `d/alpha < q <= 2d/(d-alpha)`
    /// (or `1 <= q < inf` when `d == alpha`).
    pub fn new(d: usize, q: f64, alpha: f64) -> Result<Self> {
        check_window(d, q, alpha)?;
        Ok(Self::build(d, q, alpha, false))
    }

    /// Exponents for the Laplacian case `alpha = 2` on a closed manifold of
    /// any dimension, where the window is `max(1, d/2) <= q <= inf`.
    pub fn relaxed(d: usize, q: f64) -> Result<Self> {
        if d == 0 {
            return Err(inadmissible(d, q, 2.0, "d >= 1"));
        }
        if q.is_nan() || q < 1.0 {
            return Err(inadmissible(d, q, 2.0, "q >= 1"));
        }
        if q < d as f64 / 2.0 {
            return Err(inadmissible(d, q, 2.0, "q >= d/2"));
        }
        Ok(Self::build(d, q, 2.0, true))
    }

    fn build(d: usize, q: f64, alpha: f64, relaxed: bool) -> Self {
        let sigma = sigma_piecewise(d, q);
        let (p, pprime) = dual_pair_unchecked(q);
        Self {
            d,
            q,
            alpha,
            sigma,
            p,
            pprime,
            nu: sigma,
            relaxed,
        }
    }
}

fn inadmissible(d: usize, q: f64, alpha: f64, violated: &str) -> Error {
    Error::Inadmissible {
        d,
        q,
        alpha,
        violated: violated.to_string(),
    }
}

fn check_window(d: usize, q: f64, alpha: f64) -> Result<()> {
    if d < 2 {
        return Err(inadmissible(d, q, alpha, "d >= 2"));
    }
    let df = d as f64;
    if !(alpha.is_finite() && alpha >= 2.0 * df / (df + 1.0)) {
        return Err(inadmissible(d, q, alpha, "alpha >= 2d/(d+1)"));
    }
    if alpha > df {
        return Err(inadmissible(d, q, alpha, "alpha <= d"));
    }
    if q.is_nan() {
        return Err(inadmissible(d, q, alpha, "q is a number"));
    }
    if alpha < df {
        if q <= df / alpha {
            return Err(inadmissible(d, q, alpha, "q > d/alpha"));
        }
        if q > 2.0 * df / (df - alpha) {
            return Err(inadmissible(d, q, alpha, "q <= 2d/(d-alpha)"));
        }
    } else {
        if q < 1.0 {
            return Err(inadmissible(d, q, alpha, "q >= 1"));
        }
        if q.is_infinite() {
            return Err(inadmissible(d, q, alpha, "q < inf"));
        }
    }
    Ok(())
}

/// `sigma(q)` with the breakpoint at `q = (d+1)/2`, no window check.
pub fn sigma_piecewise(d: usize, q: f64) -> f64 {
    let df = d as f64;
    if q <= (df + 1.0) / 2.0 {
        df / (2.0 * q) - 0.5
    } else {
        (df - 1.0) / (4.0 * q)
    }
}

/// `sigma(q)` after checking `q` against the theorem's window for `(d, alpha)`.
pub fn sigma_exponent(d: usize, q: f64, alpha: f64) -> Result<f64> {
    check_window(d, q, alpha)?;
    Ok(sigma_piecewise(d, q))
}

fn dual_pair_unchecked(q: f64) -> (f64, f64) {
    if q.is_infinite() {
        return (2.0, 2.0);
    }
    (2.0 * q / (q + 1.0), 2.0 * q / (q - 1.0))
}

/// The pair `(p, p')` with `1/p + 1/p' = 1` and `1/q = 1/p - 1/p'`.
pub fn lebesgue_pair(q: f64) -> Result<(f64, f64)> {
    if q.is_nan() || q <= 1.0 {
        return Err(invalid(format!("lebesgue_pair needs q > 1, got {q}")));
    }
    Ok(dual_pair_unchecked(q))
}

/// `w^alpha` through the principal logarithm.
pub fn principal_pow(w: Complex64, alpha: f64) -> Complex64 {
    if w == Complex64::new(0.0, 0.0) {
        return w;
    }
    (w.ln() * alpha).exp()
}

fn require_alpha_gt_one(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(invalid(format!("alpha must exceed 1, got {alpha}")));
    }
    Ok(())
}

/// Meeting point of the two arcs, `-sin(pi/alpha)^(-alpha)`.
pub fn z_star(alpha: f64) -> Result<f64> {
    require_alpha_gt_one(alpha)?;
    let value = -(PI / alpha).sin().powf(-alpha);
    debug_assert!({
        let direct = principal_pow(Complex64::new(cot(PI / alpha), 1.0), alpha);
        (direct - value).norm() <= 1e-12 * value.abs()
    });
    Ok(value)
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// Upper arc `(lambda + i)^alpha` or lower arc `(lambda - i)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

/// A point of the contour; `lambda` must be at least `cot(pi/alpha)`.
pub fn gamma_point(lambda: f64, branch: Branch, alpha: f64) -> Result<Complex64> {
    require_alpha_gt_one(alpha)?;
    let lambda_min = cot(PI / alpha);
    if !(lambda >= lambda_min - 1e-15 * (1.0 + lambda_min.abs())) {
        return Err(invalid(format!(
            "curve parameter {lambda} lies below cot(pi/alpha) = {lambda_min}"
        )));
    }
    let upper = principal_pow(Complex64::new(lambda, 1.0), alpha);
    Ok(match branch {
        Branch::Upper => upper,
        Branch::Lower => upper.conj(),
    })
}

/// A closed disc in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(invalid(format!("disc radius must be nonnegative, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() <= self.radius
    }
}

/// Union of discs `D(lambda_k^alpha, C r_k)` with
/// `r_k = ||V||_q (1 + lambda_k)^(2 sigma)`, together with the central region
/// `|z|^(1 - 1/alpha) (1 + |z|)^(-2 sigma / alpha) <= C ||V||_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnclosureRegion {
    freqs: Vec<f64>,
    centers: Vec<Complex64>,
    radii: Vec<f64>,
    growth: Vec<f64>,
    c: f64,
    vnorm: f64,
    exp: Exponents,
}

/// Outcome of testing one point against an [`EnclosureRegion`].
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub z: Complex64,
    /// Indices of the discs that contain `z`.
    pub discs: Vec<usize>,
    pub central: bool,
    pub enclosed: bool,
    /// Smallest constant that places `z` in some disc.
    pub min_c_disc: f64,
    /// Index of the disc achieving `min_c_disc`.
    pub best_disc: Option<usize>,
    /// Smallest constant that places `z` in the central region.
    pub min_c_central: f64,
    /// Smallest constant that encloses `z` by either mechanism.
    pub min_c: f64,
}

impl EnclosureRegion {
    /// Builds the region from the free frequencies `lambda_k` (duplicates are
    /// merged, the disc family only depends on distinct values).
    pub fn new(freqs: &[f64], exp: Exponents, c: f64, vnorm: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(invalid(format!("constant C must be finite and >= 0, got {c}")));
        }
        if !(vnorm >= 0.0 && vnorm.is_finite()) {
            return Err(invalid(format!("potential norm must be finite and >= 0, got {vnorm}")));
        }
        let mut distinct: Vec<f64> = Vec::with_capacity(freqs.len());
        let mut sorted = freqs.to_vec();
        if sorted.iter().any(|f| !(*f >= 0.0)) {
            return Err(invalid("frequencies must be nonnegative"));
        }
        sorted.sort_by(f64::total_cmp);
        for f in sorted {
            match distinct.last() {
                Some(&last) if (f - last).abs() <= 1e-12 * (1.0 + f) => {}
                _ => distinct.push(f),
            }
        }
        let growth: Vec<f64> = distinct
            .iter()
            .map(|l| (1.0 + l).powf(2.0 * exp.sigma))
            .collect();
        let centers = distinct
            .iter()
            .map(|l| Complex64::new(l.powf(exp.alpha), 0.0))
            .collect();
        let radii = growth.iter().map(|g| c * vnorm * g).collect();
        Ok(Self {
            freqs: distinct,
            centers,
            radii,
            growth,
            c,
            vnorm,
            exp,
        })
    }

    pub fn with_constant(&self, c: f64) -> Result<Self> {
        Self::new(&self.freqs, self.exp, c, self.vnorm)
    }

    pub fn centers(&self) -> &[Complex64] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    pub fn vnorm(&self) -> f64 {
        self.vnorm
    }

    pub fn exponents(&self) -> &Exponents {
        &self.exp
    }

    pub fn discs(&self) -> Vec<Disc> {
        self.centers
            .iter()
            .zip(&self.radii)
            .map(|(&center, &radius)| Disc { center, radius })
            .collect()
    }

    /// Left side of the central-region inequality, `|z|^(1-1/alpha) (1+|z|)^(-2 sigma/alpha)`.
    pub fn central_value(&self, z: Complex64) -> f64 {
        central_value(z, &self.exp)
    }

    pub fn contains(&self, z: Complex64) -> MembershipReport {
        let mut min_c_disc = f64::INFINITY;
        let mut best_disc = None;
        let mut per_disc = Vec::with_capacity(self.centers.len());
        for (k, (center, growth)) in self.centers.iter().zip(&self.growth).enumerate() {
            let c_k = ratio(
                (z - center).norm(),
                self.vnorm * growth,
            );
            per_disc.push(c_k);
            if c_k < min_c_disc {
                min_c_disc = c_k;
                best_disc = Some(k);
            }
        }
        let min_c_central = ratio(self.central_value(z), self.vnorm);
        let discs: Vec<usize> = per_disc
            .iter()
            .enumerate()
            .filter(|(_, &c_k)| c_k <= self.c)
            .map(|(k, _)| k)
            .collect();
        let central = min_c_central <= self.c;
        let min_c = min_c_disc.min(min_c_central);
        MembershipReport {
            z,
            enclosed: !discs.is_empty() || central,
            discs,
            central,
            min_c_disc,
            best_disc,
            min_c_central,
            min_c,
        }
    }
}

/// `|z|^(1-1/alpha) (1+|z|)^(-2 sigma/alpha)`; for `alpha = 2` this is the
/// Laplacian-case expression `|z|^(1/2) (1+|z|)^(-sigma)`.
pub fn central_value(z: Complex64, exp: &Exponents) -> f64 {
    let r = z.norm();
    r.powf(1.0 - 1.0 / exp.alpha) * (1.0 + r).powf(-2.0 * exp.sigma / exp.alpha)
}

// Smallest C with `num <= C * den`; 0/0 counts as enclosed for every C >= 0.
fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Membership classes for the closed region `Xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMembership {
    Inside,
    Boundary,
    Outside,
}

impl XiMembership {
    /// `Xi` is closed, so boundary points belong to it.
    pub fn in_xi(self) -> bool {
        !matches!(self, XiMembership::Outside)
    }
}

/// The contour `Gamma` and the closed exterior region `Xi` it bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiRegion {
    pub alpha: f64,
    pub lambda_min: f64,
    pub zstar: f64,
}

const MAX_REFINEMENTS: usize = 24;

/// A sampled upper arc with the curve parameter of every vertex.
#[derive(Debug, Clone)]
pub struct ArcPolyline {
    pub params: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl XiRegion {
    pub fn new(alpha: f64) -> Result<Self> {
        require_alpha_gt_one(alpha)?;
        Ok(Self {
            alpha,
            lambda_min: cot(PI / alpha),
            zstar: z_star(alpha)?,
        })
    }

    fn upper(&self, lambda: f64) -> Complex64 {
        principal_pow(Complex64::new(lambda, 1.0), self.alpha)
    }

    /// Smallest curve parameter whose arc point has modulus at least `radius`.
    pub fn truncation_for(&self, radius: f64) -> f64 {
        // |(L + i)^alpha| = (1 + L^2)^(alpha/2)
        let needed = (radius.max(1.0).powf(2.0 / self.alpha) - 1.0).max(0.0).sqrt();
        needed.max(self.lambda_min + 1.0)
    }

    /// Samples the upper arc on `[lambda_min, truncation]` so that every
    /// chord deviates from the curve by at most `sagitta`.
    pub fn upper_arc(&self, truncation: f64, sagitta: f64) -> ArcPolyline {
        let a = self.lambda_min;
        let b = truncation.max(a);
        let seeds = 64usize;
        // geometric spacing in (lambda - a + 1) keeps the seed count small
        let span = (b - a + 1.0).ln();
        let seed_params: Vec<f64> = (0..=seeds)
            .map(|i| a - 1.0 + (span * i as f64 / seeds as f64).exp())
            .collect();
        let mut params = vec![seed_params[0]];
        let mut points = vec![self.upper(seed_params[0])];
        for w in seed_params.windows(2) {
            let (l0, l1) = (w[0], w[1]);
            let (p0, p1) = (self.upper(l0), self.upper(l1));
            let mut stack = vec![(l1, p1)];
            let mut cur = (l0, p0);
            while let Some(&(lt, pt)) = stack.last() {
                let lm = 0.5 * (cur.0 + lt);
                let pm = self.upper(lm);
                let dev = point_segment_distance(pm, cur.1, pt);
                if dev > sagitta && (lt - cur.0) > 1e-14 * (1.0 + lt.abs()) {
                    stack.push((lm, pm));
                } else {
                    stack.pop();
                    params.push(lt);
                    points.push(pt);
                    cur = (lt, pt);
                }
            }
        }
        // pin the meeting point exactly on the real axis
        points[0] = Complex64::new(self.zstar, 0.0);
        ArcPolyline { params, points }
    }

    /// Classifies `z` relative to `Xi` by an even-odd crossing count of the
    /// segment from `z` to a far anchor on the negative real axis.
    pub fn contains(&self, z: Complex64, tol: f64) -> Result<XiMembership> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(invalid("xi_contains needs a finite point"));
        }
        let anchor = (2.0 * self.zstar).min(self.zstar - 4.0 * (1.0 + z.norm()));
        let anchor = Complex64::new(anchor, 0.0);
        let truncation = self.truncation_for(10.0 * (z.norm() + anchor.norm()));
        let scale = 1.0 + z.norm();
        let mut previous: Option<bool> = None;
        for level in 0..MAX_REFINEMENTS {
            let sagitta = 0.05 * scale * 0.25f64.powi(level as i32);
            let arc = self.upper_arc(truncation, sagitta);
            let odd = self.crossing_parity(&arc, z, anchor);
            let dist = self.distance_to_gamma(&arc, z);
            if dist <= tol {
                return Ok(XiMembership::Boundary);
            }
            if dist > 2.0 * sagitta && previous == Some(odd) {
                return Ok(if odd {
                    XiMembership::Outside
                } else {
                    XiMembership::Inside
                });
            }
            previous = Some(odd);
        }
        Err(Error::Indeterminate {
            levels: MAX_REFINEMENTS,
        })
    }

    // Parity of crossings between segment [z, anchor] and Gamma, where Gamma
    // is the lower arc reversed followed by the upper arc.
    fn crossing_parity(&self, arc: &ArcPolyline, z: Complex64, anchor: Complex64) -> bool {
        let dir = anchor - z;
        let n = arc.points.len();
        let vertex = |i: usize| -> Complex64 {
            // i in 0..2n-1: lower arc reversed, then upper arc without duplicate z*
            if i < n {
                arc.points[n - 1 - i].conj()
            } else {
                arc.points[i - n + 1]
            }
        };
        let total = 2 * n - 1;
        let side = |p: Complex64| cross(dir, p - z) >= 0.0;
        let mut odd = false;
        let mut prev = vertex(0);
        let mut prev_side = side(prev);
        for i in 1..total {
            let cur = vertex(i);
            let cur_side = side(cur);
            if cur_side != prev_side {
                let edge = cur - prev;
                let denom = cross(dir, edge);
                if denom != 0.0 {
                    let t = cross(prev - z, edge) / denom;
                    if (0.0..=1.0).contains(&t) {
                        odd = !odd;
                    }
                }
            }
            prev = cur;
            prev_side = cur_side;
        }
        odd
    }

    // Distance from z to Gamma: closest polyline vertex, then a golden-section
    // search on the exact curve over the neighbouring parameter bracket.
    fn distance_to_gamma(&self, arc: &ArcPolyline, z: Complex64) -> f64 {
        let w = if z.im >= 0.0 { z } else { z.conj() };
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, p) in arc.points.iter().enumerate() {
            let d = (p - w).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        let lo = arc.params[best.saturating_sub(1)];
        let hi = arc.params[(best + 1).min(arc.params.len() - 1)];
        let f = |l: f64| (self.upper(l) - w).norm();
        let (mut a, mut b) = (lo, hi);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..100 {
            if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        let mut dist = fc.min(fd).min(f(lo)).min(f(hi));
        // z* sits on both arcs; the lower arc is the mirror image
        dist = dist.min((z - Complex64::new(self.zstar, 0.0)).norm());
        dist
    }
}

/// Membership of `z` in `Xi` for order `alpha`, with the default boundary
/// band `1e-9 (1 + |z|)` when `tol` is `None`.
pub fn xi_contains(z: Complex64, alpha: f64, tol: Option<f64>) -> Result<XiMembership> {
    let region = XiRegion::new(alpha)?;
    let tol = tol.unwrap_or(1e-9 * (1.0 + z.norm()));
    region.contains(z, tol)
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_values() {
        assert!((sigma_exponent(2, 1.5, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((sigma_exponent(2, 3.0, 2.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((sigma_exponent(2, 100.0, 2.0).unwrap() - 0.0025).abs() < 1e-15);
    }

    #[test]
    fn sigma_branches_meet() {
        for d in 2..=6usize {
            let df = d as f64;
            let q = (df + 1.0) / 2.0;
            let first = df / (2.0 * q) - 0.5;
            let second = (df - 1.0) / (4.0 * q);
            assert!((first - second).abs() <= 2.0 * f64::EPSILON, "d={d}");
        }
    }

    #[test]
    fn window_errors_name_the_inequality() {
        let err = sigma_exponent(3, 1.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { ref violated, .. } if violated == "q > d/alpha"));
        let err = sigma_exponent(3, 7.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { ref violated, .. } if violated == "q <= 2d/(d-alpha)"));
        let err = sigma_exponent(2, f64::INFINITY, 2.0).unwrap_err();
        assert!(matches!(err, Error::Inadmissible { ref violated, .. } if violated == "q < inf"));
        assert!(sigma_exponent(2, 1.5, 1.2).is_err());
        assert!(sigma_exponent(1, 1.5, 1.0).is_err());
        assert!(Exponents::relaxed(3, 1.4).is_err());
        assert!(Exponents::relaxed(3, 1.5).is_ok());
        assert!(Exponents::relaxed(1, 2.0).is_ok());
    }

    #[test]
    fn dual_pairs() {
        let (p, pp) = lebesgue_pair(2.0).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 1e-15 && (pp - 4.0).abs() < 1e-15);
        let (p, pp) = lebesgue_pair(3.0).unwrap();
        assert!((p - 1.5).abs() < 1e-15 && (pp - 3.0).abs() < 1e-15);
        for q in [1.1, 1.5, 2.5, 7.0] {
            let (p, pp) = lebesgue_pair(q).unwrap();
            assert!((1.0 / p + 1.0 / pp - 1.0).abs() < 1e-15);
            assert!((1.0 / q - (1.0 / p - 1.0 / pp)).abs() < 1e-15);
        }
        assert!(lebesgue_pair(1.0).is_err());
        assert!(lebesgue_pair(0.5).is_err());
    }

    #[test]
    fn z_star_values() {
        assert!((z_star(2.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((z_star(3.0).unwrap() + 1.539_600_717_839_002).abs() < 1e-12);
        assert!(z_star(1.0).is_err());
        let a = 5.0;
        let direct = principal_pow(c(cot(PI / a), 1.0), a);
        assert!((direct - z_star(a).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn gamma_points() {
        assert!((gamma_point(1.0, Branch::Upper, 2.0).unwrap() - c(0.0, 2.0)).norm() < 1e-14);
        assert!((gamma_point(2.0, Branch::Lower, 2.0).unwrap() - c(3.0, -4.0)).norm() < 1e-14);
        let meet = gamma_point(cot(PI / 3.0), Branch::Upper, 3.0).unwrap();
        assert!((meet - c(z_star(3.0).unwrap(), 0.0)).norm() < 1e-12);
        assert!(gamma_point(-1.0, Branch::Upper, 2.0).is_err());
        let up = gamma_point(1.7, Branch::Upper, 3.3).unwrap();
        let down = gamma_point(1.7, Branch::Lower, 3.3).unwrap();
        assert_eq!(up.conj(), down);
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_contains(c(-10.0, 0.0), 2.0, None).unwrap(), XiMembership::Inside);
        assert_eq!(xi_contains(c(0.5, 2.0), 2.0, None).unwrap(), XiMembership::Outside);
        assert_eq!(xi_contains(c(-0.5, 2.0), 2.0, None).unwrap(), XiMembership::Inside);
        // on the positive axis the segment passes through the meeting vertex
        assert_eq!(xi_contains(c(5.0, 0.0), 2.0, None).unwrap(), XiMembership::Outside);
        assert_eq!(xi_contains(c(0.0, 0.0), 3.0, None).unwrap(), XiMembership::Outside);
        assert_eq!(xi_contains(c(-1.0, 0.0), 2.0, None).unwrap(), XiMembership::Boundary);
        assert_eq!(xi_contains(c(3.0, 4.0), 2.0, None).unwrap(), XiMembership::Boundary);
        assert!(xi_contains(c(f64::NAN, 0.0), 2.0, None).is_err());
    }

    #[test]
    fn disc_is_closed() {
        let d = Disc::new(c(1.0, 0.0), 2.0).unwrap();
        assert!(d.contains(c(3.0, 0.0)));
        assert!(!d.contains(c(3.0 + 1e-12, 0.0)));
        assert!(Disc::new(c(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn enclosure_center_needs_no_constant() {
        let exp = Exponents::new(2, 1.5, 2.0).unwrap();
        let region = EnclosureRegion::new(&[0.0, 1.0, 2.0], exp, 0.3, 1.0).unwrap();
        let report = region.contains(c(4.0, 0.0));
        assert!(report.enclosed);
        assert_eq!(report.min_c, 0.0);
        assert_eq!(report.best_disc, Some(2));
    }

    #[test]
    fn central_region_hand_value() {
        let exp = Exponents::new(2, 1.5, 2.0).unwrap();
        let region = EnclosureRegion::new(&[], exp, 1.0, 1.0).unwrap();
        let value = region.central_value(c(1.0, 0.0));
        assert!((value - 2f64.powf(-1.0 / 6.0)).abs() < 1e-15);
        assert!((value - 0.8909).abs() < 1e-4);
        let report = region.contains(c(1.0, 0.0));
        assert!(report.central && report.enclosed && report.discs.is_empty());
    }
}
