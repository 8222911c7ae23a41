//! Self-contained SVG rendering of spectra, enclosure regions and the
//! contour `Gamma`. Coordinates are printed with two decimals in a fixed
//! viewport, so equal inputs give byte-identical files.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::regions::{central_value, EnclosureRegion, XiRegion};

/// Visible window of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub frame: Option<Frame>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            width: 800,
            height: 600,
            frame: None,
        }
    }
}

impl Frame {
    fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite());
        if !finite || self.xmax <= self.xmin || self.ymax <= self.ymin {
            return Err(invalid("plot frame needs finite bounds with min < max"));
        }
        Ok(())
    }

    /// Widens the shorter side so the frame has the aspect `width/height`,
    /// keeping the centre.
    fn with_aspect(self, width: u32, height: u32) -> Self {
        let aspect = width as f64 / height as f64;
        let (w, h) = (self.xmax - self.xmin, self.ymax - self.ymin);
        let (cx, cy) = (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax));
        let (w, h) = if w / h < aspect { (h * aspect, h) } else { (w, w / aspect) };
        Self {
            xmin: cx - 0.5 * w,
            xmax: cx + 0.5 * w,
            ymin: cy - 0.5 * h,
            ymax: cy + 0.5 * h,
        }
    }

    fn radius(&self) -> f64 {
        [self.xmin, self.xmax]
            .iter()
            .flat_map(|x| [self.ymin, self.ymax].map(|y| x.hypot(y)))
            .fold(0.0, f64::max)
    }
}

/// Frame around the eigenvalues, the origin and `z_*`, symmetric about the
/// real axis and padded by 10%.
pub fn auto_frame(spectrum: &[Complex64], xi_alpha: Option<f64>, width: u32, height: u32) -> Result<Frame> {
    let mut xs = vec![0.0];
    let mut ys = vec![1.0];
    if let Some(alpha) = xi_alpha {
        let z = XiRegion::new(alpha)?.zstar;
        xs.push(6.0 * z);
        xs.push(-6.0 * z);
        ys.push(4.5 * z.abs());
    }
    for z in spectrum {
        xs.push(z.re);
        ys.push(z.im.abs());
    }
    let xmin = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let xmax = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ymax = ys.iter().copied().fold(0.0, f64::max);
    let pad = 0.1 * (xmax - xmin).max(2.0 * ymax).max(1.0);
    let frame = Frame {
        xmin: xmin - pad,
        xmax: xmax + pad,
        ymin: -(ymax + pad),
        ymax: ymax + pad,
    };
    Ok(frame.with_aspect(width, height))
}

struct Canvas {
    frame: Frame,
    width: f64,
    height: f64,
}

impl Canvas {
    fn x(&self, re: f64) -> f64 {
        (re - self.frame.xmin) / (self.frame.xmax - self.frame.xmin) * self.width
    }

    fn y(&self, im: f64) -> f64 {
        (self.frame.ymax - im) / (self.frame.ymax - self.frame.ymin) * self.height
    }

    fn scale(&self) -> f64 {
        self.width / (self.frame.xmax - self.frame.xmin)
    }
}

// Prints a coordinate with two decimals; clears the sign of zero.
fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Radii where the central-region boundary `f(r) = C ||V||` crosses, up to `rmax`.
pub fn central_boundary_radii(region: &EnclosureRegion, rmax: f64) -> Vec<f64> {
    let level = region.constant() * region.vnorm();
    if !(level > 0.0) || !(rmax > 0.0) {
        return Vec::new();
    }
    let exp = region.exponents();
    let f = |r: f64| central_value(Complex64::new(r, 0.0), exp) - level;
    let steps = 2000;
    let lo = rmax * 1e-6;
    let ratio = (rmax / lo).ln();
    let grid: Vec<f64> = (0..=steps).map(|i| lo * (ratio * i as f64 / steps as f64).exp()).collect();
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            out.push(a);
            continue;
        }
        if fa * fb < 0.0 {
            let mut fa = fa;
            for _ in 0..100 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            out.push(0.5 * (a + b));
        }
    }
    out
}

/// Upper arc of `Gamma` from `z_*` until it leaves the disc of radius `rmax`.
pub fn gamma_arc(alpha: f64, rmax: f64, sagitta: f64) -> Result<Vec<Complex64>> {
    let xi = XiRegion::new(alpha)?;
    let truncation = xi.truncation_for(rmax);
    Ok(xi.upper_arc(truncation, sagitta).points)
}

/// Renders eigenvalues as points, enclosure discs as circles (one per
/// distinct centre left of the frame's right edge), the central-region
/// boundary as circles about the origin and `Gamma` as two polylines.
pub fn plot_spectrum_region(
    spectrum: &[Complex64],
    region: Option<&EnclosureRegion>,
    xi_alpha: Option<f64>,
    opts: &PlotOptions,
) -> Result<String> {
    if opts.width == 0 || opts.height == 0 {
        return Err(invalid("plot size must be positive"));
    }
    let frame = match opts.frame {
        Some(f) => {
            f.validate()?;
            f
        }
        None => auto_frame(spectrum, xi_alpha, opts.width, opts.height)?,
    };
    let cv = Canvas {
        frame,
        width: opts.width as f64,
        height: opts.height as f64,
    };
    let mut s = String::new();
    let (w, h) = (opts.width, opts.height);
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect class="frame" x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black"/>"#).unwrap();
    if frame.ymin <= 0.0 && frame.ymax >= 0.0 {
        let y = fmt2(cv.y(0.0));
        writeln!(s, r##"<line class="axis" x1="0.00" y1="{y}" x2="{}" y2="{y}" stroke="#999999"/>"##, fmt2(cv.width)).unwrap();
    }
    if frame.xmin <= 0.0 && frame.xmax >= 0.0 {
        let x = fmt2(cv.x(0.0));
        writeln!(s, r##"<line class="axis" x1="{x}" y1="0.00" x2="{x}" y2="{}" stroke="#999999"/>"##, fmt2(cv.height)).unwrap();
    }
    if let Some(region) = region {
        for (center, radius) in region.centers().iter().zip(region.radii()) {
            if center.re > frame.xmax {
                continue;
            }
            writeln!(
                s,
                r##"<circle class="disc" cx="{}" cy="{}" r="{}" fill="none" stroke="#4477aa"/>"##,
                fmt2(cv.x(center.re)),
                fmt2(cv.y(center.im)),
                fmt2(radius * cv.scale())
            )
            .unwrap();
        }
        for r in central_boundary_radii(region, frame.radius()) {
            writeln!(
                s,
                r##"<circle class="central" cx="{}" cy="{}" r="{}" fill="none" stroke="#228833" stroke-dasharray="4 3"/>"##,
                fmt2(cv.x(0.0)),
                fmt2(cv.y(0.0)),
                fmt2(r * cv.scale())
            )
            .unwrap();
        }
    }
    if let Some(alpha) = xi_alpha {
        let rmax = 1.5 * frame.radius();
        let sagitta = 0.25 / cv.scale();
        let arc = gamma_arc(alpha, rmax, sagitta)?;
        for (class, sign) in [("gamma-upper", 1.0), ("gamma-lower", -1.0)] {
            let pts: Vec<String> = arc
                .iter()
                .map(|z| format!("{},{}", fmt2(cv.x(z.re)), fmt2(cv.y(sign * z.im))))
                .collect();
            writeln!(s, r##"<polyline class="{class}" points="{}" fill="none" stroke="#aa3377"/>"##, pts.join(" ")).unwrap();
        }
        let zstar = XiRegion::new(alpha)?.zstar;
        writeln!(
            s,
            r##"<circle class="zstar" cx="{}" cy="{}" r="3.00" fill="#aa3377"/>"##,
            fmt2(cv.x(zstar)),
            fmt2(cv.y(0.0))
        )
        .unwrap();
        writeln!(s, r#"<text x="10.00" y="20.00" font-family="sans-serif" font-size="14">alpha = {alpha}</text>"#).unwrap();
    }
    for z in spectrum {
        writeln!(
            s,
            r##"<circle class="eig" cx="{}" cy="{}" r="2.50" fill="#cc3311"/>"##,
            fmt2(cv.x(z.re)),
            fmt2(cv.y(z.im))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{Exponents, XiRegion};

    fn count(s: &str, class: &str) -> usize {
        s.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn empty_spectrum_renders_region_only() {
        let svg = plot_spectrum_region(&[], None, Some(5.0), &PlotOptions::default()).unwrap();
        assert_eq!(count(&svg, "eig"), 0);
        assert_eq!(count(&svg, "gamma-upper"), 1);
        assert_eq!(count(&svg, "gamma-lower"), 1);
        assert_eq!(svg, plot_spectrum_region(&[], None, Some(5.0), &PlotOptions::default()).unwrap());
    }

    #[test]
    fn conjugate_pairs_render_symmetric() {
        let spec = [Complex64::new(1.0, 2.0), Complex64::new(1.0, -2.0), Complex64::new(-3.0, 0.5), Complex64::new(-3.0, -0.5)];
        let opts = PlotOptions::default();
        let svg = plot_spectrum_region(&spec, None, None, &opts).unwrap();
        let mut ys: Vec<f64> = svg
            .lines()
            .filter(|l| l.contains(r#"class="eig""#))
            .map(|l| {
                let at = l.find("cy=\"").unwrap() + 4;
                l[at..].split('"').next().unwrap().parse().unwrap()
            })
            .collect();
        ys.sort_by(f64::total_cmp);
        let mid = opts.height as f64 / 2.0;
        for (a, b) in ys.iter().zip(ys.iter().rev()) {
            assert!((a - mid + (b - mid)).abs() < 0.011);
        }
    }

    #[test]
    fn disc_count_matches_centres_in_frame() {
        let exp = Exponents::new(2, 1.5, 2.0).unwrap();
        let freqs: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let region = EnclosureRegion::new(&freqs, exp, 0.1, 1.0).unwrap();
        let frame = Frame {
            xmin: -5.0,
            xmax: 30.0,
            ymin: -10.0,
            ymax: 10.0,
        };
        let opts = PlotOptions {
            frame: Some(frame),
            ..PlotOptions::default()
        };
        let svg = plot_spectrum_region(&[], Some(&region), None, &opts).unwrap();
        // centres 0, 1, 4, 9, 16, 25
        assert_eq!(count(&svg, "disc"), 6);
    }

    #[test]
    fn arcs_start_at_zstar() {
        let arc = gamma_arc(5.0, 100.0, 0.01).unwrap();
        let zstar = XiRegion::new(5.0).unwrap().zstar;
        assert!((arc[0] - Complex64::new(zstar, 0.0)).norm() < 1e-12);
        assert!(arc.last().unwrap().norm() >= 100.0);
    }

    #[test]
    fn central_radii_solve_the_level_equation() {
        let exp = Exponents::new(2, 1.5, 2.0).unwrap();
        let region = EnclosureRegion::new(&[0.0, 1.0], exp, 0.5, 1.0).unwrap();
        let radii = central_boundary_radii(&region, 1e4);
        assert!(!radii.is_empty());
        for r in radii {
            let v = central_value(Complex64::new(r, 0.0), &exp);
            assert!((v - 0.5).abs() < 1e-9);
        }
    }
}
