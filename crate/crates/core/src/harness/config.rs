//! Experiment configuration: `key = value` lines grouped under `[section]`
//! headers, `#` comments. Every key has a default and unknown keys are
//! rejected before anything runs.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::error::{Error, Result, SchemaIssue, SchemaIssues};
use crate::manifolds::ModelKind;
use crate::randomization::CellDistribution;

use super::plot::Frame;
use super::studies::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Enclosure,
    ResolventScaling,
    LineBounds,
    RandomMc,
    RegionPlot,
    Convergence,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        Self::Enclosure,
        Self::ResolventScaling,
        Self::LineBounds,
        Self::RandomMc,
        Self::RegionPlot,
        Self::Convergence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Enclosure => "enclosure",
            Self::ResolventScaling => "resolvent_scaling",
            Self::LineBounds => "line_bounds",
            Self::RandomMc => "random_mc",
            Self::RegionPlot => "region_plot",
            Self::Convergence => "convergence",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolventMode {
    /// Ray `z = -t` with the dual pair of `q`.
    Exterior,
    /// Approach to `lambda_k^alpha` from the right.
    Pole,
    /// Ray `z = -t` with `p = p' = 2`.
    Calibration,
}

impl ResolventMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exterior => "exterior",
            Self::Pole => "pole",
            Self::Calibration => "calibration",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Exterior, Self::Pole, Self::Calibration].into_iter().find(|k| k.as_str() == s)
    }
}

/// `C` used to judge memberships: a fixed number or the empirical fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantSpec {
    Fit,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub size: usize,
    /// Grid override: nodes for `torus1` runs, points per axis for torus
    /// resolvent runs; 0 keeps the default grid.
    pub nodes: usize,
    pub halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialParams {
    pub family: String,
    pub value: Complex64,
    pub bandwidth: usize,
    pub mean: Complex64,
    pub scale: f64,
    pub depth: Complex64,
    pub width: f64,
    pub center: f64,
    pub count: usize,
    pub max_depth: f64,
    pub spread: f64,
}

impl PotentialParams {
    pub fn spec(&self) -> Result<PotentialSpec> {
        Ok(match self.family.as_str() {
            "zero" => PotentialSpec::Zero,
            "constant" => PotentialSpec::Constant(self.value),
            "band_limited" => PotentialSpec::BandLimited {
                bandwidth: self.bandwidth,
                mean: self.mean,
            },
            "smooth" => PotentialSpec::Smooth { scale: self.scale },
            "nonvanishing" => PotentialSpec::Nonvanishing,
            "square_well" => PotentialSpec::SquareWell {
                depth: self.depth,
                halfwidth: self.width,
                center: self.center,
            },
            "random_wells" => PotentialSpec::RandomWells {
                count: self.count,
                max_depth: self.max_depth,
                spread: self.spread,
            },
            other => return Err(crate::error::invalid(format!("unknown potential family `{other}`"))),
        })
    }
}

const FAMILIES: [&str; 7] = ["zero", "constant", "band_limited", "smooth", "nonvanishing", "square_well", "random_wells"];

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosureParams {
    pub samples: usize,
    pub norms: Vec<f64>,
    /// Fresh samples checked at `holdout_factor * C_emp` after the fit.
    pub holdout: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolventParams {
    pub mode: ResolventMode,
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    /// Index into the distinct free eigenvalues (ascending) for the pole
    /// approach on tori; mode index on the sphere.
    pub pole_mode: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    pub random_starts: usize,
    pub max_iter: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineParams {
    pub kappa: f64,
    pub widths: Vec<f64>,
    pub random_wells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub h: Vec<f64>,
    pub dist: CellDistribution,
    pub samples: usize,
    pub lambdas: Vec<f64>,
    pub eps_ratio: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotParams {
    pub frame: Option<Frame>,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceParams {
    pub sizes: Vec<usize>,
    pub track: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub slope: f64,
    pub calibration: f64,
    pub variation: f64,
    pub holdout_factor: f64,
    /// Relative slack on the sharp line-bound constants.
    pub bound_slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub name: String,
    pub seed: u64,
    pub model: ModelSpec,
    pub potential: PotentialParams,
    pub q: f64,
    pub alpha: f64,
    pub constant: ConstantSpec,
    pub enclosure: EnclosureParams,
    pub resolvent: ResolventParams,
    pub line: LineParams,
    pub random: RandomParams,
    pub plot: PlotParams,
    pub convergence: ConvergenceParams,
    /// Empty means the caller's default output root.
    pub output_dir: String,
    pub tolerance: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Enclosure,
            name: "experiment".into(),
            seed: 0,
            model: ModelSpec {
                kind: ModelKind::Torus1,
                size: 16,
                nodes: 0,
                halfwidth: 20.0,
            },
            potential: PotentialParams {
                family: "band_limited".into(),
                value: Complex64::new(1.0, 2.0),
                bandwidth: 2,
                mean: Complex64::new(0.0, 0.0),
                scale: 1.0,
                depth: Complex64::new(-1.0, 0.0),
                width: 1.0,
                center: 0.0,
                count: 4,
                max_depth: 4.0,
                spread: 10.0,
            },
            q: 2.0,
            alpha: 2.0,
            constant: ConstantSpec::Fit,
            enclosure: EnclosureParams {
                samples: 10,
                norms: Vec::new(),
                holdout: 0,
            },
            resolvent: ResolventParams {
                mode: ResolventMode::Exterior,
                t_min: 10.0,
                t_max: 1000.0,
                points: 12,
                pole_mode: 1,
                delta_min: 1e-3,
                delta_max: 1e-1,
                random_starts: 8,
                max_iter: 500,
            },
            line: LineParams {
                kappa: 2.0,
                widths: vec![0.32, 0.16, 0.08, 0.04],
                random_wells: 50,
            },
            random: RandomParams {
                h: vec![0.25, 0.125, 0.0625],
                dist: CellDistribution::Bernoulli,
                samples: 100,
                lambdas: (0..10).map(|i| 2.5 + 0.5 * i as f64).collect(),
                eps_ratio: 0.05,
                radius: std::f64::consts::PI,
            },
            plot: PlotParams {
                frame: None,
                width: 800,
                height: 600,
            },
            convergence: ConvergenceParams {
                sizes: vec![8, 12, 16],
                track: vec![1, 2, 3],
            },
            output_dir: String::new(),
            tolerance: Tolerances {
                slope: 0.15,
                calibration: 0.01,
                variation: 0.2,
                holdout_factor: 1.05,
                bound_slack: 0.05,
            },
        }
    }
}

/// Parses a complex literal such as `1`, `-2.5i`, `1+2i` or `3e-2-0.5i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|x| Complex64::new(x, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Canonical spelling of a complex literal; `parse_complex` reads it back exactly.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn format_list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

struct Reader {
    issues: Vec<SchemaIssue>,
}

impl Reader {
    fn issue(&mut self, line: usize, key: &str, message: impl Into<String>) {
        self.issues.push(SchemaIssue {
            line,
            key: key.to_string(),
            message: message.into(),
        });
    }

    fn number<T: std::str::FromStr>(&mut self, line: usize, key: &str, value: &str, what: &str) -> Option<T> {
        let parsed = value.parse().ok();
        if parsed.is_none() {
            self.issue(line, key, format!("expected {what}, got `{value}`"));
        }
        parsed
    }

    fn list<T: std::str::FromStr>(&mut self, line: usize, key: &str, value: &str, what: &str) -> Option<Vec<T>> {
        if value.trim().is_empty() {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        for item in value.split(',') {
            out.push(self.number(line, key, item.trim(), what)?);
        }
        Some(out)
    }

    fn complex(&mut self, line: usize, key: &str, value: &str) -> Option<Complex64> {
        let parsed = parse_complex(value);
        if parsed.is_none() {
            self.issue(line, key, format!("expected a complex number, got `{value}`"));
        }
        parsed
    }
}

impl ExperimentConfig {
    /// Parses a config, reporting every problem with its line and key.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut r = Reader { issues: Vec::new() };
        let mut section = String::new();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                match name.strip_suffix(']') {
                    Some(name) if SECTIONS.contains(&name.trim()) => section = name.trim().to_string(),
                    Some(name) => {
                        r.issue(line, name.trim(), "unknown section");
                        section = format!("?{}", name.trim());
                    }
                    None => r.issue(line, content, "unterminated section header"),
                }
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                r.issue(line, content, "expected `key = value`");
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if section.starts_with('?') {
                continue;
            }
            if section.is_empty() {
                r.issue(line, key, "key outside any section");
                continue;
            }
            let full = format!("{section}.{key}");
            if seen.contains(&full) {
                r.issue(line, &full, "duplicate key");
                continue;
            }
            seen.push(full.clone());
            cfg.set(&mut r, line, &section, key, value, &full);
        }
        if r.issues.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Schema(SchemaIssues(r.issues)))
        }
    }

    fn set(&mut self, r: &mut Reader, line: usize, section: &str, key: &str, value: &str, full: &str) {
        macro_rules! num {
            ($field:expr, $what:expr) => {
                if let Some(v) = r.number(line, full, value, $what) {
                    $field = v;
                }
            };
        }
        macro_rules! list {
            ($field:expr, $what:expr) => {
                if let Some(v) = r.list(line, full, value, $what) {
                    $field = v;
                }
            };
        }
        macro_rules! cplx {
            ($field:expr) => {
                if let Some(v) = r.complex(line, full, value) {
                    $field = v;
                }
            };
        }
        match (section, key) {
            ("experiment", "kind") => match ExperimentKind::parse(value) {
                Some(k) => self.kind = k,
                None => r.issue(line, full, format!("unknown experiment kind `{value}`")),
            },
            ("experiment", "name") => self.name = value.to_string(),
            ("experiment", "seed") => num!(self.seed, "an unsigned integer"),
            ("model", "kind") => match ModelKind::parse(value) {
                Some(k) => self.model.kind = k,
                None => r.issue(line, full, format!("unknown model kind `{value}`")),
            },
            ("model", "size") => num!(self.model.size, "an unsigned integer"),
            ("model", "nodes") => num!(self.model.nodes, "an unsigned integer"),
            ("model", "halfwidth") => num!(self.model.halfwidth, "a number"),
            ("potential", "family") => {
                if FAMILIES.contains(&value) {
                    self.potential.family = value.to_string();
                } else {
                    r.issue(line, full, format!("unknown potential family `{value}`"));
                }
            }
            ("potential", "value") => cplx!(self.potential.value),
            ("potential", "bandwidth") => num!(self.potential.bandwidth, "an unsigned integer"),
            ("potential", "mean") => cplx!(self.potential.mean),
            ("potential", "scale") => num!(self.potential.scale, "a number"),
            ("potential", "depth") => cplx!(self.potential.depth),
            ("potential", "width") => num!(self.potential.width, "a number"),
            ("potential", "center") => num!(self.potential.center, "a number"),
            ("potential", "count") => num!(self.potential.count, "an unsigned integer"),
            ("potential", "max_depth") => num!(self.potential.max_depth, "a number"),
            ("potential", "spread") => num!(self.potential.spread, "a number"),
            ("exponents", "q") => num!(self.q, "a number"),
            ("exponents", "alpha") => num!(self.alpha, "a number"),
            ("constants", "c") => {
                if value == "fit" {
                    self.constant = ConstantSpec::Fit;
                } else if let Some(c) = r.number::<f64>(line, full, value, "`fit` or a number") {
                    self.constant = ConstantSpec::Fixed(c);
                }
            }
            ("enclosure", "samples") => num!(self.enclosure.samples, "an unsigned integer"),
            ("enclosure", "norms") => list!(self.enclosure.norms, "a list of numbers"),
            ("enclosure", "holdout") => num!(self.enclosure.holdout, "an unsigned integer"),
            ("resolvent", "regime") => match ResolventMode::parse(value) {
                Some(m) => self.resolvent.mode = m,
                None => r.issue(line, full, format!("unknown regime `{value}`")),
            },
            ("resolvent", "t_min") => num!(self.resolvent.t_min, "a number"),
            ("resolvent", "t_max") => num!(self.resolvent.t_max, "a number"),
            ("resolvent", "points") => num!(self.resolvent.points, "an unsigned integer"),
            ("resolvent", "mode") => num!(self.resolvent.pole_mode, "an unsigned integer"),
            ("resolvent", "delta_min") => num!(self.resolvent.delta_min, "a number"),
            ("resolvent", "delta_max") => num!(self.resolvent.delta_max, "a number"),
            ("resolvent", "random_starts") => num!(self.resolvent.random_starts, "an unsigned integer"),
            ("resolvent", "max_iter") => num!(self.resolvent.max_iter, "an unsigned integer"),
            ("line", "kappa") => num!(self.line.kappa, "a number"),
            ("line", "widths") => list!(self.line.widths, "a list of numbers"),
            ("line", "random_wells") => num!(self.line.random_wells, "an unsigned integer"),
            ("random", "h") => list!(self.random.h, "a list of numbers"),
            ("random", "dist") => match CellDistribution::parse(value) {
                Some(d) => self.random.dist = d,
                None => r.issue(line, full, format!("unknown distribution `{value}`")),
            },
            ("random", "samples") => num!(self.random.samples, "an unsigned integer"),
            ("random", "lambdas") => list!(self.random.lambdas, "a list of numbers"),
            ("random", "eps_ratio") => num!(self.random.eps_ratio, "a number"),
            ("random", "radius") => num!(self.random.radius, "a number"),
            ("plot", "frame") => {
                if value == "auto" {
                    self.plot.frame = None;
                } else if let Some(v) = r.list::<f64>(line, full, value, "`auto` or xmin, xmax, ymin, ymax") {
                    if v.len() == 4 {
                        self.plot.frame = Some(Frame {
                            xmin: v[0],
                            xmax: v[1],
                            ymin: v[2],
                            ymax: v[3],
                        });
                    } else {
                        r.issue(line, full, "frame needs four numbers: xmin, xmax, ymin, ymax");
                    }
                }
            }
            ("plot", "width") => num!(self.plot.width, "an unsigned integer"),
            ("plot", "height") => num!(self.plot.height, "an unsigned integer"),
            ("convergence", "sizes") => list!(self.convergence.sizes, "a list of unsigned integers"),
            ("convergence", "track") => list!(self.convergence.track, "a list of unsigned integers"),
            ("output", "dir") => self.output_dir = value.to_string(),
            ("tolerance", "slope") => num!(self.tolerance.slope, "a number"),
            ("tolerance", "calibration") => num!(self.tolerance.calibration, "a number"),
            ("tolerance", "variation") => num!(self.tolerance.variation, "a number"),
            ("tolerance", "holdout_factor") => num!(self.tolerance.holdout_factor, "a number"),
            ("tolerance", "bound_slack") => num!(self.tolerance.bound_slack, "a number"),
            _ => r.issue(line, full, "unknown key"),
        }
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Every key with its effective value, in a fixed order. Parsing the echo
    /// gives back the same config.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let mut w = |line: String| {
            s.push_str(&line);
            s.push('\n');
        };
        w("[experiment]".into());
        w(format!("kind = {}", self.kind.as_str()));
        w(format!("name = {}", self.name));
        w(format!("seed = {}", self.seed));
        w("[model]".into());
        w(format!("kind = {}", self.model.kind.as_str()));
        w(format!("size = {}", self.model.size));
        w(format!("nodes = {}", self.model.nodes));
        w(format!("halfwidth = {}", self.model.halfwidth));
        let p = &self.potential;
        w("[potential]".into());
        w(format!("family = {}", p.family));
        w(format!("value = {}", format_complex(p.value)));
        w(format!("bandwidth = {}", p.bandwidth));
        w(format!("mean = {}", format_complex(p.mean)));
        w(format!("scale = {}", p.scale));
        w(format!("depth = {}", format_complex(p.depth)));
        w(format!("width = {}", p.width));
        w(format!("center = {}", p.center));
        w(format!("count = {}", p.count));
        w(format!("max_depth = {}", p.max_depth));
        w(format!("spread = {}", p.spread));
        w("[exponents]".into());
        w(format!("q = {}", self.q));
        w(format!("alpha = {}", self.alpha));
        w("[constants]".into());
        w(match self.constant {
            ConstantSpec::Fit => "c = fit".into(),
            ConstantSpec::Fixed(c) => format!("c = {c}"),
        });
        w("[enclosure]".into());
        w(format!("samples = {}", self.enclosure.samples));
        w(format!("norms = {}", format_list(&self.enclosure.norms)));
        w(format!("holdout = {}", self.enclosure.holdout));
        let rv = &self.resolvent;
        w("[resolvent]".into());
        w(format!("regime = {}", rv.mode.as_str()));
        w(format!("t_min = {}", rv.t_min));
        w(format!("t_max = {}", rv.t_max));
        w(format!("points = {}", rv.points));
        w(format!("mode = {}", rv.pole_mode));
        w(format!("delta_min = {}", rv.delta_min));
        w(format!("delta_max = {}", rv.delta_max));
        w(format!("random_starts = {}", rv.random_starts));
        w(format!("max_iter = {}", rv.max_iter));
        w("[line]".into());
        w(format!("kappa = {}", self.line.kappa));
        w(format!("widths = {}", format_list(&self.line.widths)));
        w(format!("random_wells = {}", self.line.random_wells));
        let rd = &self.random;
        w("[random]".into());
        w(format!("h = {}", format_list(&rd.h)));
        w(format!("dist = {}", rd.dist.as_str()));
        w(format!("samples = {}", rd.samples));
        w(format!("lambdas = {}", format_list(&rd.lambdas)));
        w(format!("eps_ratio = {}", rd.eps_ratio));
        w(format!("radius = {}", rd.radius));
        w("[plot]".into());
        w(match self.plot.frame {
            None => "frame = auto".into(),
            Some(f) => format!("frame = {}, {}, {}, {}", f.xmin, f.xmax, f.ymin, f.ymax),
        });
        w(format!("width = {}", self.plot.width));
        w(format!("height = {}", self.plot.height));
        w("[convergence]".into());
        w(format!("sizes = {}", format_list(&self.convergence.sizes)));
        w(format!("track = {}", format_list(&self.convergence.track)));
        w("[output]".into());
        w(format!("dir = {}", self.output_dir));
        let t = &self.tolerance;
        w("[tolerance]".into());
        w(format!("slope = {}", t.slope));
        w(format!("calibration = {}", t.calibration));
        w(format!("variation = {}", t.variation));
        w(format!("holdout_factor = {}", t.holdout_factor));
        w(format!("bound_slack = {}", t.bound_slack));
        s
    }

    /// Output directory: the config's own, else `root/name`.
    pub fn output_path(&self, root: &std::path::Path) -> PathBuf {
        if self.output_dir.is_empty() {
            root.join(&self.name)
        } else {
            PathBuf::from(&self.output_dir)
        }
    }
}

const SECTIONS: [&str; 13] = [
    "experiment",
    "model",
    "potential",
    "exponents",
    "constants",
    "enclosure",
    "resolvent",
    "line",
    "random",
    "plot",
    "convergence",
    "output",
    "tolerance",
];

/// Short human summary of a config, one line.
pub fn describe(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{} `{}` on {} (size {}), alpha = {}, q = {}, seed = {}",
        cfg.kind.as_str(),
        cfg.name,
        cfg.model.kind.as_str(),
        cfg.model.size,
        cfg.alpha,
        cfg.q,
        cfg.seed
    );
    s
}
