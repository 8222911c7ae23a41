//! Config-driven experiment runner. Each run writes CSV tables, an SVG plot
//! where one applies, and a manifest with digests of everything written.

pub mod config;
pub mod manifest;
pub mod plot;
pub mod studies;

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;

use crate::bounds::{
    enclosure_exponents, exterior_exponent, pole_exponent_fit, resolvent_exponent_fit, BoundReport, FitResult, TorusGrid,
    Verdict,
};
use crate::error::{invalid, Result};
use crate::linalg::OpNormOptions;
use crate::manifolds::{build_torus1_with_nodes, ModelKind, SpectralModel};
use crate::regions::{lebesgue_pair, EnclosureRegion, XiRegion};

pub use config::{ConstantSpec, ExperimentConfig, ExperimentKind, ResolventMode};
pub use manifest::{FileEntry, Manifest};
pub use plot::{plot_spectrum_region, Frame, PlotOptions};

/// Version of the CSV column sets below.
pub const CSV_SCHEMA: u32 = 1;
pub const ENCLOSURE_HEADER: &str = "sample,seed,target_norm,vnorm,eig_re,eig_im,min_c,min_c_disc,min_c_central,best_disc,enclosed";
pub const REPORT_HEADER: &str = "name,lhs,rhs_factor,ratio,params,verdict";
pub const RESOLVENT_HEADER: &str = "z_re,z_im,x,y,norm,p,pprime";
pub const RANDOM_HEADER: &str = "cells,h,sample,seed,vnorm,x,argmax_lambda";
pub const CONVERGENCE_HEADER: &str = "size,n_modes,vnorm,c_emp,drift,tracked";

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "SPECENC_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
        }
    }

    /// Process exit code: 0 on pass, 2 on a violated bound.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Root under which `<name>/` is created when the config has no `output.dir`.
    pub root: PathBuf,
    /// Count inapplicable verdicts as violations.
    pub strict: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("specenc-out"));
        Self { root, strict: false }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub status: Status,
}

/// Formats a float so that it reads back to the same value.
fn num(x: f64) -> String {
    format!("{x}")
}

fn report_row(r: &BoundReport) -> String {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let verdict = match &r.verdict {
        Verdict::Inapplicable(_) => "inapplicable".to_string(),
        v => v.to_string(),
    };
    format!("{},{},{},{},{},{}", r.name, num(r.lhs), num(r.rhs_factor), num(r.ratio), params.join(";"), verdict)
}

/// Collects outputs in memory and writes them with the manifest at the end.
struct Collector {
    manifest: Manifest,
    outputs: Vec<(String, Vec<u8>)>,
    violation: bool,
    clock: Instant,
}

impl Collector {
    fn time(&mut self, label: &str) {
        let now = Instant::now();
        self.manifest
            .timings
            .push((label.to_string(), now.duration_since(self.clock).as_secs_f64()));
        self.clock = now;
    }

    fn file(&mut self, name: &str, contents: String) {
        self.outputs.push((name.to_string(), contents.into_bytes()));
    }

    fn summary(&mut self, key: &str, value: impl ToString) {
        self.manifest.summary.push((key.to_string(), value.to_string()));
    }

    fn check(&mut self, key: &str, ok: bool) {
        self.summary(key, if ok { "pass" } else { "fail" });
        if !ok {
            self.violation = true;
        }
    }
}

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn model_for(cfg: &ExperimentConfig) -> Result<SpectralModel> {
    if cfg.model.kind == ModelKind::Torus1 && cfg.model.nodes > 0 {
        return build_torus1_with_nodes(cfg.model.size, cfg.model.nodes);
    }
    studies::build_model(cfg.model.kind, cfg.model.size, cfg.model.halfwidth)
}

/// Runs the experiment named by `cfg` and writes its outputs.
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let dir = cfg.output_path(&opts.root);
    let mut c = Collector {
        manifest: Manifest::new(cfg),
        outputs: Vec::new(),
        violation: false,
        clock: Instant::now(),
    };
    c.summary("csv_schema", CSV_SCHEMA);
    match cfg.kind {
        ExperimentKind::Enclosure => run_enclosure(cfg, &mut c)?,
        ExperimentKind::ResolventScaling => run_resolvent(cfg, &mut c)?,
        ExperimentKind::LineBounds => run_line_bounds(cfg, opts, &mut c)?,
        ExperimentKind::RandomMc => run_random(cfg, &mut c)?,
        ExperimentKind::RegionPlot => run_region_plot(cfg, &mut c)?,
        ExperimentKind::Convergence => run_convergence(cfg, &mut c)?,
    }
    std::fs::create_dir_all(&dir)?;
    for (name, bytes) in &c.outputs {
        std::fs::write(dir.join(name), bytes)?;
        c.manifest.files.push(FileEntry::of(name, bytes));
    }
    let status = if c.violation { Status::Violation } else { Status::Pass };
    c.manifest.status = status.as_str().into();
    std::fs::write(dir.join("manifest.txt"), c.manifest.render())?;
    Ok(RunOutcome {
        dir,
        manifest: c.manifest,
        status,
    })
}

fn run_enclosure(cfg: &ExperimentConfig, c: &mut Collector) -> Result<()> {
    let model = model_for(cfg)?;
    let spec = cfg.potential.spec()?;
    let e = &cfg.enclosure;
    let study = studies::enclosure_study(&model, &spec, cfg.alpha, cfg.q, &e.norms, e.samples, cfg.seed)?;
    c.time("spectra");
    let fit = study.fit();
    let constant = match cfg.constant {
        ConstantSpec::Fit => fit.c_emp,
        ConstantSpec::Fixed(v) => v,
    };
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for s in &study.samples {
        let target = s.target.map(num).unwrap_or_default();
        for r in &s.reports {
            rows.push(format!(
                "{},{},{},{},{},{},{},{},{},{},{}",
                s.sample,
                s.seed,
                target,
                num(s.vnorm),
                num(r.z.re),
                num(r.z.im),
                num(r.min_c),
                num(r.min_c_disc),
                num(r.min_c_central),
                r.best_disc.map(|b| b.to_string()).unwrap_or_default(),
                r.min_c <= constant
            ));
        }
        let mut report = BoundReport::new("enclosure", s.c_min(), 1.0)
            .with_param("sample", s.sample as f64)
            .with_param("vnorm", s.vnorm);
        if let Some(t) = s.target {
            report = report.with_param("target", t);
        }
        reports.push(report.judged(constant));
    }
    c.file("enclosure.csv", table(ENCLOSURE_HEADER, rows));
    c.file("fit.csv", table(REPORT_HEADER, reports.iter().map(report_row)));
    c.summary("c_emp", num(fit.c_emp));
    c.summary("c_used", num(constant));
    c.summary("sigma", num(study.exponents.sigma));
    let missed = study.missed_at(constant)?;
    c.summary("missed", missed);
    c.check("enclosed", missed == 0 && reports.iter().all(|r| r.verdict == Verdict::Pass));
    if e.norms.len() > 1 {
        let trace: Vec<f64> = fit.scale.iter().map(|(_, v)| *v).collect();
        let variation = FitResult::variation(&trace);
        c.summary("scale_variation", num(variation));
        c.check("scale_stable", variation < cfg.tolerance.variation);
    }
    c.time("fit");
    if e.holdout > 0 {
        let fresh = cfg.seed.wrapping_add(e.samples as u64);
        let hold = studies::enclosure_study(&model, &spec, cfg.alpha, cfg.q, &e.norms, e.holdout, fresh)?;
        let missed = hold.missed_at(cfg.tolerance.holdout_factor * constant)?;
        c.summary("holdout_c_emp", num(hold.c_emp()));
        c.summary("holdout_missed", missed);
        c.check("holdout_enclosed", missed == 0);
        c.time("holdout");
    }
    if let Some(first) = study.samples.first() {
        let region = EnclosureRegion::new(&study.freqs, study.exponents, constant, first.vnorm)?;
        let plot = PlotOptions {
            width: cfg.plot.width,
            height: cfg.plot.height,
            frame: cfg.plot.frame,
        };
        c.file("region.svg", plot_spectrum_region(&first.spectrum, Some(&region), None, &plot)?);
        c.time("plot");
    }
    Ok(())
}

fn run_resolvent(cfg: &ExperimentConfig, c: &mut Collector) -> Result<()> {
    let rv = &cfg.resolvent;
    let opts = OpNormOptions {
        random_starts: rv.random_starts,
        max_iter: rv.max_iter,
        seed: cfg.seed,
        ..OpNormOptions::default()
    };
    let (p, pprime) = match rv.mode {
        ResolventMode::Calibration => (2.0, 2.0),
        _ => lebesgue_pair(cfg.q)?,
    };
    // tori run matrix-free on the node grid; the sphere uses its dense basis
    let grid = match cfg.model.kind {
        ModelKind::Torus1 | ModelKind::Torus2 => {
            let (dim, cutoff) = if cfg.model.kind == ModelKind::Torus1 {
                (1, cfg.model.size / 2)
            } else {
                (2, cfg.model.size)
            };
            let per_axis = if cfg.model.nodes > 0 { cfg.model.nodes } else { 2 * cutoff + 2 };
            Some(TorusGrid::new(dim, cutoff, per_axis)?)
        }
        _ => None,
    };
    let model = if grid.is_none() { Some(model_for(cfg)?) } else { None };
    let dim = grid.map(|g| g.dim).unwrap_or_else(|| model.as_ref().map_or(2, |m| m.dim()));
    let (fit, expected, tol) = match rv.mode {
        ResolventMode::Exterior | ResolventMode::Calibration => {
            let ray: Vec<Complex64> = studies::log_spaced(rv.t_min, rv.t_max, rv.points)
                .into_iter()
                .map(|t| Complex64::new(-t, 0.0))
                .collect();
            let fit = match (&grid, &model) {
                (Some(g), _) => g.exponent_fit(cfg.alpha, p, pprime, &ray, &opts)?,
                (None, Some(m)) => resolvent_exponent_fit(m, cfg.alpha, p, pprime, &ray, &opts)?,
                _ => unreachable!(),
            };
            if rv.mode == ResolventMode::Calibration {
                (fit, -1.0, cfg.tolerance.calibration)
            } else {
                let exp = enclosure_exponents(dim, cfg.q, cfg.alpha)?;
                (fit, exterior_exponent(&exp), cfg.tolerance.slope)
            }
        }
        ResolventMode::Pole => {
            let deltas = studies::log_spaced(rv.delta_min, rv.delta_max, rv.points);
            let fit = match (&grid, &model) {
                (Some(g), _) => g.pole_fit(cfg.alpha, p, pprime, rv.pole_mode, &deltas, &opts)?,
                (None, Some(m)) => pole_exponent_fit(m, cfg.alpha, p, pprime, rv.pole_mode, &deltas, &opts)?,
                _ => unreachable!(),
            };
            (fit, 1.0, cfg.tolerance.slope)
        }
    };
    c.time("norms");
    let rows = fit.points.iter().zip(fit.xs.iter().zip(&fit.ys)).map(|((z, est), (x, y))| {
        format!("{},{},{},{},{},{},{}", num(z.re), num(z.im), num(*x), num(*y), num(est.value), num(p), num(pprime))
    });
    c.file("resolvent.csv", table(RESOLVENT_HEADER, rows));
    c.summary("slope", num(fit.slope));
    c.summary("expected_slope", num(expected));
    c.summary("residual", num(fit.residual));
    c.check("slope_within_tolerance", (fit.slope - expected).abs() <= tol);
    Ok(())
}

fn run_line_bounds(cfg: &ExperimentConfig, opts: &RunOptions, c: &mut Collector) -> Result<()> {
    if cfg.model.kind != ModelKind::Line {
        return Err(invalid("line_bounds needs `model.kind = line`"));
    }
    let model = model_for(cfg)?;
    let slack = 1.0 + cfg.tolerance.bound_slack;
    let family = studies::square_well_family(&model, cfg.line.kappa, &cfg.line.widths)?;
    c.time("square_wells");
    let mut reports = Vec::new();
    for row in &family {
        reports.push(row.aad.clone());
        reports.push(row.keller.clone().judged(0.25 * slack));
        reports.push(row.lieb_thirring.clone().judged(0.5 * slack));
    }
    let spec = studies::PotentialSpec::RandomWells {
        count: cfg.potential.count,
        max_depth: cfg.potential.max_depth,
        spread: cfg.potential.spread,
    };
    for i in 0..cfg.line.random_wells {
        let v = spec.build(&model, cfg.seed.wrapping_add(i as u64))?;
        let (_, aad, _, lt) = studies::line_reports(&model, &v)?;
        reports.push(aad.with_param("sample", i as f64));
        reports.push(lt.with_param("sample", i as f64).judged(0.5 * slack));
    }
    c.time("random_wells");
    c.file("line_bounds.csv", table(REPORT_HEADER, reports.iter().map(report_row)));
    if let (Some(first), Some(last)) = (family.first(), family.last()) {
        c.summary("aad_ratio_first", num(first.aad.ratio));
        c.summary("aad_ratio_last", num(last.aad.ratio));
        c.summary("keller_ratio_last", num(last.keller.ratio));
    }
    if family.len() >= 2 {
        let n = family.len();
        let (coarse, fine) = (&family[n - 2], &family[n - 1]);
        c.summary(
            "keller_extrapolated",
            num(studies::linear_extrapolation(coarse.keller.ratio, fine.keller.ratio)),
        );
    }
    let lt_max = reports
        .iter()
        .filter(|r| r.name == "lieb_thirring" && r.is_applicable())
        .map(|r| r.ratio)
        .fold(0.0, f64::max);
    c.summary("lieb_thirring_max", num(lt_max));
    let failed = reports.iter().filter(|r| r.verdict == Verdict::Fail).count();
    let inapplicable = reports.iter().filter(|r| !r.is_applicable()).count();
    c.summary("inapplicable", inapplicable);
    c.check("bounds_hold", failed == 0 && !(opts.strict && inapplicable > 0));
    Ok(())
}

fn run_random(cfg: &ExperimentConfig, c: &mut Collector) -> Result<()> {
    let model = model_for(cfg)?;
    let v = cfg.potential.spec()?.build(&model, cfg.seed)?;
    let r = &cfg.random;
    let study_cfg = studies::RandomBoundConfig {
        h: r.h.clone(),
        dist: r.dist,
        lambdas: r.lambdas.clone(),
        eps_ratio: r.eps_ratio,
        q: cfg.q,
        radius: r.radius,
        samples: r.samples,
        seed: cfg.seed,
    };
    let rows = studies::random_bound_study(&model, &v, &study_cfg)?;
    c.time("samples");
    c.file(
        "random_mc.csv",
        table(
            RANDOM_HEADER,
            rows.iter().map(|row| {
                format!(
                    "{},{},{},{},{},{},{}",
                    row.cells,
                    num(row.h),
                    row.sample,
                    row.seed,
                    num(row.vnorm),
                    num(row.x),
                    num(row.argmax_lambda)
                )
            }),
        ),
    );
    let mut cells: Vec<usize> = rows.iter().map(|row| row.cells).collect();
    cells.dedup();
    let mut p95 = Vec::new();
    for &n in &cells {
        let xs: Vec<f64> = rows.iter().filter(|row| row.cells == n).map(|row| row.x).collect();
        let q = studies::quantile(&xs, 0.95);
        c.summary(&format!("p95_cells_{n}"), num(q));
        p95.push((n, q));
    }
    p95.sort_by_key(|(n, _)| *n);
    c.check("p95_nonincreasing", p95.windows(2).all(|w| w[1].1 <= w[0].1));
    let pooled: Vec<f64> = rows.iter().map(|row| row.x).collect();
    let levels: Vec<f64> = [0.5, 0.75, 0.9, 0.95, 0.99].iter().map(|p| studies::quantile(&pooled, *p)).collect();
    let fractions: Vec<f64> = levels.iter().map(|m| studies::violation_fraction(&pooled, *m)).collect();
    c.summary(
        "violation_fractions",
        levels
            .iter()
            .zip(&fractions)
            .map(|(m, f)| format!("{}:{}", num(*m), num(*f)))
            .collect::<Vec<_>>()
            .join(" "),
    );
    c.check("violation_decreasing", fractions.windows(2).all(|w| w[1] < w[0]));
    Ok(())
}

fn run_region_plot(cfg: &ExperimentConfig, c: &mut Collector) -> Result<()> {
    let xi = XiRegion::new(cfg.alpha)?;
    let plot = PlotOptions {
        width: cfg.plot.width,
        height: cfg.plot.height,
        frame: cfg.plot.frame,
    };
    let svg = plot_spectrum_region(&[], None, Some(cfg.alpha), &plot)?;
    c.time("plot");
    let arc = plot::gamma_arc(cfg.alpha, 1.0 + xi.zstar.abs(), 1e-3)?;
    let gap = (arc[0] - Complex64::new(xi.zstar, 0.0)).norm();
    c.summary("zstar", num(xi.zstar));
    c.summary("arc_start_gap", num(gap));
    c.check("arcs_meet_at_zstar", gap < 1e-12 * xi.zstar.abs().max(1.0));
    c.file("region.svg", svg);
    Ok(())
}

fn run_convergence(cfg: &ExperimentConfig, c: &mut Collector) -> Result<()> {
    let spec = cfg.potential.spec()?;
    let t = studies::convergence_study(
        cfg.model.kind,
        &cfg.convergence.sizes,
        cfg.model.halfwidth,
        &spec,
        cfg.alpha,
        cfg.q,
        cfg.seed,
        &cfg.convergence.track,
    )?;
    c.time("ladder");
    let rows = t.rungs.iter().map(|r| {
        let tracked: Vec<String> = r.tracked.iter().map(|z| format!("{}:{}", num(z.re), num(z.im))).collect();
        format!(
            "{},{},{},{},{},{}",
            r.size,
            r.n_modes,
            num(r.vnorm),
            num(r.c_emp),
            r.drift.map(num).unwrap_or_default(),
            tracked.join(";")
        )
    });
    c.file("convergence.csv", table(CONVERGENCE_HEADER, rows));
    c.summary("non_monotone", t.non_monotone);
    c.check("c_emp_stable", !t.drifting);
    Ok(())
}

/// Re-renders `region.svg` of a finished run from its manifest and tables.
/// Returns the path written and whether the bytes match the recorded digest.
pub fn replot(manifest_path: &Path) -> Result<(PathBuf, Option<bool>)> {
    let m = Manifest::read(manifest_path)?;
    let cfg = m.config()?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let plot = PlotOptions {
        width: cfg.plot.width,
        height: cfg.plot.height,
        frame: cfg.plot.frame,
    };
    let svg = match cfg.kind {
        ExperimentKind::RegionPlot => plot_spectrum_region(&[], None, Some(cfg.alpha), &plot)?,
        ExperimentKind::Enclosure => {
            let text = std::fs::read_to_string(dir.join("enclosure.csv"))?;
            let rows = read_enclosure_rows(&text)?;
            let first: Vec<&EnclosureRow> = rows.iter().filter(|r| r.sample == 0).collect();
            let vnorm = first.first().map(|r| r.vnorm).ok_or_else(|| invalid("enclosure table is empty"))?;
            let constant: f64 = m
                .summary_value("c_used")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| invalid("manifest has no `c_used`"))?;
            let model = model_for(&cfg)?;
            let exp = enclosure_exponents(model.dim(), cfg.q, cfg.alpha)?;
            // the first sample is drawn once per target norm; keep its first block
            let first_target = first[0].target.clone();
            let spectrum: Vec<Complex64> = first.iter().filter(|r| r.target == first_target).map(|r| r.z).collect();
            let region = EnclosureRegion::new(&model.freqs(), exp, constant, vnorm)?;
            plot_spectrum_region(&spectrum, Some(&region), None, &plot)?
        }
        other => return Err(invalid(format!("no plot for `{}` runs", other.as_str()))),
    };
    let path = dir.join("region.svg");
    let matches = m.file("region.svg").map(|f| FileEntry::of("region.svg", svg.as_bytes()) == *f);
    std::fs::write(&path, svg)?;
    Ok((path, matches))
}

/// One row of `enclosure.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnclosureRow {
    pub sample: usize,
    pub target: String,
    pub vnorm: f64,
    pub z: Complex64,
    pub min_c: f64,
}

pub fn read_enclosure_rows(text: &str) -> Result<Vec<EnclosureRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(ENCLOSURE_HEADER) {
        return Err(invalid("enclosure table has an unexpected header"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || invalid(format!("malformed enclosure row {}", i + 2));
            if f.len() != 11 {
                return Err(bad());
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(EnclosureRow {
                sample: f[0].parse().map_err(|_| bad())?,
                target: f[2].to_string(),
                vnorm: parse(f[3])?,
                z: Complex64::new(parse(f[4])?, parse(f[5])?),
                min_c: parse(f[6])?,
            })
        })
        .collect()
}

/// Pooled enclosure fit over several enclosure runs.
#[derive(Debug, Clone)]
pub struct PooledFit {
    /// `(run name, C_emp)` per manifest.
    pub runs: Vec<(String, f64)>,
    pub c_emp: f64,
    pub variation: f64,
}

pub fn pooled_fit(manifests: &[PathBuf]) -> Result<PooledFit> {
    if manifests.is_empty() {
        return Err(invalid("fit needs at least one manifest"));
    }
    let mut runs = Vec::new();
    for path in manifests {
        let m = Manifest::read(path)?;
        if m.experiment != ExperimentKind::Enclosure.as_str() {
            return Err(invalid(format!("{} is not an enclosure run", path.display())));
        }
        let dir = path.parent().unwrap_or(Path::new("."));
        let bad = m.verify(dir)?;
        if !bad.is_empty() {
            return Err(invalid(format!("{}: files changed since the run: {}", path.display(), bad.join(", "))));
        }
        let rows = read_enclosure_rows(&std::fs::read_to_string(dir.join("enclosure.csv"))?)?;
        let c = rows.iter().map(|r| r.min_c).fold(0.0, f64::max);
        runs.push((m.name.clone(), c));
    }
    let values: Vec<f64> = runs.iter().map(|(_, c)| *c).collect();
    Ok(PooledFit {
        c_emp: values.iter().copied().fold(0.0, f64::max),
        variation: FitResult::variation(&values),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_root(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("specenc-unit-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn zero_potential_run_has_zero_constant() {
        let mut cfg = ExperimentConfig::default();
        cfg.name = "zero".into();
        cfg.model.size = 8;
        cfg.potential.family = "zero".into();
        cfg.enclosure.samples = 2;
        let opts = RunOptions {
            root: temp_root("zero"),
            strict: false,
        };
        let out = run(&cfg, &opts).unwrap();
        assert_eq!(out.status, Status::Pass);
        assert_eq!(out.manifest.summary_value("c_emp"), Some("0"));
        assert!(out.manifest.verify(&out.dir).unwrap().is_empty());
        let (_, same) = replot(&out.dir.join("manifest.txt")).unwrap();
        assert_eq!(same, Some(true));
        let pooled = pooled_fit(&[out.dir.join("manifest.txt")]).unwrap();
        assert_eq!(pooled.c_emp, 0.0);
        std::fs::remove_dir_all(&opts.root).unwrap();
    }

    #[test]
    fn repeated_runs_have_identical_digests() {
        let mut cfg = ExperimentConfig::default();
        cfg.model.size = 6;
        cfg.enclosure.samples = 3;
        cfg.enclosure.norms = vec![0.5, 2.0];
        let a = run(&cfg, &RunOptions { root: temp_root("det-a"), strict: false }).unwrap();
        let b = run(&cfg, &RunOptions { root: temp_root("det-b"), strict: false }).unwrap();
        assert_eq!(a.manifest.files, b.manifest.files);
        assert_eq!(a.manifest.summary, b.manifest.summary);
        for o in [a, b] {
            std::fs::remove_dir_all(o.dir.parent().unwrap()).unwrap();
        }
    }

    #[test]
    fn fixed_constant_too_small_is_a_violation() {
        let mut cfg = ExperimentConfig::default();
        cfg.model.size = 6;
        cfg.enclosure.samples = 1;
        cfg.potential.family = "constant".into();
        cfg.constant = ConstantSpec::Fixed(1e-6);
        let root = temp_root("viol");
        let out = run(&cfg, &RunOptions { root: root.clone(), strict: false }).unwrap();
        assert_eq!(out.status, Status::Violation);
        assert_eq!(out.status.exit_code(), 2);
        std::fs::remove_dir_all(root).unwrap();
    }
}
