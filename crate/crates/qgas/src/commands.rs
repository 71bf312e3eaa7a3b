use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qgas_core::analytic::{self, ZeroFamily};
use qgas_core::ensemble::{self, Spectrum};
use qgas_core::zerofinder::{
    self, build_z_polynomial, default_grid, default_region, is_conjugate_closed, zeros_beta_plane,
    Grid, Region, ZeroSet, RESIDUAL_BOUND,
};
use qgas_core::{ComplexTemperature, DeformationParam, SystemSpec, Target};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{BetaTarget, Format, RunConfig, ZeroKind};
use crate::error::{CliError, CliResult};
use crate::output::{count_or_num, num, to_json_bytes, write_atomic, write_table, Meta, Table};
use crate::suite::{self, SuiteOptions};
use crate::svg::{Marker, Scatter, Series};

/// Pairing tolerance for conjugate-closure of root sets.
pub const CONJUGATE_TOL: f64 = 1e-9;

/// Files written by a command plus a short human summary.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl Report {
    fn add(&mut self, mut other: Report) {
        self.files.append(&mut other.files);
        self.summary.append(&mut other.summary);
    }
}

fn write_svg(dir: &Path, stem: &str, plot: &Scatter) -> CliResult<PathBuf> {
    let path = dir.join(format!("{stem}.svg"));
    write_atomic(&path, plot.render().as_bytes())?;
    Ok(path)
}

// ---------------------------------------------------------------- zeros-poly

/// Roots of the selected z-plane polynomials, in a canonical order.
#[derive(Debug, Clone)]
pub struct PolyRun {
    pub spec: SystemSpec,
    pub sets: Vec<(ZeroKind, ZeroSet)>,
}

impl PolyRun {
    pub fn converged(&self) -> bool {
        self.sets.iter().all(|(_, s)| s.meta.converged)
    }

    pub fn set(&self, kind: ZeroKind) -> Option<&ZeroSet> {
        self.sets.iter().find(|(k, _)| *k == kind).map(|(_, s)| s)
    }
}

fn two_level_ratio(spec: &SystemSpec) -> CliResult<f64> {
    match spec.eps() {
        [e1, e2] if *e1 != 0.0 => Ok(e2 / e1),
        [_, _] => Err(CliError::Config(
            "the z-plane variable e^{-β̃ε₁} needs ε₁ ≠ 0".into(),
        )),
        eps => Err(CliError::Config(format!(
            "z-plane polynomials need a two-level system, got {} levels",
            eps.len()
        ))),
    }
}

fn sort_by_angle(set: &mut ZeroSet) {
    let mut pairs: Vec<(Complex64, f64)> = set
        .zeros
        .iter()
        .copied()
        .zip(set.residuals.iter().copied())
        .collect();
    pairs.sort_by(|a, b| {
        a.0.arg()
            .total_cmp(&b.0.arg())
            .then(a.0.norm().total_cmp(&b.0.norm()))
    });
    set.zeros = pairs.iter().map(|p| p.0).collect();
    set.residuals = pairs.iter().map(|p| p.1).collect();
}

pub fn solve_poly(spec: &SystemSpec, kinds: &[ZeroKind]) -> CliResult<PolyRun> {
    let ratio = two_level_ratio(spec)?;
    let polys = kinds
        .iter()
        .map(|&k| {
            Ok((
                k,
                build_z_polynomial(
                    spec.particles(),
                    spec.q(),
                    ratio,
                    k == ZeroKind::Correlation,
                )?,
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let sets = polys
        .par_iter()
        .map(|(k, p)| {
            let mut set = zerofinder::find_roots_z_plane(p)?;
            sort_by_angle(&mut set);
            Ok((*k, set))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(PolyRun {
        spec: spec.clone(),
        sets,
    })
}

pub fn poly_title(q: f64, particles: usize) -> String {
    format!("z-plane zeros, q = {q}, N = {particles}")
}

fn kind_marker(kind: ZeroKind) -> Marker {
    match kind {
        ZeroKind::Fisher => Marker::Circle,
        ZeroKind::Correlation => Marker::Cross,
    }
}

/// Scatter of z-plane zeros; `plot` rebuilds the same picture from the CSV.
pub fn poly_plot(title: String, points: &[(ZeroKind, Vec<(f64, f64)>)]) -> Scatter {
    Scatter {
        title,
        x_label: "Re z".into(),
        y_label: "Im z".into(),
        series: points
            .iter()
            .map(|(k, pts)| Series {
                name: k.as_str().into(),
                marker: kind_marker(*k),
                points: pts.clone(),
            })
            .collect(),
        unit_circle: true,
    }
}

pub fn poly_table(run: &PolyRun) -> Table {
    let mut t = Table::new(&["re", "im", "abs", "residual", "kind"]);
    for (kind, set) in &run.sets {
        for (z, r) in set.zeros.iter().zip(&set.residuals) {
            t.push(vec![
                z.re.into(),
                z.im.into(),
                z.norm().into(),
                (*r).into(),
                kind.as_str().into(),
            ]);
        }
    }
    t
}

pub fn poly_meta(run: &PolyRun) -> Meta {
    let mut meta = Meta::new(&run.spec, "aberth-ehrlich");
    let mut deviation = Map::new();
    let mut multiplicity = Map::new();
    let mut conj = Map::new();
    let mut iterations = Map::new();
    let mut branch = Map::new();
    let mut notes = Vec::new();
    for (kind, set) in &run.sets {
        let k = kind.as_str();
        meta.count(k, set.len());
        let (max, mean) = set.unit_circle_deviation();
        deviation.insert(k.into(), json!({ "max": num(max), "mean": num(mean) }));
        let m = set.meta.zero_root_multiplicity;
        multiplicity.insert(k.into(), count_or_num(m));
        if m > 0.0 {
            meta.count(&format!("{k}_zero_root"), count_or_num(m));
            notes.push(format!(
                "z = 0 is a root of multiplicity {m} of the {k} polynomial; it is not listed"
            ));
        }
        conj.insert(
            k.into(),
            is_conjugate_closed(&set.zeros, CONJUGATE_TOL).into(),
        );
        iterations.insert(k.into(), set.meta.iterations.into());
        branch.insert(k.into(), set.meta.branch_denominator.into());
        if !set.meta.converged {
            meta.warnings.push(format!(
                "{k}: {} roots above the residual bound after {} iterations",
                set.residuals
                    .iter()
                    .filter(|&&r| r > RESIDUAL_BOUND)
                    .count(),
                set.meta.iterations
            ));
        }
    }
    meta.set(
        "status",
        if run.converged() {
            "ok"
        } else {
            "convergence_failure"
        },
    );
    meta.set("residual_bound", num(RESIDUAL_BOUND));
    meta.set("unit_circle_deviation", Value::Object(deviation));
    meta.set("zero_root_multiplicity", Value::Object(multiplicity));
    meta.set("conjugate_closed", Value::Object(conj));
    meta.set("iterations", Value::Object(iterations));
    meta.set("branch_denominator", Value::Object(branch));
    meta.set("notes", notes);
    meta
}

fn emit_poly(
    run: &PolyRun,
    dir: &Path,
    stem: &str,
    format: Format,
    svg: bool,
) -> CliResult<Report> {
    let mut report = Report {
        files: write_table(dir, stem, format, &poly_table(run), &poly_meta(run))?,
        summary: Vec::new(),
    };
    if svg {
        let points: Vec<(ZeroKind, Vec<(f64, f64)>)> = run
            .sets
            .iter()
            .map(|(k, s)| (*k, s.zeros.iter().map(|z| (z.re, z.im)).collect()))
            .collect();
        let plot = poly_plot(
            poly_title(run.spec.q().get(), run.spec.particles()),
            &points,
        );
        report.files.push(write_svg(dir, stem, &plot)?);
    }
    for (k, s) in &run.sets {
        let (max, mean) = s.unit_circle_deviation();
        report.summary.push(format!(
            "{stem}: {} {} zeros, worst residual {:.3e}, ||z|-1| max {:.3e} mean {:.3e}",
            s.len(),
            k.as_str(),
            s.worst_residual(),
            max,
            mean
        ));
    }
    Ok(report)
}

fn convergence_check(run: &PolyRun, report: Report) -> CliResult<Report> {
    if run.converged() {
        return Ok(report);
    }
    let worst = run
        .sets
        .iter()
        .map(|(_, s)| s.worst_residual())
        .fold(0.0, f64::max);
    Err(CliError::Convergence(format!(
        "worst residual {worst:.3e} exceeds {RESIDUAL_BOUND:e}; partial results written with status \"convergence_failure\""
    )))
}

pub fn zeros_poly(cfg: &RunConfig) -> CliResult<Report> {
    let spec = cfg.system.spec()?;
    if cfg.zeros_poly.kinds.is_empty() {
        return Err(CliError::Config(
            "[zeros_poly] kinds must not be empty".into(),
        ));
    }
    let run = solve_poly(&spec, &cfg.zeros_poly.kinds)?;
    let report = emit_poly(
        &run,
        &cfg.output.dir,
        "zeros_poly",
        cfg.output.format,
        cfg.output.svg,
    )?;
    convergence_check(&run, report)
}

pub fn figure1(cfg: &RunConfig) -> CliResult<Report> {
    let q = DeformationParam::new(2.0)?;
    let kinds = [ZeroKind::Fisher, ZeroKind::Correlation];
    let mut report = Report::default();
    let mut failure = None;
    for (n, panel) in [(5, "a"), (7, "b")] {
        let spec = SystemSpec::two_level(1.0, 0.0, n, q)?;
        let run = solve_poly(&spec, &kinds)?;
        let part = emit_poly(
            &run,
            &cfg.output.dir,
            &format!("figure1_{panel}"),
            cfg.output.format,
            true,
        )?;
        match convergence_check(&run, part) {
            Ok(part) => report.add(part),
            Err(e) => failure = Some(e),
        }
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

// ---------------------------------------------------------------- zeros-beta

/// Split the β₁ range into strips of whole grid rows, search them in
/// parallel, and merge zeros found twice on a shared edge. The strip layout
/// depends only on the grid, so the output does not depend on the pool size.
pub fn search_beta_plane(
    spec: &SystemSpec,
    target: Target,
    region: &Region,
    grid: Grid,
) -> CliResult<ZeroSet> {
    let strips = (grid.k / 8).clamp(1, 16);
    let dy = (region.beta1.1 - region.beta1.0) / grid.k as f64;
    let bounds: Vec<(usize, usize)> = (0..strips)
        .map(|s| (s * grid.k / strips, (s + 1) * grid.k / strips))
        .collect();
    let parts = bounds
        .par_iter()
        .map(|&(j0, j1)| {
            let lo = region.beta1.0 + dy * j0 as f64;
            let hi = if j1 == grid.k {
                region.beta1.1
            } else {
                region.beta1.0 + dy * j1 as f64
            };
            let strip = Region::new(region.beta, (lo, hi))?;
            Ok(zeros_beta_plane(
                spec,
                target,
                &strip,
                Grid {
                    m: grid.m,
                    k: j1 - j0,
                },
            )?)
        })
        .collect::<CliResult<Vec<ZeroSet>>>()?;

    let mut iter = parts.into_iter();
    let mut total = iter.next().expect("at least one strip");
    for part in iter {
        for (z, r) in part.zeros.into_iter().zip(part.residuals) {
            match total.zeros.iter().position(|w| (*w - z).norm() <= 1e-8) {
                Some(i) => {
                    if r < total.residuals[i] {
                        total.zeros[i] = z;
                        total.residuals[i] = r;
                    }
                }
                None => {
                    total.zeros.push(z);
                    total.residuals.push(r);
                }
            }
        }
        total.meta.flagged_cells += part.meta.flagged_cells;
        total.meta.unresolved_cells += part.meta.unresolved_cells;
        total.meta.diverged_starts += part.meta.diverged_starts;
        total.meta.iterations += part.meta.iterations;
        total.meta.converged &= part.meta.converged;
    }
    total.meta.grid = Some((*region, grid));
    Ok(total)
}

fn family_for(spec: &SystemSpec, target: Target) -> Option<ZeroFamily> {
    let [e1, e2] = spec.eps() else { return None };
    let eps = (*e1, *e2);
    match (target, spec.particles()) {
        (Target::Partition, 1) => analytic::zeros_partition_n1(eps, analytic::DEFAULT_N_RANGE).ok(),
        (Target::Correlation, 3) => {
            analytic::zeros_correlation_n3(eps, spec.q(), analytic::DEFAULT_N_RANGE).ok()
        }
        _ => None,
    }
}

pub fn beta_title(target: BetaTarget, q: f64, particles: usize) -> String {
    format!(
        "complex-temperature zeros of the {} function, q = {q}, N = {particles}",
        target.as_str()
    )
}

pub fn beta_plot(title: String, target: BetaTarget, points: Vec<(f64, f64)>) -> Scatter {
    Scatter {
        title,
        x_label: "β".into(),
        y_label: "β₁".into(),
        series: vec![Series {
            name: target.as_str().into(),
            marker: match target {
                BetaTarget::Partition => Marker::Circle,
                BetaTarget::Correlation => Marker::Cross,
            },
            points,
        }],
        unit_circle: false,
    }
}

pub fn zeros_beta(cfg: &RunConfig) -> CliResult<Report> {
    let spec = cfg.system.spec()?;
    let zb = &cfg.zeros_beta;
    let target = zb.target.target();
    let dir = &cfg.output.dir;
    let mut table = Table::new(&["beta", "beta1", "residual"]);
    let mut meta = Meta::new(&spec, "grid-newton");
    meta.set("target", zb.target.as_str());

    if Spectrum::of(&spec, target).is_empty() {
        return Err(CliError::Config(
            "correlation function identically zero".into(),
        ));
    }
    if spec.q().is_undeformed() {
        // β̃ = β is real, and a sum of positive Boltzmann weights has no real zeros.
        meta.count("zeros", 0);
        meta.set("status", "ok");
        meta.set("notes", vec!["no zeros at q=1"]);
        let mut report = Report {
            files: write_table(dir, "zeros_beta", cfg.output.format, &table, &meta)?,
            summary: vec!["zeros_beta: no zeros at q=1".into()],
        };
        if cfg.output.svg {
            let plot = beta_plot(
                beta_title(zb.target, spec.q().get(), spec.particles()),
                zb.target,
                Vec::new(),
            );
            report.files.push(write_svg(dir, "zeros_beta", &plot)?);
        }
        return Ok(report);
    }

    let default = default_region(&spec, target);
    let region = Region::new(
        zb.beta.map_or(default.beta, |b| (b[0], b[1])),
        zb.beta1.map_or(default.beta1, |b| (b[0], b[1])),
    )?;
    let grid = match zb.grid {
        Some([m, k]) => Grid { m, k },
        None => default_grid(&spec, target, &region),
    };
    let mut set = search_beta_plane(&spec, target, &region, grid)?;
    let mut pairs: Vec<(Complex64, f64)> = set
        .zeros
        .iter()
        .copied()
        .zip(set.residuals.iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    set.zeros = pairs.iter().map(|p| p.0).collect();
    set.residuals = pairs.iter().map(|p| p.1).collect();

    for (z, r) in &pairs {
        table.push(vec![z.re.into(), z.im.into(), (*r).into()]);
    }
    meta.count("zeros", set.len());
    meta.set(
        "status",
        if set.meta.converged {
            "ok"
        } else {
            "convergence_failure"
        },
    );
    meta.set(
        "region",
        json!({ "beta": [num(region.beta.0), num(region.beta.1)], "beta1": [num(region.beta1.0), num(region.beta1.1)] }),
    );
    meta.set("grid", json!({ "m": grid.m, "k": grid.k }));
    meta.set("period", set.meta.period.map_or(Value::Null, num));
    meta.set("flagged_cells", set.meta.flagged_cells);
    meta.set("unresolved_cells", set.meta.unresolved_cells);
    meta.set("diverged_starts", set.meta.diverged_starts);
    meta.set("residual_bound", num(RESIDUAL_BOUND));
    if let Some(family) = family_for(&spec, target) {
        let matched = set
            .zeros
            .iter()
            .filter(|z| family.contains(&ComplexTemperature::from_complex(**z), 1e-8))
            .count();
        meta.set(
            "analytic_family",
            json!({ "beta": num(family.beta), "spacing": num(family.spacing), "matched": matched, "rows": set.len() }),
        );
        if matched != set.len() {
            meta.warnings.push(format!(
                "{} zeros off the closed-form family",
                set.len() - matched
            ));
        }
    }
    if set.meta.unresolved_cells > 0 {
        meta.warnings.push(format!(
            "{} cells with winding but no converged zero",
            set.meta.unresolved_cells
        ));
    }

    let mut report = Report {
        files: write_table(dir, "zeros_beta", cfg.output.format, &table, &meta)?,
        summary: vec![format!(
            "zeros_beta: {} zeros of the {} function in β∈[{}, {}], β₁∈[{}, {}]",
            set.len(),
            zb.target.as_str(),
            region.beta.0,
            region.beta.1,
            region.beta1.0,
            region.beta1.1
        )],
    };
    if cfg.output.svg {
        let pts = set.zeros.iter().map(|z| (z.re, z.im)).collect();
        let plot = beta_plot(
            beta_title(zb.target, spec.q().get(), spec.particles()),
            zb.target,
            pts,
        );
        report.files.push(write_svg(dir, "zeros_beta", &plot)?);
    }
    if !set.meta.converged {
        return Err(CliError::Convergence(format!(
            "{} unresolved cells; partial results written with status \"convergence_failure\"",
            set.meta.unresolved_cells
        )));
    }
    Ok(report)
}

// ---------------------------------------------------------------- correlator

/// Minimize `f` on `[a, b]` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if fc <= fd {
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
    if fc <= fd {
        c
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCandidate {
    pub tau: f64,
    pub abs: f64,
    pub relative: f64,
}

/// Local minima of `|C|` on the grid, refined and kept when below
/// `threshold·|C(0)|`.
pub fn zero_candidates(
    spec: &SystemSpec,
    beta: f64,
    taus: &[f64],
    abs: &[f64],
    c0: f64,
    threshold: f64,
) -> CliResult<Vec<ZeroCandidate>> {
    let modulus = |t: f64| {
        ensemble::correlator(spec, beta, t, 0.0)
            .map(|c| c.value.norm())
            .unwrap_or(f64::INFINITY)
    };
    let mut out: Vec<ZeroCandidate> = Vec::new();
    if c0 == 0.0 {
        return Ok(out);
    }
    for i in 1..taus.len().saturating_sub(1) {
        if !(abs[i] < abs[i - 1] && abs[i] <= abs[i + 1]) {
            continue;
        }
        let tau = golden_min(modulus, taus[i - 1], taus[i + 1]);
        let a = modulus(tau);
        if a <= threshold * c0
            && !out
                .iter()
                .any(|c| (c.tau - tau).abs() <= 1e-9 * tau.abs().max(1.0))
        {
            out.push(ZeroCandidate {
                tau,
                abs: a,
                relative: a / c0,
            });
        }
    }
    Ok(out)
}

pub fn correlator(cfg: &RunConfig) -> CliResult<Report> {
    let spec = cfg.system.spec()?;
    let cs = &cfg.correlator;
    if cs.points < 2
        || !(cs.tau_start.is_finite() && cs.tau_stop.is_finite())
        || cs.tau_start == cs.tau_stop
    {
        return Err(CliError::Config(
            "[correlator] needs points >= 2 and a finite, non-empty τ range".into(),
        ));
    }
    if cs.zero_threshold.is_nan() || cs.zero_threshold <= 0.0 {
        return Err(CliError::Config(
            "[correlator] zero_threshold must be positive".into(),
        ));
    }
    let step = (cs.tau_stop - cs.tau_start) / (cs.points - 1) as f64;
    let taus: Vec<f64> = (0..cs.points)
        .map(|i| cs.tau_start + step * i as f64)
        .collect();
    let values = taus
        .par_iter()
        .map(|&t| Ok(ensemble::correlator(&spec, cs.beta, t, 0.0)?.value))
        .collect::<CliResult<Vec<Complex64>>>()?;
    let abs: Vec<f64> = values.iter().map(|c| c.norm()).collect();
    let c0 = ensemble::correlator(&spec, cs.beta, 0.0, 0.0)?.value.norm();

    let mut table = Table::new(&["tau", "re", "im", "abs"]);
    for (t, c) in taus.iter().zip(&values) {
        table.push(vec![(*t).into(), c.re.into(), c.im.into(), c.norm().into()]);
    }

    let candidates = zero_candidates(&spec, cs.beta, &taus, &abs, c0, cs.zero_threshold)?;
    let mut meta = Meta::new(&spec, "composition-sum");
    meta.count("points", taus.len());
    meta.count("zero_candidates", candidates.len());
    meta.set("beta", num(cs.beta));
    meta.set("c0", num(c0));
    meta.set("zero_threshold", num(cs.zero_threshold));

    let analytic_times = match spec.eps() {
        [e1, e2] if spec.particles() == 3 && !spec.q().is_undeformed() && e1 != e2 => {
            let rate = (spec.q().get() - 1.0) * (e2 - e1);
            let period = 2.0 * PI * spec.hbar() / rate.abs();
            let lo = (cs.tau_start.min(cs.tau_stop) / period).floor() as i64 - 1;
            let hi = (cs.tau_start.max(cs.tau_stop) / period).ceil() as i64 + 1;
            analytic::zero_times_n3((*e1, *e2), spec.q(), spec.hbar(), lo..=hi).ok()
        }
        _ => None,
    };
    let cands: Vec<Value> = candidates
        .iter()
        .map(|c| {
            let mut v =
                json!({ "tau": num(c.tau), "abs": num(c.abs), "relative": num(c.relative) });
            if let Some(times) = &analytic_times {
                if let Some(t) = times
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - c.tau).abs().total_cmp(&(b - c.tau).abs()))
                {
                    v["closed_form_tau"] = num(t);
                    v["deviation"] = num((t - c.tau).abs());
                }
            }
            v
        })
        .collect();
    meta.set("zero_candidates", cands);

    let mut notes = Vec::new();
    if c0 == 0.0 {
        meta.warnings
            .push("correlation function identically zero".into());
    }
    if spec.q().is_undeformed() {
        let (lo, hi) = abs
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &a| (l.min(a), h.max(a)));
        notes.push("at q=1 the time dependence is a pure phase: |C| is τ-independent".to_string());
        meta.set(
            "modulus_spread",
            num(if c0 > 0.0 { (hi - lo) / c0 } else { 0.0 }),
        );
    }
    if cs.beta > 0.0 && analytic_times.is_some() {
        notes.push("the three-particle zero times are exact zeros only at beta = 0".to_string());
    }
    meta.set("notes", notes);

    let dir = &cfg.output.dir;
    let mut report = Report {
        files: write_table(dir, "correlator", cfg.output.format, &table, &meta)?,
        summary: vec![format!(
            "correlator: {} points, |C(0)| = {c0:.6e}, {} zero candidates",
            taus.len(),
            candidates.len()
        )],
    };
    if cfg.output.svg {
        let plot = Scatter {
            title: format!(
                "|C(τ)|, q = {}, N = {}, β = {}",
                spec.q().get(),
                spec.particles(),
                cs.beta
            ),
            x_label: "τ".into(),
            y_label: "|C|".into(),
            series: vec![
                Series {
                    name: "|C|".into(),
                    marker: Marker::Circle,
                    points: taus.iter().copied().zip(abs.iter().copied()).collect(),
                },
                Series {
                    name: "zero candidates".into(),
                    marker: Marker::Cross,
                    points: candidates.iter().map(|c| (c.tau, c.abs)).collect(),
                },
            ],
            unit_circle: false,
        };
        report.files.push(write_svg(dir, "correlator", &plot)?);
    }
    Ok(report)
}

// ---------------------------------------------------------------- oracle-check

pub fn oracle_check(cfg: &RunConfig) -> CliResult<Report> {
    let spec = cfg.system.spec()?;
    let opts = SuiteOptions {
        seed: cfg.output.seed,
        samples: cfg.oracle.samples.max(1),
        corrupt_q: cfg.oracle.corrupt_q,
    };
    let checks = suite::run(opts)?;
    let passed = checks.iter().filter(|c| c.passed).count();
    let mut meta = Meta::new(&spec, "oracle-suite");
    meta.count("checks", checks.len());
    meta.count("passed", passed);
    meta.count("failed", checks.len() - passed);
    meta.set("seed", opts.seed);
    meta.set(
        "checks",
        checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    );
    if opts.corrupt_q {
        meta.warnings
            .push("test mode: q perturbed on the matrix side of brute_vs_ensemble".into());
    }
    let path = cfg.output.dir.join("oracle_check.json");
    write_atomic(&path, &to_json_bytes(&meta.to_json())?)?;
    let summary = checks
        .iter()
        .map(|c| {
            format!(
                "{:<20} {} worst {:.3e} bound {:.0e} ({} samples)",
                c.name,
                if c.passed { "ok  " } else { "FAIL" },
                c.worst,
                c.bound,
                c.samples
            )
        })
        .collect();
    suite::check_failures(&checks)?;
    Ok(Report {
        files: vec![path],
        summary,
    })
}

// ---------------------------------------------------------------- plot

fn sibling_meta(input: &Path) -> Option<Value> {
    let stem = input.file_stem()?.to_str()?;
    let path = input.with_file_name(format!("{stem}.meta.json"));
    serde_json::from_slice(&fs::read(path).ok()?).ok()
}

fn meta_system(meta: &Option<Value>) -> (f64, usize) {
    let q = meta
        .as_ref()
        .and_then(|m| m["system"]["q"].as_f64())
        .unwrap_or(f64::NAN);
    let n = meta
        .as_ref()
        .and_then(|m| m["system"]["particles"].as_u64())
        .unwrap_or(0) as usize;
    (q, n)
}

/// Rebuild the SVG for a `zeros_poly`/`figure1` or `zeros_beta` CSV.
pub fn plot(input: &Path, output: Option<&Path>) -> CliResult<Report> {
    let mut rdr = csv::Reader::from_path(input)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| CliError::Config(e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let meta = sibling_meta(input);
    let (q, n) = meta_system(&meta);
    let field = |rec: &csv::StringRecord, i: usize| -> CliResult<f64> {
        rec.get(i)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| CliError::Config(format!("bad number in {}", input.display())))
    };

    let plot = if let (Some(re), Some(im), Some(kind)) = (col("re"), col("im"), col("kind")) {
        let mut series: Vec<(ZeroKind, Vec<(f64, f64)>)> = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Config(e.to_string()))?;
            let k = rec
                .get(kind)
                .and_then(ZeroKind::parse)
                .ok_or_else(|| CliError::Config(format!("unknown kind in {}", input.display())))?;
            let p = (field(&rec, re)?, field(&rec, im)?);
            match series.iter_mut().find(|(sk, _)| *sk == k) {
                Some((_, pts)) => pts.push(p),
                None => series.push((k, vec![p])),
            }
        }
        poly_plot(poly_title(q, n), &series)
    } else if let (Some(b), Some(b1)) = (col("beta"), col("beta1")) {
        let target = match meta.as_ref().and_then(|m| m["target"].as_str()) {
            Some("correlation") => BetaTarget::Correlation,
            _ => BetaTarget::Partition,
        };
        let mut pts = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::Config(e.to_string()))?;
            pts.push((field(&rec, b)?, field(&rec, b1)?));
        }
        beta_plot(beta_title(target, q, n), target, pts)
    } else {
        return Err(CliError::Config(format!(
            "{} has neither re/im/kind nor beta/beta1 columns",
            input.display()
        )));
    };
    let out = output.map_or_else(|| input.with_extension("svg"), Path::to_path_buf);
    write_atomic(&out, plot.render().as_bytes())?;
    Ok(Report {
        summary: vec![format!("plot: wrote {}", out.display())],
        files: vec![out],
    })
}
