use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::rational::{gcd, lcm, rational_approx};
use super::{Method, ZeroMeta, ZeroSet, RESIDUAL_BOUND};
use crate::ensemble::{Spectrum, SystemSpec, Target};
use crate::error::{Error, Result};

const SAMPLES_PER_EDGE: usize = 16;
const NEWTON_MAX_ITER: usize = 60;
const MERGE_TOL: f64 = 1e-8;
const MAX_SUBDIVISION: usize = 6;

/// Rectangle `[β_min, β_max] × [β₁_min, β₁_max]` of the β̃-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub beta: (f64, f64),
    pub beta1: (f64, f64),
}

impl Region {
    pub fn new(beta: (f64, f64), beta1: (f64, f64)) -> Result<Self> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        if !ok(beta) || !ok(beta1) {
            return Err(Error::Domain(format!(
                "empty or non-finite region β∈[{}, {}], β₁∈[{}, {}]",
                beta.0, beta.1, beta1.0, beta1.1
            )));
        }
        Ok(Self { beta, beta1 })
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        z.re >= self.beta.0 - tol
            && z.re <= self.beta.1 + tol
            && z.im >= self.beta1.0 - tol
            && z.im <= self.beta1.1 + tol
    }
}

/// Number of cells along β (`m`) and along β₁ (`k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub m: usize,
    pub k: usize,
}

/// Smallest `T > 0` with `f(β̃ + iT)` equal to `f(β̃)` up to a global phase,
/// i.e. `T·(E_i − E_j) ∈ 2πℤ` for all energies; `None` when incommensurate.
pub fn commensurate_period(energies: &[f64]) -> Option<f64> {
    let e0 = *energies.first()?;
    let diffs: Vec<f64> = energies
        .iter()
        .map(|e| e - e0)
        .filter(|d| *d != 0.0)
        .collect();
    let base = diffs
        .iter()
        .copied()
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))?;
    let mut den = 1u64;
    let mut ratios = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let r = d / base;
        let (p, qd) = rational_approx(r, 64, 1e-9 * r.abs().max(1.0))?;
        den = lcm(den, qd)?;
        if den > 1 << 20 {
            return None;
        }
        ratios.push((p, qd));
    }
    let g = ratios
        .iter()
        .map(|&(p, qd)| p.unsigned_abs() * (den / qd))
        .fold(0u64, gcd);
    let unit = base.abs() * g as f64 / den as f64;
    Some(2.0 * PI / unit)
}

/// One period in β₁ (or `[−10, 10]` when incommensurate), offset so grid lines
/// avoid the symmetric points, and a β window that keeps `|β·E| ≤ 600`.
pub fn default_region(spec: &SystemSpec, target: Target) -> Region {
    let spectrum = Spectrum::of(spec, target);
    let emax = spectrum
        .terms()
        .iter()
        .map(|t| t.0.abs())
        .fold(0.0, f64::max);
    let half = if emax > 0.0 {
        (600.0 / emax).min(1.0)
    } else {
        1.0
    };
    let beta1 = match commensurate_period(&spectrum.energies()) {
        Some(p) => (-0.0137 * p, 0.9863 * p),
        None => (-10.0, 10.0),
    };
    Region {
        beta: (-half, half),
        beta1,
    }
}

/// Roughly four cells per expected zero spacing along β₁.
pub fn default_grid(spec: &SystemSpec, target: Target, region: &Region) -> Grid {
    let energies = Spectrum::of(spec, target).energies();
    let spread = match (energies.first(), energies.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let height = region.beta1.1 - region.beta1.0;
    let expected = spread * height / (2.0 * PI);
    let k = libm::ceil(4.0 * expected).clamp(16.0, 4096.0) as usize;
    Grid { m: 16, k }
}

fn wrap(d: f64) -> f64 {
    let mut d = d % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

struct CellScreen {
    winding: i64,
    suspect: bool,
}

fn screen_cell(spectrum: &Spectrum, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<CellScreen> {
    let n = SAMPLES_PER_EDGE;
    let mut path = Vec::with_capacity(4 * n + 1);
    for i in 0..n {
        path.push(Complex64::new(x0 + (x1 - x0) * i as f64 / n as f64, y0));
    }
    for i in 0..n {
        path.push(Complex64::new(x1, y0 + (y1 - y0) * i as f64 / n as f64));
    }
    for i in 0..n {
        path.push(Complex64::new(x1 - (x1 - x0) * i as f64 / n as f64, y1));
    }
    for i in 0..n {
        path.push(Complex64::new(x0, y1 - (y1 - y0) * i as f64 / n as f64));
    }
    path.push(path[0]);
    let mut total = 0.0;
    let mut suspect = false;
    let mut prev: Option<f64> = None;
    for z in path {
        let f = spectrum.eval(z)?;
        if f.norm() <= 1e-14 * spectrum.max_term(z) {
            suspect = true;
        }
        let a = f.arg();
        if let Some(p) = prev {
            let d = wrap(a - p);
            if d.abs() > PI / 2.0 {
                suspect = true;
            }
            total += d;
        }
        prev = Some(a);
    }
    Ok(CellScreen {
        winding: libm::round(total / (2.0 * PI)) as i64,
        suspect,
    })
}

/// Newton on the exponential sum; `Some((zero, residual))` on convergence.
fn newton(
    spectrum: &Spectrum,
    start: Complex64,
    region: &Region,
    margin: f64,
) -> Option<(Complex64, f64)> {
    let mut z = start;
    for _ in 0..NEWTON_MAX_ITER {
        let (f, df) = spectrum.eval_with_derivative(z).ok()?;
        if f.norm() == 0.0 {
            break;
        }
        let step = f / df;
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        if !region.contains(z, margin) {
            return None;
        }
        if step.norm() <= 1e-14 * z.norm().max(1.0) {
            break;
        }
    }
    let f = spectrum.eval(z).ok()?;
    let scale = spectrum.max_term(z);
    let residual = if scale > 0.0 {
        f.norm() / scale
    } else {
        f.norm()
    };
    (residual <= RESIDUAL_BOUND).then_some((z, residual))
}

struct CellSearch<'a> {
    spectrum: &'a Spectrum,
    region: &'a Region,
    margin: f64,
    found: Vec<(Complex64, f64)>,
    meta: &'a mut ZeroMeta,
}

impl CellSearch<'_> {
    fn cell(&mut self, x0: f64, x1: f64, y0: f64, y1: f64, depth: usize) -> Result<()> {
        let screen = screen_cell(self.spectrum, x0, x1, y0, y1)?;
        if screen.winding == 0 && !screen.suspect {
            return Ok(());
        }
        if depth == 0 {
            self.meta.flagged_cells += 1;
        }
        let (dx, dy) = (x1 - x0, y1 - y0);
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let starts = [
            Complex64::new(cx, cy),
            Complex64::new(cx - 0.25 * dx, cy - 0.25 * dy),
            Complex64::new(cx + 0.25 * dx, cy - 0.25 * dy),
            Complex64::new(cx + 0.25 * dx, cy + 0.25 * dy),
            Complex64::new(cx - 0.25 * dx, cy + 0.25 * dy),
        ];
        let wanted = screen.winding.max(1) as usize;
        let mut inside: Vec<Complex64> = Vec::new();
        for start in starts {
            match newton(self.spectrum, start, self.region, self.margin) {
                Some((z, r)) => {
                    self.meta.iterations += 1;
                    let in_cell = z.re >= x0 - 1e-9
                        && z.re <= x1 + 1e-9
                        && z.im >= y0 - 1e-9
                        && z.im <= y1 + 1e-9;
                    if in_cell && !inside.iter().any(|w| (w - z).norm() <= MERGE_TOL) {
                        inside.push(z);
                    }
                    if self.region.contains(z, 1e-12) {
                        self.found.push((z, r));
                    }
                }
                None => self.meta.diverged_starts += 1,
            }
            if inside.len() >= wanted {
                return Ok(());
            }
        }
        if screen.winding == 0 {
            // Suspect cell with no enclosed zero: nothing further to resolve.
            return Ok(());
        }
        if depth >= MAX_SUBDIVISION {
            self.meta.unresolved_cells += 1;
            return Ok(());
        }
        for (a0, a1) in [(x0, cx), (cx, x1)] {
            for (b0, b1) in [(y0, cy), (cy, y1)] {
                self.cell(a0, a1, b0, b1, depth + 1)?;
            }
        }
        Ok(())
    }
}

/// Zeros of `Z(β̃)` or `Z_c(β̃)` inside `region`.
///
/// Each grid cell is screened by the argument winding of the target along its
/// boundary; cells with nonzero winding, or with a phase jump too large to
/// resolve, are refined by Newton iteration from the cell center and its
/// quarter points. A winding cell whose starts all converge elsewhere is split
/// 2×2 and searched again. Zeros within `1e-8` of each other are merged.
pub fn zeros_beta_plane(
    spec: &SystemSpec,
    target: Target,
    region: &Region,
    grid: Grid,
) -> Result<ZeroSet> {
    let region = Region::new(region.beta, region.beta1)?;
    if grid.m < 8 || grid.k < 8 {
        return Err(Error::Precondition(format!(
            "grid resolution must be at least 8×8, got {}×{}",
            grid.m, grid.k
        )));
    }
    let spectrum = Spectrum::of(spec, target);
    if spectrum.is_empty() {
        return Err(Error::IdenticallyZero(
            "correlation function identically zero".into(),
        ));
    }
    let dx = (region.beta.1 - region.beta.0) / grid.m as f64;
    let dy = (region.beta1.1 - region.beta1.0) / grid.k as f64;
    let margin = 0.5 * dx.min(dy);

    let mut meta = ZeroMeta {
        converged: true,
        branch_denominator: 1,
        grid: Some((region, grid)),
        period: commensurate_period(&spectrum.energies()),
        ..ZeroMeta::default()
    };

    let mut search = CellSearch {
        spectrum: &spectrum,
        region: &region,
        margin,
        found: Vec::new(),
        meta: &mut meta,
    };
    for j in 0..grid.k {
        let y0 = region.beta1.0 + dy * j as f64;
        for i in 0..grid.m {
            let x0 = region.beta.0 + dx * i as f64;
            search.cell(x0, x0 + dx, y0, y0 + dy, 0)?;
        }
    }
    let mut found = search.found;

    found.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(a.0.re.total_cmp(&b.0.re)));
    let mut merged: Vec<(Complex64, f64)> = Vec::new();
    for (z, r) in found {
        match merged
            .iter_mut()
            .find(|(w, _)| (*w - z).norm() <= MERGE_TOL)
        {
            Some(slot) => {
                if r < slot.1 {
                    *slot = (z, r);
                }
            }
            None => merged.push((z, r)),
        }
    }
    if meta.unresolved_cells > 0 {
        meta.converged = false;
    }
    Ok(ZeroSet {
        zeros: merged.iter().map(|m| m.0).collect(),
        residuals: merged.iter().map(|m| m.1).collect(),
        method: Method::GridNewton,
        meta,
    })
}
