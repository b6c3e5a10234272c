//! Coarse-to-fine minimum search over the DOA and polarization planes.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::MusicError;

/// Search domain and resolution, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub coarse_step: f64,
    pub final_step: f64,
    /// Step shrink factor between refinement levels.
    pub refine_factor: f64,
    pub pol_coarse_step: f64,
    pub pol_final_step: f64,
}

impl Default for GridSpec {
    /// θ over [0°, 180°), φ over [0.5°, 90°); 1° coarse scan refined to
    /// 0.1°; polarization refined from 1° to 0.03°.
    fn default() -> Self {
        Self {
            theta_min: 0.0,
            theta_max: PI,
            phi_min: 0.5f64.to_radians(),
            phi_max: FRAC_PI_2,
            coarse_step: 1f64.to_radians(),
            final_step: 0.1f64.to_radians(),
            refine_factor: 10.0,
            pol_coarse_step: 1f64.to_radians(),
            pol_final_step: 0.03f64.to_radians(),
        }
    }
}

impl GridSpec {
    pub fn with_final_step_deg(mut self, step: f64) -> Self {
        self.final_step = step.to_radians();
        self
    }

    pub fn validate(&self) -> Result<(), MusicError> {
        let pos = |x: f64| x.is_finite() && x > 0.0;
        if !(self.theta_min < self.theta_max && self.phi_min < self.phi_max) {
            return Err(MusicError::Grid("empty search domain"));
        }
        if !(pos(self.coarse_step) && pos(self.final_step) && self.final_step <= self.coarse_step) {
            return Err(MusicError::Grid("steps must satisfy 0 < final <= coarse"));
        }
        if !(pos(self.pol_coarse_step) && pos(self.pol_final_step) && self.pol_final_step <= self.pol_coarse_step) {
            return Err(MusicError::Grid("polarization steps must satisfy 0 < final <= coarse"));
        }
        if !(self.refine_factor.is_finite() && self.refine_factor > 1.0) {
            return Err(MusicError::Grid("refine factor must exceed 1"));
        }
        Ok(())
    }

    /// Steps of the successive refinement levels, ending at `final_step`.
    pub fn refinement_steps(&self) -> Vec<f64> {
        steps(self.coarse_step, self.final_step, self.refine_factor)
    }

    fn pol_steps(&self) -> Vec<f64> {
        steps(self.pol_coarse_step, self.pol_final_step, self.refine_factor)
    }

    /// Number of coarse points along θ and φ.
    pub fn coarse_shape(&self) -> (usize, usize) {
        (
            axis_len(self.theta_min, self.theta_max, self.coarse_step),
            axis_len(self.phi_min, self.phi_max, self.coarse_step),
        )
    }
}

fn steps(coarse: f64, last: f64, factor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut s = coarse;
    while s > last * (1.0 + 1e-9) {
        s = (s / factor).max(last);
        if s < last * (1.0 + 1e-9) {
            s = last;
        }
        out.push(s);
    }
    out
}

fn axis_len(lo: f64, hi: f64, step: f64) -> usize {
    let n = ((hi - lo) / step - 1e-9).ceil();
    (n.max(1.0)) as usize
}

/// A local minimum of a DOA spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

/// Extra coarse candidates refined beyond the requested count.
const SPARE_CANDIDATES: usize = 4;
/// Re-centering moves allowed when a window minimum sits on its border.
const MAX_WALKS: usize = 8;
/// Two minima are distinct only if the spectrum between them rises this
/// fraction above the higher of the two.
const BARRIER_CONTRAST: f64 = 0.25;
const BARRIER_SAMPLES: usize = 16;

/// True when the straight path between `p` and `q` crosses a ridge.
fn separated<E: Fn(f64, f64) -> f64>(eval: &E, p: &Peak, q: &Peak) -> bool {
    let top = p.value.max(q.value);
    let floor = top.abs().max(f64::MIN_POSITIVE);
    (1..BARRIER_SAMPLES).any(|k| {
        let s = k as f64 / BARRIER_SAMPLES as f64;
        let v = eval(p.theta + s * (q.theta - p.theta), p.phi + s * (q.phi - p.phi));
        v > top + BARRIER_CONTRAST * floor
    })
}

/// Finds the `count` deepest local minima of `f` over the grid domain.
///
/// `f` returning `None` marks a point as unusable. Minima closer than two
/// final steps are merged. Fewer than `count` minima yields
/// [`MusicError::PeakShortfall`] carrying what was found.
pub fn grid_search_peaks<F>(f: F, grid: &GridSpec, count: usize) -> Result<Vec<Peak>, MusicError>
where
    F: Fn(f64, f64) -> Option<f64>,
{
    grid.validate()?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let eval = |t: f64, p: f64| f(t, p).filter(|v| v.is_finite()).unwrap_or(f64::INFINITY);
    let (nt, np) = grid.coarse_shape();
    let theta_at = |i: usize| grid.theta_min + i as f64 * grid.coarse_step;
    let phi_at = |j: usize| grid.phi_min + j as f64 * grid.coarse_step;
    let mut vals = vec![f64::INFINITY; nt * np];
    for i in 0..nt {
        for j in 0..np {
            vals[i * np + j] = eval(theta_at(i), phi_at(j));
        }
    }

    let mut minima = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let v = vals[i * np + j];
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nt as i64 || jj >= np as i64 {
                        continue;
                    }
                    let w = vals[ii as usize * np + jj as usize];
                    // Plateaus keep their first point only.
                    if w < v || (w == v && (di, dj) < (0, 0)) {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                minima.push(Peak {
                    theta: theta_at(i),
                    phi: phi_at(j),
                    value: v,
                });
            }
        }
    }
    minima.sort_by(|a, b| a.value.total_cmp(&b.value));
    minima.truncate(2 * count + SPARE_CANDIDATES);

    let mut refined = Vec::new();
    for c in &minima {
        refined.extend(refine(&eval, grid, *c));
    }
    refined.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.theta.total_cmp(&b.theta)));
    let mut peaks: Vec<Peak> = Vec::new();
    let sep = 2.0 * grid.final_step * (1.0 - 1e-9);
    for p in refined {
        let distinct = |q: &Peak| {
            let d = (q.theta - p.theta).hypot(q.phi - p.phi);
            d >= sep && (d >= 2.0 * grid.coarse_step || separated(&eval, q, &p))
        };
        if peaks.iter().all(distinct) {
            peaks.push(p);
        }
    }
    if peaks.len() < count {
        return Err(MusicError::PeakShortfall {
            wanted: count,
            found: peaks,
        });
    }
    peaks.truncate(count);
    Ok(peaks)
}

struct Window {
    best: Peak,
    on_border: bool,
    /// Window-interior local minima, deepest first.
    interior: Vec<Peak>,
}

fn scan_window<E: Fn(f64, f64) -> f64>(eval: &E, grid: &GridSpec, center: Peak, half: f64, step: f64) -> Window {
    let k = (half / step - 1e-9).ceil().max(1.0) as i64;
    let side = (2 * k + 1) as usize;
    let mut vals = vec![f64::INFINITY; side * side];
    let inside = |t: f64, p: f64| t >= grid.theta_min && t < grid.theta_max && p >= grid.phi_min && p < grid.phi_max;
    let mut best = center;
    let mut best_idx = (k, k);
    for a in -k..=k {
        for b in -k..=k {
            let (t, p) = (center.theta + a as f64 * step, center.phi + b as f64 * step);
            if !inside(t, p) {
                continue;
            }
            let v = if a == 0 && b == 0 { center.value } else { eval(t, p) };
            vals[((a + k) as usize) * side + (b + k) as usize] = v;
            if v < best.value {
                best = Peak { theta: t, phi: p, value: v };
                best_idx = (a, b);
            }
        }
    }
    let (ba, bb) = best_idx;
    let on_border = (ba.abs() == k && inside(best.theta + ba.signum() as f64 * step, best.phi))
        || (bb.abs() == k && inside(best.theta, best.phi + bb.signum() as f64 * step));

    let mut interior = Vec::new();
    for a in 1..side - 1 {
        for b in 1..side - 1 {
            let v = vals[a * side + b];
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            for da in [-1i64, 0, 1] {
                for db in [-1i64, 0, 1] {
                    if da == 0 && db == 0 {
                        continue;
                    }
                    let w = vals[(a as i64 + da) as usize * side + (b as i64 + db) as usize];
                    if w < v || (w == v && (da, db) < (0, 0)) {
                        is_min = false;
                    }
                }
            }
            if is_min {
                interior.push(Peak {
                    theta: center.theta + (a as i64 - k) as f64 * step,
                    phi: center.phi + (b as i64 - k) as f64 * step,
                    value: v,
                });
            }
        }
    }
    interior.sort_by(|x, y| x.value.total_cmp(&y.value));
    Window {
        best,
        on_border,
        interior,
    }
}

/// Refines one coarse minimum. At the first level a window holding two
/// separate minima splits into two candidates, which resolves sources closer
/// than one coarse cell.
fn refine<E: Fn(f64, f64) -> f64>(eval: &E, grid: &GridSpec, start: Peak) -> Vec<Peak> {
    let mut frontier = vec![start];
    let mut prev = grid.coarse_step;
    for (level, step) in grid.refinement_steps().into_iter().enumerate() {
        let mut next = Vec::new();
        for c in frontier {
            let mut center = c;
            let mut win = scan_window(eval, grid, center, prev, step);
            let mut walks = 0;
            while win.on_border && walks < MAX_WALKS {
                center = win.best;
                win = scan_window(eval, grid, center, prev, step);
                walks += 1;
            }
            if level == 0 && win.interior.len() >= 2 && separated(eval, &win.interior[0], &win.interior[1]) {
                next.extend(win.interior.into_iter().take(2));
            } else {
                next.push(win.best);
            }
        }
        frontier = next;
        prev = step;
    }
    frontier
}

/// Minimizes `f(γ, η)` over γ ∈ [0, π/2), η ∈ [0, 2π), with η periodic.
/// Returns `(γ, η, value)`.
pub fn search_polarization<F>(f: F, grid: &GridSpec) -> Result<(f64, f64, f64), MusicError>
where
    F: Fn(f64, f64) -> f64,
{
    grid.validate()?;
    let c = grid.pol_coarse_step;
    let ng = axis_len(0.0, FRAC_PI_2, c);
    let ne = axis_len(0.0, TAU, c);
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..ng {
        for j in 0..ne {
            let (g, e) = (i as f64 * c, j as f64 * c);
            let v = f(g, e);
            if v < best.2 {
                best = (g, e, v);
            }
        }
    }
    if !best.2.is_finite() {
        return Err(MusicError::DegeneratePolarization);
    }
    let mut prev = c;
    for step in grid.pol_steps() {
        let k = (prev / step - 1e-9).ceil().max(1.0) as i64;
        for _ in 0..=MAX_WALKS {
            let center = best;
            let mut edge = false;
            for a in -k..=k {
                for b in -k..=k {
                    let g = center.0 + a as f64 * step;
                    if !(0.0..FRAC_PI_2).contains(&g) {
                        continue;
                    }
                    let e = (center.1 + b as f64 * step).rem_euclid(TAU);
                    let v = f(g, e);
                    if v < best.2 {
                        best = (g, e, v);
                        edge = a.abs() == k || b.abs() == k;
                    }
                }
            }
            if !edge {
                break;
            }
        }
        prev = step;
    }
    Ok(best)
}
