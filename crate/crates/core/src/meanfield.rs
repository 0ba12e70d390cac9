//! Zero-temperature mean-field free energies, landscape minimization, and
//! first-order transition detection.
//!
//! The free-energy densities are evaluated literally; the transition
//! machinery tracks the global minimum's magnetization along s and flags a
//! first-order transition when that location jumps discontinuously.
//!
//! Domain convention: for odd p the p-spin Landau function is only
//! variational on m ∈ [0, 1] (the odd power makes the m < 0 half
//! unphysical: it dips below every self-consistent value), matching the
//! double-well pictures drawn on m ≥ 0. Even p and the weak-strong model
//! use the full [-1, 1] range; degenerate minima resolve toward larger m.

use rayon::prelude::*;
use serde::Serialize;

use crate::optimize::{coordinate_descent, golden_min, interior_local_minima, prominence};

/// p-spin free-energy density at magnetization m: the deformation energy
/// plus the weighted ground energies of spins aligned with (fraction c) and
/// against (fraction 1-c) the catalyst.
pub fn free_energy_pspin(m: f64, s: f64, p: u32, c: f64, lambda: f64) -> f64 {
    let pf = p as f64;
    let pm = pf * m.powi(p as i32 - 1);
    let g = 1.0 - s;
    let aligned = (s * (pm + lambda * g)).powi(2) + g * g;
    let anti = (s * (pm - lambda * g)).powi(2) + g * g;
    s * (pf - 1.0) * m.powi(p as i32) - c * aligned.sqrt() - (1.0 - c) * anti.sqrt()
}

/// Weak-strong cluster free-energy density over the strong (m1) and weak
/// (m2) magnetizations, with the weak cluster's catalyst split c.
pub fn free_energy_ws(m1: f64, m2: f64, s: f64, c: f64, lambda: f64, h1: f64, h2: f64) -> f64 {
    let g = 1.0 - s;
    let quad = s / 4.0 * (m1 * m1 + m2 * m2 + m1 * m2);
    let strong = (s * (m1 + 0.5 * m2 + h1 + lambda * g)).powi(2) + g * g;
    let weak_ok = (s * (m2 + 0.5 * m1 - h2 + lambda * g)).powi(2) + g * g;
    let weak_bad = (s * (m2 + 0.5 * m1 - h2 - lambda * g)).powi(2) + g * g;
    quad - 0.5 * strong.sqrt() - 0.5 * c * weak_ok.sqrt() - 0.5 * (1.0 - c) * weak_bad.sqrt()
}

#[derive(Clone, Debug)]
pub struct LandscapeConfig {
    /// Sampling resolution per dimension for the exported landscape.
    pub grid_points: usize,
    /// Seed-grid resolution per dimension for 2-D minima hunting.
    pub seed_points: usize,
    /// Refinement tolerance in m.
    pub refine_tol: f64,
    /// Minima with less topographic prominence are dropped (1-D).
    pub prominence_threshold: f64,
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        Self {
            grid_points: 401,
            seed_points: 101,
            refine_tol: 1e-8,
            prominence_threshold: 1e-10,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Landscape1D {
    pub s: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Refined local minima (m, f), ordered by m.
    pub minima: Vec<(f64, f64)>,
    /// Index into `minima` of the global minimum.
    pub global: usize,
    /// Set when the global minimum was selected by the larger-m tie-break.
    pub tie_broken: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Landscape2D {
    pub s: f64,
    pub m1_grid: Vec<f64>,
    pub m2_grid: Vec<f64>,
    /// Row-major values over (m1, m2).
    pub values: Vec<f64>,
    pub minima: Vec<([f64; 2], f64)>,
    pub global: usize,
    pub tie_broken: bool,
}

/// Sample f over `domain` and refine every local minimum.
pub fn minimize_landscape_1d<F: Fn(f64) -> f64>(
    f: &F,
    s: f64,
    domain: (f64, f64),
    cfg: &LandscapeConfig,
) -> Landscape1D {
    let n = cfg.grid_points.max(401);
    let (lo, hi) = domain;
    let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&m| f(m)).collect();

    let mut minima: Vec<(f64, f64)> = Vec::new();
    if values[0] < values[1] {
        minima.push((grid[0], values[0]));
    }
    for idx in interior_local_minima(&values) {
        if prominence(&values, idx) < cfg.prominence_threshold {
            continue;
        }
        let (m, v) = golden_min(f, grid[idx - 1], grid[idx + 1], cfg.refine_tol, 300);
        if v <= values[idx] {
            minima.push((m, v));
        } else {
            minima.push((grid[idx], values[idx]));
        }
    }
    if values[n - 1] < values[n - 2] {
        minima.push((grid[n - 1], values[n - 1]));
    }
    if minima.is_empty() {
        let (idx, &v) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        minima.push((grid[idx], v));
    }
    let (global, tie_broken) = pick_global(minima.iter().map(|&(m, v)| (vec![m], v)));
    Landscape1D {
        s,
        grid,
        values,
        minima,
        global,
        tie_broken,
    }
}

/// Two-dimensional landscape: dense sampling for export, seed grid plus
/// multi-start coordinate descent for the minima.
pub fn minimize_landscape_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    s: f64,
    domain1: (f64, f64),
    domain2: (f64, f64),
    cfg: &LandscapeConfig,
) -> Landscape2D {
    let n = cfg.grid_points.max(401);
    let m1_grid: Vec<f64> = (0..n)
        .map(|i| domain1.0 + (domain1.1 - domain1.0) * i as f64 / (n - 1) as f64)
        .collect();
    let m2_grid: Vec<f64> = (0..n)
        .map(|i| domain2.0 + (domain2.1 - domain2.0) * i as f64 / (n - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(n * n);
    for &m1 in &m1_grid {
        for &m2 in &m2_grid {
            values.push(f(m1, m2));
        }
    }
    let minima = minima_2d(f, domain1, domain2, cfg);
    let (global, tie_broken) = pick_global(minima.iter().map(|&(m, v)| (m.to_vec(), v)));
    Landscape2D {
        s,
        m1_grid,
        m2_grid,
        values,
        minima,
        global,
        tie_broken,
    }
}

/// Seed-grid local minima of a 2-D function refined by coordinate descent.
fn minima_2d<F: Fn(f64, f64) -> f64>(
    f: &F,
    domain1: (f64, f64),
    domain2: (f64, f64),
    cfg: &LandscapeConfig,
) -> Vec<([f64; 2], f64)> {
    let k = cfg.seed_points.max(21);
    let g1: Vec<f64> = (0..k)
        .map(|i| domain1.0 + (domain1.1 - domain1.0) * i as f64 / (k - 1) as f64)
        .collect();
    let g2: Vec<f64> = (0..k)
        .map(|i| domain2.0 + (domain2.1 - domain2.0) * i as f64 / (k - 1) as f64)
        .collect();
    let mut vals = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            vals[i * k + j] = f(g1[i], g2[j]);
        }
    }
    let at = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= k as isize || j >= k as isize {
            f64::INFINITY
        } else {
            vals[i as usize * k + j as usize]
        }
    };
    let mut found: Vec<([f64; 2], f64)> = Vec::new();
    for i in 0..k as isize {
        for j in 0..k as isize {
            let v = at(i, j);
            let mut is_min = true;
            for di in -1..=1 {
                for dj in -1..=1 {
                    if (di, dj) != (0, 0) && at(i + di, j + dj) < v {
                        is_min = false;
                    }
                }
            }
            if !is_min {
                continue;
            }
            let (xy, fv) = coordinate_descent(
                |x| f(x[0], x[1]),
                &[g1[i as usize], g2[j as usize]],
                &[domain1, domain2],
                cfg.refine_tol,
                200,
            );
            let candidate = ([xy[0], xy[1]], fv);
            // merge duplicates that converged to the same basin
            let dup = found.iter_mut().find(|(m, _)| {
                (m[0] - candidate.0[0]).abs() < 1e-5 && (m[1] - candidate.0[1]).abs() < 1e-5
            });
            match dup {
                Some(existing) => {
                    if candidate.1 < existing.1 {
                        *existing = candidate;
                    }
                }
                None => found.push(candidate),
            }
        }
    }
    found.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.0[1].total_cmp(&b.0[1])));
    found
}

/// Global-minimum index with ties resolved toward larger magnetization
/// (lexicographic over components). Returns (index, tie_was_broken).
fn pick_global<I: Iterator<Item = (Vec<f64>, f64)>>(minima: I) -> (usize, bool) {
    let items: Vec<(Vec<f64>, f64)> = minima.collect();
    let mut best = 0;
    let mut tie = false;
    for i in 1..items.len() {
        let tol = 1e-9 * (1.0 + items[best].1.abs());
        if items[i].1 < items[best].1 - tol {
            best = i;
        } else if (items[i].1 - items[best].1).abs() <= tol {
            // tie: prefer larger magnetization components
            if items[i].0 > items[best].0 {
                best = i;
                tie = true;
            } else {
                tie = true;
            }
        }
    }
    (best, tie)
}

// ---------------------------------------------------------------------------
// transition detection
// ---------------------------------------------------------------------------

/// Mean-field model selector for the transition machinery.
#[derive(Clone, Debug)]
pub enum MeanFieldModel {
    PSpin { p: u32, c: f64, lambda: f64 },
    WeakStrong { c: f64, lambda: f64, h1: f64, h2: f64 },
}

impl MeanFieldModel {
    /// Magnetization domain per component; odd-p keeps m >= 0.
    fn domains(&self) -> Vec<(f64, f64)> {
        match self {
            MeanFieldModel::PSpin { p, .. } => {
                if p % 2 == 1 {
                    vec![(0.0, 1.0)]
                } else {
                    vec![(-1.0, 1.0)]
                }
            }
            MeanFieldModel::WeakStrong { .. } => vec![(-1.0, 1.0), (-1.0, 1.0)],
        }
    }

    /// Global minimum location and value at s, plus the refined minima count.
    fn global_minimum(&self, s: f64, cfg: &LandscapeConfig) -> (Vec<f64>, f64, usize) {
        match self {
            MeanFieldModel::PSpin { p, c, lambda } => {
                let f = |m: f64| free_energy_pspin(m, s, *p, *c, *lambda);
                let scan = minimize_landscape_1d(&f, s, self.domains()[0], cfg);
                let (m, v) = scan.minima[scan.global];
                (vec![m], v, scan.minima.len())
            }
            MeanFieldModel::WeakStrong { c, lambda, h1, h2 } => {
                let f = |m1: f64, m2: f64| free_energy_ws(m1, m2, s, *c, *lambda, *h1, *h2);
                let doms = self.domains();
                let minima = minima_2d(&f, doms[0], doms[1], cfg);
                let (global, _) = pick_global(minima.iter().map(|&(m, v)| (m.to_vec(), v)));
                let (m, v) = minima[global];
                (m.to_vec(), v, minima.len())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransitionConfig {
    pub s_points: usize,
    /// Max-norm step in the global-minimum location that counts as a jump.
    pub jump_threshold: f64,
    /// Bisection tolerance for the transition location.
    pub s_tol: f64,
    pub landscape: LandscapeConfig,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self {
            s_points: 512,
            jump_threshold: 0.05,
            s_tol: 1e-6,
            landscape: LandscapeConfig {
                // transition tracking needs many s-points; a coarser sample
                // grid per point keeps it fast while seeds stay at default
                grid_points: 401,
                seed_points: 101,
                refine_tol: 1e-8,
                prominence_threshold: 1e-10,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionVerdict {
    pub present: bool,
    /// First jump location when present.
    pub s_star: Option<f64>,
    /// Largest jump in the global-minimum location (max-norm).
    pub jump: f64,
    /// Every detected jump as (s*, size).
    pub jumps: Vec<(f64, f64)>,
    /// A multi-minimum landscape occurred but the global minimum moved
    /// continuously: the double well merged instead of jumping.
    pub minima_merged: bool,
    /// Jump size within 25% of the threshold: classification is fragile.
    pub uncertain: bool,
}

fn max_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Track the global free-energy minimum along s and report discontinuous
/// jumps beyond the threshold, refined by bisection.
pub fn detect_transition(model: &MeanFieldModel, cfg: &TransitionConfig) -> TransitionVerdict {
    let m = cfg.s_points.max(2);
    let s_grid: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let locs: Vec<(Vec<f64>, f64, usize)> = s_grid
        .par_iter()
        .map(|&s| model.global_minimum(s, &cfg.landscape))
        .collect();

    let mut jumps: Vec<(f64, f64)> = Vec::new();
    let mut max_step: f64 = 0.0;
    let mut multi_minima = false;
    for i in 0..m - 1 {
        if locs[i].2 > 1 {
            multi_minima = true;
        }
        let step = max_norm(&locs[i].0, &locs[i + 1].0);
        max_step = max_step.max(step);
        if step > cfg.jump_threshold {
            // bisect for the basin switch
            let mut a = s_grid[i];
            let mut b = s_grid[i + 1];
            let mut loc_a = locs[i].0.clone();
            let mut loc_b = locs[i + 1].0.clone();
            while b - a > cfg.s_tol {
                let mid = 0.5 * (a + b);
                let (loc_mid, _, _) = model.global_minimum(mid, &cfg.landscape);
                if max_norm(&loc_mid, &loc_a) <= max_norm(&loc_mid, &loc_b) {
                    a = mid;
                    loc_a = loc_mid;
                } else {
                    b = mid;
                    loc_b = loc_mid;
                }
            }
            jumps.push((0.5 * (a + b), max_norm(&loc_a, &loc_b)));
        }
    }
    if locs[m - 1].2 > 1 {
        multi_minima = true;
    }
    let present = !jumps.is_empty();
    let jump = jumps
        .iter()
        .map(|&(_, j)| j)
        .fold(max_step, f64::max);
    let uncertain = (jump - cfg.jump_threshold).abs() <= 0.25 * cfg.jump_threshold;
    TransitionVerdict {
        present,
        s_star: jumps.first().map(|&(s, _)| s),
        jump,
        jumps,
        minima_merged: multi_minima && !present,
        uncertain,
    }
}

// ---------------------------------------------------------------------------
// (c, λ) phase diagram
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct PhaseDiagram {
    pub c_values: Vec<f64>,
    pub lambda_values: Vec<f64>,
    /// Row-major over (c, λ).
    pub verdicts: Vec<TransitionVerdict>,
}

impl PhaseDiagram {
    pub fn verdict(&self, c_idx: usize, lambda_idx: usize) -> &TransitionVerdict {
        &self.verdicts[c_idx * self.lambda_values.len() + lambda_idx]
    }

    /// Contiguous λ-intervals with no transition at fixed c.
    pub fn transition_free_windows(&self, c_idx: usize) -> Vec<(f64, f64)> {
        let nl = self.lambda_values.len();
        let mut windows = Vec::new();
        let mut start: Option<usize> = None;
        for j in 0..nl {
            let free = !self.verdict(c_idx, j).present;
            match (free, start) {
                (true, None) => start = Some(j),
                (false, Some(s)) => {
                    windows.push((self.lambda_values[s], self.lambda_values[j - 1]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            windows.push((self.lambda_values[s], self.lambda_values[nl - 1]));
        }
        windows
    }
}

/// Per-point transition scan of the p-spin model over a (c, λ) grid.
pub fn phase_diagram(p: u32, c_values: &[f64], lambda_values: &[f64], cfg: &TransitionConfig) -> PhaseDiagram {
    let points: Vec<(f64, f64)> = c_values
        .iter()
        .flat_map(|&c| lambda_values.iter().map(move |&l| (c, l)))
        .collect();
    let verdicts: Vec<TransitionVerdict> = points
        .par_iter()
        .map(|&(c, lambda)| detect_transition(&MeanFieldModel::PSpin { p, c, lambda }, cfg))
        .collect();
    PhaseDiagram {
        c_values: c_values.to_vec(),
        lambda_values: lambda_values.to_vec(),
        verdicts,
    }
}
