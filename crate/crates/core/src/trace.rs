//! Gap traces: Δ(s) = E1(s) - E0(s) sampled on an s-grid, with golden-section
//! refinement of every bracketed local minimum.
//!
//! The scan is generic over the eigenvalue evaluator so the full-space and
//! sector solvers share one implementation. Grid points are independent and
//! evaluated in parallel; results are assembled in grid order so the output
//! does not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::sync::Mutex;
use thiserror::Error;

use crate::eigen::EigenError;
use crate::optimize::{golden_min, interior_local_minima, prominence};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("gap scan needs at least 64 grid points (got {0})")]
    GridTooCoarse(usize),
    #[error("scan window [{0}, {1}] must be inside [0, 1]")]
    BadWindow(f64, f64),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Clone, Debug)]
pub struct TraceConfig {
    /// Coarse grid resolution (>= 64).
    pub points: usize,
    /// Scan window inside [0, 1].
    pub window: (f64, f64),
    /// Golden-section stopping width in s.
    pub s_tol: f64,
    /// Local minima with topographic prominence below this are dropped.
    pub prominence_threshold: f64,
    /// Gap below which the ground state counts as degenerate.
    pub degeneracy_tol: f64,
    pub parallel: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            points: 257,
            window: (0.0, 1.0),
            s_tol: 1e-6,
            prominence_threshold: 0.0,
            degeneracy_tol: 1e-12,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GapMinimum {
    pub s: f64,
    pub gap: f64,
    /// Grid interval that bracketed this minimum.
    pub bracket: (f64, f64),
    /// False for boundary minima, which have no bracket to refine in.
    pub refined: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapTrace {
    pub s_values: Vec<f64>,
    pub gaps: Vec<f64>,
    /// (E0, E1) per grid point.
    pub energies: Vec<(f64, f64)>,
    /// All retained minima, ordered by s.
    pub minima: Vec<GapMinimum>,
    /// Index into `minima` of the global minimum.
    pub global: usize,
    /// Set when the gap stays below the degeneracy tolerance over at least
    /// two consecutive interior grid points.
    pub degenerate_ground: bool,
}

impl GapTrace {
    pub fn global_minimum(&self) -> &GapMinimum {
        &self.minima[self.global]
    }

    pub fn min_gap(&self) -> f64 {
        self.global_minimum().gap
    }

    /// Two-column CSV `(s, gap)`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "s,gap")?;
        for (s, g) in self.s_values.iter().zip(&self.gaps) {
            writeln!(w, "{s},{g}")?;
        }
        Ok(())
    }
}

/// Scan Δ(s) over the window and refine every retained local minimum.
///
/// `eval(s)` returns the two lowest eigenvalues of H(s).
pub fn scan_gap<F>(eval: &F, cfg: &TraceConfig) -> Result<GapTrace, TraceError>
where
    F: Fn(f64) -> Result<(f64, f64), EigenError> + Sync,
{
    if cfg.points < 64 {
        return Err(TraceError::GridTooCoarse(cfg.points));
    }
    let (lo, hi) = cfg.window;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(TraceError::BadWindow(lo, hi));
    }
    let m = cfg.points;
    let s_values: Vec<f64> = (0..m)
        .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
        .collect();
    let energies: Vec<(f64, f64)> = if cfg.parallel {
        let results: Vec<Result<(f64, f64), EigenError>> =
            s_values.par_iter().map(|&s| eval(s)).collect();
        results.into_iter().collect::<Result<_, _>>()?
    } else {
        s_values
            .iter()
            .map(|&s| eval(s))
            .collect::<Result<_, _>>()?
    };
    let gaps: Vec<f64> = energies.iter().map(|&(e0, e1)| e1 - e0).collect();

    let degenerate_ground = gaps
        .windows(2)
        .enumerate()
        .any(|(i, w)| i > 0 && i + 2 < m && w[0] < cfg.degeneracy_tol && w[1] < cfg.degeneracy_tol);

    let mut minima: Vec<GapMinimum> = Vec::new();
    if gaps[0] < gaps[1] {
        minima.push(GapMinimum {
            s: s_values[0],
            gap: gaps[0],
            bracket: (s_values[0], s_values[1]),
            refined: false,
        });
    }
    for idx in interior_local_minima(&gaps) {
        if prominence(&gaps, idx) < cfg.prominence_threshold {
            continue;
        }
        let (a, b) = (s_values[idx - 1], s_values[idx + 1]);
        let failure: Mutex<Option<EigenError>> = Mutex::new(None);
        let (s_min, gap_min) = golden_min(
            |s| match eval(s) {
                Ok((e0, e1)) => e1 - e0,
                Err(e) => {
                    *failure.lock().unwrap() = Some(e);
                    f64::INFINITY
                }
            },
            a,
            b,
            cfg.s_tol,
            200,
        );
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e.into());
        }
        // keep the better of grid point and refinement, inside the bracket
        let (s_min, gap_min) = if gap_min <= gaps[idx] {
            (s_min.clamp(a, b), gap_min)
        } else {
            (s_values[idx], gaps[idx])
        };
        minima.push(GapMinimum {
            s: s_min,
            gap: gap_min,
            bracket: (a, b),
            refined: true,
        });
    }
    if gaps[m - 1] < gaps[m - 2] {
        minima.push(GapMinimum {
            s: s_values[m - 1],
            gap: gaps[m - 1],
            bracket: (s_values[m - 2], s_values[m - 1]),
            refined: false,
        });
    }
    if minima.is_empty() {
        // flat or monotone-degenerate trace: fall back to the grid argmin
        let (idx, _) = gaps
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        minima.push(GapMinimum {
            s: s_values[idx],
            gap: gaps[idx],
            bracket: (s_values[idx.saturating_sub(1)], s_values[(idx + 1).min(m - 1)]),
            refined: false,
        });
    }
    // strict comparison keeps the smallest-s minimum on ties
    let mut global = 0;
    for (i, m) in minima.iter().enumerate() {
        if m.gap < minima[global].gap {
            global = i;
        }
    }
    Ok(GapTrace {
        s_values,
        gaps,
        energies,
        minima,
        global,
        degenerate_ground,
    })
}
