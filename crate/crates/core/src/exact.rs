//! Full-Hilbert-space spectra of the interpolating Hamiltonian for small n.
//!
//! The assembled operator is a diagonal (problem + catalyst) plus the
//! transverse-field driver, which flips one bit at a time; the matrix-vector
//! product walks the n flip partners of each basis state. Below the dense
//! threshold the matrix is materialized for LAPACK, above it the matrix-free
//! Lanczos path takes over.

use thiserror::Error;

use crate::eigen::{lowest_eigenpairs, EigenConfig, EigenError, EigenPairs, SymOp};
use crate::models::{assemble, DiagonalProblem, Hamiltonian, ModelError, NamedState, Schedule};
use crate::trace::{scan_gap, GapTrace, TraceConfig, TraceError};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("vector has dimension {got}, state lives in dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// Matrix-free view of an assembled Hamiltonian.
pub struct FullOp<'a> {
    pub ham: &'a Hamiltonian,
}

impl SymOp for FullOp<'_> {
    fn dim(&self) -> usize {
        1usize << self.ham.n
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.ham.n;
        let w = self.ham.driver_weight;
        let diag = &self.ham.diagonal;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = diag[i] * x[i];
            let mut flips = 0.0;
            for b in 0..n {
                flips += x[i ^ (1usize << b)];
            }
            acc -= w * flips;
            *yi = acc;
        }
    }

    fn materialize(&self) -> Vec<f64> {
        let n = self.ham.n;
        let dim = 1usize << n;
        let mut mat = vec![0.0; dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = self.ham.diagonal[i];
            for b in 0..n {
                let j = i ^ (1usize << b);
                mat[i * dim + j] = -self.ham.driver_weight;
            }
        }
        mat
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.ham.n as f64;
        let r = self.ham.driver_weight.abs() * n;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &d in &self.ham.diagonal {
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }
}

/// Precomputed diagonals for repeated solves along the interpolation.
pub struct ExactSolver {
    n: usize,
    problem_diag: Vec<f64>,
    catalyst_diag: Vec<f64>,
    schedule: Schedule,
    problem_diag_sum: f64,
    pub eigen_cfg: EigenConfig,
}

impl ExactSolver {
    pub fn new(problem: &DiagonalProblem, schedule: Schedule, eigen_cfg: EigenConfig) -> Result<Self, ModelError> {
        let n = problem.n();
        if n > 26 {
            return Err(ModelError::BadParameter(format!(
                "full-space solver limited to n <= 26 (got {n})"
            )));
        }
        if schedule.bias.len() != n {
            return Err(ModelError::BadParameter(format!(
                "bias vector has {} entries for n = {}",
                schedule.bias.len(),
                n
            )));
        }
        let dim = 1usize << n;
        let problem_diag: Vec<f64> = (0..dim).map(|i| problem.energy(i as u64)).collect();
        let catalyst_diag: Vec<f64> = (0..dim).map(|i| schedule.catalyst_energy(i as u64)).collect();
        Ok(Self {
            n,
            problem_diag,
            catalyst_diag,
            schedule,
            problem_diag_sum: problem.diagonal_sum(),
            eigen_cfg,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hamiltonian(&self, s: f64) -> Result<Hamiltonian, ModelError> {
        let (wd, wb, wp) = self.schedule.weights(s)?;
        let diagonal = self
            .problem_diag
            .iter()
            .zip(&self.catalyst_diag)
            .map(|(&p, &c)| wp * p + wb * c)
            .collect();
        Ok(Hamiltonian {
            n: self.n,
            s,
            driver_weight: wd,
            catalyst_weight: wb,
            problem_weight: wp,
            diagonal,
        })
    }

    /// k lowest eigenpairs of H(s).
    pub fn lowest(&self, s: f64, k: usize, want_vectors: bool) -> Result<EigenPairs, ExactError> {
        let ham = self.hamiltonian(s)?;
        let op = FullOp { ham: &ham };
        Ok(lowest_eigenpairs(&op, k, want_vectors, &self.eigen_cfg)?)
    }

    /// Trace of H(s) in closed form: driver and catalyst are traceless, so
    /// only the problem diagonal contributes.
    pub fn analytic_trace(&self, s: f64) -> Result<f64, ModelError> {
        let (_, _, wp) = self.schedule.weights(s)?;
        Ok(wp * self.problem_diag_sum)
    }

    pub fn gap_trace(&self, cfg: &TraceConfig) -> Result<GapTrace, TraceError> {
        scan_gap(
            &|s| {
                // the scan grid and refinement brackets stay inside [0, 1]
                let ham = self.hamiltonian(s).expect("s inside validated window");
                let op = FullOp { ham: &ham };
                let pairs = lowest_eigenpairs(&op, 2, false, &self.eigen_cfg)?;
                Ok((pairs.values[0], pairs.values[1]))
            },
            cfg,
        )
    }
}

/// Gap trace of an assembled (problem, schedule) pair.
pub fn gap_trace(
    problem: &DiagonalProblem,
    schedule: &Schedule,
    trace_cfg: &TraceConfig,
    eigen_cfg: &EigenConfig,
) -> Result<GapTrace, ExactError> {
    let solver = ExactSolver::new(problem, schedule.clone(), eigen_cfg.clone())?;
    Ok(solver.gap_trace(trace_cfg)?)
}

/// `|⟨state|v⟩|²` for a normalized real eigenvector.
pub fn overlap_with(state: &NamedState, vector: &[f64]) -> Result<f64, ExactError> {
    let want = 1usize << state.n;
    if vector.len() != want {
        return Err(ExactError::DimensionMismatch {
            got: vector.len(),
            want,
        });
    }
    let amp = vector[state.index()];
    Ok(amp * amp)
}

/// Convenience wrapper for tests and one-off evaluations.
pub fn lowest_at(
    s: f64,
    problem: &DiagonalProblem,
    schedule: &Schedule,
    k: usize,
    eigen_cfg: &EigenConfig,
) -> Result<EigenPairs, ExactError> {
    let ham = assemble(s, problem, schedule)?;
    let op = FullOp { ham: &ham };
    Ok(lowest_eigenpairs(&op, k, false, eigen_cfg)?)
}
