//! Lowest eigenpairs of real-symmetric operators.
//!
//! Three backends share one entry point, [`lowest_eigenpairs`]:
//!
//! - dense LAPACK (`dsyevd`) for operators below a dimension threshold,
//! - Lanczos with full reorthogonalization and deflation above it
//!   ([`crate::lanczos`]),
//! - a shifted-Cholesky block solver for banded matrices
//!   ([`crate::banded`]), selected by the caller.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("LAPACK dsyevd failed with info = {0}")]
    Lapack(i32),
    #[error("need at least {needed} eigenvalues but operator dimension is {dim}")]
    TooSmall { dim: usize, needed: usize },
    #[error("Lanczos did not converge eigenpair {index}: residual {residual:.3e} > tol {tol:.3e} after {iterations} iterations")]
    NoConvergence {
        index: usize,
        residual: f64,
        tol: f64,
        iterations: usize,
    },
    #[error("shifted-Cholesky iteration stalled: residuals {residuals:?} after {rounds} rounds (tol {tol:.3e})")]
    BandedStalled {
        residuals: Vec<f64>,
        rounds: usize,
        tol: f64,
    },
}

/// Real-symmetric operator accessed through matrix-vector products.
pub trait SymOp: Sync {
    fn dim(&self) -> usize;

    /// `y = A x` (overwrites `y`).
    fn matvec(&self, x: &[f64], y: &mut [f64]);

    /// Row-major dense materialization; only called below the dense
    /// threshold. The default builds the matrix column by column.
    fn materialize(&self) -> Vec<f64> {
        let n = self.dim();
        let mut mat = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.matvec(&e, &mut col);
            e[j] = 0.0;
            for i in 0..n {
                mat[i * n + j] = col[i];
            }
        }
        mat
    }

    /// Interval containing the whole spectrum (Gershgorin or better).
    fn spectral_bounds(&self) -> (f64, f64);
}

/// Solver knobs. `dense_threshold` is the dimension below which the operator
/// is materialized and handed to LAPACK; larger problems go through Lanczos.
#[derive(Clone, Debug)]
pub struct EigenConfig {
    pub dense_threshold: usize,
    /// Residual tolerance relative to the spectral scale.
    pub tol: f64,
    pub max_iter: usize,
    /// Seed for deterministic starting vectors.
    pub seed: u64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            dense_threshold: 4096,
            tol: 1e-10,
            max_iter: 1200,
            seed: 0x5eed_cafe,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenPairs {
    /// Ascending eigenvalues, `k` of them.
    pub values: Vec<f64>,
    /// Matching eigenvectors when requested.
    pub vectors: Option<Vec<Vec<f64>>>,
}

/// `k` smallest eigenvalues (with vectors on request) of a real-symmetric
/// operator.
pub fn lowest_eigenpairs(
    op: &dyn SymOp,
    k: usize,
    want_vectors: bool,
    cfg: &EigenConfig,
) -> Result<EigenPairs, EigenError> {
    let dim = op.dim();
    if dim < k {
        return Err(EigenError::TooSmall { dim, needed: k });
    }
    if dim < cfg.dense_threshold {
        let mut mat = op.materialize();
        let (values, vectors) = dense_eigh(&mut mat, dim, want_vectors)?;
        Ok(EigenPairs {
            values: values[..k].to_vec(),
            vectors: vectors.map(|v| v.into_iter().take(k).collect()),
        })
    } else {
        crate::lanczos::lanczos_lowest(op, k, want_vectors, cfg)
    }
}

mod lapack {
    extern "C" {
        pub fn dsyevd_(
            jobz: *const u8,
            uplo: *const u8,
            n: *const i32,
            a: *mut f64,
            lda: *const i32,
            w: *mut f64,
            work: *mut f64,
            lwork: *const i32,
            iwork: *mut i32,
            liwork: *const i32,
            info: *mut i32,
        );
    }
}

/// Full symmetric eigendecomposition via LAPACK `dsyevd`.
///
/// `mat` is row-major and is destroyed. Returns all eigenvalues ascending;
/// with `want_vectors` also the eigenvectors (each a length-`dim` vec).
/// Row/column order does not matter for the input since the matrix is
/// symmetric; on output LAPACK's column-eigenvectors land in our rows.
pub fn dense_eigh(mat: &mut [f64], dim: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<Vec<f64>>>), EigenError> {
    assert_eq!(mat.len(), dim * dim);
    let n = dim as i32;
    let jobz = if want_vectors { b'V' } else { b'N' };
    let uplo = b'L';
    let mut w = vec![0.0f64; dim];
    let mut info = 0i32;
    let (mut work_q, mut iwork_q) = ([0.0f64], [0i32]);
    let query = -1i32;
    unsafe {
        lapack::dsyevd_(
            &jobz,
            &uplo,
            &n,
            mat.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work_q.as_mut_ptr(),
            &query,
            iwork_q.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigenError::Lapack(info));
    }
    let lwork = work_q[0] as i32;
    let liwork = iwork_q[0].max(1);
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        lapack::dsyevd_(
            &jobz,
            &uplo,
            &n,
            mat.as_mut_ptr(),
            &n,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(EigenError::Lapack(info));
    }
    let vectors = want_vectors.then(|| {
        (0..dim).map(|j| mat[j * dim..(j + 1) * dim].to_vec()).collect()
    });
    Ok((w, vectors))
}

/// Dense operator wrapper, mainly for tests and small cross-checks.
pub struct DenseOp {
    pub dim: usize,
    /// Row-major, symmetric.
    pub mat: Vec<f64>,
}

impl SymOp for DenseOp {
    fn dim(&self) -> usize {
        self.dim
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.mat[i * self.dim..(i + 1) * self.dim];
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn materialize(&self) -> Vec<f64> {
        self.mat.clone()
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let d = self.mat[i * self.dim + i];
            let r: f64 = (0..self.dim)
                .filter(|&j| j != i)
                .map(|j| self.mat[i * self.dim + j].abs())
                .sum();
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }
}

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
