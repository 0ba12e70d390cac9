//! Symmetric banded matrices and a shifted-Cholesky eigensolver.
//!
//! Collective-spin (Dicke-sector) Hamiltonians are banded: hops change one
//! cluster quantum number at a time, so the half-bandwidth equals the stride
//! of the slowest hop. For those matrices the cheapest route to the lowest
//! eigenvalues is spectral transformation: factor `A - σI` with a banded
//! Cholesky (σ strictly below the spectrum), run block inverse iteration,
//! and Rayleigh-Ritz in the original matrix.
//!
//! The two-stage shift strategy matters. A first pass with a safe σ from a
//! cheap Lanczos estimate gets close to the ground energy; re-shifting just
//! below the found Ritz value makes the convergence ratio tiny, and the
//! final block Rayleigh-Ritz resolves even exponentially small gaps: the
//! eigenvalue error is quadratic in the subspace residual with the
//! well-separated next level in the denominator.

use crate::eigen::{dense_eigh, dot, norm, EigenConfig, EigenError, EigenPairs, SymOp};
use crate::rng::SplitMix64;

/// Lower symmetric banded storage: `bands[d][i] = A[i+d][i]` for offsets
/// `d = 0..=half_bandwidth`.
#[derive(Clone, Debug)]
pub struct BandedSym {
    pub dim: usize,
    pub half_bandwidth: usize,
    pub bands: Vec<Vec<f64>>,
}

impl BandedSym {
    pub fn zeros(dim: usize, half_bandwidth: usize) -> Self {
        let bw = half_bandwidth.min(dim.saturating_sub(1));
        let bands = (0..=bw).map(|d| vec![0.0; dim - d]).collect();
        Self {
            dim,
            half_bandwidth: bw,
            bands,
        }
    }

    #[inline]
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        let (hi, lo) = if row >= col { (row, col) } else { (col, row) };
        let d = hi - lo;
        debug_assert!(d <= self.half_bandwidth);
        self.bands[d][lo] += value;
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let (hi, lo) = if row >= col { (row, col) } else { (col, row) };
        let d = hi - lo;
        if d > self.half_bandwidth {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.bands[0][i] * x[i];
        }
        for d in 1..=self.half_bandwidth {
            let band = &self.bands[d];
            for i in 0..n - d {
                let v = band[i];
                if v != 0.0 {
                    y[i + d] += v * x[i];
                    y[i] += v * x[i + d];
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut mat = vec![0.0; n * n];
        for d in 0..=self.half_bandwidth {
            for i in 0..n - d {
                mat[(i + d) * n + i] = self.bands[d][i];
                mat[i * n + (i + d)] = self.bands[d][i];
            }
        }
        mat
    }

    /// Gershgorin interval for the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim;
        let mut radius = vec![0.0f64; n];
        for d in 1..=self.half_bandwidth {
            for i in 0..n - d {
                let a = self.bands[d][i].abs();
                radius[i] += a;
                radius[i + d] += a;
            }
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            lo = lo.min(self.bands[0][i] - radius[i]);
            hi = hi.max(self.bands[0][i] + radius[i]);
        }
        (lo, hi)
    }

    /// Banded Cholesky of `A - shift*I`. Returns the factor, or `None` when
    /// the shifted matrix is not positive definite (the signal that `shift`
    /// sits at or above the lowest eigenvalue).
    pub fn shifted_cholesky(&self, shift: f64) -> Option<BandedCholesky> {
        let n = self.dim;
        let bw = self.half_bandwidth;
        let mut l = self.bands.clone();
        for v in l[0].iter_mut() {
            *v -= shift;
        }
        for j in 0..n {
            let mut diag = l[0][j];
            let kmin = j.saturating_sub(bw);
            for k in kmin..j {
                let lv = l[j - k][k];
                diag -= lv * lv;
            }
            if diag <= 0.0 {
                return None;
            }
            let diag = diag.sqrt();
            l[0][j] = diag;
            let imax = (j + bw).min(n - 1);
            for i in j + 1..=imax {
                let mut v = l[i - j][j];
                let kmin = i.saturating_sub(bw);
                for k in kmin..j {
                    v -= l[i - k][k] * l[j - k][k];
                }
                l[i - j][j] = v / diag;
            }
        }
        Some(BandedCholesky {
            dim: n,
            half_bandwidth: bw,
            l,
        })
    }
}

impl SymOp for BandedSym {
    fn dim(&self) -> usize {
        self.dim
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        BandedSym::matvec(self, x, y)
    }

    fn materialize(&self) -> Vec<f64> {
        self.to_dense()
    }

    fn spectral_bounds(&self) -> (f64, f64) {
        self.gershgorin()
    }
}

/// Lower banded Cholesky factor `L L^T = A - σI`.
pub struct BandedCholesky {
    dim: usize,
    half_bandwidth: usize,
    l: Vec<Vec<f64>>,
}

impl BandedCholesky {
    /// Solve `L L^T x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim;
        let bw = self.half_bandwidth;
        // forward: L y = b
        for j in 0..n {
            let y = b[j] / self.l[0][j];
            b[j] = y;
            if y != 0.0 {
                let imax = (j + bw).min(n - 1);
                for i in j + 1..=imax {
                    b[i] -= self.l[i - j][j] * y;
                }
            }
        }
        // backward: L^T x = y
        for j in (0..n).rev() {
            let imax = (j + bw).min(n - 1);
            let mut v = b[j];
            for i in j + 1..=imax {
                v -= self.l[i - j][j] * b[i];
            }
            b[j] = v / self.l[0][j];
        }
    }
}

/// Lowest `k` eigenpairs of a banded symmetric matrix.
///
/// `warm_start` vectors (from a neighbouring parameter point) skip most of
/// the shift hunting. Residuals are checked against `cfg.tol * scale`; a
/// stall is reported rather than silently accepted.
pub fn banded_lowest(
    a: &BandedSym,
    k: usize,
    cfg: &EigenConfig,
    warm_start: Option<&[Vec<f64>]>,
) -> Result<EigenPairs, EigenError> {
    let dim = a.dim;
    if dim < k {
        return Err(EigenError::TooSmall { dim, needed: k });
    }
    // tiny or nearly full-band problems: dense is simpler and faster
    if dim <= 64 || a.half_bandwidth * 3 >= dim {
        let mut mat = a.to_dense();
        let (w, vecs) = dense_eigh(&mut mat, dim, true)?;
        return Ok(EigenPairs {
            values: w[..k].to_vec(),
            vectors: Some(vecs.unwrap().into_iter().take(k).collect()),
        });
    }

    let (glo, ghi) = a.gershgorin();
    let scale = glo.abs().max(ghi.abs()).max(1e-30);
    let tol = cfg.tol * scale;
    let block = (k + 1).min(dim);

    // cheap Lanczos pass: upper bound on the ground energy for the first shift
    let (theta_est, resid_est) = rough_lowest(a, cfg);
    let mut shift = theta_est - resid_est.max(1e-6 * scale);
    let mut step = resid_est.max(1e-6 * scale);

    let mut x: Vec<Vec<f64>> = match warm_start {
        Some(ws) if ws.len() >= block && ws[0].len() == dim => ws[..block].to_vec(),
        _ => {
            let mut rng = SplitMix64::new(cfg.seed ^ 0xb4dd);
            (0..block)
                .map(|_| (0..dim).map(|_| rng.next_symmetric()).collect())
                .collect()
        }
    };
    orthonormalize(&mut x);

    let mut last_residuals = vec![f64::INFINITY; block];
    let max_rounds = 60;
    for round in 0..max_rounds {
        // factor A - shift I, backing off when the shift overshot the spectrum
        let chol = {
            let mut backoff = step.max(1e-12 * scale);
            loop {
                match a.shifted_cholesky(shift) {
                    Some(c) => break c,
                    None => {
                        shift -= backoff;
                        backoff *= 8.0;
                        if shift < 2.0 * glo - ghi - 1.0 {
                            return Err(EigenError::BandedStalled {
                                residuals: last_residuals,
                                rounds: round,
                                tol,
                            });
                        }
                    }
                }
            }
        };
        let inner = if round == 0 { 10 } else { 6 };
        for _ in 0..inner {
            for col in x.iter_mut() {
                chol.solve_in_place(col);
            }
            orthonormalize(&mut x);
        }
        // Rayleigh-Ritz with the original matrix
        let (theta, rotated) = rayleigh_ritz(a, &x)?;
        x = rotated;
        let mut residuals = vec![0.0; block];
        let mut work = vec![0.0; dim];
        for (i, col) in x.iter().enumerate() {
            a.matvec(col, &mut work);
            let mut r = 0.0;
            for (w, v) in work.iter().zip(col) {
                let d = w - theta[i] * v;
                r += d * d;
            }
            residuals[i] = r.sqrt();
        }
        last_residuals = residuals.clone();
        if residuals.iter().take(k).all(|&r| r <= tol) {
            return Ok(EigenPairs {
                values: theta[..k].to_vec(),
                vectors: Some(x.into_iter().take(k).collect()),
            });
        }
        // re-shift just below the current ground Ritz value
        let gap01 = (theta[1] - theta[0]).abs();
        let margin = (3.0 * residuals[0]).max(1e-3 * gap01).max(1e-12 * scale);
        shift = theta[0] - margin;
        step = margin;
    }
    Err(EigenError::BandedStalled {
        residuals: last_residuals,
        rounds: max_rounds,
        tol,
    })
}

/// Plain Lanczos (no reorthogonalization, ~60 steps) to bound the ground
/// energy from above, plus a residual-scale error estimate.
fn rough_lowest(a: &BandedSym, cfg: &EigenConfig) -> (f64, f64) {
    let dim = a.dim;
    let steps = dim.min(60);
    let mut rng = SplitMix64::new(cfg.seed ^ 0x1a2c);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.next_symmetric()).collect();
    let nv = norm(&v);
    for vi in v.iter_mut() {
        *vi /= nv;
    }
    let mut v_prev = vec![0.0; dim];
    let mut alphas = Vec::with_capacity(steps);
    let mut betas: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![0.0; dim];
    for j in 0..steps {
        a.matvec(&v, &mut w);
        if j > 0 {
            let b = betas[j - 1];
            for (wi, pi) in w.iter_mut().zip(&v_prev) {
                *wi -= b * pi;
            }
        }
        let alpha = dot(&w, &v);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        alphas.push(alpha);
        let beta = norm(&w);
        if beta < 1e-300 {
            break;
        }
        if j + 1 < steps {
            betas.push(beta);
            std::mem::swap(&mut v_prev, &mut v);
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / beta;
            }
        }
    }
    let j = alphas.len();
    let mut tri = vec![0.0; j * j];
    for i in 0..j {
        tri[i * j + i] = alphas[i];
        if i + 1 < j {
            tri[i * j + i + 1] = betas[i];
            tri[(i + 1) * j + i] = betas[i];
        }
    }
    match dense_eigh(&mut tri, j, true) {
        Ok((w, Some(vecs))) => {
            let beta_last = betas.last().copied().unwrap_or(0.0);
            let resid = (beta_last * vecs[0][j - 1]).abs();
            (w[0], resid)
        }
        _ => {
            let (lo, _) = a.gershgorin();
            (lo, 1.0)
        }
    }
}

/// Modified Gram-Schmidt, two passes. Columns that collapse to zero are
/// re-seeded deterministically.
fn orthonormalize(cols: &mut [Vec<f64>]) {
    let ncols = cols.len();
    for i in 0..ncols {
        for _ in 0..2 {
            for j in 0..i {
                let (head, tail) = cols.split_at_mut(i);
                let c = dot(&tail[0], &head[j]);
                if c != 0.0 {
                    for (v, u) in tail[0].iter_mut().zip(&head[j]) {
                        *v -= c * u;
                    }
                }
            }
        }
        let nv = norm(&cols[i]);
        if nv < 1e-300 {
            let dim = cols[i].len();
            let mut rng = SplitMix64::new(0x0515 ^ (i as u64));
            cols[i] = (0..dim).map(|_| rng.next_symmetric()).collect();
            let nv = norm(&cols[i]);
            for v in cols[i].iter_mut() {
                *v /= nv;
            }
        } else {
            for v in cols[i].iter_mut() {
                *v /= nv;
            }
        }
    }
}

/// Diagonalize the block projection `X^T A X`; returns ascending Ritz values
/// and the rotated columns.
fn rayleigh_ritz(a: &BandedSym, x: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>), EigenError> {
    let block = x.len();
    let dim = a.dim;
    let mut ax: Vec<Vec<f64>> = vec![vec![0.0; dim]; block];
    for (i, col) in x.iter().enumerate() {
        a.matvec(col, &mut ax[i]);
    }
    let mut m = vec![0.0; block * block];
    for i in 0..block {
        for j in 0..block {
            m[i * block + j] = dot(&x[i], &ax[j]);
        }
    }
    // symmetrize away roundoff
    for i in 0..block {
        for j in 0..i {
            let avg = 0.5 * (m[i * block + j] + m[j * block + i]);
            m[i * block + j] = avg;
            m[j * block + i] = avg;
        }
    }
    let (w, vecs) = dense_eigh(&mut m, block, true)?;
    let vecs = vecs.unwrap();
    let mut rotated: Vec<Vec<f64>> = vec![vec![0.0; dim]; block];
    for (r, coef) in vecs.iter().enumerate() {
        for (c, col) in x.iter().enumerate() {
            let f = coef[c];
            if f != 0.0 {
                for (out, v) in rotated[r].iter_mut().zip(col) {
                    *out += f * v;
                }
            }
        }
    }
    Ok((w, rotated))
}
