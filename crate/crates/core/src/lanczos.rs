//! Lanczos iteration for the lowest eigenpairs of large symmetric operators.
//!
//! Single-vector Lanczos with full (two-pass) reorthogonalization; the k-th
//! eigenpair is found by deflating against the k-1 already-converged
//! eigenvectors. Deflation rather than a block method keeps degenerate pairs
//! honest: the second copy of a repeated eigenvalue is the smallest
//! eigenvalue of the deflated operator, so it converges at the rate set by
//! the next distinct level.
//!
//! Convergence is never assumed: every accepted pair passes an explicit
//! residual check `‖Av - θv‖ ≤ tol * scale`, and failures surface the
//! residual in the error.

use crate::eigen::{dense_eigh, dot, norm, EigenConfig, EigenError, EigenPairs, SymOp};
use crate::rng::SplitMix64;

pub fn lanczos_lowest(
    op: &dyn SymOp,
    k: usize,
    want_vectors: bool,
    cfg: &EigenConfig,
) -> Result<EigenPairs, EigenError> {
    let dim = op.dim();
    if dim < k {
        return Err(EigenError::TooSmall { dim, needed: k });
    }
    let (lo, hi) = op.spectral_bounds();
    let scale = lo.abs().max(hi.abs()).max(1e-30);
    let mut values = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for index in 0..k {
        let (theta, v) = single_pair(op, &vectors, index, scale, cfg)?;
        values.push(theta);
        vectors.push(v);
    }
    // deflated runs can land out of order when levels are nearly degenerate
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let values: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&i| vectors[i].clone()).collect();
    Ok(EigenPairs {
        values,
        vectors: want_vectors.then_some(vectors),
    })
}

/// One deflated Lanczos run returning the smallest eigenpair orthogonal to
/// `deflate`.
fn single_pair(
    op: &dyn SymOp,
    deflate: &[Vec<f64>],
    index: usize,
    scale: f64,
    cfg: &EigenConfig,
) -> Result<(f64, Vec<f64>), EigenError> {
    let dim = op.dim();
    let tol = cfg.tol * scale;
    let max_iter = cfg.max_iter.min(dim.saturating_sub(deflate.len()).max(1));
    let check_every = 8;

    let mut best_residual = f64::INFINITY;
    for attempt in 0..4 {
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();

        let mut rng = SplitMix64::new(cfg.seed ^ ((index as u64 + 1) << 32) ^ (attempt as u64 + 1));
        let mut v = random_start(&mut rng, dim, deflate);
        basis.push(v.clone());

        let mut w = vec![0.0; dim];
        for j in 0..max_iter {
            op.matvec(&v, &mut w);
            if j > 0 {
                let beta = betas[j - 1];
                let prev = &basis[j - 1];
                for (wi, pi) in w.iter_mut().zip(prev) {
                    *wi -= beta * pi;
                }
            }
            let alpha = dot(&w, &v);
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi -= alpha * vi;
            }
            alphas.push(alpha);
            // full reorthogonalization, two passes
            for _ in 0..2 {
                for b in basis.iter().chain(deflate.iter()) {
                    let c = dot(&w, b);
                    if c != 0.0 {
                        for (wi, bi) in w.iter_mut().zip(b) {
                            *wi -= c * bi;
                        }
                    }
                }
            }
            let beta = norm(&w);
            let exhausted = basis.len() + deflate.len() >= dim;
            let breakdown = beta <= 1e-14 * scale || exhausted;
            let at_checkpoint = (j + 1) % check_every == 0 || j + 1 == max_iter;
            if breakdown || at_checkpoint {
                if let Some((theta, y, residual)) = try_extract(op, &basis, &alphas, &betas)? {
                    if residual <= tol {
                        return Ok((theta, y));
                    }
                    best_residual = best_residual.min(residual);
                    if breakdown {
                        // invariant subspace without convergence: retry from a
                        // fresh start direction
                        break;
                    }
                } else if breakdown {
                    break;
                }
            }
            if breakdown {
                break;
            }
            betas.push(beta);
            for wi in w.iter_mut() {
                *wi /= beta;
            }
            v = w.clone();
            basis.push(v.clone());
        }
    }
    Err(EigenError::NoConvergence {
        index,
        residual: best_residual,
        tol,
        iterations: max_iter,
    })
}

/// Rayleigh-Ritz on the current Krylov basis: smallest Ritz pair plus its
/// explicit residual norm.
fn try_extract(
    op: &dyn SymOp,
    basis: &[Vec<f64>],
    alphas: &[f64],
    betas: &[f64],
) -> Result<Option<(f64, Vec<f64>, f64)>, EigenError> {
    let j = alphas.len();
    if j == 0 {
        return Ok(None);
    }
    let mut tri = vec![0.0; j * j];
    for i in 0..j {
        tri[i * j + i] = alphas[i];
        if i + 1 < j {
            tri[i * j + i + 1] = betas[i];
            tri[(i + 1) * j + i] = betas[i];
        }
    }
    let (w, vecs) = dense_eigh(&mut tri, j, true)?;
    let t = &vecs.unwrap()[0];
    let theta = w[0];
    let dim = basis[0].len();
    let mut y = vec![0.0; dim];
    for (coef, b) in t.iter().zip(basis) {
        for (yi, bi) in y.iter_mut().zip(b) {
            *yi += coef * bi;
        }
    }
    let ny = norm(&y);
    if ny < 1e-300 {
        return Ok(None);
    }
    for yi in y.iter_mut() {
        *yi /= ny;
    }
    let mut ay = vec![0.0; dim];
    op.matvec(&y, &mut ay);
    let mut res = 0.0;
    for (ai, yi) in ay.iter().zip(&y) {
        let r = ai - theta * yi;
        res += r * r;
    }
    Ok(Some((theta, y, res.sqrt())))
}

fn random_start(rng: &mut SplitMix64, dim: usize, deflate: &[Vec<f64>]) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.next_symmetric()).collect();
        for _ in 0..2 {
            for d in deflate {
                let c = dot(&v, d);
                for (vi, di) in v.iter_mut().zip(d) {
                    *vi -= c * di;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= nv;
            }
            return v;
        }
    }
}
