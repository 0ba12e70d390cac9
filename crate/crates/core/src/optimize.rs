//! One-dimensional bracketed minimization and grid-based minima scans.

/// 1/φ, the golden-section step.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of `f` on `[a, b]`.
///
/// Assumes a single minimum inside the bracket. Returns `(x_min, f_min)`
/// once the bracket width drops below `tol` (or after `max_iter` splits).
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let (x, negv) = golden_min(|x| -f(x), a, b, tol, max_iter);
    (x, -negv)
}

/// Indices of interior local minima of `ys`, plateau-aware.
///
/// A run of equal values counts as one minimum when both flanking values are
/// strictly larger; the reported index is the first point of the run, so ties
/// resolve toward smaller abscissa. Boundary runs are not reported.
pub fn interior_local_minima(ys: &[f64]) -> Vec<usize> {
    let n = ys.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = 1;
    while i < n - 1 {
        if ys[i] < ys[i - 1] {
            // walk the plateau
            let start = i;
            let mut j = i;
            while j + 1 < n && ys[j + 1] == ys[j] {
                j += 1;
            }
            if j < n - 1 && ys[j + 1] > ys[j] {
                out.push(start);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Topographic prominence of the local minimum at `idx`: the smaller of the
/// highest barriers separating it from lower ground (or the boundary) on each
/// side.
pub fn prominence(ys: &[f64], idx: usize) -> f64 {
    let base = ys[idx];
    let mut left = f64::NEG_INFINITY;
    let mut peak = f64::NEG_INFINITY;
    for j in (0..idx).rev() {
        peak = peak.max(ys[j]);
        if ys[j] < base {
            break;
        }
        left = peak;
    }
    if left == f64::NEG_INFINITY {
        left = peak;
    }
    let mut right = f64::NEG_INFINITY;
    peak = f64::NEG_INFINITY;
    for &y in ys.iter().skip(idx + 1) {
        peak = peak.max(y);
        if y < base {
            break;
        }
        right = peak;
    }
    if right == f64::NEG_INFINITY {
        right = peak;
    }
    let barrier = left.min(right);
    if barrier == f64::NEG_INFINITY {
        0.0
    } else {
        (barrier - base).max(0.0)
    }
}

/// Cyclic coordinate descent with golden-section line searches.
///
/// Each sweep minimizes over one coordinate at a time within
/// `[x_i - span, x_i + span] ∩ [lo_i, hi_i]`, shrinking `span` as sweeps
/// stall. Stops when no coordinate moves by more than `tol`.
pub fn coordinate_descent<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    tol: f64,
    max_sweeps: usize,
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut span: Vec<f64> = bounds.iter().map(|(lo, hi)| (hi - lo) * 0.5).collect();
    for _ in 0..max_sweeps {
        let mut moved: f64 = 0.0;
        for i in 0..dim {
            let (lo, hi) = bounds[i];
            let a = (x[i] - span[i]).max(lo);
            let b = (x[i] + span[i]).min(hi);
            if b - a < tol {
                continue;
            }
            let xi_old = x[i];
            let (xi, fxi) = golden_min(
                |v| {
                    x[i] = v;
                    f(&x)
                },
                a,
                b,
                tol * 0.5,
                200,
            );
            if fxi <= fx {
                x[i] = xi;
                fx = fxi;
            } else {
                x[i] = xi_old;
            }
            moved = moved.max((x[i] - xi_old).abs());
        }
        if moved < tol {
            break;
        }
        for s in span.iter_mut() {
            *s = (*s * 0.5).max(tol * 8.0);
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_min(|x| (x - 0.3) * (x - 0.3), -1.0, 1.0, 1e-10, 200);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-8);
        assert!(v < 1e-15);
    }

    #[test]
    fn golden_max_cosine() {
        let (x, v) = golden_max(|x| (x - 1.0).cos(), 0.0, 2.0, 1e-10, 200);
        // location accuracy is limited to ~sqrt(eps) on a flat quadratic top
        assert_abs_diff_eq!(x, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn minima_scan_plateau() {
        let ys = [3.0, 1.0, 1.0, 2.0, 0.5, 4.0];
        assert_eq!(interior_local_minima(&ys), vec![1, 4]);
    }

    #[test]
    fn minima_scan_ignores_boundary() {
        let ys = [0.0, 1.0, 2.0, 1.5, 2.5];
        assert_eq!(interior_local_minima(&ys), vec![3]);
    }

    #[test]
    fn prominence_of_double_well() {
        // wells at idx 1 (depth 0) and idx 5 (depth 1), barrier 3 at idx 3
        let ys = [5.0, 0.0, 2.0, 3.0, 2.0, 1.0, 6.0];
        assert_abs_diff_eq!(prominence(&ys, 5), 2.0, epsilon = 1e-15);
        // global well: nothing is lower, so the barrier is the smaller of
        // the outermost walls on each side
        assert_abs_diff_eq!(prominence(&ys, 1), 5.0, epsilon = 1e-15);
    }

    #[test]
    fn coordinate_descent_quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 0.2f64).powi(2) + 2.0 * (x[1] + 0.4f64).powi(2) + 0.3 * x[0] * x[1];
        let (x, _) = coordinate_descent(f, &[0.9, 0.9], &[(-1.0, 1.0), (-1.0, 1.0)], 1e-10, 400);
        // stationary point of the coupled quadratic: solves the 2x2 normal system
        assert_abs_diff_eq!(x[0], 0.262_958_280_6, epsilon = 1e-6);
        assert_abs_diff_eq!(x[1], -0.419_721_871_0, epsilon = 1e-6);
    }
}
