//! Small least-squares fits: straight lines and low-order polynomials.

use serde::Serialize;

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Clone, Debug, Serialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub residual_rms: f64,
    pub slope_stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&u, &v)| (u - mx) * (v - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&u, &v)| {
            let r = v - (intercept + slope * u);
            r * r
        })
        .sum();
    let ss_tot: f64 = y.iter().map(|&v| (v - my) * (v - my)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    let dof = (n.max(3) - 2) as f64;
    Some(LinearFit {
        intercept,
        slope,
        r_squared,
        residual_rms: (ss_res / nf).sqrt(),
        slope_stderr: (ss_res / dof / sxx).sqrt(),
    })
}

/// Least-squares polynomial `y = Σ coeffs[k] x^k` of the given degree.
///
/// Returns the coefficients with their standard errors (from the diagonal of
/// the normal-equation covariance) and the residual RMS.
#[derive(Clone, Debug, Serialize)]
pub struct PolyFit {
    pub coeffs: Vec<f64>,
    pub stderr: Vec<f64>,
    pub residual_rms: f64,
}

pub fn poly_fit(x: &[f64], y: &[f64], degree: usize) -> Option<PolyFit> {
    let n = x.len();
    let m = degree + 1;
    if n < m || n != y.len() {
        return None;
    }
    // normal equations A c = b with A = X^T X
    let mut a = vec![0.0f64; m * m];
    let mut b = vec![0.0f64; m];
    for (&xi, &yi) in x.iter().zip(y) {
        let mut pow = vec![1.0; m];
        for k in 1..m {
            pow[k] = pow[k - 1] * xi;
        }
        for r in 0..m {
            b[r] += pow[r] * yi;
            for c in 0..m {
                a[r * m + c] += pow[r] * pow[c];
            }
        }
    }
    let inv = invert(&a, m)?;
    let mut coeffs = vec![0.0; m];
    for r in 0..m {
        for c in 0..m {
            coeffs[r] += inv[r * m + c] * b[c];
        }
    }
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let mut p = 0.0;
            for k in (0..m).rev() {
                p = p * xi + coeffs[k];
            }
            let r = yi - p;
            r * r
        })
        .sum();
    let dof = (n - m).max(1) as f64;
    let var = ss_res / dof;
    let stderr = (0..m).map(|k| (inv[k * m + k] * var).max(0.0).sqrt()).collect();
    Some(PolyFit {
        coeffs,
        stderr,
        residual_rms: (ss_res / n as f64).sqrt(),
    })
}

/// Gauss-Jordan inverse with partial pivoting; `None` on (near-)singularity.
fn invert(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut w = a.to_vec();
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for col in 0..m {
        let mut piv = col;
        for r in col + 1..m {
            if w[r * m + col].abs() > w[piv * m + col].abs() {
                piv = r;
            }
        }
        if w[piv * m + col].abs() < 1e-300 {
            return None;
        }
        if piv != col {
            for c in 0..m {
                w.swap(col * m + c, piv * m + c);
                inv.swap(col * m + c, piv * m + c);
            }
        }
        let d = w[col * m + col];
        for c in 0..m {
            w[col * m + c] /= d;
            inv[col * m + c] /= d;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = w[r * m + col];
            if f == 0.0 {
                continue;
            }
            for c in 0..m {
                w[r * m + c] -= f * w[col * m + c];
                inv[r * m + c] -= f * inv[col * m + c];
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|&v| 2.5 - 0.75 * v).collect();
        let fit = linear_fit(&x, &y).unwrap();
        assert_abs_diff_eq!(fit.slope, -0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert!(fit.residual_rms < 1e-12);
    }

    #[test]
    fn quadratic_recovery() {
        let x: Vec<f64> = (0..8).map(|k| k as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|&v| 1.0 - 0.3 * v + 0.07 * v * v).collect();
        let fit = poly_fit(&x, &y, 2).unwrap();
        assert_abs_diff_eq!(fit.coeffs[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.coeffs[1], -0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.coeffs[2], 0.07, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
        assert!(poly_fit(&[1.0], &[1.0], 1).is_none());
    }
}
