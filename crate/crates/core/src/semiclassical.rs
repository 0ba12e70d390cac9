//! Large-spin (coherent-state) energy densities and the magnetization
//! trajectory of their global minimum along the interpolation.
//!
//! Each cluster carries a unit spin vector confined to the x-z plane: the
//! assembled Hamiltonians are real, so minima have no y-component, and the
//! driver term makes m^x >= 0 optimal. A configuration is therefore a list
//! of polar angles θ_k ∈ [0, π] with m^x = sin θ, m^z = cos θ; the unit
//! length constraint holds by construction.

use serde::Serialize;
use thiserror::Error;

use crate::optimize::coordinate_descent;

#[derive(Debug, Error)]
pub enum SemiclassicalError {
    #[error("trajectory is discontinuous at s = {s} (cluster {cluster}, |Δm_z| = {jump:.3})")]
    Discontinuous { s: f64, cluster: usize, jump: f64 },
    #[error("no magnetization feature above the noise floor {floor:.1e}")]
    NoFeature { floor: f64 },
    #[error("{0}")]
    BadInput(String),
}

/// Per-cluster polar angles; `m^x = sin θ`, `m^z = cos θ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpinConfig {
    pub angles: Vec<f64>,
}

impl SpinConfig {
    pub fn new(angles: Vec<f64>) -> Self {
        Self { angles }
    }

    pub fn mx(&self, k: usize) -> f64 {
        self.angles[k].sin()
    }

    pub fn mz(&self, k: usize) -> f64 {
        self.angles[k].cos()
    }
}

/// p-spin density over two clusters (correct-bias fraction c first).
pub fn density_pspin(cfg: &SpinConfig, s: f64, p: u32, c: f64, lambda: f64) -> f64 {
    let (m1x, m1z) = (cfg.mx(0), cfg.mz(0));
    let (m2x, m2z) = (cfg.mx(1), cfg.mz(1));
    let g = 1.0 - s;
    -g * (c * m1x + (1.0 - c) * m2x)
        - lambda * s * g * (c * m1z - (1.0 - c) * m2z)
        - s * (c * m1z + (1.0 - c) * m2z).powi(p as i32)
}

/// Weak-strong density over three clusters: strong, weak-correct (weight c),
/// weak-incorrect (weight 1-c).
pub fn density_ws(cfg: &SpinConfig, s: f64, c: f64, lambda: f64, h1: f64, h2: f64) -> f64 {
    let (m1x, m1z) = (cfg.mx(0), cfg.mz(0));
    let (m2x, m2z) = (cfg.mx(1), cfg.mz(1));
    let (m3x, m3z) = (cfg.mx(2), cfg.mz(2));
    let g = 1.0 - s;
    let weak_z = c * m2z + (1.0 - c) * m3z;
    -0.5 * g * (m1x + c * m2x + (1.0 - c) * m3x)
        - 0.5 * lambda * s * g * (m1z + c * m2z - (1.0 - c) * m3z)
        - s * (0.5 * h1 * m1z - 0.5 * h2 * weak_z
            + 0.25 * m1z * m1z
            + 0.25 * weak_z * weak_z
            + 0.25 * m1z * weak_z)
}

#[derive(Clone, Debug)]
pub struct TrajectoryConfig {
    pub s_points: usize,
    /// Lower bound on deterministic starts per s (the warm start from the
    /// previous grid point is added on top).
    pub min_starts: usize,
    /// Coordinate-descent tolerance in angle.
    pub angle_tol: f64,
    /// Adjacent-point change in any m^z beyond this marks a discontinuity.
    pub jump_threshold: f64,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            s_points: 257,
            min_starts: 16,
            angle_tol: 1e-8,
            jump_threshold: 0.05,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub s_values: Vec<f64>,
    pub configs: Vec<SpinConfig>,
    pub energies: Vec<f64>,
    pub continuous: bool,
    /// (s, cluster, |Δm_z|) for every adjacent-point jump.
    pub jumps: Vec<(f64, usize, f64)>,
}

impl Trajectory {
    pub fn mz_series(&self, cluster: usize) -> Vec<f64> {
        self.configs.iter().map(|c| c.mz(cluster)).collect()
    }
}

/// Global-minimum trajectory of a density over the s-grid.
///
/// Each point runs a deterministic multi-start (an angle grid with at least
/// `min_starts` points) plus the previous optimum as a warm start, each
/// refined by coordinate descent; the best survives. Evaluation is strictly
/// sequential in s so the warm-start chain is reproducible bit for bit.
pub fn track_minimum<F>(
    density: &F,
    clusters: usize,
    cfg: &TrajectoryConfig,
) -> Result<Trajectory, SemiclassicalError>
where
    F: Fn(&SpinConfig, f64) -> f64,
{
    if clusters == 0 {
        return Err(SemiclassicalError::BadInput("need at least one cluster".into()));
    }
    let m = cfg.s_points.max(2);
    let s_values: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();

    // per-cluster grid size g with g^clusters >= min_starts
    let mut per_cluster = 1usize;
    while per_cluster.pow(clusters as u32) < cfg.min_starts {
        per_cluster += 1;
    }
    let mut starts: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; clusters];
    loop {
        let angles: Vec<f64> = idx
            .iter()
            .map(|&i| std::f64::consts::PI * (i as f64 + 0.5) / per_cluster as f64)
            .collect();
        starts.push(angles);
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < per_cluster {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == clusters {
                break;
            }
        }
        if k == clusters {
            break;
        }
    }

    let bounds = vec![(0.0, std::f64::consts::PI); clusters];
    let mut configs: Vec<SpinConfig> = Vec::with_capacity(m);
    let mut energies: Vec<f64> = Vec::with_capacity(m);
    for &s in &s_values {
        let mut best: Option<(Vec<f64>, f64)> = None;
        let warm = configs.last().map(|c: &SpinConfig| c.angles.clone());
        for start in starts.iter().chain(warm.as_ref().into_iter()) {
            let (angles, value) = coordinate_descent(
                |a| density(&SpinConfig::new(a.to_vec()), s),
                start,
                &bounds,
                cfg.angle_tol,
                300,
            );
            match &best {
                Some((_, v)) if *v <= value => {}
                _ => best = Some((angles, value)),
            }
        }
        let (angles, value) = best.expect("at least one start");
        configs.push(SpinConfig::new(angles));
        energies.push(value);
    }

    let mut jumps = Vec::new();
    for i in 0..m - 1 {
        for k in 0..clusters {
            let dz = (configs[i + 1].mz(k) - configs[i].mz(k)).abs();
            if dz > cfg.jump_threshold {
                jumps.push((s_values[i + 1], k, dz));
            }
        }
    }
    Ok(Trajectory {
        s_values,
        configs,
        energies,
        continuous: jumps.is_empty(),
        jumps,
    })
}

/// s of the steepest change in a cluster's m^z, by central differences.
///
/// `cluster = None` picks the cluster with the largest total m^z range (the
/// one that flips). Constant series are rejected; ties resolve to the
/// smallest s.
pub fn locate_min_gap_feature(
    trajectory: &Trajectory,
    cluster: Option<usize>,
) -> Result<f64, SemiclassicalError> {
    if !trajectory.continuous {
        let &(s, cluster, jump) = trajectory.jumps.first().expect("discontinuous implies jumps");
        return Err(SemiclassicalError::Discontinuous { s, cluster, jump });
    }
    let nclusters = trajectory.configs[0].angles.len();
    let k = match cluster {
        Some(k) if k < nclusters => k,
        Some(k) => {
            return Err(SemiclassicalError::BadInput(format!(
                "cluster {k} out of range ({nclusters} clusters)"
            )))
        }
        None => {
            // widest m^z swing
            let mut best = 0;
            let mut best_range = f64::NEG_INFINITY;
            for k in 0..nclusters {
                let series = trajectory.mz_series(k);
                let lo = series.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = series.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if hi - lo > best_range {
                    best_range = hi - lo;
                    best = k;
                }
            }
            best
        }
    };
    let series = trajectory.mz_series(k);
    let s = &trajectory.s_values;
    let floor = 1e-6;
    let slopes: Vec<f64> = (1..series.len() - 1)
        .map(|i| ((series[i + 1] - series[i - 1]) / (s[i + 1] - s[i - 1])).abs())
        .collect();
    let max_slope = slopes.iter().cloned().fold(0.0f64, f64::max);
    if max_slope < floor {
        return Err(SemiclassicalError::NoFeature { floor });
    }
    // slopes equal up to roundoff count as ties; the earliest s wins
    let tie_tol = 1e-9 * max_slope;
    let i = slopes
        .iter()
        .position(|&v| v >= max_slope - tie_tol)
        .expect("max exists");
    Ok(s[i + 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::free_energy_pspin;
    use crate::optimize::golden_min;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn pspin_density_anchors() {
        let all_x = SpinConfig::new(vec![PI / 2.0, PI / 2.0]);
        assert_abs_diff_eq!(density_pspin(&all_x, 0.0, 3, 0.7, 1.5), -1.0, epsilon = 1e-12);
        let all_z = SpinConfig::new(vec![0.0, 0.0]);
        for p in [2u32, 3, 7] {
            assert_abs_diff_eq!(density_pspin(&all_z, 1.0, p, 0.6, 0.9), -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ws_density_anchors() {
        let all_x = SpinConfig::new(vec![PI / 2.0; 3]);
        assert_abs_diff_eq!(density_ws(&all_x, 0.0, 0.6, 1.0, 1.0, 0.49), -1.0, epsilon = 1e-12);
        let all_z = SpinConfig::new(vec![0.0; 3]);
        assert_abs_diff_eq!(density_ws(&all_z, 1.0, 0.6, 1.0, 1.0, 0.49), -1.005, epsilon = 1e-12);
        // c = 1: the third cluster decouples entirely
        let a = SpinConfig::new(vec![0.3, 1.1, 0.2]);
        let b = SpinConfig::new(vec![0.3, 1.1, 2.9]);
        assert_abs_diff_eq!(
            density_ws(&a, 0.4, 1.0, 1.2, 1.0, 0.49),
            density_ws(&b, 0.4, 1.0, 1.2, 1.0, 0.49),
            epsilon = 1e-12
        );
    }

    /// Scan densely, refine every local minimum, return the lowest value.
    fn scan_min(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let n = 2001;
        let grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
        let mut best = values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        for idx in crate::optimize::interior_local_minima(&values) {
            let (_, v) = golden_min(f, grid[idx - 1], grid[idx + 1], 1e-12, 300);
            best = best.min(v);
        }
        best
    }

    /// With the catalyst off, the minimum of the angular density equals the
    /// minimum of the mean-field free energy: same variational content.
    #[test]
    fn catalyst_off_density_matches_free_energy() {
        for p in [2u32, 3] {
            for &s in &[0.2, 0.45, 0.6, 0.9] {
                let f_min = scan_min(&|m: f64| free_energy_pspin(m, s, p, 0.7, 0.0), 0.0, 1.0);
                // λ = 0 minima have both cluster angles equal
                let d_min = scan_min(
                    &|t: f64| density_pspin(&SpinConfig::new(vec![t, t]), s, p, 0.7, 0.0),
                    0.0,
                    PI,
                );
                assert_abs_diff_eq!(d_min, f_min, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn reflection_symmetry_even_p() {
        // λ = 0, c = 1/2, even p: flipping both m^z leaves the density alone
        let cfg = SpinConfig::new(vec![0.4, 2.0]);
        let flipped = SpinConfig::new(vec![PI - 0.4, PI - 2.0]);
        for &s in &[0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(
                density_pspin(&cfg, s, 4, 0.5, 0.0),
                density_pspin(&flipped, s, 4, 0.5, 0.0),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn tracked_minimum_single_well() {
        // synthetic density with one smooth minimum drifting in s; the weak
        // mx term breaks the ±θ degeneracy without moving the minimum much
        let density = |cfg: &SpinConfig, s: f64| {
            let target = 0.3 + 0.4 * s;
            (cfg.mz(0) - target) * (cfg.mz(0) - target) - cfg.mx(0) * 1e-4
        };
        let cfg = TrajectoryConfig {
            s_points: 65,
            ..TrajectoryConfig::default()
        };
        let traj = track_minimum(&density, 1, &cfg).unwrap();
        assert!(traj.continuous);
        for (s, c) in traj.s_values.iter().zip(&traj.configs) {
            assert_abs_diff_eq!(c.mz(0), 0.3 + 0.4 * s, epsilon = 1e-3);
        }
    }

    #[test]
    fn warm_start_determinism() {
        let density = |cfg: &SpinConfig, s: f64| density_pspin(cfg, s, 3, 0.9, 1.0);
        let cfg = TrajectoryConfig {
            s_points: 65,
            ..TrajectoryConfig::default()
        };
        let a = track_minimum(&density, 2, &cfg).unwrap();
        let b = track_minimum(&density, 2, &cfg).unwrap();
        assert_eq!(a.configs, b.configs);
        assert_eq!(a.energies, b.energies);
    }

    #[test]
    fn feature_location_linear_and_flat() {
        // linear m^z(s): constant slope, ties resolve to the smallest
        // interior grid point
        let s_values: Vec<f64> = (0..65).map(|i| i as f64 / 64.0).collect();
        let configs: Vec<SpinConfig> = s_values
            .iter()
            .map(|&s| SpinConfig::new(vec![(0.8 * s - 0.4).acos()]))
            .collect();
        let traj = Trajectory {
            s_values: s_values.clone(),
            configs,
            energies: vec![0.0; 65],
            continuous: true,
            jumps: Vec::new(),
        };
        let s = locate_min_gap_feature(&traj, Some(0)).unwrap();
        assert_abs_diff_eq!(s, s_values[1], epsilon = 1e-12);

        // constant m^z: no feature
        let configs: Vec<SpinConfig> = (0..65).map(|_| SpinConfig::new(vec![0.7])).collect();
        let traj = Trajectory {
            s_values,
            configs,
            energies: vec![0.0; 65],
            continuous: true,
            jumps: Vec::new(),
        };
        assert!(matches!(
            locate_min_gap_feature(&traj, Some(0)),
            Err(SemiclassicalError::NoFeature { .. })
        ));
    }
}
