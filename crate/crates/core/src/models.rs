//! Problem Hamiltonians, interpolation schedules, and symmetric-sector
//! model descriptions.
//!
//! Everything here is plain data: construction validates invariants once and
//! the solver modules consume the values immutably.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("qubit count must be >= 1 (got {0})")]
    BadSize(usize),
    #[error("{0}")]
    BadParameter(String),
    #[error("coupling ({i}, {j}) is invalid: {reason}")]
    BadCoupling { i: usize, j: usize, reason: String },
    #[error("interpolation parameter s = {0} outside [0, 1]")]
    BadS(f64),
    #[error("bias entries must be -1, 0, or +1")]
    BadBias,
    #[error("cluster fractions must be positive and sum to 1 (got sum {0})")]
    BadFractions(f64),
    #[error("cluster sizes are not integers for n = {n}: fraction {fraction} gives {size}")]
    NonIntegerCluster { n: usize, fraction: f64, size: f64 },
}

// ---------------------------------------------------------------------------
// diagonal problem Hamiltonians
// ---------------------------------------------------------------------------

/// Two-body Ising Hamiltonian, diagonal in the computational basis.
///
/// The energy of a spin configuration `z ∈ {-1, +1}^n` is
///
/// ```text
/// E(z) = scale * ( Σ_i fields[i] z_i  -  Σ_(i,j) J_ij z_i z_j )  +  offset
/// ```
///
/// with `σ^z|0⟩ = +|0⟩`, so bit b maps to z = 1 - 2b. `offset` carries
/// identity terms that appear when collective-spin squares are expanded into
/// pair couplings.
#[derive(Clone, Debug)]
pub struct IsingProblem {
    pub n: usize,
    pub fields: Vec<f64>,
    pub couplings: Vec<(usize, usize, f64)>,
    pub scale: f64,
    pub offset: f64,
}

impl IsingProblem {
    pub fn new(
        n: usize,
        fields: Vec<f64>,
        couplings: Vec<(usize, usize, f64)>,
        scale: f64,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::BadSize(n));
        }
        if fields.len() != n {
            return Err(ModelError::BadParameter(format!(
                "{} field entries for n = {}",
                fields.len(),
                n
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, j, _) in &couplings {
            if i == j {
                return Err(ModelError::BadCoupling {
                    i,
                    j,
                    reason: "self-coupling".into(),
                });
            }
            if i >= n || j >= n {
                return Err(ModelError::BadCoupling {
                    i,
                    j,
                    reason: format!("index out of range for n = {n}"),
                });
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(ModelError::BadCoupling {
                    i,
                    j,
                    reason: "duplicate pair".into(),
                });
            }
        }
        Ok(Self {
            n,
            fields,
            couplings,
            scale,
            offset: 0.0,
        })
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    /// Classical energy of the basis state whose bit i is `(bits >> i) & 1`.
    pub fn classical_energy(&self, bits: u64) -> f64 {
        let z = |i: usize| 1.0 - 2.0 * ((bits >> i) & 1) as f64;
        let mut e = 0.0;
        for (i, h) in self.fields.iter().enumerate() {
            e += h * z(i);
        }
        for &(i, j, jij) in &self.couplings {
            e -= jij * z(i) * z(j);
        }
        self.scale * e + self.offset
    }

    /// Same problem with qubit labels permuted: site i of the result carries
    /// what site `perm[i]` carried before.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, ModelError> {
        if perm.len() != self.n {
            return Err(ModelError::BadParameter("permutation length".into()));
        }
        let mut inv = vec![usize::MAX; self.n];
        for (new, &old) in perm.iter().enumerate() {
            if old >= self.n || inv[old] != usize::MAX {
                return Err(ModelError::BadParameter("not a permutation".into()));
            }
            inv[old] = new;
        }
        let fields = perm.iter().map(|&old| self.fields[old]).collect();
        let couplings = self
            .couplings
            .iter()
            .map(|&(i, j, v)| (inv[i], inv[j], v))
            .collect();
        Ok(Self {
            n: self.n,
            fields,
            couplings,
            scale: self.scale,
            offset: self.offset,
        })
    }
}

/// A diagonal problem Hamiltonian in one of the two shapes the solvers use.
///
/// Models with more than two-body interactions but full permutation symmetry
/// (the p-spin family) are stored as an energy-per-Hamming-weight table
/// instead of being expanded into p-body couplings; every consumer is either
/// a full-space diagonal or a symmetric-sector solver, so nothing is lost.
#[derive(Clone, Debug)]
pub enum DiagonalProblem {
    Ising(IsingProblem),
    HammingWeight { n: usize, values: Vec<f64> },
}

impl DiagonalProblem {
    pub fn n(&self) -> usize {
        match self {
            DiagonalProblem::Ising(p) => p.n,
            DiagonalProblem::HammingWeight { n, .. } => *n,
        }
    }

    pub fn energy(&self, bits: u64) -> f64 {
        match self {
            DiagonalProblem::Ising(p) => p.classical_energy(bits),
            DiagonalProblem::HammingWeight { values, .. } => values[bits.count_ones() as usize],
        }
    }

    /// Σ_z E(z) in closed form (field and coupling terms cancel pairwise
    /// over the hypercube; Hamming tables sum with binomial weights).
    pub fn diagonal_sum(&self) -> f64 {
        match self {
            DiagonalProblem::Ising(p) => p.offset * (1u64 << p.n) as f64,
            DiagonalProblem::HammingWeight { n, values } => {
                let mut binom = 1.0f64;
                let mut total = 0.0;
                for (k, v) in values.iter().enumerate() {
                    total += binom * v;
                    binom = binom * (*n as f64 - k as f64) / (k as f64 + 1.0);
                }
                total
            }
        }
    }
}

// ---------------------------------------------------------------------------
// schedules
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Standard,
    DiagonalCatalyst,
}

/// Interpolation protocol. The three weights at parameter s are
/// `(1-s)` on the driver `-Σ σ^x`, `λ s(1-s)` on the catalyst
/// `H_B = -Σ ε_i σ^z`, and `s` on the problem. A `Standard` schedule is the
/// same code path with λ forced to zero, which keeps the two kinds
/// bit-identical at λ = 0.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub lambda: f64,
    /// Per-qubit bias signs ε_i ∈ {-1, 0, +1}; 0 leaves a qubit untouched by
    /// the catalyst.
    pub bias: Vec<i8>,
}

impl Schedule {
    pub fn standard(n: usize) -> Self {
        Self {
            kind: ScheduleKind::Standard,
            lambda: 0.0,
            bias: vec![0; n],
        }
    }

    pub fn catalyst(lambda: f64, bias: Vec<i8>) -> Result<Self, ModelError> {
        if lambda < 0.0 || !lambda.is_finite() {
            return Err(ModelError::BadParameter(format!("catalyst strength {lambda}")));
        }
        if bias.iter().any(|&b| !(-1..=1).contains(&b)) {
            return Err(ModelError::BadBias);
        }
        Ok(Self {
            kind: ScheduleKind::DiagonalCatalyst,
            lambda,
            bias,
        })
    }

    /// Catalyst with the same sign on every qubit.
    pub fn uniform_catalyst(n: usize, lambda: f64, sign: i8) -> Result<Self, ModelError> {
        Self::catalyst(lambda, vec![sign; n])
    }

    pub fn effective_lambda(&self) -> f64 {
        match self.kind {
            ScheduleKind::Standard => 0.0,
            ScheduleKind::DiagonalCatalyst => self.lambda,
        }
    }

    /// `(driver, catalyst, problem)` weights at s.
    pub fn weights(&self, s: f64) -> Result<(f64, f64, f64), ModelError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(ModelError::BadS(s));
        }
        Ok((1.0 - s, self.effective_lambda() * s * (1.0 - s), s))
    }

    /// `⟨z|H_B|z⟩ = -Σ_i ε_i z_i`, without the schedule weight.
    pub fn catalyst_energy(&self, bits: u64) -> f64 {
        let mut e = 0.0;
        for (i, &eps) in self.bias.iter().enumerate() {
            if eps != 0 {
                let z = 1.0 - 2.0 * ((bits >> i) & 1) as f64;
                e -= eps as f64 * z;
            }
        }
        e
    }
}

// ---------------------------------------------------------------------------
// named computational-basis states
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateLabel {
    /// |00…0⟩ (all spins up).
    AllZero,
    /// |11…1⟩.
    AllOne,
    /// All-one with bit n/2 flipped back to 0.
    EtaFlip,
    /// All-one in its role as the second member of a degenerate pair.
    Xi,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedState {
    pub n: usize,
    pub bits: u64,
    pub label: StateLabel,
}

impl NamedState {
    pub fn all_zero(n: usize) -> Self {
        Self {
            n,
            bits: 0,
            label: StateLabel::AllZero,
        }
    }

    pub fn all_one(n: usize) -> Self {
        Self {
            n,
            bits: mask(n),
            label: StateLabel::AllOne,
        }
    }

    /// All-one with the middle qubit (index n/2) flipped to 0.
    pub fn eta_flip(n: usize) -> Self {
        Self {
            n,
            bits: mask(n) & !(1u64 << (n / 2)),
            label: StateLabel::EtaFlip,
        }
    }

    pub fn xi(n: usize) -> Self {
        Self {
            n,
            bits: mask(n),
            label: StateLabel::Xi,
        }
    }

    pub fn custom(n: usize, bits: u64) -> Self {
        Self {
            n,
            bits: bits & mask(n),
            label: StateLabel::Custom,
        }
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn hamming_distance(&self, other: &NamedState) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// ---------------------------------------------------------------------------
// assembled interpolating Hamiltonian (full Hilbert space, as data)
// ---------------------------------------------------------------------------

/// `H(s)` over the full 2^n-dimensional space: a diagonal plus a uniform
/// single-bit-flip off-diagonal of strength `-driver_weight`.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub n: usize,
    pub s: f64,
    pub driver_weight: f64,
    pub catalyst_weight: f64,
    pub problem_weight: f64,
    pub diagonal: Vec<f64>,
}

/// Weighted combination of driver, catalyst, and problem at interpolation
/// parameter s. At s = 0 this is the bare driver; at s = 1 the catalyst
/// weight vanishes exactly and the diagonal equals the classical energies.
pub fn assemble(s: f64, problem: &DiagonalProblem, schedule: &Schedule) -> Result<Hamiltonian, ModelError> {
    let n = problem.n();
    if n > 26 {
        return Err(ModelError::BadParameter(format!(
            "full-space assembly limited to n <= 26 (got {n})"
        )));
    }
    let (wd, wb, wp) = schedule.weights(s)?;
    let dim = 1usize << n;
    let mut diagonal = vec![0.0; dim];
    let use_catalyst = wb != 0.0;
    for (idx, d) in diagonal.iter_mut().enumerate() {
        let bits = idx as u64;
        let mut v = wp * problem.energy(bits);
        if use_catalyst {
            v += wb * schedule.catalyst_energy(bits);
        }
        *d = v;
    }
    Ok(Hamiltonian {
        n,
        s,
        driver_weight: wd,
        catalyst_weight: wb,
        problem_weight: wp,
        diagonal,
    })
}

// ---------------------------------------------------------------------------
// sector models (permutation-symmetric cluster descriptions)
// ---------------------------------------------------------------------------

/// One permutation-symmetric group of spins.
#[derive(Clone, Copy, Debug)]
pub struct Cluster {
    /// Fraction of the n qubits in this cluster.
    pub fraction: f64,
    /// Catalyst sign ε on every qubit of the cluster.
    pub bias: i8,
    /// Longitudinal field h: contributes `-h * 2S^z` to the problem.
    pub field: f64,
}

/// Diagonal interaction as a function of the cluster S^z quantum numbers.
#[derive(Clone, Debug)]
pub enum Interaction {
    /// `-n * m^p` with `m = (Σ_k 2 S_k^z) / n`.
    PSpin { p: u32 },
    /// `-(4/n) * (q0² + qw² + q0*qw)` with `q0` the first cluster's S^z and
    /// `qw` the summed S^z of all remaining clusters.
    WeakStrongQuadratic,
    /// Lookup by total Hamming weight `(n - Σ_k 2 S_k^z) / 2`.
    HammingWeight(Vec<f64>),
}

/// Cluster decomposition of a permutation-symmetric interpolating
/// Hamiltonian; the basis for the Dicke-sector solvers.
#[derive(Clone, Debug)]
pub struct SectorModel {
    pub clusters: Vec<Cluster>,
    pub interaction: Interaction,
}

impl SectorModel {
    /// p-spin split into a correctly biased fraction c and an incorrectly
    /// biased remainder. A fraction of zero drops its cluster.
    pub fn pspin(p: u32, c: f64) -> Result<Self, ModelError> {
        if p == 0 {
            return Err(ModelError::BadParameter("p must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&c) {
            return Err(ModelError::BadParameter(format!("agreement fraction c = {c}")));
        }
        let mut clusters = Vec::new();
        if c > 0.0 {
            clusters.push(Cluster {
                fraction: c,
                bias: 1,
                field: 0.0,
            });
        }
        if c < 1.0 {
            clusters.push(Cluster {
                fraction: 1.0 - c,
                bias: -1,
                field: 0.0,
            });
        }
        let model = Self {
            clusters,
            interaction: Interaction::PSpin { p },
        };
        model.validate()?;
        Ok(model)
    }

    /// Weak-strong cluster pair: strong cluster (fraction 1/2, field h1,
    /// correct bias), weak cluster split into a correct-bias fraction c/2 and
    /// an incorrect-bias fraction (1-c)/2, both with field -h2.
    pub fn weak_strong(c: f64, h1: f64, h2: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&c) {
            return Err(ModelError::BadParameter(format!("agreement fraction c = {c}")));
        }
        let mut clusters = vec![Cluster {
            fraction: 0.5,
            bias: 1,
            field: h1,
        }];
        if c > 0.0 {
            clusters.push(Cluster {
                fraction: 0.5 * c,
                bias: 1,
                field: -h2,
            });
        }
        if c < 1.0 {
            clusters.push(Cluster {
                fraction: 0.5 * (1.0 - c),
                bias: -1,
                field: -h2,
            });
        }
        let model = Self {
            clusters,
            interaction: Interaction::WeakStrongQuadratic,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let sum: f64 = self.clusters.iter().map(|c| c.fraction).sum();
        if self.clusters.iter().any(|c| c.fraction <= 0.0) || (sum - 1.0).abs() > 1e-12 {
            return Err(ModelError::BadFractions(sum));
        }
        Ok(())
    }

    /// Cluster sizes at total size n; every `fraction * n` must be an
    /// integer to within 1e-9.
    pub fn cluster_sizes(&self, n: usize) -> Result<Vec<usize>, ModelError> {
        let mut sizes = Vec::with_capacity(self.clusters.len());
        for c in &self.clusters {
            let size = c.fraction * n as f64;
            let rounded = size.round();
            if (size - rounded).abs() > 1e-9 || rounded < 1.0 {
                return Err(ModelError::NonIntegerCluster {
                    n,
                    fraction: c.fraction,
                    size,
                });
            }
            sizes.push(rounded as usize);
        }
        if sizes.iter().sum::<usize>() != n {
            return Err(ModelError::BadFractions(
                sizes.iter().sum::<usize>() as f64 / n as f64,
            ));
        }
        Ok(sizes)
    }

    /// Diagonal problem energy for given cluster `2 S^z` eigenvalues
    /// (`two_sz[k] ∈ {-N_k, -N_k+2, …, N_k}`).
    pub fn problem_energy(&self, n: usize, two_sz: &[f64]) -> f64 {
        let mut e = 0.0;
        for (c, &q) in self.clusters.iter().zip(two_sz) {
            e -= c.field * q;
        }
        match &self.interaction {
            Interaction::PSpin { p } => {
                let m = two_sz.iter().sum::<f64>() / n as f64;
                e -= n as f64 * m.powi(*p as i32);
            }
            Interaction::WeakStrongQuadratic => {
                let q0 = two_sz[0] * 0.5;
                let qw: f64 = two_sz[1..].iter().sum::<f64>() * 0.5;
                e -= 4.0 / n as f64 * (q0 * q0 + qw * qw + q0 * qw);
            }
            Interaction::HammingWeight(values) => {
                let hw = (n as f64 - two_sz.iter().sum::<f64>()) * 0.5;
                e += values[hw.round() as usize];
            }
        }
        e
    }

    /// Catalyst energy `-Σ_k ε_k 2 S_k^z` for given cluster eigenvalues.
    pub fn catalyst_energy(&self, two_sz: &[f64]) -> f64 {
        self.clusters
            .iter()
            .zip(two_sz)
            .map(|(c, &q)| -(c.bias as f64) * q)
            .sum()
    }

    /// Per-qubit bias vector matching the cluster layout (cluster 0 first).
    pub fn bias_vector(&self, n: usize) -> Result<Vec<i8>, ModelError> {
        let sizes = self.cluster_sizes(n)?;
        let mut bias = Vec::with_capacity(n);
        for (c, &sz) in self.clusters.iter().zip(&sizes) {
            bias.extend(std::iter::repeat(c.bias).take(sz));
        }
        Ok(bias)
    }
}

// ---------------------------------------------------------------------------
// model builders
// ---------------------------------------------------------------------------

/// Energy-per-Hamming-weight table of the p-spin model, `-n (1 - 2k/n)^p`.
pub fn pspin_hamming_values(n: usize, p: u32) -> Vec<f64> {
    (0..=n)
        .map(|k| -(n as f64) * (1.0 - 2.0 * k as f64 / n as f64).powi(p as i32))
        .collect()
}

/// Fully connected ferromagnetic p-spin model `-n (Σ_i σ_i^z / n)^p`.
///
/// For p ≤ 2 the result is an explicit field/coupling Ising problem; higher
/// p is kept as a Hamming-weight table.
pub fn build_pspin(n: usize, p: u32) -> Result<DiagonalProblem, ModelError> {
    if n == 0 {
        return Err(ModelError::BadSize(n));
    }
    if p == 0 {
        return Err(ModelError::BadParameter("p must be >= 1".into()));
    }
    match p {
        1 => Ok(DiagonalProblem::Ising(IsingProblem::new(
            n,
            vec![-1.0; n],
            Vec::new(),
            1.0,
        )?)),
        2 => {
            let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    couplings.push((i, j, 2.0 / n as f64));
                }
            }
            Ok(DiagonalProblem::Ising(
                IsingProblem::new(n, vec![0.0; n], couplings, 1.0)?.with_offset(-1.0),
            ))
        }
        _ => Ok(DiagonalProblem::HammingWeight {
            n,
            values: pspin_hamming_values(n, p),
        }),
    }
}

/// Per-qubit catalyst signs for the p-spin model with agreement fraction c:
/// the first c·n qubits biased toward the ferromagnetic ground state, the
/// rest against it.
pub fn pspin_bias(n: usize, c: f64) -> Result<Vec<i8>, ModelError> {
    SectorModel::pspin(3, c)?.bias_vector(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopVariant {
    /// Anti-aligned fields (R-1, -R) on opposite ends of the ring; the
    /// all-zero state wins and the all-one/one-flip pair sits Δ0 = 1/(2R)·…
    /// above (Δ0 = 1/2 at R = 4).
    FieldCrossing,
    /// Fields swapped to (R, -(R-1)): the all-one state becomes the ground
    /// state and the pair {all-zero, one-flip} is degenerate above it.
    InducedCrossing,
    /// Ring with R = n/2 and residue-class field/coupling patterns; ground
    /// state is a half-ring domain state, first excited pair is
    /// {all-zero, all-one} with Δ0 = 2/R.
    RingFamily,
}

/// Periodic Ising chains with engineered near-degenerate low-energy states.
pub fn build_loop_gadget(n: usize, r: f64, variant: LoopVariant) -> Result<IsingProblem, ModelError> {
    if n % 2 != 0 || n < 6 {
        return Err(ModelError::BadParameter(format!(
            "loop gadgets need even n >= 6 (got {n})"
        )));
    }
    let k = n / 2;
    match variant {
        LoopVariant::FieldCrossing | LoopVariant::InducedCrossing => {
            if r < 4.0 {
                return Err(ModelError::BadParameter(format!("R = {r} below the R >= 4 bound")));
            }
            let mut fields = vec![0.0; n];
            if variant == LoopVariant::FieldCrossing {
                fields[0] = r - 1.0;
                fields[k] = -r;
            } else {
                fields[0] = r;
                fields[k] = -(r - 1.0);
            }
            let couplings = (0..n)
                .map(|i| {
                    let j = if i == k - 1 || i == k { r / 2.0 } else { r };
                    (i, (i + 1) % n, j)
                })
                .collect();
            IsingProblem::new(n, fields, couplings, 1.0 / r)
        }
        LoopVariant::RingFamily => {
            if (r - n as f64 / 2.0).abs() > 1e-12 {
                return Err(ModelError::BadParameter(format!(
                    "ring family requires R = n/2 (got R = {r}, n = {n})"
                )));
            }
            let weak = if n % 4 == 0 {
                // weak bonds after sites n/2 and n-1, value R/2 - 1
                (k, n - 1, r / 2.0 - 1.0)
            } else {
                // weak bonds after sites n/2 - 1 and n-1, value (R-1)/2
                (k - 1, n - 1, (r - 1.0) / 2.0)
            };
            let couplings = (0..n)
                .map(|i| {
                    let j = if i == weak.0 || i == weak.1 { weak.2 } else { r };
                    (i, (i + 1) % n, j)
                })
                .collect();
            // fields +1 on the first half of the ring, -1 on the second
            let fields = (0..n).map(|i| if i < k { 1.0 } else { -1.0 }).collect();
            IsingProblem::new(n, fields, couplings, 1.0 / r)
        }
    }
}

/// Ground state of the ring-family gadget: a domain of ones at the low end
/// of the ring, one site longer when n is a multiple of 4.
pub fn ring_ground_state(n: usize) -> NamedState {
    let ones = if n % 4 == 0 { n / 2 + 1 } else { n / 2 };
    NamedState::custom(n, (1u64 << ones) - 1)
}

/// Two fully connected n/2-clusters with opposing fields h1 (strong) and h2
/// (weak) and uniform 4/n collective couplings, written out per qubit.
///
/// The identity part of the collective squares becomes a constant offset of
/// -1, kept so basis energies match the collective form exactly.
pub fn build_weak_strong(n: usize, h1: f64, h2: f64) -> Result<WeakStrongProblem, ModelError> {
    if n % 2 != 0 || n == 0 {
        return Err(ModelError::BadParameter(format!(
            "weak-strong cluster needs even n (got {n})"
        )));
    }
    let half = n / 2;
    let mut fields = Vec::with_capacity(n);
    fields.extend(std::iter::repeat(-h1).take(half));
    fields.extend(std::iter::repeat(h2).take(half));
    let mut couplings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let same = (i < half) == (j < half);
            let jij = if same { 2.0 / n as f64 } else { 1.0 / n as f64 };
            couplings.push((i, j, jij));
        }
    }
    let ising = IsingProblem::new(n, fields, couplings, 1.0)?.with_offset(-1.0);
    Ok(WeakStrongProblem { n, h1, h2, ising })
}

/// Per-qubit weak-strong model plus its sector decompositions.
#[derive(Clone, Debug)]
pub struct WeakStrongProblem {
    pub n: usize,
    pub h1: f64,
    pub h2: f64,
    pub ising: IsingProblem,
}

impl WeakStrongProblem {
    /// Attach a catalyst agreement fraction c over the weak cluster.
    pub fn sector_model(&self, c: f64) -> Result<SectorModel, ModelError> {
        SectorModel::weak_strong(c, self.h1, self.h2)
    }

    /// ε = +1 on the strong cluster and the first c·(n/2) weak qubits,
    /// -1 on the remaining weak qubits.
    pub fn bias(&self, c: f64) -> Result<Vec<i8>, ModelError> {
        self.sector_model(c)?.bias_vector(self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pspin_single_spin() {
        let p = build_pspin(1, 1).unwrap();
        assert_abs_diff_eq!(p.energy(0b0), -1.0);
        assert_abs_diff_eq!(p.energy(0b1), 1.0);
    }

    #[test]
    fn pspin_zero_magnetization() {
        let p = build_pspin(4, 2).unwrap();
        assert_abs_diff_eq!(p.energy(0b0011), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.energy(0b0101), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn pspin_saturated() {
        let p = build_pspin(6, 3).unwrap();
        assert_abs_diff_eq!(p.energy(0), -6.0);
        assert_abs_diff_eq!(p.energy(0b111111), 6.0);
    }

    #[test]
    fn pspin_table_matches_ising_form() {
        // p = 2 in both representations
        let ising = build_pspin(6, 2).unwrap();
        let table = DiagonalProblem::HammingWeight {
            n: 6,
            values: pspin_hamming_values(6, 2),
        };
        for bits in 0..64u64 {
            assert_abs_diff_eq!(ising.energy(bits), table.energy(bits), epsilon = 1e-12);
        }
    }

    #[test]
    fn pspin_rejects_degenerate_input() {
        assert!(build_pspin(0, 3).is_err());
        assert!(build_pspin(4, 0).is_err());
    }

    #[test]
    fn field_crossing_named_energies() {
        let g = build_loop_gadget(6, 4.0, LoopVariant::FieldCrossing).unwrap();
        let phi = NamedState::all_zero(6);
        let psi = NamedState::all_one(6);
        let eta = NamedState::eta_flip(6);
        assert_abs_diff_eq!(g.classical_energy(phi.bits), -21.0 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.classical_energy(psi.bits), -19.0 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.classical_energy(eta.bits), -19.0 / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn induced_crossing_named_energies() {
        let g = build_loop_gadget(6, 4.0, LoopVariant::InducedCrossing).unwrap();
        assert_abs_diff_eq!(g.classical_energy(NamedState::all_one(6).bits), -21.0 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.classical_energy(NamedState::all_zero(6).bits), -19.0 / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.classical_energy(NamedState::eta_flip(6).bits), -19.0 / 4.0, epsilon = 1e-12);
    }

    /// Exhaustive spectrum check for every gadget variant: ground state and
    /// the named doubly degenerate first excited pair.
    #[test]
    fn gadget_spectra_by_enumeration() {
        let check = |g: &IsingProblem, ground: u64, pair: [u64; 2]| {
            let dim = 1u64 << g.n;
            let mut energies: Vec<(f64, u64)> = (0..dim).map(|b| (g.classical_energy(b), b)).collect();
            energies.sort_by(|a, b| a.0.total_cmp(&b.0));
            assert_eq!(energies[0].1, ground, "ground state mismatch");
            assert!(energies[1].0 - energies[0].0 > 1e-9, "ground state not unique");
            let e1 = energies[1].0;
            assert_abs_diff_eq!(energies[2].0, e1, epsilon = 1e-12);
            assert!(energies[3].0 - e1 > 1e-9, "first excited level not two-fold");
            let found = [energies[1].1, energies[2].1];
            assert!(
                (found[0] == pair[0] && found[1] == pair[1]) || (found[0] == pair[1] && found[1] == pair[0]),
                "degenerate pair mismatch: {found:?} vs {pair:?}"
            );
        };

        for n in [6usize, 8] {
            let g = build_loop_gadget(n, 4.0, LoopVariant::FieldCrossing).unwrap();
            check(&g, 0, [NamedState::all_one(n).bits, NamedState::eta_flip(n).bits]);
            let g = build_loop_gadget(n, 4.0, LoopVariant::InducedCrossing).unwrap();
            check(&g, NamedState::all_one(n).bits, [0, NamedState::eta_flip(n).bits]);
        }
        for n in [6usize, 8, 10, 12] {
            let g = build_loop_gadget(n, n as f64 / 2.0, LoopVariant::RingFamily).unwrap();
            check(
                &g,
                ring_ground_state(n).bits,
                [NamedState::all_zero(n).bits, NamedState::xi(n).bits],
            );
        }
    }

    #[test]
    fn ring_family_classical_gap() {
        for n in [6usize, 8, 10, 12] {
            let r = n as f64 / 2.0;
            let g = build_loop_gadget(n, r, LoopVariant::RingFamily).unwrap();
            let e0 = g.classical_energy(ring_ground_state(n).bits);
            let e1 = g.classical_energy(NamedState::all_one(n).bits);
            assert_abs_diff_eq!(e1 - e0, 2.0 / r, epsilon = 1e-12);
        }
    }

    #[test]
    fn gadget_preconditions() {
        assert!(build_loop_gadget(7, 4.0, LoopVariant::FieldCrossing).is_err());
        assert!(build_loop_gadget(6, 3.0, LoopVariant::FieldCrossing).is_err());
        assert!(build_loop_gadget(4, 2.0, LoopVariant::RingFamily).is_err());
        assert!(build_loop_gadget(8, 5.0, LoopVariant::RingFamily).is_err());
    }

    #[test]
    fn weak_strong_two_qubit_energy() {
        // n = 2: one qubit per cluster, all-up configuration
        let ws = build_weak_strong(2, 1.0, 0.49).unwrap();
        // -(2 h1 (1/2) - 2 h2 (1/2) + (4/2)(1/4 + 1/4 + 1/4))
        assert_abs_diff_eq!(ws.ising.classical_energy(0), -2.01, epsilon = 1e-12);
    }

    #[test]
    fn weak_strong_sector_split() {
        let ws = build_weak_strong(10, 1.0, 0.49).unwrap();
        let two = ws.sector_model(1.0).unwrap();
        assert_eq!(two.clusters.len(), 2);
        let three = ws.sector_model(0.6).unwrap();
        let fr: Vec<f64> = three.clusters.iter().map(|c| c.fraction).collect();
        assert_abs_diff_eq!(fr[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(fr[1], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(fr[2], 0.2, epsilon = 1e-15);
        assert!(build_weak_strong(5, 1.0, 0.49).is_err());
    }

    #[test]
    fn sector_sizes_must_be_integral() {
        let m = SectorModel::pspin(3, 0.8).unwrap();
        assert_eq!(m.cluster_sizes(10).unwrap(), vec![8, 2]);
        assert!(m.cluster_sizes(9).is_err());
        let one = SectorModel::pspin(3, 1.0).unwrap();
        assert_eq!(one.clusters.len(), 1);
        assert_eq!(one.cluster_sizes(7).unwrap(), vec![7]);
    }

    #[test]
    fn assemble_endpoints() {
        let p = build_pspin(4, 3).unwrap();
        let sched = Schedule::uniform_catalyst(4, 1.0, -1).unwrap();
        let h0 = assemble(0.0, &p, &sched).unwrap();
        assert_eq!(h0.driver_weight, 1.0);
        assert!(h0.diagonal.iter().all(|&d| d == 0.0));
        let h1 = assemble(1.0, &p, &sched).unwrap();
        assert_eq!(h1.catalyst_weight, 0.0);
        for (idx, d) in h1.diagonal.iter().enumerate() {
            assert_abs_diff_eq!(*d, p.energy(idx as u64), epsilon = 1e-14);
        }
        let hm = assemble(0.5, &p, &sched).unwrap();
        assert_abs_diff_eq!(hm.catalyst_weight, 0.25, epsilon = 1e-15);
        assert!(assemble(1.2, &p, &sched).is_err());
    }

    #[test]
    fn standard_is_zero_lambda() {
        let p = build_pspin(5, 3).unwrap();
        let std = Schedule::standard(5);
        let dc0 = Schedule::uniform_catalyst(5, 0.0, 1).unwrap();
        for s in [0.0, 0.25, 0.619, 1.0] {
            let a = assemble(s, &p, &std).unwrap();
            let b = assemble(s, &p, &dc0).unwrap();
            assert_eq!(a.driver_weight, b.driver_weight);
            assert_eq!(a.catalyst_weight, b.catalyst_weight);
            assert_eq!(a.diagonal, b.diagonal);
        }
    }

    #[test]
    fn ising_validation() {
        assert!(IsingProblem::new(3, vec![0.0; 3], vec![(0, 0, 1.0)], 1.0).is_err());
        assert!(IsingProblem::new(3, vec![0.0; 3], vec![(0, 3, 1.0)], 1.0).is_err());
        assert!(IsingProblem::new(3, vec![0.0; 3], vec![(0, 1, 1.0), (1, 0, 2.0)], 1.0).is_err());
        assert!(Schedule::catalyst(1.0, vec![2, 0]).is_err());
        assert!(Schedule::catalyst(-0.5, vec![1, 0]).is_err());
    }

    #[test]
    fn eta_is_one_flip_from_all_one() {
        let psi = NamedState::all_one(6);
        let eta = NamedState::eta_flip(6);
        assert_eq!(psi.hamming_distance(&eta), 1);
        assert_eq!(eta.bits, 0b110111);
    }

    #[test]
    fn diagonal_sum_closed_form() {
        let g = build_loop_gadget(6, 4.0, LoopVariant::FieldCrossing).unwrap();
        let p = DiagonalProblem::Ising(g);
        let direct: f64 = (0..64u64).map(|b| p.energy(b)).sum();
        assert_abs_diff_eq!(p.diagonal_sum(), direct, epsilon = 1e-9);

        let hp = build_pspin(8, 3).unwrap();
        let direct: f64 = (0..256u64).map(|b| hp.energy(b)).sum();
        assert_abs_diff_eq!(hp.diagonal_sum(), direct, epsilon = 1e-9);

        let ws = build_weak_strong(6, 1.0, 0.49).unwrap();
        let p = DiagonalProblem::Ising(ws.ising);
        let direct: f64 = (0..64u64).map(|b| p.energy(b)).sum();
        assert_abs_diff_eq!(p.diagonal_sum(), direct, epsilon = 1e-9);
    }
}
