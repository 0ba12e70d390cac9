//! Numerical toolkit for quantum annealing schedules with a diagonal catalyst.
//!
//! The interpolating Hamiltonian is
//!
//! ```text
//! H(s) = (1-s) H_D  +  λ s(1-s) H_B  +  s H_P ,      s ∈ [0, 1]
//! ```
//!
//! with the uniform transverse-field driver `H_D = -Σ σ^x`, a diagonal bias
//! `H_B = -Σ ε_i σ^z` (ε_i ∈ {-1, 0, +1}) that is switched on and off during
//! the interpolation, and a diagonal problem Hamiltonian `H_P`.
//!
//! Modules:
//!
//! - [`models`]: problem Hamiltonians (p-spin, weak-strong cluster, loop
//!   gadgets, large-p limits) and interpolation schedules.
//! - [`exact`]: full Hilbert-space spectra and gap traces for small n.
//! - [`collective`]: permutation-symmetric (Dicke-sector) solvers for large n,
//!   finite-size extrapolation, catalyst-strength optimisation, gap scaling
//!   fits.
//! - [`meanfield`]: zero-temperature free-energy landscapes, first-order
//!   transition detection, (c, λ) phase diagrams.
//! - [`semiclassical`]: large-spin energy densities and magnetization
//!   trajectories of the global minimum.
//! - [`perturbative`]: first-order degenerate perturbation theory around
//!   s = 1 and predicted level crossings.
//!
//! Numerics live in [`eigen`], [`lanczos`], [`banded`], [`optimize`],
//! [`fit`], and [`trace`].

pub mod banded;
pub mod collective;
pub mod eigen;
pub mod exact;
pub mod fit;
pub mod lanczos;
pub mod meanfield;
pub mod models;
pub mod optimize;
pub mod perturbative;
pub mod rng;
pub mod semiclassical;
pub mod trace;

pub use models::{DiagonalProblem, IsingProblem, NamedState, Schedule, ScheduleKind, SectorModel};
pub use trace::{GapMinimum, GapTrace, TraceConfig};
