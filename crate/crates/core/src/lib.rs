//! Decide EPR steerability of bipartite quantum states by testing the
//! entanglement of convex mixtures of the state with a locally depolarized
//! copy of itself.
//!
//! For a state ρ shared between Alice and Bob (Bob's side a qubit), the mixture
//!
//! ```text
//! τ¹ = μ ρ + (1 − μ) ρ_A ⊗ 𝕀/2,     μ ∈ [0, 1/√3]
//! ```
//!
//! is entangled only if ρ is steerable from Bob to Alice; the mirrored mixture
//! τ² = μ ρ + (1 − μ) 𝕀/2 ⊗ ρ_B certifies steering from Alice to Bob. Both
//! mixtures are physically realizable with a local depolarizing channel, so the
//! PPT test (or its structural physical approximation) on τ turns any
//! entanglement detector into a one-sided steering detector.
//!
//! The crate provides:
//!
//! - [`matcore`]: dense complex-matrix kernel (Kronecker, partial trace,
//!   partial transpose, Hermitian eigensolver) for dimensions up to 16×16;
//! - [`states`]: validated density matrices, the parametric state families
//!   used as benchmarks, Pauli correlation matrices, seeded random states;
//! - [`channels`]: Kraus channels (depolarizing, amplitude damping, lossy
//!   qubit→qutrit embedding) applied to either subsystem;
//! - [`entdetect`]: PPT verdict with negativity, Wootters concurrence, and the
//!   structural-physical-approximation detector;
//! - [`steer`]: the steering maps, directional verdicts, linear steering
//!   inequality values, and the conditional-state consistency check;
//! - [`sweep`]: threshold bisection over family parameters and 2-D region
//!   scans;
//! - [`selftest`]: the numeric acceptance matrix behind `steerdet selftest`;
//! - [`cli`]: the command-line front end.

pub mod channels;
pub mod cli;
pub mod entdetect;
pub mod matcore;
pub mod selftest;
pub mod states;
pub mod steer;
pub mod sweep;

pub use channels::KrausChannel;
pub use entdetect::EntanglementReport;
pub use matcore::{BipartiteDims, CMatrix, Subsystem};
pub use states::{DensityMatrix, Family, FamilySpec};
pub use steer::{Direction, SteeringReport, DEFAULT_MU, MU_MAX};
