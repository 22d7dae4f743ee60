//! Steering detection through entanglement of the mixed states
//!
//! ```text
//! τ¹ = μ ρ + (1 − μ) ρ_A ⊗ 𝕀/2        (certifies Bob → Alice)
//! τ² = μ ρ + (1 − μ) 𝕀/2 ⊗ ρ_B        (certifies Alice → Bob)
//! ```
//!
//! with μ ∈ [0, 1/√3]. Entanglement of τ¹ (τ²) implies ρ is steerable from Bob
//! to Alice (Alice to Bob). The certificate is one-sided: non-detection is
//! inconclusive, never a proof of unsteerability, and the report types keep
//! that distinction explicit. The construction needs the *untrusted* side to
//! be a qubit, so τ¹ exists whenever d_B = 2 (any d_A) and τ² whenever
//! d_A = 2 (any d_B).
//!
//! The module also evaluates the 2- and 3-settings linear steering
//! inequalities in their correlation-matrix closed form: the quantum maximum
//! over measurement settings is √(sum of the n largest eigenvalues of TᵀT),
//! with violation above 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entdetect::{ppt_report, DetectError, VERDICT_TOL};
use crate::matcore::{c, herm_eigvals, kron, partial_trace, CMatrix, MatError, Subsystem};
use crate::states::{correlation_matrix, pauli, DensityMatrix, StateError};

/// Upper end of the admissible mixing range, 1/√3. Beyond it the construction
/// loses its local-hidden-state guarantee, so detection would be meaningless.
pub const MU_MAX: f64 = 0.577_350_269_189_625_8;

/// Default mixing parameter. Detection strength is monotone in μ, so the
/// endpoint 1/√3 is the most powerful admissible choice.
pub const DEFAULT_MU: f64 = MU_MAX;

/// Slack for μ-range checks, absorbing rounding in caller-computed 1/√3.
const MU_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SteerError {
    #[error(transparent)]
    Mat(#[from] MatError),

    #[error(transparent)]
    State(#[from] StateError),

    #[error(transparent)]
    Detect(#[from] DetectError),

    #[error("mu = {0} outside [0, 1/√3]")]
    MuOutOfRange(f64),

    #[error("direction {direction} requires the untrusted subsystem to be a qubit, got dimension {dim}")]
    UntrustedNotQubit { direction: Direction, dim: usize },

    #[error("no qubit subsystem: dims {d_a}⊗{d_b} admit neither steering map")]
    NoQubitSubsystem { d_a: usize, d_b: usize },

    #[error("linear steering inequality needs 2 or 3 settings, got {0}")]
    BadSettings(usize),

    #[error("effect is not a valid POVM element: {reason} (residual {residual:.3e})")]
    InvalidEffect { reason: &'static str, residual: f64 },

    #[error("effect dimension {got} does not match subsystem dimension {expected}")]
    EffectDimMismatch { expected: usize, got: usize },
}

/// Steering direction named by who steers whom: `BtoA` means Bob's
/// measurements steer Alice's conditional states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    BtoA,
    AtoB,
}

impl Direction {
    /// The subsystem that is depolarized (the untrusted, measured side).
    fn untrusted(self) -> Subsystem {
        match self {
            Direction::BtoA => Subsystem::B,
            Direction::AtoB => Subsystem::A,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::BtoA => "b_to_a",
            Direction::AtoB => "a_to_b",
        })
    }
}

/// Mixing parameter and direction for one steering map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringMapParams {
    pub mu: f64,
    pub direction: Direction,
}

/// Tri-state verdict: the criterion is one-sided, so "not detected" is kept
/// distinct from any claim of unsteerability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    Detected,
    NotDetected,
    NotApplicable,
}

impl Detection {
    pub fn is_detected(self) -> bool {
        self == Detection::Detected
    }
}

/// Directional steering verdicts with their PPT witness strengths.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SteeringReport {
    pub detected_b_to_a: Detection,
    pub detected_a_to_b: Detection,
    /// Smallest partial-transpose eigenvalue of τ¹ (absent when B→A does not
    /// apply); more negative means a stronger witness.
    pub witness_min_eig_b_to_a: Option<f64>,
    pub witness_min_eig_a_to_b: Option<f64>,
    pub mu_used: f64,
    /// 2- and 3-settings linear steering inequality values, 2⊗2 states only.
    pub ls2_value: Option<f64>,
    pub ls3_value: Option<f64>,
}

fn check_mu(mu: f64) -> Result<(), SteerError> {
    if !mu.is_finite() || !(0.0..=MU_MAX + MU_SLACK).contains(&mu) {
        return Err(SteerError::MuOutOfRange(mu));
    }
    Ok(())
}

/// Build τ¹ or τ²: mix ρ with the product of its trusted-side marginal and a
/// maximally mixed qubit on the untrusted side. The trusted-side marginal of
/// the output equals that of ρ.
pub fn steering_map(
    rho: &DensityMatrix,
    params: SteeringMapParams,
) -> Result<DensityMatrix, SteerError> {
    check_mu(params.mu)?;
    let dims = rho.dims();
    let untrusted_dim = dims.dim_of(params.direction.untrusted());
    if untrusted_dim != 2 {
        return Err(SteerError::UntrustedNotQubit {
            direction: params.direction,
            dim: untrusted_dim,
        });
    }
    let half = CMatrix::identity(2)?.scale_re(0.5);
    let background = match params.direction {
        Direction::BtoA => kron(&rho.marginal(Subsystem::A), &half)?,
        Direction::AtoB => kron(&half, &rho.marginal(Subsystem::B))?,
    };
    let mat = rho
        .mat()
        .scale_re(params.mu)
        .add(&background.scale_re(1.0 - params.mu))?;
    Ok(DensityMatrix::validate(mat, dims)?)
}

/// Directional steering verdicts for any state with at least one qubit
/// subsystem: each applicable direction is detected exactly when the PPT test
/// finds its steering-map output entangled.
pub fn thm1_verdict(rho: &DensityMatrix, mu: f64) -> Result<SteeringReport, SteerError> {
    check_mu(mu)?;
    let dims = rho.dims();
    if dims.d_a != 2 && dims.d_b != 2 {
        return Err(SteerError::NoQubitSubsystem {
            d_a: dims.d_a,
            d_b: dims.d_b,
        });
    }

    let mut verdicts = [Detection::NotApplicable; 2];
    let mut witnesses = [None; 2];
    for (slot, direction) in [Direction::BtoA, Direction::AtoB].into_iter().enumerate() {
        if dims.dim_of(direction.untrusted()) != 2 {
            continue;
        }
        let tau = steering_map(rho, SteeringMapParams { mu, direction })?;
        let report = ppt_report(&tau)?;
        verdicts[slot] = if report.entangled {
            Detection::Detected
        } else {
            Detection::NotDetected
        };
        witnesses[slot] = Some(report.min_pt_eig);
    }

    let (ls2_value, ls3_value) = if dims.d_a == 2 && dims.d_b == 2 {
        (Some(ls_value(rho, 2)?), Some(ls_value(rho, 3)?))
    } else {
        (None, None)
    };

    Ok(SteeringReport {
        detected_b_to_a: verdicts[0],
        detected_a_to_b: verdicts[1],
        witness_min_eig_b_to_a: witnesses[0],
        witness_min_eig_a_to_b: witnesses[1],
        mu_used: mu,
        ls2_value,
        ls3_value,
    })
}

/// Quantum maximum of the n-settings linear steering inequality for a
/// two-qubit state: √(sum of the n largest eigenvalues of TᵀT) with T the
/// Pauli correlation matrix. Values above 1 witness both-way steering.
pub fn ls_value(rho: &DensityMatrix, n: usize) -> Result<f64, SteerError> {
    if n != 2 && n != 3 {
        return Err(SteerError::BadSettings(n));
    }
    let t = correlation_matrix(rho)?.0;
    let mut gram = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    let m = CMatrix::from_fn(3, 3, |i, j| c(gram[i][j], 0.0))?;
    let eigs = herm_eigvals(&m)?;
    let top: f64 = eigs.iter().rev().take(n).sum();
    Ok(top.max(0.0).sqrt())
}

/// Whether the n-settings inequality is strictly violated.
pub fn ls_violated(rho: &DensityMatrix, n: usize) -> Result<bool, SteerError> {
    Ok(ls_value(rho, n)? > 1.0 + VERDICT_TOL)
}

fn check_effect(effect: &CMatrix, dim: usize) -> Result<(), SteerError> {
    if !effect.is_square() || effect.rows() != dim {
        return Err(SteerError::EffectDimMismatch {
            expected: dim,
            got: effect.rows(),
        });
    }
    let defect = effect.hermiticity_defect();
    if defect > 1e-10 {
        return Err(SteerError::InvalidEffect {
            reason: "not Hermitian",
            residual: defect,
        });
    }
    let eigs = herm_eigvals(effect)?;
    if eigs[0] < -1e-10 {
        return Err(SteerError::InvalidEffect {
            reason: "not positive semidefinite",
            residual: eigs[0],
        });
    }
    if eigs[eigs.len() - 1] > 1.0 + 1e-10 {
        return Err(SteerError::InvalidEffect {
            reason: "exceeds the identity",
            residual: eigs[eigs.len() - 1] - 1.0,
        });
    }
    Ok(())
}

/// Unnormalized conditional state on the unmeasured side after the POVM
/// element `effect` fires on `sub`: Tr_sub[(M ⊗ 𝕀) ρ] (factors ordered to
/// match `sub`). Its trace is the outcome probability.
pub fn conditional_state(
    rho: &DensityMatrix,
    effect: &CMatrix,
    sub: Subsystem,
) -> Result<CMatrix, SteerError> {
    let dims = rho.dims();
    check_effect(effect, dims.dim_of(sub))?;
    let lifted = match sub {
        Subsystem::A => kron(effect, &CMatrix::identity(dims.d_b)?)?,
        Subsystem::B => kron(&CMatrix::identity(dims.d_a)?, effect)?,
    };
    Ok(partial_trace(&lifted.mul(rho.mat())?, dims, sub)?)
}

/// Projector onto the +1 eigenstate of the Pauli operator on `axis`.
pub fn pauli_plus_projector(axis: char) -> CMatrix {
    CMatrix::identity(2)
        .expect("2x2 within cap")
        .add(&pauli(axis))
        .expect("same shape")
        .scale_re(0.5)
}

/// Consistency residual of the steering-map conditional state, computed two
/// independent ways for a two-qubit ρ, a POVM element on Alice, and μ.
///
/// Route one evaluates Tr_A[(M ⊗ 𝕀) τ¹] directly on τ¹ = μρ + (1−μ)ρ_A⊗𝕀/2.
/// Route two assembles the same operator from joint probabilities on ρ alone:
///
/// ```text
/// ς = P(a|A) 𝕀/2 + μ Σ_{n ∈ {x,y,z}} [P(a,+|A,n̂) − P(a|A)/2] σ_n
/// ```
///
/// Returns the largest entrywise difference; agreement is what makes the
/// steering-map construction admit a local-hidden-state explanation whenever
/// ρ does.
pub fn eq18_consistency(
    rho: &DensityMatrix,
    effect: &CMatrix,
    mu: f64,
) -> Result<f64, SteerError> {
    let dims = rho.dims();
    if dims.d_a != 2 || dims.d_b != 2 {
        return Err(StateError::NotTwoQubit {
            d_a: dims.d_a,
            d_b: dims.d_b,
        }
        .into());
    }
    check_mu(mu)?;
    check_effect(effect, 2)?;

    let tau = steering_map(
        rho,
        SteeringMapParams {
            mu,
            direction: Direction::BtoA,
        },
    )?;
    let direct = conditional_state(&tau, effect, Subsystem::A)?;

    let joint_prob = |bob_op: &CMatrix| -> Result<f64, SteerError> {
        let lifted = kron(effect, bob_op)?;
        Ok(lifted.mul(rho.mat())?.trace().re)
    };
    let p_a = joint_prob(&CMatrix::identity(2)?)?;
    let mut assembled = CMatrix::identity(2)?.scale_re(p_a / 2.0);
    for axis in ['x', 'y', 'z'] {
        let p_plus = joint_prob(&pauli_plus_projector(axis))?;
        assembled = assembled.add(&pauli(axis).scale_re(mu * (p_plus - p_a / 2.0)))?;
    }

    Ok(direct.max_abs_diff(&assembled))
}
