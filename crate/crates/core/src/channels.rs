//! Kraus-operator channels applied to one subsystem of a bipartite state.
//!
//! The depolarizing channel is the physical realization of the steering maps:
//! applying it with strength p to Bob's qubit sends ρ to
//! p ρ + (1 − p) ρ_A ⊗ 𝕀/2, and mirrored on Alice to p ρ + (1 − p) 𝕀/2 ⊗ ρ_B.
//! The lossy channel embeds a qubit into a qutrit with basis |0⟩, |1⟩, |v⟩ and
//! replaces it with the vacuum |v⟩ with probability μ.

use thiserror::Error;

use crate::matcore::{kron, CMatrix, MatError, Subsystem};
use crate::states::{pauli, DensityMatrix, StateError};

/// Completeness tolerance for Σ K†K = 𝕀.
pub const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Mat(#[from] MatError),

    #[error("channel output failed validation: {0}")]
    BrokenChannel(#[from] StateError),

    #[error("channel parameter {name} = {value} outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("Kraus operators have inconsistent shapes")]
    InconsistentShapes,

    #[error("completeness violated: max |ΣK†K - 𝕀| entry is {defect:.3e} (tolerance {COMPLETENESS_TOL:.0e})")]
    NotComplete { defect: f64 },

    #[error("channel input dimension {in_dim} does not match subsystem dimension {sub_dim}")]
    SubsystemMismatch { in_dim: usize, sub_dim: usize },
}

/// A completely positive trace-preserving map given by a finite Kraus family,
/// possibly rectangular (output dimension × input dimension).
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
    in_dim: usize,
    out_dim: usize,
}

impl KrausChannel {
    /// Build a channel from its Kraus operators, enforcing completeness.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self, ChannelError> {
        let first = ops.first().ok_or(ChannelError::InconsistentShapes)?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if ops
            .iter()
            .any(|k| k.rows() != out_dim || k.cols() != in_dim)
        {
            return Err(ChannelError::InconsistentShapes);
        }
        let mut sum = CMatrix::zeros(in_dim, in_dim)?;
        for k in &ops {
            sum = sum.add(&k.adjoint().mul(k)?)?;
        }
        let defect = sum.max_abs_diff(&CMatrix::identity(in_dim)?);
        if defect > COMPLETENESS_TOL {
            return Err(ChannelError::NotComplete { defect });
        }
        Ok(Self {
            ops,
            in_dim,
            out_dim,
        })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// The do-nothing channel on a d-dimensional system.
    pub fn identity(d: usize) -> Result<Self, ChannelError> {
        Self::new(vec![CMatrix::identity(d)?])
    }
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<(), ChannelError> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(ChannelError::ParamOutOfRange { name, value });
    }
    Ok(())
}

/// Qubit depolarizing channel of strength p:
/// K₀ = √(1+3p)/2 𝕀 and K_i = √(1−p)/2 σ_i for i = x, y, z.
/// Sends ρ to p ρ + (1 − p) 𝕀/2.
pub fn depolarizing(p: f64) -> Result<KrausChannel, ChannelError> {
    check_unit_interval("p", p)?;
    let k0 = CMatrix::identity(2)?.scale_re((1.0 + 3.0 * p).sqrt() / 2.0);
    let w = (1.0 - p).sqrt() / 2.0;
    let ops = vec![
        k0,
        pauli('x').scale_re(w),
        pauli('y').scale_re(w),
        pauli('z').scale_re(w),
    ];
    KrausChannel::new(ops)
}

/// Qubit amplitude damping of strength p:
/// E₀ = |0⟩⟨0| + √(1−p)|1⟩⟨1| and E₁ = √p |0⟩⟨1|.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel, ChannelError> {
    check_unit_interval("p", p)?;
    let e0 = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - p).sqrt()]])?;
    let e1 = CMatrix::from_real_rows(&[&[0.0, p.sqrt()], &[0.0, 0.0]])?;
    KrausChannel::new(vec![e0, e1])
}

/// Lossy qubit→qutrit channel: with probability 1−μ the qubit is isometrically
/// embedded in the |0⟩, |1⟩ block of the qutrit, with probability μ it is
/// replaced by the vacuum |v⟩ (the third basis state).
pub fn lossy(mu: f64) -> Result<KrausChannel, ChannelError> {
    check_unit_interval("mu", mu)?;
    let keep = (1.0 - mu).sqrt();
    let drop = mu.sqrt();
    let embed = CMatrix::from_real_rows(&[&[keep, 0.0], &[0.0, keep], &[0.0, 0.0]])?;
    let to_vac0 = CMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0], &[drop, 0.0]])?;
    let to_vac1 = CMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0], &[0.0, drop]])?;
    KrausChannel::new(vec![embed, to_vac0, to_vac1])
}

/// Apply a channel to one subsystem: Σ (K_i ⊗ 𝕀) ρ (K_i ⊗ 𝕀)† on A, or with
/// the factors swapped on B. The output is validated and dimension changes
/// propagate into the output's dims tag.
pub fn apply(
    ch: &KrausChannel,
    rho: &DensityMatrix,
    sub: Subsystem,
) -> Result<DensityMatrix, ChannelError> {
    let dims = rho.dims();
    let sub_dim = dims.dim_of(sub);
    if ch.in_dim != sub_dim {
        return Err(ChannelError::SubsystemMismatch {
            in_dim: ch.in_dim,
            sub_dim,
        });
    }
    let (out_da, out_db) = match sub {
        Subsystem::A => (ch.out_dim, dims.d_b),
        Subsystem::B => (dims.d_a, ch.out_dim),
    };
    let out_dims = crate::matcore::BipartiteDims::new(out_da, out_db)?;
    let n = out_dims.total();
    let mut acc = CMatrix::zeros(n, n)?;
    for k in &ch.ops {
        let lifted = match sub {
            Subsystem::A => kron(k, &CMatrix::identity(dims.d_b)?)?,
            Subsystem::B => kron(&CMatrix::identity(dims.d_a)?, k)?,
        };
        let term = lifted.mul(rho.mat())?.mul(&lifted.adjoint())?;
        acc = acc.add(&term)?;
    }
    Ok(DensityMatrix::validate(acc, out_dims)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, BipartiteDims};
    use crate::states::{make_family, random_density, Family, FamilySpec};

    fn werner(p: f64) -> DensityMatrix {
        make_family(&FamilySpec::new(Family::Werner, &[("p", p)]).unwrap()).unwrap()
    }

    #[test]
    fn depolarizing_p1_is_identity_channel() {
        let ch = depolarizing(1.0).unwrap();
        assert!(ch.ops()[0].max_abs_diff(&CMatrix::identity(2).unwrap()) < 1e-12);
        for k in &ch.ops()[1..] {
            assert!(k.max_abs() < 1e-12);
        }
        let rho = random_density(5, 2, 2).unwrap();
        let out = apply(&ch, &rho, Subsystem::B).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-12);
    }

    #[test]
    fn depolarizing_completeness_over_p_grid() {
        for i in 0..=10 {
            let p = i as f64 / 10.0;
            let ch = depolarizing(p).unwrap();
            let mut sum = CMatrix::zeros(2, 2).unwrap();
            for k in ch.ops() {
                sum = sum.add(&k.adjoint().mul(k).unwrap()).unwrap();
            }
            assert!(sum.max_abs_diff(&CMatrix::identity(2).unwrap()) < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn depolarizing_p0_fully_mixes_bob() {
        let rho = random_density(8, 2, 2).unwrap();
        let ch = depolarizing(0.0).unwrap();
        let out = apply(&ch, &rho, Subsystem::B).unwrap();
        let expect = kron(
            &rho.marginal(Subsystem::A),
            &CMatrix::identity(2).unwrap().scale_re(0.5),
        )
        .unwrap();
        assert!(out.mat().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn depolarizing_identity_on_both_sides() {
        // ρ_f = p ρ + (1−p) ρ_A ⊗ 𝕀/2 on Bob; mirrored marginal on Alice.
        let p = 0.4;
        let rho = werner(0.9);
        let out = apply(&depolarizing(p).unwrap(), &rho, Subsystem::B).unwrap();
        let expect = rho
            .mat()
            .scale_re(p)
            .add(
                &kron(
                    &rho.marginal(Subsystem::A),
                    &CMatrix::identity(2).unwrap().scale_re(0.5),
                )
                .unwrap()
                .scale_re(1.0 - p),
            )
            .unwrap();
        assert!(out.mat().max_abs_diff(&expect) < 1e-12);

        let out_a = apply(&depolarizing(p).unwrap(), &rho, Subsystem::A).unwrap();
        let expect_a = rho
            .mat()
            .scale_re(p)
            .add(
                &kron(
                    &CMatrix::identity(2).unwrap().scale_re(0.5),
                    &rho.marginal(Subsystem::B),
                )
                .unwrap()
                .scale_re(1.0 - p),
            )
            .unwrap();
        assert!(out_a.mat().max_abs_diff(&expect_a) < 1e-12);
    }

    #[test]
    fn depolarizing_composes_multiplicatively() {
        let (p, q) = (0.7, 0.45);
        for seed in 0..20u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            let once = apply(&depolarizing(p * q).unwrap(), &rho, Subsystem::B).unwrap();
            let twice = apply(
                &depolarizing(q).unwrap(),
                &apply(&depolarizing(p).unwrap(), &rho, Subsystem::B).unwrap(),
                Subsystem::B,
            )
            .unwrap();
            assert!(once.mat().max_abs_diff(twice.mat()) < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn amplitude_damping_p0_is_identity() {
        let ch = amplitude_damping(0.0).unwrap();
        let rho = random_density(3, 2, 2).unwrap();
        let out = apply(&ch, &rho, Subsystem::A).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-12);
    }

    #[test]
    fn lossy_endpoints_and_mixture() {
        // μ = 0: isometric embedding, leading 2×2 block of Bob preserved.
        let rho = werner(0.5);
        let out = apply(&lossy(0.0).unwrap(), &rho, Subsystem::B).unwrap();
        assert_eq!(out.dims(), BipartiteDims::new(2, 3).unwrap());
        for a1 in 0..2 {
            for b1 in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        let got = out.mat().get(a1 * 3 + b1, a2 * 3 + b2);
                        let want = rho.mat().get(a1 * 2 + b1, a2 * 2 + b2);
                        assert!((got - want).norm() < 1e-12);
                    }
                }
            }
        }

        // μ = 1: Bob is the vacuum regardless of input.
        let out = apply(&lossy(1.0).unwrap(), &rho, Subsystem::B).unwrap();
        let expect = kron(
            &rho.marginal(Subsystem::A),
            &CMatrix::projector(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
        )
        .unwrap();
        assert!(out.mat().max_abs_diff(&expect) < 1e-12);

        // μ = 0.3 on Bob of a Werner state reproduces the direct convex
        // mixture used by the lossy_werner family.
        for &p in &[0.0, 0.5, 1.0] {
            let channel_route = apply(&lossy(0.3).unwrap(), &werner(p), Subsystem::B).unwrap();
            let direct = make_family(
                &FamilySpec::new(Family::LossyWerner, &[("p", p), ("mu", 0.3)]).unwrap(),
            )
            .unwrap();
            assert!(
                channel_route.mat().max_abs_diff(direct.mat()) < 1e-12,
                "p = {p}"
            );
        }
    }

    #[test]
    fn apply_validates_output_on_random_states() {
        for seed in 0..50u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            apply(&depolarizing(0.3).unwrap(), &rho, Subsystem::B).unwrap();
            apply(&amplitude_damping(0.6).unwrap(), &rho, Subsystem::A).unwrap();
            apply(&lossy(0.25).unwrap(), &rho, Subsystem::B).unwrap();
        }
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let rho = random_density(1, 2, 3).unwrap();
        let err = apply(&depolarizing(0.5).unwrap(), &rho, Subsystem::B).unwrap_err();
        assert!(matches!(err, ChannelError::SubsystemMismatch { .. }));
    }

    #[test]
    fn channel_params_validated() {
        assert!(matches!(
            depolarizing(1.5),
            Err(ChannelError::ParamOutOfRange { .. })
        ));
        assert!(matches!(
            lossy(-0.1),
            Err(ChannelError::ParamOutOfRange { .. })
        ));
    }
}
