//! Entanglement detectors: the PPT criterion with negativity, Wootters
//! concurrence, and the structural physical approximation (SPA) of partial
//! transposition.
//!
//! The partial transpose is taken on subsystem B throughout; the spectrum of
//! the A-side transpose is identical (global transposition), so nothing
//! observable depends on the convention. For 2⊗2 and 2⊗3 the PPT verdict is
//! exact; in larger dimensions a negative eigenvalue remains a sufficient
//! entanglement certificate and `entangled = false` only means "not detected".

use thiserror::Error;

use crate::matcore::{
    herm_eig, herm_eigvals, kron, partial_transpose, CMatrix, MatError, Subsystem,
};
use crate::states::{pauli, DensityMatrix, StateError};

/// Verdict tolerance ε_v: eigenvalues in (−ε_v, ε_v) count as zero, so rounding
/// can never manufacture a steering certificate.
pub const VERDICT_TOL: f64 = 1e-10;

/// SPA separability threshold: a two-qubit state τ is entangled exactly when
/// the smallest eigenvalue of Λ(τ) drops below 2/9.
pub const SPA_THRESHOLD: f64 = 2.0 / 9.0;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(transparent)]
    Mat(#[from] MatError),

    #[error(transparent)]
    State(#[from] StateError),
}

/// Which detector produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectMethod {
    Ppt,
    Spa,
}

/// Outcome of an entanglement test.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EntanglementReport {
    pub entangled: bool,
    /// Smallest partial-transpose eigenvalue (recovered from the SPA spectrum
    /// for the SPA method).
    pub min_pt_eig: f64,
    /// Sum of |negative partial-transpose eigenvalues|; zero for PPT states.
    pub negativity: f64,
    pub method: DetectMethod,
}

fn report_from_pt_spectrum(eigs: &[f64], method: DetectMethod) -> EntanglementReport {
    let min_pt_eig = eigs[0];
    let negativity = eigs.iter().map(|&e| (-e).max(0.0)).sum();
    EntanglementReport {
        entangled: min_pt_eig < -VERDICT_TOL,
        min_pt_eig,
        negativity,
        method,
    }
}

/// PPT test: partial transpose on B, verdict from its smallest eigenvalue.
pub fn ppt_report(rho: &DensityMatrix) -> Result<EntanglementReport, DetectError> {
    let pt = partial_transpose(rho.mat(), rho.dims(), Subsystem::B)?;
    let eigs = herm_eigvals(&pt)?;
    Ok(report_from_pt_spectrum(&eigs, DetectMethod::Ppt))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<(), DetectError> {
    let dims = rho.dims();
    if dims.d_a != 2 || dims.d_b != 2 {
        return Err(StateError::NotTwoQubit {
            d_a: dims.d_a,
            d_b: dims.d_b,
        }
        .into());
    }
    Ok(())
}

/// Principal square root of a Hermitian PSD matrix, small negative rounding
/// clamped to zero.
fn psd_sqrt(m: &CMatrix) -> Result<CMatrix, DetectError> {
    let (vals, vecs) = herm_eig(m)?;
    let n = m.rows();
    let mut scaled = CMatrix::zeros(n, n)?;
    for (j, &val) in vals.iter().enumerate() {
        let root = val.max(0.0).sqrt();
        for i in 0..n {
            scaled.set(i, j, vecs.get(i, j) * root);
        }
    }
    Ok(scaled.mul(&vecs.adjoint())?)
}

/// Wootters concurrence of a two-qubit state, in [0, 1].
///
/// C = max(0, λ₁ − λ₂ − λ₃ − λ₄) where the λ are the descending square roots
/// of the eigenvalues of ρ·ρ̃ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y). Those square
/// roots equal the singular values of √ρ̃·√ρ, which are read off the spectrum
/// of the Hermitian embedding [[0, K], [K†, 0]]; computing them this way, one
/// square root at a time, keeps rank-deficient states accurate (an eigenvalue
/// error ε would become √ε if the λ were rooted after squaring).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, DetectError> {
    require_two_qubit(rho)?;
    let yy = kron(&pauli('y'), &pauli('y'))?;
    let rho_tilde = yy.mul(&rho.mat().conj())?.mul(&yy)?;
    let k = psd_sqrt(&rho_tilde)?.mul(&psd_sqrt(rho.mat())?)?;
    let embedding = CMatrix::from_fn(8, 8, |r, s| {
        if r < 4 && s >= 4 {
            k.get(r, s - 4)
        } else if r >= 4 && s < 4 {
            k.get(s, r - 4).conj()
        } else {
            crate::matcore::c(0.0, 0.0)
        }
    })?;
    // Spectrum is {±σ_i(K)}; the top four ascending entries are the σ.
    let eigs = herm_eigvals(&embedding)?;
    Ok((eigs[7] - eigs[6] - eigs[5] - eigs[4]).max(0.0))
}

/// Structural physical approximation of partial transposition:
/// Λ(τ) = (2/9) 𝕀⊗𝕀 + (1/9) [𝕀⊗T](τ). Always a valid state.
pub fn spa_map(tau: &DensityMatrix) -> Result<DensityMatrix, DetectError> {
    require_two_qubit(tau)?;
    let pt = partial_transpose(tau.mat(), tau.dims(), Subsystem::B)?;
    let mat = CMatrix::identity(4)?
        .scale_re(SPA_THRESHOLD)
        .add(&pt.scale_re(1.0 / 9.0))?;
    Ok(DensityMatrix::validate(mat, tau.dims())?)
}

/// SPA entanglement test: entangled exactly when the smallest eigenvalue of
/// Λ(τ) is below 2/9. The reported partial-transpose data is recovered through
/// the affine spectrum shift eig(Λ) = 2/9 + eig(PT)/9.
pub fn spa_report(tau: &DensityMatrix) -> Result<EntanglementReport, DetectError> {
    let lambda = spa_map(tau)?;
    let spa_eigs = herm_eigvals(lambda.mat())?;
    let entangled = spa_eigs[0] < SPA_THRESHOLD - VERDICT_TOL;
    let recovered: Vec<f64> = spa_eigs.iter().map(|&e| 9.0 * (e - SPA_THRESHOLD)).collect();
    let mut report = report_from_pt_spectrum(&recovered, DetectMethod::Spa);
    report.entangled = entangled;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{kron, BipartiteDims};
    use crate::states::{make_family, random_density, Family, FamilySpec};

    fn fam(family: Family, params: &[(&str, f64)]) -> DensityMatrix {
        make_family(&FamilySpec::new(family, params).unwrap()).unwrap()
    }

    fn werner(p: f64) -> DensityMatrix {
        fam(Family::Werner, &[("p", p)])
    }

    #[test]
    fn ppt_maximally_mixed() {
        let rho = DensityMatrix::validate(
            CMatrix::identity(4).unwrap().scale_re(0.25),
            BipartiteDims::new(2, 2).unwrap(),
        )
        .unwrap();
        let rep = ppt_report(&rho).unwrap();
        assert!(!rep.entangled);
        assert!((rep.min_pt_eig - 0.25).abs() < 1e-12);
        assert!(rep.negativity < 1e-12);
    }

    #[test]
    fn ppt_werner_closed_form() {
        // PT spectrum of the Werner family has minimum (1 − 3p)/4.
        for &p in &[0.2, 0.5, 0.8, 1.0] {
            let rep = ppt_report(&werner(p)).unwrap();
            assert!(
                (rep.min_pt_eig - (1.0 - 3.0 * p) / 4.0).abs() < 1e-10,
                "p = {p}"
            );
            assert_eq!(rep.entangled, p > 1.0 / 3.0 + 1e-9, "p = {p}");
        }
        let singlet = ppt_report(&werner(1.0)).unwrap();
        assert!((singlet.negativity - 0.5).abs() < 1e-10);
    }

    #[test]
    fn concurrence_product_state_zero() {
        let a = random_density(21, 2, 1).unwrap();
        let b = random_density(22, 2, 1).unwrap();
        let joint = DensityMatrix::validate(
            kron(a.mat(), b.mat()).unwrap(),
            BipartiteDims::new(2, 2).unwrap(),
        )
        .unwrap();
        assert!(concurrence(&joint).unwrap() < 1e-9);
    }

    #[test]
    fn concurrence_munro_is_its_parameter() {
        for &cval in &[0.3, 0.6, 0.8, 1.0] {
            let rho = fam(Family::Munro, &[("c", cval)]);
            assert!(
                (concurrence(&rho).unwrap() - cval).abs() < 1e-9,
                "C = {cval}"
            );
        }
    }

    #[test]
    fn concurrence_werner_closed_form() {
        for &p in &[0.2, 0.6, 1.0] {
            let expect = ((3.0 * p - 1.0) / 2.0_f64).max(0.0);
            assert!(
                (concurrence(&werner(p)).unwrap() - expect).abs() < 1e-9,
                "p = {p}"
            );
        }
    }

    #[test]
    fn spa_map_fixed_point_and_spectrum_shift() {
        let mixed = DensityMatrix::validate(
            CMatrix::identity(4).unwrap().scale_re(0.25),
            BipartiteDims::new(2, 2).unwrap(),
        )
        .unwrap();
        let out = spa_map(&mixed).unwrap();
        assert!(out.mat().max_abs_diff(mixed.mat()) < 1e-12);

        for seed in 0..20u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            let pt = partial_transpose(rho.mat(), rho.dims(), Subsystem::B).unwrap();
            let pt_eigs = herm_eigvals(&pt).unwrap();
            let spa_eigs = herm_eigvals(spa_map(&rho).unwrap().mat()).unwrap();
            for (s, p) in spa_eigs.iter().zip(&pt_eigs) {
                assert!((s - (SPA_THRESHOLD + p / 9.0)).abs() < 1e-11, "seed {seed}");
            }
        }

        let singlet_spa = spa_map(&werner(1.0)).unwrap();
        let min = herm_eigvals(singlet_spa.mat()).unwrap()[0];
        assert!((min - 1.0 / 6.0).abs() < 1e-10);
    }

    #[test]
    fn spa_verdict_matches_ppt_on_families() {
        assert!(!spa_report(&fam(Family::Msms, &[("tau", 0.0)])).unwrap().entangled);
        assert!(spa_report(&werner(0.6)).unwrap().entangled);
        for seed in 0..50u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            assert_eq!(
                spa_report(&rho).unwrap().entangled,
                ppt_report(&rho).unwrap().entangled,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn concurrence_iff_npt_on_random_states() {
        for seed in 0..200u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            let conc = concurrence(&rho).unwrap();
            let npt = ppt_report(&rho).unwrap().entangled;
            assert_eq!(conc > 1e-9, npt, "seed {seed}: C = {conc}");
        }
    }

    #[test]
    fn negativity_shrinks_under_mixing_with_identity() {
        let quarter = CMatrix::identity(4).unwrap().scale_re(0.25);
        for seed in 0..20u64 {
            let rho = random_density(seed, 2, 2).unwrap();
            let base = ppt_report(&rho).unwrap().negativity;
            for &lam in &[0.0, 0.25, 0.5, 0.75, 1.0] {
                let mixed = DensityMatrix::validate(
                    rho.mat()
                        .scale_re(lam)
                        .add(&quarter.scale_re(1.0 - lam))
                        .unwrap(),
                    rho.dims(),
                )
                .unwrap();
                let neg = ppt_report(&mixed).unwrap().negativity;
                assert!(neg <= base + 1e-12, "seed {seed} λ {lam}");
            }
        }
    }

    #[test]
    fn ppt_on_qubit_qutrit_family() {
        for &mu in &[0.0, 0.3, 0.7] {
            let entangled = fam(Family::LossyWerner, &[("p", 0.8), ("mu", mu)]);
            assert!(ppt_report(&entangled).unwrap().entangled, "mu = {mu}");
            let separable = fam(Family::LossyWerner, &[("p", 0.2), ("mu", mu)]);
            assert!(!ppt_report(&separable).unwrap().entangled, "mu = {mu}");
        }
    }

    #[test]
    fn two_qubit_preconditions_enforced() {
        let rho23 = random_density(9, 2, 3).unwrap();
        assert!(concurrence(&rho23).is_err());
        assert!(spa_map(&rho23).is_err());
        assert!(spa_report(&rho23).is_err());
    }
}
