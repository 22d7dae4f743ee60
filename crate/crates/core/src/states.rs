//! Validated density matrices, parametric state families, Pauli correlation
//! matrices, and seeded random-state generation.
//!
//! Basis ordering is fixed as |00⟩, |01⟩, |10⟩, |11⟩ (A-major tensor order),
//! matching the explicit matrices of the benchmark families. The qubit-qutrit
//! family embeds Bob's qubit in a qutrit with basis |0⟩, |1⟩, |v⟩, keeping the
//! qubit block as the leading 2×2 principal block.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels;
use crate::matcore::{c, herm_eigvals, kron, partial_trace, BipartiteDims, CMatrix, MatError, Subsystem, C64};

/// Hermiticity / trace / positivity tolerance for state validation.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum StateError {
    #[error(transparent)]
    Mat(#[from] MatError),

    #[error("channel application inside a family constructor failed: {0}")]
    Channel(Box<crate::channels::ChannelError>),

    #[error("not Hermitian: max |m - m†| entry is {defect:.3e} (tolerance {STATE_TOL:.0e})")]
    NotHermitian { defect: f64 },

    #[error("trace is {trace} (must equal 1 within {STATE_TOL:.0e})")]
    TraceNotOne { trace: f64 },

    #[error("negative eigenvalue {min_eig:.6e} below -{STATE_TOL:.0e}")]
    NegativeEigenvalue { min_eig: f64 },

    #[error("matrix is {got}x{got} but dims {d_a}⊗{d_b} require {expected}x{expected}")]
    DimsMismatch {
        d_a: usize,
        d_b: usize,
        expected: usize,
        got: usize,
    },

    #[error("operation requires a 2⊗2 state, got {d_a}⊗{d_b}")]
    NotTwoQubit { d_a: usize, d_b: usize },

    #[error("unknown family '{0}'")]
    UnknownFamily(String),

    #[error("family '{family}' has no parameter '{name}'")]
    UnknownParam { family: Family, name: String },

    #[error("family '{family}' is missing parameter '{name}'")]
    MissingParam { family: Family, name: &'static str },

    #[error("parameter '{name}' = {value} outside [{lo}, {hi}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("state file field 'matrix' has {got} entries, dims {d_a}⊗{d_b} require {expected}")]
    BadMatrixLength {
        d_a: usize,
        d_b: usize,
        expected: usize,
        got: usize,
    },

    #[error("correlation-matrix trace has imaginary part {imag:.3e} (limit {STATE_TOL:.0e})")]
    CorrelationNotReal { imag: f64 },

    #[error("correlation-matrix entry {value} outside [-1, 1] beyond tolerance 1e-9")]
    CorrelationOutOfRange { value: f64 },
}

impl From<crate::channels::ChannelError> for StateError {
    fn from(e: crate::channels::ChannelError) -> Self {
        StateError::Channel(Box::new(e))
    }
}

/// Pauli matrix σ_x, σ_y or σ_z selected by axis character.
pub fn pauli(axis: char) -> CMatrix {
    let rows: [[C64; 2]; 2] = match axis {
        'x' => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        'y' => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        'z' => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        other => panic!("no Pauli axis '{other}'"),
    };
    CMatrix::from_fn(2, 2, |i, j| rows[i][j]).expect("2x2 within cap")
}

/// Projector |ψ⁻⟩⟨ψ⁻| onto the singlet (|01⟩ − |10⟩)/√2.
pub fn singlet_projector() -> CMatrix {
    CMatrix::projector(&[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).expect("4x4")
}

/// Projector onto (|00⟩ + |11⟩)/√2.
pub fn phi_plus_projector() -> CMatrix {
    CMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).expect("4x4")
}

/// Projector onto (|01⟩ + |10⟩)/√2.
pub fn psi_plus_projector() -> CMatrix {
    CMatrix::projector(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).expect("4x4")
}

/// A validated bipartite density matrix: Hermitian, unit trace, and positive
/// semidefinite within [`STATE_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: BipartiteDims,
}

impl DensityMatrix {
    /// Validate a candidate matrix against all density-matrix invariants,
    /// reporting the violated invariant together with its measured residual.
    pub fn validate(mat: CMatrix, dims: BipartiteDims) -> Result<Self, StateError> {
        if !mat.is_square() || mat.rows() != dims.total() {
            return Err(StateError::DimsMismatch {
                d_a: dims.d_a,
                d_b: dims.d_b,
                expected: dims.total(),
                got: mat.rows(),
            });
        }
        let defect = mat.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(StateError::NotHermitian { defect });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(StateError::TraceNotOne { trace: trace.re });
        }
        let eigs = herm_eigvals(&mat)?;
        let min_eig = eigs[0];
        if min_eig < -STATE_TOL {
            return Err(StateError::NegativeEigenvalue { min_eig });
        }
        Ok(Self { mat, dims })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Reduced state on the given subsystem (the other factor traced out).
    pub fn marginal(&self, sub: Subsystem) -> CMatrix {
        let traced = match sub {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        partial_trace(&self.mat, self.dims, traced).expect("dims validated at construction")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        herm_eigvals(&self.mat).expect("validated Hermitian")[0]
    }
}

/// The named state families used as steering benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Werner,
    Munro,
    WernerDerivative,
    Nmems,
    Msms,
    OneWay,
    AmpDampBell,
    LossyWerner,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Werner,
        Family::Munro,
        Family::WernerDerivative,
        Family::Nmems,
        Family::Msms,
        Family::OneWay,
        Family::AmpDampBell,
        Family::LossyWerner,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Werner => "werner",
            Family::Munro => "munro",
            Family::WernerDerivative => "werner_derivative",
            Family::Nmems => "nmems",
            Family::Msms => "msms",
            Family::OneWay => "one_way",
            Family::AmpDampBell => "amp_damp_bell",
            Family::LossyWerner => "lossy_werner",
        }
    }

    /// Parameter table: (name, lower bound, upper bound).
    pub fn params(&self) -> &'static [(&'static str, f64, f64)] {
        match self {
            Family::Werner => &[("p", 0.0, 1.0)],
            Family::Munro => &[("c", 0.0, 1.0)],
            Family::WernerDerivative => {
                &[("alpha", 0.0, 1.0), ("theta", 0.0, std::f64::consts::FRAC_PI_4)]
            }
            Family::Nmems => &[("p", 0.0, 1.0)],
            Family::Msms => &[("tau", -1.0, 1.0)],
            Family::OneWay => &[("alpha", 0.0, 1.0)],
            Family::AmpDampBell => &[("p", 0.0, 1.0)],
            Family::LossyWerner => &[("p", 0.0, 1.0), ("mu", 0.0, 1.0)],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = StateError;

    fn from_str(s: &str) -> Result<Self, StateError> {
        Family::ALL
            .iter()
            .copied()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| StateError::UnknownFamily(s.to_string()))
    }
}

/// A family together with a full parameter assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(family: Family, params: &[(&str, f64)]) -> Result<Self, StateError> {
        let mut map = BTreeMap::new();
        for &(name, value) in params {
            map.insert(name.to_string(), value);
        }
        let spec = Self { family, params: map };
        spec.checked_params()?;
        Ok(spec)
    }

    /// Resolve the parameter list against the family table, enforcing ranges.
    pub fn checked_params(&self) -> Result<Vec<f64>, StateError> {
        for name in self.params.keys() {
            if !self.family.params().iter().any(|&(n, _, _)| n == name) {
                return Err(StateError::UnknownParam {
                    family: self.family,
                    name: name.clone(),
                });
            }
        }
        let mut out = Vec::new();
        for &(name, lo, hi) in self.family.params() {
            let value = *self
                .params
                .get(name)
                .ok_or(StateError::MissingParam {
                    family: self.family,
                    name,
                })?;
            if !value.is_finite() || value < lo || value > hi {
                return Err(StateError::ParamOutOfRange {
                    name,
                    value,
                    lo,
                    hi,
                });
            }
            out.push(value);
        }
        Ok(out)
    }
}

/// Construct the family member for a fully specified parameter assignment.
pub fn make_family(spec: &FamilySpec) -> Result<DensityMatrix, StateError> {
    let params = spec.checked_params()?;
    let two_qubit = BipartiteDims::new(2, 2)?;
    let eye4_quarter = CMatrix::identity(4)?.scale_re(0.25);

    let (mat, dims) = match spec.family {
        Family::Werner => {
            let p = params[0];
            let mat = singlet_projector()
                .scale_re(p)
                .add(&eye4_quarter.scale_re(1.0 - p))?;
            (mat, two_qubit)
        }
        Family::Munro => {
            let conc = params[0];
            let h = if conc < 2.0 / 3.0 { 1.0 / 3.0 } else { conc / 2.0 };
            let mat = CMatrix::from_real_rows(&[
                &[h, 0.0, 0.0, conc / 2.0],
                &[0.0, 1.0 - 2.0 * h, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0],
                &[conc / 2.0, 0.0, 0.0, h],
            ])?;
            (mat, two_qubit)
        }
        Family::WernerDerivative => {
            let (alpha, theta) = (params[0], params[1]);
            let psi = [
                c(theta.cos(), 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(theta.sin(), 0.0),
            ];
            let mat = CMatrix::projector(&psi)?
                .scale_re(alpha)
                .add(&eye4_quarter.scale_re(1.0 - alpha))?;
            (mat, two_qubit)
        }
        Family::Nmems => {
            let p = params[0];
            let mat = CMatrix::from_real_rows(&[
                &[(p + 2.0) / 6.0, 0.0, 0.0, 0.0],
                &[0.0, (1.0 - p) / 3.0, (1.0 - p) / 3.0, 0.0],
                &[0.0, (1.0 - p) / 3.0, (1.0 - p) / 3.0, 0.0],
                &[0.0, 0.0, 0.0, p / 2.0],
            ])?;
            (mat, two_qubit)
        }
        Family::Msms => {
            let tau = params[0];
            let mat = phi_plus_projector()
                .scale_re((1.0 - tau) / 2.0)
                .add(&psi_plus_projector().scale_re((1.0 + tau) / 2.0))?;
            (mat, two_qubit)
        }
        Family::OneWay => {
            let alpha = params[0];
            // 2 |0⟩⟨0| ⊗ 𝕀/2 + 3 𝕀/2 ⊗ |1⟩⟨1|, then the (1−α)/5 mixture.
            let ket0 = CMatrix::projector(&[c(1.0, 0.0), c(0.0, 0.0)])?;
            let ket1 = CMatrix::projector(&[c(0.0, 0.0), c(1.0, 0.0)])?;
            let half = CMatrix::identity(2)?.scale_re(0.5);
            let tail = kron(&ket0, &half)?
                .scale_re(2.0)
                .add(&kron(&half, &ket1)?.scale_re(3.0))?;
            let mat = singlet_projector()
                .scale_re(alpha)
                .add(&tail.scale_re((1.0 - alpha) / 5.0))?;
            (mat, two_qubit)
        }
        Family::AmpDampBell => {
            let p = params[0];
            let bell = DensityMatrix::validate(phi_plus_projector(), two_qubit)?;
            let damp = channels::amplitude_damping(p)?;
            let after_a = channels::apply(&damp, &bell, Subsystem::A)?;
            let after_both = channels::apply(&damp, &after_a, Subsystem::B)?;
            return Ok(after_both);
        }
        Family::LossyWerner => {
            let (p, mu) = (params[0], params[1]);
            let werner = make_family(&FamilySpec::new(Family::Werner, &[("p", p)])?)?;
            // Direct convex mixture: (1−μ)·embed(ρ_w) + μ·𝕀/2 ⊗ |v⟩⟨v|,
            // with Bob's qutrit basis |0⟩, |1⟩, |v⟩.
            let dims = BipartiteDims::new(2, 3)?;
            let w = werner.mat();
            let embedded = CMatrix::from_fn(6, 6, |r, s| {
                let (a1, b1) = (r / 3, r % 3);
                let (a2, b2) = (s / 3, s % 3);
                if b1 < 2 && b2 < 2 {
                    w.get(a1 * 2 + b1, a2 * 2 + b2)
                } else {
                    c(0.0, 0.0)
                }
            })?;
            let vac = CMatrix::projector(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])?;
            let half = CMatrix::identity(2)?.scale_re(0.5);
            let mat = embedded
                .scale_re(1.0 - mu)
                .add(&kron(&half, &vac)?.scale_re(mu))?;
            (mat, dims)
        }
    };
    DensityMatrix::validate(mat, dims)
}

/// 3×3 real matrix of two-qubit Pauli correlations T_ij = Tr[ρ (σ_i ⊗ σ_j)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix(pub [[f64; 3]; 3]);

/// Evaluate the Pauli correlation matrix of a two-qubit state. The traces are
/// real for Hermitian input; imaginary parts above [`STATE_TOL`] are rejected.
pub fn correlation_matrix(rho: &DensityMatrix) -> Result<CorrelationMatrix, StateError> {
    let dims = rho.dims();
    if dims.d_a != 2 || dims.d_b != 2 {
        return Err(StateError::NotTwoQubit {
            d_a: dims.d_a,
            d_b: dims.d_b,
        });
    }
    let axes = ['x', 'y', 'z'];
    let mut t = [[0.0; 3]; 3];
    for (i, &ai) in axes.iter().enumerate() {
        for (j, &aj) in axes.iter().enumerate() {
            let op = kron(&pauli(ai), &pauli(aj))?;
            let val = rho.mat().mul(&op)?.trace();
            if val.im.abs() > STATE_TOL {
                return Err(StateError::CorrelationNotReal { imag: val.im });
            }
            if val.re.abs() > 1.0 + 1e-9 {
                return Err(StateError::CorrelationOutOfRange { value: val.re });
            }
            t[i][j] = val.re;
        }
    }
    Ok(CorrelationMatrix(t))
}

/// SplitMix64: the 64-bit generator that seeds every randomized check in this
/// crate. Fixed here (constants from Steele, Lea & Flood's splittable-PRNG
/// construction) so that identical seeds give bit-identical streams on every
/// platform and toolchain.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_open01();
        let u2 = self.next_open01();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Complex standard normal (independent real and imaginary parts).
    pub fn next_complex_normal(&mut self) -> C64 {
        c(self.next_normal(), self.next_normal())
    }
}

/// Seeded full-rank random state: G·G†/Tr(G·G†) for a square Ginibre factor G
/// of independent complex standard normals. Identical seeds give bit-identical
/// states.
pub fn random_density(seed: u64, d_a: usize, d_b: usize) -> Result<DensityMatrix, StateError> {
    let dims = BipartiteDims::new(d_a, d_b)?;
    let n = dims.total();
    let mut rng = SplitMix64::new(seed);
    let g = CMatrix::from_fn(n, n, |_, _| rng.next_complex_normal())?;
    let gg = g.mul(&g.adjoint())?;
    let mat = gg.scale_re(1.0 / gg.trace().re);
    DensityMatrix::validate(mat, dims)
}

/// On-disk JSON form of a state: `{"dims":[dA,dB],"matrix":[[re,im],...]}`
/// with the matrix row-major. Values round-trip exactly through f64.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let dims = rho.dims();
        let matrix = rho
            .mat()
            .entries()
            .iter()
            .map(|z| [z.re, z.im])
            .collect();
        Self {
            dims: [dims.d_a, dims.d_b],
            matrix,
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix, StateError> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1])?;
        let n = dims.total();
        if self.matrix.len() != n * n {
            return Err(StateError::BadMatrixLength {
                d_a: dims.d_a,
                d_b: dims.d_b,
                expected: n * n,
                got: self.matrix.len(),
            });
        }
        let mat = CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.matrix[i * n + j];
            c(re, im)
        })?;
        DensityMatrix::validate(mat, dims)
    }
}
