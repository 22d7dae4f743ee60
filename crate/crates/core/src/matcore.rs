//! Dense complex-matrix kernel for small bipartite systems.
//!
//! Everything here is sized for density matrices of at most 16×16 (enough for
//! 2⊗2 up to 4⊗4 and the 2⊗3 qubit-qutrit case). Operations are pure and the
//! values immutable after construction, so they are freely shared across
//! threads.

use num_complex::Complex64;
use thiserror::Error;

/// Largest supported matrix dimension.
pub const DIM_MAX: usize = 16;

/// Hermiticity tolerance used by the eigensolver: the largest allowed entry of
/// `m − m†`. Inputs within the tolerance are symmetrized before solving.
pub const HERM_TOL: f64 = 1e-10;

/// Shorthand for the complex scalar type used throughout the crate.
pub type C64 = Complex64;

/// `re + i·im` as a [`C64`].
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Errors from the matrix kernel.
#[derive(Debug, Error)]
pub enum MatError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix dimension {rows}x{cols} exceeds the supported maximum {DIM_MAX}x{DIM_MAX}")]
    TooLarge { rows: usize, cols: usize },

    #[error("shape mismatch: {lhs_rows}x{lhs_cols} incompatible with {rhs_rows}x{rhs_cols}")]
    ShapeMismatch {
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },

    #[error("bipartite dims {d_a}⊗{d_b} do not match matrix dimension {dim}")]
    DimsMismatch { d_a: usize, d_b: usize, dim: usize },

    #[error("matrix is not Hermitian: max |m - m†| entry is {defect:.3e} (tolerance {HERM_TOL:.0e})")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

/// Which tensor factor of a bipartite operator an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Tensor-factor bookkeeping for a bipartite operator: subsystem A has
/// dimension `d_a`, subsystem B dimension `d_b`, and composite basis index
/// `a·d_b + b` (A-major, matching `kron(A, B)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self, MatError> {
        if d_a < 1 || d_b < 1 || d_a * d_b > DIM_MAX {
            return Err(MatError::TooLarge {
                rows: d_a.max(1) * d_b.max(1),
                cols: d_a.max(1) * d_b.max(1),
            });
        }
        Ok(Self { d_a, d_b })
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn dim_of(&self, sub: Subsystem) -> usize {
        match sub {
            Subsystem::A => self.d_a,
            Subsystem::B => self.d_b,
        }
    }

    fn check_matrix(&self, m: &CMatrix) -> Result<(), MatError> {
        if m.rows != m.cols {
            return Err(MatError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        if m.rows != self.total() {
            return Err(MatError::DimsMismatch {
                d_a: self.d_a,
                d_b: self.d_b,
                dim: m.rows,
            });
        }
        Ok(())
    }
}

/// Dense complex matrix, row-major, at most 16×16.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    fn check_dims(rows: usize, cols: usize) -> Result<(), MatError> {
        if rows < 1 || cols < 1 || rows > DIM_MAX || cols > DIM_MAX {
            return Err(MatError::TooLarge { rows, cols });
        }
        Ok(())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, MatError> {
        Self::check_dims(rows, cols)?;
        Ok(Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        })
    }

    pub fn identity(n: usize) -> Result<Self, MatError> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> C64,
    ) -> Result<Self, MatError> {
        Self::check_dims(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Ok(Self { rows, cols, data })
    }

    /// Build a square matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatError> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Projector |v⟩⟨v| / ⟨v|v⟩ onto the span of a nonzero vector.
    pub fn projector(v: &[C64]) -> Result<Self, MatError> {
        let n = v.len();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj() / norm_sq)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatError> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn scale_re(&self, k: f64) -> Self {
        self.scale(C64::new(k, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatError> {
        if self.cols != other.rows {
            return Err(MatError::ShapeMismatch {
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: other.rows,
                rhs_cols: other.cols,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose m†.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
            .expect("adjoint preserves dims")
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise |self − other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of |m − m†|; zero for exactly Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), MatError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatError::ShapeMismatch {
                lhs_rows: self.rows,
                lhs_cols: self.cols,
                rhs_rows: other.rows,
                rhs_cols: other.cols,
            });
        }
        Ok(())
    }
}

/// Kronecker product: `kron(a, b)[i·P + p, j·Q + q] = a[i,j]·b[p,q]`
/// for `b` of shape P×Q.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatError> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    CMatrix::from_fn(rows, cols, |i, j| {
        a.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols)
    })
}

/// Trace out one tensor factor. Tracing B returns the d_A×d_A reduced
/// operator on A, and vice versa; the full trace is preserved.
pub fn partial_trace(
    m: &CMatrix,
    dims: BipartiteDims,
    traced: Subsystem,
) -> Result<CMatrix, MatError> {
    dims.check_matrix(m)?;
    let (da, db) = (dims.d_a, dims.d_b);
    match traced {
        Subsystem::B => CMatrix::from_fn(da, da, |a1, a2| {
            (0..db).map(|b| m.get(a1 * db + b, a2 * db + b)).sum()
        }),
        Subsystem::A => CMatrix::from_fn(db, db, |b1, b2| {
            (0..da).map(|a| m.get(a * db + b1, a * db + b2)).sum()
        }),
    }
}

/// Transpose the indices of one tensor factor. Hermiticity and trace are
/// preserved for Hermitian input.
pub fn partial_transpose(
    m: &CMatrix,
    dims: BipartiteDims,
    transposed: Subsystem,
) -> Result<CMatrix, MatError> {
    dims.check_matrix(m)?;
    let db = dims.d_b;
    let n = dims.total();
    CMatrix::from_fn(n, n, |r, s| {
        let (a1, b1) = (r / db, r % db);
        let (a2, b2) = (s / db, s % db);
        match transposed {
            Subsystem::B => m.get(a1 * db + b2, a2 * db + b1),
            Subsystem::A => m.get(a2 * db + b1, a1 * db + b2),
        }
    })
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The input must be Hermitian within [`HERM_TOL`]; it is symmetrized as
/// `(m + m†)/2` before solving so that channel-arithmetic rounding does not
/// leak into the spectrum.
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>, MatError> {
    Ok(herm_eig(m)?.0)
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary whose k-th column is the k-th eigenvector.
pub fn herm_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix), MatError> {
    if !m.is_square() {
        return Err(MatError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERM_TOL {
        return Err(MatError::NotHermitian { defect });
    }
    let n = m.rows;
    // Symmetrized working copy.
    let mut a = CMatrix::from_fn(n, n, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5)?;
    let mut v = CMatrix::identity(n)?;

    let scale = a.max_abs().max(1.0);
    let stop = 1e-15 * scale;
    const MAX_SWEEPS: usize = 100;

    for _sweep in 0..MAX_SWEEPS {
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                worst = worst.max(a.get(p, q).norm());
            }
        }
        if worst <= stop {
            let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i).re, i)).collect();
            pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("eigenvalues are finite"));
            let vals: Vec<f64> = pairs.iter().map(|&(val, _)| val).collect();
            let vecs = CMatrix::from_fn(n, n, |i, j| v.get(i, pairs[j].1))?;
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q, stop);
            }
        }
    }
    Err(MatError::NoConvergence(MAX_SWEEPS))
}

/// One complex Jacobi rotation zeroing a[p][q] (and its mirror) in place,
/// accumulating the rotation into `v`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, tiny: f64) {
    let beta = a.get(p, q);
    let abs_b = beta.norm();
    if abs_b <= tiny * 1e-2 {
        return;
    }
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;
    // Unit phase of the pivot, e^{iφ}.
    let u = beta / abs_b;

    // Pick the smaller-magnitude root t of t² − 2τt − 1 = 0, which keeps the
    // rotation angle below π/4 for numerical stability.
    let tau = (gamma - alpha) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows;
    // Columns p,q of both A and V transform by the plane rotation
    // U = [[c, −s e^{iφ}], [s e^{−iφ}, c]].
    let cc = C64::new(c, 0.0);
    let su = u * s;
    let su_conj = u.conj() * s;
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, cc * akp + su_conj * akq);
        a.set(k, q, cc * akq - su * akp);

        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, cc * vkp + su_conj * vkq);
        v.set(k, q, cc * vkq - su * vkp);
    }
    // Rows p,q of A transform by U†.
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, cc * apk + su * aqk);
        a.set(q, k, cc * aqk - su_conj * apk);
    }
    // The rotated 2×2 block is known analytically; writing it directly kills
    // the rounding of the two sequential updates above.
    let cross = 2.0 * c * s * abs_b;
    let app = alpha * c * c + cross + gamma * s * s;
    let aqq = alpha * s * s - cross + gamma * c * c;
    a.set(p, p, C64::new(app, 0.0));
    a.set(q, q, C64::new(aqq, 0.0));
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{pauli, random_density};
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn eye(n: usize) -> CMatrix {
        CMatrix::identity(n).unwrap()
    }

    /// Singlet projector |ψ⁻⟩⟨ψ⁻| with |ψ⁻⟩ = (|01⟩ − |10⟩)/√2.
    fn singlet() -> CMatrix {
        let v = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)];
        CMatrix::projector(&v).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i4 = kron(&eye(2), &eye(2)).unwrap();
        assert!(i4.max_abs_diff(&eye(4)) < TOL);

        let zz = kron(&pauli('z'), &pauli('z')).unwrap();
        let expect =
            CMatrix::from_real_rows(&[&[1., 0., 0., 0.], &[0., -1., 0., 0.], &[0., 0., -1., 0.], &[0., 0., 0., 1.]])
                .unwrap();
        assert!(zz.max_abs_diff(&expect) < TOL);
    }

    #[test]
    fn kron_against_index_formula() {
        // Independent oracle: evaluate the defining index formula entry by entry.
        let a = pauli('x');
        let b = pauli('y');
        let k = kron(&a, &b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let expect = a.get(i, j) * b.get(p, q);
                        assert!((k.get(i * 2 + p, j * 2 + q) - expect).norm() < TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let rho_a = random_density(11, 2, 1).unwrap().into_matrix();
        let rho_b = random_density(12, 2, 1).unwrap().into_matrix();
        let joint = kron(&rho_a, &rho_b).unwrap();
        let dims = BipartiteDims::new(2, 2).unwrap();
        let back = partial_trace(&joint, dims, Subsystem::B).unwrap();
        assert!(back.max_abs_diff(&rho_a) < TOL);
    }

    #[test]
    fn partial_trace_singlet_marginal() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let marg = partial_trace(&singlet(), dims, Subsystem::B).unwrap();
        assert!(marg.max_abs_diff(&eye(2).scale_re(0.5)) < TOL);
    }

    #[test]
    fn partial_trace_preserves_trace_seeded() {
        for seed in 0..50u64 {
            let rho = random_density(seed, 2, 2).unwrap().into_matrix();
            let dims = BipartiteDims::new(2, 2).unwrap();
            let ta = partial_trace(&rho, dims, Subsystem::A).unwrap();
            assert!((ta.trace() - rho.trace()).norm() < TOL, "seed {seed}");
        }
    }

    #[test]
    fn partial_transpose_involution_and_diagonal_fixed_point() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let rho = random_density(3, 2, 2).unwrap().into_matrix();
        let pt = partial_transpose(&rho, dims, Subsystem::B).unwrap();
        let back = partial_transpose(&pt, dims, Subsystem::B).unwrap();
        assert!(back.max_abs_diff(&rho) < TOL);

        let rho_a = random_density(4, 2, 1).unwrap().into_matrix();
        let diag = CMatrix::from_real_rows(&[&[0.7, 0.0], &[0.0, 0.3]]).unwrap();
        let prod = kron(&rho_a, &diag).unwrap();
        let pt = partial_transpose(&prod, dims, Subsystem::B).unwrap();
        assert!(pt.max_abs_diff(&prod) < TOL);
    }

    #[test]
    fn partial_transpose_singlet_spectrum() {
        // Explicit 4×4 eigendecomposition: spectrum {−1/2, 1/2, 1/2, 1/2}.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let pt = partial_transpose(&singlet(), dims, Subsystem::B).unwrap();
        let eig = herm_eigvals(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (got, want) in eig.iter().zip(expect) {
            assert!((got - want).abs() < 1e-10, "{eig:?}");
        }
    }

    #[test]
    fn eigvals_trivial_cases() {
        let m = eye(4).scale_re(0.25);
        for val in herm_eigvals(&m).unwrap() {
            assert!((val - 0.25).abs() < TOL);
        }
        let eig = herm_eigvals(&pauli('z')).unwrap();
        assert!((eig[0] + 1.0).abs() < TOL && (eig[1] - 1.0).abs() < TOL);
    }

    #[test]
    fn eigvals_2x2_closed_form_seeded() {
        // Characteristic-polynomial oracle: mean ± sqrt(((a−d)/2)² + |b|²).
        for seed in 0..40u64 {
            let h = random_density(1000 + seed, 2, 1).unwrap().into_matrix();
            let (a, d) = (h.get(0, 0).re, h.get(1, 1).re);
            let b = h.get(0, 1).norm();
            let mean = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            let eig = herm_eigvals(&h).unwrap();
            assert!((eig[0] - (mean - rad)).abs() < 1e-12, "seed {seed}");
            assert!((eig[1] - (mean + rad)).abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn eig_residual_and_psd_floor() {
        for seed in [42u64, 7, 1234] {
            for (da, db) in [(2, 2), (2, 3), (4, 4)] {
                let rho = random_density(seed, da, db).unwrap().into_matrix();
                let (vals, vecs) = herm_eig(&rho).unwrap();
                let n = rho.rows();
                for k in 0..n {
                    // ‖m·v − λv‖ per eigenpair.
                    let mut res = 0.0f64;
                    for i in 0..n {
                        let mut mv = c(0.0, 0.0);
                        for j in 0..n {
                            mv += rho.get(i, j) * vecs.get(j, k);
                        }
                        res += (mv - vecs.get(i, k) * vals[k]).norm_sqr();
                    }
                    assert!(res.sqrt() < 1e-9, "residual {} seed {seed}", res.sqrt());
                    assert!(vals[k] > -1e-10, "PSD spectrum dipped to {}", vals[k]);
                }
                let sum: f64 = vals.iter().sum();
                assert!((sum - rho.trace().re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn eig_rejects_non_hermitian_and_non_square() {
        let mut m = eye(2);
        m.set(0, 1, c(0.3, 0.0));
        assert!(matches!(
            herm_eigvals(&m),
            Err(MatError::NotHermitian { .. })
        ));
        let rect = CMatrix::zeros(2, 3).unwrap();
        assert!(matches!(herm_eigvals(&rect), Err(MatError::NotSquare { .. })));
    }

    #[test]
    fn dimension_cap_enforced() {
        assert!(CMatrix::zeros(17, 17).is_err());
        assert!(kron(&eye(16), &eye(2)).is_err());
        assert!(BipartiteDims::new(4, 5).is_err());
    }

    #[test]
    fn pt_spectrum_real_and_traces_match_seeded() {
        for seed in 0..20u64 {
            let rho = random_density(seed, 2, 3).unwrap().into_matrix();
            let dims = BipartiteDims::new(2, 3).unwrap();
            let pt = partial_transpose(&rho, dims, Subsystem::B).unwrap();
            assert!(pt.hermiticity_defect() < 1e-12);
            let eig = herm_eigvals(&pt).unwrap();
            let sum: f64 = eig.iter().sum();
            assert!((sum - 1.0).abs() < 1e-10, "seed {seed}");
        }
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
        prop::collection::vec(arb_c64(), n * n).prop_map(move |data| {
            CMatrix::from_fn(n, n, |i, j| data[i * n + j]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kron_is_associative(a in arb_matrix(2), b in arb_matrix(2), m in arb_matrix(2)) {
            let left = kron(&kron(&a, &b).unwrap(), &m).unwrap();
            let right = kron(&a, &kron(&b, &m).unwrap()).unwrap();
            prop_assert!(left.max_abs_diff(&right) < 1e-12);
        }

        #[test]
        fn trace_out_a_of_product(a in arb_matrix(2), b in arb_matrix(3)) {
            let dims = BipartiteDims::new(2, 3).unwrap();
            let joint = kron(&a, &b).unwrap();
            let reduced = partial_trace(&joint, dims, Subsystem::A).unwrap();
            let expect = b.scale(a.trace());
            prop_assert!(reduced.max_abs_diff(&expect) < 1e-12);
        }
    }
}
