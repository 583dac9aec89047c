//! Dense complex linear algebra for pure states, density operators and
//! linear maps at small dimension.
//!
//! Composite systems use the first-factor-major index convention: the
//! amplitude of `|i⟩ ⊗ |j⟩` in a `dA × dB` system lives at `i * dB + j`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for structural residuals (unitarity, Hermiticity, Gram).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Eigenvalues below this contribute nothing to entropies (`0 log 0 = 0`).
pub const ENTROPY_CUTOFF: f64 = 1e-14;

pub type ComplexScalar = Complex64;

/// A finite-dimensional pure state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension {
                dim: 0,
                reason: "state vectors need at least one amplitude",
            });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis",
                index,
                len: dim,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Returns the state rescaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n <= f64::EPSILON {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = 1.0 / n.sqrt();
        Ok(self.scaled(Complex64::new(s, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Multiplies by a global phase so the first nonzero amplitude is real
    /// and positive.
    pub fn with_canonical_phase(&self) -> Self {
        match self.amplitudes.iter().find(|a| a.norm() > 1e-12) {
            Some(first) => self.scaled(first.conj() / first.norm()),
            None => self.clone(),
        }
    }

    pub(crate) fn as_column(&self) -> DMatrix<Complex64> {
        DMatrix::from_column_slice(self.dim(), 1, &self.amplitudes)
    }
}

/// `Σ conj(a_i) b_i`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Kronecker product `a ⊗ b`, first factor major.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    StateVector { amplitudes }
}

/// Which factor of a bipartite system survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Wraps a matrix after checking Hermiticity, trace and positivity at
    /// `tol`.
    pub fn from_matrix(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidDimension {
                dim: matrix.nrows(),
                reason: "density operators must be square and nonempty",
            });
        }
        let rho = Self { matrix };
        let herm = rho.hermiticity_residual();
        if herm > tol {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (residual {herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("trace is {tr}, expected 1")));
        }
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::InvalidArgument(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        if !psi.is_normalized(STRUCTURAL_TOL) {
            return Err(Error::NotNormalized {
                norm_sqr: psi.norm_sqr(),
            });
        }
        let col = psi.as_column();
        Ok(Self {
            matrix: &col * col.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                dim,
                reason: "density operators must be nonempty",
            });
        }
        Ok(Self {
            matrix: DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        })
    }

    /// Convex combination `Σ w_i ρ_i`; weights are renormalized to sum to one.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidArgument("empty mixture".into()));
        };
        let dim = first.dim();
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if total <= 0.0 || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::InvalidArgument(
                "mixture weights must be nonnegative with positive sum".into(),
            ));
        }
        let mut matrix = DMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            matrix += &rho.matrix * Complex64::new(w / total, 0.0);
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs_entry(&(&self.matrix - self.matrix.adjoint()))
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let col = psi.as_column();
        Ok((col.adjoint() * &self.matrix * col)[(0, 0)].re)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut eig: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// Von Neumann entropy with logarithms in `base`.
    pub fn entropy(&self, base: f64) -> f64 {
        let ln_base = base.ln();
        -self
            .eigenvalues()
            .into_iter()
            .filter(|&l| l > ENTROPY_CUTOFF)
            .map(|l| l * l.ln() / ln_base)
            .sum::<f64>()
    }

    /// Maximum entrywise distance to another operator.
    pub fn distance_max(&self, other: &DensityOperator) -> f64 {
        max_abs_entry(&(&self.matrix - &other.matrix))
    }
}

/// Reduced density operator of one factor of a `dims.0 × dims.1` pure state.
pub fn partial_trace(
    state: &StateVector,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: state.dim(),
        });
    }
    let psi = state.amplitudes();
    let matrix = match keep {
        Subsystem::First => DMatrix::from_fn(da, da, |i, k| {
            (0..db)
                .map(|j| psi[i * db + j] * psi[k * db + j].conj())
                .sum()
        }),
        Subsystem::Second => DMatrix::from_fn(db, db, |j, l| {
            (0..da)
                .map(|i| psi[i * db + j] * psi[i * db + l].conj())
                .sum()
        }),
    };
    Ok(DensityOperator { matrix })
}

/// Largest deviation of the frame's Gram matrix from the identity.
pub fn gram_residual(frame: &[StateVector]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (a, fa) in frame.iter().enumerate() {
        for (b, fb) in frame.iter().enumerate().skip(a) {
            let g = inner_product(fa, fb)?;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Outcome probabilities `⟨f_k|ρ|f_k⟩` of a projective measurement.
///
/// An incomplete frame is implicitly completed; the missing outcome's
/// probability is `1 - Σ p_k` and is not returned.
pub fn projective_probabilities(rho: &DensityOperator, frame: &[StateVector]) -> Result<Vec<f64>> {
    if let Some(bad) = frame.iter().find(|f| f.dim() != rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: bad.dim(),
        });
    }
    let residual = gram_residual(frame)?;
    if residual > STRUCTURAL_TOL {
        return Err(Error::NonOrthonormalFrame { residual });
    }
    frame
        .iter()
        .map(|f| rho.expectation(f).map(|p| p.max(0.0)))
        .collect()
}

/// A linear map between finite-dimensional spaces, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<Complex64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.in_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim(),
                found: v.dim(),
            });
        }
        let out = &self.matrix * v.as_column();
        StateVector::new(out.iter().copied().collect())
    }

    /// `max |M†M - I|` entrywise.
    pub fn isometry_residual(&self) -> f64 {
        let n = self.in_dim();
        let gram = self.matrix.adjoint() * &self.matrix;
        max_abs_entry(&(gram - DMatrix::<Complex64>::identity(n, n)))
    }

    pub fn is_isometry(&self, tol: f64) -> bool {
        self.isometry_residual() <= tol
    }
}

fn max_abs_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_of_basis_vectors() {
        let k0 = StateVector::basis(3, 0).unwrap();
        let k1 = StateVector::basis(3, 1).unwrap();
        assert_eq!(inner_product(&k0, &k0).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&k0, &k1).unwrap(), c(0.0, 0.0));
        let s = 1.0 / 3f64.sqrt();
        let alpha = StateVector::from_real(&[s, s, s]).unwrap();
        assert!((inner_product(&k0, &alpha).unwrap() - c(s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_product_is_conjugate_symmetric() {
        let a = StateVector::new(vec![c(0.3, 0.4), c(-0.1, 0.8)]).unwrap();
        let b = StateVector::new(vec![c(0.6, -0.2), c(0.5, 0.5)]).unwrap();
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-15);
    }

    #[test]
    fn inner_product_rejects_mismatched_dims() {
        let a = StateVector::basis(2, 0).unwrap();
        let b = StateVector::basis(3, 0).unwrap();
        assert!(matches!(
            inner_product(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_index_arithmetic() {
        let v = tensor(
            &StateVector::basis(2, 0).unwrap(),
            &StateVector::basis(2, 1).unwrap(),
        );
        assert_eq!(v.dim(), 4);
        let re: Vec<f64> = v.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 0.0, 0.0]);

        let w = tensor(
            &StateVector::basis(3, 1).unwrap(),
            &StateVector::basis(9, 0).unwrap(),
        );
        assert_eq!(w.dim(), 27);
        for (k, a) in w.amplitudes().iter().enumerate() {
            let expect = if k == 9 { 1.0 } else { 0.0 };
            assert_eq!(a.re, expect);
        }
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let b = StateVector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let ab = tensor(&a, &b);
        let ra = partial_trace(&ab, (2, 3), Subsystem::First).unwrap();
        let rb = partial_trace(&ab, (2, 3), Subsystem::Second).unwrap();
        assert!(ra.distance_max(&DensityOperator::pure(&a).unwrap()) < 1e-12);
        assert!(rb.distance_max(&DensityOperator::pure(&b).unwrap()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let bell = StateVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
        let ra = partial_trace(&bell, (2, 2), Subsystem::First).unwrap();
        assert!(ra.distance_max(&DensityOperator::maximally_mixed(2).unwrap()) < 1e-15);
        assert!((ra.entropy(2.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let v = StateVector::basis(6, 0).unwrap();
        assert!(partial_trace(&v, (2, 2), Subsystem::First).is_err());
    }

    #[test]
    fn probabilities_in_computational_frame() {
        let rho = DensityOperator::pure(&StateVector::basis(3, 0).unwrap()).unwrap();
        let frame: Vec<_> = (0..3).map(|k| StateVector::basis(3, k).unwrap()).collect();
        assert_eq!(
            projective_probabilities(&rho, &frame).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        let mixed = DensityOperator::maximally_mixed(3).unwrap();
        for p in projective_probabilities(&mixed, &frame).unwrap() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn barred_frame_probabilities_for_ancilla_state() {
        // x² = 0.6, y² = 0.2 with x² + 2y² = 1
        let (x, y) = (0.6f64.sqrt(), 0.2f64.sqrt());
        let a0 = StateVector::from_real(&[x, y, y]).unwrap();
        let rho = DensityOperator::pure(&a0).unwrap();
        let frame: Vec<_> = (0..3).map(|k| StateVector::basis(3, k).unwrap()).collect();
        let p = projective_probabilities(&rho, &frame).unwrap();
        for (got, want) in p.iter().zip([0.6, 0.2, 0.2]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn incomplete_frame_sums_below_one() {
        let s = 1.0 / 3f64.sqrt();
        let alpha = StateVector::from_real(&[s, s, s]).unwrap();
        let rho = DensityOperator::pure(&alpha).unwrap();
        let frame = vec![StateVector::basis(3, 0).unwrap()];
        let p = projective_probabilities(&rho, &frame).unwrap();
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_orthonormal_frame_is_rejected() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let s = 0.5f64.sqrt();
        let frame = vec![
            StateVector::basis(2, 0).unwrap(),
            StateVector::from_real(&[s, s]).unwrap(),
        ];
        assert!(matches!(
            projective_probabilities(&rho, &frame),
            Err(Error::NonOrthonormalFrame { .. })
        ));
    }

    #[test]
    fn from_matrix_validates() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(DensityOperator::from_matrix(m, 1e-12).is_ok());
        let bad =
            DMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(DensityOperator::from_matrix(bad, 1e-12).is_err());
    }

    #[test]
    fn isometry_residual_of_embedding() {
        let mut m = DMatrix::zeros(4, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(3, 1)] = c(0.0, 1.0);
        let map = LinearMap::new(m);
        assert!(map.isometry_residual() < 1e-15);
        let out = map.apply(&StateVector::basis(2, 1).unwrap()).unwrap();
        assert_eq!(out.amplitudes()[3], c(0.0, 1.0));
    }

    #[test]
    fn canonical_phase_makes_first_amplitude_positive() {
        let v = StateVector::new(vec![c(0.0, 0.0), c(0.0, -0.6), c(0.8, 0.0)]).unwrap();
        let w = v.with_canonical_phase();
        assert!((w.amplitudes()[1] - c(0.6, 0.0)).norm() < 1e-15);
        assert!((w.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
