//! Two-qubit state representations for the high-temperature regime.
//!
//! The working object is the traceless Hermitian deviation matrix `D` of a
//! state `rho = I/4 + eps * D`. Density matrices are composed on demand when
//! a channel has to be applied or an exact entropy is needed; everything else
//! stays at the deviation level.
//!
//! Qubit ordering is fixed: qubit A is the first tensor factor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{
    self, cr, hermitian_eigenvalues4, kron, pauli, Axis, ComplexMatrix2, ComplexMatrix4, C64,
};

/// Hermiticity tolerance enforced at construction (max abs entry of `M - M^dagger`).
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Trace tolerance enforced at construction.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may have.
pub const EIGENVALUE_FLOOR: f64 = -1e-12;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {0:.3e}")]
    NotHermitian(f64),
    #[error("deviation matrix is not traceless: |tr| = {0:.3e}")]
    NotTraceless(f64),
    #[error("density matrix trace differs from one by {0:.3e}")]
    NotUnitTrace(f64),
    #[error("density matrix has negative eigenvalue {0:.3e}")]
    NegativeEigenvalue(f64),
    #[error("epsilon {0} outside (0, 0.1]")]
    EpsilonOutOfRange(f64),
    #[error("Bell-diagonal coefficient {0} outside [-1, 1]")]
    CoefficientOutOfRange(f64),
    #[error("state file carries no epsilon but one is required")]
    MissingEpsilon,
}

/// Correlation coefficients `(c_x, c_y, c_z)` of a Bell-diagonal state, each
/// in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalCoeffs {
    pub c_x: f64,
    pub c_y: f64,
    pub c_z: f64,
}

impl BellDiagonalCoeffs {
    pub fn new(c_x: f64, c_y: f64, c_z: f64) -> Result<Self, StateError> {
        for v in [c_x, c_y, c_z] {
            if !(v.is_finite() && v.abs() <= 1.0) {
                return Err(StateError::CoefficientOutOfRange(v));
            }
        }
        Ok(Self { c_x, c_y, c_z })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.c_x, self.c_y, self.c_z]
    }
}

/// Traceless Hermitian 4x4 deviation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationMatrix {
    m: ComplexMatrix4,
}

impl DeviationMatrix {
    /// Validates Hermiticity and tracelessness; rejects rather than repairs.
    pub fn new(m: ComplexMatrix4) -> Result<Self, StateError> {
        let herm = matrix::hermiticity_error4(&m);
        if !herm.is_finite() || herm > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(herm));
        }
        let tr = m.trace().norm();
        if tr > TRACE_TOL {
            return Err(StateError::NotTraceless(tr));
        }
        Ok(Self { m })
    }

    pub fn zero() -> Self {
        Self {
            m: ComplexMatrix4::zeros(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.m
    }

    /// Largest absolute entry difference to `other`.
    pub fn max_abs_diff(&self, other: &DeviationMatrix) -> f64 {
        matrix::max_abs_diff4(&self.m, &other.m)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.m, None)
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self, StateError> {
        Self::new(json.to_matrix())
    }
}

/// Full two-qubit density matrix together with the expansion parameter
/// `eps` it was composed with.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: ComplexMatrix4,
    epsilon: f64,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, positivity and the epsilon range.
    pub fn new(m: ComplexMatrix4, epsilon: f64) -> Result<Self, StateError> {
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon <= 0.1) {
            return Err(StateError::EpsilonOutOfRange(epsilon));
        }
        let herm = matrix::hermiticity_error4(&m);
        if !herm.is_finite() || herm > HERMITICITY_TOL {
            return Err(StateError::NotHermitian(herm));
        }
        let tr_err = (m.trace() - cr(1.0)).norm();
        if tr_err > TRACE_TOL {
            return Err(StateError::NotUnitTrace(tr_err));
        }
        let min_eig = hermitian_eigenvalues4(&m)[0];
        if min_eig < EIGENVALUE_FLOOR {
            return Err(StateError::NegativeEigenvalue(min_eig));
        }
        Ok(Self { m, epsilon })
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.m)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_matrix(&self.m, Some(self.epsilon))
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self, StateError> {
        let eps = json.epsilon.ok_or(StateError::MissingEpsilon)?;
        Self::new(json.to_matrix(), eps)
    }
}

/// `(1/4) sum_i c_i sigma_i x sigma_i` — the deviation matrix of a
/// Bell-diagonal state. The result is X-shaped: entries outside the main and
/// anti-diagonal are exactly zero.
pub fn bell_diagonal_deviation(c: &BellDiagonalCoeffs) -> DeviationMatrix {
    let mut m = ComplexMatrix4::zeros();
    for (ci, axis) in c.as_array().into_iter().zip(Axis::ALL) {
        let s = pauli(axis);
        m += kron(&s, &s) * cr(ci);
    }
    m *= cr(0.25);
    DeviationMatrix::new(m).expect("Pauli sum is Hermitian and traceless")
}

/// `rho = I/4 + eps * delta`.
pub fn compose_density(delta: &DeviationMatrix, epsilon: f64) -> Result<DensityMatrix, StateError> {
    if !(epsilon.is_finite() && epsilon > 0.0 && epsilon <= 0.1) {
        return Err(StateError::EpsilonOutOfRange(epsilon));
    }
    let m = ComplexMatrix4::identity() * cr(0.25) + delta.matrix() * cr(epsilon);
    DensityMatrix::new(m, epsilon)
}

/// Inverse of [`compose_density`]: `(rho - tr(rho) I/4) / eps`.
///
/// The measured trace is subtracted instead of the literal 1 so that trace
/// rounding in `rho` is not amplified by `1/eps`.
pub fn extract_deviation(rho: &DensityMatrix) -> Result<DeviationMatrix, StateError> {
    let eps = rho.epsilon();
    if eps == 0.0 {
        return Err(StateError::EpsilonOutOfRange(eps));
    }
    let q = rho.matrix().trace().re * 0.25;
    let m = (rho.matrix() - ComplexMatrix4::identity() * cr(q)) / cr(eps);
    DeviationMatrix::new(m)
}

/// Which subsystem to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a two-qubit operator, keeping the given subsystem.
pub fn partial_trace(m: &ComplexMatrix4, keep: Subsystem) -> ComplexMatrix2 {
    let mut out = ComplexMatrix2::zeros();
    match keep {
        Subsystem::A => {
            // trace out B: block trace
            for i in 0..2 {
                for j in 0..2 {
                    out[(i, j)] = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
                }
            }
        }
        Subsystem::B => {
            // trace out A: sum of diagonal blocks
            for k in 0..2 {
                for l in 0..2 {
                    out[(k, l)] = m[(k, l)] + m[(2 + k, 2 + l)];
                }
            }
        }
    }
    out
}

/// Pauli decomposition of a deviation matrix: reduced Bloch vectors of both
/// qubits and the 3x3 correlation tensor `corr[i][j] = tr(D sigma_i x sigma_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub local_a: [f64; 3],
    pub local_b: [f64; 3],
    pub corr: [[f64; 3]; 3],
}

impl BlochDecomposition {
    /// Rebuilds the deviation matrix `(1/4)[a.sigma x I + I x b.sigma + sum c_ij sigma_i x sigma_j]`.
    pub fn reconstruct(&self) -> DeviationMatrix {
        let id = ComplexMatrix2::identity();
        let mut m = ComplexMatrix4::zeros();
        for (i, ax) in Axis::ALL.into_iter().enumerate() {
            m += kron(&pauli(ax), &id) * cr(self.local_a[i]);
            m += kron(&id, &pauli(ax)) * cr(self.local_b[i]);
            for (j, bx) in Axis::ALL.into_iter().enumerate() {
                m += kron(&pauli(ax), &pauli(bx)) * cr(self.corr[i][j]);
            }
        }
        m *= cr(0.25);
        DeviationMatrix::new(m).expect("Pauli reconstruction is Hermitian and traceless")
    }

    /// Diagonal of the correlation tensor.
    pub fn corr_diagonal(&self) -> [f64; 3] {
        [self.corr[0][0], self.corr[1][1], self.corr[2][2]]
    }
}

fn real_trace_product4(m: &ComplexMatrix4, op: &ComplexMatrix4) -> f64 {
    // tr(m * op) for Hermitian m and op; imaginary residue is rounding noise
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            acc += m[(i, k)] * op[(k, i)];
        }
    }
    acc.re
}

/// Pauli traces of a deviation matrix.
pub fn bloch_decompose(delta: &DeviationMatrix) -> BlochDecomposition {
    let id = ComplexMatrix2::identity();
    let m = delta.matrix();
    let mut local_a = [0.0; 3];
    let mut local_b = [0.0; 3];
    let mut corr = [[0.0; 3]; 3];
    for (i, ax) in Axis::ALL.into_iter().enumerate() {
        local_a[i] = real_trace_product4(m, &kron(&pauli(ax), &id));
        local_b[i] = real_trace_product4(m, &kron(&id, &pauli(ax)));
        for (j, bx) in Axis::ALL.into_iter().enumerate() {
            corr[i][j] = real_trace_product4(m, &kron(&pauli(ax), &pauli(bx)));
        }
    }
    BlochDecomposition {
        local_a,
        local_b,
        corr,
    }
}

/// On-disk form of a 4x4 complex matrix: real and imaginary parts as nested
/// row-major arrays, plus the optional expansion parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix4, epsilon: Option<f64>) -> Self {
        let mut re = [[0.0; 4]; 4];
        let mut im = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                re[i][j] = m[(i, j)].re;
                im[i][j] = m[(i, j)].im;
            }
        }
        Self { re, im, epsilon }
    }

    pub fn to_matrix(&self) -> ComplexMatrix4 {
        let mut m = ComplexMatrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = C64::new(self.re[i][j], self.im[i][j]);
            }
        }
        m
    }
}
