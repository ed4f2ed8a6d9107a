//! Dense complex 2x2 and 4x4 matrices plus the small linear-algebra toolbox
//! used everywhere else: Pauli operators, Kronecker products, Hermitian
//! eigenvalues and a few norm helpers.
//!
//! The problem size is fixed (one or two qubits), so everything is built on
//! statically sized matrices.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen};

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;
/// Single-qubit operator.
pub type ComplexMatrix2 = Matrix2<C64>;
/// Two-qubit operator.
pub type ComplexMatrix4 = Matrix4<C64>;

/// Shorthand for a complex number with both parts.
#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Shorthand for a purely real complex number.
#[inline]
pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index 0, 1, 2 for x, y, z.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// The standard Pauli matrix for the given axis.
pub fn pauli(axis: Axis) -> ComplexMatrix2 {
    match axis {
        Axis::X => ComplexMatrix2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0)),
        Axis::Y => ComplexMatrix2::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)),
        Axis::Z => ComplexMatrix2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0)),
    }
}

/// Pauli vector component `n . sigma` for a real 3-vector `n`.
pub fn pauli_dot(n: [f64; 3]) -> ComplexMatrix2 {
    ComplexMatrix2::new(
        cr(n[2]),
        c(n[0], -n[1]),
        c(n[0], n[1]),
        cr(-n[2]),
    )
}

/// Kronecker product of two single-qubit operators, qubit A first.
pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest absolute entry of `m`.
pub fn max_abs4(m: &ComplexMatrix4) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Largest absolute entry of `m`.
pub fn max_abs2(m: &ComplexMatrix2) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff4(a: &ComplexMatrix4, b: &ComplexMatrix4) -> f64 {
    max_abs4(&(a - b))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff2(a: &ComplexMatrix2, b: &ComplexMatrix2) -> f64 {
    max_abs2(&(a - b))
}

/// Largest absolute entry of `m - m^dagger`.
pub fn hermiticity_error4(m: &ComplexMatrix4) -> f64 {
    max_abs_diff4(m, &m.adjoint())
}

/// Largest absolute entry of `m - m^dagger`.
pub fn hermiticity_error2(m: &ComplexMatrix2) -> f64 {
    max_abs_diff2(m, &m.adjoint())
}

/// `tr(m^2)` for a Hermitian matrix, evaluated as the squared
/// Hilbert-Schmidt norm so the result is exactly real.
pub fn trace_square_hermitian4(m: &ComplexMatrix4) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `tr(m^2)` for a Hermitian matrix.
pub fn trace_square_hermitian2(m: &ComplexMatrix2) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues of a Hermitian 4x4 matrix, ascending.
pub fn hermitian_eigenvalues4(m: &ComplexMatrix4) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut vals = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending (closed form).
pub fn hermitian_eigenvalues2(m: &ComplexMatrix2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}
