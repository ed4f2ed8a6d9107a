//! NMR-side modeling: the diagonal state produced by the shaped preparation
//! pulse, the pseudo-EPR map that turns it into an X-type deviation matrix,
//! on-resonance scalar-coupling evolution, the acquisition time grid and the
//! small residual coherences responsible for sampling-period oscillations.

use thiserror::Error;

use crate::channels::RelaxationParams;
use crate::dynamics::{DynamicsError, TimeGrid};
use crate::matrix::{cr, ComplexMatrix4, C64};
use crate::state::{BellDiagonalCoeffs, DeviationMatrix};

#[derive(Debug, Error)]
pub enum NmrError {
    #[error("deviation-level populations must sum to zero, got {0:.3e}")]
    PopulationsNotTraceless(f64),
    #[error("pseudo-EPR input must be diagonal, max off-diagonal = {0:.3e}")]
    NotDiagonal(f64),
    #[error("scalar coupling must be positive, got {0}")]
    NonPositiveCoupling(f64),
    #[error("residual coherence amplitude must be non-negative, got {0}")]
    NegativeAmplitude(f64),
    #[error(transparent)]
    Grid(#[from] DynamicsError),
}

/// Deviation-level populations of the prepared diagonal state; they sum to
/// zero because the identity part of the state is split off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalPopulations {
    pub pop_a: f64,
    pub pop_b: f64,
    pub pop_c: f64,
    pub pop_d: f64,
}

impl DiagonalPopulations {
    pub fn new(pop_a: f64, pop_b: f64, pop_c: f64, pop_d: f64) -> Result<Self, NmrError> {
        let sum = pop_a + pop_b + pop_c + pop_d;
        if sum.abs() > 1e-12 {
            return Err(NmrError::PopulationsNotTraceless(sum));
        }
        Ok(Self {
            pop_a,
            pop_b,
            pop_c,
            pop_d,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.pop_a, self.pop_b, self.pop_c, self.pop_d]
    }
}

/// Scalar coupling plus relaxation constants of the spin pair, and the
/// amplitude of preparation coherences left outside the X positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmrSystemParams {
    pub j_coupling: f64,
    pub relaxation: RelaxationParams,
    pub residual_amplitude: f64,
}

impl NmrSystemParams {
    pub fn new(
        j_coupling: f64,
        relaxation: RelaxationParams,
        residual_amplitude: f64,
    ) -> Result<Self, NmrError> {
        if !(j_coupling.is_finite() && j_coupling > 0.0) {
            return Err(NmrError::NonPositiveCoupling(j_coupling));
        }
        if !(residual_amplitude.is_finite() && residual_amplitude >= 0.0) {
            return Err(NmrError::NegativeAmplitude(residual_amplitude));
        }
        Ok(Self {
            j_coupling,
            relaxation,
            residual_amplitude,
        })
    }
}

/// The prepared diagonal deviation matrix.
pub fn diagonal_deviation(pops: &DiagonalPopulations) -> DeviationMatrix {
    let mut m = ComplexMatrix4::zeros();
    for (i, p) in pops.as_array().into_iter().enumerate() {
        m[(i, i)] = cr(p);
    }
    DeviationMatrix::new(m).expect("zero-sum diagonal is traceless Hermitian")
}

/// The pseudo-EPR gate as a matrix map: a diagonal deviation matrix
/// `diag(a, b, g, d)` becomes the X-type matrix with main diagonal
/// `((a+g)/2, (b+d)/2, (b+d)/2, (a+g)/2)`, corners `(-a+g)/2` and inner
/// anti-diagonal `(-b+d)/2`.
pub fn pseudo_epr(delta_diag: &DeviationMatrix) -> Result<DeviationMatrix, NmrError> {
    let m = delta_diag.matrix();
    let mut off = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                off = off.max(m[(i, j)].norm());
            }
        }
    }
    if off > 1e-12 {
        return Err(NmrError::NotDiagonal(off));
    }
    let (a, b, g, d) = (m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re);
    let mut out = ComplexMatrix4::zeros();
    out[(0, 0)] = cr(0.5 * (a + g));
    out[(1, 1)] = cr(0.5 * (b + d));
    out[(2, 2)] = cr(0.5 * (b + d));
    out[(3, 3)] = cr(0.5 * (a + g));
    out[(0, 3)] = cr(0.5 * (-a + g));
    out[(3, 0)] = cr(0.5 * (-a + g));
    out[(1, 2)] = cr(0.5 * (-b + d));
    out[(2, 1)] = cr(0.5 * (-b + d));
    Ok(DeviationMatrix::new(out).expect("X-type output stays traceless Hermitian"))
}

/// Populations whose prepared-then-gated state carries the target
/// Bell-diagonal coefficients. Inverse of [`pseudo_epr`] composed with
/// [`diagonal_deviation`] against the Bell-diagonal form; the forward
/// round trip is the correctness oracle.
pub fn solve_populations(c: &BellDiagonalCoeffs) -> DiagonalPopulations {
    let (cx, cy, cz) = (c.c_x, c.c_y, c.c_z);
    DiagonalPopulations::new(
        0.25 * (cz - cx + cy),
        0.25 * (-cz - cx - cy),
        0.25 * (cz + cx - cy),
        0.25 * (-cz + cx + cy),
    )
    .expect("solved populations sum to zero by construction")
}

/// On-resonance free evolution under the scalar coupling: conjugation by
/// `exp(-i 2 pi J t Iz x Iz)`. X-type entries are invariant; off-X
/// single-quantum coherences pick up phases `exp(-/+ i pi J t)`.
pub fn j_evolution(delta: &DeviationMatrix, t: f64, j: f64) -> DeviationMatrix {
    let half = 0.5 * std::f64::consts::PI * j * t;
    // propagator phases per basis state: diag(-h, +h, +h, -h)
    let phase = [-half, half, half, -half];
    let m = delta.matrix();
    let mut out = ComplexMatrix4::zeros();
    for i in 0..4 {
        for k in 0..4 {
            let d = phase[i] - phase[k];
            out[(i, k)] = m[(i, k)] * C64::new(d.cos(), -d.sin());
        }
    }
    DeviationMatrix::new(out).expect("unitary conjugation preserves validity")
}

/// Adds preparation residue `amplitude` to the single-quantum coherence
/// entries (0,1) and (2,3) (plus Hermitian conjugates); these are the
/// simplest entries that oscillate under the scalar coupling.
pub fn inject_residual_coherence(delta: &DeviationMatrix, amplitude: f64) -> DeviationMatrix {
    let mut m = *delta.matrix();
    m[(0, 1)] += cr(amplitude);
    m[(1, 0)] += cr(amplitude);
    m[(2, 3)] += cr(amplitude);
    m[(3, 2)] += cr(amplitude);
    DeviationMatrix::new(m).expect("real symmetric injection keeps validity")
}

/// Acquisition grid `t_m = m / (4 J)` for `m = 0..=m_max`.
pub fn sampling_grid(j: f64, m_max: usize) -> Result<TimeGrid, NmrError> {
    if !(j.is_finite() && j > 0.0) {
        return Err(NmrError::NonPositiveCoupling(j));
    }
    let times = (0..=m_max).map(|m| m as f64 / (4.0 * j)).collect();
    Ok(TimeGrid::new(times)?)
}
