//! Correlation quantifiers in the high-temperature expansion.
//!
//! All three quantities are reported in units of `(eps^2 / ln 2) bit`:
//!
//! * total: `I = 2 tr(D^2) - tr(D_A^2) - tr(D_B^2)` for a deviation matrix D,
//! * classical: `C = max I(measured D)` over product projective measurements,
//! * quantum: `Q = I - C` (symmetric discord).
//!
//! The maximization runs a coarse joint grid over both measurement Bloch
//! vectors followed by a simplex refinement. An exact von Neumann route
//! ([`mutual_info_exact`], plain bits) exists to validate the expansion.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::{
    cr, hermitian_eigenvalues2, hermitian_eigenvalues4, kron, pauli_dot, trace_square_hermitian2,
    trace_square_hermitian4, ComplexMatrix2,
};
use crate::optim::nelder_mead;
use crate::state::{
    bloch_decompose, partial_trace, BellDiagonalCoeffs, BlochDecomposition, DensityMatrix,
    DeviationMatrix, Subsystem,
};

#[derive(Debug, Error)]
pub enum CorrError {
    #[error("measurement direction is not a unit vector: |n| = {0}")]
    NotUnitVector(f64),
    #[error("optimizer grid needs at least 2 points per angle, got {0}")]
    GridTooCoarse(usize),
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
}

const UNIT_TOL: f64 = 1e-12;

/// A pair of local projective measurements, one per qubit, each defined by a
/// Bloch direction. A direction and its antipode describe the same
/// measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductProjectiveBasis {
    n_a: [f64; 3],
    n_b: [f64; 3],
}

fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn unit_from_angles(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Flips the sign so the reported representative of an axis is unique:
/// positive z, then positive x, then positive y.
fn canonical_axis(v: [f64; 3]) -> [f64; 3] {
    let tol = 1e-12;
    let flip = if v[2].abs() > tol {
        v[2] < 0.0
    } else if v[0].abs() > tol {
        v[0] < 0.0
    } else {
        v[1] < 0.0
    };
    if flip {
        [-v[0], -v[1], -v[2]]
    } else {
        v
    }
}

fn angles_of(v: &[f64; 3]) -> (f64, f64) {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    let phi = if v[0].abs() < 1e-14 && v[1].abs() < 1e-14 {
        0.0
    } else {
        let p = v[1].atan2(v[0]);
        if p < 0.0 {
            p + 2.0 * std::f64::consts::PI
        } else {
            p
        }
    };
    (theta, phi)
}

impl ProductProjectiveBasis {
    pub fn new(n_a: [f64; 3], n_b: [f64; 3]) -> Result<Self, CorrError> {
        for n in [&n_a, &n_b] {
            let len = norm3(n);
            if (len - 1.0).abs() > UNIT_TOL {
                return Err(CorrError::NotUnitVector(len));
            }
        }
        Ok(Self { n_a, n_b })
    }

    pub fn from_angles(theta_a: f64, phi_a: f64, theta_b: f64, phi_b: f64) -> Self {
        Self {
            n_a: unit_from_angles(theta_a, phi_a),
            n_b: unit_from_angles(theta_b, phi_b),
        }
    }

    pub fn n_a(&self) -> [f64; 3] {
        self.n_a
    }

    pub fn n_b(&self) -> [f64; 3] {
        self.n_b
    }

    /// Canonical `(theta_a, phi_a, theta_b, phi_b)` with antipodes identified.
    pub fn angles(&self) -> (f64, f64, f64, f64) {
        let (ta, pa) = angles_of(&canonical_axis(self.n_a));
        let (tb, pb) = angles_of(&canonical_axis(self.n_b));
        (ta, pa, tb, pb)
    }
}

/// Rank-1 projector `(I + n.sigma)/2`.
pub fn projector(n: [f64; 3]) -> ComplexMatrix2 {
    (ComplexMatrix2::identity() + pauli_dot(n)) * cr(0.5)
}

/// `I = 2 tr(D^2) - tr(D_A^2) - tr(D_B^2)` in units of `(eps^2/ln 2) bit`.
pub fn mutual_info_expansion(delta: &DeviationMatrix) -> f64 {
    let m = delta.matrix();
    let da = partial_trace(m, Subsystem::A);
    let db = partial_trace(m, Subsystem::B);
    2.0 * trace_square_hermitian4(m) - trace_square_hermitian2(&da) - trace_square_hermitian2(&db)
}

/// The complete projective measurement map
/// `D -> sum_ij (P_i x P_j) D (P_i x P_j)`.
pub fn measure_map(delta: &DeviationMatrix, basis: &ProductProjectiveBasis) -> DeviationMatrix {
    let pa = [projector(basis.n_a), projector([-basis.n_a[0], -basis.n_a[1], -basis.n_a[2]])];
    let pb = [projector(basis.n_b), projector([-basis.n_b[0], -basis.n_b[1], -basis.n_b[2]])];
    let mut out = crate::matrix::ComplexMatrix4::zeros();
    for a in &pa {
        for b in &pb {
            let p = kron(a, b);
            out += p * delta.matrix() * p;
        }
    }
    DeviationMatrix::new(out).expect("measurement map preserves Hermiticity and trace")
}

/// Mutual information left after measuring in `basis`.
pub fn measured_mutual_info(delta: &DeviationMatrix, basis: &ProductProjectiveBasis) -> f64 {
    mutual_info_expansion(&measure_map(delta, basis))
}

/// Same quantity evaluated from the Pauli decomposition: the measured state
/// has correlation tensor `(n_a . C n_b) n_a n_b^T`, so the expansion reduces
/// to `(n_a . C n_b)^2 / 2`. This is the optimizer's inner-loop form; its
/// agreement with [`measured_mutual_info`] is covered by tests.
pub fn measured_mutual_info_from_bloch(
    bloch: &BlochDecomposition,
    basis: &ProductProjectiveBasis,
) -> f64 {
    let c = &bloch.corr;
    let na = basis.n_a;
    let nb = basis.n_b;
    let mut dot = 0.0;
    for i in 0..3 {
        dot += na[i] * (c[i][0] * nb[0] + c[i][1] * nb[1] + c[i][2] * nb[2]);
    }
    0.5 * dot * dot
}

/// Search settings for the measurement-basis maximization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerSettings {
    /// Polar samples per hemisphere (antipodal directions are identified).
    pub grid_theta: usize,
    /// Azimuthal samples over the full circle.
    pub grid_phi: usize,
    /// Simplex iteration budget for the refinement stage.
    pub refine_iters: usize,
    /// Convergence tolerance on the objective value.
    pub tolerance: f64,
}

impl OptimizerSettings {
    pub fn new(
        grid_theta: usize,
        grid_phi: usize,
        refine_iters: usize,
        tolerance: f64,
    ) -> Result<Self, CorrError> {
        if grid_theta < 2 {
            return Err(CorrError::GridTooCoarse(grid_theta));
        }
        if grid_phi < 2 {
            return Err(CorrError::GridTooCoarse(grid_phi));
        }
        if !tolerance.is_finite() || tolerance <= 0.0 {
            return Err(CorrError::NonPositiveTolerance(tolerance));
        }
        Ok(Self {
            grid_theta,
            grid_phi,
            refine_iters,
            tolerance,
        })
    }
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            grid_theta: 24,
            grid_phi: 48,
            refine_iters: 400,
            tolerance: 1e-9,
        }
    }
}

/// Result of the classical-correlation maximization.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub basis: ProductProjectiveBasis,
    /// False when the refinement stopped on its iteration budget; the value
    /// is then the best found so far.
    pub converged: bool,
}

struct GridPoint {
    n: [f64; 3],
    theta: f64,
    phi: f64,
}

fn sphere_grid(settings: &OptimizerSettings) -> Vec<GridPoint> {
    // theta in [0, pi/2] suffices: antipodal directions give the same
    // measurement, so only one hemisphere has to be scanned
    let nt = settings.grid_theta;
    let np = settings.grid_phi;
    let mut pts = Vec::with_capacity(nt * np);
    for i in 0..nt {
        let theta = 0.5 * std::f64::consts::PI * i as f64 / (nt - 1) as f64;
        for j in 0..np {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
            pts.push(GridPoint {
                n: unit_from_angles(theta, phi),
                theta,
                phi,
            });
        }
    }
    pts
}

/// `C = max I(chi)` over product projective bases, with the maximizer.
///
/// A joint coarse grid over both hemispheres picks the best cell (ties are
/// broken toward the smallest `theta_a`, then `phi_a`, `theta_b`, `phi_b`
/// through the scan order), then a simplex refinement polishes the angles.
/// The returned value is re-evaluated through the measurement map.
pub fn classical_correlation(
    delta: &DeviationMatrix,
    settings: &OptimizerSettings,
) -> ClassicalCorrelation {
    let bloch = bloch_decompose(delta);
    let c = &bloch.corr;
    let grid = sphere_grid(settings);

    // candidates within rounding noise of the incumbent count as ties, so the
    // first (lexicographically smallest) angles win among degenerate maxima
    const TIE_EPS: f64 = 1e-13;
    let mut best_val = f64::NEG_INFINITY;
    let mut best = (0usize, 0usize);
    for (ia, a) in grid.iter().enumerate() {
        // u = C^T n_a, then the objective over n_b is (u . n_b)^2 / 2
        let u = [
            a.n[0] * c[0][0] + a.n[1] * c[1][0] + a.n[2] * c[2][0],
            a.n[0] * c[0][1] + a.n[1] * c[1][1] + a.n[2] * c[2][1],
            a.n[0] * c[0][2] + a.n[1] * c[1][2] + a.n[2] * c[2][2],
        ];
        for (ib, b) in grid.iter().enumerate() {
            let dot = u[0] * b.n[0] + u[1] * b.n[1] + u[2] * b.n[2];
            let val = 0.5 * dot * dot;
            if val > best_val + TIE_EPS {
                best_val = val;
                best = (ia, ib);
            }
        }
    }

    let (ga, gb) = (&grid[best.0], &grid[best.1]);
    let dt = 0.5 * std::f64::consts::PI / (settings.grid_theta - 1) as f64;
    let dp = 2.0 * std::f64::consts::PI / settings.grid_phi as f64;
    let objective = |x: &[f64; 4]| {
        let basis = ProductProjectiveBasis::from_angles(x[0], x[1], x[2], x[3]);
        -measured_mutual_info_from_bloch(&bloch, &basis)
    };
    let refined = nelder_mead(
        objective,
        [ga.theta, ga.phi, gb.theta, gb.phi],
        [0.5 * dt, 0.5 * dp, 0.5 * dt, 0.5 * dp],
        settings.tolerance,
        settings.refine_iters,
    );

    // keep the tie-broken grid point unless the refinement made real
    // progress; on exactly degenerate ridges the simplex walks randomly in
    // the flat directions without gaining value
    let angles = if -refined.value > best_val + settings.tolerance {
        refined.x
    } else {
        [ga.theta, ga.phi, gb.theta, gb.phi]
    };
    let n_a = canonical_axis(unit_from_angles(angles[0], angles[1]));
    let n_b = canonical_axis(unit_from_angles(angles[2], angles[3]));
    let basis = ProductProjectiveBasis { n_a, n_b };
    ClassicalCorrelation {
        value: measured_mutual_info(delta, &basis),
        basis,
        converged: refined.converged,
    }
}

/// Total, classical and quantum correlation in `(eps^2/ln 2) bit` units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationValues {
    pub mutual_info: f64,
    pub classical: f64,
    pub quantum: f64,
}

/// Full discord evaluation: values plus the maximizing basis.
#[derive(Debug, Clone, Copy)]
pub struct DiscordResult {
    pub values: CorrelationValues,
    pub maximizer: ProductProjectiveBasis,
    pub converged: bool,
}

/// `Q = I - max I(chi)` together with its ingredients.
pub fn quantum_discord(delta: &DeviationMatrix, settings: &OptimizerSettings) -> DiscordResult {
    let mutual_info = mutual_info_expansion(delta);
    let cc = classical_correlation(delta, settings);
    DiscordResult {
        values: CorrelationValues {
            mutual_info,
            classical: cc.value,
            quantum: mutual_info - cc.value,
        },
        maximizer: cc.basis,
        converged: cc.converged,
    }
}

/// Analytic values for a Bell-diagonal state: `I = sum c_i^2 / 2`,
/// `C = max_i c_i^2 / 2`. Test oracle for the numerical path.
pub fn bell_diagonal_closed_form(c: &BellDiagonalCoeffs) -> CorrelationValues {
    let sq = c.as_array().map(|v| v * v);
    let mutual_info = 0.5 * (sq[0] + sq[1] + sq[2]);
    let classical = 0.5 * sq.into_iter().fold(0.0f64, f64::max);
    CorrelationValues {
        mutual_info,
        classical,
        quantum: mutual_info - classical,
    }
}

fn entropy_bits(eigs: &[f64]) -> Result<f64, crate::state::StateError> {
    let mut s = 0.0;
    for &lambda in eigs {
        if lambda < crate::state::EIGENVALUE_FLOOR {
            return Err(crate::state::StateError::NegativeEigenvalue(lambda));
        }
        if lambda > 1e-15 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s)
}

/// Exact quantum mutual information `S_A + S_B - S_AB` in bits (no
/// expansion). Used to validate the second-order formula.
pub fn mutual_info_exact(rho: &DensityMatrix) -> Result<f64, crate::state::StateError> {
    let m = rho.matrix();
    let ra = partial_trace(m, Subsystem::A);
    let rb = partial_trace(m, Subsystem::B);
    let s_a = entropy_bits(&hermitian_eigenvalues2(&ra))?;
    let s_b = entropy_bits(&hermitian_eigenvalues2(&rb))?;
    let s_ab = entropy_bits(&hermitian_eigenvalues4(m))?;
    Ok(s_a + s_b - s_ab)
}
