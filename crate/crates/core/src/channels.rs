//! Kraus-operator channels for the two relaxation mechanisms seen by each
//! nuclear spin: generalized amplitude damping (energy exchange with the
//! thermal bath, rate set by T1) and phase damping (pure dephasing, rate set
//! by the effective T2).
//!
//! Channels are parameterized by the total elapsed time from t = 0, so a
//! trajectory evaluates a fresh channel at every grid time instead of
//! integrating stepwise.

use thiserror::Error;

use crate::matrix::{self, cr, ComplexMatrix2, ComplexMatrix4};
use crate::state::{DensityMatrix, StateError};

/// Completeness tolerance for `sum E^dagger E = I` (max abs entry).
pub const COMPLETENESS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("Kraus set violates completeness: max |sum E^t E - I| = {0:.3e}")]
    Incomplete(f64),
    #[error("channel dimensions do not match")]
    DimensionMismatch,
    #[error("negative evolution time {0}")]
    NegativeTime(f64),
    #[error("relaxation time must be positive, got {0}")]
    NonPositiveRelaxationTime(f64),
    #[error("empty Kraus set")]
    Empty,
    #[error(transparent)]
    State(#[from] StateError),
}

/// Kraus operators of a channel, either on one qubit or on the full pair.
#[derive(Debug, Clone)]
pub enum KrausSet {
    Single(Vec<ComplexMatrix2>),
    Lifted(Vec<ComplexMatrix4>),
}

/// A completely positive trace-preserving map in operator-sum form.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    kraus: KrausSet,
    label: String,
}

/// `max |sum_k E_k^dagger E_k - I|` for single-qubit operators.
pub fn completeness_error2(ops: &[ComplexMatrix2]) -> f64 {
    let mut acc = ComplexMatrix2::zeros();
    for e in ops {
        acc += e.adjoint() * e;
    }
    matrix::max_abs_diff2(&acc, &ComplexMatrix2::identity())
}

/// `max |sum_k E_k^dagger E_k - I|` for two-qubit operators.
pub fn completeness_error4(ops: &[ComplexMatrix4]) -> f64 {
    let mut acc = ComplexMatrix4::zeros();
    for e in ops {
        acc += e.adjoint() * e;
    }
    matrix::max_abs_diff4(&acc, &ComplexMatrix4::identity())
}

impl QuantumChannel {
    pub fn from_kraus_single(
        ops: Vec<ComplexMatrix2>,
        label: impl Into<String>,
    ) -> Result<Self, ChannelError> {
        if ops.is_empty() {
            return Err(ChannelError::Empty);
        }
        let err = completeness_error2(&ops);
        if err.is_nan() || err > COMPLETENESS_TOL {
            return Err(ChannelError::Incomplete(err));
        }
        Ok(Self {
            kraus: KrausSet::Single(ops),
            label: label.into(),
        })
    }

    pub fn from_kraus_lifted(
        ops: Vec<ComplexMatrix4>,
        label: impl Into<String>,
    ) -> Result<Self, ChannelError> {
        if ops.is_empty() {
            return Err(ChannelError::Empty);
        }
        let err = completeness_error4(&ops);
        if err.is_nan() || err > COMPLETENESS_TOL {
            return Err(ChannelError::Incomplete(err));
        }
        Ok(Self {
            kraus: KrausSet::Lifted(ops),
            label: label.into(),
        })
    }

    /// The identity map on one qubit.
    pub fn identity_single() -> Self {
        Self {
            kraus: KrausSet::Single(vec![ComplexMatrix2::identity()]),
            label: "identity".into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    /// Hilbert-space dimension the channel acts on (2 or 4).
    pub fn dim(&self) -> usize {
        match &self.kraus {
            KrausSet::Single(_) => 2,
            KrausSet::Lifted(_) => 4,
        }
    }

    /// Deviation of `sum E^dagger E` from the identity.
    pub fn completeness_error(&self) -> f64 {
        match &self.kraus {
            KrausSet::Single(ops) => completeness_error2(ops),
            KrausSet::Lifted(ops) => completeness_error4(ops),
        }
    }
}

/// Generalized amplitude damping for one qubit after time `t`.
///
/// Four Kraus operators with `p = 1 - exp(-t/t1)` and bath parameter
/// `gamma = 1/2 - epsilon/2`; the fixed point is the thermal population
/// `diag(gamma, 1 - gamma)`.
pub fn gad_channel(t: f64, t1: f64, epsilon: f64) -> Result<QuantumChannel, ChannelError> {
    if t < 0.0 || !t.is_finite() {
        return Err(ChannelError::NegativeTime(t));
    }
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(ChannelError::NonPositiveRelaxationTime(t1));
    }
    let gamma = 0.5 - 0.5 * epsilon;
    let p = 1.0 - (-t / t1).exp();
    let sg = gamma.sqrt();
    let sg1 = (1.0 - gamma).sqrt();
    let sp = p.sqrt();
    let s1p = (1.0 - p).sqrt();
    let zero = cr(0.0);
    let ops = vec![
        ComplexMatrix2::new(cr(sg), zero, zero, cr(sg * s1p)),
        ComplexMatrix2::new(zero, cr(sg * sp), zero, zero),
        ComplexMatrix2::new(cr(sg1 * s1p), zero, zero, cr(sg1)),
        ComplexMatrix2::new(zero, zero, cr(sg1 * sp), zero),
    ];
    QuantumChannel::from_kraus_single(ops, format!("gad(t={t}, t1={t1})"))
}

/// Phase damping for one qubit after time `t`.
///
/// Two Kraus operators with `lambda = 1 - exp(-t/t2)`; populations are left
/// untouched and coherences are scaled by `1 - lambda = exp(-t/t2)`.
pub fn pd_channel(t: f64, t2: f64) -> Result<QuantumChannel, ChannelError> {
    if t < 0.0 || !t.is_finite() {
        return Err(ChannelError::NegativeTime(t));
    }
    if !t2.is_finite() || t2 <= 0.0 {
        return Err(ChannelError::NonPositiveRelaxationTime(t2));
    }
    let lambda = 1.0 - (-t / t2).exp();
    let zero = cr(0.0);
    let a = (1.0 - 0.5 * lambda).sqrt();
    let b = (0.5 * lambda).sqrt();
    let ops = vec![
        ComplexMatrix2::new(cr(a), zero, zero, cr(a)),
        ComplexMatrix2::new(cr(b), zero, zero, cr(-b)),
    ];
    QuantumChannel::from_kraus_single(ops, format!("pd(t={t}, t2={t2})"))
}

/// Tensor product of two single-qubit channels acting independently on
/// qubits A and B: Kraus set `{E_i x F_j}`.
pub fn lift_local(
    ch_a: &QuantumChannel,
    ch_b: &QuantumChannel,
) -> Result<QuantumChannel, ChannelError> {
    let (ops_a, ops_b) = match (&ch_a.kraus, &ch_b.kraus) {
        (KrausSet::Single(a), KrausSet::Single(b)) => (a, b),
        _ => return Err(ChannelError::DimensionMismatch),
    };
    let mut ops = Vec::with_capacity(ops_a.len() * ops_b.len());
    for e in ops_a {
        for f in ops_b {
            ops.push(matrix::kron(e, f));
        }
    }
    QuantumChannel::from_kraus_lifted(ops, format!("{} x {}", ch_a.label, ch_b.label))
}

/// Sequential composition: `first` then `second`, Kraus set `{F_j E_i}`.
pub fn compose(
    first: &QuantumChannel,
    second: &QuantumChannel,
) -> Result<QuantumChannel, ChannelError> {
    let label = format!("{} ; {}", first.label, second.label);
    match (&first.kraus, &second.kraus) {
        (KrausSet::Single(e), KrausSet::Single(f)) => {
            let mut ops = Vec::with_capacity(e.len() * f.len());
            for fi in f {
                for ei in e {
                    ops.push(fi * ei);
                }
            }
            QuantumChannel::from_kraus_single(ops, label)
        }
        (KrausSet::Lifted(e), KrausSet::Lifted(f)) => {
            let mut ops = Vec::with_capacity(e.len() * f.len());
            for fi in f {
                for ei in e {
                    ops.push(fi * ei);
                }
            }
            QuantumChannel::from_kraus_lifted(ops, label)
        }
        _ => Err(ChannelError::DimensionMismatch),
    }
}

fn hermitize4(m: &ComplexMatrix4) -> ComplexMatrix4 {
    (m + m.adjoint()) * cr(0.5)
}

/// Operator-sum action on a raw two-qubit matrix.
///
/// The sum is Hermitian in exact arithmetic for Hermitian input; it is
/// mirrored so rounding asymmetry cannot survive the later `1/eps`
/// amplification of the deviation extraction.
pub fn apply_matrix(ch: &QuantumChannel, m: &ComplexMatrix4) -> Result<ComplexMatrix4, ChannelError> {
    let ops = match &ch.kraus {
        KrausSet::Lifted(ops) => ops,
        KrausSet::Single(_) => return Err(ChannelError::DimensionMismatch),
    };
    let mut acc = ComplexMatrix4::zeros();
    for e in ops {
        acc += e * m * e.adjoint();
    }
    Ok(hermitize4(&acc))
}

/// Operator-sum action on a single-qubit matrix.
pub fn apply_one_qubit(
    ch: &QuantumChannel,
    m: &ComplexMatrix2,
) -> Result<ComplexMatrix2, ChannelError> {
    let ops = match &ch.kraus {
        KrausSet::Single(ops) => ops,
        KrausSet::Lifted(_) => return Err(ChannelError::DimensionMismatch),
    };
    let mut acc = ComplexMatrix2::zeros();
    for e in ops {
        acc += e * m * e.adjoint();
    }
    Ok((acc + acc.adjoint()) * cr(0.5))
}

/// `rho(t) = sum_k E_k rho(0) E_k^dagger` on a validated density matrix.
pub fn apply(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix, ChannelError> {
    let out = apply_matrix(ch, rho.matrix())?;
    Ok(DensityMatrix::new(out, rho.epsilon())?)
}

/// Relaxation times of both qubits plus the expansion parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationParams {
    pub t1_a: f64,
    pub t1_b: f64,
    pub t2_a: f64,
    pub t2_b: f64,
    pub epsilon: f64,
}

impl RelaxationParams {
    pub fn new(
        t1_a: f64,
        t1_b: f64,
        t2_a: f64,
        t2_b: f64,
        epsilon: f64,
    ) -> Result<Self, ChannelError> {
        for t in [t1_a, t1_b, t2_a, t2_b] {
            if !(t.is_finite() && t > 0.0) {
                return Err(ChannelError::NonPositiveRelaxationTime(t));
            }
        }
        if !(epsilon.is_finite() && epsilon > 0.0 && epsilon <= 0.1) {
            return Err(ChannelError::State(StateError::EpsilonOutOfRange(epsilon)));
        }
        Ok(Self {
            t1_a,
            t1_b,
            t2_a,
            t2_b,
            epsilon,
        })
    }

    /// T2 <= 2 T1 is required of a physical qubit; violations are worth a
    /// warning but not a rejection (T2* estimates can be noisy).
    pub fn physicality_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.t2_a > 2.0 * self.t1_a {
            warnings.push(format!(
                "qubit A: T2 = {} exceeds 2*T1 = {}",
                self.t2_a,
                2.0 * self.t1_a
            ));
        }
        if self.t2_b > 2.0 * self.t1_b {
            warnings.push(format!(
                "qubit B: T2 = {} exceeds 2*T1 = {}",
                self.t2_b,
                2.0 * self.t1_b
            ));
        }
        warnings
    }
}

/// Which noise sources act during the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelSelection {
    PhaseDampingOnly,
    AmplitudeDampingOnly,
    Both,
}

fn single_qubit_noise(
    sel: ChannelSelection,
    t: f64,
    t1: f64,
    t2: f64,
    epsilon: f64,
) -> Result<QuantumChannel, ChannelError> {
    match sel {
        ChannelSelection::PhaseDampingOnly => pd_channel(t, t2),
        ChannelSelection::AmplitudeDampingOnly => gad_channel(t, t1, epsilon),
        // GAD then PD; the two actions commute, the order is fixed for determinism
        ChannelSelection::Both => compose(&gad_channel(t, t1, epsilon)?, &pd_channel(t, t2)?),
    }
}

/// The full two-qubit noise channel for elapsed time `t`: the selected
/// damping mechanisms acting independently on each qubit.
pub fn lifted_noise_channel(
    sel: ChannelSelection,
    t: f64,
    params: &RelaxationParams,
) -> Result<QuantumChannel, ChannelError> {
    let ch_a = single_qubit_noise(sel, t, params.t1_a, params.t2_a, params.epsilon)?;
    let ch_b = single_qubit_noise(sel, t, params.t1_b, params.t2_b, params.epsilon)?;
    lift_local(&ch_a, &ch_b)
}
