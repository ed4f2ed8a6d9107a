//! Correlation trajectories under decoherence, the analytic regime-crossing
//! time for Bell-diagonal states under pure dephasing, sudden-change
//! detection and the thermal-channel subtraction analysis.

use thiserror::Error;

use crate::changepoint::{self, ChangePointError, SuddenChangeDetection};
use crate::channels::{lifted_noise_channel, ChannelError, ChannelSelection, RelaxationParams};
use crate::correlations::{quantum_discord, CorrelationValues, OptimizerSettings};
use crate::nmr::{j_evolution, NmrSystemParams};
use crate::state::{
    bloch_decompose, compose_density, extract_deviation, BellDiagonalCoeffs, BlochDecomposition,
    DeviationMatrix, StateError,
};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("time grid must be strictly increasing at index {0}")]
    NonIncreasingGrid(usize),
    #[error("time grid must start at 0, got {0}")]
    FirstTimeNotZero(f64),
    #[error("evolution failed at t = {t}: {source}")]
    EvolutionFailed { t: f64, source: ChannelError },
    #[error(transparent)]
    State(#[from] StateError),
    #[error("pure dephasing never crosses: c_z = 0")]
    NoCrossing,
    #[error("crossing formula assumes |c_x| >= |c_y|, got c_x = {c_x}, c_y = {c_y}")]
    InvalidGeometry { c_x: f64, c_y: f64 },
    #[error("relaxation time must be positive, got {0}")]
    NonPositiveRelaxationTime(f64),
    #[error(transparent)]
    ChangePoint(#[from] ChangePointError),
}

/// Strictly increasing sampling times starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self, DynamicsError> {
        let first = *times.first().ok_or(DynamicsError::EmptyGrid)?;
        if first != 0.0 {
            return Err(DynamicsError::FirstTimeNotZero(first));
        }
        for (i, w) in times.windows(2).enumerate() {
            if w[1].is_nan() || w[1] <= w[0] {
                return Err(DynamicsError::NonIncreasingGrid(i + 1));
            }
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Median spacing, used to express "within one grid step".
    pub fn step(&self) -> f64 {
        if self.times.len() < 2 {
            return 0.0;
        }
        let mut steps: Vec<f64> = self.times.windows(2).map(|w| w[1] - w[0]).collect();
        steps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        steps[steps.len() / 2]
    }
}

/// Correlations and state snapshot at one sampling time.
#[derive(Debug, Clone, Copy)]
pub struct CorrelationRecord {
    pub t: f64,
    pub values: CorrelationValues,
    pub bloch: BlochDecomposition,
}

/// Time-ordered correlation records.
#[derive(Debug, Clone)]
pub struct Trajectory {
    records: Vec<CorrelationRecord>,
}

impl Trajectory {
    pub fn from_records(records: Vec<CorrelationRecord>) -> Self {
        Self { records }
    }

    pub fn records(&self) -> &[CorrelationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn mutual_info_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.values.mutual_info).collect()
    }

    pub fn classical_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.values.classical).collect()
    }

    pub fn quantum_series(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.values.quantum).collect()
    }
}

fn record_at(
    delta_t: &DeviationMatrix,
    t: f64,
    settings: &OptimizerSettings,
) -> CorrelationRecord {
    let disc = quantum_discord(delta_t, settings);
    CorrelationRecord {
        t,
        values: disc.values,
        bloch: bloch_decompose(delta_t),
    }
}

/// Evolves `delta0` under the selected noise and records correlations at
/// every grid time.
///
/// The channel is rebuilt from its closed-form time dependence at each grid
/// time and applied to the initial state, so records are independent and the
/// trajectory is deterministic.
pub fn evolve_trajectory(
    delta0: &DeviationMatrix,
    params: &RelaxationParams,
    grid: &TimeGrid,
    sel: ChannelSelection,
    settings: &OptimizerSettings,
) -> Result<Trajectory, DynamicsError> {
    let rho0 = compose_density(delta0, params.epsilon)?;
    let mut records = Vec::with_capacity(grid.len());
    for &t in grid.times() {
        let wrap = |source: ChannelError| DynamicsError::EvolutionFailed { t, source };
        let ch = lifted_noise_channel(sel, t, params).map_err(wrap)?;
        let rho_t = crate::channels::apply(&ch, &rho0).map_err(wrap)?;
        let delta_t = extract_deviation(&rho_t).map_err(|e| wrap(ChannelError::State(e)))?;
        records.push(record_at(&delta_t, t, settings));
    }
    Ok(Trajectory { records })
}

/// Like [`evolve_trajectory`], but each grid time also includes the
/// on-resonance scalar-coupling rotation of the initial deviation matrix.
/// X-type states are unaffected; residual off-X coherences oscillate with
/// period `1/J` in the correlation curves.
pub fn evolve_trajectory_nmr(
    delta0: &DeviationMatrix,
    nmr: &NmrSystemParams,
    grid: &TimeGrid,
    sel: ChannelSelection,
    settings: &OptimizerSettings,
) -> Result<Trajectory, DynamicsError> {
    let params = &nmr.relaxation;
    let mut records = Vec::with_capacity(grid.len());
    for &t in grid.times() {
        let wrap = |source: ChannelError| DynamicsError::EvolutionFailed { t, source };
        let delta_j = j_evolution(delta0, t, nmr.j_coupling);
        let rho0 = compose_density(&delta_j, params.epsilon)?;
        let ch = lifted_noise_channel(sel, t, params).map_err(wrap)?;
        let rho_t = crate::channels::apply(&ch, &rho0).map_err(wrap)?;
        let delta_t = extract_deviation(&rho_t).map_err(|e| wrap(ChannelError::State(e)))?;
        records.push(record_at(&delta_t, t, settings));
    }
    Ok(Trajectory { records })
}

/// When the regimes swap under pure dephasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossingTime {
    /// Crossing at a positive time.
    At(f64),
    /// `|c_x| <= |c_z|`: the z component dominates from the start.
    Origin,
}

impl CrossingTime {
    pub fn time(&self) -> f64 {
        match self {
            CrossingTime::At(t) => *t,
            CrossingTime::Origin => 0.0,
        }
    }
}

/// Closed-form crossing time under pure dephasing: `c_x` decays as
/// `exp(-t (1/T2A + 1/T2B))` while `c_z` stays constant, so
/// `t* = ln(|c_x| / |c_z|) / (1/T2A + 1/T2B)`.
pub fn analytic_sudden_change(
    c: &BellDiagonalCoeffs,
    t2_a: f64,
    t2_b: f64,
) -> Result<CrossingTime, DynamicsError> {
    for t in [t2_a, t2_b] {
        if !(t.is_finite() && t > 0.0) {
            return Err(DynamicsError::NonPositiveRelaxationTime(t));
        }
    }
    if c.c_z == 0.0 {
        return Err(DynamicsError::NoCrossing);
    }
    if c.c_y.abs() > c.c_x.abs() {
        return Err(DynamicsError::InvalidGeometry {
            c_x: c.c_x,
            c_y: c.c_y,
        });
    }
    if c.c_x.abs() <= c.c_z.abs() {
        return Ok(CrossingTime::Origin);
    }
    let rate = 1.0 / t2_a + 1.0 / t2_b;
    Ok(CrossingTime::At((c.c_x.abs() / c.c_z.abs()).ln() / rate))
}

/// Which correlation curve to inspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Classical,
    Quantum,
}

/// Two-segment change detection on one correlation curve of a trajectory.
pub fn detect_sudden_change(
    traj: &Trajectory,
    curve: CurveKind,
) -> Result<SuddenChangeDetection, DynamicsError> {
    let times = traj.times();
    let values = match curve {
        CurveKind::Classical => traj.classical_series(),
        CurveKind::Quantum => traj.quantum_series(),
    };
    Ok(changepoint::detect_in_series(&times, &values)?)
}

/// Runs the same evolution twice, with the thermal channel and without it:
/// returns `(both-channels trajectory, dephasing-only trajectory)` on the
/// same grid. Their difference is the amplitude-damping contribution to the
/// correlation dynamics.
pub fn subtract_amplitude_damping(
    delta0: &DeviationMatrix,
    params: &RelaxationParams,
    grid: &TimeGrid,
    settings: &OptimizerSettings,
) -> Result<(Trajectory, Trajectory), DynamicsError> {
    let both = evolve_trajectory(delta0, params, grid, ChannelSelection::Both, settings)?;
    let pd_only = evolve_trajectory(
        delta0,
        params,
        grid,
        ChannelSelection::PhaseDampingOnly,
        settings,
    )?;
    Ok((both, pd_only))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, lift_local, pd_channel};
    use crate::state::bell_diagonal_deviation;

    fn chloroform_params() -> RelaxationParams {
        RelaxationParams::new(2.5, 7.0, 0.31, 0.12, 1e-5).unwrap()
    }

    fn bell(cx: f64, cy: f64, cz: f64) -> DeviationMatrix {
        bell_diagonal_deviation(&BellDiagonalCoeffs::new(cx, cy, cz).unwrap())
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(TimeGrid::new(vec![]), Err(DynamicsError::EmptyGrid)));
        assert!(matches!(
            TimeGrid::new(vec![0.1, 0.2]),
            Err(DynamicsError::FirstTimeNotZero(_))
        ));
        assert!(matches!(
            TimeGrid::new(vec![0.0, 0.2, 0.2]),
            Err(DynamicsError::NonIncreasingGrid(2))
        ));
        let g = TimeGrid::new(vec![0.0, 0.1, 0.2]).unwrap();
        assert!((g.step() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn single_point_grid_reproduces_initial_correlations() {
        let d = bell(0.41, 0.41, 0.30);
        let grid = TimeGrid::new(vec![0.0]).unwrap();
        let settings = OptimizerSettings::default();
        let traj = evolve_trajectory(
            &d,
            &chloroform_params(),
            &grid,
            ChannelSelection::PhaseDampingOnly,
            &settings,
        )
        .unwrap();
        assert_eq!(traj.len(), 1);
        let direct = quantum_discord(&d, &settings);
        let rec = &traj.records()[0];
        assert!((rec.values.mutual_info - direct.values.mutual_info).abs() < 1e-9);
        assert!((rec.values.classical - direct.values.classical).abs() < 1e-9);
    }

    #[test]
    fn dephasing_only_keeps_classical_constant() {
        let d = bell(0.3, 0.3, 0.9);
        let grid = crate::nmr::sampling_grid(215.1, 40).unwrap();
        let settings = OptimizerSettings::default();
        let traj = evolve_trajectory(
            &d,
            &chloroform_params(),
            &grid,
            ChannelSelection::PhaseDampingOnly,
            &settings,
        )
        .unwrap();
        let c = traj.classical_series();
        let c0 = c[0];
        for v in &c {
            assert!((v - c0).abs() <= 1e-9);
        }
        let q = traj.quantum_series();
        for w in q.windows(2) {
            assert!(w[1] < w[0], "quantum correlation must strictly decrease");
        }
    }

    #[test]
    fn analytic_crossing_examples() {
        let c = BellDiagonalCoeffs::new(0.41, 0.41, 0.30).unwrap();
        let t = analytic_sudden_change(&c, 0.31, 0.12).unwrap();
        assert!((t.time() - 0.027024042519925743).abs() < 1e-15);

        let c = BellDiagonalCoeffs::new(0.9, 0.9, 0.3).unwrap();
        let t = analytic_sudden_change(&c, 0.31, 0.12).unwrap();
        assert!((t.time() - 0.09504273753128763).abs() < 1e-15);

        let c = BellDiagonalCoeffs::new(0.5, 0.5, 0.5).unwrap();
        assert_eq!(
            analytic_sudden_change(&c, 0.31, 0.12).unwrap(),
            CrossingTime::Origin
        );
        let c = BellDiagonalCoeffs::new(0.2, 0.1, 0.5).unwrap();
        assert_eq!(
            analytic_sudden_change(&c, 0.31, 0.12).unwrap(),
            CrossingTime::Origin
        );

        let c = BellDiagonalCoeffs::new(0.5, 0.5, 0.0).unwrap();
        assert!(matches!(
            analytic_sudden_change(&c, 0.31, 0.12),
            Err(DynamicsError::NoCrossing)
        ));
        let c = BellDiagonalCoeffs::new(0.1, 0.5, 0.05).unwrap();
        assert!(matches!(
            analytic_sudden_change(&c, 0.31, 0.12),
            Err(DynamicsError::InvalidGeometry { .. })
        ));
    }

    #[test]
    fn analytic_crossing_agrees_with_channel_evolution() {
        // independent route: bisect |c_x(t)| - |c_z| on the operator-sum
        // evolution itself
        let (t2a, t2b) = (0.31, 0.12);
        let coeffs = BellDiagonalCoeffs::new(0.41, 0.41, 0.30).unwrap();
        let rho0 = compose_density(&bell_diagonal_deviation(&coeffs), 1e-3).unwrap();
        let cx_at = |t: f64| -> f64 {
            let ch = lift_local(
                &pd_channel(t, t2a).unwrap(),
                &pd_channel(t, t2b).unwrap(),
            )
            .unwrap();
            let d = extract_deviation(&apply(&ch, &rho0).unwrap()).unwrap();
            bloch_decompose(&d).corr_diagonal()[0].abs()
        };
        let (mut lo, mut hi) = (0.0f64, 0.2f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if cx_at(mid) > 0.30 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let numeric = 0.5 * (lo + hi);
        let analytic = analytic_sudden_change(&coeffs, t2a, t2b).unwrap().time();
        assert!((numeric - analytic).abs() < 1e-9);
    }

    #[test]
    fn thermal_channel_adds_slow_classical_decay() {
        // robust geometry: dephasing alone leaves C flat, the energy-exchange
        // channel does not
        let d = bell(0.3, 0.3, 0.9);
        let grid = crate::nmr::sampling_grid(215.1, 30).unwrap();
        let settings = OptimizerSettings::default();
        let (both, pd_only) =
            subtract_amplitude_damping(&d, &chloroform_params(), &grid, &settings).unwrap();
        let c_pd = pd_only.classical_series();
        assert!((c_pd[30] - c_pd[0]).abs() <= 1e-9);
        let c_both = both.classical_series();
        assert!(c_both[30] < c_both[0] - 1e-6);
        for w in c_both.windows(2) {
            assert!(w[1] < w[0] + 1e-12);
        }
    }

    #[test]
    fn thermal_subtraction_is_trivial_without_amplitude_damping() {
        let params = RelaxationParams::new(1e9, 1e9, 0.31, 0.12, 1e-5).unwrap();
        let d = bell(0.41, 0.41, 0.30);
        let grid = crate::nmr::sampling_grid(215.1, 20).unwrap();
        let settings = OptimizerSettings::default();
        let (both, pd_only) =
            subtract_amplitude_damping(&d, &params, &grid, &settings).unwrap();
        for (a, b) in both.records().iter().zip(pd_only.records()) {
            assert!((a.values.mutual_info - b.values.mutual_info).abs() < 1e-9);
            assert!((a.values.classical - b.values.classical).abs() < 1e-9);
            assert!((a.values.quantum - b.values.quantum).abs() < 1e-9);
        }
    }

    #[test]
    fn trajectories_are_bit_deterministic() {
        let d = bell(0.41, 0.41, 0.30);
        let grid = crate::nmr::sampling_grid(215.1, 10).unwrap();
        let settings = OptimizerSettings::default();
        let run = || {
            evolve_trajectory(
                &d,
                &chloroform_params(),
                &grid,
                ChannelSelection::Both,
                &settings,
            )
            .unwrap()
        };
        let a = run();
        let b = run();
        for (ra, rb) in a.records().iter().zip(b.records()) {
            assert_eq!(ra.values.mutual_info.to_bits(), rb.values.mutual_info.to_bits());
            assert_eq!(ra.values.classical.to_bits(), rb.values.classical.to_bits());
            assert_eq!(ra.values.quantum.to_bits(), rb.values.quantum.to_bits());
        }
    }
}
