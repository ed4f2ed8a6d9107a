//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the measured figure (run with `--nocapture` to see them).

use std::sync::OnceLock;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcorrsim_core::changepoint::oscillation_lag_score;
use qcorrsim_core::matrix::{c, cr, ComplexMatrix2};
use qcorrsim_core::*;

const CHLOROFORM_T1: (f64, f64) = (2.5, 7.0);
const CHLOROFORM_T2: (f64, f64) = (0.31, 0.12);
const J_COUPLING: f64 = 215.1;
const EPSILON: f64 = 1e-5;
/// Analytic dephasing-only crossing for c = (0.41, 0.41, 0.30) at the T2
/// constants above: ln(0.41/0.30) / (1/0.31 + 1/0.12).
const T_STAR: f64 = 0.027024042519925743;

fn params() -> RelaxationParams {
    RelaxationParams::new(CHLOROFORM_T1.0, CHLOROFORM_T1.1, CHLOROFORM_T2.0, CHLOROFORM_T2.1, EPSILON).unwrap()
}

fn bell(cx: f64, cy: f64, cz: f64) -> DeviationMatrix {
    bell_diagonal_deviation(&BellDiagonalCoeffs::new(cx, cy, cz).unwrap())
}

fn full_grid() -> TimeGrid {
    sampling_grid(J_COUPLING, 250).unwrap()
}

/// Dephasing-only run of the robust-classical geometry c = (0.3, 0.3, 0.9).
fn traj_constant_classical() -> &'static Trajectory {
    static CELL: OnceLock<Trajectory> = OnceLock::new();
    CELL.get_or_init(|| {
        evolve_trajectory(
            &bell(0.3, 0.3, 0.9),
            &params(),
            &full_grid(),
            ChannelSelection::PhaseDampingOnly,
            &OptimizerSettings::default(),
        )
        .unwrap()
    })
}

/// Both-channels and dephasing-only runs of the sudden-change geometry
/// c = (0.41, 0.41, 0.30).
fn traj_sudden_change() -> &'static (Trajectory, Trajectory) {
    static CELL: OnceLock<(Trajectory, Trajectory)> = OnceLock::new();
    CELL.get_or_init(|| {
        subtract_amplitude_damping(
            &bell(0.41, 0.41, 0.30),
            &params(),
            &full_grid(),
            &OptimizerSettings::default(),
        )
        .unwrap()
    })
}

/// Full NMR runs with and without residual preparation coherences.
fn traj_oscillation() -> &'static (Trajectory, Trajectory) {
    static CELL: OnceLock<(Trajectory, Trajectory)> = OnceLock::new();
    CELL.get_or_init(|| {
        let nmr = NmrSystemParams::new(J_COUPLING, params(), 0.02).unwrap();
        let base = bell(0.41, 0.41, 0.30);
        let settings = OptimizerSettings::default();
        let grid = full_grid();
        let with = evolve_trajectory_nmr(
            &inject_residual_coherence(&base, nmr.residual_amplitude),
            &nmr,
            &grid,
            ChannelSelection::Both,
            &settings,
        )
        .unwrap();
        let without = evolve_trajectory_nmr(&base, &nmr, &grid, ChannelSelection::Both, &settings)
            .unwrap();
        (with, without)
    })
}

#[test]
fn criterion_1_optimizer_matches_bell_diagonal_closed_form() {
    let start = Instant::now();
    let settings = OptimizerSettings::default();
    let mut rng = StdRng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let coeffs = BellDiagonalCoeffs::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .unwrap();
        let d = bell_diagonal_deviation(&coeffs);
        let numeric = classical_correlation(&d, &settings).value;
        let oracle = bell_diagonal_closed_form(&coeffs).classical;
        worst = worst.max((numeric - oracle).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst <= 1e-6, "worst |C_opt - C_closed| = {worst:.3e}");
    assert!(elapsed < 30.0, "suite took {elapsed:.1} s");
    println!(
        "[criterion 1] PASS oracle equivalence: worst |diff| = {worst:.3e} over 100 states in {elapsed:.2} s"
    );
}

#[test]
fn criterion_2_classical_correlation_immune_to_dephasing() {
    let traj = traj_constant_classical();
    let classical = traj.classical_series();
    let c0 = classical[0];
    let max_dev = classical
        .iter()
        .map(|v| (v - c0).abs())
        .fold(0.0f64, f64::max);
    assert!(max_dev <= 1e-9, "max |C(t) - C(0)| = {max_dev:.3e}");
    let quantum = traj.quantum_series();
    for (i, w) in quantum.windows(2).enumerate() {
        assert!(
            w[1] < w[0],
            "Q(t) must strictly decrease, violated at step {i}: {} -> {}",
            w[0],
            w[1]
        );
    }
    println!(
        "[criterion 2] PASS constant classical regime: max |C(t) - C(0)| = {max_dev:.3e}, Q strictly decreasing over {} steps",
        quantum.len() - 1
    );
}

#[test]
fn criterion_3_sudden_change_detected_at_analytic_time() {
    let (_, pd_only) = traj_sudden_change();
    let step = full_grid().step();
    let analytic = analytic_sudden_change(
        &BellDiagonalCoeffs::new(0.41, 0.41, 0.30).unwrap(),
        CHLOROFORM_T2.0,
        CHLOROFORM_T2.1,
    )
    .unwrap()
    .time();
    assert!((analytic - T_STAR).abs() < 1e-15);

    let detection = detect_sudden_change(pd_only, CurveKind::Classical).unwrap();
    let report = detection.report().expect("change must be detected");
    let err = (report.t_star - analytic).abs();
    assert!(
        err <= step,
        "detected t* = {} vs analytic {} (err {err:.4e} > step {step:.4e})",
        report.t_star,
        analytic
    );
    assert!(report.slope_before < 0.0);
    assert!(report.slope_after.abs() <= 1e-6 * report.slope_before.abs());
    println!(
        "[criterion 3] PASS sudden change: detected t* = {:.6} s, analytic {:.6} s, |err| = {:.2e} s (grid step {:.2e})",
        report.t_star, analytic, err, step
    );
}

#[test]
fn criterion_4_amplitude_damping_subtraction() {
    let (both, pd_only) = traj_sudden_change();
    let times = pd_only.times();
    let step = full_grid().step();
    // indices safely past the crossing for either channel selection
    let after: Vec<usize> = (0..times.len())
        .filter(|&i| times[i] >= T_STAR + step)
        .collect();
    assert!(after.len() > 100);

    let c_both = both.classical_series();
    for w in after.windows(2) {
        assert!(
            c_both[w[1]] < c_both[w[0]],
            "thermal channel must keep C strictly decaying after t*"
        );
    }
    let total_drop = c_both[after[0]] - c_both[*after.last().unwrap()];
    assert!(total_drop > 0.0);

    let c_pd = pd_only.classical_series();
    let base = c_pd[after[0]];
    let max_dev = after
        .iter()
        .map(|&i| (c_pd[i] - base).abs())
        .fold(0.0f64, f64::max);
    assert!(max_dev <= 1e-9, "dephasing-only C after t* moved by {max_dev:.3e}");
    println!(
        "[criterion 4] PASS thermal subtraction: both-channels C drops {total_drop:.3e} after t*, dephasing-only flat to {max_dev:.3e}"
    );
}

#[test]
fn criterion_5_channel_correctness() {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst_complete = 0.0f64;
    for _ in 0..100 {
        let t = rng.gen_range(0.0..2.0);
        let t1 = rng.gen_range(0.1..10.0);
        let t2 = rng.gen_range(0.05..2.0);
        let eps = rng.gen_range(1e-6..1e-4);
        let gad = gad_channel(t, t1, eps).unwrap();
        let pd = pd_channel(t, t2).unwrap();
        let combined = compose(&gad, &pd).unwrap();
        let lifted = lift_local(&combined, &pd).unwrap();
        for err in [
            gad.completeness_error(),
            pd.completeness_error(),
            combined.completeness_error(),
            lifted.completeness_error(),
        ] {
            worst_complete = worst_complete.max(err);
        }
    }
    assert!(worst_complete <= 1e-12);

    // saturated thermal channel reaches the Gibbs population
    let eps = EPSILON;
    let gamma = 0.5 - 0.5 * eps;
    let t1 = 2.5f64;
    let t = 50.0 * t1;
    let p = 1.0 - (-t / t1).exp();
    assert!(p >= 1.0 - 1e-12);
    let ch = gad_channel(t, t1, eps).unwrap();
    let fixed = ComplexMatrix2::new(cr(gamma), cr(0.0), cr(0.0), cr(1.0 - gamma));
    let mut worst_fixed = 0.0f64;
    for _ in 0..20 {
        let pop = rng.gen_range(0.1..0.9);
        let coh = rng.gen_range(-0.3..0.3);
        let rho = ComplexMatrix2::new(cr(pop), c(coh, coh), c(coh, -coh), cr(1.0 - pop));
        let out = channels::apply_one_qubit(&ch, &rho).unwrap();
        worst_fixed = worst_fixed.max(qcorrsim_core::matrix::max_abs_diff2(&out, &fixed));
    }
    assert!(worst_fixed <= 1e-10, "fixed-point distance {worst_fixed:.3e}");

    // the two damping mechanisms commute as channel actions
    let mut worst_comm = 0.0f64;
    for _ in 0..20 {
        let t = rng.gen_range(0.0..1.0);
        let t1 = rng.gen_range(0.5..5.0);
        let t2 = rng.gen_range(0.05..1.0);
        let gp = compose(&gad_channel(t, t1, eps).unwrap(), &pd_channel(t, t2).unwrap()).unwrap();
        let pg = compose(&pd_channel(t, t2).unwrap(), &gad_channel(t, t1, eps).unwrap()).unwrap();
        let pop = rng.gen_range(0.1..0.9);
        let coh = rng.gen_range(-0.3..0.3);
        let rho = ComplexMatrix2::new(cr(pop), c(coh, -coh), c(coh, coh), cr(1.0 - pop));
        let a = channels::apply_one_qubit(&gp, &rho).unwrap();
        let b = channels::apply_one_qubit(&pg, &rho).unwrap();
        worst_comm = worst_comm.max(qcorrsim_core::matrix::max_abs_diff2(&a, &b));
    }
    assert!(worst_comm <= 1e-12, "commutation residue {worst_comm:.3e}");
    println!(
        "[criterion 5] PASS channels: completeness {worst_complete:.2e}, Gibbs fixed point {worst_fixed:.2e}, commutation {worst_comm:.2e}"
    );
}

#[test]
fn criterion_6_expansion_error_scales_linearly_in_epsilon() {
    let d = bell(1.0, 1.0, 1.0);
    let expansion = mutual_info_expansion(&d);
    let mut errors = Vec::new();
    for eps in [1e-3, 1e-4, 1e-5] {
        let rho = compose_density(&d, eps).unwrap();
        let exact = mutual_info_exact(&rho).unwrap();
        let approx = eps * eps / std::f64::consts::LN_2 * expansion;
        errors.push(((exact - approx) / exact).abs());
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    assert!((5.0..=20.0).contains(&r1), "ratio eps 1e-3/1e-4 = {r1}");
    assert!((5.0..=20.0).contains(&r2), "ratio eps 1e-4/1e-5 = {r2}");
    println!(
        "[criterion 6] PASS expansion validity: relative errors {:.3e} / {:.3e} / {:.3e}, ratios {r1:.2} and {r2:.2}",
        errors[0], errors[1], errors[2]
    );
}

#[test]
fn criterion_7_preparation_pipeline_round_trip() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let target = BellDiagonalCoeffs::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .unwrap();
        let prepared = pseudo_epr(&diagonal_deviation(&solve_populations(&target))).unwrap();
        let diag = bloch_decompose(&prepared).corr_diagonal();
        worst = worst
            .max((diag[0] - target.c_x).abs())
            .max((diag[1] - target.c_y).abs())
            .max((diag[2] - target.c_z).abs());
    }
    assert!(worst <= 1e-12, "worst coefficient error {worst:.3e}");
    println!("[criterion 7] PASS preparation pipeline: worst recovered-coefficient error = {worst:.3e}");
}

#[test]
fn criterion_8_residual_coherences_oscillate_at_the_coupling_period() {
    let (with, without) = traj_oscillation();
    let peak_threshold = 0.25;
    let mut summary = Vec::new();
    for (name, series_with, series_without) in [
        ("I", with.mutual_info_series(), without.mutual_info_series()),
        ("C", with.classical_series(), without.classical_series()),
    ] {
        let score_with = oscillation_lag_score(&series_with, 4)
            .expect("injected run must have structure above noise");
        let score_without = oscillation_lag_score(&series_without, 4).unwrap_or(0.0);
        assert!(
            score_with > peak_threshold,
            "{name}: lag-4 peak score {score_with} too small"
        );
        assert!(
            score_without < peak_threshold,
            "{name}: clean run shows spurious peak {score_without}"
        );
        summary.push(format!(
            "{name}: {score_with:.2} with residuals vs {score_without:.2} without"
        ));
    }
    println!(
        "[criterion 8] PASS oscillation artifact (lag-4 autocorrelation peak): {}",
        summary.join(", ")
    );
}

#[test]
fn criterion_9_correlations_decompose_additively() {
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    {
        let (both, pd_only) = traj_sudden_change();
        let (with, without) = traj_oscillation();
        for traj in [traj_constant_classical(), both, pd_only, with, without] {
            for rec in traj.records() {
                let gap =
                    (rec.values.mutual_info - rec.values.classical - rec.values.quantum).abs();
                worst = worst.max(gap);
                checked += 1;
            }
        }
    }
    assert!(worst <= 1e-9, "worst |I - C - Q| = {worst:.3e}");
    println!(
        "[criterion 9] PASS additivity: |I - C - Q| <= {worst:.3e} over {checked} records"
    );
}
