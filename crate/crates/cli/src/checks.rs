//! Built-in consistency checks behind `qcorrsim validate`: channel
//! completeness, the closed-form-vs-optimizer comparison and the
//! expansion-vs-exact entropy comparison.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcorrsim_core::channels::{apply_one_qubit, completeness_error2, KrausSet};
use qcorrsim_core::matrix::{c, cr, max_abs_diff2, ComplexMatrix2};
use qcorrsim_core::*;

/// One row of the validation table.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

fn check_completeness(draws: usize, inject_fault: bool) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(7001);
    let mut worst = 0.0f64;
    for i in 0..draws {
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
            worst = worst.max(err);
        }
        if inject_fault && i == 0 {
            // negative-control hook: damage one operator and re-check
            if let KrausSet::Single(ops) = pd.kraus() {
                let mut broken = ops.clone();
                broken[0][(0, 0)] += cr(1e-3);
                worst = worst.max(completeness_error2(&broken));
            }
        }
    }
    CheckResult::new(
        "kraus-completeness",
        worst <= 1e-12,
        format!("max |sum E^t E - I| = {worst:.3e} over {draws} draws"),
    )
}

fn check_gibbs_fixed_point() -> CheckResult {
    let mut rng = StdRng::seed_from_u64(7002);
    let eps = 1e-5;
    let gamma = 0.5 - 0.5 * eps;
    let fixed = ComplexMatrix2::new(cr(gamma), cr(0.0), cr(0.0), cr(1.0 - gamma));
    let ch = gad_channel(125.0, 2.5, eps).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let pop = rng.gen_range(0.1..0.9);
        let coh = rng.gen_range(-0.3..0.3);
        let rho = ComplexMatrix2::new(cr(pop), c(coh, coh), c(coh, -coh), cr(1.0 - pop));
        let out = apply_one_qubit(&ch, &rho).unwrap();
        worst = worst.max(max_abs_diff2(&out, &fixed));
    }
    CheckResult::new(
        "gibbs-fixed-point",
        worst <= 1e-10,
        format!("saturated distance to diag(gamma, 1-gamma) = {worst:.3e}"),
    )
}

fn check_damping_commutation() -> CheckResult {
    let mut rng = StdRng::seed_from_u64(7003);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let t = rng.gen_range(0.0..1.0);
        let t1 = rng.gen_range(0.5..5.0);
        let t2 = rng.gen_range(0.05..1.0);
        let gad = gad_channel(t, t1, 1e-5).unwrap();
        let pd = pd_channel(t, t2).unwrap();
        let gp = compose(&gad, &pd).unwrap();
        let pg = compose(&pd, &gad).unwrap();
        let pop = rng.gen_range(0.1..0.9);
        let coh = rng.gen_range(-0.3..0.3);
        let rho = ComplexMatrix2::new(cr(pop), c(coh, -coh), c(coh, coh), cr(1.0 - pop));
        let a = apply_one_qubit(&gp, &rho).unwrap();
        let b = apply_one_qubit(&pg, &rho).unwrap();
        worst = worst.max(max_abs_diff2(&a, &b));
    }
    CheckResult::new(
        "damping-commutation",
        worst <= 1e-12,
        format!("max action difference = {worst:.3e}"),
    )
}

fn check_oracle_vs_optimizer(draws: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(7004);
    let settings = OptimizerSettings::default();
    let mut worst = 0.0f64;
    for _ in 0..draws {
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
    CheckResult::new(
        "oracle-vs-optimizer",
        worst <= 1e-6,
        format!("max |C_opt - C_closed| = {worst:.3e} over {draws} states"),
    )
}

fn check_expansion_vs_exact() -> CheckResult {
    let d = bell_diagonal_deviation(&BellDiagonalCoeffs::new(1.0, 1.0, 1.0).unwrap());
    let expansion = mutual_info_expansion(&d);
    let mut errors = Vec::new();
    for eps in [1e-3, 1e-4, 1e-5] {
        let rho = compose_density(&d, eps).unwrap();
        let exact = match mutual_info_exact(&rho) {
            Ok(v) => v,
            Err(e) => {
                return CheckResult::new("expansion-vs-exact", false, format!("entropy failed: {e}"))
            }
        };
        let approx = eps * eps / std::f64::consts::LN_2 * expansion;
        errors.push(((exact - approx) / exact).abs());
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    let passed = (5.0..=20.0).contains(&r1) && (5.0..=20.0).contains(&r2);
    CheckResult::new(
        "expansion-vs-exact",
        passed,
        format!("relative-error ratios per decade of eps: {r1:.2}, {r2:.2} (expected within [5, 20])"),
    )
}

fn check_preparation_round_trip(draws: usize) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(7005);
    let mut worst = 0.0f64;
    for _ in 0..draws {
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
    CheckResult::new(
        "preparation-round-trip",
        worst <= 1e-12,
        format!("max recovered-coefficient error = {worst:.3e} over {draws} targets"),
    )
}

/// Runs the validation suite. `quick` trims the random draw counts;
/// `inject_fault` damages one Kraus operator as a negative control, which
/// must make the completeness check fail.
pub fn run_checks(quick: bool, inject_fault: bool) -> Vec<CheckResult> {
    let (completeness_draws, oracle_draws, prep_draws) =
        if quick { (20, 15, 20) } else { (100, 100, 100) };
    vec![
        check_completeness(completeness_draws, inject_fault),
        check_gibbs_fixed_point(),
        check_damping_commutation(),
        check_oracle_vs_optimizer(oracle_draws),
        check_expansion_vs_exact(),
        check_preparation_round_trip(prep_draws),
    ]
}
