//! Cross-module property suites on randomized inputs (seeded, deterministic).

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcorrsim_core::correlations::measured_mutual_info_from_bloch;
use qcorrsim_core::matrix::{c, cr, ComplexMatrix2, ComplexMatrix4};
use qcorrsim_core::*;

fn random_traceless_hermitian(rng: &mut StdRng) -> DeviationMatrix {
    let mut m = ComplexMatrix4::zeros();
    for i in 0..4 {
        m[(i, i)] = cr(rng.gen_range(-1.0..1.0));
        for j in (i + 1)..4 {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    let q = m.trace().re * 0.25;
    for i in 0..4 {
        m[(i, i)] -= cr(q);
    }
    DeviationMatrix::new(m).unwrap()
}

fn random_basis(rng: &mut StdRng) -> ProductProjectiveBasis {
    let angle_pair = |rng: &mut StdRng| {
        let theta = (rng.gen_range(-1.0f64..1.0)).acos();
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        (theta, phi)
    };
    let (ta, pa) = angle_pair(rng);
    let (tb, pb) = angle_pair(rng);
    ProductProjectiveBasis::from_angles(ta, pa, tb, pb)
}

fn random_density(rng: &mut StdRng) -> DensityMatrix {
    let d = random_traceless_hermitian(rng);
    // scale so the spectrum of I/4 + eps D stays safely positive
    let bound = 4.0 * qcorrsim_core::matrix::max_abs4(d.matrix());
    let eps = (0.04 / bound.max(0.1)).min(0.05);
    compose_density(&d, eps).unwrap()
}

/// `exp(-i alpha n.sigma / 2)`.
fn local_unitary(alpha: f64, n: [f64; 3]) -> ComplexMatrix2 {
    let (s, co) = (0.5 * alpha).sin_cos();
    let ns = qcorrsim_core::matrix::pauli_dot(n);
    ComplexMatrix2::identity() * cr(co) - ns * c(0.0, s)
}

fn random_unit(rng: &mut StdRng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

#[test]
fn data_processing_never_increases_mutual_information() {
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..1000 {
        let d = random_traceless_hermitian(&mut rng);
        let basis = random_basis(&mut rng);
        let full = mutual_info_expansion(&d);
        let measured = measured_mutual_info(&d, &basis);
        assert!(measured <= full + 1e-9, "measured {measured} > full {full}");
    }
}

#[test]
fn bloch_decomposition_reconstructs_exactly() {
    let mut rng = StdRng::seed_from_u64(202);
    for _ in 0..1000 {
        let d = random_traceless_hermitian(&mut rng);
        let rebuilt = bloch_decompose(&d).reconstruct();
        assert!(rebuilt.max_abs_diff(&d) < 1e-12);
    }
}

#[test]
fn tensor_form_of_measured_info_matches_measurement_map() {
    let mut rng = StdRng::seed_from_u64(303);
    for _ in 0..1000 {
        let d = random_traceless_hermitian(&mut rng);
        let bloch = bloch_decompose(&d);
        let basis = random_basis(&mut rng);
        let via_map = measured_mutual_info(&d, &basis);
        let via_tensor = measured_mutual_info_from_bloch(&bloch, &basis);
        assert!(
            (via_map - via_tensor).abs() < 1e-12,
            "map {via_map} vs tensor {via_tensor}"
        );
    }
}

#[test]
fn measurement_map_is_idempotent_on_random_states() {
    let mut rng = StdRng::seed_from_u64(404);
    for _ in 0..200 {
        let d = random_traceless_hermitian(&mut rng);
        let basis = random_basis(&mut rng);
        let once = measure_map(&d, &basis);
        let twice = measure_map(&once, &basis);
        assert!(twice.max_abs_diff(&once) < 1e-12);
    }
}

#[test]
fn channel_construction_is_complete_at_random_draws() {
    let mut rng = StdRng::seed_from_u64(505);
    for _ in 0..100 {
        let t = rng.gen_range(0.0..2.0);
        let t1 = rng.gen_range(0.1..10.0);
        let t2 = rng.gen_range(0.05..2.0);
        let eps = rng.gen_range(1e-6..1e-4);
        let gad = gad_channel(t, t1, eps).unwrap();
        let pd = pd_channel(t, t2).unwrap();
        assert!(gad.completeness_error() <= 1e-12);
        assert!(pd.completeness_error() <= 1e-12);
        let combined = compose(&gad, &pd).unwrap();
        assert!(combined.completeness_error() <= 1e-12);
        let lifted = lift_local(&combined, &pd).unwrap();
        assert!(lifted.completeness_error() <= 1e-12);
    }
}

#[test]
fn apply_preserves_trace_hermiticity_positivity() {
    let mut rng = StdRng::seed_from_u64(606);
    let params = RelaxationParams::new(2.5, 7.0, 0.31, 0.12, 1e-5).unwrap();
    for _ in 0..50 {
        let rho = random_density(&mut rng);
        let t = rng.gen_range(0.0..1.0);
        let ch = lifted_noise_channel(ChannelSelection::Both, t, &params).unwrap();
        let out = apply(&ch, &rho).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(out.matrix().trace().im.abs() < 1e-12);
        assert!(qcorrsim_core::matrix::hermiticity_error4(out.matrix()) < 1e-12);
        assert!(out.eigenvalues()[0] >= -1e-12);
    }
}

#[test]
fn correlations_scale_quadratically_with_state_magnitude() {
    let mut rng = StdRng::seed_from_u64(707);
    let settings = OptimizerSettings::default();
    for _ in 0..10 {
        let d = random_traceless_hermitian(&mut rng);
        let k = rng.gen_range(0.2..3.0);
        let scaled = DeviationMatrix::new(d.matrix() * cr(k)).unwrap();
        let base = quantum_discord(&d, &settings);
        let big = quantum_discord(&scaled, &settings);
        let k2 = k * k;
        assert!((big.values.mutual_info - k2 * base.values.mutual_info).abs() < 1e-8 * k2);
        assert!((big.values.classical - k2 * base.values.classical).abs() < 1e-6 * k2);
        assert!((big.values.quantum - k2 * base.values.quantum).abs() < 1e-6 * k2);
        // the maximizing axes are scale-free
        let dot_a: f64 = base
            .maximizer
            .n_a()
            .iter()
            .zip(big.maximizer.n_a())
            .map(|(x, y)| x * y)
            .sum();
        let dot_b: f64 = base
            .maximizer
            .n_b()
            .iter()
            .zip(big.maximizer.n_b())
            .map(|(x, y)| x * y)
            .sum();
        assert!(dot_a.abs() > 1.0 - 1e-6, "axis A moved: |dot| = {}", dot_a.abs());
        assert!(dot_b.abs() > 1.0 - 1e-6, "axis B moved: |dot| = {}", dot_b.abs());
    }
}

#[test]
fn correlations_are_invariant_under_local_unitaries() {
    let mut rng = StdRng::seed_from_u64(808);
    let settings = OptimizerSettings::default();
    for _ in 0..15 {
        let d = random_traceless_hermitian(&mut rng);
        let ua = local_unitary(rng.gen_range(0.0..std::f64::consts::PI), random_unit(&mut rng));
        let ub = local_unitary(rng.gen_range(0.0..std::f64::consts::PI), random_unit(&mut rng));
        let u = qcorrsim_core::matrix::kron(&ua, &ub);
        let rotated = DeviationMatrix::new(u * d.matrix() * u.adjoint()).unwrap();
        let base = quantum_discord(&d, &settings);
        let rot = quantum_discord(&rotated, &settings);
        assert!((base.values.mutual_info - rot.values.mutual_info).abs() < 1e-8);
        assert!((base.values.classical - rot.values.classical).abs() < 1e-8);
        assert!((base.values.quantum - rot.values.quantum).abs() < 1e-8);
    }
}

#[test]
fn compose_and_extract_are_mutual_inverses() {
    let mut rng = StdRng::seed_from_u64(909);
    for _ in 0..100 {
        let d = random_traceless_hermitian(&mut rng);
        let bound = 4.0 * qcorrsim_core::matrix::max_abs4(d.matrix());
        let eps = (0.04 / bound.max(0.1)).min(0.05);
        let back = extract_deviation(&compose_density(&d, eps).unwrap()).unwrap();
        assert!(back.max_abs_diff(&d) < 1e-12);
    }
}

#[test]
fn mutual_information_never_increases_under_local_noise() {
    let params = RelaxationParams::new(2.5, 7.0, 0.31, 0.12, 1e-5).unwrap();
    let settings = OptimizerSettings::default();
    let grid = sampling_grid(215.1, 40).unwrap();
    for coeffs in [(0.41, 0.41, 0.30), (0.3, 0.3, 0.9)] {
        let d = bell_diagonal_deviation(
            &BellDiagonalCoeffs::new(coeffs.0, coeffs.1, coeffs.2).unwrap(),
        );
        for sel in [
            ChannelSelection::PhaseDampingOnly,
            ChannelSelection::AmplitudeDampingOnly,
            ChannelSelection::Both,
        ] {
            let traj = evolve_trajectory(&d, &params, &grid, sel, &settings).unwrap();
            let series = traj.mutual_info_series();
            for (i, w) in series.windows(2).enumerate() {
                assert!(
                    w[1] <= w[0] + 1e-12,
                    "I(t) rose at step {i} under {sel:?} for c = {coeffs:?}"
                );
            }
        }
    }
}

#[test]
fn preparation_round_trip_on_random_targets() {
    let mut rng = StdRng::seed_from_u64(1010);
    for _ in 0..100 {
        let c = BellDiagonalCoeffs::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .unwrap();
        let prepared = pseudo_epr(&diagonal_deviation(&solve_populations(&c))).unwrap();
        let b = bloch_decompose(&prepared);
        let diag = b.corr_diagonal();
        assert!((diag[0] - c.c_x).abs() < 1e-12);
        assert!((diag[1] - c.c_y).abs() < 1e-12);
        assert!((diag[2] - c.c_z).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(b.corr[i][j].abs() < 1e-12);
                }
            }
        }
        assert!(b.local_a.iter().chain(&b.local_b).all(|v| v.abs() < 1e-12));
    }
}
