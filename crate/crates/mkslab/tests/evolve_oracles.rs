use mkslab::evolve::{
    discrete_front, evolve, linear_weighted_evolve, perturbation_experiment, EvolveOptions,
    LinearInit, LinearOptions, PacketOptions, PerturbationShape, PerturbationSpec,
};
use mkslab::profile::{collocate_front, shoot_front, CollocationOptions, FrontProfile};
use mkslab::Error;

fn plateau_front() -> FrontProfile {
    let shot = shoot_front(-2.388, 0.0, 7.0, 10.0).expect("shooting seed");
    collocate_front(shot.seed(0.5), -2.388, 0.0, &CollocationOptions::default())
        .expect("collocated front")
}

#[test]
fn unperturbed_front_is_a_fixed_point_of_the_stepper() {
    let p = plateau_front();
    let state = discrete_front(&p, -100.0, 100.0, 0.1).unwrap();
    let opts = EvolveOptions {
        t_end: 10.0,
        weight_a: 0.0,
        ..EvolveOptions::default()
    };
    let run = evolve(&state, &opts).unwrap();
    let drift = run
        .diagnostics
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.weighted_dev));
    assert!(drift < 1e-6, "sup |p(t) - p(0)| grew to {drift:.3e}");
}

#[test]
fn packet_convects_left_and_saturates_independent_of_amplitude() {
    let p = plateau_front();
    let opts = PacketOptions::default();

    let small = perturbation_experiment(
        &p,
        &PerturbationSpec::gaussian(10.0, 2.0, 0.01, 0.3),
        &opts,
    )
    .unwrap();
    let large = perturbation_experiment(
        &p,
        &PerturbationSpec::gaussian(10.0, 2.0, 0.1, 0.3),
        &opts,
    )
    .unwrap();

    // The weighted norm collapses once the packet leaves through the left
    // edge: four orders of magnitude from either starting size.
    assert!((small.weighted_initial - 0.2405).abs() < 0.005);
    assert!(small.weighted_final < 1e-3, "weighted end {:.3e}", small.weighted_final);
    assert!(small.weighted_initial / small.weighted_final > 100.0);
    assert!(large.weighted_final < 1e-3, "weighted end {:.3e}", large.weighted_final);

    // Far-field saturation barely notices a tenfold larger seed.
    assert!(
        (small.saturation - 0.30748).abs() < 0.01,
        "saturation {:.5}",
        small.saturation
    );
    assert!(
        (large.saturation - 0.33896).abs() < 0.012,
        "saturation {:.5}",
        large.saturation
    );
    let rel = (large.saturation - small.saturation).abs() / small.saturation;
    assert!(rel < 0.2, "saturation moved {:.1}% under 10x amplitude", 100.0 * rel);

    // The packet travels left, faster than the frame.
    let v = small.group_velocity.expect("developed packet");
    assert!((v + 4.78).abs() < 0.7, "group velocity {v:.3}");
    let last = small.records.last().unwrap();
    assert!(last.peak_z < -100.0, "final peak at {:.1}", last.peak_z);

    // The front keeps a permanent shift proportional to the injected mass.
    assert!((small.shift_final - 0.0336).abs() < 0.01, "shift {:.4}", small.shift_final);
    assert!((large.shift_final - 0.2762).abs() < 0.03, "shift {:.4}", large.shift_final);
}

#[test]
fn zero_perturbation_leaves_every_history_flat() {
    let p = plateau_front();
    let opts = PacketOptions {
        l_left: 60.0,
        l_right: 30.0,
        t_end: 3.0,
        ..PacketOptions::default()
    };
    let n = ((opts.l_left + opts.l_right) / opts.dz + 0.5).floor() as usize + 1;
    let spec = PerturbationSpec {
        shape: PerturbationShape::Custom(vec![0.0; n]),
        weighted_a: 0.3,
    };
    let report = perturbation_experiment(&p, &spec, &opts).unwrap();
    assert!(report.shift_final.abs() < 1e-6);
    assert!(report.weighted_final < 1e-6);
    assert!(report.saturation < 1e-8);
    assert!(report.group_velocity.is_none());
}

#[test]
fn kernel_direction_rides_the_linear_flow_unchanged() {
    let p = plateau_front();
    let opts = LinearOptions {
        t_end: 10.0,
        ..LinearOptions::default()
    };
    let report = linear_weighted_evolve(&p, 0.3, &LinearInit::Kernel, &opts).unwrap();
    assert!(
        (report.gamma_inf - 1.0).abs() < 1e-8,
        "gamma_inf = {:.12}",
        report.gamma_inf
    );
    let res_max = report
        .residual_history
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.1));
    assert!(res_max < 1e-8, "kernel residual reached {res_max:.3e}");
    assert!(report.lam0.abs() < 0.1, "kernel eigenvalue {:.4}", report.lam0);
}

#[test]
fn smooth_bump_decays_at_the_spectral_gap_rate() {
    let p = plateau_front();
    let report = linear_weighted_evolve(
        &p,
        0.3,
        &LinearInit::Gaussian { center: 5.0, width: 2.0 },
        &LinearOptions::default(),
    )
    .unwrap();
    assert!((report.omega_est - 0.938).abs() < 0.01, "gap {:.4}", report.omega_est);
    assert!(report.fitted_rate > 0.0);
    assert!(
        report.fitted_rate >= 0.8 * report.omega_est
            && report.fitted_rate <= 1.2 * report.omega_est,
        "rate {:.4} against gap {:.4}",
        report.fitted_rate,
        report.omega_est
    );
    assert!(report.pass);
    // Residual drops by many decades across the run.
    let first = report.residual_history.first().unwrap().1;
    let last = report.residual_history.last().unwrap().1;
    assert!(first / last > 1e6, "decay factor {:.2e}", first / last);
}

#[test]
fn inadmissible_weight_is_refused_up_front() {
    let p = plateau_front();
    let err = linear_weighted_evolve(&p, 1.5, &LinearInit::Kernel, &LinearOptions::default())
        .unwrap_err();
    assert!(matches!(err, Error::WeightInadmissible { .. }), "got {err}");
}
