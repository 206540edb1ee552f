use cluster_pump::experiment::*;
use cluster_pump::lattice::{build_square, build_triangular, LatticeSpec, SymmetryGen};

fn run(spec: &LatticeSpec, kind: PerturbationKind, epsilon: f64, cfg: &RunConfig) -> RunResult {
    run_postselected(
        spec,
        &PerturbationSpec {
            kind,
            epsilon,
            disorder_seed: None,
        },
        cfg,
    )
    .unwrap()
}

#[test]
fn sampled_estimate_within_three_standard_errors() {
    let spec = build_square(3, 3).unwrap();
    for (seed, kind) in [
        (1, PerturbationKind::XType),
        (2, PerturbationKind::ZType),
        (3, PerturbationKind::XType),
    ] {
        let cfg = RunConfig {
            seed,
            samples: 10_000,
            ..RunConfig::default()
        };
        let r = run(&spec, kind, 0.15, &cfg);
        let se = (r.p_fail_exact * (1.0 - r.p_fail_exact) / 10_000.0).sqrt();
        assert!(r.p_fail_exact > 0.0);
        assert!(
            (r.p_fail_sampled - r.p_fail_exact).abs() <= 3.0 * se,
            "{r:?}"
        );
    }
}

#[test]
fn global_parity_equals_per_generator_with_one_covering_generator() {
    let mut spec = build_square(4, 4).unwrap();
    spec.symmetries = vec![SymmetryGen {
        label: "all".into(),
        support: (0..spec.num_sites()).collect(),
    }];
    for kind in [PerturbationKind::ZType, PerturbationKind::XType] {
        let a = run(
            &spec,
            kind,
            0.05,
            &RunConfig {
                accept_rule: AcceptRule::PerGenerator,
                ..RunConfig::default()
            },
        );
        let b = run(
            &spec,
            kind,
            0.05,
            &RunConfig {
                accept_rule: AcceptRule::GlobalParity,
                ..RunConfig::default()
            },
        );
        assert_eq!(a.p_fail_exact, b.p_fail_exact);
        assert_eq!(a.fidelity_post, b.fidelity_post);
    }
}

#[test]
fn global_parity_accepts_more_on_the_checkerboard() {
    let spec = build_square(4, 4).unwrap();
    let per = run(&spec, PerturbationKind::XType, 0.05, &RunConfig::default());
    let glob = run(
        &spec,
        PerturbationKind::XType,
        0.05,
        &RunConfig {
            accept_rule: AcceptRule::GlobalParity,
            ..RunConfig::default()
        },
    );
    assert!(glob.p_fail_exact <= per.p_fail_exact);
}

#[test]
fn first_order_rejections_are_single_defects() {
    let spec = build_square(4, 4).unwrap();
    let mut previous: f64 = 0.0;
    for eps in [0.04, 0.02, 0.01] {
        let r = run(&spec, PerturbationKind::ZType, eps, &RunConfig::default());
        let rejected_single = r.defect_histogram[1] / r.p_fail_exact;
        assert!(rejected_single > previous.min(0.99));
        previous = rejected_single;
    }
    assert!(previous > 0.999);
}

#[test]
fn triangular_post_selection() {
    // the pump flips the bulk, so |+⟩ is the defect outcome
    let spec = build_triangular(3, 4).unwrap();
    let r = run(&spec, PerturbationKind::XType, 0.05, &RunConfig::default());
    assert!(r.p_fail_exact > 0.0 && r.p_fail_exact < 0.05);
    assert!(r.min_boundary_symmetry() > 1.0 - 1e-8);
    assert!(r.fidelity_post > 0.9);
}

#[test]
fn sweep_rejects_two_point_epsilon_fits_and_oversized_instances() {
    use cluster_pump::lattice::{Family, SquareTermination};
    let mut cfg = SweepConfig {
        instances: vec![Family::Square {
            nx: 3,
            ny: 3,
            termination: SquareTermination::Open,
        }],
        epsilons: vec![0.0, 0.01, 0.02],
        kinds: vec![PerturbationKind::ZType],
        seed: 0,
        samples: 100,
        accept_rule: AcceptRule::PerGenerator,
        disorder: false,
        cap: 22,
    };
    assert!(matches!(
        sweep(&cfg),
        Err(ExperimentError::DegenerateFit(_))
    ));
    cfg.epsilons = vec![0.01, 0.02, 0.04];
    cfg.cap = 8;
    assert!(sweep(&cfg).unwrap_err().is_resource_cap());
}
