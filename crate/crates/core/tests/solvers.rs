mod common;

use std::sync::Arc;

use fwsubmix::objectives::{make_doptimal_instance, QuadraticObjective, ZeroObjective};
use fwsubmix::solvers::{
    concave_fw_initializer, gradient_combining_fw, greedy_fw, measured_greedy_fw, non_oblivious_fw,
    nonoblivious_iterations, standard_fw,
};
use fwsubmix::verify::{estimate_pair_smoothness, grid_maximize};
use fwsubmix::{
    Algorithm, Error, FeasibleRegion, ObjectiveFlags, ObjectivePair, Point, ProblemInstance,
    SharedObjective, SolverConfig,
};
use nalgebra::DMatrix;

const ALL_FLAGS: ObjectiveFlags = ObjectiveFlags {
    g_monotone: true,
    g_nonneg: true,
    c_monotone: true,
    c_nonneg: true,
};

fn instance(
    g: SharedObjective,
    c: SharedObjective,
    lambda: f64,
    region: FeasibleRegion,
) -> ProblemInstance {
    let pair = ObjectivePair::new(g, c, lambda)
        .unwrap()
        .with_flags(ALL_FLAGS);
    ProblemInstance::new(pair, region).unwrap()
}

fn identity_line(region: FeasibleRegion) -> ProblemInstance {
    instance(
        Arc::new(QuadraticObjective::linear(vec![1.0], 0.0)),
        Arc::new(ZeroObjective::new(1)),
        1.0,
        region,
    )
}

/// `-(x - 1/2)^2` in every coordinate, shifted up by `offset`.
fn centered_bowl(n: usize, offset: f64) -> QuadraticObjective {
    QuadraticObjective::new(
        DMatrix::identity(n, n) * -2.0,
        vec![1.0; n],
        offset - 0.25 * n as f64,
    )
    .unwrap()
}

#[test]
fn greedy_on_a_line() {
    let p = identity_line(FeasibleRegion::unit_cube(1));
    let r = greedy_fw(&p, &SolverConfig::with_epsilon(0.25)).unwrap();
    assert_eq!(r.iterations, 4);
    assert!((r.output.as_slice()[0] - 1.0).abs() < 1e-15);
    assert_eq!(r.grad_calls_g(), 4);
    assert_eq!(r.grad_calls_c(), 4);
    assert_eq!(r.lmo_calls(), 4);
}

#[test]
fn greedy_on_linear_objective_returns_best_vertex() {
    let a = vec![vec![0.6, 0.3, 0.9], vec![0.2, 0.8, 0.4]];
    let region = FeasibleRegion::polytope(a, vec![1.0, 1.0], vec![1.0; 3]).unwrap();
    let w = vec![1.0, 0.5, 2.0];
    let best = region.lmo(&w).unwrap();
    let p = instance(
        Arc::new(QuadraticObjective::linear(w, 0.0)),
        Arc::new(ZeroObjective::new(3)),
        1.0,
        region,
    );
    let r = greedy_fw(&p, &SolverConfig::with_epsilon(0.1)).unwrap();
    for (a, b) in r.output.as_slice().iter().zip(best.vertex.as_slice()) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((r.output_value - best.objective_value).abs() < 1e-12);
}

#[test]
fn epsilon_normalization_controls_call_counts() {
    let p = identity_line(FeasibleRegion::unit_cube(1));
    for (eps, k) in [(0.3, 4u64), (0.05, 20), (0.07, 15)] {
        let cfg = SolverConfig::with_epsilon(eps);
        let e = cfg.normalized_epsilon().unwrap();
        assert!(e <= eps && e >= eps / 2.0);
        for alg in [Algorithm::GreedyFw, Algorithm::MeasuredGreedyFw] {
            let r = alg.run(&p, &cfg).unwrap();
            assert_eq!(r.grad_calls_g(), k, "{alg} at {eps}");
            assert_eq!(r.grad_calls_c(), k);
        }
    }
}

#[test]
fn measured_on_a_line() {
    let p = identity_line(FeasibleRegion::unit_cube(1));
    let r = measured_greedy_fw(&p, &SolverConfig::with_epsilon(0.5)).unwrap();
    assert!((r.output.as_slice()[0] - 0.75).abs() < 1e-15);
}

#[test]
fn measured_on_constant_objective() {
    let p = instance(
        Arc::new(QuadraticObjective::linear(vec![0.0; 3], 2.0)),
        Arc::new(ZeroObjective::new(3)),
        0.5,
        FeasibleRegion::cardinality(3, 1.0).unwrap(),
    );
    let r = measured_greedy_fw(&p, &SolverConfig::with_epsilon(0.2)).unwrap();
    assert!(r.values.iter().all(|v| (*v - 1.0).abs() < 1e-15));
}

#[test]
fn greedy_rejects_non_monotone_flags() {
    let mut p = common::guarantee_instance(3, 0, false, true);
    assert!(matches!(
        greedy_fw(&p, &SolverConfig::with_epsilon(0.1)),
        Err(Error::Config(_))
    ));
    p.objective.flags.g_monotone = true;
    assert!(greedy_fw(&p, &SolverConfig::with_epsilon(0.1)).is_ok());
}

#[test]
fn non_oblivious_call_accounting() {
    assert_eq!(nonoblivious_iterations(0.2), 66);
    let p = common::guarantee_instance(3, 1, true, true);
    let r = non_oblivious_fw(&p, &SolverConfig::with_epsilon(0.2)).unwrap();
    assert_eq!(r.iterations, 66);
    assert_eq!(r.grad_calls_g(), 66 * 5);
    assert_eq!(r.grad_calls_c(), 66);
    assert_eq!(r.grad_calls_g() + r.grad_calls_c(), 396);
    assert_eq!(r.lmo_calls(), 66);
}

#[test]
fn non_oblivious_rejects_large_epsilon() {
    let p = common::guarantee_instance(3, 1, true, true);
    assert!(matches!(
        non_oblivious_fw(&p, &SolverConfig::with_epsilon(0.25)),
        Err(Error::Config(_))
    ));
}

fn concave_only(n: usize) -> ProblemInstance {
    let region =
        FeasibleRegion::polytope(vec![vec![0.5, 0.8, 0.3]], vec![1.0], vec![1.0; n]).unwrap();
    let c =
        QuadraticObjective::new(DMatrix::identity(n, n) * -2.0, vec![0.9, 0.4, 1.3], 1.0).unwrap();
    instance(Arc::new(ZeroObjective::new(n)), Arc::new(c), 0.5, region)
}

#[test]
fn combining_with_zero_g_keeps_initializer_guarantee() {
    let p = concave_only(3);
    let r = gradient_combining_fw(&p, &SolverConfig::with_epsilon(0.2)).unwrap();
    let eta = r.certified_eta.unwrap();
    let oracle = grid_maximize(&p, 0.05).unwrap();
    assert!(
        r.output_value >= oracle.value - eta - 1e-6,
        "{} vs {} - {eta}",
        r.output_value,
        oracle.value
    );
}

#[test]
fn combining_best_of_includes_start() {
    let p = instance(
        Arc::new(QuadraticObjective::linear(vec![0.4, 0.1], 0.0)),
        Arc::new(QuadraticObjective::linear(vec![0.2, 0.9], 0.0)),
        0.5,
        FeasibleRegion::cardinality(2, 1.0).unwrap(),
    );
    let r = gradient_combining_fw(&p, &SolverConfig::with_epsilon(0.5)).unwrap();
    assert!(r.best_value >= r.values[0]);
    assert_eq!(r.output_value, r.best_value);
}

#[test]
fn combining_refuses_uncertified_start() {
    let p = concave_only(3);
    let cfg = SolverConfig {
        initializer_iters: Some(0),
        ..SolverConfig::with_epsilon(0.5)
    };
    assert!(matches!(
        gradient_combining_fw(&p, &cfg),
        Err(Error::Config(_))
    ));
}

#[test]
fn non_oblivious_with_zero_g() {
    let p = concave_only(3);
    let eps: f64 = 0.1;
    let r = non_oblivious_fw(&p, &SolverConfig::with_epsilon(eps)).unwrap();
    let oracle = grid_maximize(&p, 0.05).unwrap();
    let l = estimate_pair_smoothness(&p.objective, &p.region, 1000, 0).unwrap();
    let d = p.region.diameter_bound();
    let shrink = 4.0 * eps * (1.0 / eps).ln();
    let bound = oracle.value - shrink * oracle.value - 4.0 * eps * l * d * d - 1e-6;
    assert!(r.output_value >= bound);
    // the bound is loose; the run itself should come close to the optimum
    assert!(r.output_value >= oracle.value - 1e-3);
}

#[test]
fn initializer_examples() {
    let cube = FeasibleRegion::unit_cube(2);
    let linear = QuadraticObjective::linear(vec![1.0, 2.0], 0.0);
    let (_, eta) = concave_fw_initializer(&linear, &cube, 1).unwrap();
    assert_eq!(eta, 0.0);
    let (y, eta) = concave_fw_initializer(&centered_bowl(2, 0.0), &cube, 100).unwrap();
    assert!(eta <= 1e-2, "{eta}");
    assert!(cube.contains(y.as_slice(), 1e-12));
    let (y, eta) = concave_fw_initializer(&centered_bowl(2, 0.0), &cube, 0).unwrap();
    assert!(eta.is_infinite());
    assert_eq!(y, Point::zeros(2));
}

#[test]
fn standard_fw_converges_on_bowl() {
    let p = instance(
        Arc::new(ZeroObjective::new(1)),
        Arc::new(centered_bowl(1, 0.0)),
        0.0,
        FeasibleRegion::unit_cube(1),
    );
    let r = standard_fw(&p, &SolverConfig::experiment(50)).unwrap();
    assert!(r.output_value.abs() < 1e-3);
}

#[test]
fn standard_fw_differs_from_greedy() {
    let p = common::guarantee_instance(4, 2, true, true);
    let greedy = greedy_fw(&p, &SolverConfig::with_epsilon(0.05)).unwrap();
    let cfg = SolverConfig {
        step: Some(0.05),
        ..SolverConfig::experiment(20)
    };
    let fw = standard_fw(&p, &cfg).unwrap();
    assert_eq!(greedy.iterates.len(), fw.iterates.len());
    let gap = greedy
        .iterates
        .iter()
        .zip(&fw.iterates)
        .map(|(a, b)| fwsubmix::vecops::dist2(a.as_slice(), b.as_slice()))
        .fold(0.0, f64::max);
    assert!(gap > 1e-3);
}

fn check_report(p: &ProblemInstance, alg: Algorithm, r: &fwsubmix::SolverReport) {
    for y in &r.iterates {
        assert!(p.region.contains(y.as_slice(), 1e-8), "{alg}: {y:?}");
    }
    let max = r.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(r.best_value, max, "{alg}");
    if alg.is_best_of() {
        assert_eq!(r.output_value, r.best_value, "{alg}");
    } else {
        assert_eq!(r.output_value, *r.values.last().unwrap(), "{alg}");
    }
}

#[test]
fn all_solvers_stay_feasible() {
    let problems = [
        common::guarantee_instance(4, 3, true, true),
        common::guarantee_instance(4, 4, false, false),
        fwsubmix::objectives::make_qp_instance(8, 4, 1)
            .unwrap()
            .problem(0.5)
            .unwrap(),
    ];
    for p in &problems {
        for alg in Algorithm::ALL {
            for cfg in [
                SolverConfig::experiment(30),
                SolverConfig::with_epsilon(0.2),
            ] {
                let cfg = SolverConfig {
                    enforce_preconditions: false,
                    ..cfg
                };
                match alg.run(p, &cfg) {
                    Ok(r) => check_report(p, alg, &r),
                    Err(Error::UnsupportedRegion(_)) => assert_eq!(alg, Algorithm::Pga),
                    Err(e) => panic!("{alg}: {e}"),
                }
            }
        }
    }
}

#[test]
fn measured_iterates_obey_coordinate_cap() {
    let p = common::guarantee_instance(4, 5, false, true);
    let eps = 0.1;
    let r = measured_greedy_fw(&p, &SolverConfig::with_epsilon(eps)).unwrap();
    for (i, y) in r.iterates.iter().enumerate() {
        let cap = 1.0 - (1.0 - eps).powi(i as i32);
        assert!(
            y.as_slice().iter().all(|v| *v >= 0.0 && *v <= cap + 1e-12),
            "step {i}"
        );
    }
}

#[test]
fn measured_stays_feasible_when_vertices_leave_the_cube() {
    let p = fwsubmix::objectives::make_qp_instance(5, 1, 2574854416347395484)
        .unwrap()
        .problem(0.5)
        .unwrap();
    assert!(!p.region.within_unit_cube());
    for k in [4, 10, 50] {
        let r = measured_greedy_fw(&p, &SolverConfig::experiment(k)).unwrap();
        for y in &r.iterates {
            assert!(p.region.contains(y.as_slice(), 1e-9), "{k}: {y:?}");
        }
    }
}

#[test]
fn doptimal_iterates_stay_in_shifted_box() {
    let d = make_doptimal_instance(8, 0).unwrap();
    let p = d.problem(0.5).unwrap();
    for alg in Algorithm::ALL {
        let r = alg.run(&p, &SolverConfig::experiment(50)).unwrap();
        assert_eq!(r.iterates.len(), 51, "{alg}");
        for y in &r.iterates {
            assert!(
                y.as_slice()
                    .iter()
                    .all(|v| (1.0 - 1e-12..=2.0 + 1e-12).contains(v)),
                "{alg}"
            );
        }
    }
}

#[test]
fn pga_on_cardinality_matches_projection_fixed_point() {
    let p = instance(
        Arc::new(ZeroObjective::new(3)),
        Arc::new(centered_bowl(3, 0.0)),
        0.0,
        FeasibleRegion::cardinality(3, 1.0).unwrap(),
    );
    let cfg = SolverConfig {
        step: Some(0.25),
        ..SolverConfig::experiment(200)
    };
    let r = fwsubmix::solvers::pga(&p, &cfg).unwrap();
    for v in r.output.as_slice() {
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }
}
