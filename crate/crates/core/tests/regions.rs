mod common;

use fwsubmix::regions::simplex;
use fwsubmix::rng::Stream;
use fwsubmix::{Error, FeasibleRegion};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn membership() {
    assert!(FeasibleRegion::unit_cube(2).contains(&[0.5, 0.5], 0.0));
    let card = FeasibleRegion::cardinality(2, 1.0).unwrap();
    assert!(!card.contains(&[0.7, 0.7], 1e-9));
    let poly = FeasibleRegion::polytope(vec![vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0]).unwrap();
    assert!(!poly.contains(&[0.5, 0.5 + 2e-9], 1e-9));
    assert!(poly.contains(&[0.5, 0.5 + 5e-10], 1e-9));
    assert!(!poly.contains(&[0.5], 1.0));
}

#[test]
fn lmo_examples() {
    let r = FeasibleRegion::unit_cube(3).lmo(&[1.0, -2.0, 0.0]).unwrap();
    assert_eq!(r.vertex.as_slice(), &[1.0, 0.0, 0.0]);
    assert_eq!(r.objective_value, 1.0);

    let card = FeasibleRegion::cardinality(3, 1.0).unwrap();
    let r = card.lmo(&[3.0, 2.0, 1.0]).unwrap();
    assert_eq!(r.vertex.as_slice(), &[1.0, 0.0, 0.0]);
    assert_eq!(r.objective_value, 3.0);

    let card = FeasibleRegion::cardinality(4, 2.5).unwrap();
    let r = card.lmo(&[4.0, 3.0, 2.0, -1.0]).unwrap();
    assert_eq!(r.vertex.as_slice(), &[1.0, 1.0, 0.5, 0.0]);
    assert_eq!(r.objective_value, 8.0);
}

#[test]
fn polytope_lmo_face_example_matches_enumeration() {
    let (a, b, u) = (vec![vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0]);
    let poly = FeasibleRegion::polytope(a.clone(), b.clone(), u.clone()).unwrap();
    let r = poly.lmo(&[1.0, 1.0]).unwrap();
    assert!((r.objective_value - 1.0).abs() < 1e-12);
    assert_eq!(r.vertex.as_slice(), &[1.0, 0.0]);
    let brute = common::vertex_enumeration_max(&a, &b, &u, &[1.0, 1.0]);
    assert!((brute - 1.0).abs() < 1e-12);
}

#[test]
fn polytope_lmo_matches_enumeration_on_random_instances() {
    for seed in 0..30 {
        let mut rng = Stream::new(seed, 3);
        let n = 2 + (seed as usize % 4);
        let m = 1 + (seed as usize % 3);
        let a: Vec<Vec<f64>> = (0..m).map(|_| rng.uniform_vec(n, 0.0, 1.0)).collect();
        let b = rng.uniform_vec(m, 0.2, 1.5);
        let u = rng.uniform_vec(n, 0.3, 1.0);
        let c = rng.uniform_vec(n, -1.0, 1.0);
        let poly = FeasibleRegion::polytope(a.clone(), b.clone(), u.clone()).unwrap();
        let r = poly.lmo(&c).unwrap();
        let brute = common::vertex_enumeration_max(&a, &b, &u, &c);
        assert!((r.objective_value - brute).abs() <= 1e-8, "seed {seed}");
        assert!(poly.contains(r.vertex.as_slice(), 1e-9));
        assert!((dot(&c, r.vertex.as_slice()) - r.objective_value).abs() < 1e-9);
    }
}

#[test]
fn simplex_respects_pivot_cap() {
    let rows = vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let rhs = vec![1.5, 1.0, 1.0];
    let sol = simplex::maximize(&rows, &rhs, &[1.0, 1.0], 100).unwrap();
    assert!((sol.objective - 1.5).abs() < 1e-12);
    assert!(matches!(
        simplex::maximize(&rows, &rhs, &[1.0, 1.0], 0),
        Err(Error::IterationLimit(0))
    ));
}

#[test]
fn projection_examples() {
    let cube = FeasibleRegion::unit_cube(2);
    assert_eq!(cube.project(&[1.5, -0.2]).unwrap().as_slice(), &[1.0, 0.0]);
    let card = FeasibleRegion::cardinality(2, 1.0).unwrap();
    let p = card.project(&[1.0, 1.0]).unwrap();
    assert!((p.as_slice()[0] - 0.5).abs() < 1e-9 && (p.as_slice()[1] - 0.5).abs() < 1e-9);
    let p = card.project(&[0.9, 0.3]).unwrap();
    assert!((p.as_slice()[0] - 0.8).abs() < 1e-9 && (p.as_slice()[1] - 0.2).abs() < 1e-9);
    let poly = FeasibleRegion::polytope(vec![vec![1.0, 1.0]], vec![1.0], vec![1.0, 1.0]).unwrap();
    assert!(!poly.supports_projection());
    assert!(matches!(
        poly.project(&[0.2, 0.2]),
        Err(Error::UnsupportedRegion(_))
    ));
}

#[test]
fn projection_variational_inequality() {
    let regions = [
        FeasibleRegion::boxed(vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]).unwrap(),
        FeasibleRegion::cardinality(5, 2.0).unwrap(),
    ];
    for region in regions {
        let mut rng = Stream::new(17, 0);
        let n = region.dim();
        for _ in 0..200 {
            let x = rng.uniform_vec(n, -1.0, 3.0);
            let p = region.project(&x).unwrap();
            let p = p.as_slice();
            assert!(region.contains(p, 1e-9));
            let d: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
            for _ in 0..50 {
                let z = region.sample(&mut rng);
                let zp: Vec<f64> = z.iter().zip(p).map(|(a, b)| a - b).collect();
                assert!(dot(&d, &zp) <= 1e-8);
            }
        }
    }
}

#[test]
fn diameters() {
    assert_eq!(FeasibleRegion::unit_cube(4).diameter_bound(), 2.0);
    assert_eq!(
        FeasibleRegion::cardinality(9, 4.0)
            .unwrap()
            .diameter_bound(),
        2.0
    );
    let poly =
        FeasibleRegion::polytope(vec![vec![1.0, 1.0, 1.0]], vec![1.0], vec![1.0; 3]).unwrap();
    assert!((poly.diameter_bound() - 3f64.sqrt()).abs() < 1e-15);
    let shifted = FeasibleRegion::boxed(vec![1.0; 8], vec![2.0; 8]).unwrap();
    assert!((shifted.diameter_bound() - 32f64.sqrt()).abs() < 1e-12);
}

#[test]
fn down_closedness_on_random_pairs() {
    let regions = [
        FeasibleRegion::unit_cube(4),
        FeasibleRegion::cardinality(4, 1.5).unwrap(),
        FeasibleRegion::polytope(vec![vec![0.5, 0.2, 0.9, 0.1]], vec![0.7], vec![1.0; 4]).unwrap(),
    ];
    for region in regions {
        assert!(region.is_down_closed());
        assert!(region.contains(region.anchor().as_slice(), 0.0));
        let mut rng = Stream::new(2, 0);
        for _ in 0..500 {
            let x = region.sample(&mut rng);
            assert!(region.contains(&x, 1e-12));
            let y: Vec<f64> = x.iter().map(|v| v * rng.uniform()).collect();
            assert!(region.contains(&y, 1e-12));
        }
    }
    assert!(!FeasibleRegion::boxed(vec![1.0], vec![2.0])
        .unwrap()
        .is_down_closed());
}

#[test]
fn invalid_regions_are_rejected() {
    assert!(FeasibleRegion::boxed(vec![1.0], vec![0.0]).is_err());
    assert!(FeasibleRegion::cardinality(3, 0.0).is_err());
    assert!(FeasibleRegion::cardinality(3, 4.0).is_err());
    assert!(FeasibleRegion::polytope(vec![vec![-1.0]], vec![1.0], vec![1.0]).is_err());
    assert!(FeasibleRegion::polytope(vec![vec![1.0]], vec![-1.0], vec![1.0]).is_err());
}
