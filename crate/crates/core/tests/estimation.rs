use std::path::Path;

use statrs::distribution::{ContinuousCDF, Normal};

use crnkit::estimate::{
    collect_visits, distance_tv, estimate_from_index, estimate_rates, normal_quantile, z_alpha, CollectOptions,
    VisitIndex,
};
use crnkit::network::{enumerate_simplex, read_network_file, ReactionSystem, StateVector, TransitionVector};
use crnkit::sim::{derive_stream_seed, simulate_ensemble, SimOptions};

fn data(name: &str) -> ReactionSystem {
    read_network_file(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)).unwrap()
}

#[test]
fn normal_quantile_matches_statrs() {
    let normal = Normal::new(0.0, 1.0).unwrap();
    for i in 1..2000 {
        let p = i as f64 / 2000.0;
        assert!((normal_quantile(p) - normal.inverse_cdf(p)).abs() < 1e-6, "p = {p}");
    }
    for p in [1e-10, 1e-6, 0.02425, 0.97575, 1.0 - 1e-6] {
        assert!((normal_quantile(p) - normal.inverse_cdf(p)).abs() < 1e-6, "p = {p}");
    }
    assert!((z_alpha(0.05).unwrap() - normal.inverse_cdf(0.975)).abs() < 1e-6);
    assert!(z_alpha(0.0).is_err() && z_alpha(1.0).is_err());
}

#[test]
fn streamed_index_equals_index_from_stored_trajectories() {
    let sys = data("order3.crn");
    let x0 = StateVector::new(vec![1, 1]);
    let s2 = enumerate_simplex(2, 2).unwrap();
    let opts = CollectOptions { jumps_per_trajectory: 500, batch: 8, max_trajectories: 8 };
    let (streamed, n) = collect_visits(&sys, &x0, &s2, 1, &opts, 21).unwrap();
    let trajs: Vec<_> = (0..n)
        .map(|i| crnkit::sim::simulate(&sys, &x0, f64::INFINITY, derive_stream_seed(21, i), Some(500)).unwrap())
        .collect();
    let stored = VisitIndex::from_trajectories(2, &trajs).unwrap();
    for x in &s2 {
        assert_eq!(streamed.visits(x), stored.visits(x));
        assert_eq!(streamed.get(x).unwrap().holding, stored.get(x).unwrap().holding);
        for z in stored.transition_vectors() {
            assert_eq!(streamed.count(x, &z), stored.count(x, &z));
        }
    }
    let a = estimate_from_index(&streamed, &s2, 1).unwrap();
    let b = estimate_rates(&trajs, &s2, 1).unwrap();
    assert_eq!(a.rates, b.rates);
}

#[test]
fn estimator_consistency_on_cubic_example() {
    let sys = data("cubic_birth.crn");
    let x = StateVector::new(vec![4]);
    let z = TransitionVector::new(vec![1]).unwrap();
    let truth = sys.transition_rate(&z, &x).unwrap().to_f64();
    assert_eq!(truth, 81.0);
    let opts = CollectOptions { jumps_per_trajectory: 1_000, ..CollectOptions::default() };
    let z01 = z_alpha(0.01).unwrap();
    let mut within = 0;
    for run in 0..100 {
        let (index, _) = collect_visits(&sys, &StateVector::new(vec![1]), std::slice::from_ref(&x), 20_000, &opts, 500 + run).unwrap();
        let est = estimate_from_index(&index, std::slice::from_ref(&x), 1).unwrap();
        let g = est.visits[&x] as f64;
        let rel = (est.rates.get(&z, &x).unwrap().to_f64() - truth).abs() / truth;
        if rel < 3.0 * z01 * est.sigma(&z, &x).unwrap() / (g.sqrt() * truth) {
            within += 1;
        }
    }
    assert!(within >= 99, "{within} of 100");
}

#[test]
fn tv_distance_bounds_and_symmetry() {
    let a = data("birth_death.crn");
    let b = data("burst.crn");
    let x0 = StateVector::new(vec![0]);
    let u = enumerate_simplex(1, 6).unwrap();
    let ab = distance_tv(&a, &b, &x0, &x0, 3.0, &u, 20_000, 8).unwrap().value;
    let ba = distance_tv(&b, &a, &x0, &x0, 3.0, &u, 20_000, 8).unwrap().value;
    assert!((0.0..=1.0).contains(&ab));
    assert!((ab - ba).abs() < 0.03, "{ab} vs {ba}");
    let aa = distance_tv(&a, &a, &x0, &x0, 3.0, &u, 20_000, 8).unwrap().value;
    assert!(aa < 0.03);
    // Poisson(1 - e^-3) against the burst system's wider law.
    assert!(ab > 0.1);
    let same = simulate_ensemble(&a, &x0, &SimOptions::until(3.0), 4, 8).unwrap();
    assert_eq!(same, simulate_ensemble(&a, &x0, &SimOptions::until(3.0), 4, 8).unwrap());
}
