//! Estimate the birth rate of a one-species cubic system from pooled
//! trajectories and attach a confidence radius.
//!
//! cargo run --release --example estimate_rates -- [trajectories] [jumps] [seed]

use crnkit::estimate::{estimate_rates, z_alpha};
use crnkit::network::{read_network_file, StateVector, TransitionVector};
use crnkit::sim::{simulate_ensemble, SimOptions};

fn main() -> crnkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let q: u64 = args.next().map_or(100, |s| s.parse().expect("trajectories"));
    let jumps: u64 = args.next().map_or(1000, |s| s.parse().expect("jumps"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let sys = read_network_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/cubic_birth.crn"))?;
    let x = StateVector::new(vec![4]);
    let z = TransitionVector::new(vec![1])?;
    let trajs = simulate_ensemble(&sys, &StateVector::new(vec![1]), &SimOptions::jumps(jumps), q, seed)?;

    let est = estimate_rates(&trajs, std::slice::from_ref(&x), 1)?;
    let rate = est.rates.get(&z, &x).expect("z observed at x").to_f64();
    let g = est.visits[&x] as f64;
    let radius = z_alpha(0.01)? * est.sigma(&z, &x).unwrap_or(0.0) / g.sqrt();
    println!("visits to x = 4: {g}");
    println!("lambda_z(4) = {rate:.3} +/- {radius:.3} (99%), true {}", sys.transition_rate(&z, &x)?);
    Ok(())
}
