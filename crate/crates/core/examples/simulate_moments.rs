//! Simulate X1 <-> X2 from (4,0) and compare ensemble moments of X1 with
//! the closed form N/2 (1 + e^{-2t}) and N/4 (1 - e^{-4t}).
//!
//! cargo run --release --example simulate_moments -- [realizations] [seed]

use crnkit::network::{read_network_file, StateVector};
use crnkit::sim::{ensemble_moments, simulate_ensemble, SimOptions};

fn main() -> crnkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().map_or(20_000, |s| s.parse().expect("realizations"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let sys = read_network_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/isomerization.crn"))?;
    let grid = [0.5, 1.0, 2.0];
    let trajs = simulate_ensemble(&sys, &StateVector::new(vec![4, 0]), &SimOptions::until(2.0), n, seed)?;
    let m = ensemble_moments(&trajs, &grid)?;

    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "t", "mean", "exact", "var", "exact");
    for (k, &t) in grid.iter().enumerate() {
        let mean = 2.0 * (1.0 + (-2.0 * t).exp());
        let var = 1.0 - (-4.0 * t).exp();
        println!("{t:>5} {:>10.4} {mean:>10.4} {:>10.4} {var:>10.4}", m.mean[k][0], m.variance[k][0]);
    }
    Ok(())
}
