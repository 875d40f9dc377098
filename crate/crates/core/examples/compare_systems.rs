//! Distances between two systems with the same mean dynamics: the
//! intensity distance on S_N and the total variation over S_N at time t.
//!
//! cargo run --release --example compare_systems -- [t] [realizations] [seed]

use crnkit::estimate::{distance_intensity, distance_tv};
use crnkit::network::{enumerate_simplex, read_network_file, StateVector};

fn main() -> crnkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let t: f64 = args.next().map_or(3.0, |s| s.parse().expect("t"));
    let n: u64 = args.next().map_or(10_000, |s| s.parse().expect("realizations"));
    let seed: u64 = args.next().map_or(5, |s| s.parse().expect("seed"));

    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let a = read_network_file(format!("{dir}/birth_death.crn"))?;
    let b = read_network_file(format!("{dir}/burst.crn"))?;
    let u = enumerate_simplex(1, 10)?;
    let x0 = StateVector::new(vec![0]);

    let di = distance_intensity(&a, &b, &u)?.with_label("simplex:10");
    println!("intensity distance on {}: {}", di.set_u, di.value);
    let tv = distance_tv(&a, &b, &x0, &x0, t, &u, n, seed)?.with_label("simplex:10");
    println!(
        "total variation on {} at t = {t}: {:.4} (escaped {:?} / {:?})",
        tv.set_u, tv.value, tv.escaped_a, tv.escaped_b
    );
    Ok(())
}
