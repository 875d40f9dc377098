//! Simulate an order-3 two-species system until every state of S_3 has
//! enough visits, estimate its rates, reconstruct the network and measure
//! how far the result is from the truth.
//!
//! cargo run --release --example estimate_pipeline -- [min_visits] [seed]

use crnkit::estimate::{
    collect_visits, confidence_epsilon, distance_intensity, distance_tv, infer_from_visits, CollectOptions,
};
use crnkit::network::{enumerate_simplex, format::format_reaction, read_network_file, StateVector};

fn main() -> crnkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let min_visits: u64 = args.next().map_or(20_000, |s| s.parse().expect("min_visits"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let sys = read_network_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/order3.crn"))?;
    let x0 = StateVector::new(vec![1, 1]);
    let s3 = enumerate_simplex(2, 3)?;

    let (index, n_traj) = collect_visits(&sys, &x0, &s3, min_visits, &CollectOptions::default(), seed)?;
    println!("{n_traj} trajectories of {} jumps", CollectOptions::default().jumps_per_trajectory);

    let inference = infer_from_visits(&index, 3, 1e-3, min_visits)?;
    let inferred = &inference.report.system;
    for r in inferred.reactions() {
        let known = sys.reactions().iter().any(|t| t.source() == r.source() && t.target() == r.target());
        let tag = if known { "" } else { "  (spurious)" };
        println!("{}{tag}", format_reaction(r, inferred.species()));
    }
    println!("clamped to zero: {}", inference.report.rejected.len());

    let eps = confidence_epsilon(&inference.estimates, 0.05)?;
    let di = distance_intensity(&sys, inferred, &s3)?;
    println!("intensity distance on S_3: {:.5} (epsilon at 95%: {eps:.5})", di.value);
    let tv = distance_tv(&sys, inferred, &x0, &x0, 10.0, &s3, 10_000, seed)?;
    println!("total variation on S_3 at t = 10: {:.4}", tv.value);
    Ok(())
}
