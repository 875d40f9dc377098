//! Reconstruct a network from exact rates on S_2 along the single
//! direction z = (1,1).
//!
//! cargo run --example infer_simplex -- [rates.csv] [order]

use crnkit::infer::{infer_on_simplex, read_rate_table_file, InferenceMode};
use crnkit::network::{enumerate_simplex, write_network};

fn main() -> crnkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/main_example.rates.csv").into());
    let order: u64 = args.next().map_or(2, |s| s.parse().expect("order"));

    let table = read_rate_table_file(&path)?;
    let report = infer_on_simplex(&table, order, InferenceMode::Strict)?;
    print!("{}", write_network(&report.system));

    for c in &report.coefficients {
        println!("state #{} {} along {}: kappa = {}", c.state_index, c.state, c.z, c.value);
    }
    for x in enumerate_simplex(table.dim(), order)? {
        println!("lambda{} = {}", x, report.system.total_rate(&x)?);
    }
    println!("residual_max = {}", report.residual_max);
    Ok(())
}
