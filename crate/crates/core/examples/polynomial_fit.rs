//! Fit falling-factorial polynomials to scattered rates, one direction at a
//! time, and read off the network. A state set whose basis matrix is
//! singular is reported as such.

use std::collections::BTreeMap;

use crnkit::infer::{fit_polynomial, fit_rate_table, polynomial_to_network, read_rate_table_file};
use crnkit::network::{write_network, Rate, StateVector};

fn main() -> crnkit::Result<()> {
    let table = read_rate_table_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/chain.rates.csv"))?;
    let fits = fit_rate_table(&table, 1)?;
    for (z, fit) in &fits {
        let c: Vec<String> = fit.coefficients.iter().map(Rate::to_string).collect();
        println!("z = {z}: degree {}, coefficients [{}]", fit.order, c.join(", "));
    }
    let coefficients = fits.into_iter().map(|(z, f)| (z, f.coefficients)).collect();
    print!("{}", write_network(&polynomial_to_network(&coefficients, table.dim())?));

    // Three states on the line x1 + x2 = 2 cannot pin down a + b x2 + c x1.
    let rates: BTreeMap<StateVector, Rate> = [(vec![2, 0], 2), (vec![1, 1], 1), (vec![0, 2], 0)]
        .into_iter()
        .map(|(x, r)| (StateVector::new(x), Rate::from_integer(r)))
        .collect();
    match fit_polynomial(&rates, 1) {
        Ok(fit) => println!("unexpected fit {:?}", fit.coefficients),
        Err(e) => println!("collinear states: {e}"),
    }
    Ok(())
}
