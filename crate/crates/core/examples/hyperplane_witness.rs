//! X1 <-> X2 conserves X1 + X2. On the hyperplane x1 + x2 = 2 its rates are
//! also produced by a second-order system, so the data cannot identify it.

use crnkit::infer::{check_identifiability, systems_agree_on, StateSpace};
use crnkit::network::{enumerate_hyperplane, read_network_file, write_network, ConservationVector};

fn main() -> crnkit::Result<()> {
    let sys = read_network_file(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/isomerization.crn"))?;
    let v = ConservationVector::new(vec![1, 1])?;

    let verdict = check_identifiability(&sys, &StateSpace::Hyperplane(v.clone(), 2))?;
    println!("identifiable: {} ({})", verdict.identifiable, verdict.reason);
    let witness = verdict.witness.expect("a witness exists on a hyperplane");
    print!("witness:\n{}", write_network(&witness));

    for level in [2, 4] {
        let states = enumerate_hyperplane(&v, level)?;
        println!("same rates on x1 + x2 = {level}: {}", systems_agree_on(&sys, &witness, &states)?);
    }

    let simplex = check_identifiability(&sys, &StateSpace::Simplex(1))?;
    println!("on S_1: identifiable = {} ({})", simplex.identifiable, simplex.reason);
    Ok(())
}
