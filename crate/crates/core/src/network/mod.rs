//! Exact algebra for reaction networks: complexes, reactions, mass-action
//! intensities, lexicographic state enumeration and conservation laws.

mod conservation;
pub mod enumerate;
pub mod format;
mod rate;
mod system;
mod vector;

pub use conservation::{
    detect_conservation_laws, detect_conservation_laws_bounded, ConservationVector, DEFAULT_CONSERVATION_BOUND,
};
pub use enumerate::{enumerate_hyperplane, enumerate_simplex, enumerate_simplex_capped, simplex_size};
pub use format::{parse_network, read_network_file, write_network, write_network_file};
pub use rate::{Rate, RateParseError};
pub use system::{default_species_names, is_subsystem, systems_equal, Reaction, ReactionSystem};
pub(crate) use vector::falling_factorial_f64;
pub use vector::{falling_factorial, lex_compare, ComplexVector, StateVector, TransitionVector};
