//! Network reconstruction from transition rates.

mod hyperplane;
mod identify;
mod polynomial;
mod rate_table;
mod simplex;

pub use hyperplane::infer_on_hyperplane;
pub use identify::{check_identifiability, systems_agree_on, IdentifiabilityVerdict, StateSpace, VerdictReason};
pub use polynomial::{
    fit_polynomial, fit_polynomial_with, fit_rate_table, order_for_count, polynomial_to_network, PolynomialFit,
    DEFAULT_PIVOT_TOLERANCE,
};
pub(crate) use rate_table::{rate_table_header, rate_table_key};
pub use rate_table::{read_rate_table, read_rate_table_file, write_rate_table, write_rate_table_file, RateTable};
pub use simplex::{
    infer_on_simplex, infer_on_simplex_with_noise, Coefficient, InferenceMode, InferenceReport, NoiseModel,
    RejectedCoefficient,
};
