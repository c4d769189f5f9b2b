//! Edgeworth expansions for the occupation numbers of branching random walks.

pub mod bell;
pub mod cumulants;
pub mod error;
pub mod estimators;
pub mod expansion;
pub mod fourier;
pub mod hermite;
pub mod models;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod simulator;
pub mod special;
pub mod verify;

pub use cumulants::CumulantSet;
pub use error::{Error, Result};
pub use expansion::{edgeworth_term, edgeworth_terms, expansion_value, f_term, saddle_expansion_value, Expansion};
pub use operator::DiffOperator;
pub use poly::Polynomial;
