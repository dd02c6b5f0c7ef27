//! Exact polynomial arithmetic: rationals, dense univariate and sparse
//! multivariate polynomials, resultants, remainder sequences and real-root
//! isolation.

mod intpoly;
pub mod mpoly;
mod parse;
pub mod prs;
pub mod rat;
pub mod resultant;
pub mod roots;
pub mod upoly;
mod zpoly;

use thiserror::Error;

pub use mpoly::{CompiledPoly, MPoly};
pub use prs::euclidean_last_linear;
pub use rat::{rat, rat_approx, rat_from_f64, rat_int, rat_to_f64, Rat};
pub use resultant::sylvester_resultant;
pub use roots::{
    count_real_roots, isolate_all_real_roots, isolate_real_roots, real_roots, refine_root,
    root_bound, RootInterval,
};
pub use upoly::{strip_all, strip_known_factors, RatPoly};

/// Default interval width for root refinement.
pub const DEFAULT_ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("remainder sequence in {var} has no usable degree-one member")]
    ChainCollapse { var: String },
    #[error("factor {factor} does not divide with multiplicity {multiplicity}")]
    NotAFactor { factor: String, multiplicity: u32 },
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exponent too large for packed monomials")]
    ExponentOverflow,
}
