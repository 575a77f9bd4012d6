//! Complete exponential sums over R/c, their closed forms and the identities
//! relating quartic sums to quartic-twisted Kloosterman sums.

mod cnn;
mod complete;
mod identities;
mod kloosterman;
mod poly;
mod quadratic;
mod report;

pub use cnn::{cnn_check, CnnOutcome};
pub use complete::complete_sum;
pub use identities::{
    composite_terms, cross_reduction_check, identity_composite, identity_prime, identity_prime_power,
    reciprocity_check, s4_multiplicativity, CompositeTerms, CrossTerm, ExactResidual,
};
pub use kloosterman::{kloosterman_s4, s4_factored, s4_prime_power, sqrt_mod};
pub use poly::{Method, PolySpec, SumValue, TwistSpec};
pub use quadratic::{gauss_sign, quad_sum_closed, CompletedSquare, QuadClosed};
pub use report::{Check, Report, Term};

pub(crate) use complete::times_symbol;
pub(crate) use identities::kloosterman_parts;
