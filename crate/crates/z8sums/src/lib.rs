//! Exponential sums over Z[ω₈]: residue symbols, Gauss and Kloosterman sums,
//! Salié-type evaluations, the quartic/Kloosterman identities and a numerical
//! harness for sums of exponential sums.

pub mod characters;
pub mod cli;
pub mod error;
pub mod expsums;
pub mod numeric;
pub mod ring;
pub mod series;

pub use error::{Error, Result};
