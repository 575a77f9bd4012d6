//! Multiplicative and additive characters, Gauss sums, finite-field tables.

mod additive;
mod dirichlet;
mod finite_field;
mod gauss;
mod symbol;

pub use additive::{
    additive_char, different, exp_rational, root_of_unity, AdditiveMode, PhaseMap,
};
pub use dirichlet::{dirichlet_enumerate, DirichletChar, UnitGroup, DIRICHLET_NORM_BOUND};
pub use finite_field::{ff_char_table, hd_check, FfChar, FfCharTable};
pub use gauss::gauss_sum;
pub use symbol::{
    power_symbol, prime_field, LocalComponent, PrimeField, SymbolValue, UnitStructure,
    FIELD_TABLE_LIMIT,
};
