//! Quadratic forms over F_2, alternating/Bockstein classes over odd primes, and their
//! invariants, standard forms and reductions.

mod altbock;
mod arf;
mod component;
mod json;
mod quadratic;
mod reduce;
mod text;

pub use altbock::{strict_index, strict_len, AlternatingBockstein};
pub use arf::{
    arf_democratic, arf_direct_sum_check, arf_symplectic, arf_symplectic_from, bilinear_of, bilrad,
    classify, direct_sum, rad, symplectic_decomposition, symplectic_decomposition_from, FormTriple,
    SymplecticDecomposition, MAX_DEMOCRATIC_VARS,
};
pub use component::{coefficient_dim, ClassComponent};
pub use quadratic::{tri_index, tri_len, QuadraticFormF2};
pub use reduce::{
    equivalent, reduce_to_standard, standard_for_triple, standard_form, StandardKind,
    MAX_WITNESS_VARS,
};
pub use text::{parse_component, print_component};
