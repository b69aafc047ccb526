//! Linear forms, the symbolic transition matrix `M^P`, exact evaluation and
//! exact characteristic polynomials.

mod fkernel;
mod form;
mod matrix;
mod modular;
mod poly;

pub use form::LinearForm;
pub use matrix::{
    evaluate, expand_ab, kron_assemble, ladder_matrix, transition_from_table, transition_matrix,
    RationalMatrix, SymbolicMatrix,
};
pub use modular::{big_char_poly, char_poly, int_char_poly, int_poly_from_roots, is_prime_u64};
pub use poly::{Polynomial, UniPoly};
