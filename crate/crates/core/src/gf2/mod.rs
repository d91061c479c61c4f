//! Linear algebra over GF(2), GF(2)[D] and GF(2)(D).

mod bivariate;
pub mod canonical;
mod matrix;
mod poly;
mod polymatrix;

pub use bivariate::{BivariatePoly, BivariatePolyMatrix, Side};
pub use canonical::{canonical_form, canonical_form_poly, permutation_equivalent, CanonicalForm};
pub use matrix::{nullspace_basis, rank, BinaryMatrix};
pub use poly::{poly_mul, BinaryPoly};
pub use polymatrix::{minimal_basic, rank_over_rational_field, tailbite, PolyMatrix};

pub(crate) use matrix::words_for;
