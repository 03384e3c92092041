//! Exact field arithmetic and multivariate polynomial machinery.

pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod polynomial;
pub mod scalar;
pub mod univariate;

pub use groebner::{buchberger, ideal_membership, normal_form, GroebnerBasis};
pub use linalg::{RowSpace, SparseVec};
pub use monomial::{monomials_below, Monomial};
pub use parse::{parse_expr, parse_polynomial, Expr, ExprTarget};
pub use polynomial::Polynomial;
pub use scalar::{Field, Scalar};
