//! Exact computation with zero-dimensional rings presented as directed
//! unions of Artinian subrings, and with the ring of power series whose
//! coefficients all lie in one member of such a family.
//!
//! Everything is exact: coefficients are rationals or residues modulo a
//! prime, and infinite power series are handled through total-degree
//! truncation. Identities involving series are exact below the truncation
//! degree of their context.

pub mod artinian;
pub mod error;
pub mod exactpoly;
pub mod examples;
pub mod family;
pub mod flatcert;
pub mod idealkit;
pub mod series;

pub use error::{Error, Result};
