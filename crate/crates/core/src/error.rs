use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomials live in different ambient rings")]
    AmbientMismatch,
    #[error("presentation is not Artinian: {0}")]
    NotArtinian(String),
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("claimed field is not a field: {0}")]
    NotAField(String),
    #[error("subring handles come from different families")]
    FamilyMismatch,
    #[error("generator stream ended after {0} generators")]
    StreamFinite(usize),
    #[error("series elements live in different contexts")]
    ContextMismatch,
    #[error("ideal is not compatible with this element: {0}")]
    IncompatibleIdeal(String),
    #[error("generator {0} has a unit constant term")]
    UnitGenerator(usize),
    #[error("no element avoiding the relevant primes in the search space ({0} candidates tried)")]
    SearchExhausted(usize),
    #[error("ideal is not height-generated: {0}")]
    NotHeightGenerated(String),
    #[error("not a unit-coefficient monomial: {0}")]
    NotMonomial(String),
    #[error("ideal is outside the supported slice: {0}")]
    NotSupportedSlice(String),
    #[error("relation does not vanish at truncation")]
    ConstraintViolated,
    #[error("internal self-check failed: no flatness certificate exists for {0}")]
    NoSolution(String),
    #[error("no consistent relation found after {0} attempts")]
    SamplingExhausted(usize),
    #[error("ideal is not proper")]
    NotProper,
    #[error("characteristic {p} too small for k = {k}")]
    CharacteristicTooSmall { p: u64, k: usize },
    #[error("{0}")]
    Invalid(String),
}
