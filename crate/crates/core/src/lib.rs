//! Finite-precision arithmetic at an irregular weight-one Eisenstein point:
//! p-adic L-values and their derivatives, L-invariants built from p-units,
//! classical and Lambda-adic q-expansions, explicit overconvergent weight-one
//! forms, and truncated models of the relevant local Hecke algebras, together
//! with numerical verification of the identities tying them together.
//!
//! All p-adic computations are capped-precision with pessimistic digit
//! tracking; every reported identity carries the number of agreeing digits
//! and the threshold it was tested against.

pub mod acceptance;
pub mod bernoulli;
pub mod chars;
pub mod error;
pub mod hecke_ring;
pub mod lfunc;
pub mod linv;
pub mod overconv;
pub mod padic;
pub mod qexp;
pub mod report;
pub mod ring;
pub mod series;

pub use chars::{CharEmbedding, DirichletCharacter};
pub use error::{Error, Result};
pub use padic::{Agreement, Padic};
pub use ring::Coeff;
pub use series::{binomial_power, PadicAlgebra, TruncatedSeries};

/// Exact rational scalars (the second coefficient ring next to [`Padic`]).
pub type Rat = num_rational::BigRational;

/// Truncated series over capped-precision p-adic numbers; models both the
/// Iwasawa variable X and the analytic jet variable s.
pub type PadicSeries = TruncatedSeries<Padic>;

/// Truncated series over exact rationals (used as an exact cross-check ring).
pub type RatSeries = TruncatedSeries<Rat>;
