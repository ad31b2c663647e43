//! Symbolic engine for the algebra of `N` canonical conjugate pairs
//! `[p_m, q^n] = c δ_mn I`.
//!
//! Elements are kept in pq-normal order with coefficients that are exact
//! polynomials (or truncated series) in the central symbol `c`. Commutators
//! can be computed by direct expansion or by the closed-form derivative
//! series in `c`, and the two are checked against each other and against a
//! polynomial representation.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod commutators;
pub mod error;
pub mod oracle;
pub mod output;
pub mod parser;
pub mod scalar;
pub mod verify;

pub use algebra::{AlgebraContext, Element, ExponentMode, GeneratorId, Kind, NormalMonomial, Word};
pub use calculus::{d_multi, d_p, d_q};
pub use commutators::{
    commutator_direct, commutator_series, commutator_series_flat, commutator_series_grouped, poisson_leading,
    series_term_k, Method, MultiIndex,
};
pub use error::{Error, Result};
pub use parser::{lower, parse, parse_element, parse_expr, Expr};
pub use scalar::{CSeries, CoeffMode, Rational};
