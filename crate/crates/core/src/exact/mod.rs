//! Exact scalars: big rationals, formal powers of the imaginary unit, and
//! unevaluated products of gamma functions at rational arguments.

mod gamma;
mod numeric;
mod phase;
mod rational;
mod series;
mod sloped;

pub use gamma::{ratio, ratio_reduced, GammaFactor, GammaQuotient, Reduced};
pub use numeric::{evaluate_numeric, NumericValue};
pub use phase::{Phase, Phased};
pub use rational::{q, Rational};
pub use series::{Field, Limit, Series};
pub use sloped::{SlopedFactor, SlopedQuotient};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot add values with different phases")]
    MixedPhase,
    #[error("invalid rational literal {0:?}")]
    Parse(String),
    #[error("gamma arguments are not integer-spaced (class of {arg})")]
    NonCommensurable { arg: Rational },
    #[error("uncancelled pole at {arg}")]
    UncancelledPole { arg: Rational },
    #[error("zero times pole is indeterminate")]
    Indeterminate,
    #[error("gamma pole at {arg}")]
    PoleAt { arg: Rational },
}
