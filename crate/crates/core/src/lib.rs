//! Entropy-function capacity bounds, network transformations and zero-error
//! code search for network coding on acyclic hypergraphs.

pub mod cli;
pub mod code;
pub mod error;
pub mod examples;
pub mod lp;
pub mod model;
pub mod rank;
pub mod rational;
pub mod routing;
pub mod shannon;
pub mod transform;

pub use error::{Error, Result};
pub use model::{Problem, ProblemSpec, RateCapacityTuple};
pub use rational::Rational;
