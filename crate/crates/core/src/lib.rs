//! Exact computations with compatible norms on finite metric spaces.
//!
//! Every quantity is an exact rational. The crate covers the transport and
//! Lipschitz norms on zero-mass measures, extremal Lipschitz functions,
//! representability defects, one-point metric extensions and the cone of
//! semimetrics, and ships a command-line front end in [`cli`].

pub mod cli;
pub mod cone;
pub mod constructions;
pub mod error;
pub mod exactgeom;
pub mod lipschitz;
pub mod metric;
pub mod norms;
pub mod rational;
pub mod rigidity;

pub use error::{Error, Result};
pub use lipschitz::LipschitzFunction;
pub use metric::{FiniteMetricSpace, SignedMeasure};

/// Exact rational number used throughout the crate.
pub type Rational = num_rational::BigRational;
