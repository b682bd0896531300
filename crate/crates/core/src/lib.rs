//! Growth of groups through their Cayley graphs: exact balls over
//! word-problem oracles, relative geometry (peripheral cosets, transition
//! points, Floyd metrics, partial cones), tree-model boundaries with exact
//! Patterson–Sullivan masses, power-relator quotients and transitional
//! trees.
//!
//! Numerical code is generic over [`Scalar`]; the aliases below fix the
//! scalar for the common cases.

pub mod boundary;
pub mod cayley;
pub mod error;
pub mod quotient;
pub mod relgeom;
pub mod scalar;
pub mod suite;
pub mod treelab;
pub mod words;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use words::{GeneratorSet, Presentation, Word};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type GrowthEstimate64 = cayley::GrowthEstimate<f64>;
pub type GrowthEstimate32 = cayley::GrowthEstimate<f32>;
pub type PoincareReport64 = cayley::PoincareReport<f64>;
pub type ExactPoincareReport = cayley::PoincareReport<Rational>;
pub type FloydInterval64 = relgeom::FloydInterval<f64>;
pub type ExactFloydInterval = relgeom::FloydInterval<Rational>;
