//! Power-relator quotients `F/⟨⟨hⁿ⟩⟩`, the ε-containment language filter,
//! injectivity checks and the growth-convergence experiment.

mod experiment;
mod filter;
mod power;

pub use experiment::{theorem_a_experiment, ExperimentLeg, ExperimentResult};
pub use filter::{epsilon_contains, injectivity_check, language_filter, ContainmentFilter, InjectivityReport};
pub use power::{make_power_quotient, PowerQuotient};
