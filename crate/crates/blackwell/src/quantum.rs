//! Quantum side of the toolkit: states, channels, guessing probabilities,
//! and channel comparison with certificates.

pub mod channel;
pub mod comparison;
pub mod minentropy;
pub mod linalg;
