//! Generalized write channel for bit-patterned media recording.
//!
//! The channel writes `Y_i = X_{i - Z_i} ^ W_i`: each recorded bit is either the
//! intended bit or its predecessor (state `Z_i ~ Bernoulli(p)`), flipped by an
//! independent write noise `W_i ~ Bernoulli(alpha)`.
//!
//! * [`channel`] samples inputs and realizations of the channel.
//! * [`bounds`] evaluates the closed-form information-rate bounds.
//! * [`exact`] computes finite-block mutual information by full enumeration.
//! * [`estimator`] estimates the asymptotic information rate by simulation.

pub mod bounds;
pub mod channel;
mod error;
pub mod estimator;
pub mod exact;
pub mod seed;

pub use bounds::{binary_entropy, BoundSet};
pub use channel::{BinarySequence, ChannelParams, InputKind, InputProcess, Probability};
pub use error::{Error, Result};
pub use estimator::RateEstimate;
