//! Covert messaging through the motion of a simulated robot arm.
//!
//! Messages are encoded as environmental stimuli (small repulsive objects)
//! placed in a planar arm's workspace. The arm's fixed controller reacts to
//! the stimulus, and the resulting trajectory is decoded with a keyed hash
//! reduced modulo the message-space size. A trial-and-error construction
//! samples stimuli until every symbol has a representative, yielding a
//! codebook; coupon-collector statistics describe how many trials that
//! takes.
//!
//! Module map:
//! - [`core`]: domain types and canonical trajectory serialization
//! - [`sim`]: the deterministic potential-field arm environment
//! - [`codec`]: keyed-hash decoder, codebook construction, round trips
//! - [`analytics`]: closed-form and Monte Carlo coverage statistics
//! - [`metrics`]: secrecy and capacity evaluation on simulated trials
//! - [`cli`]: the `stegomotion` command-line front end

pub mod analytics;
pub mod cli;
pub mod codec;
pub mod core;
pub mod error;
pub mod hashing;
pub mod metrics;
pub mod rng;
pub mod sim;
pub mod svg;

pub use error::{Error, Result};
