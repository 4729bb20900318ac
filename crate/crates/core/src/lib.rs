#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Predictive sampling and Thompson sampling for stationary and
//! nonstationary multi-armed bandits.

pub mod domain;
pub mod agents;
pub mod baseline;
pub mod cli;
pub mod envs;
pub mod error;
pub mod harness;
pub mod inference;
pub mod infotheory;
pub mod numerics;
pub mod oracle;
pub mod stream;

pub use error::{Error, Result};
