//! Compute-and-forward, reverse compute-and-forward and their baselines for
//! distributed antenna systems.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod error;
pub mod gfield;
pub mod harness;
pub mod ifb;
pub mod lattice;
pub mod linalg;
pub mod quantized;
pub mod schemes;
pub mod selection;

pub use error::{Error, Result};
