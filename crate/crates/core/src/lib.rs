//! Maximum-entropy phase-space packets.
//!
//! Classical and quantum packets built from prescribed means and spreads,
//! their evolution under polynomial potentials, and a solvable oscillator
//! chain. See the crate README for an overview and the `examples/` directory
//! for runnable entry points.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod classical;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod params;
pub mod qpacket;
pub mod quadrature;
pub mod weyl;

pub use error::{Error, Result};
pub use params::{Constants, Dof, PacketParams};
