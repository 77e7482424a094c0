//! Entanglement types of subgroups of GL2(Z/pq) and the finite group
//! machinery behind them.

pub mod cli_io;
pub mod entangle;
pub mod error;
pub mod group;
pub mod group_id;
pub mod matmod;

pub use error::{Error, Result};
pub use matmod::Mat2;
