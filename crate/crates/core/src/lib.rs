//! Exact tooling for closed ordered differential fields: differential
//! polynomial algebra, the jet translation between differential and algebraic
//! formulas, triangulation into regular branches, cylindrical algebraic
//! decomposition with real quantifier elimination, formal power-series
//! witnesses, and local groups carved out of definable groups.

pub mod algebra;
pub mod cad;
pub mod cli;
pub mod dlwitness;
pub mod error;
pub mod formula;
pub mod localgroup;
pub mod starmap;
pub mod triangulate;

pub use error::{Error, Result};
