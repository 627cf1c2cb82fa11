//! Cylindrical algebraic decomposition and real quantifier elimination.

pub mod field;
pub mod mpoly;
pub mod roots;
pub mod project;
pub mod lift;
pub mod decompose;
pub mod describe;
pub mod engine;
pub mod qe;
