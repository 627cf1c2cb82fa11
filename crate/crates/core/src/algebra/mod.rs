//! Exact polynomial and differential polynomial arithmetic over ℚ.

pub mod diff;
pub mod poly;
pub mod rat;
pub mod upoly;

pub use diff::{
    algebraize, derive, derive_n, evaluate, order, pseudo_divide, separant, taylor_coefficient,
    AlgPoly, DiffPoly, Jet, JetVar, VarMap,
};
pub use poly::{Monomial, Poly, Var};
pub use rat::Q;
pub use upoly::UPoly;
