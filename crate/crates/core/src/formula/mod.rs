//! Formulas of the differential (L_D) and algebraic (L) dialects.

pub mod ast;
pub mod nf;
pub mod parse;
pub mod render;
pub mod star;

pub use ast::{max_orders, Atom, Formula, LDFormula, LFormula, Rel};
pub use nf::{dnf_clauses, nnf, to_dnf};
pub use parse::{parse, parse_algebraic, parse_poly};
pub use render::{formula_to_json, formula_to_string, poly_to_string};
pub use star::{star_translate, StarContext};
