//! Canonical text and JSON rendering.

use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::ast::{Atom, Formula};
use crate::algebra::diff::JetVar;
use crate::algebra::poly::{Poly, Var};
use crate::algebra::rat;

pub trait VarDisplay {
    fn show(&self) -> String;
}

impl VarDisplay for String {
    fn show(&self) -> String {
        self.clone()
    }
}

impl VarDisplay for JetVar {
    fn show(&self) -> String {
        self.to_string()
    }
}

impl VarDisplay for usize {
    fn show(&self) -> String {
        format!("v{self}")
    }
}

/// Canonical rendering, e.g. `x'' + 2*x'*x - 3/2`.
pub fn poly_to_string<V: Var + VarDisplay>(p: &Poly<V>) -> String {
    poly_to_string_with(p, &|v: &V| v.show())
}

pub fn poly_to_string_with<V: Var>(p: &Poly<V>, name: &dyn Fn(&V) -> String) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.display_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .pairs()
            .iter()
            .rev()
            .map(|(v, e)| if *e == 1 { name(v) } else { format!("{}^{}", name(v), e) })
            .collect();
        if factors.is_empty() {
            out.push_str(&rat::render(&a));
        } else {
            if !a.is_one() {
                out.push_str(&rat::render(&a));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

pub fn atom_to_string<V: Var + VarDisplay>(a: &Atom<Poly<V>>) -> String {
    format!("{} {} {}", poly_to_string(&a.lhs), a.rel, poly_to_string(&a.rhs))
}

/// Canonical formula rendering; `parse` reads it back to the same tree.
pub fn formula_to_string<V: Var + VarDisplay>(f: &Formula<Poly<V>>) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Atom(a) => atom_to_string(a),
        Formula::Not(g) => format!("~({})", formula_to_string(g)),
        Formula::And(gs) => gs
            .iter()
            .map(|g| match g {
                Formula::Atom(_) | Formula::True | Formula::False | Formula::Not(_) => formula_to_string(g),
                _ => format!("({})", formula_to_string(g)),
            })
            .collect::<Vec<_>>()
            .join(" & "),
        Formula::Or(gs) => gs
            .iter()
            .map(|g| match g {
                Formula::Atom(_) | Formula::True | Formula::False | Formula::Not(_) | Formula::And(_) => {
                    formula_to_string(g)
                }
                _ => format!("({})", formula_to_string(g)),
            })
            .collect::<Vec<_>>()
            .join(" | "),
        Formula::Exists(vs, g) => format!("E {}. {}", vs.join(", "), formula_to_string(g)),
        Formula::Forall(vs, g) => format!("A {}. {}", vs.join(", "), formula_to_string(g)),
    }
}

/// JSON tree with stable field names `op`, `args`, `poly`, `rel`.
pub fn formula_to_json<V: Var + VarDisplay>(f: &Formula<Poly<V>>) -> Value {
    match f {
        Formula::True => json!({"op": "true", "args": []}),
        Formula::False => json!({"op": "false", "args": []}),
        Formula::Atom(a) => json!({"op": "atom", "poly": poly_to_string(&a.poly()), "rel": a.rel.symbol()}),
        Formula::Not(g) => json!({"op": "not", "args": [formula_to_json(g)]}),
        Formula::And(gs) => json!({"op": "and", "args": gs.iter().map(formula_to_json).collect::<Vec<_>>()}),
        Formula::Or(gs) => json!({"op": "or", "args": gs.iter().map(formula_to_json).collect::<Vec<_>>()}),
        Formula::Exists(vs, g) => json!({"op": "exists", "vars": vs, "args": [formula_to_json(g)]}),
        Formula::Forall(vs, g) => json!({"op": "forall", "vars": vs, "args": [formula_to_json(g)]}),
    }
}
