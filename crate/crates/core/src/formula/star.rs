//! The jet translation φ ↦ φ*.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::ast::{max_orders, Atom, Formula, LDFormula, LFormula};
use crate::algebra::diff::{AlgPoly, DiffPoly, JetVar};
use crate::error::{Error, Result};

/// Differential variables with their maximal orders and the flat names of their jets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarContext {
    pub vars: Vec<String>,
    pub orders: Vec<u32>,
}

impl StarContext {
    pub fn new(vars: Vec<String>, orders: Vec<u32>) -> Self {
        assert_eq!(vars.len(), orders.len());
        StarContext { vars, orders }
    }

    /// Context for a formula: variables sorted by name, orders maximal over all atoms.
    pub fn of(phi: &LDFormula) -> Self {
        let m = max_orders(phi);
        let mut names: Vec<String> = phi.free_vars().into_iter().collect();
        for v in m.keys() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        names.sort();
        let orders = names.iter().map(|n| m.get(n).copied().unwrap_or(0)).collect();
        StarContext { vars: names, orders }
    }

    /// Context with a prescribed variable order; variables absent from `phi` get order 0.
    pub fn with_order(phi: &LDFormula, vars: &[String]) -> Self {
        let m = max_orders(phi);
        StarContext {
            vars: vars.to_vec(),
            orders: vars.iter().map(|n| m.get(n).copied().unwrap_or(0)).collect(),
        }
    }

    /// Raises orders to at least those of `other` (the padding used to align two sets).
    pub fn pad_to(&self, other: &StarContext) -> StarContext {
        let mut out = self.clone();
        for (v, o) in other.vars.iter().zip(&other.orders) {
            match out.vars.iter().position(|w| w == v) {
                Some(i) => out.orders[i] = out.orders[i].max(*o),
                None => {
                    out.vars.push(v.clone());
                    out.orders.push(*o);
                }
            }
        }
        out
    }

    /// N = Σ m_i + n.
    pub fn dimension(&self) -> usize {
        self.orders.iter().map(|m| *m as usize + 1).sum()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// `{name}_{i}_{j}` for the j-th derivative of the i-th variable (0-based).
    pub fn flat(&self, v: &JetVar) -> Option<String> {
        let i = self.index_of(&v.name)?;
        if v.order > self.orders[i] {
            return None;
        }
        Some(flat_jet_name(&v.name, i, v.order))
    }

    /// Flat variable names in the canonical coordinate order.
    pub fn coords(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (v, m)) in self.vars.iter().zip(&self.orders).enumerate() {
            for j in 0..=*m {
                out.push(flat_jet_name(v, i, j));
            }
        }
        out
    }

    /// Jet variables in the canonical coordinate order.
    pub fn jets(&self) -> Vec<JetVar> {
        let mut out = Vec::new();
        for (v, m) in self.vars.iter().zip(&self.orders) {
            for j in 0..=*m {
                out.push(JetVar::new(v, j));
            }
        }
        out
    }

    pub fn backward(&self) -> HashMap<String, JetVar> {
        self.jets().into_iter().zip(self.coords()).map(|(j, c)| (c, j)).collect()
    }

    pub fn forward(&self) -> BTreeMap<JetVar, String> {
        self.jets().into_iter().zip(self.coords()).collect()
    }

    pub fn star_poly(&self, p: &DiffPoly) -> Result<AlgPoly> {
        p.try_map_vars(|v| {
            self.flat(v).ok_or_else(|| Error::User(format!("jet {v} is outside the star context")))
        })
    }

    pub fn unstar_poly(&self, p: &AlgPoly) -> Result<DiffPoly> {
        let back = self.backward();
        p.try_map_vars(|v| back.get(v).cloned().ok_or_else(|| Error::User(format!("unknown jet coordinate {v}"))))
    }

    /// Translates an algebraic formula over the flat coordinates back to jets.
    pub fn unstar(&self, phi: &LFormula) -> Result<LDFormula> {
        let back = self.backward();
        for v in phi.poly_vars() {
            if !back.contains_key(&v) {
                return Err(Error::User(format!("unknown jet coordinate {v}")));
            }
        }
        Ok(phi.map_vars(&|v: &String| back[v].clone()))
    }

    pub fn star(&self, phi: &LDFormula) -> Result<LFormula> {
        if !phi.is_quantifier_free() {
            return Err(Error::User("star translation needs a quantifier-free formula".into()));
        }
        let mut err = None;
        let out = phi.map_atoms(&mut |a: &Atom<DiffPoly>| match (self.star_poly(&a.lhs), self.star_poly(&a.rhs)) {
            (Ok(l), Ok(r)) => Formula::Atom(Atom::new(l, a.rel, r)),
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                Formula::True
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

pub fn flat_jet_name(name: &str, i: usize, j: u32) -> String {
    format!("{name}_{i}_{j}")
}

/// φ ↦ (φ*, context) with one shared context for all atoms.
pub fn star_translate(phi: &LDFormula) -> Result<(LFormula, StarContext)> {
    let ctx = StarContext::of(phi);
    let out = ctx.star(phi)?;
    Ok((out, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse;
    use crate::formula::render::formula_to_string;

    #[test]
    fn constants_translation() {
        let (f, ctx) = star_translate(&parse("D(x)=0").unwrap()).unwrap();
        assert_eq!(formula_to_string(&f), "x_0_1 = 0");
        assert_eq!(ctx.dimension(), 2);
    }

    #[test]
    fn mixed_orders() {
        let (f, ctx) = star_translate(&parse("x'*x > 1 & x'' = 0").unwrap()).unwrap();
        assert_eq!(formula_to_string(&f), "x_0_1*x_0_0 > 1 & x_0_2 = 0");
        assert_eq!(ctx.dimension(), 3);
    }

    #[test]
    fn order_zero() {
        let (f, ctx) = star_translate(&parse("x = x").unwrap()).unwrap();
        assert_eq!(formula_to_string(&f), "x_0_0 = x_0_0");
        assert_eq!(ctx.dimension(), 1);
    }

    #[test]
    fn two_variables() {
        let ctx = StarContext::of(&parse("x'*y''' = 1").unwrap());
        assert_eq!(ctx.orders, vec![1, 3]);
        assert_eq!(ctx.dimension(), 6);
        assert_eq!(ctx.coords()[2], "y_1_0");
    }
}
