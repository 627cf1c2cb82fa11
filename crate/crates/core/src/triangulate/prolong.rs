//! Differentiate-and-reduce closure of a differential system in one unknown.

use serde_json::{json, Value};

use super::branch::norm;
use crate::algebra::diff::{derive_n, leader, order, DiffPoly};
use crate::formula::render::poly_to_string;

const MAX_REDUCTIONS: usize = 256;

/// A consequence free of the unknown, valid where every initial is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub poly: DiffPoly,
    pub initials: Vec<DiffPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prolongation {
    /// The input followed by the derivatives of its members up to the target order.
    pub system: Vec<DiffPoly>,
    /// Nonzero remainders free of the unknown, one per derivative that reduces to one.
    pub constraints: Vec<Constraint>,
}

impl Prolongation {
    pub fn to_json(&self) -> Value {
        json!({
            "system": self.system.iter().map(poly_to_string).collect::<Vec<_>>(),
            "constraints": self.constraints.iter().map(|c| json!({
                "poly": poly_to_string(&c.poly),
                "initials": c.initials.iter().map(poly_to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Closes `e` under derivation up to order `target` in `y` and reduces each
/// new derivative against the other members.
pub fn diff_prolong_reduce(e: &[DiffPoly], y: &str, target: u32) -> Prolongation {
    let mut system: Vec<DiffPoly> = Vec::new();
    for f in e {
        if !f.is_zero() && !system.contains(f) {
            system.push(f.clone());
        }
    }
    let base = system.len();
    for i in 0..base {
        if let Some(k) = order(&system[i], y) {
            for s in 1..=target.saturating_sub(k) {
                let g = derive_n(&system[i], s);
                if !g.is_zero() && !system.contains(&g) {
                    system.push(g);
                }
            }
        }
    }
    let mut constraints = Vec::new();
    for i in base..system.len() {
        let others: Vec<DiffPoly> = system.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (r, initials) = reduce(&system[i], &others, y);
        if !r.is_zero() && order(&r, y).is_none() {
            let c = Constraint { poly: norm(&r), initials };
            if !constraints.contains(&c) {
                constraints.push(c);
            }
        }
    }
    Prolongation { system, constraints }
}

/// Ritt-style pseudo-reduction of `g` by the members of `by` that involve `y`,
/// highest leader first. Returns the remainder and the nonconstant initials used.
pub fn reduce(g: &DiffPoly, by: &[DiffPoly], y: &str) -> (DiffPoly, Vec<DiffPoly>) {
    let mut ranked: Vec<(crate::algebra::diff::JetVar, u32, &DiffPoly)> = by
        .iter()
        .filter_map(|h| leader(h, y).map(|l| (l.clone(), h.degree_in(&l), h)))
        .collect();
    ranked.sort_by(|a, b| (b.0.order, b.1).cmp(&(a.0.order, a.1)));
    let mut r = g.clone();
    let mut initials: Vec<DiffPoly> = Vec::new();
    for _ in 0..MAX_REDUCTIONS {
        let hit = ranked.iter().find(|(l, d, _)| r.degree_in(l) >= *d);
        let Some((l, _, h)) = hit else { break };
        let (d, _, rem) = r.pseudo_divide(h, l).expect("leader has positive degree");
        if d > 0 {
            let c = norm(&h.leading_coeff_in(l));
            if !c.is_constant() && !initials.contains(&c) {
                initials.push(c);
            }
        }
        r = rem;
        if r.is_zero() {
            break;
        }
    }
    (r, initials)
}
