//! Group operations given by graphs, turned into rational maps on jets.

use crate::algebra::diff::{DiffPoly, JetVar};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LDFormula, LFormula, Rel};
use crate::formula::nf::{dnf_clauses, nnf, DEFAULT_DNF_CAP};
use crate::formula::star::StarContext;
use crate::starmap::RationalFn;

use super::expr::Rat;

/// Solves a conjunctive graph for its outputs and prolongs the solution to
/// the jets of the context. Returns one map component per output jet and the
/// condition (side atoms, nonzero coefficients) where the map is defined.
pub fn jet_map(graph: &LDFormula, outputs: &[String], ctx: &StarContext) -> Result<(Vec<Rat>, LFormula)> {
    if !graph.is_quantifier_free() {
        return Err(Error::user("group graphs must be quantifier-free"));
    }
    let clauses = dnf_clauses(&nnf(graph), DEFAULT_DNF_CAP)?;
    let [clause] = clauses.as_slice() else {
        return Err(Error::user("a group graph must be a single conjunction"));
    };
    let is_out = |v: &JetVar| outputs.contains(&v.name);
    let mut side: Vec<LDFormula> = Vec::new();
    let mut solved: Vec<Option<RationalFn>> = vec![None; outputs.len()];
    for a in clause {
        let p = a.poly();
        let outs: Vec<JetVar> = p.vars().into_iter().filter(|v| is_out(v)).collect();
        match outs.as_slice() {
            [] => side.push(Formula::Atom(a.clone())),
            [v] if v.order == 0 && a.rel == Rel::Eq && p.degree_in(v) == 1 => {
                let c = p.coeff_in(v, 1);
                if c.vars().iter().any(|w| is_out(w)) {
                    return Err(Error::user("graph coefficient depends on an output"));
                }
                let i = outputs.iter().position(|o| *o == v.name).unwrap();
                if solved[i].is_some() {
                    return Err(Error::user(format!("output {} defined twice", v.name)));
                }
                let rest = p.coeff_in(v, 0);
                side.push(Formula::cmp0(c.clone(), Rel::Ne));
                solved[i] = Some(RationalFn::new(-rest, c));
            }
            _ => {
                return Err(Error::user(
                    "each output must be given explicitly by an equation linear in it, without derivatives",
                ))
            }
        }
    }
    let mut comps = Vec::new();
    for (o, f) in outputs.iter().zip(solved) {
        let mut f = f.ok_or_else(|| Error::user(format!("output {o} is not determined by the graph")))?;
        let m = ctx.orders[ctx.index_of(o).ok_or_else(|| Error::internal("output outside the context"))?];
        for j in 0..=m {
            let star = |p: &DiffPoly| {
                ctx.star_poly(p).map_err(|_| {
                    Error::user(format!("the jet {o}^({j}) needs derivatives beyond the context order {m}"))
                })
            };
            comps.push(Rat::new(star(&f.num)?, star(&f.den)?));
            f = f.derive();
        }
    }
    let side = ctx.star(&Formula::and(side))?;
    Ok((comps, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse;
    use crate::formula::render::{formula_to_string, poly_to_string};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reciprocal_and_its_derivative() {
        let ctx = StarContext::new(names(&["x", "y"]), vec![1, 1]);
        let (m, side) = jet_map(&parse("x*y = 1").unwrap(), &names(&["y"]), &ctx).unwrap();
        assert_eq!(formula_to_string(&side), "x_0_0 != 0");
        assert_eq!(poly_to_string(&m[0].num), "1");
        assert_eq!(poly_to_string(&m[0].den), "x_0_0");
        assert_eq!(poly_to_string(&m[1].num), "-x_0_1");
        assert_eq!(poly_to_string(&m[1].den), "x_0_0^2");
    }

    #[test]
    fn implicit_graphs_are_rejected() {
        let ctx = StarContext::new(names(&["x", "y"]), vec![0, 0]);
        assert!(jet_map(&parse("y^2 = x").unwrap(), &names(&["y"]), &ctx).is_err());
        assert!(jet_map(&parse("y = x | y = -x").unwrap(), &names(&["y"]), &ctx).is_err());
    }
}
