//! Star lifts of definable functions given by their graphs.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::build::build_star_in;
use super::{root_function_json, StarSet};
use crate::algebra::diff::AlgPoly;
use crate::algebra::upoly::UPoly;
use crate::cad::field::Field;
use crate::cad::lift::CadOptions;
use crate::cad::qe::{dimension, find_point, is_large, qe, skolem_roots, RootFunction};
use crate::cad::roots::isolate;
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LFormula, LDFormula, Rel};
use crate::formula::nf::{dnf_clauses, nnf, DEFAULT_DNF_CAP};
use crate::formula::render::{formula_to_string, poly_to_string};
use crate::formula::star::StarContext;

/// f* on one star cell of the domain: a root of a polynomial in the value
/// coordinate, with its closed form when the polynomial is linear.
#[derive(Clone, Debug)]
pub struct Piece {
    pub cell: usize,
    pub root: RootFunction,
    pub rational: Option<(AlgPoly, AlgPoly)>,
}

#[derive(Clone, Debug)]
pub struct StarFunction {
    pub domain: StarSet,
    pub value: String,
    pub pieces: Vec<Piece>,
}

impl StarFunction {
    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.domain.to_json(),
            "value": self.value,
            "pieces": self.pieces.iter().map(|p| json!({
                "cell": p.cell,
                "root": root_function_json(&p.root),
                "rational": p.rational.as_ref().map(|(n, d)| json!({"num": poly_to_string(n), "den": poly_to_string(d)})),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Star lift of the function whose graph is φ(x̄, y); `y` must occur without
/// derivatives. Functionality on differential points is the caller's claim.
pub fn build_star_function(graph: &LDFormula, xs: &[String], y: &str, opts: &CadOptions) -> Result<StarFunction> {
    if !graph.is_quantifier_free() {
        return Err(Error::user("the graph must be quantifier-free"));
    }
    let mut vars = xs.to_vec();
    vars.push(y.to_string());
    for v in graph.free_vars() {
        if !vars.contains(&v) {
            return Err(Error::user(format!("variable {v} is neither an argument nor the value")));
        }
    }
    let full = StarContext::with_order(graph, &vars);
    if *full.orders.last().unwrap() > 0 {
        return Err(Error::user(format!("the value variable {y} must occur without derivatives")));
    }
    let dom_ctx = StarContext::new(xs.to_vec(), full.orders[..xs.len()].to_vec());
    let xcoords = dom_ctx.coords();
    let yc = full.coords().pop().unwrap();
    let star = full.star(graph)?;
    let projected = qe(&Formula::exists(vec![yc.clone()], star.clone()), opts)?;
    let domain = build_star_in(&dom_ctx.unstar(&projected)?, &dom_ctx, opts)?;
    let clauses = dnf_clauses(&nnf(&star), DEFAULT_DNF_CAP)?;
    let mut pieces = Vec::new();
    for (ci, cell) in domain.cells.iter().enumerate() {
        let here = &cell.base.description;
        for clause in &clauses {
            let body = Formula::and(clause.iter().cloned().map(Formula::Atom).collect());
            let on_cell = Formula::and(vec![here.clone(), qe(&Formula::exists(vec![yc.clone()], body.clone()), opts)?]);
            if dimension(&on_cell, &xcoords, opts)? < 0 {
                continue;
            }
            let eq = clause
                .iter()
                .filter(|a| a.rel == Rel::Eq)
                .map(|a| a.poly())
                .filter(|p| p.degree_in(&yc) > 0)
                .min_by_key(|p| (p.degree_in(&yc), p.num_terms()));
            let Some(p) = eq else {
                if dimension(&on_cell, &xcoords, opts)? >= cell.base.dim as i64 {
                    return Err(Error::user("fiber not generically finite"));
                }
                continue;
            };
            let nonnull = Formula::or(
                p.coeffs_in(&yc).into_iter().filter(|c| !c.is_zero()).map(|c| Formula::cmp0(c, Rel::Ne)).collect(),
            );
            let finite = Formula::and(vec![on_cell.clone(), nonnull]);
            if !is_large(&finite, &on_cell, &xcoords, opts)? {
                return Err(Error::user("fiber not generically finite"));
            }
            let rational = if p.degree_in(&yc) == 1 {
                Some((-p.coeff_in(&yc, 0), p.coeff_in(&yc, 1)))
            } else {
                None
            };
            for r in skolem_roots(&p, &yc, &xcoords, opts)? {
                if r.root_count == 0 {
                    continue;
                }
                let dom = Formula::and(vec![r.domain.clone(), finite.clone()]);
                let Some(pt) = find_point(&dom, &xcoords, opts)? else { continue };
                if root_satisfies(&r, &body, &xcoords, &pt) {
                    let root = RootFunction { domain: dom, ..r };
                    pieces.push(Piece { cell: ci, root, rational: rational.clone() });
                }
            }
        }
        let covered = Formula::or(pieces.iter().filter(|p| p.cell == ci).map(|p| p.root.domain.clone()).collect());
        let covered = Formula::and(vec![covered, here.clone()]);
        if !is_large(&covered, here, &xcoords, opts)? {
            return Err(Error::user(format!(
                "pieces do not cover a large part of cell {}",
                formula_to_string(here)
            )));
        }
    }
    Ok(StarFunction { domain, value: yc, pieces })
}

/// Whether the chosen root satisfies the clause above a rational point.
fn root_satisfies(r: &RootFunction, body: &LFormula, xs: &[String], pt: &[crate::algebra::rat::Q]) -> bool {
    let vals: HashMap<String, AlgPoly> =
        xs.iter().cloned().zip(pt.iter().map(|q| AlgPoly::constant(q.clone()))).collect();
    let spec = |p: &AlgPoly| UPoly::from_poly(&p.subst_many(&vals), &r.variable).unwrap_or_else(UPoly::zero);
    let p = spec(&r.polynomial);
    let roots = isolate(&p);
    let Some(root) = roots.get(r.root_index - 1) else { return false };
    let mut field = Field::from_root(&p, root);
    body.atoms().iter().all(|a| a.rel.holds(field.sign(&spec(&a.poly()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse;

    fn f(s: &str) -> StarFunction {
        build_star_function(&parse(s).unwrap(), &["x".to_string()], "y", &CadOptions::default()).unwrap()
    }

    #[test]
    fn square() {
        let g = f("y = x^2");
        assert_eq!(g.pieces.len(), 1);
        let (n, d) = g.pieces[0].rational.clone().unwrap();
        assert_eq!(poly_to_string(&n), "x_0_0^2");
        assert_eq!(poly_to_string(&d), "1");
    }

    #[test]
    fn derivative_is_a_jet_coordinate() {
        let g = f("y = x'");
        assert_eq!(g.pieces.len(), 1);
        assert_eq!(poly_to_string(&g.pieces[0].rational.clone().unwrap().0), "x_0_1");
    }

    #[test]
    fn reciprocal() {
        let g = f("x*y = 1");
        assert_eq!(g.pieces.len(), 2);
        for p in &g.pieces {
            assert_eq!(poly_to_string(&p.root.polynomial), "y_1_0*x_0_0 - 1");
            assert_eq!((p.root.root_index, p.root.root_count), (1, 1));
        }
    }

    #[test]
    fn positive_square_root_picks_one_root() {
        let g = f("y^2 = x & y > 0");
        assert_eq!(g.pieces.len(), 1);
        assert_eq!(g.pieces[0].root.root_index, 2);
    }

    #[test]
    fn relation_with_open_fibers_is_rejected() {
        let e = build_star_function(&parse("y > x").unwrap(), &["x".to_string()], "y", &CadOptions::default());
        assert_eq!(e.unwrap_err().to_string(), "fiber not generically finite");
    }
}
