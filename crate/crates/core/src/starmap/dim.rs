//! t-dim of differential definable sets and uniform fiber bounds.

use super::build::build_star;
use crate::cad::engine::{atom_polys, cells_at, check_budget, formula_to_m, full_cad, leaves_below};
use crate::cad::lift::CadOptions;
use crate::cad::qe::{dimension, leaf_truth, qe};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LDFormula};
use crate::formula::star::StarContext;

/// Largest k such that the jets of some k of the variables project S* onto a
/// set with interior; −1 for the empty set.
pub fn t_dim(phi: &LDFormula, vars: &[String], opts: &CadOptions) -> Result<i64> {
    let set = build_star(phi, vars, opts)?;
    if set.cells.is_empty() {
        return Ok(-1);
    }
    let ctx = &set.context;
    let n = ctx.vars.len();
    for k in (1..=n).rev() {
        for mask in (0u32..1 << n).filter(|m| m.count_ones() as usize == k) {
            let keep: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let kept: Vec<String> = keep
                .iter()
                .flat_map(|&i| (0..=ctx.orders[i]).map(move |j| (i, j)))
                .map(|(i, j)| crate::formula::star::flat_jet_name(&ctx.vars[i], i, j))
                .collect();
            let dropped: Vec<String> = ctx.coords().into_iter().filter(|c| !kept.contains(c)).collect();
            for cell in &set.cells {
                let d = if dropped.is_empty() {
                    cell.base.dim as i64
                } else {
                    let proj = qe(&Formula::exists(dropped.clone(), cell.base.description.clone()), opts)?;
                    dimension(&proj, &kept, opts)?
                };
                if d == kept.len() as i64 {
                    return Ok(k as i64);
                }
            }
        }
    }
    Ok(0)
}

/// Bound on the size of every finite fiber {x : φ(x, ā)}: the most sections
/// in the x₀ direction carrying true cells over one parameter cell, counted
/// over parameter cells without a true sector in that direction.
pub fn uf_bound(phi: &LDFormula, x: &str, params: &[String], opts: &CadOptions) -> Result<usize> {
    if !phi.is_quantifier_free() {
        return Err(Error::user("uf_bound needs a quantifier-free formula"));
    }
    if params.iter().any(|p| p == x) {
        return Err(Error::user("object variable listed as a parameter"));
    }
    let mut order: Vec<String> = params.to_vec();
    order.push(x.to_string());
    for v in phi.free_vars() {
        if !order.contains(&v) {
            return Err(Error::user(format!("variable {v} is neither the object variable nor a parameter")));
        }
    }
    let ctx = StarContext::with_order(phi, &order);
    let coords = ctx.coords();
    let star = ctx.star(phi)?;
    let fm = formula_to_m(&star, &coords)?;
    let polys = atom_polys(&fm);
    check_budget(&polys, coords.len(), opts)?;
    let mut cad = full_cad(&polys, coords.len(), opts)?;
    let truth = leaf_truth(&mut cad, &fm);
    let f = coords.len() - (*ctx.orders.last().unwrap() as usize + 1);
    let mut best = 0;
    for pc in 0..cells_at(&cad, f) {
        let children: Vec<usize> =
            if f == 0 { (0..cad.levels[0].len()).collect() } else { cad.levels[f - 1][pc].children.clone() };
        let mut count = 0;
        let mut infinite = false;
        for c in children {
            if !leaves_below(&cad, f + 1, c).iter().any(|&l| truth[l]) {
                continue;
            }
            if cad.levels[f][c].is_sector() {
                infinite = true;
            } else {
                count += 1;
            }
        }
        if !infinite {
            best = best.max(count);
        }
    }
    Ok(best)
}
