//! Executable density check: lift a cell's sample point to a power-series
//! solution of its regular witness and test the lifted jet against the cell.

use std::collections::HashMap;

use num_traits::Zero;

use super::{StarCell, StarSet};
use crate::algebra::diff::{order, JetVar};
use crate::algebra::rat::Q;
use crate::dlwitness::{lift_jet, JetSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DensityReport {
    pub series: JetSeries,
    /// Order of the witness polynomial.
    pub order: usize,
    pub satisfies_description: bool,
    /// One flag per prolongation: g evaluated at the lifted jet equals the
    /// lifted derivative.
    pub prolongations_agree: Vec<bool>,
}

impl DensityReport {
    pub fn passed(&self, k: usize) -> bool {
        let residual_ok = match self.series.residual_order {
            None => true,
            Some(r) => r + self.order >= k + 1,
        };
        self.satisfies_description && residual_ok && self.prolongations_agree.iter().all(|b| *b)
    }
}

/// Lifts the sample of a single-variable cell to order `k`. Needs a rational
/// sample point.
pub fn density_check(set: &StarSet, cell: &StarCell, k: usize) -> Result<DensityReport> {
    let ctx = &set.context;
    if ctx.vars.len() != 1 {
        return Err(Error::user("density check handles one differential variable"));
    }
    let name = &ctx.vars[0];
    let m = ctx.orders[0] as usize;
    let sample = cell
        .base
        .sample
        .rational_coords()
        .ok_or_else(|| Error::user("density check needs a rational sample point"))?;
    let w = &cell.regular_witness[0];
    let r = order(&w.p, name).ok_or_else(|| Error::internal("witness without the variable"))? as usize;
    let mut alpha: Vec<Q> = sample.iter().take(r + 1).cloned().collect();
    alpha.resize(r + 1, Q::zero());
    let series = lift_jet(&w.p, &alpha, k.max(m + 1))?;
    let derivs = series.derivatives();
    let point: HashMap<String, Q> = ctx.coords().into_iter().zip(derivs.iter().cloned()).collect();
    let satisfies_description = cell.base.description.eval_qf(&point).unwrap_or(false);
    let jets: HashMap<JetVar, Q> =
        derivs.iter().enumerate().map(|(j, x)| (JetVar::new(name, j as u32), x.clone())).collect();
    let prolongations_agree = cell
        .prolongations
        .iter()
        .map(|p| match p.g.eval(&jets) {
            Ok(Some(v)) => derivs.get(p.target.order as usize) == Some(&v),
            _ => false,
        })
        .collect();
    Ok(DensityReport { series, order: r, satisfies_description, prolongations_agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cad::lift::CadOptions;
    use crate::formula::parse::parse;
    use crate::starmap::build_star;

    #[test]
    fn catalog_cells_lift() {
        for s in ["x > 0", "D(x) = 0", "x' = x & x > 0", "x'' = 0", "x*x' = 1 & x > 0"] {
            let set = build_star(&parse(s).unwrap(), &[], &CadOptions::default()).unwrap();
            assert!(!set.cells.is_empty(), "{s}");
            for c in &set.cells {
                let r = density_check(&set, c, 8).unwrap();
                assert!(r.passed(8), "{s}: {r:?}");
            }
        }
    }
}
