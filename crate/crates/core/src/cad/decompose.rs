//! Sign-invariant decompositions with cell descriptions.

use serde_json::{json, Value};

use super::engine::{check_budget, formula_from_m, full_cad, label_formulas, to_mpoly};
use super::field::SamplePoint;
use super::lift::CadOptions;
use super::mpoly::MPoly;
use crate::algebra::diff::AlgPoly;
use crate::algebra::rat::Q;
use crate::error::Result;
use crate::formula::ast::LFormula;
use crate::formula::render::formula_to_string;

#[derive(Clone, Debug)]
pub struct Cell {
    /// 0 = section, 1 = sector, per coordinate.
    pub index: Vec<u8>,
    pub dim: usize,
    pub sample: SamplePoint,
    pub description: LFormula,
}

impl Cell {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "dim": self.dim,
            "sample": self.sample.to_json(),
            "description": formula_to_string(&self.description),
        })
    }

    /// Membership of a rational point, by the description.
    pub fn contains(&self, point: &[Q], vars: &[String]) -> bool {
        let m: std::collections::HashMap<String, Q> = vars.iter().cloned().zip(point.iter().cloned()).collect();
        self.description.eval_qf(&m).unwrap_or(false)
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: usize,
    pub vars: Vec<String>,
    pub cells: Vec<Cell>,
}

impl Decomposition {
    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "cells": self.cells.iter().map(|c| c.to_json()).collect::<Vec<_>>()})
    }

    /// Indices of cells whose description holds at the point.
    pub fn locate(&self, point: &[Q]) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].contains(point, &self.vars)).collect()
    }
}

/// Sign-invariant CAD of `polys` over `vars` (variable order as given).
pub fn decompose(polys: &[AlgPoly], vars: &[String], opts: &CadOptions) -> Result<Decomposition> {
    let ms: Vec<MPoly> = polys.iter().map(|p| to_mpoly(p, vars)).collect::<Result<_>>()?;
    let n = vars.len();
    check_budget(&ms, n, opts)?;
    if n == 0 {
        let cell = Cell { index: vec![], dim: 0, sample: SamplePoint::origin(), description: LFormula::True };
        return Ok(Decomposition { n, vars: vec![], cells: vec![cell] });
    }
    let cad = full_cad(&ms, n, opts)?;
    let leaves = cad.levels[n - 1].len();
    let labels: Vec<usize> = (0..leaves).collect();
    let descs = label_formulas(&cad, n, &labels, opts)?;
    let cells = (0..leaves)
        .map(|i| Cell {
            index: cad.index(n - 1, i),
            dim: cad.dim(n - 1, i),
            sample: cad.levels[n - 1][i].sample.clone(),
            description: formula_from_m(&descs[&i], vars),
        })
        .collect();
    Ok(Decomposition { n, vars: vars.to_vec(), cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{q, qf};
    use crate::formula::parse::parse_alg_poly as parse_poly;

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn line_has_three_cells() {
        let d = decompose(&[parse_poly("x").unwrap()], &vars(&["x"]), &CadOptions::default()).unwrap();
        assert_eq!(d.cells.len(), 3);
        let idx: Vec<Vec<u8>> = d.cells.iter().map(|c| c.index.clone()).collect();
        assert_eq!(idx, vec![vec![1], vec![0], vec![1]]);
        let descs: Vec<String> = d.cells.iter().map(|c| formula_to_string(&c.description)).collect();
        assert_eq!(descs, vec!["x < 0", "x = 0", "x > 0"]);
    }

    #[test]
    fn empty_input_single_cell() {
        let d = decompose(&[], &vars(&["x", "y"]), &CadOptions::default()).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].dim, 2);
        assert_eq!(d.cells[0].description, LFormula::True);
    }

    #[test]
    fn circle_descriptions_partition() {
        let d = decompose(&[parse_poly("x^2 + y^2 - 1").unwrap()], &vars(&["x", "y"]), &CadOptions::default()).unwrap();
        assert_eq!(d.cells.len(), 13);
        for (a, b) in [(q(0), q(0)), (q(1), q(0)), (q(-1), q(0)), (q(3), qf(1, 2)), (qf(3, 5), qf(4, 5)), (qf(-1, 2), q(5))] {
            assert_eq!(d.locate(&[a, b]).len(), 1);
        }
    }
}
