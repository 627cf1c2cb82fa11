//! Star sets: cells of the algebraic translation in which differential jets
//! are dense, with prolongation functions, t-dim, uniform finiteness bounds
//! and star lifts of definable functions.

pub mod build;
pub mod density;
pub mod dim;
pub mod function;
pub mod rational;

use serde_json::{json, Value};

use crate::algebra::diff::{DiffPoly, JetVar};
use crate::cad::decompose::Cell;
use crate::cad::qe::RootFunction;
use crate::formula::ast::{LDFormula, LFormula};
use crate::formula::render::{formula_to_string, poly_to_string};
use crate::formula::star::StarContext;

pub use build::{build_star, build_star_in};
pub use density::{density_check, DensityReport};
pub use dim::{t_dim, uf_bound};
pub use function::{build_star_function, Piece, StarFunction};
pub use rational::RationalFn;

/// `target = num / den` on the cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Prolongation {
    pub g: RationalFn,
    pub target: JetVar,
    /// (variable index, jet order) in the star context.
    pub target_jet: (usize, u32),
}

/// The differential polynomial whose regular zeros carry the jets of one
/// variable on the cell.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularWitness {
    pub var: String,
    pub p: DiffPoly,
    pub separant: DiffPoly,
}

#[derive(Clone, Debug)]
pub struct StarCell {
    pub base: Cell,
    /// Index of the disjunct of the normal form the cell came from.
    pub clause: usize,
    pub open_coords: Vec<String>,
    pub skolem: Vec<RootFunction>,
    pub prolongations: Vec<Prolongation>,
    pub regular_witness: Vec<RegularWitness>,
}

/// A true cell the pipeline could not justify; left out of the star set.
#[derive(Clone, Debug)]
pub struct Excluded {
    pub clause: usize,
    pub description: LFormula,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct StarSet {
    pub source: LDFormula,
    pub context: StarContext,
    pub cells: Vec<StarCell>,
    pub excluded: Vec<Excluded>,
}

pub fn root_function_json(r: &RootFunction) -> Value {
    json!({
        "polynomial": poly_to_string(&r.polynomial),
        "variable": r.variable,
        "root_index": r.root_index,
        "root_count": r.root_count,
        "domain": formula_to_string(&r.domain),
    })
}

fn witness_json(w: &RegularWitness) -> Value {
    json!({"var": w.var, "p": poly_to_string(&w.p), "separant": poly_to_string(&w.separant)})
}

impl StarCell {
    pub fn to_json(&self) -> Value {
        let witness = match self.regular_witness.as_slice() {
            [w] => witness_json(w),
            ws => Value::Array(ws.iter().map(witness_json).collect()),
        };
        json!({
            "index": self.base.index,
            "dim": self.base.dim,
            "sample": self.base.sample.to_json(),
            "description": formula_to_string(&self.base.description),
            "open_coords": self.open_coords,
            "skolem": self.skolem.iter().map(root_function_json).collect::<Vec<_>>(),
            "prolongations": self.prolongations.iter().map(|p| json!({
                "num": poly_to_string(&p.g.num),
                "den": poly_to_string(&p.g.den),
                "target_jet": [p.target_jet.0, p.target_jet.1],
            })).collect::<Vec<_>>(),
            "regular_witness": witness,
        })
    }
}

impl StarSet {
    pub fn to_json(&self) -> Value {
        json!({
            "source": formula_to_string(&self.source),
            "context": {"vars": self.context.vars, "orders": self.context.orders, "coords": self.context.coords()},
            "cells": self.cells.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "excluded": self.excluded.iter().map(|e| json!({
                "clause": e.clause,
                "description": formula_to_string(&e.description),
                "reason": e.reason,
            })).collect::<Vec<_>>(),
        })
    }

    /// Union of the cell descriptions.
    pub fn formula(&self) -> LFormula {
        LFormula::or(self.cells.iter().map(|c| c.base.description.clone()).collect())
    }
}
