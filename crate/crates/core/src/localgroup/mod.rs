//! Local groups carved out of definable groups, and checkers for the local
//! group, sublocal group and normality axioms.
//!
//! Elements of an N-coordinate local group live in copies of the jet space:
//! `x`, `y`, `z` are the copies used by the graphs, further copies are named
//! `a{t}_{c}`. Operations are rational maps in those coordinates.

mod carve;
mod check;
pub mod decide;
pub mod expr;
pub mod graph;
mod neighbourhoods;

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::rat::{parse as parse_q, render, Q};
use crate::error::{Error, Result};
use crate::formula::ast::{LDFormula, LFormula};
use crate::formula::parse::parse;
use crate::formula::render::{formula_to_string, poly_to_string};
use crate::formula::star::StarContext;

pub use carve::carve_local_group;
pub use check::{check_local_group, check_normal_sublocal, check_sublocal, equivalence_on_w, Equivalence};
pub use decide::Verdict;
pub use neighbourhoods::{build_product_neighbourhoods, MAX_DEPTH};

use expr::{apply, apply_formula, constants, rename, vars_of, Rat};

/// An `is_large(large, within)` claim made during carving.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub claim: String,
    pub large: LFormula,
    pub within: LFormula,
    pub vars: Vec<String>,
    pub holds: bool,
}

impl Certificate {
    pub fn recheck(&self, opts: &crate::cad::lift::CadOptions) -> Result<bool> {
        crate::cad::qe::is_large(&self.large, &self.within, &self.vars, opts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "claim": self.claim,
            "large": formula_to_string(&self.large),
            "within": formula_to_string(&self.within),
            "holds": self.holds,
        })
    }
}

#[derive(Clone, Debug)]
pub struct LocalGroupData {
    /// Jet context over the graph variables of the three copies.
    pub context: StarContext,
    /// Group components (graph variables of the first copy).
    pub components: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub h: LFormula,
    pub u: LFormula,
    /// Over the coordinates of `x` followed by `y`.
    pub o: LFormula,
    /// Over `x`.
    pub inv: Vec<Rat>,
    /// Over `x` followed by `y`.
    pub mul: Vec<Rat>,
    pub identity: Vec<Q>,
    pub certificates: Vec<Certificate>,
}

impl LocalGroupData {
    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Coordinates of copy `t` (0, 1, 2 are `x`, `y`, `z`).
    pub fn copy(&self, t: usize) -> Vec<String> {
        match t {
            0 => self.x.clone(),
            1 => self.y.clone(),
            2 => self.z.clone(),
            _ => (0..self.dim()).map(|c| format!("a{t}_{c}")).collect(),
        }
    }

    pub fn xy(&self) -> Vec<String> {
        [self.x.clone(), self.y.clone()].concat()
    }

    pub fn one(&self) -> Vec<Rat> {
        constants(&self.identity)
    }

    pub fn var(&self, t: usize) -> Vec<Rat> {
        vars_of(&self.copy(t))
    }

    pub fn mul_at(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        apply(&self.mul, &self.xy(), &[a, b].concat())
    }

    pub fn inv_at(&self, a: &[Rat]) -> Vec<Rat> {
        apply(&self.inv, &self.x, a)
    }

    /// A formula over `x` evaluated at a tuple.
    pub fn at(&self, f: &LFormula, a: &[Rat]) -> LFormula {
        apply_formula(f, &self.x, a)
    }

    /// A formula over `x`, `y` evaluated at a pair of tuples.
    pub fn at2(&self, f: &LFormula, a: &[Rat], b: &[Rat]) -> LFormula {
        apply_formula(f, &self.xy(), &[a, b].concat())
    }

    /// A formula over `x` moved to copy `t`.
    pub fn on(&self, f: &LFormula, t: usize) -> LFormula {
        rename(f, &self.x, &self.copy(t))
    }

    pub fn point(&self, values: &[Q]) -> HashMap<String, Q> {
        self.x.iter().cloned().zip(values.iter().cloned()).collect()
    }

    pub fn to_json(&self) -> Value {
        let map = |m: &[Rat]| {
            m.iter().map(|r| json!({"num": poly_to_string(&r.num), "den": poly_to_string(&r.den)})).collect::<Vec<_>>()
        };
        json!({
            "coordinates": self.x,
            "pair_coordinates": self.xy(),
            "H": formula_to_string(&self.h),
            "U": formula_to_string(&self.u),
            "O": formula_to_string(&self.o),
            "inv": map(&self.inv),
            "mul": map(&self.mul),
            "identity": self.identity.iter().map(render).collect::<Vec<_>>(),
            "certificates": self.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SublocalData {
    /// Over the coordinates `x` of the ambient local group.
    pub h0: LFormula,
    pub v: LFormula,
}

impl SublocalData {
    /// Star translations of differential formulas in the graph variables of `x`.
    pub fn from_formulas(data: &LocalGroupData, h0: &LDFormula, v: Option<&LDFormula>) -> Result<Self> {
        let ctx = element_context(data);
        let h0 = ctx.star(h0)?;
        let v = match v {
            Some(v) => ctx.star(v)?,
            None => data.h.clone(),
        };
        Ok(SublocalData { h0, v })
    }
}

fn element_context(data: &LocalGroupData) -> StarContext {
    let k = data.components;
    StarContext::new(data.context.vars[..k].to_vec(), data.context.orders[..k].to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomEntry {
    pub name: String,
    pub status: Status,
    pub witness: Option<Vec<(String, Q)>>,
    /// Which part of the axiom failed, or why it is undecided.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn get(&self, name: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.get(name).map(|e| e.status)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.name.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    let mut o = json!({"name": e.name, "status": e.status.as_str()});
                    if let Some(w) = &e.witness {
                        o["witness"] = w.iter().map(|(k, v)| (k.clone(), Value::String(render(v)))).collect();
                    }
                    if let Some(d) = &e.detail {
                        o["detail"] = Value::String(d.clone());
                    }
                    o
                })
                .collect(),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}: {}", e.name, e.status.as_str()));
            if let Some(d) = &e.detail {
                out.push_str(&format!(" ({d})"));
            }
            if let Some(w) = &e.witness {
                let pts: Vec<String> = w.iter().map(|(k, v)| format!("{k} = {}", render(v))).collect();
                out.push_str(&format!(" at {}", pts.join(", ")));
            }
            out.push('\n');
        }
        out
    }
}

/// One canned change to a catalog group and the axioms it is meant to break.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub name: String,
    pub inv: Option<LDFormula>,
    pub mul: Option<LDFormula>,
    pub identity: Option<Vec<Q>>,
    /// Pairs removed from O, in the graph variables of `x` and `y`.
    pub o_exclude: Option<LDFormula>,
    pub intended: Vec<String>,
}

/// A group-data file.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub domain: LDFormula,
    pub mul: LDFormula,
    pub inv: LDFormula,
    pub identity: Vec<Q>,
    /// Minimal jet order of the elements.
    pub order: u32,
    pub mutations: Vec<Mutation>,
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a str> {
    v.get(k).and_then(|s| s.as_str()).ok_or_else(|| Error::user(format!("missing string field \"{k}\"")))
}

fn rationals(v: &Value) -> Result<Vec<Q>> {
    let arr = v.as_array().ok_or_else(|| Error::user("identity must be an array"))?;
    arr.iter()
        .map(|x| match x {
            Value::String(s) => parse_q(s).ok_or_else(|| Error::user(format!("bad rational {s}"))),
            Value::Number(n) => parse_q(&n.to_string()).ok_or_else(|| Error::user(format!("bad rational {n}"))),
            _ => Err(Error::user("identity entries must be rationals")),
        })
        .collect()
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::user(format!("group file: {e}")))?;
        let identity = rationals(v.get("identity").ok_or_else(|| Error::user("missing field \"identity\""))?)?;
        let mut mutations = Vec::new();
        for m in v.get("mutations").and_then(|m| m.as_array()).into_iter().flatten() {
            let opt = |k: &str| -> Result<Option<LDFormula>> { m.get(k).and_then(|s| s.as_str()).map(parse).transpose() };
            mutations.push(Mutation {
                name: field(m, "name")?.to_string(),
                inv: opt("inv")?,
                mul: opt("mul")?,
                identity: m.get("identity").map(rationals).transpose()?,
                o_exclude: opt("o_exclude")?,
                intended: m
                    .get("intended")
                    .and_then(|a| a.as_array())
                    .map(|a| a.iter().filter_map(|s| s.as_str().map(String::from)).collect())
                    .unwrap_or_default(),
            });
        }
        Ok(GroupSpec {
            domain: parse(field(&v, "domain")?)?,
            mul: parse(field(&v, "mul")?)?,
            inv: parse(field(&v, "inv")?)?,
            identity,
            order: v.get("order").and_then(|o| o.as_u64()).unwrap_or(0) as u32,
            mutations,
        })
    }

    pub fn carve(&self, opts: &crate::cad::lift::CadOptions) -> Result<LocalGroupData> {
        carve_local_group(&self.domain, &self.mul, &self.inv, &self.identity, self.order, opts)
    }
}

/// Worked examples shipped with the crate.
pub fn catalog() -> Vec<(&'static str, GroupSpec)> {
    [
        ("additive", include_str!("../../data/groups/additive.json")),
        ("multiplicative", include_str!("../../data/groups/multiplicative.json")),
        ("constants", include_str!("../../data/groups/constants.json")),
        ("triangular", include_str!("../../data/groups/triangular.json")),
    ]
    .into_iter()
    .map(|(n, t)| (n, GroupSpec::from_json(t).expect("catalog file parses")))
    .collect()
}

/// Graph variable names of one copy: `x` or `x1..xk`.
pub fn graph_vars(letter: char, k: usize) -> Vec<String> {
    if k == 1 {
        vec![letter.to_string()]
    } else {
        (1..=k).map(|i| format!("{letter}{i}")).collect()
    }
}

/// Applies a mutation to carved data, translating graphs in the data's context.
pub fn mutate(data: &LocalGroupData, m: &Mutation) -> Result<LocalGroupData> {
    let mut out = data.clone();
    let k = data.components;
    if let Some(id) = &m.identity {
        out.identity = identity_jet(id, k, data.dim())?;
    }
    if let Some(g) = &m.inv {
        out.inv = graph::jet_map(g, &graph_vars('y', k), &data.context)?.0;
    }
    if let Some(g) = &m.mul {
        out.mul = graph::jet_map(g, &graph_vars('z', k), &data.context)?.0;
    }
    if let Some(g) = &m.o_exclude {
        let ex = data.context.star(g)?;
        out.o = crate::formula::ast::Formula::and(vec![out.o.clone(), crate::formula::ast::Formula::not(ex)]);
    }
    Ok(out)
}

/// Expands per-component values to the jet of a constant element.
pub fn identity_jet(values: &[Q], k: usize, n: usize) -> Result<Vec<Q>> {
    if values.len() == n {
        return Ok(values.to_vec());
    }
    if values.len() != k {
        return Err(Error::user(format!("identity needs {k} values (or {n} jet coordinates)")));
    }
    let per = n / k;
    let mut out = Vec::with_capacity(n);
    for v in values {
        out.push(v.clone());
        out.extend(std::iter::repeat(Q::zero()).take(per - 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
