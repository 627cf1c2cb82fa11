//! Shared machinery: variable maps, truth evaluation at samples, and formulas
//! distinguishing labelled cells.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use super::describe::describe_groups;
use super::field::SamplePoint;
use super::lift::{Cad, CadOptions};
use super::mpoly::MPoly;
use super::project::project;
use crate::algebra::diff::AlgPoly;
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LFormula};

pub fn to_mpoly(p: &AlgPoly, vars: &[String]) -> Result<MPoly> {
    p.try_map_vars(|v| vars.iter().position(|w| w == v).ok_or_else(|| Error::User(format!("variable {v} not in the variable list"))))
}

pub fn from_mpoly(p: &MPoly, vars: &[String]) -> AlgPoly {
    p.map_vars(|i| vars[*i].clone())
}

pub fn formula_to_m(f: &LFormula, vars: &[String]) -> Result<Formula<MPoly>> {
    for v in f.poly_vars() {
        if !vars.contains(&v) {
            return Err(Error::User(format!("variable {v} not in the variable list")));
        }
    }
    Ok(f.map_vars(&|v: &String| vars.iter().position(|w| w == v).unwrap()))
}

pub fn formula_from_m(f: &Formula<MPoly>, vars: &[String]) -> LFormula {
    f.map_vars(&|i: &usize| vars[*i].clone())
}

/// Truth of a quantifier-free formula at a sample point.
pub fn eval_at(f: &Formula<MPoly>, s: &mut SamplePoint) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => {
            let p = a.poly();
            a.rel.holds(s.sign(&p))
        }
        Formula::Not(g) => !eval_at(g, s),
        Formula::And(gs) => gs.iter().all(|g| eval_at(g, s)),
        Formula::Or(gs) => gs.iter().any(|g| eval_at(g, s)),
        Formula::Exists(..) | Formula::Forall(..) => panic!("quantified formula at a sample point"),
    }
}

/// Polynomials of the atoms (lhs − rhs).
pub fn atom_polys(f: &Formula<MPoly>) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = Vec::new();
    for a in f.atoms() {
        let p = a.poly();
        if !p.is_constant() && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn check_budget(polys: &[MPoly], n: usize, opts: &CadOptions) -> Result<()> {
    if n > opts.max_vars {
        return Err(Error::Resource(format!("{n} variables exceed the budget of {}", opts.max_vars)));
    }
    if polys.len() > opts.max_polys {
        return Err(Error::Resource(format!("{} polynomials exceed the budget of {}", polys.len(), opts.max_polys)));
    }
    if let Some(d) = polys.iter().map(|p| p.total_degree()).max() {
        if d > opts.max_degree {
            return Err(Error::Resource(format!("total degree {d} exceeds the budget of {}", opts.max_degree)));
        }
    }
    Ok(())
}

/// Full decomposition for the given polynomials in n variables.
pub fn full_cad(polys: &[MPoly], n: usize, opts: &CadOptions) -> Result<Cad> {
    Cad::build(project(polys, n, false), n, None, opts)
}

/// Cells of level `depth - 1` (the root when depth is 0).
pub fn cells_at(cad: &Cad, depth: usize) -> usize {
    if depth == 0 {
        1
    } else {
        cad.levels[depth - 1].len()
    }
}

/// Leaves below a cell of level `depth - 1`.
pub fn leaves_below(cad: &Cad, depth: usize, idx: usize) -> Vec<usize> {
    let n = cad.depth();
    if depth == 0 {
        return (0..cad.levels[n - 1].len()).collect();
    }
    cad.descendants(depth - 1, idx, n - 1)
}

/// One formula per distinct label over the cells of level `depth - 1`, each
/// true exactly on the union of the cells carrying that label. Falls back to a
/// derivative-closed refinement when sign vectors do not separate the labels.
pub fn label_formulas<L: Clone + Eq + Hash + Ord>(
    cad: &Cad,
    depth: usize,
    labels: &[L],
    opts: &CadOptions,
) -> Result<BTreeMap<L, Formula<MPoly>>> {
    let mut out = BTreeMap::new();
    if depth == 0 {
        out.insert(labels[0].clone(), Formula::True);
        return Ok(out);
    }
    let level = depth - 1;
    let mut seen: HashMap<Vec<i8>, L> = HashMap::new();
    let mut clash = false;
    for (i, l) in labels.iter().enumerate() {
        let v = cad.sign_vector(level, i);
        match seen.get(&v) {
            Some(m) if m != l => clash = true,
            _ => {
                seen.insert(v, l.clone());
            }
        }
    }
    let (factors, pairs): (Vec<MPoly>, Vec<(Vec<i8>, L)>) = if !clash {
        (cad.factors(depth), seen.into_iter().collect())
    } else {
        let orig = cad.factors(depth);
        let proj = project(&orig, depth, true);
        let marks: Vec<Vec<bool>> =
            proj.levels.iter().enumerate().map(|(k, fs)| fs.iter().map(|f| cad.proj.levels[k].contains(f)).collect()).collect();
        let thom = Cad::build(proj, depth, Some(marks), opts)?;
        let by_path: HashMap<Vec<usize>, usize> = (0..labels.len()).map(|i| (cad.path(level, i), i)).collect();
        let mut seen: HashMap<Vec<i8>, L> = HashMap::new();
        for j in 0..thom.levels[level].len() {
            let op = thom.orig_path(level, j);
            let i = *by_path.get(&op).ok_or_else(|| Error::Internal("refined cell has no parent cell".into()))?;
            let v = thom.sign_vector(level, j);
            if let Some(m) = seen.get(&v) {
                if *m != labels[i] {
                    return Err(Error::Internal("sign conditions do not separate cells after refinement".into()));
                }
            }
            seen.insert(v, labels[i].clone());
        }
        (thom.factors(depth), seen.into_iter().collect())
    };
    let mut keys: Vec<L> = pairs.iter().map(|(_, l)| l.clone()).collect();
    keys.sort();
    keys.dedup();
    let mut groups: Vec<Vec<Vec<i8>>> = vec![Vec::new(); keys.len()];
    let mut sorted = pairs;
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for (v, l) in sorted {
        let g = keys.iter().position(|k| *k == l).unwrap();
        groups[g].push(v);
    }
    let fs = describe_groups(&groups, &factors);
    for (k, f) in keys.into_iter().zip(fs) {
        out.insert(k, f);
    }
    Ok(out)
}
