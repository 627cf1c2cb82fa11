//! Decision helpers: truth-set descriptions, fiberwise largeness and
//! universal sentences with concrete counterexamples.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::diff::AlgPoly;
use crate::algebra::rat::{qf, Q};
use crate::cad::engine::{atom_polys, cells_at, check_budget, formula_to_m, full_cad, leaves_below};
use crate::cad::lift::CadOptions;
use crate::cad::qe::{bool_formula, dimension, find_point, leaf_truth, tidy};
use crate::error::{Error, Result};
use crate::formula::ast::{Atom, Formula, LFormula, Rel};
use crate::formula::nf::{dnf_clauses, Clause, DEFAULT_DNF_CAP};

/// Outcome of a universal sentence.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Holds,
    Fails(Vec<(String, Q)>),
    Undecided(String),
}

fn present(f: &LFormula, vars: &[String]) -> Vec<String> {
    let pv = f.poly_vars();
    vars.iter().filter(|v| pv.contains(*v)).cloned().collect()
}

/// Same set, described by the sign conditions of a decomposition.
pub fn describe(f: &LFormula, vars: &[String], opts: &CadOptions) -> Result<LFormula> {
    let f = tidy(f);
    if matches!(f, Formula::True | Formula::False) {
        return Ok(f);
    }
    let used = present(&f, vars);
    let m = formula_to_m(&f, &used)?;
    let polys = atom_polys(&m);
    check_budget(&polys, used.len(), opts)?;
    let mut cad = full_cad(&polys, used.len(), opts)?;
    let truth = leaf_truth(&mut cad, &m);
    bool_formula(&cad, used.len(), &truth, &used, opts)
}

/// Union of the cells of largest dimension in the set.
pub fn top_part(f: &LFormula, vars: &[String], opts: &CadOptions) -> Result<LFormula> {
    let f = tidy(f);
    if matches!(f, Formula::True | Formula::False) {
        return Ok(f);
    }
    let used = present(&f, vars);
    let m = formula_to_m(&f, &used)?;
    let polys = atom_polys(&m);
    check_budget(&polys, used.len(), opts)?;
    let mut cad = full_cad(&polys, used.len(), opts)?;
    let truth = leaf_truth(&mut cad, &m);
    let last = used.len() - 1;
    let top = (0..truth.len()).filter(|&i| truth[i]).map(|i| cad.dim(last, i)).max();
    let labels: Vec<bool> = (0..truth.len()).map(|i| truth[i] && Some(cad.dim(last, i)) == top).collect();
    bool_formula(&cad, used.len(), &labels, &used, opts)
}

/// Top-level equations solvable for one of `vars` with a constant coefficient,
/// eliminated in turn; returns the substitutions and what is left.
pub fn eliminate_linear(f: &LFormula, vars: &[String]) -> (Vec<(String, AlgPoly)>, LFormula) {
    let mut parts: Vec<LFormula> = match tidy(f) {
        Formula::And(gs) => gs,
        g => vec![g],
    };
    let mut subs = Vec::new();
    loop {
        let found = parts.iter().enumerate().find_map(|(i, g)| match g {
            Formula::Atom(a) => linear(a).filter(|(v, _)| vars.contains(v)).map(|s| (i, s)),
            _ => None,
        });
        let Some((i, (v, val))) = found else { break };
        parts.remove(i);
        let map: HashMap<String, AlgPoly> = [(v.clone(), val.clone())].into_iter().collect();
        parts = parts.iter().map(|g| g.subst(&map)).collect();
        subs.push((v, val));
    }
    (subs, tidy(&Formula::and(parts)))
}

pub fn apply_subs(f: &LFormula, subs: &[(String, AlgPoly)]) -> LFormula {
    let mut out = f.clone();
    for (v, val) in subs {
        let map: HashMap<String, AlgPoly> = [(v.clone(), val.clone())].into_iter().collect();
        out = out.subst(&map);
    }
    tidy(&out)
}

/// The parameters p satisfying R(p) for which {a ∈ B : S(a, p)} is large in B.
pub fn fiber_large(
    params: &[String],
    fiber: &[String],
    r: &LFormula,
    b: &LFormula,
    s: &LFormula,
    opts: &CadOptions,
) -> Result<LFormula> {
    let (psubs, _) = eliminate_linear(r, params);
    let (fsubs, b) = eliminate_linear(b, fiber);
    let fiber: Vec<String> = fiber.iter().filter(|v| !fsubs.iter().any(|(w, _)| w == *v)).cloned().collect();
    let mut subs = fsubs.clone();
    subs.extend(psubs.iter().cloned());
    let b = apply_subs(&b, &psubs);
    let s = apply_subs(s, &subs);
    let db = dimension(&b, &fiber, opts)?;
    if db < 0 {
        return Ok(tidy(r));
    }
    let c = tidy(&Formula::and(vec![b.clone(), Formula::not(s)]));
    let cond = if c == Formula::False {
        Formula::True
    } else {
        let params: Vec<String> = params.iter().filter(|v| !psubs.iter().any(|(w, _)| w == *v)).cloned().collect();
        let pp = present(&c, &params);
        let ap = present(&c, &fiber);
        if pp.is_empty() {
            if dimension(&c, &fiber, opts)? < db {
                Formula::True
            } else {
                Formula::False
            }
        } else {
            let mut order = pp.clone();
            order.extend(ap.iter().cloned());
            let m = formula_to_m(&c, &order)?;
            let polys = atom_polys(&m);
            check_budget(&polys, order.len(), opts)?;
            let mut cad = full_cad(&polys, order.len(), opts)?;
            let truth = leaf_truth(&mut cad, &m);
            let f = pp.len();
            let n = order.len();
            let absent = (fiber.len() - ap.len()) as i64;
            let labels: Vec<bool> = (0..cells_at(&cad, f))
                .map(|i| {
                    let base = cad.dim(f - 1, i) as i64;
                    let fd = leaves_below(&cad, f, i)
                        .into_iter()
                        .filter(|&l| truth[l])
                        .map(|l| cad.dim(n - 1, l) as i64 - base + absent)
                        .max()
                        .unwrap_or(-1);
                    fd < db
                })
                .collect();
            bool_formula(&cad, f, &labels, &pp, opts)?
        }
    };
    Ok(tidy(&Formula::and(vec![r.clone(), cond])))
}

/// Searches the set for a point; `Holds` means it is empty.
pub fn find_violation(violation: &LFormula, vars: &[String], opts: &CadOptions) -> Verdict {
    let f = tidy(violation);
    if f == Formula::False {
        return Verdict::Holds;
    }
    let clauses = match dnf_clauses(&f, DEFAULT_DNF_CAP) {
        Ok(c) => c,
        Err(e) => return Verdict::Undecided(e.to_string()),
    };
    let mut undecided = None;
    for clause in clauses {
        match clause_point(clause, vars, opts) {
            Ok(Some(pt)) => {
                let at: HashMap<String, Q> = pt.iter().cloned().collect();
                if f.eval_qf(&at).unwrap_or(false) {
                    return Verdict::Fails(pt);
                }
                undecided = Some("witness failed verification".to_string());
            }
            Ok(None) => {}
            Err(e) => undecided = Some(e.to_string()),
        }
    }
    match undecided {
        Some(msg) => Verdict::Undecided(msg),
        None => Verdict::Holds,
    }
}

/// ∀vars (premise → conclusion).
pub fn check_implication(vars: &[String], premise: &LFormula, conclusion: &LFormula, opts: &CadOptions) -> Verdict {
    find_violation(&Formula::and(vec![premise.clone(), Formula::not(conclusion.clone())]), vars, opts)
}

/// Solves linear equations with constant coefficients, samples the rest,
/// then falls back to a decomposition.
fn clause_point(mut clause: Clause<String>, vars: &[String], opts: &CadOptions) -> Result<Option<Vec<(String, Q)>>> {
    let mut solved: Vec<(String, AlgPoly)> = Vec::new();
    loop {
        let found = clause.iter().enumerate().find_map(|(i, a)| linear(a).map(|s| (i, s)));
        let Some((i, (v, val))) = found else { break };
        clause.remove(i);
        let map: HashMap<String, AlgPoly> = [(v.clone(), val.clone())].into_iter().collect();
        let mut next = Vec::new();
        for a in &clause {
            let b = Atom::zero_rhs(a.poly().subst_many(&map), a.rel);
            match b.constant_truth() {
                Some(true) => {}
                Some(false) => return Ok(None),
                None => next.push(b),
            }
        }
        clause = next;
        solved.push((v, val));
    }
    let body = Formula::and(clause.into_iter().map(Formula::Atom).collect());
    let rest: Vec<String> = body.poly_vars().into_iter().collect();
    let mut point: HashMap<String, Q> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut found = rest.is_empty();
    for t in 0..256 {
        if found {
            break;
        }
        let pt: HashMap<String, Q> = rest
            .iter()
            .map(|v| {
                let r = match t {
                    0 => Q::zero(),
                    1 => qf(1, 1),
                    2 => qf(-1, 1),
                    3 => qf(2, 1),
                    _ => qf(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
                };
                (v.clone(), r)
            })
            .collect();
        if body.eval_qf(&pt).unwrap_or(false) {
            point = pt;
            found = true;
        }
    }
    if !found {
        let Some(pt) = find_point(&body, &rest, opts).or_else(|e| match e {
            Error::Internal(m) if m.contains("irrational") => {
                Err(Error::resource("violation only at irrational points"))
            }
            e => Err(e),
        })?
        else {
            return Ok(None);
        };
        point = rest.iter().cloned().zip(pt).collect();
    }
    for v in vars {
        if !point.contains_key(v) && !solved.iter().any(|(s, _)| s == v) {
            point.insert(v.clone(), Q::zero());
        }
    }
    for (v, val) in solved.iter().rev() {
        let x = val.eval(&point).map_err(|w| Error::internal(format!("unbound {w} in back-substitution")))?;
        point.insert(v.clone(), x);
    }
    let mut out: Vec<(String, Q)> = vars.iter().filter_map(|v| point.get(v).map(|x| (v.clone(), x.clone()))).collect();
    for (k, x) in &point {
        if !vars.contains(k) {
            out.push((k.clone(), x.clone()));
        }
    }
    Ok(Some(out))
}

fn linear(a: &Atom<AlgPoly>) -> Option<(String, AlgPoly)> {
    if a.rel != Rel::Eq {
        return None;
    }
    let p = a.poly();
    for v in p.vars() {
        if p.degree_in(&v) == 1 {
            if let Some(k) = p.coeff_in(&v, 1).constant_value() {
                let rest = &p - &AlgPoly::var(v.clone()).scale(&k);
                return Some((v, rest.scale(&(-Q::from_integer(1.into()) / k))));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;
    use crate::formula::parse::parse_algebraic as pa;

    fn vs(n: &[&str]) -> Vec<String> {
        n.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identities_hold_without_search() {
        let v = check_implication(&vs(&["x"]), &LFormula::True, &pa("x + 0 = x").unwrap(), &CadOptions::default());
        assert_eq!(v, Verdict::Holds);
    }

    #[test]
    fn counterexample_on_a_line() {
        let v = find_violation(&pa("y = 2*x + 1 & x > 3").unwrap(), &vs(&["x", "y"]), &CadOptions::default());
        let Verdict::Fails(pt) = v else { panic!("{v:?}") };
        let m: HashMap<_, _> = pt.into_iter().collect();
        assert_eq!(m["y"], &(q(2) * &m["x"]) + q(1));
    }

    #[test]
    fn empty_set_is_proved_empty() {
        let v = find_violation(&pa("x^2 + 1 < 0").unwrap(), &vs(&["x"]), &CadOptions::default());
        assert_eq!(v, Verdict::Holds);
    }

    #[test]
    fn fibers_of_a_diagonal_are_small() {
        let s = pa("x != y").unwrap();
        let f = fiber_large(&vs(&["y"]), &vs(&["x"]), &LFormula::True, &LFormula::True, &s, &CadOptions::default()).unwrap();
        assert_eq!(f, LFormula::True);
        let s = pa("x > y & y > 0").unwrap();
        let f = fiber_large(&vs(&["y"]), &vs(&["x"]), &LFormula::True, &LFormula::True, &s, &CadOptions::default()).unwrap();
        assert_eq!(f, LFormula::False);
    }

    #[test]
    fn fibers_through_linear_sections() {
        let b = pa("x1 = 0").unwrap();
        let r = pa("y1 = 0").unwrap();
        let s = pa("x0 + y0 != 0 & x1 + y1 = 0").unwrap();
        let v = vs(&["y0", "y1"]);
        let f = fiber_large(&v, &vs(&["x0", "x1"]), &r, &b, &s, &CadOptions::default()).unwrap();
        assert_eq!(crate::formula::render::formula_to_string(&f), "y1 = 0");
    }

    #[test]
    fn top_part_drops_isolated_points() {
        let f = top_part(&pa("x > 0 | x = -1").unwrap(), &vs(&["x"]), &CadOptions::default()).unwrap();
        let at = |x: i64| f.eval_qf(&[("x".to_string(), q(x))].into_iter().collect()).unwrap();
        assert!(at(1) && !at(-1));
    }
}
