//! Quantifier elimination, dimension and largeness over the reals.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::engine::{
    atom_polys, cells_at, check_budget, eval_at, formula_from_m, formula_to_m, full_cad, label_formulas, leaves_below,
};
use super::lift::{Cad, CadOptions};
use super::mpoly::MPoly;
use crate::algebra::diff::AlgPoly;
use crate::algebra::rat::{qf, Q};
use crate::error::{Error, Result};
use crate::formula::ast::{Atom, Formula, LFormula, Rel};
use crate::formula::nf::{dnf_clauses, nnf, Clause};

/// Clauses beyond this count are eliminated in one decomposition instead of
/// one per clause.
const CLAUSE_SPLIT: usize = 24;

/// Equivalent quantifier-free formula.
pub fn qe(phi: &LFormula, opts: &CadOptions) -> Result<LFormula> {
    let out = elim(phi, opts)?;
    Ok(tidy(&out))
}

fn elim(phi: &LFormula, opts: &CadOptions) -> Result<LFormula> {
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Atom(a) => match a.constant_truth() {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => phi.clone(),
        },
        Formula::Not(g) => Formula::not(elim(g, opts)?),
        Formula::And(gs) => Formula::and(gs.iter().map(|g| elim(g, opts)).collect::<Result<_>>()?),
        Formula::Or(gs) => Formula::or(gs.iter().map(|g| elim(g, opts)).collect::<Result<_>>()?),
        Formula::Exists(vs, g) => {
            let body = elim(g, opts)?;
            exists_block(vs, &body, opts)?
        }
        Formula::Forall(vs, g) => {
            let body = elim(g, opts)?;
            let neg = nnf(&Formula::not(body));
            nnf(&Formula::not(exists_block(vs, &neg, opts)?))
        }
    })
}

/// Normal form used for answers: NNF with constant atoms folded.
pub(crate) fn tidy(f: &LFormula) -> LFormula {
    nnf(&f.simplify_constants()).simplify_constants()
}

fn exists_block(vs: &[String], body: &LFormula, opts: &CadOptions) -> Result<LFormula> {
    let body = tidy(body);
    if matches!(body, Formula::True | Formula::False) {
        return Ok(body);
    }
    let present = body.poly_vars();
    let vs: Vec<String> = vs.iter().filter(|v| present.contains(*v)).cloned().collect();
    if vs.is_empty() {
        return Ok(body);
    }
    let clauses = dnf_clauses(&body, crate::formula::nf::DEFAULT_DNF_CAP)?;
    if clauses.len() > CLAUSE_SPLIT {
        return exists_cad(&vs, &body, opts);
    }
    let mut parts = Vec::new();
    for c in clauses {
        let r = exists_clause(&vs, c, opts)?;
        if r == Formula::True {
            return Ok(Formula::True);
        }
        parts.push(r);
    }
    Ok(Formula::or(parts))
}

/// Solves one literal `p = 0` for a bound variable occurring linearly with a
/// constant coefficient.
fn linear_solution(a: &Atom<AlgPoly>, vs: &[String]) -> Option<(String, AlgPoly)> {
    if a.rel != Rel::Eq {
        return None;
    }
    let p = a.poly();
    for v in vs {
        if p.degree_in(v) == 1 {
            let c = p.coeff_in(v, 1);
            if let Some(k) = c.constant_value() {
                let rest = &p - &AlgPoly::var(v.clone()).scale(&k);
                return Some((v.clone(), rest.scale(&(-Q::from_integer(1.into()) / k))));
            }
        }
    }
    None
}

fn exists_clause(vs: &[String], mut clause: Clause<String>, opts: &CadOptions) -> Result<LFormula> {
    let mut vs = vs.to_vec();
    loop {
        let found = clause.iter().enumerate().find_map(|(i, a)| linear_solution(a, &vs).map(|s| (i, s)));
        let Some((i, (v, val))) = found else { break };
        clause.remove(i);
        let map: HashMap<String, AlgPoly> = [(v.clone(), val)].into_iter().collect();
        let mut next = Vec::new();
        for a in &clause {
            let b = Atom::zero_rhs(a.poly().subst_many(&map), a.rel);
            match b.constant_truth() {
                Some(true) => {}
                Some(false) => return Ok(Formula::False),
                None => next.push(b),
            }
        }
        clause = next;
        vs.retain(|w| *w != v);
    }
    let f = Formula::and(clause.into_iter().map(Formula::Atom).collect());
    let present = f.poly_vars();
    vs.retain(|v| present.contains(v));
    if vs.is_empty() {
        return Ok(f);
    }
    exists_cad(&vs, &f, opts)
}

/// ∃vs. body by a decomposition with the free variables first.
fn exists_cad(vs: &[String], body: &LFormula, opts: &CadOptions) -> Result<LFormula> {
    let free: Vec<String> = body.poly_vars().into_iter().filter(|v| !vs.contains(v)).collect();
    let bound: Vec<String> = vs.iter().filter(|v| body.poly_vars().contains(*v)).cloned().collect();
    if free.is_empty() && sample_witness(&bound, body, 64, opts.seed) {
        return Ok(Formula::True);
    }
    let mut order = free.clone();
    order.extend(bound);
    let m = formula_to_m(body, &order)?;
    let polys = atom_polys(&m);
    check_budget(&polys, order.len(), opts)?;
    let mut cad = full_cad(&polys, order.len(), opts)?;
    let truth = leaf_truth(&mut cad, &m);
    let f = free.len();
    let labels: Vec<bool> = (0..cells_at(&cad, f)).map(|i| leaves_below(&cad, f, i).iter().any(|&l| truth[l])).collect();
    Ok(bool_formula(&cad, f, &labels, &free, opts)?)
}

pub(crate) fn leaf_truth(cad: &mut Cad, m: &Formula<MPoly>) -> Vec<bool> {
    let n = cad.depth();
    cad.levels[n - 1].iter_mut().map(|node| eval_at(m, &mut node.sample)).collect()
}

pub(crate) fn bool_formula(cad: &Cad, f: usize, labels: &[bool], free: &[String], opts: &CadOptions) -> Result<LFormula> {
    if labels.iter().all(|b| *b) {
        return Ok(Formula::True);
    }
    if labels.iter().all(|b| !*b) {
        return Ok(Formula::False);
    }
    let forms = label_formulas(cad, f, labels, opts)?;
    Ok(formula_from_m(&forms[&true], free))
}

/// Random rational points as a cheap witness search for sentences.
fn sample_witness(vars: &[String], body: &LFormula, tries: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..tries {
        let pt: HashMap<String, Q> = vars
            .iter()
            .map(|v| {
                let r = if t == 0 { Q::zero() } else { qf(rng.gen_range(-12..=12), rng.gen_range(1..=4)) };
                (v.clone(), r)
            })
            .collect();
        if body.eval_qf(&pt).unwrap_or(false) {
            return true;
        }
    }
    false
}

/// Dimension of the set defined by φ in ℝ^vars; −1 when empty.
pub fn dimension(phi: &LFormula, vars: &[String], opts: &CadOptions) -> Result<i64> {
    let phi = if phi.is_quantifier_free() { tidy(phi) } else { qe(phi, opts)? };
    for v in phi.poly_vars() {
        if !vars.contains(&v) {
            return Err(Error::User(format!("variable {v} not in the variable list")));
        }
    }
    let n = vars.len() as i64;
    match phi {
        Formula::True => return Ok(n),
        Formula::False => return Ok(-1),
        _ => {}
    }
    let present = phi.poly_vars();
    let used: Vec<String> = vars.iter().filter(|v| present.contains(*v)).cloned().collect();
    let m = formula_to_m(&phi, &used)?;
    let polys = atom_polys(&m);
    check_budget(&polys, used.len(), opts)?;
    let mut cad = full_cad(&polys, used.len(), opts)?;
    let truth = leaf_truth(&mut cad, &m);
    let last = used.len() - 1;
    let best = (0..truth.len()).filter(|&i| truth[i]).map(|i| cad.dim(last, i) as i64).max();
    Ok(match best {
        Some(d) => d + n - used.len() as i64,
        None => -1,
    })
}

pub fn has_interior(phi: &LFormula, vars: &[String], opts: &CadOptions) -> Result<bool> {
    Ok(dimension(phi, vars, opts)? == vars.len() as i64)
}

/// A ⊆ B checked first; then dim(B ∖ A) < dim(B).
pub fn is_large(a: &LFormula, b: &LFormula, vars: &[String], opts: &CadOptions) -> Result<bool> {
    let outside = Formula::and(vec![a.clone(), Formula::not(b.clone())]);
    if dimension(&nnf(&outside), vars, opts)? >= 0 {
        return Err(Error::User("A not a subset of B".into()));
    }
    let rest = Formula::and(vec![b.clone(), Formula::not(a.clone())]);
    Ok(dimension(&nnf(&rest), vars, opts)? < dimension(b, vars, opts)?)
}

/// Decides whether a sentence holds; with a witness point for ∃-sentences.
pub fn decide(sentence: &LFormula, opts: &CadOptions) -> Result<bool> {
    match qe(sentence, opts)? {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        other => Err(Error::User(format!(
            "not a sentence: free variables {:?} remain",
            other.poly_vars().into_iter().collect::<Vec<_>>()
        ))),
    }
}

/// A point satisfying a quantifier-free φ, preferring rational samples of
/// full-dimensional cells; `None` when φ is unsatisfiable.
pub fn find_point(phi: &LFormula, vars: &[String], opts: &CadOptions) -> Result<Option<Vec<Q>>> {
    let phi = tidy(phi);
    if phi == Formula::False {
        return Ok(None);
    }
    if sample_witness(vars, &phi, 48, opts.seed) {
        // repeat deterministically to recover the point
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for t in 0..48 {
            let pt: Vec<Q> = vars
                .iter()
                .map(|_| if t == 0 { Q::zero() } else { qf(rng.gen_range(-12..=12), rng.gen_range(1..=4)) })
                .collect();
            let m: HashMap<String, Q> = vars.iter().cloned().zip(pt.iter().cloned()).collect();
            if phi.eval_qf(&m).unwrap_or(false) {
                return Ok(Some(pt));
            }
        }
    }
    if phi == Formula::True {
        return Ok(Some(vec![Q::zero(); vars.len()]));
    }
    let m = formula_to_m(&phi, vars)?;
    let polys = atom_polys(&m);
    let mut cad = full_cad(&polys, vars.len(), opts)?;
    let truth = leaf_truth(&mut cad, &m);
    let last = vars.len() - 1;
    let mut best: Option<(usize, Vec<Q>)> = None;
    for (i, t) in truth.iter().enumerate() {
        if !t {
            continue;
        }
        if let Some(pt) = cad.levels[last][i].sample.rational_coords() {
            let d = cad.dim(last, i);
            if best.as_ref().map(|b| d > b.0).unwrap_or(true) {
                best = Some((d, pt));
            }
        }
    }
    if let Some((_, p)) = best {
        return Ok(Some(p));
    }
    if !truth.iter().any(|t| *t) {
        return Ok(None);
    }
    Err(Error::Internal("satisfiable formula has only irrational sample points".into()))
}

/// Descriptor of the r-th real root (ascending) of p(x̄, y) over a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct RootFunction {
    pub polynomial: AlgPoly,
    pub variable: String,
    pub root_index: usize,
    pub root_count: usize,
    pub domain: LFormula,
}

/// Parameter-space partition by number of real roots of p in y, with one
/// descriptor per root index. Parameter cells where p vanishes identically
/// in y are reported with root_count 0 and root_index 0.
pub fn skolem_roots(p: &AlgPoly, y: &str, params: &[String], opts: &CadOptions) -> Result<Vec<RootFunction>> {
    if p.degree_in(&y.to_string()) == 0 {
        return Err(Error::User(format!("polynomial has degree 0 in {y}")));
    }
    let mut order: Vec<String> = params.to_vec();
    order.push(y.to_string());
    let m = super::engine::to_mpoly(p, &order)?;
    let n = order.len();
    let mut cad = full_cad(&[m.clone()], n, opts)?;
    let f = params.len();
    // label: number of sections where p vanishes; usize::MAX for nullified fibers
    let mut labels = Vec::new();
    for i in 0..cells_at(&cad, f) {
        let leaves = leaves_below(&cad, f, i);
        let mut count = 0usize;
        let mut nullified = false;
        for &l in &leaves {
            let node = &mut cad.levels[n - 1][l];
            if node.sample.sign(&m) == 0 {
                if node.is_sector() {
                    nullified = true;
                } else {
                    count += 1;
                }
            }
        }
        labels.push(if nullified { usize::MAX } else { count });
    }
    let forms = label_formulas(&cad, f, &labels, opts)?;
    let mut out = Vec::new();
    for (j, dom) in forms {
        let domain = formula_from_m(&dom, params);
        if j == usize::MAX {
            out.push(RootFunction { polynomial: p.clone(), variable: y.into(), root_index: 0, root_count: 0, domain });
            continue;
        }
        for r in 1..=j {
            out.push(RootFunction {
                polynomial: p.clone(),
                variable: y.into(),
                root_index: r,
                root_count: j,
                domain: domain.clone(),
            });
        }
    }
    Ok(out)
}

/// Variables of φ not in `exclude`, sorted.
pub fn other_vars(phi: &LFormula, exclude: &[String]) -> Vec<String> {
    let s: BTreeSet<String> = phi.poly_vars();
    s.into_iter().filter(|v| !exclude.contains(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse_algebraic;
    use crate::formula::render::formula_to_string;

    fn qe_str(s: &str) -> String {
        formula_to_string(&qe(&parse_algebraic(s).unwrap(), &CadOptions::default()).unwrap())
    }

    fn vars(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn catalog() {
        assert_eq!(qe_str("E y. y^2 = x"), "x >= 0");
        assert_eq!(qe_str("A y. y^2 + x > 0"), "x > 0");
        assert_eq!(qe_str("E y. x*y = 1"), "x != 0");
    }

    #[test]
    fn sentences() {
        assert_eq!(qe_str("E x. x^2 = 2"), "true");
        assert_eq!(qe_str("A x. x^2 + 1 > 0"), "true");
        assert_eq!(qe_str("E x. x^2 + 1 = 0"), "false");
    }

    #[test]
    fn dimensions() {
        let d = |s: &str| dimension(&parse_algebraic(s).unwrap(), &vars(&["x", "y"]), &CadOptions::default()).unwrap();
        assert_eq!(d("x^2 + y^2 < 1"), 2);
        assert_eq!(d("x^2 + y^2 = 1"), 1);
        assert_eq!(d("x^2 + y^2 < 0"), -1);
        assert_eq!(d("x = 0 & y = 1"), 0);
    }

    #[test]
    fn largeness() {
        let v = vars(&["x"]);
        let o = CadOptions::default();
        let t = LFormula::True;
        assert!(is_large(&parse_algebraic("x != 0").unwrap(), &t, &v, &o).unwrap());
        assert!(!is_large(&parse_algebraic("x > 0").unwrap(), &t, &v, &o).unwrap());
        assert!(is_large(&t, &t, &v, &o).unwrap());
        assert!(is_large(&t, &parse_algebraic("x > 0").unwrap(), &v, &o).is_err());
    }

    #[test]
    fn square_root_functions() {
        let p = crate::formula::parse::parse_alg_poly("y^2 - x").unwrap();
        let fs = skolem_roots(&p, "y", &vars(&["x"]), &CadOptions::default()).unwrap();
        let got: Vec<(usize, usize, String)> =
            fs.iter().map(|f| (f.root_count, f.root_index, formula_to_string(&f.domain))).collect();
        assert_eq!(
            got,
            vec![(1, 1, "x = 0".to_string()), (2, 1, "x > 0".to_string()), (2, 2, "x > 0".to_string())]
        );
    }
}
