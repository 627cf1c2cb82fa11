//! Rewriting a conjunction of polynomial equations into regular branches.

use num_traits::Signed;
use serde_json::{json, Value};

use crate::algebra::diff::AlgPoly;
use crate::algebra::poly::{Poly, Var};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LFormula, Rel};
use crate::formula::render::{formula_to_string, poly_to_string};

pub const DEFAULT_MAX_BRANCHES: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchKind {
    /// `p = 0 ∧ ∂_v p ≠ 0 ∧ ⋀ q_j = 0 ∧ q ≠ 0`
    Form1,
    /// `⋀ q_j = 0 ∧ q ≠ 0`
    Form2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularBranch {
    pub kind: BranchKind,
    pub var: String,
    pub main: Option<AlgPoly>,
    pub separant: Option<AlgPoly>,
    pub equations: Vec<AlgPoly>,
    pub inequation: Option<AlgPoly>,
    /// The factors multiplied into `inequation`.
    pub inequations: Vec<AlgPoly>,
    pub open: Option<LFormula>,
}

impl RegularBranch {
    pub fn to_formula(&self) -> LFormula {
        let mut parts = Vec::new();
        if let Some(p) = &self.main {
            parts.push(Formula::cmp0(p.clone(), Rel::Eq));
        }
        if let Some(s) = &self.separant {
            parts.push(Formula::cmp0(s.clone(), Rel::Ne));
        }
        for q in &self.equations {
            parts.push(Formula::cmp0(q.clone(), Rel::Eq));
        }
        if let Some(q) = &self.inequation {
            parts.push(Formula::cmp0(q.clone(), Rel::Ne));
        }
        if let Some(o) = &self.open {
            parts.push(o.clone());
        }
        Formula::and(parts)
    }

    pub fn to_json(&self) -> Value {
        let text = |p: &Option<AlgPoly>| p.as_ref().map(poly_to_string).unwrap_or_default();
        json!({
            "kind": match self.kind { BranchKind::Form1 => "form1", BranchKind::Form2 => "form2" },
            "main": text(&self.main),
            "separant": text(&self.separant),
            "equations": self.equations.iter().map(poly_to_string).collect::<Vec<_>>(),
            "inequation": text(&self.inequation),
            "open": self.open.as_ref().map(formula_to_string).unwrap_or_default(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Step0,
    Theta1,
    Theta2,
}

/// One rewrite with the termination measure before and after. The measure is
/// (degree of the polynomial last split by step 0, sum of v-degrees), compared
/// lexicographically; `u32::MAX` stands for "no step 0 yet".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub before: (u32, u32),
    pub after: (u32, u32),
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    pub branches: Vec<RegularBranch>,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug)]
pub struct TriOptions {
    pub max_branches: usize,
    /// Extra inequations `q ≠ 0` assumed on entry.
    pub inequations: Vec<AlgPoly>,
    /// Side conditions carried unchanged into every branch.
    pub open: Option<LFormula>,
}

impl Default for TriOptions {
    fn default() -> Self {
        TriOptions { max_branches: DEFAULT_MAX_BRANCHES, inequations: vec![], open: None }
    }
}

/// Branches whose disjunction is equivalent to `⋀ p_i = 0`.
pub fn triangulate_system(polys: &[AlgPoly], v: &str) -> Result<Vec<RegularBranch>> {
    Ok(triangulate_with(polys, v, &TriOptions::default())?.branches)
}

pub fn triangulate_with(polys: &[AlgPoly], v: &str, opts: &TriOptions) -> Result<Triangulation> {
    let mut run = Run { v: v.to_string(), opts, branches: vec![], trace: vec![], live: 1 };
    let start = State { p: polys.to_vec(), eqs: vec![], ineqs: opts.inequations.clone(), d0: u32::MAX };
    if let Some(s) = start.settle(&run.v) {
        run.go(s)?;
    }
    Ok(Triangulation { branches: run.branches, trace: run.trace })
}

#[derive(Clone, Debug)]
struct State {
    p: Vec<AlgPoly>,
    eqs: Vec<AlgPoly>,
    ineqs: Vec<AlgPoly>,
    d0: u32,
}

/// Primitive part with a positive leading coefficient in display order.
pub fn norm<V: Var>(p: &Poly<V>) -> Poly<V> {
    let q = p.primitive_positive().1;
    match q.display_terms().first() {
        Some((_, c)) if c.is_negative() => -q,
        _ => q,
    }
}

fn push_unique(list: &mut Vec<AlgPoly>, p: AlgPoly) {
    if !list.contains(&p) {
        list.push(p);
    }
}

/// `norm` with the sign fixed by the leading coefficient in `v`.
fn norm_in(p: &AlgPoly, v: &String) -> AlgPoly {
    let q = norm(p);
    if norm(&q.leading_coeff_in(v)) == q.leading_coeff_in(v) {
        q
    } else {
        -q
    }
}

/// `p − lc·v^d`.
pub fn reductum(p: &AlgPoly, v: &String) -> AlgPoly {
    let mut cs = p.coeffs_in(v);
    cs.pop();
    AlgPoly::from_coeffs_in(v, &cs)
}

impl State {
    fn measure(&self, v: &String) -> (u32, u32) {
        (self.d0, self.p.iter().map(|f| f.degree_in(v)).sum())
    }

    /// Moves v-free polynomials to the equations, drops trivial conditions,
    /// and replaces leading coefficients already known to vanish by the
    /// reductum. `None` when the state is inconsistent.
    fn settle(mut self, v: &String) -> Option<State> {
        loop {
            let mut p = Vec::new();
            for f in std::mem::take(&mut self.p) {
                if f.is_zero() {
                    continue;
                }
                if f.degree_in(v) == 0 {
                    push_unique(&mut self.eqs, norm(&f));
                } else {
                    push_unique(&mut p, norm_in(&f, v));
                }
            }
            let mut eqs = Vec::new();
            for e in std::mem::take(&mut self.eqs) {
                if e.is_zero() {
                    continue;
                }
                if e.is_constant() {
                    return None;
                }
                push_unique(&mut eqs, norm(&e));
            }
            self.eqs = eqs;
            let mut ineqs = Vec::new();
            for q in std::mem::take(&mut self.ineqs) {
                if q.is_zero() {
                    return None;
                }
                if q.is_constant() {
                    continue;
                }
                push_unique(&mut ineqs, norm(&q));
            }
            self.ineqs = ineqs;
            if self.ineqs.iter().any(|q| self.eqs.contains(q)) {
                return None;
            }
            let mut changed = false;
            for f in p.iter_mut() {
                while f.degree_in(v) > 0 && self.eqs.contains(&norm(&f.leading_coeff_in(v))) {
                    *f = reductum(f, v);
                    changed = true;
                }
            }
            self.p = p;
            if !changed {
                return Some(self);
            }
        }
    }

    fn inequation(&self) -> Option<AlgPoly> {
        if self.ineqs.is_empty() {
            None
        } else {
            Some(norm(&self.ineqs.iter().fold(AlgPoly::one(), |a, b| &a * b)))
        }
    }
}

struct Run<'a> {
    v: String,
    opts: &'a TriOptions,
    branches: Vec<RegularBranch>,
    trace: Vec<TraceStep>,
    /// Emitted branches plus states still pending.
    live: usize,
}

impl Run<'_> {
    fn emit(&mut self, b: RegularBranch) {
        self.branches.push(b);
    }

    fn fork(&mut self, n: usize) -> Result<()> {
        self.live += n;
        if self.live > self.opts.max_branches {
            return Err(Error::Resource(format!("branch cap of {} exceeded", self.opts.max_branches)));
        }
        Ok(())
    }

    fn record(&mut self, kind: StepKind, before: (u32, u32), child: &State) -> Result<()> {
        let after = child.measure(&self.v);
        if after >= before {
            return Err(Error::Internal(format!("termination measure did not decrease: {before:?} -> {after:?}")));
        }
        self.trace.push(TraceStep { kind, before, after });
        Ok(())
    }

    fn go(&mut self, s: State) -> Result<()> {
        let v = self.v.clone();
        if s.p.is_empty() {
            self.emit(RegularBranch {
                kind: BranchKind::Form2,
                var: v,
                main: None,
                separant: None,
                equations: s.eqs.clone(),
                inequation: s.inequation(),
                inequations: s.ineqs.clone(),
                open: self.opts.open.clone(),
            });
            return Ok(());
        }
        if s.p.len() == 1 {
            let p = s.p[0].clone();
            let d = p.degree_in(&v);
            let dp = p.diff(&v);
            if s.d0 <= d {
                return Err(Error::Internal("step 0 repeated without a degree drop".into()));
            }
            let mut ne = s.clone();
            ne.ineqs.push(dp.clone());
            let ne = ne.settle(&v);
            let before = (s.d0, d);
            let mut eq = s;
            eq.d0 = d;
            eq.p.push(dp.clone());
            let eq = eq.settle(&v);
            self.live -= 1;
            self.fork(ne.is_some() as usize + eq.is_some() as usize)?;
            if let Some(ne) = ne {
                if ne.p.len() != 1 || ne.p[0] != p {
                    return Err(Error::Internal("separant condition altered the main polynomial".into()));
                }
                let sep = norm(&dp);
                let ineqs: Vec<AlgPoly> = ne.ineqs.iter().filter(|q| **q != sep).cloned().collect();
                let ne = State { ineqs, ..ne };
                self.emit(RegularBranch {
                    kind: BranchKind::Form1,
                    var: v.clone(),
                    main: Some(p),
                    separant: Some(dp),
                    equations: ne.eqs.clone(),
                    inequation: ne.inequation(),
                    inequations: ne.ineqs.clone(),
                    open: self.opts.open.clone(),
                });
            }
            if let Some(eq) = eq {
                self.record(StepKind::Step0, before, &eq)?;
                self.go(eq)?;
            }
            return Ok(());
        }
        let degs: Vec<u32> = s.p.iter().map(|f| f.degree_in(&v)).collect();
        let dmax = *degs.iter().max().unwrap();
        let i1 = degs.iter().position(|d| *d == dmax).unwrap();
        let i2 = (0..s.p.len()).filter(|&i| i != i1).min_by_key(|&i| (degs[i], std::cmp::Reverse(i))).unwrap();
        let (p1, p2) = (s.p[i1].clone(), s.p[i2].clone());
        let c = p2.leading_coeff_in(&v);
        let before = s.measure(&v);
        // theta 1: c = 0, p2 replaced by its reductum
        let t1 = if c.is_constant() {
            None
        } else {
            let mut t = s.clone();
            t.p[i2] = reductum(&p2, &v);
            t.eqs.push(c.clone());
            t.settle(&v)
        };
        // theta 2: c ≠ 0, p1 replaced by the pseudo-remainder
        let (_, _, r) = p1.pseudo_divide(&p2, &v).ok_or_else(|| Error::Internal("invalid divisor".into()))?;
        let mut t = s;
        t.p[i1] = r;
        t.ineqs.push(c);
        let t2 = t.settle(&v);
        let kids = [(StepKind::Theta1, t1), (StepKind::Theta2, t2)];
        self.live -= 1;
        self.fork(kids.iter().filter(|k| k.1.is_some()).count())?;
        for (kind, k) in kids {
            if let Some(k) = k {
                self.record(kind, before, &k)?;
                self.go(k)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;
    use crate::formula::parse::parse_alg_poly as pp;
    use std::collections::HashMap;

    fn holds_all(ps: &[AlgPoly], pt: &HashMap<String, crate::algebra::rat::Q>) -> bool {
        ps.iter().all(|p| p.eval(pt).unwrap() == q(0))
    }

    fn grid_equivalent(ps: &[AlgPoly], v: &str, vars: &[&str]) {
        let bs = triangulate_system(ps, v).unwrap();
        let n = vars.len();
        let total = 11usize.pow(n as u32);
        for k in 0..total {
            let mut pt = HashMap::new();
            let mut r = k;
            for name in vars {
                pt.insert(name.to_string(), q((r % 11) as i64 - 5));
                r /= 11;
            }
            let lhs = holds_all(ps, &pt);
            let rhs = bs.iter().any(|b| b.to_formula().eval_qf(&pt).unwrap());
            assert_eq!(lhs, rhs, "at {pt:?}");
        }
    }

    #[test]
    fn single_linear() {
        let bs = triangulate_system(&[pp("v - x1").unwrap()], "v").unwrap();
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert_eq!(b.kind, BranchKind::Form1);
        assert_eq!(b.main, Some(pp("v - x1").unwrap()));
        assert_eq!(b.separant, Some(AlgPoly::one()));
        assert!(b.equations.is_empty());
        grid_equivalent(&[pp("v - x1").unwrap()], "v", &["v", "x1"]);
    }

    #[test]
    fn remainder_becomes_side_equation() {
        let ps = vec![pp("v^2 - x1").unwrap(), pp("v - x1").unwrap()];
        let bs = triangulate_system(&ps, "v").unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].main, Some(pp("v - x1").unwrap()));
        assert_eq!(bs[0].equations, vec![pp("x1^2 - x1").unwrap()]);
        grid_equivalent(&ps, "v", &["v", "x1"]);
    }

    #[test]
    fn empty_system() {
        let bs = triangulate_system(&[], "v").unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].kind, BranchKind::Form2);
        assert_eq!(bs[0].to_formula(), Formula::True);
    }

    #[test]
    fn parametric_quadratic() {
        let ps = vec![pp("a*v^2 + b*v + 1").unwrap()];
        grid_equivalent(&ps, "v", &["v", "a", "b"]);
        let t = triangulate_with(&ps, "v", &TriOptions::default()).unwrap();
        assert!(t.trace.iter().all(|s| s.after < s.before));
    }

    #[test]
    fn two_quadratics() {
        let ps = vec![pp("v^2 - a").unwrap(), pp("v^2 + v - b").unwrap()];
        grid_equivalent(&ps, "v", &["v", "a", "b"]);
    }

    #[test]
    fn cap_is_enforced() {
        let ps = vec![pp("a*v^3 + b*v^2 + c*v + d").unwrap(), pp("b*v^2 + a*v + c").unwrap()];
        let opts = TriOptions { max_branches: 2, ..Default::default() };
        assert!(matches!(triangulate_with(&ps, "v", &opts), Err(Error::Resource(_))));
    }
}
