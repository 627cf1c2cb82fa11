//! Formula trees over polynomial atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::diff::{AlgPoly, DiffPoly, JetVar};
use crate::algebra::poly::{Poly, Var};
use crate::algebra::rat::Q;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    /// The relation obtained by swapping the two sides.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }

    pub fn holds(self, sign: i32) -> bool {
        match self {
            Rel::Eq => sign == 0,
            Rel::Ne => sign != 0,
            Rel::Lt => sign < 0,
            Rel::Le => sign <= 0,
            Rel::Gt => sign > 0,
            Rel::Ge => sign >= 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    /// Bit mask over signs {-1, 0, +1} (bits 0, 1, 2).
    pub fn mask(self) -> u8 {
        match self {
            Rel::Eq => 0b010,
            Rel::Ne => 0b101,
            Rel::Lt => 0b001,
            Rel::Le => 0b011,
            Rel::Gt => 0b100,
            Rel::Ge => 0b110,
        }
    }

    pub fn from_mask(m: u8) -> Option<Rel> {
        Some(match m {
            0b010 => Rel::Eq,
            0b101 => Rel::Ne,
            0b001 => Rel::Lt,
            0b011 => Rel::Le,
            0b100 => Rel::Gt,
            0b110 => Rel::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `lhs rel rhs`; semantically `lhs - rhs rel 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Atom<P> {
    pub lhs: P,
    pub rel: Rel,
    pub rhs: P,
}

impl<V: Var> Atom<Poly<V>> {
    pub fn new(lhs: Poly<V>, rel: Rel, rhs: Poly<V>) -> Self {
        Atom { lhs, rel, rhs }
    }

    /// `p rel 0`
    pub fn zero_rhs(p: Poly<V>, rel: Rel) -> Self {
        Atom { lhs: p, rel, rhs: Poly::zero() }
    }

    pub fn poly(&self) -> Poly<V> {
        &self.lhs - &self.rhs
    }

    pub fn negate(&self) -> Self {
        Atom { lhs: self.lhs.clone(), rel: self.rel.negate(), rhs: self.rhs.clone() }
    }

    pub fn vars(&self) -> BTreeSet<V> {
        let mut s = self.lhs.vars();
        s.extend(self.rhs.vars());
        s
    }

    pub fn holds_at(&self, point: &HashMap<V, Q>) -> Result<bool, V> {
        let v = self.poly().eval(point)?;
        Ok(self.rel.holds(sign_of(&v)))
    }

    /// Constant truth value when the atom's polynomial is constant.
    pub fn constant_truth(&self) -> Option<bool> {
        self.poly().constant_value().map(|c| self.rel.holds(sign_of(&c)))
    }
}

pub fn sign_of(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula<P> {
    True,
    False,
    Atom(Atom<P>),
    Not(Box<Formula<P>>),
    And(Vec<Formula<P>>),
    Or(Vec<Formula<P>>),
    Exists(Vec<String>, Box<Formula<P>>),
    Forall(Vec<String>, Box<Formula<P>>),
}

pub type LDFormula = Formula<DiffPoly>;
pub type LFormula = Formula<AlgPoly>;

/// Maps a polynomial variable to the name of the quantifiable variable it belongs to.
pub trait VarName {
    fn var_name(&self) -> &str;
    fn rename(&self, name: &str) -> Self;
}

impl VarName for String {
    fn var_name(&self) -> &str {
        self
    }
    fn rename(&self, name: &str) -> Self {
        name.to_string()
    }
}

impl VarName for JetVar {
    fn var_name(&self) -> &str {
        &self.name
    }
    fn rename(&self, name: &str) -> Self {
        JetVar { name: name.to_string(), order: self.order }
    }
}

impl<V: Var> Formula<Poly<V>> {
    pub fn atom(lhs: Poly<V>, rel: Rel, rhs: Poly<V>) -> Self {
        Formula::Atom(Atom::new(lhs, rel, rhs))
    }

    pub fn cmp0(p: Poly<V>, rel: Rel) -> Self {
        Formula::Atom(Atom::zero_rhs(p, rel))
    }

    pub fn not(f: Self) -> Self {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(g) => *g,
            g => Formula::Not(Box::new(g)),
        }
    }

    /// Conjunction with trivial simplifications (flattening, constants).
    pub fn and(fs: Vec<Self>) -> Self {
        let mut out = Vec::new();
        for f in fs {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(gs) => out.extend(gs),
                g => out.push(g),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(fs: Vec<Self>) -> Self {
        let mut out = Vec::new();
        for f in fs {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(gs) => out.extend(gs),
                g => out.push(g),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::or(vec![Formula::not(a), b])
    }

    pub fn exists(vars: Vec<String>, body: Self) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn forall(vars: Vec<String>, body: Self) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(g) => g.is_quantifier_free(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().all(|g| g.is_quantifier_free()),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn atoms(&self) -> Vec<&Atom<Poly<V>>> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom<Poly<V>>>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.collect_atoms(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_atoms(out)),
        }
    }

    /// Every polynomial variable occurring in an atom.
    pub fn poly_vars(&self) -> BTreeSet<V> {
        let mut s = BTreeSet::new();
        for a in self.atoms() {
            s.extend(a.vars());
        }
        s
    }

    pub fn map_atoms<W: Var>(&self, f: &mut impl FnMut(&Atom<Poly<V>>) -> Formula<Poly<W>>) -> Formula<Poly<W>> {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(f))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(g.map_atoms(f))),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(g.map_atoms(f))),
        }
    }

    pub fn map_vars<W: Var>(&self, f: &impl Fn(&V) -> W) -> Formula<Poly<W>> {
        self.map_atoms(&mut |a| {
            Formula::Atom(Atom { lhs: a.lhs.map_vars(f), rel: a.rel, rhs: a.rhs.map_vars(f) })
        })
    }

    /// Substitutes polynomials for variables in every atom (no capture checks).
    pub fn subst(&self, map: &HashMap<V, Poly<V>>) -> Self {
        self.map_atoms(&mut |a| {
            Formula::Atom(Atom { lhs: a.lhs.subst_many(map), rel: a.rel, rhs: a.rhs.subst_many(map) })
        })
    }

    /// Truth value of a quantifier-free formula at a rational point.
    pub fn eval_qf(&self, point: &HashMap<V, Q>) -> Result<bool, V> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => a.holds_at(point)?,
            Formula::Not(g) => !g.eval_qf(point)?,
            Formula::And(gs) => {
                for g in gs {
                    if !g.eval_qf(point)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(gs) => {
                for g in gs {
                    if g.eval_qf(point)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Exists(..) | Formula::Forall(..) => panic!("eval_qf on a quantified formula"),
        })
    }

    /// Replaces atoms with constant polynomials by their truth values and
    /// propagates through connectives.
    pub fn simplify_constants(&self) -> Self {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => match a.constant_truth() {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => Formula::Atom(a.clone()),
            },
            Formula::Not(g) => Formula::not(g.simplify_constants()),
            Formula::And(gs) => Formula::and(gs.iter().map(|g| g.simplify_constants()).collect()),
            Formula::Or(gs) => Formula::or(gs.iter().map(|g| g.simplify_constants()).collect()),
            Formula::Exists(vs, g) => {
                let b = g.simplify_constants();
                match b {
                    Formula::True | Formula::False => b,
                    b => Formula::Exists(vs.clone(), Box::new(b)),
                }
            }
            Formula::Forall(vs, g) => {
                let b = g.simplify_constants();
                match b {
                    Formula::True | Formula::False => b,
                    b => Formula::Forall(vs.clone(), Box::new(b)),
                }
            }
        }
    }
}

impl<V: Var + VarName> Formula<Poly<V>> {
    /// Names of free variables, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.iter().any(|b| b == v.var_name()) {
                        out.insert(v.var_name().to_string());
                    }
                }
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_free(bound, out)),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                g.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut s: BTreeSet<String> = self.poly_vars().iter().map(|v| v.var_name().to_string()).collect();
        self.collect_binders(&mut s);
        s
    }

    fn collect_binders(&self, s: &mut BTreeSet<String>) {
        match self {
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                s.extend(vs.iter().cloned());
                g.collect_binders(s);
            }
            Formula::Not(g) => g.collect_binders(s),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_binders(s)),
            _ => {}
        }
    }

    /// Renames free occurrences of variable `from` to `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Self {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => {
                let f = |v: &V| if v.var_name() == from { v.rename(to) } else { v.clone() };
                Formula::Atom(Atom { lhs: a.lhs.map_vars(f), rel: a.rel, rhs: a.rhs.map_vars(f) })
            }
            Formula::Not(g) => Formula::Not(Box::new(g.rename_free(from, to))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.rename_free(from, to)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.rename_free(from, to)).collect()),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let body = if vs.iter().any(|v| v == from) { (**g).clone() } else { g.rename_free(from, to) };
                match self {
                    Formula::Exists(..) => Formula::Exists(vs.clone(), Box::new(body)),
                    _ => Formula::Forall(vs.clone(), Box::new(body)),
                }
            }
        }
    }

    /// Renames bound variables so that no quantifier rebinds a name that is
    /// already bound in an enclosing scope or free in the formula.
    pub fn unshadow(&self) -> Self {
        let mut used = self.all_names();
        let free = self.free_vars();
        self.unshadow_rec(&mut free.into_iter().collect(), &mut used)
    }

    fn unshadow_rec(&self, scope: &mut Vec<String>, used: &mut BTreeSet<String>) -> Self {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(g) => Formula::Not(Box::new(g.unshadow_rec(scope, used))),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.unshadow_rec(scope, used)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.unshadow_rec(scope, used)).collect()),
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                let mut body = (**g).clone();
                let mut names = Vec::new();
                for v in vs {
                    if scope.contains(v) {
                        let fresh = fresh_name(v, used);
                        used.insert(fresh.clone());
                        body = body.rename_free(v, &fresh);
                        names.push(fresh);
                    } else {
                        names.push(v.clone());
                    }
                }
                let n = scope.len();
                scope.extend(names.iter().cloned());
                let body = body.unshadow_rec(scope, used);
                scope.truncate(n);
                match self {
                    Formula::Exists(..) => Formula::Exists(names, Box::new(body)),
                    _ => Formula::Forall(names, Box::new(body)),
                }
            }
        }
    }
}

pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let mut k = 1;
    loop {
        let cand = format!("{base}_{k}");
        if !used.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Per-variable maximal derivative order over all atoms of a differential formula.
pub fn max_orders(phi: &LDFormula) -> BTreeMap<String, u32> {
    let mut out: BTreeMap<String, u32> = BTreeMap::new();
    for v in phi.poly_vars() {
        let e = out.entry(v.name.clone()).or_insert(0);
        *e = (*e).max(v.order);
    }
    out
}

/// Converts an order-0 differential formula to the algebraic dialect.
pub fn to_algebraic(phi: &LDFormula) -> Option<LFormula> {
    if phi.poly_vars().iter().any(|v| v.order > 0) {
        return None;
    }
    Some(phi.map_vars(&|v: &JetVar| v.name.clone()))
}

/// Embeds an algebraic formula into the differential dialect (all orders 0).
pub fn to_differential(phi: &LFormula) -> LDFormula {
    phi.map_vars(&|v: &String| JetVar::base(v))
}
