//! Rational maps between coordinate tuples and their substitution into formulas.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::diff::AlgPoly;
use crate::algebra::poly::Monomial;
use crate::algebra::rat::Q;
use crate::formula::ast::{Atom, Formula, LFormula, Rel};

/// A quotient of polynomials in flat coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat {
    pub num: AlgPoly,
    pub den: AlgPoly,
}

impl Rat {
    pub fn new(num: AlgPoly, den: AlgPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Rat::poly(AlgPoly::zero());
        }
        if let Some(q) = num.exact_div(&den) {
            return Rat::poly(q);
        }
        let (c, den) = den.primitive();
        Rat { num: num.scale(&(Q::one() / c)), den }
    }

    pub fn poly(p: AlgPoly) -> Self {
        Rat { num: p, den: AlgPoly::one() }
    }

    pub fn var(v: &str) -> Self {
        Rat::poly(AlgPoly::var(v.to_string()))
    }

    pub fn constant(c: Q) -> Self {
        Rat::poly(AlgPoly::constant(c))
    }

    pub fn eval(&self, point: &HashMap<String, Q>) -> Option<Q> {
        let d = self.den.eval(point).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point).ok()? / d)
    }

    /// Simultaneous substitution of rational values.
    pub fn subst(&self, map: &HashMap<String, Rat>) -> Rat {
        let mut exps: HashMap<String, u32> = HashMap::new();
        for v in map.keys() {
            let e = self.num.degree_in(v).max(self.den.degree_in(v));
            if e > 0 {
                exps.insert(v.clone(), e);
            }
        }
        Rat::new(subst_with(&self.num, map, &exps), subst_with(&self.den, map, &exps))
    }

    /// Denominators that must not vanish where the substitution is used.
    pub fn conditions(&self) -> Vec<AlgPoly> {
        if self.den.is_constant() {
            vec![]
        } else {
            vec![self.den.clone()]
        }
    }
}

/// `p(N/D)·Π D_v^{e_v}` term by term.
fn subst_with(p: &AlgPoly, map: &HashMap<String, Rat>, exps: &HashMap<String, u32>) -> AlgPoly {
    let mut out = AlgPoly::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut t = AlgPoly::constant(c.clone());
        let mut used: Vec<&String> = Vec::new();
        for (v, e) in m.pairs() {
            match map.get(v) {
                Some(r) => {
                    used.push(v);
                    t = &t * &r.num.pow(*e);
                    t = &t * &r.den.pow(exps[v] - e);
                }
                None => rest.push((v.clone(), *e)),
            }
        }
        for (v, e) in exps {
            if !used.contains(&v) {
                t = &t * &map[v].den.pow(*e);
            }
        }
        out = &out + &t.mul_monomial(&Monomial::from_pairs(rest));
    }
    out
}

/// Substitutes rational values into every atom, clearing denominators with
/// even powers so that signs are kept; the denominators are required nonzero.
pub fn subst_formula(f: &LFormula, map: &HashMap<String, Rat>) -> LFormula {
    let mut dens: Vec<AlgPoly> = Vec::new();
    for r in map.values() {
        for d in r.conditions() {
            if !dens.contains(&d) {
                dens.push(d);
            }
        }
    }
    let body = f.map_atoms(&mut |a: &Atom<AlgPoly>| {
        let p = a.poly();
        let mut exps = HashMap::new();
        for v in map.keys() {
            let d = p.degree_in(v);
            if d > 0 {
                exps.insert(v.clone(), d + d % 2);
            }
        }
        Formula::Atom(Atom::zero_rhs(subst_with(&p, map, &exps), a.rel))
    });
    let mut parts: Vec<LFormula> = dens.into_iter().map(|d| Formula::cmp0(d, Rel::Ne)).collect();
    parts.push(body);
    Formula::and(parts)
}

/// Map sending `from[i]` to `values[i]`.
pub fn binding(from: &[String], values: &[Rat]) -> HashMap<String, Rat> {
    from.iter().cloned().zip(values.iter().cloned()).collect()
}

pub fn vars_of(names: &[String]) -> Vec<Rat> {
    names.iter().map(|n| Rat::var(n)).collect()
}

pub fn constants(values: &[Q]) -> Vec<Rat> {
    values.iter().map(|v| Rat::constant(v.clone())).collect()
}

/// Renames the coordinates `from` to `to` in a formula.
pub fn rename(f: &LFormula, from: &[String], to: &[String]) -> LFormula {
    let map: HashMap<String, String> = from.iter().cloned().zip(to.iter().cloned()).collect();
    f.map_vars(&|v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone()))
}

/// Componentwise equality of two rational tuples, denominators cleared.
pub fn tuple_eq(a: &[Rat], b: &[Rat]) -> LFormula {
    let mut parts = Vec::new();
    for (x, y) in a.iter().zip(b) {
        for d in x.conditions().into_iter().chain(y.conditions()) {
            parts.push(Formula::cmp0(d, Rel::Ne));
        }
        let p = &(&x.num * &y.den) - &(&y.num * &x.den);
        parts.push(Formula::cmp0(p, Rel::Eq));
    }
    Formula::and(parts)
}

/// Applies a map written in the coordinates `args` to argument tuples.
pub fn apply(map: &[Rat], args: &[String], values: &[Rat]) -> Vec<Rat> {
    let b = binding(args, values);
    map.iter().map(|r| r.subst(&b)).collect()
}

pub fn apply_formula(f: &LFormula, args: &[String], values: &[Rat]) -> LFormula {
    subst_formula(f, &binding(args, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;
    use crate::formula::parse::{parse_algebraic, parse_alg_poly as pp};
    use crate::formula::render::formula_to_string;

    #[test]
    fn composition_of_reciprocals() {
        let inv = Rat::new(pp("1").unwrap(), pp("x").unwrap());
        let b = binding(&["x".to_string()], &[inv.clone()]);
        assert_eq!(inv.subst(&b), Rat::var("x"));
    }

    #[test]
    fn signs_survive_substitution() {
        let f = parse_algebraic("x > 0").unwrap();
        let g = subst_formula(&f, &binding(&["x".to_string()], &[Rat::new(pp("1").unwrap(), pp("y").unwrap())]));
        assert_eq!(formula_to_string(&g), "y != 0 & y > 0");
        let pt: HashMap<String, Q> = [("y".to_string(), q(-2))].into_iter().collect();
        assert!(!g.eval_qf(&pt).unwrap());
    }

    #[test]
    fn tuple_equality_clears_denominators() {
        let a = vec![Rat::new(pp("x").unwrap(), pp("x").unwrap())];
        let f = tuple_eq(&a, &[Rat::constant(q(1))]);
        assert_eq!(f.simplify_constants(), LFormula::True);
    }
}
