//! Negation and disjunctive normal forms.

use super::ast::{Atom, Formula};
use crate::algebra::poly::{Poly, Var};
use crate::error::{Error, Result};

pub const DEFAULT_DNF_CAP: usize = 100_000;

/// Pushes negations down to the atoms, rewriting negated relations positively.
pub fn nnf<V: Var>(f: &Formula<Poly<V>>) -> Formula<Poly<V>> {
    to_nnf(f, false)
}

fn to_nnf<V: Var>(f: &Formula<Poly<V>>, neg: bool) -> Formula<Poly<V>> {
    match f {
        Formula::True => if neg { Formula::False } else { Formula::True },
        Formula::False => if neg { Formula::True } else { Formula::False },
        Formula::Atom(a) => Formula::Atom(if neg { a.negate() } else { a.clone() }),
        Formula::Not(g) => to_nnf(g, !neg),
        Formula::And(gs) => {
            let parts = gs.iter().map(|g| to_nnf(g, neg)).collect();
            if neg { Formula::Or(parts) } else { Formula::And(parts) }
        }
        Formula::Or(gs) => {
            let parts = gs.iter().map(|g| to_nnf(g, neg)).collect();
            if neg { Formula::And(parts) } else { Formula::Or(parts) }
        }
        Formula::Exists(vs, g) => {
            let b = Box::new(to_nnf(g, neg));
            if neg { Formula::Forall(vs.clone(), b) } else { Formula::Exists(vs.clone(), b) }
        }
        Formula::Forall(vs, g) => {
            let b = Box::new(to_nnf(g, neg));
            if neg { Formula::Exists(vs.clone(), b) } else { Formula::Forall(vs.clone(), b) }
        }
    }
}

pub type Clause<V> = Vec<Atom<Poly<V>>>;

/// DNF as a list of conjunctions of literals; aborts once the literal count exceeds `cap`.
pub fn dnf_clauses<V: Var>(f: &Formula<Poly<V>>, cap: usize) -> Result<Vec<Clause<V>>> {
    if !f.is_quantifier_free() {
        return Err(Error::User("normal form requires a quantifier-free formula".into()));
    }
    let n = nnf(f);
    let out = dnf_rec(&n, cap)?;
    Ok(out)
}

fn size<V: Var>(cs: &[Clause<V>]) -> usize {
    cs.iter().map(|c| c.len().max(1)).sum()
}

fn dnf_rec<V: Var>(f: &Formula<Poly<V>>, cap: usize) -> Result<Vec<Clause<V>>> {
    match f {
        Formula::True => Ok(vec![vec![]]),
        Formula::False => Ok(vec![]),
        Formula::Atom(a) => Ok(vec![vec![a.clone()]]),
        Formula::Or(gs) => {
            let mut out = Vec::new();
            for g in gs {
                out.extend(dnf_rec(g, cap)?);
                if size(&out) > cap {
                    return Err(cap_error(cap));
                }
            }
            Ok(out)
        }
        Formula::And(gs) => {
            let mut acc: Vec<Clause<V>> = vec![vec![]];
            for g in gs {
                let part = dnf_rec(g, cap)?;
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for b in &part {
                        let mut c = a.clone();
                        for lit in b {
                            if !c.contains(lit) {
                                c.push(lit.clone());
                            }
                        }
                        next.push(c);
                    }
                }
                if size(&next) > cap {
                    return Err(cap_error(cap));
                }
                acc = next;
            }
            Ok(acc)
        }
        Formula::Not(_) | Formula::Exists(..) | Formula::Forall(..) => {
            unreachable!("negation normal form has no inner negations or quantifiers")
        }
    }
}

fn cap_error(cap: usize) -> Error {
    Error::Resource(format!("disjunctive normal form exceeds {cap} literals"))
}

/// DNF as a formula (disjunction of conjunctions of literals).
pub fn to_dnf<V: Var>(f: &Formula<Poly<V>>) -> Result<Formula<Poly<V>>> {
    to_dnf_capped(f, DEFAULT_DNF_CAP)
}

pub fn to_dnf_capped<V: Var>(f: &Formula<Poly<V>>, cap: usize) -> Result<Formula<Poly<V>>> {
    let cs = dnf_clauses(f, cap)?;
    Ok(clauses_to_formula(cs))
}

pub fn clauses_to_formula<V: Var>(cs: Vec<Clause<V>>) -> Formula<Poly<V>> {
    let mut disj: Vec<Formula<Poly<V>>> = cs
        .into_iter()
        .map(|c| {
            let mut lits: Vec<Formula<Poly<V>>> = c.into_iter().map(Formula::Atom).collect();
            match lits.len() {
                0 => Formula::True,
                1 => lits.pop().unwrap(),
                _ => Formula::And(lits),
            }
        })
        .collect();
    if disj.iter().any(|d| *d == Formula::True) {
        return Formula::True;
    }
    match disj.len() {
        0 => Formula::False,
        1 => disj.pop().unwrap(),
        _ => Formula::Or(disj),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::ast::Rel;
    use crate::formula::parse::parse_algebraic;
    use crate::formula::render::formula_to_string;

    #[test]
    fn negated_conjunction() {
        let f = parse_algebraic("~(p = 0 & q > 0)").unwrap();
        assert_eq!(formula_to_string(&to_dnf(&f).unwrap()), "p != 0 | q <= 0");
    }

    #[test]
    fn atom_is_fixed_point() {
        let f = parse_algebraic("p < 1").unwrap();
        assert_eq!(to_dnf(&f).unwrap(), f);
    }

    #[test]
    fn distribution() {
        let f = parse_algebraic("(a = 0 | b = 0) & c = 0").unwrap();
        assert_eq!(formula_to_string(&to_dnf(&f).unwrap()), "a = 0 & c = 0 | b = 0 & c = 0");
    }

    #[test]
    fn cap_is_enforced() {
        let mut parts = Vec::new();
        for i in 0..20 {
            parts.push(format!("(a{i} = 0 | b{i} = 0)"));
        }
        let f = parse_algebraic(&parts.join(" & ")).unwrap();
        assert!(matches!(to_dnf(&f), Err(Error::Resource(_))));
        let _ = Rel::Eq;
    }
}
