//! Nested symmetric neighbourhoods 𝔘₁ ⊇ 𝔘₂ ⊇ … of the identity on which
//! products of up to n factors are defined.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::diff::AlgPoly;
use crate::algebra::rat::{qf, Q};
use crate::cad::lift::CadOptions;
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LFormula, Rel};

use super::decide::{check_implication, describe, Verdict};
use super::expr::{tuple_eq, Rat};
use super::LocalGroupData;

pub const MAX_DEPTH: usize = 6;
/// Box radii are halved from 1 down to 2^-MIN_EXP.
const MIN_EXP: u32 = 16;

/// 𝔘₁, …, 𝔘ₙ as formulas over the coordinates `x`.
pub fn build_product_neighbourhoods(d: &LocalGroupData, n: usize, opts: &CadOptions) -> Result<Vec<LFormula>> {
    if n > MAX_DEPTH {
        return Err(Error::user("n exceeds supported depth"));
    }
    if n == 0 {
        return Err(Error::user("n must be at least 1"));
    }
    let x = d.x.clone();
    let vx = d.var(0);
    let ix = d.inv_at(&vx);
    let u1 = describe(&Formula::and(vec![d.u.clone(), d.at(&d.u, &ix)]), &x, opts)?;
    let mut out = vec![u1.clone()];
    if n == 1 {
        return Ok(out);
    }
    if is_closed(&u1) {
        if let Some(all) = whole(d, &u1, n, opts)? {
            return Ok(all);
        }
    }
    // C ∧ C∘i is symmetric for every C once i is an involution on 𝔘₁.
    let involution = holds(check_implication(&x, &u1, &tuple_eq(&d.inv_at(&ix), &vx), opts))?;
    let symmetric = |f: &LFormula| -> Result<bool> {
        if involution {
            return Ok(true);
        }
        holds(check_implication(&x, f, &d.at(f, &ix), opts))
    };
    let c = d.identity.clone();
    // box ∧ box∘i on its own when that already sits inside `prev`.
    let candidate = |r: &Q, prev: &LFormula| -> Result<LFormula> {
        let b = boxed(&x, &c, r);
        let bb = Formula::and(vec![b.clone(), d.at(&b, &ix)]);
        if holds(check_implication(&x, &bb, prev, opts))? {
            return simplify(&bb, &x, opts);
        }
        let cand = Formula::and(vec![b, prev.clone()]);
        simplify(&Formula::and(vec![cand.clone(), d.at(&cand, &ix)]), &x, opts)
    };
    let mut u2 = None;
    for e in 0..=MIN_EXP {
        let r = qf(1, 1 << e);
        let cand = Formula::and(vec![boxed(&x, &c, &r), u1.clone()]);
        let pair = Formula::and(vec![cand.clone(), d.on(&cand, 1)]);
        if !holds(check_implication(&d.xy(), &pair, &d.o, opts))? {
            continue;
        }
        let sym = candidate(&r, &u1)?;
        if symmetric(&sym)? {
            u2 = Some(sym);
            break;
        }
    }
    let u2 = u2.ok_or_else(|| Error::user("no box found"))?;
    out.push(u2.clone());
    if n == 2 {
        return Ok(out);
    }
    let s2 = (0..=MIN_EXP)
        .map(|e| qf(1, 1 << e))
        .find(|s| matches!(check_implication(&x, &boxed(&x, &c, s), &u2, opts), Verdict::Holds))
        .ok_or_else(|| Error::user("no box found"))?;
    let target: Vec<(Q, Q)> = c.iter().map(|ci| (ci - &s2, ci + &s2)).collect();
    let mut prev = u2;
    for k in 3..=n {
        let mut next = None;
        for e in 0..=MIN_EXP {
            let r = qf(1, 1 << e);
            let bx: Vec<Interval> = c.iter().map(|ci| Interval { lo: ci - &r, hi: ci + &r }).collect();
            if !products_inside(d, &bx, k - 1, &target) {
                continue;
            }
            let sym = candidate(&r, &prev)?;
            if symmetric(&sym)? {
                next = Some(sym);
                break;
            }
        }
        let u = next.ok_or_else(|| Error::user("no box found"))?;
        out.push(u.clone());
        prev = u;
    }
    Ok(out)
}

/// Decomposition-based description when it fits the budget.
fn simplify(f: &LFormula, x: &[String], opts: &CadOptions) -> Result<LFormula> {
    match describe(f, x, opts) {
        Err(Error::Resource(_)) => Ok(crate::cad::qe::tidy(f)),
        r => r,
    }
}

fn holds(v: Verdict) -> Result<bool> {
    match v {
        Verdict::Holds => Ok(true),
        Verdict::Fails(_) => Ok(false),
        Verdict::Undecided(m) => Err(Error::resource(m)),
    }
}

/// No strict inequalities: the set is closed, and the unbounded box is used.
fn is_closed(f: &LFormula) -> bool {
    f.atoms().iter().all(|a| matches!(a.rel, Rel::Eq | Rel::Le | Rel::Ge))
}

/// 𝔘ₖ = 𝔘₁ for every k, when the certificates go through.
fn whole(d: &LocalGroupData, u1: &LFormula, n: usize, opts: &CadOptions) -> Result<Option<Vec<LFormula>>> {
    let x = d.x.clone();
    let ix = d.inv_at(&d.var(0));
    if !holds(check_implication(&x, u1, &d.at(u1, &ix), opts))? {
        return Ok(None);
    }
    let pair = Formula::and(vec![u1.clone(), d.on(u1, 1)]);
    if !holds(check_implication(&d.xy(), &pair, &d.o, opts))? {
        return Ok(None);
    }
    for k in 3..=n {
        let copies: Vec<Vec<Rat>> = (3..3 + k - 1).map(|t| d.var(t)).collect();
        let vars: Vec<String> = (3..3 + k - 1).flat_map(|t| d.copy(t)).collect();
        let inside = Formula::and((3..3 + k - 1).map(|t| d.on(u1, t)).collect());
        let mut acc = copies[0].clone();
        for c in &copies[1..] {
            acc = d.mul_at(&acc, c);
            if !holds(check_implication(&vars, &inside, &d.at(u1, &acc), opts))? {
                return Ok(None);
            }
        }
    }
    Ok(Some(vec![u1.clone(); n]))
}

/// The box |xᵢ − cᵢ| < r.
fn boxed(x: &[String], c: &[Q], r: &Q) -> LFormula {
    let mut parts = Vec::new();
    for (v, ci) in x.iter().zip(c) {
        let d = &AlgPoly::var(v.clone()) - &AlgPoly::constant(ci.clone());
        parts.push(Formula::cmp0(&d - &AlgPoly::constant(r.clone()), Rel::Lt));
        parts.push(Formula::cmp0(&(-d) - &AlgPoly::constant(r.clone()), Rel::Lt));
    }
    Formula::and(parts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    fn point(q: Q) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    fn pow(&self, e: u32) -> Interval {
        let mut out = Interval::point(Q::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        if e % 2 == 0 && self.lo < Q::zero() && self.hi > Q::zero() {
            out.lo = Q::zero();
        }
        out
    }
}

/// Enclosure of a polynomial over a box of intervals.
pub fn enclose(p: &AlgPoly, at: &HashMap<String, Interval>) -> Option<Interval> {
    let mut acc = Interval::point(Q::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::point(c.clone());
        for (v, e) in m.pairs() {
            t = t.mul(&at.get(v)?.pow(*e));
        }
        acc = acc.add(&t);
    }
    Some(acc)
}

fn enclose_rat(r: &Rat, at: &HashMap<String, Interval>) -> Option<Interval> {
    let n = enclose(&r.num, at)?;
    let d = enclose(&r.den, at)?;
    if d.lo <= Q::zero() && d.hi >= Q::zero() {
        return None;
    }
    let inv = Interval { lo: Q::one() / &d.hi, hi: Q::one() / &d.lo };
    Some(n.mul(&inv))
}

/// Every left-nested product of 2..=k factors from the box lies strictly
/// inside the target box.
fn products_inside(d: &LocalGroupData, bx: &[Interval], k: usize, target: &[(Q, Q)]) -> bool {
    let mut acc = bx.to_vec();
    for _ in 1..k {
        let at: HashMap<String, Interval> =
            d.x.iter().cloned().zip(acc.iter().cloned()).chain(d.y.iter().cloned().zip(bx.iter().cloned())).collect();
        let next: Option<Vec<Interval>> = d.mul.iter().map(|r| enclose_rat(r, &at)).collect();
        let Some(next) = next else { return false };
        if !next.iter().zip(target).all(|(i, (lo, hi))| i.lo > *lo && i.hi < *hi) {
            return false;
        }
        acc = next;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;
    use crate::formula::parse::parse_alg_poly;

    #[test]
    fn enclosures_are_sound() {
        let p = parse_alg_poly("x^2 - x*y").unwrap();
        let at: HashMap<String, Interval> = [
            ("x".to_string(), Interval { lo: q(-1), hi: q(2) }),
            ("y".to_string(), Interval { lo: q(0), hi: q(1) }),
        ]
        .into_iter()
        .collect();
        let i = enclose(&p, &at).unwrap();
        for (xv, yv) in [(-1, 0), (2, 0), (2, 1), (0, 1), (-1, 1)] {
            let v = q(xv * xv - xv * yv);
            assert!(i.lo <= v && v <= i.hi);
        }
        assert_eq!(i.lo, q(-2));
    }
}
