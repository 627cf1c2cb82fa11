//! Real root isolation by Descartes bisection, with exact detection of rational roots.

use num_traits::{Signed, Zero};

use crate::algebra::rat::{self, q, Q};
use crate::algebra::upoly::UPoly;

/// A real root: either exactly rational or isolated in an open interval whose
/// endpoints are not roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Exact(Q),
    Interval(Q, Q),
}

impl Root {
    pub fn lo(&self) -> &Q {
        match self {
            Root::Exact(r) => r,
            Root::Interval(a, _) => a,
        }
    }

    pub fn hi(&self) -> &Q {
        match self {
            Root::Exact(r) => r,
            Root::Interval(_, b) => b,
        }
    }
}

/// Number of sign variations of the Descartes transform of `p` on (a, b);
/// 0 or 1 are exact root counts.
pub fn descartes_count(p: &UPoly, a: &Q, b: &Q) -> usize {
    let t = p.compose_linear(a, &(b - a));
    let r = t.reverse().compose_linear(&q(1), &q(1));
    r.sign_variations()
}

/// Isolates all real roots of a nonzero polynomial, in increasing order.
pub fn isolate(p: &UPoly) -> Vec<Root> {
    if p.is_zero() || p.degree() == 0 {
        return vec![];
    }
    let sq = p.squarefree();
    let mut p = sq.clone();
    let mut out = Vec::new();
    if p.coeff(0).is_zero() {
        out.push(Root::Exact(Q::zero()));
        p = p.divrem(&UPoly::x()).0;
    }
    if p.degree() == 0 {
        return out;
    }
    let b = rat::pow2_at_least(&p.root_bound()) * q(2);
    let mut stack = vec![(Q::zero(), b.clone()), (-b, Q::zero())];
    let mut found = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        if p.degree() == 0 {
            break;
        }
        let v = descartes_count(&p, &lo, &hi);
        if v == 0 {
            continue;
        }
        if v == 1 {
            found.push((lo, hi));
            continue;
        }
        let mid = rat::midpoint(&lo, &hi);
        if p.eval(&mid).is_zero() {
            out.push(Root::Exact(mid.clone()));
            p = p.divrem(&UPoly::linear_root(&mid)).0;
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    // Intervals found before a later deflation still isolate one root of the
    // deflated polynomial, since deflated roots sat at split points.
    for (lo, hi) in found {
        out.push(exactify(&sq, &p, lo, hi));
    }
    out.sort_by(|x, y| x.lo().cmp(y.lo()));
    out
}

/// Detects a rational root inside an isolating interval of the deflated
/// polynomial `p`, and moves endpoints off roots of the full squarefree `sq`.
fn exactify(sq: &UPoly, p: &UPoly, mut lo: Q, mut hi: Q) -> Root {
    let pp = p.primitive();
    let lc = pp.lc().abs();
    // a rational root n/d has d | lc, and distinct such rationals are 1/lc^2 apart
    let target = Q::from_integer(1.into()) / (&lc * &lc);
    let slo = pp.sign_at(&lo);
    loop {
        let wide = &hi - &lo >= target;
        let on_root = sq.sign_at(&lo) == 0 || sq.sign_at(&hi) == 0;
        if !wide && !on_root {
            break;
        }
        let mid = rat::midpoint(&lo, &hi);
        let s = pp.sign_at(&mid);
        if s == 0 {
            return Root::Exact(mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cand = rat::simplest_between(&lo, &hi);
    if pp.eval(&cand).is_zero() {
        return Root::Exact(cand);
    }
    Root::Interval(lo, hi)
}

/// Halves an isolating interval of a squarefree `p`.
pub fn refine(p: &UPoly, root: &Root) -> Root {
    match root {
        Root::Exact(_) => root.clone(),
        Root::Interval(lo, hi) => {
            let mid = rat::midpoint(lo, hi);
            let s = p.sign_at(&mid);
            if s == 0 {
                Root::Exact(mid)
            } else if s == p.sign_at(lo) {
                Root::Interval(mid, hi.clone())
            } else {
                Root::Interval(lo.clone(), mid)
            }
        }
    }
}

/// A rational strictly between two distinct real numbers given by roots of
/// (possibly different) squarefree polynomials, refining as needed.
pub fn rational_between(pa: &UPoly, a: &Root, pb: &UPoly, b: &Root) -> Q {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.hi() < b.lo() {
            let w = (b.lo() - a.hi()) / q(4);
            return rat::simplest_between(&(a.hi() + &w), &(b.lo() - &w));
        }
        a = refine(pa, &a);
        b = refine(pb, &b);
    }
}

/// A rational strictly below the root.
pub fn rational_below(r: &Root) -> Q {
    let lo = r.lo();
    if lo.is_positive() {
        return Q::zero();
    }
    let f = lo.floor();
    if &f == lo && matches!(r, Root::Exact(_)) {
        f - q(1)
    } else {
        f
    }
}

/// A rational strictly above the root.
pub fn rational_above(r: &Root) -> Q {
    let hi = r.hi();
    if hi.is_negative() {
        return Q::zero();
    }
    let c = hi.ceil();
    if &c == hi && matches!(r, Root::Exact(_)) {
        c + q(1)
    } else {
        c
    }
}
