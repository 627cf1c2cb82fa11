//! Sparse multivariate polynomials over ℚ, generic in the variable type.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rat::{self, Q};

pub trait Var: Clone + Ord + Eq + Hash + Debug {}
impl<T: Clone + Ord + Eq + Hash + Debug> Var for T {}

/// A power product, kept sorted by variable with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial<V: Var>(Vec<(V, u32)>);

impl<V: Var> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(V, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(V, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.0.iter().find(|p| &p.0 == v).map(|p| p.1).unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes `v` from the monomial, returning its exponent.
    pub fn without(&self, v: &V) -> (Self, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|p| {
                if &p.0 == v {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }

    pub fn with_exp(&self, v: &V, e: u32) -> Self {
        let (rest, _) = self.without(v);
        rest.mul(&Monomial::var(v.clone(), e))
    }

    /// Ordering used for display: compare from the largest variable downwards.
    pub fn display_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.0.iter().rev();
        let b = other.0.iter().rev();
        for (x, y) in a.zip(b) {
            let c = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<V: Var> {
    terms: BTreeMap<Monomial<V>, Q>,
}

impl<V: Var> Default for Poly<V> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<V: Var> Poly<V> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(c: i64) -> Self {
        Poly::constant(rat::q(c))
    }

    pub fn var(v: V) -> Self {
        Poly::monomial(Monomial::var(v, 1), Q::one())
    }

    pub fn var_pow(v: V, e: u32) -> Self {
        Poly::monomial(Monomial::var(v, e), Q::one())
    }

    pub fn monomial(m: Monomial<V>, c: Q) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial<V>, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &Q)> + DoubleEndedIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn vars(&self) -> BTreeSet<V> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.pairs() {
                s.insert(v.clone());
            }
        }
        s
    }

    pub fn contains_var(&self, v: &V) -> bool {
        self.terms.keys().any(|m| m.degree_in(v) > 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &V) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>) -> Self {
        Poly { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, index = power.
    pub fn coeffs_in(&self, v: &V) -> Vec<Poly<V>> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            out[e as usize].add_term(rest, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    pub fn coeff_in(&self, v: &V, k: u32) -> Poly<V> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn from_coeffs_in(v: &V, coeffs: &[Poly<V>]) -> Self {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let mk = Monomial::var(v.clone(), k as u32);
            for (m, x) in &c.terms {
                out.add_term(m.mul(&mk), x.clone());
            }
        }
        out
    }

    pub fn leading_coeff_in(&self, v: &V) -> Poly<V> {
        self.coeff_in(v, self.degree_in(v))
    }

    /// Partial derivative with respect to `v`.
    pub fn diff(&self, v: &V) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(v);
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * rat::q(e as i64));
            }
        }
        out
    }

    /// Substitutes a polynomial for `v`.
    pub fn subst(&self, v: &V, val: &Poly<V>) -> Self {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * val) + c;
        }
        acc
    }

    pub fn subst_many(&self, map: &HashMap<V, Poly<V>>) -> Self {
        let mut out = Poly::zero();
        let mut cache: HashMap<(V, u32), Poly<V>> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            let mut keep = Vec::new();
            for (v, e) in m.pairs() {
                if let Some(val) = map.get(v) {
                    let pw = cache.entry((v.clone(), *e)).or_insert_with(|| val.pow(*e)).clone();
                    t = &t * &pw;
                } else {
                    keep.push((v.clone(), *e));
                }
            }
            out = &out + &t.mul_monomial(&Monomial::from_pairs(keep));
        }
        out
    }

    pub fn eval_var(&self, v: &V, x: &Q) -> Self {
        self.subst(v, &Poly::constant(x.clone()))
    }

    /// Exact evaluation; returns the first variable without an assignment on failure.
    pub fn eval(&self, point: &HashMap<V, Q>) -> Result<Q, V> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let x = point.get(v).ok_or_else(|| v.clone())?;
                t *= num_traits::pow::pow(x.clone(), *e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn map_vars<W: Var>(&self, f: impl Fn(&V) -> W) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let pairs = m.pairs().iter().map(|(v, e)| (f(v), *e)).collect();
            out.add_term(Monomial::from_pairs(pairs), c.clone());
        }
        out
    }

    pub fn try_map_vars<W: Var, E>(&self, f: impl Fn(&V) -> Result<W, E>) -> Result<Poly<W>, E> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in m.pairs() {
                pairs.push((f(v)?, *e));
            }
            out.add_term(Monomial::from_pairs(pairs), c.clone());
        }
        Ok(out)
    }

    /// Least common multiple of denominators times gcd-normalised numerators:
    /// returns (c, p) with self = c * p, p having coprime integer coefficients
    /// and positive leading coefficient in the canonical term order.
    pub fn primitive(&self) -> (Q, Poly<V>) {
        if self.is_zero() {
            return (Q::zero(), Poly::zero());
        }
        let l = rat::lcm_denoms(self.terms.values());
        let scaled: Vec<Q> = self.terms.values().map(|c| c * Q::from_integer(l.clone())).collect();
        let g = rat::gcd_numers(scaled.iter());
        let mut c = Q::new(g, l);
        let lead = self.terms.values().next_back().unwrap();
        if lead.is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&(Q::one() / c)))
    }

    /// Like `primitive` but keeps the sign (divides by a positive constant only).
    pub fn primitive_positive(&self) -> (Q, Poly<V>) {
        let (c, p) = self.primitive();
        if c.is_negative() {
            (-c, -p)
        } else {
            (c, p)
        }
    }

    /// Leading term in the canonical (storage) order.
    pub fn max_term(&self) -> Option<(&Monomial<V>, &Q)> {
        self.terms.iter().next_back()
    }

    /// Terms sorted for display (largest first).
    pub fn display_terms(&self) -> Vec<(&Monomial<V>, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.display_cmp(a.0));
        v
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly<V>) -> Option<Poly<V>> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Q::one() / c)));
        }
        let v = d.vars().into_iter().next_back().unwrap();
        let db = d.degree_in(&v);
        let lc = d.coeff_in(&v, db);
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            let da = rem.degree_in(&v);
            if da < db {
                return None;
            }
            let ca = rem.coeff_in(&v, da);
            let t = ca.exact_div(&lc)?;
            let t = t.mul_monomial(&Monomial::var(v.clone(), da - db));
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Pseudo-division in `v`: returns (d, q, r) with lc^d * self = q * g + r and
    /// deg_v r < deg_v g. `d` counts the reduction steps that multiplied by a
    /// non-unit leading coefficient.
    pub fn pseudo_divide(&self, g: &Poly<V>, v: &V) -> Option<(u32, Poly<V>, Poly<V>)> {
        let dg = g.degree_in(v);
        if g.is_zero() || dg == 0 {
            return None;
        }
        let b = g.coeff_in(v, dg);
        let b_is_one = b.constant_value().map(|c| c.is_one()).unwrap_or(false);
        let mut r = self.clone();
        let mut quo = Poly::zero();
        let mut d = 0u32;
        while !r.is_zero() && r.degree_in(v) >= dg {
            let dr = r.degree_in(v);
            let lr = r.coeff_in(v, dr);
            let t = lr.mul_monomial(&Monomial::var(v.clone(), dr - dg));
            if b_is_one {
                r = &r - &(&t * g);
                quo = &quo + &t;
            } else {
                r = &(&r * &b) - &(&t * g);
                quo = &(&quo * &b) + &t;
                d += 1;
            }
        }
        Some((d, quo, r))
    }

    /// Removes common rational content; keeps sign of leading term positive.
    pub fn normalized(&self) -> Poly<V> {
        self.primitive().1
    }

    pub fn numeric_content_lcm(&self) -> BigInt {
        rat::lcm_denoms(self.terms.values())
    }
}

impl<'a, V: Var> Add<&'a Poly<V>> for &'a Poly<V> {
    type Output = Poly<V>;
    fn add(self, o: &Poly<V>) -> Poly<V> {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, V: Var> Sub<&'a Poly<V>> for &'a Poly<V> {
    type Output = Poly<V>;
    fn sub(self, o: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, V: Var> Mul<&'a Poly<V>> for &'a Poly<V> {
    type Output = Poly<V>;
    fn mul(self, o: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl<V: Var> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<V: Var> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl<V: Var> $tr<Poly<V>> for Poly<V> {
            type Output = Poly<V>;
            fn $f(self, o: Poly<V>) -> Poly<V> {
                (&self).$f(&o)
            }
        }
        impl<'a, V: Var> $tr<&'a Poly<V>> for Poly<V> {
            type Output = Poly<V>;
            fn $f(self, o: &Poly<V>) -> Poly<V> {
                (&self).$f(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

pub fn qpow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow::pow(x.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{q, qf};

    type P = Poly<usize>;

    fn x() -> P {
        P::var(0)
    }
    fn y() -> P {
        P::var(1)
    }

    #[test]
    fn arithmetic_and_degrees() {
        let p = &(&x() * &x()) + &y();
        assert_eq!(p.degree_in(&0), 2);
        assert_eq!(p.total_degree(), 2);
        let sq = &p * &p;
        assert_eq!(sq.num_terms(), 3);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = &x() + &y();
        let b = &x() - &y();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert!(prod.exact_div(&(&x() + &P::int(1))).is_none());
    }

    #[test]
    fn pseudo_division_examples() {
        // 2*x^2 = x * (2x) + 0 with d = 1
        let f = &x() * &x();
        let g = x().scale(&q(2));
        let (d, qq, r) = f.pseudo_divide(&g, &0).unwrap();
        assert_eq!((d, qq, r), (1, x(), P::zero()));
        // monic divisor: no multiplications
        let f = &(&y() * &y()) - &x();
        let g = &y() - &x();
        let (d, qq, r) = f.pseudo_divide(&g, &1).unwrap();
        assert_eq!(d, 0);
        assert_eq!(qq, &y() + &x());
        assert_eq!(r, &(&x() * &x()) - &x());
        // degree 0 dividend
        let (d, qq, r) = y().pseudo_divide(&(&(&x() * &x()) + &P::int(1)), &0).unwrap();
        assert_eq!((d, qq.is_zero(), r), (0, true, y()));
        assert!(y().pseudo_divide(&y(), &0).is_none());
    }

    #[test]
    fn primitive_part() {
        let p = &x().scale(&qf(-2, 3)) + &P::constant(qf(4, 9));
        let (c, pp) = p.primitive();
        assert_eq!(c, qf(-2, 9));
        assert_eq!(pp, &x().scale(&q(3)) - &P::int(2));
    }

    #[test]
    fn subst_and_eval() {
        let p = &(&x() * &y()) + &P::int(1);
        let s = p.subst(&1, &(&x() + &P::int(1)));
        let mut pt = HashMap::new();
        pt.insert(0usize, q(2));
        assert_eq!(s.eval(&pt).unwrap(), q(7));
        assert_eq!(p.eval(&pt), Err(1));
    }
}
