//! Dense univariate polynomials over ℚ.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Poly, Var};
use super::rat::{self, Q};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPoly(Vec<Q>);

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().map(|x| x.is_zero()).unwrap_or(false) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UPoly::new(c.iter().map(|&x| rat::q(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Q::one()])
    }

    pub fn constant(c: Q) -> Self {
        UPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        UPoly(vec![Q::zero(), Q::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &Q) -> Self {
        UPoly(vec![-r.clone(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Q) -> i32 {
        rat::sign(&self.eval(x))
    }

    pub fn scale(&self, c: &Q) -> Self {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.lc()))
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = rat::lcm_denoms(self.0.iter());
        let s: Vec<Q> = self.0.iter().map(|c| c * Q::from_integer(l.clone())).collect();
        let g = rat::gcd_numers(s.iter());
        let mut f = Q::from_integer(g);
        if s.last().unwrap().is_negative() {
            f = -f;
        }
        UPoly::new(s.into_iter().map(|c| c / &f).collect())
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * rat::q(i as i64)).collect())
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() || self.is_zero() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.0.clone();
        let dd = d.degree();
        let lc = d.lc();
        let mut qv = vec![Q::zero(); self.degree() - dd + 1];
        for i in (0..qv.len()).rev() {
            let c = &r[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            qv[i] = c;
        }
        r.truncate(dd);
        (UPoly::new(qv), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*a + t*b = g, g monic.
    pub fn ext_gcd(a: &UPoly, b: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (qq, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&qq * &s1);
            let t2 = &t0 - &(&qq * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Q::one() / r0.lc();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Squarefree part, primitive.
    pub fn squarefree(&self) -> UPoly {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut r = UPoly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// p(a + b x)
    pub fn compose_linear(&self, a: &Q, b: &Q) -> UPoly {
        let lin = UPoly::new(vec![a.clone(), b.clone()]);
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * &lin) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// p(g(x))
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * g) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// x^deg * p(1/x)
    pub fn reverse(&self) -> UPoly {
        let mut c = self.0.clone();
        c.reverse();
        UPoly::new(c)
    }

    pub fn sign_variations(&self) -> usize {
        let mut last = 0;
        let mut v = 0;
        for c in &self.0 {
            let s = rat::sign(c);
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }

    /// Univariate resultant.
    pub fn resultant(a: &UPoly, b: &UPoly) -> Q {
        if a.is_zero() || b.is_zero() {
            return Q::zero();
        }
        let (m, n) = (a.degree(), b.degree());
        if n == 0 {
            return rat_pow(&b.lc(), m);
        }
        if m == 0 {
            return rat_pow(&a.lc(), n);
        }
        let r = a.rem(b);
        if r.is_zero() {
            return Q::zero();
        }
        let sign = if (m * n) % 2 == 1 { -Q::one() } else { Q::one() };
        sign * rat_pow(&b.lc(), m - r.degree()) * UPoly::resultant(b, &r)
    }

    pub fn to_poly<V: Var>(&self, v: &V) -> Poly<V> {
        let mut p = Poly::zero();
        for (i, c) in self.0.iter().enumerate() {
            p = &p + &Poly::var_pow(v.clone(), i as u32).scale(c);
        }
        p
    }

    /// Converts a polynomial in at most the single variable `v`.
    pub fn from_poly<V: Var>(p: &Poly<V>, v: &V) -> Option<UPoly> {
        let cs = p.coeffs_in(v);
        let mut out = Vec::with_capacity(cs.len());
        for c in cs {
            out.push(c.constant_value()?);
        }
        Some(UPoly::new(out))
    }

    /// Upper bound on the absolute value of all complex roots (Cauchy).
    pub fn root_bound(&self) -> Q {
        let lc = self.lc().abs();
        let mut m = Q::zero();
        for c in &self.0[..self.0.len().saturating_sub(1)] {
            let t = c.abs() / &lc;
            if t > m {
                m = t;
            }
        }
        m + Q::one()
    }
}

pub fn rat_pow(x: &Q, e: usize) -> Q {
    num_traits::pow::pow(x.clone(), e)
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UPoly::new(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }
}

pub fn q_is_int(x: &BigRational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::q;

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let p = &UPoly::from_ints(&[-1, 1]).pow(2) * &UPoly::from_ints(&[2, 1]);
        assert_eq!(p.gcd(&p.derivative()), UPoly::from_ints(&[-1, 1]));
        assert_eq!(p.squarefree(), UPoly::from_ints(&[-2, 1, 1]));
    }

    #[test]
    fn ext_gcd_identity() {
        let a = UPoly::from_ints(&[-2, 0, 1]);
        let b = UPoly::from_ints(&[1, 1]);
        let (g, s, t) = UPoly::ext_gcd(&a, &b);
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), UPoly::one());
    }

    #[test]
    fn resultant_matches_roots() {
        // res(x^2 - 2, x - 3) = 3^2 - 2 up to sign conventions: (-1)^{2} * (9-2)
        let a = UPoly::from_ints(&[-2, 0, 1]);
        let b = UPoly::from_ints(&[-3, 1]);
        assert_eq!(UPoly::resultant(&a, &b), q(7));
        assert_eq!(UPoly::resultant(&b, &a), q(7));
        let c = UPoly::from_ints(&[0, 1, 1]);
        let d = UPoly::from_ints(&[1, 1]);
        assert_eq!(UPoly::resultant(&c, &d), q(0));
    }

    #[test]
    fn composition() {
        let p = UPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.compose_linear(&q(1), &q(2)), UPoly::from_ints(&[1, 4, 4]));
        assert_eq!(p.reverse(), UPoly::from_ints(&[1]));
    }
}
