//! Quotients of differential polynomials, as used for prolongations.

use crate::algebra::diff::{derive, DiffPoly, JetVar};
use crate::algebra::poly::Monomial;
use crate::algebra::rat::Q;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: DiffPoly,
    pub den: DiffPoly,
}

impl RationalFn {
    pub fn new(num: DiffPoly, den: DiffPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RationalFn { num, den }.simplified()
    }

    pub fn poly(p: DiffPoly) -> Self {
        RationalFn { num: p, den: DiffPoly::one() }
    }

    fn simplified(self) -> Self {
        if self.num.is_zero() {
            return RationalFn { num: DiffPoly::zero(), den: DiffPoly::one() };
        }
        if let Some(q) = self.num.exact_div(&self.den) {
            return RationalFn { num: q, den: DiffPoly::one() };
        }
        let mut pairs = Vec::new();
        for v in self.den.vars() {
            let low = |p: &DiffPoly| p.terms().map(|(m, _)| m.degree_in(&v)).min().unwrap_or(0);
            let e = low(&self.num).min(low(&self.den));
            if e > 0 {
                pairs.push((v, e));
            }
        }
        let g = DiffPoly::monomial(Monomial::from_pairs(pairs), Q::from_integer(1.into()));
        let num = self.num.exact_div(&g).unwrap();
        let (c, den) = self.den.exact_div(&g).unwrap().primitive();
        RationalFn { num: num.scale(&(Q::from_integer(1.into()) / c)), den }
    }

    /// D(n/d) = (D(n)·d − n·D(d)) / d².
    pub fn derive(&self) -> Self {
        if self.den.is_constant() {
            return RationalFn::new(derive(&self.num), self.den.clone());
        }
        let num = &(&derive(&self.num) * &self.den) - &(&self.num * &derive(&self.den));
        RationalFn::new(num, &self.den * &self.den)
    }

    /// Substitutes `v := value` in numerator and denominator.
    pub fn subst(&self, v: &JetVar, value: &RationalFn) -> Self {
        let (n, dn) = subst_poly(&self.num, v, value);
        let (d, dd) = subst_poly(&self.den, v, value);
        let b = &value.den;
        if dd >= dn {
            RationalFn::new(&n * &b.pow(dd - dn), d)
        } else {
            RationalFn::new(n, &d * &b.pow(dn - dd))
        }
    }

    pub fn eval(&self, point: &std::collections::HashMap<JetVar, Q>) -> Result<Option<Q>, JetVar> {
        let d = self.den.eval(point)?;
        if d == Q::from_integer(0.into()) {
            return Ok(None);
        }
        Ok(Some(self.num.eval(point)? / d))
    }
}

/// `f(a/b)·b^d` with `d = deg_v f`, and `d`.
fn subst_poly(f: &DiffPoly, v: &JetVar, value: &RationalFn) -> (DiffPoly, u32) {
    let d = f.degree_in(v);
    let coeffs = f.coeffs_in(v);
    let mut out = DiffPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let j = j as u32;
        let t = &(c * &value.num.pow(j)) * &value.den.pow(d - j);
        out = &out + &t;
    }
    (out, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse_poly as pp;

    #[test]
    fn quotient_rule() {
        let f = RationalFn::new(pp("1").unwrap(), pp("x").unwrap());
        let d = f.derive();
        assert_eq!(d, RationalFn::new(pp("-x'").unwrap(), pp("x^2").unwrap()));
    }

    #[test]
    fn substitution_clears_denominators() {
        let f = RationalFn::poly(pp("x'^2 + x").unwrap());
        let v = RationalFn::new(pp("1").unwrap(), pp("x").unwrap());
        let g = f.subst(&JetVar::new("x", 1), &v);
        assert_eq!(g, RationalFn::new(pp("1 + x^3").unwrap(), pp("x^2").unwrap()));
    }

    #[test]
    fn exact_quotients_collapse() {
        let f = RationalFn::new(pp("x^2 - 1").unwrap(), pp("x - 1").unwrap());
        assert_eq!(f, RationalFn::poly(pp("x + 1").unwrap()));
    }
}
