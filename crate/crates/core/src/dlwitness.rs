//! Formal power-series solutions lifted from a regular algebraic zero.

use std::collections::HashMap;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::diff::{derive, indeterminates, order, separant, DiffPoly, JetVar};
use crate::algebra::rat::{self, Q};
use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

/// One continuation step: the coefficient of the new top jet in `derive^k(f)`
/// next to the separant, both evaluated at the jet reached so far.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftStep {
    pub order: usize,
    pub coefficient: Q,
    pub separant: Q,
}

/// Truncated Taylor series `Z(t) = Σ c_i t^i` with a certified residual order
/// (`None` when `f(Z)` vanishes identically).
#[derive(Clone, Debug, PartialEq)]
pub struct JetSeries {
    pub coefficients: Vec<Q>,
    pub residual_order: Option<usize>,
    pub trace: Vec<LiftStep>,
}

impl JetSeries {
    /// `Z^(i)(0) = i!·c_i`.
    pub fn derivatives(&self) -> Vec<Q> {
        self.coefficients.iter().enumerate().map(|(i, c)| c * Q::from_integer(rat::factorial(i as u32))).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(rat::render).collect::<Vec<_>>(),
            "residual_order": match self.residual_order {
                Some(r) => json!(r),
                None => json!("inf"),
            },
        })
    }
}

fn single_name(f: &DiffPoly) -> Result<String> {
    let names = indeterminates(f);
    if names.len() != 1 {
        return Err(Error::User("lift needs a nonconstant polynomial in one differential indeterminate".into()));
    }
    Ok(names.into_iter().next().unwrap())
}

fn at(f: &DiffPoly, name: &str, jet: &[Q]) -> Q {
    let point: HashMap<JetVar, Q> =
        jet.iter().enumerate().map(|(j, x)| (JetVar::new(name, j as u32), x.clone())).collect();
    f.eval(&point).expect("jet covers the polynomial")
}

/// The series with initial jet `alpha` solving `f = 0` up to order `k`.
pub fn lift_jet(f: &DiffPoly, alpha: &[Q], k: usize) -> Result<JetSeries> {
    let name = single_name(f)?;
    let n = order(f, &name).unwrap() as usize;
    if alpha.len() != n + 1 {
        return Err(Error::User(format!("initial jet has length {}, expected {}", alpha.len(), n + 1)));
    }
    if k < n {
        return Err(Error::User(format!("truncation order {k} is below the order {n} of f")));
    }
    if !at(f, &name, alpha).is_zero() {
        return Err(Error::User("not a zero".into()));
    }
    let s = separant(f)?;
    let s_val = at(&s, &name, alpha);
    if s_val.is_zero() {
        return Err(Error::User("singular zero (separant vanishes)".into()));
    }
    let mut jet: Vec<Q> = alpha.to_vec();
    let mut g = f.clone();
    let mut trace = Vec::new();
    for step in 1..=(k - n) {
        g = derive(&g);
        let top = JetVar::new(&name, (n + step) as u32);
        let coeff = g.coeff_in(&top, 1);
        let rest = g.coeff_in(&top, 0);
        let c = at(&coeff, &name, &jet);
        if c.is_zero() {
            return Err(Error::Internal(format!("separant vanished during continuation at order {}", n + step)));
        }
        let value = -at(&rest, &name, &jet) / &c;
        trace.push(LiftStep { order: n + step, coefficient: c, separant: s_val.clone() });
        jet.push(value);
    }
    let coefficients: Vec<Q> =
        jet.iter().enumerate().map(|(i, a)| a / Q::from_integer(rat::factorial(i as u32))).collect();
    let mut z = JetSeries { coefficients, residual_order: None, trace };
    z.residual_order = verify_residual(f, &z);
    Ok(z)
}

/// Order of vanishing at t = 0 of `f(Z)` computed exactly from the truncated
/// series; `None` when `f(Z)` is identically zero.
pub fn verify_residual(f: &DiffPoly, z: &JetSeries) -> Option<usize> {
    let series = UPoly::new(z.coefficients.clone());
    let mut derivs: HashMap<u32, UPoly> = HashMap::new();
    let mut total = UPoly::zero();
    for (m, c) in f.terms() {
        let mut t = UPoly::constant(c.clone());
        for (v, e) in m.pairs() {
            let d = derivs.entry(v.order).or_insert_with(|| {
                let mut d = series.clone();
                for _ in 0..v.order {
                    d = d.derivative();
                }
                d
            });
            t = &t * &d.pow(*e);
        }
        total = &total + &t;
    }
    if total.is_zero() {
        return None;
    }
    total.coeffs().iter().position(|c| !c.is_zero())
}

/// Series for `Z` given directly by its coefficients.
pub fn series(coefficients: Vec<Q>) -> JetSeries {
    JetSeries { coefficients, residual_order: None, trace: vec![] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{q, qf};
    use num_traits::One;
    use crate::formula::parse::parse_poly as pp;

    #[test]
    fn exponential() {
        let z = lift_jet(&pp("x' - x").unwrap(), &[q(1), q(1)], 5).unwrap();
        let exp: Vec<Q> = (0..=5).map(|i| Q::one() / Q::from_integer(rat::factorial(i))).collect();
        assert_eq!(z.coefficients, exp);
        assert_eq!(z.residual_order, Some(5));
        assert!(z.trace.iter().all(|s| s.coefficient == s.separant));
    }

    #[test]
    fn square_root_series() {
        let z = lift_jet(&pp("x'*x - 1").unwrap(), &[q(1), q(1)], 3).unwrap();
        assert_eq!(z.coefficients, vec![q(1), q(1), qf(-1, 2), qf(1, 2)]);
        assert_eq!(z.derivatives(), vec![q(1), q(1), q(-1), q(3)]);
    }

    #[test]
    fn linear_solution() {
        let z = lift_jet(&pp("x''").unwrap(), &[q(3), qf(1, 2), q(0)], 4).unwrap();
        assert_eq!(z.coefficients, vec![q(3), qf(1, 2), q(0), q(0), q(0)]);
        assert_eq!(z.residual_order, None);
    }

    #[test]
    fn preconditions() {
        let e = lift_jet(&pp("x' - x").unwrap(), &[q(1), q(2)], 3).unwrap_err();
        assert_eq!(e.to_string(), "not a zero");
        let e = lift_jet(&pp("x'^2 - x").unwrap(), &[q(0), q(0)], 3).unwrap_err();
        assert_eq!(e.to_string(), "singular zero (separant vanishes)");
    }

    #[test]
    fn residual_orders() {
        let exp = series((0..=5).map(|i| Q::one() / Q::from_integer(rat::factorial(i))).collect());
        assert_eq!(verify_residual(&pp("x' - x").unwrap(), &exp), Some(5));
        assert_eq!(verify_residual(&pp("x'").unwrap(), &series(vec![q(1)])), None);
        assert_eq!(verify_residual(&pp("x").unwrap(), &series(vec![q(0), q(1)])), Some(1));
    }
}
