//! Differential polynomials in jet variables and their algebraization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::One;

use super::poly::{Monomial, Poly};
use super::rat::{self, Q};
use crate::error::{Error, Result};

/// The jet variable `name^(order)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub name: String,
    pub order: u32,
}

impl JetVar {
    pub fn new(name: &str, order: u32) -> Self {
        JetVar { name: name.to_string(), order }
    }

    pub fn base(name: &str) -> Self {
        JetVar::new(name, 0)
    }

    pub fn next(&self) -> Self {
        JetVar { name: self.name.clone(), order: self.order + 1 }
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for _ in 0..self.order {
            write!(f, "'")?;
        }
        Ok(())
    }
}

pub type DiffPoly = Poly<JetVar>;
pub type AlgPoly = Poly<String>;

/// Formal derivation: additive, Leibniz, `D(x^(j)) = x^(j+1)`, constants map to 0.
pub fn derive(f: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for v in f.vars() {
        let partial = f.diff(&v);
        if partial.is_zero() {
            continue;
        }
        out = &out + &(&partial * &DiffPoly::var(v.next()));
    }
    out
}

pub fn derive_n(f: &DiffPoly, k: u32) -> DiffPoly {
    let mut g = f.clone();
    for _ in 0..k {
        g = derive(&g);
    }
    g
}

/// Highest order of `name` in `f`, `None` when `name` does not occur.
pub fn order(f: &DiffPoly, name: &str) -> Option<u32> {
    f.vars().iter().filter(|v| v.name == name).map(|v| v.order).max()
}

/// Names of the differential indeterminates occurring in `f`, sorted.
pub fn indeterminates(f: &DiffPoly) -> BTreeSet<String> {
    f.vars().into_iter().map(|v| v.name).collect()
}

/// `∂f/∂x^(m)` for a single-indeterminate nonconstant `f` of order `m`.
pub fn separant(f: &DiffPoly) -> Result<DiffPoly> {
    let names = indeterminates(f);
    if names.len() != 1 {
        return Err(Error::User(if names.is_empty() {
            "no separant: constant polynomial".into()
        } else {
            "no separant: more than one differential indeterminate".into()
        }));
    }
    let name = names.into_iter().next().unwrap();
    let m = order(f, &name).unwrap();
    Ok(f.diff(&JetVar::new(&name, m)))
}

/// Top jet variable of `f` in `name`.
pub fn leader(f: &DiffPoly, name: &str) -> Option<JetVar> {
    order(f, name).map(|m| JetVar::new(name, m))
}

/// Flat variable map produced by `algebraize`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    pub forward: BTreeMap<JetVar, String>,
}

impl VarMap {
    pub fn backward(&self) -> HashMap<String, JetVar> {
        self.forward.iter().map(|(k, v)| (v.clone(), k.clone())).collect()
    }
}

/// Default flat name for `name^(j)`: `name_j`.
pub fn flat_name(v: &JetVar) -> String {
    format!("{}_{}", v.name, v.order)
}

/// Replaces each jet variable by a flat variable.
pub fn algebraize(f: &DiffPoly) -> (AlgPoly, VarMap) {
    let mut forward = BTreeMap::new();
    for v in f.vars() {
        forward.insert(v.clone(), flat_name(&v));
    }
    let p = f.map_vars(|v| forward[v].clone());
    (p, VarMap { forward })
}

/// A jet: values of each indeterminate and its derivatives, order 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Jet {
    pub values: BTreeMap<String, Vec<Q>>,
}

impl Jet {
    pub fn single(name: &str, vals: Vec<Q>) -> Self {
        let mut values = BTreeMap::new();
        values.insert(name.to_string(), vals);
        Jet { values }
    }

    pub fn get(&self, v: &JetVar) -> Option<&Q> {
        self.values.get(&v.name).and_then(|vs| vs.get(v.order as usize))
    }

    pub fn flatten(&self) -> HashMap<String, Q> {
        let mut out = HashMap::new();
        for (n, vs) in &self.values {
            for (j, x) in vs.iter().enumerate() {
                out.insert(flat_name(&JetVar::new(n, j as u32)), x.clone());
            }
        }
        out
    }
}

/// Exact evaluation of a differential polynomial at a jet.
pub fn evaluate(f: &DiffPoly, jet: &Jet) -> Result<Q> {
    let mut point = HashMap::new();
    for v in f.vars() {
        match jet.get(&v) {
            Some(x) => {
                point.insert(v, x.clone());
            }
            None => {
                return Err(Error::User(format!(
                    "missing assignment for {} of order {}",
                    v.name, v.order
                )))
            }
        }
    }
    Ok(f.eval(&point).expect("all variables assigned"))
}

/// Evaluation of an algebraic polynomial at named rational values.
pub fn evaluate_alg(f: &AlgPoly, point: &HashMap<String, Q>) -> Result<Q> {
    f.eval(point).map_err(|v| Error::User(format!("missing assignment for {v}")))
}

/// `g_ℓ` with `ℓ!·g_ℓ = ∂_ℓ g`, where `ℓ` lists (variable, multiplicity).
pub fn taylor_coefficient<V: super::poly::Var>(g: &Poly<V>, ell: &[(V, u32)]) -> Poly<V> {
    let mut d = g.clone();
    let mut fact = Q::one();
    for (v, k) in ell {
        for _ in 0..*k {
            d = d.diff(v);
        }
        fact *= Q::from_integer(rat::factorial(*k));
    }
    d.scale(&(Q::one() / fact))
}

/// All multi-indices `ℓ` with `1 ≤ |ℓ| ≤ deg g` over `vars`, paired with `g_ℓ` (zero ones dropped).
pub fn taylor_expansion<V: super::poly::Var>(g: &Poly<V>, vars: &[V]) -> Vec<(Vec<(V, u32)>, Poly<V>)> {
    let k = g.total_degree();
    let mut out = Vec::new();
    let mut idx = vec![0u32; vars.len()];
    fn rec<V: super::poly::Var>(
        g: &Poly<V>,
        vars: &[V],
        i: usize,
        left: u32,
        idx: &mut Vec<u32>,
        out: &mut Vec<(Vec<(V, u32)>, Poly<V>)>,
    ) {
        if i == vars.len() {
            let total: u32 = idx.iter().sum();
            if total >= 1 {
                let ell: Vec<(V, u32)> =
                    vars.iter().cloned().zip(idx.iter().cloned()).filter(|p| p.1 > 0).collect();
                let c = taylor_coefficient(g, &ell);
                if !c.is_zero() {
                    out.push((ell, c));
                }
            }
            return;
        }
        for e in 0..=left {
            idx[i] = e;
            rec(g, vars, i + 1, left - e, idx, out);
        }
        idx[i] = 0;
    }
    rec(g, vars, 0, k, &mut idx, &mut out);
    out
}

/// Checked pseudo-division: errors on a zero divisor or one of degree 0 in `v`.
pub fn pseudo_divide<V: super::poly::Var>(
    f: &Poly<V>,
    g: &Poly<V>,
    v: &V,
) -> Result<(u32, Poly<V>, Poly<V>)> {
    f.pseudo_divide(g, v).ok_or_else(|| Error::User("invalid divisor".into()))
}

/// Monomial `x^(j)` as a polynomial.
pub fn jet(name: &str, j: u32) -> DiffPoly {
    DiffPoly::var(JetVar::new(name, j))
}

/// Builds `name^(j) ↦ value` substitution for a differential polynomial.
pub fn substitute_jets(f: &DiffPoly, map: &HashMap<JetVar, DiffPoly>) -> DiffPoly {
    f.subst_many(map)
}

/// Monomial from (variable, exponent) pairs.
pub fn monomial_of(pairs: Vec<(JetVar, u32)>) -> Monomial<JetVar> {
    Monomial::from_pairs(pairs)
}
