//! Subresultant machinery on multivariate polynomials with integer-indexed variables.

use num_traits::{One, Zero};

use crate::algebra::poly::{Monomial, Poly};
use crate::algebra::rat::Q;
use crate::algebra::upoly::UPoly;

pub type MPoly = Poly<usize>;

/// Highest variable index occurring, `None` for constants.
pub fn main_var(p: &MPoly) -> Option<usize> {
    p.vars().into_iter().next_back()
}

/// Determinant by fraction-free elimination over ℚ[x̄].
pub fn bareiss_det(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return MPoly::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Rows of the j-th subresultant matrix of `f` (degree a) and `g` (degree b) in `v`;
/// columns correspond to powers a+b-j-1 down to 0.
fn subres_rows(fc: &[MPoly], gc: &[MPoly], j: usize) -> Vec<Vec<MPoly>> {
    let a = fc.len() - 1;
    let b = gc.len() - 1;
    let width = a + b - j;
    let mut rows = Vec::new();
    for i in 0..(b - j) {
        let shift = b - j - 1 - i;
        let mut row = vec![MPoly::zero(); width];
        for (k, c) in fc.iter().enumerate() {
            let pw = k + shift;
            row[width - 1 - pw] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..(a - j) {
        let shift = a - j - 1 - i;
        let mut row = vec![MPoly::zero(); width];
        for (k, c) in gc.iter().enumerate() {
            let pw = k + shift;
            row[width - 1 - pw] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Coefficient of `v^i` in the j-th subresultant of `f` and `g` (with formal degrees
/// `deg_v f`, `deg_v g`); `i == j` gives the principal subresultant coefficient.
pub fn subres_coeff(f: &MPoly, g: &MPoly, v: usize, j: usize, i: usize) -> MPoly {
    let fc = f.coeffs_in(&v);
    let gc = g.coeffs_in(&v);
    let a = fc.len() - 1;
    let b = gc.len() - 1;
    assert!(j <= a.min(b) && i <= j);
    let rows = subres_rows(&fc, &gc, j);
    let width = a + b - j;
    let size = a + b - 2 * j;
    let mut cols: Vec<usize> = (0..size - 1).collect();
    cols.push(width - 1 - i);
    let mat = rows.into_iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
    bareiss_det(mat)
}

/// psc_j(f, g) in `v`.
pub fn psc(f: &MPoly, g: &MPoly, v: usize, j: usize) -> MPoly {
    subres_coeff(f, g, v, j, j)
}

pub fn resultant(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    psc(f, g, v, 0)
}

/// Reductum: `f` minus its leading term in `v`.
pub fn reductum(f: &MPoly, v: usize) -> MPoly {
    let d = f.degree_in(&v);
    let lc = f.coeff_in(&v, d);
    f - &lc.mul_monomial(&Monomial::var(v, d))
}

/// Divides out the largest monomial dividing every term; returns the variables
/// of that monomial and the cofactor.
pub fn split_monomial_content(p: &MPoly) -> (Vec<usize>, MPoly) {
    if p.is_zero() {
        return (vec![], p.clone());
    }
    let vars = p.vars();
    let mut content = Vec::new();
    for v in vars {
        let min = p.terms().map(|(m, _)| m.degree_in(&v)).min().unwrap_or(0);
        if min > 0 {
            content.push((v, min));
        }
    }
    if content.is_empty() {
        return (vec![], p.clone());
    }
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        let pairs = m.pairs().iter().map(|(v, e)| {
            let sub = content.iter().find(|x| x.0 == *v).map(|x| x.1).unwrap_or(0);
            (*v, e - sub)
        });
        out.add_term(Monomial::from_pairs(pairs.collect()), c.clone());
    }
    (content.into_iter().map(|x| x.0).collect(), out)
}

/// Univariate polynomial in variable `v` whose coefficients are obtained by
/// evaluating the other variables through `f`.
pub fn to_upoly_in(p: &MPoly, v: usize) -> Option<UPoly> {
    UPoly::from_poly(p, &v)
}

/// Evaluates every variable except `v` at rational values.
pub fn specialize(p: &MPoly, values: &[Q], v: usize) -> UPoly {
    let mut out = vec![Q::zero(); p.degree_in(&v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        let mut e = 0;
        for (w, k) in m.pairs() {
            if *w == v {
                e = *k;
            } else {
                t *= num_traits::pow::pow(values[*w].clone(), *k as usize);
            }
        }
        out[e as usize] += t;
    }
    UPoly::new(out)
}

/// Interpolates a univariate polynomial of degree ≤ `deg` from a value oracle.
pub fn interpolate(deg: usize, f: impl Fn(&Q) -> Q) -> UPoly {
    let xs: Vec<Q> = (0..=deg).map(|i| Q::from_integer((i as i64).into())).collect();
    let ys: Vec<Q> = xs.iter().map(&f).collect();
    // Newton divided differences
    let n = xs.len();
    let mut coef = ys.clone();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &UPoly::linear_root(&xs[i])) + &UPoly::constant(coef[i].clone());
    }
    acc
}

/// Determinant of a rational matrix (Gaussian elimination).
pub fn det_q(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Q::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let piv = m[k][k].clone();
        det *= &piv;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &piv;
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Coefficients (s_0, s_1) of the first subresultant of two univariate polynomials
/// of degrees ≥ 2.
pub fn first_subresultant_q(f: &UPoly, g: &UPoly) -> (Q, Q) {
    let (a, b) = (f.degree(), g.degree());
    let j = 1;
    let width = a + b - j;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for i in 0..(b - j) {
        let shift = b - j - 1 - i;
        let mut row = vec![Q::zero(); width];
        for (k, c) in f.coeffs().iter().enumerate() {
            row[width - 1 - (k + shift)] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..(a - j) {
        let shift = a - j - 1 - i;
        let mut row = vec![Q::zero(); width];
        for (k, c) in g.coeffs().iter().enumerate() {
            row[width - 1 - (k + shift)] = c.clone();
        }
        rows.push(row);
    }
    let size = a + b - 2 * j;
    let pick = |i: usize| -> Q {
        let mut cols: Vec<usize> = (0..size - 1).collect();
        cols.push(width - 1 - i);
        det_q(rows.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect())
    };
    (pick(0), pick(1))
}
