//! Collins–Hong projection and factor-set bookkeeping.

use crate::formula::render::poly_to_string;

use super::mpoly::{main_var, psc, reductum, split_monomial_content, MPoly};

/// Projection factors grouped by main variable: `levels[k]` holds polynomials
/// whose highest variable is x_k.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Projection {
    pub levels: Vec<Vec<MPoly>>,
}

impl Projection {
    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }
}

/// Primitive, positive, monomial-content-free factors of `p` (constants dropped).
pub fn normalize_factor(p: &MPoly) -> Vec<MPoly> {
    if p.is_constant() {
        return vec![];
    }
    let (vars, rest) = split_monomial_content(p);
    let mut out: Vec<MPoly> = vars.into_iter().map(MPoly::var).collect();
    if !rest.is_constant() {
        out.push(rest.primitive_positive().1);
    }
    out
}

fn add_all(levels: &mut [Vec<MPoly>], p: &MPoly) {
    for f in normalize_factor(p) {
        let k = main_var(&f).expect("nonconstant factor");
        if !levels[k].contains(&f) {
            levels[k].push(f);
        }
    }
}

/// Reducta of `f` in `v` down to (and including) the first with a constant
/// leading coefficient; a reductum free of `v` is its own leading coefficient.
pub fn reducta(f: &MPoly, v: usize) -> Vec<MPoly> {
    let mut out = Vec::new();
    let mut g = f.clone();
    while !g.is_zero() {
        out.push(g.clone());
        if g.degree_in(&v) == 0 || g.leading_coeff_in(&v).is_constant() {
            break;
        }
        g = reductum(&g, v);
    }
    out
}

/// One projection step for factors with main variable `v`.
pub fn project_level(fs: &[MPoly], v: usize) -> Vec<MPoly> {
    let mut out = Vec::new();
    let reds: Vec<Vec<MPoly>> = fs.iter().map(|f| reducta(f, v)).collect();
    for red in &reds {
        for g in red {
            out.push(g.leading_coeff_in(&v));
            let d = g.degree_in(&v) as usize;
            if d >= 2 {
                let dg = g.diff(&v);
                for j in 0..d - 1 {
                    out.push(psc(g, &dg, v, j));
                }
            }
        }
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            let f2 = &fs[j];
            let d2 = f2.degree_in(&v) as usize;
            for g1 in &reds[i] {
                let d1 = g1.degree_in(&v) as usize;
                for k in 0..d1.min(d2) {
                    out.push(psc(g1, f2, v, k));
                }
            }
        }
    }
    out
}

/// Full projection of `polys` in variables x_0..x_{n-1}. With `closed`, every
/// level is closed under differentiation in its main variable before projecting.
pub fn project(polys: &[MPoly], n: usize, closed: bool) -> Projection {
    let mut levels = vec![Vec::new(); n];
    for p in polys {
        add_all(&mut levels, p);
    }
    for k in (0..n).rev() {
        if closed {
            derivative_close(&mut levels, k);
        }
        if k == 0 {
            break;
        }
        let fs = levels[k].clone();
        for p in project_level(&fs, k) {
            add_all(&mut levels, &p);
        }
    }
    for l in levels.iter_mut() {
        l.sort_by_cached_key(|a| (a.total_degree(), a.num_terms(), poly_to_string(a)));
    }
    Projection { levels }
}

fn derivative_close(levels: &mut [Vec<MPoly>], k: usize) {
    let mut i = 0;
    while i < levels[k].len() {
        let d = levels[k][i].diff(&k);
        if !d.is_constant() {
            add_all(levels, &d);
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(0)
    }
    fn y() -> MPoly {
        MPoly::var(1)
    }

    #[test]
    fn circle_projection() {
        let f = &(&(&x() * &x()) + &(&y() * &y())) - &MPoly::int(1);
        let p = project(&[f.clone()], 2, false);
        assert_eq!(p.levels[1], vec![f]);
        assert_eq!(p.levels[0], vec![&(&x() * &x()) - &MPoly::int(1)]);
    }

    #[test]
    fn monomial_content_is_split() {
        let p = &x() * &(&y() - &MPoly::int(2));
        let fs = normalize_factor(&p);
        assert_eq!(fs, vec![x(), &y() - &MPoly::int(2)]);
    }

    #[test]
    fn derivative_closure_adds_derivatives() {
        let f = &(&(&(&x() * &x()) * &x()) - &x()) + &MPoly::int(1);
        let p = project(&[f], 1, true);
        assert_eq!(p.levels[0].len(), 3);
    }
}
