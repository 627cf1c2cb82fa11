//! Sign-condition formulas for unions of cells.

use super::mpoly::MPoly;
use crate::formula::ast::{Formula, Rel};

const FULL: u8 = 0b111;

/// Bit of a sign in a mask: − → 1, 0 → 2, + → 4.
pub fn bit(s: i8) -> u8 {
    match s {
        -1 => 1,
        0 => 2,
        _ => 4,
    }
}

/// Per-factor sign masks; a vector is covered when each sign is in its mask.
pub type Cube = Vec<u8>;

pub fn covers(c: &Cube, v: &[i8]) -> bool {
    c.iter().zip(v).all(|(m, s)| m & bit(*s) != 0)
}

/// Cubes covering every vector of `yes` and none of `no` (which must be disjoint).
pub fn cover(yes: &[Vec<i8>], no: &[Vec<i8>]) -> Vec<Cube> {
    let mut cubes: Vec<Cube> = Vec::new();
    let mut done = vec![false; yes.len()];
    for i in 0..yes.len() {
        if done[i] {
            continue;
        }
        let mut c: Cube = yes[i].iter().map(|s| bit(*s)).collect();
        let clean = |c: &Cube| !no.iter().any(|v| covers(c, v));
        // drop whole factors, highest level first
        for f in (0..c.len()).rev() {
            let old = c[f];
            c[f] = FULL;
            if !clean(&c) {
                c[f] = old;
            }
        }
        // widen single signs to pairs where that absorbs more cells
        for f in (0..c.len()).rev() {
            if c[f] == FULL {
                continue;
            }
            let count = |c: &Cube| yes.iter().filter(|v| covers(c, v)).count();
            let base = count(&c);
            let old = c[f];
            let mut best = (base, old);
            for extra in [1u8, 2, 4] {
                if old & extra != 0 {
                    continue;
                }
                c[f] = old | extra;
                if clean(&c) {
                    let k = count(&c);
                    if k > best.0 {
                        best = (k, c[f]);
                    }
                }
            }
            c[f] = best.1;
        }
        for (j, v) in yes.iter().enumerate() {
            if covers(&c, v) {
                done[j] = true;
            }
        }
        cubes.push(c);
    }
    cubes
}

/// The formula of a list of cubes over the given factors.
pub fn cubes_to_formula<V: crate::algebra::poly::Var>(
    cubes: &[Cube],
    factors: &[crate::algebra::poly::Poly<V>],
) -> Formula<crate::algebra::poly::Poly<V>> {
    let disj: Vec<_> = cubes
        .iter()
        .map(|c| {
            let lits: Vec<_> = c
                .iter()
                .enumerate()
                .filter(|(_, m)| **m != FULL)
                .map(|(i, m)| match Rel::from_mask(*m) {
                    Some(r) => Formula::cmp0(factors[i].clone(), r),
                    None => Formula::False,
                })
                .collect();
            Formula::and(lits)
        })
        .collect();
    Formula::or(disj)
}

/// Disjoint groups of sign vectors, one formula per group.
pub fn describe_groups(groups: &[Vec<Vec<i8>>], factors: &[MPoly]) -> Vec<Formula<MPoly>> {
    (0..groups.len())
        .map(|g| {
            let no: Vec<Vec<i8>> =
                groups.iter().enumerate().filter(|(h, _)| *h != g).flat_map(|(_, vs)| vs.clone()).collect();
            cubes_to_formula(&cover(&groups[g], &no), factors)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_line_widens_to_nonstrict() {
        let yes = vec![vec![0], vec![1]];
        let no = vec![vec![-1]];
        assert_eq!(cover(&yes, &no), vec![vec![6]]);
    }

    #[test]
    fn punctured_line() {
        let yes = vec![vec![-1], vec![1]];
        let no = vec![vec![0]];
        assert_eq!(cover(&yes, &no), vec![vec![5]]);
    }

    #[test]
    fn irrelevant_factor_dropped() {
        let yes = vec![vec![1, -1], vec![1, 1]];
        let no = vec![vec![-1, 1]];
        assert_eq!(cover(&yes, &no), vec![vec![4, FULL]]);
    }
}
