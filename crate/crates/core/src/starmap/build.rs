//! φ ↦ S*: per disjunct, decompose the jet space, keep the true cells, and
//! refine every cell with a section until the higher jets follow the
//! prolongations of its defining polynomial.

use std::collections::HashMap;

use super::rational::RationalFn;
use super::{Excluded, Prolongation, RegularWitness, StarCell, StarSet};
use crate::algebra::diff::{derive, AlgPoly, DiffPoly, JetVar};
use crate::cad::decompose::Cell;
use crate::cad::engine::{atom_polys, cells_at, check_budget, formula_from_m, formula_to_m, from_mpoly, full_cad, label_formulas, to_mpoly};
use crate::cad::field::SamplePoint;
use crate::cad::lift::{Cad, CadOptions};
use crate::cad::qe::{leaf_truth, RootFunction};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LDFormula, LFormula};
use crate::formula::nf::{dnf_clauses, DEFAULT_DNF_CAP};
use crate::formula::star::StarContext;
use crate::triangulate::branch::norm;

const MAX_ROUNDS: usize = 8;

/// Star set of a quantifier-free φ in the differential variables `vars`
/// (all free variables of φ, sorted, when `vars` is empty).
pub fn build_star(phi: &LDFormula, vars: &[String], opts: &CadOptions) -> Result<StarSet> {
    let vars: Vec<String> = if vars.is_empty() { StarContext::of(phi).vars } else { vars.to_vec() };
    for v in phi.free_vars() {
        if !vars.contains(&v) {
            return Err(Error::user(format!("variable {v} is not among the declared variables")));
        }
    }
    build_star_in(phi, &StarContext::with_order(phi, &vars), opts)
}

/// Star set over a prescribed context (orders at least those of φ).
pub fn build_star_in(phi: &LDFormula, ctx: &StarContext, opts: &CadOptions) -> Result<StarSet> {
    if !phi.is_quantifier_free() {
        return Err(Error::user("build_star needs a quantifier-free formula"));
    }
    if ctx.vars.is_empty() {
        return Err(Error::user("no differential variables"));
    }
    let star = ctx.star(phi)?;
    let coords = ctx.coords();
    let mut cells = Vec::new();
    let mut excluded = Vec::new();
    for (ci, clause) in dnf_clauses(&star, DEFAULT_DNF_CAP)?.into_iter().enumerate() {
        let f = Formula::and(clause.into_iter().map(Formula::Atom).collect());
        let (c, e) = star_clause(ci, &f, ctx, &coords, opts)?;
        cells.extend(c);
        excluded.extend(e);
    }
    Ok(StarSet { source: phi.clone(), context: ctx.clone(), cells, excluded })
}

struct Draft {
    leaf: usize,
    sections: Vec<(usize, AlgPoly)>,
    prolongations: Vec<Prolongation>,
    witnesses: Vec<RegularWitness>,
}

enum Outcome {
    Keep(Draft),
    Need(Vec<AlgPoly>),
    Drop,
    Unjustified(String),
}

fn star_clause(
    ci: usize,
    f: &LFormula,
    ctx: &StarContext,
    coords: &[String],
    opts: &CadOptions,
) -> Result<(Vec<StarCell>, Vec<Excluded>)> {
    let n = coords.len();
    let fm = formula_to_m(f, coords)?;
    let mut polys: Vec<AlgPoly> = atom_polys(&fm).iter().map(|p| norm(&from_mpoly(p, coords))).collect();
    for _ in 0..MAX_ROUNDS {
        let ms: Vec<_> = polys.iter().map(|p| to_mpoly(p, coords)).collect::<Result<_>>()?;
        check_budget(&ms, n, opts)?;
        let mut cad = full_cad(&ms, n, opts)?;
        let truth = leaf_truth(&mut cad, &fm);
        let mut outcomes = Vec::new();
        let mut need: Vec<AlgPoly> = Vec::new();
        for (leaf, _) in truth.iter().enumerate().filter(|(_, t)| **t) {
            let o = analyse(&cad, leaf, ctx, coords, &polys)?;
            if let Outcome::Need(ps) = &o {
                for p in ps {
                    if !need.contains(p) {
                        need.push(p.clone());
                    }
                }
            }
            outcomes.push((leaf, o));
        }
        if !need.is_empty() {
            polys.extend(need);
            continue;
        }
        let leaves = cad.levels[n - 1].len();
        let descs = label_formulas(&cad, n, &(0..leaves).collect::<Vec<_>>(), opts)?;
        let mut domains: HashMap<usize, Vec<LFormula>> = HashMap::new();
        let mut cells = Vec::new();
        let mut excluded = Vec::new();
        for (leaf, o) in outcomes {
            let description = formula_from_m(&descs[&leaf], coords);
            match o {
                Outcome::Keep(d) => {
                    let base = Cell {
                        index: cad.index(n - 1, leaf),
                        dim: cad.dim(n - 1, leaf),
                        sample: cad.levels[n - 1][leaf].sample.clone(),
                        description,
                    };
                    let skolem = skolem_for(&cad, &d, coords, &mut domains, opts)?;
                    let open_coords = (0..n).filter(|&l| base.index[l] == 1).map(|l| coords[l].clone()).collect();
                    cells.push(StarCell {
                        base,
                        clause: ci,
                        open_coords,
                        skolem,
                        prolongations: d.prolongations,
                        regular_witness: d.witnesses,
                    });
                }
                Outcome::Unjustified(reason) => excluded.push(Excluded { clause: ci, description, reason }),
                Outcome::Drop | Outcome::Need(_) => {}
            }
        }
        return Ok((cells, excluded));
    }
    Err(Error::resource(format!("star refinement did not stabilise within {MAX_ROUNDS} rounds")))
}

fn sign_at(sample: &SamplePoint, p: &AlgPoly, coords: &[String]) -> Result<i32> {
    let m = to_mpoly(p, coords)?;
    Ok(sample.clone().sign(&m))
}

/// The projection factor of level `lv` defining the section through the
/// sample, preferring ones with nonvanishing separant. The flag tells
/// whether the separant is nonzero.
fn defining(cad: &Cad, lv: usize, sample: &SamplePoint, coords: &[String]) -> Result<(AlgPoly, bool)> {
    let mut fallback = None;
    for m in &cad.proj.levels[lv] {
        let mut s = sample.clone();
        if s.sign(m) != 0 {
            continue;
        }
        let p = from_mpoly(m, coords);
        if s.sign(&m.diff(&lv)) != 0 {
            return Ok((p, true));
        }
        fallback.get_or_insert(p);
    }
    match fallback {
        Some(p) => Ok((p, false)),
        None => Err(Error::internal(format!("section at level {lv} without a vanishing factor"))),
    }
}

fn analyse(cad: &Cad, leaf: usize, ctx: &StarContext, coords: &[String], polys: &[AlgPoly]) -> Result<Outcome> {
    let n = coords.len();
    let idx = cad.index(n - 1, leaf);
    let sample = &cad.levels[n - 1][leaf].sample;
    let mut sections = Vec::new();
    let mut regular: HashMap<usize, bool> = HashMap::new();
    for lv in (0..n).filter(|&l| idx[l] == 0) {
        let (p, ok) = defining(cad, lv, sample, coords)?;
        regular.insert(lv, ok);
        sections.push((lv, p));
    }
    let section_of = |lv: usize| sections.iter().find(|(l, _)| *l == lv).map(|(_, p)| p.clone());
    // linear sections give exact substitutions, applied top-down
    let mut linear: Vec<(JetVar, RationalFn)> = Vec::new();
    for (lv, p) in sections.iter().rev() {
        let x = &coords[*lv];
        if p.degree_in(x) != 1 {
            continue;
        }
        let a = p.coeff_in(x, 1);
        if sign_at(sample, &a, coords)? == 0 {
            continue;
        }
        let rest = &p.coeff_in(x, 0) * &AlgPoly::int(-1);
        let v = ctx.unstar_poly(&AlgPoly::var(x.clone()))?.vars().into_iter().next().unwrap();
        linear.push((v, RationalFn::new(ctx.unstar_poly(&rest)?, ctx.unstar_poly(&a)?)));
    }
    let mut prolongations = Vec::new();
    let mut witnesses = Vec::new();
    let mut need = Vec::new();
    let mut offset = 0;
    for (i, (name, &m)) in ctx.vars.iter().zip(&ctx.orders).enumerate() {
        let base = offset;
        offset += m as usize + 1;
        let Some(k) = (0..=m).find(|&j| idx[base + j as usize] == 0) else {
            witnesses.push(RegularWitness {
                var: name.clone(),
                p: crate::algebra::diff::jet(name, m + 1),
                separant: DiffPoly::one(),
            });
            continue;
        };
        let lv = base + k as usize;
        if !regular[&lv] {
            return Ok(Outcome::Unjustified(format!("separant of the defining polynomial vanishes at {}", coords[lv])));
        }
        let p = ctx.unstar_poly(&section_of(lv).unwrap())?;
        let top = JetVar::new(name, k);
        witnesses.push(RegularWitness { var: name.clone(), separant: p.diff(&top), p: p.clone() });
        for (s, g) in prolong_chain(&p, name, k, m + 1 - k).into_iter().enumerate() {
            let j = k + 1 + s as u32;
            let mut g = g;
            for (v, val) in &linear {
                g = g.subst(v, val);
            }
            if j <= m {
                let target = DiffPoly::var(JetVar::new(name, j));
                let e = &(&g.den * &target) - &g.num;
                let (Ok(e), Ok(den)) = (ctx.star_poly(&e), ctx.star_poly(&g.den)) else {
                    return Ok(Outcome::Unjustified(format!("prolongation to {} leaves the jet space", JetVar::new(name, j))));
                };
                if sign_at(sample, &den, coords)? == 0 {
                    return Ok(Outcome::Unjustified(format!("prolongation denominator vanishes at {}", JetVar::new(name, j))));
                }
                let e = norm(&e);
                let mut missing = Vec::new();
                if !e.is_constant() && !polys.contains(&e) {
                    missing.push(e.clone());
                }
                let den = norm(&den);
                if !den.is_constant() && !polys.contains(&den) {
                    missing.push(den);
                }
                if !missing.is_empty() {
                    need.extend(missing);
                } else if sign_at(sample, &e, coords)? != 0 {
                    return Ok(Outcome::Drop);
                }
            }
            prolongations.push(Prolongation { g, target: JetVar::new(name, j), target_jet: (i, j) });
        }
    }
    if !need.is_empty() {
        return Ok(Outcome::Need(need));
    }
    Ok(Outcome::Keep(Draft { leaf, sections, prolongations, witnesses }))
}

/// g_1, …, g_count expressing the jets of `name` above order `k` from
/// `p = 0` with nonvanishing separant: derive(p) is linear in the next jet,
/// and each later g is the derivative of the previous one with g_1 substituted.
pub fn prolong_chain(p: &DiffPoly, name: &str, k: u32, count: u32) -> Vec<RationalFn> {
    let next = JetVar::new(name, k + 1);
    let dp = derive(p);
    let s = dp.coeff_in(&next, 1);
    let r = dp.coeff_in(&next, 0);
    let g1 = RationalFn::new(-r, s);
    let mut out = vec![g1.clone()];
    while (out.len() as u32) < count {
        let h = out.last().unwrap().derive().subst(&next, &g1);
        out.push(h);
    }
    out.truncate(count as usize);
    out
}

fn skolem_for(
    cad: &Cad,
    d: &Draft,
    coords: &[String],
    domains: &mut HashMap<usize, Vec<LFormula>>,
    opts: &CadOptions,
) -> Result<Vec<RootFunction>> {
    let n = coords.len();
    let mut path = vec![d.leaf];
    for l in (1..n).rev() {
        path.push(cad.levels[l][*path.last().unwrap()].parent.unwrap());
    }
    path.reverse();
    let mut out = Vec::new();
    for (lv, p) in &d.sections {
        let node = path[*lv];
        let siblings: Vec<usize> = if *lv == 0 {
            (0..cad.levels[0].len()).collect()
        } else {
            cad.levels[lv - 1][path[lv - 1]].children.clone()
        };
        let m = to_mpoly(p, coords)?;
        let roots: Vec<usize> = siblings
            .into_iter()
            .filter(|&s| !cad.levels[*lv][s].is_sector() && cad.levels[*lv][s].sample.clone().sign(&m) == 0)
            .collect();
        let root_index = roots.iter().position(|&s| s == node).map(|r| r + 1).unwrap_or(0);
        let domain = if *lv == 0 {
            LFormula::True
        } else {
            if !domains.contains_key(lv) {
                let labels: Vec<usize> = (0..cells_at(cad, *lv)).collect();
                let forms = label_formulas(cad, *lv, &labels, opts)?;
                domains.insert(*lv, labels.iter().map(|l| formula_from_m(&forms[l], &coords[..*lv])).collect());
            }
            domains[lv][path[lv - 1]].clone()
        };
        out.push(RootFunction {
            polynomial: p.clone(),
            variable: coords[*lv].clone(),
            root_index,
            root_count: roots.len(),
            domain,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse, parse_poly as pp};
    use crate::formula::render::formula_to_string;

    fn star(s: &str) -> StarSet {
        build_star(&parse(s).unwrap(), &[], &CadOptions::default()).unwrap()
    }

    #[test]
    fn open_half_line() {
        let s = star("x > 0");
        assert_eq!(s.cells.len(), 1);
        let c = &s.cells[0];
        assert_eq!(c.open_coords, vec!["x_0_0"]);
        assert!(c.prolongations.is_empty());
        assert_eq!(c.regular_witness[0].p, pp("x'").unwrap());
    }

    #[test]
    fn constants() {
        let s = star("D(x) = 0");
        assert_eq!(s.cells.len(), 1);
        let c = &s.cells[0];
        assert_eq!(c.open_coords, vec!["x_0_0"]);
        assert_eq!(c.prolongations.len(), 1);
        assert_eq!(c.prolongations[0].g, RationalFn::poly(DiffPoly::zero()));
        assert_eq!(c.prolongations[0].target_jet, (0, 2));
        assert_eq!(formula_to_string(&c.base.description), "x_0_1 = 0");
    }

    #[test]
    fn exponential_cell() {
        let s = star("x' = x & x > 0");
        assert_eq!(s.cells.len(), 1);
        let c = &s.cells[0];
        assert_eq!(c.open_coords, vec!["x_0_0"]);
        assert_eq!(c.prolongations[0].g, RationalFn::poly(pp("x").unwrap()));
        assert_eq!(c.skolem.len(), 1);
        assert_eq!((c.skolem[0].root_index, c.skolem[0].root_count), (1, 1));
    }

    #[test]
    fn second_order_forces_top_jet() {
        let s = star("x'' = 0");
        assert_eq!(s.cells.len(), 1);
        let c = &s.cells[0];
        assert_eq!(c.open_coords, vec!["x_0_0", "x_0_1"]);
        assert_eq!(c.prolongations[0].g, RationalFn::poly(DiffPoly::zero()));
        assert_eq!(c.prolongations[0].target_jet, (0, 3));
    }

    #[test]
    fn refinement_cuts_out_the_prolongation() {
        // x' free in the formula; on x = 1 the derivative is forced to vanish
        let s = build_star(&parse("x = 1 & D(x) >= -5").unwrap(), &[], &CadOptions::default()).unwrap();
        assert_eq!(s.cells.len(), 1);
        let c = &s.cells[0];
        assert!(c.open_coords.is_empty());
        assert_eq!(formula_to_string(&c.base.description), "x_0_0 - 1 = 0 & x_0_1 = 0");
    }

    #[test]
    fn chain_of_inverse() {
        let g = prolong_chain(&pp("x*x' - 1").unwrap(), "x", 1, 2);
        assert_eq!(g[0], RationalFn::new(pp("-x'^2").unwrap(), pp("x").unwrap()));
        // x''' = 3 x'^3 / x^2 after substituting x'' = -x'^2/x
        assert_eq!(g[1], RationalFn::new(pp("3*x'^3").unwrap(), pp("x^2").unwrap()));
    }
}
