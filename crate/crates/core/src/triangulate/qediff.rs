//! Elimination of a single differential existential `∃y ψ`, ψ a conjunction.

use serde_json::json;

use super::branch::{norm, triangulate_with, TriOptions, DEFAULT_MAX_BRANCHES};
use super::prolong::{diff_prolong_reduce, reduce};
use crate::algebra::diff::{derive, order, AlgPoly, DiffPoly};
use crate::cad::lift::CadOptions;
use crate::cad::qe::qe;
use crate::error::{Error, Result};
use crate::formula::ast::{max_orders, Atom, Formula, LDFormula, LFormula, Rel};
use crate::formula::render::poly_to_string;
use crate::formula::star::StarContext;

/// Coherence passes before a branch is given up.
const MAX_ROUNDS: usize = 8;
/// Parameter jets reserved beyond those occurring, for derivatives taken while certifying.
const JET_SLACK: u32 = 12;
const MAX_VARIANTS: usize = 64;

/// Quantifier-free equivalent of `∃y ψ` over the parameters.
pub fn qe_exists_diff(phi: &LDFormula, opts: &CadOptions) -> Result<LDFormula> {
    let (y, lits) = shape(phi)?;
    let Some(m) = lits.iter().filter_map(|(p, _)| order(p, &y)).max() else {
        let body = Formula::and(lits.into_iter().map(|(p, r)| Formula::cmp0(p, r)).collect());
        return Ok(body);
    };
    let mut params: Vec<String> = Vec::new();
    for (p, _) in &lits {
        for v in p.vars() {
            if v.name != y && !params.contains(&v.name) {
                params.push(v.name.clone());
            }
        }
    }
    params.sort();
    let whole: LDFormula = Formula::and(lits.iter().map(|(p, r)| Formula::cmp0(p.clone(), *r)).collect());
    let top = max_orders(&whole);
    let mut vars = params.clone();
    vars.push(y.clone());
    let orders: Vec<u32> =
        vars.iter().map(|v| if *v == y { m } else { top.get(v).copied().unwrap_or(0) + m + JET_SLACK }).collect();
    let ctx = StarContext::new(vars, orders);
    let ys: Vec<String> = (0..=m).map(|j| ctx.flat(&crate::algebra::diff::JetVar::new(&y, j)).unwrap()).collect();
    let mut disj = Vec::new();
    for variant in split_weak(&lits)? {
        let mut eqs_y = Vec::new();
        let mut eqs_0 = Vec::new();
        let mut opens = Vec::new();
        for (p, r) in variant {
            match r {
                Rel::Eq if order(&p, &y).is_some() => eqs_y.push(p),
                Rel::Eq => eqs_0.push(p),
                _ => opens.push(Formula::cmp0(ctx.star_poly(&p)?, r)),
            }
        }
        let mut eqs: Vec<AlgPoly> = Vec::new();
        if !eqs_y.is_empty() {
            for p in diff_prolong_reduce(&eqs_y, &y, m).system {
                eqs.push(ctx.star_poly(&p)?);
            }
        }
        for p in &eqs_0 {
            eqs.push(ctx.star_poly(p)?);
        }
        let open = Formula::and(opens);
        for c in chains(eqs, vec![], &ys)? {
            for c in certify(c, &ctx, &ys, 0)? {
                disj.push(Formula::and(vec![c.formula(), open.clone()]));
            }
        }
    }
    let body: LFormula = Formula::or(disj);
    let out = qe(&Formula::exists(ys, body), opts)?;
    ctx.unstar(&out)
}

/// The bound variable and the literals of a conjunction.
fn shape(phi: &LDFormula) -> Result<(String, Vec<(DiffPoly, Rel)>)> {
    let bad = |why: &str| Error::User(format!("unsupported shape: {why}"));
    let Formula::Exists(vs, body) = phi else { return Err(bad("expected ∃y followed by a conjunction")) };
    if vs.len() != 1 {
        return Err(bad("exactly one bound variable is supported"));
    }
    let mut lits = Vec::new();
    collect(body, &mut lits).map_err(|_| bad("the body must be a conjunction of literals"))?;
    Ok((vs[0].clone(), lits))
}

fn collect(f: &LDFormula, out: &mut Vec<(DiffPoly, Rel)>) -> std::result::Result<(), ()> {
    match f {
        Formula::True => Ok(()),
        Formula::False => {
            out.push((DiffPoly::one(), Rel::Eq));
            Ok(())
        }
        Formula::Atom(a) => {
            out.push((a.poly(), a.rel));
            Ok(())
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => {
                let n: Atom<DiffPoly> = a.negate();
                out.push((n.poly(), n.rel));
                Ok(())
            }
            _ => Err(()),
        },
        Formula::And(gs) => gs.iter().try_for_each(|g| collect(g, out)),
        _ => Err(()),
    }
}

/// Replaces each `≤`/`≥` by its strict and its equality case.
fn split_weak(lits: &[(DiffPoly, Rel)]) -> Result<Vec<Vec<(DiffPoly, Rel)>>> {
    let mut out: Vec<Vec<(DiffPoly, Rel)>> = vec![vec![]];
    for (p, r) in lits {
        let options: Vec<Rel> = match r {
            Rel::Le => vec![Rel::Lt, Rel::Eq],
            Rel::Ge => vec![Rel::Gt, Rel::Eq],
            r => vec![*r],
        };
        let mut next = Vec::new();
        for v in &out {
            for o in &options {
                let mut w = v.clone();
                w.push((p.clone(), *o));
                next.push(w);
            }
        }
        if next.len() > MAX_VARIANTS {
            return Err(Error::Resource(format!("more than {MAX_VARIANTS} weak-inequality cases")));
        }
        out = next;
    }
    Ok(out)
}

/// A triangular system over the jets of the bound variable, level j holding y_j.
#[derive(Clone, Debug)]
struct Chain {
    mains: Vec<Option<AlgPoly>>,
    eqs: Vec<AlgPoly>,
    ineqs: Vec<AlgPoly>,
}

impl Chain {
    fn equations(&self) -> Vec<AlgPoly> {
        self.mains.iter().flatten().cloned().chain(self.eqs.iter().cloned()).collect()
    }

    fn formula(&self) -> LFormula {
        let mut parts: Vec<LFormula> = self.equations().into_iter().map(|p| Formula::cmp0(p, Rel::Eq)).collect();
        parts.extend(self.ineqs.iter().map(|q| Formula::cmp0(q.clone(), Rel::Ne)));
        Formula::and(parts)
    }

    fn dump(&self) -> String {
        json!({
            "mains": self.mains.iter().map(|m| m.as_ref().map(poly_to_string)).collect::<Vec<_>>(),
            "equations": self.eqs.iter().map(poly_to_string).collect::<Vec<_>>(),
            "inequations": self.ineqs.iter().map(poly_to_string).collect::<Vec<_>>(),
        })
        .to_string()
    }
}

/// Triangulates along `ys` from the highest jet down.
fn chains(eqs: Vec<AlgPoly>, ineqs: Vec<AlgPoly>, ys: &[String]) -> Result<Vec<Chain>> {
    let mut out = Vec::new();
    let top = ys.len() - 1;
    descend(top, eqs, ineqs, vec![None; ys.len()], ys, &mut out)?;
    Ok(out)
}

fn descend(
    level: usize,
    eqs: Vec<AlgPoly>,
    ineqs: Vec<AlgPoly>,
    mains: Vec<Option<AlgPoly>>,
    ys: &[String],
    out: &mut Vec<Chain>,
) -> Result<()> {
    let opts = TriOptions { inequations: ineqs, ..Default::default() };
    for b in triangulate_with(&eqs, &ys[level], &opts)?.branches {
        let mut mains = mains.clone();
        let mut ineqs = b.inequations.clone();
        if let (Some(p), Some(s)) = (&b.main, &b.separant) {
            mains[level] = Some(p.clone());
            if !s.is_constant() {
                ineqs.push(norm(s));
            }
        }
        if level == 0 {
            out.push(Chain { mains, eqs: b.equations, ineqs });
            if out.len() > DEFAULT_MAX_BRANCHES {
                return Err(Error::Resource(format!("branch cap of {DEFAULT_MAX_BRANCHES} exceeded")));
            }
        } else {
            descend(level - 1, b.equations, ineqs, mains, ys, out)?;
        }
    }
    Ok(())
}

/// Keeps the chain only when each lower main is compatible with derivation
/// and the constrained jets form a top segment, so that a regular zero of the
/// lowest main lifts to a differential solution. Incompatible chains are
/// re-triangulated with the missing derivative or case split.
fn certify(c: Chain, ctx: &StarContext, ys: &[String], round: usize) -> Result<Vec<Chain>> {
    let incomplete = |c: &Chain, why: &str| Error::User(format!("incomplete branch ({why}): {}", c.dump()));
    if round > MAX_ROUNDS {
        return Err(incomplete(&c, "no coherent form reached"));
    }
    let m = ys.len() - 1;
    let lowered: Vec<DiffPoly> = c.mains.iter().flatten().map(|p| ctx.unstar_poly(p)).collect::<Result<_>>()?;
    for j in 0..m {
        let Some(f) = &c.mains[j] else { continue };
        let g = ctx.star_poly(&derive(&ctx.unstar_poly(f)?)).map_err(|_| incomplete(&c, "jet order exceeded"))?;
        let name = ctx.vars.last().unwrap().clone();
        let (r, initials) = reduce(&ctx.unstar_poly(&g)?, &lowered, &name);
        let r = ctx.star_poly(&r)?;
        let settled = r.is_zero() || c.eqs.contains(&norm(&r));
        if !settled {
            let mut eqs = c.equations();
            eqs.push(g);
            return recertify(chains(eqs, c.ineqs.clone(), ys)?, ctx, ys, round);
        }
        for init in initials {
            let init = ctx.star_poly(&init)?;
            if init.is_constant() || c.ineqs.contains(&init) {
                continue;
            }
            let mut ineqs = c.ineqs.clone();
            ineqs.push(init.clone());
            let mut out = chains(c.equations(), ineqs, ys)?;
            let mut eqs = c.equations();
            eqs.push(init);
            out.extend(chains(eqs, c.ineqs.clone(), ys)?);
            return recertify(out, ctx, ys, round);
        }
    }
    let levels: Vec<usize> = (0..=m).filter(|j| c.mains[*j].is_some()).collect();
    if let Some(&low) = levels.first() {
        if levels.len() != m + 1 - low {
            return Err(incomplete(&c, "constrained jets are not a top segment"));
        }
    }
    Ok(vec![c])
}

fn recertify(cs: Vec<Chain>, ctx: &StarContext, ys: &[String], round: usize) -> Result<Vec<Chain>> {
    let mut out = Vec::new();
    for c in cs {
        out.extend(certify(c, ctx, ys, round + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cad::qe::decide;
    use crate::formula::parse::parse;
    use crate::formula::star::star_translate;

    /// `∀ jets (a ↔ b)` decided over the reals.
    fn equivalent(a: &LDFormula, b: &LDFormula) -> bool {
        let both = Formula::and(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b.clone(), a.clone())]);
        let (s, ctx) = star_translate(&both).unwrap();
        decide(&Formula::forall(ctx.coords(), s), &CadOptions::default()).unwrap()
    }

    fn check(input: &str, expected: &str) {
        let out = qe_exists_diff(&parse(input).unwrap(), &CadOptions::default()).unwrap();
        assert!(out.is_quantifier_free());
        let exp = parse(expected).unwrap();
        assert!(equivalent(&out, &exp), "{input}: got {}", crate::formula::render::formula_to_string(&out));
    }

    #[test]
    fn inverse_exists() {
        check("E y. (y*x = 1)", "x != 0");
    }

    #[test]
    fn constant_inverse() {
        check("E y. (y' = 0 & y*x = 1)", "x != 0 & x' = 0");
    }

    #[test]
    fn positive_antiderivative() {
        check("E y. (y' = x & y > 0)", "true");
    }

    #[test]
    fn inconsistent_orders() {
        check("E y. (y' = y & y' = 1)", "false");
    }

    #[test]
    fn equal_functions_have_equal_derivatives() {
        check("E y. (y >= x & y <= x & y' > x')", "false");
    }

    #[test]
    fn rejects_disjunction() {
        let e = qe_exists_diff(&parse("E y. (y = 1 | y = x)").unwrap(), &CadOptions::default()).unwrap_err();
        assert!(e.to_string().contains("unsupported shape"));
    }
}
