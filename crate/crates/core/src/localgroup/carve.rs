//! The refinement chain V₁ → Y₀ → V₀′ → V₀″ → V₁″ → V₂ → (U, O).

use crate::algebra::rat::Q;
use crate::cad::lift::CadOptions;
use crate::cad::qe::{is_large, qe};
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LDFormula, LFormula};
use crate::formula::star::StarContext;
use crate::starmap::build_star_in;

use super::check::check_local_group;
use super::decide::{describe, fiber_large, top_part};
use super::expr::{tuple_eq, Rat};
use super::{graph, graph_vars, identity_jet, Certificate, LocalGroupData, Status};

fn certify(certs: &mut Vec<Certificate>, claim: &str, large: &LFormula, within: &LFormula, vars: &[String], opts: &CadOptions) -> Result<()> {
    let holds = is_large(large, within, vars, opts)?;
    certs.push(Certificate {
        claim: claim.to_string(),
        large: large.clone(),
        within: within.clone(),
        vars: vars.to_vec(),
        holds,
    });
    if holds {
        Ok(())
    } else {
        Err(Error::user(format!("hypothesis violated: {claim}")))
    }
}

/// Carves a local group from a definable group. The group laws on
/// differential points are the caller's contract; everything derived here is
/// certified and the result is checked against the local group axioms.
pub fn carve_local_group(
    domain: &LDFormula,
    mul: &LDFormula,
    inv: &LDFormula,
    identity: &[Q],
    min_order: u32,
    opts: &CadOptions,
) -> Result<LocalGroupData> {
    for f in [domain, mul, inv] {
        if !f.is_quantifier_free() {
            return Err(Error::user("group data must be quantifier-free"));
        }
    }
    let k = identity.len();
    if k == 0 {
        return Err(Error::user("identity must have at least one component"));
    }
    let (gx, gy, gz) = (graph_vars('x', k), graph_vars('y', k), graph_vars('z', k));
    for (f, allowed) in [(domain, gx.clone()), (mul, [gx.clone(), gy.clone(), gz.clone()].concat()), (inv, [gx.clone(), gy.clone()].concat())] {
        for v in f.free_vars() {
            if !allowed.contains(&v) {
                return Err(Error::user(format!("unexpected variable {v} in group data")));
            }
        }
    }
    let all = [gx.clone(), gy.clone(), gz.clone()].concat();
    let mut m = min_order;
    for f in [domain, mul, inv] {
        for (v, o) in crate::formula::ast::max_orders(f) {
            if all.contains(&v) {
                m = m.max(o);
            }
        }
    }
    let context = StarContext::new(all.clone(), vec![m; all.len()]);
    let coords = context.coords();
    let n = k * (m as usize + 1);
    let x = coords[..n].to_vec();
    let y = coords[n..2 * n].to_vec();
    let z = coords[2 * n..].to_vec();
    let xctx = StarContext::new(gx.clone(), vec![m; k]);
    let gstar = build_star_in(domain, &xctx, opts)?.formula();
    let (inv_map, dinv) = graph::jet_map(inv, &gy, &context)?;
    let (mul_map, dmul) = graph::jet_map(mul, &gz, &context)?;
    let mut data = LocalGroupData {
        context,
        components: k,
        x: x.clone(),
        y: y.clone(),
        z,
        h: LFormula::True,
        u: LFormula::True,
        o: LFormula::True,
        inv: inv_map,
        mul: mul_map,
        identity: identity_jet(identity, k, n)?,
        certificates: Vec::new(),
    };
    let d = &data;
    let xy = d.xy();
    let (vx, vy, vz) = (d.var(0), d.var(1), d.var(2));
    let one = d.one();
    let eq = |a: &[Rat], b: &[Rat]| tuple_eq(a, b);
    let mut certs = Vec::new();

    let g_xy = Formula::and(vec![gstar.clone(), d.on(&gstar, 1)]);
    let v1 = describe(
        &top_part(&Formula::and(vec![gstar.clone(), dinv.clone(), d.at(&gstar, &d.inv_at(&vx))]), &x, opts)?,
        &x,
        opts,
    )?;
    certify(&mut certs, "V1 is large in G*", &v1, &gstar, &x, opts)?;
    let y0 = describe(
        &top_part(&Formula::and(vec![g_xy.clone(), dmul.clone(), d.at(&gstar, &d.mul_at(&vx, &vy))]), &xy, opts)?,
        &xy,
        opts,
    )?;
    certify(&mut certs, "Y0 is large in G* x G*", &y0, &g_xy, &xy, opts)?;
    let y0_at = |a: &[Rat], b: &[Rat]| d.at2(&y0, a, b);

    // V0': generic left and right partners, and the identity acts trivially.
    let r = Formula::and(vec![
        v1.clone(),
        y0_at(&one, &vx),
        y0_at(&vx, &one),
        eq(&d.mul_at(&one, &vx), &vx),
        eq(&d.mul_at(&vx, &one), &vx),
    ]);
    let s = Formula::and(vec![y0_at(&vy, &vx), y0_at(&vx, &vy)]);
    let v0p = describe(&fiber_large(&x, &y, &r, &d.on(&gstar, 1), &s, opts)?, &x, opts)?;
    certify(&mut certs, "V0' is large in V1", &v0p, &v1, &x, opts)?;

    // V0'': generic pairs associate with the parameter on the right.
    let zx = d.mul_at(&vz, &vx);
    let s = Formula::and(vec![
        y0_at(&vz, &vx),
        d.at(&v0p, &zx),
        y0_at(&vy, &zx),
        y0_at(&d.mul_at(&vy, &vz), &vx),
        eq(&d.mul_at(&vy, &zx), &d.mul_at(&d.mul_at(&vy, &vz), &vx)),
    ]);
    let yz = [y.clone(), d.z.clone()].concat();
    let b = d.at2(&y0, &vy, &vz);
    let v0pp = describe(&fiber_large(&x, &yz, &v0p, &b, &s, opts)?, &x, opts)?;
    certify(&mut certs, "V0'' is large in V0'", &v0pp, &v0p, &x, opts)?;

    // V1'': generic a with a·(a⁻¹·x) = x.
    let ia = d.inv_at(&vy);
    let iax = d.mul_at(&ia, &vx);
    let s = Formula::and(vec![y0_at(&ia, &vx), y0_at(&vy, &iax), eq(&d.mul_at(&vy, &iax), &vx)]);
    let v1pp = describe(&fiber_large(&x, &y, &v0p, &d.on(&v1, 1), &s, opts)?, &x, opts)?;
    certify(&mut certs, "V1'' is large in V0'", &v1pp, &v0p, &x, opts)?;

    let v2 = describe(&Formula::and(vec![v0pp, v1pp]), &x, opts)?;
    certify(&mut certs, "V2 is large in G*", &v2, &gstar, &x, opts)?;

    let yzm = d.mul_at(&vy, &vz);
    let xym = d.mul_at(&vx, &vy);
    let bad = Formula::and(vec![
        d.on(&v2, 2),
        y0_at(&vy, &vz),
        y0_at(&vx, &yzm),
        y0_at(&xym, &vz),
        Formula::not(eq(&d.mul_at(&vx, &yzm), &d.mul_at(&xym, &vz))),
    ]);
    let assoc = qe(&Formula::not(Formula::exists(d.z.clone(), bad)), opts)?;
    let o = describe(
        &Formula::and(vec![v2.clone(), d.on(&v2, 1), y0.clone(), d.at(&v2, &xym), assoc]),
        &xy,
        opts,
    )?;
    let ix = d.inv_at(&vx);
    let u = describe(
        &Formula::and(vec![
            v0p.clone(),
            d.at2(&o, &vx, &ix),
            d.at2(&o, &ix, &vx),
            eq(&d.mul_at(&vx, &ix), &one),
            eq(&d.mul_at(&ix, &vx), &one),
        ]),
        &x,
        opts,
    )?;
    data.h = v2;
    data.u = u;
    data.o = o;
    data.certificates = certs;
    let report = check_local_group(&data, opts);
    for e in &report.entries {
        match e.status {
            Status::Pass => {}
            Status::Fail => {
                return Err(Error::user(format!(
                    "hypothesis violated: axiom {} fails on the carved data{}",
                    e.name,
                    e.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
                )))
            }
            Status::Undecided => {
                return Err(Error::resource(format!(
                    "axiom {} undecided on the carved data: {}",
                    e.name,
                    e.detail.clone().unwrap_or_default()
                )))
            }
        }
    }
    Ok(data)
}
