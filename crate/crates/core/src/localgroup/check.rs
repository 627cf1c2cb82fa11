//! Axiom checkers. Every axiom is a universal sentence ∀v̄ (P → C); it passes
//! when P ∧ ¬C is empty and fails with a point of P ∧ ¬C.

use crate::algebra::rat::Q;
use crate::cad::lift::CadOptions;
use crate::cad::qe::qe;
use crate::error::{Error, Result};
use crate::formula::ast::{Formula, LFormula, Rel};
use crate::formula::render::formula_to_string;

use super::decide::{check_implication, find_violation, Verdict};
use super::expr::{tuple_eq, Rat};
use super::neighbourhoods::build_product_neighbourhoods;
use super::{AxiomEntry, AxiomReport, LocalGroupData, Status, SublocalData};

/// One named part of an axiom.
struct Part {
    label: &'static str,
    verdict: Verdict,
}

fn membership(label: &'static str, f: &LFormula, data: &LocalGroupData, point: &[Q]) -> Part {
    let at = data.point(point);
    let verdict = match f.eval_qf(&at) {
        Ok(true) => Verdict::Holds,
        Ok(false) => Verdict::Fails(data.x.iter().cloned().zip(point.iter().cloned()).collect()),
        Err(v) => Verdict::Undecided(format!("unbound coordinate {v}")),
    };
    Part { label, verdict }
}

fn implication(label: &'static str, vars: &[String], p: LFormula, c: LFormula, opts: &CadOptions) -> Part {
    Part { label, verdict: check_implication(vars, &p, &c, opts) }
}

/// Failures first, then undecided parts; passes when every part holds.
fn entry(name: &str, parts: Vec<Part>) -> AxiomEntry {
    let mut undecided = None;
    for p in parts {
        match p.verdict {
            Verdict::Holds => {}
            Verdict::Fails(w) => {
                return AxiomEntry {
                    name: name.to_string(),
                    status: Status::Fail,
                    witness: Some(w),
                    detail: Some(p.label.to_string()),
                }
            }
            Verdict::Undecided(msg) => {
                undecided.get_or_insert(format!("{}: {msg}", p.label));
            }
        }
    }
    match undecided {
        Some(d) => AxiomEntry { name: name.to_string(), status: Status::Undecided, witness: None, detail: Some(d) },
        None => AxiomEntry { name: name.to_string(), status: Status::Pass, witness: None, detail: None },
    }
}

/// Axioms (1)–(4) of a local group, plus the requirement that i and m are
/// defined and land in H on U and O ("maps").
pub fn check_local_group(d: &LocalGroupData, opts: &CadOptions) -> AxiomReport {
    let x = d.x.clone();
    let xy = d.xy();
    let xyz = [d.x.clone(), d.y.clone(), d.z.clone()].concat();
    let (vx, vy, vz) = (d.var(0), d.var(1), d.var(2));
    let one = d.one();
    let h_y = d.on(&d.h, 1);
    let ix = d.inv_at(&vx);
    let mut entries = Vec::new();

    entries.push(entry(
        "lg1",
        vec![
            membership("1 in U", &d.u, d, &d.identity),
            implication("U in H", &x, d.u.clone(), d.h.clone(), opts),
            implication("O in H x H", &xy, d.o.clone(), Formula::and(vec![d.h.clone(), h_y.clone()]), opts),
            implication("{1} x H in O", &x, d.h.clone(), d.at2(&d.o, &one, &vx), opts),
            implication("H x {1} in O", &x, d.h.clone(), d.at2(&d.o, &vx, &one), opts),
        ],
    ));
    entries.push(entry(
        "lg2",
        vec![
            implication("m(1,x) = x", &x, d.h.clone(), tuple_eq(&d.mul_at(&one, &vx), &vx), opts),
            implication("m(x,1) = x", &x, d.h.clone(), tuple_eq(&d.mul_at(&vx, &one), &vx), opts),
        ],
    ));
    entries.push(entry(
        "lg3",
        vec![
            implication("(x, i(x)) in O", &x, d.u.clone(), d.at2(&d.o, &vx, &ix), opts),
            implication("(i(x), x) in O", &x, d.u.clone(), d.at2(&d.o, &ix, &vx), opts),
            implication("m(x, i(x)) = 1", &x, d.u.clone(), tuple_eq(&d.mul_at(&vx, &ix), &one), opts),
            implication("m(i(x), x) = 1", &x, d.u.clone(), tuple_eq(&d.mul_at(&ix, &vx), &one), opts),
        ],
    ));
    let xym = d.mul_at(&vx, &vy);
    let yzm = d.mul_at(&vy, &vz);
    let premise = Formula::and(vec![
        d.o.clone(),
        d.at2(&d.o, &vy, &vz),
        d.at2(&d.o, &xym, &vz),
        d.at2(&d.o, &vx, &yzm),
    ]);
    entries.push(entry(
        "lg4",
        vec![implication(
            "m(m(x,y),z) = m(x,m(y,z))",
            &xyz,
            premise,
            tuple_eq(&d.mul_at(&xym, &vz), &d.mul_at(&vx, &yzm)),
            opts,
        )],
    ));
    entries.push(entry(
        "maps",
        vec![
            implication("i(U) in H", &x, d.u.clone(), d.at(&d.h, &ix), opts),
            implication("m(O) in H", &xy, d.o.clone(), d.at(&d.h, &xym), opts),
        ],
    ));
    AxiomReport { entries }
}

/// ∀ε > 0 ∃y ∈ S with |yᵢ − xᵢ| < ε for every coordinate.
pub fn closure(d: &LocalGroupData, s: &LFormula, opts: &CadOptions) -> Result<LFormula> {
    let eps = "eps".to_string();
    let e = crate::algebra::diff::AlgPoly::var(eps.clone());
    let mut body = vec![d.on(s, 1)];
    for (xc, yc) in d.x.iter().zip(&d.y) {
        let diff = &crate::algebra::diff::AlgPoly::var(yc.clone()) - &crate::algebra::diff::AlgPoly::var(xc.clone());
        body.push(Formula::cmp0(&diff - &e, Rel::Lt));
        body.push(Formula::cmp0(&(-diff) - &e, Rel::Lt));
    }
    let inner = Formula::exists(d.y.clone(), Formula::and(body));
    let pos = Formula::cmp0(e.clone(), Rel::Gt);
    qe(&Formula::forall(vec![eps], Formula::implies(pos, inner)), opts)
}

fn verdict_of(r: Result<Verdict>) -> Verdict {
    r.unwrap_or_else(|e| Verdict::Undecided(e.to_string()))
}

/// Clauses (1)–(3) of a sublocal group with neighbourhood V.
pub fn check_sublocal(d: &LocalGroupData, sub: &SublocalData, opts: &CadOptions) -> AxiomReport {
    let x = d.x.clone();
    let xy = d.xy();
    let (vx, vy) = (d.var(0), d.var(1));
    let h0y = d.on(&sub.h0, 1);
    let closed = verdict_of(closure(d, &sub.h0, opts).map(|cl| {
        find_violation(&Formula::and(vec![sub.v.clone(), Formula::not(sub.h0.clone()), cl]), &x, opts)
    }));
    let ix = d.inv_at(&vx);
    let xym = d.mul_at(&vx, &vy);
    let entries = vec![
        entry(
            "sub1",
            vec![
                Part { label: "H0 closed in V", verdict: closed },
                membership("1 in H0", &sub.h0, d, &d.identity),
                membership("1 in V", &sub.v, d, &d.identity),
                implication("V in H", &x, sub.v.clone(), d.h.clone(), opts),
                implication("H0 in V", &x, sub.h0.clone(), sub.v.clone(), opts),
            ],
        ),
        entry(
            "sub2",
            vec![implication(
                "x in H0 ∩ U, i(x) in V gives i(x) in H0",
                &x,
                Formula::and(vec![sub.h0.clone(), d.u.clone(), d.at(&sub.v, &ix)]),
                d.at(&sub.h0, &ix),
                opts,
            )],
        ),
        entry(
            "sub3",
            vec![implication(
                "x, y in H0, (x,y) in O, m(x,y) in V gives m(x,y) in H0",
                &xy,
                Formula::and(vec![sub.h0.clone(), h0y, d.o.clone(), d.at(&sub.v, &xym)]),
                d.at(&sub.h0, &xym),
                opts,
            )],
        ),
    ];
    AxiomReport { entries }
}

/// Symmetry V = V⁻¹ ⊆ U and closure of H0 under conjugation by V.
pub fn check_normal_sublocal(d: &LocalGroupData, sub: &SublocalData, opts: &CadOptions) -> AxiomReport {
    let x = d.x.clone();
    let xy = d.xy();
    let (vx, vy) = (d.var(0), d.var(1));
    let ix = d.inv_at(&vx);
    let iy = d.inv_at(&vy);
    let yx = d.mul_at(&vy, &vx);
    let conj = d.mul_at(&yx, &iy);
    let premise = Formula::and(vec![
        sub.h0.clone(),
        d.on(&sub.v, 1),
        d.at2(&d.o, &vy, &vx),
        d.at2(&d.o, &yx, &iy),
        d.at(&sub.v, &conj),
    ]);
    let entries = vec![entry(
        "normal",
        vec![
            implication("V in U", &x, sub.v.clone(), d.u.clone(), opts),
            implication("V symmetric", &x, sub.v.clone(), d.at(&sub.v, &ix), opts),
            implication("y x y^-1 in H0", &xy, premise, d.at(&sub.h0, &conj), opts),
        ],
    )];
    AxiomReport { entries }
}

/// E(x, y) :⇔ x⁻¹·y ∈ H0, with the certificates on W.
#[derive(Clone, Debug)]
pub struct Equivalence {
    /// Over `x` followed by `y`.
    pub relation: LFormula,
    pub report: AxiomReport,
}

impl Equivalence {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"E": formula_to_string(&self.relation), "report": self.report.to_json()})
    }
}

fn require(what: &str, v: Verdict) -> Result<()> {
    match v {
        Verdict::Holds => Ok(()),
        Verdict::Fails(w) => {
            let pts: Vec<String> = w.iter().map(|(k, v)| format!("{k} = {}", crate::algebra::rat::render(v))).collect();
            Err(Error::user(format!("precondition fails: {what} (at {})", pts.join(", "))))
        }
        Verdict::Undecided(m) => Err(Error::resource(format!("precondition undecided: {what}: {m}"))),
    }
}

/// Certifies that E is an equivalence relation on W after checking that W is
/// a symmetric neighbourhood of 1 inside 𝔘₆ with W⁶ ⊆ V.
pub fn equivalence_on_w(d: &LocalGroupData, sub: &SublocalData, w: &LFormula, opts: &CadOptions) -> Result<Equivalence> {
    let x = d.x.clone();
    let (vx, vy, vz) = (d.var(0), d.var(1), d.var(2));
    let ix = d.inv_at(&vx);
    if !w.eval_qf(&d.point(&d.identity)).unwrap_or(false) {
        return Err(Error::user("precondition fails: 1 in W"));
    }
    let u6 = build_product_neighbourhoods(d, 6, opts)?.pop().unwrap();
    require("W in U6", check_implication(&x, w, &u6, opts))?;
    require("W symmetric", check_implication(&x, w, &Formula::and(vec![d.u.clone(), d.at(w, &ix)]), opts))?;
    let copies: Vec<Vec<Rat>> = (3..9).map(|t| d.var(t)).collect();
    let mut prod = copies[0].clone();
    for c in &copies[1..] {
        prod = d.mul_at(&prod, c);
    }
    let vars: Vec<String> = (3..9).flat_map(|t| d.copy(t)).collect();
    let in_w = Formula::and((3..9).map(|t| d.on(w, t)).collect());
    require("W^6 in V", check_implication(&vars, &in_w, &d.at(&sub.v, &prod), opts))?;

    let e_at = |a: &[Rat], b: &[Rat]| {
        let ia = d.inv_at(a);
        Formula::and(vec![d.at(&d.u, a), d.at2(&d.o, &ia, b), d.at(&sub.h0, &d.mul_at(&ia, b))])
    };
    let relation = e_at(&vx, &vy);
    let wx = w.clone();
    let wy = d.on(w, 1);
    let wz = d.on(w, 2);
    let xy = d.xy();
    let xyz = [d.x.clone(), d.y.clone(), d.z.clone()].concat();
    let entries = vec![
        entry("E-refl", vec![implication("E(x,x)", &x, wx.clone(), e_at(&vx, &vx), opts)]),
        entry(
            "E-sym",
            vec![implication(
                "E(x,y) gives E(y,x)",
                &xy,
                Formula::and(vec![wx.clone(), wy.clone(), relation.clone()]),
                e_at(&vy, &vx),
                opts,
            )],
        ),
        entry(
            "E-trans",
            vec![implication(
                "E(x,y), E(y,z) give E(x,z)",
                &xyz,
                Formula::and(vec![wx, wy, wz, relation.clone(), e_at(&vy, &vz)]),
                e_at(&vx, &vz),
                opts,
            )],
        ),
    ];
    Ok(Equivalence { relation, report: AxiomReport { entries } })
}
