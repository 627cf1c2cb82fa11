use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::rat::{q, qf};
use crate::cad::lift::CadOptions;
use crate::formula::parse::parse;
use crate::formula::render::formula_to_string;

fn spec(name: &str) -> GroupSpec {
    catalog().into_iter().find(|(n, _)| *n == name).unwrap().1
}

fn carved(name: &str) -> LocalGroupData {
    spec(name).carve(&CadOptions::default()).unwrap()
}

fn at(d: &LocalGroupData, f: &LFormula, xs: &[Q]) -> bool {
    f.eval_qf(&d.point(xs)).unwrap()
}

fn pair(d: &LocalGroupData, f: &LFormula, xs: &[Q], ys: &[Q]) -> bool {
    let mut p = d.point(xs);
    p.extend(d.y.iter().cloned().zip(ys.iter().cloned()));
    f.eval_qf(&p).unwrap()
}

#[test]
fn multiplicative_group_is_carved_away_from_zero() {
    let d = carved("multiplicative");
    for v in [-3, -1, 1, 2, 7] {
        assert!(at(&d, &d.h, &[q(v)]));
        assert!(at(&d, &d.u, &[q(v)]));
    }
    assert!(!at(&d, &d.h, &[q(0)]));
    assert!(pair(&d, &d.o, &[q(2)], &[q(-5)]));
    assert!(!pair(&d, &d.o, &[q(2)], &[q(0)]));
    let p = d.point(&[q(3)]);
    assert_eq!(d.inv[0].eval(&p), Some(qf(1, 3)));
}

#[test]
fn constants_in_jets_form_a_line() {
    let d = carved("constants");
    assert_eq!(d.dim(), 2);
    assert!(at(&d, &d.h, &[q(5), q(0)]));
    assert!(!at(&d, &d.h, &[q(5), q(1)]));
    let mut p = d.point(&[q(2), q(0)]);
    p.extend(d.y.iter().cloned().zip([q(3), q(0)]));
    let prod: Vec<Q> = d.mul.iter().map(|r| r.eval(&p).unwrap()).collect();
    assert_eq!(prod, vec![q(5), q(0)]);
}

#[test]
fn triangular_group_needs_nonzero_diagonal() {
    let d = carved("triangular");
    assert!(at(&d, &d.h, &[q(2), q(7)]));
    assert!(!at(&d, &d.h, &[q(0), q(7)]));
    let p = d.point(&[q(2), q(4)]);
    let inv: Vec<Q> = d.inv.iter().map(|r| r.eval(&p).unwrap()).collect();
    assert_eq!(inv, vec![qf(1, 2), q(-2)]);
}

#[test]
fn certificates_recheck() {
    let o = CadOptions::default();
    for name in ["multiplicative", "constants"] {
        let d = carved(name);
        assert!(!d.certificates.is_empty());
        for c in &d.certificates {
            assert!(c.holds);
            assert!(c.recheck(&o).unwrap(), "{name}: {}", c.claim);
        }
    }
}

#[test]
fn catalog_groups_satisfy_the_axioms() {
    let o = CadOptions::default();
    for (name, s) in catalog() {
        let d = s.carve(&o).unwrap();
        let r = check_local_group(&d, &o);
        assert!(r.all_pass(), "{name}: {}", r.to_text());
    }
}

#[test]
fn mutations_break_exactly_their_axiom() {
    let o = CadOptions::default();
    for (name, s) in catalog() {
        let d = s.carve(&o).unwrap();
        assert!(!s.mutations.is_empty());
        for m in &s.mutations {
            let r = check_local_group(&mutate(&d, m).unwrap(), &o);
            let failing: Vec<&str> =
                r.failing().into_iter().filter(|n| ["lg1", "lg2", "lg3", "lg4"].contains(n)).collect();
            assert_eq!(failing, m.intended, "{name} / {}", m.name);
            for n in failing {
                let w = r.get(n).unwrap().witness.as_ref();
                assert!(w.is_some_and(|w| !w.is_empty()), "{name} / {}: no witness", m.name);
            }
        }
    }
}

#[test]
fn wrong_inverse_is_caught_at_one() {
    let o = CadOptions::default();
    let s = spec("additive");
    let d = s.carve(&o).unwrap();
    let m = s.mutations.iter().find(|m| m.name == "wrong inverse").unwrap();
    let r = check_local_group(&mutate(&d, m).unwrap(), &o);
    let w = r.get("lg3").unwrap().witness.clone().unwrap();
    assert_eq!(w, vec![("x_0_0".to_string(), q(1))]);
}

fn additive_jets() -> LocalGroupData {
    let mut s = spec("additive");
    s.order = 1;
    s.carve(&CadOptions::default()).unwrap()
}

#[test]
fn constants_are_a_normal_sublocal_group() {
    let o = CadOptions::default();
    let d = additive_jets();
    let sub = SublocalData::from_formulas(&d, &parse("D(x) = 0").unwrap(), None).unwrap();
    assert!(check_sublocal(&d, &sub, &o).all_pass());
    assert!(check_normal_sublocal(&d, &sub, &o).all_pass());
}

#[test]
fn open_segment_is_not_closed() {
    let o = CadOptions::default();
    let d = additive_jets();
    let sub = SublocalData::from_formulas(&d, &parse("D(x) = 0 & x > 0 & x < 1").unwrap(), None).unwrap();
    let r = check_sublocal(&d, &sub, &o);
    assert_eq!(r.status("sub1"), Some(Status::Fail));
    assert!(r.get("sub1").unwrap().detail.as_deref().unwrap().contains("H0 closed in V"));
}

#[test]
fn diagonal_line_is_sublocal_but_not_normal() {
    let o = CadOptions::default();
    let d = carved("triangular");
    let sub = SublocalData::from_formulas(&d, &parse("x2 = 0 & x1 != 0").unwrap(), None).unwrap();
    assert!(check_sublocal(&d, &sub, &o).all_pass());
    let r = check_normal_sublocal(&d, &sub, &o);
    let e = r.get("normal").unwrap();
    assert_eq!(e.status, Status::Fail);
    // y x y⁻¹ at the witness leaves the line.
    let w: HashMap<String, Q> = e.witness.clone().unwrap().into_iter().collect();
    let get = |v: &str| w.get(v).cloned().unwrap_or_else(|| q(0));
    let (x1, x2, y1, y2) = (get("x1_0_0"), get("x2_1_0"), get("y1_2_0"), get("y2_3_0"));
    assert_eq!(x2, q(0));
    // (y1, y2)(x1, 0)(1/y1, -y2/y1) has second coordinate y2 - x1 y2.
    assert_ne!(&y2 - &(&x1 * &y2), q(0));
    assert_ne!(y1, q(0));
}

#[test]
fn neighbourhoods_of_the_additive_line_are_everything() {
    let o = CadOptions::default();
    let us = build_product_neighbourhoods(&carved("additive"), 6, &o).unwrap();
    assert_eq!(us.len(), 6);
    assert!(us.iter().all(|u| formula_to_string(u) == "true"));
}

#[test]
fn multiplicative_neighbourhoods_shrink_around_one() {
    let o = CadOptions::default();
    let d = carved("multiplicative");
    let us = build_product_neighbourhoods(&d, 6, &o).unwrap();
    for (k, u) in us.iter().enumerate() {
        assert!(at(&d, u, &[q(1)]));
        assert!(!at(&d, u, &[q(0)]));
        if k > 0 {
            let prev = &us[k - 1];
            for i in -40..=40 {
                let v = qf(i, 16);
                if at(&d, u, &[v.clone()]) {
                    assert!(at(&d, prev, &[v]));
                }
            }
        }
    }
    // Products of k factors from 𝔘ₖ stay in 𝔘₂.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 3..=6 {
        let members: Vec<Q> = (-200..=200).map(|i| qf(1000 + i, 1000)).filter(|v| at(&d, &us[k - 1], &[v.clone()])).collect();
        for _ in 0..50 {
            let p = (0..k).fold(q(1), |acc, _| acc * &members[rng.gen_range(0..members.len())]);
            assert!(at(&d, &us[1], &[p]));
        }
    }
}

#[test]
fn depth_is_capped() {
    let o = CadOptions::default();
    let e = build_product_neighbourhoods(&carved("multiplicative"), 7, &o).unwrap_err();
    assert!(e.to_string().contains("n exceeds supported depth"));
}

fn mult_with(h0: &str) -> (LocalGroupData, SublocalData, LFormula) {
    let o = CadOptions::default();
    let d = carved("multiplicative");
    let sub = SublocalData::from_formulas(&d, &parse(h0).unwrap(), None).unwrap();
    let w = build_product_neighbourhoods(&d, 6, &o).unwrap().pop().unwrap();
    (d, sub, w)
}

#[test]
fn trivial_subgroup_gives_equality() {
    let (d, sub, w) = mult_with("x = 1");
    let e = equivalence_on_w(&d, &sub, &w, &CadOptions::default()).unwrap();
    assert!(e.report.all_pass(), "{}", e.report.to_text());
    let pts: Vec<Q> = [31, 32, 33].iter().map(|&i| qf(i, 32)).collect();
    for a in &pts {
        for b in &pts {
            assert_eq!(pair(&d, &e.relation, &[a.clone()], &[b.clone()]), a == b);
        }
    }
}

#[test]
fn whole_subgroup_gives_one_class() {
    let (d, sub, w) = mult_with("x != 0");
    let e = equivalence_on_w(&d, &sub, &w, &CadOptions::default()).unwrap();
    assert!(e.report.all_pass());
    assert!(pair(&d, &e.relation, &[qf(31, 32)], &[qf(33, 32)]));
}

#[test]
fn sampled_classes_are_consistent() {
    let o = CadOptions::default();
    let d = additive_jets();
    let sub = SublocalData::from_formulas(&d, &parse("D(x) = 0").unwrap(), None).unwrap();
    let e = equivalence_on_w(&d, &sub, &d.h.clone(), &o).unwrap();
    assert!(e.report.all_pass());
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let pts: Vec<Vec<Q>> =
        (0..20).map(|_| vec![qf(rng.gen_range(-9..=9), 4), qf(rng.gen_range(-2..=2), 1)]).collect();
    let rel = |a: &Vec<Q>, b: &Vec<Q>| pair(&d, &e.relation, a, b);
    for a in &pts {
        assert!(rel(a, a));
        for b in &pts {
            // Classes are the fibres of the derivative coordinate.
            assert_eq!(rel(a, b), a[1] == b[1]);
            assert_eq!(rel(a, b), rel(b, a));
            for c in &pts {
                if rel(a, b) && rel(b, c) {
                    assert!(rel(a, c));
                }
            }
        }
    }
}

#[test]
fn window_outside_the_neighbourhoods_is_refused() {
    let (d, sub, _) = mult_with("x = 1");
    let e = equivalence_on_w(&d, &sub, &d.h.clone(), &CadOptions::default()).unwrap_err();
    assert!(e.to_string().contains("precondition fails"));
}

#[test]
fn report_json_lists_every_axiom() {
    let o = CadOptions::default();
    let d = carved("additive");
    let j = check_local_group(&d, &o).to_json();
    let s = j.to_string();
    for n in ["lg1", "lg2", "lg3", "lg4"] {
        assert!(s.contains(n));
    }
    let dj = d.to_json();
    for k in ["H", "U", "O", "inv", "mul", "identity", "certificates"] {
        assert!(dj.get(k).is_some(), "{k}");
    }
}
