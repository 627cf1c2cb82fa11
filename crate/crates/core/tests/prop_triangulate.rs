use std::collections::HashMap;

use codfkit::algebra::diff::AlgPoly;
use codfkit::algebra::poly::Monomial;
use codfkit::algebra::rat::{q, Q};
use codfkit::triangulate::branch::{triangulate_with, BranchKind, TriOptions};
use codfkit::Error;
use proptest::prelude::*;

const VARS: [&str; 3] = ["v", "a", "b"];

fn poly() -> impl Strategy<Value = AlgPoly> {
    prop::collection::vec(((0u32..=3, 0u32..=3, 0u32..=3), -3i64..=3), 1..5).prop_map(|terms| {
        let mut p = AlgPoly::zero();
        for ((e0, e1, e2), c) in terms {
            let es = [e0, e1, e2];
            // total degree at most 3
            let mut left = 3u32;
            let mut pairs = Vec::new();
            for (name, e) in VARS.iter().zip(es) {
                let e = e.min(left);
                left -= e;
                if e > 0 {
                    pairs.push((name.to_string(), e));
                }
            }
            p.add_term(Monomial::from_pairs(pairs), q(c));
        }
        p
    })
}

fn grid() -> Vec<HashMap<String, Q>> {
    let mut out = Vec::new();
    for i in -5..=5 {
        for j in -5..=5 {
            for k in -5..=5 {
                out.push(VARS.iter().map(|s| s.to_string()).zip([q(i), q(j), q(k)]).collect());
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn branches_agree_with_the_system_on_the_grid(ps in prop::collection::vec(poly(), 0..=3)) {
        let t = match triangulate_with(&ps, "v", &TriOptions::default()) {
            Ok(t) => t,
            Err(Error::Resource(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for pt in grid() {
            let lhs = ps.iter().all(|p| p.eval(&pt).unwrap() == q(0));
            let rhs = t.branches.iter().any(|b| b.to_formula().eval_qf(&pt).unwrap());
            prop_assert_eq!(lhs, rhs, "at {:?}", pt);
        }
    }

    #[test]
    fn measure_decreases_and_forms_are_well_shaped(ps in prop::collection::vec(poly(), 0..=3)) {
        let Ok(t) = triangulate_with(&ps, "v", &TriOptions::default()) else { return Ok(()) };
        for s in &t.trace {
            prop_assert!(s.after < s.before);
        }
        let v = "v".to_string();
        for b in &t.branches {
            match b.kind {
                BranchKind::Form1 => {
                    let p = b.main.as_ref().unwrap();
                    prop_assert!(p.degree_in(&v) >= 1);
                    prop_assert_eq!(b.separant.as_ref().unwrap(), &p.diff(&v));
                }
                BranchKind::Form2 => prop_assert!(b.main.is_none() && b.separant.is_none()),
            }
            for e in &b.equations {
                prop_assert!(!e.contains_var(&v));
            }
        }
    }
}
