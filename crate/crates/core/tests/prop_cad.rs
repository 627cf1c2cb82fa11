use std::collections::HashMap;
use std::time::{Duration, Instant};

use codfkit::algebra::diff::AlgPoly;
use codfkit::algebra::poly::Monomial;
use codfkit::algebra::rat::{q, qf, sign, Q};
use codfkit::algebra::upoly::UPoly;
use codfkit::cad::decompose::decompose;
use codfkit::cad::lift::CadOptions;
use codfkit::cad::qe::{decide, dimension, is_large, qe, skolem_roots};
use codfkit::cad::roots::isolate;
use codfkit::formula::ast::{Formula, LFormula, Rel};
use codfkit::Error;
use proptest::prelude::*;

const XY: [&str; 2] = ["x", "y"];

fn vars() -> Vec<String> {
    XY.iter().map(|s| s.to_string()).collect()
}

/// Polynomials in x, y of total degree at most 2.
fn poly() -> impl Strategy<Value = AlgPoly> {
    let term = (0u32..=2, 0u32..=2, -4i64..=4);
    prop::collection::vec(term, 1..=4).prop_map(|ts| {
        let mut p = AlgPoly::zero();
        for (a, b, c) in ts {
            let b = b.min(2 - a);
            let mut pairs = Vec::new();
            if a > 0 {
                pairs.push(("x".to_string(), a));
            }
            if b > 0 {
                pairs.push(("y".to_string(), b));
            }
            p.add_term(Monomial::from_pairs(pairs), q(c));
        }
        p
    })
}

fn rel() -> impl Strategy<Value = Rel> {
    prop::sample::select(vec![Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge])
}

fn point() -> impl Strategy<Value = HashMap<String, Q>> {
    ((-12i64..=12, 1i64..=4), (-12i64..=12, 1i64..=4))
        .prop_map(|((a, b), (c, d))| [("x".to_string(), qf(a, b)), ("y".to_string(), qf(c, d))].into())
}

/// Default limits with a per-case time budget.
fn opts() -> CadOptions {
    CadOptions { deadline: Some(Instant::now() + Duration::from_secs(10)), ..Default::default() }
}

fn skip_resource<T>(r: Result<T, Error>) -> Option<T> {
    match r {
        Ok(t) => Some(t),
        Err(Error::Resource(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

fn univariate(p: &AlgPoly, x: &Q) -> UPoly {
    let at: HashMap<String, AlgPoly> = [("x".to_string(), AlgPoly::constant(x.clone()))].into();
    let py = p.subst_many(&at);
    UPoly::new(py.coeffs_in(&"y".to_string()).iter().map(|c| c.constant_value().unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cells_partition_the_plane(ps in prop::collection::vec(poly(), 1..=2), pts in prop::collection::vec(point(), 200)) {
        let Some(d) = skip_resource(decompose(&ps, &vars(), &opts())) else { return Ok(()) };
        let mut signs: HashMap<usize, Vec<i32>> = HashMap::new();
        for pt in pts {
            let xs = [pt["x"].clone(), pt["y"].clone()];
            let hits = d.locate(&xs);
            prop_assert_eq!(hits.len(), 1, "{:?}", xs);
            let sv: Vec<i32> = ps.iter().map(|p| sign(&p.eval(&pt).unwrap())).collect();
            // every point of a cell has the cell's sign vector
            let first = signs.entry(hits[0]).or_insert_with(|| sv.clone());
            prop_assert_eq!(&*first, &sv);
        }
    }

    #[test]
    fn qe_agrees_with_substituted_sentences(p in poly(), r in rel(), xs in prop::collection::vec(-8i64..=8, 100)) {
        let phi = Formula::exists(vec!["y".into()], Formula::cmp0(p.clone(), r));
        let Some(out) = skip_resource(qe(&phi, &opts())) else { return Ok(()) };
        for x in xs {
            let at: HashMap<String, AlgPoly> = [("x".to_string(), AlgPoly::constant(q(x)))].into();
            let sentence = Formula::exists(vec!["y".into()], Formula::cmp0(p.subst_many(&at), r));
            let truth = decide(&sentence, &opts()).unwrap();
            let pt: HashMap<String, Q> = [("x".to_string(), q(x))].into();
            prop_assert_eq!(out.eval_qf(&pt).unwrap(), truth, "x = {}", x);
        }
    }

    #[test]
    fn dimension_is_monotone(a in poly(), ra in rel(), b in poly(), rb in rel()) {
        let big = Formula::cmp0(a, ra);
        let small: LFormula = Formula::and(vec![big.clone(), Formula::cmp0(b, rb)]);
        let o = opts();
        let (Some(ds), Some(db)) = (skip_resource(dimension(&small, &vars(), &o)), skip_resource(dimension(&big, &vars(), &o))) else { return Ok(()) };
        prop_assert!(ds <= db);
    }

    #[test]
    fn largeness_is_monotone(a in poly(), b in poly()) {
        let o = opts();
        let wide = Formula::cmp0(a.clone(), Rel::Ne);
        let narrow = Formula::and(vec![wide.clone(), Formula::cmp0(b, Rel::Ne)]);
        if skip_resource(is_large(&narrow, &LFormula::True, &vars(), &o)) == Some(true) {
            prop_assert_eq!(skip_resource(is_large(&wide, &LFormula::True, &vars(), &o)), Some(true));
        }
    }

    #[test]
    fn skolem_root_counts_match_isolation(p in poly(), xs in prop::collection::vec((-16i64..=16, 1i64..=4), 12)) {
        prop_assume!(p.degree_in(&"y".to_string()) > 0);
        let fs = match skip_resource(skolem_roots(&p, "y", &["x".to_string()], &opts())) {
            Some(fs) => fs,
            None => return Ok(()),
        };
        for (n, d) in xs {
            let x = qf(n, d);
            let pt: HashMap<String, Q> = [("x".to_string(), x.clone())].into();
            let u = univariate(&p, &x);
            if u.is_zero() {
                continue;
            }
            let direct = isolate(&u).len();
            for f in fs.iter().filter(|f| f.domain.eval_qf(&pt).unwrap()) {
                prop_assert_eq!(f.root_count, direct, "x = {}", x);
            }
        }
    }
}
