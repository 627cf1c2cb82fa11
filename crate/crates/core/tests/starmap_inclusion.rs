use codfkit::cad::lift::CadOptions;
use codfkit::cad::qe::decide;
use codfkit::formula::ast::{Formula, LFormula};
use codfkit::formula::parse::parse;
use codfkit::starmap::build_star;

const CATALOG: [&str; 10] = [
    "x > 0",
    "D(x) = 0",
    "x' = x & x > 0",
    "x'' = 0",
    "x*x' = 1",
    "x^2 + x'^2 = 1",
    "x' > x^2 | x < -1",
    "x = 1 & D(x) >= -5",
    "x'^2 = x & x > 0",
    "x' < 0 & y' = x",
];

fn inside(a: &LFormula, b: &LFormula, coords: &[String]) -> bool {
    let bad = Formula::and(vec![a.clone(), Formula::not(b.clone())]);
    !decide(&Formula::exists(coords.to_vec(), bad), &CadOptions::default()).unwrap()
}

#[test]
fn every_cell_lies_in_the_translated_set() {
    for src in CATALOG {
        let phi = parse(src).unwrap();
        let s = build_star(&phi, &[], &CadOptions::default()).unwrap();
        let coords = s.context.coords();
        let target = s.context.star(&phi).unwrap();
        assert!(!s.cells.is_empty(), "{src}");
        for c in &s.cells {
            assert!(inside(&c.base.description, &target, &coords), "{src}: cell {:?}", c.base.index);
        }
        assert!(inside(&s.formula(), &target, &coords), "{src}");
    }
}
