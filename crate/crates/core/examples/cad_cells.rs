//! Cylindrical decomposition of the unit circle, a dimension count and a
//! quantifier elimination.

use codfkit::cad::decompose::decompose;
use codfkit::cad::lift::CadOptions;
use codfkit::cad::qe::{dimension, qe};
use codfkit::formula::parse::{parse_algebraic, parse_alg_poly};
use codfkit::formula::formula_to_string;

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    let vars = vec!["x".to_string(), "y".to_string()];
    let d = decompose(&[parse_alg_poly("x^2 + y^2 - 1")?], &vars, &opts)?;
    println!("{} cells", d.cells.len());
    for c in &d.cells {
        println!("  {:?} dim {}: {}", c.index, c.dim, formula_to_string(&c.description));
    }

    let circle = parse_algebraic("x^2 + y^2 = 1")?;
    println!("dim of the circle: {}", dimension(&circle, &vars, &opts)?);

    let phi = parse_algebraic("E y. x*y^2 + y + 1 = 0")?;
    println!("{} <=> {}", formula_to_string(&phi), formula_to_string(&qe(&phi, &opts)?));
    Ok(())
}
