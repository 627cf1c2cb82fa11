//! Eliminate a differential existential quantifier.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::{formula_to_string, parse};
use codfkit::triangulate::qe_exists_diff;

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    for src in ["E y. y*x = 1", "E y. y' = 0 & y*x = 1", "E y. y' = x & y > 0"] {
        let out = qe_exists_diff(&parse(src)?, &opts)?;
        println!("{src}  <=>  {}", formula_to_string(&out));
    }
    Ok(())
}
