//! Carve a local group out of the multiplicative group and list the
//! largeness certificates behind each step.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::formula_to_string;
use codfkit::localgroup::catalog;

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    let (_, spec) = catalog().into_iter().find(|(n, _)| *n == "multiplicative").unwrap();
    let d = spec.carve(&opts)?;
    println!("H: {}", formula_to_string(&d.h));
    println!("U: {}", formula_to_string(&d.u));
    println!("O: {}", formula_to_string(&d.o));
    for c in &d.certificates {
        println!("  {}: {}", c.claim, c.holds);
    }
    Ok(())
}
