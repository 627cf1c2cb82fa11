//! Translate a differential formula into a semialgebraic formula over jet
//! coordinates, then look at the cells of its star set.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::{formula_to_string, parse, poly_to_string, star_translate};
use codfkit::starmap::build_star;

fn main() -> codfkit::Result<()> {
    let phi = parse("x' = x & x > 0")?;
    let (star, ctx) = star_translate(&phi)?;
    println!("coordinates: {}", ctx.coords().join(", "));
    println!("phi*: {}", formula_to_string(&star));

    let set = build_star(&phi, &[], &CadOptions::default())?;
    for c in &set.cells {
        println!("cell {:?}: {}", c.base.index, formula_to_string(&c.base.description));
        println!("  open coordinates: {:?}", c.open_coords);
        for p in &c.prolongations {
            println!("  {} = ({}) / ({})", p.target, poly_to_string(&p.g.num), poly_to_string(&p.g.den));
        }
    }
    Ok(())
}
