//! Formal power-series solution through a regular zero, with its residual.

use codfkit::algebra::rat::{q, render};
use codfkit::dlwitness::lift_jet;
use codfkit::formula::parse_poly;

fn main() -> codfkit::Result<()> {
    let f = parse_poly("x' - x")?;
    let z = lift_jet(&f, &[q(1), q(1)], 6)?;
    let cs: Vec<String> = z.coefficients.iter().map(render).collect();
    println!("exp: {}", cs.join(", "));
    println!("residual order: {:?}", z.residual_order);

    let g = parse_poly("x'^2 - x")?;
    let z = lift_jet(&g, &[q(1), q(1)], 6)?;
    let cs: Vec<String> = z.coefficients.iter().map(render).collect();
    println!("x'^2 = x: {}", cs.join(", "));
    Ok(())
}
