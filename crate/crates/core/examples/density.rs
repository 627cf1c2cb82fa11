//! Lift the sample of every cell of a star set to a series solution.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::parse;
use codfkit::starmap::{build_star, density_check};

fn main() -> codfkit::Result<()> {
    let set = build_star(&parse("x'^2 + x^2 < 1 & x' > 0")?, &[], &CadOptions::default())?;
    for c in &set.cells {
        let r = density_check(&set, c, 8)?;
        println!(
            "cell {:?}: residual {:?}, in cell {}, prolongations {:?}",
            c.base.index, r.series.residual_order, r.satisfies_description, r.prolongations_agree
        );
    }
    Ok(())
}
