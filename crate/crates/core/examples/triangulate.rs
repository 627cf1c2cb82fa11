//! Split a polynomial system into regular branches in one variable.

use codfkit::formula::formula_to_string;
use codfkit::formula::parse::parse_alg_poly;
use codfkit::formula::poly_to_string;
use codfkit::triangulate::{triangulate_with, TriOptions};

fn main() -> codfkit::Result<()> {
    let polys = vec![parse_alg_poly("x*y^2 - 1")?, parse_alg_poly("y*z - x")?];
    let opts = TriOptions { max_branches: 64, inequations: vec![], open: None };
    let t = triangulate_with(&polys, "y", &opts)?;
    for (i, b) in t.branches.iter().enumerate() {
        println!("branch {i} ({:?})", b.kind);
        if let Some(m) = &b.main {
            println!("  main: {}", poly_to_string(m));
        }
        for e in &b.equations {
            println!("  = 0: {}", poly_to_string(e));
        }
        if let Some(q) = &b.inequation {
            println!("  != 0: {}", poly_to_string(q));
        }
        if let Some(o) = &b.open {
            println!("  side: {}", formula_to_string(o));
        }
    }
    Ok(())
}
