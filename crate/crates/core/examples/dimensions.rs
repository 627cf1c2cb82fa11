//! Transcendence dimension of differential sets and the uniform bound on
//! finite fibers.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::parse;
use codfkit::starmap::{t_dim, uf_bound};

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    for src in ["x > 0", "x' = x", "x'' = 0", "x = 1", "x' = 0 & y' = x"] {
        println!("t_dim({src}) = {}", t_dim(&parse(src)?, &[], &opts)?);
    }
    let fiber = parse("x^2 = y & y > 0")?;
    println!("uf_bound = {}", uf_bound(&fiber, "x", &["y".to_string()], &opts)?);
    Ok(())
}
