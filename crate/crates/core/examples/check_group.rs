//! Check the local group axioms on every catalog group and on its canned
//! mutations.

use codfkit::cad::lift::CadOptions;
use codfkit::localgroup::{catalog, check_local_group, mutate};

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    for (name, spec) in catalog() {
        let d = spec.carve(&opts)?;
        println!("{name}: all pass = {}", check_local_group(&d, &opts).all_pass());
        for m in &spec.mutations {
            let r = check_local_group(&mutate(&d, m)?, &opts);
            println!("  {}: failing {:?}, intended {:?}", m.name, r.failing(), m.intended);
        }
    }
    Ok(())
}
