//! Product neighbourhoods and the coset relation of a normal sublocal group.

use codfkit::cad::lift::CadOptions;
use codfkit::formula::{formula_to_string, parse};
use codfkit::localgroup::{build_product_neighbourhoods, catalog, check_normal_sublocal, equivalence_on_w, SublocalData};

fn main() -> codfkit::Result<()> {
    let opts = CadOptions::default();
    let (_, mut spec) = catalog().into_iter().find(|(n, _)| *n == "additive").unwrap();
    spec.order = 1;
    let d = spec.carve(&opts)?;
    let us = build_product_neighbourhoods(&d, 6, &opts)?;
    for (k, u) in us.iter().enumerate() {
        println!("U{}: {}", k + 1, formula_to_string(u));
    }
    let sub = SublocalData::from_formulas(&d, &parse("D(x) = 0")?, None)?;
    println!("normal: {}", check_normal_sublocal(&d, &sub, &opts).all_pass());
    let e = equivalence_on_w(&d, &sub, us.last().unwrap(), &opts)?;
    println!("E: {}", formula_to_string(&e.relation));
    Ok(())
}
