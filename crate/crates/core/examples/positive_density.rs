//! An extension set for two trees, verified on a ball, and the density
//! bound it gives.

use simhyp::actions::parse_actions;
use simhyp::census::{density_bound_from_extension_set, density_table, Method, SimulHyperbolic};
use simhyp::construct::{sc_extension_set, FamilyRoute};
use simhyp::group::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupSpec::parse("product(free(2),free(3))")?;
    let trees = parse_actions(&g, "cayley(factor=1); cayley(factor=2)")?;
    let set = sc_extension_set(&trees, Some(5), FamilyRoute::Search)?;
    println!(
        "|F| = {}, D = {}, ladder {:?}, verified on {} elements",
        set.elements.len(),
        set.d,
        set.ladder,
        set.checked
    );

    let bound = density_bound_from_extension_set(&set.elements, &g)?;
    println!("M = {}, c = {}", bound.m, bound.c);

    let sh = SimulHyperbolic::new(trees);
    let top = 2 * bound.m as u32 + 4;
    for r in density_table(&g, &sh, top, Method::Series)?.iter().skip(top as usize - 4) {
        println!("n = {:>3}  SH fraction {:.6}  bound holds: {}", r.n, ratio(&r.ratio), bound.holds_for(r));
    }
    Ok(())
}

fn ratio(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
