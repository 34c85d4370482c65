//! Simultaneously contracting and hyperbolic elements, with certificates.

use simhyp::actions::parse_actions;
use simhyp::construct::{find_simul_contracting, find_simul_hyperbolic, DEFAULT_SEARCH_RADIUS};
use simhyp::group::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupSpec::parse("product(free(2),free(3))")?;
    let trees = parse_actions(&g, "cayley(factor=1); cayley(factor=2)")?;
    let sc = find_simul_contracting(&trees, None, None)?;
    println!("-- two trees\n{}", sc.render(&g));
    assert!(sc.recheck(&trees)?);

    let mixed = parse_actions(&g, "cayley(factor=1); cayley(factor=2); line(b=1, z=2)")?;
    let sh = find_simul_hyperbolic(&mixed, &[], DEFAULT_SEARCH_RADIUS)?;
    println!("-- trees and a line\n{}", sh.render(&g));

    let zz = GroupSpec::parse("freeprod(z, z/2)")?;
    let spaces = parse_actions(&zz, "bass-serre; line(a=1)")?;
    let sh = find_simul_hyperbolic(&spaces, &[], DEFAULT_SEARCH_RADIUS)?;
    println!("-- Bass-Serre tree and a line\n{}", sh.render(&zz));
    Ok(())
}
