//! Exact distances, translation lengths and classifications on trees and
//! lines.

use simhyp::actions::{parse_actions, ActionSpace};
use simhyp::group::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GroupSpec::parse("product(free(2),free(3))")?;
    let spaces = parse_actions(&g, "cayley(factor=1); cayley(factor=2); line(a=1, y=-1/2)")?;
    for w in ["(a b a^-1, 1)", "(a, x y)", "(b^2, y^2)"] {
        let x = g.parse_element(w)?;
        print!("{w:<16}");
        for s in &spaces {
            let c = s.classify(&x)?;
            print!("  {s}: d={} tau={} {:?}", c.orbit_displacement, c.translation_length, c.kind);
        }
        println!();
    }

    let f2 = GroupSpec::free(2)?;
    let tree = ActionSpace::cayley(f2.clone(), None)?;
    let (x, y) = (f2.parse_element("a b a")?, f2.parse_element("a b^-1")?);
    println!("Gromov product (x|y)_o = {}", tree.gromov_product(&x, &y)?);

    let zz = GroupSpec::parse("freeprod(z, z/2)")?;
    let bs = ActionSpace::bass_serre(zz.clone(), None)?;
    for w in ["a", "b", "a b", "b a b"] {
        let e = zz.parse_element(w)?;
        println!(
            "bass-serre {w:<6} d(o, g o) = {:<4} tau = {}",
            bs.orbit_distance(&e)?,
            bs.translation_length(&e)?
        );
    }
    Ok(())
}
