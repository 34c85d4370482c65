//! Axes, projections and weak independence on the Cayley tree of F2.

use num_rational::Rational64;
use simhyp::actions::ActionSpace;
use simhyp::contract::{axis, check_contracting, weakly_independent};
use simhyp::group::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = GroupSpec::free(2)?;
    let tree = ActionSpace::cayley(f2.clone(), None)?;
    let g = f2.parse_element("b a^2 b^-1")?;
    let ax = axis(&tree, &g)?;
    println!(
        "axis of {}: translation {}, entry {}, {} from the basepoint",
        f2.render(&g),
        ax.translation,
        tree.render_vertex(&ax.entry),
        ax.basepoint_distance()?
    );

    let report = check_contracting(&ax, Rational64::from_integer(0), 200, 8, 11)?;
    println!(
        "disjoint geodesics tested: {}, largest projection: {}, pass: {}",
        report.samples_tested, report.max_projection_diameter, report.pass
    );

    for w in ["a", "a b", "b a^-2 b^-1"] {
        let h = f2.parse_element(w)?;
        let cert = weakly_independent(&tree, &g, &h)?;
        let diams: Vec<String> = cert.overlaps.iter().map(|(r, d)| format!("r={r}: {d}")).collect();
        println!("independent from {w:<12} {:<5} [{}]", cert.verdict, diams.join(", "));
    }
    Ok(())
}
