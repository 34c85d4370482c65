//! Homomorphisms, counting quasimorphisms and a combined nonvanishing
//! element.

use simhyp::group::GroupSpec;
use simhyp::qm::{avoid_cosets, combine_nonvanishing, defect_sample, homogeneity_check, parse_qms};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = GroupSpec::free(2)?;
    let qms = parse_qms(&f2, &[], "hom(a=1); hom(b=1, a=-1); count(w=ab)")?;
    for q in &qms {
        let g = f2.parse_element("a b a b^-1 a")?;
        println!(
            "{:<14} beta(g) = {:<6} defect <= {}  sampled {}  homogeneous to n=8: {}",
            q.label(),
            q.evaluate(&g)?,
            q.defect(),
            defect_sample(q, 500, 8, 3)?,
            homogeneity_check(q, &g, 8)?
        );
    }

    let combined = combine_nonvanishing(&qms, 4)?;
    println!("nonzero on all three: {}", f2.render(&combined.element));
    for (q, v) in qms.iter().zip(&combined.values) {
        println!("  {} = {v}", q.label());
    }

    let fs = vec![f2.parse_element("a^2")?, f2.parse_element("b")?];
    let avoided = avoid_cosets(&qms, &combined.element, &fs)?;
    println!("power avoiding the cosets: k = {}", avoided.k);
    Ok(())
}
