//! Normal forms in the three supported group families.

use simhyp::group::GroupSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = GroupSpec::parse("free(2)")?;
    let g = f2.parse_element("a b a^-1")?;
    let h = f2.parse_element("a B")?;
    println!("g = {}, h = {}", f2.render(&g), f2.render(&h));
    println!("g h = {}", f2.render(&f2.multiply(&g, &h)?));
    println!("g^-1 = {}", f2.render(&f2.inverse(&g)));

    let cf = f2.cyclic_reduce(&g)?;
    println!(
        "g = u c u^-1 with u = {}, c = {}",
        f2.render(&cf.conjugator),
        f2.render(&cf.core)
    );
    for n in 1..=4 {
        // |g^n| = n|c| + (|g| - |c|)
        println!("|g^{n}| = {}", f2.word_length(&f2.pow(&g, n)?));
    }

    let p = GroupSpec::parse("product(free(2),free(3))")?;
    let x = p.parse_element("(a b, y^2)")?;
    let y = p.parse_element("(1, x)")?;
    println!("product: {} * {} = {}", p.render(&x), p.render(&y), p.render(&p.multiply(&x, &y)?));
    println!("commute: {}", p.commutes(&x, &p.parse_element("(1, y)")?)?);

    let z = GroupSpec::parse("freeprod(z, z/2)")?;
    let t = z.parse_element("b a^3 b")?;
    println!("Z * Z/2: {} squared = {}", z.render(&t), z.render(&z.pow(&t, 2)?));
    println!("b b = {}", z.render(&z.parse_element("b b")?));
    Ok(())
}
