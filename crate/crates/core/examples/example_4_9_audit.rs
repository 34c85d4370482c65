//! The F2 × F3 growth audit: the printed closed form for the ball against
//! the convolution of the factor series, with exhaustive counts up to
//! radius 6.

use simhyp::census::example_4_9_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let audit = example_4_9_report(12, 6)?;
    print!("{audit}");
    let (printed, exact) = audit.min_fractions();
    println!("smallest non-SH fraction for n >= 1: printed {printed}, exact {exact}");
    Ok(())
}
