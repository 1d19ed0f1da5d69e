//! Converting between midpoint-radius and endpoint forms costs width.

use repro_interval::interval::{EndpointInterval, MidRadInterval};

fn main() -> repro_interval::Result<()> {
    let r = 2f64.powi(-53);
    let x = MidRadInterval::new(1.5, r)?;
    let ep = x.to_endpoints();
    println!("{} -> {} (width {} radii)", x.to_literal(), ep.to_literal(), ep.width() / r);

    let back = ep.to_midrad();
    println!("{} -> {}", ep.to_literal(), back.interval.to_literal());

    let huge = EndpointInterval::new(f64::MIN, f64::MAX)?.to_midrad();
    println!("[MIN, MAX] -> {} (widened to reals: {})", huge.interval.to_literal(), huge.widened_to_reals);

    let parsed: MidRadInterval = "<0x1.8p+0;0x1p-53>".parse()?;
    assert_eq!(parsed, x);
    Ok(())
}
