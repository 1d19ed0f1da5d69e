//! Natural interval extension against the mean-value form as the box shrinks.

use repro_interval::interval::{enclose_range, EndpointInterval, Expr, RangeMethod};

fn main() -> repro_interval::Result<()> {
    let x = Expr::var();
    let f = x.square() - &x;
    println!("f(x) = x^2 - x around 0.5, exact range [-1/4, -1/4 + r^2]");
    println!("{:>6} {:>14} {:>14}", "k", "natural", "mean value");
    for k in (4..=20).step_by(4) {
        let r = 2f64.powi(-k);
        let b = EndpointInterval::new(0.5 - r, 0.5 + r)?;
        let nat = enclose_range(&f, b, RangeMethod::Natural)?;
        let mv = enclose_range(&f, b, RangeMethod::MeanValue)?;
        println!("{k:>6} {:>14.3e} {:>14.3e}", nat.width(), mv.width());
    }
    Ok(())
}
