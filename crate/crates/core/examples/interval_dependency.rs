//! Interval addition is not associative and multiplication ignores the
//! dependency between its operands.

use repro_interval::interval::{ep_mul, ep_square, EndpointInterval};
use repro_interval::summation::sum_intervals;

fn main() -> repro_interval::Result<()> {
    let e = |k| 2f64.powi(k);
    let a = [
        EndpointInterval::new(-e(-53), e(-52))?,
        EndpointInterval::new(-1.0, e(-52))?,
        EndpointInterval::new(1.0, 2.0)?,
    ];
    let left = sum_intervals(&a, &[0, 1, 2])?;
    let right = sum_intervals(&a, &[1, 2, 0])?;
    println!("(A1 + A2) + A3 = {}", left.to_literal());
    println!("A1 + (A2 + A3) = {}", right.to_literal());
    if let Some(both) = left.intersect(&right) {
        println!("intersection   = {}", both.to_literal());
    }

    let x = EndpointInterval::new(-1.0, 2.0)?;
    println!("x * x = {}", ep_mul(x, x));
    println!("x^2   = {}", ep_square(x));
    Ok(())
}
