//! Midpoint-radius interval matrix products and the error bounds behind them.

use repro_interval::audit::generate::{random_interval_matrix, random_matrix, rng_for};
use repro_interval::matmul::{gemm_ordered, imm3, imm4, order_independent_bound, same_order_bound, OrderSpec};

fn main() -> repro_interval::Result<()> {
    let mut rng = rng_for(2, 0);
    let a = random_interval_matrix(4, 4, &mut rng)?;
    let b = random_interval_matrix(4, 4, &mut rng)?;
    let c4 = imm4(&a, &b)?;
    let c3 = imm3(&a, &b, OrderSpec::default())?;
    println!("entry (0,0): imm4 {}  imm3 {}", c4.entry(0, 0).to_literal(), c3.entry(0, 0).to_literal());

    let p = random_matrix(4, 4, &mut rng)?;
    let q = random_matrix(4, 4, &mut rng)?;
    let spec = OrderSpec::default();
    let gamma = gemm_ordered(&p.abs(), &q.abs(), spec)?;
    let same = same_order_bound(&gamma, 4)?;
    let any = order_independent_bound(&p.abs(), &q.abs(), 4)?;
    println!("error bound for entry (0,0): same order {:e}, any order {:e}", same.get(0, 0), any.get(0, 0));
    Ok(())
}
