//! Naive, compensated, chunked and pre-rounded sums of an ill-conditioned
//! vector under shuffling and varying worker counts.

use rand::seq::SliceRandom;
use repro_interval::audit::generate::{ill_conditioned_sum, rng_for};
use repro_interval::fp::exact_sum;
use repro_interval::fp::RoundMode;
use repro_interval::summation::{sum_chunked_with_workers, sum_in_order, sum_kahan, sum_prerounded, ChunkedPlan};

fn main() -> repro_interval::Result<()> {
    let mut rng = rng_for(1, 0);
    let data = ill_conditioned_sum(10_000, 1e12, &mut rng)?;
    let exact = exact_sum(&data.values)?.round(RoundMode::Nearest);
    println!("condition {:.2e}, exact sum {exact:e}", data.condition);

    let plan = ChunkedPlan::new(data.values.len(), 16)?;
    // The chunked sum keeps its input order and varies only the worker count.
    let mut x = data.values.clone();
    for trial in 0..4 {
        x.shuffle(&mut rng);
        let pre = sum_prerounded(&x, 3)?;
        println!(
            "trial {trial}: naive {:e}, kahan {:e}, chunked {:e}, pre-rounded {:e}",
            sum_in_order(&x),
            sum_kahan(&x),
            sum_chunked_with_workers(&data.values, &plan, 1 << trial)?,
            pre.result,
        );
    }
    Ok(())
}
