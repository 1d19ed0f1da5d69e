//! Directed rounding computed in software, checked against the hardware
//! rounding modes when the platform allows it.

use repro_interval::fp::{dir_op, probe_rounding_support, succ, two_sum, Direction, Op, RoundingBackend};
use repro_interval::io::format_hex;

fn main() -> repro_interval::Result<()> {
    let lo = dir_op(Op::Div, 1.0, 3.0, Direction::Down)?;
    let hi = dir_op(Op::Div, 1.0, 3.0, Direction::Up)?;
    println!("1/3 lies in [{}, {}]", format_hex(lo), format_hex(hi));
    assert_eq!(succ(lo), hi);

    let (s, e) = two_sum(1.0, 2f64.powi(100))?;
    println!("1 + 2^100 = {} + {}", format_hex(s), format_hex(e));

    let probe = probe_rounding_support();
    println!("{probe:#?}");
    match RoundingBackend::from_probe(probe) {
        Ok(hw) => {
            let same = hw.dir_op(Op::Div, 1.0, 3.0, Direction::Up)? == hi;
            println!("hardware backend available, agrees with software: {same}");
        }
        Err(e) => println!("hardware backend unavailable: {e}"),
    }
    Ok(())
}
