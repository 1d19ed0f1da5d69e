//! Verified solution of a Hilbert system.

use repro_interval::audit::generate::hilbert;
use repro_interval::linsys::solve_verified;

fn main() -> repro_interval::Result<()> {
    let n = 8;
    let a = hilbert(n)?;
    let b = vec![1.0; n];
    let v = solve_verified(&a, &b, 10)?;
    println!("converged: {}, contraction {:e}, {} refinement steps", v.converged, v.contraction, v.iterations);
    for (i, x) in v.x.iter().enumerate() {
        println!("x[{i}] in {}", x.to_literal());
    }
    Ok(())
}
