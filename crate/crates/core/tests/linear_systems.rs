mod common;

use common::{nearest, rat};
use repro_interval::audit::generate::{hilbert, random_system, rng_for};
use repro_interval::fp::{ulp, ulp_distance};
use repro_interval::linsys::{lu_solve_approx, refine, residual_dd, solve_verified};
use repro_interval::matmul::FpMatrix;

#[test]
fn hilbert_eight_is_certified_tightly() {
    let a = hilbert(8).unwrap();
    let b = vec![1.0; 8];
    let exact = common::solve(&a, &b).unwrap();
    let v = solve_verified(&a, &b, 10).unwrap();
    assert!(v.converged);
    for (x, e) in v.x.iter().zip(&exact) {
        assert!(rat(x.lo()) <= *e && *e <= rat(x.hi()));
        let width_ulps = x.width() / ulp(nearest(e)).unwrap();
        assert!(width_ulps <= 100.0, "width {width_ulps} ulp");
    }
}

#[test]
fn refinement_reaches_two_ulps_on_a_moderately_conditioned_pair() {
    let a = FpMatrix::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-6]).unwrap();
    let b = vec![0.3, 0.7];
    let exact = common::solve(&a, &b).unwrap();
    let (x0, _) = lu_solve_approx(&a, &b).unwrap();
    let before = x0.iter().zip(&exact).map(|(x, e)| ulp_distance(*x, nearest(e))).max().unwrap();
    let r = refine(&a, &b, &x0, 10).unwrap();
    let after = r.x.iter().zip(&exact).map(|(x, e)| ulp_distance(*x, nearest(e))).max().unwrap();
    assert!(after <= 2, "{before} ulp before, {after} after");
    assert!(after <= before);
}

#[test]
fn double_double_residuals_match_the_exact_residual() {
    let mut rng = rng_for(3, 0);
    let (a, b) = random_system(8, 1e4, &mut rng).unwrap();
    let (x, _) = lu_solve_approx(&a, &b).unwrap();
    let r = residual_dd(&a, &x, &b).unwrap();
    for i in 0..8 {
        let exact = (0..8).fold(rat(b[i]), |s, j| s - rat(a.get(i, j)) * rat(x[j]));
        let got = rat(r[i].hi) + rat(r[i].lo);
        let err = common::abs(&(got - &exact));
        assert!(err <= common::abs(&exact) * common::pow2(-104), "row {i}");
    }
}

#[test]
fn one_third_is_enclosed_within_four_ulps() {
    let a = FpMatrix::new(1, 1, vec![3.0]).unwrap();
    let v = solve_verified(&a, &[1.0], 5).unwrap();
    let third = num_rational::BigRational::new(1.into(), 3.into());
    assert!(v.converged);
    assert!(rat(v.x[0].lo()) <= third && third <= rat(v.x[0].hi()));
    assert!(ulp_distance(v.x[0].lo(), v.x[0].hi()) <= 4);
}
