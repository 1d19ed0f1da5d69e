mod common;

use proptest::prelude::*;

use common::rat;
use repro_interval::fp::{dir_op, two_prod, two_sum, Direction, Op};
use repro_interval::interval::{ep_add, ep_mul, ep_square, ep_sub, EndpointInterval, MidRadInterval};
use repro_interval::io::{format_hex, parse_hex};
use repro_interval::matmul::{gemm_ordered, FpMatrix, LoopOrder, OrderSpec};
use repro_interval::summation::{
    sum_chunked, sum_chunked_with_workers, sum_prerounded, sum_prerounded_with_workers, ChunkedPlan,
};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        4 => -1e6f64..1e6,
        2 => any::<f64>().prop_filter("finite", |x| x.is_finite()),
        1 => -1e-300f64..1e-300,
        1 => (-100i32..100).prop_map(f64::from),
    ]
}

fn moderate() -> impl Strategy<Value = f64> {
    (-1.0f64..1.0, -60i32..60).prop_map(|(m, e)| m * 2f64.powi(e))
}

fn interval() -> impl Strategy<Value = EndpointInterval> {
    (moderate(), moderate()).prop_map(|(a, b)| EndpointInterval::new(a.min(b), a.max(b)).unwrap())
}

fn member(x: &EndpointInterval, t: f64) -> f64 {
    let v = x.lo() + (x.hi() - x.lo()) * t;
    v.clamp(x.lo(), x.hi())
}

fn contains(x: &EndpointInterval, v: &num_rational::BigRational) -> bool {
    rat(x.lo()) <= *v && *v <= rat(x.hi())
}

proptest! {
    #[test]
    fn two_sum_is_error_free(a in finite(), b in finite()) {
        if let Ok((s, e)) = two_sum(a, b) {
            prop_assert_eq!(rat(s) + rat(e), rat(a) + rat(b));
            prop_assert_eq!(s, a + b);
        }
    }

    #[test]
    fn two_prod_is_error_free(a in moderate(), b in moderate()) {
        let p = two_prod(a, b).unwrap();
        prop_assert_eq!(rat(p.p) + rat(p.e), rat(a) * rat(b));
    }

    #[test]
    fn directed_results_bracket(a in finite(), b in finite(), op in 0usize..4) {
        let op = [Op::Add, Op::Sub, Op::Mul, Op::Div][op];
        prop_assume!(!(op == Op::Div && b == 0.0));
        let exact = match op {
            Op::Add => rat(a) + rat(b),
            Op::Sub => rat(a) - rat(b),
            Op::Mul => rat(a) * rat(b),
            Op::Div => rat(a) / rat(b),
        };
        let lo = dir_op(op, a, b, Direction::Down).unwrap();
        let hi = dir_op(op, a, b, Direction::Up).unwrap();
        prop_assert!(common::is_tight_bracket(lo, hi, &exact));
    }

    #[test]
    fn interval_operations_contain_pointwise_results(
        x in interval(), y in interval(), s in 0.0f64..=1.0, t in 0.0f64..=1.0
    ) {
        let (a, b) = (member(&x, s), member(&y, t));
        prop_assert!(contains(&ep_add(x, y), &(rat(a) + rat(b))));
        prop_assert!(contains(&ep_sub(x, y), &(rat(a) - rat(b))));
        prop_assert!(contains(&ep_mul(x, y), &(rat(a) * rat(b))));
        prop_assert!(contains(&ep_square(x), &(rat(a) * rat(a))));
        prop_assert!(ep_mul(x, x).encloses(&ep_square(x)));
    }

    #[test]
    fn midrad_conversions_enclose(m in moderate(), r in 0.0f64..1.0) {
        let r = r * m.abs();
        let x = MidRadInterval::new(m, r).unwrap().to_endpoints();
        prop_assert!(contains(&x, &(rat(m) - rat(r))));
        prop_assert!(contains(&x, &(rat(m) + rat(r))));
        let back = x.to_midrad().interval;
        let y = back.to_endpoints();
        prop_assert!(y.encloses(&x));
    }

    #[test]
    fn literals_round_trip(x in interval(), v in any::<f64>()) {
        let parsed: EndpointInterval = x.to_literal().parse().unwrap();
        prop_assert_eq!(parsed.lo().to_bits(), x.lo().to_bits());
        prop_assert_eq!(parsed.hi().to_bits(), x.hi().to_bits());
        if !v.is_nan() {
            prop_assert_eq!(parse_hex(&format_hex(v)).unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn prerounded_sums_ignore_order_and_workers(
        mut xs in prop::collection::vec(finite(), 1..200), seed in any::<u64>(), k in 1usize..4, workers in 1usize..5
    ) {
        let reference = sum_prerounded(&xs, k);
        let mut rng = repro_interval::audit::generate::rng_for(seed, 0);
        rand::seq::SliceRandom::shuffle(xs.as_mut_slice(), &mut rng);
        let again = sum_prerounded_with_workers(&xs, k, workers);
        match (reference, again) {
            (Ok(reference), Ok(again)) => {
                prop_assert_eq!(again.result.to_bits(), reference.result.to_bits());
                for (p, q) in again.sums.iter().zip(&reference.sums) {
                    prop_assert_eq!(p.to_bits(), q.to_bits());
                }
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            (a, b) => prop_assert!(false, "order changed the outcome: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn chunked_sums_ignore_workers(xs in prop::collection::vec(moderate(), 1..300), k in 1usize..16, workers in 1usize..9) {
        prop_assume!(k <= xs.len());
        let plan = ChunkedPlan::new(xs.len(), k).unwrap();
        let a = sum_chunked(&xs, &plan).unwrap();
        let b = sum_chunked_with_workers(&xs, &plan, workers).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn loop_order_never_changes_bits(
        m in 1usize..7, k in 1usize..7, n in 1usize..7, block in 1usize..8, seed in any::<u64>()
    ) {
        let mut rng = repro_interval::audit::generate::rng_for(seed, 0);
        let a = repro_interval::audit::generate::random_matrix(m, k, &mut rng).unwrap();
        let b = repro_interval::audit::generate::random_matrix(k, n, &mut rng).unwrap();
        let reference: FpMatrix = gemm_ordered(&a, &b, OrderSpec::new(LoopOrder::ALL[0], block).unwrap()).unwrap();
        for order in LoopOrder::ALL {
            let c = gemm_ordered(&a, &b, OrderSpec::new(order, block).unwrap()).unwrap();
            prop_assert!(c.as_slice().iter().zip(reference.as_slice()).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}
