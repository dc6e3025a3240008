mod common;

use common::{q, roots_brute};
use galrep::exactmath::Rational;
use galrep::polyq::*;
use galrep::tables::get_j;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s, "t").unwrap()
}

#[test]
fn compose_examples() {
    let j1 = get_j(2, 1).unwrap();
    let j2 = get_j(2, 2).unwrap();
    assert_eq!(&j2.compose(&rf("t^2/(t+1)")).unwrap(), j1);

    let f = rf("(3t^2 - 1)/(t^3 + 2)");
    assert_eq!(f.compose(&RatFunc::t()).unwrap(), f);

    let j6 = get_j(13, 6).unwrap();
    let f1 = rf("13(t^2-t)/(t^3-4t^2+t+1)");
    assert_eq!(&j6.compose(&f1).unwrap(), get_j(13, 1).unwrap());
}

#[test]
fn compose_with_constant_inner() {
    let f = rf("t^2 + 1");
    assert_eq!(f.compose(&RatFunc::constant(q(3, 1))).unwrap().as_constant(), Some(q(10, 1)));
    assert!(rf("1/t").compose(&RatFunc::constant(q(0, 1))).is_err());
}

#[test]
fn evaluate_examples() {
    assert_eq!(get_j(3, 4).unwrap().evaluate(&q(2, 1)).unwrap(), Value::Finite(q(8, 1)));
    let j1 = get_j(7, 1).unwrap();
    for x in [q(0, 1), q(-5, 3), q(100, 1)] {
        assert_eq!(j1.evaluate(&x).unwrap(), Value::Finite(q(2268945, 128)));
    }
    assert_eq!(rf("1/t").evaluate(&q(0, 1)).unwrap(), Value::Infinity);
}

#[test]
fn rational_root_examples() {
    let roots: BTreeSet<Rational> = rational_roots(&Poly::from_ints(&[-4, 0, 1])).into_iter().collect();
    assert_eq!(roots, [q(2, 1), q(-2, 1)].into_iter().collect());

    // J_1(2) = 256·7³/(2²·3²) at ℓ = 2
    let target = q(256 * 343, 36);
    assert_eq!(target, q(21952, 9));
    let num = get_j(2, 1).unwrap().numerator_minus(&target);
    assert!(rational_roots(&num).contains(&q(2, 1)));

    let cubic = Poly::parse("x^3 - x^2 - 7x + 41/4", "x").unwrap();
    assert!(rational_roots(&cubic).is_empty());
}

#[test]
fn exact_division_examples() {
    let f = Poly::from_ints(&[-1, 0, 1]);
    assert_eq!(f.exact_divide(&Poly::from_ints(&[-1, 1])).unwrap(), Poly::from_ints(&[1, 1]));
    assert!(Poly::from_ints(&[1, 0, 1]).exact_divide(&Poly::from_ints(&[-1, 1])).is_err());
}

#[test]
fn printed_format_round_trips() {
    let p = Poly::new(vec![q(-1, 2), q(0, 1), q(3, 7)]);
    let s = p.display_with("t");
    assert_eq!(Poly::parse(&s, "t").unwrap(), p);
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..20, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn small_ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(3), small_poly(2))
        .prop_filter_map("nonzero denominator", |(n, d)| if d.is_zero() { None } else { RatFunc::new(n, d).ok() })
}

fn value(v: Value) -> Option<Rational> {
    match v {
        Value::Finite(x) => Some(x),
        Value::Infinity => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalizing_is_idempotent(f in small_ratfunc()) {
        let g = f.normalized();
        prop_assert_eq!(g.normalized(), g);
    }

    #[test]
    fn compose_is_associative(f in small_ratfunc(), g in small_ratfunc(), h in small_ratfunc()) {
        prop_assume!(!g.is_constant() && !h.is_constant());
        let left = f.compose(&g).and_then(|fg| fg.compose(&h));
        let right = g.compose(&h).and_then(|gh| f.compose(&gh));
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn evaluate_commutes_with_compose(f in small_ratfunc(), g in small_ratfunc(), n in -30i64..30, d in 1i64..10) {
        let x = q(n, d);
        let Ok(fg) = f.compose(&g) else { return Ok(()) };
        let Some(gx) = g.evaluate(&x).ok().and_then(value) else { return Ok(()) };
        let Some(fgx) = f.evaluate(&gx).ok().and_then(value) else { return Ok(()) };
        prop_assert_eq!(value(fg.evaluate(&x).unwrap()), Some(fgx));
    }

    #[test]
    fn roots_agree_with_brute_force(
        planted in prop::collection::vec((-12i64..12, 1i64..6), 0..4),
        cofactor in prop::collection::vec(-9i64..9, 1..4),
    ) {
        let mut f = Poly::from_ints(&cofactor);
        prop_assume!(!f.is_zero());
        for (u, v) in &planted {
            f = &f * &Poly::from_ints(&[-u, *v]);
        }
        prop_assume!(f.degree().unwrap_or(0) <= 6);
        let lcm = f.coeffs().iter().fold(num_bigint::BigInt::from(1), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<i64> = f.coeffs().iter().map(|c| i64::try_from(&(c * Rational::from(lcm.clone())).to_integer()).unwrap()).collect();
        let fast: BTreeSet<Rational> = rational_roots(&f).into_iter().collect();
        prop_assert_eq!(fast, roots_brute(&ints));
    }
}
