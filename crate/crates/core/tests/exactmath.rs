mod common;

use common::q;
use galrep::exactmath::*;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn square_examples() {
    assert!(is_square(&q(4, 9)));
    assert!(is_square(&q(0, 1)));
    assert!(!is_square(&q(-4, 1)));
    assert!(!is_square(&q(2, 9)));
}

#[test]
fn cube_examples() {
    assert!(is_cube(&q(-64, 1)));
    assert!(!is_cube(&q(16, 1)));
    assert!(is_cube(&q(1, 27)));
    assert!(!is_cube(&q(1, 9)));
}

#[test]
fn legendre_examples() {
    assert_eq!(legendre(&int(7), &int(7)).unwrap(), 0);
    assert_eq!(legendre(&int(-1), &int(3)).unwrap(), -1);
    // (−4)^2 = 16 ≡ 1 mod 5
    assert_eq!(legendre(&int(-4), &int(5)).unwrap(), 1);
    assert!(legendre(&int(3), &int(2)).is_err());
    assert!(legendre(&int(3), &int(9)).is_err());
}

#[test]
fn factor_examples() {
    let f = |n: i64| match factor(&int(n), 1_000_000).unwrap() {
        Factorization::Complete(m) => m.into_iter().map(|(p, e)| (i64::try_from(&p).unwrap(), e)).collect::<Vec<_>>(),
        Factorization::Incomplete { .. } => panic!("incomplete"),
    };
    assert_eq!(f(12), vec![(2, 2), (3, 1)]);
    assert_eq!(f(2450), vec![(2, 1), (5, 2), (7, 2)]);
    assert_eq!(f(-1), vec![]);
    assert!(factor(&int(0), 10).is_err());
}

#[test]
fn factor_gives_up_on_large_semiprime() {
    let p: Integer = "1000000000000000000000000000000000000003".parse().unwrap();
    let r: Integer = "2000000000000000000000000000000000000011".parse().unwrap();
    assert!(is_probable_prime(&p) && is_probable_prime(&r));
    match factor(&(&p * &r), 1_000_000).unwrap() {
        Factorization::Incomplete { cofactor, .. } => assert_eq!(cofactor, &p * &r),
        Factorization::Complete(_) => panic!("should not factor"),
    }
}

#[test]
fn rationals_print_as_fractions() {
    assert_eq!(rat_to_string(&q(-6, 4)), "-3/2");
    assert_eq!(rat_to_string(&q(10, 5)), "2");
    assert_eq!(parse_rational("-3/2").unwrap(), q(-3, 2));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("x").is_err());
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..10_000).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn squares_and_cubes_detected(x in small_rational()) {
        prop_assert!(is_square(&(&x * &x)));
        prop_assert!(is_cube(&(&x * &x * &x)));
    }

    #[test]
    fn non_squares_rejected(n in 1i64..100_000) {
        let r = (n as f64).sqrt() as i64;
        let exact = (r - 1..=r + 1).any(|k| k >= 0 && k * k == n);
        prop_assert_eq!(is_square(&q(n, 1)), exact);
    }

    #[test]
    fn legendre_multiplicative(a in -5000i64..5000, b in -5000i64..5000, pi in 1usize..168) {
        let p = primes_up_to(1000)[pi];
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        let lp = |x: i64| legendre(&int(x), &int(p as i64)).unwrap();
        prop_assert_eq!(lp(a) * lp(b), lp(a * b));
    }

    #[test]
    fn factorization_multiplies_back(n in 1i64..10_000_000_000) {
        match factor(&int(n), 100_000).unwrap() {
            Factorization::Complete(m) => {
                let mut prod = Integer::one();
                for (p, e) in m {
                    prop_assert!(is_probable_prime(&p));
                    prod *= num_traits::pow(p, e as usize);
                }
                prop_assert_eq!(prod, int(n));
            }
            Factorization::Incomplete { .. } => prop_assert!(false, "10^10 is below bound^2"),
        }
    }
}
