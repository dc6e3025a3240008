//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use galrep::exactmath::{Integer, Rational};
use num_integer::Integer as _;
use num_traits::{Signed, Zero};

/// #E(F_p) on the long equation by trying every (x, y), then p + 1 − #E.
pub fn ap_brute(a: [i64; 5], p: i64) -> i64 {
    let m = |v: i64| v.rem_euclid(p);
    let [a1, a2, a3, a4, a6] = a.map(m);
    let mut count = 1;
    for x in 0..p {
        for y in 0..p {
            let lhs = m(y * y + a1 * x % p * y + a3 * y);
            let rhs = m(x * x % p * x + a2 * x % p * x + a4 * x + a6);
            if lhs == rhs {
                count += 1;
            }
        }
    }
    p + 1 - count
}

fn divisors(n: &Integer) -> Vec<Integer> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = Integer::from(1);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Rational roots of an integer polynomial by the rational root theorem.
/// `c[i]` is the coefficient of t^i.
pub fn roots_brute(c: &[i64]) -> BTreeSet<Rational> {
    let mut c: Vec<Integer> = c.iter().map(|&x| Integer::from(x)).collect();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let mut out = BTreeSet::new();
    let shift = c.iter().take_while(|x| x.is_zero()).count();
    if shift > 0 {
        out.insert(Rational::zero());
    }
    let c = &c[shift..];
    if c.len() <= 1 {
        return out;
    }
    for u in divisors(&c[0]) {
        for v in divisors(c.last().unwrap()) {
            if !u.gcd(&v).eq(&Integer::from(1)) {
                continue;
            }
            for s in [1, -1] {
                let r = Rational::new(&u * s, v.clone());
                let val = c.iter().rev().fold(Rational::zero(), |acc, a| acc * &r + Rational::from(a.clone()));
                if val.is_zero() {
                    out.insert(r);
                }
            }
        }
    }
    out
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
