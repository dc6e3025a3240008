//! Exact integers and rationals, plus the small amount of elementary number
//! theory the rest of the crate leans on.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Integer = BigInt;
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MathError {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(Integer),
    #[error("cannot factor zero")]
    FactorZero,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn rat_int(n: Integer) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p/q` or `p` with an optional sign. Whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational, MathError> {
    let bad = || MathError::BadRational(s.to_string());
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Integer, MathError> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<Integer>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(rat_int(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Wrapper that prints a rational as `p/q`, or `p` when the denominator is 1.
pub struct Q<'a>(pub &'a Rational);

impl fmt::Display for Q<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub fn rat_to_string(x: &Rational) -> String {
    Q(x).to_string()
}

pub fn is_square_int(n: &Integer) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_cube_int(n: &Integer) -> bool {
    let r = n.cbrt();
    &r * &r * &r == *n
}

pub fn is_square(x: &Rational) -> bool {
    // numerator and denominator are coprime, so both must be squares
    is_square_int(x.numer()) && is_square_int(x.denom())
}

pub fn is_cube(x: &Rational) -> bool {
    is_cube_int(x.numer()) && is_cube_int(x.denom())
}

pub fn pow_mod_u64(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut r: u128 = 1 % m128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    r as u64
}

pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // these bases are deterministic for all 64-bit n
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twelve prime bases. Exact below 3.3·10²⁴,
/// a strong probable-prime test above that.
pub fn is_probable_prime(n: &Integer) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = Integer::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'base: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Integer::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut k = i * i;
            while k <= n {
                sieve[k] = false;
                k += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
pub fn legendre(a: &Integer, p: &Integer) -> Result<i8, MathError> {
    if p <= &int(2) || p.is_even() || !is_probable_prime(p) {
        return Err(MathError::NotOddPrime(p.clone()));
    }
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e: Integer = (p - 1u32) >> 1;
    let v = r.modpow(&e, p);
    Ok(if v.is_one() { 1 } else { -1 })
}

/// Legendre symbol for word-sized odd primes. The caller guarantees primality.
pub fn legendre_u64(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod_u64(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// ℓ* = (−1)^((ℓ−1)/2)·ℓ for odd ℓ.
pub fn ell_star(l: u64) -> i64 {
    if l % 4 == 1 {
        l as i64
    } else {
        -(l as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    Complete(BTreeMap<Integer, u32>),
    /// Primes found so far plus the cofactor that resisted trial division.
    Incomplete {
        found: BTreeMap<Integer, u32>,
        cofactor: Integer,
    },
}

impl Factorization {
    pub fn primes(&self) -> Option<Vec<Integer>> {
        match self {
            Factorization::Complete(m) => Some(m.keys().cloned().collect()),
            Factorization::Incomplete { .. } => None,
        }
    }
}

/// Factors |n| by trial division up to `trial_bound`. A leftover cofactor is
/// accepted if it is below bound² or passes the probable-prime test.
pub fn factor(n: &Integer, trial_bound: u64) -> Result<Factorization, MathError> {
    if n.is_zero() {
        return Err(MathError::FactorZero);
    }
    let mut m = n.abs();
    let mut found = BTreeMap::new();
    for p in primes_up_to(trial_bound) {
        if m.is_one() {
            break;
        }
        let pb = Integer::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            found.insert(pb, e);
        }
    }
    if m.is_one() {
        return Ok(Factorization::Complete(found));
    }
    let bound = Integer::from(trial_bound);
    if m <= &bound * &bound || is_probable_prime(&m) {
        *found.entry(m).or_insert(0) += 1;
        return Ok(Factorization::Complete(found));
    }
    Ok(Factorization::Incomplete { found, cofactor: m })
}

/// Finds u/v ≡ r (mod m) with |u| ≤ nbound and 0 < v ≤ dbound, if one exists.
/// Unique whenever 2·nbound·dbound < m.
pub fn rational_reconstruct(
    r: &Integer,
    m: &Integer,
    nbound: &Integer,
    dbound: &Integer,
) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (Integer::zero(), Integer::one());
    while &r1 > nbound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *dbound {
        return None;
    }
    if !(&r1 - r * &t1).mod_floor(m).is_zero() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        r1 = -r1;
        t1 = -t1;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Smallest positive u with den | u^k, given the prime factorization of den.
pub fn root_cover(factors: &BTreeMap<Integer, u32>, k: u32) -> Integer {
    let mut u = Integer::one();
    for (p, e) in factors {
        u *= p.pow((e + k - 1) / k);
    }
    u
}
