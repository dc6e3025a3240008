//! Elliptic curves over Q in long Weierstrass form.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::{factor, is_cube, is_prime_u64, is_square, rat_int, root_cover, Factorization, Integer, Rational, Q};
use crate::polyq::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EcError {
    #[error("singular curve (discriminant 0)")]
    Singular,
    #[error("bad reduction at {0} for the integral model")]
    BadReduction(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("curves have different j-invariants")]
    JMismatch,
    #[error("twist test for j = 0 or 1728 only supports d = 1 at j = 0")]
    UnsupportedCmTwist,
    #[error("division polynomial index must be odd and at least 1, got {0}")]
    BadIndex(u64),
}

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6, with nonzero discriminant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInvariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub disc: Rational,
    pub j: Rational,
}

fn b_invariants(a: [&Rational; 5]) -> [Rational; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + a2 * rat_int(4.into());
    let b4 = a4 * rat_int(2.into()) + a1 * a3;
    let b6 = a3 * a3 + a6 * rat_int(4.into());
    let b8 = a1 * a1 * a6 + rat_int(4.into()) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    [b2, b4, b6, b8]
}

fn r(n: i64) -> Rational {
    rat_int(Integer::from(n))
}

impl WeierstrassCurve {
    pub fn new(a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Result<Self, EcError> {
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(EcError::Singular);
        }
        Ok(e)
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self, EcError> {
        let [a1, a2, a3, a4, a6] = a.map(r);
        WeierstrassCurve::new(a1, a2, a3, a4, a6)
    }

    /// y² = x³ + A·x + B.
    pub fn short(a: Rational, b: Rational) -> Result<Self, EcError> {
        WeierstrassCurve::new(Rational::zero(), Rational::zero(), Rational::zero(), a, b)
    }

    pub fn coefficients(&self) -> [&Rational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    fn b(&self) -> [Rational; 4] {
        b_invariants(self.coefficients())
    }

    pub fn discriminant(&self) -> Rational {
        let [b2, b4, b6, b8] = self.b();
        -(&b2 * &b2 * &b8) - r(8) * &b4 * &b4 * &b4 - r(27) * &b6 * &b6 + r(9) * &b2 * &b4 * &b6
    }

    pub fn invariants(&self) -> CurveInvariants {
        let [b2, b4, b6, b8] = self.b();
        let c4 = &b2 * &b2 - r(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + r(36) * &b2 * &b4 - r(216) * &b6;
        let disc = self.discriminant();
        let j = &c4 * &c4 * &c4 / &disc;
        CurveInvariants { b2, b4, b6, b8, c4, c6, disc, j }
    }

    pub fn j_invariant(&self) -> Rational {
        self.invariants().j
    }

    /// The fixed short model y² = x³ − 27c₄·x − 54c₆, isomorphic over Q.
    pub fn short_model(&self) -> ShortCurve {
        let inv = self.invariants();
        ShortCurve { a: -r(27) * inv.c4, b: -r(54) * inv.c6 }
    }

    pub fn is_on(&self, x: &Rational, y: &Rational) -> bool {
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        lhs == rhs
    }

    /// The model obtained from x = u²x' + r, y = u³y' + s·u²x' + t.
    pub fn transform(&self, u: &Rational, rr: &Rational, s: &Rational, t: &Rational) -> Result<Self, EcError> {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let two = r(2);
        let three = r(3);
        let n1 = a1 + &two * s;
        let n2 = a2 - s * a1 + &three * rr - s * s;
        let n3 = a3 + rr * a1 + &two * t;
        let n4 = a4 - s * a3 + &two * rr * a2 - (t + rr * s) * a1 + &three * rr * rr - &two * s * t;
        let n6 = a6 + rr * a4 + rr * rr * a2 + rr * rr * rr - t * a3 - t * t - rr * t * a1;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        WeierstrassCurve::new(n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6)
    }

    /// An integral model a_i ↦ v^i·a_i with v as small as trial division allows.
    pub fn integral_model(&self) -> IntegralModel {
        let mut v = Integer::one();
        for (i, a) in self.coefficients().into_iter().enumerate() {
            let k = [1u32, 2, 3, 4, 6][i];
            let den = a.denom();
            if den.is_one() {
                continue;
            }
            let need = match factor(den, 100_000) {
                Ok(Factorization::Complete(f)) => root_cover(&f, k),
                _ => den.clone(),
            };
            v = num_integer::Integer::lcm(&v, &need);
        }
        let vr = rat_int(v.clone());
        let coeffs: Vec<Integer> = self
            .coefficients()
            .into_iter()
            .zip([1u32, 2, 3, 4, 6])
            .map(|(a, k)| (a * num_traits::pow(vr.clone(), k as usize)).to_integer())
            .collect();
        let curve = WeierstrassCurve::new(
            rat_int(coeffs[0].clone()),
            rat_int(coeffs[1].clone()),
            rat_int(coeffs[2].clone()),
            rat_int(coeffs[3].clone()),
            rat_int(coeffs[4].clone()),
        )
        .expect("scaling keeps the curve nonsingular");
        let disc = curve.discriminant().to_integer();
        IntegralModel { a: [coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone(), coeffs[3].clone(), coeffs[4].clone()], disc, scale: v }
    }

    /// a_p = p + 1 − #E(F_p) on the integral model.
    pub fn ap(&self, p: u64) -> Result<i64, EcError> {
        self.integral_model().ap(p)
    }

    pub fn neg(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), -y - &self.a1 * x - &self.a3),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        if x1 == x2 && (y1 + y2 + &self.a1 * x2 + &self.a3).is_zero() {
            return Point::Infinity;
        }
        let lambda = if x1 == x2 {
            (r(3) * x1 * x1 + r(2) * &self.a2 * x1 + &self.a4 - &self.a1 * y1) / (r(2) * y1 + &self.a1 * x1 + &self.a3)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let nu = y1 - &lambda * x1;
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = -(&lambda + &self.a1) * &x3 - nu - &self.a3;
        Point::Affine(x3, y3)
    }

    pub fn scalar_mul(&self, p: &Point, k: &Integer) -> Point {
        let mut base = if k.is_negative() { self.neg(p) } else { p.clone() };
        let mut e = k.abs();
        let mut acc = Point::Infinity;
        while !e.is_zero() {
            if e.bit(0) {
                acc = self.add(&acc, &base);
            }
            e >>= 1;
            if !e.is_zero() {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => self.is_on(x, y),
        }
    }

    /// ψ_n in x for odd n, from the b-invariants. Degree (n² − 1)/2.
    pub fn division_polynomial(&self, n: u64) -> Result<Poly, EcError> {
        if n % 2 == 0 {
            return Err(EcError::BadIndex(n));
        }
        let n = n as usize;
        let [b2, b4, b6, b8] = self.b();
        let two = r(2);
        // F = ψ₂² = 4x³ + b2x² + 2b4x + b6
        let f = Poly::new(vec![b6.clone(), &two * &b4, b2.clone(), r(4)]);
        let f2 = &f * &f;
        let f3 = Poly::new(vec![b8.clone(), r(3) * &b6, r(3) * &b4, b2.clone(), r(3)]);
        let g4 = Poly::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            r(10) * &b8,
            r(10) * &b6,
            r(5) * &b4,
            b2.clone(),
            two.clone(),
        ]);
        // psi[k] holds ψ_k for odd k and ψ_k/ψ₂ for even k
        let mut psi: Vec<Poly> = vec![Poly::zero(), Poly::one(), Poly::one(), f3, g4];
        for k in 5..=n.max(4) {
            let m = k / 2;
            let next = if k % 2 == 1 {
                if m % 2 == 0 {
                    &(&f2 * &(&psi[m + 2] * &psi[m].pow(3))) - &(&psi[m - 1] * &psi[m + 1].pow(3))
                } else {
                    &(&psi[m + 2] * &psi[m].pow(3)) - &(&f2 * &(&psi[m - 1] * &psi[m + 1].pow(3)))
                }
            } else {
                // same shape for either parity of m once the ψ₂ factors cancel
                &psi[m] * &(&(&psi[m + 2] * &psi[m - 1].pow(2)) - &(&psi[m - 2] * &psi[m + 1].pow(2)))
            };
            psi.push(next);
        }
        Ok(psi.swap_remove(n))
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", Q(&self.a1), Q(&self.a2), Q(&self.a3), Q(&self.a4), Q(&self.a6))
    }
}

impl fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeierstrassCurve{self}")
    }
}

/// Integer coefficients and discriminant of a scaled model, with the scale v.
#[derive(Debug, Clone)]
pub struct IntegralModel {
    pub a: [Integer; 5],
    pub disc: Integer,
    pub scale: Integer,
}

impl IntegralModel {
    pub fn is_good(&self, p: u64) -> bool {
        !(&self.disc % Integer::from(p)).is_zero()
    }

    pub fn ap(&self, p: u64) -> Result<i64, EcError> {
        if !is_prime_u64(p) {
            return Err(EcError::NotPrime(p));
        }
        if !self.is_good(p) {
            return Err(EcError::BadReduction(p));
        }
        let pb = Integer::from(p);
        let red: Vec<u64> = self
            .a
            .iter()
            .map(|c| {
                let m = c % &pb;
                let m = if m.is_negative() { m + &pb } else { m };
                m.to_u64().unwrap()
            })
            .collect();
        let (a1, a2, a3, a4, a6) = (red[0], red[1], red[2], red[3], red[4]);
        if p == 2 {
            let mut count = 1i64;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                    if lhs == rhs {
                        count += 1;
                    }
                }
            }
            return Ok(3 - count);
        }
        let mut is_sq = vec![false; p as usize];
        for y in 1..p {
            is_sq[(y * y % p) as usize] = true;
        }
        let mut sum = 0i64;
        for x in 0..p {
            let lin = (a1 * x + a3) % p;
            let cubic = (((x * x % p) * x % p) + a2 * (x * x % p) + a4 * x + a6) % p;
            let d = (lin * lin + 4 * cubic) % p;
            if d != 0 {
                sum += if is_sq[d as usize] { 1 } else { -1 };
            }
        }
        Ok(-sum)
    }
}

/// y² = x³ + A·x + B.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShortCurve {
    pub a: Rational,
    pub b: Rational,
}

impl ShortCurve {
    pub fn new(a: Rational, b: Rational) -> Result<ShortCurve, EcError> {
        let s = ShortCurve { a, b };
        if s.disc_term().is_zero() {
            return Err(EcError::Singular);
        }
        Ok(s)
    }

    fn disc_term(&self) -> Rational {
        r(4) * &self.a * &self.a * &self.a + r(27) * &self.b * &self.b
    }

    /// y² = x³ + d²A·x + d³B.
    pub fn quadratic_twist(&self, d: &Rational) -> ShortCurve {
        assert!(!d.is_zero(), "twist by zero");
        let d2 = d * d;
        ShortCurve { a: &d2 * &self.a, b: &d2 * d * &self.b }
    }

    pub fn to_weierstrass(&self) -> WeierstrassCurve {
        WeierstrassCurve::short(self.a.clone(), self.b.clone()).expect("nonsingular by construction")
    }

    pub fn j_invariant(&self) -> Rational {
        let a3 = &self.a * &self.a * &self.a;
        r(6912) * &a3 / (r(4) * &a3 + r(27) * &self.b * &self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(Rational, Rational),
}

fn is_fourth_power(x: &Rational) -> bool {
    if !is_square(x) {
        return false;
    }
    let s = Rational::new(x.numer().sqrt(), x.denom().sqrt());
    is_square(&s)
}

/// Whether E' is isomorphic over Q to the quadratic twist of E by d.
///
/// For j ∉ {0, 1728} this is the square test on c·d with c = B'A/(BA') on
/// the short models. At j = 0 with d = 1 the question becomes membership in
/// the quadratic-twist orbit, which is a cube test on B'/B.
pub fn twist_test(e: &WeierstrassCurve, e2: &WeierstrassCurve, d: &Rational) -> Result<bool, EcError> {
    let j = e.j_invariant();
    if j != e2.j_invariant() {
        return Err(EcError::JMismatch);
    }
    let s = e.short_model();
    let s2 = e2.short_model();
    if j.is_zero() {
        if !d.is_one() {
            return Err(EcError::UnsupportedCmTwist);
        }
        return Ok(is_cube(&(&s2.b / &s.b)));
    }
    if j == r(1728) {
        return Err(EcError::UnsupportedCmTwist);
    }
    let c = (&s2.b * &s.a) / (&s.b * &s2.a);
    Ok(is_square(&(c * d)))
}

/// Isomorphism over Q, including the extra automorphisms at j = 0 and 1728.
pub fn is_isomorphic(e: &WeierstrassCurve, e2: &WeierstrassCurve) -> bool {
    let j = e.j_invariant();
    if j != e2.j_invariant() {
        return false;
    }
    let s = e.short_model();
    let s2 = e2.short_model();
    if j.is_zero() {
        let q = &s2.b / &s.b;
        is_square(&q) && is_cube(&q)
    } else if j == r(1728) {
        is_fourth_power(&(&s2.a / &s.a))
    } else {
        is_square(&((&s2.b * &s.a) / (&s.b * &s2.a)))
    }
}
