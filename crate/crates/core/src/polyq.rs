//! Dense polynomials and rational functions over Q.
//!
//! Coefficients are stored in ascending order: `coeffs[i]` multiplies `t^i`.
//! The zero polynomial is the empty vector.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmath::{is_square, primes_up_to, rat_int, rational_reconstruct, Integer, Rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("0/0 while evaluating")]
    Indeterminate,
    #[error("parse error in {input:?}: {msg}")]
    Parse { input: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotDivisible;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| rat_int(Integer::from(c))).collect())
    }

    pub fn from_integers(coeffs: &[Integer]) -> Self {
        Poly::new(coeffs.iter().cloned().map(rat_int).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = c;
        Poly::new(v)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(Integer::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// self(inner(t)).
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division over Q. Panics on division by zero.
    pub fn div_rem(&self, g: &Poly) -> (Poly, Poly) {
        let dg = g.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return (Poly::zero(), self.clone());
        }
        let inv = g.coeffs[dg].recip();
        let mut q = vec![Rational::zero(); r.len() - dg];
        for k in (0..q.len()).rev() {
            let c = &r[k + dg] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, gi) in g.coeffs.iter().enumerate() {
                r[k + i] -= &c * gi;
            }
            q[k] = c;
        }
        r.truncate(dg);
        (Poly::new(q), Poly::new(r))
    }

    pub fn exact_divide(&self, g: &Poly) -> Result<Poly, NotDivisible> {
        let (q, r) = self.div_rem(g);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(NotDivisible)
        }
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        let a = ZPoly::primitive_of(self);
        let b = ZPoly::primitive_of(other);
        ZPoly::gcd(a, b).to_poly().monic()
    }

    /// f / gcd(f, f'), monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_divide(&g).expect("gcd divides").monic()
    }

    /// Exact square root, if this polynomial is the square of one over Q.
    pub fn sqrt(&self) -> Option<Poly> {
        let n = match self.degree() {
            None => return Some(Poly::zero()),
            Some(n) => n,
        };
        if n % 2 == 1 || !is_square(&self.coeffs[n]) {
            return None;
        }
        let m = n / 2;
        let lc = &self.coeffs[n];
        let mut s = vec![Rational::zero(); m + 1];
        s[m] = Rational::new(lc.numer().sqrt(), lc.denom().sqrt());
        let two_sm = &s[m] * Rational::from_integer(Integer::from(2));
        for k in 1..=m {
            // coefficient of t^(2m-k) in s^2, excluding the 2*s_m*s_(m-k) term
            let target = 2 * m - k;
            let mut acc = Rational::zero();
            for i in (m - k + 1)..=m {
                let j = target - i;
                if j > m - k && j <= m {
                    acc += &s[i] * &s[j];
                }
            }
            s[m - k] = (&self.coeffs[target] - acc) / &two_sm;
        }
        let root = Poly::new(s);
        if &(&root * &root) == self {
            Some(root)
        } else {
            None
        }
    }

    /// Formats with the given variable name.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&Q(&a).to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", Q(&a), mono));
            }
        }
        out
    }

    pub fn parse(s: &str, var: &str) -> Result<Poly, PolyError> {
        let f = parse_ratfunc(s, var)?;
        if !f.den.is_constant() {
            return Err(PolyError::Parse { input: s.into(), msg: "not a polynomial".into() });
        }
        Ok(f.num)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
owned_ops!(Poly);

/// Integer polynomial, ascending coefficients, used internally for gcds and
/// root finding where rational arithmetic would be wasteful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly(pub(crate) Vec<Integer>);

impl ZPoly {
    /// Primitive integer multiple of f with positive leading coefficient.
    pub(crate) fn primitive_of(f: &Poly) -> ZPoly {
        let mut l = Integer::one();
        for c in &f.coeffs {
            l = l.lcm(c.denom());
        }
        let v: Vec<Integer> = f.coeffs.iter().map(|c| (c * rat_int(l.clone())).to_integer()).collect();
        ZPoly(v).primitive()
    }

    fn trim(mut self) -> ZPoly {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub(crate) fn primitive(self) -> ZPoly {
        let mut z = self.trim();
        let mut g = Integer::zero();
        for c in &z.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return z;
        }
        if z.0.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            for c in z.0.iter_mut() {
                *c = &*c / &g;
            }
        }
        z
    }

    fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn prem(&self, b: &ZPoly) -> ZPoly {
        let db = b.deg().expect("nonzero divisor");
        let lb = &b.0[db];
        let mut r = self.0.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            let shift = dr - db;
            for (i, bi) in b.0.iter().enumerate() {
                r[shift + i] -= &lr * bi;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        ZPoly(r)
    }

    /// Primitive polynomial remainder sequence.
    pub(crate) fn gcd(a: ZPoly, b: ZPoly) -> ZPoly {
        let (mut a, mut b) = if a.0.len() >= b.0.len() { (a, b) } else { (b, a) };
        while !b.0.is_empty() {
            let r = a.prem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub(crate) fn to_poly(&self) -> Poly {
        Poly::from_integers(&self.0)
    }

    fn derivative(&self) -> ZPoly {
        ZPoly(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Integer::from(i)).collect()).trim()
    }

    fn mod_p(&self, p: u64) -> Vec<u64> {
        let pb = Integer::from(p);
        let mut v: Vec<u64> = self.0.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn eval_mod(&self, x: &Integer, m: &Integer) -> Integer {
        let mut acc = Integer::zero();
        for c in self.0.iter().rev() {
            acc = (acc * x + c).mod_floor(m);
        }
        acc
    }

    /// Σ a_i u^i v^(n−i), zero iff u/v is a root.
    fn eval_homogeneous(&self, u: &Integer, v: &Integer) -> Integer {
        let n = self.0.len() - 1;
        let mut acc = Integer::zero();
        let mut vpow = Integer::one();
        let mut upows = Vec::with_capacity(n + 1);
        let mut up = Integer::one();
        for _ in 0..=n {
            upows.push(up.clone());
            up *= u;
        }
        for i in (0..=n).rev() {
            acc += &self.0[i] * &upows[i] * &vpow;
            vpow *= v;
        }
        acc
    }
}

fn fp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = crate::exactmath::inv_mod_u64(b[db], p).expect("nonzero lead");
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * inv % p;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                let k = dr - db + i;
                r[k] = (r[k] + p - c * bi % p) % p;
            }
        }
        r.pop();
        r = fp_trim(r);
    }
    r
}

fn fp_gcd_degree(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn fp_roots(a: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| {
            let mut acc = 0u64;
            for c in a.iter().rev() {
                acc = (acc * x + c) % p;
            }
            acc == 0
        })
        .collect()
}

/// Sort key used for determinism: (denominator, numerator).
pub fn root_order(a: &Rational, b: &Rational) -> std::cmp::Ordering {
    (a.denom(), a.numer()).cmp(&(b.denom(), b.numer()))
}

/// All rational roots of a nonzero polynomial, sorted by (denominator, numerator).
pub fn rational_roots(f: &Poly) -> Vec<Rational> {
    assert!(!f.is_zero(), "rational_roots of the zero polynomial");
    let mut g = ZPoly::primitive_of(f);
    let mut roots = Vec::new();
    if g.0[0].is_zero() {
        roots.push(Rational::zero());
        let k = g.0.iter().position(|c| !c.is_zero()).unwrap();
        g.0.drain(..k);
    }
    if g.0.len() > 1 {
        roots.extend(nonzero_roots(g));
    }
    roots.sort_by(root_order);
    roots
}

fn nonzero_roots(g: ZPoly) -> Vec<Rational> {
    let n = g.deg().unwrap();
    if n == 1 {
        return vec![Rational::new(-g.0[0].clone(), g.0[1].clone())];
    }
    let (p, g) = match squarefree_prime(&g, Some(40)) {
        Some(p) => (p, g),
        None => {
            let s = ZPoly::primitive_of(&g.to_poly().squarefree_part());
            if s.deg() == Some(1) {
                return vec![Rational::new(-s.0[0].clone(), s.0[1].clone())];
            }
            let p = squarefree_prime(&s, None).expect("squarefree polynomial has a good prime");
            (p, s)
        }
    };
    let gm = g.mod_p(p);
    let start = fp_roots(&gm, p);
    if start.is_empty() {
        return Vec::new();
    }
    let nbound = g.0[0].abs();
    let dbound = g.0.last().unwrap().abs();
    let target: Integer = Integer::from(2) * &nbound * &dbound;
    let dg = g.derivative();
    let pb = Integer::from(p);
    let mut out = Vec::new();
    for r0 in start {
        let mut m = pb.clone();
        let mut x = Integer::from(r0);
        while m <= target {
            m = &m * &m;
            let fx = g.eval_mod(&x, &m);
            let dfx = dg.eval_mod(&x, &m);
            let inv = mod_inverse(&dfx, &m).expect("simple root stays simple");
            x = (x - fx * inv).mod_floor(&m);
        }
        if let Some(q) = rational_reconstruct(&x, &m, &nbound, &dbound) {
            if g.eval_homogeneous(q.numer(), q.denom()).is_zero() {
                out.push(q);
            }
        }
    }
    out
}

/// First prime not dividing the leading coefficient modulo which g stays
/// squarefree. Gives up after `max_tries` failures when a limit is set.
fn squarefree_prime(g: &ZPoly, max_tries: Option<usize>) -> Option<u64> {
    let lc = g.0.last().unwrap();
    let dg = g.derivative();
    let n = g.deg().unwrap();
    let mut tried = 0;
    for p in primes_up_to(1_000_000) {
        if (lc % Integer::from(p)).is_zero() || p <= n as u64 {
            continue;
        }
        let gm = g.mod_p(p);
        let dm = dg.mod_p(p);
        if dm.is_empty() {
            continue;
        }
        if fp_gcd_degree(gm, dm, p) == 0 {
            return Some(p);
        }
        tried += 1;
        if max_tries.is_some_and(|m| tried >= m) {
            return None;
        }
    }
    None
}

fn mod_inverse(a: &Integer, m: &Integer) -> Option<Integer> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

/// Result of evaluating a rational function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Finite(Rational),
    Infinity,
}

/// num/den with gcd(num, den) = 1 and den monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_divide(&g).unwrap(), den.exact_divide(&g).unwrap())
        };
        let inv = den.leading().unwrap().recip();
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn t() -> RatFunc {
        RatFunc::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Re-canonicalizes; the identity on values built through this API.
    pub fn normalized(&self) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.clone()).unwrap()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// The larger of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn recip(&self) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc, PolyError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        // coprime parts stay coprime under powers, so no gcd is needed
        let num = base.num.pow(k);
        let den = base.den.pow(k);
        let inv = den.leading().unwrap().recip();
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn evaluate(&self, x: &Rational) -> Result<Value, PolyError> {
        let d = self.den.eval(x);
        let n = self.num.eval(x);
        if d.is_zero() {
            if n.is_zero() {
                return Err(PolyError::Indeterminate);
            }
            return Ok(Value::Infinity);
        }
        Ok(Value::Finite(n / d))
    }

    /// self(inner(t)). Errors if the substituted denominator vanishes identically.
    pub fn compose(&self, inner: &RatFunc) -> Result<RatFunc, PolyError> {
        // homogenize: N(p/q) = sum n_i p^i q^(d-i) / q^d
        let d = self.degree();
        let p = &inner.num;
        let q = &inner.den;
        let mut ppow = vec![Poly::one()];
        let mut qpow = vec![Poly::one()];
        for _ in 0..d {
            ppow.push(ppow.last().unwrap() * p);
            qpow.push(qpow.last().unwrap() * q);
        }
        let homog = |f: &Poly| -> Poly {
            let mut acc = Poly::zero();
            for (i, c) in f.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&ppow[i] * &qpow[d - i]).scale(c);
            }
            acc
        };
        RatFunc::new(homog(&self.num), homog(&self.den))
    }

    /// Numerator of self − c, with denominators cleared: num − c·den.
    pub fn numerator_minus(&self, c: &Rational) -> Poly {
        &self.num - &self.den.scale(c)
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.den.is_one_poly() {
            self.num.display_with(var)
        } else {
            format!("({})/({})", self.num.display_with(var), self.den.display_with(var))
        }
    }

    pub fn parse(s: &str, var: &str) -> Result<RatFunc, PolyError> {
        parse_ratfunc(s, var)
    }
}

impl Poly {
    fn is_one_poly(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        // cross-cancel so that each gcd only sees the parts that can share factors
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.exact_divide(&g1).unwrap();
        let d = rhs.den.exact_divide(&g1).unwrap();
        let c = rhs.num.exact_divide(&g2).unwrap();
        let b = self.den.exact_divide(&g2).unwrap();
        let num = &a * &c;
        let den = &b * &d;
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let inv = den.leading().unwrap().recip();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}
owned_ops!(RatFunc);

// Expression parser for the table strings: integers, one variable, + - * / ^,
// parentheses and juxtaposition (`5^2(t+1)^3` means 5^2 * (t+1)^3).

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Integer),
    Var,
    Op(char),
}

fn tokenize(s: &str, var: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(s[start..i].parse().unwrap()));
        } else if s[i..].starts_with(var) {
            out.push(Tok::Var);
            i += var.len();
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<RatFunc, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|e| e.to_string())?;
            } else if self.starts_primary() {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, String> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatFunc, String> {
        let base = self.primary()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    n
                }
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let v = self.expr()?;
                    if !self.eat(')') {
                        return Err("missing )".into());
                    }
                    let c = v.as_constant().ok_or("non-constant exponent")?;
                    if !c.is_integer() {
                        return Err("non-integer exponent".into());
                    }
                    c.to_integer()
                }
                _ => return Err("bad exponent".into()),
            };
            let e = e.to_i32().ok_or("exponent too large")?;
            return base.pow(if neg { -e } else { e }).map_err(|e| e.to_string());
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RatFunc, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RatFunc::constant(rat_int(n)))
            }
            Some(Tok::Var) => {
                self.pos += 1;
                Ok(RatFunc::t())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err("missing )".into());
                }
                Ok(v)
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses an expression in one variable into a canonical rational function.
pub fn parse_ratfunc(s: &str, var: &str) -> Result<RatFunc, PolyError> {
    let err = |msg: String| PolyError::Parse { input: s.to_string(), msg };
    let toks = tokenize(s, var).map_err(err)?;
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr().map_err(err)?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}
