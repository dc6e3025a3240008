//! Embedded constants: the j-maps J_i of the genus 0 modular curves, the
//! families E_{i,t}, generators of the groups G_i and H_{i,j}, the CM curves
//! over Q, the exceptional pairs for ℓ ≥ 17 and the X_ns⁺(11) package.
//!
//! Rational functions and polynomials are kept as strings in the same notation
//! the `polyq` parser reads (`5^2(t^2+10t+5)^3/t^5`) and parsed on first use.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::ec::{EcError, Point, WeierstrassCurve};
use crate::exactmath::{rat_int, rat_to_string, Integer, Rational};
use crate::gl2::{gl2_order, is_applicable, primitive_root, span, standard, Mat2, Standard, Subgroup};
use crate::polyq::{parse_ratfunc, rational_roots, Poly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("no table for prime {0}")]
    UnknownPrime(u64),
    #[error("no group G{1} at prime {0}")]
    UnknownEntry(u64, u32),
    #[error("G{1} at prime {0} has no rational j-map")]
    NoJ(u64, u32),
    #[error("G{1} at prime {0} has no family")]
    NoFamily(u64, u32),
    #[error("unknown group label {0:?}")]
    UnknownLabel(String),
}

/// How a j-invariant is tested against an entry.
#[derive(Debug, Clone)]
pub enum Matcher {
    /// j = J(t) for some rational t. A constant J is compared directly.
    Rational(RatFunc),
    /// j is one of finitely many values.
    JValues(Vec<Rational>),
    /// j = J(P) for a rational point P ≠ O of X_ns⁺(11).
    NonSplit11,
}

/// The curves whose twists pick out the subgroups H_{i,1}, H_{i,2}.
#[derive(Debug, Clone)]
pub enum Family {
    /// y² = x³ + A(t)x + B(t).
    Param { a: Poly, b: Poly },
    /// A single curve, used when the j-map is constant.
    Fixed(WeierstrassCurve),
}

impl Family {
    pub fn curve_at(&self, t: &Rational) -> Result<WeierstrassCurve, EcError> {
        match self {
            Family::Param { a, b } => WeierstrassCurve::short(a.eval(t), b.eval(t)),
            Family::Fixed(e) => Ok(e.clone()),
        }
    }

    /// j of the generic member, 6912A³/(4A³ + 27B²).
    pub fn j_map(&self) -> RatFunc {
        match self {
            Family::Param { a, b } => {
                let a3 = a.pow(3);
                let num = a3.scale(&rat_int(6912.into()));
                let den = &a3.scale(&rat_int(4.into())) + &b.pow(2).scale(&rat_int(27.into()));
                RatFunc::new(num, den).expect("family discriminant is not identically zero")
            }
            Family::Fixed(e) => RatFunc::constant(e.j_invariant()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SubEntry {
    /// "H1.1" etc.
    pub name: String,
    pub index: u64,
    pub generators: Vec<Mat2>,
}

#[derive(Debug, Clone)]
pub struct TableEntry {
    /// i in G_i.
    pub number: u32,
    pub index: u64,
    pub generators: Vec<Mat2>,
    pub matcher: Option<Matcher>,
    pub family: Option<Family>,
    pub subs: Vec<SubEntry>,
}

impl TableEntry {
    pub fn name(&self) -> String {
        format!("G{}", self.number)
    }
}

#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub l: u64,
    /// ℓ* = (−1)^((ℓ−1)/2)·ℓ for the primes with twist discrimination.
    pub twist_discriminant: Option<i64>,
    /// Sorted by decreasing index; ties keep the listing order.
    pub entries: Vec<TableEntry>,
    /// The index list as printed, G's then H's in listing order.
    pub printed_indices: Vec<u64>,
}

impl PrimeTable {
    pub fn entry(&self, i: u32) -> Option<&TableEntry> {
        self.entries.iter().find(|e| e.number == i)
    }

    /// Entries in listing order (G1, G2, ...).
    pub fn listing(&self) -> Vec<&TableEntry> {
        let mut v: Vec<&TableEntry> = self.entries.iter().collect();
        v.sort_by_key(|e| e.number);
        v
    }

    /// Generators for a local name such as "G3" or "H5.2".
    pub fn generators_of(&self, name: &str) -> Option<&[Mat2]> {
        for e in &self.entries {
            if e.name() == name {
                return Some(&e.generators);
            }
            for s in &e.subs {
                if s.name == name {
                    return Some(&s.generators);
                }
            }
        }
        None
    }

    pub fn group(&self, name: &str) -> Option<Subgroup> {
        let gens = self.generators_of(name)?;
        Some(span(gens, self.l as u32).ok()?.with_label(format!("{}.{name}", self.l)))
    }
}

#[derive(Debug, Clone)]
pub struct CmEntry {
    pub j: Rational,
    pub d: u64,
    pub f: u64,
    pub model: WeierstrassCurve,
    pub conductor: Integer,
}

/// The X_ns⁺(11) data. Each f_i is stored as p(x) + q(x)·y on the curve.
#[derive(Debug, Clone)]
pub struct Xns11Data {
    pub curve: WeierstrassCurve,
    pub generator: Point,
    pub f: [(Poly, Poly); 6],
    pub quintic: Poly,
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    /// x³ − x² − 7x + 41/4.
    pub cubic: Poly,
}

impl Xns11Data {
    /// J(x, y) = (f1 f2 f3 f4)³ / (f5² f6¹¹), or None at a pole.
    pub fn j_at(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        let v: Vec<Rational> = self.f.iter().map(|(p, q)| p.eval(x) + q.eval(x) * y).collect();
        let den = num_traits::pow(v[4].clone(), 2) * num_traits::pow(v[5].clone(), 11);
        if den.is_zero() {
            return None;
        }
        let num = num_traits::pow(&v[0] * &v[1] * &v[2] * &v[3], 3);
        Some(num / den)
    }

    /// A(x)·j² + B(x)·j + C(x).
    pub fn quadratic_in_x(&self, j: &Rational) -> Poly {
        &(&self.a.scale(&(j * j)) + &self.b.scale(j)) + &self.c
    }

    /// Norm of p + q·y down to Q[x]: p² − pq − q²·(x³ − x² − 7x + 10).
    pub fn norm(&self, p: &Poly, q: &Poly) -> Poly {
        let cub = Poly::from_ints(&[10, -7, -1, 1]);
        &(&(p * p) - &(p * q)) - &(&(q * q) * &cub)
    }

    pub fn discriminant(&self) -> Poly {
        &(&self.b * &self.b) - &(&self.a * &self.c).scale(&rat_int(4.into()))
    }

    /// D with Δ = D²·(x³ − x² − 7x + 41/4), if the factorization holds.
    pub fn d_poly(&self) -> Option<Poly> {
        self.discriminant().exact_divide(&self.cubic).ok()?.sqrt()
    }
}

/// One composition identity J_outer(F(t)) = J_target(t).
#[derive(Debug, Clone)]
pub struct Gluing {
    pub l: u64,
    pub outer: u32,
    pub map: &'static str,
    pub target: u32,
}

pub struct Tables {
    primes: BTreeMap<u64, PrimeTable>,
    cm: Vec<CmEntry>,
    cm_mod2_g2: Vec<Rational>,
    xns11: OnceLock<Xns11Data>,
}

// ---------------------------------------------------------------- raw data

const L2_J: [&str; 3] = ["256(t^2+t+1)^3/(t^2(t+1)^2)", "256(t+1)^3/t", "t^2+1728"];

const L3_J: [&str; 4] = [
    "27(t+1)^3(t+3)^3(t^2+3)^3/(t^3(t^2+3t+3)^3)",
    "27(t+1)^3(t-3)^3/t^3",
    "27(t+1)(t+9)^3/t^3",
    "t^3",
];

const L5_J: [&str; 9] = [
    "(t^20+228t^15+494t^10-228t^5+1)^3/(t^5(t^10-11t^5-1)^5)",
    "(t^2+5t+5)^3(t^4+5t^2+25)^3(t^4+5t^3+20t^2+25t+25)^3/(t^5(t^4+5t^3+15t^2+25t+25)^5)",
    "5^4 t^3(t^2+5t+10)^3(2t^2+5t+5)^3(4t^4+30t^3+95t^2+150t+100)^3/((t^2+5t+5)^5(t^4+5t^3+15t^2+25t+25)^5)",
    "(t+5)^3(t^2-5)^3(t^2+5t+10)^3/(t^2+5t+5)^5",
    "(t^4+228t^3+494t^2-228t+1)^3/(t(t^2-11t-1)^5)",
    "(t^4-12t^3+14t^2+12t+1)^3/(t^5(t^2-11t-1))",
    "5^3(t+1)(2t+1)^3(2t^2-3t+3)^3/(t^2+t-1)^5",
    "5^2(t^2+10t+5)^3/t^5",
    "t^3(t^2+5t+40)",
];

const L7_J: [&str; 7] = [
    "3^3 5 7^5/2^7",
    "t(t+1)^3(t^2-5t+1)^3(t^2-5t+8)^3(t^4-5t^3+8t^2-7t+7)^3/(t^3-4t^2+3t+1)^7",
    "(t^2-t+1)^3(t^6-11t^5+30t^4-15t^3-10t^2+5t+1)^3/((t-1)^7 t^7(t^3-8t^2+5t+1))",
    "(t^2-t+1)^3(t^6+229t^5+270t^4-1695t^3+1430t^2-235t+1)^3/((t-1)t(t^3-8t^2+5t+1)^7)",
    "-(t^2-3t-3)^3(t^2-t+1)^3(3t^2-9t+5)^3(5t^2-t-1)^3/((t^3-2t^2-t+1)(t^3-t^2-2t+1)^7)",
    "64t^3(t^2+7)^3(t^2-7t+14)^3(5t^2-14t-7)^3/(t^3-7t^2+7t+7)^7",
    "(t^2+245t+2401)^3(t^2+13t+49)/t^7",
];

const P1: &str = "t^12 + 231t^11 + 269t^10 - 3160t^9 + 6022t^8 - 9616t^7 + 21880t^6 - 34102t^5 + 28297t^4 - 12455t^3 + 2876t^2 - 243t + 1";
const P2: &str = "t^12 - 9t^11 + 29t^10 - 40t^9 + 22t^8 - 16t^7 + 40t^6 - 22t^5 - 23t^4 + 25t^3 - 4t^2 - 3t + 1";
const P3: &str = "(t^4-t^3+2t^2-9t+3)(3t^4-3t^3-7t^2+12t-4)(4t^4-4t^3-5t^2+3t-1)";
const P4: &str = "t^8 + 235t^7 + 1207t^6 + 955t^5 + 3840t^4 - 955t^3 + 1207t^2 - 235t + 1";
const P5: &str = "t^8 - 5t^7 + 7t^6 - 5t^5 + 5t^3 + 7t^2 + 5t + 1";
const P6: &str = "t^4 + 7t^3 + 20t^2 + 19t + 1";
const Q4: &str = "t^12 - 512t^11 - 13079t^10 - 32300t^9 - 104792t^8 - 111870t^7 - 419368t^6 + 111870t^5 - 104792t^4 + 32300t^3 - 13079t^2 + 512t + 1";
const Q5: &str = "t^12 - 8t^11 + 25t^10 - 44t^9 + 40t^8 + 18t^7 - 40t^6 - 18t^5 + 40t^4 + 44t^3 + 25t^2 + 8t + 1";
const Q13: &str = "t^4 - t^3 + 5t^2 + t + 1";

fn l13_j() -> [String; 6] {
    [
        format!("(t^2-t+1)^3({P1})^3/((t-1)t(t^3-4t^2+t+1)^13)"),
        format!("(t^2-t+1)^3({P2})^3/((t-1)^13 t^13(t^3-4t^2+t+1))"),
        format!("-13^4(t^2-t+1)^3({P3})^3/((t^3-4t^2+t+1)^13(5t^3-7t^2-8t+5))"),
        format!("({Q13})({P4})^3/(t(t^2-3t-1)^13)"),
        format!("({Q13})({P5})^3/(t^13(t^2-3t-1))"),
        format!("(t^2+5t+13)({P6})^3/t"),
    ]
}

const L13_G7_J: [&str; 3] = [
    "2^4 5 13^4 17^3/3^13",
    "-2^12 5^3 11 13^4/3^13",
    "2^18 3^3 13^4 127^3 139^3 157^3 283^3 929/(5^13 61^13)",
];

/// (ℓ, i, A(t), B(t)) for y² = x³ + A(t)x + B(t).
const FAMILIES: [(u64, u32, &str, &str); 9] = [
    (3, 1, "-3(t+1)(t+3)(t^2+3)", "-2(t^2-3)(t^4+6t^3+18t^2+18t+9)"),
    (3, 3, "-3(t+1)^3(t+9)", "-2(t+1)^4(t^2-18t-27)"),
    (
        5,
        1,
        "-27(t^20 + 228t^15 + 494t^10 - 228t^5 + 1)",
        "54(t^30 - 522t^25 - 10005t^20 - 10005t^10 + 522t^5 + 1)",
    ),
    (5, 5, "-27(t^4 + 228t^3 + 494t^2 - 228t + 1)", "54(t^6 - 522t^5 - 10005t^4 - 10005t^2 + 522t + 1)"),
    (5, 6, "-27(t^4 - 12t^3 + 14t^2 + 12t + 1)", "54(t^6 - 18t^5 + 75t^4 + 75t^2 + 18t + 1)"),
    (
        7,
        3,
        "-27(t^2 - t + 1)(t^6 - 11t^5 + 30t^4 - 15t^3 - 10t^2 + 5t + 1)",
        "54(t^12 - 18t^11 + 117t^10 - 354t^9 + 570t^8 - 486t^7 + 273t^6 - 222t^5 + 174t^4 - 46t^3 - 15t^2 + 6t + 1)",
    ),
    (
        7,
        4,
        "-27(t^2-t+1)(t^6+229t^5+270t^4-1695t^3+1430t^2-235t+1)",
        "54(t^12-522t^11-8955t^10+37950t^9-70998t^8+131562t^7-253239t^6+316290t^5-218058t^4+80090t^3-14631t^2+510t+1)",
    ),
    (
        7,
        5,
        "-27*7(t^2 - 3t - 3)(t^2 - t + 1)(3t^2 - 9t + 5)(5t^2 - t - 1)",
        "-54*7^2(t^4 - 6t^3 + 17t^2 - 24t + 9)(3t^4 - 4t^3 - 5t^2 - 2t - 1)(9t^4 - 12t^3 - t^2 + 8t - 3)",
    ),
    (
        7,
        7,
        "-27(t^2 + 13t + 49)^3(t^2 + 245t + 2401)",
        "54(t^2 + 13t + 49)^4(t^4 - 490t^3 - 21609t^2 - 235298t - 823543)",
    ),
];

fn l13_families() -> [(u32, String, String); 2] {
    [
        (4, format!("-27({Q13})^3({P4})"), format!("54(t^2+1)({Q13})^4({Q4})")),
        (5, format!("-27({Q13})^3({P5})"), format!("54(t^2+1)({Q13})^4({Q5})")),
    ]
}

/// (ℓ, i, A, B) for the fixed curves.
const FIXED_CURVES: [(u64, u32, &str, &str); 3] = [
    (7, 1, "-5^3 7^3", "-5^4 7^2 106"),
    (11, 1, "-27*11^4", "54*11^5*43"),
    (11, 2, "-27*11^3*131", "54*11^4*4973"),
];

const EXCEPTIONAL_17_37: [(u64, u32, &str); 4] = [
    (17, 1, "-17*373^3/2^17"),
    (17, 2, "-17^2 101^3/2"),
    (37, 3, "-7*11^3"),
    (37, 4, "-7*137^3 2083^3"),
];

/// j, D, f, A, B, conductor for y² = x³ + Ax + B.
const CM_TABLE: [(&str, u64, u64, i64, i64, &str); 13] = [
    ("0", 3, 1, 0, 16, "3^3"),
    ("2^4 3^3 5^3", 3, 2, -15, 22, "2^2 3^2"),
    ("-2^15 3 5^3", 3, 3, -480, 4048, "3^3"),
    ("2^6 3^3", 4, 1, 1, 0, "2^6"),
    ("2^3 3^3 11^3", 4, 2, -11, 14, "2^5"),
    ("-3^3 5^3", 7, 1, -1715, 33614, "7^2"),
    ("3^3 5^3 17^3", 7, 2, -29155, 1915998, "7^2"),
    ("2^6 5^3", 8, 1, -4320, 96768, "2^8"),
    ("-2^15", 11, 1, -9504, 365904, "11^2"),
    ("-2^15 3^3", 19, 1, -608, 5776, "19^2"),
    ("-2^18 3^3 5^3", 43, 1, -13760, 621264, "43^2"),
    ("-2^15 3^3 5^3 11^3", 67, 1, -117920, 15585808, "67^2"),
    ("-2^18 3^3 5^3 23^3 29^3", 163, 1, -34790720, 78984748304, "163^2"),
];

/// CM j-invariants whose mod 2 image is G2 = {I, (1 1; 0 1)}.
const CM_MOD2_G2: [&str; 5] = ["2^4 3^3 5^3", "2^3 3^3 11^3", "-3^3 5^3", "3^3 5^3 17^3", "2^6 5^3"];

const GLUINGS: [Gluing; 16] = [
    Gluing { l: 2, outer: 2, map: "t^2/(t+1)", target: 1 },
    Gluing { l: 2, outer: 3, map: "(-16t^3-24t^2+24t+16)/(t^2+t)", target: 1 },
    Gluing { l: 3, outer: 2, map: "(t^2+3t+3)/t", target: 1 },
    Gluing { l: 3, outer: 3, map: "t(t^2+3t+3)", target: 1 },
    Gluing { l: 3, outer: 4, map: "3(t+1)(t-3)/t", target: 2 },
    Gluing { l: 5, outer: 2, map: "t-1-1/t", target: 1 },
    Gluing { l: 5, outer: 4, map: "t+5/t", target: 2 },
    Gluing { l: 5, outer: 5, map: "t^5", target: 1 },
    Gluing { l: 5, outer: 7, map: "-(t^3+10t^2+25t+25)/(2t^3+10t^2+25t+25)", target: 3 },
    Gluing { l: 5, outer: 8, map: "(t^2-11t-1)/(25t)", target: 5 },
    Gluing { l: 5, outer: 9, map: "(t+5)(t^2-5)/(t^2+5t+5)", target: 4 },
    Gluing { l: 7, outer: 7, map: "t + 1/(1-t) + (t-1)/t - 8", target: 4 },
    Gluing { l: 13, outer: 6, map: "13(t^2-t)/(t^3-4t^2+t+1)", target: 1 },
    Gluing { l: 13, outer: 6, map: "(t^3-4t^2+t+1)/(t^2-t)", target: 2 },
    Gluing { l: 13, outer: 6, map: "(-5t^3+7t^2+8t-5)/(t^3-4t^2+t+1)", target: 3 },
    Gluing { l: 13, outer: 6, map: "13t/(t^2-3t-1)", target: 4 },
];

const GLUING_13_5: Gluing = Gluing { l: 13, outer: 6, map: "(t^2-3t-1)/t", target: 5 };

pub fn gluings() -> Vec<Gluing> {
    let mut v = GLUINGS.to_vec();
    v.push(GLUING_13_5);
    v
}

const XNS11_QUINTIC: &str = "x^5 - 9x^4 + 17x^3 + 20x^2 - 73x + 43";
const XNS11_B_INNER: &str = include_str!("tables/xns11_b.txt");
const XNS11_C: &str = "(4x-5)(x^2+3x-6)^6(9x^2-28x+23)^3(x^4-5x^3+74x^2-245x+223)^3(4x^4-9x^3-x^2+21x-32)^3(25x^4-114x^3+167x^2-86x+20)^3";
/// (p, q) with f_i = p(x) + q(x)·y.
const XNS11_F: [(&str, &str); 6] = [
    ("x^2+3x-6", "0"),
    ("2x^4+23x^3-72x^2-28x+127", "11(x^2-5)"),
    ("11x-19", "6"),
    ("5x^3+17x^2-112x+120", "22(x-2)"),
    ("2x^2+17x-34", "11"),
    ("-(5x-9)", "x-4"),
];

// ---------------------------------------------------------------- builders

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s, "t").unwrap_or_else(|e| panic!("bad table string: {e}"))
}

fn px(s: &str) -> Poly {
    Poly::parse(s, "x").unwrap_or_else(|e| panic!("bad table string: {e}"))
}

fn pt(s: &str) -> Poly {
    Poly::parse(s, "t").unwrap_or_else(|e| panic!("bad table string: {e}"))
}

fn rational(s: &str) -> Rational {
    rf(s).as_constant().expect("constant table value")
}

struct Gens {
    l: u32,
    g: i64,
}

impl Gens {
    fn new(l: u32) -> Gens {
        Gens { l, g: primitive_root(l) as i64 }
    }
    fn m(&self, a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(a, b, c, d, self.l)
    }
    fn diag(&self, a: i64, d: i64) -> Mat2 {
        Mat2::diag(a, d, self.l)
    }
    /// diag(g^i, g^j).
    fn dg(&self, i: u32, j: u32) -> Mat2 {
        let p = |e: u32| {
            let mut v = 1i64;
            for _ in 0..e {
                v = v * self.g % self.l as i64;
            }
            v
        };
        Mat2::diag(p(i), p(j), self.l)
    }
    fn t(&self) -> Mat2 {
        self.m(1, 1, 0, 1)
    }
    fn minus(&self) -> Mat2 {
        Mat2::minus_identity(self.l)
    }
    fn std(&self, kind: Standard) -> Vec<Mat2> {
        standard(kind, self.l).expect("standard group").generators().to_vec()
    }
}

struct Builder {
    l: u64,
    entries: Vec<TableEntry>,
}

impl Builder {
    fn new(l: u64) -> Builder {
        Builder { l, entries: Vec::new() }
    }

    fn g(&mut self, number: u32, generators: Vec<Mat2>, matcher: Option<Matcher>) -> &mut Self {
        let index = index_of(&generators, self.l);
        self.entries.push(TableEntry { number, index, generators, matcher, family: None, subs: Vec::new() });
        self
    }

    fn h(&mut self, number: u32, j: u32, generators: Vec<Mat2>) -> &mut Self {
        let index = index_of(&generators, self.l);
        let e = self.entries.iter_mut().find(|e| e.number == number).expect("G before H");
        e.subs.push(SubEntry { name: format!("H{number}.{j}"), index, generators });
        self
    }

    fn finish(mut self, twist: Option<i64>, printed: &[u64]) -> PrimeTable {
        let l = self.l;
        for (_, i, a, b) in FAMILIES.iter().filter(|f| f.0 == l) {
            self.family(*i, Family::Param { a: pt(a), b: pt(b) });
        }
        if self.l == 13 {
            for (i, a, b) in l13_families() {
                self.family(i, Family::Param { a: pt(&a), b: pt(&b) });
            }
        }
        for (_, i, a, b) in FIXED_CURVES.iter().filter(|f| f.0 == l) {
            let e = WeierstrassCurve::short(rational(a), rational(b)).expect("fixed curve");
            self.family(*i, Family::Fixed(e));
        }
        // stable: equal indices keep the listing order
        self.entries.sort_by(|a, b| b.index.cmp(&a.index));
        PrimeTable { l: self.l, twist_discriminant: twist, entries: self.entries, printed_indices: printed.to_vec() }
    }

    fn family(&mut self, i: u32, f: Family) {
        self.entries.iter_mut().find(|e| e.number == i).expect("family for a listed group").family = Some(f);
    }
}

fn index_of(gens: &[Mat2], l: u64) -> u64 {
    let g = span(gens, l as u32).expect("valid generators");
    gl2_order(l) / g.order()
}

fn j_matchers(js: &[&str]) -> Vec<Option<Matcher>> {
    js.iter().map(|s| Some(Matcher::Rational(rf(s)))).collect()
}

fn build_2() -> PrimeTable {
    let x = Gens::new(2);
    let j = j_matchers(&L2_J);
    let mut b = Builder::new(2);
    b.g(1, vec![], j[0].clone()).g(2, vec![x.m(1, 1, 0, 1)], j[1].clone()).g(3, vec![x.m(1, 1, 1, 0)], j[2].clone());
    b.finish(None, &[6, 3, 2])
}

fn build_3() -> PrimeTable {
    let x = Gens::new(3);
    let j = j_matchers(&L3_J);
    let mut b = Builder::new(3);
    b.g(1, x.std(Standard::SplitCartan), j[0].clone())
        .g(2, x.std(Standard::SplitNormalizer), j[1].clone())
        .g(3, x.std(Standard::Borel), j[2].clone())
        .g(4, x.std(Standard::NonsplitNormalizer), j[3].clone())
        .h(1, 1, vec![x.dg(0, 1)])
        .h(3, 1, vec![x.t(), x.dg(0, 1)])
        .h(3, 2, vec![x.t(), x.dg(1, 0)]);
    b.finish(Some(-3), &[12, 6, 4, 3, 24, 8, 8])
}

fn build_5() -> PrimeTable {
    let x = Gens::new(5);
    let j = j_matchers(&L5_J);
    let mut b = Builder::new(5);
    b.g(1, vec![x.minus(), x.dg(0, 1)], j[0].clone())
        .g(2, x.std(Standard::SplitCartan), j[1].clone())
        .g(3, vec![x.diag(2, 2), x.diag(1, -1), x.m(0, 6, 3, 0)], j[2].clone())
        .g(4, x.std(Standard::SplitNormalizer), j[3].clone())
        .g(5, vec![x.minus(), x.t(), x.dg(1, 0)], j[4].clone())
        .g(6, vec![x.minus(), x.t(), x.dg(0, 1)], j[5].clone())
        .g(7, x.std(Standard::NonsplitNormalizer), j[6].clone())
        .g(8, x.std(Standard::Borel), j[7].clone())
        .g(9, vec![x.diag(2, 1), x.diag(1, 2), x.m(0, -1, 1, 0), x.m(1, 1, 1, -1)], j[8].clone())
        .h(1, 1, vec![x.dg(0, 1)])
        .h(1, 2, vec![x.dg(2, 1)])
        .h(5, 1, vec![x.t(), x.dg(1, 0)])
        .h(5, 2, vec![x.t(), x.dg(1, 2)])
        .h(6, 1, vec![x.t(), x.dg(0, 1)])
        .h(6, 2, vec![x.t(), x.dg(2, 1)]);
    b.finish(Some(5), &[60, 30, 30, 15, 12, 12, 10, 6, 5, 120, 120, 24, 24, 24, 24])
}

fn build_7() -> PrimeTable {
    let x = Gens::new(7);
    let j = j_matchers(&L7_J);
    let mut b = Builder::new(7);
    b.g(1, vec![x.diag(2, 4), x.m(0, 2, 1, 0), x.minus()], j[0].clone())
        .g(2, x.std(Standard::SplitNormalizer), j[1].clone())
        .g(3, vec![x.minus(), x.t(), x.dg(0, 1)], j[2].clone())
        .g(4, vec![x.minus(), x.t(), x.dg(1, 0)], j[3].clone())
        .g(5, vec![x.t(), x.dg(1, 1), x.diag(1, -1)], j[4].clone())
        .g(6, x.std(Standard::NonsplitNormalizer), j[5].clone())
        .g(7, x.std(Standard::Borel), j[6].clone())
        .h(1, 1, vec![x.diag(2, 4), x.m(0, 2, 1, 0)])
        .h(3, 1, vec![x.t(), x.dg(0, 1)])
        .h(3, 2, vec![x.t(), x.diag(-1, 1), x.dg(0, 2)])
        .h(4, 1, vec![x.t(), x.dg(1, 0)])
        .h(4, 2, vec![x.t(), x.dg(2, 0), x.diag(1, -1)])
        .h(5, 1, vec![x.t(), x.dg(2, 2), x.diag(-1, 1)])
        .h(5, 2, vec![x.t(), x.dg(2, 2), x.diag(1, -1)])
        .h(7, 1, vec![x.t(), x.dg(1, 0), x.dg(0, 2)])
        .h(7, 2, vec![x.t(), x.dg(2, 0), x.dg(0, 1)]);
    b.finish(Some(-7), &[56, 28, 24, 24, 24, 21, 8, 112, 48, 48, 48, 48, 48, 48, 16, 16])
}

fn build_11() -> PrimeTable {
    let x = Gens::new(11);
    let mut b = Builder::new(11);
    b.g(1, vec![x.minus(), x.t(), x.diag(4, 6)], Some(Matcher::JValues(vec![rational("-11^2")])))
        .g(2, vec![x.minus(), x.t(), x.diag(5, 7)], Some(Matcher::JValues(vec![rational("-11*131^3")])))
        .g(3, x.std(Standard::NonsplitNormalizer), Some(Matcher::NonSplit11))
        .h(1, 1, vec![x.t(), x.diag(4, 6)])
        .h(1, 2, vec![x.t(), x.diag(7, 5)])
        .h(2, 1, vec![x.t(), x.diag(5, 7)])
        .h(2, 2, vec![x.t(), x.diag(6, 4)]);
    // the printed list has eight numbers for seven groups; these are the
    // enumerated values
    b.finish(Some(-11), &[60, 60, 55, 120, 120, 120, 120])
}

fn build_13() -> PrimeTable {
    let x = Gens::new(13);
    let js = l13_j();
    let j: Vec<Option<Matcher>> = js.iter().map(|s| Some(Matcher::Rational(rf(s)))).collect();
    let g7 = L13_G7_J.iter().map(|s| rational(s)).collect();
    let mut b = Builder::new(13);
    b.g(1, vec![x.t(), x.dg(1, 0), x.dg(0, 3)], j[0].clone())
        .g(2, vec![x.t(), x.dg(3, 0), x.dg(0, 1)], j[1].clone())
        .g(3, vec![x.t(), x.dg(1, 1), x.dg(3, 0)], j[2].clone())
        .g(4, vec![x.t(), x.dg(1, 0), x.dg(0, 2)], j[3].clone())
        .g(5, vec![x.t(), x.dg(2, 0), x.dg(0, 1)], j[4].clone())
        .g(6, x.std(Standard::Borel), j[5].clone())
        .g(7, vec![x.diag(2, 2), x.diag(2, 3), x.m(0, -1, 1, 0), x.m(1, 1, -1, 1)], Some(Matcher::JValues(g7)))
        .h(4, 1, vec![x.t(), x.dg(1, 0), x.dg(0, 4)])
        .h(4, 2, vec![x.t(), x.dg(2, 0), x.dg(0, 4), x.diag(2, 4)])
        .h(5, 1, vec![x.t(), x.dg(4, 0), x.dg(0, 1)])
        .h(5, 2, vec![x.t(), x.dg(4, 0), x.dg(0, 2), x.diag(4, 2)]);
    b.finish(Some(13), &[42, 42, 42, 28, 28, 14, 91, 56, 56, 56, 56])
}

fn build_17() -> PrimeTable {
    let x = Gens::new(17);
    let js: Vec<Rational> = EXCEPTIONAL_17_37.iter().filter(|e| e.0 == 17).map(|e| rational(e.2)).collect();
    let mut b = Builder::new(17);
    b.g(1, vec![x.diag(2, 11), x.diag(4, -4), x.t()], Some(Matcher::JValues(vec![js[0].clone()])))
        .g(2, vec![x.diag(11, 2), x.diag(-4, 4), x.t()], Some(Matcher::JValues(vec![js[1].clone()])));
    b.finish(None, &[])
}

fn build_37() -> PrimeTable {
    let x = Gens::new(37);
    let js: Vec<Rational> = EXCEPTIONAL_17_37.iter().filter(|e| e.0 == 37).map(|e| rational(e.2)).collect();
    let mut b = Builder::new(37);
    b.g(3, vec![x.t(), x.dg(3, 0), x.dg(0, 1)], Some(Matcher::JValues(vec![js[0].clone()])))
        .g(4, vec![x.t(), x.dg(1, 0), x.dg(0, 3)], Some(Matcher::JValues(vec![js[1].clone()])));
    b.finish(None, &[])
}

fn build_xns11() -> Xns11Data {
    let curve = WeierstrassCurve::from_ints([0, -1, 1, -7, 10]).unwrap();
    let f = XNS11_F.map(|(p, q)| (px(p), px(q)));
    let quintic = px(XNS11_QUINTIC);
    let a = quintic.pow(11);
    let b = -&(&px("(x^2+3x-6)^3") * &px(XNS11_B_INNER));
    let c = px(XNS11_C);
    let cubic = Poly::new(vec![Rational::new(41.into(), 4.into()), rat_int((-7).into()), rat_int((-1).into()), Rational::one()]);
    Xns11Data { curve, generator: Point::Affine(rat_int(4.into()), rat_int(5.into())), f, quintic, a, b, c, cubic }
}

impl Tables {
    fn build() -> Tables {
        let list = [build_2(), build_3(), build_5(), build_7(), build_11(), build_13(), build_17(), build_37()];
        let primes = list.into_iter().map(|t| (t.l, t)).collect();
        let cm = CM_TABLE
            .iter()
            .map(|&(j, d, f, a, b, n)| CmEntry {
                j: rational(j),
                d,
                f,
                model: WeierstrassCurve::from_ints([0, 0, 0, a, b]).unwrap(),
                conductor: rational(n).to_integer(),
            })
            .collect();
        let cm_mod2_g2 = CM_MOD2_G2.iter().map(|s| rational(s)).collect();
        Tables { primes, cm, cm_mod2_g2, xns11: OnceLock::new() }
    }

    pub fn prime(&self, l: u64) -> Option<&PrimeTable> {
        self.primes.get(&l)
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeTable> {
        self.primes.values()
    }

    pub fn cm_entries(&self) -> &[CmEntry] {
        &self.cm
    }

    pub fn cm_entry(&self, j: &Rational) -> Option<&CmEntry> {
        self.cm.iter().find(|e| &e.j == j)
    }

    /// Whether a CM j-invariant (other than 0 and 1728) has mod 2 image G2.
    pub fn cm_mod2_is_g2(&self, j: &Rational) -> bool {
        self.cm_mod2_g2.contains(j)
    }

    pub fn xns11(&self) -> &Xns11Data {
        self.xns11.get_or_init(build_xns11)
    }

    /// Generators of a full label such as "5.H1.2", "7.Ns" or "13.G7".
    pub fn group(&self, label: &str) -> Result<Subgroup, TableError> {
        let bad = || TableError::UnknownLabel(label.to_string());
        let (lpart, name) = label.split_once('.').ok_or_else(bad)?;
        let l: u64 = lpart.parse().map_err(|_| bad())?;
        if let Some(kind) = Standard::from_name(name) {
            return standard(kind, l as u32).map_err(|_| bad());
        }
        self.prime(l).and_then(|t| t.group(name)).ok_or_else(bad)
    }
}

pub fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(Tables::build)
}

pub fn get_j(l: u64, i: u32) -> Result<&'static RatFunc, TableError> {
    let t = tables().prime(l).ok_or(TableError::UnknownPrime(l))?;
    let e = t.entry(i).ok_or(TableError::UnknownEntry(l, i))?;
    match &e.matcher {
        Some(Matcher::Rational(j)) => Ok(j),
        _ => Err(TableError::NoJ(l, i)),
    }
}

pub fn get_family(l: u64, i: u32) -> Result<&'static Family, TableError> {
    let t = tables().prime(l).ok_or(TableError::UnknownPrime(l))?;
    let e = t.entry(i).ok_or(TableError::UnknownEntry(l, i))?;
    e.family.as_ref().ok_or(TableError::NoFamily(l, i))
}

pub fn cm_entry(j: &Rational) -> Option<&'static CmEntry> {
    tables().cm_entry(j)
}

/// (ℓ, j) pairs for which ℓ ≥ 17 is exceptional, with the image label.
pub fn exceptional_pairs() -> Vec<(u64, Rational, String)> {
    EXCEPTIONAL_17_37.iter().map(|&(l, i, j)| (l, rational(j), format!("{l}.G{i}"))).collect()
}

// ---------------------------------------------------------------- self-check

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn push(&mut self, name: String, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

pub fn verify_gluings(r: &mut VerifyReport) {
    for g in gluings() {
        let name = format!("{}: J{}({}) = J{}", g.l, g.outer, g.map, g.target);
        let res = (|| {
            let outer = get_j(g.l, g.outer).ok()?;
            let target = get_j(g.l, g.target).ok()?;
            let lhs = outer.compose(&rf(g.map)).ok()?;
            Some(&lhs == target)
        })();
        r.push(name, res == Some(true), "");
    }
}

pub fn verify_families(r: &mut VerifyReport) {
    for t in tables().primes() {
        for e in t.listing() {
            let Some(fam) = &e.family else { continue };
            let name = format!("{}: j(E{}) = J{}", t.l, e.number, e.number);
            let ok = match &e.matcher {
                Some(Matcher::Rational(j)) => &fam.j_map() == j,
                Some(Matcher::JValues(js)) => fam.j_map().as_constant().is_some_and(|c| js.contains(&c)),
                _ => false,
            };
            r.push(name, ok, "");
        }
    }
    for e in tables().cm_entries() {
        r.push(format!("CM D={} f={}: j(model) = j", e.d, e.f), e.model.j_invariant() == e.j, "");
    }
}

pub fn verify_groups(r: &mut VerifyReport) {
    for t in tables().primes() {
        let l = t.l;
        let listing = t.listing();
        let mut enumerated: Vec<u64> = listing.iter().map(|e| e.index).collect();
        for e in &listing {
            enumerated.extend(e.subs.iter().map(|s| s.index));
        }
        if !t.printed_indices.is_empty() {
            r.push(
                format!("{l}: index list"),
                enumerated == t.printed_indices,
                format!("enumerated {enumerated:?}, printed {:?}", t.printed_indices),
            );
        }
        for e in &listing {
            let g = t.group(&e.name()).unwrap();
            if l == 2 {
                // every subgroup of GL₂(F₂) has −I = I and full determinant
                r.push(format!("2: G{} proper", e.number), g.order() < 6, "");
            } else {
                r.push(format!("{l}: G{} applicable", e.number), is_applicable(&g), "");
            }
            for s in &e.subs {
                let h = t.group(&s.name).unwrap();
                let inv = h.invariants();
                r.push(format!("{l}: {} lacks -I", s.name), !inv.has_minus_i, "");
                r.push(format!("{l}: ±{} = G{}", s.name, e.number), h.plus_minus().same_elements(&g), "");
                r.push(format!("{l}: {} has full determinant", s.name), inv.det_is_full, "");
            }
        }
    }
}

pub fn verify_xns11(r: &mut VerifyReport) {
    let x = tables().xns11();
    let f6 = &x.f[5];
    r.push("11: A = quintic^11 = -N(f6)^11".into(), x.a == x.quintic.pow(11) && x.a == -&x.norm(&f6.0, &f6.1).pow(11), "");
    let degs = [x.a.degree(), x.b.degree(), x.c.degree()];
    r.push("11: deg A = deg B = deg C = 55".into(), degs == [Some(55); 3], format!("{degs:?}"));
    let d = x.d_poly();
    r.push("11: B^2 - 4AC = D^2 (x^3 - x^2 - 7x + 41/4)".into(), d.is_some(), "");
    if let Some(d) = d {
        r.push("11: D has no rational roots".into(), rational_roots(&d).is_empty(), "");
    }
    let e = &x.curve;
    r.push("11: (4,5) on X_ns+(11)".into(), e.contains(&x.generator), "");
    for k in 1..=5i64 {
        let p = e.scalar_mul(&x.generator, &Integer::from(k));
        let ok = match &p {
            Point::Affine(px, py) => match x.j_at(px, py) {
                Some(j) => x.quadratic_in_x(&j).eval(px).is_zero(),
                // f_i vanish together here; the quadratic must degenerate too
                None => x.c.eval(px).is_zero(),
            },
            Point::Infinity => false,
        };
        r.push(format!("11: A J^2 + B J + C = 0 at {k}*(4,5)"), ok, "");
    }
}

/// Runs every identity check over the embedded constants.
pub fn verify_all() -> VerifyReport {
    let mut r = VerifyReport::default();
    verify_gluings(&mut r);
    verify_families(&mut r);
    verify_groups(&mut r);
    verify_xns11(&mut r);
    r
}

/// Text dump of the constants, one item per line.
pub fn emit() -> String {
    let mut out = String::new();
    for t in tables().primes() {
        let l = t.l;
        if let Some(d) = t.twist_discriminant {
            let _ = writeln!(out, "ell {l} twist {d}");
        }
        for e in t.listing() {
            let gens: Vec<String> = e.generators.iter().map(|m| m.to_string()).collect();
            let _ = writeln!(out, "ell {l} G{} index {} gens {}", e.number, e.index, gens.join(" "));
            match &e.matcher {
                Some(Matcher::Rational(j)) => {
                    let _ = writeln!(out, "ell {l} G{} J {}", e.number, j.display_with("t"));
                }
                Some(Matcher::JValues(js)) => {
                    let v: Vec<String> = js.iter().map(rat_to_string).collect();
                    let _ = writeln!(out, "ell {l} G{} j-values {}", e.number, v.join(" "));
                }
                Some(Matcher::NonSplit11) => {
                    let _ = writeln!(out, "ell {l} G{} J X_ns+(11)", e.number);
                }
                None => {}
            }
            match &e.family {
                Some(Family::Param { a, b }) => {
                    let _ = writeln!(out, "ell {l} E{} A {}", e.number, a.display_with("t"));
                    let _ = writeln!(out, "ell {l} E{} B {}", e.number, b.display_with("t"));
                }
                Some(Family::Fixed(c)) => {
                    let _ = writeln!(out, "ell {l} E{} curve {c}", e.number);
                }
                None => {}
            }
            for s in &e.subs {
                let gens: Vec<String> = s.generators.iter().map(|m| m.to_string()).collect();
                let _ = writeln!(out, "ell {l} {} index {} gens {}", s.name, s.index, gens.join(" "));
            }
        }
    }
    for g in gluings() {
        let _ = writeln!(out, "gluing {} J{}({}) = J{}", g.l, g.outer, g.map, g.target);
    }
    for e in tables().cm_entries() {
        let _ = writeln!(out, "cm j {} D {} f {} model {} N {}", rat_to_string(&e.j), e.d, e.f, e.model, e.conductor);
    }
    let x = tables().xns11();
    let _ = writeln!(out, "xns11 curve {}", x.curve);
    for (i, (p, q)) in x.f.iter().enumerate() {
        let _ = writeln!(out, "xns11 f{} {} + ({})*y", i + 1, p.display_with("x"), q.display_with("x"));
    }
    let _ = writeln!(out, "xns11 A ({})^11", x.quintic.display_with("x"));
    let _ = writeln!(out, "xns11 B {}", x.b.display_with("x"));
    let _ = writeln!(out, "xns11 C {}", x.c.display_with("x"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    #[test]
    fn j_lookups() {
        assert_eq!(get_j(2, 3).unwrap(), &rf("t^2 + 1728"));
        assert_eq!(get_j(3, 4).unwrap(), &rf("t^3"));
        assert_eq!(get_j(5, 8).unwrap().evaluate(&rat(1, 1)).unwrap(), crate::polyq::Value::Finite(rat(25 * 16 * 16 * 16, 1)));
        assert!(get_j(11, 1).is_err());
        assert!(get_j(4, 1).is_err());
        assert_eq!(get_j(7, 1).unwrap().as_constant(), Some(rat(2268945, 128)));
    }

    #[test]
    fn family_lookups() {
        match get_family(3, 3).unwrap() {
            Family::Param { a, b } => {
                assert_eq!(a, &pt("-3(t+1)^3(t+9)"));
                assert_eq!(b, &pt("-2(t+1)^4(t^2-18t-27)"));
            }
            _ => panic!(),
        }
        match get_family(11, 1).unwrap() {
            Family::Fixed(e) => assert_eq!(e.j_invariant(), rat(-121, 1)),
            _ => panic!(),
        }
        assert!(get_family(5, 2).is_err());
    }

    #[test]
    fn cm_lookups() {
        let e = cm_entry(&rat(-3375, 1)).unwrap();
        assert_eq!((e.d, e.f), (7, 1));
        assert_eq!(e.model, WeierstrassCurve::from_ints([0, 0, 0, -1715, 33614]).unwrap());
        assert_eq!(cm_entry(&rat(1728, 1)).unwrap().d, 4);
        assert!(cm_entry(&rat(5, 1)).is_none());
        assert_eq!(tables().cm_entries().len(), 13);
    }

    #[test]
    fn ordering_by_index() {
        for t in tables().primes() {
            assert!(t.entries.windows(2).all(|w| w[0].index >= w[1].index), "ell {}", t.l);
        }
        let order: Vec<u32> = tables().prime(13).unwrap().entries.iter().map(|e| e.number).collect();
        assert_eq!(order, vec![7, 1, 2, 3, 4, 5, 6]);
    }
}

