//! Subgroups of GL₂(F_ℓ) given by generators, enumerated on demand.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::exactmath::{inv_mod_u64, is_prime_u64, pow_mod_u64};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Gl2Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix {0} is not invertible")]
    Singular(String),
    #[error("this construction needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("index-3 subgroup of {kind} needs l = {residue} mod 3, got l = {l}")]
    NoIndex3 { kind: &'static str, residue: u32, l: u64 },
}

/// A 2×2 matrix (a b; c d) with entries reduced mod ℓ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub l: u32,
}

impl Mat2 {
    /// Reduces arbitrary integer entries mod ℓ. Does not check invertibility.
    pub fn new(a: i64, b: i64, c: i64, d: i64, l: u32) -> Mat2 {
        let r = |x: i64| x.rem_euclid(l as i64) as u32;
        Mat2 { a: r(a), b: r(b), c: r(c), d: r(d), l }
    }

    pub fn identity(l: u32) -> Mat2 {
        Mat2::new(1, 0, 0, 1, l)
    }

    pub fn minus_identity(l: u32) -> Mat2 {
        Mat2::new(-1, 0, 0, -1, l)
    }

    pub fn diag(a: i64, d: i64, l: u32) -> Mat2 {
        Mat2::new(a, 0, 0, d, l)
    }

    pub fn det(&self) -> u32 {
        let l = self.l as u64;
        ((self.a as u64 * self.d as u64 + l * l - self.b as u64 * self.c as u64) % l) as u32
    }

    pub fn trace(&self) -> u32 {
        (self.a + self.d) % self.l
    }

    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let l = self.l as u64;
        let f = |x: u32, y: u32, z: u32, w: u32| ((x as u64 * y as u64 + z as u64 * w as u64) % l) as u32;
        Mat2 {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
            l: self.l,
        }
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let l = self.l as u64;
        let di = inv_mod_u64(self.det() as u64, l)?;
        let s = |x: u32| ((x as u64 * di) % l) as u32;
        let n = |x: u32| ((l - x as u64 % l) % l) as u32;
        Some(Mat2 { a: s(self.d), b: s(n(self.b)), c: s(n(self.c)), d: s(self.a), l: self.l })
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.l);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2 { a: self.a, b: self.c, c: self.b, d: self.d, l: self.l }
    }

    /// (trace, det).
    pub fn fingerprint(&self) -> (u32, u32) {
        (self.trace(), self.det())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {}", self.l)
    }
}

pub fn gl2_order(l: u64) -> u64 {
    (l * l - 1) * (l * l - l)
}

/// Every element of GL₂(F_ℓ).
pub fn gl2_elements(l: u32) -> impl Iterator<Item = Mat2> {
    (0..l).flat_map(move |a| {
        (0..l).flat_map(move |b| {
            (0..l).flat_map(move |c| {
                (0..l).map(move |d| Mat2 { a, b, c, d, l }).filter(|m| m.is_invertible())
            })
        })
    })
}

/// ε of the non-split Cartan: −1 when ℓ ≡ 3 mod 4, else the least nonresidue ≥ 2.
pub fn epsilon(l: u32) -> u32 {
    if l % 4 == 3 {
        return l - 1;
    }
    (2..l)
        .find(|&e| pow_mod_u64(e as u64, (l as u64 - 1) / 2, l as u64) == l as u64 - 1)
        .expect("odd prime has a nonresidue")
}

pub fn primitive_root(l: u32) -> u32 {
    if l == 2 {
        return 1;
    }
    let n = l as u64 - 1;
    let mut qs = Vec::new();
    let mut m = n;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            qs.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        qs.push(m);
    }
    (2..l)
        .find(|&g| qs.iter().all(|&q| pow_mod_u64(g as u64, n / q, l as u64) != 1))
        .unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub order: u64,
    pub index: u64,
    pub det_is_full: bool,
    pub has_minus_i: bool,
    pub fingerprints: BTreeSet<(u32, u32)>,
}

/// A subgroup of GL₂(F_ℓ). The element set is computed on first use and cached.
#[derive(Clone)]
pub struct Subgroup {
    l: u32,
    generators: Vec<Mat2>,
    label: Option<String>,
    elements: OnceLock<HashSet<Mat2>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup({}, l={}, gens={:?})", self.label.as_deref().unwrap_or("?"), self.l, self.generators)
    }
}

fn check_prime(l: u32) -> Result<(), Gl2Error> {
    if is_prime_u64(l as u64) {
        Ok(())
    } else {
        Err(Gl2Error::NotPrime(l as u64))
    }
}

/// The subgroup generated by `gens`. Breadth-first closure under right
/// multiplication, which for a finite group yields the generated subgroup.
pub fn span(gens: &[Mat2], l: u32) -> Result<Subgroup, Gl2Error> {
    check_prime(l)?;
    let mut g = Vec::with_capacity(gens.len());
    for m in gens {
        let m = Mat2 { l, ..*m };
        if !m.is_invertible() {
            return Err(Gl2Error::Singular(m.to_string()));
        }
        g.push(m);
    }
    Ok(Subgroup { l, generators: g, label: None, elements: OnceLock::new() })
}

fn closure(gens: &[Mat2], l: u32) -> HashSet<Mat2> {
    let id = Mat2::identity(l);
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

impl Subgroup {
    /// Builds a subgroup from a known element set, which must be a group.
    /// Generators are picked greedily.
    pub fn from_elements(l: u32, elements: HashSet<Mat2>) -> Result<Subgroup, Gl2Error> {
        check_prime(l)?;
        let mut sorted: Vec<Mat2> = elements.iter().copied().collect();
        sorted.sort();
        let mut gens = Vec::new();
        let mut current = closure(&gens, l);
        for m in sorted {
            if current.len() == elements.len() {
                break;
            }
            if !current.contains(&m) {
                gens.push(m);
                current = closure(&gens, l);
            }
        }
        debug_assert_eq!(current, elements);
        let cell = OnceLock::new();
        let _ = cell.set(elements);
        Ok(Subgroup { l, generators: gens, label: None, elements: cell })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Subgroup {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn prime(&self) -> u32 {
        self.l
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &HashSet<Mat2> {
        self.elements.get_or_init(|| closure(&self.generators, self.l))
    }

    pub fn order(&self) -> u64 {
        self.elements().len() as u64
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements().contains(m)
    }

    /// The group generated by this one and −I.
    pub fn plus_minus(&self) -> Subgroup {
        let mut gens = self.generators.clone();
        gens.push(Mat2::minus_identity(self.l));
        Subgroup { l: self.l, generators: gens, label: None, elements: OnceLock::new() }
    }

    pub fn fingerprints(&self) -> BTreeSet<(u32, u32)> {
        self.elements().iter().map(Mat2::fingerprint).collect()
    }

    fn fingerprint_counts(&self) -> HashMap<(u32, u32), usize> {
        let mut m = HashMap::new();
        for e in self.elements() {
            *m.entry(e.fingerprint()).or_insert(0) += 1;
        }
        m
    }

    pub fn invariants(&self) -> Invariants {
        let l = self.l;
        let order = self.order();
        let dets: HashSet<u32> = self.elements().iter().map(Mat2::det).collect();
        Invariants {
            order,
            index: gl2_order(l as u64) / order,
            det_is_full: dets.len() as u32 == l - 1,
            has_minus_i: self.contains(&Mat2::minus_identity(l)),
            fingerprints: self.fingerprints(),
        }
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.l == other.l && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_elements(&self, other: &Subgroup) -> bool {
        self.l == other.l && self.elements() == other.elements()
    }
}

/// Proper, contains −I, full determinant, and has an element of trace 0 and
/// determinant −1. This is the prime-level form of the definition.
pub fn is_applicable(g: &Subgroup) -> bool {
    let l = g.l;
    let inv = g.invariants();
    let minus_one = (l - 1) % l;
    inv.order < gl2_order(l as u64)
        && inv.has_minus_i
        && inv.det_is_full
        && inv.fingerprints.contains(&(0, minus_one))
}

/// Returns M with M·G·M⁻¹ = H when G and H are conjugate.
pub fn is_conjugate(g: &Subgroup, h: &Subgroup) -> Option<Mat2> {
    if g.l != h.l || g.order() != h.order() {
        return None;
    }
    if g.fingerprint_counts() != h.fingerprint_counts() {
        return None;
    }
    let hs = h.elements();
    gl2_elements(g.l).find(|m| {
        let mi = m.inverse().unwrap();
        g.generators.iter().all(|x| hs.contains(&m.mul(x).mul(&mi)))
    })
}

/// Families of standard subgroups that exist for every (odd) prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Standard {
    SplitCartan,
    NonsplitCartan,
    SplitNormalizer,
    NonsplitNormalizer,
    Borel,
    Full,
    /// Matrices (a 0; 0 b), (0 a; b 0) with a/b a cube; needs ℓ ≡ 1 mod 3.
    SplitNormalizerIndex3,
    /// Cubes of C_ns together with diag(1,−1); needs ℓ ≡ 2 mod 3.
    NonsplitNormalizerIndex3,
    /// (a b; 0 ±a).
    CmG,
    /// (a b; 0 ±a) with a a square.
    CmH1,
    /// (±a b; 0 a) with a a square.
    CmH2,
}

impl Standard {
    pub fn name(&self) -> &'static str {
        match self {
            Standard::SplitCartan => "Cs",
            Standard::NonsplitCartan => "Cns",
            Standard::SplitNormalizer => "Ns",
            Standard::NonsplitNormalizer => "Nns",
            Standard::Borel => "B",
            Standard::Full => "GL2",
            Standard::SplitNormalizerIndex3 => "Ns-index3",
            Standard::NonsplitNormalizerIndex3 => "Nns-index3",
            Standard::CmG => "CM.G",
            Standard::CmH1 => "CM.H1",
            Standard::CmH2 => "CM.H2",
        }
    }

    pub fn from_name(s: &str) -> Option<Standard> {
        use Standard::*;
        [
            SplitCartan,
            NonsplitCartan,
            SplitNormalizer,
            NonsplitNormalizer,
            Borel,
            Full,
            SplitNormalizerIndex3,
            NonsplitNormalizerIndex3,
            CmG,
            CmH1,
            CmH2,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

fn nonsplit_elements(l: u32) -> Vec<Mat2> {
    let e = epsilon(l) as i64;
    let mut v = Vec::new();
    for a in 0..l as i64 {
        for b in 0..l as i64 {
            if a != 0 || b != 0 {
                v.push(Mat2::new(a, b * e, b, a, l));
            }
        }
    }
    v
}

/// Builds one of the standard subgroups at ℓ, labelled "ℓ.name".
pub fn standard(kind: Standard, l: u32) -> Result<Subgroup, Gl2Error> {
    check_prime(l)?;
    let li = l as i64;
    let units: Vec<i64> = (1..li).collect();
    let odd = || if l == 2 { Err(Gl2Error::EvenPrime(2)) } else { Ok(()) };
    let mut set: HashSet<Mat2> = HashSet::new();
    let w = Mat2::diag(1, -1, l);
    match kind {
        Standard::SplitCartan | Standard::SplitNormalizer => {
            for &a in &units {
                for &b in &units {
                    set.insert(Mat2::diag(a, b, l));
                    if kind == Standard::SplitNormalizer {
                        set.insert(Mat2::new(0, a, b, 0, l));
                    }
                }
            }
        }
        Standard::NonsplitCartan | Standard::NonsplitNormalizer => {
            odd()?;
            for m in nonsplit_elements(l) {
                set.insert(m);
                if kind == Standard::NonsplitNormalizer {
                    set.insert(w.mul(&m));
                }
            }
        }
        Standard::Borel => {
            for &a in &units {
                for &d in &units {
                    for b in 0..li {
                        set.insert(Mat2::new(a, b, 0, d, l));
                    }
                }
            }
        }
        Standard::Full => {
            // generated lazily; GL₂ is generated by these three
            let g = primitive_root(l) as i64;
            let gens = [Mat2::diag(g, 1, l), Mat2::new(1, 1, 0, 1, l), Mat2::new(0, 1, 1, 0, l)];
            return Ok(span(&gens, l)?.with_label(format!("{l}.GL2")));
        }
        Standard::SplitNormalizerIndex3 => {
            if l % 3 != 1 {
                return Err(Gl2Error::NoIndex3 { kind: "Ns", residue: 1, l: l as u64 });
            }
            let cubes: HashSet<i64> = units.iter().map(|&x| (x * x % li) * x % li).collect();
            for &a in &units {
                for &b in &units {
                    let ratio = a * inv_mod_u64(b as u64, l as u64).unwrap() as i64 % li;
                    if cubes.contains(&ratio) {
                        set.insert(Mat2::diag(a, b, l));
                        set.insert(Mat2::new(0, a, b, 0, l));
                    }
                }
            }
        }
        Standard::NonsplitNormalizerIndex3 => {
            odd()?;
            if l % 3 != 2 {
                return Err(Gl2Error::NoIndex3 { kind: "Nns", residue: 2, l: l as u64 });
            }
            for m in nonsplit_elements(l) {
                let c = m.pow(3);
                set.insert(c);
                set.insert(w.mul(&c));
            }
        }
        Standard::CmG | Standard::CmH1 | Standard::CmH2 => {
            odd()?;
            let squares: HashSet<i64> = units.iter().map(|&x| x * x % li).collect();
            for &a in &units {
                if kind != Standard::CmG && !squares.contains(&a) {
                    continue;
                }
                for b in 0..li {
                    for s in [1, -1] {
                        set.insert(match kind {
                            Standard::CmH2 => Mat2::new(s * a, b, 0, a, l),
                            _ => Mat2::new(a, b, 0, s * a, l),
                        });
                    }
                }
            }
        }
    }
    Ok(Subgroup::from_elements(l, set)?.with_label(format!("{l}.{}", kind.name())))
}

/// (trace, det) pairs of a standard maximal subgroup, computed from its
/// parametrization without building the group. Agrees with
/// `standard(kind, l)?.fingerprints()` (checked in tests).
pub fn standard_fingerprints(kind: Standard, l: u32) -> BTreeSet<(u32, u32)> {
    let l64 = l as u64;
    let mut out = BTreeSet::new();
    let diag_pairs = |out: &mut BTreeSet<(u32, u32)>| {
        for a in 1..l64 {
            for d in 1..l64 {
                out.insert((((a + d) % l64) as u32, (a * d % l64) as u32));
            }
        }
    };
    match kind {
        Standard::Borel | Standard::SplitCartan => diag_pairs(&mut out),
        Standard::SplitNormalizer => {
            diag_pairs(&mut out);
            for x in 1..l {
                out.insert((0, x));
            }
        }
        Standard::NonsplitCartan | Standard::NonsplitNormalizer => {
            let e = epsilon(l) as u64;
            for a in 0..l64 {
                for b in 0..l64 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let det = (a * a + l64 * l64 - e * b % l64 * b % l64) % l64;
                    out.insert(((2 * a % l64) as u32, det as u32));
                }
            }
            if kind == Standard::NonsplitNormalizer {
                for x in 1..l {
                    out.insert((0, x));
                }
            }
        }
        _ => {
            if let Ok(g) = standard(kind, l) {
                return g.fingerprints();
            }
        }
    }
    out
}

/// Pairs (t, d) with t²/d ∈ {0, 1, 2, 4}, the only values taken by elements
/// whose image in PGL₂ has order 2, 3, 4 or 1 respectively. Every element of a
/// group with projective image A₄ or S₄ lands here.
pub fn exceptional_fingerprints(l: u32) -> BTreeSet<(u32, u32)> {
    let l64 = l as u64;
    let mut out = BTreeSet::new();
    for t in 0..l64 {
        for d in 1..l64 {
            let u = t * t % l64 * inv_mod_u64(d, l64).unwrap() % l64;
            if [0, 1, 2, 4].iter().any(|&k| k % l64 == u) {
                out.insert((t as u32, d as u32));
            }
        }
    }
    out
}
