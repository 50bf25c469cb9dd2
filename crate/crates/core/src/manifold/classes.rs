//! Wu classes, Stiefel-Whitney classes and inverses of total classes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Class, PoincareRing};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::steenrod::Letter;

/// Wu classes `v_i` in `H^i` at `p = 2`, or Milnor-Wu classes `q_i` in
/// `H^(2i(p-1))` at odd primes, keyed by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WuData {
    pub prime: Prime,
    pub classes: BTreeMap<u32, Class>,
}

impl WuData {
    pub fn get(&self, i: u32) -> Option<&Class> {
        self.classes.get(&i)
    }

    pub fn total(&self, r: &PoincareRing) -> Class {
        self.classes.values().fold(r.zero(), |acc, c| r.add(&acc, c))
    }
}

fn power_letter(p: Prime, i: u32) -> Option<Letter> {
    match (i, p.is_two()) {
        (0, _) => None,
        (i, true) => Some(Letter::Sq(i)),
        (i, false) => Some(Letter::P(i)),
    }
}

fn apply(r: &PoincareRing, l: Option<Letter>, x: &[u32]) -> Class {
    match l {
        None => x.to_vec(),
        Some(l) => r.act(l, x),
    }
}

/// Solve `<v_i x, [M]> = <Sq^i x, [M]>` (resp. `P^i`) degree by degree.
pub fn wu_classes(r: &PoincareRing) -> Result<WuData> {
    let p = r.prime();
    let n = r.dimension();
    let mut classes = BTreeMap::new();
    let mut i = 0u32;
    loop {
        let l = power_letter(p, i);
        let d = l.map_or(0, |l| l.degree(p) as i32);
        if d > n {
            break;
        }
        let v = r.represent(d, |j| r.evaluate(&apply(r, l, &r.basis_class(j))))?;
        classes.insert(i, v);
        i += 1;
    }
    Ok(WuData { prime: p, classes })
}

/// `w(tau) = Sq(v)`: `w_i = sum_{a+b=i} Sq^a v_b`.
pub fn sw_from_wu(r: &PoincareRing, v: &WuData) -> Result<Class> {
    if !r.prime().is_two() {
        return Err(Error::UnsupportedPrime { family: "Stiefel-Whitney classes".into(), prime: r.prime().value() });
    }
    Ok(total_operation(r, v))
}

/// Odd-primary analogue of [`sw_from_wu`]: `q(tau) = P(q)`, with `P = sum P^i`.
pub fn milnor_wu_total(r: &PoincareRing, v: &WuData) -> Result<Class> {
    if r.prime().is_two() {
        return Err(Error::UnsupportedPrime { family: "Milnor-Wu classes".into(), prime: 2 });
    }
    Ok(total_operation(r, v))
}

fn total_operation(r: &PoincareRing, v: &WuData) -> Class {
    let p = r.prime();
    let mut out = r.zero();
    for c in v.classes.values() {
        let mut a = 0;
        loop {
            let l = power_letter(p, a);
            if l.is_some_and(|l| l.degree(p) as i32 > r.dimension()) {
                break;
            }
            out = r.add(&out, &apply(r, l, c));
            a += 1;
        }
    }
    out
}

/// A commutative ring graded in nonnegative degrees and truncated above some
/// degree, so that elements of positive degree are nilpotent.
pub trait TruncatedRing {
    type Elem: Clone + PartialEq;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Highest degree in which elements can be nonzero.
    fn max_degree(&self) -> u32;
    /// True when the degree-zero part of `a` is exactly `1`.
    fn has_unit_constant(&self, a: &Self::Elem) -> bool;
}

/// Inverse of a total class `1 + c_1 + c_2 + ...` as a power series.
pub fn inverse_total_class<R: TruncatedRing>(ring: &R, c: &R::Elem) -> Result<R::Elem> {
    if !ring.has_unit_constant(c) {
        return Err(Error::NonUnitConstant);
    }
    let one = ring.one();
    let rest = ring.add(c, &ring.neg(&one));
    let minus_rest = ring.neg(&rest);
    let mut term = one.clone();
    let mut acc = one;
    for _ in 0..ring.max_degree() {
        term = ring.mul(&term, &minus_rest);
        acc = ring.add(&acc, &term);
    }
    Ok(acc)
}

impl TruncatedRing for PoincareRing {
    type Elem = Class;

    fn one(&self) -> Class {
        PoincareRing::one(self)
    }

    fn add(&self, a: &Class, b: &Class) -> Class {
        PoincareRing::add(self, a, b)
    }

    fn neg(&self, a: &Class) -> Class {
        self.scale(a, self.prime().neg(1))
    }

    fn mul(&self, a: &Class, b: &Class) -> Class {
        PoincareRing::mul(self, a, b)
    }

    fn max_degree(&self) -> u32 {
        self.dimension().max(0) as u32
    }

    fn has_unit_constant(&self, a: &Class) -> bool {
        a.len() == self.dim() && a[0] == 1
    }
}

/// Polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }
}

/// `Z[y_1, ..., y_k]` or `F_p[y_1, ..., y_k]` with weighted variables,
/// optionally truncated above a total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    names: Vec<String>,
    weights: Vec<u32>,
    max_degree: Option<u32>,
    modulus: Option<Prime>,
}

impl PolyRing {
    pub fn new(names: Vec<String>, weights: Vec<u32>) -> Self {
        assert_eq!(names.len(), weights.len());
        PolyRing { names, weights, max_degree: None, modulus: None }
    }

    /// Variables `prefix1, ..., prefixk` of weights `1..=k`.
    pub fn indexed(prefix: &str, k: usize) -> Self {
        PolyRing::new((1..=k).map(|i| format!("{prefix}{i}")).collect(), (1..=k as u32).collect())
    }

    pub fn truncated(mut self, max_degree: u32) -> Self {
        self.max_degree = Some(max_degree);
        self
    }

    pub fn modulo(mut self, p: Prime) -> Self {
        self.modulus = Some(p);
        self
    }

    pub fn modulus(&self) -> Option<Prime> {
        self.modulus
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    fn normalize(&self, mut poly: Poly) -> Poly {
        poly.terms.retain(|e, c| {
            if let Some(p) = self.modulus {
                let m = BigInt::from(p.value());
                *c = ((&*c % &m) + &m) % &m;
            }
            !c.is_zero() && self.max_degree.is_none_or(|d| self.weight(e) <= d)
        });
        poly
    }

    pub fn constant(&self, c: i64) -> Poly {
        let mut t = BTreeMap::new();
        t.insert(vec![0; self.names.len()], BigInt::from(c));
        self.normalize(Poly { terms: t })
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = vec![0; self.names.len()];
        e[i] = 1;
        let mut t = BTreeMap::new();
        t.insert(e, BigInt::one());
        self.normalize(Poly { terms: t })
    }

    pub fn scale(&self, a: &Poly, c: &BigInt) -> Poly {
        self.normalize(Poly { terms: a.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() })
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        TruncatedRing::add(self, a, &TruncatedRing::neg(self, b))
    }

    /// Reduce coefficients modulo a prime.
    pub fn reduce(&self, a: &Poly, p: Prime) -> (PolyRing, Poly) {
        let ring = self.clone().modulo(p);
        let poly = ring.normalize(a.clone());
        (ring, poly)
    }

    /// Text form with terms in descending lexicographic order of exponents,
    /// e.g. `p1^3 + 4 p1 p2 + 3 p3`.
    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in a.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.names)
                .filter(|(&x, _)| x > 0)
                .map(|(&x, n)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
                .collect();
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(out, "{mag}").unwrap(),
                (false, true) => out.push_str(&mono.join(" ")),
                (false, false) => write!(out, "{mag} {}", mono.join(" ")).unwrap(),
            }
        }
        out
    }
}

impl TruncatedRing for PolyRing {
    type Elem = Poly;

    fn one(&self) -> Poly {
        self.constant(1)
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (e, c) in &b.terms {
            *out.terms.entry(e.clone()).or_default() += c;
        }
        self.normalize(out)
    }

    fn neg(&self, a: &Poly) -> Poly {
        self.normalize(Poly { terms: a.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() })
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                if self.max_degree.is_some_and(|d| self.weight(&e) > d) {
                    continue;
                }
                *out.terms.entry(e).or_default() += ca * cb;
            }
        }
        self.normalize(out)
    }

    fn max_degree(&self) -> u32 {
        self.max_degree.expect("inverse needs a truncated ring")
    }

    fn has_unit_constant(&self, a: &Poly) -> bool {
        a.coefficient(&vec![0; self.names.len()]).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw_ring(max: u32) -> PolyRing {
        PolyRing::indexed("w", 4).truncated(max).modulo(Prime::TWO)
    }

    fn total(ring: &PolyRing, upto: usize) -> Poly {
        (0..upto).fold(ring.one(), |acc, i| ring.add(&acc, &ring.var(i)))
    }

    #[test]
    fn inverse_in_low_degrees() {
        let r = sw_ring(2);
        let inv = inverse_total_class(&r, &total(&r, 2)).unwrap();
        assert_eq!(r.format(&inv), "w1^2 + w1 + w2 + 1");
    }

    #[test]
    fn inverse_degree_four_part() {
        let r = sw_ring(4);
        let inv = inverse_total_class(&r, &total(&r, 4)).unwrap();
        let four: Poly = Poly { terms: inv.terms.into_iter().filter(|(e, _)| r.weight(e) == 4).collect() };
        // the w1 w3 term has coefficient 2 and drops out mod 2
        assert_eq!(r.format(&four), "w1^4 + w1^2 w2 + w2^2 + w4");
    }

    #[test]
    fn inverse_checks() {
        let r = sw_ring(4);
        assert_eq!(inverse_total_class(&r, &r.one()).unwrap(), r.one());
        let c = total(&r, 4);
        let inv = inverse_total_class(&r, &c).unwrap();
        assert_eq!(r.mul(&c, &inv), r.one());
        assert!(matches!(inverse_total_class(&r, &r.var(0)), Err(Error::NonUnitConstant)));
    }

    #[test]
    fn integer_formatting() {
        let r = PolyRing::indexed("p", 2);
        let x = r.sub(&r.mul(&r.var(0), &r.var(0)), &r.scale(&r.var(1), &BigInt::from(2)));
        assert_eq!(r.format(&x), "p1^2 - 2 p2");
    }
}
