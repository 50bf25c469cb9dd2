//! The mod-p Steenrod algebra in the admissible (Serre–Cartan) basis.
//!
//! Words are finite sequences of [`Letter`]s read left to right as a
//! composite of operations, so `Sq2 Sq1` applies `Sq1` first. At `p = 2`
//! only `Sq` letters occur; at odd primes only `b` (the Bockstein) and `P`
//! letters occur.

mod adem;
mod antipode;
mod subalgebra;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Prime;

pub use adem::{adem_reduce, adem_reduce_with, is_admissible, RewriteOrder};
pub use antipode::{antipode, antipode_of_letter};
pub use subalgebra::{
    subalgebra_basis, subalgebra_through, verify_presentation, LeftAction, Level, Relation,
    RelationCheck, Subalgebra, SubalgebraSpec, DEFAULT_DEGREE_CAP,
};

/// A single generator of the Steenrod algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Sq(u32),
    Beta,
    P(u32),
}

impl Letter {
    /// Cohomological degree at the prime `p`.
    pub fn degree(self, p: Prime) -> u32 {
        match self {
            Letter::Sq(i) => i,
            Letter::Beta => 1,
            Letter::P(s) => 2 * s * (p.value() - 1),
        }
    }

    pub fn is_valid_at(self, p: Prime) -> bool {
        match self {
            Letter::Sq(_) => p.is_two(),
            Letter::Beta | Letter::P(_) => !p.is_two(),
        }
    }

    /// Short token used by the text formats: `Sq4`, `b`, `P1`.
    pub fn token(self) -> String {
        match self {
            Letter::Sq(i) => format!("Sq{i}"),
            Letter::Beta => "b".to_string(),
            Letter::P(s) => format!("P{s}"),
        }
    }

    /// Typeset-ish name used in reports: `Sq^4`, `beta`, `P^1`.
    pub fn pretty(self) -> String {
        match self {
            Letter::Sq(i) => format!("Sq^{i}"),
            Letter::Beta => "beta".to_string(),
            Letter::P(s) => format!("P^{s}"),
        }
    }

    pub fn parse_token(tok: &str) -> Option<Letter> {
        match tok {
            "b" | "β" | "beta" => return Some(Letter::Beta),
            _ => {}
        }
        let number = |s: &str| s.strip_prefix('^').unwrap_or(s).parse::<u32>().ok();
        if let Some(rest) = tok.strip_prefix("Sq") {
            number(rest).map(Letter::Sq)
        } else if let Some(rest) = tok.strip_prefix('P') {
            number(rest).map(Letter::P)
        } else {
            None
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

/// Degree of a word of letters.
pub fn word_degree(p: Prime, word: &[Letter]) -> u32 {
    word.iter().map(|l| l.degree(p)).sum()
}

pub fn word_to_string(word: &[Letter]) -> String {
    if word.is_empty() {
        "1".to_string()
    } else {
        word.iter().map(|l| l.token()).collect::<Vec<_>>().join(" ")
    }
}

/// A word of letters together with its degree. Ordered by degree first, then
/// lexicographically on the letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u32,
    letters: Vec<Letter>,
}

impl Monomial {
    pub fn new(p: Prime, letters: Vec<Letter>) -> Monomial {
        Monomial { degree: word_degree(p, &letters), letters }
    }

    pub fn unit() -> Monomial {
        Monomial { degree: 0, letters: Vec::new() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_to_string(&self.letters))
    }
}

/// An `F_p`-linear combination of admissible monomials in canonical form:
/// no zero coefficients, keys admissible and ordered.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    p: Prime,
    terms: BTreeMap<Monomial, u32>,
}

impl AlgebraElement {
    pub fn zero(p: Prime) -> Self {
        AlgebraElement { p, terms: BTreeMap::new() }
    }

    pub fn one(p: Prime) -> Self {
        Self::from_admissible(p, [(Monomial::unit(), 1)])
    }

    /// Reduce an arbitrary word to admissible form.
    pub fn from_word(p: Prime, word: &[Letter]) -> Self {
        adem_reduce(p, word)
    }

    pub fn letter(p: Prime, l: Letter) -> Self {
        adem_reduce(p, &[l])
    }

    pub(crate) fn from_admissible(
        p: Prime,
        terms: impl IntoIterator<Item = (Monomial, u32)>,
    ) -> Self {
        let mut out = AlgebraElement::zero(p);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: u32) {
        let p = self.p;
        let c = c % p.value();
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = p.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Common degree of all terms, or `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// The element as a sparse vector in admissible coordinates.
    pub fn as_vector(&self) -> &BTreeMap<Monomial, u32> {
        &self.terms
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_prime(rhs)?;
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(self.p.neg(1)))
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        AlgebraElement::from_admissible(
            p,
            self.terms.iter().map(|(m, &x)| (m.clone(), p.mul(x, c))),
        )
    }

    /// Product in the Steenrod algebra: concatenate words, then reduce.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.check_prime(rhs)?;
        let p = self.p;
        let mut out = AlgebraElement::zero(p);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let mut word = a.letters.clone();
                word.extend_from_slice(&b.letters);
                let prod = adem_reduce(p, &word);
                let c = p.mul(ca, cb);
                for (m, x) in prod.terms {
                    out.add_term(m, p.mul(c, x));
                }
            }
        }
        Ok(out)
    }

    fn check_prime(&self, rhs: &Self) -> Result<()> {
        if self.p != rhs.p {
            return Err(Error::PrimeMismatch(self.p.value(), rhs.p.value()));
        }
        Ok(())
    }

    /// Parse the text form produced by `Display`, e.g. `Sq6 + Sq5 Sq1` or `2 b P1 + P2 b`.
    pub fn parse(p: Prime, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(AlgebraElement::zero(p));
        }
        let mut out = AlgebraElement::zero(p);
        for (i, raw) in text.split('+').enumerate() {
            let raw = raw.trim();
            let (neg, raw) = match raw.strip_prefix('-') {
                Some(r) => (true, r.trim()),
                None => (false, raw),
            };
            let mut tokens = raw.split_whitespace().peekable();
            let mut coeff: i64 = 1;
            let mut word = Vec::new();
            if let Some(tok) = tokens.peek() {
                if let Ok(c) = tok.parse::<i64>() {
                    coeff = c;
                    tokens.next();
                }
            }
            for tok in tokens {
                let l = Letter::parse_token(tok)
                    .filter(|l| l.is_valid_at(p))
                    .ok_or_else(|| Error::parse(1, format!("bad operation {tok:?} in term {}", i + 1)))?;
                word.push(l);
            }
            if neg {
                coeff = -coeff;
            }
            let term = adem_reduce(p, &word).scale(p.reduce(coeff));
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| match (c, m.letters.is_empty()) {
                (1, _) => m.to_string(),
                (c, true) => c.to_string(),
                (c, false) => format!("{c} {m}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(text: &str) -> AlgebraElement {
        AlgebraElement::parse(Prime::TWO, text).unwrap()
    }

    #[test]
    fn display_orders_terms_descending() {
        assert_eq!(el("Sq5 Sq1 + Sq6").to_string(), "Sq6 + Sq5 Sq1");
        assert_eq!(el("Sq3 + Sq3 Sq1").to_string(), "Sq3 Sq1 + Sq3");
        assert_eq!(el("0").to_string(), "0");
        assert_eq!(el("1").to_string(), "1");
    }

    #[test]
    fn odd_text_round_trip() {
        let p = Prime::THREE;
        let x = AlgebraElement::parse(p, "b P1 + 2 P1 b").unwrap();
        assert_eq!(x.to_string(), "2 P1 b + b P1");
        assert_eq!(AlgebraElement::parse(p, &x.to_string()).unwrap(), x);
        assert!(AlgebraElement::parse(p, "Sq1").is_err());
    }

    #[test]
    fn multiply_rejects_prime_mismatch() {
        let a = AlgebraElement::one(Prime::TWO);
        let b = AlgebraElement::one(Prime::THREE);
        assert!(matches!(a.multiply(&b), Err(Error::PrimeMismatch(2, 3))));
    }
}
