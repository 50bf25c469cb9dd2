//! The canonical anti-automorphism `chi`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{AlgebraElement, Letter};
use crate::field::Prime;

fn cache() -> &'static Mutex<HashMap<(u32, Letter), AlgebraElement>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, Letter), AlgebraElement>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn cached(p: Prime, l: Letter) -> Option<AlgebraElement> {
    cache().lock().unwrap().get(&(p.value(), l)).cloned()
}

/// `chi` of a single generator. For `Sq^n` and `P^n` this solves
/// `sum_{i+j=n} Sq^i chi(Sq^j) = 0` (resp. with `P`) for `chi` of the top term.
pub fn antipode_of_letter(p: Prime, l: Letter) -> AlgebraElement {
    if let Some(x) = cached(p, l) {
        return x;
    }
    let value = match l {
        Letter::Beta => AlgebraElement::letter(p, Letter::Beta).scale(p.neg(1)),
        Letter::Sq(0) | Letter::P(0) => AlgebraElement::one(p),
        Letter::Sq(n) | Letter::P(n) => {
            let make = |i: u32| match l {
                Letter::Sq(_) => Letter::Sq(i),
                _ => Letter::P(i),
            };
            // fill the table bottom-up so the recursion never re-enters
            let mut lower: Vec<AlgebraElement> = vec![AlgebraElement::one(p)];
            for m in 1..n {
                lower.push(antipode_of_letter(p, make(m)));
            }
            let mut acc = AlgebraElement::zero(p);
            for i in 1..=n {
                let term = AlgebraElement::letter(p, make(i))
                    .multiply(&lower[(n - i) as usize])
                    .expect("same prime");
                acc = acc.add(&term).expect("same prime");
            }
            acc.scale(p.neg(1))
        }
    };
    cache().lock().unwrap().insert((p.value(), l), value.clone());
    value
}

/// `chi` extended as a graded anti-homomorphism:
/// `chi(xy) = (-1)^{|x||y|} chi(y) chi(x)`.
pub fn antipode(a: &AlgebraElement) -> AlgebraElement {
    let p = a.prime();
    let mut out = AlgebraElement::zero(p);
    for (m, c) in a.terms() {
        let letters = m.letters();
        let odd = letters.iter().filter(|l| l.degree(p) % 2 == 1).count() as i64;
        let sign = p.sign(odd * (odd - 1) / 2);
        let mut acc = AlgebraElement::one(p);
        for &l in letters.iter().rev() {
            acc = acc.multiply(&antipode_of_letter(p, l)).expect("same prime");
        }
        out = out.add(&acc.scale(p.mul(sign, c))).expect("same prime");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn chi_of_small_squares() {
        let two = Prime::TWO;
        assert_eq!(antipode_of_letter(two, Sq(1)).to_string(), "Sq1");
        assert_eq!(antipode_of_letter(two, Sq(2)).to_string(), "Sq2");
        assert_eq!(antipode_of_letter(two, Sq(3)).to_string(), "Sq2 Sq1");
        assert_eq!(antipode_of_letter(two, Sq(4)).to_string(), "Sq4 + Sq3 Sq1");
    }

    #[test]
    fn chi_is_an_involution_on_letters() {
        for (p, letters) in [
            (Prime::TWO, (1..=12).map(Sq).collect::<Vec<_>>()),
            (Prime::THREE, vec![Beta, P(1), P(2), P(3), P(4)]),
            (Prime::FIVE, vec![Beta, P(1), P(2), P(5)]),
        ] {
            for l in letters {
                let x = AlgebraElement::letter(p, l);
                assert_eq!(antipode(&antipode(&x)), x, "chi^2 on {l} at {p}");
            }
        }
    }

    #[test]
    fn odd_primary_values() {
        let three = Prime::THREE;
        assert_eq!(antipode_of_letter(three, Beta).to_string(), "2 b");
        assert_eq!(antipode_of_letter(three, P(1)).to_string(), "2 P1");
    }
}
