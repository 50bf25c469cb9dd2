//! Reduction of arbitrary words to the admissible basis via the Adem relations.

use std::collections::BTreeMap;

use super::{AlgebraElement, Letter, Monomial};
use crate::field::Prime;

/// Which inadmissible spot to rewrite first. The result does not depend on
/// the choice; the alternative exists so that this can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

pub fn is_admissible(p: Prime, word: &[Letter]) -> bool {
    (0..word.len()).all(|i| redex_at(p, word, i).is_none())
}

/// Canonical admissible expansion of a word.
pub fn adem_reduce(p: Prime, word: &[Letter]) -> AlgebraElement {
    adem_reduce_with(p, word, RewriteOrder::Leftmost)
}

pub fn adem_reduce_with(p: Prime, word: &[Letter], order: RewriteOrder) -> AlgebraElement {
    debug_assert!(word.iter().all(|l| l.is_valid_at(p)), "letter not defined at p = {p}");
    let mut pending: BTreeMap<Vec<Letter>, u32> = BTreeMap::new();
    pending.insert(word.to_vec(), 1);
    let mut done = AlgebraElement::zero(p);

    while let Some((w, c)) = pending.pop_first() {
        if c == 0 {
            continue;
        }
        let found = match order {
            RewriteOrder::Leftmost => (0..w.len()).find_map(|i| redex_at(p, &w, i).map(|r| (i, r))),
            RewriteOrder::Rightmost => {
                (0..w.len()).rev().find_map(|i| redex_at(p, &w, i).map(|r| (i, r)))
            }
        };
        match found {
            None => done.add_term(Monomial::new(p, w), c),
            Some((start, (len, replacement))) => {
                for (middle, k) in replacement {
                    let coeff = p.mul(c, k);
                    if coeff == 0 {
                        continue;
                    }
                    let mut next = Vec::with_capacity(w.len() + 1);
                    next.extend_from_slice(&w[..start]);
                    next.extend(middle);
                    next.extend_from_slice(&w[start + len..]);
                    let e = pending.entry(next).or_insert(0);
                    *e = p.add(*e, coeff);
                }
            }
        }
    }
    done
}

type Replacement = (usize, Vec<(Vec<Letter>, u32)>);

/// If an inadmissible pattern starts at position `i`, return its length and
/// the linear combination that replaces it.
fn redex_at(p: Prime, w: &[Letter], i: usize) -> Option<Replacement> {
    use Letter::*;
    let pv = p.value();
    match (w[i], w.get(i + 1), w.get(i + 2)) {
        (Sq(0), _, _) | (P(0), _, _) => Some((1, vec![(Vec::new(), 1)])),
        (Sq(a), Some(&Sq(b)), _) if b > 0 && a < 2 * b => Some((2, adem_two(p, a, b))),
        (Beta, Some(&Beta), _) => Some((2, Vec::new())),
        (P(a), Some(&P(b)), _) if b > 0 && a < pv * b => Some((2, adem_odd(p, a, b))),
        (P(a), Some(&Beta), Some(&P(b))) if b > 0 && a <= pv * b => {
            Some((3, adem_odd_beta(p, a, b)))
        }
        _ => None,
    }
}

fn push(terms: &mut Vec<(Vec<Letter>, u32)>, word: Vec<Letter>, c: u32) {
    if c != 0 {
        terms.push((word.into_iter().filter(|l| !matches!(l, Letter::Sq(0) | Letter::P(0))).collect(), c));
    }
}

/// `Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^(a+b-c) Sq^c` for `0 < a < 2b`.
fn adem_two(p: Prime, a: u32, b: u32) -> Vec<(Vec<Letter>, u32)> {
    let mut out = Vec::new();
    if a == 0 {
        push(&mut out, vec![Letter::Sq(b)], 1);
        return out;
    }
    for c in 0..=a / 2 {
        let k = p.binomial(b as i64 - c as i64 - 1, a as i64 - 2 * c as i64);
        push(&mut out, vec![Letter::Sq(a + b - c), Letter::Sq(c)], k);
    }
    out
}

/// `P^a P^b = sum_j (-1)^(a+j) C((p-1)(b-j)-1, a-pj) P^(a+b-j) P^j` for `a < pb`.
fn adem_odd(p: Prime, a: u32, b: u32) -> Vec<(Vec<Letter>, u32)> {
    let mut out = Vec::new();
    if a == 0 {
        push(&mut out, vec![Letter::P(b)], 1);
        return out;
    }
    let pv = p.value() as i64;
    let (a, b) = (a as i64, b as i64);
    for j in 0..=a / pv {
        let k = p.mul(p.sign(a + j), p.binomial((pv - 1) * (b - j) - 1, a - pv * j));
        push(&mut out, vec![Letter::P((a + b - j) as u32), Letter::P(j as u32)], k);
    }
    out
}

/// `P^a b P^b` for `a <= pb`:
/// `sum_j (-1)^(a+j) C((p-1)(b-j), a-pj) b P^(a+b-j) P^j
///  + sum_j (-1)^(a+j+1) C((p-1)(b-j)-1, a-pj-1) P^(a+b-j) b P^j`.
fn adem_odd_beta(p: Prime, a: u32, b: u32) -> Vec<(Vec<Letter>, u32)> {
    let mut out = Vec::new();
    if a == 0 {
        push(&mut out, vec![Letter::Beta, Letter::P(b)], 1);
        return out;
    }
    let pv = p.value() as i64;
    let (a, b) = (a as i64, b as i64);
    for j in 0..=a / pv {
        let k = p.mul(p.sign(a + j), p.binomial((pv - 1) * (b - j), a - pv * j));
        push(
            &mut out,
            vec![Letter::Beta, Letter::P((a + b - j) as u32), Letter::P(j as u32)],
            k,
        );
    }
    for j in 0..=(a - 1) / pv {
        let k = p.mul(p.sign(a + j + 1), p.binomial((pv - 1) * (b - j) - 1, a - pv * j - 1));
        push(
            &mut out,
            vec![Letter::P((a + b - j) as u32), Letter::Beta, Letter::P(j as u32)],
            k,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    fn show(p: Prime, w: &[Letter]) -> String {
        adem_reduce(p, w).to_string()
    }

    #[test]
    fn two_primary_examples() {
        let two = Prime::TWO;
        assert_eq!(show(two, &[Sq(1), Sq(1)]), "0");
        assert_eq!(show(two, &[Sq(2), Sq(2)]), "Sq3 Sq1");
        assert_eq!(show(two, &[Sq(2), Sq(4)]), "Sq6 + Sq5 Sq1");
        assert_eq!(show(two, &[Sq(1), Sq(2)]), "Sq3");
        assert_eq!(show(two, &[Sq(0), Sq(3)]), "Sq3");
        assert_eq!(show(two, &[]), "1");
    }

    #[test]
    fn odd_primary_examples() {
        let three = Prime::THREE;
        assert_eq!(show(three, &[Beta, Beta]), "0");
        assert_eq!(show(three, &[P(1), P(1)]), "2 P2");
        assert_eq!(show(three, &[P(1), P(1), P(1)]), "0");
        // P^1 b P^1 = b P^2 + P^2 b at p = 3
        assert_eq!(show(three, &[P(1), Beta, P(1)]), "P2 b + b P2");
        let five = Prime::FIVE;
        assert_eq!(show(five, &[Beta, Beta]), "0");
        assert_eq!(show(five, &[P(1), P(1), P(1), P(1), P(1)]), "0");
    }

    #[test]
    fn admissibility() {
        let two = Prime::TWO;
        assert!(is_admissible(two, &[Sq(5), Sq(2), Sq(1)]));
        assert!(!is_admissible(two, &[Sq(2), Sq(2)]));
        let three = Prime::THREE;
        assert!(is_admissible(three, &[P(4), Beta, P(1)]));
        assert!(!is_admissible(three, &[P(3), Beta, P(1)]));
        assert!(!is_admissible(three, &[P(3), P(2)]));
        assert!(!is_admissible(three, &[P(3), Beta, P(1), Beta, Beta]));
    }
}
