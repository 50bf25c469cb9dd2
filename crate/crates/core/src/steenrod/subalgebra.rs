//! The finite subalgebras `A(k)` and their bases.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::{adem_reduce, word_degree, word_to_string, AlgebraElement, Letter, Monomial};
use crate::field::Prime;
use crate::linalg::SpanTracker;

/// Safety cap on the degrees explored when enumerating a whole subalgebra.
pub const DEFAULT_DEGREE_CAP: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Level {
    Finite(u32),
    /// The whole Steenrod algebra; only ever used truncated to a degree.
    Full,
}

/// `A(k)` at a prime: generated by `Sq^(2^i), i <= k` at `p = 2`, and by
/// `b, P^(p^i), i < k` at odd primes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SubalgebraSpec {
    pub p: Prime,
    pub level: Level,
}

impl SubalgebraSpec {
    pub fn new(p: Prime, k: u32) -> Self {
        SubalgebraSpec { p, level: Level::Finite(k) }
    }

    pub fn full(p: Prime) -> Self {
        SubalgebraSpec { p, level: Level::Full }
    }

    /// Generators of degree at most `max_degree`, in increasing degree.
    pub fn generators_through(&self, max_degree: u32) -> Vec<Letter> {
        let p = self.p;
        let bound = match self.level {
            Level::Finite(k) => Some(k),
            Level::Full => None,
        };
        let mut out = Vec::new();
        if p.is_two() {
            let mut i = 0u32;
            while bound.is_none_or(|k| i <= k) && (1u32 << i) <= max_degree.max(1) {
                out.push(Letter::Sq(1 << i));
                i += 1;
            }
        } else {
            out.push(Letter::Beta);
            let mut i = 0u32;
            let mut s = 1u32;
            while bound.is_none_or(|k| i < k) && Letter::P(s).degree(p) <= max_degree {
                out.push(Letter::P(s));
                i += 1;
                s *= p.value();
            }
        }
        out
    }

    /// All generators of a finite `A(k)`.
    pub fn generators(&self) -> Vec<Letter> {
        match self.level {
            Level::Finite(_) => self.generators_through(u32::MAX / 4),
            Level::Full => self.generators_through(DEFAULT_DEGREE_CAP),
        }
    }

    pub fn has_generator(&self, l: Letter) -> bool {
        l.is_valid_at(self.p) && self.generators_through(l.degree(self.p)).contains(&l)
    }

    /// Every `A(k)` is a Hopf subalgebra, hence closed under `chi`.
    pub fn is_antipode_closed(&self) -> bool {
        true
    }

    pub fn name(&self) -> String {
        match self.level {
            Level::Finite(k) => format!("A({k})_{}", self.p),
            Level::Full => format!("A_{}", self.p),
        }
    }
}

impl fmt::Display for SubalgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A linear combination of words that is claimed to vanish in the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(u32, Vec<Letter>)>,
}

impl Relation {
    fn from_words(words: &[&[Letter]]) -> Relation {
        Relation { terms: words.iter().map(|w| (1, w.to_vec())).collect() }
    }

    pub fn degree(&self, p: Prime) -> u32 {
        self.terms.first().map_or(0, |(_, w)| word_degree(p, w))
    }

    /// The value of the combination in the admissible basis.
    pub fn reduce(&self, p: Prime) -> AlgebraElement {
        self.terms.iter().fold(AlgebraElement::zero(p), |acc, (c, w)| {
            acc.add(&adem_reduce(p, w).scale(*c)).expect("same prime")
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, w)| match c {
                1 => word_to_string(w),
                c => format!("{c} {}", word_to_string(w)),
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub relation: Relation,
    pub reduced: AlgebraElement,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.reduced.is_zero()
    }
}

/// The named defining relations that apply to `spec` (the four relations of
/// `A(2)` at `p = 2`, and `b b = 0`, `(P^1)^p = 0` at odd primes), each
/// reduced through the Adem relations.
pub fn verify_presentation(spec: &SubalgebraSpec) -> Vec<RelationCheck> {
    use Letter::*;
    let p = spec.p;
    let k = match spec.level {
        Level::Finite(k) => k,
        Level::Full => u32::MAX,
    };
    let mut rels = Vec::new();
    if p.is_two() {
        rels.push(Relation::from_words(&[&[Sq(1), Sq(1)]]));
        if k >= 1 {
            rels.push(Relation::from_words(&[&[Sq(2), Sq(2)], &[Sq(1), Sq(2), Sq(1)]]));
        }
        if k >= 2 {
            rels.push(Relation::from_words(&[&[Sq(4), Sq(1)], &[Sq(1), Sq(4)], &[Sq(2), Sq(1), Sq(2)]]));
            rels.push(Relation::from_words(&[
                &[Sq(4), Sq(4)],
                &[Sq(2), Sq(2), Sq(4)],
                &[Sq(2), Sq(4), Sq(2)],
            ]));
        }
    } else {
        rels.push(Relation::from_words(&[&[Beta, Beta]]));
        if k >= 1 {
            let power = vec![P(1); p.value() as usize];
            rels.push(Relation { terms: vec![(1, power)] });
        }
    }
    rels.into_iter()
        .map(|relation| {
            let reduced = relation.reduce(p);
            RelationCheck { relation, reduced }
        })
        .collect()
}

/// One homogeneous piece of a subalgebra: basis elements labelled by words in
/// the generators.
#[derive(Clone, Debug)]
struct DegreePart {
    words: Vec<Vec<Letter>>,
    elements: Vec<AlgebraElement>,
    tracker: SpanTracker<Monomial>,
}

/// Left multiplication by a generator on a basis element, in basis coordinates.
#[derive(Clone, Debug)]
pub struct LeftAction {
    pub generator: Letter,
    pub source: (u32, usize),
    pub target_degree: u32,
    pub coordinates: Vec<u32>,
}

/// A basis of `A(k)` through some degree, found by closing `{1}` under left
/// multiplication by the generators.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    spec: SubalgebraSpec,
    max_degree: u32,
    complete: bool,
    parts: Vec<DegreePart>,
    left: Vec<LeftAction>,
}

impl Subalgebra {
    /// Basis in degrees `0..=max_degree`. Products landing above the bound are
    /// not computed.
    pub fn through(spec: SubalgebraSpec, max_degree: u32) -> Subalgebra {
        Self::build(spec, max_degree, false)
    }

    fn build(spec: SubalgebraSpec, max_degree: u32, probe_beyond: bool) -> Subalgebra {
        let p = spec.p;
        let mut parts: Vec<DegreePart> = (0..=max_degree)
            .map(|_| DegreePart { words: Vec::new(), elements: Vec::new(), tracker: SpanTracker::new(p) })
            .collect();
        let one = AlgebraElement::one(p);
        parts[0].tracker.insert(one.as_vector());
        parts[0].words.push(Vec::new());
        parts[0].elements.push(one);

        let gens = spec.generators_through(max_degree);
        let mut queue = VecDeque::from([(0u32, 0usize)]);
        let mut left = Vec::new();
        let mut complete = true;
        while let Some((d, j)) = queue.pop_front() {
            for &g in &gens {
                let target = d + g.degree(p);
                if target > max_degree {
                    if probe_beyond {
                        let x = AlgebraElement::letter(p, g)
                            .multiply(&parts[d as usize].elements[j])
                            .expect("same prime");
                        complete &= x.is_zero();
                    } else {
                        complete = false;
                    }
                    continue;
                }
                let x = AlgebraElement::letter(p, g)
                    .multiply(&parts[d as usize].elements[j])
                    .expect("same prime");
                let part = &mut parts[target as usize];
                let coordinates = if part.tracker.insert(x.as_vector()) {
                    let mut word = vec![g];
                    word.extend_from_slice(&parts[d as usize].words[j]);
                    let part = &mut parts[target as usize];
                    part.words.push(word);
                    part.elements.push(x);
                    let idx = part.words.len() - 1;
                    queue.push_back((target, idx));
                    let mut e = vec![0; idx + 1];
                    e[idx] = 1;
                    e
                } else {
                    part.tracker.coordinates(x.as_vector()).expect("dependent vector lies in span")
                };
                left.push(LeftAction { generator: g, source: (d, j), target_degree: target, coordinates });
            }
        }
        // coordinates recorded early may be shorter than the final basis
        for a in &mut left {
            a.coordinates.resize(parts[a.target_degree as usize].words.len(), 0);
        }
        Subalgebra { spec, max_degree, complete, parts, left }
    }

    pub fn spec(&self) -> SubalgebraSpec {
        self.spec
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// True when every product above the explored range was checked to vanish,
    /// i.e. this is the whole of `A(k)`.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn dimension(&self) -> usize {
        self.parts.iter().map(|d| d.words.len()).sum()
    }

    pub fn dimension_in(&self, degree: u32) -> usize {
        self.parts.get(degree as usize).map_or(0, |d| d.words.len())
    }

    pub fn top_degree(&self) -> u32 {
        (0..=self.max_degree).rev().find(|&d| self.dimension_in(d) > 0).unwrap_or(0)
    }

    /// Basis words and their admissible expansions in one degree.
    pub fn basis_in(&self, degree: u32) -> impl Iterator<Item = (&[Letter], &AlgebraElement)> {
        self.parts
            .get(degree as usize)
            .into_iter()
            .flat_map(|d| d.words.iter().map(Vec::as_slice).zip(&d.elements))
    }

    /// All basis elements as `(degree, word, element)`, ordered by degree.
    pub fn basis(&self) -> Vec<(u32, &[Letter], &AlgebraElement)> {
        (0..=self.max_degree)
            .flat_map(|d| self.basis_in(d).map(move |(w, e)| (d, w, e)))
            .collect()
    }

    /// Coordinates of a homogeneous element relative to the basis of its degree.
    pub fn coordinates(&self, x: &AlgebraElement) -> Option<(u32, Vec<u32>)> {
        if x.is_zero() {
            return Some((0, vec![0; self.dimension_in(0)]));
        }
        let d = x.degree()?;
        let part = self.parts.get(d as usize)?;
        part.tracker.coordinates(x.as_vector()).map(|c| (d, c))
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        x.prime() == self.spec.p && self.coordinates(x).is_some()
    }

    /// Left multiplication by each generator on each basis element.
    pub fn left_actions(&self) -> &[LeftAction] {
        &self.left
    }

    /// Relations `g * w_j = sum_k c_k w_k` for every basis word `w_j` and generator
    /// `g` whose product was not itself taken as a basis word. Together they
    /// present the subalgebra (through the explored degree) as a quotient of the
    /// free algebra on the generators.
    pub fn closure_relations(&self) -> Vec<Relation> {
        let p = self.spec.p;
        self.left
            .iter()
            .filter_map(|a| {
                let (d, j) = a.source;
                let mut lhs = vec![a.generator];
                lhs.extend_from_slice(&self.parts[d as usize].words[j]);
                let target = &self.parts[a.target_degree as usize];
                if target.words.iter().any(|w| *w == lhs) {
                    return None;
                }
                let mut terms = vec![(1, lhs)];
                for (k, &c) in a.coordinates.iter().enumerate() {
                    if c != 0 {
                        terms.push((p.neg(c), target.words[k].clone()));
                    }
                }
                Some(Relation { terms })
            })
            .collect()
    }
}

/// The basis of a finite `A(k)`, explored up to [`DEFAULT_DEGREE_CAP`].
pub fn subalgebra_basis(spec: &SubalgebraSpec) -> Subalgebra {
    Subalgebra::build(*spec, DEFAULT_DEGREE_CAP, true)
}

/// Shared, memoised [`Subalgebra::through`].
pub fn subalgebra_through(spec: SubalgebraSpec, max_degree: u32) -> Arc<Subalgebra> {
    type Cache = Mutex<HashMap<(SubalgebraSpec, u32), Arc<Subalgebra>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&(spec, max_degree)) {
        return a.clone();
    }
    let a = Arc::new(Subalgebra::through(spec, max_degree));
    cache.lock().unwrap().insert((spec, max_degree), a.clone());
    a
}
