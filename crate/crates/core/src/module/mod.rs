//! Finite graded modules over the subalgebras `A(k)`.

mod iso;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::steenrod::{
    antipode, subalgebra_through, verify_presentation, word_degree, AlgebraElement,
    Level, Letter, SubalgebraSpec,
};

pub use iso::{
    fingerprint, is_isomorphic, is_isomorphic_with, is_self_dual, is_self_dual_with, Distinction,
    Fingerprint, IsoOptions, IsoVerdict, IsoWitness, RankEntry, DEFAULT_BUDGET, DEFAULT_WORD_LENGTH,
};

/// A graded `F_p` vector space with named basis elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSpace {
    p: Prime,
    degrees: BTreeMap<i32, Vec<String>>,
}

impl GradedSpace {
    pub fn new(p: Prime) -> Self {
        GradedSpace { p, degrees: BTreeMap::new() }
    }

    /// Append a basis element. Names must be unique in the whole space.
    pub fn push(&mut self, name: impl Into<String>, degree: i32) -> Result<usize> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::InconsistentDegrees(format!("basis name {name:?} used twice")));
        }
        let names = self.degrees.entry(degree).or_default();
        names.push(name);
        Ok(names.len() - 1)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.degrees.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Degrees with a nonzero piece, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.degrees.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d)
    }

    pub fn bottom(&self) -> Option<i32> {
        self.degrees().next()
    }

    pub fn top(&self) -> Option<i32> {
        self.degrees().last()
    }

    /// `top - bottom`, or 0 for the zero space.
    pub fn span(&self) -> u32 {
        match (self.bottom(), self.top()) {
            (Some(b), Some(t)) => (t - b) as u32,
            _ => 0,
        }
    }

    pub fn names(&self, degree: i32) -> &[String] {
        self.degrees.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, name: &str) -> Option<(i32, usize)> {
        self.degrees
            .iter()
            .find_map(|(&d, v)| v.iter().position(|n| n == name).map(|i| (d, i)))
    }

    pub fn shifted(&self, n: i32) -> GradedSpace {
        GradedSpace {
            p: self.p,
            degrees: self.degrees.iter().map(|(&d, v)| (d + n, v.clone())).collect(),
        }
    }
}

/// A graded space with action matrices for the generators of a subalgebra.
/// `act_g[d]` maps degree `d` to degree `d + |g|`; missing matrices are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteModule {
    space: GradedSpace,
    spec: SubalgebraSpec,
    actions: BTreeMap<Letter, BTreeMap<i32, Matrix>>,
}

impl FiniteModule {
    pub fn new(space: GradedSpace, spec: SubalgebraSpec) -> Result<Self> {
        if space.prime() != spec.p {
            return Err(Error::PrimeMismatch(space.prime().value(), spec.p.value()));
        }
        Ok(FiniteModule { space, spec, actions: BTreeMap::new() })
    }

    /// The trivial module `F_p` concentrated in degree 0.
    pub fn point(spec: SubalgebraSpec) -> Self {
        let mut space = GradedSpace::new(spec.p);
        space.push("1", 0).expect("fresh space");
        FiniteModule { space, spec, actions: BTreeMap::new() }
    }

    pub fn zero(spec: SubalgebraSpec) -> Self {
        FiniteModule { space: GradedSpace::new(spec.p), spec, actions: BTreeMap::new() }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn prime(&self) -> Prime {
        self.space.p
    }

    pub fn spec(&self) -> SubalgebraSpec {
        self.spec
    }

    /// Generators acting on this module. For the full algebra only the
    /// generators that can act nontrivially within the grading are listed.
    pub fn generators(&self) -> Vec<Letter> {
        match self.spec.level {
            Level::Finite(_) => self.spec.generators(),
            Level::Full => self.spec.generators_through(self.space.span()),
        }
    }

    pub fn set_action(&mut self, g: Letter, degree: i32, m: Matrix) -> Result<()> {
        if !self.spec.has_generator(g) {
            return Err(Error::NotInSubalgebra(g.token(), self.spec.name()));
        }
        let target = degree + g.degree(self.prime()) as i32;
        let want = (self.space.dim(target), self.space.dim(degree));
        if (m.rows(), m.cols()) != want {
            return Err(Error::Dimension(format!(
                "{g} on degree {degree} should be {}x{}, got {}x{}",
                want.0,
                want.1,
                m.rows(),
                m.cols()
            )));
        }
        let per = self.actions.entry(g).or_default();
        if m.is_zero() {
            per.remove(&degree);
            if per.is_empty() {
                self.actions.remove(&g);
            }
        } else {
            per.insert(degree, m);
        }
        Ok(())
    }

    /// Set a single matrix entry: coefficient of target basis element `row` in
    /// `g` applied to source basis element `col`.
    pub fn set_entry(&mut self, g: Letter, degree: i32, row: usize, col: usize, c: u32) -> Result<()> {
        let mut m = self.action(g, degree);
        if row >= m.rows() || col >= m.cols() {
            return Err(Error::Dimension(format!("{g} on degree {degree}: entry ({row}, {col}) out of range")));
        }
        m.set(row, col, c % self.prime().value());
        self.set_action(g, degree, m)
    }

    /// The matrix of `g` on degree `d`; zero when unset.
    pub fn action(&self, g: Letter, degree: i32) -> Matrix {
        self.actions
            .get(&g)
            .and_then(|per| per.get(&degree))
            .cloned()
            .unwrap_or_else(|| {
                let t = degree + g.degree(self.prime()) as i32;
                Matrix::zeros(self.space.dim(t), self.space.dim(degree))
            })
    }

    /// Nonzero action matrices of `g`, keyed by source degree.
    pub fn action_matrices(&self, g: Letter) -> impl Iterator<Item = (i32, &Matrix)> {
        self.actions.get(&g).into_iter().flat_map(|per| per.iter().map(|(&d, m)| (d, m)))
    }

    /// Composite of a word of generators on degree `d` (rightmost letter first).
    pub fn act_word(&self, word: &[Letter], degree: i32) -> Matrix {
        let p = self.prime();
        let mut d = degree;
        let mut acc = Matrix::identity(self.space.dim(degree));
        for &g in word.iter().rev() {
            acc = self.action(g, d).mul(p, &acc);
            d += g.degree(p) as i32;
        }
        acc
    }

    /// The action of a homogeneous element of the subalgebra, expanded through
    /// words in the generators.
    pub fn act_element(&self, x: &AlgebraElement, degree: i32) -> Result<Matrix> {
        let p = self.prime();
        let Some(deg) = x.degree() else {
            return if x.is_zero() {
                Ok(Matrix::zeros(self.space.dim(degree), self.space.dim(degree)))
            } else {
                Err(Error::InconsistentDegrees(format!("{x} is not homogeneous")))
            };
        };
        let target = degree + deg as i32;
        let sub = subalgebra_through(self.spec, deg);
        let (_, coords) =
            sub.coordinates(x).ok_or_else(|| Error::NotInSubalgebra(x.to_string(), self.spec.name()))?;
        let mut out = Matrix::zeros(self.space.dim(target), self.space.dim(degree));
        for ((word, _), c) in sub.basis_in(deg).zip(coords) {
            if c != 0 {
                out.add_scaled(p, c, &self.act_word(word, degree));
            }
        }
        Ok(out)
    }

    /// Number of nonzero entries over all matrices of `g`.
    pub fn nonzero_entries(&self, g: Letter) -> usize {
        self.action_matrices(g).map(|(_, m)| m.nonzero_entries()).sum()
    }

    /// Check every relation of `spec` as a matrix identity in every degree.
    /// The named defining relations are listed first, followed by any failure
    /// among the relations that present `spec` through the module's span.
    pub fn validate(&self, spec: &SubalgebraSpec) -> Result<Vec<String>> {
        let p = self.prime();
        if spec.p != p {
            return Err(Error::PrimeMismatch(p.value(), spec.p.value()));
        }
        let span = self.space.span();
        let mine = self.generators();
        for g in spec.generators_through(span) {
            if !mine.contains(&g) {
                return Err(Error::MissingGenerator(g.token()));
            }
        }
        for (&g, per) in &self.actions {
            for (&d, m) in per {
                let t = d + g.degree(p) as i32;
                if (m.rows(), m.cols()) != (self.space.dim(t), self.space.dim(d)) {
                    return Err(Error::Dimension(format!("{g} on degree {d}")));
                }
            }
        }

        let degrees: Vec<i32> = self.space.degrees().collect();
        let mut words = WordCache::new(self);
        let mut out = Vec::new();
        let mut failed: Vec<(i32, u32)> = Vec::new();
        for check in verify_presentation(spec) {
            let rel = &check.relation;
            let rd = rel.degree(p);
            if rd > span {
                continue;
            }
            for &d in &degrees {
                if !words.relation_holds(&rel.terms, d) {
                    out.push(format!("{rel} fails at degree {d}"));
                    failed.push((d, rd));
                }
            }
        }
        if span > 0 {
            let sub = subalgebra_through(*spec, span);
            for rel in sub.closure_relations() {
                let rd = rel.degree(p);
                for &d in &degrees {
                    if failed.contains(&(d, rd)) {
                        continue;
                    }
                    if !words.relation_holds(&rel.terms, d) {
                        out.push(format!("{rel} fails at degree {d}"));
                        failed.push((d, rd));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Instability: at `p = 2`, `Sq^i` vanishes on degree `d < i`; at odd `p`,
    /// `P^s` vanishes on degree `d < 2s` and `b` on negative degrees.
    pub fn unstable_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (&g, per) in &self.actions {
            for &d in per.keys() {
                let bad = match g {
                    Letter::Sq(i) => d < i as i32,
                    Letter::P(s) => d < 2 * s as i32,
                    Letter::Beta => d < 0,
                };
                if bad {
                    out.push(format!("{g} is nonzero on degree {d}"));
                }
            }
        }
        out
    }

    /// The same grading with only the generators of a smaller subalgebra.
    pub fn restrict(&self, spec: SubalgebraSpec) -> Result<FiniteModule> {
        if spec.p != self.prime() {
            return Err(Error::PrimeMismatch(self.prime().value(), spec.p.value()));
        }
        let mine = self.generators();
        let mut out = FiniteModule::new(self.space.clone(), spec)?;
        for g in spec.generators_through(self.space.span()) {
            if !mine.contains(&g) {
                return Err(Error::MissingGenerator(g.token()));
            }
            if let Some(per) = self.actions.get(&g) {
                out.actions.insert(g, per.clone());
            }
        }
        Ok(out)
    }

    /// Translate the grading by `n`; action matrices are unchanged.
    pub fn shift(&self, n: i32) -> FiniteModule {
        FiniteModule {
            space: self.space.shifted(n),
            spec: self.spec,
            actions: self
                .actions
                .iter()
                .map(|(&g, per)| (g, per.iter().map(|(&d, m)| (d + n, m.clone())).collect()))
                .collect(),
        }
    }

    /// The dual module: `(DM)^{-d} = (M^d)^*`, with `g f = (-1)^{|g||f|} f o chi(g)`.
    pub fn dualize(&self) -> Result<FiniteModule> {
        if !self.spec.is_antipode_closed() {
            return Err(Error::NotAntipodeClosed(self.spec.name()));
        }
        let p = self.prime();
        let mut space = GradedSpace::new(p);
        for d in self.space.degrees().collect::<Vec<_>>().into_iter().rev() {
            for name in self.space.names(d) {
                space.push(format!("{name}*"), -d)?;
            }
        }
        let mut out = FiniteModule::new(space, self.spec)?;
        for g in self.generators() {
            let gd = g.degree(p) as i32;
            let chi = antipode(&AlgebraElement::letter(p, g));
            for d in self.space.degrees() {
                // functionals on M^d go to functionals on M^{d-|g|}
                let source = d - gd;
                if self.space.dim(source) == 0 {
                    continue;
                }
                let m = self.act_element(&chi, source)?.transpose();
                let sign = p.sign((gd as i64) * (d as i64));
                out.set_action(g, -d, m.scaled(p, sign))?;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FiniteModule over {} {{", self.spec)?;
        for d in self.space.degrees() {
            writeln!(f, "  {d}: {}", self.space.names(d).join(" "))?;
        }
        for (g, per) in &self.actions {
            for (d, m) in per {
                writeln!(f, "  {g} on {d}: {m:?}")?;
            }
        }
        write!(f, "}}")
    }
}

pub fn validate(m: &FiniteModule, spec: &SubalgebraSpec) -> Result<Vec<String>> {
    m.validate(spec)
}

pub fn dualize(m: &FiniteModule) -> Result<FiniteModule> {
    m.dualize()
}

pub fn shift(m: &FiniteModule, n: i32) -> FiniteModule {
    m.shift(n)
}

/// Memoised matrices of words acting on a module.
pub(crate) struct WordCache<'a> {
    module: &'a FiniteModule,
    cache: HashMap<(Vec<Letter>, i32), Matrix>,
}

impl<'a> WordCache<'a> {
    pub(crate) fn new(module: &'a FiniteModule) -> Self {
        WordCache { module, cache: HashMap::new() }
    }

    pub(crate) fn get(&mut self, word: &[Letter], degree: i32) -> Matrix {
        if word.is_empty() {
            return Matrix::identity(self.module.space.dim(degree));
        }
        if let Some(m) = self.cache.get(&(word.to_vec(), degree)) {
            return m.clone();
        }
        let p = self.module.prime();
        let rest = self.get(&word[1..], degree);
        let mid = degree + word_degree(p, &word[1..]) as i32;
        let m = self.module.action(word[0], mid).mul(p, &rest);
        self.cache.insert((word.to_vec(), degree), m.clone());
        m
    }

    fn relation_holds(&mut self, terms: &[(u32, Vec<Letter>)], degree: i32) -> bool {
        let p = self.module.prime();
        let Some((_, first)) = terms.first() else { return true };
        let t = degree + word_degree(p, first) as i32;
        let dims = (self.module.space.dim(t), self.module.space.dim(degree));
        if dims.0 == 0 || dims.1 == 0 {
            return true;
        }
        let mut acc = Matrix::zeros(dims.0, dims.1);
        for (c, w) in terms {
            acc.add_scaled(p, *c, &self.get(w, degree));
        }
        acc.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: u32) -> SubalgebraSpec {
        SubalgebraSpec::new(Prime::TWO, k)
    }

    /// `H^*(RP^n; F_2)` built by hand from `Sq^i x^j = C(j, i) x^{i+j}`.
    fn rp(n: i32, k: u32) -> FiniteModule {
        let two = Prime::TWO;
        let mut space = GradedSpace::new(two);
        for j in 0..=n {
            space.push(format!("x{j}"), j).unwrap();
        }
        let mut m = FiniteModule::new(space, a(k)).unwrap();
        for g in a(k).generators() {
            let Letter::Sq(i) = g else { unreachable!() };
            for j in 0..=n - i as i32 {
                let c = two.binomial(j as i64, i as i64);
                m.set_entry(g, j, 0, 0, c).unwrap();
            }
        }
        m
    }

    #[test]
    fn rp5_is_valid() {
        let m = rp(5, 2);
        assert!(m.validate(&a(2)).unwrap().is_empty());
        assert!(m.validate(&a(1)).unwrap().is_empty());
        assert!(m.unstable_violations().is_empty());
    }

    #[test]
    fn broken_relation_is_named() {
        let mut space = GradedSpace::new(Prime::TWO);
        for (n, d) in [("a", 3), ("b", 4), ("c", 5)] {
            space.push(n, d).unwrap();
        }
        let mut m = FiniteModule::new(space, a(0)).unwrap();
        m.set_entry(Letter::Sq(1), 3, 0, 0, 1).unwrap();
        m.set_entry(Letter::Sq(1), 4, 0, 0, 1).unwrap();
        let v = m.validate(&a(0)).unwrap();
        assert_eq!(v, vec!["Sq1 Sq1 = 0 fails at degree 3".to_string()]);
    }

    #[test]
    fn trivial_modules() {
        let pt = FiniteModule::point(a(2));
        assert!(pt.validate(&a(2)).unwrap().is_empty());
        assert_eq!(pt.dualize().unwrap().space().dim(0), 1);
        assert!(FiniteModule::zero(a(1)).validate(&a(1)).unwrap().is_empty());
    }

    #[test]
    fn dual_of_rp2_has_sq1() {
        let d = rp(2, 1).dualize().unwrap();
        assert_eq!(d.space().bottom(), Some(-2));
        assert_eq!(d.action(Letter::Sq(1), -2).get(0, 0), 1);
        assert!(d.action(Letter::Sq(1), -1).is_zero());
    }

    #[test]
    fn shifts_compose() {
        let m = rp(5, 1);
        assert_eq!(m.shift(0), m);
        assert_eq!(m.shift(3).shift(-7), m.shift(-4));
        assert_eq!(m.shift(-5).space().top(), Some(0));
    }

    #[test]
    fn set_action_checks_shape_and_generator() {
        let mut m = rp(3, 0);
        assert!(matches!(m.set_action(Letter::Sq(1), 0, Matrix::zeros(2, 1)), Err(Error::Dimension(_))));
        assert!(matches!(m.set_action(Letter::Sq(2), 0, Matrix::zeros(1, 1)), Err(Error::NotInSubalgebra(..))));
        assert!(matches!(m.validate(&a(1)), Err(Error::MissingGenerator(_))));
    }

    #[test]
    fn rp11_self_duality() {
        let m = rp(11, 2);
        let yes = is_self_dual(&m, &a(1), 11).unwrap();
        match &yes {
            IsoVerdict::Isomorphic { witness } => {
                let d = m.dualize().unwrap();
                assert!(witness.verify(&d, &m.shift(-11), &a(1).generators()));
            }
            v => panic!("{v:?}"),
        }
        let no = is_self_dual(&m, &a(2), 11).unwrap();
        assert_eq!(no.explanation(), "Sq4: H^7 -> H^11 has rank 1; dual requires rank 0");
    }

    #[test]
    fn rp5_orientable_not_spin() {
        let m = rp(5, 1);
        assert!(is_self_dual(&m, &a(0), 5).unwrap().is_isomorphic());
        assert!(is_self_dual(&m, &a(1), 5).unwrap().is_not_isomorphic());
    }

    #[test]
    fn identity_and_double_dual() {
        let m = rp(5, 2);
        assert!(is_isomorphic(&m, &m, &a(2)).unwrap().is_isomorphic());
        let dd = m.dualize().unwrap().dualize().unwrap();
        assert!(is_isomorphic(&dd, &m, &a(2)).unwrap().is_isomorphic());
        let z = FiniteModule::zero(a(2));
        assert!(is_self_dual(&z, &a(2), 0).unwrap().is_isomorphic());
    }
}
