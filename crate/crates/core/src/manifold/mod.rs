//! Poincaré duality algebras with a Steenrod action, as models of closed
//! manifolds, and the characteristic-class computations built on them.

mod bundle;
mod classes;
mod integral;
mod report;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::module::{FiniteModule, GradedSpace};
use crate::steenrod::{subalgebra_through, AlgebraElement, Letter, SubalgebraSpec};

pub use bundle::{thom_iso_is_linear, thom_module, ThomLinearity, ThomModule, VirtualBundle};
pub use classes::{
    inverse_total_class, milnor_wu_total, sw_from_wu, wu_classes, Poly, PolyRing, TruncatedRing,
    WuData,
};
pub use integral::{newton_polynomial, q1_divisibility, IntegralCharData, Polynomial};
pub use report::{
    psd_check, structure_report, LevelStatus, ObstructionReport, PsdCheck, Structure, StructureVerdict, TopOperation,
};

/// A cohomology class: coordinates over the whole basis, ordered by degree.
pub type Class = Vec<u32>;

/// A graded-commutative `F_p` algebra with fundamental degree `n`, a
/// distinguished top class, cup products, and the action of every Steenrod
/// letter of degree at most `n` on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareRing {
    name: String,
    space: GradedSpace,
    n: i32,
    basis: Vec<(i32, usize)>,
    offsets: BTreeMap<i32, usize>,
    cup: BTreeMap<(usize, usize), Vec<(usize, u32)>>,
    ops: BTreeMap<Letter, BTreeMap<usize, Vec<(usize, u32)>>>,
}

/// Every Steenrod letter that can act on a ring of fundamental degree `n`.
pub fn letters_through(p: Prime, n: i32) -> Vec<Letter> {
    let n = n.max(0) as u32;
    if p.is_two() {
        (1..=n).map(Letter::Sq).collect()
    } else {
        let mut out = if n >= 1 { vec![Letter::Beta] } else { Vec::new() };
        let mut s = 1;
        while Letter::P(s).degree(p) <= n {
            out.push(Letter::P(s));
            s += 1;
        }
        out
    }
}

impl PoincareRing {
    /// A ring on `space` with all products and operations zero except those
    /// involving the unit. The space must have a single class in degree 0 and
    /// a single class in degree `n`, and nothing outside `0..=n`.
    pub fn new(name: impl Into<String>, space: GradedSpace, n: i32) -> Result<Self> {
        let name = name.into();
        if space.dim(0) != 1 {
            return Err(Error::InvalidRing(format!("{name}: degree 0 must be one-dimensional")));
        }
        if space.dim(n) != 1 {
            return Err(Error::InvalidRing(format!("{name}: degree {n} must be one-dimensional")));
        }
        if let Some(d) = space.degrees().find(|&d| d < 0 || d > n) {
            return Err(Error::InvalidRing(format!("{name}: class in degree {d} outside 0..={n}")));
        }
        let mut basis = Vec::new();
        let mut offsets = BTreeMap::new();
        for d in space.degrees() {
            offsets.insert(d, basis.len());
            basis.extend((0..space.dim(d)).map(|i| (d, i)));
        }
        let mut ring = PoincareRing { name, space, n, basis, offsets, cup: BTreeMap::new(), ops: BTreeMap::new() };
        for i in 0..ring.dim() {
            ring.cup.insert((0, i), vec![(i, 1)]);
            ring.cup.insert((i, 0), vec![(i, 1)]);
        }
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime(&self) -> Prime {
        self.space.prime()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// Fundamental degree.
    pub fn dimension(&self) -> i32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.basis[i].0
    }

    /// Global index of the `local`-th basis element in `degree`.
    pub fn index(&self, degree: i32, local: usize) -> usize {
        self.offsets[&degree] + local
    }

    pub fn indices_in(&self, degree: i32) -> std::ops::Range<usize> {
        match self.offsets.get(&degree) {
            Some(&o) => o..o + self.space.dim(degree),
            None => 0..0,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.space.index_of(name).map(|(d, i)| self.index(d, i))
    }

    pub fn basis_name(&self, i: usize) -> &str {
        let (d, l) = self.basis[i];
        &self.space.names(d)[l]
    }

    pub fn fundamental_index(&self) -> usize {
        self.index(self.n, 0)
    }

    pub fn zero(&self) -> Class {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Class {
        self.basis_class(0)
    }

    pub fn basis_class(&self, i: usize) -> Class {
        let mut c = self.zero();
        c[i] = 1;
        c
    }

    fn class_to_sparse(c: &[u32]) -> Vec<(usize, u32)> {
        c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
    }

    fn check_homogeneous(&self, value: &[u32], degree: i32, what: &str) -> Result<()> {
        if value.len() != self.dim() {
            return Err(Error::Dimension(format!("{what}: class has {} coordinates, ring has {}", value.len(), self.dim())));
        }
        if let Some(i) = value.iter().enumerate().find(|(i, &x)| x != 0 && self.degree_of(*i) != degree).map(|(i, _)| i) {
            return Err(Error::InconsistentDegrees(format!(
                "{what}: {} has degree {}, expected {degree}",
                self.basis_name(i),
                self.degree_of(i)
            )));
        }
        Ok(())
    }

    /// Set the product of two basis elements.
    pub fn set_product(&mut self, a: usize, b: usize, value: Class) -> Result<()> {
        let d = self.degree_of(a) + self.degree_of(b);
        let what = format!("{} * {}", self.basis_name(a), self.basis_name(b));
        if d > self.n {
            if value.iter().any(|&x| x != 0) {
                return Err(Error::InconsistentDegrees(format!("{what} lands above the top degree")));
            }
            return Ok(());
        }
        self.check_homogeneous(&value, d, &what)?;
        let sparse = Self::class_to_sparse(&value);
        if sparse.is_empty() {
            self.cup.remove(&(a, b));
        } else {
            self.cup.insert((a, b), sparse);
        }
        Ok(())
    }

    /// Set the action of a letter on a basis element.
    pub fn set_op(&mut self, l: Letter, a: usize, value: Class) -> Result<()> {
        let p = self.prime();
        if !l.is_valid_at(p) {
            return Err(Error::UnsupportedOperation(format!("{l} at p = {p}")));
        }
        let d = self.degree_of(a) + l.degree(p) as i32;
        let what = format!("{l} {}", self.basis_name(a));
        if d > self.n {
            if value.iter().any(|&x| x != 0) {
                return Err(Error::InconsistentDegrees(format!("{what} lands above the top degree")));
            }
            return Ok(());
        }
        self.check_homogeneous(&value, d, &what)?;
        let sparse = Self::class_to_sparse(&value);
        if !sparse.is_empty() {
            self.ops.entry(l).or_default().insert(a, sparse);
        } else if let Some(per) = self.ops.get_mut(&l) {
            per.remove(&a);
            if per.is_empty() {
                self.ops.remove(&l);
            }
        }
        Ok(())
    }

    /// Fill in every letter that is not in `given` from the generators,
    /// expanding it as a combination of words in `Sq^(2^i)` (resp. `b`, `P^(p^i)`).
    pub fn complete_ops(&mut self, given: &[Letter]) -> Result<()> {
        let p = self.prime();
        let full = SubalgebraSpec::full(p);
        for l in letters_through(p, self.n) {
            if given.contains(&l) {
                continue;
            }
            let x = AlgebraElement::letter(p, l);
            let sub = subalgebra_through(full, l.degree(p));
            let (_, coords) =
                sub.coordinates(&x).ok_or_else(|| Error::NotInSubalgebra(l.token(), full.name()))?;
            let words: Vec<(Vec<Letter>, u32)> = sub
                .basis_in(l.degree(p))
                .zip(coords)
                .filter(|(_, c)| *c != 0)
                .map(|((w, _), c)| (w.to_vec(), c))
                .collect();
            for a in 0..self.dim() {
                let mut acc = self.zero();
                for (w, c) in &words {
                    let v = self.act_word(w, &self.basis_class(a));
                    for (s, t) in acc.iter_mut().zip(v) {
                        *s = p.add(*s, p.mul(*c, t));
                    }
                }
                self.set_op(l, a, acc)?;
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Class {
        let p = self.prime();
        a.iter().zip(b).map(|(&x, &y)| p.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u32], b: &[u32]) -> Class {
        let p = self.prime();
        a.iter().zip(b).map(|(&x, &y)| p.sub(x, y)).collect()
    }

    pub fn scale(&self, a: &[u32], c: u32) -> Class {
        let p = self.prime();
        a.iter().map(|&x| p.mul(x, c)).collect()
    }

    /// Cup product.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Class {
        let p = self.prime();
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate().filter(|(_, &y)| y != 0) {
                if let Some(terms) = self.cup.get(&(i, j)) {
                    let c = p.mul(x, y);
                    for &(k, z) in terms {
                        out[k] = p.add(out[k], p.mul(c, z));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u32], e: u32) -> Class {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Action of a single letter.
    pub fn act(&self, l: Letter, a: &[u32]) -> Class {
        let p = self.prime();
        let mut out = self.zero();
        let Some(per) = self.ops.get(&l) else { return out };
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            if let Some(terms) = per.get(&i) {
                for &(k, z) in terms {
                    out[k] = p.add(out[k], p.mul(x, z));
                }
            }
        }
        out
    }

    /// Action of a word, rightmost letter first.
    pub fn act_word(&self, word: &[Letter], a: &[u32]) -> Class {
        word.iter().rev().fold(a.to_vec(), |acc, &l| self.act(l, &acc))
    }

    /// Action of an element of the Steenrod algebra.
    pub fn act_element(&self, x: &AlgebraElement, a: &[u32]) -> Class {
        x.terms().fold(self.zero(), |acc, (m, c)| {
            self.add(&acc, &self.scale(&self.act_word(m.letters(), a), c))
        })
    }

    /// Homogeneous component of a class.
    pub fn part(&self, a: &[u32], degree: i32) -> Class {
        let mut out = self.zero();
        for i in self.indices_in(degree) {
            out[i] = a[i];
        }
        out
    }

    /// `<a, [M]>`: the coefficient of the top class.
    pub fn evaluate(&self, a: &[u32]) -> u32 {
        a[self.fundamental_index()]
    }

    /// `<a b, [M]>`.
    pub fn pairing(&self, a: &[u32], b: &[u32]) -> u32 {
        self.evaluate(&self.mul(a, b))
    }

    /// The matrix of the pairing `H^d x H^(n-d) -> F_p`, rows indexed by `H^d`.
    pub fn pairing_matrix(&self, d: i32) -> Matrix {
        let rows: Vec<Vec<u32>> = self
            .indices_in(d)
            .map(|i| {
                self.indices_in(self.n - d)
                    .map(|j| self.pairing(&self.basis_class(i), &self.basis_class(j)))
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            Matrix::zeros(0, self.space.dim(self.n - d))
        } else {
            Matrix::from_rows(rows)
        }
    }

    /// The unique `v` in `H^d` with `<v x, [M]> = phi(x)` for every basis `x` of `H^(n-d)`.
    pub fn represent(&self, d: i32, phi: impl Fn(usize) -> u32) -> Result<Class> {
        let p = self.prime();
        let mut out = self.zero();
        let rows = self.indices_in(d);
        let cols: Vec<usize> = self.indices_in(self.n - d).collect();
        if rows.is_empty() && cols.is_empty() {
            return Ok(out);
        }
        let m = self.pairing_matrix(d);
        // solve m^T c = phi
        let inv = m.transpose().inverse(p).ok_or(Error::DegeneratePairing(d))?;
        let rhs: Vec<u32> = cols.iter().map(|&j| phi(j)).collect();
        let c = inv.apply(p, &rhs);
        for (i, x) in rows.zip(c) {
            out[i] = x;
        }
        Ok(out)
    }

    /// Human-readable form, e.g. `x^2 + x^4`; zero prints as `0`.
    pub fn format(&self, a: &[u32]) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| match x {
                1 => self.basis_name(i).to_string(),
                x => format!("{x} {}", self.basis_name(i)),
            })
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// The cohomology as a module over `spec` (generator actions only).
    pub fn module(&self, spec: SubalgebraSpec) -> Result<FiniteModule> {
        let p = self.prime();
        if spec.p != p {
            return Err(Error::PrimeMismatch(p.value(), spec.p.value()));
        }
        let mut m = FiniteModule::new(self.space.clone(), spec)?;
        for g in spec.generators_through(self.n.max(0) as u32) {
            for d in self.space.degrees() {
                let t = d + g.degree(p) as i32;
                if self.space.dim(t) == 0 {
                    continue;
                }
                let mut mat = Matrix::zeros(self.space.dim(t), self.space.dim(d));
                for (col, i) in self.indices_in(d).enumerate() {
                    let v = self.act(g, &self.basis_class(i));
                    for (row, k) in self.indices_in(t).enumerate() {
                        mat.set(row, col, v[k]);
                    }
                }
                m.set_action(g, d, mat)?;
            }
        }
        Ok(m)
    }

    /// Check the ring axioms, the Poincaré pairing, instability, the Cartan
    /// formula and that the letter actions form a module. Returns the list of
    /// violations (empty when valid).
    pub fn validate(&self) -> Vec<String> {
        let p = self.prime();
        let n = self.dim();
        let mut out = Vec::new();
        let b = |i: usize| self.basis_class(i);
        let name = |i: usize| self.basis_name(i).to_string();

        for i in 0..n {
            for j in 0..n {
                let ab = self.mul(&b(i), &b(j));
                let ba = self.mul(&b(j), &b(i));
                let sign = p.sign(self.degree_of(i) as i64 * self.degree_of(j) as i64);
                if ab != self.scale(&ba, sign) {
                    out.push(format!("{} {} is not graded-commutative", name(i), name(j)));
                }
                for k in 0..n {
                    if self.degree_of(i) + self.degree_of(j) + self.degree_of(k) > self.n {
                        continue;
                    }
                    let l = self.mul(&ab, &b(k));
                    let r = self.mul(&b(i), &self.mul(&b(j), &b(k)));
                    if l != r {
                        out.push(format!("({} {}) {} != {} ({} {})", name(i), name(j), name(k), name(i), name(j), name(k)));
                    }
                }
            }
        }
        for d in 0..=self.n {
            let m = self.pairing_matrix(d);
            if m.rows() != m.cols() || !m.is_invertible(p) {
                out.push(format!("pairing H^{d} x H^{} is degenerate", self.n - d));
            }
        }

        let letters = letters_through(p, self.n);
        for i in 0..n {
            let d = self.degree_of(i);
            let x = b(i);
            for &l in &letters {
                let v = self.act(l, &x);
                match l {
                    Letter::Sq(k) if k as i32 == d && v != self.mul(&x, &x) => {
                        out.push(format!("Sq{k} {} is not the square", name(i)));
                    }
                    Letter::P(s) if 2 * s as i32 == d && v != self.pow(&x, p.value()) => {
                        out.push(format!("P{s} {} is not the p-th power", name(i)));
                    }
                    Letter::Sq(k) if k as i32 > d && v.iter().any(|&c| c != 0) => {
                        out.push(format!("Sq{k} {} should vanish", name(i)));
                    }
                    Letter::P(s) if 2 * s as i32 > d && v.iter().any(|&c| c != 0) => {
                        out.push(format!("P{s} {} should vanish", name(i)));
                    }
                    _ => {}
                }
            }
        }

        for i in 0..n {
            for j in 0..n {
                if self.degree_of(i) + self.degree_of(j) > self.n {
                    continue;
                }
                let (x, y) = (b(i), b(j));
                let xy = self.mul(&x, &y);
                for &l in &letters {
                    let lhs = self.act(l, &xy);
                    let rhs = self.cartan(l, &x, self.degree_of(i), &y, |c| self.act_total(c));
                    if lhs != rhs {
                        out.push(format!("Cartan formula fails for {l} on {} {}", name(i), name(j)));
                    }
                }
            }
        }

        let full = SubalgebraSpec::full(p);
        match self.module(full) {
            Ok(m) => match m.validate(&full) {
                Ok(v) => out.extend(v),
                Err(e) => out.push(e.to_string()),
            },
            Err(e) => out.push(e.to_string()),
        }
        out
    }

    /// Actions of every letter on `c`, including the identity under key `None`.
    fn act_total(&self, c: &[u32]) -> BTreeMap<Option<Letter>, Class> {
        let mut out = BTreeMap::new();
        out.insert(None, c.to_vec());
        for l in letters_through(self.prime(), self.n) {
            out.insert(Some(l), self.act(l, c));
        }
        out
    }

    /// Right side of the Cartan formula for `l(x y)`, where the action on `y`
    /// is read from `second` (keyed by letter, `None` the identity).
    pub(crate) fn cartan(
        &self,
        l: Letter,
        x: &[u32],
        x_degree: i32,
        y: &[u32],
        second: impl Fn(&[u32]) -> BTreeMap<Option<Letter>, Class>,
    ) -> Class {
        let p = self.prime();
        let ys = second(y);
        let get = |k: Option<Letter>| ys.get(&k).cloned().unwrap_or_else(|| self.zero());
        let mut out = self.zero();
        match l {
            Letter::Sq(i) | Letter::P(i) => {
                let make = |a: u32| match (a, l) {
                    (0, _) => None,
                    (a, Letter::Sq(_)) => Some(Letter::Sq(a)),
                    (a, _) => Some(Letter::P(a)),
                };
                for a in 0..=i {
                    let left = match make(a) {
                        None => x.to_vec(),
                        Some(la) => self.act(la, x),
                    };
                    out = self.add(&out, &self.mul(&left, &get(make(i - a))));
                }
            }
            Letter::Beta => {
                out = self.mul(&self.act(Letter::Beta, x), &get(None));
                let sign = p.sign(x_degree as i64);
                out = self.add(&out, &self.scale(&self.mul(x, &get(Some(Letter::Beta))), sign));
            }
        }
        out
    }

    /// Operations `g: H^(n-|g|) -> H^n` for each generator of `spec`, with
    /// whether each vanishes.
    pub fn top_op_vanishing(&self, spec: &SubalgebraSpec) -> Vec<(Letter, bool)> {
        let p = self.prime();
        spec.generators_through(self.n.max(0) as u32)
            .into_iter()
            .map(|g| {
                let d = self.n - g.degree(p) as i32;
                let vanishes = self.indices_in(d).all(|i| self.evaluate(&self.act(g, &self.basis_class(i))) == 0);
                (g, vanishes)
            })
            .collect()
    }
}

pub fn top_op_vanishing(r: &PoincareRing, spec: &SubalgebraSpec) -> Vec<(Letter, bool)> {
    r.top_op_vanishing(spec)
}

/// `F_p[x]/(x^(m+1))` with `|x| = e`, basis `1, x, x^2, ...`, and letter
/// actions given by `op(letter, j)` as the coefficient of the appropriate
/// power in `letter(x^j)`.
pub fn truncated_polynomial(
    name: impl Into<String>,
    p: Prime,
    e: i32,
    m: i32,
    op: impl Fn(Letter, i32) -> u32,
) -> Result<PoincareRing> {
    let mut space = GradedSpace::new(p);
    for j in 0..=m {
        let nm = match j {
            0 => "1".to_string(),
            1 => "x".to_string(),
            j => format!("x^{j}"),
        };
        space.push(nm, e * j)?;
    }
    let mut r = PoincareRing::new(name, space, e * m)?;
    for i in 0..=m {
        for j in 0..=m - i {
            r.set_product(i as usize, j as usize, r.basis_class((i + j) as usize))?;
        }
    }
    for l in letters_through(p, e * m) {
        let ld = l.degree(p) as i32;
        if ld % e != 0 {
            continue;
        }
        for j in 0..=m - ld / e {
            let c = op(l, j);
            let v = r.scale(&r.basis_class((j + ld / e) as usize), c);
            r.set_op(l, j as usize, v)?;
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(n: i32) -> PoincareRing {
        let two = Prime::TWO;
        truncated_polynomial(format!("RP^{n}"), two, 1, n, |l, j| match l {
            Letter::Sq(i) => two.binomial(j as i64, i as i64),
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn rp_ring_is_valid() {
        for n in [1, 2, 5, 8] {
            assert_eq!(rp(n).validate(), Vec::<String>::new(), "RP^{n}");
        }
    }

    #[test]
    fn broken_cartan_is_reported() {
        let mut r = rp(4);
        r.set_op(Letter::Sq(1), 2, r.basis_class(3)).unwrap();
        assert!(r.validate().iter().any(|v| v.contains("Cartan")));
    }

    #[test]
    fn top_operations_of_rp11() {
        let r = rp(11);
        let v = r.top_op_vanishing(&SubalgebraSpec::new(Prime::TWO, 2));
        assert_eq!(v, vec![(Letter::Sq(1), true), (Letter::Sq(2), true), (Letter::Sq(4), false)]);
    }

    #[test]
    fn complete_ops_recovers_letters() {
        let r = rp(9);
        let mut s = r.clone();
        for l in letters_through(Prime::TWO, 9) {
            for a in 0..s.dim() {
                s.set_op(l, a, s.zero()).unwrap();
            }
        }
        for g in [Letter::Sq(1), Letter::Sq(2), Letter::Sq(4), Letter::Sq(8)] {
            for a in 0..s.dim() {
                s.set_op(g, a, r.act(g, &r.basis_class(a))).unwrap();
            }
        }
        s.complete_ops(&[Letter::Sq(1), Letter::Sq(2), Letter::Sq(4), Letter::Sq(8)]).unwrap();
        assert_eq!(s, r);
    }
}
