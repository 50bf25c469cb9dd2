//! Virtual bundles over Poincaré rings and their Thom modules.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{classes, letters_through, Class, PoincareRing};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::module::{FiniteModule, GradedSpace};
use crate::steenrod::{antipode, AlgebraElement, Letter, SubalgebraSpec};

/// Characteristic data of a virtual bundle `xi` of rank `r`: for each letter
/// `t` the class `c_t` with `t u = c_t u` on the Thom class. At `p = 2` these
/// are the Stiefel-Whitney classes `w_i = c_(Sq^i)`; at odd primes the
/// Milnor-Wu classes `q_i = c_(P^i)` and the Bockstein class `c_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualBundle {
    base: PoincareRing,
    rank: i32,
    classes: BTreeMap<Letter, Class>,
}

impl VirtualBundle {
    pub fn trivial(base: &PoincareRing, rank: i32) -> Self {
        VirtualBundle { base: base.clone(), rank, classes: BTreeMap::new() }
    }

    fn check(base: &PoincareRing, l: Letter, c: &[u32]) -> Result<()> {
        let p = base.prime();
        if c.len() != base.dim() {
            return Err(Error::Dimension(format!("class for {l} has {} coordinates", c.len())));
        }
        let want = l.degree(p) as i32;
        if let Some(i) = (0..c.len()).find(|&i| c[i] != 0 && base.degree_of(i) != want) {
            return Err(Error::InconsistentDegrees(format!(
                "class for {l} has a term {} in degree {}, expected {want}",
                base.basis_name(i),
                base.degree_of(i)
            )));
        }
        Ok(())
    }

    /// From the classes `c_t`, one per letter; missing letters act by zero.
    pub fn from_classes(base: &PoincareRing, rank: i32, classes: BTreeMap<Letter, Class>) -> Result<Self> {
        for (&l, c) in &classes {
            if !l.is_valid_at(base.prime()) {
                return Err(Error::UnsupportedOperation(format!("{l} at p = {}", base.prime())));
            }
            Self::check(base, l, c)?;
        }
        let classes = classes.into_iter().filter(|(_, c)| c.iter().any(|&x| x != 0)).collect();
        Ok(VirtualBundle { base: base.clone(), rank, classes })
    }

    /// From a total Stiefel-Whitney class `1 + w_1 + w_2 + ...` at `p = 2`.
    pub fn from_total_sw(base: &PoincareRing, rank: i32, w: &[u32]) -> Result<Self> {
        let p = base.prime();
        if !p.is_two() {
            return Err(Error::UnsupportedPrime { family: "Stiefel-Whitney data".into(), prime: p.value() });
        }
        Self::from_total(base, rank, w, Letter::Sq)
    }

    /// From a total Milnor-Wu class `1 + q_1 + q_2 + ...` and a Bockstein
    /// class, at an odd prime.
    pub fn from_milnor_wu(base: &PoincareRing, rank: i32, q: &[u32], beta: Class) -> Result<Self> {
        let p = base.prime();
        if p.is_two() {
            return Err(Error::UnsupportedPrime { family: "Milnor-Wu data".into(), prime: 2 });
        }
        let mut b = Self::from_total(base, rank, q, Letter::P)?;
        Self::check(base, Letter::Beta, &beta)?;
        if beta.iter().any(|&x| x != 0) {
            b.classes.insert(Letter::Beta, beta);
        }
        Ok(b)
    }

    fn from_total(base: &PoincareRing, rank: i32, total: &[u32], make: fn(u32) -> Letter) -> Result<Self> {
        let p = base.prime();
        if total.len() != base.dim() {
            return Err(Error::Dimension(format!("total class has {} coordinates", total.len())));
        }
        if total[0] != 1 {
            return Err(Error::NonUnitConstant);
        }
        let mut classes = BTreeMap::new();
        let mut covered = vec![false; base.dim()];
        covered[0] = true;
        for l in letters_through(p, base.dimension()) {
            let (Letter::Sq(i) | Letter::P(i)) = l else { continue };
            let l = make(i);
            let part = base.part(total, l.degree(p) as i32);
            for (k, &x) in part.iter().enumerate() {
                if x != 0 {
                    covered[k] = true;
                }
            }
            classes.insert(l, part);
        }
        if let Some(k) = (0..total.len()).find(|&k| total[k] != 0 && !covered[k]) {
            return Err(Error::InconsistentDegrees(format!(
                "total class has a term {} in degree {}, which carries no class",
                base.basis_name(k),
                base.degree_of(k)
            )));
        }
        Self::from_classes(base, rank, classes)
    }

    /// The tangent bundle, from the Wu classes.
    pub fn tangent(base: &PoincareRing) -> Result<Self> {
        let v = classes::wu_classes(base)?;
        let n = base.dimension();
        if base.prime().is_two() {
            Self::from_total_sw(base, n, &classes::sw_from_wu(base, &v)?)
        } else {
            Self::from_milnor_wu(base, n, &classes::milnor_wu_total(base, &v)?, base.zero())
        }
    }

    /// The stable normal bundle `-tau`: `<c_t x, [M]> = <chi(t) x, [M]>` for
    /// every letter `t`.
    pub fn negative_tangent(base: &PoincareRing) -> Result<Self> {
        let p = base.prime();
        let mut classes = BTreeMap::new();
        for l in letters_through(p, base.dimension()) {
            let chi = antipode(&AlgebraElement::letter(p, l));
            let c = base.represent(l.degree(p) as i32, |j| base.evaluate(&base.act_element(&chi, &base.basis_class(j))))?;
            classes.insert(l, c);
        }
        Self::from_classes(base, -base.dimension(), classes)
    }

    pub fn base(&self) -> &PoincareRing {
        &self.base
    }

    pub fn rank(&self) -> i32 {
        self.rank
    }

    /// `c_t`, zero when unset.
    pub fn class(&self, l: Letter) -> Class {
        self.classes.get(&l).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// `1 + sum_i w_i` (resp. `1 + sum_i q_i`).
    pub fn total_class(&self) -> Class {
        let r = &self.base;
        self.classes
            .iter()
            .filter(|(l, _)| !matches!(l, Letter::Beta))
            .fold(r.one(), |acc, (_, c)| r.add(&acc, c))
    }

    fn on_thom_class(&self) -> BTreeMap<Option<Letter>, Class> {
        let mut out: BTreeMap<Option<Letter>, Class> = BTreeMap::new();
        out.insert(None, self.base.one());
        for (&l, c) in &self.classes {
            out.insert(Some(l), c.clone());
        }
        out
    }

    /// `t(x u)` expressed as a class `y` with `t(x u) = y u`, via the Cartan formula.
    pub fn act_on_thom(&self, l: Letter, x: &[u32], x_degree: i32) -> Class {
        let u = self.on_thom_class();
        self.base.cartan(l, x, x_degree, &self.base.one(), |_| u.clone())
    }
}

/// The cohomology of the Thom spectrum: free of rank one over the base on a
/// class `u` of degree `rank`.
#[derive(Clone, Debug)]
pub struct ThomModule {
    pub module: FiniteModule,
    pub rank: i32,
}

fn thom_name(x: &str) -> String {
    if x == "1" {
        "u".to_string()
    } else {
        format!("{x}.u")
    }
}

pub fn thom_module(xi: &VirtualBundle, spec: &SubalgebraSpec) -> Result<ThomModule> {
    let r = xi.base();
    let p = r.prime();
    if spec.p != p {
        return Err(Error::PrimeMismatch(p.value(), spec.p.value()));
    }
    let mut space = GradedSpace::new(p);
    for i in 0..r.dim() {
        space.push(thom_name(r.basis_name(i)), r.degree_of(i) + xi.rank())?;
    }
    let mut m = FiniteModule::new(space, *spec)?;
    for g in spec.generators_through(r.dimension().max(0) as u32) {
        let gd = g.degree(p) as i32;
        for d in r.space().degrees() {
            let t = d + gd;
            if r.space().dim(t) == 0 {
                continue;
            }
            let mut mat = Matrix::zeros(r.space().dim(t), r.space().dim(d));
            for (col, i) in r.indices_in(d).enumerate() {
                let y = xi.act_on_thom(g, &r.basis_class(i), d);
                for (row, k) in r.indices_in(t).enumerate() {
                    mat.set(row, col, y[k]);
                }
            }
            m.set_action(g, d + xi.rank(), mat)?;
        }
    }
    Ok(ThomModule { module: m, rank: xi.rank() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThomLinearity {
    pub linear: bool,
    pub counterexample: Option<String>,
}

/// Whether `g(x u) = g(x) u` for every generator `g` of `spec` and every
/// basis class `x`.
pub fn thom_iso_is_linear(xi: &VirtualBundle, spec: &SubalgebraSpec) -> ThomLinearity {
    let r = xi.base();
    for g in spec.generators_through(r.dimension().max(0) as u32) {
        for i in 0..r.dim() {
            let x = r.basis_class(i);
            let twisted = xi.act_on_thom(g, &x, r.degree_of(i));
            let plain = r.act(g, &x);
            if twisted != plain {
                let text = if i == 0 {
                    format!("{g} u = ({}) u is nonzero", r.format(&twisted))
                } else {
                    let diff = r.sub(&twisted, &plain);
                    format!("{g}({}) differs from ({g} {}) u by ({}) u", thom_name(r.basis_name(i)), r.basis_name(i), r.format(&diff))
                };
                return ThomLinearity { linear: false, counterexample: Some(text) };
            }
        }
    }
    ThomLinearity { linear: true, counterexample: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use crate::manifold::{inverse_total_class, truncated_polynomial};

    fn rp(n: i32) -> PoincareRing {
        let two = Prime::TWO;
        truncated_polynomial(format!("RP^{n}"), two, 1, n, |l, j| match l {
            Letter::Sq(i) => two.binomial(j as i64, i as i64),
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn normal_bundle_is_inverse_of_tangent() {
        for n in [2, 5, 7, 11] {
            let r = rp(n);
            let t = VirtualBundle::tangent(&r).unwrap();
            let nu = VirtualBundle::negative_tangent(&r).unwrap();
            assert_eq!(nu.total_class(), inverse_total_class(&r, &t.total_class()).unwrap(), "RP^{n}");
        }
    }

    #[test]
    fn thom_class_of_rp11() {
        let r = rp(11);
        let nu = VirtualBundle::negative_tangent(&r).unwrap();
        assert!(thom_iso_is_linear(&nu, &SubalgebraSpec::new(Prime::TWO, 1)).linear);
        let bad = thom_iso_is_linear(&nu, &SubalgebraSpec::new(Prime::TWO, 2));
        assert_eq!(bad.counterexample.as_deref(), Some("Sq4 u = (x^4) u is nonzero"));
    }

    #[test]
    fn rp5_sq2_on_thom_class() {
        let r = rp(5);
        let nu = VirtualBundle::negative_tangent(&r).unwrap();
        let th = thom_module(&nu, &SubalgebraSpec::new(Prime::TWO, 1)).unwrap();
        assert_eq!(th.module.space().bottom(), Some(-5));
        // Sq^2 u = x^2 u
        assert_eq!(th.module.action(Letter::Sq(2), -5).get(0, 0), 1);
    }

    #[test]
    fn inconsistent_degrees_rejected() {
        let r = rp(3);
        let mut classes = BTreeMap::new();
        classes.insert(Letter::Sq(2), r.basis_class(1));
        assert!(matches!(VirtualBundle::from_classes(&r, 0, classes), Err(Error::InconsistentDegrees(_))));
    }
}
