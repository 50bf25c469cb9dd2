//! Isomorphism testing for finite graded modules.
//!
//! Modules are first compared through cheap invariants (dimensions and ranks
//! of short words). If those agree, the space of degree-preserving module maps
//! is computed exactly as a kernel and searched for an element that is
//! invertible in every degree. The equations split into independent blocks of
//! degrees, and each block is searched on its own.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{FiniteModule, WordCache};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::steenrod::{word_degree, word_to_string, Letter, SubalgebraSpec};

pub const DEFAULT_WORD_LENGTH: usize = 4;
/// Largest number of candidate maps examined before giving up.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsoOptions {
    pub word_length: usize,
    pub budget: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { word_length: DEFAULT_WORD_LENGTH, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub word: Vec<Letter>,
    pub source: i32,
    pub target: i32,
    pub rank: usize,
}

/// Isomorphism invariants: dimensions per degree and ranks of every word of
/// length at most `L` in every degree where source and target are nonzero.
/// Entries are ordered by word (shorter first, then generator order) and,
/// within a word, by descending target degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dims: BTreeMap<i32, usize>,
    pub ranks: Vec<RankEntry>,
}

fn words_up_to(gens: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| gens.iter().map(move |&g| {
                let mut v = w.clone();
                v.push(g);
                v
            }))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn fingerprint(m: &FiniteModule, gens: &[Letter], word_length: usize) -> Fingerprint {
    let p = m.prime();
    let space = m.space();
    let dims = space.degrees().map(|d| (d, space.dim(d))).collect();
    let mut cache = WordCache::new(m);
    let mut ranks = Vec::new();
    for word in words_up_to(gens, word_length) {
        let wd = word_degree(p, &word) as i32;
        for d in space.degrees().collect::<Vec<_>>().into_iter().rev() {
            if space.dim(d + wd) == 0 {
                continue;
            }
            let rank = cache.get(&word, d).rank(p);
            ranks.push(RankEntry { word: word.clone(), source: d, target: d + wd, rank });
        }
    }
    Fingerprint { dims, ranks }
}

/// Why two modules are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distinction {
    Dimension { degree: i32, left: usize, right: usize },
    Rank { word: String, source: i32, target: i32, left: usize, right: usize },
    /// Fingerprints agree but no module map is invertible in every degree.
    NoInvertibleMap,
}

impl fmt::Display for Distinction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinction::Dimension { degree, left, right } => {
                write!(f, "degree {degree} has dimension {left} and {right}")
            }
            Distinction::Rank { word, source, target, left, right } => {
                write!(f, "{word}: H^{source} -> H^{target} has rank {left} and {right}")
            }
            Distinction::NoInvertibleMap => f.write_str("no module map is invertible in every degree"),
        }
    }
}

/// Degreewise matrices of a module isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub maps: BTreeMap<i32, Matrix>,
}

impl IsoWitness {
    /// Re-check: every map invertible and commuting with each generator.
    pub fn verify(&self, from: &FiniteModule, to: &FiniteModule, gens: &[Letter]) -> bool {
        let p = from.prime();
        let degrees: BTreeSet<i32> = from.space().degrees().chain(to.space().degrees()).collect();
        for &d in &degrees {
            let Some(f) = self.maps.get(&d) else { return false };
            if f.rows() != to.space().dim(d) || f.cols() != from.space().dim(d) || !f.is_invertible(p) {
                return false;
            }
        }
        for &g in gens {
            let gd = g.degree(p) as i32;
            for &d in &degrees {
                let Some(ft) = self.maps.get(&(d + gd)) else { continue };
                let lhs = to.action(g, d).mul(p, &self.maps[&d]);
                let rhs = ft.mul(p, &from.action(g, d));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    Isomorphic { witness: IsoWitness },
    NotIsomorphic { distinction: Distinction, explanation: String },
    Inconclusive { search_space: u64 },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }

    pub fn is_not_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::NotIsomorphic { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, IsoVerdict::Inconclusive { .. })
    }

    pub fn explanation(&self) -> String {
        match self {
            IsoVerdict::Isomorphic { .. } => "isomorphic".to_string(),
            IsoVerdict::NotIsomorphic { explanation, .. } => explanation.clone(),
            IsoVerdict::Inconclusive { search_space } => {
                format!("inconclusive: {search_space} candidate maps exceed the search budget")
            }
        }
    }
}

fn common_generators(m1: &FiniteModule, m2: &FiniteModule, spec: &SubalgebraSpec) -> Result<Vec<Letter>> {
    for m in [m1, m2] {
        if m.prime() != spec.p {
            return Err(Error::PrimeMismatch(m.prime().value(), spec.p.value()));
        }
    }
    let span = m1.space().span().max(m2.space().span());
    let gens = spec.generators_through(span);
    for m in [m1, m2] {
        let have = m.generators();
        if let Some(g) = gens.iter().find(|g| !have.contains(g) && m.space().span() >= g.degree(spec.p)) {
            return Err(Error::MissingGenerator(g.token()));
        }
    }
    Ok(gens)
}

pub fn is_isomorphic(m1: &FiniteModule, m2: &FiniteModule, spec: &SubalgebraSpec) -> Result<IsoVerdict> {
    is_isomorphic_with(m1, m2, spec, &IsoOptions::default())
}

pub fn is_isomorphic_with(
    m1: &FiniteModule,
    m2: &FiniteModule,
    spec: &SubalgebraSpec,
    opts: &IsoOptions,
) -> Result<IsoVerdict> {
    let gens = common_generators(m1, m2, spec)?;
    if let Some(distinction) = compare_fingerprints(m1, m2, &gens, opts.word_length) {
        let explanation = distinction.to_string();
        return Ok(IsoVerdict::NotIsomorphic { distinction, explanation });
    }
    Ok(search(m1, m2, &gens, opts.budget))
}

fn compare_fingerprints(m1: &FiniteModule, m2: &FiniteModule, gens: &[Letter], len: usize) -> Option<Distinction> {
    let degrees: BTreeSet<i32> = m1.space().degrees().chain(m2.space().degrees()).collect();
    for d in degrees {
        let (left, right) = (m1.space().dim(d), m2.space().dim(d));
        if left != right {
            return Some(Distinction::Dimension { degree: d, left, right });
        }
    }
    let f1 = fingerprint(m1, gens, len);
    let f2 = fingerprint(m2, gens, len);
    f1.ranks.iter().zip(&f2.ranks).find(|(a, b)| a.rank != b.rank).map(|(a, b)| Distinction::Rank {
        word: word_to_string(&a.word),
        source: a.source,
        target: a.target,
        left: a.rank,
        right: b.rank,
    })
}

/// Union-find over degrees.
fn find(parent: &mut BTreeMap<i32, i32>, x: i32) -> i32 {
    let up = parent[&x];
    if up == x {
        return x;
    }
    let root = find(parent, up);
    parent.insert(x, root);
    root
}

/// Search the space of module maps `m1 -> m2`; assumes equal dimensions.
fn search(m1: &FiniteModule, m2: &FiniteModule, gens: &[Letter], budget: u64) -> IsoVerdict {
    let p = m1.prime();
    let space = m1.space();
    let degrees: Vec<i32> = space.degrees().collect();
    let dim = |d: i32| space.dim(d);

    // degrees d and d + |g| are tied together only when g acts on both sides
    let mut parent: BTreeMap<i32, i32> = degrees.iter().map(|&d| (d, d)).collect();
    for &g in gens {
        let gd = g.degree(p) as i32;
        for &d in &degrees {
            if dim(d + gd) == 0 {
                continue;
            }
            if !m1.action(g, d).is_zero() && !m2.action(g, d).is_zero() {
                let (a, b) = (find(&mut parent, d), find(&mut parent, d + gd));
                parent.insert(a, b);
            }
        }
    }
    let mut blocks: BTreeMap<i32, Vec<i32>> = BTreeMap::new();
    for &d in &degrees {
        let r = find(&mut parent, d);
        blocks.entry(r).or_default().push(d);
    }

    let mut kernels = Vec::new();
    let mut total: u64 = 0;
    for block in blocks.values() {
        let k = block_kernel(m1, m2, gens, block);
        let count = (p.value() as u64).checked_pow(k.basis.len() as u32).unwrap_or(u64::MAX);
        total = total.saturating_add(count);
        kernels.push(k);
    }

    let mut maps = BTreeMap::new();
    let mut exhausted = false;
    for k in &kernels {
        let found = k.quick_candidates(p).find(|c| k.invertible(p, c)).or_else(|| {
            if total > budget {
                exhausted = true;
                None
            } else {
                k.enumerate(p).find(|c| k.invertible(p, c))
            }
        });
        match found {
            Some(c) => maps.extend(k.maps(p, &c)),
            None if exhausted => return IsoVerdict::Inconclusive { search_space: total },
            None => {
                let distinction = Distinction::NoInvertibleMap;
                let explanation = distinction.to_string();
                return IsoVerdict::NotIsomorphic { distinction, explanation };
            }
        }
    }
    IsoVerdict::Isomorphic { witness: IsoWitness { maps } }
}

/// The module maps supported on one block of degrees.
struct BlockKernel {
    // (degree, offset of its variables, size n of the n x n matrix)
    layout: Vec<(i32, usize, usize)>,
    basis: Vec<Vec<u32>>,
}

fn block_kernel(m1: &FiniteModule, m2: &FiniteModule, gens: &[Letter], block: &[i32]) -> BlockKernel {
    let p = m1.prime();
    let mut layout = Vec::new();
    let mut offset = 0;
    for &d in block {
        let n = m1.space().dim(d);
        layout.push((d, offset, n));
        offset += n * n;
    }
    let nvars = offset;
    let var = |d: i32, i: usize, j: usize| -> Option<usize> {
        layout.iter().find(|(e, _, _)| *e == d).map(|&(_, o, n)| o + i * n + j)
    };

    // rho2(g)_d F_d - F_{d+|g|} rho1(g)_d = 0
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &g in gens {
        let gd = g.degree(p) as i32;
        let sources: BTreeSet<i32> =
            block.iter().flat_map(|&d| [d, d - gd]).filter(|&d| m1.space().dim(d) > 0).collect();
        for d in sources {
            let t = d + gd;
            let (nd, nt) = (m1.space().dim(d), m1.space().dim(t));
            if nt == 0 {
                continue;
            }
            let (a1, a2) = (m1.action(g, d), m2.action(g, d));
            let in_d = block.contains(&d);
            let in_t = block.contains(&t);
            for i in 0..nt {
                for j in 0..nd {
                    let mut row = vec![0u32; nvars];
                    if in_d {
                        for k in 0..nd {
                            let c = a2.get(i, k);
                            if c != 0 {
                                let v = var(d, k, j).unwrap();
                                row[v] = p.add(row[v], c);
                            }
                        }
                    }
                    if in_t {
                        for k in 0..nt {
                            let c = a1.get(k, j);
                            if c != 0 {
                                let v = var(t, i, k).unwrap();
                                row[v] = p.sub(row[v], c);
                            }
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..nvars)
            .map(|i| {
                let mut e = vec![0; nvars];
                e[i] = 1;
                e
            })
            .collect()
    } else {
        Matrix::from_rows(rows).kernel(p)
    };
    BlockKernel { layout, basis }
}

impl BlockKernel {
    fn combine(&self, p: Prime, coeffs: &[u32]) -> Vec<u32> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut v = vec![0u32; n];
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = p.add(*x, p.mul(c, y));
                }
            }
        }
        v
    }

    fn matrix(&self, v: &[u32], offset: usize, n: usize) -> Matrix {
        Matrix::from_rows((0..n).map(|i| v[offset + i * n..offset + (i + 1) * n].to_vec()).collect())
    }

    fn invertible(&self, p: Prime, coeffs: &[u32]) -> bool {
        let v = self.combine(p, coeffs);
        self.layout.iter().all(|&(_, o, n)| self.matrix(&v, o, n).is_invertible(p))
    }

    fn maps(&self, p: Prime, coeffs: &[u32]) -> Vec<(i32, Matrix)> {
        let v = self.combine(p, coeffs);
        self.layout.iter().map(|&(d, o, n)| (d, self.matrix(&v, o, n))).collect()
    }

    /// Cheap first guesses: the sum of all basis vectors, then each one alone.
    fn quick_candidates(&self, _p: Prime) -> impl Iterator<Item = Vec<u32>> + '_ {
        let h = self.basis.len();
        std::iter::once(vec![1; h]).chain((0..h).map(move |i| {
            let mut c = vec![0; h];
            c[i] = 1;
            c
        }))
    }

    /// Every nonzero coefficient vector, as a mixed-radix counter.
    fn enumerate(&self, p: Prime) -> impl Iterator<Item = Vec<u32>> {
        let h = self.basis.len();
        let mut cur = vec![0u32; h];
        let mut done = h == 0;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            for x in cur.iter_mut() {
                *x += 1;
                if *x < p.value() {
                    return Some(cur.clone());
                }
                *x = 0;
            }
            done = true;
            None
        })
    }
}

/// `D m` against `m` shifted down by `n`; the explanation of a failure is
/// phrased in the degrees of `m`.
pub fn is_self_dual(m: &FiniteModule, spec: &SubalgebraSpec, n: i32) -> Result<IsoVerdict> {
    is_self_dual_with(m, spec, n, &IsoOptions::default())
}

pub fn is_self_dual_with(m: &FiniteModule, spec: &SubalgebraSpec, n: i32, opts: &IsoOptions) -> Result<IsoVerdict> {
    let dual = m.dualize()?;
    let shifted = m.shift(-n);
    let verdict = is_isomorphic_with(&dual, &shifted, spec, opts)?;
    Ok(match verdict {
        IsoVerdict::NotIsomorphic { distinction, .. } => {
            let explanation = match &distinction {
                Distinction::Dimension { degree, left, right } => {
                    format!("H^{} has dimension {right}; dual requires {left}", degree + n)
                }
                Distinction::Rank { word, source, target, left, right } => format!(
                    "{word}: H^{} -> H^{} has rank {right}; dual requires rank {left}",
                    source + n,
                    target + n
                ),
                Distinction::NoInvertibleMap => distinction.to_string(),
            };
            IsoVerdict::NotIsomorphic { distinction, explanation }
        }
        v => v,
    })
}
