//! Line-oriented text format for rings and modules.
//!
//! ```text
//! # comment
//! name RP^2
//! prime 2
//! fundamental 2          # rings only
//! algebra A(2)           # modules only, default: the full algebra
//! basis x 1
//! op Sq1 x = 1*x^2
//! cup x x = x^2
//! ```
//!
//! Unlisted actions and products are zero. In rings only the generators
//! need to be given; the other letters are derived from them, and `cup a b`
//! also sets `cup b a` by graded commutativity unless that is listed too.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::manifold::{letters_through, PoincareRing};
use crate::module::{FiniteModule, GradedSpace};
use crate::steenrod::{Letter, Level, SubalgebraSpec};

#[derive(Clone, Debug)]
pub enum Loaded {
    Ring(PoincareRing),
    Module(FiniteModule),
}

pub fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)?;
    load_str(&text)
}

type Terms = Vec<(u32, String)>;

struct Parsed {
    name: Option<String>,
    prime: Prime,
    fundamental: Option<i32>,
    algebra: Option<SubalgebraSpec>,
    space: GradedSpace,
    ops: Vec<(usize, Letter, String, Terms)>,
    cups: Vec<(usize, String, String, Terms)>,
}

fn parse_terms(line: usize, p: Prime, s: &str) -> Result<Terms> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('+')
        .map(|t| {
            let t = t.trim();
            match t.split_once('*') {
                Some((c, name)) => {
                    let c: i64 = c.trim().parse().map_err(|_| Error::parse(line, format!("bad coefficient in {t:?}")))?;
                    Ok((p.reduce(c), name.trim().to_string()))
                }
                None if t.is_empty() => Err(Error::parse(line, "empty term")),
                None => Ok((1, t.to_string())),
            }
        })
        .collect()
}

fn parse_algebra(line: usize, p: Prime, s: &str) -> Result<SubalgebraSpec> {
    if s == "A" {
        return Ok(SubalgebraSpec::full(p));
    }
    let k = s
        .strip_prefix("A(")
        .and_then(|r| r.split(')').next())
        .and_then(|k| k.parse::<u32>().ok())
        .ok_or_else(|| Error::parse(line, format!("unknown algebra {s:?}")))?;
    Ok(SubalgebraSpec::new(p, k))
}

fn parse(text: &str) -> Result<Parsed> {
    let mut name = None;
    let mut prime = None;
    let mut fundamental = None;
    let mut algebra = None;
    let mut space: Option<GradedSpace> = None;
    let mut ops = Vec::new();
    let mut cups = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        let need_prime = || prime.ok_or_else(|| Error::parse(line, "`prime` must come first"));
        match key {
            "name" => name = Some(rest.to_string()),
            "prime" => {
                let p: u32 = rest.parse().map_err(|_| Error::parse(line, format!("bad prime {rest:?}")))?;
                let p = Prime::new(p).map_err(|e| Error::parse(line, e.to_string()))?;
                prime = Some(p);
                space = Some(GradedSpace::new(p));
            }
            "fundamental" => {
                fundamental = Some(rest.parse().map_err(|_| Error::parse(line, format!("bad degree {rest:?}")))?);
            }
            "algebra" => algebra = Some(parse_algebra(line, need_prime()?, rest)?),
            "basis" => {
                need_prime()?;
                let mut it = rest.split_whitespace();
                let (Some(n), Some(d), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::parse(line, "expected `basis <name> <degree>`"));
                };
                let d: i32 = d.parse().map_err(|_| Error::parse(line, format!("bad degree {d:?}")))?;
                let sp = space.as_mut().expect("set with prime");
                sp.push(n, d).map_err(|e| Error::parse(line, e.to_string()))?;
            }
            "op" | "cup" => {
                let p = need_prime()?;
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| Error::parse(line, "missing `=`"))?;
                let mut it = lhs.split_whitespace();
                let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::parse(line, format!("expected `{key} <a> <b> = ...`")));
                };
                let terms = parse_terms(line, p, rhs)?;
                if key == "op" {
                    let l = Letter::parse_token(a)
                        .filter(|l| l.is_valid_at(p))
                        .ok_or_else(|| Error::parse(line, format!("unknown operation {a:?} at p = {p}")))?;
                    ops.push((line, l, b.to_string(), terms));
                } else {
                    cups.push((line, a.to_string(), b.to_string(), terms));
                }
            }
            _ => return Err(Error::parse(line, format!("unknown keyword {key:?}"))),
        }
    }
    let prime = prime.ok_or_else(|| Error::parse(0, "missing `prime` line"))?;
    Ok(Parsed { name, prime, fundamental, algebra, space: space.expect("set with prime"), ops, cups })
}

fn lookup(space: &GradedSpace, line: usize, name: &str) -> Result<(i32, usize)> {
    space.index_of(name).ok_or_else(|| Error::parse(line, format!("unknown basis element {name:?}")))
}

fn build_ring(parsed: Parsed, n: i32) -> Result<PoincareRing> {
    let p = parsed.prime;
    let name = parsed.name.clone().unwrap_or_else(|| "M".to_string());
    let mut r = PoincareRing::new(name, parsed.space.clone(), n)?;
    let class_of = |r: &PoincareRing, line: usize, terms: &Terms| -> Result<Vec<u32>> {
        let mut c = r.zero();
        for (k, nm) in terms {
            let i = r.index_of(nm).ok_or_else(|| Error::parse(line, format!("unknown basis element {nm:?}")))?;
            c[i] = p.add(c[i], *k);
        }
        Ok(c)
    };
    let mut listed = BTreeSet::new();
    for (line, a, b, _) in &parsed.cups {
        let ia = r.index_of(a).ok_or_else(|| Error::parse(*line, format!("unknown basis element {a:?}")))?;
        let ib = r.index_of(b).ok_or_else(|| Error::parse(*line, format!("unknown basis element {b:?}")))?;
        listed.insert((ia, ib));
    }
    for (line, a, b, terms) in &parsed.cups {
        let (ia, ib) = (r.index_of(a).unwrap(), r.index_of(b).unwrap());
        let v = class_of(&r, *line, terms)?;
        r.set_product(ia, ib, v.clone()).map_err(|e| Error::parse(*line, e.to_string()))?;
        if !listed.contains(&(ib, ia)) {
            let sign = p.sign(r.degree_of(ia) as i64 * r.degree_of(ib) as i64);
            r.set_product(ib, ia, r.scale(&v, sign)).map_err(|e| Error::parse(*line, e.to_string()))?;
        }
    }
    let mut given = BTreeSet::new();
    for (line, l, a, terms) in &parsed.ops {
        let ia = r.index_of(a).ok_or_else(|| Error::parse(*line, format!("unknown basis element {a:?}")))?;
        let v = class_of(&r, *line, terms)?;
        r.set_op(*l, ia, v).map_err(|e| Error::parse(*line, e.to_string()))?;
        given.insert(*l);
    }
    let gens = SubalgebraSpec::full(p).generators_through(n.max(0) as u32);
    let given: Vec<Letter> = given.into_iter().chain(gens).collect();
    r.complete_ops(&given)?;
    let problems = r.validate();
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(r)
}

fn build_module(parsed: Parsed) -> Result<FiniteModule> {
    let p = parsed.prime;
    let spec = parsed.algebra.unwrap_or_else(|| SubalgebraSpec::full(p));
    let space = parsed.space;
    let mut m = FiniteModule::new(space.clone(), spec)?;
    for (line, l, a, terms) in &parsed.ops {
        let (d, col) = lookup(&space, *line, a)?;
        let t = d + l.degree(p) as i32;
        for (k, nm) in terms {
            let (td, row) = lookup(&space, *line, nm)?;
            if td != t {
                return Err(Error::parse(*line, format!("{l} {a} lands in degree {t}, but {nm} has degree {td}")));
            }
            let mut mat = m.action(*l, d);
            mat.set(row, col, p.add(mat.get(row, col), *k));
            m.set_action(*l, d, mat).map_err(|e| Error::parse(*line, e.to_string()))?;
        }
    }
    let problems = m.validate(&spec)?;
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(m)
}

pub fn load_str(text: &str) -> Result<Loaded> {
    let parsed = parse(text)?;
    if let Some((line, ..)) = parsed.cups.first().filter(|_| parsed.fundamental.is_none()) {
        return Err(Error::parse(*line, "`cup` needs a `fundamental` line"));
    }
    match parsed.fundamental {
        Some(n) => build_ring(parsed, n).map(Loaded::Ring),
        None => build_module(parsed).map(Loaded::Module),
    }
}

fn write_terms(out: &mut String, names: impl Iterator<Item = (u32, String)>) {
    let terms: Vec<String> = names.filter(|(c, _)| *c != 0).map(|(c, n)| format!("{c}*{n}")).collect();
    if terms.is_empty() {
        out.push('0');
    } else {
        out.push_str(&terms.join(" + "));
    }
}

/// Text form of a ring: generator actions and products `a b` with `a <= b`.
pub fn save_ring(r: &PoincareRing) -> String {
    let p = r.prime();
    let mut out = String::new();
    writeln!(out, "name {}", r.name()).unwrap();
    writeln!(out, "prime {p}").unwrap();
    writeln!(out, "fundamental {}", r.dimension()).unwrap();
    for i in 0..r.dim() {
        writeln!(out, "basis {} {}", r.basis_name(i), r.degree_of(i)).unwrap();
    }
    let gens = SubalgebraSpec::full(p).generators_through(r.dimension().max(0) as u32);
    for l in letters_through(p, r.dimension()).into_iter().filter(|l| gens.contains(l)) {
        for i in 0..r.dim() {
            let v = r.act(l, &r.basis_class(i));
            if v.iter().any(|&c| c != 0) {
                write!(out, "op {} {} = ", l.token(), r.basis_name(i)).unwrap();
                write_terms(&mut out, v.iter().enumerate().map(|(k, &c)| (c, r.basis_name(k).to_string())));
                out.push('\n');
            }
        }
    }
    for a in 1..r.dim() {
        for b in a..r.dim() {
            let v = r.mul(&r.basis_class(a), &r.basis_class(b));
            if v.iter().any(|&c| c != 0) {
                write!(out, "cup {} {} = ", r.basis_name(a), r.basis_name(b)).unwrap();
                write_terms(&mut out, v.iter().enumerate().map(|(k, &c)| (c, r.basis_name(k).to_string())));
                out.push('\n');
            }
        }
    }
    out
}

pub fn save_module(m: &FiniteModule) -> String {
    let p = m.prime();
    let mut out = String::new();
    writeln!(out, "prime {p}").unwrap();
    match m.spec().level {
        Level::Finite(k) => writeln!(out, "algebra A({k})").unwrap(),
        Level::Full => writeln!(out, "algebra A").unwrap(),
    }
    let sp = m.space();
    let degrees: Vec<i32> = sp.degrees().collect();
    for &d in &degrees {
        for n in sp.names(d) {
            writeln!(out, "basis {n} {d}").unwrap();
        }
    }
    for g in m.generators() {
        for &d in &degrees {
            let t = d + g.degree(p) as i32;
            let mat: Matrix = m.action(g, d);
            for (col, src) in sp.names(d).iter().enumerate() {
                let terms: Vec<(u32, String)> =
                    sp.names(t).iter().enumerate().map(|(row, n)| (mat.get(row, col), n.clone())).collect();
                if terms.iter().any(|(c, _)| *c != 0) {
                    write!(out, "op {} {src} = ", g.token()).unwrap();
                    write_terms(&mut out, terms.into_iter());
                    out.push('\n');
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{cp, hp, rp};

    #[test]
    fn point_file() {
        let Loaded::Ring(r) = load_str("prime 2\nfundamental 0\nbasis 1 0\n").unwrap() else { panic!() };
        assert_eq!(r.dim(), 1);
    }

    #[test]
    fn ring_round_trip() {
        for r in [rp(5).unwrap(), cp(4, Prime::THREE).unwrap(), hp(3, Prime::FIVE).unwrap()] {
            let Loaded::Ring(back) = load_str(&save_ring(&r)).unwrap() else { panic!() };
            assert_eq!(back, r, "{}", r.name());
        }
    }

    #[test]
    fn hand_written_rp2() {
        let text = "# RP^2\nname RP^2\nprime 2\nfundamental 2\nbasis 1 0\nbasis x 1\nbasis x^2 2\nop Sq1 x = x^2\ncup x x = 1*x^2\n";
        let Loaded::Ring(r) = load_str(text).unwrap() else { panic!() };
        assert_eq!(r, rp(2).unwrap());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = load_str("prime 2\nbasis x 1\nop Sq1 y = x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = load_str("basis x 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        let e = load_str("prime 2\nfrobnicate\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }

    #[test]
    fn module_round_trip_and_validation() {
        let m = rp(4).unwrap().module(SubalgebraSpec::new(Prime::TWO, 1)).unwrap();
        let Loaded::Module(back) = load_str(&save_module(&m)).unwrap() else { panic!() };
        assert_eq!(back, m);
        let bad = "prime 2\nalgebra A(0)\nbasis a 0\nbasis b 1\nbasis c 2\nop Sq1 a = b\nop Sq1 b = c\n";
        assert!(matches!(load_str(bad), Err(Error::Validation(v)) if v[0] == "Sq1 Sq1 = 0 fails at degree 0"));
    }
}
