//! Tangential-structure verdicts for a manifold model.

use std::fmt;

use serde::Serialize;

use super::{classes, IntegralCharData, PoincareRing};
use crate::error::Result;
use crate::field::Prime;
use crate::module::{is_self_dual_with, IsoOptions, IsoVerdict};
use crate::steenrod::{Letter, SubalgebraSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Structure {
    Orientable,
    Spin,
    String,
    #[serde(rename = "5-brane")]
    FiveBrane,
}

impl Structure {
    pub const ALL: [Structure; 4] = [Structure::Orientable, Structure::Spin, Structure::String, Structure::FiveBrane];

    /// `(prime, k)` for each `A(k)_p` whose self-duality the structure requires.
    pub fn requirements(self) -> &'static [(u32, u32)] {
        match self {
            Structure::Orientable => &[(2, 0)],
            Structure::Spin => &[(2, 1)],
            Structure::String => &[(2, 2), (3, 1)],
            Structure::FiveBrane => &[(2, 3), (5, 1)],
        }
    }

    /// Orientability and spin are decided by self-duality; the higher
    /// levels only get necessary conditions.
    pub fn is_biconditional(self) -> bool {
        matches!(self, Structure::Orientable | Structure::Spin)
    }

    pub fn label(self) -> &'static str {
        match self {
            Structure::Orientable => "orientable (v_1 = 0)",
            Structure::Spin => "spin",
            Structure::String => "string",
            Structure::FiveBrane => "5-brane",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Structure::Orientable => "orientable",
            Structure::Spin => "spin",
            Structure::String => "string",
            Structure::FiveBrane => "5-brane",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    Yes,
    No,
    NoObstructionFound,
    NotEvaluated,
}

impl fmt::Display for LevelStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelStatus::Yes => "YES",
            LevelStatus::No => "NO",
            LevelStatus::NoObstructionFound => "no obstruction found at this level",
            LevelStatus::NotEvaluated => "not evaluated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopOperation {
    pub operation: Letter,
    pub vanishes: bool,
}

/// Self-duality of one ring over one `A(k)_p`, decided twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsdCheck {
    pub algebra: String,
    pub prime: u32,
    pub level: u32,
    pub top_operations: Vec<TopOperation>,
    /// Verdict from the top operations.
    pub by_top_operations: bool,
    /// Verdict from the module isomorphism search; `None` when inconclusive.
    pub by_module: Option<bool>,
    pub module_explanation: String,
    pub agree: bool,
    pub witness: Option<String>,
}

impl PsdCheck {
    pub fn holds(&self) -> bool {
        self.by_top_operations
    }

    /// First generator whose top operation is nonzero.
    pub fn offending(&self) -> Option<Letter> {
        self.top_operations.iter().find(|t| !t.vanishes).map(|t| t.operation)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureVerdict {
    pub structure: Structure,
    pub status: LevelStatus,
    /// Short reason shown next to a "NO", e.g. `Sq^4 asymmetry`.
    pub reason: Option<String>,
    pub witness: Option<String>,
    /// Names of the checks that were evaluated, e.g. `A(2)_2`.
    pub checks: Vec<String>,
    pub missing: Vec<String>,
}

impl StructureVerdict {
    pub fn line(&self) -> String {
        match &self.reason {
            Some(r) => format!("{}: {} ({r})", self.structure.label(), self.status),
            None => format!("{}: {}", self.structure.label(), self.status),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub space: String,
    pub dimension: i32,
    pub primes: Vec<u32>,
    pub checks: Vec<PsdCheck>,
    pub p1_half: Option<String>,
    pub structures: Vec<StructureVerdict>,
    /// Checks on which the two routes disagree or the search was inconclusive.
    pub disagreements: Vec<String>,
}

impl ObstructionReport {
    pub fn check(&self, prime: u32, level: u32) -> Option<&PsdCheck> {
        self.checks.iter().find(|c| c.prime == prime && c.level == level)
    }

    pub fn verdict(&self, s: Structure) -> &StructureVerdict {
        self.structures.iter().find(|v| v.structure == s).expect("all structures reported")
    }

    /// The first structure with a "NO", skipping those that only inherit one.
    pub fn first_obstruction(&self) -> Option<&StructureVerdict> {
        self.structures.iter().find(|v| v.status == LevelStatus::No)
    }

    /// Reason at the first obstructed level, e.g. `Sq^2 asymmetry` or `p_1/2 = 6`.
    pub fn obstruction(&self) -> Option<String> {
        self.first_obstruction().and_then(|v| v.reason.clone())
    }

    fn level_psd(&self, s: Structure) -> Option<bool> {
        let evaluated: Vec<&PsdCheck> =
            s.requirements().iter().filter_map(|&(p, k)| self.check(p, k)).collect();
        (!evaluated.is_empty()).then(|| evaluated.iter().all(|c| c.holds()))
    }

    /// One line summarising the decisive level.
    pub fn summary(&self) -> String {
        let yes_no = |b: bool| if b { "YES" } else { "NO" };
        let target = self
            .first_obstruction()
            .map(|v| v.structure)
            .unwrap_or_else(|| {
                *Structure::ALL
                    .iter()
                    .rev()
                    .find(|&&s| self.verdict(s).status != LevelStatus::NotEvaluated)
                    .unwrap_or(&Structure::FiveBrane)
            });
        let verdict = self.verdict(target);
        let mut parts = Vec::new();
        let psd_failed = self.level_psd(target) == Some(false);
        if psd_failed || verdict.status != LevelStatus::No {
            let below = Structure::ALL.iter().rev().find(|&&s| s < target).copied();
            if let Some(b) = below {
                if let Some(ok) = self.level_psd(b) {
                    parts.push(format!("{}-level PSD: {}", b.short(), yes_no(ok)));
                }
            }
        } else {
            for &(p, k) in target.requirements() {
                if let Some(c) = self.check(p, k) {
                    parts.push(format!("{}-PSD: {}", c.algebra, yes_no(c.holds())));
                }
            }
        }
        parts.push(verdict.line());
        parts.join("; ")
    }

    /// Full text form, one fact per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let primes: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("{} (dimension {}), primes {}\n", self.space, self.dimension, primes.join(",")));
        for c in &self.checks {
            out.push_str(&format!("{}-PSD: {}", c.algebra, if c.holds() { "YES" } else { "NO" }));
            if !c.agree {
                out.push_str(" [module search disagrees]");
            }
            out.push('\n');
            if let Some(w) = &c.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
        if let Some(h) = &self.p1_half {
            out.push_str(&format!("p_1/2 = {h}\n"));
        }
        for s in &self.structures {
            out.push_str(&s.line());
            out.push('\n');
        }
        for d in &self.disagreements {
            out.push_str(&format!("warning: {d}\n"));
        }
        out.push_str(&format!("summary: {}\n", self.summary()));
        out
    }
}

/// `Sq4: H^7(RP^11) -> H^11 nonzero; chi(Sq4): H^0 -> H^4 zero`.
fn witness(r: &PoincareRing, g: Letter) -> String {
    let d = g.degree(r.prime()) as i32;
    let n = r.dimension();
    let low_zero = r.indices_in(0).all(|i| r.act(g, &r.basis_class(i)).iter().all(|&c| c == 0));
    format!(
        "{g}: H^{}({}) -> H^{n} nonzero; chi({g}): H^0 -> H^{d} {}",
        n - d,
        r.name(),
        if low_zero { "zero" } else { "nonzero" }
    )
}

pub fn psd_check(r: &PoincareRing, k: u32, opts: &IsoOptions) -> Result<PsdCheck> {
    let spec = SubalgebraSpec::new(r.prime(), k);
    let top = r.top_op_vanishing(&spec);
    let by_top = top.iter().all(|(_, v)| *v);
    let module = r.module(spec)?;
    let verdict = is_self_dual_with(&module, &spec, r.dimension(), opts)?;
    let by_module = match &verdict {
        IsoVerdict::Inconclusive { .. } => None,
        v => Some(v.is_isomorphic()),
    };
    let top_operations: Vec<TopOperation> =
        top.into_iter().map(|(operation, vanishes)| TopOperation { operation, vanishes }).collect();
    let witness = top_operations.iter().find(|t| !t.vanishes).map(|t| witness(r, t.operation));
    Ok(PsdCheck {
        algebra: spec.name(),
        prime: r.prime().value(),
        level: k,
        top_operations,
        by_top_operations: by_top,
        by_module,
        module_explanation: verdict.explanation(),
        agree: by_module == Some(by_top),
        witness,
    })
}

/// Report for a manifold given by ring models at several primes, plus
/// integral Pontryagin data when known.
pub fn structure_report(
    name: &str,
    rings: &[PoincareRing],
    integral: Option<&IntegralCharData>,
    opts: &IsoOptions,
) -> Result<ObstructionReport> {
    let mut primes: Vec<u32> = rings.iter().map(|r| r.prime().value()).collect();
    primes.sort_unstable();
    primes.dedup();
    let dimension = rings.first().map_or(0, |r| r.dimension());
    let ring_at = |p: u32| rings.iter().find(|r| r.prime().value() == p);

    let mut checks = Vec::new();
    for s in Structure::ALL {
        for &(p, k) in s.requirements() {
            if let Some(r) = ring_at(p) {
                checks.push(psd_check(r, k, opts)?);
            }
        }
    }
    let mut disagreements = Vec::new();
    for c in &checks {
        match c.by_module {
            None => disagreements.push(format!("{}: module search inconclusive", c.algebra)),
            Some(_) if !c.agree => disagreements.push(format!(
                "{}: top operations say {}, module search says {}",
                c.algebra, c.by_top_operations, c.module_explanation
            )),
            _ => {}
        }
    }

    // v_1 = 0 is the orientability condition at p = 2.
    if let Some(r) = ring_at(2) {
        let wu = classes::wu_classes(r)?;
        let v1_zero = wu.get(1).is_none_or(|v| v.iter().all(|&c| c == 0));
        let a0 = checks.iter().find(|c| c.prime == 2 && c.level == 0).map(|c| c.holds());
        if a0 != Some(v1_zero) {
            disagreements.push("A(0)_2 self-duality disagrees with v_1 = 0".to_string());
        }
    }

    let p1_half = integral.and_then(|d| d.p1_half()).map(|h| h.to_string());

    let mut structures: Vec<StructureVerdict> = Vec::new();
    for s in Structure::ALL {
        let mut v = StructureVerdict {
            structure: s,
            status: LevelStatus::NotEvaluated,
            reason: None,
            witness: None,
            checks: Vec::new(),
            missing: Vec::new(),
        };
        for &(p, k) in s.requirements() {
            let name = SubalgebraSpec::new(Prime::new(p)?, k).name();
            match checks.iter().find(|c| c.prime == p && c.level == k) {
                Some(_) => v.checks.push(name),
                None => v.missing.push(name),
            }
        }
        if let Some(prev) = structures.iter().find(|x| x.status == LevelStatus::No) {
            v.status = LevelStatus::No;
            v.reason = Some(format!("not {}", prev.structure.short()));
            structures.push(v);
            continue;
        }
        let failing = s
            .requirements()
            .iter()
            .filter_map(|&(p, k)| checks.iter().find(|c| c.prime == p && c.level == k))
            .find(|c| !c.holds());
        if let Some(c) = failing {
            v.status = LevelStatus::No;
            v.reason = c.offending().map(|g| format!("{} asymmetry", g.pretty()));
            v.witness = c.witness.clone();
        } else if s == Structure::String && p1_half.as_deref().is_some_and(|h| h != "0") {
            let h = p1_half.clone().unwrap_or_default();
            v.status = LevelStatus::No;
            v.reason = Some(format!("p_1/2 = {h}"));
            v.witness = integral.map(|d| {
                let j = d.power_of(1).unwrap_or(0);
                format!("p_1/2 = {} is nonzero", d.format_term(&d.p1_half().unwrap_or_default(), j))
            });
        } else if v.checks.is_empty() {
            v.status = LevelStatus::NotEvaluated;
        } else if s.is_biconditional() && v.missing.is_empty() {
            v.status = LevelStatus::Yes;
        } else {
            v.status = LevelStatus::NoObstructionFound;
        }
        structures.push(v);
    }

    Ok(ObstructionReport {
        space: name.to_string(),
        dimension,
        primes,
        checks,
        p1_half,
        structures,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::truncated_polynomial;

    fn rp(n: i32) -> PoincareRing {
        let two = Prime::TWO;
        truncated_polynomial(format!("RP^{n}"), two, 1, n, |l, j| match l {
            Letter::Sq(i) => two.binomial(j as i64, i as i64),
            _ => 0,
        })
        .unwrap()
    }

    #[test]
    fn rp5_is_not_spin() {
        let rep = structure_report("RP^5", &[rp(5)], None, &IsoOptions::default()).unwrap();
        assert!(rep.disagreements.is_empty(), "{:?}", rep.disagreements);
        assert_eq!(rep.verdict(Structure::Orientable).status, LevelStatus::Yes);
        assert_eq!(rep.verdict(Structure::Spin).line(), "spin: NO (Sq^2 asymmetry)");
        assert_eq!(rep.verdict(Structure::String).reason.as_deref(), Some("not spin"));
        assert!(rep.summary().contains("spin: NO (Sq^2 asymmetry)"));
    }

    #[test]
    fn rp11_witness() {
        let rep = structure_report("RP^11", &[rp(11)], None, &IsoOptions::default()).unwrap();
        assert_eq!(rep.obstruction().as_deref(), Some("Sq^4 asymmetry"));
        assert_eq!(
            rep.verdict(Structure::String).witness.as_deref(),
            Some("Sq4: H^7(RP^11) -> H^11 nonzero; chi(Sq4): H^0 -> H^4 zero")
        );
    }
}
