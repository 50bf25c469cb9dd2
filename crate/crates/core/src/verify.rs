//! The invariant suite run by `psdual verify`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chart::{parse_ascii_counts, render_ring, ChartStyle, Format};
use crate::error::Result;
use crate::field::Prime;
use crate::manifold::{
    inverse_total_class, newton_polynomial, q1_divisibility, sw_from_wu, thom_iso_is_linear, thom_module, wu_classes,
    IntegralCharData, PoincareRing, VirtualBundle,
};
use crate::module::{is_isomorphic_with, is_self_dual_with, IsoOptions};
use crate::spaces::{corpus, cp, hp, load_str, rp, save_ring, Loaded, SpaceSpec, TABLE1_SPACES};
use crate::steenrod::{antipode, subalgebra_basis, verify_presentation, AlgebraElement, Letter, SubalgebraSpec};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&IsoOptions) -> Result<(bool, String)>;

/// Levels checked at each prime.
fn levels(p: Prime) -> std::ops::RangeInclusive<u32> {
    if p.is_two() {
        0..=3
    } else {
        0..=1
    }
}

fn relations(_: &IsoOptions) -> Result<(bool, String)> {
    let mut failed = Vec::new();
    for spec in [
        SubalgebraSpec::new(Prime::TWO, 1),
        SubalgebraSpec::new(Prime::TWO, 2),
        SubalgebraSpec::new(Prime::THREE, 1),
        SubalgebraSpec::new(Prime::FIVE, 1),
    ] {
        for c in verify_presentation(&spec) {
            if !c.holds() {
                failed.push(format!("{spec}: {} reduces to {}", c.relation, c.reduced));
            }
        }
    }
    Ok((failed.is_empty(), failed.join("; ")))
}

fn antipode_values(_: &IsoOptions) -> Result<(bool, String)> {
    let two = Prime::TWO;
    let chi = antipode(&AlgebraElement::letter(two, Letter::Sq(4)));
    let want = AlgebraElement::parse(two, "Sq4 + Sq2 Sq2")?;
    let mut bad = Vec::new();
    if chi != want {
        bad.push(format!("chi(Sq4) = {chi}"));
    }
    for p in [Prime::TWO, Prime::THREE, Prime::FIVE] {
        for l in crate::manifold::letters_through(p, 24) {
            let x = AlgebraElement::letter(p, l);
            if antipode(&antipode(&x)) != x {
                bad.push(format!("chi(chi({l})) != {l} at p = {p}"));
            }
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn subalgebra_sizes(_: &IsoOptions) -> Result<(bool, String)> {
    let mut detail = String::new();
    let mut ok = true;
    let expect = [(2, 1, 8, 6), (2, 2, 64, 23), (3, 1, 12, 14), (5, 1, 20, 42)];
    for (p, k, dim, top) in expect {
        let spec = SubalgebraSpec::new(Prime::new(p)?, k);
        let a = subalgebra_basis(&spec);
        let good = a.dimension() == dim && a.top_degree() == top;
        ok &= good;
        write!(detail, "{spec}: {} (top {}); ", a.dimension(), a.top_degree()).unwrap();
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

fn table1(opts: &IsoOptions) -> Result<(bool, String)> {
    let expect = [
        "Sq^2 asymmetry",
        "Sq^4 asymmetry",
        "Sq^8 asymmetry",
        "Sq^2 asymmetry",
        "P^1 asymmetry",
        "Sq^4 asymmetry",
        "p_1/2 = 6",
        "Sq^4 asymmetry",
        "P^1 asymmetry",
        "p_1/2 = 6",
        "Sq^8 asymmetry",
    ];
    let primes = [Prime::TWO, Prime::THREE, Prime::FIVE];
    let mut bad = Vec::new();
    for (s, want) in TABLE1_SPACES.iter().zip(expect) {
        let rep = s.parse::<SpaceSpec>()?.build(&primes)?.report(opts)?;
        let got = rep.obstruction().unwrap_or_default();
        if got != want || !rep.disagreements.is_empty() {
            bad.push(format!("{s}: {got} {:?}", rep.disagreements));
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn top_op_equivalence(opts: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for r in corpus()? {
        for k in levels(r.prime()) {
            let spec = SubalgebraSpec::new(r.prime(), k);
            let top = r.top_op_vanishing(&spec).iter().all(|(_, v)| *v);
            let v = is_self_dual_with(&r.module(spec)?, &spec, r.dimension(), opts)?;
            count += 1;
            if v.is_inconclusive() || v.is_isomorphic() != top {
                bad.push(format!("{} over {spec}: top ops {top}, module {}", r.name(), v.explanation()));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{count} cases") } else { bad.join("; ") }))
}

fn annihilates(nu: &VirtualBundle, spec: &SubalgebraSpec) -> bool {
    spec.generators().into_iter().all(|g| nu.class(g).iter().all(|&c| c == 0))
}

fn thom_annihilation(opts: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let mut count = 0;
    for r in corpus()? {
        let nu = VirtualBundle::negative_tangent(&r)?;
        for k in levels(r.prime()) {
            let spec = SubalgebraSpec::new(r.prime(), k);
            if !annihilates(&nu, &spec) {
                continue;
            }
            count += 1;
            let lin = thom_iso_is_linear(&nu, &spec);
            let sd = is_self_dual_with(&r.module(spec)?, &spec, r.dimension(), opts)?;
            if !lin.linear || !sd.is_isomorphic() {
                bad.push(format!("{} over {spec}", r.name()));
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{count} cases") } else { bad.join("; ") }))
}

fn thom_consistency(_: &IsoOptions) -> Result<(bool, String)> {
    // Sq^i u = w_i(-tau) u for every i, not just the generators.
    let mut bad = Vec::new();
    for n in [5, 11, 16] {
        let r = rp(n)?;
        let nu = VirtualBundle::negative_tangent(&r)?;
        let th = thom_module(&nu, &SubalgebraSpec::full(Prime::TWO))?;
        for i in 1..=n {
            let m = th.module.act_element(&AlgebraElement::letter(Prime::TWO, Letter::Sq(i)), -(n as i32))?;
            let w = nu.class(Letter::Sq(i));
            let col: Vec<u32> = (0..m.rows()).map(|row| m.get(row, 0)).collect();
            let want: Vec<u32> = r.indices_in(i as i32).map(|k| w[k]).collect();
            if col != want {
                bad.push(format!("RP^{n}: Sq{i} u"));
            }
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn spin_biconditional(opts: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for r in corpus()?.into_iter().filter(|r| r.prime().is_two()) {
        let v = wu_classes(&r)?;
        let zero = |c: &[u32]| c.iter().all(|&x| x == 0);
        let v1 = v.get(1).cloned().unwrap_or_else(|| r.zero());
        let v2 = v.get(2).cloned().unwrap_or_else(|| r.zero());
        let w2 = r.add(&v2, &r.act(Letter::Sq(1), &v1));
        let classes = zero(&v1) && zero(&w2);
        let spec = SubalgebraSpec::new(Prime::TWO, 1);
        let psd = is_self_dual_with(&r.module(spec)?, &spec, r.dimension(), opts)?.is_isomorphic();
        if psd != classes {
            bad.push(r.name().to_string());
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn newton(_: &IsoOptions) -> Result<(bool, String)> {
    let got = [
        newton_polynomial(2, Some(Prime::FIVE)).to_string(),
        newton_polynomial(3, Some(Prime::new(7)?)).to_string(),
        newton_polynomial(5, Some(Prime::new(11)?)).to_string(),
    ];
    let want = [
        "p1^2 + 3 p2",
        "p1^3 + 4 p1 p2 + 3 p3",
        "p1^5 + 6 p1^3 p2 + 5 p1^2 p3 + 5 p1 p2^2 + 6 p1 p4 + 6 p2 p3 + 5 p5",
    ];
    Ok((got == want, got.join(" | ")))
}

fn wu_route(_: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 1..=24 {
        let r = rp(n)?;
        let w = sw_from_wu(&r, &wu_classes(&r)?)?;
        let classical: Vec<u32> = (0..=n).map(|j| Prime::TWO.binomial(n as i64 + 1, j as i64)).collect();
        if w != classical {
            bad.push(format!("RP^{n}"));
        }
        let t = VirtualBundle::tangent(&r)?;
        let nu = VirtualBundle::negative_tangent(&r)?;
        if nu.total_class() != inverse_total_class(&r, &t.total_class())? {
            bad.push(format!("RP^{n}: w(-tau)"));
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn q1(_: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for p in [Prime::THREE, Prime::FIVE] {
        let spec = SubalgebraSpec::new(p, 1);
        let cases: Vec<(PoincareRing, IntegralCharData)> = (1..=12)
            .map(|n| Ok((cp(n, p)?, IntegralCharData::cp(n))))
            .chain((1..=8).map(|n| Ok((hp(n, p)?, IntegralCharData::hp(n)))))
            .collect::<Result<_>>()?;
        for (r, data) in cases {
            let p1_vanishes = r.top_op_vanishing(&spec).into_iter().all(|(g, v)| g != Letter::P(1) || v);
            if q1_divisibility(&data, p) != p1_vanishes {
                bad.push(format!("{} at {p}", r.name()));
            }
            // q_1(-tau) = -q_1(tau) on the mod-p models
            let t = VirtualBundle::tangent(&r)?;
            let nu = VirtualBundle::negative_tangent(&r)?;
            if nu.class(Letter::P(1)) != r.scale(&t.class(Letter::P(1)), p.neg(1)) {
                bad.push(format!("{} at {p}: q_1(-tau)", r.name()));
            }
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn duality_and_framing(opts: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for r in corpus()? {
        let p = r.prime();
        let mut specs: Vec<SubalgebraSpec> = levels(p).map(|k| SubalgebraSpec::new(p, k)).collect();
        specs.push(SubalgebraSpec::full(p));
        let zero = VirtualBundle::trivial(&r, 0);
        for spec in specs {
            let m = r.module(spec)?;
            if !is_isomorphic_with(&m.dualize()?.dualize()?, &m, &spec, opts)?.is_isomorphic() {
                bad.push(format!("{} over {spec}: DD", r.name()));
            }
            let th = thom_module(&zero, &spec)?;
            if !is_isomorphic_with(&th.module, &m, &spec, opts)?.is_isomorphic() {
                bad.push(format!("{} over {spec}: framed", r.name()));
            }
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn rendering(_: &IsoOptions) -> Result<(bool, String)> {
    let style = ChartStyle::default();
    let mut bad = Vec::new();
    for r in corpus()? {
        let text = render_ring(&r, &style, Format::Ascii)?;
        let (v, arcs) = parse_ascii_counts(&text);
        let m = crate::chart::Panel::ring(&r, &style)?.module;
        if v != m.space().total_dim() {
            bad.push(format!("{}: {v} vertices", r.name()));
        }
        for g in m.generators() {
            if arcs.get(&g.token()).copied().unwrap_or(0) != m.nonzero_entries(g) {
                bad.push(format!("{}: {g} arcs", r.name()));
            }
        }
        let svg = render_ring(&r, &style, Format::Svg)?;
        if svg.matches("<circle").count() != m.space().total_dim() {
            bad.push(format!("{}: svg vertices", r.name()));
        }
    }
    let a2 = crate::chart::render_a2_portrait(Format::Ascii)?;
    if parse_ascii_counts(&a2).0 != 64 {
        bad.push("A(2) portrait".to_string());
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

fn rings_and_files(_: &IsoOptions) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for r in corpus()? {
        let problems = r.validate();
        if !problems.is_empty() {
            bad.push(format!("{}: {}", r.name(), problems[0]));
        }
        match load_str(&save_ring(&r))? {
            Loaded::Ring(back) if back == r => {}
            _ => bad.push(format!("{}: round trip", r.name())),
        }
    }
    Ok((bad.is_empty(), bad.join("; ")))
}

pub const CHECKS: [(&str, Check); 14] = [
    ("subalgebra relations reduce to zero", relations),
    ("antipode values and involution", antipode_values),
    ("subalgebra dimensions", subalgebra_sizes),
    ("structure table obstructions", table1),
    ("top operations match self-duality", top_op_equivalence),
    ("annihilated Thom class gives self-duality", thom_annihilation),
    ("Thom identity for every Sq^i", thom_consistency),
    ("spin iff v_1 = 0 and w_2 = 0", spin_biconditional),
    ("Newton polynomials", newton),
    ("Wu formula matches (1+x)^(n+1) on RP^n", wu_route),
    ("q_1 divisibility matches P^1 top operation", q1),
    ("double dual and framed Thom module", duality_and_framing),
    ("chart counts", rendering),
    ("corpus rings validate and round-trip", rings_and_files),
];

pub fn run_all(opts: &IsoOptions) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|(name, f)| match f(opts) {
            Ok((passed, detail)) => CheckOutcome { name, passed, detail },
            Err(e) => CheckOutcome { name, passed: false, detail: format!("error: {e}") },
        })
        .collect()
}
