//! SVG and ASCII charts of modules: one dot per basis element placed by
//! degree, one arc per nonzero entry of each generator's action matrix.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::manifold::PoincareRing;
use crate::module::{FiniteModule, GradedSpace};
use crate::steenrod::{subalgebra_basis, word_to_string, Letter, SubalgebraSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Ascii,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "svg" => Ok(Format::Svg),
            "ascii" | "text" => Ok(Format::Ascii),
            _ => Err(Error::UnsupportedOperation(format!("chart format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcStyle {
    pub color: &'static str,
    pub dash: Option<&'static str>,
    pub width: f32,
}

#[derive(Clone, Debug)]
pub struct ChartStyle {
    pub arcs: BTreeMap<Letter, ArcStyle>,
    /// Pixels per degree.
    pub degree_height: f32,
    /// Horizontal offset between classes of equal degree.
    pub fan: f32,
    /// Width of one column when several modules share a chart.
    pub column_width: f32,
}

impl Default for ChartStyle {
    fn default() -> Self {
        let mut arcs = BTreeMap::new();
        let s = |color, dash, width| ArcStyle { color, dash, width };
        arcs.insert(Letter::Sq(1), s("#000000", None, 1.2));
        arcs.insert(Letter::Sq(2), s("#1f5fbf", None, 1.2));
        arcs.insert(Letter::Sq(4), s("#c0392b", Some("6 3"), 1.2));
        arcs.insert(Letter::Sq(8), s("#27864a", Some("2 2"), 1.6));
        arcs.insert(Letter::Beta, s("#000000", Some("1 2"), 1.2));
        arcs.insert(Letter::P(1), s("#8e44ad", None, 1.6));
        arcs.insert(Letter::P(3), s("#d68910", Some("8 3 2 3"), 1.6));
        ChartStyle { arcs, degree_height: 24.0, fan: 18.0, column_width: 160.0 }
    }
}

impl ChartStyle {
    pub fn style(&self, l: Letter) -> Option<&ArcStyle> {
        self.arcs.get(&l)
    }

    /// Largest `A(k)` at `p` whose generators all have a style.
    pub fn max_level(&self, p: Prime) -> u32 {
        let mut k = 0;
        while SubalgebraSpec::new(p, k + 1).generators().iter().all(|g| self.arcs.contains_key(g)) {
            k += 1;
        }
        k
    }
}

/// One column of a chart.
#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub module: FiniteModule,
}

impl Panel {
    pub fn new(title: impl Into<String>, module: FiniteModule) -> Self {
        Panel { title: title.into(), module }
    }

    /// The ring as a module over the largest styled `A(k)`.
    pub fn ring(r: &PoincareRing, style: &ChartStyle) -> Result<Self> {
        let spec = SubalgebraSpec::new(r.prime(), style.max_level(r.prime()));
        Ok(Panel::new(format!("{} (p = {})", r.name(), r.prime()), r.module(spec)?))
    }
}

struct Arc {
    op: Letter,
    from: (i32, usize),
    to: (i32, usize),
    coefficient: u32,
}

fn arcs(m: &FiniteModule, style: &ChartStyle) -> Result<Vec<Arc>> {
    let p = m.prime();
    let mut out = Vec::new();
    for g in m.generators() {
        for (d, mat) in m.action_matrices(g) {
            let t = d + g.degree(p) as i32;
            for col in 0..mat.cols() {
                for row in 0..mat.rows() {
                    let c = mat.get(row, col);
                    if c != 0 {
                        if style.style(g).is_none() {
                            return Err(Error::UnsupportedOperation(format!("{g} has no chart style")));
                        }
                        out.push(Arc { op: g, from: (d, col), to: (t, row), coefficient: c });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render_module(m: &FiniteModule, title: &str, style: &ChartStyle, format: Format) -> Result<String> {
    render_panels(&[Panel::new(title, m.clone())], style, format)
}

pub fn render_ring(r: &PoincareRing, style: &ChartStyle, format: Format) -> Result<String> {
    render_panels(&[Panel::ring(r, style)?], style, format)
}

/// Several modules side by side, each in its own column.
pub fn render_panels(panels: &[Panel], style: &ChartStyle, format: Format) -> Result<String> {
    let all_arcs: Vec<Vec<Arc>> = panels.iter().map(|p| arcs(&p.module, style)).collect::<Result<_>>()?;
    match format {
        Format::Ascii => Ok(ascii(panels, &all_arcs)),
        Format::Svg => Ok(svg(panels, &all_arcs, style)),
    }
}

fn ascii(panels: &[Panel], all_arcs: &[Vec<Arc>]) -> String {
    let mut out = String::new();
    for (panel, arcs) in panels.iter().zip(all_arcs) {
        let sp = panel.module.space();
        writeln!(out, "chart {}", panel.title).unwrap();
        let (Some(lo), Some(hi)) = (sp.bottom(), sp.top()) else {
            writeln!(out, "vertices 0 arcs 0").unwrap();
            continue;
        };
        for d in (lo..=hi).rev() {
            let mut row = format!("{d:>4} |");
            for (i, name) in sp.names(d).iter().enumerate() {
                write!(row, " {name}").unwrap();
                for a in arcs.iter().filter(|a| a.from == (d, i)) {
                    let target = &sp.names(a.to.0)[a.to.1];
                    if a.coefficient == 1 {
                        write!(row, " [{}>{target}]", a.op).unwrap();
                    } else {
                        write!(row, " [{}>{}*{target}]", a.op, a.coefficient).unwrap();
                    }
                }
            }
            writeln!(out, "{}", row.trim_end()).unwrap();
        }
        writeln!(out, "vertices {} arcs {}", sp.total_dim(), arcs.len()).unwrap();
    }
    out
}

fn position(top: i32, v: (i32, usize), x0: f32, style: &ChartStyle) -> (f32, f32) {
    let x = x0 + v.1 as f32 * style.fan;
    let y = 40.0 + (top - v.0) as f32 * style.degree_height;
    (x, y)
}

fn svg(panels: &[Panel], all_arcs: &[Vec<Arc>], style: &ChartStyle) -> String {
    let top = panels.iter().filter_map(|p| p.module.space().top()).max().unwrap_or(0);
    let bottom = panels.iter().filter_map(|p| p.module.space().bottom()).min().unwrap_or(0);
    let width = 60.0 + style.column_width * panels.len().max(1) as f32;
    let height = 80.0 + (top - bottom) as f32 * style.degree_height;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    // degree ruler
    writeln!(out, r##"<g class="ruler" font-family="sans-serif" font-size="10" fill="#666666">"##).unwrap();
    for d in bottom..=top {
        let y = 40.0 + (top - d) as f32 * style.degree_height;
        if d % 4 == 0 {
            writeln!(out, r#"<text x="8" y="{:.1}">{d}</text>"#, y + 3.0).unwrap();
            writeln!(out, r##"<line x1="28" y1="{y:.1}" x2="34" y2="{y:.1}" stroke="#666666"/>"##).unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    for (c, (panel, arcs)) in panels.iter().zip(all_arcs).enumerate() {
        let sp = panel.module.space();
        let x0 = 70.0 + c as f32 * style.column_width;
        writeln!(out, r#"<g class="panel">"#).unwrap();
        writeln!(
            out,
            r#"<text class="title" x="{x0:.1}" y="20" font-family="sans-serif" font-size="12">{}</text>"#,
            escape(&panel.title)
        )
        .unwrap();
        for a in arcs {
            let st = style.style(a.op).expect("checked when collecting arcs");
            let (x1, y1) = position(top, a.from, x0, style);
            let (x2, y2) = position(top, a.to, x0, style);
            let span = (a.to.0 - a.from.0) as f32;
            let r = span * style.degree_height * 0.75;
            let dash = st.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
            writeln!(
                out,
                r#"<path class="arc" data-op="{}" d="M {x1:.1} {y1:.1} A {r:.1} {r:.1} 0 0 0 {x2:.1} {y2:.1}" fill="none" stroke="{}" stroke-width="{:.1}"{dash}/>"#,
                a.op, st.color, st.width
            )
            .unwrap();
        }
        for d in sp.degrees().collect::<Vec<_>>() {
            for (i, name) in sp.names(d).iter().enumerate() {
                let (x, y) = position(top, (d, i), x0, style);
                writeln!(
                    out,
                    r#"<circle class="vertex" cx="{x:.1}" cy="{y:.1}" r="3"><title>{}</title></circle>"#,
                    escape(name)
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }

    // legend
    writeln!(out, r#"<g class="legend" font-family="sans-serif" font-size="10">"#).unwrap();
    let used: Vec<Letter> = {
        let mut v: Vec<Letter> = all_arcs.iter().flatten().map(|a| a.op).collect();
        v.sort();
        v.dedup();
        v
    };
    for (i, l) in used.iter().enumerate() {
        let st = style.style(*l).expect("styled");
        let y = height - 12.0 - (used.len() - 1 - i) as f32 * 12.0;
        let dash = st.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        writeln!(
            out,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="{:.1}"{dash}/><text x="{:.1}" y="{:.1}">{}</text>"#,
            width - 90.0,
            width - 70.0,
            st.color,
            st.width,
            width - 64.0,
            y + 3.0,
            escape(&l.pretty())
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}

/// `A(2)_2` as a left module over itself.
pub fn a2_module() -> Result<FiniteModule> {
    let spec = SubalgebraSpec::new(Prime::TWO, 2);
    let a = subalgebra_basis(&spec);
    let mut space = GradedSpace::new(spec.p);
    let name = |w: &[Letter]| {
        if w.is_empty() {
            "1".to_string()
        } else {
            word_to_string(w).replace(' ', "")
        }
    };
    for d in 0..=a.top_degree() {
        for (w, _) in a.basis_in(d) {
            space.push(name(w), d as i32)?;
        }
    }
    let mut m = FiniteModule::new(space, spec)?;
    for act in a.left_actions() {
        let (d, j) = act.source;
        let mut mat: Matrix = m.action(act.generator, d as i32);
        for (k, &c) in act.coordinates.iter().enumerate() {
            if c != 0 {
                mat.set(k, j, c);
            }
        }
        m.set_action(act.generator, d as i32, mat)?;
    }
    Ok(m)
}

pub fn render_a2_portrait(format: Format) -> Result<String> {
    render_module(&a2_module()?, "A(2)_2", &ChartStyle::default(), format)
}

/// Vertex and arc counts read back from ASCII output, per arc label.
pub fn parse_ascii_counts(text: &str) -> (usize, BTreeMap<String, usize>) {
    let mut vertices = 0;
    let mut arcs: BTreeMap<String, usize> = BTreeMap::new();
    for line in text.lines() {
        let Some((_, rest)) = line.split_once('|') else { continue };
        for tok in rest.split_whitespace() {
            match tok.strip_prefix('[') {
                Some(a) => *arcs.entry(a.split('>').next().unwrap_or("").to_string()).or_default() += 1,
                None => vertices += 1,
            }
        }
    }
    (vertices, arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::rp;

    #[test]
    fn point_has_one_vertex() {
        let m = FiniteModule::point(SubalgebraSpec::new(Prime::TWO, 1));
        let text = render_module(&m, "pt", &ChartStyle::default(), Format::Ascii).unwrap();
        assert_eq!(parse_ascii_counts(&text), (1, BTreeMap::new()));
    }

    #[test]
    fn rp5_arcs() {
        let text = render_ring(&rp(5).unwrap(), &ChartStyle::default(), Format::Ascii).unwrap();
        let (v, arcs) = parse_ascii_counts(&text);
        assert_eq!(v, 6);
        assert_eq!(arcs.get("Sq1"), Some(&2));
        assert_eq!(arcs.get("Sq2"), Some(&2));
        assert_eq!(arcs.get("Sq4"), None);
        assert!(text.contains("   3 | x^3 [Sq1>x^4] [Sq2>x^5]"));
    }

    #[test]
    fn a2_portrait_shape() {
        let m = a2_module().unwrap();
        assert_eq!(m.space().total_dim(), 64);
        assert_eq!((m.space().bottom(), m.space().top()), (Some(0), Some(23)));
        assert_eq!(m.space().dim(0), 1);
        assert_eq!(m.space().dim(23), 1);
        assert!(m.validate(&m.spec()).unwrap().is_empty());
        assert_eq!(m.action(Letter::Sq(1), 0).get(0, 0), 1);
    }

    #[test]
    fn unstyled_operation_is_an_error() {
        let mut style = ChartStyle::default();
        style.arcs.remove(&Letter::Sq(2));
        let m = rp(5).unwrap().module(SubalgebraSpec::new(Prime::TWO, 1)).unwrap();
        assert!(render_module(&m, "RP^5", &style, Format::Svg).is_err());
    }
}
