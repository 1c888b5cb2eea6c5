//! E1-page diagrams: one column per orbit family, ordered by period, with
//! degrees running down the page.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::floer::{GradedRankTable, MorseBottOrbit};
use crate::mckay::McKayReport;
use crate::rational::to_fraction_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PageKind {
    /// Full complex: constants column plus every orbit.
    Sc,
    ScPlus,
    EscPlus,
}

impl PageKind {
    pub fn label(self) -> &'static str {
        match self {
            PageKind::Sc => "sc",
            PageKind::ScPlus => "sc+",
            PageKind::EscPlus => "esc+",
        }
    }
}

impl FromStr for PageKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sc" => Ok(PageKind::Sc),
            "sc+" | "sc_plus" => Ok(PageKind::ScPlus),
            "esc+" | "esc_plus" => Ok(PageKind::EscPlus),
            _ => Err(format!("unknown page {s:?}; expected sc, sc+ or esc+")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    /// `None` for the constants column.
    pub class_index: Option<usize>,
    pub period: Option<String>,
    /// Descending.
    pub degrees: Vec<i64>,
    pub constants: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub page: PageKind,
    pub columns: Vec<Column>,
}

fn orbit_degrees(page: PageKind, o: &MorseBottOrbit) -> Vec<i64> {
    let mut d: Vec<i64> = match page {
        PageKind::EscPlus => o.equivariant_degrees().collect(),
        _ => vec![o.mu, o.mu_max],
    };
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

fn descending(table: &GradedRankTable) -> Vec<i64> {
    let mut out = Vec::new();
    for (deg, rank) in table.iter() {
        out.extend(std::iter::repeat_n(deg, rank));
    }
    out.reverse();
    out
}

impl Diagram {
    /// Builds a page from orbits in catalog order (period, then class).
    pub fn new(page: PageKind, constants: &GradedRankTable, orbits: &[MorseBottOrbit]) -> Self {
        let mut columns = Vec::new();
        if page == PageKind::Sc {
            columns.push(Column {
                class_index: None,
                period: None,
                degrees: descending(constants),
                constants: true,
            });
        }
        columns.extend(orbits.iter().map(|o| Column {
            class_index: Some(o.class_index),
            period: Some(to_fraction_string(&o.period)),
            degrees: orbit_degrees(page, o),
            constants: false,
        }));
        Diagram { page, columns }
    }

    pub fn from_report(report: &McKayReport, page: PageKind) -> Self {
        Diagram::new(page, &report.pages.constants, &report.orbits)
    }

    /// Degree → rank over all columns; equals the corresponding page table.
    pub fn rank_table(&self) -> GradedRankTable {
        self.columns
            .iter()
            .flat_map(|c| c.degrees.iter().map(|&d| (d, 1)))
            .collect()
    }

    fn rows(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.columns.iter().flat_map(|c| c.degrees.iter().copied()).collect();
        set.into_iter().rev().collect()
    }
}

fn signed(d: i64) -> String {
    if d > 0 {
        format!("+{d}")
    } else {
        d.to_string()
    }
}

/// Fixed-width text rendering. The constants column is bracketed, e.g.
/// `(2)` over `(0)`.
pub fn render_ascii(diagram: &Diagram) -> String {
    let cells = |c: &Column, d: i64| -> String {
        let count = c.degrees.iter().filter(|&&x| x == d).count();
        if count == 0 {
            return String::new();
        }
        let base = if c.constants { format!("({d})") } else { signed(d) };
        if count > 1 {
            format!("{base}x{count}")
        } else {
            base
        }
    };
    let rows = diagram.rows();
    let headers: Vec<(String, String)> = diagram
        .columns
        .iter()
        .map(|c| match (c.class_index, &c.period) {
            (Some(ci), Some(p)) => (p.clone(), format!("g{ci}")),
            _ => ("H*".to_string(), "const".to_string()),
        })
        .collect();
    let widths: Vec<usize> = diagram
        .columns
        .iter()
        .zip(&headers)
        .map(|(c, (p, l))| {
            rows.iter()
                .map(|&d| cells(c, d).len())
                .chain([p.len(), l.len()])
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, label: &str, items: Vec<String>| {
        let mut s = format!("{label:>7} |");
        for (item, w) in items.iter().zip(&widths) {
            let _ = write!(s, " {item:>w$}");
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    let _ = writeln!(out, "page {}", diagram.page.label());
    line(&mut out, "period", headers.iter().map(|h| h.0.clone()).collect());
    line(&mut out, "class", headers.iter().map(|h| h.1.clone()).collect());
    let rule = 8 + widths.iter().map(|w| w + 1).sum::<usize>();
    let _ = writeln!(out, "{}", "-".repeat(rule.max(9)));
    for &d in &rows {
        line(
            &mut out,
            &signed(d),
            diagram.columns.iter().map(|c| cells(c, d)).collect(),
        );
    }
    out
}

pub const SVG_COLUMN_WIDTH: i64 = 48;
pub const SVG_ROW_HEIGHT: i64 = 20;
const SVG_MARGIN: i64 = 40;

/// Column `j`'s centre and degree `d`'s baseline in SVG user units.
pub fn svg_position(column: usize, degree: i64, top_degree: i64) -> (i64, i64) {
    (
        SVG_MARGIN + SVG_COLUMN_WIDTH * column as i64 + SVG_COLUMN_WIDTH / 2,
        SVG_MARGIN + SVG_ROW_HEIGHT * (top_degree - degree + 1),
    )
}

pub fn render_svg(diagram: &Diagram) -> String {
    let rows = diagram.rows();
    let top = rows.first().copied().unwrap_or(0);
    let bottom = rows.last().copied().unwrap_or(0);
    let width = 2 * SVG_MARGIN + SVG_COLUMN_WIDTH * diagram.columns.len().max(1) as i64;
    let height = 2 * SVG_MARGIN + SVG_ROW_HEIGHT * (top - bottom + 2);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(s, r#"<title>page {}</title>"#, diagram.page.label());
    for (j, c) in diagram.columns.iter().enumerate() {
        let (x, _) = svg_position(j, top, top);
        let head = c.period.as_deref().unwrap_or("H*");
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{head}</text>"#, SVG_MARGIN - 8);
        for &d in &c.degrees {
            let (x, y) = svg_position(j, d, top);
            let label = if c.constants { format!("({d})") } else { signed(d) };
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{y}" text-anchor="middle" data-degree="{d}">{label}</text>"#
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
