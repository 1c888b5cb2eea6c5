//! Report serialization. JSON field order follows the struct declarations,
//! so output is byte-identical across runs.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::io::render::{render_ascii, Diagram, PageKind};
use crate::mckay::McKayReport;
use crate::rational::to_fraction_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported format {0:?}")]
    UnsupportedFormat(String),
    #[error("report does not match the schema: {0}")]
    Schema(#[from] serde_json::Error),
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, ReportError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "svg" => Ok(Format::Svg),
            other => Err(ReportError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Serializes a report. SVG is reserved for diagrams.
pub fn emit_report(report: &McKayReport, format: Format) -> Result<Vec<u8>, ReportError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Text => Ok(text_report(report).into_bytes()),
        Format::Svg => Err(ReportError::UnsupportedFormat(
            "svg (only diagrams render to svg)".into(),
        )),
    }
}

/// Parses JSON produced by [`emit_report`]; unknown fields are rejected.
pub fn parse_report(bytes: &[u8]) -> Result<McKayReport, ReportError> {
    Ok(serde_json::from_slice(bytes)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn text_report(r: &McKayReport) -> String {
    let mut s = String::new();
    let g = &r.group;
    if let Some(label) = &g.label {
        let _ = writeln!(s, "group      {label}");
    }
    let _ = writeln!(
        s,
        "order      {}   n = {}   classes = {}   field Q(zeta_{})",
        g.order, g.n, g.class_count, g.field_order
    );
    let v = &r.validation;
    let _ = writeln!(
        s,
        "validation in_sl={} isolated={} small={}",
        v.in_sl, v.isolated, v.small
    );
    let _ = writeln!(s, "slope      {} turns", to_fraction_string(&r.slope));
    let _ = writeln!(s);
    let _ = writeln!(s, "classes");
    for (i, c) in r.classes.iter().enumerate() {
        let spec = join(c.spectrum.entries.iter().map(|e| format!("{}^{}", e.q, e.mult)));
        let _ = writeln!(
            s,
            "  g{i:<3} size {:<4} order {:<3} age {}  spectrum [{spec}]",
            c.size, c.element_order, c.age
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "betti      ({})   euler {}", join(&r.betti), r.euler);
    let _ = writeln!(
        s,
        "obstructed {}: {}",
        r.obstruction.flag, r.obstruction.explanation
    );
    if !r.sh_plus.is_empty() {
        let _ = writeln!(
            s,
            "SH+ ranks  {}",
            join(r.sh_plus.iter().map(|(d, k)| format!("{d}:{k}")))
        );
    }
    let _ = writeln!(
        s,
        "char excl. {}",
        if r.characteristic_exclusions.is_empty() {
            "none".to_string()
        } else {
            join(&r.characteristic_exclusions)
        }
    );
    let _ = writeln!(s);
    if !r.orbits.is_empty() {
        s.push_str(&render_ascii(&Diagram::from_report(r, PageKind::Sc)));
        let _ = writeln!(s);
    }
    let _ = writeln!(s, "labels ({})", crate::mckay::LABEL_NOTE);
    for l in &r.labels {
        let _ = writeln!(
            s,
            "  H^{:<3} <- g{} (min turn {}, mu_g = {})",
            l.degree, l.class_index, l.min_q, l.mu_g
        );
    }
    let _ = writeln!(s);
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "checks     {passed}/{} passed", r.checks.len());
    for c in r.checks.iter().filter(|c| !c.passed) {
        let _ = writeln!(
            s,
            "  FAIL {}: {}",
            c.name,
            c.detail.as_deref().unwrap_or("")
        );
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}
