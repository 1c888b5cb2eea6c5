//! Input parsing and output rendering.

pub mod builtin;
pub mod expr;
pub mod render;
pub mod report;
pub mod spec;

pub use builtin::{builtin, BuiltinError, BUILTIN_NAMES};
pub use expr::{parse_expr, ParseError};
pub use spec::{parse_spec, GroupSpec, InputFile, SpecError};
pub use render::{render_ascii, render_svg, Diagram, PageKind};
pub use report::{emit_report, parse_report, Format, ReportError};
