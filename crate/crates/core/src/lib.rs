//! Exact McKay-correspondence bookkeeping for finite `G ⊂ SL(n, ℂ)`: ages,
//! Conley–Zehnder gradings of Reeb orbit families, Morse–Bott E1 pages and
//! the resulting Betti-number predictions for crepant resolutions.
//!
//! ```
//! use mckay::{analyze, io::GroupSpec};
//! use num_rational::Rational64;
//!
//! let spec = GroupSpec::Builtin { name: "binary_dihedral_D4".into() };
//! let report = analyze(&spec, Rational64::from_integer(3), mckay::groups::DEFAULT_CAP).unwrap();
//! assert_eq!(report.betti, vec![1, 4]);
//! assert!(report.all_checks_passed());
//! ```

pub mod cyclotomic;
pub mod czindex;
pub mod filtration;
pub mod floer;
pub mod groups;
pub mod io;
pub mod matrix;
pub mod mckay;
pub mod oracle;
pub mod rational;
pub mod spectrum;

use num_rational::Rational64;
use thiserror::Error;

use crate::cyclotomic::CyclotomicError;
use crate::filtration::FiltrationError;
use crate::floer::FloerError;
use crate::groups::{close, GroupError};
use crate::io::{GroupSpec, SpecError};
use crate::mckay::{McKayError, McKayReport};
use crate::spectrum::SpectralGroup;

pub use crate::mckay::predict;

/// Any failure of the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    McKay(#[from] McKayError),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

/// Process exit statuses used by the command-line tool.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INTERNAL: i32 = 3;
    pub const RESOURCE: i32 = 4;
}

fn cyclotomic_code(e: &CyclotomicError) -> i32 {
    match e {
        CyclotomicError::PromotionOverflow(_) => exit::RESOURCE,
        _ => exit::INTERNAL,
    }
}

fn group_code(e: &GroupError) -> i32 {
    match e {
        GroupError::CapExceeded { .. } => exit::RESOURCE,
        GroupError::Cyclotomic(c) => cyclotomic_code(c),
        _ => exit::VALIDATION,
    }
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Spec(SpecError::Cyclotomic(c)) => cyclotomic_code(c),
            Error::Spec(_) => exit::PARSE,
            Error::Group(g) | Error::McKay(McKayError::Group(g)) => group_code(g),
            Error::McKay(McKayError::NotSl(_)) => exit::VALIDATION,
            Error::McKay(McKayError::Floer(FloerError::NonPositiveSlope)) => exit::PARSE,
            Error::McKay(_) => exit::INTERNAL,
            Error::Filtration(FiltrationError::QuadratureFailure { .. }) => exit::INTERNAL,
            Error::Filtration(_) => exit::VALIDATION,
        }
    }
}

/// A short human-readable name for the group a spec describes.
pub fn spec_label(spec: &GroupSpec) -> String {
    match spec {
        GroupSpec::Builtin { name } => name.clone(),
        GroupSpec::Lens { m, weights } => format!(
            "lens 1/{m}({})",
            weights.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
        ),
        GroupSpec::Explicit { n, generators, .. } => {
            format!("explicit, {} generator(s) in dimension {n}", generators.len())
        }
    }
}

/// Closes the group a spec describes and computes its spectra.
pub fn load_group(spec: &GroupSpec, cap: usize) -> Result<(SpectralGroup, groups::ValidationReport), Error> {
    let group = close(&spec.generators()?, cap)?;
    Ok(mckay::prepare(group)?)
}

/// Spec → closed group → full report.
pub fn analyze(spec: &GroupSpec, slope: Rational64, cap: usize) -> Result<McKayReport, Error> {
    let (sg, validation) = load_group(spec, cap)?;
    let mut report = predict(&sg, &validation, slope)?;
    report.group.label = Some(spec_label(spec));
    let mut warnings = spec.warnings();
    warnings.append(&mut report.warnings);
    report.warnings = warnings;
    Ok(report)
}

/// Book chapters, compiled as doctests so the snippets stay runnable.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/cyclotomic.md")]
    mod cyclotomic {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/orbits.md")]
    mod orbits {}
    #[doc = include_str!("../../../book/src/pages.md")]
    mod pages {}
    #[doc = include_str!("../../../book/src/filtration.md")]
    mod filtration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
