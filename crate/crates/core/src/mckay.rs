//! Predictions for crepant resolutions and the consolidated consistency
//! report.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floer::{
    catalog_age, e1_equivariant, e1_plain, gysin_solve, orbit_catalog, parity_degeneration,
    stack_f_summands, FSummand, FloerError, GradedRankTable, MorseBottOrbit, OrbitCatalog,
};
use crate::groups::{element_order, validate, GroupError, MatrixGroup, ValidationReport};
use crate::spectrum::{age_census, EigenSpectrum, SpectralGroup, SpectrumError, TurnFraction};

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Marker attached to every class label of a predicted basis.
pub const LABEL_NOTE: &str = "non-canonical labelling";

#[derive(Debug, Error)]
pub enum McKayError {
    #[error("group is not in SL(n): {0}")]
    NotSl(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Floer(#[from] FloerError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub order: usize,
    pub n: usize,
    pub field_order: u64,
    pub class_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassRow {
    pub rep: usize,
    pub size: usize,
    pub centralizer: usize,
    pub element_order: usize,
    pub age: u32,
    pub spectrum: EigenSpectrum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgeCount {
    pub age: u32,
    pub classes: usize,
}

/// First pages. `constants` is the predicted cohomology of the resolution
/// placed in the constant-orbit column; it is never computed from orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pages {
    pub sc: GradedRankTable,
    pub sc_plus: GradedRankTable,
    pub esc_plus: GradedRankTable,
    pub constants: GradedRankTable,
    pub constants_are_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstruction {
    pub flag: bool,
    pub explanation: String,
}

/// The class attached to a predicted generator of `H^{2·age}`, with its
/// minimal orbit data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisLabel {
    pub class_index: usize,
    pub degree: u32,
    pub min_q: TurnFraction,
    pub mu_g: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_orbit_mu: Option<i64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McKayReport {
    pub version: String,
    pub group: GroupSummary,
    pub validation: ValidationReport,
    #[serde(with = "crate::rational::serde_fraction")]
    pub slope: Rational64,
    pub classes: Vec<ClassRow>,
    pub age_census: Vec<AgeCount>,
    pub orbits: Vec<MorseBottOrbit>,
    pub pages: Pages,
    pub f_summands: Vec<FSummand>,
    pub sh_plus: GradedRankTable,
    /// `b_0, b_2, …, b_{2k}` up to the largest age; odd Betti numbers vanish.
    pub betti: Vec<usize>,
    pub euler: i64,
    pub obstruction: Obstruction,
    pub characteristic_exclusions: Vec<u64>,
    pub labels: Vec<BasisLabel>,
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl McKayReport {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn primes_up_to(n: usize) -> Vec<u64> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p as u64);
            let mut m = p * p;
            while m <= n {
                sieve[m] = false;
                m += p;
            }
        }
    }
    out
}

/// `b_{2k} = |Conj_k(G)|` for `k = 0..=max age`.
pub fn betti_from_census(census: &BTreeMap<u32, usize>) -> Vec<usize> {
    let top = census.keys().copied().max().unwrap_or(0);
    (0..=top).map(|k| census.get(&k).copied().unwrap_or(0)).collect()
}

/// Obstructed iff `b_2 = 0` while some higher even Betti number is nonzero:
/// the exceptional fibre would then carry no Kähler class.
pub fn obstruction_flag(betti: &[usize]) -> Obstruction {
    let b2 = betti.get(1).copied().unwrap_or(0);
    let higher: usize = betti.iter().skip(1).sum();
    let flag = b2 == 0 && higher > 0;
    let explanation = if flag {
        format!(
            "b_2 = 0 but the predicted cohomology has rank {higher} in positive degrees; \
             a crepant resolution would have a positive-dimensional projective exceptional \
             fibre with no class in degree 2, so none exists"
        )
    } else if higher == 0 {
        "no classes of positive age; nothing to resolve".to_string()
    } else {
        "b_2 > 0; no obstruction from degree-2 cohomology".to_string()
    };
    Obstruction { flag, explanation }
}

struct CheckList(Vec<CheckResult>);

impl CheckList {
    fn add(&mut self, name: &str, passed: bool, detail: impl FnOnce() -> String) {
        self.0.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: (!passed).then(detail),
        });
    }
}

/// Closes the group and validates it; refuses groups outside SL(n).
pub fn prepare(group: MatrixGroup) -> Result<(SpectralGroup, ValidationReport), McKayError> {
    let validation = validate(&group)?;
    if !validation.in_sl {
        return Err(McKayError::NotSl(validation.failures.join("; ")));
    }
    Ok((SpectralGroup::new(group)?, validation))
}

/// Full prediction with every consistency check. Non-isolated groups get the
/// age census and Betti numbers only, with a scope warning.
pub fn predict(
    sg: &SpectralGroup,
    validation: &ValidationReport,
    slope: Rational64,
) -> Result<McKayReport, McKayError> {
    if !validation.in_sl {
        return Err(McKayError::NotSl(validation.failures.join("; ")));
    }
    let group = &sg.group;
    let n = sg.n();
    let census = age_census(sg);
    let betti = betti_from_census(&census);
    let euler = betti.iter().sum::<usize>() as i64;
    let constants: GradedRankTable = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| (2 * k as i64, b))
        .collect();
    let mut warnings = Vec::new();
    let mut checks = CheckList(Vec::new());

    let class_rows: Vec<ClassRow> = sg
        .classes
        .iter()
        .zip(&sg.spectra)
        .map(|(c, s)| ClassRow {
            rep: c.rep_index,
            size: c.class_size,
            centralizer: c.centralizer_order,
            element_order: element_order(group, c.rep_index),
            age: s.age,
            spectrum: s.spectrum.clone(),
        })
        .collect();

    let total: usize = sg.classes.iter().map(|c| c.class_size).sum();
    checks.add("class_equation", total == group.order(), || {
        format!("class sizes sum to {total}, |G| = {}", group.order())
    });
    let bad_spectrum = sg.spectra.iter().find(|s| {
        let det: Rational64 = s
            .spectrum
            .entries
            .iter()
            .map(|e| e.q.value() * Rational64::from_integer(e.mult as i64))
            .sum();
        s.spectrum.dimension() != n || !det.is_integer()
    });
    checks.add("spectrum_dimension_and_determinant", bad_spectrum.is_none(), || {
        format!("class {}", bad_spectrum.unwrap().class_index)
    });
    checks.add("euler_equals_class_count", euler as usize == sg.class_count(), || {
        format!("euler {euler}, {} classes", sg.class_count())
    });

    let mut orbits = Vec::new();
    let mut sc_plus = GradedRankTable::new();
    let mut esc_plus = GradedRankTable::new();
    let mut f_summands = Vec::new();
    let mut sh_plus = GradedRankTable::new();

    if validation.isolated {
        checks.add("b0_is_one", betti.first() == Some(&1), || {
            format!("b_0 = {:?}", betti.first())
        });
        let bad_range = sg
            .spectra
            .iter()
            .find(|s| sg.classes[s.class_index].rep_index != 0 && !(1..n as u32).contains(&s.age));
        checks.add("age_range", bad_range.is_none(), || {
            format!("class {} has age outside 1..n-1", bad_range.unwrap().class_index)
        });
        let mut duality_failure = None;
        for (ci, c) in sg.classes.iter().enumerate() {
            if c.rep_index == 0 {
                continue;
            }
            let inv = crate::groups::class_of(&sg.classes, group.inverse(c.rep_index));
            if sg.spectra[ci].age + sg.spectra[inv].age != n as u32 {
                duality_failure.get_or_insert(ci);
            }
        }
        checks.add("age_duality", duality_failure.is_none(), || {
            format!("class {}", duality_failure.unwrap())
        });
        let symmetric = (1..n as u32).all(|k| {
            census.get(&k).copied().unwrap_or(0) == census.get(&(n as u32 - k)).copied().unwrap_or(0)
        });
        checks.add("census_symmetry", symmetric, || format!("{census:?}"));

        let catalog = orbit_catalog(sg, slope)?;
        sc_plus = e1_plain(&catalog);
        esc_plus = e1_equivariant(&catalog);
        orbit_checks(sg, &catalog, &mut checks);
        checks.add("parity_degeneration", parity_degeneration(&esc_plus), || {
            "equivariant page has even-degree generators".into()
        });
        if slope >= Rational64::from_integer(1) {
            f_summands = stack_f_summands(sg, &catalog)?;
            sh_plus = gysin_solve(&f_summands);
            checks.add("f_summand_count", f_summands.len() == sg.class_count(), || {
                format!("{} summands, {} classes", f_summands.len(), sg.class_count())
            });
            let top_ok = f_summands
                .iter()
                .all(|f| f.mu_g == 2 * sg.spectra[f.class_index].age as i64 - 1);
            checks.add("f_summand_top_degree", top_ok, || "mu_g != 2 age - 1".into());
            let gysin_ok = census
                .iter()
                .all(|(&k, &c)| sh_plus.rank(2 * k as i64 - 1) == c)
                && sh_plus.iter().all(|(d, _)| d.rem_euclid(2) == 1);
            checks.add("sh_plus_matches_census", gysin_ok, || format!("{sh_plus:?}"));
            let betti_ok = betti
                .iter()
                .enumerate()
                .all(|(k, &b)| sh_plus.rank(2 * k as i64 - 1) == b);
            checks.add("sh_plus_matches_betti", betti_ok, || format!("{betti:?}"));
        } else {
            warnings.push(format!(
                "slope {} is below one turn; F-summands and SH+ ranks are not computed",
                crate::rational::to_fraction_string(&slope)
            ));
        }
        orbits = catalog.orbits;
    } else {
        warnings.push(
            "the action is not free away from the origin: only the age census and Betti \
             prediction are reported; the orbit pipeline assumes an isolated singularity"
                .into(),
        );
    }

    let mut sc = sc_plus.clone();
    for (d, r) in constants.iter() {
        sc.add(d, r);
    }

    let labels = sg
        .spectra
        .iter()
        .map(|s| BasisLabel {
            class_index: s.class_index,
            degree: 2 * s.age,
            min_q: s.min_q,
            mu_g: 2 * s.age as i64 - 1,
            minimal_orbit_mu: orbits
                .iter()
                .find(|o| o.class_index == s.class_index && o.q == s.min_q && o.k == 0)
                .map(|o| o.mu_max),
            note: LABEL_NOTE.to_string(),
        })
        .collect();

    Ok(McKayReport {
        version: REPORT_VERSION.to_string(),
        group: GroupSummary {
            label: None,
            order: group.order(),
            n,
            field_order: group.field_order(),
            class_count: sg.class_count(),
        },
        validation: validation.clone(),
        slope,
        classes: class_rows,
        age_census: census
            .iter()
            .map(|(&age, &classes)| AgeCount { age, classes })
            .collect(),
        orbits,
        pages: Pages {
            sc,
            sc_plus,
            esc_plus,
            constants,
            constants_are_prediction: true,
        },
        f_summands,
        sh_plus,
        obstruction: obstruction_flag(&betti),
        betti,
        euler,
        characteristic_exclusions: primes_up_to(group.order()),
        labels,
        checks: checks.0,
        warnings,
    })
}

fn orbit_checks(sg: &SpectralGroup, catalog: &OrbitCatalog, checks: &mut CheckList) {
    let n = catalog.n as i64;
    let orbits = &catalog.orbits;
    let bad_age = sg
        .spectra
        .iter()
        .find(|s| {
            s.spectrum.min_q().is_some_and(|q| q.value() <= catalog.slope)
                && catalog_age(catalog, s.class_index) != Rational64::from_integer(s.age as i64)
                && catalog.slope >= Rational64::from_integer(1)
        })
        .map(|s| s.class_index);
    checks.add("age_from_catalog", bad_age.is_none(), || {
        format!("class {}", bad_age.unwrap())
    });
    let parity = orbits.iter().all(|o| o.mu % 2 == 0 && o.mu_max.rem_euclid(2) == 1);
    checks.add("mu_even_mu_max_odd", parity, || "parity violated".into());
    let dims = orbits
        .iter()
        .all(|o| o.dim_b == 2 * o.d - 1 && o.mu_max == o.mu + o.dim_b as i64);
    checks.add("morse_bott_dimension", dims, || "dim B != 2d - 1".into());
    let windings = orbits.iter().all(|o| {
        orbits
            .iter()
            .find(|b| b.class_index == o.class_index && b.q == o.q && b.k == 0)
            .is_some_and(|b| b.mu - o.mu == 2 * o.k as i64 * n)
    });
    checks.add("winding_shift", windings, || "mu(k) != mu(0) - 2kn".into());
    let iso_ok = orbits.iter().all(|o| {
        let c = &sg.classes[o.class_index];
        c.centralizer_order.is_multiple_of(o.isotropy.generic_gv_order)
            && o.isotropy.orbit_multiplicity >= 1
            && o.isotropy.orbit_multiplicity as usize <= sg.group.order()
    });
    checks.add("isotropy_bounds", iso_ok, || "isotropy out of range".into());
    // Unwound orbits sit in degrees ≥ −2n (bottom: identity class, μ = −2n).
    let short: Vec<&MorseBottOrbit> = orbits.iter().filter(|o| o.k == 0).collect();
    let short_rank = e1_plain(&OrbitCatalog {
        n: catalog.n,
        slope: catalog.slope,
        orbits: short.iter().map(|o| (*o).clone()).collect(),
    })
    .iter()
    .filter(|(d, _)| *d >= -2 * n)
    .map(|(_, r)| r)
    .sum::<usize>();
    checks.add("short_orbit_rank", short_rank == 2 * short.len(), || {
        format!("rank {short_rank}, {} short orbits", short.len())
    });
}
