//! Orbit bookkeeping: the Morse–Bott orbit catalog, the first pages of the
//! plain and equivariant spectral sequences, the per-class `𝔽`-summands and
//! the resulting ranks of the positive symplectic cohomology.
//!
//! Nothing here solves Floer equations; every statement is at the level of
//! ranks, which the parity argument makes sufficient.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::czindex::{cz_morse_bott, CzError};
use crate::spectrum::{isotropy, IsotropyData, SpectralGroup, SpectrumError, TurnFraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloerError {
    #[error("class {class_index} has eigenvalue 1; the group does not act freely off the origin")]
    NotIsolated { class_index: usize },
    #[error("slope must be positive")]
    NonPositiveSlope,
    #[error("slope {0} is below one turn; not every class has a short orbit")]
    SlopeTooSmall(String),
    #[error("class {class_index}: odd degree {degree} is not covered")]
    CoverageGap { class_index: usize, degree: i64 },
    #[error("class {class_index}: degree {degree} is covered more than once or above the top grading")]
    CoverageOverlap { class_index: usize, degree: i64 },
    #[error("the stacked summands do not reproduce the equivariant page")]
    StackMismatch,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Cz(#[from] CzError),
}

/// One orbit family `B` in class `g` with period `q + k` turns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseBottOrbit {
    pub class_index: usize,
    pub q: TurnFraction,
    pub k: u32,
    #[serde(with = "crate::rational::serde_fraction")]
    pub period: Rational64,
    pub d: usize,
    pub dim_b: usize,
    pub cz: i64,
    pub mu: i64,
    pub mu_max: i64,
    pub isotropy: IsotropyData,
}

impl MorseBottOrbit {
    /// Degrees of the `d` equivariant generators, ascending.
    pub fn equivariant_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.d as i64).map(move |j| self.mu + 1 + 2 * j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCatalog {
    pub n: usize,
    pub slope: Rational64,
    pub orbits: Vec<MorseBottOrbit>,
}

/// All orbit families of period at most `slope` turns, ordered by period and
/// then by class.
pub fn orbit_catalog(sg: &SpectralGroup, slope: Rational64) -> Result<OrbitCatalog, FloerError> {
    if slope <= Rational64::zero() {
        return Err(FloerError::NonPositiveSlope);
    }
    let n = sg.n();
    for (class_index, s) in sg.spectra.iter().enumerate() {
        if sg.classes[class_index].rep_index != 0 && s.spectrum.multiplicity(TurnFraction::one()) > 0 {
            return Err(FloerError::NotIsolated { class_index });
        }
    }
    let mut orbits = Vec::new();
    for (class_index, s) in sg.spectra.iter().enumerate() {
        for e in &s.spectrum.entries {
            if e.q.value() > slope {
                continue;
            }
            let iso = isotropy(sg, class_index, e.q)?;
            let below = s.spectrum.dims_below(e.q) as i64;
            let dim_b = 2 * e.mult - 1;
            let mut k = 0u32;
            loop {
                let period = e.q.value() + Rational64::from_integer(k as i64);
                if period > slope {
                    break;
                }
                let idx = cz_morse_bott(n as i64, s.age as i64, below, dim_b as i64, k as i64)?;
                orbits.push(MorseBottOrbit {
                    class_index,
                    q: e.q,
                    k,
                    period,
                    d: e.mult,
                    dim_b,
                    cz: idx.cz,
                    mu: idx.mu,
                    mu_max: idx.mu + dim_b as i64,
                    isotropy: iso.clone(),
                });
                k += 1;
            }
        }
    }
    orbits.sort_by_key(|o| (o.period, o.class_index));
    Ok(OrbitCatalog { n, slope, orbits })
}

/// A finitely supported map from degree to rank.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedRankTable {
    ranks: BTreeMap<i64, usize>,
}

impl GradedRankTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, degree: i64, rank: usize) {
        if rank > 0 {
            *self.ranks.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// `(degree, rank)` pairs with positive rank, ascending by degree.
    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.ranks.iter().map(|(d, r)| (*d, *r))
    }

    pub fn support(&self) -> Vec<i64> {
        self.ranks.keys().copied().collect()
    }
}

impl FromIterator<(i64, usize)> for GradedRankTable {
    fn from_iter<I: IntoIterator<Item = (i64, usize)>>(iter: I) -> Self {
        let mut t = Self::new();
        for (d, r) in iter {
            t.add(d, r);
        }
        t
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeRank {
    degree: i64,
    rank: usize,
}

impl Serialize for GradedRankTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|(degree, rank)| DegreeRank { degree, rank }))
    }
}

impl<'de> Deserialize<'de> for GradedRankTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<DegreeRank>::deserialize(d)?;
        Ok(rows.into_iter().map(|r| (r.degree, r.rank)).collect())
    }
}

/// Each orbit contributes rank one at its bottom and top degree.
pub fn e1_plain(catalog: &OrbitCatalog) -> GradedRankTable {
    catalog
        .orbits
        .iter()
        .flat_map(|o| [(o.mu, 1), (o.mu_max, 1)])
        .collect()
}

/// Each orbit contributes `d` generators in consecutive odd degrees above `μ`.
pub fn e1_equivariant(catalog: &OrbitCatalog) -> GradedRankTable {
    catalog
        .orbits
        .iter()
        .flat_map(|o| o.equivariant_degrees().map(|deg| (deg, 1)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FSummand {
    pub class_index: usize,
    pub mu_g: i64,
    /// Odd degrees reached within the slope horizon, descending from `mu_g`.
    pub covered_degrees: Vec<i64>,
}

/// Checks that each class's equivariant generators form one unbroken
/// descending run of odd degrees starting at `2·age − 1`.
pub fn stack_f_summands(
    sg: &SpectralGroup,
    catalog: &OrbitCatalog,
) -> Result<Vec<FSummand>, FloerError> {
    if catalog.slope < Rational64::one() {
        return Err(FloerError::SlopeTooSmall(crate::rational::to_fraction_string(
            &catalog.slope,
        )));
    }
    let mut summands = Vec::with_capacity(sg.class_count());
    for (class_index, s) in sg.spectra.iter().enumerate() {
        let mu_g = 2 * s.age as i64 - 1;
        let mut degrees: Vec<i64> = catalog
            .orbits
            .iter()
            .filter(|o| o.class_index == class_index)
            .flat_map(|o| o.equivariant_degrees().collect::<Vec<_>>())
            .collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        match degrees.first() {
            None => return Err(FloerError::CoverageGap { class_index, degree: mu_g }),
            Some(&top) if top < mu_g => {
                return Err(FloerError::CoverageGap { class_index, degree: mu_g })
            }
            Some(&top) if top > mu_g => {
                return Err(FloerError::CoverageOverlap { class_index, degree: top })
            }
            Some(_) => {}
        }
        for w in degrees.windows(2) {
            match w[0] - w[1] {
                2 => {}
                0 => {
                    return Err(FloerError::CoverageOverlap { class_index, degree: w[0] })
                }
                _ => {
                    return Err(FloerError::CoverageGap {
                        class_index,
                        degree: w[0] - 2,
                    })
                }
            }
        }
        summands.push(FSummand {
            class_index,
            mu_g,
            covered_degrees: degrees,
        });
    }
    let stacked: GradedRankTable = summands
        .iter()
        .flat_map(|f| f.covered_degrees.iter().map(|&d| (d, 1)))
        .collect();
    if stacked != e1_equivariant(catalog) {
        return Err(FloerError::StackMismatch);
    }
    Ok(summands)
}

/// Ranks of the positive symplectic cohomology: one generator per summand,
/// in degree `μ_g`; even degrees vanish.
pub fn gysin_solve(summands: &[FSummand]) -> GradedRankTable {
    summands.iter().map(|f| (f.mu_g, 1)).collect()
}

/// True when every generator sits in odd degree, so no differential can be
/// nonzero.
pub fn parity_degeneration(table: &GradedRankTable) -> bool {
    table.iter().all(|(d, _)| d.rem_euclid(2) == 1)
}

/// `Σ (1 − q)·d` over the unwound orbits of a class, read off the catalog.
pub fn catalog_age(catalog: &OrbitCatalog, class_index: usize) -> Rational64 {
    catalog
        .orbits
        .iter()
        .filter(|o| o.class_index == class_index && o.k == 0)
        .map(|o| (Rational64::one() - o.q.value()) * Rational64::from_integer(o.d as i64))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::groups::{close, DEFAULT_CAP};
    use crate::matrix::CycMatrix;

    fn sg(g: CycMatrix) -> SpectralGroup {
        SpectralGroup::new(close(&[g], DEFAULT_CAP).unwrap()).unwrap()
    }

    fn pm_i2() -> SpectralGroup {
        sg(CycMatrix::scalar(2, 2, &Cyclotomic::from_integer(2, -1)))
    }

    fn z3() -> SpectralGroup {
        sg(CycMatrix::scalar(3, 3, &Cyclotomic::root(3, 1)))
    }

    fn slope(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn pm_identity_catalog() {
        let cat = orbit_catalog(&pm_i2(), slope(2, 1)).unwrap();
        let mus: Vec<i64> = cat.orbits.iter().map(|o| o.mu).collect();
        let maxes: Vec<i64> = cat.orbits.iter().map(|o| o.mu_max).collect();
        assert_eq!(mus, vec![-2, -4, -6, -8]);
        assert_eq!(maxes, vec![1, -1, -3, -5]);
        assert_eq!(
            e1_plain(&cat).support(),
            vec![-8, -6, -5, -4, -3, -2, -1, 1]
        );
    }

    #[test]
    fn z3_catalog_and_pages() {
        let g = z3();
        let cat = orbit_catalog(&g, slope(2, 1)).unwrap();
        let mut mus: Vec<i64> = cat.orbits.iter().map(|o| o.mu).collect();
        mus.sort_unstable();
        assert_eq!(mus, vec![-12, -10, -8, -6, -4, -2]);
        let short = orbit_catalog(&g, slope(1, 1)).unwrap();
        assert_eq!(e1_plain(&short).support(), vec![-6, -4, -2, -1, 1, 3]);
        let eq = e1_equivariant(&short);
        assert!(parity_degeneration(&eq));
        let summands = stack_f_summands(&g, &short).unwrap();
        let tops: Vec<i64> = summands.iter().map(|f| f.mu_g).collect();
        assert_eq!(tops, vec![-1, 3, 1]);
        let sh = gysin_solve(&summands);
        assert_eq!(sh.iter().collect::<Vec<_>>(), vec![(-1, 1), (1, 1), (3, 1)]);
    }

    #[test]
    fn trivial_group_single_orbit() {
        let t = sg(CycMatrix::identity(1, 3));
        let cat = orbit_catalog(&t, slope(1, 1)).unwrap();
        assert_eq!(cat.orbits.len(), 1);
        let o = &cat.orbits[0];
        assert_eq!((o.d, o.dim_b, o.mu), (3, 5, -6));
        let f = stack_f_summands(&t, &cat).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].mu_g, -1);
    }

    #[test]
    fn non_isolated_is_rejected() {
        let g = sg(
            CycMatrix::diagonal(
                3,
                &[Cyclotomic::root(3, 1), Cyclotomic::root(3, 2), Cyclotomic::one(3)],
            )
            .unwrap(),
        );
        assert!(matches!(
            orbit_catalog(&g, slope(1, 1)),
            Err(FloerError::NotIsolated { .. })
        ));
    }

    #[test]
    fn parity_examples() {
        assert!(parity_degeneration(&GradedRankTable::new()));
        assert!(!parity_degeneration(&[(0, 1)].into_iter().collect()));
        assert!(parity_degeneration(&[(-3, 2), (1, 1)].into_iter().collect()));
    }

    #[test]
    fn table_round_trips_through_json() {
        let t: GradedRankTable = [(-1, 1), (3, 2)].into_iter().collect();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"[{"degree":-1,"rank":1},{"degree":3,"rank":2}]"#);
        assert_eq!(serde_json::from_str::<GradedRankTable>(&s).unwrap(), t);
    }
}
