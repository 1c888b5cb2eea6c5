//! Exact eigenvalue angles, ages and orbit isotropy data.
//!
//! Angles are [`TurnFraction`]s: an eigenvalue `e^{2πiq}` is recorded by the
//! rational `q ∈ (0, 1]`, so the eigenvalue 1 is `q = 1`, not `q = 0`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{promoted_order, Cyclotomic, CyclotomicError};
use crate::groups::{class_of, conjugacy_classes, element_order, ConjClass, MatrixGroup};
use crate::matrix::{is_parallel, CycMatrix};
use crate::rational::{parse_rational, to_fraction_string};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error("non-integer age {0}; the element is not in SL(n)")]
    NonIntegerAge(String),
    #[error("{q} is not an eigenvalue turn fraction of class {class_index}")]
    NotAnEigenvalue { class_index: usize, q: TurnFraction },
    #[error("eigenvalue multiplicities of element {0} do not add up to n")]
    NotDiagonalizable(usize),
    #[error("orbit multiplicity {0} is not an integer")]
    NonIntegerMultiplicity(String),
}

/// An angle `2πq` with `0 < q ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TurnFraction(Rational64);

impl TurnFraction {
    pub fn new(q: Rational64) -> Option<Self> {
        (q > Rational64::zero() && q <= Rational64::one()).then_some(TurnFraction(q))
    }

    /// Reduces any rational into `(0, 1]`.
    pub fn wrap(q: Rational64) -> Self {
        let f = q - q.floor();
        TurnFraction(if f.is_zero() { Rational64::one() } else { f })
    }

    pub fn one() -> Self {
        TurnFraction(Rational64::one())
    }

    pub fn value(self) -> Rational64 {
        self.0
    }
}

impl fmt::Display for TurnFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_fraction_string(&self.0))
    }
}

impl Serialize for TurnFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TurnFraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .and_then(TurnFraction::new)
            .ok_or_else(|| D::Error::custom(format!("invalid turn fraction {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumEntry {
    pub q: TurnFraction,
    pub mult: usize,
}

/// Eigenvalue turn fractions with multiplicities, sorted by `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EigenSpectrum {
    pub entries: Vec<SpectrumEntry>,
}

impl EigenSpectrum {
    pub fn dimension(&self) -> usize {
        self.entries.iter().map(|e| e.mult).sum()
    }

    pub fn multiplicity(&self, q: TurnFraction) -> usize {
        self.entries
            .iter()
            .find(|e| e.q == q)
            .map_or(0, |e| e.mult)
    }

    /// `Σ_{q' < q} mult(q')`.
    pub fn dims_below(&self, q: TurnFraction) -> usize {
        self.entries
            .iter()
            .take_while(|e| e.q < q)
            .map(|e| e.mult)
            .sum()
    }

    pub fn min_q(&self) -> Option<TurnFraction> {
        self.entries.first().map(|e| e.q)
    }
}

/// Dimension of the fixed subspace of an element (eigenvalue-1 multiplicity).
pub fn fixed_dimension(group: &MatrixGroup, idx: usize) -> Result<usize, CyclotomicError> {
    let g = group.element(idx);
    let id = CycMatrix::identity(g.order(), g.rows());
    Ok(g.sub(&id).nullity())
}

/// Exact spectrum from nullities of `g − ζ_r^k I`, `k = 1..r`.
pub fn eigen_spectrum(group: &MatrixGroup, idx: usize) -> Result<EigenSpectrum, SpectrumError> {
    let r = element_order(group, idx) as u64;
    let n = group.n();
    let m = promoted_order(group.field_order(), r)?;
    let g = group.element(idx).promote(m)?;
    let mut entries = Vec::new();
    let mut total = 0;
    for k in 1..=r {
        let lambda = Cyclotomic::root(m, (k * (m / r)) as i64);
        let nullity = g.sub(&CycMatrix::scalar(m, n, &lambda)).nullity();
        if nullity > 0 {
            let q = TurnFraction::new(Rational64::new(k as i64, r as i64)).expect("k/r in (0,1]");
            entries.push(SpectrumEntry { q, mult: nullity });
            total += nullity;
            if total == n {
                break;
            }
        }
    }
    if total != n {
        return Err(SpectrumError::NotDiagonalizable(idx));
    }
    Ok(EigenSpectrum { entries })
}

/// `Σ (1 − q) · mult`, which must be an integer for elements of SL(n).
pub fn age(spectrum: &EigenSpectrum) -> Result<u32, SpectrumError> {
    let total: Rational64 = spectrum
        .entries
        .iter()
        .map(|e| (Rational64::one() - e.q.value()) * Rational64::from_integer(e.mult as i64))
        .sum();
    if !total.is_integer() {
        return Err(SpectrumError::NonIntegerAge(to_fraction_string(&total)));
    }
    Ok(total.to_integer() as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpectrum {
    pub class_index: usize,
    pub spectrum: EigenSpectrum,
    pub age: u32,
    pub min_q: TurnFraction,
}

/// A group together with its classes and their spectra: the input shared by
/// every downstream computation.
#[derive(Debug, Clone)]
pub struct SpectralGroup {
    pub group: MatrixGroup,
    pub classes: Vec<ConjClass>,
    pub spectra: Vec<ClassSpectrum>,
}

impl SpectralGroup {
    pub fn new(group: MatrixGroup) -> Result<Self, SpectrumError> {
        let classes = conjugacy_classes(&group);
        let spectra = classes
            .iter()
            .enumerate()
            .map(|(class_index, c)| {
                let spectrum = eigen_spectrum(&group, c.rep_index)?;
                Ok(ClassSpectrum {
                    class_index,
                    age: age(&spectrum)?,
                    min_q: spectrum.min_q().expect("nonempty spectrum"),
                    spectrum,
                })
            })
            .collect::<Result<Vec<_>, SpectrumError>>()?;
        Ok(SpectralGroup {
            group,
            classes,
            spectra,
        })
    }

    pub fn n(&self) -> usize {
        self.group.n()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// `k ↦ |Conj_k(G)|`, the number of classes of each age.
pub fn age_census(sg: &SpectralGroup) -> BTreeMap<u32, usize> {
    let mut census = BTreeMap::new();
    for s in &sg.spectra {
        *census.entry(s.age).or_insert(0) += 1;
    }
    census
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyData {
    pub class_index: usize,
    pub q: TurnFraction,
    pub generic_gv_order: usize,
    pub fiber_size: usize,
    pub orbit_multiplicity: u64,
    /// Isotropy orders attained over special eigenvectors (`n ≤ 3` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_gv_orders: Option<Vec<usize>>,
}

fn eigenspace(g: &CycMatrix, r: u64, q: TurnFraction, m: u64) -> Result<CycMatrix, SpectrumError> {
    let k = (q.value() * Rational64::from_integer(r as i64)).to_integer();
    let lambda = Cyclotomic::root(m, k * (m / r) as i64);
    Ok(g.promote(m)?.sub(&CycMatrix::scalar(m, g.rows(), &lambda)))
}

/// `h − ζ_r^k I` for `q = k/r`, with `h` already over a field containing `ζ_r`.
fn shift(h: &CycMatrix, r: u64, q: TurnFraction) -> CycMatrix {
    let m = h.order();
    let k = (q.value() * Rational64::from_integer(r as i64)).to_integer();
    h.sub(&CycMatrix::scalar(m, h.rows(), &Cyclotomic::root(m, k * (m / r) as i64)))
}

/// Reduced row echelon form of a basis: a canonical key for its span.
fn reduced_basis(mut rows: Vec<Vec<Cyclotomic>>) -> Vec<Vec<Cyclotomic>> {
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if !rows[r][c].is_one() {
            let inv = rows[r][c].inverse().expect("nonzero pivot");
            rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[r].clone();
                rows[i] = rows[i].iter().zip(&pivot).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows
}

/// Whether `span(inner) ⊆ span(outer)`.
fn contains(outer: &[Vec<Cyclotomic>], inner: &[Vec<Cyclotomic>]) -> bool {
    let order = outer[0][0].order();
    let rows: Vec<Vec<Cyclotomic>> = outer.iter().chain(inner).cloned().collect();
    CycMatrix::from_rows(order, rows).is_ok_and(|m| m.rank() == outer.len())
}

/// Whether `h` acts on the span of `basis` as a scalar.
fn acts_as_scalar(h: &CycMatrix, basis: &[Vec<Cyclotomic>]) -> bool {
    if h.is_scalar() {
        return true;
    }
    let Some(b0) = basis.first() else { return true };
    if !is_parallel(&h.apply(b0), b0) {
        return false;
    }
    basis[1..].iter().all(|b| {
        let sum: Vec<Cyclotomic> = b0.iter().zip(b).map(|(x, y)| x + y).collect();
        is_parallel(&h.apply(b), b) && is_parallel(&h.apply(&sum), &sum)
    })
}

fn stabilizer_order(
    sg: &SpectralGroup,
    centralizer: &[usize],
    basis: &[Vec<Cyclotomic>],
    m: u64,
) -> Result<usize, SpectrumError> {
    let mut count = 0;
    for &h in centralizer {
        if acts_as_scalar(&sg.group.element(h).promote(m)?, basis) {
            count += 1;
        }
    }
    Ok(count)
}

/// Isotropy of the eigenspace `V_{g,q}` of the class representative `g`.
pub fn isotropy(
    sg: &SpectralGroup,
    class_index: usize,
    q: TurnFraction,
) -> Result<IsotropyData, SpectrumError> {
    let class = &sg.classes[class_index];
    let d = sg.spectra[class_index].spectrum.multiplicity(q);
    if d == 0 {
        return Err(SpectrumError::NotAnEigenvalue { class_index, q });
    }
    let group = &sg.group;
    let g_idx = class.rep_index;
    let r = element_order(group, g_idx) as u64;
    let m = promoted_order(group.field_order(), r)?;
    let g = group.element(g_idx);
    let shifted = eigenspace(g, r, q, m)?;
    let basis = shifted.nullspace();
    debug_assert_eq!(basis.len(), d);

    let centralizer: Vec<usize> = (0..group.order())
        .filter(|&h| group.commutes(g_idx, h))
        .collect();
    debug_assert_eq!(centralizer.len(), class.centralizer_order);
    // The centralizer preserves V, so on a line it acts by scalars.
    let generic = if d == 1 {
        centralizer.len()
    } else {
        stabilizer_order(sg, &centralizer, &basis, m)?
    };
    debug_assert_eq!(class.centralizer_order % generic, 0);

    let mult = q.value() * Rational64::from_integer(generic as i64);
    if !mult.is_integer() {
        return Err(SpectrumError::NonIntegerMultiplicity(to_fraction_string(&mult)));
    }

    let special_gv_orders = if group.n() <= 3 && d >= 2 {
        // One field containing every eigenvalue, so reduced bases of equal
        // subspaces coincide.
        let big = promoted_order(m, exponent(group))?;
        let top = shifted.promote(big)?;
        let lifted: Vec<CycMatrix> = centralizer
            .iter()
            .map(|&h| group.element(h).promote(big))
            .collect::<Result<_, _>>()?;
        let top_basis = top.nullspace();
        // h acts as a scalar on W ⊂ V iff W lies in one of the intersections
        // E_{h,λ} ∩ V, so stabilizers are counted from those intersections.
        let mut intersections: Vec<Vec<Vec<Vec<Cyclotomic>>>> = Vec::new();
        for (&h, hm) in centralizer.iter().zip(&lifted) {
            if acts_as_scalar(hm, &top_basis) {
                continue;
            }
            let rh = element_order(group, h) as u64;
            let mut pieces = Vec::new();
            for e in &sg.spectra[class_of(&sg.classes, h)].spectrum.entries {
                let w = top.vstack(&shift(hm, rh, e.q)).nullspace();
                if !w.is_empty() {
                    pieces.push(reduced_basis(w));
                }
            }
            intersections.push(pieces);
        }
        let candidates: HashSet<&Vec<Vec<Cyclotomic>>> = intersections.iter().flatten().collect();
        let mut seen = BTreeSet::from([generic]);
        for w in candidates {
            let extra = intersections
                .iter()
                .filter(|pieces| pieces.iter().any(|u| u == w || (u.len() > w.len() && contains(u, w))))
                .count();
            seen.insert(generic + extra);
        }
        Some(seen.into_iter().collect())
    } else {
        None
    };

    Ok(IsotropyData {
        class_index,
        q,
        generic_gv_order: generic,
        fiber_size: class.centralizer_order / generic,
        orbit_multiplicity: mult.to_integer() as u64,
        special_gv_orders,
    })
}

/// The lcm of all element orders; every eigenvalue denominator divides it.
pub fn exponent(group: &MatrixGroup) -> u64 {
    (0..group.order()).fold(1u64, |acc, g| acc.lcm(&(element_order(group, g) as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close, DEFAULT_CAP};

    fn tf(a: i64, b: i64) -> TurnFraction {
        TurnFraction::new(Rational64::new(a, b)).unwrap()
    }

    fn sg(gens: Vec<CycMatrix>) -> SpectralGroup {
        SpectralGroup::new(close(&gens, DEFAULT_CAP).unwrap()).unwrap()
    }

    fn pm_i2() -> SpectralGroup {
        sg(vec![CycMatrix::scalar(2, 2, &Cyclotomic::from_integer(2, -1))])
    }

    #[test]
    fn spectra_of_scalars() {
        let g = pm_i2();
        let s = &g.spectra[1].spectrum;
        assert_eq!(s.entries, vec![SpectrumEntry { q: tf(1, 2), mult: 2 }]);
        assert_eq!(g.spectra[1].age, 1);
        assert_eq!(g.spectra[0].age, 0);

        let z3 = sg(vec![CycMatrix::scalar(3, 3, &Cyclotomic::root(3, 1))]);
        let ages: Vec<u32> = z3.spectra.iter().map(|s| s.age).collect();
        assert_eq!(ages, vec![0, 2, 1]);
        assert_eq!(z3.spectra[1].spectrum.entries[0].q, tf(1, 3));
        assert_eq!(age_census(&z3), BTreeMap::from([(0, 1), (1, 1), (2, 1)]));
    }

    #[test]
    fn quaternion_spectrum() {
        let i = CycMatrix::diagonal(4, &[Cyclotomic::root(4, 1), Cyclotomic::root(4, 3)]).unwrap();
        let j = CycMatrix::from_rows(
            4,
            vec![
                vec![Cyclotomic::zero(4), Cyclotomic::from_integer(4, -1)],
                vec![Cyclotomic::one(4), Cyclotomic::zero(4)],
            ],
        )
        .unwrap();
        let q8 = sg(vec![i, j]);
        let s = eigen_spectrum(&q8.group, q8.group.generator_indices()[0]).unwrap();
        assert_eq!(
            s.entries,
            vec![
                SpectrumEntry { q: tf(1, 4), mult: 1 },
                SpectrumEntry { q: tf(3, 4), mult: 1 }
            ]
        );
        assert_eq!(age_census(&q8), BTreeMap::from([(0, 1), (1, 4)]));
    }

    #[test]
    fn isotropy_of_pm_identity() {
        let g = pm_i2();
        let minus = isotropy(&g, 1, tf(1, 2)).unwrap();
        assert_eq!(
            (minus.generic_gv_order, minus.fiber_size, minus.orbit_multiplicity),
            (2, 1, 1)
        );
        let ident = isotropy(&g, 0, TurnFraction::one()).unwrap();
        assert_eq!((ident.generic_gv_order, ident.orbit_multiplicity), (2, 2));
        assert_eq!(ident.special_gv_orders, Some(vec![2]));
        assert!(matches!(
            isotropy(&g, 1, tf(1, 4)),
            Err(SpectrumError::NotAnEigenvalue { .. })
        ));
    }

    #[test]
    fn isotropy_of_trivial_group() {
        let t = sg(vec![CycMatrix::identity(1, 2)]);
        let iso = isotropy(&t, 0, TurnFraction::one()).unwrap();
        assert_eq!((iso.generic_gv_order, iso.orbit_multiplicity), (1, 1));
    }

    #[test]
    fn special_isotropy_detects_coordinate_axes() {
        // On the identity eigenspace of <diag(i, -i)> only ±I act as scalars,
        // but every element fixes the coordinate axes.
        let a = CycMatrix::diagonal(4, &[Cyclotomic::root(4, 1), Cyclotomic::root(4, 3)]).unwrap();
        let g = sg(vec![a]);
        let iso = isotropy(&g, 0, TurnFraction::one()).unwrap();
        assert_eq!(iso.generic_gv_order, 2);
        assert_eq!(iso.special_gv_orders, Some(vec![2, 4]));
    }

    #[test]
    fn wrap_maps_into_half_open_interval() {
        assert_eq!(TurnFraction::wrap(Rational64::from_integer(0)), TurnFraction::one());
        assert_eq!(TurnFraction::wrap(Rational64::new(-1, 3)), tf(2, 3));
        assert_eq!(TurnFraction::wrap(Rational64::new(7, 4)), tf(3, 4));
    }
}
