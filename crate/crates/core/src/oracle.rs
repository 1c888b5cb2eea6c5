//! Independent cross-checks. Each function here reaches its answer by a
//! route that shares no code with the exact pipeline it audits.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::cyclotomic::{promoted_order, Cyclotomic, CyclotomicError};
use crate::groups::{element_order, MatrixGroup};
use crate::mckay::CheckResult;
use crate::spectrum::{age, eigen_spectrum, EigenSpectrum, SpectralGroup, SpectrumEntry, TurnFraction};

/// Tolerance for snapping floating eigenvalue phases to `k/r`.
pub const SNAP_TOLERANCE: f64 = 1e-6;

/// Spectrum by characters: `mult(ζ_r^k) = (1/r) Σ_j tr(g^j) ζ_r^{−kj}`.
pub fn trace_dft_spectrum(group: &MatrixGroup, idx: usize) -> Result<EigenSpectrum, CyclotomicError> {
    let r = element_order(group, idx) as u64;
    let m = promoted_order(group.field_order(), r)?;
    let mut traces = Vec::with_capacity(r as usize);
    let mut power = 0; // identity is index 0
    for _ in 0..r {
        traces.push(group.element(power).trace().promote(m)?);
        power = group.mul(power, idx);
    }
    let mut entries = Vec::new();
    for k in 1..=r {
        let mut sum = Cyclotomic::zero(m);
        for (j, t) in traces.iter().enumerate() {
            let e = -((k * j as u64 * (m / r)) as i64);
            sum = &sum + &(t * &Cyclotomic::root(m, e));
        }
        let mult = sum
            .to_rational()
            .map(|q| q / num_bigint::BigInt::from(r))
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_usize())
            .expect("character inner product is a nonnegative integer");
        if mult > 0 {
            entries.push(SpectrumEntry {
                q: TurnFraction::new(Rational64::new(k as i64, r as i64)).expect("k/r in (0,1]"),
                mult,
            });
        }
    }
    Ok(EigenSpectrum { entries })
}

/// Spectrum by floating-point Schur decomposition, each phase snapped to
/// the nearest `k/r`. `None` if some eigenvalue is off the unit circle or
/// farther than [`SNAP_TOLERANCE`] from every `r`-th root of unity.
pub fn float_spectrum(group: &MatrixGroup, idx: usize) -> Option<EigenSpectrum> {
    let g = group.element(idx);
    let n = g.rows();
    let r = element_order(group, idx) as i64;
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| g.get(i, j).to_complex());
    let eig = m.eigenvalues()?;
    let mut counts: BTreeMap<TurnFraction, usize> = BTreeMap::new();
    for lambda in eig.iter() {
        if (lambda.norm() - 1.0).abs() > SNAP_TOLERANCE {
            return None;
        }
        let turn = lambda.arg() / std::f64::consts::TAU;
        let turn = if turn <= 0.0 { turn + 1.0 } else { turn };
        let k = (turn * r as f64).round() as i64;
        if (turn - k as f64 / r as f64).abs() > SNAP_TOLERANCE {
            return None;
        }
        *counts.entry(TurnFraction::wrap(Rational64::new(k, r))).or_default() += 1;
    }
    Some(EigenSpectrum {
        entries: counts
            .into_iter()
            .map(|(q, mult)| SpectrumEntry { q, mult })
            .collect(),
    })
}

/// `(1/|G|) Σ_g |C(g)|`, counting commuting pairs directly.
pub fn burnside_class_count(group: &MatrixGroup) -> usize {
    let size = group.order();
    let pairs: usize = (0..size)
        .map(|g| (0..size).filter(|&h| group.commutes(g, h)).count())
        .sum();
    assert_eq!(pairs % size, 0, "commuting pairs divisible by |G|");
    pairs / size
}

/// Age of `diag(ζ_m^{j w_1}, …)` summed over eigenvalue lengths in integer
/// arithmetic: an eigenvalue `ζ_m^r`, `0 < r < m`, contributes `(m − r)/m`.
pub fn lens_power_age(m: u64, weights: &[i64], j: u64) -> Rational64 {
    let m = m as i64;
    let numerator: i64 = weights
        .iter()
        .map(|&w| {
            let r = (j as i64 * w).rem_euclid(m);
            if r == 0 {
                0
            } else {
                m - r
            }
        })
        .sum();
    Rational64::new(numerator, m)
}

/// Age census of a cyclic lens group from all its powers `g^j`, `0 ≤ j < m`.
/// `None` if some age is not an integer.
pub fn lens_age_census(m: u64, weights: &[i64]) -> Option<BTreeMap<u32, usize>> {
    let mut census = BTreeMap::new();
    for j in 0..m {
        let a = lens_power_age(m, weights, j);
        if !a.is_integer() {
            return None;
        }
        *census.entry(a.to_integer() as u32).or_default() += 1;
    }
    Some(census)
}

/// Age from a floating spectrum, `Σ (1 − q)`, for comparison with the exact one.
pub fn float_age(spectrum: &EigenSpectrum) -> f64 {
    spectrum
        .entries
        .iter()
        .map(|e| (1.0 - e.q.value().to_f64().unwrap()) * e.mult as f64)
        .sum()
}

fn result(name: &str, failures: Vec<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: failures.is_empty(),
        detail: (!failures.is_empty()).then(|| {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        }),
    }
}

/// Runs every oracle against every element of the group.
pub fn oracle_suite(sg: &SpectralGroup) -> Vec<CheckResult> {
    let group = &sg.group;
    let n = group.n() as u32;
    let mut dft = Vec::new();
    let mut float = Vec::new();
    let mut integral = Vec::new();
    let mut duality = Vec::new();
    let mut ages = Vec::with_capacity(group.order());
    for idx in 0..group.order() {
        let exact = eigen_spectrum(group, idx);
        let exact = match exact {
            Ok(s) => s,
            Err(e) => {
                integral.push(format!("element {idx}: {e}"));
                ages.push(None);
                continue;
            }
        };
        match trace_dft_spectrum(group, idx) {
            Ok(s) if s == exact => {}
            Ok(s) => dft.push(format!("element {idx}: {s:?}")),
            Err(e) => dft.push(format!("element {idx}: {e}")),
        }
        match float_spectrum(group, idx) {
            Some(s) if s == exact => {}
            other => float.push(format!("element {idx}: {other:?}")),
        }
        match age(&exact) {
            Ok(a) => ages.push(Some(a)),
            Err(e) => {
                integral.push(format!("element {idx}: {e}"));
                ages.push(None);
            }
        }
    }
    let isolated = (1..group.order()).all(|i| {
        ages[i].is_some() && {
            let s = &sg.spectra[crate::groups::class_of(&sg.classes, i)].spectrum;
            s.multiplicity(TurnFraction::one()) == 0
        }
    });
    if isolated {
        for idx in 1..group.order() {
            if let (Some(a), Some(b)) = (ages[idx], ages[group.inverse(idx)]) {
                if a + b != n {
                    duality.push(format!("element {idx}: {a} + {b} != {n}"));
                }
            }
        }
    }
    let burnside = burnside_class_count(group);
    let mut checks = vec![
        result("oracle_trace_dft_spectrum", dft),
        result("oracle_float_spectrum", float),
        result("age_integrality_all_elements", integral),
    ];
    if isolated {
        checks.push(result("age_duality_all_elements", duality));
    }
    checks.push(result(
        "oracle_burnside_class_count",
        if burnside == sg.class_count() {
            vec![]
        } else {
            vec![format!("burnside {burnside}, enumerated {}", sg.class_count())]
        },
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close, DEFAULT_CAP};
    use crate::io::builtin;

    fn group(name: &str) -> MatrixGroup {
        close(&builtin(name).unwrap().generators().unwrap(), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn quaternion_oracles_agree() {
        let sg = SpectralGroup::new(group("binary_dihedral_D4")).unwrap();
        for c in oracle_suite(&sg) {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(burnside_class_count(&sg.group), 5);
    }

    #[test]
    fn lens_oracle() {
        let census = lens_age_census(7, &[1, 2, 4]).unwrap();
        assert_eq!(census, BTreeMap::from([(0, 1), (1, 3), (2, 3)]));
        assert!(lens_age_census(5, &[1, 1]).is_none());
        assert_eq!(lens_power_age(3, &[1, 1, 1], 1), Rational64::from_integer(2));
    }

    #[test]
    fn float_snap_of_quaternion_i() {
        let g = group("cyclic_A3");
        let idx = g.generator_indices()[0];
        let s = float_spectrum(&g, idx).unwrap();
        assert_eq!(s, trace_dft_spectrum(&g, idx).unwrap());
        assert!((float_age(&s) - 1.0).abs() < 1e-12);
    }
}
