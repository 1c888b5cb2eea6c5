//! Conley–Zehnder indices of rotation paths and Morse–Bott orbit families.
//!
//! Every angle is an exact rational number of turns (`t = 2πs`), so the
//! integer branch of `W` is decided exactly.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CzError {
    #[error("Morse-Bott dimension {0} is even; orbit families have odd dimension")]
    ParityViolation(i64),
    #[error("weights sum to {sum}, expected {expected}")]
    WeightSumMismatch { sum: i64, expected: i64 },
}

/// Index of the loop `e^{iτ}`, `τ ∈ [0, 2πs]`: `2⌊s⌋ + 1` off the integers,
/// `2s` on them.
pub fn w_function(s: Rational64) -> i64 {
    if s.is_integer() {
        2 * s.to_integer()
    } else {
        2 * s.floor().to_integer() + 1
    }
}

/// Index of `diag(e^{2πi s_j τ})` over `τ ∈ [0, 1]`.
pub fn cz_rotation_path(turns: &[Rational64]) -> i64 {
    turns.iter().copied().map(w_function).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRecord {
    pub cz: i64,
    pub mu: i64,
}

/// Index of the orbit family `B` of dimension `dim_b` in a class of the given
/// age, wound `k` extra times.
///
/// `sum_smaller_dims` is the total multiplicity of eigenvalues with strictly
/// smaller turn fraction.
pub fn cz_morse_bott(
    n: i64,
    age: i64,
    sum_smaller_dims: i64,
    dim_b: i64,
    k: i64,
) -> Result<IndexRecord, CzError> {
    if dim_b % 2 == 0 {
        return Err(CzError::ParityViolation(dim_b));
    }
    let cz = n - 2 * age + 2 * sum_smaller_dims + (dim_b + 1) / 2 + 2 * k * n;
    let mu = 2 * age - 2 * sum_smaller_dims - dim_b - 1 - 2 * k * n;
    // μ = n − CZ − ½ − ½·dim B, doubled to stay in the integers.
    assert_eq!(2 * mu, 2 * n - 2 * cz - 1 - dim_b, "grading shift mismatch");
    debug_assert_eq!(mu % 2, 0);
    Ok(IndexRecord { cz, mu })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantOrbitBound {
    pub index: IndexRecord,
    /// `(3 − c) · n` for slope `cπ`.
    #[serde(with = "crate::rational::serde_fraction")]
    pub bound: Rational64,
    pub holds: bool,
}

/// Grading of the constant orbit of the Hamiltonian with slope `cπ` whose
/// linearised flow rotates coordinate `j` with weight `m_j`.
pub fn constant_orbit_bound(
    weights: &[i64],
    slope_pi: Rational64,
) -> Result<ConstantOrbitBound, CzError> {
    let n = weights.len() as i64;
    let sum: i64 = weights.iter().sum();
    if sum != -n {
        return Err(CzError::WeightSumMismatch { sum, expected: -n });
    }
    // W(−cπ m_j) in turns is W at −c·m_j/2.
    let turns: Vec<Rational64> = weights
        .iter()
        .map(|&m| -slope_pi * Rational64::from_integer(m) / Rational64::from_integer(2))
        .collect();
    let cz = cz_rotation_path(&turns);
    let mu = n - cz;
    let bound = (Rational64::from_integer(3) - slope_pi) * Rational64::from_integer(n);
    Ok(ConstantOrbitBound {
        index: IndexRecord { cz, mu },
        bound,
        holds: Rational64::from_integer(mu) <= bound,
    })
}

/// The inequality `W(2πs) ≥ 2⌊s⌋` behind the constant-orbit bound.
pub fn w_lower_bound_holds(s: Rational64) -> bool {
    w_function(s) >= 2 * s.floor().to_integer()
}
