//! Numerical checks of radial Hamiltonian profiles and the filtration value
//! `T(ρ) = −φ(ρ)h′(ρ) + f(ρ)`, `f(R) = ∫₀^R φ′h′`.
//!
//! Radii and Reeb periods here are plain `f64` in radians; nothing in this
//! module feeds back into the exact pipeline.

use std::f64::consts::TAU;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::to_fraction_string;
use crate::spectrum::SpectralGroup;

/// Tolerance of every profile check.
pub const TOLERANCE: f64 = 1e-9;
/// Target absolute error of `f`.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
const GRID_POINTS: usize = 4001;
const FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiltrationError {
    #[error("quadrature on [{a}, {b}] missed the error target (estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },
    #[error("final slope {0} turns lies in (1/|G|)Z and can be a Reeb period")]
    NonGenericSlope(String),
    #[error("invalid profile: {0}")]
    Invalid(String),
}

/// `Σ c_i (R − start)^i` on `[start, next start)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub start: f64,
    pub coeffs: Vec<f64>,
}

impl Piece {
    fn eval(&self, r: f64, derivative: usize) -> f64 {
        let x = r - self.start;
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate().skip(derivative).rev() {
            let falling: f64 = (0..derivative).map(|j| (i - j) as f64).product();
            acc = acc * x + c * falling;
        }
        acc
    }
}

/// A piecewise polynomial on `[0, ∞)`, degree at most 4 per piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PiecewisePolynomial {
    pieces: Vec<Piece>,
}

impl PiecewisePolynomial {
    pub fn new(pieces: Vec<Piece>) -> Result<Self, FiltrationError> {
        if pieces.first().map(|p| p.start) != Some(0.0) {
            return Err(FiltrationError::Invalid("first piece must start at 0".into()));
        }
        if pieces.windows(2).any(|w| w[1].start <= w[0].start) {
            return Err(FiltrationError::Invalid("piece starts must increase".into()));
        }
        if pieces.iter().any(|p| p.coeffs.len() > 5 || p.coeffs.iter().any(|c| !c.is_finite())) {
            return Err(FiltrationError::Invalid(
                "pieces need at most 5 finite coefficients".into(),
            ));
        }
        Ok(PiecewisePolynomial { pieces })
    }

    fn piece(&self, r: f64) -> &Piece {
        let i = self.pieces.partition_point(|p| p.start <= r);
        &self.pieces[i.saturating_sub(1)]
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.piece(r).eval(r, 0)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.piece(r).eval(r, 1)
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        self.piece(r).eval(r, 2)
    }

    /// Interior knots (piece boundaries other than 0).
    pub fn knots(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.start).collect()
    }

    /// `(left limit, right limit)` of the value at each interior knot.
    fn jumps(&self) -> Vec<(f64, f64, f64)> {
        self.pieces
            .windows(2)
            .map(|w| (w[1].start, w[0].eval(w[1].start, 0), w[1].eval(w[1].start, 0)))
            .collect()
    }
}

/// Radial data `(h′, φ)` with the radii where they change behaviour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianProfile {
    pub r0: f64,
    pub r1: f64,
    /// Radius beyond which `φ = 1`.
    pub r_flat: f64,
    pub h_prime: PiecewisePolynomial,
    pub phi: PiecewisePolynomial,
    /// Reeb periods in radians, ascending and distinct.
    pub reeb_periods: Vec<f64>,
}

/// Profile section of an input file. With only `final_slope` (turns) the
/// standard quadratic-then-linear profile is built; otherwise all of `r0`,
/// `r1`, `r_flat`, `h_prime` and `phi` must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_slope: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_flat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_prime: Option<Vec<Piece>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Piece>>,
}

/// Picks a final slope near `slope` that avoids `(1/|G|)ℤ`.
pub fn generic_final_slope(slope: Rational64, group_order: usize) -> Rational64 {
    let g = Rational64::from_integer(group_order as i64);
    if (slope * g).is_integer() {
        slope + Rational64::new(1, 2 * group_order as i64)
    } else {
        slope
    }
}

/// Reeb periods in turns up to `up_to`: `q + k` for every eigenvalue turn
/// `q` of every class, ascending and distinct.
pub fn reeb_periods(sg: &SpectralGroup, up_to: Rational64) -> Vec<Rational64> {
    let mut out = Vec::new();
    for s in &sg.spectra {
        for e in &s.spectrum.entries {
            let mut p = e.q.value();
            while p <= up_to {
                out.push(p);
                p += Rational64::from_integer(1);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Distinct periods in radians from periods in turns.
pub fn periods_in_radians(turns: &[Rational64]) -> Vec<f64> {
    let mut out: Vec<Rational64> = turns.to_vec();
    out.sort();
    out.dedup();
    out.iter()
        .map(|q| TAU * q.to_f64().expect("finite period"))
        .collect()
}

impl HamiltonianProfile {
    /// `h = R²/4` capped at slope `K = 2π·final_slope`, with a cubic cut-off
    /// `φ` rising on `(R0, R1)`, `R0 = τ_min` and `R1 = 2K`.
    pub fn standard(
        periods_turns: &[Rational64],
        final_slope: Rational64,
        group_order: usize,
    ) -> Result<Self, FiltrationError> {
        if (final_slope * Rational64::from_integer(group_order as i64)).is_integer() {
            return Err(FiltrationError::NonGenericSlope(to_fraction_string(&final_slope)));
        }
        let k = TAU * final_slope.to_f64().expect("finite slope");
        let periods: Vec<f64> = periods_in_radians(periods_turns)
            .into_iter()
            .filter(|&t| t < k)
            .collect();
        let tau_min = *periods
            .first()
            .ok_or_else(|| FiltrationError::Invalid("no Reeb period below the final slope".into()))?;
        let (r0, r1) = (tau_min, 2.0 * k);
        let width = r1 - r0;
        let h_prime = PiecewisePolynomial::new(vec![
            Piece { start: 0.0, coeffs: vec![0.0, 0.5] },
            Piece { start: r1, coeffs: vec![k] },
        ])?;
        // 3t² − 2t³ with t = (R − R0)/(R1 − R0).
        let phi = PiecewisePolynomial::new(vec![
            Piece { start: 0.0, coeffs: vec![0.0] },
            Piece {
                start: r0,
                coeffs: vec![0.0, 0.0, 3.0 / width.powi(2), -2.0 / width.powi(3)],
            },
            Piece { start: r1, coeffs: vec![1.0] },
        ])?;
        Ok(HamiltonianProfile {
            r0,
            r1,
            r_flat: r1,
            h_prime,
            phi,
            reeb_periods: periods,
        })
    }

    /// Builds a profile from an input section. `periods_turns` come from the
    /// orbit catalog; `default_slope` is used when the section names none.
    pub fn from_spec(
        spec: &ProfileSpec,
        periods_turns: &[Rational64],
        default_slope: Rational64,
        group_order: usize,
    ) -> Result<Self, FiltrationError> {
        match (&spec.r0, &spec.r1, &spec.r_flat, &spec.h_prime, &spec.phi) {
            (None, None, None, None, None) => {
                let slope = match &spec.final_slope {
                    Some(s) => crate::rational::parse_rational(s)
                        .ok_or_else(|| FiltrationError::Invalid(format!("bad final_slope {s:?}")))?,
                    None => generic_final_slope(default_slope, group_order),
                };
                Self::standard(periods_turns, slope, group_order)
            }
            (Some(r0), Some(r1), Some(r_flat), Some(h), Some(phi)) => {
                if !(0.0 < *r0 && r0 < r1 && r1 <= r_flat) {
                    return Err(FiltrationError::Invalid("need 0 < r0 < r1 <= r_flat".into()));
                }
                Ok(HamiltonianProfile {
                    r0: *r0,
                    r1: *r1,
                    r_flat: *r_flat,
                    h_prime: PiecewisePolynomial::new(h.clone())?,
                    phi: PiecewisePolynomial::new(phi.clone())?,
                    reeb_periods: periods_in_radians(periods_turns),
                })
            }
            _ => Err(FiltrationError::Invalid(
                "give either final_slope alone or all of r0, r1, r_flat, h_prime, phi".into(),
            )),
        }
    }

    fn knots(&self) -> Vec<f64> {
        let mut k = self.h_prime.knots();
        k.extend(self.phi.knots());
        k.extend([self.r0, self.r1, self.r_flat]);
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    fn integrand(&self, r: f64) -> f64 {
        self.phi.derivative(r) * self.h_prime.eval(r)
    }

    /// `∫_a^b φ′h′`, split at every knot.
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64, FiltrationError> {
        if b <= a {
            return Ok(0.0);
        }
        let mut cuts = vec![a];
        cuts.extend(self.knots().into_iter().filter(|&k| k > a && k < b));
        cuts.push(b);
        let pieces = cuts.len() - 1;
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let out = quadrature::integrate(
                |r| self.integrand(r),
                w[0],
                w[1],
                QUADRATURE_TOLERANCE / (4.0 * pieces as f64),
            );
            if !(out.integral.is_finite() && out.error_estimate <= QUADRATURE_TOLERANCE / pieces as f64) {
                return Err(FiltrationError::QuadratureFailure {
                    a: w[0],
                    b: w[1],
                    estimate: out.error_estimate,
                });
            }
            total += out.integral;
        }
        Ok(total)
    }
}

/// `f(R) = ∫₀^R φ′(τ)h′(τ) dτ`.
pub fn f_primitive(profile: &HamiltonianProfile, r: f64) -> Result<f64, FiltrationError> {
    profile.integrate(0.0, r.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterValue {
    pub rho: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

fn t_from_f(profile: &HamiltonianProfile, rho: f64, f: f64) -> f64 {
    -profile.phi.eval(rho) * profile.h_prime.eval(rho) + f
}

pub fn filtration_value(
    profile: &HamiltonianProfile,
    rho: f64,
) -> Result<FilterValue, FiltrationError> {
    let f = f_primitive(profile, rho)?;
    Ok(FilterValue {
        rho,
        t: t_from_f(profile, rho, f),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileCheck {
    pub name: String,
    pub passed: bool,
    /// A sample point or value witnessing failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Filtration value of the slice of orbits with a given period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceValue {
    pub period: f64,
    pub rho: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileReport {
    pub checks: Vec<ProfileCheck>,
    pub slices: Vec<SliceValue>,
}

impl ProfileReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&ProfileCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checks(Vec<ProfileCheck>);

impl Checks {
    /// Records the first failing sample, if any.
    fn push<I: IntoIterator<Item = (f64, bool)>>(&mut self, name: &str, samples: I) {
        let witness = samples
            .into_iter()
            .find(|(_, ok)| !ok)
            .map(|(r, _)| format!("R = {r:.9}"));
        self.0.push(ProfileCheck {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }

    fn push_flag(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        self.0.push(ProfileCheck {
            name: name.to_string(),
            passed: ok,
            witness: (!ok).then(witness),
        });
    }
}

/// Inverts the non-decreasing `h′` on `[r0, r1]` by bisection.
fn radius_of_slope(profile: &HamiltonianProfile, tau: f64) -> Option<f64> {
    let (mut lo, mut hi) = (profile.r0, profile.r1);
    let h = |r| profile.h_prime.eval(r);
    if !(h(lo) < tau && tau < h(hi)) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Runs every admissibility and filtration check on a sampling grid.
pub fn verify_profile(profile: &HamiltonianProfile) -> Result<ProfileReport, FiltrationError> {
    let p = profile;
    let tol = TOLERANCE;
    let r_end = 1.25 * p.r_flat + 1.0;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| r_end * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let mut fvals = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &r in &grid {
        acc += p.integrate(prev, r)?;
        fvals.push(acc);
        prev = r;
    }
    let tvals: Vec<f64> = grid
        .iter()
        .zip(&fvals)
        .map(|(&r, &f)| t_from_f(p, r, f))
        .collect();
    let is_period = |s: f64| p.reeb_periods.iter().any(|t| (t - s).abs() <= tol);
    let after_r0 = || grid.iter().copied().filter(move |&r| r > p.r0);
    let mut checks = Checks(Vec::new());

    let min_period = p.reeb_periods.first().copied().unwrap_or(f64::INFINITY);
    let h_r0 = p.h_prime.eval(p.r0);
    checks.push_flag(
        "slope_at_r0_below_min_period",
        h_r0 > 0.0 && h_r0 < min_period,
        || format!("h'(R0) = {h_r0:.9}, minimal period {min_period:.9}"),
    );
    checks.push_flag("convex_at_r0", p.h_prime.derivative(p.r0) > 0.0, || {
        format!("h''(R0) = {:.3e}", p.h_prime.derivative(p.r0))
    });
    checks.push(
        "convex_beyond_r0",
        grid.iter()
            .filter(|&&r| r >= p.r0)
            .map(|&r| (r, p.h_prime.derivative(r) >= -tol)),
    );
    let plateau = p.h_prime.eval(r_end);
    checks.push(
        "flat_slopes_not_periods",
        grid.iter()
            .copied()
            .filter(|&r| r >= p.r0 && p.h_prime.derivative(r).abs() <= tol)
            .chain([r_end])
            .map(|r| (r, !is_period(p.h_prime.eval(r)))),
    );
    checks.push(
        "slope_constant_beyond_r1",
        grid.iter()
            .filter(|&&r| r >= p.r1)
            .map(|&r| (r, (p.h_prime.eval(r) - plateau).abs() <= tol)),
    );
    checks.push(
        "phi_zero_up_to_r0",
        grid.iter()
            .filter(|&&r| r <= p.r0)
            .map(|&r| (r, p.phi.eval(r).abs() <= tol)),
    );
    checks.push("phi_positive_beyond_r0", after_r0().map(|r| (r, p.phi.eval(r) > 0.0)));
    checks.push(
        "phi_increasing_on_r0_r1",
        after_r0()
            .filter(|&r| r < p.r1)
            .map(|r| (r, p.phi.derivative(r) > 0.0)),
    );
    checks.push(
        "phi_monotone_in_unit_interval",
        grid.windows(2).map(|w| {
            let (a, b) = (p.phi.eval(w[0]), p.phi.eval(w[1]));
            (w[1], b >= a - tol && (-tol..=1.0 + tol).contains(&b))
        }),
    );
    checks.push(
        "phi_one_beyond_r_flat",
        grid.iter()
            .filter(|&&r| r >= p.r_flat)
            .map(|&r| (r, (p.phi.eval(r) - 1.0).abs() <= tol)),
    );
    checks.push(
        "knot_continuity",
        p.h_prime
            .jumps()
            .into_iter()
            .chain(p.phi.jumps())
            .map(|(r, a, b)| (r, (a - b).abs() <= tol)),
    );
    let f_flat = f_primitive(p, p.r_flat)?;
    checks.push(
        "f_bounded",
        grid.iter().zip(&fvals).map(|(&r, &f)| (r, f <= f_flat + QUADRATURE_TOLERANCE)),
    );
    let f_past = f_primitive(p, p.r_flat + 1.0)?;
    checks.push_flag(
        "f_constant_beyond_r_flat",
        (f_past - f_flat).abs() <= QUADRATURE_TOLERANCE,
        || format!("f(R_flat + 1) - f(R_flat) = {:.3e}", f_past - f_flat),
    );
    checks.push(
        "T_zero_up_to_r0",
        grid.iter()
            .zip(&tvals)
            .filter(|(&r, _)| r <= p.r0)
            .map(|(&r, &t)| (r, t.abs() <= tol)),
    );
    checks.push(
        "T_negative_beyond_r0",
        grid.iter()
            .zip(&tvals)
            .filter(|(&r, _)| r > p.r0)
            .map(|(&r, &t)| (r, t < 0.0)),
    );
    checks.push(
        "T_monotone",
        grid.windows(2)
            .zip(tvals.windows(2))
            .map(|(r, t)| (r[1], t[1] <= t[0] + tol)),
    );

    let knots = p.knots();
    let mut fd = Vec::new();
    for &r in grid.iter().step_by(20) {
        if r < 2.0 * FD_STEP || knots.iter().any(|k| (k - r).abs() < 2.0 * FD_STEP) {
            continue;
        }
        let (a, b) = (r - FD_STEP, r + FD_STEP);
        let dt = -p.phi.eval(b) * p.h_prime.eval(b) + p.phi.eval(a) * p.h_prime.eval(a)
            + p.integrate(a, b)?;
        let expected = -p.phi.eval(r) * p.h_prime.derivative(r);
        fd.push((r, (dt / (b - a) - expected).abs() <= 1e-6));
    }
    checks.push("T_derivative_matches", fd);

    let mut slices = Vec::new();
    let mut strict = Vec::new();
    for &tau in &p.reeb_periods {
        let Some(rho) = radius_of_slope(p, tau) else { continue };
        let t = filtration_value(p, rho)?.t;
        let delta = 1e-3;
        let before = filtration_value(p, rho - delta)?.t;
        let after = filtration_value(p, rho + delta)?.t;
        strict.push((rho, p.h_prime.derivative(rho) > 0.0 && after < t && t < before));
        slices.push(SliceValue { period: tau, rho, t });
    }
    checks.push("T_strict_near_periods", strict);
    let mut ordering = vec![(0.0, slices.first().is_none_or(|s| s.t < -tol))];
    ordering.extend(slices.windows(2).map(|w| (w[1].rho, w[1].t < w[0].t - tol)));
    checks.push("slice_ordering", ordering);

    Ok(ProfileReport {
        checks: checks.0,
        slices,
    })
}
