//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element of order `N` is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}`,
//! reduced modulo the `N`-th cyclotomic polynomial `Φ_N`. Only nonzero
//! coefficients are kept, sorted by exponent, so the representation is unique
//! and equality is plain coefficient comparison.
//!
//! Mixed-order operations promote both operands to `ℚ(ζ_lcm)`; the promoted
//! order is capped at [`MAX_ORDER`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest cyclotomic order reachable through promotion.
pub const MAX_ORDER: u64 = 1_000_000;

/// Arbitrary precision rational coefficient.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order {0} exceeds the promotion cap {MAX_ORDER}")]
    PromotionOverflow(u64),
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("cannot demote an element of order {from} to order {to}")]
    NotDivisible { from: u64, to: u64 },
}

/// Binary operation selector for [`Cyclotomic::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Reduction data for one order: `Φ_N = x^φ + Σ lower[j].1 · x^{lower[j].0}`.
#[derive(Debug)]
struct Ring {
    phi: usize,
    lower: Vec<(usize, BigInt)>,
}

fn ring(order: u64) -> Arc<Ring> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Ring>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("ring cache poisoned").get(&order) {
        return Arc::clone(r);
    }
    let poly = cyclotomic_polynomial(order);
    let phi = poly.len() - 1;
    let lower = poly[..phi]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(j, c)| (j, BigInt::from(*c)))
        .collect();
    let built = Arc::new(Ring { phi, lower });
    cache
        .write()
        .expect("ring cache poisoned")
        .entry(order)
        .or_insert(built)
        .clone()
}

fn mobius(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Dense integer coefficients of `Φ_N`, lowest degree first.
///
/// Uses `Φ_N = Π_{d | N} (x^d - 1)^{μ(N/d)}`: all multiplications first, then
/// exact divisions by the binomials.
pub fn cyclotomic_polynomial(order: u64) -> Vec<i128> {
    assert!(order >= 1, "cyclotomic order must be positive");
    let divisors: Vec<u64> = (1..=order).filter(|d| order.is_multiple_of(*d)).collect();
    let mut poly: Vec<i128> = vec![1];
    for &d in &divisors {
        if mobius(order / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(order / d) == -1 {
            // P = Q (x^d - 1)  =>  q_i = q_{i-d} - p_i
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![0i128; qlen];
            for i in 0..qlen {
                let prev = if i >= d { q[i - d] } else { 0 };
                q[i] = prev - poly[i];
            }
            poly = q;
        }
    }
    debug_assert_eq!(*poly.last().unwrap(), 1);
    poly
}

/// Euler's totient.
pub fn totient(order: u64) -> u64 {
    let mut n = order;
    let mut result = order;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Least common multiple of two orders, refusing anything above [`MAX_ORDER`].
pub fn promoted_order(a: u64, b: u64) -> Result<u64, CyclotomicError> {
    if a == 0 || b == 0 {
        return Err(CyclotomicError::ZeroOrder);
    }
    let l = a.lcm(&b);
    if l > MAX_ORDER {
        return Err(CyclotomicError::PromotionOverflow(l));
    }
    Ok(l)
}

/// An exact element of `ℚ(ζ_N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u64,
    terms: Vec<(usize, Rational)>,
}

fn reduce(order: u64, mut acc: BTreeMap<usize, Rational>) -> Vec<(usize, Rational)> {
    let r = ring(order);
    while let Some((&top, _)) = acc.last_key_value() {
        if top < r.phi {
            break;
        }
        let c = acc.remove(&top).expect("present");
        if c.is_zero() {
            continue;
        }
        let shift = top - r.phi;
        for (j, a) in &r.lower {
            let e = acc.entry(shift + j).or_insert_with(Rational::zero);
            *e -= &c * Rational::from_integer(a.clone());
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn accumulate(acc: &mut BTreeMap<usize, Rational>, exp: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(exp) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
    }
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyclotomic {
            order,
            terms: Vec::new(),
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, q: Rational) -> Self {
        let mut z = Self::zero(order);
        if !q.is_zero() {
            z.terms.push((0, q));
        }
        z
    }

    pub fn from_integer(order: u64, k: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(k)))
    }

    /// `ζ_N^k` in canonical form; `root(N, 0)` is the unit.
    pub fn root(order: u64, k: i64) -> Self {
        Self::from_terms(order, [(k, Rational::one())])
    }

    /// Builds `Σ c · ζ_N^e` for arbitrary integer exponents.
    pub fn from_terms<I>(order: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        assert!(order >= 1, "cyclotomic order must be positive");
        let mut acc = BTreeMap::new();
        for (e, c) in terms {
            let e = e.rem_euclid(order as i64) as usize;
            accumulate(&mut acc, e, c);
        }
        Cyclotomic {
            order,
            terms: reduce(order, acc),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coefficients as `(exponent, coefficient)` pairs, nonzero only.
    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    /// Dense canonical coefficient vector of length `φ(N)`.
    pub fn coefficients(&self) -> Vec<Rational> {
        let phi = ring(self.order).phi;
        let mut out = vec![Rational::zero(); phi];
        for (e, c) in &self.terms {
            out[*e] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The value as a rational number, if it lies in `ℚ`.
    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// Re-expresses the element in `ℚ(ζ_M)` for a multiple `M` of its order.
    pub fn promote(&self, to: u64) -> Result<Self, CyclotomicError> {
        if to == self.order {
            return Ok(self.clone());
        }
        if to == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        if to > MAX_ORDER {
            return Err(CyclotomicError::PromotionOverflow(to));
        }
        if !to.is_multiple_of(self.order) {
            return Err(CyclotomicError::NotDivisible {
                from: self.order,
                to,
            });
        }
        let step = (to / self.order) as i64;
        Ok(Self::from_terms(
            to,
            self.terms.iter().map(|(e, c)| (*e as i64 * step, c.clone())),
        ))
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self), CyclotomicError> {
        let m = promoted_order(self.order, other.order)?;
        Ok((self.promote(m)?, other.promote(m)?))
    }

    /// Exact `a op b`, promoting to the lcm of the orders when they differ.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, CyclotomicError> {
        if self.order != other.order {
            let (a, b) = self.aligned(other)?;
            return a.arith(&b, op);
        }
        Ok(match op {
            ArithOp::Add => self.add_same(other, false),
            ArithOp::Sub => self.add_same(other, true),
            ArithOp::Mul => self.mul_same(other),
            ArithOp::Div => self.mul_same(&other.inverse()?),
        })
    }

    /// Value equality across orders.
    pub fn eq_value(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self == other;
        }
        match self.aligned(other) {
            Ok((a, b)) => a == b,
            Err(_) => false,
        }
    }

    fn add_same(&self, other: &Self, subtract: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let neg = |c: &Rational| if subtract { -c.clone() } else { c.clone() };
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some((ea, ca)), Some((eb, cb))) if ea == eb => {
                    let s = if subtract { ca - cb } else { ca + cb };
                    if !s.is_zero() {
                        out.push((*ea, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((ea, ca)), Some((eb, _))) if ea < eb => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((eb, cb))) => {
                    out.push((*eb, neg(cb)));
                    j += 1;
                }
                (Some((ea, ca)), None) => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                (None, Some((eb, cb))) => {
                    out.push((*eb, neg(cb)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Cyclotomic {
            order: self.order,
            terms: out,
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.order);
        }
        if let Some(q) = other.to_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.to_rational() {
            return other.scale(&q);
        }
        let mut acc = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                accumulate(&mut acc, ea + eb, ca * cb);
            }
        }
        Cyclotomic {
            order: self.order,
            terms: reduce(self.order, acc),
        }
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.order);
        }
        Cyclotomic {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Result<Self, CyclotomicError> {
        if self.is_zero() {
            return Err(CyclotomicError::DivisionByZero);
        }
        if let [(e, c)] = self.terms.as_slice() {
            let inv = c.recip();
            return Ok(Self::from_terms(self.order, [(-(*e as i64), inv)]));
        }
        // Solve (a · x) = 1 in the power basis: column j of the system is a·ζ^j.
        let phi = ring(self.order).phi;
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.mul_same(&Self::from_terms(self.order, [(j as i64, Rational::one())]));
            for (i, c) in col.terms {
                rows[i][j] = c;
            }
        }
        rows[0][phi] = Rational::one();
        for col in 0..phi {
            let pivot = (col..phi)
                .find(|&r| !rows[r][col].is_zero())
                .ok_or(CyclotomicError::DivisionByZero)?;
            rows.swap(col, pivot);
            let inv = rows[col][col].recip();
            for x in rows[col][col..].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        Ok(Self::from_terms(
            self.order,
            rows.into_iter()
                .enumerate()
                .map(|(i, mut row)| (i as i64, row.pop().expect("augmented column"))),
        ))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, k: i64) -> Result<Self, CyclotomicError> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Galois automorphism `ζ ↦ ζ^s` for `s` coprime to the order.
    pub fn galois(&self, s: i64) -> Self {
        debug_assert_eq!(s.gcd(&(self.order as i64)), 1);
        Self::from_terms(
            self.order,
            self.terms.iter().map(|(e, c)| (*e as i64 * s, c.clone())),
        )
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Floating point embedding with `ζ_N = e^{2πi/N}`. Display and oracles only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.terms
            .iter()
            .map(|(e, c)| {
                let theta = std::f64::consts::TAU * (*e as f64) / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Prints in the entry grammar accepted by [`crate::io::parse_expr`], e.g. `1/2 + z^3`.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let monomial = match e {
                0 => None,
                1 => Some("z".to_string()),
                e => Some(format!("z^{e}")),
            };
            match monomial {
                None => write_rational(f, &mag)?,
                Some(m) if mag.is_one() => f.write_str(&m)?,
                Some(m) => {
                    write_rational(f, &mag)?;
                    write!(f, "*{m}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]({})", self.order, self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            /// Panics if promotion to a common order exceeds [`MAX_ORDER`];
            /// use [`Cyclotomic::arith`] for a fallible version.
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.arith(rhs, $op).expect("cyclotomic arithmetic")
            }
        }
        impl $trait<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() as u64 - 1, totient(105));
        assert!(p105.contains(&-2));
    }

    #[test]
    fn roots_and_vanishing_sums() {
        assert_eq!(Cyclotomic::root(4, 2), Cyclotomic::from_integer(4, -1));
        let s = Cyclotomic::root(3, 1) + Cyclotomic::root(3, 2);
        assert_eq!(s, Cyclotomic::from_integer(3, -1));
        assert!(Cyclotomic::root(7, 0).is_one());
        assert_eq!(Cyclotomic::root(8, 9), Cyclotomic::root(8, 1));
        assert_eq!(Cyclotomic::root(8, -1), Cyclotomic::root(8, 7));
    }

    #[test]
    fn golden_ratio_conjugate_embedding() {
        let s = Cyclotomic::root(5, 1) + Cyclotomic::root(5, 4);
        let expected = 2.0 * (std::f64::consts::TAU / 5.0).cos();
        assert!((s.to_complex().re - expected).abs() < 1e-12);
        assert!(s.to_complex().im.abs() < 1e-12);
        assert!((expected - 0.6180339887).abs() < 1e-9);
    }

    #[test]
    fn arithmetic_examples() {
        let z8 = Cyclotomic::root(8, 1);
        assert!((&z8 * &Cyclotomic::root(8, 7)).is_one());
        let a = Cyclotomic::one(3) + Cyclotomic::root(3, 1);
        let b = Cyclotomic::one(3) + Cyclotomic::root(3, 2);
        assert!((&a * &b).is_one());
        assert_eq!(
            Cyclotomic::root(2, 1).promote(6).unwrap(),
            Cyclotomic::root(6, 3)
        );
    }

    #[test]
    fn mixed_orders_promote_to_lcm() {
        let i = Cyclotomic::root(4, 1);
        let w = Cyclotomic::root(3, 1);
        let p = &i * &w;
        assert_eq!(p.order(), 12);
        assert_eq!(p, Cyclotomic::root(12, 3 + 4));
        assert!(Cyclotomic::root(2, 1).eq_value(&Cyclotomic::from_integer(1, -1)));
    }

    #[test]
    fn promotion_cap_is_enforced() {
        let a = Cyclotomic::root(999_983, 1);
        let b = Cyclotomic::root(2, 1);
        assert_eq!(
            a.arith(&b, ArithOp::Add),
            Err(CyclotomicError::PromotionOverflow(1_999_966))
        );
    }

    #[test]
    fn division_by_zero() {
        let a = Cyclotomic::root(5, 2);
        let zero = Cyclotomic::root(3, 1) + Cyclotomic::root(3, 2) + Cyclotomic::one(3);
        assert!(zero.is_zero());
        assert_eq!(
            a.arith(&Cyclotomic::zero(5), ArithOp::Div),
            Err(CyclotomicError::DivisionByZero)
        );
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(Cyclotomic::root(4, 1).conj(), Cyclotomic::root(4, 3));
        let r = Cyclotomic::from_rational(9, q(3, 2));
        assert_eq!(r.conj(), r);
        let a = Cyclotomic::root(5, 1) + Cyclotomic::root(5, 2);
        assert_eq!(a.conj(), Cyclotomic::root(5, 4) + Cyclotomic::root(5, 3));
    }

    #[test]
    fn complex_embedding_examples() {
        let one = Cyclotomic::one(7).to_complex();
        assert_eq!((one.re, one.im), (1.0, 0.0));
        let i = Cyclotomic::root(4, 1).to_complex();
        assert!(i.re.abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        let w = Cyclotomic::root(3, 1).to_complex();
        assert!((w.re + 0.5).abs() < 1e-9 && (w.im - 0.8660254038).abs() < 1e-9);
    }

    #[test]
    fn inverse_of_dense_element() {
        let a = Cyclotomic::from_terms(
            15,
            [(0, q(2, 1)), (1, q(-1, 3)), (4, q(5, 7)), (6, q(1, 1))],
        );
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn display_uses_entry_grammar() {
        let a = Cyclotomic::from_terms(8, [(0, q(1, 2)), (3, q(1, 1))]);
        assert_eq!(a.to_string(), "1/2 + z^3");
        let b = Cyclotomic::from_terms(8, [(1, q(-2, 3)), (2, q(-1, 1))]);
        assert_eq!(b.to_string(), "-2/3*z - z^2");
        assert_eq!(Cyclotomic::zero(3).to_string(), "0");
    }
}
