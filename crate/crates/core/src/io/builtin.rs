//! Catalog of built-in groups: the finite subgroups of SL(2, ℂ) plus a few
//! higher-dimensional examples.

use num_bigint::BigInt;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, Rational};
use crate::io::spec::GroupSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuiltinError {
    #[error("unknown built-in group {0:?}; see list-builtins")]
    UnknownBuiltin(String),
}

/// Name patterns accepted by [`builtin`], with a one-line description each.
pub const BUILTIN_NAMES: &[(&str, &str)] = &[
    ("cyclic_A{k}", "cyclic group of order k+1 in SL(2), k >= 1"),
    ("binary_dihedral_D{k}", "binary dihedral group of order 4(k-2), k >= 4"),
    ("binary_tetrahedral", "binary tetrahedral group, order 24 (E6)"),
    ("binary_octahedral", "binary octahedral group, order 48 (E7)"),
    ("binary_icosahedral", "binary icosahedral group, order 120 (E8)"),
    ("c3z3", "Z/3 acting diagonally on C^3 by cube roots of unity"),
    ("c4_pm1", "{+I, -I} in SL(4)"),
    ("trivial{n}", "trivial group acting on C^n, n >= 1"),
];

/// Concrete names used by tests and `list-builtins` examples.
pub fn sample_builtin_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=6).map(|k| format!("cyclic_A{k}")).collect();
    names.extend((4..=7).map(|k| format!("binary_dihedral_D{k}")));
    names.extend(
        ["binary_tetrahedral", "binary_octahedral", "binary_icosahedral", "c3z3", "c4_pm1"]
            .map(String::from),
    );
    names.extend((1..=3).map(|n| format!("trivial{n}")));
    names
}

fn z(order: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root(order, k)
}

fn int(order: u64, k: i64) -> Cyclotomic {
    Cyclotomic::from_integer(order, k)
}

fn explicit(order: u64, generators: Vec<Vec<Vec<Cyclotomic>>>) -> GroupSpec {
    let n = generators[0].len();
    GroupSpec::Explicit {
        n,
        cyclotomic_order: order,
        generators: generators
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|row| row.into_iter().map(|x| x.to_string()).collect())
                    .collect()
            })
            .collect(),
    }
}

fn diag(order: u64, entries: Vec<Cyclotomic>) -> Vec<Vec<Cyclotomic>> {
    let n = entries.len();
    entries
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row = vec![int(order, 0); n];
            row[i] = x;
            row
        })
        .collect()
}

/// `½ [[1+i, 1+i], [−1+i, 1−i]]`, the order-6 element `(1+i+j+k)/2` of the
/// binary tetrahedral group, over `ℚ(ζ_order)` with `4 | order`.
fn tetrahedral_omega(order: u64) -> Vec<Vec<Cyclotomic>> {
    let i = z(order, (order / 4) as i64);
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let one = int(order, 1);
    let e = |a: &Cyclotomic| a.scale(&half);
    vec![
        vec![e(&(&one + &i)), e(&(&one + &i))],
        vec![e(&(&i - &one)), e(&(&one - &i))],
    ]
}

fn quaternion_j(order: u64) -> Vec<Vec<Cyclotomic>> {
    vec![
        vec![int(order, 0), int(order, 1)],
        vec![int(order, -1), int(order, 0)],
    ]
}

fn parse_suffix(name: &str, prefix: &str) -> Option<u64> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

/// Resolves a built-in name to an explicit spec with exact entries.
pub fn builtin(name: &str) -> Result<GroupSpec, BuiltinError> {
    let unknown = || BuiltinError::UnknownBuiltin(name.to_string());
    if let Some(k) = parse_suffix(name, "cyclic_A") {
        let order = k + 1;
        return Ok(explicit(order, vec![diag(order, vec![z(order, 1), z(order, -1)])]));
    }
    if let Some(k) = parse_suffix(name, "binary_dihedral_D") {
        if k < 4 {
            return Err(unknown());
        }
        let order = 2 * (k - 2);
        return Ok(explicit(
            order,
            vec![
                diag(order, vec![z(order, 1), z(order, -1)]),
                vec![
                    vec![int(order, 0), int(order, -1)],
                    vec![int(order, 1), int(order, 0)],
                ],
            ],
        ));
    }
    if let Some(n) = parse_suffix(name, "trivial") {
        return Ok(explicit(1, vec![diag(1, vec![int(1, 1); n as usize])]));
    }
    match name {
        "binary_tetrahedral" => Ok(explicit(
            4,
            vec![
                diag(4, vec![z(4, 1), z(4, 3)]),
                quaternion_j(4),
                tetrahedral_omega(4),
            ],
        )),
        "binary_octahedral" => Ok(explicit(
            8,
            vec![tetrahedral_omega(8), diag(8, vec![z(8, 1), z(8, 7)])],
        )),
        "binary_icosahedral" => {
            // ε = ζ_5 and √5 = ε − ε² − ε³ + ε⁴; S has entries (±(ε−ε⁴), ε²−ε³)/√5.
            let sqrt5 = &(&(&z(5, 1) - &z(5, 2)) - &z(5, 3)) + &z(5, 4);
            let inv_sqrt5 = sqrt5.scale(&Rational::new(BigInt::from(1), BigInt::from(5)));
            let a = &(&z(5, 1) - &z(5, 4)) * &inv_sqrt5;
            let b = &(&z(5, 2) - &z(5, 3)) * &inv_sqrt5;
            Ok(explicit(
                5,
                vec![
                    vec![vec![-a.clone(), b.clone()], vec![b, a]],
                    diag(5, vec![z(5, 3), z(5, 2)]),
                ],
            ))
        }
        "c3z3" => Ok(explicit(3, vec![diag(3, vec![z(3, 1); 3])])),
        "c4_pm1" => Ok(explicit(2, vec![diag(2, vec![int(2, -1); 4])])),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close, DEFAULT_CAP};

    fn order_of(name: &str) -> usize {
        let gens = builtin(name).unwrap().generators().unwrap();
        close(&gens, DEFAULT_CAP).unwrap().order()
    }

    #[test]
    fn orders() {
        assert_eq!(order_of("cyclic_A1"), 2);
        assert_eq!(order_of("cyclic_A4"), 5);
        assert_eq!(order_of("binary_dihedral_D4"), 8);
        assert_eq!(order_of("binary_dihedral_D6"), 16);
        assert_eq!(order_of("binary_tetrahedral"), 24);
        assert_eq!(order_of("binary_octahedral"), 48);
        assert_eq!(order_of("c3z3"), 3);
        assert_eq!(order_of("c4_pm1"), 2);
        assert_eq!(order_of("trivial3"), 1);
    }

    #[test]
    fn icosahedral_generator_has_unit_determinant() {
        let gens = builtin("binary_icosahedral").unwrap().generators().unwrap();
        for g in &gens {
            assert!(g.determinant().unwrap().is_one());
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["cyclic_A0", "binary_dihedral_D3", "trivial", "e8", "cyclic_A01"] {
            assert_eq!(
                builtin(bad),
                Err(BuiltinError::UnknownBuiltin(bad.to_string()))
            );
        }
    }

    #[test]
    fn cyclic_a1_is_minus_identity() {
        match builtin("cyclic_A1").unwrap() {
            GroupSpec::Explicit { generators, .. } => {
                assert_eq!(generators, vec![vec![vec!["-1", "0"], vec!["0", "-1"]]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
