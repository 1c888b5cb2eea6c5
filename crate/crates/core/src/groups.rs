//! Finite matrix groups: closure from generators, conjugacy classes,
//! centralizers, element orders and the standing-hypothesis checks.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::CyclotomicError;
use crate::matrix::CycMatrix;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 20_000;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator {index} is not invertible")]
    NotInvertible { index: usize },
    #[error("generators must be square matrices of one size and one cyclotomic order")]
    ShapeMismatch,
    #[error("at least one generator is required")]
    NoGenerators,
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

/// A fully enumerated finite matrix group.
///
/// Elements are numbered in breadth-first order from the identity (index 0),
/// right-multiplying by the generators in input order.
#[derive(Clone)]
pub struct MatrixGroup {
    n: usize,
    field_order: u64,
    elements: Vec<CycMatrix>,
    generator_indices: Vec<usize>,
    // right_gen[i][k] = index of elements[i] * generator k
    right_gen: Vec<Vec<usize>>,
    // elements[i] = elements[parent[i].0] * generator parent[i].1
    parent: Vec<(usize, usize)>,
    table: Option<Vec<u32>>,
    orders: Vec<usize>,
    inverses: Vec<usize>,
}

impl std::fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixGroup")
            .field("n", &self.n)
            .field("field_order", &self.field_order)
            .field("order", &self.elements.len())
            .field("generator_indices", &self.generator_indices)
            .finish()
    }
}

/// Enumerates the group generated by `generators`.
pub fn close(generators: &[CycMatrix], cap: usize) -> Result<MatrixGroup, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let n = first.rows();
    let order = first.order();
    if generators
        .iter()
        .any(|g| !g.is_square() || g.rows() != n || g.order() != order)
    {
        return Err(GroupError::ShapeMismatch);
    }
    for (index, g) in generators.iter().enumerate() {
        if g.determinant()?.is_zero() {
            return Err(GroupError::NotInvertible { index });
        }
    }

    let identity = CycMatrix::identity(order, n);
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<CycMatrix, usize> = HashMap::from([(identity, 0)]);
    let mut parent = vec![(0, usize::MAX)];
    let mut right_gen: Vec<Vec<usize>> = Vec::new();
    let mut cursor = 0;
    while cursor < elements.len() {
        let mut row = Vec::with_capacity(generators.len());
        for (k, g) in generators.iter().enumerate() {
            let prod = elements[cursor].mul(g);
            let idx = match index.get(&prod) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    let i = elements.len();
                    index.insert(prod.clone(), i);
                    elements.push(prod);
                    parent.push((cursor, k));
                    i
                }
            };
            row.push(idx);
        }
        right_gen.push(row);
        cursor += 1;
    }

    let generator_indices = generators.iter().map(|g| index[g]).collect();
    let mut group = MatrixGroup {
        n,
        field_order: order,
        elements,
        generator_indices,
        right_gen,
        parent,
        table: None,
        orders: Vec::new(),
        inverses: Vec::new(),
    };
    group.build_table();
    group.build_orders();
    Ok(group)
}

impl MatrixGroup {
    fn build_table(&mut self) {
        let size = self.elements.len();
        if size > TABLE_LIMIT {
            return;
        }
        // Fill column j from its BFS parent column: g_i g_j = (g_i g_p) s_k.
        let mut table = vec![0u32; size * size];
        for i in 0..size {
            table[i * size] = i as u32;
        }
        for j in 1..size {
            let (p, k) = self.parent[j];
            for i in 0..size {
                let ip = table[i * size + p] as usize;
                table[i * size + j] = self.right_gen[ip][k] as u32;
            }
        }
        self.table = Some(table);
    }

    fn build_orders(&mut self) {
        let size = self.elements.len();
        self.orders = vec![0; size];
        self.inverses = vec![0; size];
        for g in 0..size {
            let mut r = 1;
            let mut x = g;
            let mut prev = 0;
            while x != 0 {
                prev = x;
                x = self.mul(x, g);
                r += 1;
            }
            // prev = g^{r-1} is the inverse; it stays 0 for the identity.
            self.orders[g] = r;
            self.inverses[g] = prev;
        }
    }

    /// Complex dimension `n` of the representation.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cyclotomic order `N` of the matrix entries.
    pub fn field_order(&self) -> u64 {
        self.field_order
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &CycMatrix {
        &self.elements[idx]
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.table {
            return t[a * self.elements.len() + b] as usize;
        }
        let mut word = Vec::new();
        let mut j = b;
        while j != 0 {
            let (p, k) = self.parent[j];
            word.push(k);
            j = p;
        }
        word.iter().rev().fold(a, |x, &k| self.right_gen[x][k])
    }

    pub fn inverse(&self, idx: usize) -> usize {
        self.inverses[idx]
    }

    /// Index of the element with the given matrix, if present.
    pub fn index_of(&self, m: &CycMatrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inverses[h])
    }

    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }
}

/// Least `r ≥ 1` with `g^r = 1`.
pub fn element_order(group: &MatrixGroup, idx: usize) -> usize {
    group.orders[idx]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjClass {
    pub rep_index: usize,
    pub member_indices: Vec<usize>,
    pub centralizer_order: usize,
    pub class_size: usize,
}

/// Conjugacy classes ordered by representative, the lowest member index.
pub fn conjugacy_classes(group: &MatrixGroup) -> Vec<ConjClass> {
    let size = group.order();
    let mut assigned = vec![false; size];
    let mut classes = Vec::new();
    for g in 0..size {
        if assigned[g] {
            continue;
        }
        let mut members: Vec<usize> = (0..size).map(|h| group.conjugate(h, g)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            assigned[m] = true;
        }
        let centralizer_order = (0..size).filter(|&h| group.commutes(g, h)).count();
        assert_eq!(
            members.len() * centralizer_order,
            size,
            "orbit-stabilizer failed for element {g}"
        );
        classes.push(ConjClass {
            rep_index: g,
            class_size: members.len(),
            member_indices: members,
            centralizer_order,
        });
    }
    classes
}

/// Index of the class containing `element`.
pub fn class_of(classes: &[ConjClass], element: usize) -> usize {
    classes
        .iter()
        .position(|c| c.member_indices.binary_search(&element).is_ok())
        .expect("classes partition the group")
}

/// Standing-hypothesis flags. Failures are reported, never raised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationReport {
    pub in_sl: bool,
    pub isolated: bool,
    pub small: bool,
    /// Human-readable witnesses for every failed flag.
    pub failures: Vec<String>,
}

pub fn validate(group: &MatrixGroup) -> Result<ValidationReport, GroupError> {
    let mut failures = Vec::new();
    let mut in_sl = true;
    for (k, &g) in group.generator_indices().iter().enumerate() {
        let det = group.element(g).determinant()?;
        if !det.is_one() {
            in_sl = false;
            failures.push(format!("generator {k} has determinant {det}"));
        }
    }
    let n = group.n();
    let mut isolated = true;
    let mut small = true;
    for g in 1..group.order() {
        let fixed = crate::spectrum::fixed_dimension(group, g)?;
        if fixed > 0 && isolated {
            isolated = false;
            failures.push(format!(
                "element {g} fixes a subspace of dimension {fixed}; the action is not free off the origin"
            ));
        }
        if n >= 1 && fixed == n - 1 && small {
            small = false;
            failures.push(format!("element {g} is a quasi-reflection"));
        }
    }
    Ok(ValidationReport {
        in_sl,
        isolated,
        small,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;

    fn int(n: u64, k: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n, k)
    }

    fn quaternion() -> MatrixGroup {
        let i = CycMatrix::from_rows(
            4,
            vec![
                vec![int(4, 0), Cyclotomic::root(4, 1)],
                vec![Cyclotomic::root(4, 1), int(4, 0)],
            ],
        )
        .unwrap();
        let j = CycMatrix::from_rows(4, vec![vec![int(4, 0), int(4, -1)], vec![int(4, 1), int(4, 0)]])
            .unwrap();
        close(&[i, j], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn closure_examples() {
        let minus = CycMatrix::scalar(2, 2, &int(2, -1));
        assert_eq!(close(&[minus], DEFAULT_CAP).unwrap().order(), 2);
        let w = CycMatrix::scalar(3, 3, &Cyclotomic::root(3, 1));
        assert_eq!(close(&[w], DEFAULT_CAP).unwrap().order(), 3);
        assert_eq!(quaternion().order(), 8);
    }

    #[test]
    fn cap_and_singular_generators() {
        let w = CycMatrix::scalar(7, 1, &Cyclotomic::root(7, 1));
        assert_eq!(close(&[w], 5).unwrap_err(), GroupError::CapExceeded { cap: 5 });
        let s = CycMatrix::diagonal(1, &[int(1, 1), int(1, 0)]).unwrap();
        assert_eq!(
            close(&[s], DEFAULT_CAP).unwrap_err(),
            GroupError::NotInvertible { index: 0 }
        );
    }

    #[test]
    fn quaternion_classes() {
        let q = quaternion();
        let classes = conjugacy_classes(&q);
        let sizes: Vec<usize> = classes.iter().map(|c| c.class_size).collect();
        assert_eq!(classes.len(), 5);
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 2);
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 3);
        assert_eq!(classes[0].member_indices, vec![0]);
        let i = q.generator_indices()[0];
        assert_eq!(element_order(&q, 0), 1);
        assert_eq!(element_order(&q, i), 4);
        for g in 0..q.order() {
            assert_eq!(q.mul(g, q.inverse(g)), 0);
        }
    }

    #[test]
    fn table_agrees_with_word_multiplication() {
        let q = quaternion();
        let mut untabled = q.clone();
        untabled.table = None;
        for a in 0..q.order() {
            for b in 0..q.order() {
                assert_eq!(q.mul(a, b), untabled.mul(a, b));
                let direct = q.element(a).mul(q.element(b));
                assert_eq!(q.element(q.mul(a, b)), &direct);
            }
        }
    }

    #[test]
    fn validation_flags() {
        let minus = CycMatrix::scalar(2, 2, &int(2, -1));
        let r = validate(&close(&[minus], DEFAULT_CAP).unwrap()).unwrap();
        assert!(r.in_sl && r.isolated && r.small);

        let g = CycMatrix::diagonal(
            3,
            &[Cyclotomic::root(3, 1), Cyclotomic::root(3, 2), int(3, 1)],
        )
        .unwrap();
        let r = validate(&close(&[g], DEFAULT_CAP).unwrap()).unwrap();
        assert!(r.in_sl && !r.isolated);

        let refl = CycMatrix::diagonal(1, &[int(1, 1), int(1, -1)]).unwrap();
        let r = validate(&close(&[refl], DEFAULT_CAP).unwrap()).unwrap();
        assert!(!r.in_sl && !r.small);
    }
}
