//! Dense matrices over a single cyclotomic field.
//!
//! Rank and nullspace use fraction-free elimination: rows are combined by
//! cross-multiplication, so no field inverse is ever formed. Inverses are only
//! needed by [`CycMatrix::determinant`].

use std::fmt;

use crate::cyclotomic::{Cyclotomic, CyclotomicError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    order: u64,
    entries: Vec<Cyclotomic>,
}

impl CycMatrix {
    /// Builds a matrix from rows, promoting every entry to `order`.
    pub fn from_rows(order: u64, rows: Vec<Vec<Cyclotomic>>) -> Result<Self, CyclotomicError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged matrix rows"
        );
        let entries = rows
            .into_iter()
            .flatten()
            .map(|x| x.promote(order))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycMatrix {
            rows: r,
            cols: c,
            order,
            entries,
        })
    }

    pub fn zeros(order: u64, rows: usize, cols: usize) -> Self {
        CycMatrix {
            rows,
            cols,
            order,
            entries: vec![Cyclotomic::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u64, n: usize) -> Self {
        Self::scalar(order, n, &Cyclotomic::one(order))
    }

    /// `c · I_n`; `c` is promoted to `order`.
    pub fn scalar(order: u64, n: usize, c: &Cyclotomic) -> Self {
        let c = c.promote(order).expect("scalar order must divide matrix order");
        let mut m = Self::zeros(order, n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(order: u64, diag: &[Cyclotomic]) -> Result<Self, CyclotomicError> {
        let n = diag.len();
        let mut m = Self::zeros(order, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d.promote(order)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn promote(&self, order: u64) -> Result<Self, CyclotomicError> {
        if order == self.order {
            return Ok(self.clone());
        }
        Ok(CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries: self
                .entries
                .iter()
                .map(|x| x.promote(order))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        assert_eq!(self.order, other.order, "matrix order mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Cyclotomic::zero(self.order);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        CycMatrix {
            rows: self.rows,
            cols: other.cols,
            order: self.order,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.order, other.order, "matrix order mismatch");
        CycMatrix {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Cyclotomic::zero(self.order), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.order, other.order);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        CycMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            order: self.order,
            entries,
        }
    }

    pub fn trace(&self) -> Cyclotomic {
        assert!(self.is_square());
        (0..self.rows).fold(Cyclotomic::zero(self.order), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// Whether the matrix equals `c · I` for some scalar `c`.
    pub fn is_scalar(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, i) == self.get(0, 0)
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Fraction-free row echelon form. Returns the rows and pivot columns.
    fn echelon(&self) -> (Vec<Vec<Cyclotomic>>, Vec<usize>) {
        let mut m = self.to_rows();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot_row = m[rank].clone();
            let p = pivot_row[col].clone();
            for row in m.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let a = row[col].clone();
                for c in col..self.cols {
                    let lhs = if row[c].is_zero() { None } else { Some(&p * &row[c]) };
                    let rhs = if pivot_row[c].is_zero() {
                        None
                    } else {
                        Some(&a * &pivot_row[c])
                    };
                    row[c] = match (lhs, rhs) {
                        (Some(l), Some(r)) => &l - &r,
                        (Some(l), None) => l,
                        (None, Some(r)) => -r,
                        (None, None) => continue,
                    };
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        m.truncate(rank);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Cyclotomic>> {
        let (u, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Cyclotomic::zero(self.order); self.cols];
                x[f] = Cyclotomic::one(self.order);
                for (i, &pc) in pivots.iter().enumerate().rev() {
                    let s = ((pc + 1)..self.cols)
                        .filter(|&j| !u[i][j].is_zero() && !x[j].is_zero())
                        .fold(Cyclotomic::zero(self.order), |acc, j| &acc + &(&u[i][j] * &x[j]));
                    if s.is_zero() {
                        continue;
                    }
                    // p·x_pc + s = 0; rescale by p instead of dividing.
                    let p = &u[i][pc];
                    for v in x.iter_mut() {
                        if !v.is_zero() {
                            *v = &*v * p;
                        }
                    }
                    x[pc] = -s;
                }
                x
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<Cyclotomic, CyclotomicError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Cyclotomic::one(self.order);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(Cyclotomic::zero(self.order));
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det = &det * &pivot;
            let inv = pivot.inverse()?;
            for r in (col + 1)..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] * &inv;
                for c in col..n {
                    if !m[col][c].is_zero() {
                        m[r][c] = &m[r][c] - &(&f * &m[col][c]);
                    }
                }
            }
        }
        Ok(det)
    }
}

/// Whether `u` is a scalar multiple of the nonzero vector `v`.
pub fn is_parallel(u: &[Cyclotomic], v: &[Cyclotomic]) -> bool {
    let Some(p) = v.iter().position(|x| !x.is_zero()) else {
        return u.iter().all(Cyclotomic::is_zero);
    };
    u.iter()
        .zip(v)
        .all(|(ui, vi)| (ui * &v[p]) == (&u[p] * vi))
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycMatrix[{}]", self.order)?;
        f.debug_list().entries(self.to_rows().iter().map(|r| {
            r.iter().map(ToString::to_string).collect::<Vec<_>>()
        })).finish()
    }
}
