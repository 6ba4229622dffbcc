//! Dense matrices over the prime field `F_p`, `p = 32003`.
//!
//! Every structure constant that arises from a monomial tree algebra is
//! `0` or `±1`, so ranks computed here agree with ranks over any field of
//! characteristic zero or large enough characteristic.

use std::fmt;

/// The characteristic of the coefficient field.
pub const PRIME: u32 = 32003;

/// Reduce a signed integer into `[0, PRIME)`.
pub fn fp(x: i64) -> u32 {
    x.rem_euclid(PRIME as i64) as u32
}

#[inline]
fn add(a: u32, b: u32) -> u32 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
fn sub(a: u32, b: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

#[inline]
fn mul(a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % PRIME as u64) as u32
}

fn inv(a: u32) -> u32 {
    assert!(a != 0, "division by zero in F_p");
    // Fermat: a^(p-2)
    let mut base = a as u64;
    let mut exp = PRIME - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % PRIME as u64;
        }
        base = base * base % PRIME as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Pivot search order used by the solvers. Two orders give two (possibly
/// different) particular solutions of the same linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| signed(*v).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Symmetric representative, for display.
fn signed(v: u32) -> i64 {
    if v > PRIME / 2 {
        v as i64 - PRIME as i64
    } else {
        v as i64
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from columns, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, fp(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % PRIME;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = add(self.data[i], v % PRIME);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let i = r * out.cols + c;
                        out.data[i] = add(out.data[i], mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![0u32; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = 0u32;
            for (c, x) in v.iter().enumerate() {
                if *x != 0 {
                    acc = add(acc, mul(self.get(r, c), *x));
                }
            }
            *o = acc;
        }
        out
    }

    pub fn scale(&self, s: i64) -> Matrix {
        let s = fp(s);
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v = mul(*v, s);
        }
        m
    }

    pub fn plus(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a = add(*a, *b);
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vcat");
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols);
        m.data[..self.data.len()].copy_from_slice(&self.data);
        m.data[self.data.len()..].copy_from_slice(&other.data);
        m
    }

    /// Row-reduce in place; returns pivot columns (in row order).
    fn reduce(&mut self, order: PivotOrder) -> Vec<usize> {
        let n = self.cols;
        reduce_restricted(self, n, order)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.reduce(PivotOrder::Forward).len()
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.reduce(PivotOrder::Forward);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, 1);
            for (r, &p) in pivots.iter().enumerate() {
                let v = m.get(r, f);
                if v != 0 {
                    basis.set(p, k, sub(0, v));
                }
            }
        }
        basis
    }

    /// A particular solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        self.solve_with(b, PivotOrder::Forward)
    }

    pub fn solve_with(&self, b: &[u32], order: PivotOrder) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut m = self.hcat(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        // pivots are only chosen among the coefficient columns
        let pivots = reduce_restricted(&mut m, self.cols, order);
        let last = self.cols;
        for r in pivots.len()..self.rows {
            if m.get(r, last) != 0 {
                return None;
            }
        }
        let mut x = vec![0u32; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m.get(r, last);
        }
        Some(x)
    }

    /// Solve `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        let cols: Option<Vec<Vec<u32>>> = (0..b.cols()).map(|c| self.solve(&b.column(c))).collect();
        cols.map(|cs| Matrix::from_columns(self.cols, &cs))
    }

    /// Basis (columns) of a complement of the column space of `self` inside
    /// `F_p^rows`, made of standard basis vectors.
    pub fn complement_of_column_space(&self) -> Matrix {
        let mut t = self.transpose();
        let pivots = t.reduce(PivotOrder::Forward);
        let free: Vec<usize> = (0..self.rows).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.rows, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, 1);
        }
        out
    }
}

/// Reduce only over the first `ncols` columns (the augmented tail is carried).
fn reduce_restricted(m: &mut Matrix, ncols: usize, order: PivotOrder) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut lead = 0usize;
    let col_order: Vec<usize> = match order {
        PivotOrder::Forward => (0..ncols).collect(),
        PivotOrder::Reverse => (0..ncols).rev().collect(),
    };
    for &c in &col_order {
        if lead >= m.rows {
            break;
        }
        let Some(p) = (lead..m.rows).find(|&r| m.get(r, c) != 0) else {
            continue;
        };
        m.swap_rows(lead, p);
        let iv = inv(m.get(lead, c));
        for j in 0..m.cols {
            let v = m.get(lead, j);
            m.data[lead * m.cols + j] = mul(v, iv);
        }
        for r in 0..m.rows {
            if r == lead {
                continue;
            }
            let f = m.get(r, c);
            if f == 0 {
                continue;
            }
            for j in 0..m.cols {
                let v = m.get(lead, j);
                if v != 0 {
                    let i = r * m.cols + j;
                    m.data[i] = sub(m.data[i], mul(f, v));
                }
            }
        }
        pivots.push(c);
        lead += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(&[vec![1, 1], vec![0, 0]]);
        let x = m.solve(&[fp(3), 0]).unwrap();
        assert_eq!(m.apply(&x), vec![3, 0]);
        assert!(m.solve(&[1, 1]).is_none());
        let y = m.solve_with(&[fp(3), 0], PivotOrder::Reverse).unwrap();
        assert_eq!(m.apply(&y), vec![3, 0]);
        assert_ne!(x, y);
    }

    #[test]
    fn complement_spans_quotient() {
        let m = Matrix::from_rows(&[vec![1], vec![1], vec![0]]);
        let c = m.complement_of_column_space();
        assert_eq!(c.cols(), 2);
        assert_eq!(m.hcat(&c).rank(), 3);
    }

    #[test]
    fn negative_entries_reduce() {
        assert_eq!(fp(-1), PRIME - 1);
        let m = Matrix::from_rows(&[vec![1, -1]]);
        assert_eq!(m.kernel().column(0), vec![1, 1]);
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().cols(), 3);
        let n = Matrix::zeros(2, 0);
        assert_eq!(n.complement_of_column_space().cols(), 2);
        assert_eq!(n.solve(&[0, 0]), Some(vec![]));
        assert_eq!(n.solve(&[1, 0]), None);
    }
}
