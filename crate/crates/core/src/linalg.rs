//! Dense matrices over a [`Field`], sized for the small groups built here.

use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::field::{Field, FieldElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{1} against {2}x{3}")]
    Dimension(usize, usize, usize, usize),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
}

/// Row-major matrix over a finite field.
#[derive(Clone)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `[[a,b],[c,d]]` with field elements named by [`Field::name`].
impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.field.name(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[&[u16]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data: Vec<u16> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Mat::from_vec(field, r, c, data)
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u16>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        assert!(data.iter().all(|&v| (v as u32) < field.order()));
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn diag(field: &Field, entries: &[u16]) -> Mat {
        let mut m = Mat::zero(field, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Identity plus `value` at `(row, col)`.
    pub fn elementary(field: &Field, n: usize, row: usize, col: usize, value: u16) -> Mat {
        let mut m = Mat::identity(field, n);
        m.set(row, col, field.add(m.get(row, col), value));
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entry(&self, r: usize, c: usize) -> FieldElem {
        self.field.elem(self.get(r, c))
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u16::from(r == c)))
    }

    fn check_field(&self, other: &Mat) -> Result<(), LinalgError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without field/shape checks; callers guarantee compatibility.
    pub fn mul_unchecked(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let f = &self.field;
        let mut data = vec![0u16; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    data[idx] = f.add(data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    fn zip_with(&self, other: &Mat, op: impl Fn(u16, u16) -> u16) -> Result<Mat, LinalgError> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Dimension(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Mat {
            data,
            ..self.clone()
        })
    }

    pub fn add(&self, other: &Mat) -> Result<Mat, LinalgError> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat, LinalgError> {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: u16) -> Mat {
        let data = self.data.iter().map(|&a| self.field.mul(a, s)).collect();
        Mat {
            data,
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        Mat {
            data,
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Entrywise `x -> x^(p^power)`.
    pub fn frobenius(&self, power: u32) -> Mat {
        let data = self
            .data
            .iter()
            .map(|&a| self.field.frobenius_pow(a, power))
            .collect();
        Mat {
            data,
            ..self.clone()
        }
    }

    /// Scales so the first nonzero entry in row-major order is 1.
    pub fn normalize_projective(&mut self) {
        if let Some(&lead) = self.data.iter().find(|&&v| v != 0) {
            if lead != 1 {
                let s = self.field.inv(lead).unwrap();
                for v in &mut self.data {
                    *v = self.field.mul(*v, s);
                }
            }
        }
    }

    /// Horizontal block `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut m = Mat::zero(&self.field, self.rows, cols);
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

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Mat) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut m = Mat::zero(&self.field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r0 + r, c0 + c));
            }
        }
        m
    }

    /// Gaussian elimination to row echelon form; pivots chosen in the
    /// leftmost column with a nonzero entry, topmost such row.
    /// Returns `(echelon, pivot columns, determinant factor)` where the
    /// factor is the determinant of the row operations applied.
    fn echelon(&self) -> (Mat, Vec<usize>, u16) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det_factor = 1u16;
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(row, c), m.get(piv, c));
                    m.set(row, c, b);
                    m.set(piv, c, a);
                }
                det_factor = f.neg(det_factor);
            }
            let lead = m.get(row, col);
            for r in row + 1..m.rows {
                let v = m.get(r, col);
                if v == 0 {
                    continue;
                }
                let factor = f.mul(v, f.inv(lead).unwrap());
                for c in col..m.cols {
                    let new = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, new);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots, det_factor)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn det(&self) -> Result<u16, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let (e, pivots, sign) = self.echelon();
        if pivots.len() < self.rows {
            return Ok(0);
        }
        let f = &self.field;
        Ok((0..self.rows).fold(sign, |acc, i| f.mul(acc, e.get(i, i))))
    }

    /// Gauss-Jordan inverse.
    pub fn inv(&self) -> Result<Mat, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let f = &self.field;
        let mut aug = self.hstack(&Mat::identity(f, n));
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| aug.get(r, col) != 0)
                .ok_or(LinalgError::Singular)?;
            if piv != col {
                for c in 0..2 * n {
                    let (a, b) = (aug.get(col, c), aug.get(piv, c));
                    aug.set(col, c, b);
                    aug.set(piv, c, a);
                }
            }
            let s = f.inv(aug.get(col, col)).unwrap();
            for c in 0..2 * n {
                aug.set(col, c, f.mul(aug.get(col, c), s));
            }
            for r in 0..n {
                let v = aug.get(r, col);
                if r == col || v == 0 {
                    continue;
                }
                for c in 0..2 * n {
                    let new = f.sub(aug.get(r, c), f.mul(v, aug.get(col, c)));
                    aug.set(r, c, new);
                }
            }
        }
        Ok(aug.block(0, n, n, n))
    }

    /// An invertible `n x n` matrix whose first rows are the given
    /// (linearly independent) rows, completed with unit vectors.
    pub fn complete_to_basis(field: &Field, rows: &[&[u16]], n: usize) -> Result<Mat, LinalgError> {
        let mut chosen: Vec<Vec<u16>> = rows.iter().map(|r| r.to_vec()).collect();
        let current_rank = |rs: &[Vec<u16>]| {
            let refs: Vec<&[u16]> = rs.iter().map(|r| r.as_slice()).collect();
            Mat::from_rows(field, &refs).rank()
        };
        if current_rank(&chosen) < chosen.len() {
            return Err(LinalgError::Singular);
        }
        for i in 0..n {
            if chosen.len() == n {
                break;
            }
            let mut unit = vec![0u16; n];
            unit[i] = 1;
            chosen.push(unit);
            if current_rank(&chosen) < chosen.len() {
                chosen.pop();
            }
        }
        let refs: Vec<&[u16]> = chosen.iter().map(|r| r.as_slice()).collect();
        Ok(Mat::from_rows(field, &refs))
    }
}

/// Standard generators of GL(n, F): the elementary transvections
/// `I + E_{i,i+1}`, `I + E_{i+1,i}`, a diagonal torus element, and
/// `diag(w, 1, ..., 1)` for a primitive `w`.
pub fn gl_generators(field: &Field, n: usize) -> Vec<Mat> {
    let mut gens = sl_generators(field, n);
    let w = field.primitive();
    if w != 1 {
        let mut d = vec![1u16; n];
        d[0] = w;
        gens.push(Mat::diag(field, &d));
    }
    gens
}

/// Generators of SL(n, F). For `n = 2` these are `diag(w, w^-1)` and the two
/// unit transvections; for larger `n` the adjacent transvections together with
/// `diag(w, 1, ..., 1, w^-1)`.
pub fn sl_generators(field: &Field, n: usize) -> Vec<Mat> {
    let mut gens = Vec::new();
    if n == 1 {
        return gens;
    }
    let w = field.primitive();
    if w != 1 {
        let mut d = vec![1u16; n];
        d[0] = w;
        d[n - 1] = field.inv(w).unwrap();
        gens.push(Mat::diag(field, &d));
    }
    for i in 0..n - 1 {
        gens.push(Mat::elementary(field, n, i, i + 1, 1));
        gens.push(Mat::elementary(field, n, i + 1, i, 1));
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn j_squared_is_identity_in_char_two() {
        let f = gf(4);
        let j = Mat::from_rows(&f, &[&[1, 1], &[0, 1]]);
        assert!(j.mul(&j).unwrap().is_identity());
        assert_eq!(j.inv().unwrap(), j);
        assert_eq!(j.det().unwrap(), 1);
    }

    #[test]
    fn hand_product_over_gf2() {
        let f = gf(2);
        let a = Mat::from_rows(&f, &[&[1, 1], &[0, 1]]);
        let b = Mat::from_rows(&f, &[&[1, 0], &[1, 1]]);
        assert_eq!(a.mul(&b).unwrap(), Mat::from_rows(&f, &[&[0, 1], &[1, 1]]));
    }

    #[test]
    fn identity_products_and_inverse() {
        let f = gf(4);
        let y = Mat::from_rows(&f, &[&[1, 2, 3], &[0, 3, 1]]);
        assert_eq!(Mat::identity(&f, 2).mul(&y).unwrap(), y);
        assert!(Mat::identity(&f, 3).inv().unwrap().is_identity());
        assert_eq!(
            Mat::zero(&f, 2, 2).inv().unwrap_err(),
            LinalgError::Singular
        );
    }

    #[test]
    fn errors() {
        let f = gf(4);
        let a = Mat::zero(&f, 2, 3);
        assert!(matches!(a.mul(&a), Err(LinalgError::Dimension(..))));
        assert_eq!(a.det().unwrap_err(), LinalgError::NotSquare(2, 3));
        let b = Mat::zero(&gf(8), 3, 2);
        assert_eq!(a.mul(&b).unwrap_err(), LinalgError::FieldMismatch);
    }

    #[test]
    fn ranks_of_t_matrices() {
        let f = gf(4);
        assert_eq!(Mat::zero(&f, 2, 3).rank(), 0);
        assert_eq!(Mat::from_rows(&f, &[&[1, 0, 0], &[0, 0, 0]]).rank(), 1);
        assert_eq!(Mat::from_rows(&f, &[&[1, 0, 0], &[0, 1, 0]]).rank(), 2);
        assert_eq!(Mat::from_rows(&f, &[&[2, 3, 1], &[3, 1, 2]]).rank(), 1);
    }

    #[test]
    fn det_of_diag_units() {
        let f = gf(4);
        assert_eq!(Mat::diag(&f, &[2, 3]).det().unwrap(), 1);
        assert_eq!(Mat::identity(&f, 4).det().unwrap(), 1);
    }

    #[test]
    fn det_multiplicative_on_all_gf2_pairs() {
        let f = gf(2);
        let all: Vec<Mat> = (0..16u16)
            .map(|bits| Mat::from_vec(&f, 2, 2, (0..4).map(|i| (bits >> i) & 1).collect()))
            .collect();
        for a in &all {
            for b in &all {
                let lhs = a.mul(b).unwrap().det().unwrap();
                let rhs = f.mul(a.det().unwrap(), b.det().unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn complete_to_basis_is_invertible() {
        let f = gf(4);
        let d = Mat::complete_to_basis(&f, &[&[0, 2, 1]], 3).unwrap();
        assert_eq!(d.row(0), &[0, 2, 1]);
        assert!(d.inv().is_ok());
        assert!(Mat::complete_to_basis(&f, &[&[1, 1], &[2, 2]], 2).is_err());
    }

    #[test]
    fn projective_normalization() {
        let f = gf(4);
        let mut m = Mat::from_rows(&f, &[&[0, 2], &[3, 0]]);
        m.normalize_projective();
        assert_eq!(m, Mat::from_rows(&f, &[&[0, 1], &[2, 0]]));
    }
}
