use std::fmt;

use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{format_rat, parse_rat, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            entries.extend(r);
        }
        Mat { rows: nrows, cols: ncols, entries }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
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

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Rat> {
        self.row(i).to_vec()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Mat { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Reduced row echelon form with zero rows removed. Returns the reduced
    /// matrix and the increasing list of pivot columns; the result is the
    /// unique canonical form of the row space.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    m.row_axpy(i, r, &(-f));
                }
            }
            pivots.push(c);
            r += 1;
        }
        let reduced = Mat::from_rows((0..r).map(|i| m.row_vec(i)).collect());
        let reduced = if r == 0 { Mat::zeros(0, self.cols) } else { reduced };
        (reduced, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (as rows) of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r[(i, f)].clone();
            }
            rows.push(x);
        }
        if rows.is_empty() {
            Mat::zeros(0, self.cols)
        } else {
            Mat::from_rows(rows)
        }
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        Ok(Mat::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, f: &Rat) {
        for j in 0..self.cols {
            let e = &mut self[(i, j)];
            if !e.is_zero() {
                *e *= f;
            }
        }
    }

    /// row[i] += f * row[src]
    fn row_axpy(&mut self, i: usize, src: usize, f: &Rat) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone();
            if !v.is_zero() {
                self[(i, j)] += &v * f;
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

// Entries travel as "p/q" strings so downstream tools cannot silently
// coerce them to floats.
impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .iter_rows()
            .map(|r| r.iter().map(format_rat).collect())
            .collect();
        (self.cols, rows).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let (cols, raw): (usize, Vec<Vec<String>>) = Deserialize::deserialize(de)?;
        let mut rows = Vec::with_capacity(raw.len());
        for r in &raw {
            if r.len() != cols {
                return Err(D::Error::custom("ragged matrix rows"));
            }
            let row: Option<Vec<Rat>> = r.iter().map(|s| parse_rat(s)).collect();
            rows.push(row.ok_or_else(|| D::Error::custom("bad rational literal"))?);
        }
        if rows.is_empty() {
            Ok(Mat::zeros(0, cols))
        } else {
            Ok(Mat::from_rows(rows))
        }
    }
}
