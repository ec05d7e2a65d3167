//! Bit-packed dense linear algebra over GF(2).

use std::fmt;

use crate::pauli::words_for;

const WORD: usize = 64;

#[inline]
pub(crate) fn get_bit(row: &[u64], j: usize) -> bool {
    (row[j / WORD] >> (j % WORD)) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(row: &mut [u64], j: usize, value: bool) {
    let mask = 1u64 << (j % WORD);
    if value {
        row[j / WORD] |= mask;
    } else {
        row[j / WORD] &= !mask;
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[inline]
pub(crate) fn dot(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

fn lowest_set_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

/// A dense binary matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![vec![0; words_for(cols)]; rows],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 entries; all rows must share one length.
    pub fn from_dense(entries: &[Vec<u8>]) -> Self {
        let cols = entries.first().map_or(0, Vec::len);
        let mut m = Self::zeros(entries.len(), cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v & 1 == 1);
            }
        }
        m
    }

    /// Builds a matrix from per-row lists of column indices holding a one.
    pub fn from_sparse_rows(cols: usize, support: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(support.len(), cols);
        for (i, row) in support.iter().enumerate() {
            for &j in row {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(&self.rows[i], j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(j < self.cols);
        set_bit(&mut self.rows[i], j, value);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.rows[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| get_bit(r, j)).count()
    }

    /// Sorted column indices of the ones in row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for i in 0..self.rows.len() {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.num_rows(), other.num_rows());
        let mut m = Self::zeros(self.num_rows(), self.cols + other.cols);
        for i in 0..self.num_rows() {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, keep: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: keep.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.num_rows());
        let t = other.transpose();
        let mut m = Self::zeros(self.num_rows(), other.cols);
        for i in 0..self.num_rows() {
            for j in 0..other.cols {
                if dot(&self.rows[i], &t.rows[j]) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|&w| w == 0)
    }

    /// First pair of rows `(i, j)`, `i <= j`, with odd overlap, if any.
    /// A row overlapping itself oddly has odd weight.
    pub fn self_orthogonality_witness(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in i..self.rows.len() {
                if dot(&self.rows[i], &self.rows[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        RowEchelon::new(&self.rows, self.cols).rank()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for i in 0..self.rows.len() {
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with the row operations that produced it.
///
/// Rows are inserted in order; each new row is reduced against the current
/// basis and, if non-zero, its lowest set column becomes a pivot that is then
/// cleared from every other basis row. Each basis row remembers which input
/// rows sum to it.
#[derive(Clone, Debug)]
pub(crate) struct RowEchelon {
    cols: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u64>>,
    dependent: Vec<usize>,
}

impl RowEchelon {
    pub(crate) fn new(rows: &[Vec<u64>], cols: usize) -> Self {
        let n_in = rows.len();
        let mut ech = Self {
            cols,
            basis: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            dependent: Vec::new(),
        };
        for (i, row) in rows.iter().enumerate() {
            let mut r = row.clone();
            let mut combo = vec![0u64; words_for(n_in)];
            set_bit(&mut combo, i, true);
            for (b, &p) in ech.pivots.iter().enumerate() {
                if get_bit(&r, p) {
                    xor_into(&mut r, &ech.basis[b]);
                    xor_into(&mut combo, &ech.combos[b]);
                }
            }
            match lowest_set_bit(&r) {
                None => ech.dependent.push(i),
                Some(p) => {
                    for b in 0..ech.basis.len() {
                        if get_bit(&ech.basis[b], p) {
                            xor_into(&mut ech.basis[b], &r);
                            xor_into(&mut ech.combos[b], &combo);
                        }
                    }
                    ech.basis.push(r);
                    ech.pivots.push(p);
                    ech.combos.push(combo);
                }
            }
        }
        ech
    }

    pub(crate) fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Input rows that reduced to zero, i.e. lie in the span of earlier rows.
    pub(crate) fn dependent_rows(&self) -> &[usize] {
        &self.dependent
    }

    pub(crate) fn contains(&self, v: &[u64]) -> bool {
        let mut r = v.to_vec();
        for (b, &p) in self.pivots.iter().enumerate() {
            if get_bit(&r, p) {
                xor_into(&mut r, &self.basis[b]);
            }
        }
        r.iter().all(|&w| w == 0)
    }

    /// For a full-rank input `A` (m rows), returns `t_c` with `A t_c = e_c`
    /// for every `c`.
    pub(crate) fn right_inverse_columns(&self) -> Vec<Vec<u64>> {
        let m = self.basis.len();
        assert!(
            self.dependent.is_empty(),
            "right inverse requires full row rank"
        );
        (0..m)
            .map(|c| {
                let mut t = vec![0u64; words_for(self.cols)];
                for (i, &p) in self.pivots.iter().enumerate() {
                    if get_bit(&self.combos[i], c) {
                        set_bit(&mut t, p, true);
                    }
                }
                t
            })
            .collect()
    }

    /// A basis of `{ v : A v = 0 }`, one vector per non-pivot column, in column order.
    pub(crate) fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; words_for(self.cols)];
                set_bit(&mut v, f, true);
                for (i, &p) in self.pivots.iter().enumerate() {
                    if get_bit(&self.basis[i], f) {
                        set_bit(&mut v, p, true);
                    }
                }
                v
            })
            .collect()
    }
}
