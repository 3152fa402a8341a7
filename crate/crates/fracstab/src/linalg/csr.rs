//! Minimal compressed-sparse-row storage for the companion pencil matrices.
//! Construction is deterministic: triplets are sorted by (row, column) and
//! duplicates are summed, so identical inputs yield identical layouts.

use super::{C64, CMat};

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl Csr {
    /// Builds a CSR matrix from (row, col, value) triplets. Duplicate
    /// coordinates are summed; explicit zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, C64)]) -> Self {
        for &(i, j, _) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) outside {rows}x{cols}");
        }
        let mut sorted: Vec<(usize, usize, C64)> = triplets.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<C64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        // drop entries that summed to exactly zero
        let mut keep_col = Vec::with_capacity(col_idx.len());
        let mut keep_val = Vec::with_capacity(values.len());
        let mut kept_per_row = vec![0usize; rows];
        let mut cursor = 0usize;
        for i in 0..rows {
            let count = row_ptr[i + 1];
            for k in cursor..cursor + count {
                if values[k] != C64::new(0.0, 0.0) {
                    keep_col.push(col_idx[k]);
                    keep_val.push(values[k]);
                    kept_per_row[i] += 1;
                }
            }
            cursor += count;
        }
        let mut ptr = vec![0usize; rows + 1];
        for i in 0..rows {
            ptr[i + 1] = ptr[i] + kept_per_row[i];
        }
        Csr { rows, cols, row_ptr: ptr, col_idx: keep_col, values: keep_val }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates stored entries of one row as (col, value) pairs.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.col_idx[lo..hi].iter().zip(&self.values[lo..hi]).map(|(&j, &v)| (j, v))
    }

    /// Value at (i, j), zero if not stored.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.row_entries(i)
            .find(|&(jj, _)| jj == j)
            .map(|(_, v)| v)
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `y = self · x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        let mut y = vec![C64::new(0.0, 0.0); self.rows];
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (j, v) in self.row_entries(i) {
                acc += v * x[j];
            }
            *yi = acc;
        }
        y
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in self.row_entries(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn triplets_sum_and_sort() {
        let t = vec![(1, 2, c(3.0)), (0, 0, c(1.0)), (1, 2, c(-1.0)), (1, 0, c(2.0))];
        let m = Csr::from_triplets(2, 3, &t);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 0), c(1.0));
        assert_eq!(m.get(1, 0), c(2.0));
        assert_eq!(m.get(1, 2), c(2.0));
        assert_eq!(m.get(0, 2), c(0.0));
        // rows come out in order
        let row1: Vec<(usize, C64)> = m.row_entries(1).collect();
        assert_eq!(row1, vec![(0, c(2.0)), (2, c(2.0))]);
    }

    #[test]
    fn exact_zero_sums_are_dropped() {
        let t = vec![(0, 1, c(5.0)), (0, 1, c(-5.0)), (1, 1, c(1.0))];
        let m = Csr::from_triplets(2, 2, &t);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(0.0));
    }

    #[test]
    fn matvec_matches_dense() {
        let t = vec![
            (0, 0, C64::new(1.0, 1.0)),
            (0, 2, c(-2.0)),
            (1, 1, c(4.0)),
            (2, 0, C64::new(0.0, -1.0)),
            (2, 2, c(1.5)),
        ];
        let m = Csr::from_triplets(3, 3, &t);
        let x = vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(2.0, -1.0)];
        let y = m.matvec(&x);
        let yd = m.to_dense().matvec(&x);
        for (a, b) in y.iter().zip(&yd) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((m.frobenius_norm() - m.to_dense().frobenius_norm()).abs() < 1e-15);
    }

    #[test]
    fn deterministic_construction() {
        let t1 = vec![(0, 0, c(1.0)), (2, 1, c(2.0)), (1, 1, c(3.0))];
        let mut t2 = t1.clone();
        t2.reverse();
        let a = Csr::from_triplets(3, 2, &t1);
        let b = Csr::from_triplets(3, 2, &t2);
        assert_eq!(a, b);
    }
}
