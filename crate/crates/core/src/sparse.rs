//! Compressed column storage.
//!
//! Link matrices are stored column-major so that `Aᵀ x` reads one column of
//! `A` per output entry. A matrix with `nnz` entries and `n_cols` columns
//! holds exactly `2 * nnz + n_cols + 1` numbers.

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets. Entries sharing a position
    /// are summed; explicit zeros are kept so the structure mirrors the arcs.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, v) in &entries {
            assert!(r < n_rows && c < n_cols, "entry ({r}, {c}) outside {n_rows}x{n_cols}");
            assert!(v.is_finite(), "non-finite entry at ({r}, {c})");
        }
        entries.sort_by_key(|&(r, c, _)| (c, r));

        let mut col_ptr = vec![0usize; n_cols + 1];
        let mut row_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_idx.push(r);
            values.push(v);
            col_ptr[c + 1] += 1;
        }
        for j in 0..n_cols {
            col_ptr[j + 1] += col_ptr[j];
        }

        Self {
            n_rows,
            n_cols,
            col_ptr,
            row_idx,
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Stored `(row, value)` pairs of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.column(col).find(|&(r, _)| r == row).map_or(0.0, |(_, v)| v)
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        let mut y = vec![0.0; self.n_rows];
        for (j, &xj) in x.iter().enumerate() {
            for (i, v) in self.column(j) {
                y[i] += v * xj;
            }
        }
        y
    }

    /// `y = Aᵀ x`, written into `y`.
    pub fn transpose_mul_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_rows);
        assert_eq!(y.len(), self.n_cols);
        for (j, yj) in y.iter_mut().enumerate() {
            let lo = self.col_ptr[j];
            let hi = self.col_ptr[j + 1];
            *yj = self.row_idx[lo..hi]
                .iter()
                .zip(&self.values[lo..hi])
                .map(|(&i, &v)| v * x[i])
                .sum();
        }
    }

    pub fn transpose_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n_cols];
        self.transpose_mul_into(x, &mut y);
        y
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_rows];
        for (&i, &v) in self.row_idx.iter().zip(&self.values) {
            sums[i] += v;
        }
        sums
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols]; self.n_rows];
        for j in 0..self.n_cols {
            for (i, v) in self.column(j) {
                dense[i][j] = v;
            }
        }
        dense
    }
}
