//! Minimal complex CSR storage for the discretized operators.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<Complex64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    /// Real diagonal (imaginary parts of a Hermitian diagonal vanish).
    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.col_idx[k] == r {
                    d[r] = self.values[k].re;
                }
            }
        }
        d
    }

    /// `max |A − A‡|` over all entries.
    pub fn hermitian_residual(&self) -> f64 {
        // Walk the explicit transpose: entry (r, c) must match conj((c, r)).
        let mut max_dev = 0.0f64;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let v = self.values[k];
                let vt = self.get(c, r);
                max_dev = max_dev.max((v - vt.conj()).norm());
            }
        }
        max_dev
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.col_idx[lo..hi].binary_search(&c) {
            Ok(pos) => self.values[lo + pos],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_matvec() {
        let t = vec![
            (0, 0, Complex64::new(1.0, 0.0)),
            (0, 1, Complex64::new(0.0, -1.0)),
            (1, 0, Complex64::new(0.0, 1.0)),
            (1, 1, Complex64::new(2.0, 0.0)),
            (0, 0, Complex64::new(0.5, 0.0)),
        ];
        let a = CsrMatrix::from_triplets(2, t);
        assert_eq!(a.nnz(), 4);
        assert_eq!(a.get(0, 0), Complex64::new(1.5, 0.0));
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        let mut y = [Complex64::new(0.0, 0.0); 2];
        a.matvec(&x, &mut y);
        assert_eq!(y[0], Complex64::new(2.5, 0.0));
        assert_eq!(y[1], Complex64::new(0.0, 3.0));
        assert_eq!(a.hermitian_residual(), 0.0);
    }
}
