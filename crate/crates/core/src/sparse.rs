//! Compressed sparse operator used inside the master-equation kernels.
//!
//! Ladder operators, Kerr terms and the drives are banded in the Fock basis,
//! so `A·ρ` and `ρ·A` cost `nnz(A)·d` instead of `d³`. Dense inputs still work
//! (every entry becomes a stored element).
//!
//! Density matrices are handled as column-major slices, matching nalgebra's
//! storage: entry `(i, j)` lives at `j * d + i`.

use num_complex::Complex64 as C64;

use crate::linalg::CMatrix;

#[derive(Clone, Debug)]
pub(crate) struct SparseOp {
    dim: usize,
    /// row i -> (column, value)
    rows: Vec<Vec<(usize, C64)>>,
    /// column j -> (row, value)
    cols: Vec<Vec<(usize, C64)>>,
}

impl SparseOp {
    pub fn from_dense(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut rows = vec![Vec::new(); dim];
        let mut cols = vec![Vec::new(); dim];
        for j in 0..dim {
            for i in 0..dim {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    rows[i].push((j, v));
                    cols[j].push((i, v));
                }
            }
        }
        Self { dim, rows, cols }
    }

    /// Max absolute row sum, an upper bound on the spectral radius.
    pub fn row_norm(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `A v`
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(k, a)| a * v[k]).sum())
            .collect()
    }

    /// Max absolute column sum (induced 1-norm).
    pub fn col_norm(&self) -> f64 {
        self.cols
            .iter()
            .map(|c| c.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `out += c · (A ρ)`
    pub fn left_mul_acc(&self, c: C64, rho: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for j in 0..d {
            let col = &rho[j * d..(j + 1) * d];
            let dst = &mut out[j * d..(j + 1) * d];
            for (i, row) in self.rows.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &(k, a) in row {
                    acc += a * col[k];
                }
                dst[i] += c * acc;
            }
        }
    }

    /// `out = A ρ`
    pub fn left_mul_into(&self, rho: &[C64], out: &mut [C64]) {
        out.fill(C64::new(0.0, 0.0));
        self.left_mul_acc(C64::new(1.0, 0.0), rho, out);
    }

    /// `out += c · (ρ A)`
    pub fn right_mul_acc(&self, c: C64, rho: &[C64], out: &mut [C64]) {
        let d = self.dim;
        for (j, col_entries) in self.cols.iter().enumerate() {
            let dst = &mut out[j * d..(j + 1) * d];
            for &(k, a) in col_entries {
                let f = c * a;
                let src = &rho[k * d..(k + 1) * d];
                for (o, s) in dst.iter_mut().zip(src) {
                    *o += f * s;
                }
            }
        }
    }
}
