use crate::error::{Error, Result};

/// Square row-major real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for j in 0..dim {
            m.set(j, j, 1.0);
        }
        m
    }

    pub fn from_rows(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.dim + c] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.dim + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = DenseMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `self * rhs`; zero entries of `self` are skipped, so sparse left
    /// operands are cheap.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if rhs.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let d = self.dim;
        let mut out = DenseMatrix::zeros(d);
        for r in 0..d {
            let out_row = &mut out.data[r * d..(r + 1) * d];
            for x in 0..d {
                let a = self.data[r * d + x];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(&rhs.data[x * d..(x + 1) * d]) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..r {
                worst = worst.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|j| self.get(j, j)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Number of nonzero entries in the worst row and in the worst column.
    pub fn max_nonzeros_per_line(&self) -> (usize, usize) {
        let mut rows = 0;
        let mut cols = vec![0usize; self.dim];
        for r in 0..self.dim {
            let mut count = 0;
            for (c, &v) in self.row(r).iter().enumerate() {
                if v != 0.0 {
                    count += 1;
                    cols[c] += 1;
                }
            }
            rows = usize::max(rows, count);
        }
        (rows, cols.into_iter().max().unwrap_or(0))
    }
}
