//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::dense::DenseMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Eigenvalues in decreasing order; `vectors` holds the matching unit
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += a.get(r, c) * a.get(r, c);
            }
        }
    }
    s.sqrt()
}

/// Sweeps over all pairs `(p, q)` with plane rotations until the
/// off-diagonal Frobenius norm drops below `1e-12 * max(1, ||M||_F)`.
pub fn symmetric_eig(m: &DenseMatrix) -> Result<SymmetricEigen> {
    let d = m.dim();
    let scale = m.frobenius_norm().max(1.0);
    if m.symmetry_error() > 1e-10 * scale {
        return Err(Error::argument("matrix is not symmetric"));
    }
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(d);
    let target = OFF_DIAGONAL_TOL * scale;

    let mut converged = off_diagonal_norm(&a) < target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..d {
            for q in p + 1..d {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..d {
                    let (arp, arq) = (a.get(r, p), a.get(r, q));
                    a.set(r, p, c * arp - s * arq);
                    a.set(r, q, s * arp + c * arq);
                }
                for r in 0..d {
                    let (apr, aqr) = (a.get(p, r), a.get(q, r));
                    a.set(p, r, c * apr - s * aqr);
                    a.set(q, r, s * apr + c * aqr);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for r in 0..d {
                    let (vrp, vrq) = (v.get(r, p), v.get(r, q));
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
        converged = off_diagonal_norm(&a) < target;
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| a.get(y, y).total_cmp(&a.get(x, x)));
    let values = order.iter().map(|&j| a.get(j, j)).collect();
    let mut vectors = DenseMatrix::zeros(d);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..d {
            vectors.set(r, new, v.get(r, old));
        }
    }
    Ok(SymmetricEigen { values, vectors })
}
