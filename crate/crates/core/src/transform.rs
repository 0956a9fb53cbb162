//! Application of a [`TransformPlan`]: forward and inverse transforms with an
//! instrumented operation counter.
//!
//! One fused multiply-add is one counted operation. Reindexing between label
//! tables is not counted.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::factorization::{SparseOrthFactor, TransformPlan};

/// Counts fused multiply-adds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    fma: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        OpCounter::default()
    }

    pub fn add(&mut self, ops: u64) {
        self.fma += ops;
    }

    pub fn count(&self) -> u64 {
        self.fma
    }
}

fn dim_of(n: usize, k: usize) -> Result<usize> {
    if k > n {
        return Err(Error::argument(format!("k = {k} exceeds n = {n}")));
    }
    usize::try_from(binomial(n, k)).map_err(|_| Error::Resource(format!("C({n},{k}) overflows")))
}

/// A function on `k`-subsets, indexed by the canonical word order.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionVector {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl FunctionVector {
    pub fn new(n: usize, k: usize, values: Vec<f64>) -> Result<Self> {
        let dim = dim_of(n, k)?;
        if values.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: values.len(),
            });
        }
        Ok(FunctionVector { n, k, values })
    }

    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        let dim = dim_of(n, k)?;
        Ok(FunctionVector {
            n,
            k,
            values: vec![0.0; dim],
        })
    }

    pub fn constant(n: usize, k: usize, value: f64) -> Result<Self> {
        let mut f = FunctionVector::zeros(n, k)?;
        f.values.fill(value);
        Ok(f)
    }

    /// Indicator of the word at canonical position `index`.
    pub fn delta(n: usize, k: usize, index: usize) -> Result<Self> {
        let mut f = FunctionVector::zeros(n, k)?;
        let dim = f.values.len();
        *f.values.get_mut(index).ok_or_else(|| {
            Error::argument(format!("delta index {index} outside 0..{dim}"))
        })? = 1.0;
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Coordinates in the Gelfand-Tsetlin basis, indexed by the plan's final
/// label table.
#[derive(Clone, Debug, PartialEq)]
pub struct GtCoefficients {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl GtCoefficients {
    pub fn new(n: usize, k: usize, values: Vec<f64>) -> Result<Self> {
        let dim = dim_of(n, k)?;
        if values.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: values.len(),
            });
        }
        Ok(GtCoefficients { n, k, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn norm_squared(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { expected, found });
    }
    Ok(())
}

/// `y = F x`, blockwise. Every output coordinate is written exactly once.
pub fn apply_factor_into(
    factor: &SparseOrthFactor,
    x: &[f64],
    y: &mut [f64],
    counter: &mut OpCounter,
) -> Result<()> {
    check_len(factor.dim(), x.len())?;
    check_len(factor.dim(), y.len())?;
    let mut ops = 0u64;
    for block in factor.blocks() {
        let d = block.dim();
        let (rows, cols, e) = (block.rows(), block.cols(), block.entries());
        for r in 0..d {
            let mut acc = 0.0;
            for c in 0..d {
                acc += e[r * d + c] * x[cols[c]];
            }
            y[rows[r]] = acc;
        }
        ops += (d * d) as u64;
    }
    counter.add(ops);
    Ok(())
}

/// `y = Fᵀ x`, blockwise.
pub fn apply_factor_transpose_into(
    factor: &SparseOrthFactor,
    x: &[f64],
    y: &mut [f64],
    counter: &mut OpCounter,
) -> Result<()> {
    check_len(factor.dim(), x.len())?;
    check_len(factor.dim(), y.len())?;
    let mut ops = 0u64;
    for block in factor.blocks() {
        let d = block.dim();
        let (rows, cols, e) = (block.rows(), block.cols(), block.entries());
        for c in 0..d {
            let mut acc = 0.0;
            for r in 0..d {
                acc += e[r * d + c] * x[rows[r]];
            }
            y[cols[c]] = acc;
        }
        ops += (d * d) as u64;
    }
    counter.add(ops);
    Ok(())
}

pub fn apply_factor(factor: &SparseOrthFactor, x: &[f64], counter: &mut OpCounter) -> Result<Vec<f64>> {
    let mut y = vec![0.0; factor.dim()];
    apply_factor_into(factor, x, &mut y, counter)?;
    Ok(y)
}

fn check_plan(plan: &TransformPlan, n: usize, k: usize, len: usize) -> Result<()> {
    if plan.n() != n || plan.k() != k {
        return Err(Error::argument(format!(
            "vector for J({n},{k}) does not match plan for J({},{})",
            plan.n(),
            plan.k()
        )));
    }
    check_len(plan.dim(), len)
}

/// Delta coordinates to Gelfand-Tsetlin coordinates.
pub fn forward(plan: &TransformPlan, f: &FunctionVector, counter: &mut OpCounter) -> Result<GtCoefficients> {
    check_plan(plan, f.n, f.k, f.values.len())?;
    let mut cur = vec![0.0; plan.dim()];
    for (w, &target) in plan.delta_to_first().iter().enumerate() {
        cur[target] = f.values[w];
    }
    let mut scratch = vec![0.0; plan.dim()];
    for factor in plan.factors() {
        apply_factor_into(factor, &cur, &mut scratch, counter)?;
        std::mem::swap(&mut cur, &mut scratch);
    }
    Ok(GtCoefficients {
        n: f.n,
        k: f.k,
        values: cur,
    })
}

/// Gelfand-Tsetlin coordinates back to delta coordinates.
pub fn inverse(plan: &TransformPlan, c: &GtCoefficients, counter: &mut OpCounter) -> Result<FunctionVector> {
    check_plan(plan, c.n, c.k, c.values.len())?;
    let mut cur = c.values.clone();
    let mut scratch = vec![0.0; plan.dim()];
    for factor in plan.factors().iter().rev() {
        apply_factor_transpose_into(factor, &cur, &mut scratch, counter)?;
        std::mem::swap(&mut cur, &mut scratch);
    }
    let values = plan.delta_to_first().iter().map(|&t| cur[t]).collect();
    Ok(FunctionVector {
        n: c.n,
        k: c.k,
        values,
    })
}

/// Upper bound `2 (n - 1) C(n, k)` on counted operations of one transform.
pub fn transform_op_bound(n: usize, k: usize) -> u128 {
    2 * (n.saturating_sub(1) as u128) * binomial(n, k)
}
