//! Brute-force verification of plans with dense matrices.
//!
//! Nothing here reuses the factor builder: the Jucys-Murphy operators and the
//! Johnson adjacency matrix are assembled directly from transpositions acting
//! on words, and isotypic projectors come from a Jacobi eigendecomposition of
//! the adjacency matrix. The identification of adjacency eigenspaces with
//! isotypic components is an assumption of the oracle, cross-checked by the
//! Jucys-Murphy eigenvector test.

mod dense;
mod eigen;

use std::collections::HashMap;
use std::fmt;

pub use dense::DenseMatrix;
pub use eigen::{symmetric_eig, SymmetricEigen};

use crate::combinatorics::{binomial, enumerate_words, tableau_contents, two_row_tableau_count, WordLabel};
use crate::error::{Error, Result};
use crate::factorization::{SparseOrthFactor, TransformPlan};
use crate::spectral::project;
use crate::transform::{forward, FunctionVector, OpCounter};

/// Largest dimension the dense oracle accepts.
pub const DENSE_BUDGET: usize = 2000;

/// Largest dimension for which the joint eigenbasis is recomputed by
/// sequential diagonalization.
pub const JOINT_BASIS_LIMIT: usize = 300;

const CLUSTER_SPREAD_TOL: f64 = 1e-6;

fn check_dense(dim: usize) -> Result<()> {
    if dim > DENSE_BUDGET {
        return Err(Error::Resource(format!(
            "dense oracle limited to dimension {DENSE_BUDGET}, got {dim}"
        )));
    }
    Ok(())
}

fn words_and_index(n: usize, k: usize) -> Result<(Vec<WordLabel>, HashMap<Vec<u8>, usize>)> {
    let words = enumerate_words(n, k)?;
    check_dense(words.len())?;
    let index = words
        .iter()
        .enumerate()
        .map(|(j, w)| (w.letters().to_vec(), j))
        .collect();
    Ok((words, index))
}

/// Johnson distance `k - |x ∩ y|`.
pub fn johnson_distance(x: &WordLabel, y: &WordLabel) -> usize {
    let common = x
        .letters()
        .iter()
        .zip(y.letters())
        .filter(|(a, b)| **a == 1 && **b == 1)
        .count();
    x.k() - common
}

/// `J_p = (1 p) + (2 p) + .. + (p-1 p)` acting on functions of words.
pub fn dense_jm(n: usize, k: usize, p: usize) -> Result<DenseMatrix> {
    if p == 0 || p > n {
        return Err(Error::argument(format!("JM index {p} outside 1..={n}")));
    }
    let (words, index) = words_and_index(n, k)?;
    let mut m = DenseMatrix::zeros(words.len());
    for (x, w) in words.iter().enumerate() {
        for j in 1..p {
            let mut image = w.letters().to_vec();
            image.swap(j - 1, p - 1);
            m.add_to(index[&image], x, 1.0);
        }
    }
    Ok(m)
}

/// Adjacency matrix of `J(n, k)`: subsets meeting in `k - 1` elements.
pub fn adjacency(n: usize, k: usize) -> Result<DenseMatrix> {
    let (words, _) = words_and_index(n, k)?;
    let mut m = DenseMatrix::zeros(words.len());
    for (x, wx) in words.iter().enumerate() {
        for (y, wy) in words.iter().enumerate() {
            if johnson_distance(wx, wy) == 1 {
                m.set(x, y, 1.0);
            }
        }
    }
    Ok(m)
}

/// Permutation matrix of a position permutation acting on words, so that
/// `(σ f)(σ w) = f(w)`.
pub fn dense_permutation(n: usize, k: usize, sigma: &[usize]) -> Result<DenseMatrix> {
    let (words, index) = words_and_index(n, k)?;
    let mut m = DenseMatrix::zeros(words.len());
    for (x, w) in words.iter().enumerate() {
        m.set(index[w.permuted(sigma).letters()], x, 1.0);
    }
    Ok(m)
}

/// Spectral projectors of the adjacency matrix, one per eigenvalue, ordered
/// by decreasing eigenvalue so that projector `a` has rank
/// `C(n, a) - C(n, a - 1)`.
pub fn isotypic_projectors(n: usize, k: usize) -> Result<Vec<DenseMatrix>> {
    let a = adjacency(n, k)?;
    let dim = a.dim();
    let eig = symmetric_eig(&a)?;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for j in 0..dim {
        match clusters.last_mut() {
            Some(c) if eig.values[c[0]] - eig.values[j] < 0.5 => c.push(j),
            _ => clusters.push(vec![j]),
        }
    }
    let s = k.min(n - k);
    if clusters.len() != s + 1 {
        return Err(Error::Oracle(format!(
            "{} adjacency eigenvalue clusters, expected {}",
            clusters.len(),
            s + 1
        )));
    }
    let mut out = Vec::with_capacity(s + 1);
    for (a_idx, c) in clusters.iter().enumerate() {
        let spread = eig.values[c[0]] - eig.values[*c.last().unwrap()];
        if spread > CLUSTER_SPREAD_TOL {
            return Err(Error::Oracle(format!("eigenvalue cluster {a_idx} spread {spread:e}")));
        }
        if c.len() as u128 != two_row_tableau_count(n, a_idx) {
            return Err(Error::Oracle(format!(
                "eigenspace {a_idx} has rank {}, expected {}",
                c.len(),
                two_row_tableau_count(n, a_idx)
            )));
        }
        let mut p = DenseMatrix::zeros(dim);
        for &j in c {
            let v = eig.vector(j);
            for r in 0..dim {
                if v[r] == 0.0 {
                    continue;
                }
                for col in 0..dim {
                    p.add_to(r, col, v[r] * v[col]);
                }
            }
        }
        out.push(p);
    }
    Ok(out)
}

fn dense_factor(f: &SparseOrthFactor) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(f.dim());
    for b in f.blocks() {
        for (p, &r) in b.rows().iter().enumerate() {
            for (q, &c) in b.cols().iter().enumerate() {
                m.set(r, c, b.entry(p, q));
            }
        }
    }
    m
}

/// Product of the assembled factors. Row `j` is the Gelfand-Tsetlin vector
/// of final label `j` in delta coordinates.
pub fn dense_gt_matrix(plan: &TransformPlan) -> Result<DenseMatrix> {
    let dim = plan.dim();
    check_dense(dim)?;
    let mut g = DenseMatrix::zeros(dim);
    for (w, &t) in plan.delta_to_first().iter().enumerate() {
        g.set(t, w, 1.0);
    }
    for f in plan.factors() {
        g = dense_factor(f).matmul(&g)?;
    }
    Ok(g)
}

/// Joint eigenvectors of `J_1, .., J_n` found by diagonalizing `J_2`, then
/// `J_3` inside each eigenspace, and so on. Returns content vectors with
/// their unit eigenvectors in delta coordinates.
pub fn joint_jm_eigenbasis(n: usize, k: usize) -> Result<Vec<(Vec<i32>, Vec<f64>)>> {
    let dim = binomial(n, k) as usize;
    check_dense(dim)?;
    let mut groups: Vec<(Vec<i32>, Vec<Vec<f64>>)> = vec![(
        vec![0],
        (0..dim)
            .map(|j| {
                let mut e = vec![0.0; dim];
                e[j] = 1.0;
                e
            })
            .collect(),
    )];
    for p in 2..=n {
        let jm = dense_jm(n, k, p)?;
        let mut next = Vec::new();
        for (prefix, basis) in groups {
            let m = basis.len();
            let images: Vec<Vec<f64>> = basis.iter().map(|v| jm.matvec(v)).collect();
            let mut r = DenseMatrix::zeros(m);
            for a in 0..m {
                for b in 0..m {
                    let dot: f64 = basis[a].iter().zip(&images[b]).map(|(x, y)| x * y).sum();
                    r.set(a, b, dot);
                }
            }
            for a in 0..m {
                for b in 0..a {
                    let avg = 0.5 * (r.get(a, b) + r.get(b, a));
                    r.set(a, b, avg);
                    r.set(b, a, avg);
                }
            }
            let eig = symmetric_eig(&r)?;
            let mut split: Vec<(i32, Vec<Vec<f64>>)> = Vec::new();
            for j in 0..m {
                let lambda = eig.values[j];
                let rounded = lambda.round();
                if (lambda - rounded).abs() > CLUSTER_SPREAD_TOL {
                    return Err(Error::Oracle(format!("J_{p} eigenvalue {lambda} is not an integer")));
                }
                let y = eig.vector(j);
                let mut v = vec![0.0; dim];
                for (coef, b) in y.iter().zip(&basis) {
                    for (o, x) in v.iter_mut().zip(b) {
                        *o += coef * x;
                    }
                }
                match split.iter_mut().find(|(c, _)| *c == rounded as i32) {
                    Some((_, vs)) => vs.push(v),
                    None => split.push((rounded as i32, vec![v])),
                }
            }
            for (c, vs) in split {
                let mut pre = prefix.clone();
                pre.push(c);
                next.push((pre, vs));
            }
        }
        groups = next;
    }
    groups
        .into_iter()
        .map(|(c, mut vs)| {
            if vs.len() != 1 {
                return Err(Error::Oracle(format!(
                    "joint eigenspace {c:?} has dimension {}",
                    vs.len()
                )));
            }
            Ok((c, vs.pop().unwrap()))
        })
        .collect()
}

/// Outcome of one oracle check.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub status: CheckStatus,
}

impl CheckResult {
    fn measured(name: &str, max_residual: f64, threshold: f64) -> Self {
        let status = if max_residual.is_finite() && max_residual < threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckResult {
            name: name.to_string(),
            max_residual,
            threshold,
            status,
        }
    }

    fn skipped(name: &str, threshold: f64, why: String) -> Self {
        CheckResult {
            name: name.to_string(),
            max_residual: f64::NAN,
            threshold,
            status: CheckStatus::Skipped(why),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            CheckStatus::Skipped(why) => write!(f, "{:<24} {:>12} < {:.1e}  SKIP ({why})", self.name, "-", self.threshold),
            s => write!(
                f,
                "{:<24} {:>12.3e} < {:.1e}  {}",
                self.name,
                self.max_residual,
                self.threshold,
                if *s == CheckStatus::Pass { "PASS" } else { "FAIL" }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification of J({},{}), dim {}", self.n, self.k, binomial(self.n, self.k))?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "note: basis vectors are defined up to sign; comparisons are sign-insensitive")?;
        write!(f, "result: {}", if self.all_passed() { "PASS" } else { "FAIL" })
    }
}

fn sign_insensitive_distance(u: &[f64], v: &[f64]) -> f64 {
    let (mut plus, mut minus) = (0.0f64, 0.0f64);
    for (a, b) in u.iter().zip(v) {
        plus = plus.max((a - b).abs());
        minus = minus.max((a + b).abs());
    }
    plus.min(minus)
}

/// Runs every dense check against `plan`. Failures are report entries, not
/// errors; errors mean the oracle itself could not run.
pub fn verify_plan(plan: &TransformPlan) -> Result<VerificationReport> {
    let (n, k, dim) = (plan.n(), plan.k(), plan.dim());
    check_dense(dim)?;
    let mut checks = Vec::new();

    let mut structure = 0usize;
    let mut orth: f64 = 0.0;
    for f in plan.factors() {
        let d = dense_factor(f);
        let (r, c) = d.max_nonzeros_per_line();
        structure = structure.max(r).max(c);
        let gram = d.transpose().matmul(&d)?;
        orth = orth.max(gram.max_abs_diff(&DenseMatrix::identity(dim)));
    }
    checks.push(CheckResult::measured("factor_nonzeros", structure as f64, 2.5));
    checks.push(CheckResult::measured("factor_orthogonality", orth, 1e-10));

    let g = dense_gt_matrix(plan)?;
    let gt = g.transpose();
    let gram = g.matmul(&gt)?;
    checks.push(CheckResult::measured(
        "gt_orthogonality",
        gram.max_abs_diff(&DenseMatrix::identity(dim)),
        1e-9,
    ));

    let mut fwd: f64 = 0.0;
    for x in 0..dim {
        let c = forward(plan, &FunctionVector::delta(n, k, x)?, &mut OpCounter::new())?;
        for (t, v) in c.values().iter().enumerate() {
            fwd = fwd.max((v - g.get(t, x)).abs());
        }
    }
    checks.push(CheckResult::measured("forward_vs_dense", fwd, 1e-10));

    let contents: Vec<Vec<i32>> = plan
        .coefficient_labels()
        .iter()
        .map(|l| tableau_contents(&l.tableau))
        .collect();
    let mut jm_res: f64 = 0.0;
    for p in 1..=n {
        let images = dense_jm(n, k, p)?.matmul(&gt)?;
        for t in 0..dim {
            let alpha = contents[t][p - 1] as f64;
            let r: f64 = (0..dim)
                .map(|x| (images.get(x, t) - alpha * gt.get(x, t)).powi(2))
                .sum::<f64>()
                .sqrt();
            jm_res = jm_res.max(r);
        }
    }
    checks.push(CheckResult::measured("jm_eigenvectors", jm_res, 1e-8));

    let projectors = isotypic_projectors(n, k)?;
    let mut iso: f64 = 0.0;
    for (a, pa) in projectors.iter().enumerate() {
        for x in 0..dim {
            let f = FunctionVector::delta(n, k, x)?;
            let fast = project(plan, &f, &[a], &mut OpCounter::new())?;
            for (y, v) in fast.values().iter().enumerate() {
                iso = iso.max((v - pa.get(y, x)).abs());
            }
        }
    }
    checks.push(CheckResult::measured("isotypic_projection", iso, 1e-8));

    if dim <= JOINT_BASIS_LIMIT {
        let joint = joint_jm_eigenbasis(n, k)?;
        let row_of: HashMap<&[i32], usize> = contents
            .iter()
            .enumerate()
            .map(|(t, c)| (c.as_slice(), t))
            .collect();
        let mut worst: f64 = 0.0;
        for (c, v) in &joint {
            match row_of.get(c.as_slice()) {
                Some(&t) => worst = worst.max(sign_insensitive_distance(g.row(t), v)),
                None => worst = f64::INFINITY,
            }
        }
        if joint.len() != dim {
            worst = f64::INFINITY;
        }
        checks.push(CheckResult::measured("joint_jm_eigenbasis", worst, 1e-8));
    } else {
        checks.push(CheckResult::skipped(
            "joint_jm_eigenbasis",
            1e-8,
            format!("dimension above {JOINT_BASIS_LIMIT}"),
        ));
    }

    Ok(VerificationReport { n, k, checks })
}
