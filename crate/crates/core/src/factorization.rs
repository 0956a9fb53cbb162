//! Construction of the sparse orthogonal factors `[B_i]_{B_{i+1}}`.
//!
//! Level `i` proceeds in two steps. Step one conjugates the transposition
//! `s_i = (i, i+1)` into the basis `B_i` through the previous factor and
//! obtains `[J_{i+1}]_{B_i}` from `J_{i+1} s_i = s_i J_i + 1`; all matrices
//! involved split into blocks of size at most four. Step two splits those
//! blocks into subspaces of dimension at most two and reads off the
//! eigenvectors of `J_{i+1}` there. The eigenvalues are the contents of the
//! box added at step `i + 1` and are never computed numerically.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::combinatorics::{
    binomial, block_key_j, enumerate_labels, BasisLabel, BlockKey,
    StandardTableau, WordLabel, MAX_N,
};
use crate::error::{Error, Result};
use crate::transform::OpCounter;

/// Orthogonality tolerance for a single factor, `max |FᵀF - I|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Tolerance on eigenpair residuals and on couplings that must vanish.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Smallest admissible magnitude of the sign-fixing coordinate.
const PIVOT_TOL: f64 = 1e-12;

/// A square block of size one or two of a block-diagonal orthogonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    dim: usize,
    rows: [usize; 2],
    cols: [usize; 2],
    entries: [f64; 4],
}

impl Block {
    /// `entries` are row-major, `rows.len() x cols.len()`.
    pub fn new(rows: &[usize], cols: &[usize], entries: &[f64]) -> Result<Self> {
        let d = rows.len();
        if !(1..=2).contains(&d) || cols.len() != d || entries.len() != d * d {
            return Err(Error::argument(format!(
                "block must be square of size 1 or 2, got {}x{} with {} entries",
                rows.len(),
                cols.len(),
                entries.len()
            )));
        }
        let mut b = Block {
            dim: d,
            rows: [0; 2],
            cols: [0; 2],
            entries: [0.0; 4],
        };
        b.rows[..d].copy_from_slice(rows);
        b.cols[..d].copy_from_slice(cols);
        b.entries[..d * d].copy_from_slice(entries);
        Ok(b)
    }

    pub fn identity(row: usize, col: usize) -> Self {
        Block {
            dim: 1,
            rows: [row, 0],
            cols: [col, 0],
            entries: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows[..self.dim]
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols[..self.dim]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries[..self.dim * self.dim]
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.dim + c]
    }

    #[cfg(test)]
    pub(crate) fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries[..self.dim * self.dim]
    }

    /// `max |BᵀB - I|` over the block.
    pub fn orthogonality_error(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let dot: f64 = (0..d).map(|r| self.entry(r, a) * self.entry(r, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// The change of basis `[B_i]_{B_{i+1}}` stored as disjoint blocks. Columns
/// index the `B_i` label table, rows the `B_{i+1}` label table.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOrthFactor {
    level: usize,
    dim: usize,
    blocks: Vec<Block>,
}

impl SparseOrthFactor {
    /// Checks that every row and every column index occurs in exactly one
    /// block.
    pub fn new(level: usize, dim: usize, blocks: Vec<Block>) -> Result<Self> {
        let mut row_seen = vec![false; dim];
        let mut col_seen = vec![false; dim];
        for (b, block) in blocks.iter().enumerate() {
            for (seen, idx, what) in [
                (&mut row_seen, block.rows(), "row"),
                (&mut col_seen, block.cols(), "column"),
            ] {
                for &j in idx {
                    match seen.get_mut(j) {
                        Some(s) if !*s => *s = true,
                        Some(_) => {
                            return Err(Error::argument(format!(
                                "{what} {j} repeated in block {b} of factor {level}"
                            )))
                        }
                        None => {
                            return Err(Error::argument(format!(
                                "{what} {j} out of range in block {b} of factor {level}"
                            )))
                        }
                    }
                }
            }
        }
        if let Some(j) = row_seen.iter().position(|s| !s) {
            return Err(Error::argument(format!("row {j} not covered by factor {level}")));
        }
        if let Some(j) = col_seen.iter().position(|s| !s) {
            return Err(Error::argument(format!("column {j} not covered by factor {level}")));
        }
        Ok(SparseOrthFactor { level, dim, blocks })
    }

    /// Permutation factor sending column `j` to row `map[j]`.
    pub fn reindexing(level: usize, map: &[usize]) -> Result<Self> {
        let blocks = map.iter().enumerate().map(|(c, &r)| Block::identity(r, c)).collect();
        SparseOrthFactor::new(level, map.len(), blocks)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    #[cfg(test)]
    pub(crate) fn blocks_mut(&mut self) -> &mut [Block] {
        &mut self.blocks
    }

    /// `max |FᵀF - I|`; the blocks are disjoint so it is the worst block.
    pub fn orthogonality_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(Block::orthogonality_error)
            .fold(0.0, f64::max)
    }

    /// Multiset of block sizes as `(ones, twos)`.
    pub fn block_size_counts(&self) -> (usize, usize) {
        let twos = self.blocks.iter().filter(|b| b.dim == 2).count();
        (self.blocks.len() - twos, twos)
    }
}

/// A symmetric block of size at most four over `B_i` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JmBlock {
    dim: usize,
    indices: [usize; 4],
    entries: [f64; 16],
}

impl JmBlock {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `B_i` indices, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices[..self.dim]
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.entries[r * 4 + c]
    }

    pub fn symmetry_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in 0..r {
                worst = worst.max((self.entry(r, c) - self.entry(c, r)).abs());
            }
        }
        worst
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|r| self.entry(r, r)).sum()
    }
}

/// `[J_{i+1}]_{B_i}` as a block-diagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct JmBlockMatrix {
    level: usize,
    blocks: Vec<JmBlock>,
}

impl JmBlockMatrix {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn blocks(&self) -> &[JmBlock] {
        &self.blocks
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(JmBlock::trace).sum()
    }
}

fn check_level(labels: &[BasisLabel], level: usize) -> Result<()> {
    match labels.iter().find(|l| l.level() != level) {
        Some(l) => Err(Error::argument(format!("label {l} is not at level {level}"))),
        None => Ok(()),
    }
}

/// The action of `s_i` on `B_{i-1}`: swaps the first two suffix letters
/// `c_i c_{i+1}` of every label. `labels` must be the canonical table.
pub fn s_perm(i: usize, labels: &[BasisLabel]) -> Result<Vec<usize>> {
    if i == 0 {
        return Err(Error::argument("s_i needs i >= 1"));
    }
    check_level(labels, i - 1)?;
    labels
        .iter()
        .enumerate()
        .map(|(idx, l)| {
            if l.suffix.len() < 2 {
                return Err(Error::argument(format!("label {l} has no letters to swap")));
            }
            if l.suffix[0] == l.suffix[1] {
                return Ok(idx);
            }
            let mut image = l.clone();
            image.suffix.swap(0, 1);
            labels
                .binary_search(&image)
                .map_err(|_| Error::argument(format!("image of {l} missing from table")))
        })
        .collect()
}

/// Diagonal of `[J_i]_{B_i}`: the content of box `i` of each label.
pub fn jm_diag(i: usize, labels: &[BasisLabel]) -> Result<Vec<f64>> {
    check_level(labels, i)?;
    Ok(labels.iter().map(|l| l.tableau.last_content() as f64).collect())
}

fn local_pos(list: &[usize], x: usize) -> Option<usize> {
    list.iter().position(|&y| y == x)
}

/// Step one: `[J_{i+1}]_{B_i}` from `prev = [B_{i-1}]_{B_i}`.
pub fn step_one(
    i: usize,
    prev: &SparseOrthFactor,
    prev_labels: &[BasisLabel],
    labels: &[BasisLabel],
    counter: &mut OpCounter,
) -> Result<JmBlockMatrix> {
    let dim = labels.len();
    for found in [prev.dim(), prev_labels.len()] {
        if found != dim {
            return Err(Error::Dimension { expected: dim, found });
        }
    }
    let sigma = s_perm(i, prev_labels)?;
    let diag = jm_diag(i, labels)?;

    let mut row_block = vec![usize::MAX; dim];
    for (b, block) in prev.blocks().iter().enumerate() {
        for &r in block.rows() {
            row_block[r] = b;
        }
    }

    let mut group_of: HashMap<BlockKey, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; prev.blocks().len()];
    for (idx, label) in labels.iter().enumerate() {
        let b = row_block[idx];
        if seen[b] {
            continue;
        }
        seen[b] = true;
        let key = block_key_j(label, i)?;
        let g = *group_of.entry(key).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(b);
    }

    let built: Vec<Result<(JmBlock, u64)>> = groups
        .par_iter()
        .map(|members| jm_block(i, prev, members, &sigma, &diag))
        .collect();
    let mut blocks = Vec::with_capacity(built.len());
    for r in built {
        let (block, ops) = r?;
        counter.add(ops);
        blocks.push(block);
    }
    Ok(JmBlockMatrix { level: i, blocks })
}

fn jm_block(
    i: usize,
    prev: &SparseOrthFactor,
    members: &[usize],
    sigma: &[usize],
    diag: &[f64],
) -> Result<(JmBlock, u64)> {
    let mut rows = Vec::with_capacity(4);
    let mut cols = Vec::with_capacity(4);
    for &b in members {
        rows.extend_from_slice(prev.blocks()[b].rows());
        cols.extend_from_slice(prev.blocks()[b].cols());
    }
    let m = rows.len();
    if m > 4 || cols.len() != m {
        return Err(Error::construction(i, format!("coarse block of size {m}x{}", cols.len())));
    }
    rows.sort_unstable();
    cols.sort_unstable();

    let mut f = [[0.0f64; 4]; 4];
    for &b in members {
        let block = &prev.blocks()[b];
        for (p, &r) in block.rows().iter().enumerate() {
            for (q, &c) in block.cols().iter().enumerate() {
                f[local_pos(&rows, r).unwrap()][local_pos(&cols, c).unwrap()] = block.entry(p, q);
            }
        }
    }
    let mut image = [0usize; 4];
    for q in 0..m {
        image[q] = local_pos(&cols, sigma[cols[q]]).ok_or_else(|| {
            Error::construction(i, format!("s_i leaves coarse block at column {}", cols[q]))
        })?;
    }

    // S = F P Fᵀ, where column q of F P is column image[q] of F.
    let mut s = [[0.0f64; 4]; 4];
    for r in 0..m {
        for t in 0..m {
            let mut acc = 0.0;
            for q in 0..m {
                acc += f[r][image[q]] * f[t][q];
            }
            s[r][t] = acc;
        }
    }
    // J = (S D + I) S
    let mut sd = [[0.0f64; 4]; 4];
    for r in 0..m {
        for c in 0..m {
            sd[r][c] = s[r][c] * diag[rows[c]];
        }
        sd[r][r] += 1.0;
    }
    let mut out = JmBlock {
        dim: m,
        indices: [0; 4],
        entries: [0.0; 16],
    };
    out.indices[..m].copy_from_slice(&rows);
    for r in 0..m {
        for c in 0..m {
            let mut acc = 0.0;
            for x in 0..m {
                acc += sd[r][x] * s[x][c];
            }
            out.entries[r * 4 + c] = acc;
        }
    }
    let m = m as u64;
    Ok((out, 2 * m * m * m + m * m + m))
}

/// A block of the next factor whose rows are still labels.
struct PendingBlock {
    cols: [usize; 2],
    targets: Vec<BasisLabel>,
    entries: [f64; 4],
}

/// Unit eigenvector of the symmetric 2x2 matrix `m` for the exact
/// eigenvalue `lambda`, with positive first coordinate.
fn eigenvector_2x2(i: usize, m: [[f64; 2]; 2], lambda: f64, ops: &mut u64) -> Result<[f64; 2]> {
    let a = [m[0][1], lambda - m[0][0]];
    let b = [lambda - m[1][1], m[1][0]];
    let na = a[0] * a[0] + a[1] * a[1];
    let nb = b[0] * b[0] + b[1] * b[1];
    let (v, norm2) = if na >= nb { (a, na) } else { (b, nb) };
    *ops += 6;
    if norm2 <= PIVOT_TOL * PIVOT_TOL {
        return Err(Error::construction(
            i,
            format!("both eigenvector candidates vanish for eigenvalue {lambda}"),
        ));
    }
    let inv = 1.0 / norm2.sqrt();
    let mut v = [v[0] * inv, v[1] * inv];
    *ops += 3;
    if v[0].abs() < PIVOT_TOL {
        return Err(Error::construction(
            i,
            format!("first coordinate of eigenvector for {lambda} vanishes"),
        ));
    }
    if v[0] < 0.0 {
        v = [-v[0], -v[1]];
    }
    let r0 = (m[0][0] - lambda) * v[0] + m[0][1] * v[1];
    let r1 = m[1][0] * v[0] + (m[1][1] - lambda) * v[1];
    let residual = (r0 * r0 + r1 * r1).sqrt();
    *ops += 8;
    if residual > RESIDUAL_TOL {
        return Err(Error::construction(
            i,
            format!("eigenpair residual {residual:e} for eigenvalue {lambda}"),
        ));
    }
    Ok(v)
}

fn split_jm_block(
    i: usize,
    k: usize,
    block: &JmBlock,
    labels: &[BasisLabel],
) -> Result<(Vec<PendingBlock>, u64)> {
    let m = block.dim();
    let idx = block.indices();
    // Positions sharing a tableau form one subspace of dimension <= 2.
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(m);
    for p in 0..m {
        let t = &labels[idx[p]].tableau;
        match parts.iter_mut().find(|part| labels[idx[part[0]]].tableau == *t) {
            Some(part) => part.push(p),
            None => parts.push(vec![p]),
        }
    }
    for (x, px) in parts.iter().enumerate() {
        for py in &parts[x + 1..] {
            for &p in px {
                for &q in py {
                    let c = block.entry(p, q).abs().max(block.entry(q, p).abs());
                    if c > RESIDUAL_TOL {
                        return Err(Error::construction(
                            i,
                            format!("coupling {c:e} between distinct subspaces"),
                        ));
                    }
                }
            }
        }
    }

    let mut ops = 0u64;
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        if part.len() > 2 {
            return Err(Error::construction(i, format!("subspace of dimension {}", part.len())));
        }
        let first = &labels[idx[part[0]]];
        let a = first.tableau.shape().row2;
        let rest = first.suffix[1..].to_vec();
        let mut targets = Vec::with_capacity(2);
        let mut eigen = Vec::with_capacity(2);
        let grown = [
            (Some(first.tableau.grow_row1()), (i - a) as f64),
            (first.tableau.grow_row2(), a as f64 - 1.0),
        ];
        for (t, lambda) in grown {
            if let Some(t) = t {
                let l = BasisLabel {
                    tableau: t,
                    suffix: rest.clone(),
                };
                if l.is_feasible(k) {
                    targets.push(l);
                    eigen.push(lambda);
                }
            }
        }
        if targets.len() != part.len() {
            return Err(Error::construction(
                i,
                format!(
                    "subspace of dimension {} at {first} has {} successors",
                    part.len(),
                    targets.len()
                ),
            ));
        }
        let mut pending = PendingBlock {
            cols: [0; 2],
            targets,
            entries: [0.0; 4],
        };
        if part.len() == 1 {
            let p = part[0];
            let residual = (block.entry(p, p) - eigen[0]).abs();
            ops += 1;
            if residual > RESIDUAL_TOL {
                return Err(Error::construction(
                    i,
                    format!("diagonal {} differs from content {}", block.entry(p, p), eigen[0]),
                ));
            }
            pending.cols[0] = idx[p];
            pending.entries[0] = 1.0;
        } else {
            let (p, q) = (part[0], part[1]);
            let sub = [
                [block.entry(p, p), block.entry(p, q)],
                [block.entry(q, p), block.entry(q, q)],
            ];
            pending.cols = [idx[p], idx[q]];
            for (r, &lambda) in eigen.iter().enumerate() {
                let v = eigenvector_2x2(i, sub, lambda, &mut ops)?;
                pending.entries[2 * r] = v[0];
                pending.entries[2 * r + 1] = v[1];
            }
        }
        out.push(pending);
    }
    Ok((out, ops))
}

/// Step two: `[B_i]_{B_{i+1}}` and the `B_{i+1}` label table from
/// `[J_{i+1}]_{B_i}`.
pub fn step_two(
    i: usize,
    k: usize,
    jm: &JmBlockMatrix,
    labels: &[BasisLabel],
    counter: &mut OpCounter,
) -> Result<(SparseOrthFactor, Vec<BasisLabel>)> {
    check_level(labels, i)?;
    let dim = labels.len();
    let split: Vec<Result<(Vec<PendingBlock>, u64)>> = jm
        .blocks()
        .par_iter()
        .map(|b| split_jm_block(i, k, b, labels))
        .collect();
    let mut pending = Vec::new();
    for r in split {
        let (blocks, ops) = r?;
        counter.add(ops);
        pending.extend(blocks);
    }

    let mut order: Vec<(usize, usize)> = pending
        .iter()
        .enumerate()
        .flat_map(|(b, p)| (0..p.targets.len()).map(move |s| (b, s)))
        .collect();
    if order.len() != dim {
        return Err(Error::construction(i, format!("{} successors for {dim} labels", order.len())));
    }
    order.par_sort_unstable_by(|&(b, s), &(c, t)| pending[b].targets[s].cmp(&pending[c].targets[t]));
    let mut row_of = vec![[0usize; 2]; pending.len()];
    for (row, &(b, s)) in order.iter().enumerate() {
        row_of[b][s] = row;
    }
    for w in order.windows(2) {
        let (x, y) = (w[0], w[1]);
        if pending[x.0].targets[x.1] == pending[y.0].targets[y.1] {
            return Err(Error::construction(
                i,
                format!("label {} produced twice", pending[x.0].targets[x.1]),
            ));
        }
    }
    let next: Vec<BasisLabel> = order
        .iter()
        .map(|&(b, s)| pending[b].targets[s].clone())
        .collect();

    let mut blocks: Vec<Block> = pending
        .iter()
        .zip(&row_of)
        .map(|(p, rows)| {
            let d = p.targets.len();
            let mut block = Block::new(&rows[..d], &p.cols[..d], &p.entries[..d * d])
                .expect("pending blocks are square");
            if d == 2 && block.rows[0] > block.rows[1] {
                block.rows.swap(0, 1);
                block.entries.swap(0, 2);
                block.entries.swap(1, 3);
            }
            block
        })
        .collect();
    blocks.sort_unstable_by_key(|b| b.cols[0]);
    let factor = SparseOrthFactor::new(i, dim, blocks)
        .map_err(|e| Error::construction(i, e.to_string()))?;
    Ok((factor, next))
}

/// Limits on plan construction.
#[derive(Clone, Copy, Debug)]
pub struct PlanBudget {
    /// Maximum number of labels stored over all levels, `(n + 1) C(n, k)`.
    pub max_labels: u128,
}

impl Default for PlanBudget {
    fn default() -> Self {
        PlanBudget {
            max_labels: 8_000_000,
        }
    }
}

/// Factors `[B_i]_{B_{i+1}}` for `i = 1..n-1` together with the label tables
/// of every level. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformPlan {
    n: usize,
    k: usize,
    levels: Vec<Vec<BasisLabel>>,
    factors: Vec<SparseOrthFactor>,
    delta_to_first: Vec<usize>,
    shapes: Vec<usize>,
    build_ops: u64,
}

impl TransformPlan {
    /// Assembles a plan from stored parts, checking every structural
    /// invariant except orthogonality.
    pub fn from_parts(
        n: usize,
        k: usize,
        levels: Vec<Vec<BasisLabel>>,
        factors: Vec<SparseOrthFactor>,
        build_ops: u64,
    ) -> Result<Self> {
        if n == 0 || n > MAX_N || k > n {
            return Err(Error::argument(format!("invalid parameters n = {n}, k = {k}")));
        }
        let dim = binomial(n, k) as usize;
        if levels.len() != n + 1 {
            return Err(Error::argument(format!("expected {} label tables, got {}", n + 1, levels.len())));
        }
        for (i, table) in levels.iter().enumerate() {
            if table.len() != dim {
                return Err(Error::argument(format!(
                    "level {i} has {} labels, expected {dim}",
                    table.len()
                )));
            }
            for l in table {
                if l.level() != i || l.n() != n || !l.is_feasible(k) {
                    return Err(Error::argument(format!("label {l} invalid at level {i}")));
                }
            }
            if let Some(w) = table.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::argument(format!(
                    "level {i} not in canonical order at {}",
                    w[1]
                )));
            }
        }
        if factors.len() != n - 1 {
            return Err(Error::argument(format!("expected {} factors, got {}", n - 1, factors.len())));
        }
        for (j, f) in factors.iter().enumerate() {
            if f.level() != j + 1 || f.dim() != dim {
                return Err(Error::argument(format!("factor {j} has wrong level or size")));
            }
        }
        let delta_to_first = levels[0]
            .iter()
            .map(|l| {
                let image = BasisLabel {
                    tableau: StandardTableau::empty().grow_row1(),
                    suffix: l.suffix[1..].to_vec(),
                };
                levels[1]
                    .binary_search(&image)
                    .map_err(|_| Error::argument(format!("level 1 lacks {image}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let shapes = levels[n].iter().map(|l| l.tableau.shape().row2).collect();
        Ok(TransformPlan {
            n,
            k,
            levels,
            factors,
            delta_to_first,
            shapes,
            build_ops,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.delta_to_first.len()
    }

    /// `s = min(k, n - k)`; components are indexed `0..=s`.
    pub fn max_component(&self) -> usize {
        self.k.min(self.n - self.k)
    }

    pub fn levels(&self) -> &[Vec<BasisLabel>] {
        &self.levels
    }

    pub fn labels(&self, level: usize) -> &[BasisLabel] {
        &self.levels[level]
    }

    pub fn factors(&self) -> &[SparseOrthFactor] {
        &self.factors
    }

    #[cfg(test)]
    pub(crate) fn factors_mut(&mut self) -> &mut [SparseOrthFactor] {
        &mut self.factors
    }

    /// Index map from the delta basis `B_0` to `B_1`. Both label the same
    /// vectors; only the canonical orders differ.
    pub fn delta_to_first(&self) -> &[usize] {
        &self.delta_to_first
    }

    /// Final labels; their suffixes are empty.
    pub fn coefficient_labels(&self) -> &[BasisLabel] {
        &self.levels[self.n]
    }

    /// Component index `a` of each Gelfand-Tsetlin coordinate, shape `(n-a, a)`.
    pub fn coefficient_shapes(&self) -> &[usize] {
        &self.shapes
    }

    pub fn words(&self) -> Vec<WordLabel> {
        self.levels[0]
            .iter()
            .map(|l| WordLabel::new(l.suffix.clone()).expect("stored words are valid"))
            .collect()
    }

    pub fn word_index(&self, word: &[u8]) -> Option<usize> {
        self.levels[0]
            .binary_search_by(|l| l.suffix.as_slice().cmp(word))
            .ok()
    }

    pub fn coefficient_index(&self, tableau: &StandardTableau) -> Option<usize> {
        self.levels[self.n]
            .binary_search_by(|l| l.tableau.cmp(tableau))
            .ok()
    }

    /// Counted operations spent building the factors.
    pub fn build_ops(&self) -> u64 {
        self.build_ops
    }
}

/// Builds the plan for `J(n, k)` with the default budget.
pub fn build_plan(n: usize, k: usize) -> Result<TransformPlan> {
    build_plan_with_budget(n, k, PlanBudget::default())
}

pub fn build_plan_with_budget(n: usize, k: usize, budget: PlanBudget) -> Result<TransformPlan> {
    if n == 0 || n > MAX_N || k > n {
        return Err(Error::argument(format!("invalid parameters n = {n}, k = {k}")));
    }
    let labels_total = (n as u128 + 1) * binomial(n, k);
    if labels_total > budget.max_labels {
        return Err(Error::Resource(format!(
            "J({n},{k}) needs {labels_total} labels, budget is {}",
            budget.max_labels
        )));
    }
    let mut counter = OpCounter::new();
    let mut levels = vec![enumerate_labels(n, k, 0)?, enumerate_labels(n, k, 1)?];
    let first: Vec<usize> = levels[0]
        .iter()
        .map(|l| {
            let image = BasisLabel {
                tableau: StandardTableau::empty().grow_row1(),
                suffix: l.suffix[1..].to_vec(),
            };
            levels[1].binary_search(&image).expect("level 1 labels every word")
        })
        .collect();
    let identity = SparseOrthFactor::reindexing(0, &first)?;
    let mut factors: Vec<SparseOrthFactor> = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let prev = factors.last().unwrap_or(&identity);
        let jm = step_one(i, prev, &levels[i - 1], &levels[i], &mut counter)?;
        let (factor, next) = step_two(i, k, &jm, &levels[i], &mut counter)?;
        factors.push(factor);
        levels.push(next);
    }
    TransformPlan::from_parts(n, k, levels, factors, counter.count())
}
