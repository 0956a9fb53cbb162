//! Label arithmetic for the Johnson graph `J(n, k)`.
//!
//! A `k`-subset of `{1..n}` is written as a word of length `n` over the
//! alphabet `{1, 2}`, with letter `1` at position `j` iff `j` belongs to the
//! subset. Intermediate basis vectors are labelled by a two-row standard
//! tableau (a chain of diagrams) together with the tail of such a word.
//!
//! All orderings here are canonical and global: words and suffixes compare
//! lexicographically with `1 < 2`, tableaux compare by their content vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported `n`. Tableaux pack their row membership into a `u64`.
pub const MAX_N: usize = 64;

/// Exact binomial coefficient. Returns 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Number of standard tableaux of shape `(n - a, a)`, `C(n, a) - C(n, a - 1)`.
pub fn two_row_tableau_count(n: usize, a: usize) -> u128 {
    if 2 * a > n {
        return 0;
    }
    let below = if a == 0 { 0 } else { binomial(n, a - 1) };
    binomial(n, a) - below
}

fn check_letters(letters: &[u8]) -> Result<()> {
    match letters.iter().position(|&c| c != 1 && c != 2) {
        Some(p) => Err(Error::argument(format!(
            "letter {} at position {} is not in {{1,2}}",
            letters[p],
            p + 1
        ))),
        None => Ok(()),
    }
}

fn ones(letters: &[u8]) -> usize {
    letters.iter().filter(|&&c| c == 1).count()
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8]) -> fmt::Result {
    for &c in letters {
        write!(f, "{c}")?;
    }
    Ok(())
}

fn parse_letters(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .enumerate()
        .map(|(p, b)| match b {
            b'1' => Ok(1),
            b'2' => Ok(2),
            _ => Err(Error::argument(format!(
                "character {:?} at position {} is not a letter 1 or 2",
                b as char,
                p + 1
            ))),
        })
        .collect()
}

/// A `k`-subset of `{1..n}` encoded as a word over `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordLabel {
    letters: Vec<u8>,
}

impl WordLabel {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        check_letters(&letters)?;
        if letters.len() > MAX_N {
            return Err(Error::argument(format!("word longer than {MAX_N}")));
        }
        Ok(WordLabel { letters })
    }

    /// Word for a subset given by 1-based elements.
    pub fn from_subset(n: usize, subset: &[usize]) -> Result<Self> {
        let mut letters = vec![2u8; n];
        for &e in subset {
            if e == 0 || e > n {
                return Err(Error::argument(format!("element {e} outside 1..={n}")));
            }
            if letters[e - 1] == 1 {
                return Err(Error::argument(format!("element {e} repeated")));
            }
            letters[e - 1] = 1;
        }
        WordLabel::new(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn k(&self) -> usize {
        ones(&self.letters)
    }

    /// Elements of the encoded subset, 1-based and increasing.
    pub fn subset(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(p, _)| p + 1)
            .collect()
    }

    /// Image under a permutation of positions: letter at `p` moves to `sigma[p]`
    /// (0-based).
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let mut letters = vec![0u8; self.letters.len()];
        for (p, &c) in self.letters.iter().enumerate() {
            letters[sigma[p]] = c;
        }
        WordLabel { letters }
    }
}

impl fmt::Display for WordLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

impl FromStr for WordLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WordLabel::new(parse_letters(s.trim())?)
    }
}

/// A Young diagram with at most two rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoRowDiagram {
    pub row1: usize,
    pub row2: usize,
}

impl TwoRowDiagram {
    pub fn new(row1: usize, row2: usize) -> Result<Self> {
        if row2 > row1 {
            return Err(Error::argument(format!("diagram ({row1},{row2}) is not a partition")));
        }
        Ok(TwoRowDiagram { row1, row2 })
    }

    pub fn size(&self) -> usize {
        self.row1 + self.row2
    }
}

impl fmt::Display for TwoRowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.row2 == 0 {
            write!(f, "({})", self.row1)
        } else {
            write!(f, "({},{})", self.row1, self.row2)
        }
    }
}

/// A standard Young tableau with at most two rows.
///
/// Entries are `1..=size`; the tableau of size `i` encodes the chain of
/// diagrams obtained by adding the boxes `1, 2, .., i` in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct StandardTableau {
    row1: Vec<u8>,
    row2: Vec<u8>,
}

impl StandardTableau {
    pub fn new(row1: Vec<u8>, row2: Vec<u8>) -> Result<Self> {
        let size = row1.len() + row2.len();
        if size > MAX_N {
            return Err(Error::argument(format!("tableau larger than {MAX_N}")));
        }
        if row2.len() > row1.len() {
            return Err(Error::argument("second row longer than first"));
        }
        let mut seen = vec![false; size + 1];
        for &e in row1.iter().chain(row2.iter()) {
            let e = e as usize;
            if e == 0 || e > size || seen[e] {
                return Err(Error::argument(format!(
                    "entries must be exactly 1..={size}, each once"
                )));
            }
            seen[e] = true;
        }
        let increasing = |r: &[u8]| r.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&row1) || !increasing(&row2) {
            return Err(Error::argument("rows must be strictly increasing"));
        }
        if row2.iter().zip(row1.iter()).any(|(b, t)| b <= t) {
            return Err(Error::argument("columns must be strictly increasing"));
        }
        Ok(StandardTableau { row1, row2 })
    }

    pub fn empty() -> Self {
        StandardTableau::default()
    }

    /// Tableau whose box `j` lies in row 2 iff bit `j - 1` of `mask` is set.
    /// Returns `None` when the placement is not standard.
    pub fn from_row_mask(size: usize, mask: u64) -> Option<Self> {
        let mut t = StandardTableau::empty();
        for j in 0..size {
            t = if mask >> j & 1 == 1 {
                t.grow_row2()?
            } else {
                t.grow_row1()
            };
        }
        Some(t)
    }

    pub fn row1(&self) -> &[u8] {
        &self.row1
    }

    pub fn row2(&self) -> &[u8] {
        &self.row2
    }

    pub fn size(&self) -> usize {
        self.row1.len() + self.row2.len()
    }

    pub fn shape(&self) -> TwoRowDiagram {
        TwoRowDiagram {
            row1: self.row1.len(),
            row2: self.row2.len(),
        }
    }

    /// Bit `j - 1` set iff entry `j` sits in the second row.
    pub fn row_mask(&self) -> u64 {
        self.row2.iter().fold(0u64, |m, &e| m | 1u64 << (e - 1))
    }

    /// Adds the next entry at the end of the first row.
    pub fn grow_row1(&self) -> Self {
        let mut t = self.clone();
        t.row1.push(self.size() as u8 + 1);
        t
    }

    /// Adds the next entry at the end of the second row, if that stays a
    /// partition shape.
    pub fn grow_row2(&self) -> Option<Self> {
        if self.row2.len() >= self.row1.len() {
            return None;
        }
        let mut t = self.clone();
        t.row2.push(self.size() as u8 + 1);
        Some(t)
    }

    /// Deletes all entries larger than `size`.
    pub fn restrict(&self, size: usize) -> Self {
        let keep = |r: &[u8]| r.iter().copied().take_while(|&e| (e as usize) <= size).collect();
        StandardTableau {
            row1: keep(&self.row1),
            row2: keep(&self.row2),
        }
    }

    /// Content (column minus row) of the box holding `entry`.
    pub fn content_of(&self, entry: usize) -> Option<i32> {
        let e = entry as u8;
        if let Ok(p) = self.row1.binary_search(&e) {
            return Some(p as i32);
        }
        self.row2.binary_search(&e).ok().map(|p| p as i32 - 1)
    }

    /// Content of the box holding the largest entry; 0 for the empty tableau.
    pub fn last_content(&self) -> i32 {
        let size = self.size() as u8;
        match (self.row1.last(), self.row2.last()) {
            (Some(&e), _) if e == size => self.row1.len() as i32 - 1,
            (_, Some(&e)) if e == size => self.row2.len() as i32 - 2,
            _ => 0,
        }
    }

    fn uses_separators(&self) -> bool {
        self.size() > 9
    }
}

/// Content vector: entry `j - 1` is the content of the box labelled `j`.
pub fn tableau_contents(t: &StandardTableau) -> Vec<i32> {
    let mut out = vec![0i32; t.size()];
    for (p, &e) in t.row1.iter().enumerate() {
        out[e as usize - 1] = p as i32;
    }
    for (p, &e) in t.row2.iter().enumerate() {
        out[e as usize - 1] = p as i32 - 1;
    }
    out
}

impl Ord for StandardTableau {
    /// Lexicographic order of content vectors.
    ///
    /// Given equal prefixes, the next box in row 1 has content `row1_len`,
    /// which always exceeds the row-2 content `row2_len - 1`; so the first
    /// differing entry is smaller for the tableau that places it in row 2.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.row_mask(), other.row_mask());
        let common = self.size().min(other.size());
        let low = if common >= 64 {
            u64::MAX
        } else {
            (1u64 << common) - 1
        };
        let diff = (a ^ b) & low;
        if diff == 0 {
            return self.size().cmp(&other.size());
        }
        if a >> diff.trailing_zeros() & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for StandardTableau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StandardTableau {
    /// `row1/row2`, e.g. `134/25`. Tableaux with more than nine boxes
    /// separate entries by commas: `1,2,3,10/4,5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.uses_separators() { "," } else { "" };
        let join = |r: &[u8]| r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(sep);
        write!(f, "{}/{}", join(&self.row1), join(&self.row2))
    }
}

impl FromStr for StandardTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (top, bottom) = s
            .split_once('/')
            .ok_or_else(|| Error::argument(format!("tableau {s:?} lacks '/'")))?;
        let separated = s.contains(',');
        let row = |part: &str| -> Result<Vec<u8>> {
            if part.is_empty() {
                return Ok(Vec::new());
            }
            if separated {
                part.split(',')
                    .map(|e| {
                        e.trim()
                            .parse::<u8>()
                            .map_err(|_| Error::argument(format!("bad tableau entry {e:?}")))
                    })
                    .collect()
            } else {
                part.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::argument(format!("bad tableau entry {c:?}")))
                    })
                    .collect()
            }
        };
        StandardTableau::new(row(top)?, row(bottom)?)
    }
}

/// Label of an element of the intermediate basis `B_i`: a standard tableau of
/// size `i` and the suffix `c_{i+1} .. c_n` of a word.
///
/// Ordered by suffix first, then by tableau.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub tableau: StandardTableau,
    pub suffix: Vec<u8>,
}

impl BasisLabel {
    pub fn new(tableau: StandardTableau, suffix: Vec<u8>) -> Result<Self> {
        check_letters(&suffix)?;
        Ok(BasisLabel { tableau, suffix })
    }

    pub fn level(&self) -> usize {
        self.tableau.size()
    }

    pub fn n(&self) -> usize {
        self.tableau.size() + self.suffix.len()
    }

    /// Number of letters `1` still to be placed in the prefix `c_1 .. c_i`.
    pub fn prefix_ones(&self, k: usize) -> Option<usize> {
        k.checked_sub(ones(&self.suffix))
    }

    /// Whether the label names a nonzero subspace for the given `k`.
    pub fn is_feasible(&self, k: usize) -> bool {
        let i = self.level();
        match self.prefix_ones(k) {
            Some(r) if r <= i => {
                let a = self.tableau.row2.len();
                a <= r && a <= i - r
            }
            _ => false,
        }
    }

    pub fn suffix_string(&self) -> String {
        self.suffix.iter().map(|c| char::from(b'0' + c)).collect()
    }
}

impl Ord for BasisLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.suffix
            .cmp(&other.suffix)
            .then_with(|| self.tableau.cmp(&other.tableau))
    }
}

impl PartialOrd for BasisLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.tableau)?;
        write_letters(f, &self.suffix)
    }
}

/// Identifies one subspace `F^{c_q..c_n}_{λ_1..λ_p}` of an adapted
/// decomposition: the tableau part has size `p`, the suffix starts at `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub tableau: StandardTableau,
    pub suffix: Vec<u8>,
}

/// Key of the subspace shared by labels of `B_{i-1}` and `B_i` (tableau part
/// of size `i - 1`, suffix from position `i + 1`).
pub fn block_key_change(label: &BasisLabel, i: usize) -> Result<BlockKey> {
    let level = label.level();
    if i >= 1 && level == i {
        Ok(BlockKey {
            tableau: label.tableau.restrict(i - 1),
            suffix: label.suffix.clone(),
        })
    } else if i >= 1 && level + 1 == i && !label.suffix.is_empty() {
        Ok(BlockKey {
            tableau: label.tableau.clone(),
            suffix: label.suffix[1..].to_vec(),
        })
    } else {
        Err(Error::argument(format!(
            "label at level {level} has no change key for step {i}"
        )))
    }
}

/// Key of the coarser subspace with tableau part of size `i - 1` and suffix
/// from position `i + 2`; groups at most four labels of each of
/// `B_{i-1}`, `B_i`, `B_{i+1}`.
pub fn block_key_j(label: &BasisLabel, i: usize) -> Result<BlockKey> {
    let level = label.level();
    let drop = (i + 1).checked_sub(level);
    match drop {
        Some(d @ 0..=2) if i >= 1 && label.suffix.len() >= d => Ok(BlockKey {
            tableau: label.tableau.restrict(i - 1),
            suffix: label.suffix[d..].to_vec(),
        }),
        _ => Err(Error::argument(format!(
            "label at level {level} has no coarse key for step {i}"
        ))),
    }
}

/// All words of length `len` with exactly `k` letters `1`, in lexicographic
/// order.
fn words_with_ones(len: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(len: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let placed = cur.len();
        if placed == len {
            out.push(cur.clone());
            return;
        }
        let ones_left = k - ones(cur);
        if ones_left > 0 {
            cur.push(1);
            rec(len, k, cur, out);
            cur.pop();
        }
        if len - placed > ones_left {
            cur.push(2);
            rec(len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= len {
        rec(len, k, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::argument(format!("n = {n} must lie in 1..={MAX_N}")));
    }
    if k > n {
        return Err(Error::argument(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// The delta basis `B_0`: all `C(n, k)` words in canonical order.
pub fn enumerate_words(n: usize, k: usize) -> Result<Vec<WordLabel>> {
    check_nk(n, k)?;
    Ok(words_with_ones(n, k)
        .into_iter()
        .map(|letters| WordLabel { letters })
        .collect())
}

/// Standard tableaux of shape `(i - a, a)` in canonical order.
pub fn standard_tableaux(i: usize, a: usize) -> Vec<StandardTableau> {
    fn rec(i: usize, a: usize, cur: StandardTableau, out: &mut Vec<StandardTableau>) {
        if cur.size() == i {
            out.push(cur);
            return;
        }
        // Row-2 placements sort first.
        if cur.row2.len() < a {
            if let Some(t) = cur.grow_row2() {
                rec(i, a, t, out);
            }
        }
        if cur.row1.len() < i - a {
            rec(i, a, cur.grow_row1(), out);
        }
    }
    let mut out = Vec::new();
    if 2 * a <= i && i <= MAX_N {
        rec(i, a, StandardTableau::empty(), &mut out);
    }
    out
}

/// Labels of the intermediate basis `B_i` in canonical order.
pub fn enumerate_labels(n: usize, k: usize, i: usize) -> Result<Vec<BasisLabel>> {
    check_nk(n, k)?;
    if i > n {
        return Err(Error::argument(format!("level {i} exceeds n = {n}")));
    }
    let m = n - i;
    let mut out = Vec::new();
    let lo = k.saturating_sub(i);
    let hi = k.min(m);
    for o in lo..=hi {
        let r = k - o;
        let tableaux: Vec<StandardTableau> = (0..=r.min(i - r))
            .flat_map(|a| standard_tableaux(i, a))
            .collect();
        for suffix in words_with_ones(m, o) {
            for t in &tableaux {
                out.push(BasisLabel {
                    tableau: t.clone(),
                    suffix: suffix.clone(),
                });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Robinson-Schensted state after inserting a prefix of a word over `{1, 2}`.
///
/// The insertion tableau is `1^x 2^y` over `2^z` and is recorded only by the
/// three counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsState {
    pub ones_row1: usize,
    pub twos_row1: usize,
    pub twos_row2: usize,
    pub recording: StandardTableau,
}

impl RsState {
    pub fn empty() -> Self {
        RsState {
            ones_row1: 0,
            twos_row1: 0,
            twos_row2: 0,
            recording: StandardTableau::empty(),
        }
    }
}

/// One row-insertion step; `step_index` is the size of the recording tableau
/// after the step.
pub fn rs_step(state: &RsState, letter: u8, step_index: usize) -> Result<RsState> {
    if step_index != state.recording.size() + 1 {
        return Err(Error::argument(format!(
            "step index {step_index} after {} insertions",
            state.recording.size()
        )));
    }
    let mut next = state.clone();
    match letter {
        2 => {
            next.twos_row1 += 1;
            next.recording = state.recording.grow_row1();
        }
        1 if state.twos_row1 > 0 => {
            next.ones_row1 += 1;
            next.twos_row1 -= 1;
            next.twos_row2 += 1;
            next.recording = state
                .recording
                .grow_row2()
                .ok_or_else(|| Error::argument("inconsistent insertion state"))?;
        }
        1 => {
            next.ones_row1 += 1;
            next.recording = state.recording.grow_row1();
        }
        other => return Err(Error::argument(format!("letter {other} is not 1 or 2"))),
    }
    Ok(next)
}

/// The labels `(Q_i, w_{i+1}..w_n)` visited while inserting `word`, for
/// `i = 0..=n`.
pub fn rs_labels(word: &WordLabel) -> Vec<BasisLabel> {
    let letters = word.letters();
    let mut state = RsState::empty();
    let mut out = Vec::with_capacity(letters.len() + 1);
    out.push(BasisLabel {
        tableau: StandardTableau::empty(),
        suffix: letters.to_vec(),
    });
    for (p, &c) in letters.iter().enumerate() {
        state = rs_step(&state, c, p + 1).expect("word letters are validated");
        out.push(BasisLabel {
            tableau: state.recording.clone(),
            suffix: letters[p + 1..].to_vec(),
        });
    }
    out
}
