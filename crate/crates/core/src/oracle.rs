//! Brute-force ground truth at desk scale.
//!
//! Nothing here depends on the builder: [`brute_force_mcs`] enumerates every
//! subsequence of X and keeps the maximal common ones, and
//! [`definitional_swings`] evaluates swings literally from their definition.
//! The graph construction is checked against both.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::occidx::OccurrenceIndex;
use crate::pos::Pos;
use crate::swings::{IndexedPair, Quadruple};

/// Longest X accepted by [`brute_force_mcs`] (it walks all `2^|X|` subsets).
pub const ORACLE_MAX_LEN: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle refuses input of length {len} (limit {limit})")]
    TooLong { len: usize, limit: usize },
    #[error("prefix is not a common subsequence of the two strings")]
    NotCommonSubsequence,
}

/// Whether `s` embeds left to right in `text`.
pub fn is_subsequence(s: &[u8], text: &[u8]) -> bool {
    let mut rest = s.iter().peekable();
    for &c in text {
        if rest.peek() == Some(&&c) {
            rest.next();
        }
    }
    rest.peek().is_none()
}

fn is_common(s: &[u8], x: &[u8], y: &[u8]) -> bool {
    is_subsequence(s, x) && is_subsequence(s, y)
}

fn common_bytes(x: &[u8], y: &[u8]) -> Vec<u8> {
    let xs: BTreeSet<u8> = x.iter().copied().collect();
    let ys: BTreeSet<u8> = y.iter().copied().collect();
    xs.intersection(&ys).copied().collect()
}

/// Whether `s` is a maximal common subsequence of `x` and `y`.
///
/// Tries every single-character insertion; any strictly larger common
/// subsequence contains one of those, so this is exact. Returns `false` if
/// `s` is not a common subsequence at all.
pub fn is_maximal(s: &[u8], x: &[u8], y: &[u8]) -> bool {
    if !is_common(s, x, y) {
        return false;
    }
    let alphabet = common_bytes(x, y);
    let mut grown = Vec::with_capacity(s.len() + 1);
    for gap in 0..=s.len() {
        for &d in &alphabet {
            grown.clear();
            grown.extend_from_slice(&s[..gap]);
            grown.push(d);
            grown.extend_from_slice(&s[gap..]);
            if is_common(&grown, x, y) {
                return false;
            }
        }
    }
    true
}

/// Prefix tree of an MCS set. Every node is a distinct prefix; nodes whose
/// prefix is a whole member carry a terminator edge into a shared sink.
#[derive(Clone, Debug, Default)]
pub struct Trie {
    nodes: Vec<TrieNode>,
}

#[derive(Clone, Debug, Default)]
struct TrieNode {
    children: BTreeMap<u8, usize>,
    terminal: bool,
}

impl Trie {
    fn from_sorted(strings: &[Vec<u8>]) -> Self {
        let mut nodes = vec![TrieNode::default()];
        for s in strings {
            let mut cur = 0;
            for &c in s {
                cur = match nodes[cur].children.get(&c) {
                    Some(&next) => next,
                    None => {
                        nodes.push(TrieNode::default());
                        let id = nodes.len() - 1;
                        nodes[cur].children.insert(c, id);
                        id
                    }
                };
            }
            nodes[cur].terminal = true;
        }
        Trie { nodes }
    }

    /// Number of distinct prefixes, the empty one included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of source-to-sink paths.
    pub fn st_path_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.terminal).count()
    }

    fn find(&self, prefix: &[u8]) -> Option<&TrieNode> {
        let mut cur = 0;
        for c in prefix {
            cur = *self.nodes[cur].children.get(c)?;
        }
        Some(&self.nodes[cur])
    }

    /// Whether `prefix` starts some member.
    pub fn is_valid_prefix(&self, prefix: &[u8]) -> bool {
        self.find(prefix).is_some()
    }

    /// Characters `c` such that `prefix·c` is still a valid prefix.
    pub fn valid_extensions(&self, prefix: &[u8]) -> Vec<u8> {
        self.find(prefix)
            .map(|n| n.children.keys().copied().collect())
            .unwrap_or_default()
    }

    /// Every valid prefix, in lexicographic order.
    pub fn prefixes(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(0usize, Vec::new())];
        while let Some((id, word)) = stack.pop() {
            for (&c, &child) in self.nodes[id].children.iter().rev() {
                let mut w = word.clone();
                w.push(c);
                stack.push((child, w));
            }
            out.push(word);
        }
        out
    }
}

/// All maximal common subsequences of a pair, found by brute force.
#[derive(Clone, Debug)]
pub struct OracleSet {
    /// Sorted, deduplicated.
    pub strings: Vec<Vec<u8>>,
    pub trie: Trie,
}

impl OracleSet {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        self.strings.binary_search_by(|e| e.as_slice().cmp(s)).is_ok()
    }
}

/// Computes MCS(X, Y) by enumerating all subsequences of X.
///
/// When the strings share no character the result is the single empty string.
pub fn brute_force_mcs(x: &[u8], y: &[u8]) -> Result<OracleSet, OracleError> {
    if x.len() > ORACLE_MAX_LEN {
        return Err(OracleError::TooLong {
            len: x.len(),
            limit: ORACLE_MAX_LEN,
        });
    }
    let mut subsequences = BTreeSet::new();
    let mut buf = Vec::with_capacity(x.len());
    for mask in 0u32..(1 << x.len()) {
        buf.clear();
        buf.extend((0..x.len()).filter(|&k| mask & (1 << k) != 0).map(|k| x[k]));
        if !subsequences.contains(&buf) {
            subsequences.insert(buf.clone());
        }
    }
    let strings: Vec<Vec<u8>> = subsequences
        .into_iter()
        .filter(|s| is_subsequence(s, y) && is_maximal(s, x, y))
        .collect();
    let trie = Trie::from_sorted(&strings);
    Ok(OracleSet { strings, trie })
}

fn leftmost_end(p: &[u8], text: &[u8]) -> Option<Pos> {
    let mut end = Pos::BEFORE;
    let mut from = 0;
    for &c in p {
        let k = from + text[from..].iter().position(|&t| t == c)?;
        end = Pos::at(k);
        from = k + 1;
    }
    Some(end)
}

fn prefix_upto(text: &[u8], end: Pos) -> &[u8] {
    match end.index() {
        Some(i) => &text[..=i],
        None => &[],
    }
}

/// Key of prefix `p`, evaluated literally from the definitions.
///
/// The ends come from the greedy leftmost embedding. The top swing is the
/// least `i > x_end` with `p` not maximal in `(X[..=i], Y[..=y_end])`, the
/// bottom swing is symmetric, and either is infinite when no such horizon
/// exists.
pub fn definitional_swings(p: &[u8], x: &[u8], y: &[u8]) -> Result<Quadruple, OracleError> {
    let l = leftmost_end(p, x).ok_or(OracleError::NotCommonSubsequence)?;
    let m = leftmost_end(p, y).ok_or(OracleError::NotCommonSubsequence)?;
    let first_after = |e: Pos| e.index().map_or(0, |i| i + 1);

    let y_fixed = prefix_upto(y, m);
    let top = (first_after(l)..x.len())
        .find(|&i| !is_maximal(p, &x[..=i], y_fixed))
        .map_or(Pos::INF, Pos::at);
    let x_fixed = prefix_upto(x, l);
    let bottom = (first_after(m)..y.len())
        .find(|&j| !is_maximal(p, x_fixed, &y[..=j]))
        .map_or(Pos::INF, Pos::at);
    Ok(Quadruple::new(l, m, top, bottom))
}

/// `O(|s|·σ + n)` maximality test for repeated use on one string pair.
///
/// A one-character insertion at gap `k` of `s` exists iff some character
/// occurs, in both strings, strictly between the leftmost embedding of
/// `s[..k]` and the rightmost embedding of `s[k..]`.
#[derive(Clone, Debug)]
pub struct MaximalityChecker {
    pair: IndexedPair,
}

impl MaximalityChecker {
    pub fn new(x: &[u8], y: &[u8]) -> Self {
        MaximalityChecker {
            pair: IndexedPair::new(x, y),
        }
    }

    pub fn is_maximal(&self, s: &[u8]) -> bool {
        let (x, y) = (self.pair.x(), self.pair.y());
        let (Some(lx), Some(ly)) = (leftmost_ends(s, x), leftmost_ends(s, y)) else {
            return false;
        };
        let (Some(rx), Some(ry)) = (rightmost_starts(s, x.text()), rightmost_starts(s, y.text())) else {
            return false;
        };
        (0..=s.len()).all(|k| {
            !self
                .pair
                .common_alphabet()
                .iter()
                .any(|&d| x.occurs_between(d, lx[k], rx[k]) && y.occurs_between(d, ly[k], ry[k]))
        })
    }
}

// ends[k] = end of the leftmost embedding of s[..k]
fn leftmost_ends(s: &[u8], idx: &OccurrenceIndex) -> Option<Vec<Pos>> {
    let mut ends = Vec::with_capacity(s.len() + 1);
    let mut cur = Pos::BEFORE;
    ends.push(cur);
    for &c in s {
        cur = idx.next(c, cur);
        if cur.is_inf() {
            return None;
        }
        ends.push(cur);
    }
    Some(ends)
}

// starts[k] = start of the rightmost embedding of s[k..]; starts[|s|] = INF
fn rightmost_starts(s: &[u8], text: &[u8]) -> Option<Vec<Pos>> {
    let mut starts = vec![Pos::INF; s.len() + 1];
    let mut limit = text.len();
    for k in (0..s.len()).rev() {
        let i = text[..limit].iter().rposition(|&t| t == s[k])?;
        starts[k] = Pos::at(i);
        limit = i;
    }
    Some(starts)
}
