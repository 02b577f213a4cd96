//! Read-side operations over a finished MDAG: counting, lexicographic
//! enumeration, prefix search, select and rank.
//!
//! Sibling edges start with distinct characters and are stored in ascending
//! order, so a depth-first walk taking edges in order visits source-sink paths
//! in lexicographic order of their strings. On a compacted graph every node but
//! the source branches at least twice, which bounds the walk's frames by twice
//! the number of solutions.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::graph::{Edge, Mdag, NodeId};

/// Number of node-to-sink paths for every node, plus per-node prefix sums
/// over the out-edges.
#[derive(Clone, Debug)]
pub struct PathCounts {
    paths: Vec<BigUint>,
    // before[u][k] = sum of paths over out-edges 0..k of u
    before: Vec<Vec<BigUint>>,
}

impl PathCounts {
    pub fn of(g: &Mdag) -> Self {
        let order = g.topological_order().expect("MDAG must be acyclic");
        let mut paths = vec![BigUint::zero(); g.node_count()];
        let mut before = vec![Vec::new(); g.node_count()];
        paths[NodeId::SINK.index()] = BigUint::one();
        for &u in order.iter().rev() {
            if u == NodeId::SINK {
                continue;
            }
            let mut acc = BigUint::zero();
            let sums = g
                .out_edges(u)
                .iter()
                .map(|e| {
                    let start = acc.clone();
                    acc += &paths[e.to.index()];
                    start
                })
                .collect();
            before[u.index()] = sums;
            paths[u.index()] = acc;
        }
        PathCounts { paths, before }
    }

    pub fn paths(&self, u: NodeId) -> &BigUint {
        &self.paths[u.index()]
    }

    /// Paths through the out-edges preceding edge `k` of `u`.
    pub fn before_edge(&self, u: NodeId, k: usize) -> &BigUint {
        &self.before[u.index()][k]
    }
}

pub fn annotate_counts(g: &Mdag) -> PathCounts {
    PathCounts::of(g)
}

/// Output format for enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Full,
    /// Each solution as the number of characters kept from the previous
    /// solution plus the new suffix.
    Compressed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emission<'a> {
    Full(&'a [u8]),
    Delta { keep: usize, suffix: &'a [u8] },
}

/// Work done by one enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub solutions: u64,
    /// Recursion frames, one for the start node plus one per branching
    /// choice. Chains through unary nodes are read in the same frame.
    pub frames: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("index {index} out of range 1..={count}")]
    OutOfRange { index: BigUint, count: BigUint },
    #[error("no edge continues the string at offset {offset}")]
    Mismatch { offset: usize },
    #[error("string ends in the middle of an edge label at offset {offset}")]
    EndsMidEdge { offset: usize },
    #[error("string ends at a node that is not terminal")]
    EndsAtInternalNode,
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    node: NodeId,
    next_edge: usize,
    base: usize,
}

/// Resumable lexicographic walk over source-sink paths.
#[derive(Clone, Debug)]
pub struct EnumCursor<'g> {
    dag: &'g Mdag,
    stack: Vec<Frame>,
    buf: Vec<u8>,
    // shortest buffer length since the previous emission
    low_water: usize,
    pending_sink: bool,
    stats: EnumStats,
}

impl<'g> EnumCursor<'g> {
    /// Starts at `node` with `buf` already spelled.
    fn start(dag: &'g Mdag, node: NodeId, buf: Vec<u8>) -> Self {
        let mut cursor = EnumCursor {
            dag,
            stack: Vec::new(),
            low_water: 0,
            pending_sink: node == NodeId::SINK,
            stats: EnumStats { solutions: 0, frames: 1 },
            buf,
        };
        if node != NodeId::SINK {
            cursor.stack.push(Frame {
                node,
                next_edge: 0,
                base: cursor.buf.len(),
            });
        }
        cursor
    }

    /// Advances to the next solution and returns how many leading characters
    /// it shares with the previous one.
    fn advance(&mut self) -> Option<usize> {
        if self.pending_sink {
            self.pending_sink = false;
            return Some(self.emit());
        }
        loop {
            let dag = self.dag;
            let top = self.stack.last_mut()?;
            let Some(edge) = dag.out_edges(top.node).get(top.next_edge) else {
                self.stack.pop();
                continue;
            };
            top.next_edge += 1;
            let base = top.base;
            self.buf.truncate(base);
            self.low_water = self.low_water.min(base);
            self.buf.extend_from_slice(edge.text());
            self.stats.frames += 1;
            // a unary node offers no choice: read through it without a frame
            let mut to = edge.to;
            while let [only] = dag.out_edges(to) {
                self.buf.extend_from_slice(only.text());
                to = only.to;
            }
            if to == NodeId::SINK {
                return Some(self.emit());
            }
            let base = self.buf.len();
            self.stack.push(Frame {
                node: to,
                next_edge: 0,
                base,
            });
        }
    }

    fn emit(&mut self) -> usize {
        let keep = if self.stats.solutions == 0 { 0 } else { self.low_water };
        self.low_water = self.buf.len();
        self.stats.solutions += 1;
        keep
    }

    /// Next solution in lexicographic order.
    pub fn next_solution(&mut self) -> Option<&[u8]> {
        self.advance()?;
        Some(&self.buf)
    }

    /// Next solution as `(kept prefix length, new suffix)` relative to the
    /// previous one.
    pub fn next_delta(&mut self) -> Option<(usize, &[u8])> {
        let keep = self.advance()?;
        Some((keep, &self.buf[keep..]))
    }

    /// Current partial string.
    pub fn prefix(&self) -> &[u8] {
        &self.buf
    }

    pub fn stats(&self) -> EnumStats {
        self.stats
    }
}

/// Owning iterator over solutions.
pub struct Solutions<'g>(EnumCursor<'g>);

impl Iterator for Solutions<'_> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        self.0.next_solution().map(<[u8]>::to_vec)
    }
}

/// An MDAG together with its path counts.
#[derive(Clone, Debug)]
pub struct Annotated<'g> {
    dag: &'g Mdag,
    counts: PathCounts,
}

impl<'g> Annotated<'g> {
    pub fn new(dag: &'g Mdag) -> Self {
        Annotated {
            dag,
            counts: PathCounts::of(dag),
        }
    }

    pub fn dag(&self) -> &'g Mdag {
        self.dag
    }

    pub fn counts(&self) -> &PathCounts {
        &self.counts
    }

    /// Number of maximal common subsequences.
    pub fn count(&self) -> &BigUint {
        self.counts.paths(NodeId::SOURCE)
    }

    pub fn cursor(&self) -> EnumCursor<'g> {
        EnumCursor::start(self.dag, NodeId::SOURCE, Vec::new())
    }

    pub fn iter(&self) -> Solutions<'g> {
        Solutions(self.cursor())
    }

    /// Frames a complete enumeration will use, computed over the graph
    /// instead of by walking every path.
    pub fn full_enumeration_frames(&self) -> BigUint {
        let g = self.dag;
        let order = g.topological_order().expect("MDAG must be acyclic");
        // below[u] = frames spent under a frame opened at u
        let mut below = vec![BigUint::zero(); g.node_count()];
        let chain_end = |mut v: NodeId| {
            while let [only] = g.out_edges(v) {
                v = only.to;
            }
            v
        };
        for &u in order.iter().rev() {
            let mut acc = BigUint::zero();
            for e in g.out_edges(u) {
                acc += &below[chain_end(e.to).index()];
                acc += 1u32;
            }
            below[u.index()] = acc;
        }
        below[NodeId::SOURCE.index()].clone() + 1u32
    }

    /// Reports every solution in lexicographic order.
    pub fn enumerate(&self, mode: OutputMode, on_emit: impl FnMut(Emission<'_>)) -> EnumStats {
        drain(self.cursor(), mode, on_emit)
    }

    /// Cursor over the solutions starting with `prefix`, or `None` if there
    /// are none.
    pub fn search_cursor(&self, prefix: &[u8]) -> Option<EnumCursor<'g>> {
        let mut u = NodeId::SOURCE;
        let mut k = 0;
        loop {
            if k == prefix.len() {
                return Some(EnumCursor::start(self.dag, u, prefix.to_vec()));
            }
            let (_, edge) = find_edge(self.dag.out_edges(u), prefix[k])?;
            let text = edge.text();
            let rest = &prefix[k..];
            let common = text.iter().zip(rest).take_while(|(a, b)| a == b).count();
            if common < text.len() {
                if common < rest.len() {
                    return None;
                }
                let mut buf = prefix.to_vec();
                buf.extend_from_slice(&text[common..]);
                return Some(EnumCursor::start(self.dag, edge.to, buf));
            }
            k += text.len();
            u = edge.to;
        }
    }

    /// Reports every solution with the given prefix, in lexicographic order,
    /// and returns how many there were.
    pub fn search_prefix(&self, prefix: &[u8], mut on_emit: impl FnMut(&[u8])) -> u64 {
        match self.search_cursor(prefix) {
            Some(cursor) => {
                drain(cursor, OutputMode::Full, |e| {
                    if let Emission::Full(s) = e {
                        on_emit(s)
                    }
                })
                .solutions
            }
            None => 0,
        }
    }

    /// The `i`-th solution in lexicographic order, counting from 1.
    pub fn select(&self, i: impl Into<BigUint>) -> Result<Vec<u8>, QueryError> {
        let mut i: BigUint = i.into();
        if i.is_zero() || &i > self.count() {
            return Err(QueryError::OutOfRange {
                index: i,
                count: self.count().clone(),
            });
        }
        let mut out = Vec::new();
        let mut u = NodeId::SOURCE;
        while u != NodeId::SINK {
            let sums = &self.counts.before[u.index()];
            // last edge whose preceding paths are fewer than i
            let k = sums.partition_point(|s| s < &i) - 1;
            i -= &sums[k];
            let edge = &self.dag.out_edges(u)[k];
            out.extend_from_slice(edge.text());
            u = edge.to;
        }
        Ok(out)
    }

    /// 1-based lexicographic position of `s` among the solutions.
    pub fn rank(&self, s: &[u8]) -> Result<BigUint, QueryError> {
        let mut acc = BigUint::zero();
        let mut u = NodeId::SOURCE;
        let mut k = 0;
        while u != NodeId::SINK {
            let edges = self.dag.out_edges(u);
            let found = if k == s.len() {
                // only a bare terminator edge can finish here
                edges.iter().position(|e| e.text().is_empty()).map(|idx| (idx, &edges[idx]))
            } else {
                find_edge(edges, s[k])
            };
            let Some((idx, edge)) = found else {
                return Err(if k == s.len() {
                    QueryError::EndsAtInternalNode
                } else {
                    QueryError::Mismatch { offset: k }
                });
            };
            let text = edge.text();
            let rest = &s[k..];
            let common = text.iter().zip(rest).take_while(|(a, b)| a == b).count();
            if common < text.len() {
                return Err(if common == rest.len() {
                    QueryError::EndsMidEdge { offset: s.len() }
                } else {
                    QueryError::Mismatch { offset: k + common }
                });
            }
            acc += self.counts.before_edge(u, idx);
            k += text.len();
            u = edge.to;
        }
        if k < s.len() {
            return Err(QueryError::Mismatch { offset: k });
        }
        Ok(acc + 1u32)
    }
}

fn find_edge(edges: &[Edge], c: u8) -> Option<(usize, &Edge)> {
    edges
        .binary_search_by_key(&(c as u16), Edge::first_key)
        .ok()
        .map(|k| (k, &edges[k]))
}

fn drain(mut cursor: EnumCursor<'_>, mode: OutputMode, mut on_emit: impl FnMut(Emission<'_>)) -> EnumStats {
    match mode {
        OutputMode::Full => {
            while let Some(s) = cursor.next_solution() {
                on_emit(Emission::Full(s));
            }
        }
        OutputMode::Compressed => {
            while let Some((keep, suffix)) = cursor.next_delta() {
                on_emit(Emission::Delta { keep, suffix });
            }
        }
    }
    cursor.stats()
}
