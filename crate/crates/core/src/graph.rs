//! The MDAG: a node- and edge-labeled DAG with one source and one sink.

use core::fmt;

use alloc::boxed::Box;
use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::swings::Quadruple;

/// Final byte of every label entering the sink. Reserved: it may not occur in
/// the input strings.
pub const TERMINATOR: u8 = b'$';

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const SOURCE: NodeId = NodeId(0);
    pub const SINK: NodeId = NodeId(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NodeId::SOURCE => f.write_str("s"),
            NodeId::SINK => f.write_str("t"),
            NodeId(id) => write!(f, "n{id}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub to: NodeId,
    /// Non-empty. Ends with [`TERMINATOR`] exactly when `to` is the sink.
    pub label: Box<[u8]>,
}

impl Edge {
    pub fn new(to: NodeId, label: &[u8]) -> Self {
        Edge {
            to,
            label: label.into(),
        }
    }

    /// The label without its terminator.
    #[inline]
    pub fn text(&self) -> &[u8] {
        if self.to == NodeId::SINK {
            &self.label[..self.label.len() - 1]
        } else {
            &self.label
        }
    }

    /// Sort key among sibling edges: the first text byte, with a bare
    /// terminator ordered after every byte.
    #[inline]
    pub fn first_key(&self) -> u16 {
        self.text().first().map_or(256, |&c| c as u16)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "-{}-> {:?}", self.label.escape_ascii(), self.to)
    }
}

/// Lifecycle of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    /// Raw result of the expansion; may contain nodes that cannot reach the sink.
    Expanded,
    /// Dead ends removed; every node lies on a source-sink path.
    Pruned,
    /// Unary paths collapsed into multi-character labels.
    Compacted,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("graph needs at least a source and a sink")]
    TooFewNodes,
    #[error("node {0} has the wrong key for its role")]
    BadKey(u32),
    #[error("two nodes share key {0}")]
    DuplicateKey(Quadruple),
    #[error("edge from node {0} points outside the graph")]
    DanglingEdge(u32),
    #[error("edge from node {0} has a malformed label")]
    BadLabel(u32),
    #[error("out-edges of node {0} are not sorted by distinct first characters")]
    SiblingOrder(u32),
    #[error("node {0} has no out-edges but is not the sink")]
    DeadEnd(u32),
    #[error("sink has out-edges")]
    SinkHasEdges,
    #[error("node {0} is unreachable from the source")]
    Unreachable(u32),
    #[error("graph contains a cycle")]
    Cycle,
    #[error("edge from node {0} goes backwards in the canonical order")]
    NotTopological(u32),
    #[error("compacted graph has collapsible node {0}")]
    UnaryNode(u32),
    #[error("multi-character label on edge from node {0} before compaction")]
    LongLabel(u32),
}

/// Maximal-common-subsequence DAG.
///
/// Node 0 is the source and node 1 the sink. In canonical numbering every
/// other node comes after all of its predecessors. Each non-sink node carries
/// its [`Quadruple`] key.
#[derive(Clone, Debug)]
pub struct Mdag {
    keys: Vec<Option<Quadruple>>,
    out: Vec<Vec<Edge>>,
    stage: Stage,
    verified: bool,
    x_len: usize,
    y_len: usize,
    sigma: usize,
}

impl Mdag {
    pub(crate) fn with_terminals(x_len: usize, y_len: usize, sigma: usize) -> Self {
        Mdag {
            keys: vec![Some(Quadruple::SOURCE), None],
            out: vec![Vec::new(), Vec::new()],
            stage: Stage::Expanded,
            verified: false,
            x_len,
            y_len,
            sigma,
        }
    }

    pub(crate) fn add_node(&mut self, key: Quadruple) -> NodeId {
        self.keys.push(Some(key));
        self.out.push(Vec::new());
        NodeId(self.keys.len() as u32 - 1)
    }

    pub(crate) fn set_edges(&mut self, u: NodeId, edges: Vec<Edge>) {
        self.out[u.index()] = edges;
    }

    pub(crate) fn set_stage(&mut self, stage: Stage) {
        self.stage = stage;
    }

    /// Reassembles a graph from its parts, checking every structural invariant.
    ///
    /// `keys[0]` must be the source key and `keys[1]` `None` (the sink).
    pub fn from_parts(
        keys: Vec<Option<Quadruple>>,
        out: Vec<Vec<Edge>>,
        stage: Stage,
        (x_len, y_len, sigma): (usize, usize, usize),
    ) -> Result<Self, StructureError> {
        if keys.len() != out.len() {
            return Err(StructureError::TooFewNodes);
        }
        let g = Mdag {
            keys,
            out,
            stage,
            verified: false,
            x_len,
            y_len,
            sigma,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.keys.len() as u32).map(NodeId)
    }

    /// Key of a node; `None` for the sink.
    pub fn key(&self, u: NodeId) -> Option<&Quadruple> {
        self.keys[u.index()].as_ref()
    }

    /// Out-edges sorted by [`Edge::first_key`].
    pub fn out_edges(&self, u: NodeId) -> &[Edge] {
        &self.out[u.index()]
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, &Edge)> + '_ {
        self.nodes().flat_map(move |u| self.out_edges(u).iter().map(move |e| (u, e)))
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn set_verified(&mut self, verified: bool) {
        self.verified = verified;
    }

    pub fn x_len(&self) -> usize {
        self.x_len
    }

    pub fn y_len(&self) -> usize {
        self.y_len
    }

    /// Number of bytes common to both input strings.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub(crate) fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for (_, e) in self.edges() {
            deg[e.to.index()] += 1;
        }
        deg
    }

    /// Kahn order over all nodes, or `None` if there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let mut deg = self.in_degrees();
        let mut queue: VecDeque<NodeId> = self.nodes().filter(|u| deg[u.index()] == 0).collect();
        let mut order = Vec::with_capacity(self.node_count());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for e in self.out_edges(u) {
                let d = &mut deg[e.to.index()];
                *d -= 1;
                if *d == 0 {
                    queue.push_back(e.to);
                }
            }
        }
        (order.len() == self.node_count()).then_some(order)
    }

    /// Keeps the nodes flagged in `keep` (source and sink must be among them),
    /// drops edges into removed nodes, and renumbers canonically.
    pub(crate) fn retain_and_renumber(mut self, keep: &[bool]) -> Self {
        debug_assert!(keep[0] && keep[1]);
        for (u, edges) in self.out.iter_mut().enumerate() {
            if keep[u] {
                edges.retain(|e| keep[e.to.index()]);
            } else {
                edges.clear();
            }
        }
        self.renumber(keep)
    }

    /// Canonical numbering: source 0, sink 1, then reverse DFS postorder from
    /// the source, visiting out-edges in label order. Unreachable or unkept
    /// nodes are dropped.
    fn renumber(self, keep: &[bool]) -> Self {
        let n = self.node_count();
        let mut visited = vec![false; n];
        let mut postorder = Vec::with_capacity(n);
        let mut stack = vec![(NodeId::SOURCE, 0usize)];
        visited[0] = true;
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            if let Some(e) = self.out[u.index()].get(next) {
                top.1 += 1;
                let v = e.to.index();
                if !visited[v] && keep[v] {
                    visited[v] = true;
                    stack.push((e.to, 0));
                }
            } else {
                postorder.push(u);
                stack.pop();
            }
        }

        const UNSET: u32 = u32::MAX;
        let mut new_id = vec![UNSET; n];
        new_id[0] = 0;
        new_id[1] = 1;
        let mut next_id = 2;
        for &u in postorder.iter().rev() {
            if u != NodeId::SOURCE && u != NodeId::SINK {
                new_id[u.index()] = next_id;
                next_id += 1;
            }
        }

        let count = next_id as usize;
        let mut keys = vec![None; count];
        let mut out = vec![Vec::new(); count];
        for (old, (key, edges)) in self.keys.into_iter().zip(self.out).enumerate() {
            let id = new_id[old];
            if id == UNSET {
                continue;
            }
            keys[id as usize] = key;
            out[id as usize] = edges
                .into_iter()
                .map(|e| Edge {
                    to: NodeId(new_id[e.to.index()]),
                    label: e.label,
                })
                .collect();
        }
        Mdag { keys, out, ..self }
    }

    /// Checks every structural invariant of a pruned or compacted graph.
    pub fn validate(&self) -> Result<(), StructureError> {
        let n = self.node_count();
        if n < 2 {
            return Err(StructureError::TooFewNodes);
        }
        if self.keys[0] != Some(Quadruple::SOURCE) {
            return Err(StructureError::BadKey(0));
        }
        if self.keys[1].is_some() {
            return Err(StructureError::BadKey(1));
        }
        let mut seen = BTreeSet::new();
        for (u, key) in self.keys.iter().enumerate().skip(2) {
            match key {
                Some(q) if *q == Quadruple::SOURCE => return Err(StructureError::BadKey(u as u32)),
                Some(q) => {
                    if !seen.insert(*q) {
                        return Err(StructureError::DuplicateKey(*q));
                    }
                }
                None => return Err(StructureError::BadKey(u as u32)),
            }
        }
        if !self.out[1].is_empty() {
            return Err(StructureError::SinkHasEdges);
        }

        for (u, e) in self.edges() {
            let v = e.to.index();
            if v >= n || e.to == NodeId::SOURCE || e.to == u {
                return Err(StructureError::DanglingEdge(u.0));
            }
        }
        let in_deg = self.in_degrees();
        for u in self.nodes() {
            let id = u.0;
            let edges = self.out_edges(u);
            if u != NodeId::SINK && edges.is_empty() {
                return Err(StructureError::DeadEnd(id));
            }
            if self.stage == Stage::Compacted
                && u != NodeId::SOURCE
                && u != NodeId::SINK
                && edges.len() == 1
                && in_deg[u.index()] == 1
            {
                return Err(StructureError::UnaryNode(id));
            }
            for e in edges {
                let into_sink = e.to == NodeId::SINK;
                let label_ok = !e.label.is_empty()
                    && (e.label.last() == Some(&TERMINATOR)) == into_sink
                    && !e.text().contains(&TERMINATOR);
                if !label_ok {
                    return Err(StructureError::BadLabel(id));
                }
                if self.stage != Stage::Compacted && e.label.len() != 1 {
                    return Err(StructureError::LongLabel(id));
                }
                if !into_sink && e.to <= u {
                    return Err(StructureError::NotTopological(id));
                }
            }
            if !edges.windows(2).all(|w| w[0].first_key() < w[1].first_key()) {
                return Err(StructureError::SiblingOrder(id));
            }
        }

        // forward edges only (checked above) make the graph acyclic; with a
        // unique source and sink every node then lies on a source-sink path
        let deg = self.in_degrees();
        if deg[0] != 0 {
            return Err(StructureError::Cycle);
        }
        if let Some(u) = (1..n).find(|&u| deg[u] == 0) {
            return Err(StructureError::Unreachable(u as u32));
        }
        Ok(())
    }
}
