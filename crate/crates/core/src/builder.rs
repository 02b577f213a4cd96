//! MDAG construction: depth-first expansion over quadruple keys, pruning and
//! unary-path compaction.
//!
//! Expansion starts from the source key. For each node, every common
//! character after the node's ends is tried at its leftmost occurrence pair;
//! those passing [`IndexedPair::rectangle_test`] and
//! [`IndexedPair::junction_test`] become edges to the child key, creating and
//! expanding the child only the first time the key is seen. A node with no
//! accepted extension and both swings infinite is a complete MCS and gets a
//! terminator edge to the sink.
//!
//! Both filters only reject extensions with a concrete insertion witness, so
//! every MCS survives expansion. They are not sufficient, though: a prefix can
//! pass them and still have no maximal completion (`TC` for `TCACAG` /
//! `TACGAT`). Such nodes never reach a terminal, and [`prune_mdag`] removes
//! them. Because the junction test excludes insertions that need both strings
//! to grow, the swings of every surviving prefix are exact, so a node's key
//! determines its completions and merging nodes by key never mixes languages.
//! Expansion may visit those dead quadruples transiently; the pruned graph is
//! the true MDAG.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Edge, Mdag, NodeId, Stage, TERMINATOR};
use crate::pos::Pos;
use crate::swings::{IndexedPair, Quadruple};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("input contains the reserved terminator byte '$'")]
    ReservedByte,
    #[error("expansion exceeded the limit of {0} nodes")]
    NodeLimit(usize),
    #[error("input longer than {} bytes", Pos::MAX_LEN)]
    TooLong,
}

/// Key-to-node map used during expansion.
#[derive(Clone, Debug, Default)]
pub struct Memo {
    map: BTreeMap<Quadruple, NodeId>,
}

impl Memo {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the node registered for `key`, registering `make()` first if
    /// there is none. The flag tells whether the key was already present.
    pub fn lookup_or_insert(&mut self, key: Quadruple, make: impl FnOnce() -> NodeId) -> (NodeId, bool) {
        match self.map.get(&key) {
            Some(&id) => (id, true),
            None => {
                let id = make();
                self.map.insert(key, id);
                (id, false)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Configurable construction.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    max_nodes: Option<usize>,
}

impl Builder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Abort expansion once it has created this many nodes.
    pub fn max_nodes(mut self, limit: usize) -> Self {
        self.max_nodes = Some(limit);
        self
    }

    /// Expansion only, without pruning.
    pub fn expand(&self, x: &[u8], y: &[u8]) -> Result<Mdag, BuildError> {
        if x.contains(&TERMINATOR) || y.contains(&TERMINATOR) {
            return Err(BuildError::ReservedByte);
        }
        if x.len() >= Pos::MAX_LEN || y.len() >= Pos::MAX_LEN {
            return Err(BuildError::TooLong);
        }
        let pair = IndexedPair::new(x, y);
        let mut g = Mdag::with_terminals(x.len(), y.len(), pair.common_alphabet().len());
        let mut memo = Memo::new();
        memo.lookup_or_insert(Quadruple::SOURCE, || NodeId::SOURCE);

        let mut stack = vec![(NodeId::SOURCE, Quadruple::SOURCE)];
        while let Some((u, key)) = stack.pop() {
            let mut edges = Vec::new();
            for ext in pair.extensions(&key) {
                let (v, present) = memo.lookup_or_insert(ext.child, || g.add_node(ext.child));
                if !present {
                    if self.max_nodes.is_some_and(|cap| g.node_count() > cap) {
                        return Err(BuildError::NodeLimit(self.max_nodes.unwrap_or_default()));
                    }
                    stack.push((v, ext.child));
                }
                edges.push(Edge::new(v, &[ext.c]));
            }
            if edges.is_empty() && key.is_unbounded() {
                // with unbounded swings the least candidate always passes both
                // filters, so no accepted extension means no common character remains
                debug_assert!(pair.candidates(&key).next().is_none());
                edges.push(Edge::new(NodeId::SINK, &[TERMINATOR]));
            }
            g.set_edges(u, edges);
        }

        let keep = vec![true; g.node_count()];
        Ok(g.retain_and_renumber(&keep))
    }

    /// Expansion followed by [`prune_mdag`].
    pub fn build(&self, x: &[u8], y: &[u8]) -> Result<Mdag, BuildError> {
        self.expand(x, y).map(prune_mdag)
    }
}

/// Raw expansion result, dead ends included.
///
/// Panics if an input contains [`TERMINATOR`].
pub fn expand_mdag(x: &[u8], y: &[u8]) -> Mdag {
    Builder::new().expand(x, y).expect("cannot build MDAG")
}

/// Builds the pruned (uncompacted) MDAG of `x` and `y`.
///
/// Panics if an input contains [`TERMINATOR`]; use [`Builder`] to get an
/// error instead.
pub fn build_mdag(x: &[u8], y: &[u8]) -> Mdag {
    Builder::new().build(x, y).expect("cannot build MDAG")
}

/// Removes every node that cannot reach the sink.
///
/// Panics if the source itself would go: the empty string is always a common
/// subsequence, so that means the construction is broken.
pub fn prune_mdag(g: Mdag) -> Mdag {
    assert!(g.stage() <= Stage::Pruned, "prune_mdag expects an uncompacted graph");
    let n = g.node_count();
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for (u, e) in g.edges() {
        preds[e.to.index()].push(u);
    }
    let mut alive = vec![false; n];
    alive[NodeId::SINK.index()] = true;
    let mut stack = vec![NodeId::SINK];
    while let Some(v) = stack.pop() {
        for &u in &preds[v.index()] {
            if !alive[u.index()] {
                alive[u.index()] = true;
                stack.push(u);
            }
        }
    }
    assert!(
        alive[NodeId::SOURCE.index()],
        "internal invariant violated: the source cannot reach the sink"
    );
    let mut g = g.retain_and_renumber(&alive);
    g.set_stage(Stage::Pruned);
    g
}

/// Merges twins: nodes whose labeled out-edges, targets included, are
/// identical. A single round over the current edges; the lowest-numbered twin
/// survives with its key. Nodes whose only edge is the terminator are left
/// alone, since the sink already stands for the empty completion.
///
/// Keys only separate completions in one direction, so twins with different
/// keys exist: `AC` and `CC` for `TCACAGAGA` / `ACCCGTAGG` end at different
/// positions of the second string yet continue identically. Merging them
/// leaves the language unchanged.
pub fn merge_twins(g: Mdag) -> Mdag {
    assert!(g.stage() >= Stage::Pruned, "merge_twins expects a pruned graph");
    let n = g.node_count();
    let mut rep: Vec<NodeId> = g.nodes().collect();
    let mut seen: BTreeMap<&[Edge], NodeId> = BTreeMap::new();
    for u in g.nodes().filter(|&u| u != NodeId::SOURCE && u != NodeId::SINK) {
        let edges = g.out_edges(u);
        if edges.len() == 1 && edges[0].to == NodeId::SINK && edges[0].label.len() == 1 {
            continue;
        }
        rep[u.index()] = *seen.entry(g.out_edges(u)).or_insert(u);
    }
    drop(seen);
    if rep.iter().enumerate().all(|(u, r)| r.index() == u) {
        return g;
    }

    let keep: Vec<bool> = (0..n).map(|u| rep[u].index() == u).collect();
    let mut g = g;
    for u in (0..n).map(|u| NodeId(u as u32)) {
        let edges = g
            .out_edges(u)
            .iter()
            .map(|e| Edge::new(rep[e.to.index()], &e.label))
            .collect();
        g.set_edges(u, edges);
    }
    let stage = g.stage();
    let mut g = g.retain_and_renumber(&keep);
    g.set_stage(stage);
    g
}

/// Merges twins ([`merge_twins`]) and collapses every maximal unary path into a single edge carrying the concatenated
/// label. Interior nodes of such a path have one in-edge and one out-edge;
/// a unary node entered from several places is kept so no label is
/// duplicated. A compacted graph is returned as is.
pub fn compact_mdag(g: Mdag) -> Mdag {
    assert!(g.stage() >= Stage::Pruned, "compact_mdag expects a pruned graph");
    if g.stage() == Stage::Compacted {
        return g;
    }
    let g = merge_twins(g);
    let in_deg = g.in_degrees();
    let unary: Vec<bool> = g
        .nodes()
        .map(|u| {
            u != NodeId::SOURCE
                && u != NodeId::SINK
                && g.out_edges(u).len() == 1
                && in_deg[u.index()] == 1
        })
        .collect();

    let mut rewired = Vec::with_capacity(g.node_count());
    for u in g.nodes() {
        if unary[u.index()] {
            rewired.push(Vec::new());
            continue;
        }
        let edges = g
            .out_edges(u)
            .iter()
            .map(|e| {
                let mut label = e.label.to_vec();
                let mut to = e.to;
                while unary[to.index()] {
                    let next = &g.out_edges(to)[0];
                    label.extend_from_slice(&next.label);
                    to = next.to;
                }
                Edge::new(to, &label)
            })
            .collect();
        rewired.push(edges);
    }

    let keep: Vec<bool> = unary.iter().map(|&u| !u).collect();
    let mut g = g;
    for (u, edges) in rewired.into_iter().enumerate() {
        g.set_edges(NodeId(u as u32), edges);
    }
    let mut g = g.retain_and_renumber(&keep);
    g.set_stage(Stage::Compacted);
    g
}

/// Size and shape measurements of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub nodes: usize,
    pub edges: usize,
    /// Distinct `(x_end, y_end)` pairs among keyed nodes.
    pub lm_pairs: usize,
    /// Most nodes sharing one `(x_end, y_end)` pair.
    pub max_lm_multiplicity: usize,
    pub max_out_degree: usize,
    /// Edges on the longest source-sink path.
    pub depth: usize,
    /// Pairs of nodes with equal ends whose swings dominate one another
    /// strictly (`top > top'` and `bottom > bottom'`).
    pub antichain_violations: usize,
}

fn lm_buckets(g: &Mdag) -> BTreeMap<(Pos, Pos), Vec<(Pos, Pos)>> {
    let mut buckets: BTreeMap<(Pos, Pos), Vec<(Pos, Pos)>> = BTreeMap::new();
    for u in g.nodes().filter(|&u| u != NodeId::SOURCE) {
        if let Some(q) = g.key(u) {
            buckets.entry(q.ends()).or_default().push(q.swings());
        }
    }
    buckets
}

pub fn stats(g: &Mdag) -> Stats {
    let buckets = lm_buckets(g);
    let antichain_violations = buckets
        .values()
        .map(|swings| {
            let mut count = 0;
            for (k, a) in swings.iter().enumerate() {
                for b in &swings[k + 1..] {
                    if (a.0 > b.0 && a.1 > b.1) || (b.0 > a.0 && b.1 > a.1) {
                        count += 1;
                    }
                }
            }
            count
        })
        .sum();

    let mut depth = vec![0usize; g.node_count()];
    if let Some(order) = g.topological_order() {
        for &u in order.iter().rev() {
            depth[u.index()] = g
                .out_edges(u)
                .iter()
                .map(|e| depth[e.to.index()] + 1)
                .max()
                .unwrap_or(0);
        }
    }

    Stats {
        nodes: g.node_count(),
        edges: g.edge_count(),
        lm_pairs: buckets.len(),
        max_lm_multiplicity: buckets.values().map(Vec::len).max().unwrap_or(0),
        max_out_degree: g.nodes().map(|u| g.out_edges(u).len()).max().unwrap_or(0),
        depth: depth[NodeId::SOURCE.index()],
        antichain_violations,
    }
}

/// Violations of the swing monotonicity rules between parent/child edge
/// pairs that land on the same child ends from different parent ends.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MonotonicityReport {
    /// Pairs compared.
    pub pairs: usize,
    /// Parent swing strictly smaller but child swing strictly larger.
    pub forward: usize,
    /// Child swing strictly smaller but parent swing not strictly smaller.
    pub reverse: usize,
}

/// Checks swing monotonicity along single-character edges of an uncompacted
/// graph (expanded or pruned), for top and bottom swings separately.
pub fn monotonicity_report(g: &Mdag) -> MonotonicityReport {
    assert!(g.stage() != Stage::Compacted, "needs single-character edges");
    let mut by_child_ends: BTreeMap<(Pos, Pos), Vec<(Quadruple, Quadruple)>> = BTreeMap::new();
    for (u, e) in g.edges() {
        if let (Some(pq), Some(cq)) = (g.key(u), g.key(e.to)) {
            by_child_ends.entry(cq.ends()).or_default().push((*pq, *cq));
        }
    }
    let mut report = MonotonicityReport::default();
    let check = |p: Pos, p2: Pos, c: Pos, c2: Pos, report: &mut MonotonicityReport| {
        if p < p2 && c > c2 {
            report.forward += 1;
        }
        if c < c2 && p >= p2 {
            report.reverse += 1;
        }
    };
    for group in by_child_ends.values() {
        for a in group {
            for b in group {
                if a.0.ends() == b.0.ends() {
                    continue;
                }
                report.pairs += 1;
                check(a.0.top, b.0.top, a.1.top, b.1.top, &mut report);
                check(a.0.bottom, b.0.bottom, a.1.bottom, b.1.bottom, &mut report);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;

    fn q(l: i64, m: i64, t: i64, b: i64) -> Quadruple {
        Quadruple::from_signed(l, m, t, b).unwrap()
    }

    fn keys(g: &Mdag) -> Vec<Quadruple> {
        g.nodes().filter_map(|u| g.key(u).copied()).collect()
    }

    fn labels(g: &Mdag) -> Vec<String> {
        let mut out: Vec<String> = g
            .edges()
            .map(|(_, e)| String::from_utf8(e.label.to_vec()).unwrap())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn memo_reports_presence() {
        let mut memo = Memo::new();
        let key = q(5, 5, 8, 9);
        assert_eq!(memo.lookup_or_insert(key, || NodeId(7)), (NodeId(7), false));
        assert_eq!(memo.lookup_or_insert(key, || NodeId(8)), (NodeId(7), true));
        assert_eq!(memo.lookup_or_insert(q(5, 5, 9, 8), || NodeId(9)), (NodeId(9), false));
        assert_eq!(memo.len(), 2);
    }

    #[test]
    fn prune_drops_dead_prefixes() {
        let raw = expand_mdag(b"TCACAG", b"TACGAT");
        assert!(keys(&raw).contains(&q(1, 2, 3, -2)));
        assert!(keys(&raw).contains(&q(2, 4, 4, -2)));
        let pruned = prune_mdag(raw);
        assert!(!keys(&pruned).contains(&q(1, 2, 3, -2)));
        assert!(!keys(&pruned).contains(&q(2, 4, 4, -2)));
        pruned.validate().unwrap();
    }

    #[test]
    fn identical_strings_give_one_path() {
        let g = build_mdag(b"ABC", b"ABC");
        assert_eq!(g.node_count(), 5);
        let c = compact_mdag(g);
        assert_eq!(c.node_count(), 2);
        assert_eq!(labels(&c), ["ABC$"]);
    }

    #[test]
    fn disjoint_alphabets_give_terminator_only() {
        let g = build_mdag(b"AB", b"CD");
        assert_eq!(g.node_count(), 2);
        assert_eq!(labels(&g), ["$"]);
        let c = compact_mdag(g);
        assert_eq!(labels(&c), ["$"]);
        c.validate().unwrap();

        let empty = compact_mdag(build_mdag(b"", b""));
        assert_eq!(labels(&empty), ["$"]);
    }

    #[test]
    fn fig1_compacts_to_four_nodes() {
        let g = compact_mdag(build_mdag(b"TCACAGAGA", b"ACCCGTAGG"));
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(labels(&g), ["AC", "AG", "CC", "G$", "GAG$", "TAG"]);
        let s = stats(&g);
        assert_eq!((s.nodes, s.edges, s.antichain_violations), (4, 6, 0));
    }

    #[test]
    fn compaction_is_idempotent() {
        let once = compact_mdag(build_mdag(b"TCACAGAGA", b"ACCCGTAGG"));
        let twice = compact_mdag(once.clone());
        assert_eq!(labels(&once), labels(&twice));
        assert_eq!(once.node_count(), twice.node_count());
    }

    #[test]
    fn converging_prefixes_share_a_node() {
        let g = build_mdag(b"TCACAGATG", b"ACTCTGGTAG");
        let shared = q(5, 5, 8, 9);
        assert_eq!(keys(&g).iter().filter(|&&k| k == shared).count(), 1);
        let u = g.nodes().find(|&u| g.key(u) == Some(&shared)).unwrap();
        let preds = g.edges().filter(|(_, e)| e.to == u).count();
        assert!(preds >= 2, "TCG and ACG should both reach the shared node");
        let ext: Vec<u8> = g.out_edges(u).iter().map(|e| e.label[0]).collect();
        assert_eq!(ext, b"AT");
    }

    #[test]
    fn reserved_terminator_is_rejected() {
        assert_eq!(Builder::new().build(b"A$", b"A").unwrap_err(), BuildError::ReservedByte);
    }

    #[test]
    fn node_limit() {
        assert_eq!(
            Builder::new().max_nodes(3).build(b"TCACAGAGA", b"ACCCGTAGG").unwrap_err(),
            BuildError::NodeLimit(3)
        );
    }

    #[test]
    fn stats_of_single_path() {
        let s = stats(&build_mdag(b"ABC", b"ABC"));
        assert_eq!(s.depth, 4);
        assert_eq!(s.max_out_degree, 1);
        assert_eq!(s.max_lm_multiplicity, 1);
    }
}
