//! End-to-end comparison of the built graph with the brute-force oracle on
//! one string pair.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::builder::{compact_mdag, stats, BuildError, Builder};
use crate::graph::{Mdag, NodeId};
use crate::oracle::{brute_force_mcs, definitional_swings, OracleError};
use crate::query::Annotated;
use crate::swings::Quadruple;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Mismatch {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("enumeration differs from the oracle at solution {index}")]
    Language { index: usize },
    #[error("graph counts {found} solutions, oracle has {expected}")]
    Count { found: BigUint, expected: usize },
    #[error("node for prefix {prefix:?} has key {found:?}, definition gives {expected:?}")]
    Swings {
        prefix: Vec<u8>,
        found: Quadruple,
        expected: Quadruple,
    },
    #[error("rank and select disagree at index {index}")]
    RankSelect { index: usize },
    #[error("enumeration used {frames} frames for {solutions} solutions")]
    Frames { frames: u64, solutions: u64 },
    #[error("enumeration used {frames} frames, differing from the computed count")]
    FramePrediction { frames: u64 },
    #[error("{violations} antichain violations, largest (l,m) class has {multiplicity} nodes")]
    Structure { violations: usize, multiplicity: usize },
    #[error("graph failed validation: {0}")]
    Invalid(#[from] crate::graph::StructureError),
}

/// Figures gathered by a successful [`cross_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub solutions: usize,
    pub frames: u64,
    pub max_lm_multiplicity: usize,
}

/// Builds the graph for `(x, y)` and compares it with the oracle: the
/// enumerated language and count, every node key against the definitional
/// swings of the prefixes reaching it, rank/select as mutual inverses, the
/// frame bound `2·|MCS| + 1` and its computed value, and the per-`(l,m)`
/// antichain and size bounds.
pub fn cross_check(x: &[u8], y: &[u8]) -> Result<Agreement, Mismatch> {
    let oracle = brute_force_mcs(x, y)?;
    let pruned = Builder::new().build(x, y)?;
    pruned.validate()?;

    keys_match_definitions(&pruned, x, y)?;
    let shape = stats(&pruned);
    let n = x.len().max(y.len()).max(1);
    if shape.antichain_violations != 0 || shape.max_lm_multiplicity >= 2 * n {
        return Err(Mismatch::Structure {
            violations: shape.antichain_violations,
            multiplicity: shape.max_lm_multiplicity,
        });
    }

    let dag = compact_mdag(pruned);
    dag.validate()?;
    let index = Annotated::new(&dag);
    if *index.count() != BigUint::from(oracle.len()) {
        return Err(Mismatch::Count {
            found: index.count().clone(),
            expected: oracle.len(),
        });
    }

    let mut cursor = index.cursor();
    let mut k = 0;
    while let Some(s) = cursor.next_solution() {
        if oracle.strings.get(k).map(Vec::as_slice) != Some(s) {
            return Err(Mismatch::Language { index: k });
        }
        k += 1;
    }
    if k != oracle.len() {
        return Err(Mismatch::Language { index: k });
    }
    let run = cursor.stats();
    if index.full_enumeration_frames() != BigUint::from(run.frames) {
        return Err(Mismatch::FramePrediction { frames: run.frames });
    }
    if run.frames > 2 * run.solutions + 1 {
        return Err(Mismatch::Frames {
            frames: run.frames,
            solutions: run.solutions,
        });
    }

    rank_select_agree(&index, &oracle.strings)?;

    Ok(Agreement {
        solutions: oracle.len(),
        frames: run.frames,
        max_lm_multiplicity: shape.max_lm_multiplicity,
    })
}

/// `select(i)` is the i-th of `sorted` and `rank` maps it back to `i`, for
/// every position.
pub fn rank_select_agree(index: &Annotated<'_>, sorted: &[Vec<u8>]) -> Result<(), Mismatch> {
    for (k, s) in sorted.iter().enumerate() {
        let i = BigUint::from(k + 1);
        let back = index.select(i.clone()).ok();
        if index.rank(s).ok() != Some(i) || back.as_ref() != Some(s) {
            return Err(Mismatch::RankSelect { index: k + 1 });
        }
    }
    Ok(())
}

/// Compares the key of every node of an uncompacted graph with the
/// definitional swings of each prefix spelled on the way to it.
pub fn keys_match_definitions(g: &Mdag, x: &[u8], y: &[u8]) -> Result<(), Mismatch> {
    let mut stack: Vec<(NodeId, Vec<u8>)> = alloc::vec![(NodeId::SOURCE, Vec::new())];
    while let Some((u, prefix)) = stack.pop() {
        if let Some(&found) = g.key(u) {
            let expected = definitional_swings(&prefix, x, y)?;
            if found != expected {
                return Err(Mismatch::Swings {
                    prefix,
                    found,
                    expected,
                });
            }
        }
        for e in g.out_edges(u) {
            if e.to != NodeId::SINK {
                let mut next = prefix.clone();
                next.extend_from_slice(e.text());
                stack.push((e.to, next));
            }
        }
    }
    Ok(())
}
