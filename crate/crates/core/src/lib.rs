//! Maximal common subsequences of two strings, stored in a polynomial-size
//! labeled DAG.
//!
//! Every source-to-sink path of an [`Mdag`] spells one maximal common
//! subsequence (MCS) of the two input strings, and every MCS is spelled by
//! exactly one path. Nodes are keyed by a [`Quadruple`]: the ends of the
//! leftmost embedding of a prefix in both strings plus its two swings. Prefixes
//! sharing a quadruple share all their completions, which is what keeps the
//! graph polynomial.
//!
//! Once built and compacted, the graph supports counting, lexicographic
//! enumeration in constant amortized time, prefix search, and rank/select
//! (see [`query`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, DOT export and
//! the command-line tool live in the `mdag-cli` crate.
//!
//! ```
//! use mdag_core::{build_mdag, compact_mdag, query::Annotated};
//!
//! let dag = compact_mdag(build_mdag(b"TCACAGAGA", b"ACCCGTAGG"));
//! let index = Annotated::new(&dag);
//! assert_eq!(index.count().to_string(), "5");
//! assert_eq!(index.select(1u32).unwrap(), b"ACAGG".to_vec());
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod builder;
pub mod crosscheck;
pub mod graph;
pub mod occidx;
pub mod oracle;
pub mod pos;
pub mod query;
pub mod swings;

pub use builder::{build_mdag, compact_mdag, expand_mdag, merge_twins, prune_mdag, Builder, BuildError};
pub use graph::{Edge, Mdag, NodeId, Stage, StructureError, TERMINATOR};
pub use occidx::OccurrenceIndex;
pub use pos::Pos;
pub use swings::{IndexedPair, Quadruple};
