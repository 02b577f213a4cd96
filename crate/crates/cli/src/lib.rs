//! File format, DOT export and benchmarking for maximal-common-subsequence
//! DAGs built by `mdag-core`. The `mdag` binary is a thin layer over these.

pub mod bench;
pub mod dot;
pub mod format;
pub mod input;
