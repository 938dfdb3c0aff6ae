//! Exhaustive generation of unlabelled rooted and free trees.
//!
//! Every tree is represented by its *weight sequence*: the order of the
//! subtree hanging from each vertex, listed in pre-order. Canonically
//! ordered rooted trees (siblings sorted so their subtree sequences are
//! non-increasing) give one sequence per isomorphism class, and rooting a
//! free tree at its centroid (or splitting it at its two centroids) does the
//! same for free trees.
//!
//! Generation is streaming: [`rootedgen::rooted_trees`] and
//! [`freegen::free_trees`] return pull-based streams that reuse one output
//! buffer, so the full list is never materialized unless the caller asks.
//! Small orders are served from a [`rootedgen::RootedCache`] of fully
//! enumerated tables.
//!
//! # Indexing
//!
//! Weight sequences are stored as flat `[u8]` slices, indexed from 0. The
//! weight of the root is `s[0]`; the first child of the root is at `s[1]`.
//! Vertex labels in [`convert::AdjList`] are likewise 0-based in memory
//! (vertex `i` is the `i`-th vertex in pre-order) and are printed 1-based by
//! the text formats. [`rootedgen::rt_qstart`] is the one accessor that
//! returns a 1-based position, matching how table positions are reported on
//! the command line.

pub mod cli;
pub mod convert;
pub mod error;
pub mod freegen;
pub mod oracle;
pub mod rootedgen;
pub mod wseq;

pub use error::{Error, Result};
pub use freegen::{count_free, free_trees, FreeStream};
pub use rootedgen::{count_rooted, init_cache, rooted_trees, RootedCache, RootedStream};
pub use streaming_iterator::StreamingIterator;
pub use wseq::{Weight, WeightSeq};
