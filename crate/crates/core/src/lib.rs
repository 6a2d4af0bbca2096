//! Exact counts of labeled forests and a machine check of the
//! weight-reversing involution on partially-paired rooted (PPR) forests.
//!
//! The number of forests of unrooted trees on `[n]` is an alternating sum
//! whose `j`-th term counts PPR forests with `j` pairs of trees. The
//! involution in [`involution`] cancels every PPR forest except the special
//! ones, which correspond to unrooted forests. [`enumerate`] supplies brute
//! force oracles for all of the closed forms in [`exactmath`].

mod dsu;
pub mod enumerate;
pub mod error;
pub mod exactmath;
pub mod involution;
pub mod model;

pub use dsu::DisjointSets;
pub use enumerate::{count_stream, Enumerator, DEFAULT_LIMIT};
pub use error::{Error, Result};
pub use exactmath::{ExactRational, Natural, SignedCount};
pub use involution::{
    apply, apply_with_action, classify, find_merge_site, find_split_site, verify_involution,
    InvolutionAction, MergeSite, SplitSite, VerificationReport,
};
pub use model::{
    validate_ppr, PprForest, PprForestData, RootedForest, RootedForestData, UnrootedForest,
    UnrootedForestData, Vertex, Violation,
};
