//! Kneser graphs `K(n,k)`, odd graphs `O_{k+1} = K(2k+1,k)` and their line graphs.
//!
//! The automorphism group of `K(n,k)` is represented by `Sym([n])` acting on
//! `k`-subsets. Everything in this crate revolves around one observation: a
//! group acting regularly on the vertices cannot contain a non-identity
//! element that fixes a vertex, while every involution of `Sym([n])` fixes
//! some vertex of `K(n,k)` under suitable parity conditions. Whenever the
//! vertex count is even such a group would need an involution, so the graph
//! is not a Cayley graph.
//!
//! Modules:
//!
//! - [`numth`]: exact binomials, Lucas residues, and the parity and mod-4
//!   criteria for `C(2k+1,k)`.
//! - [`perm`]: permutations of `[n]`, cycle notation, involution enumeration.
//! - [`kneser`]: `k`-subset vertices, disjointness adjacency, induced action.
//! - [`witness`]: fixed vertices and disjoint fixed pairs for involutions,
//!   plus the classification of Kneser and odd graphs.
//! - [`linegraph`]: edge-vertices of the line graph, lifted automorphisms.
//! - [`cayleycheck`]: exhaustive and sampled verification sweeps and a
//!   brute-force regular-subgroup search for tiny instances.

pub mod cayleycheck;
pub mod classification;
mod error;
pub mod kneser;
pub mod linegraph;
pub mod numth;
pub mod perm;
pub mod witness;

pub use classification::{Classification, Family, Parity, TheoremTag, Verdict};
pub use error::{Error, Result};
pub use kneser::{KSubset, KneserParams};
pub use linegraph::EdgePair;
pub use numth::BigNat;
pub use perm::{InvolutionShape, Permutation};
