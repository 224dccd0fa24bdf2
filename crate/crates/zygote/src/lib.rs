//! Inverse design of deployable panel structures.
//!
//! A target surface — a voxelized solid or an open quad sheet — is panelized
//! into uniform squares, and the library searches for a spanning tree of
//! hinge connections that folds all panels into K equal-height piles on a
//! small grid footprint. Run forward, the same tree deploys the stack back
//! into the target shape. The serialized tree (panel order, hinge sides,
//! fold angles, bridges between piles) is the coded sequence; a fold
//! simulator verifies both end states and measures the volume expansion.
//!
//! The crate is organized around the pipeline stages:
//!
//! - [`geometry`]: voxel solids, sheets, and their hinge-candidate dual graphs
//! - [`hamilton`]: Hamiltonian cycle/path search with a brute-force oracle
//! - [`partition`]: balanced connected K-way partitioning (Fiduccia-Mattheyses)
//! - [`layout`]: pile placement on the grid and the pile parent tree
//! - [`treestack`]: pile stacking order, bridges, breaks, and the coded sequence
//! - [`foldsim`]: rigid-pose deployment, stacked-state checking, expansion ratio
//! - [`cli`]: the `zygote` command-line front end
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod error;
pub mod foldsim;
pub mod geometry;
pub mod hamilton;
pub mod layout;
pub mod partition;
pub mod seed;
pub mod synth;
pub mod treestack;

pub use error::{Error, Result};
