//! Markov codings of finitely generated semigroups and groups as labelled
//! automata, exact sphere counting, regular asymptotic growth descriptors,
//! and Cesàro-averaged spherical averages of finite measure-preserving
//! actions.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV output and
//! the command-line front end live in the companion `markov-growth-cli`
//! crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod action;
pub mod codings;
pub mod counting;
pub mod exact;
pub mod graph;
pub mod regularity;

pub use counting::{count_table, enumerate_paths, verify_cut_convolution, CountMatrix, CountTable};
pub use graph::{Arc, Condensation, GraphBuilder, GraphError, LabelledGraph};
