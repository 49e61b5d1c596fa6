//! Pseudo-scheduling for the broadcast scheduling problem.
//!
//! A pseudo-schedule is a vertex coloring (a TDMA slot or FDMA channel
//! assignment) that guarantees a conflict-free directed path between every
//! ordered pair of vertices, rather than conflict-freedom on every path as a
//! distance-2 coloring does. This crate provides:
//!
//! * [`graph`] and [`tree`]: simple undirected graphs, rooted spanning trees
//!   and their kinship relations (parent, child, stepparent, stepchild).
//! * [`generate`] and [`io`]: deterministic generators and JSON/DOT I/O.
//! * [`verify`]: verifiers for strict schedules, pseudo-schedules and
//!   T-pseudo-schedules, plus a brute-force oracle.
//! * [`twice_degree`]: the centralized algorithm using at most `2Δ` colors.
//! * [`dband`]: the decentralized d-band protocol on a simulated network.
//! * [`baselines`]: greedy distance-2 coloring and an exact pseudo-schedule
//!   search for tiny graphs.
//! * [`bench`]: the bound-checking benchmark harness.

pub mod baselines;
pub mod bench;
pub mod coloring;
pub mod dband;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod tree;
pub mod twice_degree;
pub mod verify;

pub use coloring::{Color, Coloring};
pub use error::{Error, Result};
pub use graph::{Graph, Vertex};
pub use tree::{Kin, Kinship, RootedTree};
