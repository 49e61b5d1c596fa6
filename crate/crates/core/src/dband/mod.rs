//! The decentralized d-band algorithm.
//!
//! Vertices are split into `d` bands by tree level modulo `d`, and each band
//! colors from its own palette. Each vertex is an agent exchanging six kinds
//! of messages with its tree and step relations; [`run_dband`] executes all
//! agents over a simulated reliable network with per-channel FIFO delivery.

pub mod agent;
pub mod bounds;
pub mod cycles;
pub mod message;
pub mod palette;
pub mod sim;

pub use agent::BreakType;
pub use bounds::{check_color_bounds, BoundsVerdict};
pub use cycles::{find_dependency_cycles, DependencyCycle};
pub use message::{Message, MessageKind, Payload};
pub use palette::palette;
pub use sim::{run_dband, simulate, Interleaving, RunStats, SimConfig, SimulationRun, TraceRecord};
