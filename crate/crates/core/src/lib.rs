//! Powers of directed paths in tournaments.
//!
//! Tournaments come in explicit (bit-packed) and implicit (hashed) form.
//! On top of them sit median-ordering machinery ([`median`]), constructive
//! embeddings of path powers ([`embed`]), and exact oracles plus extremal
//! constructions ([`extremal`]). Every embedding returns a
//! [`PowerPathWitness`] that [`verify_power_path`] can check independently.

pub mod cli;
pub mod embed;
pub mod error;
pub mod extremal;
pub mod format;
pub mod median;
pub mod ordering;
pub mod tournament;
pub mod witness;

pub use error::{Error, Result};
pub use ordering::Ordering;
pub use tournament::{compose_forward, forward_edges, greedy_transitive, Model, Tournament, Vertex};
pub use witness::{verify_power_path, Mode, PowerPathWitness};
