//! Conditioned Bienaymé–Galton–Watson trees, their looptrees, size-biased trunks
//! and negative-drift random walks, with exact oracles for small sizes.

pub mod error;
pub mod lab;
pub mod law;
pub mod looptree;
pub mod rng;
pub mod sampling;
pub mod tree;
pub mod walk;

pub use error::{Error, Result};
pub use law::{LawSpec, OffspringLaw};
pub use looptree::LoopGraph;
pub use rng::RandomSource;
pub use tree::{CodingPaths, PlaneTree, TrunkSkeleton};
pub use walk::{WalkLaw, WalkPath};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
