//! Finite higher-rank graphs.
//!
//! Validation and unique factorization ([`graph`]), cycline pairs
//! ([`cycline`]), eventually periodic infinite paths and regularity
//! ([`infinite`]), finite operator models of the aperiodic and twisted
//! representations ([`model`]) and the distinguished states ([`states`]).

pub mod corpus;
pub mod cycline;
pub mod degree;
pub mod error;
pub mod graph;
pub mod infinite;
pub mod model;
pub mod pullback;
pub mod skeleton;
pub mod states;

pub use degree::{Degree, Offset};
pub use error::{GraphError, Violation};
pub use graph::{EdgeId, KGraph, Path, VertexId};
pub use skeleton::Skeleton;
