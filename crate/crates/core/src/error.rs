use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A reason a skeleton fails to present a row-finite, source-free k-graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateId {
        id: String,
    },
    MalformedEdge {
        edge: String,
        reason: String,
    },
    MalformedSquare {
        first: [String; 2],
        second: [String; 2],
        reason: String,
    },
    /// A mixed-color two-edge path that lies in no square.
    IncompleteSquares {
        path: [String; 2],
    },
    /// A mixed-color two-edge path that lies in more than one square side.
    AmbiguousSquares {
        path: [String; 2],
        occurrences: usize,
    },
    /// A three-colored path whose two normalizations disagree.
    HexagonFailure {
        path: [String; 3],
        left: [String; 3],
        right: [String; 3],
    },
    /// `v Λ^{ε_i}` is empty.
    HasSource {
        vertex: String,
        color: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(f, "duplicate id {id}"),
            Violation::MalformedEdge { edge, reason } => write!(f, "edge {edge}: {reason}"),
            Violation::MalformedSquare {
                first,
                second,
                reason,
            } => {
                write!(f, "square {first:?}~{second:?}: {reason}")
            }
            Violation::IncompleteSquares { path } => {
                write!(f, "path {}{} lies in no square", path[0], path[1])
            }
            Violation::AmbiguousSquares { path, occurrences } => write!(
                f,
                "path {}{} lies in {occurrences} square sides",
                path[0], path[1]
            ),
            Violation::HexagonFailure { path, left, right } => write!(
                f,
                "path {}{}{} normalizes to both {}{}{} and {}{}{}",
                path[0], path[1], path[2], left[0], left[1], left[2], right[0], right[1], right[2]
            ),
            Violation::HasSource { vertex, color } => {
                write!(f, "vertex {vertex} receives no edge of color {color}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("cannot parse graph description: {0}")]
    Parse(String),
    #[error("invalid skeleton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("paths are not composable: source {source_vertex} ≠ range {range_vertex}")]
    NotComposable {
        source_vertex: String,
        range_vertex: String,
    },
    #[error("degree {requested} out of range for a path of degree {available}")]
    DegreeOutOfRange {
        requested: String,
        available: String,
    },
    #[error("degree has rank {got}, graph has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("pullback homomorphism is zero")]
    ZeroHomomorphism,
    #[error("operation requires a 1-graph, graph has rank {0}")]
    NotAOneGraph(usize),
    #[error("graph was not constructed as a pullback")]
    NotAPullbackGraph,
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("edge sequence is not a path: {0}")]
    NotAPath(String),
    #[error("invalid infinite path: {0}")]
    BadInfinitePath(String),
}

impl GraphError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            GraphError::Invalid(v) => v,
            _ => &[],
        }
    }
}
