//! Colored skeletons with factorization squares, and the graph-description
//! file format.
//!
//! A graph file is JSON of the form
//!
//! ```json
//! {
//!   "k": 2,
//!   "vertices": ["v"],
//!   "edges": [
//!     {"id": "b", "color": 1, "src": "v", "rng": "v"},
//!     {"id": "r", "color": 2, "src": "v", "rng": "v"}
//!   ],
//!   "squares": [{"first": ["b", "r"], "second": ["r", "b"]}]
//! }
//! ```
//!
//! Colors are 1-based. A square `{first: [a, b], second: [bp, ap]}` with
//! `color(a) < color(b)` identifies the two-edge paths `a b` and `bp ap`;
//! within a path, consecutive edges `x y` satisfy `src(x) = rng(y)`.
//! Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub color: usize,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareSpec {
    pub first: [String; 2],
    pub second: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Skeleton {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub squares: Vec<SquareSpec>,
}

impl Skeleton {
    pub fn new(k: usize) -> Self {
        Skeleton {
            k,
            vertices: Vec::new(),
            edges: Vec::new(),
            squares: Vec::new(),
        }
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_string());
        self
    }

    /// Adds an edge `src → rng` of the given 1-based color.
    pub fn edge(mut self, id: &str, color: usize, src: &str, rng: &str) -> Self {
        self.edges.push(EdgeSpec {
            id: id.to_string(),
            color,
            src: src.to_string(),
            rng: rng.to_string(),
        });
        self
    }

    /// Identifies `a b` (lower color first) with `bp ap`.
    pub fn square(mut self, a: &str, b: &str, bp: &str, ap: &str) -> Self {
        self.squares.push(SquareSpec {
            first: [a.to_string(), b.to_string()],
            second: [bp.to_string(), ap.to_string()],
        });
        self
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("skeleton serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_schema() {
        let text = r#"{
            "k": 2,
            "vertices": ["v"],
            "edges": [
                {"id": "b", "color": 1, "src": "v", "rng": "v"},
                {"id": "r", "color": 2, "src": "v", "rng": "v"}
            ],
            "squares": [{"first": ["b", "r"], "second": ["r", "b"]}]
        }"#;
        let sk = Skeleton::from_json(text).unwrap();
        assert_eq!(sk.k, 2);
        assert_eq!(sk.squares.len(), 1);
        assert_eq!(Skeleton::from_json(&sk.to_json()).unwrap(), sk);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"k": 1, "vertices": ["v"], "edges": [], "colour": 3}"#;
        assert!(matches!(
            Skeleton::from_json(text),
            Err(GraphError::Parse(_))
        ));
        let text = r#"{"k": 1, "vertices": ["v"],
            "edges": [{"id": "e", "color": 1, "src": "v", "rng": "v", "w": 1}]}"#;
        assert!(matches!(
            Skeleton::from_json(text),
            Err(GraphError::Parse(_))
        ));
    }
}
