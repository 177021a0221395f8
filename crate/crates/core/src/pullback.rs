//! The k-graph `f*E` obtained from a 1-graph `E` and a homomorphism
//! `f: ℕ^k → ℕ`, and the projection `p₁` back to `E`.
//!
//! A color-`i` edge of `f*E` is a path `μ ∈ E^{f_i}`; when `f_i = 0` it is a
//! loop at a vertex. Edge ids are `"{i}:{e1.e2…}"`, or `"{i}:@{v}"` for the
//! loops.

use std::collections::HashMap;
use std::sync::Arc;

use crate::degree::Degree;
use crate::error::GraphError;
use crate::graph::{EdgeId, KGraph, Path, Pullback, VertexId};
use crate::skeleton::Skeleton;

fn base_label(e: &KGraph, edges: &[EdgeId], at: VertexId) -> String {
    if edges.is_empty() {
        format!("@{}", e.vertex_name(at))
    } else {
        edges
            .iter()
            .map(|&x| e.edge_name(x))
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl KGraph {
    /// Builds `f*E` for a 1-graph `E = self`.
    pub fn pullback(&self, f: &[u32]) -> Result<KGraph, GraphError> {
        if self.k() != 1 {
            return Err(GraphError::NotAOneGraph(self.k()));
        }
        if f.is_empty() || f.iter().all(|&x| x == 0) {
            return Err(GraphError::ZeroHomomorphism);
        }
        let mut sk = Skeleton::new(f.len());
        for v in self.vertices() {
            sk = sk.vertex(self.vertex_name(v));
        }
        // (color, base edges, range) ↦ edge name
        let mut names: HashMap<(usize, Vec<EdgeId>, VertexId), String> = HashMap::new();
        let mut images: HashMap<String, Path> = HashMap::new();
        for (i, &fi) in f.iter().enumerate() {
            for mu in self.paths_of_degree(&Degree::new(vec![fi])) {
                let id = format!("{}:{}", i + 1, base_label(self, mu.edges(), mu.range()));
                sk = sk.edge(
                    &id,
                    i + 1,
                    self.vertex_name(mu.source()),
                    self.vertex_name(mu.range()),
                );
                names.insert((i, mu.edges().to_vec(), mu.range()), id.clone());
                images.insert(id, mu);
            }
        }
        let mut squares = Vec::new();
        for (i, &fi) in f.iter().enumerate() {
            for (j, &fj) in f.iter().enumerate().skip(i + 1) {
                for a in self.paths_of_degree(&Degree::new(vec![fi])) {
                    for b in self.paths_from(a.source(), &Degree::new(vec![fj])) {
                        let whole = self.compose(&a, &b)?;
                        let (bp, ap) = self.factorize(&whole, &Degree::new(vec![fj]))?;
                        let side =
                            |c: usize, p: &Path| names[&(c, p.edges().to_vec(), p.range())].clone();
                        squares.push((side(i, &a), side(j, &b), side(j, &bp), side(i, &ap)));
                    }
                }
            }
        }
        for (a, b, bp, ap) in &squares {
            sk = sk.square(a, b, bp, ap);
        }
        let mut g = KGraph::validate(&sk)?;
        let edge_images = (0..g.num_edges())
            .map(|e| images[g.edge_name(e)].clone())
            .collect();
        g.pullback = Some(Pullback {
            base: Arc::new(self.clone()),
            f: f.to_vec(),
            edge_images,
        });
        Ok(g)
    }

    /// `p₁`: the image in `E` of a path of `f*E`.
    pub fn p1_project(&self, lambda: &Path) -> Result<Path, GraphError> {
        let pb = self
            .pullback
            .as_ref()
            .ok_or(GraphError::NotAPullbackGraph)?;
        let mut acc = pb.base.vertex(lambda.range());
        for &e in lambda.edges() {
            acc = pb.base.compose(&acc, &pb.edge_images[e])?;
        }
        Ok(acc)
    }

    /// `f(n) = Σ f_i n_i`.
    pub fn pullback_degree(&self, n: &Degree) -> Result<Degree, GraphError> {
        let pb = self
            .pullback
            .as_ref()
            .ok_or(GraphError::NotAPullbackGraph)?;
        let total = pb.f.iter().zip(n.coords()).map(|(a, b)| a * b).sum();
        Ok(Degree::new(vec![total]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn single_loop_with_diagonal_map_is_t2() {
        let t = corpus::g1().pullback(&[1, 1]).unwrap();
        assert_eq!(t.num_vertices(), 1);
        assert_eq!(t.num_edges(), 2);
        assert_eq!(t.paths_from(0, &Degree::new(vec![3, 2])).len(), 1);
        let lam = &t.paths_from(0, &Degree::new(vec![2, 1]))[0];
        let e3 = t.p1_project(lam).unwrap();
        assert_eq!(corpus::g1().label(&e3), "eee");
    }

    #[test]
    fn first_slice_reproduces_base() {
        let c2 = corpus::c2();
        let p = c2.pullback(&[1, 0]).unwrap();
        for v in p.vertices() {
            let slice = p.paths_from(v, &Degree::new(vec![1, 0]));
            let base = c2.paths_from(v, &Degree::new(vec![1]));
            assert_eq!(slice.len(), base.len());
            for (x, y) in slice.iter().zip(&base) {
                assert_eq!(&p.p1_project(x).unwrap(), y);
            }
        }
    }

    #[test]
    fn two_cycle_diagonal_counts() {
        let p = corpus::c2().pullback(&[1, 1]).unwrap();
        for v in p.vertices() {
            assert_eq!(p.paths_from(v, &Degree::new(vec![1, 1])).len(), 1);
            assert!(p.p1_project(&p.vertex(v)).unwrap().is_vertex());
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            corpus::g1().pullback(&[0, 0]).unwrap_err(),
            GraphError::ZeroHomomorphism
        );
        assert_eq!(
            corpus::t2().pullback(&[1]).unwrap_err(),
            GraphError::NotAOneGraph(2)
        );
        let t2 = corpus::t2();
        assert_eq!(
            t2.p1_project(&t2.vertex(0)).unwrap_err(),
            GraphError::NotAPullbackGraph
        );
    }
}
