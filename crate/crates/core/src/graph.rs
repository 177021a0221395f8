//! Validated k-graphs and their finite paths.
//!
//! Paths are stored in color-ordered normal form: all color-1 edges first
//! (nearest the range), then color-2 edges, and so on. Any other ordering of
//! the same morphism is reached from the normal form by adjacent swaps
//! through factorization squares.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::degree::Degree;
use crate::error::{GraphError, Violation};
use crate::skeleton::Skeleton;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct EdgeData {
    /// 0-based.
    pub color: usize,
    pub src: VertexId,
    pub rng: VertexId,
}

/// A finite path (morphism) in normal form. A degree-0 path is a vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    degree: Degree,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.range.cmp(&other.range))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            write!(f, "v{}", self.range)
        } else {
            write!(f, "{:?}", self.edges)
        }
    }
}

/// Presentation data kept for graphs built as `f*E`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub base: Arc<KGraph>,
    pub f: Vec<u32>,
    /// Image in `base` of each edge.
    pub(crate) edge_images: Vec<Path>,
}

/// A validated finite, row-finite, source-free k-graph.
#[derive(Clone, Debug)]
pub struct KGraph {
    k: usize,
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edges: Vec<EdgeData>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    /// Two-edge mixed-color path ↦ the other side of its square.
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// `[v][i]`: edges of color `i` with range `v`, ascending.
    into: Vec<Vec<Vec<EdgeId>>>,
    /// `[v][i]`: edges of color `i` with source `v`, ascending.
    out_of: Vec<Vec<Vec<EdgeId>>>,
    skeleton: Skeleton,
    pub(crate) pullback: Option<Pullback>,
}

impl KGraph {
    /// Checks the k-graph axioms on a skeleton. All violations are reported.
    pub fn validate(sk: &Skeleton) -> Result<KGraph, GraphError> {
        let mut violations = Vec::new();
        let k = sk.k;
        if k == 0 {
            return Err(GraphError::Invalid(vec![Violation::MalformedEdge {
                edge: String::new(),
                reason: "k must be at least 1".into(),
            }]));
        }

        let mut vertex_names = sk.vertices.clone();
        vertex_names.sort();
        for w in vertex_names.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::DuplicateId { id: w[0].clone() });
            }
        }
        vertex_names.dedup();
        let vertex_index: HashMap<String, VertexId> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut edge_specs = sk.edges.clone();
        edge_specs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edge_specs.windows(2) {
            if w[0].id == w[1].id {
                violations.push(Violation::DuplicateId {
                    id: w[0].id.clone(),
                });
            }
        }
        edge_specs.dedup_by(|a, b| a.id == b.id);
        for e in &edge_specs {
            if vertex_index.contains_key(&e.id) {
                violations.push(Violation::DuplicateId { id: e.id.clone() });
            }
        }

        let mut edges = Vec::with_capacity(edge_specs.len());
        for e in &edge_specs {
            let mut bad = |reason: String| {
                violations.push(Violation::MalformedEdge {
                    edge: e.id.clone(),
                    reason,
                })
            };
            if e.color == 0 || e.color > k {
                bad(format!("color {} outside 1..={k}", e.color));
                continue;
            }
            let (Some(&src), Some(&rng)) = (vertex_index.get(&e.src), vertex_index.get(&e.rng))
            else {
                bad("unknown endpoint".into());
                continue;
            };
            edges.push(EdgeData {
                color: e.color - 1,
                src,
                rng,
            });
        }
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let edge_names: Vec<String> = edge_specs.iter().map(|e| e.id.clone()).collect();
        let edge_index: HashMap<String, EdgeId> = edge_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let nv = vertex_names.len();
        let mut into = vec![vec![Vec::new(); k]; nv];
        let mut out_of = vec![vec![Vec::new(); k]; nv];
        for (id, e) in edges.iter().enumerate() {
            into[e.rng][e.color].push(id);
            out_of[e.src][e.color].push(id);
        }

        // Squares.
        let mut swap = HashMap::new();
        let mut occurrences: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
        for sq in &sk.squares {
            let lookup = |n: &String| edge_index.get(n).copied();
            let ids = [
                lookup(&sq.first[0]),
                lookup(&sq.first[1]),
                lookup(&sq.second[0]),
                lookup(&sq.second[1]),
            ];
            let malformed = |reason: &str| Violation::MalformedSquare {
                first: sq.first.clone(),
                second: sq.second.clone(),
                reason: reason.to_string(),
            };
            let [Some(a), Some(b), Some(bp), Some(ap)] = ids else {
                violations.push(malformed("unknown edge"));
                continue;
            };
            let (ea, eb, ebp, eap) = (&edges[a], &edges[b], &edges[bp], &edges[ap]);
            if ea.color >= eb.color {
                violations.push(malformed(
                    "first side must be lower color then higher color",
                ));
                continue;
            }
            if ebp.color != eb.color || eap.color != ea.color {
                violations.push(malformed(
                    "second side must repeat the two colors in reverse",
                ));
                continue;
            }
            if ea.src != eb.rng || ebp.src != eap.rng {
                violations.push(malformed("a side is not composable"));
                continue;
            }
            if ea.rng != ebp.rng || eb.src != eap.src {
                violations.push(malformed("sides have different range or source"));
                continue;
            }
            *occurrences.entry((a, b)).or_default() += 1;
            *occurrences.entry((bp, ap)).or_default() += 1;
            swap.insert((a, b), (bp, ap));
            swap.insert((bp, ap), (a, b));
        }
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }

        // Every composable mixed-color two-edge path lies in exactly one side.
        for (x, ex) in edges.iter().enumerate() {
            for (color, ys) in into[ex.src].iter().enumerate() {
                if color == ex.color {
                    continue;
                }
                for &y in ys {
                    let path = [edge_names[x].clone(), edge_names[y].clone()];
                    match occurrences.get(&(x, y)).copied().unwrap_or(0) {
                        0 => violations.push(Violation::IncompleteSquares { path }),
                        1 => {}
                        n => violations.push(Violation::AmbiguousSquares {
                            path,
                            occurrences: n,
                        }),
                    }
                }
            }
        }

        for (v, name) in vertex_names.iter().enumerate() {
            for (color, ys) in into[v].iter().enumerate() {
                if ys.is_empty() {
                    violations.push(Violation::HasSource {
                        vertex: name.clone(),
                        color: color + 1,
                    });
                }
            }
        }

        let graph = KGraph {
            k,
            vertex_names,
            edge_names,
            edges,
            vertex_index,
            edge_index,
            swap,
            into,
            out_of,
            skeleton: sk.clone(),
            pullback: None,
        };

        let squares_ok = !violations.iter().any(|v| {
            matches!(
                v,
                Violation::IncompleteSquares { .. } | Violation::AmbiguousSquares { .. }
            )
        });
        if k >= 3 && squares_ok {
            violations.extend(graph.hexagon_failures());
        }

        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }

    /// Tricolored paths `x y z` with strictly decreasing colors whose two
    /// reorderings into normal form disagree.
    fn hexagon_failures(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (x, ex) in self.edges.iter().enumerate() {
            for cy in 0..ex.color {
                for &y in &self.into[ex.src][cy] {
                    for cz in 0..cy {
                        for &z in &self.into[self.edges[y].src][cz] {
                            let mut left = [x, y, z];
                            self.swap_at(&mut left, 0);
                            self.swap_at(&mut left, 1);
                            self.swap_at(&mut left, 0);
                            let mut right = [x, y, z];
                            self.swap_at(&mut right, 1);
                            self.swap_at(&mut right, 0);
                            self.swap_at(&mut right, 1);
                            if left != right {
                                let names = |p: [EdgeId; 3]| p.map(|e| self.edge_names[e].clone());
                                out.push(Violation::HexagonFailure {
                                    path: names([x, y, z]),
                                    left: names(left),
                                    right: names(right),
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn swap_at(&self, seq: &mut [EdgeId], i: usize) {
        let (a, b) = self.swap[&(seq[i], seq[i + 1])];
        seq[i] = a;
        seq[i + 1] = b;
    }

    pub fn from_json(text: &str) -> Result<KGraph, GraphError> {
        KGraph::validate(&Skeleton::from_json(text)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    /// 0-based color of an edge.
    pub fn color(&self, e: EdgeId) -> usize {
        self.edges[e].color
    }

    pub fn edge_src(&self, e: EdgeId) -> VertexId {
        self.edges[e].src
    }

    pub fn edge_rng(&self, e: EdgeId) -> VertexId {
        self.edges[e].rng
    }

    /// Edges of a given 0-based color with range `v`: the one-edge paths in `vΛ^{ε_i}`.
    pub fn edges_into(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.into[v][color]
    }

    pub fn edges_out_of(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.out_of[v][color]
    }

    pub fn pullback_data(&self) -> Option<&Pullback> {
        self.pullback.as_ref()
    }

    fn check_rank(&self, d: &Degree) -> Result<(), GraphError> {
        if d.rank() != self.k {
            return Err(GraphError::RankMismatch {
                expected: self.k,
                got: d.rank(),
            });
        }
        Ok(())
    }

    // ---- path construction ----

    pub fn vertex(&self, v: VertexId) -> Path {
        Path {
            range: v,
            source: v,
            degree: Degree::zero(self.k),
            edges: Vec::new(),
        }
    }

    pub fn edge_path(&self, e: EdgeId) -> Path {
        let ed = &self.edges[e];
        Path {
            range: ed.rng,
            source: ed.src,
            degree: Degree::unit(self.k, ed.color),
            edges: vec![e],
        }
    }

    /// Builds a path from a composable edge sequence in any color order.
    pub fn path_from_edges(&self, seq: &[EdgeId]) -> Result<Path, GraphError> {
        let Some(&first) = seq.first() else {
            return Err(GraphError::NotAPath("empty edge sequence".into()));
        };
        for w in seq.windows(2) {
            if self.edges[w[0]].src != self.edges[w[1]].rng {
                return Err(GraphError::NotAPath(format!(
                    "{} then {}",
                    self.edge_names[w[0]], self.edge_names[w[1]]
                )));
            }
        }
        let mut degree = vec![0u32; self.k];
        for &e in seq {
            degree[self.edges[e].color] += 1;
        }
        let mut edges = seq.to_vec();
        self.normalize(&mut edges);
        Ok(Path {
            range: self.edges[first].rng,
            source: self.edges[*seq.last().unwrap()].src,
            degree: Degree::new(degree),
            edges,
        })
    }

    /// Builds a path from edge names; a single vertex name gives the vertex.
    pub fn path_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Path, GraphError> {
        if names.len() == 1 {
            if let Ok(v) = self.vertex_id(names[0].as_ref()) {
                return Ok(self.vertex(v));
            }
        }
        let ids = names
            .iter()
            .map(|n| self.edge_id(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_edges(&ids)
    }

    /// Human-readable label: the vertex name, or the normal-form edge names.
    pub fn label(&self, p: &Path) -> String {
        if p.edges.is_empty() {
            return self.vertex_names[p.range].clone();
        }
        let single = p
            .edges
            .iter()
            .all(|&e| self.edge_names[e].chars().count() == 1);
        let sep = if single { "" } else { "." };
        p.edges
            .iter()
            .map(|&e| self.edge_names[e].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Edge names of a path, or `[vertex]` for a vertex.
    pub fn names(&self, p: &Path) -> Vec<String> {
        if p.edges.is_empty() {
            vec![self.vertex_names[p.range].clone()]
        } else {
            p.edges
                .iter()
                .map(|&e| self.edge_names[e].clone())
                .collect()
        }
    }

    // ---- normal forms ----

    /// Reorders `seq` by adjacent square swaps until `keys` is sorted.
    /// Keys of equal-colored edges must already be increasing.
    fn sort_by_keys(&self, seq: &mut [EdgeId], keys: &mut [u64]) {
        let n = seq.len();
        if n < 2 {
            return;
        }
        loop {
            let mut swapped = false;
            for i in 0..n - 1 {
                if keys[i] > keys[i + 1] {
                    self.swap_at(seq, i);
                    keys.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
    }

    fn normalize(&self, seq: &mut [EdgeId]) {
        let mut occ = vec![0u64; self.k];
        let big = seq.len() as u64 + 1;
        let mut keys: Vec<u64> = seq
            .iter()
            .map(|&e| {
                let c = self.edges[e].color;
                let key = c as u64 * big + occ[c];
                occ[c] += 1;
                key
            })
            .collect();
        self.sort_by_keys(seq, &mut keys);
    }

    // ---- operations ----

    /// `p q`, defined when `s(p) = r(q)`.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path, GraphError> {
        if p.source != q.range {
            return Err(GraphError::NotComposable {
                source_vertex: self.vertex_names[p.source].clone(),
                range_vertex: self.vertex_names[q.range].clone(),
            });
        }
        let mut edges = Vec::with_capacity(p.edges.len() + q.edges.len());
        edges.extend_from_slice(&p.edges);
        edges.extend_from_slice(&q.edges);
        self.normalize(&mut edges);
        Ok(Path {
            range: p.range,
            source: q.source,
            degree: p.degree.add(&q.degree),
            edges,
        })
    }

    /// `p^t` for a path with `r(p) = s(p)`.
    pub fn power(&self, p: &Path, t: u32) -> Result<Path, GraphError> {
        let mut acc = self.vertex(p.range);
        for _ in 0..t {
            acc = self.compose(&acc, p)?;
        }
        Ok(acc)
    }

    /// The unique `(μ, ν)` with `λ = μν` and `d(μ) = m`.
    pub fn factorize(&self, lambda: &Path, m: &Degree) -> Result<(Path, Path), GraphError> {
        self.check_rank(m)?;
        let Some(rest) = lambda.degree.checked_sub(m) else {
            return Err(GraphError::DegreeOutOfRange {
                requested: m.to_string(),
                available: lambda.degree.to_string(),
            });
        };
        if m.is_zero() {
            return Ok((self.vertex(lambda.range), lambda.clone()));
        }
        if rest.is_zero() {
            return Ok((lambda.clone(), self.vertex(lambda.source)));
        }
        let mut seq = lambda.edges.clone();
        let big = seq.len() as u64 + 1;
        let span = big * self.k as u64;
        let mut occ = vec![0u32; self.k];
        let mut keys: Vec<u64> = seq
            .iter()
            .map(|&e| {
                let c = self.edges[e].color;
                let block = if occ[c] < m.get(c) { 0 } else { 1 };
                let key = block * span + c as u64 * big + occ[c] as u64;
                occ[c] += 1;
                key
            })
            .collect();
        self.sort_by_keys(&mut seq, &mut keys);
        let cut = m.total() as usize;
        let (head, tail) = seq.split_at(cut);
        let mid = self.edges[head[cut - 1]].src;
        Ok((
            Path {
                range: lambda.range,
                source: mid,
                degree: m.clone(),
                edges: head.to_vec(),
            },
            Path {
                range: mid,
                source: lambda.source,
                degree: rest,
                edges: tail.to_vec(),
            },
        ))
    }

    /// `λ(m, n)`.
    pub fn segment(&self, lambda: &Path, m: &Degree, n: &Degree) -> Result<Path, GraphError> {
        self.check_rank(n)?;
        if !m.le(n) {
            return Err(GraphError::DegreeOutOfRange {
                requested: format!("{m}..{n}"),
                available: lambda.degree.to_string(),
            });
        }
        let (upto_n, _) = self.factorize(lambda, n)?;
        let (_, mid) = self.factorize(&upto_n, m)?;
        Ok(mid)
    }

    /// `λ(0, m)`.
    pub fn prefix(&self, lambda: &Path, m: &Degree) -> Result<Path, GraphError> {
        Ok(self.factorize(lambda, m)?.0)
    }

    /// `vΛ^n`, in lexicographic order of edge sequences.
    pub fn paths_from(&self, v: VertexId, n: &Degree) -> Vec<Path> {
        let colors: Vec<usize> = (0..self.k)
            .flat_map(|c| std::iter::repeat_n(c, n.get(c) as usize))
            .collect();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(colors.len());
        self.extend_from(v, &colors, &mut stack, &mut out, v, n);
        out
    }

    fn extend_from(
        &self,
        at: VertexId,
        colors: &[usize],
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
        range: VertexId,
        n: &Degree,
    ) {
        let pos = stack.len();
        if pos == colors.len() {
            out.push(Path {
                range,
                source: at,
                degree: n.clone(),
                edges: stack.clone(),
            });
            return;
        }
        for &e in &self.into[at][colors[pos]] {
            stack.push(e);
            self.extend_from(self.edges[e].src, colors, stack, out, range, n);
            stack.pop();
        }
    }

    /// `Λ^n w`, in lexicographic order of edge sequences.
    pub fn paths_into(&self, n: &Degree, w: VertexId) -> Vec<Path> {
        let colors: Vec<usize> = (0..self.k)
            .rev()
            .flat_map(|c| std::iter::repeat_n(c, n.get(c) as usize))
            .collect();
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(colors.len());
        self.extend_into(w, &colors, &mut stack, &mut out, w, n);
        out.sort();
        out
    }

    fn extend_into(
        &self,
        at: VertexId,
        colors: &[usize],
        stack: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
        source: VertexId,
        n: &Degree,
    ) {
        let pos = stack.len();
        if pos == colors.len() {
            let mut edges = stack.clone();
            edges.reverse();
            out.push(Path {
                range: at,
                source,
                degree: n.clone(),
                edges,
            });
            return;
        }
        for &e in &self.out_of[at][colors[pos]] {
            stack.push(e);
            self.extend_into(self.edges[e].rng, colors, stack, out, source, n);
            stack.pop();
        }
    }

    /// `Λ^n`, grouped by range vertex.
    pub fn paths_of_degree(&self, n: &Degree) -> Vec<Path> {
        self.vertices()
            .flat_map(|v| self.paths_from(v, n))
            .collect()
    }

    /// All paths with source `w` and degree at most `bound`, sorted.
    pub fn paths_into_upto(&self, bound: &Degree, w: VertexId) -> Vec<Path> {
        let mut out: Vec<Path> = bound
            .all_below()
            .iter()
            .flat_map(|n| self.paths_into(n, w))
            .collect();
        out.sort();
        out
    }

    /// All paths with range `v` and degree at most `bound`, sorted.
    pub fn paths_from_upto(&self, v: VertexId, bound: &Degree) -> Vec<Path> {
        let mut out: Vec<Path> = bound
            .all_below()
            .iter()
            .flat_map(|n| self.paths_from(v, n))
            .collect();
        out.sort();
        out
    }

    /// For each vertex `v`, the vertices `w` with `vΛw` nonempty.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let nv = self.num_vertices();
        let mut reach = vec![vec![false; nv]; nv];
        for (v, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![v];
            row[v] = true;
            while let Some(u) = stack.pop() {
                for c in 0..self.k {
                    for &e in &self.into[u][c] {
                        let w = self.edges[e].src;
                        if !row[w] {
                            row[w] = true;
                            stack.push(w);
                        }
                    }
                }
            }
        }
        reach
    }

    /// Summary counts `|vΛ^n|` keyed by vertex name, for reports.
    pub fn path_counts(&self, n: &Degree) -> BTreeMap<String, usize> {
        self.vertices()
            .map(|v| (self.vertex_names[v].clone(), self.paths_from(v, n).len()))
            .collect()
    }
}
