//! Cylinder sets and cycline pairs.
//!
//! A pair `(α, β)` with `s(α) = s(β)` is cycline when `αy = βy` for every
//! infinite path `y` with range `s(α)`. Writing `m = d(α) ∧ d(β)`, this holds
//! iff `α(0,m) = β(0,m)` and the remainders `(α(m,·), β(m,·))`, of degrees
//! `c⁺` and `c⁻` for `c = d(α) − d(β)`, satisfy the same condition. Pairs of
//! those degrees form a finite state space. A state `(μ, ν)` steps along a
//! chunk `γ ∈ s(μ)Λ^{(1,…,1)}`: the degree-`(1,…,1)` prefixes of `μγ` and
//! `νγ` must agree, and the next state is the pair of remainders. The
//! cycline states are the greatest fixed point of that step.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::degree::{Degree, Offset};
use crate::error::GraphError;
use crate::graph::{KGraph, Path};

/// A pair of paths with a common source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairCandidate {
    pub alpha: Path,
    pub beta: Path,
}

impl PairCandidate {
    pub fn new(alpha: Path, beta: Path) -> Result<Self, GraphError> {
        if alpha.source() != beta.source() {
            return Err(GraphError::NotAPath(
                "pair members must have a common source".into(),
            ));
        }
        Ok(PairCandidate { alpha, beta })
    }

    /// `d(α) − d(β)`.
    pub fn difference(&self) -> Offset {
        self.alpha.degree().diff(self.beta.degree())
    }

    pub fn swapped(&self) -> PairCandidate {
        PairCandidate {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha == self.beta
    }
}

/// `{μγ : γ ∈ s(μ)Λ^{N − d(μ)}}`, sorted.
pub fn ext(g: &KGraph, mu: &Path, n: &Degree) -> Result<Vec<Path>, GraphError> {
    let Some(rest) = n.checked_sub(mu.degree()) else {
        return Err(GraphError::DegreeOutOfRange {
            requested: n.to_string(),
            available: mu.degree().to_string(),
        });
    };
    let mut out = g
        .paths_from(mu.source(), &rest)
        .iter()
        .map(|gamma| g.compose(mu, gamma))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

/// `Z(μ) = Z(ν)`.
pub fn cylinder_equal(g: &KGraph, mu: &Path, nu: &Path) -> bool {
    if mu == nu {
        return true;
    }
    if mu.range() != nu.range() {
        return false;
    }
    let n = mu.degree().join(nu.degree());
    ext(g, mu, &n).expect("join bounds degree") == ext(g, nu, &n).expect("join bounds degree")
}

/// The surviving states for one degree difference.
#[derive(Clone, Debug)]
pub struct GfpTable {
    pub difference: Offset,
    surviving: BTreeSet<(Path, Path)>,
    /// Number of states alive before each refinement round; the last entry is
    /// the fixed point.
    pub alive_history: Vec<usize>,
}

impl GfpTable {
    pub fn build(g: &KGraph, c: &Offset) -> GfpTable {
        let (dp, dn) = (c.pos(), c.neg());
        let mut states: Vec<(Path, Path)> = Vec::new();
        for w in g.vertices() {
            let left = g.paths_into(&dp, w);
            let right = g.paths_into(&dn, w);
            for mu in &left {
                for nu in &right {
                    states.push((mu.clone(), nu.clone()));
                }
            }
        }
        let index: HashMap<&(Path, Path), usize> =
            states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let chunk = Degree::ones(g.k());
        let step = |(mu, nu): &(Path, Path)| -> Option<Vec<usize>> {
            let mut next = Vec::new();
            for gamma in g.paths_from(mu.source(), &chunk) {
                let (p1, r1) = g.factorize(&g.compose(mu, &gamma).ok()?, &chunk).ok()?;
                let (p2, r2) = g.factorize(&g.compose(nu, &gamma).ok()?, &chunk).ok()?;
                if p1 != p2 {
                    return None;
                }
                next.push(index[&(r1, r2)]);
            }
            Some(next)
        };
        let transitions: Vec<Option<Vec<usize>>> = states.iter().map(step).collect();

        let mut alive: Vec<bool> = transitions.iter().map(|t| t.is_some()).collect();
        let mut history = vec![states.len()];
        loop {
            let count = alive.iter().filter(|&&a| a).count();
            if count != *history.last().unwrap() {
                history.push(count);
            }
            let mut changed = false;
            let snapshot = alive.clone();
            for (i, t) in transitions.iter().enumerate() {
                if snapshot[i] && t.as_ref().unwrap().iter().any(|&j| !snapshot[j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let surviving = states
            .into_iter()
            .zip(alive)
            .filter_map(|(s, a)| a.then_some(s))
            .collect();
        GfpTable {
            difference: c.clone(),
            surviving,
            alive_history: history,
        }
    }

    /// Number of refinement rounds that removed states.
    pub fn rounds(&self) -> usize {
        self.alive_history.len() - 1
    }

    pub fn state_space(&self) -> usize {
        self.alive_history[0]
    }

    pub fn contains(&self, mu: &Path, nu: &Path) -> bool {
        self.surviving.contains(&(mu.clone(), nu.clone()))
    }

    pub fn surviving(&self) -> impl Iterator<Item = &(Path, Path)> {
        self.surviving.iter()
    }
}

/// Decides cycline pairs, caching one table per degree difference.
pub struct CyclineEngine<'g> {
    g: &'g KGraph,
    tables: Mutex<HashMap<Offset, Arc<GfpTable>>>,
}

impl<'g> CyclineEngine<'g> {
    pub fn new(g: &'g KGraph) -> Self {
        CyclineEngine {
            g,
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &'g KGraph {
        self.g
    }

    pub fn table(&self, c: &Offset) -> Arc<GfpTable> {
        if let Some(t) = self.tables.lock().unwrap().get(c) {
            return t.clone();
        }
        let t = Arc::new(GfpTable::build(self.g, c));
        self.tables
            .lock()
            .unwrap()
            .entry(c.clone())
            .or_insert(t)
            .clone()
    }

    /// `αz = βz` for every infinite `z` with range `s(α)`; `s(α) = s(β)` is
    /// not required, and the answer is false when the sources differ.
    pub fn eq_all_tails(&self, alpha: &Path, beta: &Path) -> bool {
        if alpha == beta {
            return true;
        }
        if alpha.source() != beta.source() || alpha.range() != beta.range() {
            return false;
        }
        let m = alpha.degree().meet(beta.degree());
        let (a0, a1) = self.g.factorize(alpha, &m).expect("meet is below");
        let (b0, b1) = self.g.factorize(beta, &m).expect("meet is below");
        if a0 != b0 {
            return false;
        }
        let c = alpha.degree().diff(beta.degree());
        self.table(&c).contains(&a1, &b1)
    }

    pub fn decide(&self, p: &PairCandidate) -> bool {
        self.eq_all_tails(&p.alpha, &p.beta)
    }

    /// Refinement rounds used by the table consulted for `p`.
    pub fn rounds_for(&self, p: &PairCandidate) -> usize {
        self.table(&p.difference()).rounds()
    }
}

/// One-shot decision; prefer [`CyclineEngine`] for repeated queries.
pub fn cycline_decide(g: &KGraph, p: &PairCandidate) -> bool {
    CyclineEngine::new(g).decide(p)
}

/// Checks `Z(αγ) = Z(βγ)` for every `γ ∈ s(α)Λ^m` with `m ≤ depth`.
pub fn cycline_bruteforce(g: &KGraph, p: &PairCandidate, depth: &Degree) -> bool {
    depth.all_below().iter().all(|m| {
        g.paths_from(p.alpha.source(), m).iter().all(|gamma| {
            let a = g.compose(&p.alpha, gamma).expect("source matched");
            let b = g.compose(&p.beta, gamma).expect("source matched");
            cylinder_equal(g, &a, &b)
        })
    })
}

/// Every edge of `c` is the only edge into its range.
fn without_entry(g: &KGraph, c: &[usize]) -> bool {
    c.iter().all(|&e| g.edges_into(g.edge_rng(e), 0).len() == 1)
}

/// The 1-graph characterization: `α = β`, or one is the other followed by a
/// cycle without entry.
pub fn onegraph_cycline_oracle(g: &KGraph, p: &PairCandidate) -> Result<bool, GraphError> {
    if g.k() != 1 {
        return Err(GraphError::NotAOneGraph(g.k()));
    }
    let (a, b) = (p.alpha.edges(), p.beta.edges());
    if p.alpha.range() != p.beta.range() || p.alpha.source() != p.beta.source() {
        return Ok(false);
    }
    if a == b {
        return Ok(true);
    }
    let (short, long) = if a.len() < b.len() { (a, b) } else { (b, a) };
    if long.len() == short.len() || long[..short.len()] != *short {
        return Ok(false);
    }
    Ok(without_entry(g, &long[short.len()..]))
}

/// All source-matched pairs with both degrees at most `bound`, sorted.
pub fn source_matched_pairs(g: &KGraph, bound: &Degree) -> Vec<PairCandidate> {
    let mut out = Vec::new();
    for w in g.vertices() {
        let paths = g.paths_into_upto(bound, w);
        for a in &paths {
            for b in &paths {
                out.push(PairCandidate {
                    alpha: a.clone(),
                    beta: b.clone(),
                });
            }
        }
    }
    out.sort();
    out
}

/// All cycline pairs with both degrees at most `bound`, sorted by
/// `(d(α), edges of α, d(β), edges of β)`.
pub fn enumerate_cycline(engine: &CyclineEngine<'_>, bound: &Degree) -> Vec<PairCandidate> {
    let pairs = source_matched_pairs(engine.graph(), bound);
    let keep: Vec<bool> = pairs.par_iter().map(|p| engine.decide(p)).collect();
    pairs
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect()
}

/// A bounded view of `Per(Λ)`.
#[derive(Clone, Debug)]
pub struct PeriodicityGroup {
    pub bound: Degree,
    pub elements: BTreeSet<Offset>,
    pub witnesses: BTreeMap<Offset, PairCandidate>,
    /// Whether every two vertices reach a common vertex.
    pub connected: bool,
    /// Sums `c₁ + c₂` of elements that lie within the bound but were not
    /// found. Only computed when `connected`.
    pub closure_violations: Vec<(Offset, Offset)>,
}

pub fn per_group(engine: &CyclineEngine<'_>, bound: &Degree) -> PeriodicityGroup {
    let g = engine.graph();
    let mut witnesses = BTreeMap::new();
    for p in enumerate_cycline(engine, bound) {
        witnesses.entry(p.difference()).or_insert(p);
    }
    let elements: BTreeSet<Offset> = witnesses.keys().cloned().collect();
    let reach = g.reachability();
    let connected = g.vertices().all(|v| {
        g.vertices()
            .all(|w| g.vertices().any(|u| reach[v][u] && reach[w][u]))
    });
    let mut closure_violations = Vec::new();
    if connected {
        for a in &elements {
            for b in &elements {
                let s = a.add(b);
                if s.within(bound) && !elements.contains(&s) {
                    closure_violations.push((a.clone(), b.clone()));
                }
            }
        }
    }
    PeriodicityGroup {
        bound: bound.clone(),
        elements,
        witnesses,
        connected,
        closure_violations,
    }
}

/// Serializable summary of one decision.
#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub pair: [Vec<String>; 2],
    pub decided: bool,
    pub gfp_rounds: usize,
    pub oracle_agrees: bool,
}
