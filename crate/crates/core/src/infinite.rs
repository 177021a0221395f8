//! Eventually periodic infinite paths `x = head · cycle · cycle · …`.
//!
//! The cycle must have every degree coordinate at least one, so `x(0, n)` is
//! defined for all `n`. Representations are not unique (for `k ≥ 2` even the
//! canonical form can differ between equal paths), so equality is decided by
//! [`ep_equal`], which runs a finite automaton over cycle-sized chunks.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cycline::{CyclineEngine, PairCandidate};
use crate::degree::Degree;
use crate::error::GraphError;
use crate::graph::{KGraph, Path};

/// Exploration limit for the automata in this module.
pub const STATE_CAP: usize = 200_000;

/// An eventually periodic infinite path. Derived equality is structural;
/// use [`ep_equal`] for equality of the paths represented.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpPath {
    head: Path,
    cycle: Path,
}

/// `{head: [edge ids], cycle: [edge ids]}`. An empty head starts at the
/// range of the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpLiteral {
    #[serde(default)]
    pub head: Vec<String>,
    pub cycle: Vec<String>,
}

impl EpPath {
    pub fn new(head: Path, cycle: Path) -> Result<EpPath, GraphError> {
        if cycle.range() != cycle.source() {
            return Err(GraphError::BadInfinitePath(
                "cycle is not a closed path".into(),
            ));
        }
        if cycle.source() != head.source() {
            return Err(GraphError::BadInfinitePath(
                "cycle does not start at the end of the head".into(),
            ));
        }
        if !cycle.degree().is_strictly_positive() {
            return Err(GraphError::BadInfinitePath(format!(
                "cycle degree {} has a zero coordinate",
                cycle.degree()
            )));
        }
        Ok(EpPath { head, cycle })
    }

    pub fn from_literal(g: &KGraph, lit: &EpLiteral) -> Result<EpPath, GraphError> {
        let cycle = g.path_from_names(&lit.cycle)?;
        let head = if lit.head.is_empty() {
            g.vertex(cycle.range())
        } else {
            g.path_from_names(&lit.head)?
        };
        EpPath::new(head, cycle)
    }

    pub fn to_literal(&self, g: &KGraph) -> EpLiteral {
        let names = |p: &Path| {
            p.edges()
                .iter()
                .map(|&e| g.edge_name(e).to_string())
                .collect()
        };
        EpLiteral {
            head: names(&self.head),
            cycle: names(&self.cycle),
        }
    }

    pub fn head(&self) -> &Path {
        &self.head
    }

    pub fn cycle(&self) -> &Path {
        &self.cycle
    }

    /// `r(x)`.
    pub fn range(&self) -> usize {
        self.head.range()
    }

    pub fn label(&self, g: &KGraph) -> String {
        if self.head.is_vertex() {
            format!("({})^∞", g.label(&self.cycle))
        } else {
            format!("{}({})^∞", g.label(&self.head), g.label(&self.cycle))
        }
    }
}

/// `a − b` clamped at zero.
fn sat_sub(a: &Degree, b: &Degree) -> Degree {
    a.join(b).checked_sub(b).expect("join dominates")
}

/// `head · cycle^t` for the least `t` making its degree at least `n`.
fn unroll(g: &KGraph, x: &EpPath, n: &Degree) -> Path {
    let t = x
        .cycle
        .degree()
        .multiple_covering(&sat_sub(n, x.head.degree()));
    let mut acc = x.head.clone();
    for _ in 0..t {
        acc = g.compose(&acc, &x.cycle).expect("cycle is composable");
    }
    acc
}

/// `x(0, n)`.
pub fn prefix(g: &KGraph, x: &EpPath, n: &Degree) -> Path {
    g.prefix(&unroll(g, x, n), n).expect("unrolled past n")
}

/// `x(m, n)`.
pub fn segment(g: &KGraph, x: &EpPath, m: &Degree, n: &Degree) -> Result<Path, GraphError> {
    g.segment(&unroll(g, x, n), m, n)
}

/// `σ^p x`, keeping the cycle of `x`.
pub fn raw_shift(g: &KGraph, x: &EpPath, p: &Degree) -> EpPath {
    let long = unroll(g, x, p);
    let (_, rest) = g.factorize(&long, p).expect("unrolled past p");
    EpPath {
        head: rest,
        cycle: x.cycle.clone(),
    }
}

/// `σ^p x` in canonical form.
pub fn shift(g: &KGraph, x: &EpPath, p: &Degree) -> EpPath {
    canonicalize(g, &raw_shift(g, x, p))
}

/// `νx` in canonical form.
pub fn prepend(g: &KGraph, nu: &Path, x: &EpPath) -> Result<EpPath, GraphError> {
    let head = g.compose(nu, &x.head)?;
    Ok(canonicalize(
        g,
        &EpPath {
            head,
            cycle: x.cycle.clone(),
        },
    ))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Replaces the cycle by its shortest root, strips trailing copies of the
/// cycle from the head, and rotates single edges from the end of the head
/// into the cycle.
pub fn canonicalize(g: &KGraph, x: &EpPath) -> EpPath {
    let mut head = x.head.clone();
    let mut cycle = x.cycle.clone();

    let d = cycle.degree().clone();
    let common = d.coords().iter().fold(0, |acc, &c| gcd(acc, c));
    for j in (2..=common).rev() {
        let root_deg = Degree::new(d.coords().iter().map(|&c| c / j).collect());
        let root = g.prefix(&cycle, &root_deg).expect("root below cycle");
        if root.range() == root.source() && g.power(&root, j).ok().as_ref() == Some(&cycle) {
            cycle = root;
            break;
        }
    }

    loop {
        let dc = cycle.degree().clone();
        if let Some(rest) = head.degree().checked_sub(&dc) {
            let (h, tail) = g.factorize(&head, &rest).expect("degree checked");
            if tail == cycle {
                head = h;
                continue;
            }
        }
        let mut rotated = false;
        for i in 0..g.k() {
            let unit = Degree::unit(g.k(), i);
            let Some(rest) = head.degree().checked_sub(&unit) else {
                continue;
            };
            let (h, sigma) = g.factorize(&head, &rest).expect("degree checked");
            let (rho, tau) = g
                .factorize(
                    &cycle,
                    &dc.checked_sub(&unit).expect("cycle is strictly positive"),
                )
                .expect("degree checked");
            if tau == sigma {
                cycle = g.compose(&sigma, &rho).expect("rotation is composable");
                head = h;
                rotated = true;
                break;
            }
        }
        if !rotated {
            break;
        }
    }
    EpPath { head, cycle }
}

/// Equality of `u C^∞` and `w C^∞` for a common cycle `C`, by stepping both
/// heads through chunks of degree `d(C)` until the pair of heads repeats.
fn same_cycle_equal(g: &KGraph, u: &Path, w: &Path, cycle: &Path) -> bool {
    if u.range() != w.range() {
        return false;
    }
    let d = cycle.degree();
    let mut seen = HashSet::new();
    let (mut u, mut w) = (u.clone(), w.clone());
    while seen.insert((u.clone(), w.clone())) {
        let (ou, nu) = g
            .factorize(&g.compose(&u, cycle).expect("composable"), d)
            .expect("degree");
        let (ow, nw) = g
            .factorize(&g.compose(&w, cycle).expect("composable"), d)
            .expect("degree");
        if ou != ow {
            return false;
        }
        u = nu;
        w = nw;
    }
    true
}

/// Equality of the infinite paths represented.
pub fn ep_equal(g: &KGraph, x: &EpPath, y: &EpPath) -> bool {
    if x == y {
        return true;
    }
    if x.range() != y.range() {
        return false;
    }
    // y = x iff y ∈ Z(h) and σ^{d(h)}y = c^∞, and c^∞ is the unique z with
    // z(0, d(c)) = c and σ^{d(c)}z = z.
    if prefix(g, y, x.head.degree()) != x.head {
        return false;
    }
    let z = raw_shift(g, y, x.head.degree());
    if prefix(g, &z, x.cycle.degree()) != x.cycle {
        return false;
    }
    let z_next = raw_shift(g, &z, x.cycle.degree());
    same_cycle_equal(g, &z.head, &z_next.head, &z.cycle)
}

/// A set of eventually periodic paths deduplicated by [`ep_equal`], in
/// insertion order.
#[derive(Clone, Debug, Default)]
pub struct EpIndex {
    members: Vec<EpPath>,
    buckets: HashMap<Path, Vec<usize>>,
}

impl EpIndex {
    pub fn new() -> Self {
        EpIndex::default()
    }

    fn key(g: &KGraph, x: &EpPath) -> Path {
        prefix(g, x, &Degree::uniform(g.k(), 2))
    }

    pub fn find(&self, g: &KGraph, x: &EpPath) -> Option<usize> {
        self.buckets
            .get(&Self::key(g, x))?
            .iter()
            .copied()
            .find(|&i| ep_equal(g, &self.members[i], x))
    }

    /// Inserts `x` unless an equal path is present; returns its position and
    /// whether it was new.
    pub fn insert(&mut self, g: &KGraph, x: EpPath) -> (usize, bool) {
        if let Some(i) = self.find(g, &x) {
            return (i, false);
        }
        let i = self.members.len();
        self.buckets.entry(Self::key(g, &x)).or_default().push(i);
        self.members.push(x);
        (i, true)
    }

    pub fn members(&self) -> &[EpPath] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `x ∈ F_{α,β}`: `x` extends both and `σ^{d(α)}x = σ^{d(β)}x`.
pub fn in_f(g: &KGraph, x: &EpPath, p: &PairCandidate) -> bool {
    prefix(g, x, p.alpha.degree()) == p.alpha
        && prefix(g, x, p.beta.degree()) == p.beta
        && ep_equal(
            g,
            &raw_shift(g, x, p.alpha.degree()),
            &raw_shift(g, x, p.beta.degree()),
        )
}

/// Agreement pairs `(p, q)` with `p < q` (lexicographically), both at most
/// `bound`, and `σ^p x = σ^q x`.
pub fn agreement_pairs(g: &KGraph, x: &EpPath, bound: &Degree) -> Vec<(Degree, Degree)> {
    let degrees = bound.all_below();
    let shifts: Vec<EpPath> = degrees.iter().map(|p| raw_shift(g, x, p)).collect();
    let mut out = Vec::new();
    for i in 0..degrees.len() {
        for j in 0..degrees.len() {
            if degrees[i] < degrees[j] && ep_equal(g, &shifts[i], &shifts[j]) {
                out.push((degrees[i].clone(), degrees[j].clone()));
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorSearch {
    Found(Degree),
    NotFoundWithinBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorError {
    /// `x ∉ F_{α,β}`, or the pair is trivial.
    PreconditionViolated,
}

/// Searches `n` from `d(α) ∨ d(β)` up to `bound` (by total degree, then
/// lexicographically) for `Z(x(0,n)) ⊆ F_{α,β}`.
pub fn in_interior_f(
    engine: &CyclineEngine<'_>,
    x: &EpPath,
    p: &PairCandidate,
    bound: &Degree,
) -> Result<InteriorSearch, InteriorError> {
    let g = engine.graph();
    if p.is_trivial() || !in_f(g, x, p) {
        return Err(InteriorError::PreconditionViolated);
    }
    let (da, db) = (p.alpha.degree(), p.beta.degree());
    let start = da.join(db);
    for n in bound.all_below() {
        if !start.le(&n) {
            continue;
        }
        let mu = segment(g, x, da, &n).expect("da ≤ n");
        let nu = segment(g, x, db, &n).expect("db ≤ n");
        if engine.eq_all_tails(&mu, &nu) {
            return Ok(InteriorSearch::Found(n));
        }
    }
    Ok(InteriorSearch::NotFoundWithinBound)
}

/// Exact status of `x` relative to `F_{x(0,p), x(0,q)}` for an agreement
/// pair `(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorStatus {
    /// `Z(x(0,n)) ⊆ F`.
    Interior {
        n: Degree,
    },
    /// No cylinder around `x` lies in `F`. Every path in
    /// `Z(x(0, d(α)∨d(β)) · refutation)` lies outside `F`.
    Boundary {
        refutation: Path,
    },
    Unknown,
}

/// Decides whether `x` is interior to `F_{x(0,p), x(0,q)}`. Requires
/// `σ^p x = σ^q x` and `p ≠ q`.
///
/// The pair `(x(n − c⁺, n), x(n − c⁻, n))` with `c = q − p` is followed
/// along `n = p ∨ q + t·D`, where `D` is the cycle degree of `σ^{p∨q}x`. The
/// answer is `Interior` iff it ever lies in the cycline table, and the
/// sequence of states is eventually periodic.
pub fn interior_decide(
    engine: &CyclineEngine<'_>,
    x: &EpPath,
    p: &Degree,
    q: &Degree,
) -> InteriorStatus {
    let g = engine.graph();
    let start = p.join(q);
    let c = q.diff(p);
    let table = engine.table(&c);
    let mut mu = segment(g, x, p, &start).expect("p ≤ p∨q");
    let mut nu = segment(g, x, q, &start).expect("q ≤ p∨q");
    let (mu0, nu0) = (mu.clone(), nu.clone());
    let y = raw_shift(g, x, &start);
    let dc = y.cycle.degree().clone();
    let mut u = y.head.clone();
    let mut n = start;
    let mut seen = HashSet::new();
    while seen.insert((mu.clone(), nu.clone(), u.clone())) {
        if table.contains(&mu, &nu) {
            return InteriorStatus::Interior { n };
        }
        if seen.len() > STATE_CAP {
            return InteriorStatus::Unknown;
        }
        let (gamma, u_next) = g
            .factorize(&g.compose(&u, &y.cycle).expect("composable"), &dc)
            .expect("degree");
        let (pm, rm) = g
            .factorize(&g.compose(&mu, &gamma).expect("composable"), &dc)
            .expect("degree");
        let (pn, rn) = g
            .factorize(&g.compose(&nu, &gamma).expect("composable"), &dc)
            .expect("degree");
        if pm != pn {
            // σ^p x ≠ σ^q x after all.
            return InteriorStatus::Unknown;
        }
        mu = rm;
        nu = rn;
        u = u_next;
        n = n.add(&dc);
    }
    match refuting_extension(g, &mu0, &nu0) {
        Some(refutation) => InteriorStatus::Boundary { refutation },
        None => InteriorStatus::Unknown,
    }
}

type Parents = HashMap<(Path, Path), Option<((Path, Path), Path)>>;

/// A path `γ` with `(μγ)(0,g) ≠ (νγ)(0,g)` for `g = d(γ)`, reached by
/// breadth-first search over `(1,…,1)` chunks. Then `μγz ≠ νγz` for all `z`.
pub fn refuting_extension(g: &KGraph, mu: &Path, nu: &Path) -> Option<Path> {
    let chunk = Degree::ones(g.k());
    let start = (mu.clone(), nu.clone());
    let mut parent: Parents = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let rebuild = |parent: &Parents, mut at: (Path, Path), last: Path| {
        let mut chunks = vec![last];
        while let Some(Some((prev, gamma))) = parent.get(&at) {
            chunks.push(gamma.clone());
            at = prev.clone();
        }
        chunks.reverse();
        let mut acc = g.vertex(chunks[0].range());
        for c in &chunks {
            acc = g.compose(&acc, c).expect("chunks chain");
        }
        acc
    };
    while let Some(state) = queue.pop_front() {
        if parent.len() > STATE_CAP {
            return None;
        }
        let (m, n) = &state;
        for gamma in g.paths_from(m.source(), &chunk) {
            let (pm, rm) = g.factorize(&g.compose(m, &gamma).ok()?, &chunk).ok()?;
            let (pn, rn) = g.factorize(&g.compose(n, &gamma).ok()?, &chunk).ok()?;
            if pm != pn {
                return Some(rebuild(&parent, state.clone(), gamma));
            }
            let next = (rm, rn);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((state.clone(), gamma)));
                queue.push_back(next);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegularityStatus {
    Regular,
    NotRegular,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitness {
    pub p: Degree,
    pub q: Degree,
    pub interior: bool,
    /// The cylinder degree for interior pairs.
    pub n: Option<Degree>,
    /// The refuting extension for boundary pairs.
    pub refutation: Option<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub status: RegularityStatus,
    pub witnesses: Vec<RegularityWitness>,
}

/// Default agreement-pair bound `d(head) + 2·d(cycle)`.
pub fn default_regularity_bound(x: &EpPath) -> Degree {
    x.head.degree().add(&x.cycle.degree().scale(2))
}

/// Classifies `x` using every agreement pair `p < q ≤ bound`.
pub fn is_regular(engine: &CyclineEngine<'_>, x: &EpPath, bound: &Degree) -> RegularityVerdict {
    let g = engine.graph();
    let mut witnesses = Vec::new();
    let mut status = RegularityStatus::Regular;
    for (p, q) in agreement_pairs(g, x, bound) {
        let w = match interior_decide(engine, x, &p, &q) {
            InteriorStatus::Interior { n } => RegularityWitness {
                p,
                q,
                interior: true,
                n: Some(n),
                refutation: None,
            },
            InteriorStatus::Boundary { refutation } => {
                status = RegularityStatus::NotRegular;
                RegularityWitness {
                    p,
                    q,
                    interior: false,
                    n: None,
                    refutation: Some(refutation),
                }
            }
            InteriorStatus::Unknown => {
                if status == RegularityStatus::Regular {
                    status = RegularityStatus::Unknown;
                }
                RegularityWitness {
                    p,
                    q,
                    interior: false,
                    n: None,
                    refutation: None,
                }
            }
        };
        witnesses.push(w);
    }
    RegularityVerdict { status, witnesses }
}

/// For a 1-graph: an eventually periodic path is regular iff its cycle has
/// no entry, i.e. every vertex on the cycle receives exactly one edge.
pub fn onegraph_regular_oracle(g: &KGraph, x: &EpPath) -> Result<bool, GraphError> {
    if g.k() != 1 {
        return Err(GraphError::NotAOneGraph(g.k()));
    }
    Ok(x.cycle
        .edges()
        .iter()
        .all(|&e| g.edges_into(g.edge_rng(e), 0).len() == 1))
}

/// Closed paths at `w` of degree exactly `d`.
pub fn cycles_at(g: &KGraph, w: usize, d: &Degree) -> Vec<Path> {
    g.paths_from(w, d)
        .into_iter()
        .filter(|c| c.source() == w)
        .collect()
}

/// Every `head · c^∞` with `d(head) ≤ head_bound` and strictly positive
/// `d(c) ≤ cycle_bound`, canonicalized and deduplicated, in enumeration order.
pub fn enumerate_ep(g: &KGraph, head_bound: &Degree, cycle_bound: &Degree) -> Vec<EpPath> {
    let cycle_degrees: Vec<Degree> = cycle_bound
        .all_below()
        .into_iter()
        .filter(|d| d.is_strictly_positive())
        .collect();
    let mut index = EpIndex::new();
    for w in g.vertices() {
        for head in g.paths_into_upto(head_bound, w) {
            for d in &cycle_degrees {
                for c in cycles_at(g, w, d) {
                    let x = EpPath::new(head.clone(), c).expect("closed at the head source");
                    index.insert(g, canonicalize(g, &x));
                }
            }
        }
    }
    index.members().to_vec()
}

/// Looks for a regular path `μγc^∞` in `Z(μ)` with `d(γ) ≤ detour` and
/// strictly positive `d(c) ≤ cycle_bound`. Candidates are tried in order of
/// `(d(γ), γ, d(c), c)`.
pub fn regular_in_cylinder(
    engine: &CyclineEngine<'_>,
    mu: &Path,
    detour: &Degree,
    cycle_bound: &Degree,
) -> Option<EpPath> {
    let g = engine.graph();
    let cycle_degrees: Vec<Degree> = cycle_bound
        .all_below()
        .into_iter()
        .filter(|d| d.is_strictly_positive())
        .collect();
    for d in detour.all_below() {
        for gamma in g.paths_from(mu.source(), &d) {
            let head = g.compose(mu, &gamma).expect("composable");
            for cd in &cycle_degrees {
                for c in cycles_at(g, head.source(), cd) {
                    let x = canonicalize(g, &EpPath::new(head.clone(), c).expect("closed"));
                    let bound = default_regularity_bound(&x);
                    if is_regular(engine, &x, &bound).status == RegularityStatus::Regular {
                        return Some(x);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn deg(v: &[u32]) -> Degree {
        Degree::new(v.to_vec())
    }

    fn ep(g: &KGraph, head: &[&str], cycle: &[&str]) -> EpPath {
        let lit = EpLiteral {
            head: head.iter().map(|s| s.to_string()).collect(),
            cycle: cycle.iter().map(|s| s.to_string()).collect(),
        };
        EpPath::from_literal(g, &lit).unwrap()
    }

    #[test]
    fn construction_errors() {
        let c2 = corpus::c2();
        let lit = EpLiteral {
            head: vec![],
            cycle: vec!["e1".into()],
        };
        assert!(matches!(
            EpPath::from_literal(&c2, &lit),
            Err(GraphError::BadInfinitePath(_))
        ));
        let t2 = corpus::t2();
        let b = t2.path_from_names(&["b"]).unwrap();
        assert!(EpPath::new(t2.vertex(0), b).is_err());
    }

    #[test]
    fn prefixes_and_shifts() {
        let g1 = corpus::g1();
        let x = ep(&g1, &[], &["e"]);
        assert!(prefix(&g1, &x, &deg(&[0])).is_vertex());
        assert_eq!(g1.label(&prefix(&g1, &x, &deg(&[3]))), "eee");
        assert!(ep_equal(&g1, &shift(&g1, &x, &deg(&[5])), &x));

        let g2 = corpus::g2();
        let x = ep(&g2, &["a"], &["b", "b"]);
        assert_eq!(shift(&g2, &x, &deg(&[1])), ep(&g2, &[], &["b"]));
        let a = g2.path_from_names(&["a"]).unwrap();
        assert_eq!(prepend(&g2, &a, &ep(&g2, &[], &["b"])).unwrap().head(), &a);

        let t2 = corpus::t2();
        let x = ep(&t2, &[], &["b", "r"]);
        assert_eq!(t2.label(&prefix(&t2, &x, &deg(&[1, 1]))), "br");
        assert_eq!(t2.label(&prefix(&t2, &x, &deg(&[2, 0]))), "bb");
    }

    #[test]
    fn canonical_forms() {
        let g1 = corpus::g1();
        let x = ep(&g1, &["e"], &["e", "e"]);
        let c = canonicalize(&g1, &x);
        assert!(c.head().is_vertex());
        assert_eq!(c.cycle().edges().len(), 1);
        let c2 = corpus::c2();
        let x = ep(&c2, &["e1"], &["e2", "e1"]);
        let c = canonicalize(&c2, &x);
        assert!(c.head().is_vertex());
        assert_eq!(c2.label(c.cycle()), "e1.e2");
    }

    #[test]
    fn equality() {
        let g1 = corpus::g1();
        assert!(ep_equal(
            &g1,
            &ep(&g1, &["e"], &["e"]),
            &ep(&g1, &[], &["e"])
        ));
        let g2 = corpus::g2();
        assert!(!ep_equal(&g2, &ep(&g2, &[], &["a"]), &ep(&g2, &[], &["b"])));
        let a = g2.path_from_names(&["a"]).unwrap();
        let y = prepend(&g2, &a, &ep(&g2, &[], &["b", "a"])).unwrap();
        assert!(ep_equal(&g2, &ep(&g2, &["a", "b"], &["a", "b"]), &y));
        // Different cycle degrees for the same path in T2.
        let t2 = corpus::t2();
        assert!(ep_equal(
            &t2,
            &ep(&t2, &[], &["b", "r"]),
            &ep(&t2, &[], &["b", "b", "r"])
        ));
    }

    #[test]
    fn membership_in_f() {
        let g1 = corpus::g1();
        let x = ep(&g1, &[], &["e"]);
        let p = PairCandidate::new(
            g1.path_from_names(&["v"]).unwrap(),
            g1.path_from_names(&["e"]).unwrap(),
        )
        .unwrap();
        assert!(in_f(&g1, &x, &p));
        assert!(in_f(&g1, &x, &p.swapped()));
        let g2 = corpus::g2();
        let x = ep(&g2, &["a"], &["b"]);
        let p = PairCandidate::new(
            g2.path_from_names(&["a"]).unwrap(),
            g2.path_from_names(&["a", "b"]).unwrap(),
        )
        .unwrap();
        assert!(in_f(&g2, &x, &p));
        let p = PairCandidate::new(
            g2.path_from_names(&["b"]).unwrap(),
            g2.path_from_names(&["a", "b"]).unwrap(),
        )
        .unwrap();
        assert!(!in_f(&g2, &x, &p));
    }

    #[test]
    fn interior_search_examples() {
        let g1 = corpus::g1();
        let e = CyclineEngine::new(&g1);
        let x = ep(&g1, &[], &["e"]);
        let p = PairCandidate::new(
            g1.path_from_names(&["v"]).unwrap(),
            g1.path_from_names(&["e"]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            in_interior_f(&e, &x, &p, &deg(&[4])),
            Ok(InteriorSearch::Found(deg(&[1])))
        );
        let g1e = corpus::g1e();
        let e = CyclineEngine::new(&g1e);
        let x = ep(&g1e, &[], &["c"]);
        let p = PairCandidate::new(
            g1e.path_from_names(&["v"]).unwrap(),
            g1e.path_from_names(&["c"]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            in_interior_f(&e, &x, &p, &deg(&[6])),
            Ok(InteriorSearch::NotFoundWithinBound)
        );
        let y = ep(&g1e, &["f"], &["g"]);
        assert_eq!(
            in_interior_f(&e, &y, &p, &deg(&[6])),
            Err(InteriorError::PreconditionViolated)
        );
    }

    #[test]
    fn regularity_examples() {
        let g1 = corpus::g1();
        let e = CyclineEngine::new(&g1);
        let x = ep(&g1, &[], &["e"]);
        assert_eq!(
            is_regular(&e, &x, &default_regularity_bound(&x)).status,
            RegularityStatus::Regular
        );

        let g1e = corpus::g1e();
        let e = CyclineEngine::new(&g1e);
        let x = ep(&g1e, &[], &["c"]);
        let v = is_regular(&e, &x, &default_regularity_bound(&x));
        assert_eq!(v.status, RegularityStatus::NotRegular);
        let w = v.witnesses.iter().find(|w| !w.interior).unwrap();
        let r = w.refutation.as_ref().unwrap();
        assert!(g1e.label(r).contains('f'));
        let y = ep(&g1e, &["c", "f"], &["g"]);
        assert_eq!(
            is_regular(&e, &y, &default_regularity_bound(&y)).status,
            RegularityStatus::Regular
        );

        let g2 = corpus::g2();
        let e = CyclineEngine::new(&g2);
        let x = ep(&g2, &["a"], &["b"]);
        assert_eq!(
            is_regular(&e, &x, &default_regularity_bound(&x)).status,
            RegularityStatus::NotRegular
        );
        assert!(!onegraph_regular_oracle(&g2, &x).unwrap());
    }

    #[test]
    fn density_search() {
        let g1e = corpus::g1e();
        let e = CyclineEngine::new(&g1e);
        let c = g1e.path_from_names(&["c"]).unwrap();
        let x = regular_in_cylinder(&e, &c, &deg(&[2]), &deg(&[2])).unwrap();
        assert_eq!(prefix(&g1e, &x, &deg(&[1])), c);
        let g2 = corpus::g2();
        let e = CyclineEngine::new(&g2);
        let a = g2.path_from_names(&["a"]).unwrap();
        assert!(regular_in_cylinder(&e, &a, &deg(&[2]), &deg(&[2])).is_none());
    }
}
