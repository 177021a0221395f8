//! Finite models of the aperiodic representation `υ` and the twisted
//! representation `Υ` on a truncated basis of infinite paths.
//!
//! `T_α δ_x = δ_{αx}` when `r(x) = s(α)` and `0` otherwise. A basis is closed
//! under shifts, so every `T_α*` is exact; `T_α` may need a vector outside
//! the basis, and such columns are tracked as overflow.
//!
//! The Cuntz–Krieger relation (CK2) is checked in the form
//! `T_v = Σ_{λ ∈ vΛ^n} T_λ T_λ*`, which agrees with `T_v* T_v = Σ …` because
//! `T_v` is a projection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cycline::{ext, CyclineEngine, PairCandidate};
use crate::degree::{Degree, Offset};
use crate::error::GraphError;
use crate::graph::{KGraph, Path};
use crate::infinite::{
    default_regularity_bound, ep_equal, is_regular, prefix, prepend, raw_shift, shift, EpIndex,
    EpPath, RegularityStatus,
};

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("seed {seed} is not regular ({status:?})")]
    SeedNotRegular {
        seed: String,
        status: RegularityStatus,
    },
    #[error("combination needs basis vectors outside the basis at columns {columns:?}")]
    UnsafeDomain { columns: Vec<String> },
    #[error("pair is not a nontrivial cycline pair")]
    NotCycline,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `h_n(z) = Π z_i^{n_i}`.
pub fn character(n: &Offset, z: &[C64]) -> C64 {
    n.coords()
        .iter()
        .zip(z)
        .fold(C64::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powi(e as i32))
}

/// Which infinite paths may enter a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BasisPolicy {
    /// Only paths classified `Regular`.
    Regular,
    /// Any eventually periodic path. For graphs without regular eventually
    /// periodic paths; the result models the representation on `ℓ²(Λ^∞)`.
    Ambient,
}

/// A shift-closed, finite set of eventually periodic paths.
#[derive(Clone, Debug)]
pub struct BasisSet {
    index: EpIndex,
    safe: Vec<bool>,
    prepend_bound: Degree,
    policy: BasisPolicy,
    /// Prepended candidates that failed the regularity test.
    pub rejected: Vec<(EpPath, RegularityStatus)>,
}

fn shift_close(g: &KGraph, index: &mut EpIndex, mut pending: Vec<usize>) {
    while let Some(i) = pending.pop() {
        let x = index.members()[i].clone();
        for c in 0..g.k() {
            let y = shift(g, &x, &Degree::unit(g.k(), c));
            let (j, fresh) = index.insert(g, y);
            if fresh {
                pending.push(j);
            }
        }
    }
}

impl BasisSet {
    /// Shift closure of the seeds, then of every `νy` with `y` in that
    /// closure, `d(ν) ≤ prepend_bound` and (under [`BasisPolicy::Regular`])
    /// `νy` regular.
    pub fn build(
        engine: &CyclineEngine<'_>,
        seeds: &[EpPath],
        prepend_bound: &Degree,
        policy: BasisPolicy,
    ) -> Result<BasisSet, ModelError> {
        let g = engine.graph();
        let regular = |x: &EpPath| is_regular(engine, x, &default_regularity_bound(x)).status;
        let mut index = EpIndex::new();
        let mut pending = Vec::new();
        for s in seeds {
            if policy == BasisPolicy::Regular {
                let status = regular(s);
                if status != RegularityStatus::Regular {
                    return Err(ModelError::SeedNotRegular {
                        seed: s.label(g),
                        status,
                    });
                }
            }
            let (i, fresh) = index.insert(g, crate::infinite::canonicalize(g, s));
            if fresh {
                pending.push(i);
            }
        }
        shift_close(g, &mut index, pending);

        let core: Vec<EpPath> = index.members().to_vec();
        let mut rejected = Vec::new();
        let mut pending = Vec::new();
        for y in &core {
            for nu in g.paths_into_upto(prepend_bound, y.range()) {
                let x = prepend(g, &nu, y)?;
                if index.find(g, &x).is_some() {
                    continue;
                }
                if policy == BasisPolicy::Regular {
                    let status = regular(&x);
                    if status != RegularityStatus::Regular {
                        rejected.push((x, status));
                        continue;
                    }
                }
                let (i, _) = index.insert(g, x);
                pending.push(i);
            }
        }
        shift_close(g, &mut index, pending);

        let safe = index
            .members()
            .iter()
            .map(|x| {
                g.paths_into_upto(prepend_bound, x.range()).iter().all(|a| {
                    index
                        .find(g, &prepend(g, a, x).expect("composable"))
                        .is_some()
                })
            })
            .collect();
        Ok(BasisSet {
            index,
            safe,
            prepend_bound: prepend_bound.clone(),
            policy,
            rejected,
        })
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn members(&self) -> &[EpPath] {
        self.index.members()
    }

    pub fn member(&self, i: usize) -> &EpPath {
        &self.index.members()[i]
    }

    pub fn find(&self, g: &KGraph, x: &EpPath) -> Option<usize> {
        self.index.find(g, x)
    }

    /// Every `αx` with `d(α) ≤ prepend_bound` is a member.
    pub fn is_safe(&self, i: usize) -> bool {
        self.safe[i]
    }

    pub fn safe_count(&self) -> usize {
        self.safe.iter().filter(|&&s| s).count()
    }

    pub fn prepend_bound(&self) -> &Degree {
        &self.prepend_bound
    }

    pub fn policy(&self) -> BasisPolicy {
        self.policy
    }

    pub fn labels(&self, g: &KGraph) -> Vec<String> {
        self.members().iter().map(|x| x.label(g)).collect()
    }
}

/// A sparse square matrix over the basis. Columns whose image would leave
/// the basis are recorded in `overflow` and carry no entries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseOp {
    dim: usize,
    entries: BTreeMap<(usize, usize), C64>,
    overflow: BTreeSet<usize>,
}

impl SparseOp {
    pub fn zero(dim: usize) -> Self {
        SparseOp {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries.get(&(row, col)).copied().unwrap_or_default()
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        if v == C64::default() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    fn add_at(&mut self, row: usize, col: usize, v: C64) {
        let cur = self.get(row, col);
        self.set(row, col, cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &C64)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn overflow(&self) -> &BTreeSet<usize> {
        &self.overflow
    }

    /// No entries. Overflow columns are ignored.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|(r, c)| r == c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn adjoint(&self) -> SparseOp {
        SparseOp {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.conj()))
                .collect(),
            overflow: BTreeSet::new(),
        }
    }

    pub fn scale(&self, s: C64) -> SparseOp {
        let mut out = SparseOp::zero(self.dim);
        for (&(r, c), &v) in &self.entries {
            out.set(r, c, v * s);
        }
        out.overflow = self.overflow.clone();
        out
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        let mut out = self.clone();
        for (&(r, c), &v) in &other.entries {
            out.add_at(r, c, v);
        }
        out.overflow.extend(other.overflow.iter().copied());
        out
    }

    pub fn sub(&self, other: &SparseOp) -> SparseOp {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `self · other`. A column of the product overflows when the column of
    /// `other` overflows or reaches a row that is an overflow column of
    /// `self`.
    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        let mut by_row: BTreeMap<usize, Vec<(usize, C64)>> = BTreeMap::new();
        for (&(r, c), &v) in &self.entries {
            by_row.entry(c).or_default().push((r, v));
        }
        let mut out = SparseOp::zero(self.dim);
        out.overflow = other.overflow.clone();
        for (&(mid, c), &v) in &other.entries {
            if self.overflow.contains(&mid) {
                out.overflow.insert(c);
            }
            if let Some(col) = by_row.get(&mid) {
                for &(r, w) in col {
                    out.add_at(r, c, w * v);
                }
            }
        }
        let overflow = out.overflow.clone();
        out.entries.retain(|(_, c), _| !overflow.contains(c));
        out
    }

    /// `A δ_i` as a sparse column.
    pub fn column(&self, i: usize) -> BTreeMap<usize, C64> {
        self.entries
            .iter()
            .filter(|((_, c), _)| *c == i)
            .map(|(&(r, _), &v)| (r, v))
            .collect()
    }

    /// Entries that differ by more than `tol`, restricted to columns
    /// accepted by `keep`.
    pub fn differences(
        &self,
        other: &SparseOp,
        tol: f64,
        keep: impl Fn(usize) -> bool,
    ) -> Vec<(usize, usize)> {
        let keys: BTreeSet<(usize, usize)> = self
            .entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .collect();
        keys.into_iter()
            .filter(|&(r, c)| keep(c) && (self.get(r, c) - other.get(r, c)).norm() > tol)
            .collect()
    }

    /// Coordinate text: one `row col re im` line per entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = String::new();
        for (&(r, c), v) in &self.entries {
            s.push_str(&format!("{r} {c} {} {}\n", v.re, v.im));
        }
        s
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `T_α`.
pub fn op_t(g: &KGraph, alpha: &Path, b: &BasisSet) -> SparseOp {
    let mut out = SparseOp::zero(b.len());
    for (col, y) in b.members().iter().enumerate() {
        if y.range() != alpha.source() {
            continue;
        }
        match b.find(g, &prepend(g, alpha, y).expect("composable")) {
            Some(row) => out.set(row, col, one()),
            None => {
                out.overflow.insert(col);
            }
        }
    }
    out
}

/// `T_α*`, exact because the basis is shift closed.
pub fn op_tstar(g: &KGraph, alpha: &Path, b: &BasisSet) -> SparseOp {
    let mut out = SparseOp::zero(b.len());
    for (col, x) in b.members().iter().enumerate() {
        if prefix(g, x, alpha.degree()) == *alpha {
            let row = b
                .find(g, &shift(g, x, alpha.degree()))
                .expect("basis is shift closed");
            out.set(row, col, one());
        }
    }
    out
}

/// `Q_α = T_α T_α*`: the indicator of `Z(α)`.
pub fn op_q(g: &KGraph, alpha: &Path, b: &BasisSet) -> SparseOp {
    let mut out = SparseOp::zero(b.len());
    for (i, x) in b.members().iter().enumerate() {
        if prefix(g, x, alpha.degree()) == *alpha {
            out.set(i, i, one());
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CkViolation {
    pub relation: String,
    pub mu: Vec<String>,
    pub nu: Vec<String>,
    pub basis_vector: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CkReport {
    pub degree: Degree,
    pub basis_size: usize,
    pub ck1_checked_pairs: usize,
    pub ck1_checked_columns: usize,
    pub ck1_violations: Vec<CkViolation>,
    pub ck2_violations: Vec<CkViolation>,
    /// The `T_v` are mutually orthogonal projections and each `T_λT_λ*`
    /// is a projection.
    pub projection_violations: Vec<CkViolation>,
}

impl CkReport {
    pub fn holds(&self) -> bool {
        self.ck1_violations.is_empty()
            && self.ck2_violations.is_empty()
            && self.projection_violations.is_empty()
    }
}

/// Checks (CK1) on columns where `T_ν` stays in the basis, and (CK2) on the
/// whole basis, for paths of degree `n`.
pub fn verify_ck(g: &KGraph, b: &BasisSet, n: &Degree) -> CkReport {
    let labels = b.labels(g);
    let paths = g.paths_of_degree(n);
    let t: Vec<SparseOp> = paths.par_iter().map(|p| op_t(g, p, b)).collect();
    let ts: Vec<SparseOp> = paths.par_iter().map(|p| op_tstar(g, p, b)).collect();
    let vertex_q: Vec<SparseOp> = g.vertices().map(|v| op_q(g, &g.vertex(v), b)).collect();
    let tol = 0.0;

    let violation = |relation: &str, mu: &Path, nu: &Path, col: usize| CkViolation {
        relation: relation.to_string(),
        mu: g.names(mu),
        nu: g.names(nu),
        basis_vector: labels[col].clone(),
    };

    let ck1: Vec<(usize, Vec<CkViolation>)> = (0..paths.len())
        .into_par_iter()
        .flat_map_iter(|i| (0..paths.len()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let lhs = ts[i].mul(&t[j]);
            let rhs = if i == j {
                vertex_q[paths[i].source()].clone()
            } else {
                SparseOp::zero(b.len())
            };
            let keep = |c: usize| !t[j].overflow.contains(&c);
            let cols = (0..b.len()).filter(|&c| keep(c)).count();
            let bad = lhs
                .differences(&rhs, tol, keep)
                .into_iter()
                .map(|(_, c)| c)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .map(|c| violation("CK1", &paths[i], &paths[j], c))
                .collect();
            (cols, bad)
        })
        .collect();

    let mut ck2_violations = Vec::new();
    let mut projection_violations = Vec::new();
    for v in g.vertices() {
        let mut sum = SparseOp::zero(b.len());
        for (i, p) in paths.iter().enumerate() {
            if p.range() != v {
                continue;
            }
            let proj = t[i].mul(&ts[i]);
            if !proj.overflow.is_empty() || proj.mul(&proj) != proj || proj.adjoint() != proj {
                for c in 0..b.len() {
                    if proj.mul(&proj).column(c) != proj.column(c) || proj.overflow.contains(&c) {
                        projection_violations.push(violation("TλTλ* projection", p, p, c));
                    }
                }
            }
            sum = sum.add(&proj);
        }
        let vp = g.vertex(v);
        for c in sum
            .differences(&vertex_q[v], tol, |_| true)
            .into_iter()
            .map(|(_, c)| c)
            .collect::<BTreeSet<_>>()
        {
            ck2_violations.push(violation("CK2", &vp, &vp, c));
        }
        for w in g.vertices() {
            let prod = vertex_q[v].mul(&vertex_q[w]);
            let expect = if v == w {
                vertex_q[v].clone()
            } else {
                SparseOp::zero(b.len())
            };
            for (_, c) in prod.differences(&expect, tol, |_| true) {
                projection_violations.push(violation("vertex projections", &vp, &g.vertex(w), c));
            }
        }
    }

    CkReport {
        degree: n.clone(),
        basis_size: b.len(),
        ck1_checked_pairs: paths.len() * paths.len(),
        ck1_checked_columns: ck1.iter().map(|(c, _)| c).sum(),
        ck1_violations: ck1.into_iter().flat_map(|(_, v)| v).collect(),
        ck2_violations,
        projection_violations,
    }
}

/// A finite combination `Σ c_{αβ} S_α S_β*` with `s(α) = s(β)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeneratorCombo {
    terms: BTreeMap<(Path, Path), C64>,
}

impl GeneratorCombo {
    pub fn new() -> Self {
        GeneratorCombo::default()
    }

    /// `S_α S_β*`.
    pub fn standard(alpha: &Path, beta: &Path) -> Result<Self, GraphError> {
        let mut c = GeneratorCombo::new();
        c.add_term(alpha, beta, one())?;
        Ok(c)
    }

    /// `P_α = S_α S_α*`.
    pub fn projection(alpha: &Path) -> Self {
        GeneratorCombo::standard(alpha, alpha).expect("same source")
    }

    pub fn add_term(&mut self, alpha: &Path, beta: &Path, coeff: C64) -> Result<(), GraphError> {
        if alpha.source() != beta.source() {
            return Err(GraphError::NotAPath(
                "standard generator needs a common source".into(),
            ));
        }
        let key = (alpha.clone(), beta.clone());
        let v = self.terms.get(&key).copied().unwrap_or_default() + coeff;
        if v == C64::default() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Path, C64)> {
        self.terms.iter().map(|((a, b), &c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &GeneratorCombo) -> GeneratorCombo {
        let mut out = self.clone();
        for (a, b, c) in other.terms() {
            out.add_term(a, b, c).expect("terms are source matched");
        }
        out
    }

    pub fn scale(&self, s: C64) -> GeneratorCombo {
        let mut out = GeneratorCombo::new();
        for (a, b, c) in self.terms() {
            out.add_term(a, b, c * s).expect("terms are source matched");
        }
        out
    }

    pub fn sub(&self, other: &GeneratorCombo) -> GeneratorCombo {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `c*`: swaps each pair and conjugates the coefficient.
    pub fn adjoint(&self) -> GeneratorCombo {
        let mut out = GeneratorCombo::new();
        for (a, b, c) in self.terms() {
            out.add_term(b, a, c.conj())
                .expect("terms are source matched");
        }
        out
    }

    /// Product by the rule `S_αS_β* S_μS_ν* = Σ_ζ S_{αγ}S_{νη}*` over
    /// `ζ ∈ ext(β, N) ∩ ext(μ, N)`, `N = d(β) ∨ d(μ)`, `γ = ζ(d(β), N)`,
    /// `η = ζ(d(μ), N)`.
    pub fn mul(&self, g: &KGraph, other: &GeneratorCombo) -> GeneratorCombo {
        let mut out = GeneratorCombo::new();
        for (alpha, beta, c1) in self.terms() {
            for (mu, nu, c2) in other.terms() {
                if beta.range() != mu.range() {
                    continue;
                }
                let n = beta.degree().join(mu.degree());
                let eb: BTreeSet<Path> = ext(g, beta, &n).expect("join").into_iter().collect();
                for zeta in ext(g, mu, &n).expect("join") {
                    if !eb.contains(&zeta) {
                        continue;
                    }
                    let gamma = g.segment(&zeta, beta.degree(), &n).expect("degrees");
                    let eta = g.segment(&zeta, mu.degree(), &n).expect("degrees");
                    let left = g.compose(alpha, &gamma).expect("composable");
                    let right = g.compose(nu, &eta).expect("composable");
                    out.add_term(&left, &right, c1 * c2).expect("common source");
                }
            }
        }
        out
    }

    /// Every term has `α = β`.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|(a, b)| a == b)
    }

    /// Every term is a cycline pair.
    pub fn is_cycline(&self, engine: &CyclineEngine<'_>) -> bool {
        self.terms.keys().all(|(a, b)| engine.eq_all_tails(a, b))
    }
}

/// `z · c`: each coefficient times `h_{d(α) − d(β)}(z)`.
pub fn gauge_rotate(c: &GeneratorCombo, z: &[C64]) -> GeneratorCombo {
    let mut out = GeneratorCombo::new();
    for (a, b, coeff) in c.terms() {
        let h = character(&a.degree().diff(b.degree()), z);
        out.add_term(a, b, coeff * h).expect("source matched");
    }
    out
}

/// `T_α T_β*`, with the columns where `T_α` would leave the basis.
fn term_matrix(g: &KGraph, alpha: &Path, beta: &Path, b: &BasisSet) -> (SparseOp, BTreeSet<usize>) {
    let mut out = SparseOp::zero(b.len());
    let mut unsafe_cols = BTreeSet::new();
    for (col, x) in b.members().iter().enumerate() {
        if prefix(g, x, beta.degree()) != *beta {
            continue;
        }
        let y = raw_shift(g, x, beta.degree());
        match b.find(g, &prepend(g, alpha, &y).expect("composable")) {
            Some(row) => out.set(row, col, one()),
            None => {
                unsafe_cols.insert(col);
            }
        }
    }
    (out, unsafe_cols)
}

/// `υ(c)` together with the columns on which it is not determined.
pub fn eval_upsilon_partial(
    g: &KGraph,
    c: &GeneratorCombo,
    b: &BasisSet,
) -> (SparseOp, BTreeSet<usize>) {
    let mut out = SparseOp::zero(b.len());
    let mut unsafe_cols = BTreeSet::new();
    for (alpha, beta, coeff) in c.terms() {
        let (m, u) = term_matrix(g, alpha, beta, b);
        out = out.add(&m.scale(coeff));
        unsafe_cols.extend(u);
    }
    out.entries.retain(|(_, col), _| !unsafe_cols.contains(col));
    (out, unsafe_cols)
}

fn unsafe_error(g: &KGraph, b: &BasisSet, cols: &BTreeSet<usize>) -> ModelError {
    ModelError::UnsafeDomain {
        columns: cols.iter().map(|&c| b.member(c).label(g)).collect(),
    }
}

/// `υ(c) = Σ c_{αβ} T_α T_β*`.
pub fn eval_upsilon(g: &KGraph, c: &GeneratorCombo, b: &BasisSet) -> Result<SparseOp, ModelError> {
    let (m, u) = eval_upsilon_partial(g, c, b);
    if u.is_empty() {
        Ok(m)
    } else {
        Err(unsafe_error(g, b, &u))
    }
}

/// `Σ_n h_n ⊗ A_n`, stored by exact Laurent components.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradedOp {
    components: BTreeMap<Offset, SparseOp>,
}

impl GradedOp {
    pub fn components(&self) -> &BTreeMap<Offset, SparseOp> {
        &self.components
    }

    pub fn component(&self, n: &Offset) -> Option<&SparseOp> {
        self.components.get(n)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `Σ_n h_n(z) A_n`.
    pub fn at(&self, z: &[C64], dim: usize) -> SparseOp {
        self.components
            .iter()
            .fold(SparseOp::zero(dim), |acc, (n, a)| {
                acc.add(&a.scale(character(n, z)))
            })
    }
}

/// `Υ(c)`: the component at `n` is `Σ_{d(α)−d(β)=n} c_{αβ} T_α T_β*`.
pub fn eval_big_upsilon(
    g: &KGraph,
    c: &GeneratorCombo,
    b: &BasisSet,
) -> Result<GradedOp, ModelError> {
    let mut parts: BTreeMap<Offset, GeneratorCombo> = BTreeMap::new();
    for (a, bt, coeff) in c.terms() {
        parts
            .entry(a.degree().diff(bt.degree()))
            .or_default()
            .add_term(a, bt, coeff)?;
    }
    let mut components = BTreeMap::new();
    let mut all_unsafe = BTreeSet::new();
    for (n, part) in parts {
        let (m, u) = eval_upsilon_partial(g, &part, b);
        all_unsafe.extend(u);
        if !m.is_zero() {
            components.insert(n, m);
        }
    }
    if !all_unsafe.is_empty() {
        return Err(unsafe_error(g, b, &all_unsafe));
    }
    Ok(GradedOp { components })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct KernelWitness {
    pub pair: [Vec<String>; 2],
    pub upsilon_norm: f64,
    /// Nonzero components of `Υ(S_αS_β* − P_α)`, with their entry counts.
    pub upsilon_components: BTreeMap<String, usize>,
    pub upsilon_zero: bool,
    pub separated: bool,
}

/// For a nontrivial cycline pair, checks that `S_αS_β* − P_α` is killed by
/// `υ` but not by `Υ`.
pub fn kernel_probe(
    engine: &CyclineEngine<'_>,
    p: &PairCandidate,
    b: &BasisSet,
) -> Result<KernelWitness, ModelError> {
    let g = engine.graph();
    if p.is_trivial() || !engine.decide(p) {
        return Err(ModelError::NotCycline);
    }
    let combo =
        GeneratorCombo::standard(&p.alpha, &p.beta)?.sub(&GeneratorCombo::projection(&p.alpha));
    let small = eval_upsilon(g, &combo, b)?;
    let big = eval_big_upsilon(g, &combo, b)?;
    Ok(KernelWitness {
        pair: [g.names(&p.alpha), g.names(&p.beta)],
        upsilon_norm: small.frobenius_norm(),
        upsilon_components: big
            .components()
            .iter()
            .map(|(n, a)| (n.to_string(), a.nnz()))
            .collect(),
        upsilon_zero: small.is_zero(),
        separated: big.components().len() >= 2,
    })
}

/// `T_α = T_β` on the basis: `αy = βy` for every member `y` with range
/// `s(α)`.
pub fn special_test(g: &KGraph, p: &PairCandidate, b: &BasisSet) -> bool {
    b.members()
        .iter()
        .filter(|y| y.range() == p.alpha.source())
        .all(|y| {
            ep_equal(
                g,
                &prepend(g, &p.alpha, y).expect("composable"),
                &prepend(g, &p.beta, y).expect("composable"),
            )
        })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CommutantReport {
    pub bound: Degree,
    /// Members grouped by their prefix of degree `bound`. A matrix commutes
    /// with every `Q_α`, `d(α) ≤ bound`, iff it is block diagonal for these
    /// classes.
    pub classes: Vec<Vec<usize>>,
    pub diagonal: bool,
}

pub fn commutant_check(g: &KGraph, b: &BasisSet, bound: &Degree) -> CommutantReport {
    let mut by_prefix: BTreeMap<Path, Vec<usize>> = BTreeMap::new();
    for (i, x) in b.members().iter().enumerate() {
        by_prefix.entry(prefix(g, x, bound)).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = by_prefix.into_values().collect();
    let diagonal = classes.iter().all(|c| c.len() == 1);
    CommutantReport {
        bound: bound.clone(),
        classes,
        diagonal,
    }
}

/// `υ(S_αS_β*)` is diagonal for each pair and the images commute pairwise.
pub fn cycline_images_commute(g: &KGraph, pairs: &[PairCandidate], b: &BasisSet) -> bool {
    let images: Vec<SparseOp> = pairs
        .iter()
        .map(|p| {
            eval_upsilon_partial(
                g,
                &GeneratorCombo::standard(&p.alpha, &p.beta).expect("pair"),
                b,
            )
            .0
        })
        .collect();
    images.iter().all(|m| m.is_diagonal())
        && images
            .iter()
            .all(|a| images.iter().all(|c| a.mul(c) == c.mul(a)))
}

impl fmt::Display for CkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} basis={} ck1={} ck2={} projections={}",
            self.degree,
            self.basis_size,
            self.ck1_violations.len(),
            self.ck2_violations.len(),
            self.projection_violations.len()
        )
    }
}
