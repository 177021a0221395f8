//! The states `φ_x`, `ψ_{z,x}` and `e_{z,x}` on finite generator
//! combinations, and the character sets `H_x`.
//!
//! On a standard generator,
//! `φ_x(S_αS_β*) = [x ∈ Z(α)]` when `α = β` and `[x ∈ F_{α,β}]` otherwise;
//! `ψ_{z,x}` multiplies the second case by `h_{d(α)−d(β)}(z)`.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cycline::{source_matched_pairs, CyclineEngine, PairCandidate};
use crate::degree::{Degree, Offset};
use crate::graph::KGraph;
use crate::infinite::{agreement_pairs, in_f, prefix, EpPath};
use crate::model::{
    character, eval_upsilon_partial, special_test, BasisSet, GeneratorCombo, ModelError, C64,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("term ({alpha}, {beta}) is not a cycline pair")]
    NonCyclineTerm { alpha: String, beta: String },
    #[error("z has a coordinate off the unit circle")]
    NotUnitModulus,
    #[error("z has {got} coordinates, graph has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
}

/// A point `(z, x)` of `𝕋^k × 𝔗`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    pub z: Vec<C64>,
    pub x: EpPath,
}

impl StateSpec {
    pub fn new(g: &KGraph, z: Vec<C64>, x: EpPath) -> Result<StateSpec, StateError> {
        if z.len() != g.k() {
            return Err(StateError::RankMismatch {
                expected: g.k(),
                got: z.len(),
            });
        }
        if z.iter().any(|c| (c.norm() - 1.0).abs() > 1e-12) {
            return Err(StateError::NotUnitModulus);
        }
        Ok(StateSpec { z, x })
    }
}

/// `z = (1, …, 1)`.
pub fn unit_z(k: usize) -> Vec<C64> {
    vec![C64::new(1.0, 0.0); k]
}

fn term_value(
    g: &KGraph,
    x: &EpPath,
    alpha: &crate::Path,
    beta: &crate::Path,
    z: Option<&[C64]>,
) -> C64 {
    let zero = C64::default();
    if alpha == beta {
        return if prefix(g, x, alpha.degree()) == *alpha {
            C64::new(1.0, 0.0)
        } else {
            zero
        };
    }
    let pair = PairCandidate {
        alpha: alpha.clone(),
        beta: beta.clone(),
    };
    if !in_f(g, x, &pair) {
        return zero;
    }
    match z {
        Some(z) => character(&alpha.degree().diff(beta.degree()), z),
        None => C64::new(1.0, 0.0),
    }
}

pub fn phi_eval(g: &KGraph, x: &EpPath, c: &GeneratorCombo) -> C64 {
    c.terms()
        .map(|(a, b, coeff)| coeff * term_value(g, x, a, b, None))
        .sum()
}

pub fn psi_eval(g: &KGraph, s: &StateSpec, c: &GeneratorCombo) -> C64 {
    c.terms()
        .map(|(a, b, coeff)| coeff * term_value(g, &s.x, a, b, Some(&s.z)))
        .sum()
}

/// `ψ_{z,x}` restricted to combinations of cycline generators.
pub fn e_eval(
    engine: &CyclineEngine<'_>,
    s: &StateSpec,
    c: &GeneratorCombo,
) -> Result<C64, StateError> {
    let g = engine.graph();
    for (a, b, _) in c.terms() {
        if !engine.eq_all_tails(a, b) {
            return Err(StateError::NonCyclineTerm {
                alpha: g.label(a),
                beta: g.label(b),
            });
        }
    }
    Ok(psi_eval(g, s, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HxVariant {
    /// All pairs with `x ∈ F_{α,β}`.
    H,
    /// Cycline pairs only.
    Hc,
    /// Pairs with `T_α = T_β` on the basis.
    Hs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HxSet {
    pub diffs: BTreeSet<Offset>,
    pub bound: Degree,
    pub variant: HxVariant,
}

/// `{0} ∪ {d(α) − d(β)}` over `α = x(0,p)`, `β = x(0,q)`, `p ≠ q ≤ bound`,
/// `σ^p x = σ^q x`, filtered by the variant. `Hs` needs a basis.
pub fn compute_hx(
    engine: &CyclineEngine<'_>,
    x: &EpPath,
    bound: &Degree,
    variant: HxVariant,
    basis: Option<&BasisSet>,
) -> HxSet {
    let g = engine.graph();
    let mut diffs = BTreeSet::from([Offset::zero(g.k())]);
    for (p, q) in agreement_pairs(g, x, bound) {
        let alpha = prefix(g, x, &p);
        let beta = prefix(g, x, &q);
        let keep = match variant {
            HxVariant::H => true,
            HxVariant::Hc => engine.eq_all_tails(&alpha, &beta),
            HxVariant::Hs => {
                let pair = PairCandidate { alpha, beta };
                special_test(g, &pair, basis.expect("Hs needs a basis"))
            }
        };
        if keep {
            let c = p.diff(&q);
            diffs.insert(c.negate());
            diffs.insert(c);
        }
    }
    HxSet {
        diffs,
        bound: bound.clone(),
        variant,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    /// `h(z₁) = h(z₂)` for all `h ∈ H_x`.
    pub characters_agree: bool,
    /// `ψ_{z₁,x} = ψ_{z₂,x}` on every `S_αS_β*` within the bound.
    pub psi_agree: bool,
    /// `e_{z₁,x} = e_{z₂,x}` on every cycline `S_αS_β*` within the bound.
    pub e_agree: bool,
}

impl EquivReport {
    pub fn consistent(&self) -> bool {
        self.characters_agree == self.psi_agree && self.psi_agree == self.e_agree
    }
}

/// The `z`-independent data behind [`states_equiv`] for one point: `H_x`
/// and, for each `S_αS_β*` in the panel, whether `x ∈ F_{α,β}` and whether
/// the pair is cycline.
#[derive(Clone, Debug)]
pub struct EquivPanel {
    hx: HxSet,
    terms: Vec<(Offset, bool, bool)>,
}

impl EquivPanel {
    /// Panel terms are the source-matched pairs within `bound` with range
    /// `r(x)`.
    pub fn new(engine: &CyclineEngine<'_>, x: &EpPath, bound: &Degree) -> EquivPanel {
        let g = engine.graph();
        let terms = source_matched_pairs(g, bound)
            .into_iter()
            .filter(|p| p.alpha.range() == x.range() && p.beta.range() == x.range())
            .map(|p| {
                let inside = if p.alpha == p.beta {
                    prefix(g, x, p.alpha.degree()) == p.alpha
                } else {
                    in_f(g, x, &p)
                };
                (
                    p.difference(),
                    inside,
                    engine.eq_all_tails(&p.alpha, &p.beta),
                )
            })
            .collect();
        EquivPanel {
            hx: compute_hx(engine, x, bound, HxVariant::H, None),
            terms,
        }
    }

    pub fn hx(&self) -> &HxSet {
        &self.hx
    }

    pub fn compare(&self, z1: &[C64], z2: &[C64], tol: f64) -> EquivReport {
        let characters_agree = self
            .hx
            .diffs
            .iter()
            .all(|c| (character(c, z1) - character(c, z2)).norm() <= tol);
        let mut psi_agree = true;
        let mut e_agree = true;
        for (c, inside, cycline) in &self.terms {
            if !inside {
                continue;
            }
            let same = (character(c, z1) - character(c, z2)).norm() <= tol;
            psi_agree &= same;
            if *cycline {
                e_agree &= same;
            }
        }
        EquivReport {
            characters_agree,
            psi_agree,
            e_agree,
        }
    }
}

/// Compares `ψ_{z₁,x}` and `ψ_{z₂,x}` three ways.
pub fn states_equiv(
    engine: &CyclineEngine<'_>,
    z1: &[C64],
    z2: &[C64],
    x: &EpPath,
    bound: &Degree,
    tol: f64,
) -> EquivReport {
    EquivPanel::new(engine, x, bound).compare(z1, z2, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    /// `φ_x(c*c)` by the state formula.
    pub phi: [f64; 2],
    /// `⟨υ(c*c) δ_x, δ_x⟩`.
    pub matrix: [f64; 2],
    /// `‖υ(c) δ_x‖²`.
    pub norm_sq: f64,
    pub agree: bool,
    pub nonnegative: bool,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.agree && self.nonnegative
    }
}

/// `φ_x(c*c) = ⟨υ(c*c)δ_x, δ_x⟩ = ‖υ(c)δ_x‖² ≥ 0` for `x` in the basis.
pub fn positivity_check(
    g: &KGraph,
    x: &EpPath,
    c: &GeneratorCombo,
    b: &BasisSet,
    tol: f64,
) -> Result<PositivityReport, ModelError> {
    let i = b.find(g, x).ok_or_else(|| ModelError::UnsafeDomain {
        columns: vec![x.label(g)],
    })?;
    let cc = c.adjoint().mul(g, c);
    let phi = phi_eval(g, x, &cc);
    let (m_cc, u_cc) = eval_upsilon_partial(g, &cc, b);
    let (m_c, u_c) = eval_upsilon_partial(g, c, b);
    if u_cc.contains(&i) || u_c.contains(&i) {
        return Err(ModelError::UnsafeDomain {
            columns: vec![x.label(g)],
        });
    }
    let matrix = m_cc.get(i, i);
    let norm_sq: f64 = m_c.column(i).values().map(|v| v.norm_sqr()).sum();
    let agree = (phi - matrix).norm() <= tol && (matrix - C64::new(norm_sq, 0.0)).norm() <= tol;
    Ok(PositivityReport {
        phi: [phi.re, phi.im],
        matrix: [matrix.re, matrix.im],
        norm_sq,
        agree,
        nonnegative: phi.re >= -tol && phi.im.abs() <= tol,
    })
}

/// Pairs of distinct members not told apart by any `φ(P_α)`, `d(α) ≤ bound`.
pub fn unseparated_pairs(g: &KGraph, b: &BasisSet, bound: &Degree) -> Vec<(usize, usize)> {
    let prefixes: Vec<_> = b.members().iter().map(|x| prefix(g, x, bound)).collect();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if prefixes[i] == prefixes[j] {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::infinite::EpLiteral;
    use crate::model::BasisPolicy;

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

    fn gen(g: &KGraph, a: &[&str], b: &[&str]) -> GeneratorCombo {
        GeneratorCombo::standard(
            &g.path_from_names(a).unwrap(),
            &g.path_from_names(b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn state_values() {
        let g1 = corpus::g1();
        let x = ep(&g1, &[], &["e"]);
        assert_eq!(
            phi_eval(&g1, &x, &gen(&g1, &["v"], &["e"])),
            C64::new(1.0, 0.0)
        );
        let s = StateSpec::new(&g1, vec![C64::new(0.0, 1.0)], x.clone()).unwrap();
        assert_eq!(
            psi_eval(&g1, &s, &gen(&g1, &["v"], &["e"])),
            C64::new(0.0, -1.0)
        );
        let e = CyclineEngine::new(&g1);
        assert_eq!(
            e_eval(&e, &s, &gen(&g1, &["v"], &["e"])).unwrap(),
            C64::new(0.0, -1.0)
        );

        let g2 = corpus::g2();
        let x = ep(&g2, &[], &["a"]);
        assert_eq!(phi_eval(&g2, &x, &gen(&g2, &["a"], &["b"])), C64::default());
        let e = CyclineEngine::new(&g2);
        let s = StateSpec::new(&g2, unit_z(1), x).unwrap();
        assert!(matches!(
            e_eval(&e, &s, &gen(&g2, &["a"], &["b"])),
            Err(StateError::NonCyclineTerm { .. })
        ));
        assert!(StateSpec::new(&g2, vec![C64::new(2.0, 0.0)], ep(&g2, &[], &["a"])).is_err());
    }

    #[test]
    fn h_sets() {
        let g1 = corpus::g1();
        let e = CyclineEngine::new(&g1);
        let x = ep(&g1, &[], &["e"]);
        let h = compute_hx(&e, &x, &deg(&[3]), HxVariant::H, None);
        assert_eq!(h.diffs.len(), 7);
        let t2 = corpus::t2();
        let e = CyclineEngine::new(&t2);
        let x = ep(&t2, &[], &["b", "r"]);
        let b = BasisSet::build(
            &e,
            std::slice::from_ref(&x),
            &deg(&[1, 1]),
            BasisPolicy::Regular,
        )
        .unwrap();
        let h = compute_hx(&e, &x, &deg(&[2, 2]), HxVariant::H, None);
        assert_eq!(h.diffs.len(), 25);
        assert_eq!(
            compute_hx(&e, &x, &deg(&[2, 2]), HxVariant::Hc, None).diffs,
            h.diffs
        );
        assert_eq!(
            compute_hx(&e, &x, &deg(&[2, 2]), HxVariant::Hs, Some(&b)).diffs,
            h.diffs
        );
    }

    #[test]
    fn equivalence_on_g1() {
        let g1 = corpus::g1();
        let e = CyclineEngine::new(&g1);
        let x = ep(&g1, &[], &["e"]);
        let one = [C64::new(1.0, 0.0)];
        let i = [C64::new(0.0, 1.0)];
        let r = states_equiv(&e, &one, &one, &x, &deg(&[2]), 1e-9);
        assert!(r.characters_agree && r.consistent());
        let r = states_equiv(&e, &one, &i, &x, &deg(&[2]), 1e-9);
        assert!(!r.characters_agree && r.consistent());
    }

    #[test]
    fn positivity() {
        let g1 = corpus::g1();
        let e = CyclineEngine::new(&g1);
        let x = ep(&g1, &[], &["e"]);
        let b = BasisSet::build(
            &e,
            std::slice::from_ref(&x),
            &deg(&[2]),
            BasisPolicy::Regular,
        )
        .unwrap();
        let c = gen(&g1, &["v"], &["e"]).add(&gen(&g1, &["e"], &["e"]).scale(C64::new(0.0, 2.0)));
        let r = positivity_check(&g1, &x, &c, &b, 1e-9).unwrap();
        assert!(r.passed());
        assert!(r.norm_sq > 0.0);
        let zero = positivity_check(&g1, &x, &GeneratorCombo::new(), &b, 1e-9).unwrap();
        assert_eq!(zero.norm_sq, 0.0);
        assert!(unseparated_pairs(&g1, &b, &deg(&[1])).is_empty());
    }
}
