use std::sync::OnceLock;

use kgraph::corpus;
use kgraph::cycline::{cycline_bruteforce, CyclineEngine, PairCandidate};
use kgraph::infinite::{
    default_regularity_bound, ep_equal, in_f, is_regular, prefix, prepend, shift, EpPath,
    RegularityStatus,
};
use kgraph::model::{
    eval_big_upsilon, eval_upsilon, eval_upsilon_partial, gauge_rotate, op_t, op_tstar,
    BasisPolicy, BasisSet, GeneratorCombo, C64,
};
use kgraph::states::{compute_hx, phi_eval, psi_eval, unit_z, HxVariant, StateSpec};
use kgraph::{Degree, KGraph, Path};
use proptest::prelude::*;

fn pool() -> &'static Vec<KGraph> {
    static POOL: OnceLock<Vec<KGraph>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out: Vec<KGraph> = corpus::standard().into_iter().map(|(_, g)| g).collect();
        out.push(corpus::tw());
        out.push(KGraph::validate(&corpus::twisted_cube_skeleton(true)).unwrap());
        out
    })
}

/// A path of degree at most `coords` (truncated to rank) picked by `seed`.
fn pick_from(g: &KGraph, v: usize, coords: &[u32], seed: usize) -> Path {
    let d = Degree::new((0..g.k()).map(|i| coords[i % coords.len()]).collect());
    let all = g.paths_from(v, &d);
    all[seed % all.len()].clone()
}

fn pick_into(g: &KGraph, w: usize, coords: &[u32], seed: usize) -> Path {
    let d = Degree::new((0..g.k()).map(|i| coords[i % coords.len()]).collect());
    let all = g.paths_into(&d, w);
    all[seed % all.len()].clone()
}

fn degree_strategy() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..3, 3)
}

/// A regular path built from a short head and cycle, if one exists nearby.
fn regular_point(g: &KGraph, engine: &CyclineEngine<'_>, v: usize, seed: usize) -> Option<EpPath> {
    let mu = pick_from(g, v, &[1], seed);
    kgraph::infinite::regular_in_cylinder(
        engine,
        &mu,
        &Degree::uniform(g.k(), 1),
        &Degree::uniform(g.k(), 2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_adds_degrees_and_associates(
        gi in 0usize..11, v in 0usize..4, d1 in degree_strategy(), d2 in degree_strategy(),
        d3 in degree_strategy(), s1 in any::<usize>(), s2 in any::<usize>(), s3 in any::<usize>()
    ) {
        let g = &pool()[gi % pool().len()];
        let v = v % g.num_vertices();
        let p = pick_from(g, v, &d1, s1);
        let q = pick_from(g, p.source(), &d2, s2);
        let r = pick_from(g, q.source(), &d3, s3);
        let pq = g.compose(&p, &q).unwrap();
        prop_assert_eq!(pq.degree(), &p.degree().add(q.degree()));
        prop_assert_eq!(
            g.compose(&pq, &r).unwrap(),
            g.compose(&p, &g.compose(&q, &r).unwrap()).unwrap()
        );
    }

    #[test]
    fn factorization_round_trips(
        gi in 0usize..11, v in 0usize..4, d in degree_strategy(), m in degree_strategy(), s in any::<usize>()
    ) {
        let g = &pool()[gi % pool().len()];
        let lam = pick_from(g, v % g.num_vertices(), &d, s);
        let m = Degree::new((0..g.k()).map(|i| m[i].min(lam.degree().get(i))).collect());
        let (mu, nu) = g.factorize(&lam, &m).unwrap();
        prop_assert_eq!(mu.degree(), &m);
        prop_assert_eq!(g.compose(&mu, &nu).unwrap(), lam.clone());
        // Factorizing a composite recovers its factors.
        prop_assert_eq!(g.factorize(&g.compose(&mu, &nu).unwrap(), &m).unwrap(), (mu, nu));
    }

    #[test]
    fn segments_compose(
        gi in 0usize..11, v in 0usize..4, d in degree_strategy(), a in degree_strategy(),
        b in degree_strategy(), s in any::<usize>()
    ) {
        let g = &pool()[gi % pool().len()];
        let lam = pick_from(g, v % g.num_vertices(), &d, s);
        let top = lam.degree();
        let m = Degree::new((0..g.k()).map(|i| a[i].min(top.get(i))).collect());
        let n = m.join(&Degree::new((0..g.k()).map(|i| b[i].min(top.get(i))).collect()));
        let left = g.segment(&lam, &Degree::zero(g.k()), &m).unwrap();
        let mid = g.segment(&lam, &m, &n).unwrap();
        let right = g.segment(&lam, &n, top).unwrap();
        prop_assert_eq!(g.compose(&g.compose(&left, &mid).unwrap(), &right).unwrap(), lam);
    }

    #[test]
    fn pullbacks_are_valid_and_project_degrees(
        which in 0usize..3, f in prop::collection::vec(0u32..3, 1..3), d in degree_strategy(), s in any::<usize>()
    ) {
        prop_assume!(f.iter().any(|&x| x > 0));
        let base = [corpus::g1(), corpus::c2(), corpus::g1e()][which].clone();
        let g = base.pullback(&f).unwrap();
        let lam = pick_from(&g, 0, &d, s);
        let image = g.p1_project(&lam).unwrap();
        prop_assert_eq!(image.degree(), &g.pullback_degree(lam.degree()).unwrap());
        prop_assert_eq!(image.range(), lam.range());
    }

    #[test]
    fn cycline_is_symmetric_and_matches_bruteforce_refutations(
        gi in 0usize..11, w in 0usize..4, d1 in degree_strategy(), d2 in degree_strategy(),
        s1 in any::<usize>(), s2 in any::<usize>()
    ) {
        let g = &pool()[gi % pool().len()];
        let w = w % g.num_vertices();
        let p = PairCandidate::new(pick_into(g, w, &d1, s1), pick_into(g, w, &d2, s2)).unwrap();
        let engine = CyclineEngine::new(g);
        let decided = engine.decide(&p);
        prop_assert_eq!(decided, engine.decide(&p.swapped()));
        if !cycline_bruteforce(g, &p, &Degree::uniform(g.k(), 3)) {
            prop_assert!(!decided);
        }
    }

    #[test]
    fn gfp_refinement_strictly_decreases(gi in 0usize..11, c in prop::collection::vec(-2i64..3, 3)) {
        let g = &pool()[gi % pool().len()];
        let c = kgraph::Offset::new(c[..g.k()].to_vec());
        let t = kgraph::cycline::GfpTable::build(g, &c);
        prop_assert!(t.alive_history.windows(2).all(|w| w[0] > w[1]));
        prop_assert!(t.rounds() <= t.state_space().max(1));
    }

    #[test]
    fn shifts_undo_prepends_and_f_is_symmetric(
        gi in 0usize..11, v in 0usize..4, s in any::<usize>(), d in degree_strategy(), s2 in any::<usize>()
    ) {
        let g = &pool()[gi % pool().len()];
        let v = v % g.num_vertices();
        let c = pick_from(g, v, &[1], s);
        let cycle_deg = Degree::uniform(g.k(), 1);
        let Some(cyc) = kgraph::infinite::cycles_at(g, c.source(), &cycle_deg).into_iter().next() else {
            return Ok(());
        };
        let x = EpPath::new(c.clone(), cyc).unwrap();
        let nu = pick_into(g, x.range(), &d, s2);
        let y = prepend(g, &nu, &x).unwrap();
        prop_assert!(ep_equal(g, &shift(g, &y, nu.degree()), &x));
        let p = PairCandidate::new(prefix(g, &y, nu.degree()), prefix(g, &y, &Degree::zero(g.k()))).ok();
        if let Some(p) = p.filter(|p| !p.is_trivial()) {
            prop_assert_eq!(in_f(g, &y, &p), in_f(g, &y, &p.swapped()));
        }
    }
}

struct Fixture {
    graph: usize,
    basis: BasisSet,
    x: EpPath,
}

fn fixtures() -> &'static Vec<Fixture> {
    static FIX: OnceLock<Vec<Fixture>> = OnceLock::new();
    FIX.get_or_init(|| {
        let mut out = Vec::new();
        // Regular-path search in rank 3 is too slow for a fixture.
        for (gi, g) in pool().iter().enumerate().filter(|(_, g)| g.k() <= 2) {
            let engine = CyclineEngine::new(g);
            let Some(x) = (0..4).find_map(|s| regular_point(g, &engine, 0, s)) else {
                continue;
            };
            let basis = BasisSet::build(
                &engine,
                std::slice::from_ref(&x),
                &Degree::uniform(g.k(), 1),
                BasisPolicy::Regular,
            )
            .unwrap();
            out.push(Fixture {
                graph: gi,
                basis,
                x,
            });
        }
        out
    })
}

fn random_combo(g: &KGraph, seeds: &[(usize, usize, usize, i8, i8)]) -> GeneratorCombo {
    let mut c = GeneratorCombo::new();
    for &(w, sa, sb, re, im) in seeds {
        let w = w % g.num_vertices();
        let a = pick_into(g, w, &[(sa % 2) as u32, (sa / 2 % 2) as u32], sa);
        let b = pick_into(g, w, &[(sb % 2) as u32, (sb / 2 % 2) as u32], sb);
        c.add_term(&a, &b, C64::new(re as f64, im as f64)).unwrap();
    }
    c
}

fn combo_seeds() -> impl Strategy<Value = Vec<(usize, usize, usize, i8, i8)>> {
    prop::collection::vec((0usize..4, 0usize..64, 0usize..64, -2i8..3, -2i8..3), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_are_partial_isometries(fi in 0usize..16, v in 0usize..4, d in degree_strategy(), s in any::<usize>()) {
        let f = &fixtures()[fi % fixtures().len()];
        let g = &pool()[f.graph];
        let a = pick_from(g, v % g.num_vertices(), &d, s);
        let t = op_t(g, &a, &f.basis);
        let ts = op_tstar(g, &a, &f.basis);
        let ttt = t.mul(&ts).mul(&t);
        let diffs = ttt.differences(&t, 0.0, |c| f.basis.is_safe(c) && !t.overflow().contains(&c));
        prop_assert!(diffs.is_empty());
        prop_assert_eq!(t.adjoint().differences(&ts, 0.0, |_| true).into_iter()
            .filter(|&(r, _)| !t.overflow().contains(&r)).count(), 0);
    }

    #[test]
    fn upsilon_is_multiplicative_where_defined(fi in 0usize..16, s1 in combo_seeds(), s2 in combo_seeds()) {
        let f = &fixtures()[fi % fixtures().len()];
        let g = &pool()[f.graph];
        let c1 = random_combo(g, &s1);
        let c2 = random_combo(g, &s2);
        let (m1, u1) = eval_upsilon_partial(g, &c1, &f.basis);
        let (m2, u2) = eval_upsilon_partial(g, &c2, &f.basis);
        let (m12, u12) = eval_upsilon_partial(g, &c1.mul(g, &c2), &f.basis);
        let prod = m1.mul(&m2);
        // Columns where every factor stays inside the basis.
        let ok = |c: usize| {
            !u2.contains(&c) && !u12.contains(&c)
                && m2.column(c).keys().all(|r| !u1.contains(r))
        };
        let diffs = prod.differences(&m12, 1e-9, ok);
        prop_assert!(diffs.is_empty(), "{:?}", diffs);
    }

    #[test]
    fn gauge_action_scales_components(fi in 0usize..16, s in combo_seeds(), t in prop::collection::vec(0u32..8, 3)) {
        let f = &fixtures()[fi % fixtures().len()];
        let g = &pool()[f.graph];
        let c = random_combo(g, &s);
        let z: Vec<C64> = (0..g.k()).map(|i| C64::from_polar(1.0, std::f64::consts::PI * t[i] as f64 / 4.0)).collect();
        let (Ok(big), Ok(rot)) = (eval_big_upsilon(g, &c, &f.basis), eval_big_upsilon(g, &gauge_rotate(&c, &z), &f.basis)) else {
            return Ok(());
        };
        for (n, a) in big.components() {
            let h = kgraph::model::character(n, &z);
            let other = rot.component(n).cloned().unwrap_or_else(|| kgraph::model::SparseOp::zero(f.basis.len()));
            prop_assert!(a.scale(h).differences(&other, 1e-9, |_| true).is_empty());
        }
    }

    #[test]
    fn psi_restricts_to_phi_and_matches_graded_model(fi in 0usize..16, s in combo_seeds(), t in prop::collection::vec(0u32..8, 3)) {
        let f = &fixtures()[fi % fixtures().len()];
        let g = &pool()[f.graph];
        let z: Vec<C64> = (0..g.k()).map(|i| C64::from_polar(1.0, std::f64::consts::PI * t[i] as f64 / 4.0)).collect();
        let state = StateSpec::new(g, z.clone(), f.x.clone()).unwrap();
        let c = random_combo(g, &s);
        let mut diag = GeneratorCombo::new();
        for (a, b, coeff) in c.terms() {
            if a == b {
                diag.add_term(a, b, coeff).unwrap();
            }
        }
        prop_assert!((psi_eval(g, &state, &diag) - phi_eval(g, &f.x, &diag)).norm() < 1e-9);
        let unit = StateSpec::new(g, unit_z(g.k()), f.x.clone()).unwrap();
        prop_assert_eq!(psi_eval(g, &unit, &c), phi_eval(g, &f.x, &c));
        let i = f.basis.find(g, &f.x).unwrap();
        if let Ok(big) = eval_big_upsilon(g, &c, &f.basis) {
            let at = big.at(&z, f.basis.len());
            prop_assert!((at.get(i, i) - psi_eval(g, &state, &c)).norm() < 1e-9);
        }
    }

    #[test]
    fn nonzero_combos_are_seen_by_some_vector_state(fi in 0usize..16, s in combo_seeds()) {
        let f = &fixtures()[fi % fixtures().len()];
        let g = &pool()[f.graph];
        let c = random_combo(g, &s);
        let Ok(m) = eval_upsilon(g, &c, &f.basis) else { return Ok(()); };
        if m.is_zero() {
            return Ok(());
        }
        let seen = (0..f.basis.len()).any(|i| {
            let x = f.basis.member(i);
            kgraph::states::positivity_check(g, x, &c, &f.basis, 1e-9)
                .map(|r| r.norm_sq > 1e-9)
                .unwrap_or(false)
        });
        prop_assert!(seen);
    }
}

#[test]
fn h_variants_agree_and_basis_members_are_separated() {
    for f in fixtures() {
        let g = &pool()[f.graph];
        let engine = CyclineEngine::new(g);
        let bound = Degree::uniform(g.k(), 2);
        let h = compute_hx(&engine, &f.x, &bound, HxVariant::H, None);
        assert_eq!(
            compute_hx(&engine, &f.x, &bound, HxVariant::Hc, None).diffs,
            h.diffs
        );
        assert_eq!(
            compute_hx(&engine, &f.x, &bound, HxVariant::Hs, Some(&f.basis)).diffs,
            h.diffs
        );
        assert!(h.diffs.iter().all(|c| h.diffs.contains(&c.negate())));
        assert!(
            kgraph::states::unseparated_pairs(g, &f.basis, &Degree::uniform(g.k(), 4)).is_empty()
        );
        for m in f.basis.members() {
            assert_eq!(
                is_regular(&engine, m, &default_regularity_bound(m)).status,
                RegularityStatus::Regular
            );
        }
    }
}
