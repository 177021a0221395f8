use kgraph::corpus;
use kgraph::cycline::{CyclineEngine, PairCandidate};
use kgraph::infinite::{
    default_regularity_bound, enumerate_ep, ep_equal, in_f, is_regular, onegraph_regular_oracle,
    prefix, prepend, raw_shift, regular_in_cylinder, shift, EpPath, RegularityStatus,
};
use kgraph::{Degree, KGraph};

fn deg(v: &[u32]) -> Degree {
    Degree::new(v.to_vec())
}

/// Prefix comparison at `depth·(1,…,1)`; exact once depth passes both
/// representations' heads plus two cycles.
fn prefixes_agree(g: &KGraph, x: &EpPath, y: &EpPath, depth: u32) -> bool {
    let n = Degree::uniform(g.k(), depth);
    prefix(g, x, &n) == prefix(g, y, &n)
}

#[test]
fn onegraph_regularity_matches_entry_criterion() {
    for (name, g) in corpus::standard() {
        if g.k() != 1 {
            continue;
        }
        let engine = CyclineEngine::new(&g);
        for x in enumerate_ep(&g, &deg(&[3]), &deg(&[3])) {
            let v = is_regular(&engine, &x, &default_regularity_bound(&x));
            assert_ne!(
                v.status,
                RegularityStatus::Unknown,
                "{name} {}",
                x.label(&g)
            );
            assert_eq!(
                v.status == RegularityStatus::Regular,
                onegraph_regular_oracle(&g, &x).unwrap(),
                "{name} {}",
                x.label(&g)
            );
        }
    }
}

#[test]
fn equality_agrees_with_long_prefixes() {
    for (name, g) in corpus::standard() {
        let paths = enumerate_ep(&g, &Degree::uniform(g.k(), 1), &Degree::uniform(g.k(), 2));
        for x in &paths {
            for y in &paths {
                assert_eq!(
                    ep_equal(&g, x, y),
                    prefixes_agree(&g, x, y, 8),
                    "{name}: {} vs {}",
                    x.label(&g),
                    y.label(&g)
                );
            }
        }
    }
}

#[test]
fn membership_in_f_agrees_with_prefix_oracle() {
    let g2 = corpus::g2();
    for x in enumerate_ep(&g2, &deg(&[2]), &deg(&[2])) {
        for p in kgraph::cycline::source_matched_pairs(&g2, &deg(&[2])) {
            if p.is_trivial() {
                continue;
            }
            let expected = prefix(&g2, &x, p.alpha.degree()) == p.alpha
                && prefix(&g2, &x, p.beta.degree()) == p.beta
                && prefixes_agree(
                    &g2,
                    &raw_shift(&g2, &x, p.alpha.degree()),
                    &raw_shift(&g2, &x, p.beta.degree()),
                    8,
                );
            assert_eq!(in_f(&g2, &x, &p), expected);
            assert_eq!(in_f(&g2, &x, &p), in_f(&g2, &x, &p.swapped()));
        }
    }
}

#[test]
fn regular_set_is_shift_and_prepend_invariant() {
    for (name, g) in corpus::standard() {
        let engine = CyclineEngine::new(&g);
        let verdict = |x: &EpPath| is_regular(&engine, x, &default_regularity_bound(x)).status;
        for x in enumerate_ep(&g, &Degree::uniform(g.k(), 1), &Degree::uniform(g.k(), 1)) {
            if verdict(&x) != RegularityStatus::Regular {
                continue;
            }
            for n in Degree::uniform(g.k(), 2).all_below() {
                assert_eq!(
                    verdict(&shift(&g, &x, &n)),
                    RegularityStatus::Regular,
                    "{name}"
                );
            }
            for nu in g.paths_into_upto(&Degree::uniform(g.k(), 2), x.range()) {
                let y = prepend(&g, &nu, &x).unwrap();
                assert_eq!(verdict(&y), RegularityStatus::Regular, "{name}");
                assert!(ep_equal(&g, &shift(&g, &y, nu.degree()), &x));
            }
        }
    }
}

#[test]
fn loop_with_entry_examples() {
    let g = corpus::g1e();
    let engine = CyclineEngine::new(&g);
    let c = g.path_from_names(&["c"]).unwrap();
    let x = EpPath::new(g.vertex(0), c.clone()).unwrap();
    let v = is_regular(&engine, &x, &default_regularity_bound(&x));
    assert_eq!(v.status, RegularityStatus::NotRegular);
    assert!(v
        .witnesses
        .iter()
        .any(|w| !w.interior && w.refutation.is_some()));
    let p = PairCandidate::new(g.vertex(0), c).unwrap();
    assert!(in_f(&g, &x, &p));
}

#[test]
fn regular_paths_in_small_cylinders() {
    for name in ["G1", "G1e", "T2", "C2", "P1-G1-12", "P1-C2-11"] {
        let g = corpus::by_name(name).unwrap();
        let engine = CyclineEngine::new(&g);
        let b = Degree::uniform(g.k(), 1);
        for v in g.vertices() {
            for mu in g.paths_from_upto(v, &b) {
                let x = regular_in_cylinder(
                    &engine,
                    &mu,
                    &Degree::uniform(g.k(), 2),
                    &Degree::uniform(g.k(), 2),
                )
                .unwrap_or_else(|| panic!("{name}: nothing regular in Z({})", g.label(&mu)));
                assert_eq!(prefix(&g, &x, mu.degree()), mu);
            }
        }
    }
}
