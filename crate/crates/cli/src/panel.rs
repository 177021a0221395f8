//! Seeds, bases and random generator combinations shared by the commands
//! and the acceptance suite.

use kgraph::cycline::{source_matched_pairs, CyclineEngine};
use kgraph::infinite::{
    default_regularity_bound, enumerate_ep, ep_equal, is_regular, EpPath, RegularityStatus,
};
use kgraph::model::{BasisPolicy, BasisSet, GeneratorCombo, ModelError, C64};
use kgraph::{Degree, KGraph, Path};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two seed paths: the first two distinct regular paths with head and cycle
/// of degree at most `(1,…,1)` and `(2,…,2)`. Graphs with a single such
/// point get it twice, through different representations. Graphs with none
/// fall back to the ambient policy.
pub fn default_seeds(engine: &CyclineEngine<'_>) -> (Vec<EpPath>, BasisPolicy) {
    let g = engine.graph();
    let candidates = enumerate_ep(g, &Degree::uniform(g.k(), 1), &Degree::uniform(g.k(), 2));
    let regular: Vec<EpPath> = candidates
        .iter()
        .filter(|x| {
            is_regular(engine, x, &default_regularity_bound(x)).status == RegularityStatus::Regular
        })
        .cloned()
        .collect();
    let (pool, policy) = if regular.is_empty() {
        (candidates, BasisPolicy::Ambient)
    } else {
        (regular, BasisPolicy::Regular)
    };
    let mut seeds: Vec<EpPath> = Vec::new();
    for x in &pool {
        if seeds.len() < 2 && seeds.iter().all(|s| !ep_equal(g, s, x)) {
            seeds.push(x.clone());
        }
    }
    if seeds.len() == 1 {
        // Same point, unrolled once.
        let x = &seeds[0];
        let again = EpPath::new(
            g.compose(x.head(), x.cycle())
                .expect("closed at head source"),
            x.cycle().clone(),
        )
        .expect("valid");
        seeds.push(again);
    }
    (seeds, policy)
}

pub fn default_basis(
    engine: &CyclineEngine<'_>,
    prepend: u32,
) -> Result<(Vec<EpPath>, BasisSet), ModelError> {
    let (seeds, policy) = default_seeds(engine);
    let g = engine.graph();
    let b = BasisSet::build(engine, &seeds, &Degree::uniform(g.k(), prepend), policy)?;
    Ok((seeds, b))
}

/// Members of the basis reachable from the seeds by shifting.
pub fn core_members(g: &KGraph, seeds: &[EpPath], b: &BasisSet) -> Vec<usize> {
    let mut out: Vec<usize> = (0..b.len())
        .filter(|&i| {
            let x = b.member(i);
            seeds.iter().any(|s| {
                let span = s.head().degree().add(s.cycle().degree());
                span.all_below()
                    .iter()
                    .any(|n| ep_equal(g, &kgraph::infinite::shift(g, s, n), x))
            })
        })
        .collect();
    out.sort_unstable();
    out
}

/// A small Gaussian integer, not zero.
fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    loop {
        let re = rng.gen_range(-2i32..=2);
        let im = rng.gen_range(-2i32..=2);
        if re != 0 || im != 0 {
            return C64::new(re as f64, im as f64);
        }
    }
}

/// Seeded panel of `count` combinations of `terms` standard generators
/// `S_αS_β*` with `d(α), d(β) ≤ term_bound`.
pub fn random_combos(
    g: &KGraph,
    seed: u64,
    count: usize,
    terms: usize,
    term_bound: u32,
) -> Vec<GeneratorCombo> {
    let pairs: Vec<(Path, Path)> = source_matched_pairs(g, &Degree::uniform(g.k(), term_bound))
        .into_iter()
        .map(|p| (p.alpha, p.beta))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut c = GeneratorCombo::new();
            for _ in 0..terms {
                let (a, b) = pairs
                    .choose(&mut rng)
                    .expect("graphs without sources have pairs");
                c.add_term(a, b, gaussian(&mut rng))
                    .expect("source matched");
            }
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use kgraph::corpus;

    #[test]
    fn seeds_and_policies() {
        for (name, g) in corpus::standard() {
            let engine = CyclineEngine::new(&g);
            let (seeds, policy) = default_seeds(&engine);
            assert_eq!(seeds.len(), 2, "{name}");
            let expected = if name == "G2" {
                BasisPolicy::Ambient
            } else {
                BasisPolicy::Regular
            };
            assert_eq!(policy, expected, "{name}");
        }
    }

    #[test]
    fn panels_are_seeded() {
        let g = corpus::t2();
        let a = random_combos(&g, 7, 5, 3, 1);
        let b = random_combos(&g, 7, 5, 3, 1);
        let c = random_combos(&g, 8, 5, 3, 1);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.iter().all(|c| !c.is_empty()));
    }
}
