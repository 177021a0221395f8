//! Small built-in graphs used by tests, examples and the experiment pipeline.

use crate::graph::KGraph;
use crate::skeleton::Skeleton;

/// One vertex `v`, one loop `e`.
pub fn g1_skeleton() -> Skeleton {
    Skeleton::new(1).vertex("v").edge("e", 1, "v", "v")
}

/// A loop `c` at `v` with an entry `f: w → v`, and a loop `g` at `w`.
pub fn g1e_skeleton() -> Skeleton {
    Skeleton::new(1)
        .vertex("v")
        .vertex("w")
        .edge("c", 1, "v", "v")
        .edge("f", 1, "w", "v")
        .edge("g", 1, "w", "w")
}

/// One vertex `v`, two loops `a` and `b`.
pub fn g2_skeleton() -> Skeleton {
    Skeleton::new(1)
        .vertex("v")
        .edge("a", 1, "v", "v")
        .edge("b", 1, "v", "v")
}

/// One vertex, a blue loop `b` and a red loop `r` with `br = rb`.
pub fn t2_skeleton() -> Skeleton {
    Skeleton::new(2)
        .vertex("v")
        .edge("b", 1, "v", "v")
        .edge("r", 2, "v", "v")
        .square("b", "r", "r", "b")
}

/// The cycle `v ⇄ w`: `e1: w → v`, `e2: v → w`.
pub fn c2_skeleton() -> Skeleton {
    Skeleton::new(1)
        .vertex("v")
        .vertex("w")
        .edge("e1", 1, "w", "v")
        .edge("e2", 1, "v", "w")
}

/// One vertex, a blue loop `e` and red loops `a`, `b` with `ea = be` and
/// `eb = ae`.
pub fn tw_skeleton() -> Skeleton {
    Skeleton::new(2)
        .vertex("v")
        .edge("e", 1, "v", "v")
        .edge("a", 2, "v", "v")
        .edge("b", 2, "v", "v")
        .square("e", "a", "b", "e")
        .square("e", "b", "a", "e")
}

/// One vertex with two loops of each of three colors. Colors 1 and 2 are
/// twisted by `a_i b_j = b_j a_{i+j}`. When `consistent` is false, colors 2
/// and 3 are twisted the same way and the hexagon condition fails.
pub fn twisted_cube_skeleton(consistent: bool) -> Skeleton {
    let mut sk = Skeleton::new(3).vertex("v");
    for (c, p) in [(1, "a"), (2, "b"), (3, "c")] {
        for i in 0..2 {
            sk = sk.edge(&format!("{p}{i}"), c, "v", "v");
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            sk = sk.square(
                &format!("a{i}"),
                &format!("b{j}"),
                &format!("b{j}"),
                &format!("a{}", i ^ j),
            );
            sk = sk.square(
                &format!("a{i}"),
                &format!("c{j}"),
                &format!("c{j}"),
                &format!("a{i}"),
            );
            let twisted = if consistent { i } else { i ^ j };
            sk = sk.square(
                &format!("b{i}"),
                &format!("c{j}"),
                &format!("c{j}"),
                &format!("b{twisted}"),
            );
        }
    }
    sk
}

fn build(sk: Skeleton) -> KGraph {
    KGraph::validate(&sk).expect("built-in graph is valid")
}

pub fn g1() -> KGraph {
    build(g1_skeleton())
}

pub fn g1e() -> KGraph {
    build(g1e_skeleton())
}

pub fn g2() -> KGraph {
    build(g2_skeleton())
}

pub fn t2() -> KGraph {
    build(t2_skeleton())
}

pub fn c2() -> KGraph {
    build(c2_skeleton())
}

pub fn tw() -> KGraph {
    build(tw_skeleton())
}

/// `f*E` for a built-in 1-graph.
pub fn pullback(base: &KGraph, f: &[u32]) -> KGraph {
    base.pullback(f).expect("pullback of a valid 1-graph")
}

/// The named corpus: G1, G1e, G2, T2, C2 and the four pullbacks of G1 and C2
/// along (1,1) and (1,2).
pub fn standard() -> Vec<(String, KGraph)> {
    let mut out = vec![
        ("G1".to_string(), g1()),
        ("G1e".to_string(), g1e()),
        ("G2".to_string(), g2()),
        ("T2".to_string(), t2()),
        ("C2".to_string(), c2()),
    ];
    for (name, base) in [("G1", g1()), ("C2", c2())] {
        for f in [[1u32, 1], [1, 2]] {
            out.push((format!("P1-{name}-{}{}", f[0], f[1]), pullback(&base, &f)));
        }
    }
    out
}

/// Looks up a corpus graph by name (case-insensitive), including `TW`.
pub fn by_name(name: &str) -> Option<KGraph> {
    if name.eq_ignore_ascii_case("TW") {
        return Some(tw());
    }
    standard()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, g)| g)
}
