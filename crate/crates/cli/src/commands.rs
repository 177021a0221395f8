//! One function per subcommand. Each returns a JSON report and whether it
//! found a property violation.

use std::collections::BTreeMap;
use std::fs;

use anyhow::{Context, Result};
use kgraph::cycline::{
    cycline_bruteforce, enumerate_cycline, onegraph_cycline_oracle, per_group,
    source_matched_pairs, CyclineEngine, PairCandidate, PairReport,
};
use kgraph::infinite::{
    default_regularity_bound, enumerate_ep, is_regular, onegraph_regular_oracle, prefix, EpPath,
    RegularityStatus,
};
use kgraph::model::{
    commutant_check, cycline_images_commute, eval_big_upsilon, eval_upsilon_partial, kernel_probe,
    op_q, special_test, verify_ck, BasisPolicy, BasisSet, GeneratorCombo, C64,
};
use kgraph::states::{
    compute_hx, e_eval, phi_eval, positivity_check, psi_eval, states_equiv, unit_z, EquivPanel,
    HxVariant, StateSpec,
};
use kgraph::{Degree, KGraph, Path};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{self, load_graph, load_valid, uniform, Command, Loaded, RunConfig};
use crate::panel;

pub struct Outcome {
    pub report: Value,
    pub violation: bool,
}

impl Outcome {
    fn new(cfg: &RunConfig, result: Value, violation: bool) -> Outcome {
        Outcome {
            report: json!({
                "schema": 1,
                "config": cfg,
                "result": result,
                "violation": violation,
            }),
            violation,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Validate => cmd_validate(cfg),
        Command::Paths => cmd_paths(cfg),
        Command::Cycline => cmd_cycline(cfg),
        Command::Per => cmd_per(cfg),
        Command::Regular => cmd_regular(cfg),
        Command::Model => cmd_model(cfg),
        Command::States => cmd_states(cfg),
        Command::Uniqueness => cmd_uniqueness(cfg),
    }
}

fn c64(v: C64) -> Value {
    json!([v.re, v.im])
}

fn pair_names(g: &KGraph, p: &PairCandidate) -> Value {
    json!([g.names(&p.alpha), g.names(&p.beta)])
}

pub fn cmd_validate(cfg: &RunConfig) -> Result<Outcome> {
    let g = match load_graph(cfg)? {
        Loaded::Invalid(e) => {
            let result = json!({"valid": false, "violations": e.violations()});
            return Ok(Outcome::new(cfg, result, true));
        }
        Loaded::Graph(g) => g,
    };
    let counts: BTreeMap<String, usize> = uniform(&g, cfg.bound)
        .all_below()
        .iter()
        .map(|n| (n.to_string(), g.paths_of_degree(n).len()))
        .collect();
    let result = json!({
        "valid": true,
        "k": g.k(),
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "squares": g.skeleton().squares.len(),
        "paths_by_degree": counts,
    });
    Ok(Outcome::new(cfg, result, false))
}

pub fn cmd_paths(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let mut by_degree = BTreeMap::new();
    let mut failures = Vec::new();
    for n in uniform(&g, cfg.bound).all_below() {
        let paths = g.paths_of_degree(&n);
        for lam in &paths {
            for m in n.all_below() {
                let (mu, nu) = g.factorize(lam, &m)?;
                if g.compose(&mu, &nu)? != *lam || mu.degree() != &m {
                    failures.push(json!({"path": g.names(lam), "at": m.to_string()}));
                }
            }
        }
        by_degree.insert(
            n.to_string(),
            json!({"total": paths.len(), "by_range": g.path_counts(&n)}),
        );
    }
    let mut result = json!({
        "paths": by_degree,
        "factorization_failures": failures,
    });
    if let Some(lit) = &cfg.path {
        let x = config::parse_path(&g, lit)?;
        let prefixes: BTreeMap<String, Vec<String>> = uniform(&g, cfg.bound)
            .all_below()
            .iter()
            .map(|n| (n.to_string(), g.names(&prefix(&g, &x, n))))
            .collect();
        result["prefixes"] = json!(prefixes);
    }
    let violation = !failures.is_empty();
    Ok(Outcome::new(cfg, result, violation))
}

/// Exact oracle where one exists: the 1-graph criterion, on the graph or
/// on the projection of a pullback.
fn exact_oracle(g: &KGraph, p: &PairCandidate) -> Option<bool> {
    if g.k() == 1 {
        return onegraph_cycline_oracle(g, p).ok();
    }
    let pb = g.pullback_data()?;
    let q = PairCandidate::new(g.p1_project(&p.alpha).ok()?, g.p1_project(&p.beta).ok()?).ok()?;
    onegraph_cycline_oracle(&pb.base, &q).ok()
}

pub struct CyclineCheck {
    pub pair: PairCandidate,
    pub decided: bool,
    pub rounds: usize,
    pub brute: bool,
    pub exact: Option<bool>,
}

impl CyclineCheck {
    /// Brute force only refutes; the exact oracle must match outright.
    pub fn agrees(&self) -> bool {
        (self.brute || !self.decided) && self.exact.is_none_or(|o| o == self.decided)
    }
}

pub fn cycline_checks(
    engine: &CyclineEngine<'_>,
    bound: &Degree,
    depth: &Degree,
) -> Vec<CyclineCheck> {
    let g = engine.graph();
    source_matched_pairs(g, bound)
        .into_par_iter()
        .map(|pair| {
            let decided = engine.decide(&pair);
            CyclineCheck {
                rounds: engine.rounds_for(&pair),
                brute: cycline_bruteforce(g, &pair, depth),
                exact: exact_oracle(g, &pair),
                decided,
                pair,
            }
        })
        .collect()
}

fn per_report(g: &KGraph, engine: &CyclineEngine<'_>, bound: &Degree) -> (Value, bool) {
    let per = per_group(engine, bound);
    let witnesses: BTreeMap<String, Value> = per
        .witnesses
        .iter()
        .map(|(c, p)| (c.to_string(), pair_names(g, p)))
        .collect();
    let violations: Vec<[String; 2]> = per
        .closure_violations
        .iter()
        .map(|(a, b)| [a.to_string(), b.to_string()])
        .collect();
    let violation = per.connected && !violations.is_empty();
    (
        json!({
            "elements": per.elements.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "witnesses": witnesses,
            "connected": per.connected,
            "closure_violations": violations,
        }),
        violation,
    )
}

pub fn cmd_cycline(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let checks = cycline_checks(&engine, &uniform(&g, cfg.bound), &uniform(&g, cfg.depth));
    let to_report = |c: &CyclineCheck| PairReport {
        pair: [g.names(&c.pair.alpha), g.names(&c.pair.beta)],
        decided: c.decided,
        gfp_rounds: c.rounds,
        oracle_agrees: c.agrees(),
    };
    let cycline: Vec<PairReport> = checks
        .iter()
        .filter(|c| c.decided && !c.pair.is_trivial())
        .map(to_report)
        .collect();
    let disagreements: Vec<PairReport> = checks
        .iter()
        .filter(|c| !c.agrees())
        .map(to_report)
        .collect();
    let (per, per_violation) = per_report(&g, &engine, &uniform(&g, cfg.bound));
    let mut result = json!({
        "pairs_checked": checks.len(),
        "cycline_pairs": cycline,
        "only_trivial_pairs": cycline.is_empty(),
        "oracle": if g.k() == 1 { "one-graph" } else if g.pullback_data().is_some() { "projection" } else { "brute-force" },
        "oracle_disagreements": disagreements,
        "per": per,
    });
    if g.pullback_data().is_some() {
        result["p1_consistent"] = json!(disagreements.is_empty());
    }
    let violation = !disagreements.is_empty() || per_violation;
    Ok(Outcome::new(cfg, result, violation))
}

pub fn cmd_per(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let (per, violation) = per_report(&g, &engine, &uniform(&g, cfg.bound));
    Ok(Outcome::new(cfg, per, violation))
}

fn status_name(s: RegularityStatus) -> &'static str {
    match s {
        RegularityStatus::Regular => "Regular",
        RegularityStatus::NotRegular => "NotRegular",
        RegularityStatus::Unknown => "Unknown",
    }
}

fn regularity_entry(g: &KGraph, engine: &CyclineEngine<'_>, x: &EpPath) -> (Value, bool) {
    let v = is_regular(engine, x, &default_regularity_bound(x));
    let witnesses: Vec<Value> = v
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "p": w.p.to_string(),
                "q": w.q.to_string(),
                "interior": w.interior,
                "cylinder": w.n.as_ref().map(|n| n.to_string()),
                "refutation": w.refutation.as_ref().map(|r| g.names(r)),
            })
        })
        .collect();
    let oracle = onegraph_regular_oracle(g, x).ok();
    let disagrees = v.status != RegularityStatus::Unknown
        && oracle.is_some_and(|o| o != (v.status == RegularityStatus::Regular));
    (
        json!({
            "path": x.to_literal(g),
            "label": x.label(g),
            "status": status_name(v.status),
            "witnesses": witnesses,
            "oracle": oracle,
        }),
        disagrees,
    )
}

pub fn cmd_regular(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let paths = match &cfg.path {
        Some(lit) => vec![config::parse_path(&g, lit)?],
        None => enumerate_ep(&g, &uniform(&g, cfg.bound), &uniform(&g, cfg.bound)),
    };
    let entries: Vec<(Value, bool)> = paths
        .par_iter()
        .map(|x| regularity_entry(&g, &engine, x))
        .collect();
    let violation = entries.iter().any(|(_, d)| *d);
    let mut counts = BTreeMap::new();
    for (e, _) in &entries {
        *counts
            .entry(e["status"].as_str().unwrap_or("").to_string())
            .or_insert(0usize) += 1;
    }
    let result = json!({
        "paths": entries.into_iter().map(|(e, _)| e).collect::<Vec<_>>(),
        "counts": counts,
    });
    Ok(Outcome::new(cfg, result, violation))
}

fn basis_for(
    cfg: &RunConfig,
    g: &KGraph,
    engine: &CyclineEngine<'_>,
) -> Result<(Vec<EpPath>, BasisSet)> {
    let prepend = uniform(g, cfg.prepend);
    match &cfg.path {
        Some(lit) => {
            let x = config::parse_path(g, lit)?;
            let regular = is_regular(engine, &x, &default_regularity_bound(&x)).status
                == RegularityStatus::Regular;
            let policy = if regular {
                BasisPolicy::Regular
            } else {
                BasisPolicy::Ambient
            };
            let b = BasisSet::build(engine, std::slice::from_ref(&x), &prepend, policy)?;
            Ok((vec![x], b))
        }
        None => Ok(panel::default_basis(engine, cfg.prepend)?),
    }
}

fn basis_summary(g: &KGraph, seeds: &[EpPath], b: &BasisSet) -> Value {
    json!({
        "policy": match b.policy() { BasisPolicy::Regular => "regular", BasisPolicy::Ambient => "ambient" },
        "seeds": seeds.iter().map(|s| s.label(g)).collect::<Vec<_>>(),
        "size": b.len(),
        "safe": b.safe_count(),
        "rejected": b.rejected.len(),
        "members": b.labels(g),
    })
}

/// Nontrivial cycline pairs within the bound, one per unordered pair.
fn nontrivial_pairs(engine: &CyclineEngine<'_>, bound: &Degree) -> Vec<PairCandidate> {
    enumerate_cycline(engine, bound)
        .into_iter()
        .filter(|p| !p.is_trivial() && p.alpha < p.beta)
        .collect()
}

struct ModelFindings {
    ck: Value,
    ck_ok: bool,
    kernel: Value,
    kernel_ok: bool,
    probed: usize,
    separated: usize,
    special_counterexamples: Vec<Value>,
    commutant_diagonal: bool,
    cycline_commute: bool,
}

fn model_findings(
    g: &KGraph,
    engine: &CyclineEngine<'_>,
    b: &BasisSet,
    bound: &Degree,
) -> Result<ModelFindings> {
    let reports: Vec<_> = bound
        .all_below()
        .par_iter()
        .map(|n| verify_ck(g, b, n))
        .collect();
    let ck_ok = reports.iter().all(|r| r.holds());
    let ck = json!({
        "degrees": reports.len(),
        "ck1_violations": reports.iter().flat_map(|r| r.ck1_violations.clone()).collect::<Vec<_>>(),
        "ck2_violations": reports.iter().flat_map(|r| r.ck2_violations.clone()).collect::<Vec<_>>(),
        "projection_violations": reports.iter().flat_map(|r| r.projection_violations.clone()).collect::<Vec<_>>(),
    });
    let pairs = nontrivial_pairs(engine, bound);
    let probes: Vec<_> = pairs
        .par_iter()
        .map(|p| kernel_probe(engine, p, b))
        .collect();
    let mut kernel = Value::Null;
    let mut kernel_ok = true;
    let mut separated = 0;
    for w in probes.iter() {
        let w = w.as_ref().map_err(|e| anyhow::anyhow!("{e}"))?;
        kernel_ok &= w.upsilon_zero && w.separated;
        separated += usize::from(w.separated);
        if kernel.is_null() {
            kernel = json!({
                "pair": w.pair,
                "upsilon_norm": w.upsilon_norm,
                "Upsilon_components": w.upsilon_components,
            });
        }
    }
    let special_counterexamples: Vec<Value> = pairs
        .iter()
        .filter(|p| !special_test(g, p, b))
        .map(|p| pair_names(g, p))
        .collect();
    Ok(ModelFindings {
        ck,
        ck_ok,
        kernel,
        kernel_ok,
        probed: pairs.len(),
        separated,
        special_counterexamples,
        commutant_diagonal: commutant_check(g, b, bound).diagonal,
        cycline_commute: cycline_images_commute(g, &pairs, b),
    })
}

fn export_model(dir: &str, g: &KGraph, b: &BasisSet, pair: Option<&PairCandidate>) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {dir}"))?;
    fs::write(format!("{dir}/basis.txt"), b.labels(g).join("\n") + "\n")?;
    for v in g.vertices() {
        let q = op_q(g, &g.vertex(v), b);
        fs::write(
            format!("{dir}/Q_{}.txt", g.vertex_name(v)),
            q.to_coordinate_text(),
        )?;
    }
    if let Some(p) = pair {
        let combo =
            GeneratorCombo::standard(&p.alpha, &p.beta)?.sub(&GeneratorCombo::projection(&p.alpha));
        fs::write(
            format!("{dir}/upsilon.txt"),
            eval_upsilon_partial(g, &combo, b).0.to_coordinate_text(),
        )?;
        for (n, a) in eval_big_upsilon(g, &combo, b)?.components() {
            fs::write(format!("{dir}/Upsilon_{n}.txt"), a.to_coordinate_text())?;
        }
    }
    Ok(())
}

pub fn cmd_model(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let (seeds, b) = basis_for(cfg, &g, &engine)?;
    let bound = uniform(&g, cfg.bound);
    let f = model_findings(&g, &engine, &b, &bound)?;
    if let Some(dir) = &cfg.export {
        export_model(dir, &g, &b, nontrivial_pairs(&engine, &bound).first())?;
    }
    let violation =
        !f.ck_ok || !f.kernel_ok || !f.special_counterexamples.is_empty() || !f.cycline_commute;
    let result = json!({
        "basis": basis_summary(&g, &seeds, &b),
        "ck1_violations": f.ck["ck1_violations"],
        "ck2_violations": f.ck["ck2_violations"],
        "projection_violations": f.ck["projection_violations"],
        "kernel_witness": f.kernel,
        "kernel_pairs_probed": f.probed,
        "kernel_pairs_separated": f.separated,
        "special_counterexamples": f.special_counterexamples,
        "commutant_diagonal": f.commutant_diagonal,
        "cycline_images_commute": f.cycline_commute,
    });
    Ok(Outcome::new(cfg, result, violation))
}

fn hx_panel(engine: &CyclineEngine<'_>, x: &EpPath, bound: &Degree, b: &BasisSet) -> (Value, bool) {
    let sets: Vec<_> = [HxVariant::H, HxVariant::Hc, HxVariant::Hs]
        .iter()
        .map(|&v| compute_hx(engine, x, bound, v, Some(b)))
        .collect();
    let agree = sets.iter().all(|s| s.diffs == sets[0].diffs);
    let strings = |i: usize| {
        sets[i]
            .diffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
    };
    (
        json!({"H": strings(0), "Hc": strings(1), "Hs": strings(2), "agree": agree}),
        agree,
    )
}

pub fn cmd_states(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let (seeds, b) = basis_for(cfg, &g, &engine)?;
    let x = seeds[0].clone();
    let z = match &cfg.z {
        Some(text) => config::parse_z(text)?,
        None => unit_z(g.k()),
    };
    let state = StateSpec::new(&g, z.clone(), x.clone())?;
    let combos = match &cfg.combo {
        Some(file) => vec![config::read_combo(&g, file)?],
        None => panel::random_combos(&g, cfg.seed, 10, 3, 1),
    };
    let mut violation = false;
    let values: Vec<Value> = combos
        .iter()
        .map(|c| {
            let e = e_eval(&engine, &state, c)
                .map(c64)
                .unwrap_or_else(|err| json!(err.to_string()));
            let pos = match positivity_check(&g, &x, c, &b, cfg.tol) {
                Ok(r) => {
                    violation |= !r.passed();
                    json!(r)
                }
                Err(err) => json!(err.to_string()),
            };
            json!({
                "terms": c.len(),
                "phi": c64(phi_eval(&g, &x, c)),
                "psi": c64(psi_eval(&g, &state, c)),
                "e": e,
                "positivity": pos,
            })
        })
        .collect();
    let bound = uniform(&g, cfg.bound);
    let (hx, hx_ok) = hx_panel(&engine, &x, &bound, &b);
    let equiv = states_equiv(&engine, &z, &unit_z(g.k()), &x, &bound, cfg.tol);
    // The H_x and equivalence identities assume a regular point.
    let x_regular =
        is_regular(&engine, &x, &default_regularity_bound(&x)).status == RegularityStatus::Regular;
    violation |= x_regular && (!hx_ok || !equiv.consistent());
    let result = json!({
        "x": x.label(&g),
        "x_regular": x_regular,
        "basis": basis_summary(&g, &seeds, &b),
        "z": z.iter().map(|&v| c64(v)).collect::<Vec<_>>(),
        "values": values,
        "hx": hx,
        "equivalent_to_unit": equiv,
    });
    Ok(Outcome::new(cfg, result, violation))
}

/// All `k`-tuples of `m`-th roots of unity, in lexicographic exponent order.
pub fn root_grid(k: usize, m: u32) -> Vec<Vec<C64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|z| {
                (0..m).map(move |j| {
                    let mut z = z.clone();
                    z.push(C64::from_polar(
                        1.0,
                        std::f64::consts::TAU * j as f64 / m as f64,
                    ));
                    z
                })
            })
            .collect();
    }
    out
}

fn diagonal_faithful(g: &KGraph, b: &BasisSet, bound: &Degree) -> bool {
    bound.all_below().iter().all(|n| {
        g.paths_of_degree(n).iter().all(|a: &Path| {
            !eval_upsilon_partial(g, &GeneratorCombo::projection(a), b)
                .0
                .is_zero()
        })
    })
}

pub fn cmd_uniqueness(cfg: &RunConfig) -> Result<Outcome> {
    let g = load_valid(cfg)?;
    let engine = CyclineEngine::new(&g);
    let (seeds, b) = basis_for(cfg, &g, &engine)?;
    let bound = uniform(&g, cfg.bound);
    let f = model_findings(&g, &engine, &b, &bound)?;
    let diag_ok = diagonal_faithful(&g, &b, &bound);

    let core = panel::core_members(&g, &seeds, &b);
    let mut hx_ok = true;
    let mut hx = BTreeMap::new();
    let mut equiv_checked = 0usize;
    let mut equiv_inconsistent = 0usize;
    let grid = root_grid(g.k(), 4);
    let mut irregular = Vec::new();
    for &i in &core {
        let x = b.member(i);
        let (panel, ok) = hx_panel(&engine, x, &bound, &b);
        hx.insert(x.label(&g), panel);
        if is_regular(&engine, x, &default_regularity_bound(x)).status != RegularityStatus::Regular
        {
            irregular.push(x.label(&g));
            continue;
        }
        hx_ok &= ok;
        let equiv = EquivPanel::new(&engine, x, &bound);
        let results: Vec<bool> = grid
            .iter()
            .flat_map(|z1| grid.iter().map(move |z2| (z1, z2)))
            .map(|(z1, z2)| equiv.compare(z1, z2, cfg.tol).consistent())
            .collect();
        equiv_checked += results.len();
        equiv_inconsistent += results.iter().filter(|c| !**c).count();
    }

    let aperiodic = f.probed == 0;
    let mut summary = Vec::new();
    if aperiodic {
        summary.push("𝓜-span = 𝒟-span within bound".to_string());
    } else {
        summary.push(format!(
            "υ injective on 𝒟-span: {}; kernel nonempty: {}",
            diag_ok,
            !f.kernel.is_null()
        ));
        summary.push(format!(
            "Υ separates {} of {} probed kernel elements",
            f.separated, f.probed
        ));
    }
    summary.push(format!(
        "injective-on-𝓜 shadow holds: {}",
        f.cycline_commute && f.special_counterexamples.is_empty()
    ));
    let violation = !f.ck_ok
        || !f.kernel_ok
        || !diag_ok
        || !hx_ok
        || equiv_inconsistent > 0
        || !f.special_counterexamples.is_empty()
        || !f.cycline_commute;
    let result = json!({
        "basis": basis_summary(&g, &seeds, &b),
        "ck": f.ck,
        "aperiodic_within_bound": aperiodic,
        "kernel_witness": f.kernel,
        "kernel_pairs_probed": f.probed,
        "kernel_pairs_separated": f.separated,
        "special_counterexamples": f.special_counterexamples,
        "commutant_diagonal": f.commutant_diagonal,
        "cycline_images_commute": f.cycline_commute,
        "diagonal_faithful": diag_ok,
        "hx": hx,
        "hx_points_not_regular": irregular,
        "state_equivalence": {"checked": equiv_checked, "inconsistent": equiv_inconsistent},
        "summary": summary,
    });
    Ok(Outcome::new(cfg, result, violation))
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        _ => {
            out.push_str(prefix);
            out.push_str(": ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}

pub fn render(outcome: &Outcome, format: config::Format) -> String {
    match format {
        config::Format::Json => {
            serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n"
        }
        config::Format::Text => {
            let mut out = String::new();
            flatten("", &outcome.report, &mut out);
            out
        }
    }
}
