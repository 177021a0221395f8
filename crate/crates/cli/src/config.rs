//! Run configuration and parsing of command-line inputs.

use std::fs;
use std::path::Path as FsPath;

use anyhow::{anyhow, bail, Context, Result};
use kgraph::corpus;
use kgraph::infinite::{EpLiteral, EpPath};
use kgraph::model::{GeneratorCombo, C64};
use kgraph::{Degree, GraphError, KGraph, Skeleton};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Paths,
    Cycline,
    Per,
    Regular,
    Model,
    States,
    Uniqueness,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Everything that determines a report. Reports embed it verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// A graph file, or the name of a corpus graph.
    pub graph: String,
    /// Replace the graph by its pullback along this homomorphism.
    pub pullback: Option<Vec<u32>>,
    /// Uniform degree bound for enumerations.
    pub bound: u32,
    /// Uniform brute-force depth.
    pub depth: u32,
    /// Uniform prepend bound for bases.
    pub prepend: u32,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    /// Eventually periodic path literal.
    pub path: Option<String>,
    /// Comma-separated point of the torus.
    pub z: Option<String>,
    /// File holding a generator combination.
    pub combo: Option<String>,
    /// Directory for exported matrices.
    pub export: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command, graph: &str) -> Self {
        RunConfig {
            command,
            graph: graph.to_string(),
            pullback: None,
            bound: 2,
            depth: 6,
            prepend: 2,
            tol: 1e-9,
            seed: 0,
            format: Format::Json,
            path: None,
            z: None,
            combo: None,
            export: None,
        }
    }
}

/// A readable graph file either validates or is a finding; parse and I/O
/// problems are errors instead.
pub enum Loaded {
    Graph(Box<KGraph>),
    Invalid(GraphError),
}

fn read_skeleton(source: &str) -> Result<Skeleton> {
    if FsPath::new(source).exists() {
        let text = fs::read_to_string(source).with_context(|| format!("reading {source}"))?;
        return Skeleton::from_json(&text).map_err(|e| anyhow!("{source}: {e}"));
    }
    match corpus::by_name(source) {
        Some(g) => Ok(g.skeleton().clone()),
        None => bail!("no such file or corpus graph: {source}"),
    }
}

pub fn load_graph(cfg: &RunConfig) -> Result<Loaded> {
    let graph = if FsPath::new(&cfg.graph).exists() {
        match KGraph::validate(&read_skeleton(&cfg.graph)?) {
            Ok(g) => g,
            Err(e @ GraphError::Invalid(_)) => return Ok(Loaded::Invalid(e)),
            Err(e) => return Err(e.into()),
        }
    } else {
        // Corpus graphs keep their pullback structure.
        corpus::by_name(&cfg.graph)
            .ok_or_else(|| anyhow!("no such file or corpus graph: {}", cfg.graph))?
    };
    match &cfg.pullback {
        None => Ok(Loaded::Graph(Box::new(graph))),
        Some(f) => Ok(Loaded::Graph(Box::new(graph.pullback(f)?))),
    }
}

pub fn load_valid(cfg: &RunConfig) -> Result<KGraph> {
    match load_graph(cfg)? {
        Loaded::Graph(g) => Ok(*g),
        Loaded::Invalid(e) => Err(e.into()),
    }
}

pub fn uniform(g: &KGraph, n: u32) -> Degree {
    Degree::uniform(g.k(), n)
}

/// Quotes bare words so `{head:[],cycle:[e]}` reads as JSON.
fn quote_bare_words(text: &str) -> String {
    let mut out = String::new();
    let mut chars = text.chars().peekable();
    let bare = |c: char| c.is_alphanumeric() || c == '_' || c == '.' || c == '@';
    while let Some(c) = chars.next() {
        if c == '"' {
            out.push(c);
            for d in chars.by_ref() {
                out.push(d);
                if d == '"' {
                    break;
                }
            }
        } else if bare(c) {
            let mut word = String::from(c);
            while let Some(&d) = chars.peek() {
                if !bare(d) {
                    break;
                }
                word.push(d);
                chars.next();
            }
            out.push('"');
            out.push_str(&word);
            out.push('"');
        } else {
            out.push(c);
        }
    }
    out
}

pub fn parse_path(g: &KGraph, text: &str) -> Result<EpPath> {
    let lit: EpLiteral = serde_json::from_str(text)
        .or_else(|_| serde_json::from_str(&quote_bare_words(text)))
        .with_context(|| format!("cannot parse path literal {text}"))?;
    Ok(EpPath::from_literal(g, &lit)?)
}

fn parse_component(s: &str) -> Result<C64> {
    let s = s.trim().replace('−', "-");
    match s.as_str() {
        "i" | "+i" => return Ok(C64::new(0.0, 1.0)),
        "-i" => return Ok(C64::new(0.0, -1.0)),
        _ => {}
    }
    if let Some(frac) = s.strip_prefix("root:") {
        // e^{2πi p/q}
        let (p, q) = frac
            .split_once('/')
            .ok_or_else(|| anyhow!("expected root:p/q, got {s}"))?;
        let (p, q): (f64, f64) = (p.trim().parse()?, q.trim().parse()?);
        if q == 0.0 {
            bail!("root:{frac} has zero denominator");
        }
        return Ok(C64::from_polar(1.0, std::f64::consts::TAU * p / q));
    }
    Ok(C64::new(
        s.parse()
            .with_context(|| format!("bad torus coordinate {s}"))?,
        0.0,
    ))
}

/// `"1,-1"`, `"i,-i"`, `"root:1/8,1"`.
pub fn parse_z(text: &str) -> Result<Vec<C64>> {
    text.split(',').map(parse_component).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    alpha: Vec<String>,
    beta: Vec<String>,
    #[serde(default = "one")]
    coeff: [f64; 2],
}

fn one() -> [f64; 2] {
    [1.0, 0.0]
}

/// A JSON list of `{alpha, beta, coeff: [re, im]}`; a single vertex name
/// denotes that vertex.
pub fn parse_combo(g: &KGraph, text: &str) -> Result<GeneratorCombo> {
    let terms: Vec<TermSpec> = serde_json::from_str(text).context("cannot parse combination")?;
    let mut c = GeneratorCombo::new();
    for t in terms {
        let a = g.path_from_names(&t.alpha)?;
        let b = g.path_from_names(&t.beta)?;
        c.add_term(&a, &b, C64::new(t.coeff[0], t.coeff[1]))?;
    }
    Ok(c)
}

pub fn read_combo(g: &KGraph, file: &str) -> Result<GeneratorCombo> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
    parse_combo(g, &text)
}
