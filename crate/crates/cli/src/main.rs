//! `clusteraut`: mutate seeds, build exchange graphs, compute layer
//! signatures and automorphism groups, classify quivers.
//!
//! Results go to standard output as JSON (or DOT for `graph --format dot`).
//! Domain errors exit with status 1 and a JSON error object on standard
//! error; usage errors exit with status 2.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clusteraut::builtins::{builtin, BUILTIN_NAMES};
use clusteraut::classify::{
    canonical_quiver, finite_type_check, is_mutation_finite, mutation_class, rank3_subquiver_scan, ClassMode,
    FinitenessCertificate, Rank3Kind,
};
use clusteraut::exchange_graph::{build_graph, layer_signature, ExchangeGraph, GraphJson, Limits};
use clusteraut::groups::{
    cluster_automorphism_group, compare_groups, graph_automorphism_group, group_shape, GraphPermutation, PermGroup,
};
use clusteraut::matrix::MatrixJson;
use clusteraut::mutation::{apply_sequence, MutationSequence};
use clusteraut::seed::{seed_from_json_str, LabeledSeed, SeedJson};
use clusteraut::verify::{self, Scope};
use clusteraut::Error;

/// Environment variable overriding the default class-enumeration budget.
const BUDGET_ENV: &str = "CLUSTERAUT_BUDGET";
const DEFAULT_BUDGET: usize = 10_000;

#[derive(Parser)]
#[command(name = "clusteraut", version, about = "Exchange graphs and automorphism groups of cluster algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a sequence of mutations to a seed.
    Mutate(MutateArgs),
    /// Build the exchange graph.
    Graph(GraphArgs),
    /// Layer signature of geodesic loops at a base vertex.
    Layers(LayersArgs),
    /// Automorphism groups of the exchange graph and the cluster algebra.
    Aut(AutArgs),
    /// Finite type, mutation-finiteness, mutation classes.
    Classify(ClassifyArgs),
    /// Run the built-in check suite and print one JSON line per case.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Matrix, seed or quiver JSON file.
    #[arg(long, value_name = "FILE")]
    seed: Option<PathBuf>,
    /// Quiver JSON file (same formats as --seed).
    #[arg(long, value_name = "FILE")]
    quiver: Option<PathBuf>,
    /// Built-in quiver name, e.g. a3, f4, markov, x6.
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

#[derive(Args)]
struct GraphLimits {
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_radius: Option<usize>,
}

#[derive(Args)]
struct MutateArgs {
    #[command(flatten)]
    input: Input,
    /// One-based directions, comma separated.
    #[arg(long, value_name = "DIRS", default_value = "")]
    sequence: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    limits: GraphLimits,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    /// Label DOT vertices with the isomorphism class of their quiver.
    #[arg(long)]
    annotate: bool,
}

#[derive(Args)]
struct LayersArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    limits: GraphLimits,
    /// Base vertex (graph index, 0 is the input seed).
    #[arg(long, default_value_t = 0)]
    base: usize,
    /// Last layer to report.
    #[arg(long)]
    max_layer: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Graph,
    Cluster,
    Both,
}

#[derive(Args)]
struct AutArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "both")]
    which: Which,
    /// Include every group element, not only generators.
    #[arg(long)]
    emit_elements: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    FiniteType,
    MutationFinite,
    Class,
    Rank3,
    Canonical,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "finite-type")]
    mode: Mode,
    /// Maximum number of quivers to enumerate (default 10000, or the
    /// CLUSTERAUT_BUDGET environment variable).
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, finite-type, rank3 or table1.
    #[arg(default_value = "all")]
    scope: String,
    /// Include the large exceptional types.
    #[arg(long)]
    stretch: bool,
}

/// A failure reported as JSON on standard error.
struct Failure {
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { kind: e.kind(), message: e.to_string() }
    }
}

macro_rules! impl_failure_from {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        })*
    };
}

impl_failure_from!(
    clusteraut::exchange_graph::GraphError,
    clusteraut::groups::GroupError,
    clusteraut::classify::ClassifyError,
    clusteraut::mutation::MutationError,
    clusteraut::seed::SeedError
);

fn fail(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure { kind, message: message.into() }
}

fn load_seed(input: &Input) -> Result<LabeledSeed, Failure> {
    if let Some(name) = &input.builtin {
        let b = builtin(name).ok_or_else(|| {
            fail("invalid_input", format!("unknown builtin {name:?}; known: {}", BUILTIN_NAMES.join(", ")))
        })?;
        return Ok(LabeledSeed::initial(b));
    }
    let path = input.seed.as_ref().or(input.quiver.as_ref()).expect("clap enforces one input");
    let text = fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))?;
    Ok(seed_from_json_str(&text)?)
}

fn limits(seed: &LabeledSeed, l: &GraphLimits) -> Limits {
    let mut limits = if l.max_radius.is_none() { Limits::default_for(seed.matrix()) } else { Limits::default() };
    if let Some(r) = l.max_radius {
        limits.max_radius = Some(r);
    }
    if let Some(v) = l.max_vertices {
        limits.max_vertices = v;
    }
    limits
}

fn budget(arg: Option<usize>) -> Result<usize, Failure> {
    if let Some(b) = arg {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| fail("invalid_input", format!("{BUDGET_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn one_based(path: &[usize]) -> Vec<usize> {
    path.iter().map(|d| d + 1).collect()
}

fn cmd_mutate(args: &MutateArgs) -> Result<String, Failure> {
    let seed = load_seed(&args.input)?;
    let seq = MutationSequence::parse_one_based(&args.sequence, seed.rank()).map_err(|m| fail("invalid_input", m))?;
    let out = apply_sequence(&seed, &seq)?;
    let mut value = serde_json::to_value(SeedJson::from(&out)).expect("seed serialises");
    value["display"] = json!(out.cluster().iter().map(|x| x.to_string()).collect::<Vec<_>>());
    Ok(value.to_string())
}

/// Vertex label: index of the quiver's isomorphism class, in order of first
/// appearance.
fn quiver_classes(g: &ExchangeGraph) -> Result<Vec<usize>, Failure> {
    let mut ids = BTreeMap::new();
    let mut out = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let form = canonical_quiver(&v.matrix)?;
        let next = ids.len();
        out.push(*ids.entry(form).or_insert(next));
    }
    Ok(out)
}

fn cmd_graph(args: &GraphArgs) -> Result<String, Failure> {
    let seed = load_seed(&args.input)?;
    let g = build_graph(&seed, limits(&seed, &args.limits))?;
    match args.format {
        GraphFormat::Json => Ok(serde_json::to_string(&GraphJson::from(&g)).expect("graph serialises")),
        GraphFormat::Dot => {
            if args.annotate {
                let classes = quiver_classes(&g)?;
                let label = |v: usize| format!("Q{}", classes[v] + 1);
                Ok(g.to_dot(Some(&label)).trim_end().to_string())
            } else {
                Ok(g.to_dot(None).trim_end().to_string())
            }
        }
    }
}

fn cmd_layers(args: &LayersArgs) -> Result<String, Failure> {
    let seed = load_seed(&args.input)?;
    let g = build_graph(&seed, limits(&seed, &args.limits))?;
    let loops = g.geodesic_loops()?;
    let sig = layer_signature(&g, &loops, args.base, args.max_layer)?;
    Ok(json!({
        "base": sig.base,
        "complete": g.is_complete(),
        "vertices": g.vertex_count(),
        "loops": loops.len(),
        "layers": sig.layers,
        "truncated_at": sig.truncated_at,
        "signature": sig.to_string(),
    })
    .to_string())
}

fn perms_json(ps: &[GraphPermutation]) -> Value {
    json!(ps.iter().map(|p| &p.0).collect::<Vec<_>>())
}

fn group_json(g: &PermGroup, emit_elements: bool) -> Value {
    let shape = group_shape(g);
    let mut v = json!({
        "order": g.order(),
        "shape": shape.to_string(),
        "abelian": shape.abelian,
        "generators": perms_json(g.generators()),
    });
    if emit_elements {
        v["elements"] = perms_json(g.elements());
    }
    v
}

fn cmd_aut(args: &AutArgs) -> Result<String, Failure> {
    let seed = load_seed(&args.input)?;
    let g = build_graph(&seed, Limits::default_for(seed.matrix()))?;
    let mut out = json!({ "vertices": g.vertex_count() });
    let aut_e = if args.which != Which::Cluster { Some(graph_automorphism_group(&g)?) } else { None };
    let aut_a = if args.which != Which::Graph { Some(cluster_automorphism_group(&g, 0)?) } else { None };
    if let Some(e) = &aut_e {
        out["aut_E"] = group_json(e, args.emit_elements);
    }
    if let Some(a) = &aut_a {
        let mut v = group_json(&a.image, args.emit_elements);
        v["direct_index"] = json!(a.direct_index());
        if args.emit_elements {
            v["cluster_elements"] = json!(a
                .elements
                .iter()
                .map(|e| json!({
                    "orientation": e.orientation,
                    "base_image": e.base_image,
                    "positions": one_based(&e.positions),
                }))
                .collect::<Vec<_>>());
        }
        out["aut_A"] = v;
    }
    if let (Some(e), Some(a)) = (&aut_e, &aut_a) {
        let cmp = compare_groups(e, a);
        out["equal"] = json!(cmp.equal);
        out["witness"] = json!(cmp.witness.as_ref().map(|p| &p.0));
        out["witness_fixes_base"] = json!(cmp.witness_fixes_base);
    }
    Ok(out.to_string())
}

fn cmd_classify(args: &ClassifyArgs) -> Result<String, Failure> {
    let seed = load_seed(&args.input)?;
    let b = seed.matrix();
    let budget = budget(args.budget)?;
    let out = match args.mode {
        Mode::FiniteType => match finite_type_check(b, budget)? {
            Some(label) => json!({ "finite_type": true, "type": label.to_string() }),
            None => json!({ "finite_type": false }),
        },
        Mode::MutationFinite => {
            let f = is_mutation_finite(b, budget)?;
            match f.certificate {
                FinitenessCertificate::Class(_) => json!({ "finite": true, "class_size": f.class_size }),
                FinitenessCertificate::Violation(path) => json!({ "finite": false, "certificate": one_based(&path) }),
            }
        }
        Mode::Class => {
            let c = mutation_class(b, budget, ClassMode::Exhaustive)?;
            let members: Vec<Value> = c
                .members
                .iter()
                .map(|m| json!({ "b": MatrixJson::from(&m.form.matrix()).b, "path": one_based(&m.path) }))
                .collect();
            json!({ "class_size": c.len(), "complete": c.complete, "members": members })
        }
        Mode::Rank3 => {
            let scan = rank3_subquiver_scan(b)?;
            let subs: Vec<Value> = scan
                .iter()
                .map(|s| json!({ "vertices": one_based(&s.vertices), "kind": s.kind.to_string() }))
                .collect();
            let violation = scan.iter().any(|s| s.kind == Rank3Kind::Markov);
            json!({ "subquivers": subs, "violation": violation })
        }
        Mode::Canonical => {
            let c = canonical_quiver(b)?;
            json!({ "n": c.rank(), "b": MatrixJson::from(&c.matrix()).b })
        }
    };
    Ok(out.to_string())
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let out = match &cli.command {
        Command::Mutate(a) => cmd_mutate(a)?,
        Command::Graph(a) => cmd_graph(a)?,
        Command::Layers(a) => cmd_layers(a)?,
        Command::Aut(a) => cmd_aut(a)?,
        Command::Classify(a) => cmd_classify(a)?,
        Command::Verify(a) => {
            let scope: Scope = a.scope.parse().map_err(|m: String| fail("usage", m))?;
            let report = verify::run(scope, a.stretch);
            let text = report.to_json_lines();
            return Ok((text.trim_end().to_string(), report.all_passed()));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) if f.kind == "usage" => {
            eprintln!("error: {}", f.message);
            ExitCode::from(2)
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": { "kind": f.kind, "message": f.message } }));
            ExitCode::from(1)
        }
    }
}
