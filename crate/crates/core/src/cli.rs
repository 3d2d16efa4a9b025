//! Command-line front end. Every command prints one JSON document (DOT text
//! for `export-dot`); exit code 0 on success whatever the mathematical
//! answer, 2 on malformed input, 1 on internal errors.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dot::export_dot;
use crate::gadget::{decode, encode};
use crate::graph::{Coloring, StructuredGraph};
use crate::lcl::{verify, CheckMode, LocalProblem};
use crate::problems::{lenient_mode, problem_by_name, PROBLEM_NAMES};
use crate::regtree::{branch_prefix, decide_f, truncate, FDecision, TreeAutomaton};
use crate::sigma_pi::{
    build_component, extract_branch, pi_coloring_for_component, sigma_coloring_from_branch,
    ComponentSpec, SigmaPiError,
};
use crate::solver::solve_finite_palette;

const SCHEMAS: &str = "\
Input files (--in, --coloring) are JSON:
  automaton  {\"states\":[\"q\"],\"initial\":\"q\",\"delta\":{\"q\":{\"0\":\"q\",\"1\":\"q\"}}}
             a missing (state, bit) entry means that child is absent
  component  {\"a0\":<automaton>,\"a1\":<automaton>,\"depth\":d}
  graph      {\"vertices\":[{\"id\":..,\"kind\":\"anchor|tree|plain|auxiliary\",\"tree\":0,\"root\":true}],
              \"edges\":[{\"a\":..,\"b\":..,\"kind\":\"anchor_root|parent_child|unlabeled\",
                         \"parent\":..,\"side\":\"left|right\"}]}
  coloring   {\"colors\":{id: n, ..}}  (omitted ids have color 0)
Commands taking a graph also accept an automaton (truncated at --depth) or a component.";

#[derive(Debug, Parser)]
#[command(name = "lclkit", version, about = "Local coloring problems on structured trees", after_help = SCHEMAS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Lenient,
}

#[derive(Debug, Args)]
struct Opts {
    /// Input file; `-` or absent reads standard input.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    palette: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// sigma, pi, pi-star or proper-k (k taken from --palette).
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    coloring: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that an automaton is well formed and pruned.
    RegtreeCheck(Opts),
    /// Decide whether every branch has finitely many 1s.
    RegtreeDecideF(Opts),
    /// Print the minimal lasso witness and its first --depth bits.
    RegtreeWitness(Opts),
    /// Σ-coloring of the depth-d truncation built from the witness branch.
    SigmaColor(Opts),
    /// Follow favorite children from the root under --coloring.
    ExtractBranch(Opts),
    LclVerify(Opts),
    LclSolve(Opts),
    ComponentBuild(Opts),
    ComponentColor(Opts),
    GadgetEncode(Opts),
    GadgetDecode(Opts),
    ExportDot(Opts),
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> CliError {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs one command; returns the process exit code.
pub fn run<I, T>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => 2,
            };
        }
    };
    let (opts, result) = dispatch(cli.command, stdin);
    let text = match result {
        Ok(text) => text,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}\n\n{SCHEMAS}");
            return 2;
        }
        Err(CliError::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            return 1;
        }
    };
    let written = match &opts.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "internal error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> (Opts, CliResult<String>) {
    match command {
        Command::RegtreeCheck(o) => {
            let r = regtree_check(&o, stdin);
            (o, r)
        }
        Command::RegtreeDecideF(o) => {
            let r = regtree_decide_f(&o, stdin);
            (o, r)
        }
        Command::RegtreeWitness(o) => {
            let r = regtree_witness(&o, stdin);
            (o, r)
        }
        Command::SigmaColor(o) => {
            let r = sigma_color(&o, stdin);
            (o, r)
        }
        Command::ExtractBranch(o) => {
            let r = extract(&o, stdin);
            (o, r)
        }
        Command::LclVerify(o) => {
            let r = lcl_verify(&o, stdin);
            (o, r)
        }
        Command::LclSolve(o) => {
            let r = lcl_solve(&o, stdin);
            (o, r)
        }
        Command::ComponentBuild(o) => {
            let r = component_build(&o, stdin);
            (o, r)
        }
        Command::ComponentColor(o) => {
            let r = component_color(&o, stdin);
            (o, r)
        }
        Command::GadgetEncode(o) => {
            let r = load_graph(&o, stdin)
                .and_then(|g| encode(&g.graph).map_err(CliError::input))
                .map(|g| g.to_json() + "\n");
            (o, r)
        }
        Command::GadgetDecode(o) => {
            let r = load_graph(&o, stdin)
                .and_then(|g| decode(&g.graph).map_err(CliError::input))
                .map(|g| g.to_json() + "\n");
            (o, r)
        }
        Command::ExportDot(o) => {
            let r = export(&o, stdin);
            (o, r)
        }
    }
}

fn read_input(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    match opts.input.as_deref() {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

enum Input {
    Automaton(TreeAutomaton),
    Component(ComponentSpec),
    Graph(StructuredGraph),
}

fn parse_input(text: &str) -> CliResult<Input> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(CliError::input)?;
    let has = |key: &str| value.get(key).is_some();
    if has("states") {
        Ok(Input::Automaton(
            TreeAutomaton::parse_pruned(text).map_err(CliError::input)?,
        ))
    } else if has("a0") {
        Ok(Input::Component(
            ComponentSpec::parse_json(text).map_err(CliError::input)?,
        ))
    } else if has("vertices") {
        Ok(Input::Graph(
            StructuredGraph::from_json(text).map_err(CliError::input)?,
        ))
    } else {
        Err(CliError::Input(
            "input is neither an automaton, a component nor a graph".into(),
        ))
    }
}

fn load_automaton(opts: &Opts, stdin: &mut dyn Read) -> CliResult<TreeAutomaton> {
    let text = read_input(opts, stdin)?;
    TreeAutomaton::parse_json(&text).map_err(CliError::input)
}

fn load_pruned(opts: &Opts, stdin: &mut dyn Read) -> CliResult<TreeAutomaton> {
    let a = load_automaton(opts, stdin)?;
    a.validate_pruned().map_err(CliError::input)?;
    Ok(a)
}

struct LoadedGraph {
    graph: StructuredGraph,
    /// Truncation depth, when the input fixes one.
    depth: Option<usize>,
}

fn load_graph(opts: &Opts, stdin: &mut dyn Read) -> CliResult<LoadedGraph> {
    let text = read_input(opts, stdin)?;
    match parse_input(&text)? {
        Input::Automaton(a) => {
            let depth = opts
                .depth
                .ok_or_else(|| CliError::Input("an automaton input needs --depth".into()))?;
            Ok(LoadedGraph {
                graph: truncate(&a, depth),
                depth: Some(depth),
            })
        }
        Input::Component(mut spec) => {
            if let Some(d) = opts.depth {
                spec.depth = d;
            }
            Ok(LoadedGraph {
                graph: build_component(&spec),
                depth: Some(spec.depth),
            })
        }
        Input::Graph(g) => Ok(LoadedGraph {
            graph: g,
            depth: opts.depth,
        }),
    }
}

fn load_coloring(opts: &Opts) -> CliResult<Coloring> {
    let path = opts
        .coloring
        .as_ref()
        .ok_or_else(|| CliError::Input("--coloring is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Coloring::from_json(&text).map_err(CliError::input)
}

fn problem(opts: &Opts) -> CliResult<LocalProblem> {
    let name = opts
        .problem
        .as_deref()
        .ok_or_else(|| CliError::Input("--problem is required".into()))?;
    problem_by_name(name, opts.palette).ok_or_else(|| {
        if name == "proper-k" {
            CliError::Input("proper-k needs --palette".into())
        } else {
            CliError::Input(format!(
                "unknown problem `{name}` (expected one of {})",
                PROBLEM_NAMES.join(", ")
            ))
        }
    })
}

fn mode(opts: &Opts, loaded: &LoadedGraph) -> CliResult<CheckMode> {
    match opts.mode.unwrap_or(ModeArg::Strict) {
        ModeArg::Strict => Ok(CheckMode::Strict),
        ModeArg::Lenient => lenient_mode(&loaded.graph, loaded.depth).map_err(CliError::input),
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

#[derive(Serialize)]
struct CheckReport {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    not_pruned: Option<String>,
}

fn regtree_check(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let a = load_automaton(opts, stdin)?;
    let report = match a.validate_pruned() {
        Ok(()) => CheckReport {
            ok: true,
            not_pruned: None,
        },
        Err(crate::regtree::AutomatonError::NotPruned(q)) => CheckReport {
            ok: false,
            not_pruned: Some(q),
        },
        Err(e) => return Err(CliError::input(e)),
    };
    json(&report)
}

#[derive(Serialize)]
struct DecisionReport {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    stem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prefix: Option<String>,
}

impl DecisionReport {
    fn new(d: &FDecision, prefix_len: Option<usize>) -> DecisionReport {
        match d {
            FDecision::InF => DecisionReport {
                kind: "in_f",
                stem: None,
                cycle: None,
                prefix: None,
            },
            FDecision::NotInF(w) => DecisionReport {
                kind: "not_in_f",
                stem: Some(w.stem.to_string()),
                cycle: Some(w.cycle.to_string()),
                prefix: prefix_len.map(|n| branch_prefix(w, n).to_string()),
            },
        }
    }
}

fn regtree_decide_f(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let a = load_pruned(opts, stdin)?;
    Ok(decide_f(&a).to_json() + "\n")
}

fn regtree_witness(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let a = load_pruned(opts, stdin)?;
    let n = opts.depth.unwrap_or(4 * a.state_count());
    json(&DecisionReport::new(&decide_f(&a), Some(n)))
}

#[derive(Serialize)]
struct SigmaColorReport {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    colors: Option<std::collections::BTreeMap<String, u64>>,
}

fn sigma_color(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let a = load_pruned(opts, stdin)?;
    let d = opts
        .depth
        .ok_or_else(|| CliError::Input("sigma-color needs --depth".into()))?;
    let report = match decide_f(&a) {
        FDecision::InF => SigmaColorReport {
            kind: "in_f",
            colors: None,
        },
        FDecision::NotInF(w) => {
            let f = sigma_coloring_from_branch(&a, &w, d)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            SigmaColorReport {
                kind: "not_in_f",
                colors: Some(f.to_doc().colors),
            }
        }
    };
    json(&report)
}

#[derive(Serialize)]
struct BranchReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertex: Option<String>,
}

fn extract(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let loaded = load_graph(opts, stdin)?;
    let f = load_coloring(opts)?;
    let report = match extract_branch(&loaded.graph, &f) {
        Ok(bits) => BranchReport {
            branch: Some(bits.to_string()),
            error: None,
            vertex: None,
        },
        Err(SigmaPiError::RootNotPositive) => BranchReport {
            branch: None,
            error: Some("root_not_positive"),
            vertex: None,
        },
        Err(SigmaPiError::StuckInterior(v)) => BranchReport {
            branch: None,
            error: Some("stuck_interior"),
            vertex: Some(v),
        },
        Err(e) => return Err(CliError::input(e)),
    };
    json(&report)
}

fn lcl_verify(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let p = problem(opts)?;
    let loaded = load_graph(opts, stdin)?;
    let f = load_coloring(opts)?;
    let mode = mode(opts, &loaded)?;
    let verdict = verify(&loaded.graph, &f, &p, &mode).map_err(CliError::input)?;
    Ok(verdict.to_json() + "\n")
}

fn lcl_solve(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let p = problem(opts)?;
    let k = opts
        .palette
        .ok_or_else(|| CliError::Input("lcl-solve needs --palette".into()))?;
    let loaded = load_graph(opts, stdin)?;
    let mode = mode(opts, &loaded)?;
    let outcome = solve_finite_palette(&loaded.graph, &p, k, &mode).map_err(CliError::input)?;
    Ok(outcome.to_json() + "\n")
}

fn load_component(opts: &Opts, stdin: &mut dyn Read) -> CliResult<ComponentSpec> {
    let text = read_input(opts, stdin)?;
    let mut spec = ComponentSpec::parse_json(&text).map_err(CliError::input)?;
    if let Some(d) = opts.depth {
        spec.depth = d;
    }
    Ok(spec)
}

fn component_build(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let spec = load_component(opts, stdin)?;
    Ok(build_component(&spec).to_json() + "\n")
}

#[derive(Serialize)]
struct ComponentColorReport {
    colorable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    colors: Option<std::collections::BTreeMap<String, u64>>,
}

fn component_color(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let spec = load_component(opts, stdin)?;
    let report = match pi_coloring_for_component(&spec) {
        Ok((tree, f)) => ComponentColorReport {
            colorable: true,
            tree: Some(tree),
            colors: Some(f.to_doc().colors),
        },
        Err(SigmaPiError::NotColorable) => ComponentColorReport {
            colorable: false,
            tree: None,
            colors: None,
        },
        Err(e) => return Err(CliError::Internal(e.to_string())),
    };
    json(&report)
}

fn export(opts: &Opts, stdin: &mut dyn Read) -> CliResult<String> {
    let loaded = load_graph(opts, stdin)?;
    let f = match &opts.coloring {
        Some(_) => Some(load_coloring(opts)?),
        None => None,
    };
    Ok(export_dot(&loaded.graph, f.as_ref()))
}
