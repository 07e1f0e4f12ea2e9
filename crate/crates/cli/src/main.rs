//! `prism-idcode`: command-line front end.
//!
//! Exit codes: 0 success or valid, 1 checked and invalid, 2 infeasible,
//! 64 usage or input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use prism_idcode::cliquewidth::{check_doubling, random_graph, LayoutTree};
use prism_idcode::cycle_prism::{lemma1_check, lower_bound, pattern_code, upper_bound, CodePair};
use prism_idcode::graph::{closed_twins, cycle, cycle_prism};
use prism_idcode::idcode::{hitting_instance, is_identifying_code};
use prism_idcode::solver::{solve_min_idcode, SolverOptions, Status, Strategy};
use prism_idcode::textio::{parse_graph, write_graph, GraphFile, VertexLabels};
use prism_idcode::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INVALID: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "prism-idcode", version, about = "Identifying codes in complementary prisms of cycles")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest code size the solver searches.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = StrategyArg::Bnb)]
    strategy: StrategyArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Bnb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Cycle,
    Prism,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a cycle or the complementary prism of a cycle.
    Gen { kind: GraphKind, n: usize },
    /// Check a code against the definition.
    Verify {
        graph: PathBuf,
        code: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
    },
    /// Print the periodic construction for C_n C̄_n.
    Pattern {
        n: usize,
        /// Also draw the two rows.
        #[arg(long)]
        ascii: bool,
    },
    /// Evaluate the local condition system on a two-line code file.
    Conditions { code: PathBuf },
    /// Find a minimum identifying code.
    Solve {
        graph: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
    },
    /// List pairs of vertices with identical balls.
    Twins {
        graph: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
    },
    /// Export the hitting-set instance.
    Export {
        graph: PathBuf,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
    },
    /// Check the class-count doubling on layout trees.
    Cwcheck {
        /// Random graphs of order up to N.
        #[arg(long, conflicts_with = "graph")]
        n: Option<usize>,
        /// A fixed graph, checked on a balanced tree and random trees.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Explicit layout tree for --graph, e.g. "((1,2),(3,4))".
        #[arg(long, requires = "graph")]
        tree: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Bounds, construction size and exact optimum for a range of n.
    Scan {
        from: usize,
        to: usize,
        /// Skip the exact solver above this n.
        #[arg(long, default_value_t = 14)]
        solve_max: usize,
    },
}

struct Outcome {
    code: u8,
    stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { code: 0, stdout }
    }
}

type CmdResult = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

impl GlobalOpts {
    fn format(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        }
    }

    fn solver(&self) -> SolverOptions {
        SolverOptions {
            strategy: match self.strategy {
                StrategyArg::Exhaustive => Strategy::Exhaustive,
                StrategyArg::Bnb => Strategy::BranchAndBound,
            },
            size_cap: self.cap,
            workers: self.workers,
            seed: self.seed,
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Gen { kind, n } => cmd_gen(*kind, *n),
        Command::Verify { graph, code, d } => cmd_verify(g, graph, code, *d),
        Command::Pattern { n, ascii } => cmd_pattern(g, *n, *ascii),
        Command::Conditions { code } => cmd_conditions(g, code),
        Command::Solve { graph, d } => cmd_solve(g, graph, *d),
        Command::Twins { graph, d } => cmd_twins(g, graph, *d),
        Command::Export { graph, d } => cmd_export(graph, *d),
        Command::Cwcheck {
            n,
            graph,
            tree,
            trials,
        } => cmd_cwcheck(g, *n, graph.as_deref(), tree.as_deref(), *trials),
        Command::Scan { from, to, solve_max } => cmd_scan(g, *from, *to, *solve_max),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Result<GraphFile, String> {
    parse_graph(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn json_line(v: &Value) -> String {
    format!("{v}\n")
}

fn cmd_gen(kind: GraphKind, n: usize) -> CmdResult {
    let text = match kind {
        GraphKind::Cycle => write_graph(&cycle(n).map_err(|e| e.to_string())?, VertexLabels::Plain),
        GraphKind::Prism => {
            let (g, idx) = cycle_prism(n).map_err(|e| e.to_string())?;
            write_graph(&g, VertexLabels::Prism(idx))
        }
    };
    Ok(Outcome::ok(text))
}

/// Reads a code: a two-line bitstring on prisms, a single bitstring of the
/// graph's order, or a list of vertex labels.
fn parse_code(text: &str, graph: &Graph, labels: &VertexLabels) -> Result<VertexSet, String> {
    let order = graph.order();
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let is_bits = |l: &str| !l.is_empty() && l.chars().all(|c| c == '0' || c == '1');
    if let VertexLabels::Prism(idx) = labels {
        if lines.len() == 2 && lines.iter().all(|l| l.len() == idx.n && !l.contains(char::is_whitespace)) {
            let code = CodePair::parse(text).map_err(|e| e.to_string())?;
            return Ok(code.to_vertex_set());
        }
    }
    if lines.len() == 1 && order > 1 && lines[0].len() == order && is_bits(lines[0]) {
        return Ok(VertexSet::from_iter(
            order,
            lines[0].char_indices().filter(|&(_, c)| c == '1').map(|(k, _)| k),
        ));
    }
    let mut set = VertexSet::new(order);
    for tok in lines.iter().flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ',')) {
        if tok.is_empty() {
            continue;
        }
        let v = labels
            .parse(tok, order)
            .ok_or_else(|| format!("bad vertex label or bitstring '{tok}'"))?;
        set.insert(v);
    }
    Ok(set)
}

fn cmd_verify(g: &GlobalOpts, graph: &Path, code: &Path, d: usize) -> CmdResult {
    let file = load_graph(graph)?;
    let set = parse_code(&read(code)?, &file.graph, &file.labels)?;
    let report = is_identifying_code(&file.graph, d, &set).map_err(|e| e.to_string())?;
    let stdout = match g.format(Format::Json) {
        Format::Json => json_line(&report.to_json(&file.labels)),
        Format::Text => match report.failure {
            None => "valid\n".to_string(),
            Some(f) => {
                let vs: Vec<String> = f.vertices().into_iter().map(|v| file.labels.label(v)).collect();
                format!("invalid: {} {}\n", f.kind(), vs.join(" "))
            }
        },
    };
    Ok(Outcome {
        code: if report.valid() { 0 } else { EXIT_INVALID },
        stdout,
    })
}

fn cmd_pattern(g: &GlobalOpts, n: usize, ascii: bool) -> CmdResult {
    let code = pattern_code(n).map_err(|e| e.to_string())?;
    let (exact, analytic) = upper_bound(n).map_err(|e| e.to_string())?;
    let stdout = match g.format(Format::Text) {
        Format::Json => {
            let text = code.to_text();
            let rows: Vec<&str> = text.lines().collect();
            json_line(&json!({
                "n": n, "x": rows[0], "xbar": rows[1], "size": code.size(),
                "upper_exact": exact, "upper_analytic": analytic.to_string(),
            }))
        }
        Format::Text if ascii => format!("{}{}", code.to_text(), code.render_ascii()),
        Format::Text => code.to_text(),
    };
    Ok(Outcome::ok(stdout))
}

fn cmd_conditions(g: &GlobalOpts, path: &Path) -> CmdResult {
    let code = CodePair::parse(&read(path)?).map_err(|e| e.to_string())?;
    let report = lemma1_check(&code).map_err(|e| e.to_string())?;
    let one_based = |v: &[usize]| v.iter().map(|k| k + 1).collect::<Vec<_>>();
    let stdout = match g.format(Format::Text) {
        Format::Json => json_line(&json!({
            "n": code.n(),
            "holds": report.holds(),
            "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "bad_indices": one_based(&report.bad_indices),
            "bar_i_set": one_based(&report.bar_i_set),
        })),
        Format::Text => {
            let mut s = format!(
                "n = {}, size = {}, |Cbar| = {}\n",
                code.n(),
                code.size(),
                code.bar_count()
            );
            if report.holds() {
                s.push_str("all conditions hold\n");
            } else {
                s.push_str(&format!("{} violations:\n", report.violations.len()));
                for v in &report.violations {
                    s.push_str(&format!("  {v}\n"));
                }
            }
            s.push_str(&format!("bad indices: {:?}\n", one_based(&report.bad_indices)));
            s.push_str(&format!("bar I: {:?}\n", one_based(&report.bar_i_set)));
            s
        }
    };
    Ok(Outcome {
        code: if report.holds() { 0 } else { EXIT_INVALID },
        stdout,
    })
}

fn cmd_solve(g: &GlobalOpts, graph: &Path, d: usize) -> CmdResult {
    let file = load_graph(graph)?;
    let result = solve_min_idcode(&file.graph, d, &g.solver()).map_err(|e| e.to_string())?;
    let stdout = match g.format(Format::Json) {
        Format::Json => json_line(&result.to_json(&file.labels)),
        Format::Text => match result.status {
            Status::Optimal => {
                let code = result.code.as_ref().unwrap();
                let labels: Vec<String> = code.iter().map(|v| file.labels.label(v)).collect();
                format!("optimal {}: {}\n", code.len(), labels.join(" "))
            }
            Status::Infeasible => {
                let (u, v) = result.witness.unwrap();
                format!("infeasible: {} {}\n", file.labels.label(u), file.labels.label(v))
            }
            Status::CapExceeded => "cap-exceeded\n".to_string(),
        },
    };
    Ok(Outcome {
        code: if result.status == Status::Infeasible {
            EXIT_INFEASIBLE
        } else {
            0
        },
        stdout,
    })
}

fn cmd_twins(g: &GlobalOpts, graph: &Path, d: usize) -> CmdResult {
    let file = load_graph(graph)?;
    let twins = closed_twins(&file.graph, d).map_err(|e| e.to_string())?;
    let stdout = match g.format(Format::Text) {
        Format::Json => json_line(&json!(twins
            .iter()
            .map(|&(u, v)| json!([file.labels.json(u), file.labels.json(v)]))
            .collect::<Vec<_>>())),
        Format::Text => twins
            .iter()
            .map(|&(u, v)| format!("{} {}\n", file.labels.label(u), file.labels.label(v)))
            .collect(),
    };
    Ok(Outcome {
        code: if twins.is_empty() { 0 } else { EXIT_INFEASIBLE },
        stdout,
    })
}

fn cmd_export(graph: &Path, d: usize) -> CmdResult {
    let file = load_graph(graph)?;
    let inst = hitting_instance(&file.graph, d).map_err(|e| e.to_string())?;
    if let Some(&(u, v)) = inst.infeasible_pairs.first() {
        eprintln!(
            "instance infeasible: {} and {} have identical balls",
            file.labels.label(u),
            file.labels.label(v)
        );
        return Ok(Outcome {
            code: EXIT_INFEASIBLE,
            stdout: inst.export(),
        });
    }
    Ok(Outcome::ok(inst.export()))
}

fn cmd_cwcheck(
    g: &GlobalOpts,
    n: Option<usize>,
    graph: Option<&Path>,
    tree: Option<&str>,
    trials: usize,
) -> CmdResult {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut cases: Vec<(Graph, LayoutTree)> = Vec::new();
    match (graph, n) {
        (Some(path), _) => {
            let file = load_graph(path)?;
            let order = file.graph.order();
            if let Some(text) = tree {
                cases.push((file.graph.clone(), LayoutTree::parse(text).map_err(|e| e.to_string())?));
            } else {
                let all: Vec<usize> = (0..order).collect();
                cases.push((file.graph.clone(), LayoutTree::balanced(&all).map_err(|e| e.to_string())?));
                for _ in 0..trials {
                    cases.push((file.graph.clone(), LayoutTree::random(order, &mut rng).map_err(|e| e.to_string())?));
                }
            }
        }
        (None, Some(max)) => {
            if max == 0 {
                return Err("--n must be at least 1".into());
            }
            for _ in 0..trials {
                let order = rng.gen_range(1..=max);
                let p = rng.gen_range(0.1..0.9);
                let graph = random_graph(order, p, &mut rng);
                let t = LayoutTree::random(order, &mut rng).map_err(|e| e.to_string())?;
                cases.push((graph, t));
            }
        }
        (None, None) => return Err("give --n or --graph".into()),
    }

    let mut rows = Vec::new();
    let mut failures = 0;
    for (graph, t) in &cases {
        let c = check_doubling(graph, t).map_err(|e| e.to_string())?;
        failures += usize::from(!c.ok());
        rows.push((graph.order(), t.to_string(), c));
    }
    let stdout = match g.format(Format::Text) {
        Format::Json => json_line(&json!({
            "checks": rows.len(),
            "failures": failures,
            "results": rows.iter().map(|(order, t, c)| json!({
                "order": order, "tree": t, "base": c.base, "prism": c.prism, "ok": c.ok(),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s: String = rows
                .iter()
                .map(|(order, t, c)| {
                    format!(
                        "order {order} base {} prism {} {} {t}\n",
                        c.base,
                        c.prism,
                        if c.ok() { "ok" } else { "FAIL" }
                    )
                })
                .collect();
            s.push_str(&format!("{} checks, {failures} failures\n", rows.len()));
            s
        }
    };
    Ok(Outcome {
        code: if failures == 0 { 0 } else { EXIT_INVALID },
        stdout,
    })
}

fn cmd_scan(g: &GlobalOpts, from: usize, to: usize, solve_max: usize) -> CmdResult {
    if from < 9 || to < from {
        return Err(format!("scan needs 9 <= from <= to, got {from}..{to}"));
    }
    let opts = g.solver();
    let mut rows = Vec::new();
    for n in from..=to {
        let lower = lower_bound(n).map_err(|e| e.to_string())?;
        let (exact, analytic) = upper_bound(n).map_err(|e| e.to_string())?;
        let pattern = pattern_code(n).map_err(|e| e.to_string())?.size();
        let ic = if n <= solve_max {
            let (graph, _) = cycle_prism(n).map_err(|e| e.to_string())?;
            let mut o = opts;
            o.size_cap = Some(opts.size_cap.unwrap_or(exact));
            let r = solve_min_idcode(&graph, 1, &o).map_err(|e| e.to_string())?;
            r.size()
        } else {
            None
        };
        rows.push((n, lower, ic, pattern, exact, analytic));
    }
    let stdout = match g.format(Format::Text) {
        Format::Json => json_line(&json!(rows
            .iter()
            .map(|(n, lower, ic, pattern, exact, analytic)| json!({
                "n": n, "lower_bound": lower.to_string(), "ic": ic, "pattern": pattern,
                "upper_exact": exact, "upper_analytic": analytic.to_string(),
            }))
            .collect::<Vec<_>>())),
        Format::Text => {
            let mut s = format!("{:>4} {:>10} {:>4} {:>8} {:>12}\n", "n", "lower", "ic", "pattern", "upper");
            for (n, lower, ic, pattern, _, analytic) in &rows {
                let ic = ic.map_or("-".to_string(), |v| v.to_string());
                s.push_str(&format!("{n:>4} {:>10} {ic:>4} {pattern:>8} {:>12}\n", lower.to_string(), analytic.to_string()));
            }
            s
        }
    };
    Ok(Outcome::ok(stdout))
}
