use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use twoblock::digraph::OrientedGraph;
use twoblock::embed::{embed_two_block, EmbedError, EmbedOptions};
use twoblock::experiments::{
    hunt, tightness_report, verify_theorem, DeltaRule, HuntConfig, HuntMode, SweepConfig,
};
use twoblock::generators::{
    blowup, circulant, directed_triangle, random_oriented_graph, random_tournament,
    random_with_min_semidegree, regular_tournament,
};
use twoblock::oracle::{contains_all_orientations, contains_two_block, find_pattern_embedding};
use twoblock::path::{Embedding, Orientation, PathPattern, TwoBlockSpec};
use twoblock::search::{longest_directed_path, SearchBudget, SearchError};

const EXIT_OPERATIONAL: u8 = 1;
const EXIT_THRESHOLD: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "twoblock",
    version,
    about = "Two-block oriented paths in oriented graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search node limit.
    #[arg(long, default_value_t = 200_000_000)]
    node_limit: u64,
    /// Search time limit in seconds.
    #[arg(long, default_value_t = 120)]
    time_limit: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget, String> {
        if self.node_limit == 0 || self.time_limit == 0 {
            return Err("budget limits must be positive".into());
        }
        Ok(SearchBudget::new(
            self.node_limit,
            Duration::from_secs(self.time_limit),
        ))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    BackFirst,
    ForwardFirst,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::BackFirst => Orientation::BackFirst,
            OrientationArg::ForwardFirst => Orientation::ForwardFirst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    RegularTournament,
    Circulant,
    Blowup,
    Random,
    RandomOriented,
    Tournament,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    /// δ⁰ > k/2
    Conjecture,
    /// δ⁰ ≥ k/2
    Question,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a two-block path into a graph meeting the semidegree threshold.
    Embed {
        /// Graph JSON file, or - for stdin.
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, value_enum, default_value = "back-first")]
        orientation: OrientationArg,
        /// Write the proof trace JSON here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Below threshold, ask the brute-force oracle instead of refusing.
        #[arg(long)]
        oracle_fallback: bool,
        /// Use a greedy maximal path instead of a certified maximum path.
        #[arg(long)]
        heuristic: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Brute-force search for a pattern, or for every k-arc orientation.
    Oracle {
        graph: PathBuf,
        /// Direction string such as FBFB.
        #[arg(long, conflicts_with = "all_orientations")]
        pattern: Option<String>,
        #[arg(long, requires = "k")]
        all_orientations: bool,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Generate a graph.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        /// Blowup part size.
        #[arg(long)]
        m: Option<usize>,
        /// Blowup base: "triangle" or a graph JSON file.
        #[arg(long, default_value = "triangle")]
        base: String,
        /// Circulant offsets, comma separated.
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<usize>,
        #[arg(long)]
        min_semidegree: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        arc_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_attempts: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact longest directed path.
    LongestPath {
        graph: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the embedder over generated hosts and cross-check.
    VerifyTheorem {
        /// Sweep config JSON; defaults apply to missing fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Extremal examples for an even k.
    Tightness {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Look for hosts missing some k-arc orientation.
    Hunt {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "conjecture")]
        rule: RuleArg,
        /// Explicit minimum semidegree; overrides --rule.
        #[arg(long)]
        min_delta: Option<usize>,
        /// Sample this many random hosts on n-max vertices instead of
        /// enumerating.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Error carrying its exit code.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(EXIT_OPERATIONAL, e.to_string())
    }
}

fn read_graph(path: &Path) -> Result<OrientedGraph, Fail> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    Ok(OrientedGraph::from_json(&text)?)
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Fail> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// One-block requests reduce to a long enough directed path.
fn embed_directed(
    g: &OrientedGraph,
    k: usize,
    orientation: Orientation,
    budget: &SearchBudget,
) -> Result<(), Fail> {
    use twoblock::path::Dir;
    let first = match orientation {
        Orientation::BackFirst => Dir::B,
        Orientation::ForwardFirst => Dir::F,
    };
    let pattern = PathPattern::new(vec![first; k]).map_err(|e| e.to_string())?;
    let lp = longest_directed_path(g, budget)?;
    let verts = lp.path.vertices();
    if lp.path.length() < k {
        return Err(Fail(
            EXIT_OPERATIONAL,
            format!(
                "longest directed path has {} arcs, fewer than {k}",
                lp.path.length()
            ),
        ));
    }
    let mut vertices = verts[..=k].to_vec();
    if first == Dir::B {
        vertices.reverse();
    }
    print_json(&Embedding { pattern, vertices })
}

#[allow(clippy::too_many_arguments)]
fn cmd_embed(
    graph: &Path,
    k: usize,
    ell: usize,
    orientation: Orientation,
    trace: Option<&Path>,
    oracle_fallback: bool,
    heuristic: bool,
    budget: SearchBudget,
) -> Result<(), Fail> {
    let g = read_graph(graph)?;
    if ell == k && k >= 1 {
        return embed_directed(&g, k, orientation, &budget);
    }
    let spec = TwoBlockSpec::new(k, ell, orientation)?;
    match embed_two_block(&g, spec, &EmbedOptions { budget, heuristic }) {
        Ok(out) => {
            if let Some(p) = trace {
                std::fs::write(p, out.trace.to_json())
                    .map_err(|e| format!("{}: {e}", p.display()))?;
            }
            println!("{}", out.embedding.to_json());
            Ok(())
        }
        Err(EmbedError::ThresholdNotMet { .. }) if oracle_fallback => {
            let r = contains_two_block(&g, spec, &budget);
            eprintln!("below threshold; oracle result follows");
            print_json(&r)?;
            if r.found {
                Ok(())
            } else {
                Err(Fail(
                    EXIT_THRESHOLD,
                    "below threshold and oracle found no embedding".into(),
                ))
            }
        }
        Err(e @ EmbedError::ThresholdNotMet { .. }) => Err(Fail(EXIT_THRESHOLD, e.to_string())),
        Err(EmbedError::CaseAnalysisExhausted(report)) => {
            eprintln!("{}", serde_json::to_string_pretty(&report)?);
            Err(Fail(
                EXIT_VIOLATION,
                "THEOREM-VIOLATION: case analysis exhausted".into(),
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_oracle(
    graph: &Path,
    pattern: Option<String>,
    all: bool,
    k: Option<usize>,
    budget: SearchBudget,
) -> Result<(), Fail> {
    let g = read_graph(graph)?;
    if all {
        let k = k.expect("clap requires --k");
        if k == 0 || k > 20 {
            return Err(Fail(EXIT_OPERATIONAL, "--k must be in 1..=20".into()));
        }
        return print_json(&contains_all_orientations(&g, k, &budget));
    }
    let pattern: PathPattern = pattern
        .ok_or_else(|| {
            Fail(
                EXIT_OPERATIONAL,
                "give --pattern or --all-orientations".into(),
            )
        })?
        .parse()?;
    print_json(&find_pattern_embedding(&g, &pattern, &budget))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    n: Option<usize>,
    m: Option<usize>,
    base: &str,
    offsets: &[usize],
    min_semidegree: Option<usize>,
    arc_prob: f64,
    seed: u64,
    max_attempts: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Fail> {
    let need_n =
        || n.ok_or_else(|| Fail(EXIT_OPERATIONAL, "--n is required for this family".into()));
    let g = match family {
        Family::RegularTournament => regular_tournament(need_n()?)?,
        Family::Circulant => circulant(need_n()?, offsets)?,
        Family::Blowup => {
            let base = if base == "triangle" {
                directed_triangle()
            } else {
                read_graph(Path::new(base))?
            };
            let m = m.ok_or_else(|| Fail(EXIT_OPERATIONAL, "--m is required for blowup".into()))?;
            blowup(&base, m)?
        }
        Family::Random => match min_semidegree {
            Some(d) => random_with_min_semidegree(need_n()?, d, seed, max_attempts)?,
            None => random_oriented_graph(need_n()?, arc_prob, seed),
        },
        Family::RandomOriented => {
            if !(0.0..=1.0).contains(&arc_prob) {
                return Err(Fail(
                    EXIT_OPERATIONAL,
                    "--arc-prob must lie in [0, 1]".into(),
                ));
            }
            random_oriented_graph(need_n()?, arc_prob, seed)
        }
        Family::Tournament => random_tournament(need_n()?, seed),
    };
    let text = match format {
        Format::Json => g.to_json() + "\n",
        Format::Dot => g.to_dot(),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_longest_path(graph: &Path, budget: SearchBudget) -> Result<(), Fail> {
    let g = read_graph(graph)?;
    let v = match longest_directed_path(&g, &budget) {
        Ok(lp) => json!({
            "length": lp.path.length(),
            "vertices": lp.path.vertices(),
            "certified": true,
            "nodes": lp.nodes,
        }),
        Err(SearchError::EmptyGraph) => json!({
            "length": null, "vertices": [], "certified": true, "nodes": 0,
        }),
        Err(SearchError::BudgetExhausted { best, nodes }) => json!({
            "length": best.as_ref().map(|p| p.length()),
            "vertices": best.as_ref().map_or(&[][..], |p| p.vertices()),
            "certified": false,
            "nodes": nodes,
        }),
        Err(e) => return Err(e.into()),
    };
    print_json(&v)
}

fn cmd_verify(
    config: Option<&Path>,
    jobs: Option<usize>,
    seed: Option<u64>,
    csv: Option<PathBuf>,
    json_out: Option<PathBuf>,
) -> Result<(), Fail> {
    let mut cfg: SweepConfig = match config {
        Some(p) => serde_json::from_str(
            &std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )?,
        None => SweepConfig::default(),
    };
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if csv.is_some() {
        cfg.csv_out = csv;
    }
    if json_out.is_some() {
        cfg.json_out = json_out;
    }
    let res = verify_theorem(&cfg)?;
    println!("{}", res.summary_json()?);
    if res.summary.theorem_violations > 0 {
        return Err(Fail(
            EXIT_VIOLATION,
            format!(
                "THEOREM-VIOLATION: {} rows flagged",
                res.summary.theorem_violations
            ),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Embed {
            graph,
            k,
            ell,
            orientation,
            trace,
            oracle_fallback,
            heuristic,
            budget,
        } => cmd_embed(
            &graph,
            k,
            ell,
            orientation.into(),
            trace.as_deref(),
            oracle_fallback,
            heuristic,
            budget.budget()?,
        ),
        Command::Oracle {
            graph,
            pattern,
            all_orientations,
            k,
            budget,
        } => cmd_oracle(&graph, pattern, all_orientations, k, budget.budget()?),
        Command::Gen {
            family,
            n,
            m,
            base,
            offsets,
            min_semidegree,
            arc_prob,
            seed,
            max_attempts,
            format,
            out,
        } => cmd_gen(
            family,
            n,
            m,
            &base,
            &offsets,
            min_semidegree,
            arc_prob,
            seed,
            max_attempts,
            format,
            out.as_deref(),
        ),
        Command::LongestPath { graph, budget } => cmd_longest_path(&graph, budget.budget()?),
        Command::VerifyTheorem {
            config,
            jobs,
            seed,
            csv,
            json,
        } => cmd_verify(config.as_deref(), jobs, seed, csv, json),
        Command::Tightness { k, budget } => print_json(&tightness_report(k, &budget.budget()?)?),
        Command::Hunt {
            n_max,
            k,
            rule,
            min_delta,
            samples,
            seed,
            jobs,
            csv,
            budget,
        } => {
            let rule = match (min_delta, rule) {
                (Some(d), _) => DeltaRule::AtLeast(d),
                (None, RuleArg::Conjecture) => DeltaRule::Conjecture,
                (None, RuleArg::Question) => DeltaRule::Question,
            };
            let cfg = HuntConfig {
                n_max,
                k,
                rule,
                mode: match samples {
                    Some(samples) => HuntMode::Random { samples, seed },
                    None => HuntMode::Exhaustive,
                },
                node_limit: budget.node_limit,
                time_limit_secs: budget.time_limit,
                jobs: jobs.unwrap_or(0),
            };
            let rep = hunt(&cfg)?;
            if let Some(p) = csv {
                std::fs::write(&p, rep.to_csv()?).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            print_json(&rep)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
