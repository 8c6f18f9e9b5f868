//! `turan`: exact experiments on generalized Turán numbers.
//!
//! Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
//! invariant violation.

mod input;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use turan_core::coloring::{critical_r, criticality, embedding_safety_check};
use turan_core::multipartite::{optimize_parts, Mode, OptimizeConfig};
use turan_core::search::{min_copy_degree_audit, symmetrize_search};
use turan_core::stability::{classify, multipartite_distance, near_extremal_profile, DistanceConfig, DistanceMode};
use turan_core::{
    chromatic_number, construct, copy_degree, count_copies, emit_graph6, enumerate_free, ex_brute, Construction,
    Count, FamilyKind, FamilySpec, PartSizes, SearchConfig,
};

use input::{graph_arg, number_list, text_arg};
use report::{CliError, Manifest};

#[derive(Parser)]
#[command(name = "turan", version, about = "Exact finite-n computations for generalized Turán problems")]
struct Cli {
    /// Seed for every randomized subroutine.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; reports are identical for every value.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Record wall time in the manifest (the only field that varies between runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct SearchArgs {
    /// Node budget of the generation tree.
    #[arg(long, default_value_t = 50_000_000)]
    max_nodes: u64,
    /// Restrict to edge-maximal F-free graphs.
    #[arg(long)]
    maximal_only: bool,
    /// Largest order the enumeration accepts.
    #[arg(long, default_value_t = turan_core::search::DEFAULT_ORDER_CAP)]
    order_cap: usize,
}

impl SearchArgs {
    fn config(&self, jobs: usize) -> SearchConfig {
        SearchConfig {
            max_nodes: self.max_nodes,
            maximal_only: self.maximal_only,
            parallelism: jobs,
            order_cap: self.order_cap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizeMode {
    Exact,
    Hillclimb,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count copies of H in G.
    Count {
        #[arg(long)]
        h: String,
        #[arg(long)]
        g: String,
        /// Also report the copy degree of every vertex of G.
        #[arg(long)]
        degrees: bool,
    },
    /// ex(n, H, F) by exhaustive search.
    Ex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: String,
        #[arg(long)]
        f: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Print the retained witnesses as graph6, one per line, instead of JSON.
        #[arg(long)]
        witnesses: bool,
        /// Add the minimum copy-degree audit against T(n, chi(F) - 1).
        #[arg(long)]
        audit: bool,
    },
    /// Stream one graph6 line per isomorphism class of F-free graphs on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Turán-good / weakly Turán-good verdict at this n.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: String,
        #[arg(long)]
        f: String,
        #[command(flatten)]
        search: SearchArgs,
        /// Node budget of each exact distance computation.
        #[arg(long, default_value_t = 50_000_000)]
        distance_budget: u64,
    },
    /// Every F-free class with at least ex(n, H, F) - slack copies, with its
    /// exact distance to complete (chi(F) - 1)-partite structure.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: String,
        #[arg(long)]
        f: String,
        /// Absolute slack in copies of H.
        #[arg(long, default_value_t = 0)]
        slack: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 50_000_000)]
        distance_budget: u64,
    },
    /// Colour-critical vertices and edges of F and the parameter r.
    Criticality {
        #[arg(long)]
        f: String,
        /// With --parts, check whether degree < r graphs inside the parts create new copies of this graph.
        #[arg(long, requires = "parts")]
        h: Option<String>,
        /// Part sizes, comma-separated.
        #[arg(long, requires = "h")]
        parts: Option<String>,
        #[arg(long, default_value_t = 10_000_000)]
        safety_budget: u64,
    },
    /// Best part sizes of a complete k-partite host for copies of H.
    Optimize {
        #[arg(long)]
        h: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = OptimizeMode::Exact)]
        mode: OptimizeMode,
        /// Largest number of part vectors exact mode may enumerate.
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Edge-edit distance from G to complete multipartite graphs with at most k parts.
    Distance {
        #[arg(long)]
        g: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = DistMode::Exact)]
        mode: DistMode,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Zykov symmetrization from G and from random K_{k+1}-free restarts.
    Symmetrize {
        /// K_{k+1}-free seed graph.
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
    },
    /// Build a named family or a construction from a JSON instance.
    Construct {
        /// Construction JSON, inline or @file.
        #[arg(long, conflicts_with = "family")]
        spec: Option<String>,
        #[arg(long, value_enum)]
        family: Option<Family>,
        /// Family parameters, comma-separated.
        #[arg(long, default_value = "")]
        params: String,
        /// Print only the graph6 line.
        #[arg(long)]
        graph6: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Clique,
    Path,
    Cycle,
    Star,
    CompleteMultipartite,
    Turan,
    UnionOfCliques,
    BookF2,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Clique => FamilyKind::Clique,
            Family::Path => FamilyKind::Path,
            Family::Cycle => FamilyKind::Cycle,
            Family::Star => FamilyKind::Star,
            Family::CompleteMultipartite => FamilyKind::CompleteMultipartite,
            Family::Turan => FamilyKind::Turan,
            Family::UnionOfCliques => FamilyKind::UnionOfCliques,
            Family::BookF2 => FamilyKind::BookF2,
        }
    }
}

/// A failed run: the error plus a partial report when there is one.
struct Failure {
    err: CliError,
    partial: Option<String>,
}

impl From<CliError> for Failure {
    fn from(err: CliError) -> Self {
        Failure { err, partial: None }
    }
}

impl Manifest {
    fn check<T, E: Into<CliError>>(&self, r: Result<T, E>) -> Result<T, Failure> {
        r.map_err(|e| {
            let err = e.into();
            Failure {
                partial: self.partial(&err),
                err,
            }
        })
    }
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|s| s + "\n").collect()
}

fn run(cli: Cli) -> Result<String, Failure> {
    let Cli {
        seed,
        jobs,
        timing,
        command,
    } = cli;
    let manifest = |name| Manifest::new(name, seed, timing);
    match command {
        Command::Count { h, g, degrees } => {
            let (hg, gg) = (graph_arg(&h)?, graph_arg(&g)?);
            let m = manifest("count").instance("h", &h).instance("g", &g);
            let count = count_copies(&hg, &gg);
            let degs = if degrees {
                Some(m.check((0..gg.n()).map(|v| copy_degree(&hg, &gg, v)).collect::<Result<Vec<Count>, _>>().map_err(|e| CliError::Input(e.to_string())))?)
            } else {
                None
            };
            let mut result = json!({ "h": emit_graph6(&hg), "g": emit_graph6(&gg), "count": count });
            if let Some(d) = degs {
                result["degrees"] = json!(d);
            }
            Ok(m.report(result) + "\n")
        }
        Command::Ex {
            n,
            h,
            f,
            search,
            witnesses,
            audit,
        } => {
            let (hg, fg) = (graph_arg(&h)?, graph_arg(&f)?);
            let cfg = search.config(jobs);
            let m = manifest("ex")
                .instance("n", n)
                .instance("h", &h)
                .instance("f", &f)
                .instance("maximalOnly", cfg.maximal_only)
                .budget("maxNodes", cfg.max_nodes)
                .budget("orderCap", cfg.order_cap);
            let report = m.check(ex_brute(n, &hg, &fg, &cfg))?;
            if witnesses {
                return Ok(lines(report.witnesses));
            }
            let mut result = serde_json::to_value(&report).expect("plain data");
            if audit {
                let k = chromatic_number(&fg).saturating_sub(1).max(1);
                let table = m.check(min_copy_degree_audit(&report, &hg, k))?;
                result["audit"] = serde_json::to_value(table).expect("plain data");
            }
            Ok(m.report(result) + "\n")
        }
        Command::Enumerate { n, f, search } => {
            let fg = graph_arg(&f)?;
            let cfg = search.config(jobs);
            let m = manifest("enumerate").instance("n", n).instance("f", &f);
            let graphs = m.check(enumerate_free(n, &fg, &cfg))?;
            Ok(lines(graphs.iter().map(emit_graph6)))
        }
        Command::Classify {
            n,
            h,
            f,
            search,
            distance_budget,
        } => {
            let (hg, fg) = (graph_arg(&h)?, graph_arg(&f)?);
            let cfg = search.config(jobs);
            let dc = DistanceConfig {
                budget: distance_budget,
                seed,
                ..Default::default()
            };
            let m = manifest("classify")
                .instance("n", n)
                .instance("h", &h)
                .instance("f", &f)
                .instance("maximalOnly", cfg.maximal_only)
                .budget("maxNodes", cfg.max_nodes)
                .budget("distanceBudget", distance_budget);
            let verdict = m.check(classify(n, &hg, &fg, &cfg, &dc))?;
            Ok(m.report(verdict) + "\n")
        }
        Command::Profile {
            n,
            h,
            f,
            slack,
            format,
            search,
            distance_budget,
        } => {
            let (hg, fg) = (graph_arg(&h)?, graph_arg(&f)?);
            let cfg = search.config(jobs);
            let dc = DistanceConfig {
                budget: distance_budget,
                seed,
                ..Default::default()
            };
            let m = manifest("profile")
                .instance("n", n)
                .instance("h", &h)
                .instance("f", &f)
                .instance("slack", slack)
                .budget("maxNodes", cfg.max_nodes)
                .budget("distanceBudget", distance_budget);
            let profile = m.check(near_extremal_profile(n, &hg, &fg, slack, &cfg, &dc))?;
            match format {
                Format::Json => Ok(m.report(profile) + "\n"),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &profile.rows {
                        w.serialize(row).map_err(|e| CliError::Invariant(e.to_string()))?;
                    }
                    let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
                    Ok(String::from_utf8(bytes).expect("ASCII"))
                }
            }
        }
        Command::Criticality {
            f,
            h,
            parts,
            safety_budget,
        } => {
            let fg = graph_arg(&f)?;
            let m = manifest("criticality").instance("f", &f);
            let report = criticality(&fg);
            let r = critical_r(&fg);
            let mut result = json!({ "criticality": report, "criticalR": r });
            if let (Some(h), Some(parts)) = (h, parts) {
                let hg = graph_arg(&h)?;
                let p = PartSizes::new(number_list(&parts)?).map_err(|e| CliError::Input(e.to_string()))?;
                let rv = r.as_ref().map_or(0, |c| c.r);
                let m = m.instance("h", &h).instance("parts", p.sizes()).budget("safetyBudget", safety_budget);
                result["safety"] = json!(embedding_safety_check(&hg, rv, &p, safety_budget));
                return Ok(m.report(result) + "\n");
            }
            Ok(m.report(result) + "\n")
        }
        Command::Optimize {
            h,
            n,
            k,
            mode,
            budget,
            restarts,
        } => {
            let hg = graph_arg(&h)?;
            let mode = match mode {
                OptimizeMode::Exact => Mode::Exact,
                OptimizeMode::Hillclimb => Mode::Hillclimb,
            };
            let cfg = OptimizeConfig { budget, restarts, seed };
            let m = manifest("optimize")
                .instance("h", &h)
                .instance("n", n)
                .instance("k", k)
                .instance("mode", mode)
                .budget("budget", budget)
                .budget("restarts", restarts);
            let result = m.check(optimize_parts(&hg, n, k, mode, &cfg))?;
            Ok(m.report(result) + "\n")
        }
        Command::Distance {
            g,
            k,
            mode,
            budget,
            restarts,
        } => {
            let gg = graph_arg(&g)?;
            let mode = match mode {
                DistMode::Exact => DistanceMode::Exact,
                DistMode::Heuristic => DistanceMode::Heuristic,
            };
            let dc = DistanceConfig { budget, restarts, seed };
            let m = manifest("distance")
                .instance("g", &g)
                .instance("k", k)
                .instance("mode", mode)
                .budget("budget", budget)
                .budget("restarts", restarts);
            let d = m.check(multipartite_distance(&gg, k, mode, &dc))?;
            Ok(m.report(d) + "\n")
        }
        Command::Symmetrize { g, h, k, restarts } => {
            let (gg, hg) = (graph_arg(&g)?, graph_arg(&h)?);
            let m = manifest("symmetrize")
                .instance("g", &g)
                .instance("h", &h)
                .instance("k", k)
                .budget("restarts", restarts);
            let r = m.check(symmetrize_search(&gg, &hg, k, restarts, seed))?;
            let runs: Vec<_> = r
                .runs
                .iter()
                .map(|run| {
                    let (last, count) = run.last();
                    json!({
                        "start": emit_graph6(&run.start),
                        "final": emit_graph6(last),
                        "finalCount": count,
                        "steps": run.trajectory.len() - 1,
                        "trajectoryCounts": run.trajectory.iter().map(|(_, c)| c).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let result = json!({
                "best": emit_graph6(&r.best),
                "bestCount": r.best_count,
                "runs": runs,
            });
            Ok(m.report(result) + "\n")
        }
        Command::Construct {
            spec,
            family,
            params,
            graph6,
        } => {
            let construction = match (spec, family) {
                (Some(s), _) => {
                    let text = text_arg(&s)?;
                    serde_json::from_str::<Construction>(&text)
                        .map_err(|e| CliError::Input(format!("construction JSON: {e}")))?
                }
                (None, Some(fam)) => Construction::Family(FamilySpec {
                    kind: fam.into(),
                    parameters: if params.trim().is_empty() { Vec::new() } else { number_list(&params)? },
                }),
                (None, None) => return Err(CliError::Input("construct needs --spec or --family".into()).into()),
            };
            let m = manifest("construct").instance("construction", &construction);
            let (_, report) = m.check(construct(&construction))?;
            if graph6 {
                return Ok(report.graph6 + "\n");
            }
            Ok(m.report(report) + "\n")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(4);
    }
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(Failure { err, partial }) => {
            if let Some(p) = partial {
                println!("{p}");
            }
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
