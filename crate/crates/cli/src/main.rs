//! `convote`: rank ballots by convergence voting, compare rules, export the
//! underlying graphs, allocate seats and run the process simulations.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use convergence_voting::chain::{Distribution, TransitionMatrix};
use convergence_voting::graph::{self, GraphError, GraphFormat, PCGraph};
use convergence_voting::rational::{decimal, Rational};
use convergence_voting::rules::{self, Comparison, RulesError, Scoreboard, SeatMethod};
use convergence_voting::simulate::{self, SimulateError, SupportTrajectory, WalkReport};
use convergence_voting::{ballots, parse_profile, PreferenceProfile};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "convote",
    version,
    about = "Convergence voting on ranked ballots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence-voting scores and ranking.
    Rank {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Normalizer to use instead of voters * (candidates - 1).
        #[arg(long)]
        normalizer: Option<u64>,
    },
    /// Winners and scores under every supported rule.
    Compare {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Export the Condorcet graph, the complemented graph or the chain.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Stage::Condorcet)]
        stage: Stage,
        /// Defaults to json when CONVOTE_FORMAT=json, dot otherwise.
        #[arg(long, value_enum)]
        format: Option<ExportFormat>,
        #[arg(long)]
        normalizer: Option<u64>,
    },
    /// Seats proportional to the convergence scores.
    Seats {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        total: u64,
        #[arg(long, value_enum, default_value_t = Method::LargestRemainder)]
        method: Method,
        #[arg(long)]
        normalizer: Option<u64>,
    },
    /// Negotiation process or random deliberation walk.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[command(subcommand)]
        mode: Mode,
    },
}

#[derive(Subcommand)]
enum Mode {
    /// Iterate negotiation rounds from the uniform support.
    Negotiate {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_rounds: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Random walk of proposals accepted by randomly chosen voters.
    Walk {
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Ballot file, or `-` for standard input.
    file: String,
}

#[derive(Args)]
struct Output {
    /// JSON output.
    #[arg(long, conflicts_with = "table")]
    json: bool,
    /// Table output, overriding CONVOTE_FORMAT.
    #[arg(long)]
    table: bool,
    #[arg(long, env = "CONVOTE_FORMAT", value_enum, hide = true, default_value_t = Format::Table)]
    default_format: Format,
}

impl Output {
    fn json(&self) -> bool {
        self.json || (!self.table && self.default_format == Format::Json)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Condorcet,
    Complemented,
    Chain,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    LargestRemainder,
    Dhondt,
}

enum Failure {
    /// Bad input: unreadable file, parse or validation error.
    Input(String),
    Internal(String),
}

impl From<RulesError> for Failure {
    fn from(e: RulesError) -> Self {
        match e {
            RulesError::Ballot(_) | RulesError::NotAChain(_) | RulesError::NoSeats => {
                Failure::Input(e.to_string())
            }
            RulesError::Graph(g) => g.into(),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NormalizerTooSmall { .. } | GraphError::Overflow => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<SimulateError> for Failure {
    fn from(e: SimulateError) -> Self {
        match e {
            SimulateError::TooFewCandidates
            | SimulateError::Zero(_)
            | SimulateError::BadTolerance => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn load(input: &Input) -> Result<PreferenceProfile, Failure> {
    let text = if input.file == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("<stdin>: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&input.file)
            .map_err(|e| Failure::Input(format!("{}: {e}", input.file)))?
    };
    parse_profile(&text).map_err(|e| Failure::Input(format!("{}: {e}", input.file)))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn columns(rows: &[Vec<String>]) -> String {
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..width)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn ranking_line(board: &Scoreboard) -> String {
    board
        .ranking()
        .names(board.roster())
        .iter()
        .map(|tier| tier.join(" = "))
        .collect::<Vec<_>>()
        .join(" > ")
}

fn score_rows(names: &[String], scores: &[Rational]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["candidate".into(), "score".into(), "decimal".into()]];
    rows.extend(
        names
            .iter()
            .zip(scores)
            .map(|(n, q)| vec![n.clone(), q.to_string(), decimal(q)]),
    );
    rows
}

fn board_table(board: &Scoreboard) -> String {
    format!(
        "rule: {}\n{}ranking: {}\n",
        board.rule(),
        columns(&score_rows(board.roster().names(), board.scores())),
        ranking_line(board)
    )
}

fn comparison_table(c: &Comparison) -> String {
    let mut rows = vec![vec![
        "rule".to_string(),
        "winner".to_string(),
        "ranking".to_string(),
    ]];
    let mut details = String::new();
    for o in &c.outcomes {
        let (winner, ranking) = match &o.result {
            Ok(r) => {
                let names: Vec<&str> = r.winners.iter().map(|&i| c.roster.name(i)).collect();
                let w = if names.is_empty() {
                    "none".to_string()
                } else {
                    names.join(", ")
                };
                let rk = r
                    .board
                    .as_ref()
                    .map(ranking_line)
                    .unwrap_or_else(|| "-".into());
                if let Some(b) = &r.board {
                    details.push('\n');
                    details.push_str(&board_table(b));
                }
                (w, rk)
            }
            Err(e) => (format!("error: {e}"), "-".into()),
        };
        rows.push(vec![o.rule.name().to_string(), winner, ranking]);
    }
    columns(&rows) + &details
}

fn distribution_rows(d: &Distribution) -> Vec<Vec<String>> {
    score_rows(d.roster().names(), d.mass())
}

fn trajectory_table(t: &SupportTrajectory) -> String {
    let status = match t.converged_at {
        Some(r) => format!("converged after {r} rounds"),
        None => format!("not converged after {} rounds", t.l1_deltas.len()),
    };
    let last_delta = t.l1_deltas.last().copied().unwrap_or(0.0);
    format!(
        "{status}\nlast L1 change: {last_delta:e}\n{}",
        columns(&distribution_rows(t.last()))
    )
}

fn walk_table(w: &WalkReport) -> String {
    let mut rows = vec![vec![
        "candidate".to_string(),
        "visits".to_string(),
        "frequency".to_string(),
    ]];
    for ((n, c), f) in w.candidates.iter().zip(&w.visit_counts).zip(&w.frequencies) {
        rows.push(vec![n.clone(), c.to_string(), format!("{f:.6}")]);
    }
    format!("seed: {}\nsteps: {}\n{}", w.seed, w.steps, columns(&rows))
}

fn chain_export(t: &TransitionMatrix, format: ExportFormat) -> String {
    match format {
        ExportFormat::Dot => t.to_dot(),
        ExportFormat::Json => json_text(&t.to_json()),
    }
}

fn graph_export(g: &PCGraph, format: ExportFormat) -> String {
    let f = match format {
        ExportFormat::Dot => GraphFormat::Dot,
        ExportFormat::Json => GraphFormat::Json,
    };
    graph::export_graph(g, f)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Rank {
            input,
            output,
            normalizer,
        } => {
            let board = rules::convergence_scores(&load(&input)?, normalizer)?;
            Ok(if output.json() {
                json_text(&board.to_json())
            } else {
                board_table(&board)
            })
        }
        Command::Compare { input, output } => {
            let c = rules::compare_rules(&load(&input)?);
            Ok(if output.json() {
                json_text(&c.to_json())
            } else {
                comparison_table(&c)
            })
        }
        Command::Graph {
            input,
            stage,
            format,
            normalizer,
        } => {
            let format =
                format.unwrap_or_else(|| match std::env::var("CONVOTE_FORMAT").as_deref() {
                    Ok("json") => ExportFormat::Json,
                    _ => ExportFormat::Dot,
                });
            let profile = load(&input)?;
            let counts = ballots::pairwise_counts(&profile).map_err(RulesError::from)?;
            let g = graph::condorcet_graph(&counts);
            Ok(match stage {
                Stage::Condorcet => graph_export(&g, format),
                Stage::Complemented => graph_export(
                    &graph::complement(&g, profile.voters(), normalizer)?,
                    format,
                ),
                Stage::Chain => {
                    chain_export(&rules::convergence_chain(&profile, normalizer)?, format)
                }
            })
        }
        Command::Seats {
            input,
            output,
            total,
            method,
            normalizer,
        } => {
            let board = rules::convergence_scores(&load(&input)?, normalizer)?;
            let method = match method {
                Method::LargestRemainder => SeatMethod::LargestRemainder,
                Method::Dhondt => SeatMethod::DHondt,
            };
            let a = rules::allocate_seats(&board, total, method)?;
            Ok(if output.json() {
                json_text(&a.to_json())
            } else {
                let mut rows = vec![vec![
                    "candidate".to_string(),
                    "seats".to_string(),
                    "score".to_string(),
                    "decimal".to_string(),
                ]];
                for (i, name) in a.roster.names().iter().enumerate() {
                    let q = &board.scores()[i];
                    rows.push(vec![
                        name.clone(),
                        a.seats[i].to_string(),
                        q.to_string(),
                        decimal(q),
                    ]);
                }
                format!(
                    "method: {}\ntotal: {}\n{}",
                    method.name(),
                    total,
                    columns(&rows)
                )
            })
        }
        Command::Simulate { input, mode } => {
            let profile = load(&input)?;
            match mode {
                Mode::Negotiate {
                    tol,
                    max_rounds,
                    output,
                } => {
                    let t = simulate::negotiate(&profile, max_rounds, tol)?;
                    Ok(if output.json() {
                        json_text(&t.to_json())
                    } else {
                        trajectory_table(&t)
                    })
                }
                Mode::Walk {
                    steps,
                    seed,
                    output,
                } => {
                    let w = simulate::random_walk(&profile, steps, seed)?;
                    Ok(if output.json() {
                        json_text(&w.to_json())
                    } else {
                        walk_table(&w)
                    })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // A bug in a rule should surface as an internal error, not a panic trace.
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(1),
    }
}
