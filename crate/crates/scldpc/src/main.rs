//! Command-line interface: inspect codes, enumerate cycles, spread,
//! compute spectra, optimize spreadings, simulate, and convert spreading
//! representations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scldpc::cycles::{count_binary_cycles, enumerate_block_cycles};
use scldpc::decoder::{estimate_ber, WindowDecoderConfig};
use scldpc::error::Error;
use scldpc::io;
use scldpc::mihao::{mihao_search, Objective, SearchConfig};
use scldpc::qc::Girth;
use scldpc::spectrum::average_per_node;
use scldpc::spreading::{edge_spread, search_space_size, SpreadingMatrix};

#[derive(Parser)]
#[command(name = "scldpc", version, about = "Quasi-cyclic spatially coupled LDPC code tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, regularity, and girth of an exponent matrix.
    Inspect {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate block-cycles, optionally counting binary cycles too.
    Cycles {
        matrix: PathBuf,
        /// Largest cycle length to enumerate.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Also count cycles of the expanded binary graph.
        #[arg(long)]
        binary: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Terminated convolutional exponent matrix from a spreading.
    Spread {
        matrix: PathBuf,
        spreading: PathBuf,
        /// Number of coupled sections L.
        #[arg(long, default_value_t = 10)]
        sections: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-node average block-cycle spectrum of a spread code (CSV).
    Spectrum {
        matrix: PathBuf,
        spreading: PathBuf,
        /// Largest cycle length in the spectrum.
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Greedy search for a spreading that minimizes harmful objects.
    Optimize {
        matrix: PathBuf,
        /// Memory m_s of the spreading.
        #[arg(long)]
        memory: u32,
        /// cycles:L, cycles-upto:L, or as:A,B.
        #[arg(long, default_value = "cycles-upto:8")]
        objective: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_backtracks: Option<u64>,
        #[arg(long)]
        max_tiers: Option<usize>,
        #[arg(long)]
        max_evaluations: Option<u64>,
        /// Dump the full evaluation trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo BER of a spread code over BPSK/AWGN (CSV).
    Simulate {
        matrix: PathBuf,
        spreading: PathBuf,
        /// SNR points in dB; repeat for a sweep.
        #[arg(long, required = true)]
        snr: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        frames: u64,
        /// Window size in periods; defaults to 5(m_s+1).
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = 100)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        sections: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Convert a spreading matrix between its two file forms.
    Convert {
        spreading: PathBuf,
        /// Target form.
        #[arg(long, value_enum)]
        to: SpreadingForm,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpreadingForm {
    Matrix,
    Bvector,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::BudgetExceeded(_) => 3,
                Error::Parse { .. } | Error::Io(_) => 2,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn read_matrix(path: &Path) -> scldpc::Result<scldpc::ExponentMatrix> {
    io::parse_exponent_matrix(&std::fs::read_to_string(path)?)
}

fn read_spreading(path: &Path) -> scldpc::Result<SpreadingMatrix> {
    io::parse_spreading_matrix(&std::fs::read_to_string(path)?)
}

fn emit(out: &OutputArgs, content: &str) -> scldpc::Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_objective(s: &str) -> scldpc::Result<Objective> {
    let usage = || Error::Parse {
        line: 1,
        message: format!("objective `{s}` is not cycles:L, cycles-upto:L, or as:A,B"),
    };
    let (kind, arg) = s.split_once(':').ok_or_else(usage)?;
    match kind {
        "cycles" => Ok(Objective::Cycles(arg.parse().map_err(|_| usage())?)),
        "cycles-upto" => Ok(Objective::CyclesUpTo(arg.parse().map_err(|_| usage())?)),
        "as" => {
            let (a, b) = arg.split_once(',').ok_or_else(usage)?;
            Ok(Objective::AbsorbingSets {
                a: a.parse().map_err(|_| usage())?,
                b: b.parse().map_err(|_| usage())?,
            })
        }
        _ => Err(usage()),
    }
}

fn run(cli: Cli) -> scldpc::Result<()> {
    match cli.command {
        Command::Inspect { matrix, format, out } => {
            let p = read_matrix(&matrix)?;
            let h = p.expand();
            let g = h.tanner_graph();
            let girth = g.girth();
            let col_degs: Vec<usize> = (0..g.variable_count()).map(|v| g.variable_degree(v)).collect();
            let row_degs: Vec<usize> = (0..g.check_count()).map(|c| g.check_degree(c)).collect();
            let regular = col_degs.windows(2).all(|w| w[0] == w[1])
                && row_degs.windows(2).all(|w| w[0] == w[1]);
            let girth_str = match girth {
                Girth::Finite(v) => v.to_string(),
                Girth::Infinite => "infinite".to_string(),
            };
            let text = match format {
                Format::Json => serde_json::json!({
                    "block_rows": p.rows(),
                    "block_cols": p.cols(),
                    "lifting": p.lifting(),
                    "rows": h.row_count(),
                    "cols": h.col_count(),
                    "ones": h.ones(),
                    "regular": regular,
                    "max_column_degree": col_degs.iter().max().copied().unwrap_or(0),
                    "max_row_degree": row_degs.iter().max().copied().unwrap_or(0),
                    "girth": girth.finite(),
                })
                .to_string()
                    + "\n",
                _ => {
                    let mut s = String::new();
                    let _ = writeln!(s, "exponent matrix: {} x {}, N = {}", p.rows(), p.cols(), p.lifting());
                    let _ = writeln!(s, "binary matrix:   {} x {}, {} ones", h.row_count(), h.col_count(), h.ones());
                    let _ = writeln!(s, "regular:         {regular}");
                    let _ = writeln!(s, "girth:           {girth_str}");
                    s
                }
            };
            emit(&out, &text)
        }
        Command::Cycles {
            matrix,
            max_len,
            binary,
            format,
            out,
        } => {
            let p = read_matrix(&matrix)?;
            let list = enumerate_block_cycles(&p, max_len)?;
            let text = match format {
                Format::Json => list.to_json() + "\n",
                _ => {
                    let mut s = String::new();
                    for (len, count) in list.counts_by_length() {
                        let _ = writeln!(s, "block-cycles of length {len}: {count}");
                    }
                    if binary {
                        let g = p.expand().tanner_graph();
                        for (len, _) in list.counts_by_length() {
                            let c = count_binary_cycles(&g, len)?;
                            let _ = writeln!(s, "binary cycles of length {len}: {c}");
                        }
                    }
                    s
                }
            };
            emit(&out, &text)
        }
        Command::Spread {
            matrix,
            spreading,
            sections,
            out,
        } => {
            let p = read_matrix(&matrix)?;
            let b = read_spreading(&spreading)?;
            let tc = edge_spread(&p, &b)?.terminate(sections);
            emit(&out, &io::format_exponent_matrix(tc.matrix()))
        }
        Command::Spectrum {
            matrix,
            spreading,
            max_len,
            out,
        } => {
            let p = read_matrix(&matrix)?;
            let b = read_spreading(&spreading)?;
            let s = average_per_node(&p, &b, max_len)?;
            emit(&out, &io::spectrum_csv(&s))
        }
        Command::Optimize {
            matrix,
            memory,
            objective,
            seed,
            max_backtracks,
            max_tiers,
            max_evaluations,
            trace,
            format,
            out,
        } => {
            let p = read_matrix(&matrix)?;
            let objective = parse_objective(&objective)?;
            let cfg = SearchConfig {
                seed,
                max_backtracks,
                max_tiers,
                max_evaluations,
                strict: false,
                record_trace: trace.is_some(),
            };
            let b0 = SpreadingMatrix::zero(p.rows(), p.cols(), memory);
            let outcome = mihao_search(&p, objective, b0, &cfg)?;
            if let Some(path) = trace {
                std::fs::write(path, serde_json::to_string_pretty(&outcome.trace).unwrap())?;
            }
            let spectrum = average_per_node(&p, &outcome.best, objective.max_target_length() + 2)?;
            let bv = outcome.best.b_encode();
            let text = match format {
                Format::Json => serde_json::json!({
                    "b_vector": bv.values(),
                    "memory": memory,
                    "score": outcome.best_score,
                    "spectrum": spectrum.decimals(),
                    "evaluations": outcome.evaluations,
                    "visits": outcome.visits,
                    "backtracks": outcome.backtracks,
                    "deepest_tier": outcome.deepest_tier,
                    "stopped_early": outcome.stopped_early,
                    "search_space": search_space_size(p.rows(), p.cols(), memory).to_string(),
                })
                .to_string()
                    + "\n",
                _ => {
                    let values: Vec<String> = bv.values().iter().map(u64::to_string).collect();
                    let decs: Vec<String> = spectrum.decimals().iter().map(f64::to_string).collect();
                    let mut s = String::new();
                    let _ = writeln!(s, "best b-vector: {} {}", p.rows(), memory);
                    let _ = writeln!(s, "{}", values.join(" "));
                    let _ = writeln!(s, "score (per period): {}", outcome.best_score);
                    let _ = writeln!(s, "spectrum: [{}]", decs.join(", "));
                    let _ = writeln!(
                        s,
                        "evaluations: {}, visits: {}, backtracks: {}, deepest tier: {}",
                        outcome.evaluations, outcome.visits, outcome.backtracks, outcome.deepest_tier
                    );
                    let _ = writeln!(s, "stopped early: {}", outcome.stopped_early);
                    let _ = writeln!(
                        s,
                        "search space: {} spreadings",
                        search_space_size(p.rows(), p.cols(), memory)
                    );
                    s
                }
            };
            emit(&out, &text)
        }
        Command::Simulate {
            matrix,
            spreading,
            snr,
            frames,
            window,
            iters,
            sections,
            seed,
            jobs,
            out,
        } => {
            if let Some(jobs) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global()
                    .ok();
            }
            let p = read_matrix(&matrix)?;
            let b = read_spreading(&spreading)?;
            let tc = edge_spread(&p, &b)?.terminate(sections);
            let mut cfg = WindowDecoderConfig::defaults_for_memory(b.memory());
            if let Some(w) = window {
                cfg.window = w;
            }
            cfg.iterations = iters;
            let results = estimate_ber(&tc, &snr, frames, cfg, seed)?;
            emit(&out, &io::ber_csv(&results))
        }
        Command::Convert { spreading, to, out } => {
            let b = read_spreading(&spreading)?;
            let text = match to {
                SpreadingForm::Matrix => io::format_spreading_matrix(&b),
                SpreadingForm::Bvector => io::format_b_vector(&b),
            };
            emit(&out, &text)
        }
    }
}
