//! Command-line front end: corpus scanning with ordered parallel output,
//! single-graph queries, vertex splitting, and recoloring-script execution.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::{Arc, Mutex};

use clap::{Parser, Subcommand, ValueEnum};

use critgraph::chromatic::{classify, find_coloring_excluding, is_delta_critical};
use critgraph::coloring::Coloring;
use critgraph::graph::{Graph, VertexPartition};
use critgraph::script::{execute_script, parse_script, render_script};
use critgraph::structures::BroomMode;
use critgraph::theorems::{csv_field, run_checks_with_mode, Budget, CheckId, Report};

/// Environment variable supplying the default worker count for `scan`.
pub const JOBS_ENV: &str = "CRITGRAPH_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "critgraph",
    about = "Chromatic indices, criticality, Kempe recoloring and structural checks for small graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the chromatic index and class of one graph
    Chi {
        /// graph6 line
        #[arg(long)]
        graph6: String,
    },
    /// Decide whether a graph is delta-critical
    Critical {
        /// graph6 line
        #[arg(long)]
        graph6: String,
        /// also print the critical edge list
        #[arg(long)]
        edges: bool,
    },
    /// Find a proper total edge coloring and print it in the text format
    Color {
        /// graph6 line
        #[arg(long)]
        graph6: String,
        /// number of colors (defaults to the chromatic index)
        #[arg(long)]
        colors: Option<usize>,
    },
    /// Run checks over a stream of graph6 lines and emit a report
    Scan {
        /// comma-separated check ids (default: all)
        #[arg(long, value_delimiter = ',')]
        checks: Vec<CheckIdArg>,
        /// canonical colorings per deleted edge (0 = full enumeration)
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// seed for deterministic sampling when the budget caps enumeration
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// worker count (default: $CRITGRAPH_JOBS or 1)
        #[arg(long)]
        jobs: Option<usize>,
        /// output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// read graph6 lines from this file instead of standard input
        #[arg(long)]
        input: Option<PathBuf>,
        /// broom enumeration scope for the broom_main check
        #[arg(long, default_value = "all")]
        mode: String,
        /// emit real elapsed milliseconds (breaks byte-identical reruns)
        #[arg(long)]
        timings: bool,
    },
    /// Split a vertex into two adjacent halves and print the result
    Split {
        /// graph6 line
        #[arg(long)]
        graph6: String,
        /// the vertex to split
        #[arg(long)]
        vertex: usize,
        /// neighbourhood bipartition, e.g. 1/2,3
        #[arg(long)]
        partition: String,
    },
    /// Parse, render, or execute a recoloring script
    Script {
        /// script file (default: standard input)
        #[arg(long)]
        input: Option<PathBuf>,
        /// graph6 line (required to execute)
        #[arg(long)]
        graph6: Option<String>,
        /// coloring file in the text format (required to execute)
        #[arg(long)]
        coloring: Option<PathBuf>,
        /// print the two-row matrix form instead of executing
        #[arg(long)]
        render: bool,
    },
}

/// Newtype so clap can parse check ids with a helpful error.
#[derive(Debug, Clone)]
pub struct CheckIdArg(pub CheckId);

impl std::str::FromStr for CheckIdArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<CheckId>().map(CheckIdArg)
    }
}

/// Scan configuration (resolved from flags and the environment).
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub checks: Vec<CheckId>,
    pub budget: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub jobs: usize,
    pub broom_mode: BroomMode,
    pub timings: bool,
}

impl ScanConfig {
    fn budget_struct(&self) -> Budget {
        Budget {
            per_edge_cap: self.budget,
            seed: self.seed,
        }
    }
}

/// Entry point used by `main` and by tests; returns the exit code
/// (0 = success, 1 = violations found or script failure, 2 = usage/IO).
pub fn run_cli<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version on stdout with success
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match cli.command {
        Command::Chi { graph6 } => cmd_chi(&graph6, stdout, stderr),
        Command::Critical { graph6, edges } => cmd_critical(&graph6, edges, stdout, stderr),
        Command::Color { graph6, colors } => cmd_color(&graph6, colors, stdout, stderr),
        Command::Scan {
            checks,
            budget,
            seed,
            jobs,
            format,
            input,
            mode,
            timings,
        } => {
            let broom_mode = match mode.parse::<BroomMode>() {
                Ok(m) => m,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    return 2;
                }
            };
            let jobs = jobs
                .or_else(|| {
                    std::env::var(JOBS_ENV)
                        .ok()
                        .and_then(|s| s.parse::<usize>().ok())
                })
                .unwrap_or(1)
                .max(1);
            let config = ScanConfig {
                checks: if checks.is_empty() {
                    CheckId::ALL.to_vec()
                } else {
                    checks.into_iter().map(|c| c.0).collect()
                },
                budget,
                seed,
                format,
                jobs,
                broom_mode,
                timings,
            };
            let result = match input {
                Some(path) => match std::fs::File::open(&path) {
                    Ok(f) => scan_corpus(&config, std::io::BufReader::new(f), stdout, stderr),
                    Err(e) => {
                        let _ = writeln!(stderr, "error: cannot open {}: {e}", path.display());
                        return 2;
                    }
                },
                None => scan_corpus(&config, std::io::stdin().lock(), stdout, stderr),
            };
            match result {
                Ok(summary) => {
                    if summary.violations > 0 {
                        1
                    } else {
                        0
                    }
                }
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
            }
        }
        Command::Split {
            graph6,
            vertex,
            partition,
        } => cmd_split(&graph6, vertex, &partition, stdout, stderr),
        Command::Script {
            input,
            graph6,
            coloring,
            render,
        } => cmd_script(input, graph6, coloring, render, stdout, stderr),
    }
}

fn decode(graph6: &str, stderr: &mut dyn Write) -> Result<Arc<Graph>, i32> {
    match Graph::from_graph6(graph6) {
        Ok(g) => Ok(Arc::new(g)),
        Err(e) => {
            let _ = writeln!(stderr, "error: graph6: {e}");
            Err(2)
        }
    }
}

fn cmd_chi(graph6: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let g = match decode(graph6, stderr) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let chi = critgraph::chromatic_index(&g);
    match classify(&g) {
        Ok(class) => {
            let _ = writeln!(stdout, "chi'={chi} class={class}");
        }
        Err(_) => {
            let _ = writeln!(stdout, "chi'=0 class=-");
        }
    }
    0
}

fn cmd_critical(graph6: &str, edges: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let g = match decode(graph6, stderr) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let _ = writeln!(stdout, "delta_critical={}", is_delta_critical(&g));
    if edges {
        let list: Vec<String> = critgraph::critical_edges(&g)
            .into_iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        let _ = writeln!(stdout, "critical_edges=[{}]", list.join(","));
    }
    0
}

fn cmd_color(
    graph6: &str,
    colors: Option<usize>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let g = match decode(graph6, stderr) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let k = colors.unwrap_or_else(|| critgraph::chromatic_index(&g).max(1));
    match find_coloring_excluding(&g, k, None) {
        Ok(Some(coloring)) => {
            let _ = write!(stdout, "{}", coloring.to_text());
            0
        }
        Ok(None) => {
            let _ = writeln!(stdout, "none");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn cmd_split(
    graph6: &str,
    vertex: usize,
    partition: &str,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let g = match decode(graph6, stderr) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let Some((left_text, right_text)) = partition.split_once('/') else {
        let _ = writeln!(stderr, "error: partition must be a,b/c,d");
        return 2;
    };
    let parse_side = |side: &str| -> Result<Vec<usize>, String> {
        side.split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad vertex {s:?}")))
            .collect()
    };
    let (left, right) = match (parse_side(left_text), parse_side(right_text)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => {
            let _ = writeln!(stderr, "error: partition: {e}");
            return 2;
        }
    };
    match g.split_vertex(vertex, &VertexPartition::new(left, right)) {
        Ok(split) => {
            let _ = writeln!(stdout, "{}", split.to_graph6());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn cmd_script(
    input: Option<PathBuf>,
    graph6: Option<String>,
    coloring_path: Option<PathBuf>,
    render: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let text = match &input {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
                return 2;
            }
        },
        None => {
            let mut buf = String::new();
            if let Err(e) = std::io::Read::read_to_string(&mut std::io::stdin().lock(), &mut buf) {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            buf
        }
    };
    let program = match parse_script(&text) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    if render {
        let _ = write!(stdout, "{}", render_script(&program));
        return 0;
    }
    let (Some(graph6), Some(coloring_path)) = (graph6, coloring_path) else {
        let _ = writeln!(
            stderr,
            "error: executing a script needs --graph6 and --coloring (or pass --render)"
        );
        return 2;
    };
    let g = match decode(&graph6, stderr) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let coloring_text = match std::fs::read_to_string(&coloring_path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", coloring_path.display());
            return 2;
        }
    };
    let coloring = match Coloring::from_text(g.clone(), &coloring_text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: coloring: {e}");
            return 2;
        }
    };
    match execute_script(&program, &g, &coloring) {
        Ok(outcome) => {
            for step in &outcome.trace {
                let _ = writeln!(
                    stdout,
                    "step {} ok {} hash={:016x}",
                    step.index + 1,
                    step.text,
                    step.hash
                );
            }
            let _ = write!(stdout, "{}", outcome.coloring.to_text());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: script aborted at statement {}: {e}", e.step + 1);
            1
        }
    }
}

/// Summary of one scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanSummary {
    pub graphs: usize,
    pub parse_errors: usize,
    pub violations: usize,
}

enum RowBatch {
    Reports(Vec<Report>),
    BadLine { raw: String, message: String },
}

/// Runs the configured checks over every graph6 line of `input`, streaming
/// one report row per (graph, check) in input order regardless of worker
/// completion order. Malformed lines produce an `error` row and a
/// diagnostic on `err`, and the scan continues. Output is byte-identical
/// across runs and worker counts unless `timings` is set.
pub fn scan_corpus<R: BufRead>(
    config: &ScanConfig,
    input: R,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<ScanSummary> {
    let mut tasks: VecDeque<(usize, String)> = VecDeque::new();
    let mut lineno = 0usize;
    for line in input.lines() {
        let line = line?;
        lineno += 1;
        if line.trim().is_empty() {
            continue;
        }
        tasks.push_back((lineno, line.trim().to_string()));
    }
    let total = tasks.len();
    let order: Vec<usize> = tasks.iter().map(|(i, _)| *i).collect();

    let budget = config.budget_struct();
    let checks = config.checks.clone();
    let broom_mode = config.broom_mode;
    let queue = Arc::new(Mutex::new(tasks));
    let (tx, rx) = mpsc::channel::<(usize, RowBatch)>();
    let workers = config.jobs.min(total.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let queue = queue.clone();
            let tx = tx.clone();
            let checks = checks.clone();
            scope.spawn(move || loop {
                let task = queue.lock().unwrap().pop_front();
                let Some((idx, line)) = task else { break };
                let batch = match Graph::from_graph6(&line) {
                    Ok(graph) => {
                        let graph = Arc::new(graph);
                        RowBatch::Reports(run_checks_with_mode(
                            &graph, &checks, &budget, broom_mode,
                        ))
                    }
                    Err(e) => RowBatch::BadLine {
                        raw: line,
                        message: e.to_string(),
                    },
                };
                if tx.send((idx, batch)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        if config.format == OutputFormat::Csv {
            writeln!(out, "{}", Report::CSV_HEADER)?;
        }
        let mut summary = ScanSummary {
            graphs: 0,
            parse_errors: 0,
            violations: 0,
        };
        let mut pending: BTreeMap<usize, RowBatch> = BTreeMap::new();
        let mut emit_order = order.into_iter();
        let mut next = emit_order.next();
        for (idx, batch) in rx {
            pending.insert(idx, batch);
            while let Some(want) = next {
                let Some(batch) = pending.remove(&want) else {
                    break;
                };
                emit_batch(config, batch, &mut summary, out, err, want)?;
                next = emit_order.next();
            }
        }
        // drain anything left (only on channel hiccups; order map is full)
        for (idx, batch) in std::mem::take(&mut pending) {
            emit_batch(config, batch, &mut summary, out, err, idx)?;
        }
        Ok(summary)
    })
}

fn emit_batch(
    config: &ScanConfig,
    batch: RowBatch,
    summary: &mut ScanSummary,
    out: &mut dyn Write,
    err: &mut dyn Write,
    lineno: usize,
) -> std::io::Result<()> {
    match batch {
        RowBatch::Reports(reports) => {
            summary.graphs += 1;
            for mut report in reports {
                if !config.timings {
                    report.millis = 0;
                }
                summary.violations += report.violations.len();
                match config.format {
                    OutputFormat::Csv => writeln!(out, "{}", report.csv_row())?,
                    OutputFormat::Json => writeln!(out, "{}", report.to_json_line())?,
                }
            }
        }
        RowBatch::BadLine { raw, message } => {
            summary.parse_errors += 1;
            writeln!(err, "line {lineno}: {message}")?;
            match config.format {
                OutputFormat::Csv => writeln!(out, "{},error,0,0,0,0", csv_field(&raw))?,
                OutputFormat::Json => {
                    let obj = serde_json::json!({
                        "graph6": raw,
                        "check": "error",
                        "checked": 0,
                        "skipped": 0,
                        "violations": [],
                        "millis": 0,
                        "notes": [message],
                    });
                    writeln!(out, "{obj}")?;
                }
            }
        }
    }
    Ok(())
}
