use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use prodtri::io::{self, IoError};
use prodtri::phases::{self, Phase, PhaseError};
use prodtri::{oracle, orders, Dims, Triangulation};

#[derive(Parser)]
#[command(
    name = "prodtri",
    version,
    about = "Triangulations of products of two simplices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file holds a triangulation.
    Validate { file: PathBuf },
    /// List the flips available in a triangulation.
    Flips { file: PathBuf },
    /// Apply one flip, or replay a flip-sequence file.
    Apply {
        file: PathBuf,
        /// Circuit as `e1f1,e2f2|e2f1,e1f2` (minus part, then plus part).
        #[arg(
            long,
            conflicts_with = "sequence",
            required_unless_present = "sequence"
        )]
        circuit: Option<String>,
        #[arg(long)]
        sequence: Option<PathBuf>,
        /// Write the result here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Flip a triangulation of Δ^3 x Δ^{n-1} to the staircase.
    Connect {
        file: PathBuf,
        #[arg(long)]
        emit_sequence: Option<PathBuf>,
        /// Print one line per flip with the recorded counters.
        #[arg(long)]
        trace: bool,
    },
    /// Print the staircase triangulation of Δ^3 x Δ^{n-1}.
    Staircase {
        #[arg(long)]
        n: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Enumerate all triangulations of Δ^{m-1} x Δ^{n-1}.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Corpus cache directory (default: $PRODTRI_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Write the corpus document here.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build the flip graph of all triangulations and test connectivity.
    FlipGraph {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print the column quasiorder read off two rows.
    Orders {
        file: PathBuf,
        /// Two 1-based row indices.
        #[arg(long, num_args = 2, value_names = ["I1", "I2"], default_values_t = [1, 2])]
        rows: Vec<usize>,
    },
    /// Export the fine mixed subdivision of n Δ^{m-1}.
    ExportMixed {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    kind: &'static str,
    message: String,
    detail: serde_json::Value,
    /// Exit status 1 reports a negative verdict, 2 an error.
    code: u8,
}

impl Failure {
    fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            kind,
            message: message.into(),
            detail: serde_json::Value::Null,
            code: 2,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let detail = match &e {
            IoError::Invalid(r) => serde_json::to_value(r).unwrap_or_default(),
            IoError::Parse { line, column, .. } => json!({ "line": line, "column": column }),
            _ => serde_json::Value::Null,
        };
        Failure {
            kind: e.kind(),
            message: e.to_string(),
            detail,
            code: 2,
        }
    }
}

impl From<PhaseError> for Failure {
    fn from(e: PhaseError) -> Self {
        let (kind, detail) = match &e {
            PhaseError::WrongDims(_) => ("wrong_dims", serde_json::Value::Null),
            PhaseError::InvalidInput(r) => (
                "invalid_triangulation",
                serde_json::to_value(r).unwrap_or_default(),
            ),
            PhaseError::Precondition(_) => ("precondition", serde_json::Value::Null),
            PhaseError::ProofGap(g) => (
                "proof_gap",
                json!({
                    "phase": g.phase.to_string(),
                    "location": g.location,
                    "digest": g.digest,
                    "trees": g.trees,
                    "context": g.context.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                }),
            ),
        };
        Failure {
            kind,
            message: e.to_string(),
            detail,
            code: 2,
        }
    }
}

type Res = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Res {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::new("file", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dims(m: usize, n: usize) -> Result<Dims, Failure> {
    Dims::new(m, n).map_err(|e| Failure::new("dims", e.to_string()))
}

fn corpus(m: usize, n: usize, cache: Option<PathBuf>) -> Result<prodtri::Corpus, Failure> {
    let d = dims(m, n)?;
    match cache.or_else(io::default_cache_dir) {
        Some(dir) => Ok(io::cached_corpus(&dir, d)?),
        None => {
            oracle::enumerate_triangulations(d).map_err(|e| Failure::new("oracle", e.to_string()))
        }
    }
}

fn validate(file: &Path) -> Res {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::new("file", format!("{}: {e}", file.display())))?;
    let (d, trees) = io::parse_triangulation_file(&text)?.trees()?;
    let report = prodtri::triangulation::validate_collection(d, &trees);
    if report.is_valid() {
        let t = Triangulation::from_trees_unchecked(d, trees);
        println!(
            "valid: {} maximal simplices of Δ^{} x Δ^{}",
            t.len(),
            d.m() - 1,
            d.n() - 1
        );
        println!("digest {}", t.digest());
        Ok(())
    } else {
        println!("invalid: {report}");
        Err(Failure {
            kind: "invalid_triangulation",
            message: report.to_string(),
            detail: serde_json::to_value(&report).unwrap_or_default(),
            code: 1,
        })
    }
}

fn flips(file: &Path) -> Res {
    let t = io::read_triangulation(file)?;
    let all = prodtri::enumerate_flips(&t);
    for c in &all {
        println!("{}", c.circuit);
    }
    println!("{} flips", all.len());
    Ok(())
}

fn apply(
    file: &Path,
    circuit: Option<String>,
    sequence: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Res {
    let t = io::read_triangulation(file)?;
    let result = match (circuit, sequence) {
        (Some(spec), _) => {
            let x = io::parse_circuit(t.dims(), &spec)?;
            let cert = prodtri::supports_flip(&t, &x)
                .certificate()
                .ok_or_else(|| {
                    Failure::new("unsupported_flip", format!("no flip supported on {x}"))
                })?;
            prodtri::apply_flip(&t, &cert).map_err(|e| Failure::new("flip", e.to_string()))?
        }
        (None, Some(path)) => {
            let seq = io::read_sequence(&path)?;
            seq.replay(&t, true)
                .map_err(|e| Failure::new("replay", e.to_string()))?
        }
        (None, None) => return Err(Failure::new("usage", "need --circuit or --sequence")),
    };
    emit(out.as_deref(), &(io::triangulation_to_json(&result) + "\n"))
}

fn connect(file: &Path, emit_sequence: Option<PathBuf>, trace: bool) -> Res {
    let t = io::read_triangulation(file)?;
    let seq = phases::connect(&t)?;
    if trace {
        for (k, s) in seq.steps.iter().enumerate() {
            let m = s.measure.unwrap_or_default();
            let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
            println!(
                "{:>4} {:<3} {:<14} {:<40} tI={} tII={} starX={} second={} starY={}",
                k + 1,
                s.phase.to_string(),
                serde_json::to_value(s.kind)
                    .map(|v| v.to_string())
                    .unwrap_or_default()
                    .replace('"', ""),
                s.circuit.to_string(),
                m.t_one,
                m.t_two,
                opt(m.star_x),
                opt(m.second),
                opt(m.star_y)
            );
        }
    }
    for p in [Phase::One, Phase::Two, Phase::Three] {
        println!("phase {p}: {} flips", seq.count(p));
    }
    println!("{} flips", seq.len());
    println!("end digest {}", seq.end);
    if let Some(path) = emit_sequence {
        io::write_sequence(&path, &seq)?;
    }
    Ok(())
}

fn enumerate(m: usize, n: usize, cache: Option<PathBuf>, out: Option<PathBuf>) -> Res {
    let c = corpus(m, n, cache)?;
    if let Some(path) = out {
        let text = serde_json::to_string(&io::CorpusFile::from_corpus(&c)).expect("serializable");
        emit(Some(&path), &text)?;
    }
    println!("{}", c.len());
    Ok(())
}

fn flip_graph(m: usize, n: usize, cache: Option<PathBuf>) -> Res {
    let c = corpus(m, n, cache)?;
    let g = oracle::build_flip_graph(&c);
    let unreachable = g.unreachable();
    println!(
        "{} nodes, {} edges, {}",
        g.nodes,
        g.edges.len(),
        if unreachable == 0 {
            "connected"
        } else {
            "disconnected"
        }
    );
    if unreachable == 0 {
        Ok(())
    } else {
        Err(Failure {
            kind: "disconnected",
            message: format!("{unreachable} nodes unreachable from the first"),
            detail: json!({ "unreachable": unreachable }),
            code: 1,
        })
    }
}

fn show_orders(file: &Path, rows: &[usize]) -> Res {
    let t = io::read_triangulation(file)?;
    let m = t.dims().m();
    let (a, b) = (rows[0], rows[1]);
    if a == 0 || b == 0 || a > m || b > m || a == b {
        return Err(Failure::new(
            "usage",
            format!("rows must be two distinct indices in 1..={m}"),
        ));
    }
    let q = orders::restriction_order(&t, a - 1, b - 1)
        .map_err(|e| Failure::new("order", e.to_string()))?;
    println!("{q}");
    Ok(())
}

fn export_mixed(file: &Path, svg: Option<PathBuf>, out: Option<PathBuf>) -> Res {
    let t = io::read_triangulation(file)?;
    let doc = prodtri::export_mixed(&t);
    emit(
        out.as_deref(),
        &(serde_json::to_string_pretty(&doc).expect("serializable") + "\n"),
    )?;
    if let Some(path) = svg {
        let text = prodtri::render_svg(&t).map_err(|e| Failure::new("svg", e.to_string()))?;
        emit(Some(&path), &text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Res {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Flips { file } => flips(&file),
        Command::Apply {
            file,
            circuit,
            sequence,
            out,
        } => apply(&file, circuit, sequence, out),
        Command::Connect {
            file,
            emit_sequence,
            trace,
        } => connect(&file, emit_sequence, trace),
        Command::Staircase { n, out } => {
            if n == 0 || 4 * n > 128 {
                return Err(Failure::new("dims", "n must be between 1 and 32"));
            }
            emit(
                out.as_deref(),
                &(io::triangulation_to_json(&phases::staircase(n)) + "\n"),
            )
        }
        Command::Enumerate { m, n, cache, out } => enumerate(m, n, cache, out),
        Command::FlipGraph { m, n, cache } => flip_graph(m, n, cache),
        Command::Orders { file, rows } => show_orders(&file, &rows),
        Command::ExportMixed { file, svg, out } => export_mixed(&file, svg, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let doc = json!({ "error": f.kind, "message": f.message, "detail": f.detail });
            eprintln!("{doc}");
            ExitCode::from(f.code)
        }
    }
}
