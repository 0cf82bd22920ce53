//! JSON documents for triangulations, flip sequences and corpora, and the
//! text syntax for circuits. Indices are 1-based on disk.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::graph::{Dims, GraphError, Simplex};
use crate::oracle::{self, Corpus, OracleError};
use crate::phases::{FlipSequence, FlipStep, Phase, PhaseMeasure, StepKind};
use crate::triangulation::{Triangulation, TriangulationError, ValidityReport};

/// Environment variable naming the default corpus cache directory.
pub const CACHE_ENV: &str = "PRODTRI_CACHE";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad dimensions: {0}")]
    Dims(GraphError),
    #[error("edge [{row}, {col}] is outside {m} x {n}")]
    EdgeOutOfRange {
        row: usize,
        col: usize,
        m: usize,
        n: usize,
    },
    #[error("not a triangulation: {0}")]
    Invalid(ValidityReport),
    #[error("bad circuit `{text}`: {message}")]
    Circuit { text: String, message: String },
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl IoError {
    /// A short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            IoError::Parse { .. } => "parse",
            IoError::Dims(_) => "dims",
            IoError::EdgeOutOfRange { .. } => "edge_out_of_range",
            IoError::Invalid(_) => "invalid_triangulation",
            IoError::Circuit { .. } => "circuit",
            IoError::Mismatch(_) => "mismatch",
            IoError::Oracle(_) => "oracle",
            IoError::File { .. } => "file",
        }
    }
}

fn parse_err(e: serde_json::Error) -> IoError {
    IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub type Edge = [usize; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub m: usize,
    pub n: usize,
    pub maximal_simplices: Vec<Vec<Edge>>,
}

pub fn simplex_edges(dims: Dims, s: Simplex) -> Vec<Edge> {
    dims.edges(s).map(|v| [v.row + 1, v.col + 1]).collect()
}

pub fn edges_simplex(dims: Dims, edges: &[Edge]) -> Result<Simplex, IoError> {
    let mut s = Simplex::empty();
    for &[row, col] in edges {
        if row == 0 || col == 0 || row > dims.m() || col > dims.n() {
            return Err(IoError::EdgeOutOfRange {
                row,
                col,
                m: dims.m(),
                n: dims.n(),
            });
        }
        s = s.with(dims.pos(row - 1, col - 1));
    }
    Ok(s)
}

impl TriangulationFile {
    pub fn from_triangulation(t: &Triangulation) -> Self {
        let dims = t.dims();
        TriangulationFile {
            m: dims.m(),
            n: dims.n(),
            maximal_simplices: t
                .maximal()
                .iter()
                .map(|&s| simplex_edges(dims, s))
                .collect(),
        }
    }

    /// Parsed trees in file order, without validation.
    pub fn trees(&self) -> Result<(Dims, Vec<Simplex>), IoError> {
        let dims = Dims::new(self.m, self.n).map_err(IoError::Dims)?;
        let trees = self
            .maximal_simplices
            .iter()
            .map(|e| edges_simplex(dims, e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((dims, trees))
    }

    pub fn to_triangulation(&self) -> Result<Triangulation, IoError> {
        let (dims, trees) = self.trees()?;
        Triangulation::new(dims, trees).map_err(|e| match e {
            TriangulationError::Invalid(r) => IoError::Invalid(r),
            other => IoError::Mismatch(other.to_string()),
        })
    }
}

/// One maximal simplex per line.
pub fn triangulation_to_json(t: &Triangulation) -> String {
    let file = TriangulationFile::from_triangulation(t);
    let rows: Vec<String> = file
        .maximal_simplices
        .iter()
        .map(|s| format!("    {}", serde_json::to_string(s).expect("serializable")))
        .collect();
    format!(
        "{{\n  \"m\": {},\n  \"n\": {},\n  \"maximal_simplices\": [\n{}\n  ]\n}}",
        file.m,
        file.n,
        rows.join(",\n")
    )
}

pub fn parse_triangulation_file(text: &str) -> Result<TriangulationFile, IoError> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn triangulation_from_json(text: &str) -> Result<Triangulation, IoError> {
    parse_triangulation_file(text)?.to_triangulation()
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), IoError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| IoError::File {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_triangulation(path: &Path) -> Result<Triangulation, IoError> {
    triangulation_from_json(&read(path)?)
}

pub fn write_triangulation(path: &Path, t: &Triangulation) -> Result<(), IoError> {
    write(path, &(triangulation_to_json(t) + "\n"))
}

fn parse_edge(tok: &str) -> Option<(usize, usize)> {
    let rest = tok.trim().strip_prefix('e')?;
    let (r, c) = rest.split_once('f')?;
    Some((r.parse().ok()?, c.parse().ok()?))
}

/// Parses `e1f1,e2f2|e2f1,e1f2` (minus part, then plus part).
pub fn parse_circuit(dims: Dims, text: &str) -> Result<Circuit, IoError> {
    let bad = |message: &str| IoError::Circuit {
        text: text.to_string(),
        message: message.to_string(),
    };
    let (minus, plus) = text
        .split_once('|')
        .ok_or_else(|| bad("expected `minus|plus`"))?;
    let side = |part: &str| -> Result<Simplex, IoError> {
        let mut edges = Vec::new();
        for tok in part.split(',').filter(|t| !t.trim().is_empty()) {
            let (r, c) =
                parse_edge(tok).ok_or_else(|| bad(&format!("bad edge `{}`", tok.trim())))?;
            edges.push([r, c]);
        }
        edges_simplex(dims, &edges)
    };
    let (minus, plus) = (side(minus)?, side(plus)?);
    Circuit::from_parts(dims, minus, plus).map_err(|e| bad(&e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub minus: Vec<Edge>,
    pub plus: Vec<Edge>,
    pub phase: Phase,
    pub kind: StepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<PhaseMeasure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSequenceFile {
    pub m: usize,
    pub n: usize,
    pub start: String,
    pub end: String,
    pub steps: Vec<StepRecord>,
}

impl FlipSequenceFile {
    pub fn from_sequence(seq: &FlipSequence) -> Self {
        let dims = seq.dims;
        FlipSequenceFile {
            m: dims.m(),
            n: dims.n(),
            start: seq.start.clone(),
            end: seq.end.clone(),
            steps: seq
                .steps
                .iter()
                .map(|s| StepRecord {
                    minus: simplex_edges(dims, s.circuit.minus()),
                    plus: simplex_edges(dims, s.circuit.plus()),
                    phase: s.phase,
                    kind: s.kind,
                    measure: s.measure,
                })
                .collect(),
        }
    }

    pub fn to_sequence(&self) -> Result<FlipSequence, IoError> {
        let dims = Dims::new(self.m, self.n).map_err(IoError::Dims)?;
        let steps = self
            .steps
            .iter()
            .map(|r| {
                let minus = edges_simplex(dims, &r.minus)?;
                let plus = edges_simplex(dims, &r.plus)?;
                let circuit =
                    Circuit::from_parts(dims, minus, plus).map_err(|e| IoError::Circuit {
                        text: format!("{:?}|{:?}", r.minus, r.plus),
                        message: e.to_string(),
                    })?;
                Ok(FlipStep {
                    circuit,
                    phase: r.phase,
                    kind: r.kind,
                    measure: r.measure,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(FlipSequence {
            dims,
            start: self.start.clone(),
            end: self.end.clone(),
            steps,
        })
    }
}

pub fn sequence_to_json(seq: &FlipSequence) -> String {
    serde_json::to_string_pretty(&FlipSequenceFile::from_sequence(seq)).expect("serializable")
}

pub fn sequence_from_json(text: &str) -> Result<FlipSequence, IoError> {
    serde_json::from_str::<FlipSequenceFile>(text)
        .map_err(parse_err)?
        .to_sequence()
}

pub fn read_sequence(path: &Path) -> Result<FlipSequence, IoError> {
    sequence_from_json(&read(path)?)
}

pub fn write_sequence(path: &Path, seq: &FlipSequence) -> Result<(), IoError> {
    write(path, &(sequence_to_json(seq) + "\n"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub triangulations: Vec<Vec<Vec<Edge>>>,
}

impl CorpusFile {
    pub fn from_corpus(c: &Corpus) -> Self {
        let dims = c.dims;
        CorpusFile {
            m: dims.m(),
            n: dims.n(),
            count: c.len(),
            triangulations: c
                .triangulations
                .iter()
                .map(|t| {
                    t.maximal()
                        .iter()
                        .map(|&s| simplex_edges(dims, s))
                        .collect()
                })
                .collect(),
        }
    }

    /// Members are trusted to be valid; they were written by the oracle.
    pub fn to_corpus(&self) -> Result<Corpus, IoError> {
        let dims = Dims::new(self.m, self.n).map_err(IoError::Dims)?;
        let triangulations = self
            .triangulations
            .iter()
            .map(|t| {
                let trees = t
                    .iter()
                    .map(|e| edges_simplex(dims, e))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Triangulation::from_trees_unchecked(dims, trees))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        if triangulations.len() != self.count {
            return Err(IoError::Mismatch(format!(
                "corpus header says {} triangulations, file has {}",
                self.count,
                triangulations.len()
            )));
        }
        Ok(Corpus {
            dims,
            triangulations,
        })
    }
}

pub fn corpus_path(dir: &Path, dims: Dims) -> PathBuf {
    dir.join(format!("corpus_m{}_n{}.json", dims.m(), dims.n()))
}

/// The cache directory from [`CACHE_ENV`], if set.
pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Loads the corpus from `dir` or enumerates it and writes it there.
pub fn cached_corpus(dir: &Path, dims: Dims) -> Result<Corpus, IoError> {
    let path = corpus_path(dir, dims);
    if path.exists() {
        let file: CorpusFile = serde_json::from_str(&read(&path)?).map_err(parse_err)?;
        let c = file.to_corpus()?;
        if c.dims != dims {
            return Err(IoError::Mismatch(format!(
                "{} holds a corpus for other dimensions",
                path.display()
            )));
        }
        return Ok(c);
    }
    let c = oracle::enumerate_triangulations(dims)?;
    write(
        &path,
        &serde_json::to_string(&CorpusFile::from_corpus(&c)).expect("serializable"),
    )?;
    Ok(c)
}
