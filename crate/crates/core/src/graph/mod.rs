//! Indexed relational graph: dense node/label vocabularies, canonical
//! TSV persistence and negative sampling.

mod sampling;

pub use sampling::{sample_negative, NegativeSampler, SamplingError};

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::projection::{Edge, ProjectionResult};

/// Bijective identifier ↔ dense index map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocab {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Vocab {
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: u32) -> &str {
        &self.names[index as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

/// `G = (V, E, L)` with dense indices and sorted, deduplicated edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationalGraph {
    pub nodes: Vocab,
    pub labels: Vocab,
    /// `(head, label, tail)` index triples, sorted.
    pub edges: Vec<(u32, u32, u32)>,
}

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed line {line} in {path}: {text}")]
    MalformedLine { path: String, line: usize, text: String },
}

impl RelationalGraph {
    /// Builds the graph from a projection: vocabularies in first-emission
    /// order, then the edge set sorted by indices.
    pub fn from_projection(pr: &ProjectionResult) -> Self {
        Self::from_edges(pr.edges.iter())
    }

    pub fn from_edges<'a>(edges: impl Iterator<Item = &'a Edge>) -> Self {
        let mut graph = RelationalGraph::default();
        for edge in edges {
            let h = graph.nodes.intern(&edge.head);
            let l = graph.labels.intern(&edge.label);
            let t = graph.nodes.intern(&edge.tail);
            graph.edges.push((h, l, t));
        }
        graph.edges.sort_unstable();
        graph.edges.dedup();
        graph
    }

    pub fn contains_edge(&self, edge: (u32, u32, u32)) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn edge_identifiers(&self, edge: (u32, u32, u32)) -> Edge {
        Edge::new(self.nodes.name(edge.0), self.labels.name(edge.1), self.nodes.name(edge.2))
    }

    /// Resolves an identifier-level edge to indices; `None` if any part is
    /// unknown to the vocabularies.
    pub fn resolve(&self, edge: &Edge) -> Option<(u32, u32, u32)> {
        Some((
            self.nodes.get(&edge.head)?,
            self.labels.get(&edge.label)?,
            self.nodes.get(&edge.tail)?,
        ))
    }

    /// FNV-1a over the vocabularies, used to pair checkpoints with the
    /// graph they were trained on.
    pub fn vocab_hash(&self) -> u64 {
        let mut hash = Fnv::new();
        hash.write_usize(self.nodes.len());
        for name in self.nodes.names() {
            hash.write_bytes(name.as_bytes());
            hash.write_bytes(&[0]);
        }
        hash.write_usize(self.labels.len());
        for name in self.labels.names() {
            hash.write_bytes(name.as_bytes());
            hash.write_bytes(&[0]);
        }
        hash.finish()
    }

    /// Writes `graph.tsv`, `nodes.tsv` and `labels.tsv` into a directory.
    pub fn write_dir(&self, dir: &Path) -> Result<(), GraphIoError> {
        let write = |path: &Path, text: String| -> Result<(), GraphIoError> {
            fs::write(path, text).map_err(|source| GraphIoError::Io {
                path: path.display().to_string(),
                source,
            })
        };
        fs::create_dir_all(dir).map_err(|source| GraphIoError::Io {
            path: dir.display().to_string(),
            source,
        })?;

        let mut edges = String::new();
        for &(h, l, t) in &self.edges {
            edges.push_str(&format!(
                "{}\t{}\t{}\n",
                self.nodes.name(h),
                self.labels.name(l),
                self.nodes.name(t)
            ));
        }
        write(&dir.join("graph.tsv"), edges)?;
        write(&dir.join("nodes.tsv"), vocab_tsv(&self.nodes))?;
        write(&dir.join("labels.tsv"), vocab_tsv(&self.labels))?;
        Ok(())
    }

    /// Reads a graph directory. Vocabulary files fix the index assignment;
    /// identifiers found only in `graph.tsv` get fresh indices.
    pub fn read_dir(dir: &Path) -> Result<Self, GraphIoError> {
        let mut graph = RelationalGraph::default();
        let nodes_path = dir.join("nodes.tsv");
        if nodes_path.exists() {
            read_vocab(&nodes_path, &mut graph.nodes)?;
        }
        let labels_path = dir.join("labels.tsv");
        if labels_path.exists() {
            read_vocab(&labels_path, &mut graph.labels)?;
        }
        let path = dir.join("graph.tsv");
        let text = fs::read_to_string(&path).map_err(|source| GraphIoError::Io {
            path: path.display().to_string(),
            source,
        })?;
        for (lineno, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [h, l, t] = fields.as_slice() else {
                return Err(GraphIoError::MalformedLine {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    text: line.to_owned(),
                });
            };
            let h = graph.nodes.intern(h);
            let l = graph.labels.intern(l);
            let t = graph.nodes.intern(t);
            graph.edges.push((h, l, t));
        }
        graph.edges.sort_unstable();
        graph.edges.dedup();
        Ok(graph)
    }
}

fn vocab_tsv(vocab: &Vocab) -> String {
    let mut out = String::new();
    for (i, name) in vocab.names().enumerate() {
        out.push_str(&format!("{i}\t{name}\n"));
    }
    out
}

fn read_vocab(path: &Path, vocab: &mut Vocab) -> Result<(), GraphIoError> {
    let text = fs::read_to_string(path).map_err(|source| GraphIoError::Io {
        path: path.display().to_string(),
        source,
    })?;
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let Some((index, name)) = line.split_once('\t') else {
            return Err(GraphIoError::MalformedLine {
                path: path.display().to_string(),
                line: lineno + 1,
                text: line.to_owned(),
            });
        };
        let expected: u32 = index.parse().map_err(|_| GraphIoError::MalformedLine {
            path: path.display().to_string(),
            line: lineno + 1,
            text: line.to_owned(),
        })?;
        let got = vocab.intern(name);
        if got != expected {
            return Err(GraphIoError::MalformedLine {
                path: path.display().to_string(),
                line: lineno + 1,
                text: format!("index {expected} does not match position {got}"),
            });
        }
    }
    Ok(())
}

/// FNV-1a, 64-bit.
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }

    fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }

    fn write_usize(&mut self, v: usize) {
        self.write_bytes(&(v as u64).to_le_bytes());
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Hashes arbitrary bytes with the same FNV-1a used for vocabularies.
pub fn fnv_hash(bytes: &[u8]) -> u64 {
    let mut hash = Fnv::new();
    hash.write_bytes(bytes);
    hash.finish()
}
