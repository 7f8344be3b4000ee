//! Binary checkpoints: a fixed header followed by little-endian IEEE-754
//! doubles. The header records the model tag, norm, dimensions and the
//! vocabulary hash of the graph the model was trained on, so a checkpoint
//! cannot silently be paired with a different graph.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::RelationalGraph;

use super::{EmbeddingModel, Matrix, ModelTag, Norm};

const MAGIC: &[u8; 8] = b"ONTOEMB\0";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("io error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path} is not a model checkpoint (bad magic)")]
    BadMagic { path: String },
    #[error("checkpoint version {found} is not supported (expected {VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error(
        "checkpoint was trained on a different graph \
         (vocab hash {model:#018x}, graph {graph:#018x})"
    )]
    HashMismatch { model: u64, graph: u64 },
    #[error("checkpoint shape ({entities} entities, {labels} labels) does not match the graph")]
    ShapeMismatch { entities: usize, labels: usize },
}

pub fn save_model(model: &EmbeddingModel, path: &Path) -> Result<(), CheckpointError> {
    let io_err = |source| CheckpointError::Io { path: path.display().to_string(), source };
    let mut buf: Vec<u8> = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(match model.tag {
        ModelTag::TransE => 0,
        ModelTag::TransR => 1,
    });
    buf.push(match model.norm {
        Norm::L1 => 1,
        Norm::L2 => 2,
    });
    buf.extend_from_slice(&0u16.to_le_bytes());
    buf.extend_from_slice(&(model.dim as u32).to_le_bytes());
    buf.extend_from_slice(&(model.n_entities() as u64).to_le_bytes());
    buf.extend_from_slice(&(model.n_relations() as u64).to_le_bytes());
    buf.extend_from_slice(&model.vocab_hash.to_le_bytes());
    let mut write_doubles = |data: &[f64]| {
        for v in data {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    };
    write_doubles(model.entities.data());
    write_doubles(model.relations.data());
    if let Some(matrices) = &model.relation_matrices {
        for m in matrices {
            write_doubles(m.data());
        }
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(&buf).map_err(io_err)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<EmbeddingModel, CheckpointError> {
    let io_err = |source| CheckpointError::Io { path: path.display().to_string(), source };
    let mut file = fs::File::open(path).map_err(io_err)?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(io_err)?;

    let mut at = 0usize;
    let mut take = |n: usize| -> Result<&[u8], CheckpointError> {
        if at + n > bytes.len() {
            return Err(CheckpointError::Corrupt("unexpected end of file".into()));
        }
        let slice = &bytes[at..at + n];
        at += n;
        Ok(slice)
    };

    if take(8)? != MAGIC {
        return Err(CheckpointError::BadMagic { path: path.display().to_string() });
    }
    let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(CheckpointError::UnsupportedVersion { found: version });
    }
    let tag = match take(1)?[0] {
        0 => ModelTag::TransE,
        1 => ModelTag::TransR,
        other => return Err(CheckpointError::Corrupt(format!("unknown model tag {other}"))),
    };
    let norm = match take(1)?[0] {
        1 => Norm::L1,
        2 => Norm::L2,
        other => return Err(CheckpointError::Corrupt(format!("unknown norm tag {other}"))),
    };
    take(2)?; // padding
    let dim = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
    let n_entities = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
    let n_relations = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
    let vocab_hash = u64::from_le_bytes(take(8)?.try_into().unwrap());

    let mut read_matrix = |rows: usize, cols: usize| -> Result<Matrix, CheckpointError> {
        let raw = take(rows * cols * 8)?;
        let data: Vec<f64> = raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(CheckpointError::Corrupt("non-finite parameter value".into()));
        }
        Ok(Matrix::from_data(rows, cols, data))
    };

    let entities = read_matrix(n_entities, dim)?;
    let relations = read_matrix(n_relations, dim)?;
    let relation_matrices = match tag {
        ModelTag::TransE => None,
        ModelTag::TransR => {
            let mut matrices = Vec::with_capacity(n_relations);
            for _ in 0..n_relations {
                matrices.push(read_matrix(dim, dim)?);
            }
            Some(matrices)
        }
    };
    if at != bytes.len() {
        return Err(CheckpointError::Corrupt(format!(
            "{} trailing bytes",
            bytes.len() - at
        )));
    }
    Ok(EmbeddingModel { tag, norm, dim, entities, relations, relation_matrices, vocab_hash })
}

/// Refuses a model/graph pairing whose vocabularies do not match.
pub fn verify_pairing(
    model: &EmbeddingModel,
    graph: &RelationalGraph,
) -> Result<(), CheckpointError> {
    if model.n_entities() != graph.nodes.len() || model.n_relations() != graph.labels.len() {
        return Err(CheckpointError::ShapeMismatch {
            entities: model.n_entities(),
            labels: model.n_relations(),
        });
    }
    let graph_hash = graph.vocab_hash();
    if model.vocab_hash != graph_hash {
        return Err(CheckpointError::HashMismatch { model: model.vocab_hash, graph: graph_hash });
    }
    Ok(())
}
