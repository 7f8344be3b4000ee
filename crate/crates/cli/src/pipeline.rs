//! The end-to-end experiment pipeline and the hyperparameter grid.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ontoproj_core::eval::{evaluate, EvalMode, TieMode};
use ontoproj_core::graph::{fnv_hash, RelationalGraph};
use ontoproj_core::kge::{save_model, train, TrainConfig, TrainOutcome};
use ontoproj_core::ontology::{
    parse_ontology, serialize_axiom, serialize_ontology, split_ontology, Axiom, Ontology,
};
use ontoproj_core::projection::{project, Method, MethodKind, ProjectionResult};
use ontoproj_core::reasoner::{closure_diff, normalize, saturate, ClosureFacts};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::config::{ExperimentConfig, GridPoint, GridSpec};

pub fn load_ontology(path: &Path) -> Result<Ontology> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read ontology {}", path.display()))?;
    parse_ontology(&text).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn compute_closure(ontology: &Ontology) -> (ClosureFacts, usize) {
    let normalized = normalize(ontology);
    let skipped = normalized.skipped.len();
    (saturate(&normalized), skipped)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn write_axiom_file(path: &Path, axioms: &[Axiom]) -> Result<()> {
    let mut text = String::new();
    for axiom in axioms {
        text.push_str(&serialize_axiom(axiom));
        text.push('\n');
    }
    write(path, &text)
}

/// Projects, persists the graph directory, and returns the indexed graph
/// together with the projection provenance.
fn project_to_dir(
    method: &Method,
    ontology: &Ontology,
    closure: Option<&ClosureFacts>,
    dir: &Path,
) -> Result<(RelationalGraph, ProjectionResult)> {
    let pr = project(method, ontology, closure)?;
    let graph = RelationalGraph::from_projection(&pr);
    graph.write_dir(dir)?;
    Ok((graph, pr))
}

struct RegimeOutcome {
    name: &'static str,
    edges: usize,
    blank_nodes: usize,
    skipped: usize,
    epochs_run: usize,
    final_loss: f64,
    report_table: String,
}

/// Runs the full protocol: closure of the original and the reduced
/// ontology, a closure-difference test set, then both evaluation regimes
/// (embeddings from the original ontology and from the reduced one)
/// against the same test set.
pub fn cmd_run(config: &ExperimentConfig) -> Result<()> {
    let out = &config.output_dir;
    fs::create_dir_all(out)
        .with_context(|| format!("cannot create output dir {}", out.display()))?;
    write(&out.join("config.toml"), &config.to_toml()).context("[stage config]")?;

    let method = config.method()?;
    let pattern = config.split_pattern()?;
    let mode: EvalMode = config.evaluation.mode.parse().map_err(|e: String| anyhow::anyhow!(e))?;
    let ties = if config.evaluation.optimistic_ties {
        TieMode::Optimistic
    } else {
        TieMode::Pessimistic
    };
    let train_config = config.train_config()?;

    println!("[stage parse] {}", config.ontology.display());
    let ontology = load_ontology(&config.ontology).context("[stage parse]")?;
    println!(
        "[stage parse] {} axioms, {} classes, {} roles",
        ontology.axioms.len(),
        ontology.signature.classes.len(),
        ontology.signature.roles.len()
    );

    println!("[stage reason] computing deductive closures");
    let (closure_full, skipped_full) = compute_closure(&ontology);
    write(&out.join("closure_full.tsv"), &closure_full.to_tsv()).context("[stage reason]")?;

    println!(
        "[stage split] removing {:.0}% of the `{}` axioms (seed {})",
        config.split.fraction * 100.0,
        pattern.as_str(),
        config.seed
    );
    let (reduced, removed) =
        split_ontology(&ontology, pattern, config.split.fraction, config.seed)
            .context("[stage split]")?;
    write(&out.join("reduced.ofn"), &serialize_ontology(&reduced)).context("[stage split]")?;
    write_axiom_file(&out.join("removed.ofn"), &removed).context("[stage split]")?;

    let (closure_reduced, _) = compute_closure(&reduced);
    write(&out.join("closure_reduced.tsv"), &closure_reduced.to_tsv())
        .context("[stage reason]")?;

    let test_set = closure_diff(&closure_full, &closure_reduced, pattern);
    println!(
        "[stage test-set] {} axioms in the closure difference",
        test_set.len()
    );
    if test_set.is_empty() {
        bail!("[stage test-set] the closure difference is empty; nothing to evaluate");
    }
    write_axiom_file(&out.join("test_set.ofn"), &test_set).context("[stage test-set]")?;

    let mut regimes: Vec<RegimeOutcome> = Vec::new();
    let runs: [(&'static str, &Ontology, &ClosureFacts); 2] = [
        ("inference", &ontology, &closure_full),
        ("prediction", &reduced, &closure_reduced),
    ];
    for (name, source, closure) in runs {
        println!("[stage project:{name}] method {}", method.kind());
        let graph_dir = out.join(format!("graph_{name}"));
        let (graph, pr) = project_to_dir(&method, source, Some(closure), &graph_dir)
            .with_context(|| format!("[stage project:{name}]"))?;
        println!(
            "[stage project:{name}] {} edges, {} nodes, {} skipped axioms",
            graph.edges.len(),
            graph.nodes.len(),
            pr.skipped.len()
        );

        println!("[stage train:{name}] {} epochs max", train_config.epochs);
        let TrainOutcome { model, loss_curve, epochs_run } =
            train(&graph, &train_config).with_context(|| format!("[stage train:{name}]"))?;
        save_model(&model, &out.join(format!("model_{name}.bin")))
            .with_context(|| format!("[stage train:{name}]"))?;

        println!("[stage evaluate:{name}] case {mode}, {} queries", test_set.len());
        let report = evaluate(
            &model,
            &graph,
            &method,
            &test_set,
            mode,
            &ontology.signature,
            closure,
            ties,
        )
        .with_context(|| format!("[stage evaluate:{name}]"))?;
        report
            .validate()
            .with_context(|| format!("[stage evaluate:{name}] report validation"))?;
        write(&out.join(format!("report_{name}.tsv")), &report.to_tsv())
            .context("[stage evaluate]")?;
        let table = report.render_table();
        write(&out.join(format!("report_{name}.txt")), &table)
            .context("[stage evaluate]")?;
        print!("{table}");

        regimes.push(RegimeOutcome {
            name,
            edges: graph.edges.len(),
            blank_nodes: pr.blank_node_count(),
            skipped: pr.skipped.len(),
            epochs_run,
            final_loss: loss_curve.last().copied().unwrap_or(f64::NAN),
            report_table: table,
        });
    }

    let mut summary = String::new();
    summary.push_str(&format!("method\t{}\n", method.kind()));
    summary.push_str(&format!("split\t{}\t{}\n", pattern.as_str(), config.split.fraction));
    summary.push_str(&format!("seed\t{}\n", config.seed));
    summary.push_str(&format!("axioms\t{}\n", ontology.axioms.len()));
    summary.push_str(&format!("closure_full\t{}\n", closure_full.len()));
    summary.push_str(&format!("closure_reduced\t{}\n", closure_reduced.len()));
    summary.push_str(&format!("skipped_by_reasoner\t{skipped_full}\n"));
    summary.push_str(&format!("test_axioms\t{}\n", test_set.len()));
    for regime in &regimes {
        summary.push_str(&format!(
            "{}\tedges\t{}\tskipped\t{}\tepochs\t{}\tfinal_loss\t{:.6}\n",
            regime.name, regime.edges, regime.skipped, regime.epochs_run, regime.final_loss
        ));
        if method.kind() == MethodKind::Rdf {
            summary.push_str(&format!(
                "{}\tblank_nodes\t{}\n",
                regime.name, regime.blank_nodes
            ));
        }
        summary.push_str(&regime.report_table);
    }
    write(&out.join("summary.txt"), &summary).context("[stage summary]")?;

    write_manifest(out).context("[stage manifest]")?;
    println!("[done] artifacts in {}", out.display());
    Ok(())
}

/// Hashes every artifact so partial re-runs can detect staleness.
fn write_manifest(out: &Path) -> Result<()> {
    let mut entries: Vec<(String, u64)> = Vec::new();
    collect_manifest(out, out, &mut entries)?;
    entries.sort();
    let mut text = String::new();
    for (name, hash) in entries {
        text.push_str(&format!("{name}\t{hash:016x}\n"));
    }
    write(&out.join("manifest.tsv"), &text)
}

fn collect_manifest(root: &Path, dir: &Path, entries: &mut Vec<(String, u64)>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let entry = entry?;
        let path = entry.path();
        if path.is_dir() {
            collect_manifest(root, &path, entries)?;
        } else if path.file_name().map(|n| n != "manifest.tsv").unwrap_or(true) {
            let bytes =
                fs::read(&path).with_context(|| format!("cannot read {}", path.display()))?;
            let name = path
                .strip_prefix(root)
                .unwrap_or(&path)
                .to_string_lossy()
                .replace('\\', "/");
            entries.push((name, fnv_hash(&bytes)));
        }
    }
    Ok(())
}

/// Exhaustive sweep over the grid axes. Models are selected by mean rank
/// on a held-out fraction of the training edges (tail ranking over all
/// nodes); the full result matrix and the winning configuration are
/// persisted.
pub fn cmd_grid(config: &ExperimentConfig, grid: &GridSpec) -> Result<()> {
    if grid.combination_count() == 0 {
        bail!("the grid is empty");
    }
    let out = &config.output_dir;
    fs::create_dir_all(out)
        .with_context(|| format!("cannot create output dir {}", out.display()))?;

    let method = config.method()?;
    let ontology = load_ontology(&config.ontology).context("[stage parse]")?;
    let closure = match method {
        Method::Patterns { .. } => Some(compute_closure(&ontology).0),
        _ => None,
    };
    let pr = project(&method, &ontology, closure.as_ref()).context("[stage project]")?;
    let full_graph = RelationalGraph::from_projection(&pr);
    if full_graph.edges.len() < 2 {
        bail!("[stage project] the projected graph is too small for a validation split");
    }

    // Held-out validation edges, fixed across all grid cells.
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..full_graph.edges.len()).collect();
    order.shuffle(&mut rng);
    let held_out = ((grid.validation_fraction * full_graph.edges.len() as f64).ceil() as usize)
        .clamp(1, full_graph.edges.len() - 1);
    let validation: Vec<(u32, u32, u32)> =
        order[..held_out].iter().map(|&i| full_graph.edges[i]).collect();
    let mut training: Vec<(u32, u32, u32)> =
        order[held_out..].iter().map(|&i| full_graph.edges[i]).collect();
    training.sort_unstable();
    let train_graph = RelationalGraph {
        nodes: full_graph.nodes.clone(),
        labels: full_graph.labels.clone(),
        edges: training,
    };
    println!(
        "[grid] {} combinations, {} training / {} validation edges",
        grid.combination_count(),
        train_graph.edges.len(),
        validation.len()
    );

    let template = config.train_config()?;
    let mut rows = String::from(
        "dimension\tmargin\tl2\tbatch_size\tlearning_rate\tvalidation_mr\tepochs_run\n",
    );
    let mut best: Option<(GridPoint, f64)> = None;
    for point in grid.combinations() {
        let cell = TrainConfig {
            dimension: point.dimension,
            margin: point.margin,
            l2: point.l2,
            batch_size: point.batch_size,
            learning_rate: point.learning_rate,
            ..template.clone()
        };
        let outcome = train(&train_graph, &cell).with_context(|| {
            format!(
                "[grid] training failed at dimension {} margin {} l2 {} batch {} lr {}",
                point.dimension, point.margin, point.l2, point.batch_size, point.learning_rate
            )
        })?;
        let mr = validation_mean_rank(&outcome.model, &validation)?;
        rows.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{}\n",
            point.dimension,
            point.margin,
            point.l2,
            point.batch_size,
            point.learning_rate,
            mr,
            outcome.epochs_run
        ));
        println!(
            "[grid] dim {} margin {} l2 {} batch {} lr {} -> validation MR {:.2}",
            point.dimension, point.margin, point.l2, point.batch_size, point.learning_rate, mr
        );
        if best.as_ref().is_none_or(|(_, best_mr)| mr < *best_mr) {
            best = Some((point, mr));
        }
    }
    write(&out.join("grid_results.tsv"), &rows)?;

    let (winner, winner_mr) = best.expect("non-empty grid");
    let mut best_config = config.clone();
    best_config.train.dimension = winner.dimension;
    best_config.train.margin = winner.margin;
    best_config.train.l2 = winner.l2;
    best_config.train.batch_size = winner.batch_size;
    best_config.train.learning_rate = winner.learning_rate;
    write(&out.join("best_config.toml"), &best_config.to_toml())?;
    println!(
        "[grid] best: dim {} margin {} l2 {} batch {} lr {} (validation MR {:.2})",
        winner.dimension,
        winner.margin,
        winner.l2,
        winner.batch_size,
        winner.learning_rate,
        winner_mr
    );
    Ok(())
}

/// Mean pessimistic rank of the true tail among all nodes.
pub fn validation_mean_rank(
    model: &ontoproj_core::kge::EmbeddingModel,
    edges: &[(u32, u32, u32)],
) -> Result<f64> {
    let n_nodes = model.n_entities() as u32;
    let mut rank_sum = 0usize;
    for &(h, r, t) in edges {
        let target = model.score_edge((h, r, t))?;
        let mut better = 0usize;
        let mut tied = 0usize;
        for candidate in 0..n_nodes {
            if candidate == t {
                continue;
            }
            let score = model.score_edge((h, r, candidate))?;
            if score < target {
                better += 1;
            } else if score == target {
                tied += 1;
            }
        }
        rank_sum += 1 + better + tied;
    }
    Ok(rank_sum as f64 / edges.len() as f64)
}
