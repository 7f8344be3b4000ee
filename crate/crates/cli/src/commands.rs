//! The single-stage subcommands.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ontoproj_core::eval::{evaluate, score_axiom, EvalMode, TieMode};
use ontoproj_core::graph::RelationalGraph;
use ontoproj_core::kge::{load_model, save_model, train, verify_pairing, TrainConfig};
use ontoproj_core::ontology::{
    parse_axiom, serialize_axiom, serialize_ontology, split_ontology,
    SplitPattern,
};
use ontoproj_core::projection::{
    analyze_properties, edge_stats, project, shared_edges, Method,
};
use ontoproj_core::reasoner::{normalize, saturate, ClosureFacts};

use crate::pipeline::{compute_closure, load_ontology};

pub fn cmd_parse(path: &Path, out: Option<&Path>, check_roundtrip: bool) -> Result<()> {
    let ontology = load_ontology(path)?;
    println!(
        "{} axioms, {} classes, {} roles, {} individuals, {} prefixes",
        ontology.axioms.len(),
        ontology.signature.classes.len(),
        ontology.signature.roles.len(),
        ontology.signature.individuals.len(),
        ontology.prefixes.len()
    );
    if check_roundtrip {
        for axiom in &ontology.axioms {
            let text = serialize_axiom(axiom);
            let reparsed = parse_axiom(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
            if &reparsed != axiom {
                bail!("round-trip mismatch for `{text}`");
            }
        }
        println!("round-trip: ok");
    }
    if let Some(out) = out {
        fs::write(out, serialize_ontology(&ontology))
            .with_context(|| format!("cannot write {}", out.display()))?;
    }
    Ok(())
}

pub fn cmd_reason(path: &Path, out: &Path) -> Result<()> {
    let ontology = load_ontology(path)?;
    let normalized = normalize(&ontology);
    if !normalized.skipped.is_empty() {
        println!("skipped {} non-EL axioms:", normalized.skipped.len());
        for axiom in &normalized.skipped {
            println!("  {}", serialize_axiom(axiom));
        }
    }
    let closure = saturate(&normalized);
    println!(
        "{} subsumptions, {} existentials",
        closure.subsumptions.len(),
        closure.existentials.len()
    );
    fs::write(out, closure.to_tsv())
        .with_context(|| format!("cannot write {}", out.display()))?;
    Ok(())
}

pub fn cmd_split(
    path: &Path,
    pattern: SplitPattern,
    fraction: f64,
    seed: u64,
    out_reduced: &Path,
    out_removed: &Path,
) -> Result<()> {
    let ontology = load_ontology(path)?;
    let (reduced, removed) = split_ontology(&ontology, pattern, fraction, seed)?;
    println!(
        "removed {} of {} axioms ({} pattern)",
        removed.len(),
        ontology.axioms.len(),
        pattern.as_str()
    );
    fs::write(out_reduced, serialize_ontology(&reduced))
        .with_context(|| format!("cannot write {}", out_reduced.display()))?;
    let mut text = String::new();
    for axiom in &removed {
        text.push_str(&serialize_axiom(axiom));
        text.push('\n');
    }
    fs::write(out_removed, text)
        .with_context(|| format!("cannot write {}", out_removed.display()))?;
    Ok(())
}

pub fn cmd_project(path: &Path, method: &Method, out_dir: &Path) -> Result<()> {
    let ontology = load_ontology(path)?;
    let closure = match method {
        Method::Patterns { .. } => Some(compute_closure(&ontology).0),
        _ => None,
    };
    let pr = project(method, &ontology, closure.as_ref())?;
    let graph = RelationalGraph::from_projection(&pr);
    graph.write_dir(out_dir)?;
    let stats = edge_stats(&pr);
    println!(
        "{} edges ({} subclass, {:.1}%), {} nodes, {} labels, {} blank nodes, {} skipped axioms",
        stats.total,
        stats.subclass,
        stats.subclass_pct,
        graph.nodes.len(),
        graph.labels.len(),
        stats.blank_nodes,
        pr.skipped.len()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_train(graph_dir: &Path, config: TrainConfig, out: &Path) -> Result<()> {
    let graph = RelationalGraph::read_dir(graph_dir)?;
    println!(
        "training {} on {} edges, {} nodes (seed {})",
        config.model,
        graph.edges.len(),
        graph.nodes.len(),
        config.seed
    );
    let outcome = train(&graph, &config)?;
    println!(
        "stopped after {} epochs, final loss {:.6}",
        outcome.epochs_run,
        outcome.loss_curve.last().copied().unwrap_or(f64::NAN)
    );
    save_model(&outcome.model, out)?;
    println!("model written to {}", out.display());
    Ok(())
}

pub fn cmd_score(model_path: &Path, graph_dir: &Path, method: &Method, axiom: &str) -> Result<()> {
    let graph = RelationalGraph::read_dir(graph_dir)?;
    let model = load_model(model_path)?;
    verify_pairing(&model, &graph)?;
    let axiom = parse_axiom(axiom).map_err(|e| anyhow::anyhow!("{e}"))?;
    let scored = score_axiom(&model, &graph, method, &axiom)?;
    println!("score\t{:.6}", scored.score);
    for edge in &scored.edges {
        println!("edge\t{edge}");
    }
    for tied in &scored.tied {
        println!("tied\t{}", serialize_axiom(tied));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_evaluate(
    model_path: &Path,
    graph_dir: &Path,
    method: &Method,
    test_path: &Path,
    ontology_path: &Path,
    closure_path: &Path,
    mode: EvalMode,
    optimistic: bool,
    out: Option<&Path>,
) -> Result<()> {
    let graph = RelationalGraph::read_dir(graph_dir)?;
    let model = load_model(model_path)?;
    verify_pairing(&model, &graph)?;
    let ontology = load_ontology(ontology_path)?;
    let test = load_ontology(test_path)?;
    let closure_text = fs::read_to_string(closure_path)
        .with_context(|| format!("cannot read closure {}", closure_path.display()))?;
    let closure = ClosureFacts::from_tsv(&closure_text).map_err(|e| anyhow::anyhow!(e))?;
    let ties = if optimistic { TieMode::Optimistic } else { TieMode::Pessimistic };
    let report = evaluate(
        &model,
        &graph,
        method,
        &test.axioms,
        mode,
        &ontology.signature,
        &closure,
        ties,
    )?;
    report.validate().context("report validation")?;
    print!("{}", report.render_table());
    if let Some(out) = out {
        fs::write(out, report.to_tsv())
            .with_context(|| format!("cannot write {}", out.display()))?;
    }
    Ok(())
}

pub fn cmd_analyze(path: &Path, method: &Method, compare: Option<&Method>) -> Result<()> {
    let ontology = load_ontology(path)?;
    let report = analyze_properties(method, &ontology)?;
    print!("{}", report.render());
    let closure = compute_closure(&ontology).0;
    let pr = project(method, &ontology, Some(&closure))?;
    let stats = edge_stats(&pr);
    println!(
        "edges\t{}\nsubclass_edges\t{} ({:.1}%)\ninverse_edges\t{}\nblank_nodes\t{}",
        stats.total, stats.subclass, stats.subclass_pct, stats.inverse, stats.blank_nodes
    );
    if let Some(other) = compare {
        let other_pr = project(other, &ontology, Some(&closure))?;
        let other_stats = edge_stats(&other_pr);
        println!(
            "compared_method\t{}\ncompared_edges\t{}\ncompared_subclass_edges\t{} ({:.1}%)",
            other.kind(),
            other_stats.total,
            other_stats.subclass,
            other_stats.subclass_pct
        );
        println!("shared_edges\t{}", shared_edges(&pr, &other_pr));
    }
    Ok(())
}
