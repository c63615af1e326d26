//! End-to-end pipelines and machine-readable reports.
//!
//! A pipeline runs ingest → pattern → chordal extension → clique
//! decomposition → merge rounds and captures the result in a [`Report`]:
//! decomposition statistics before and after merging, per-round numbers,
//! and the final block structure with separators. Reports serialize to JSON
//! with sorted keys and sorted node lists, so identical configurations
//! produce byte-identical files. Blocks and separators are always written in
//! real variables (`bus_Re` / `bus_Im`), whichever side the pipeline ran on.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cliques::{
    build_clique_tree, decomposition_stats, maximal_cliques, CliqueList, CliqueTree,
};
use crate::elimination::{symbolic_elimination, OrderingStrategy};
use crate::graph::SparsityGraph;
use crate::ingest::{parse_edge_list, parse_matpower, IngestError, NetworkTopology};
use crate::merge::{merge_rounds, RoundStats};
use crate::pattern::{build_complex_pattern, im_index, re_index, realify_graph};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Input(String),
    #[error("config error: {0}")]
    Config(String),
}

impl PipelineError {
    /// Process exit code: 1 for input errors, 2 for config errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Input(_) => 1,
            PipelineError::Config(_) => 2,
        }
    }
}

impl From<IngestError> for PipelineError {
    fn from(e: IngestError) -> Self {
        PipelineError::Input(e.to_string())
    }
}

/// Which formulation the decomposition is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Complex,
    Real,
}

impl Side {
    pub fn is_complex(self) -> bool {
        matches!(self, Side::Complex)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Complex => write!(f, "complex"),
            Side::Real => write!(f, "real"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Matpower,
    EdgeList,
}

/// Everything needed to run one pipeline deterministically.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub format: InputFormat,
    pub side: Side,
    pub strategy: OrderingStrategy,
    pub s_max: usize,
    pub rounds: usize,
}

impl PipelineConfig {
    fn validate(&self) -> Result<(), PipelineError> {
        if self.s_max == 0 {
            return Err(PipelineError::Config("--smax must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsBlock {
    pub nc: usize,
    pub nlc: u64,
    pub max_clique_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdgeJson {
    pub a: usize,
    pub b: usize,
    pub separator: Vec<String>,
}

/// Machine-readable pipeline result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub instance: String,
    pub side: String,
    pub strategy: String,
    pub seed: Option<u64>,
    pub smax: usize,
    pub rounds_requested: usize,
    pub fill_count: usize,
    pub initial: StatsBlock,
    pub merge_rounds: Vec<RoundStats>,
    #[serde(rename = "final")]
    pub final_state: StatsBlock,
    pub blocks: Vec<Vec<String>>,
    pub tree: Vec<TreeEdgeJson>,
}

/// Two pipelines on the same instance, with percentage ratios of pipeline B
/// relative to pipeline A. A ratio is `null` when A's metric is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema: u32,
    pub instance: String,
    pub nc_ratio_pct: Option<f64>,
    pub nlc_ratio_pct: Option<f64>,
    pub a: Report,
    pub b: Report,
}

fn read_topology(cfg: &PipelineConfig) -> Result<NetworkTopology, PipelineError> {
    let text = fs::read_to_string(&cfg.input).map_err(|e| {
        PipelineError::Input(format!("cannot read {}: {e}", cfg.input.display()))
    })?;
    let format = match cfg.format {
        InputFormat::Auto => match cfg.input.extension().and_then(|e| e.to_str()) {
            Some("m") | Some("mat") => InputFormat::Matpower,
            _ => InputFormat::EdgeList,
        },
        other => other,
    };
    let topo = match format {
        InputFormat::Matpower => parse_matpower(&text)?,
        InputFormat::EdgeList => parse_edge_list(&text)?,
        InputFormat::Auto => unreachable!("resolved above"),
    };
    Ok(topo)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance")
        .to_string()
}

/// Renders a block (node indices of the pipeline's pattern graph) as sorted
/// real-variable names.
fn block_labels(block: &[usize], side: Side, complex_pattern: &SparsityGraph) -> Vec<String> {
    match side {
        Side::Real => block
            .iter()
            .map(|&v| {
                let bus = complex_pattern.label(v / 2).bus;
                if v % 2 == 0 {
                    format!("{bus}_Re")
                } else {
                    format!("{bus}_Im")
                }
            })
            .collect(),
        Side::Complex => {
            let mut doubled: Vec<usize> = block
                .iter()
                .flat_map(|&n| [re_index(n), im_index(n)])
                .collect();
            doubled.sort_unstable();
            block_labels(&doubled, Side::Real, complex_pattern)
        }
    }
}

fn stats_of(l: &CliqueList, t: &CliqueTree, side: Side) -> StatsBlock {
    let mult = if side.is_complex() { 2 } else { 1 };
    StatsBlock {
        nc: l.len(),
        nlc: crate::cliques::count_linking_constraints(t, side.is_complex()),
        max_clique_size: l.max_clique_size() * mult,
    }
}

/// Runs the full pipeline described by `cfg` on an already-parsed topology.
pub fn run_pipeline_on(
    cfg: &PipelineConfig,
    topo: &NetworkTopology,
    instance: &str,
) -> Result<Report, PipelineError> {
    cfg.validate()?;
    let complex_pattern = build_complex_pattern(topo);
    let pattern = match cfg.side {
        Side::Complex => complex_pattern.clone(),
        Side::Real => realify_graph(&complex_pattern),
    };
    let order = cfg
        .strategy
        .ordering(&pattern)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let extension = symbolic_elimination(&pattern, &order)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let cliques = maximal_cliques(&extension);
    let tree = build_clique_tree(&cliques);
    let initial = decomposition_stats(&extension, &cliques, &tree, cfg.side.is_complex());

    let (blocks, tree, round_stats) = merge_rounds(
        &cliques,
        &tree,
        cfg.s_max,
        cfg.rounds,
        cfg.side.is_complex(),
    );
    let final_state = stats_of(&blocks, &tree, cfg.side);

    Ok(Report {
        schema: REPORT_SCHEMA,
        instance: instance.to_string(),
        side: cfg.side.to_string(),
        strategy: cfg.strategy.name().to_string(),
        seed: cfg.strategy.seed(),
        smax: cfg.s_max,
        rounds_requested: cfg.rounds,
        fill_count: initial.fill_count,
        initial: StatsBlock {
            nc: initial.nc,
            nlc: initial.nlc,
            max_clique_size: initial.max_clique_size,
        },
        merge_rounds: round_stats,
        final_state,
        blocks: blocks
            .cliques()
            .iter()
            .map(|c| block_labels(c, cfg.side, &complex_pattern))
            .collect(),
        tree: tree
            .edges
            .iter()
            .map(|e| TreeEdgeJson {
                a: e.a,
                b: e.b,
                separator: block_labels(&e.separator, cfg.side, &complex_pattern),
            })
            .collect(),
    })
}

/// Reads the input file and runs the pipeline.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Report, PipelineError> {
    cfg.validate()?;
    let topo = read_topology(cfg)?;
    run_pipeline_on(cfg, &topo, &instance_name(&cfg.input))
}

fn pct_ratio(b: u64, a: u64) -> Option<f64> {
    if a == 0 {
        return None;
    }
    let raw = (b as f64 / a as f64 - 1.0) * 100.0;
    Some((raw * 100.0).round() / 100.0)
}

/// Runs two pipelines on the same instance and reports B-relative-to-A
/// percentage ratios of the final clique and linking-constraint counts.
pub fn compare(
    cfg_a: &PipelineConfig,
    cfg_b: &PipelineConfig,
) -> Result<ComparisonReport, PipelineError> {
    if cfg_a.input != cfg_b.input {
        return Err(PipelineError::Config(
            "compared pipelines must target the same instance".into(),
        ));
    }
    let a = run_pipeline(cfg_a)?;
    let b = run_pipeline(cfg_b)?;
    Ok(ComparisonReport {
        schema: REPORT_SCHEMA,
        instance: a.instance.clone(),
        nc_ratio_pct: pct_ratio(b.final_state.nc as u64, a.final_state.nc as u64),
        nlc_ratio_pct: pct_ratio(b.final_state.nlc, a.final_state.nlc),
        a,
        b,
    })
}

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values render");
    s.push('\n');
    s
}

/// Renders the block structure as plain text: one line per block, one line
/// per tree separator, all variables named in real form.
pub fn render_block_export(report: &Report) -> String {
    let mut out = String::new();
    for (i, block) in report.blocks.iter().enumerate() {
        out.push_str(&format!("block {i}: {}\n", block.join(" ")));
    }
    for edge in &report.tree {
        out.push_str(&format!(
            "sep {} {}: {}\n",
            edge.a,
            edge.b,
            edge.separator.join(" ")
        ));
    }
    out
}

/// Writes the block-structure export for downstream solvers.
pub fn export_blocks(report: &Report, path: &Path) -> std::io::Result<()> {
    fs::write(path, render_block_export(report))
}
