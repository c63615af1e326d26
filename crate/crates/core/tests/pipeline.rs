//! End-to-end pipeline, report and CLI behavior.

mod common;

use std::path::PathBuf;
use std::process::Command;

use opf_cliques::elimination::OrderingStrategy;
use opf_cliques::report::{
    compare, render_block_export, run_pipeline, to_canonical_json, InputFormat, PipelineConfig,
    Report, Side,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn lmbm3_config(side: Side, strategy: OrderingStrategy, rounds: usize) -> PipelineConfig {
    PipelineConfig {
        input: fixture("lmbm3.m"),
        format: InputFormat::Auto,
        side,
        strategy,
        s_max: 50,
        rounds,
    }
}

#[test]
fn lmbm3_complex_pipeline_has_one_clique_and_no_links() {
    for strategy in [
        OrderingStrategy::MinDegree,
        OrderingStrategy::Amd,
        OrderingStrategy::MaxDegree,
        OrderingStrategy::Random { seed: 5 },
    ] {
        let report = run_pipeline(&lmbm3_config(Side::Complex, strategy, 0)).unwrap();
        assert_eq!(report.initial.nc, 1);
        assert_eq!(report.initial.nlc, 0);
        assert_eq!(report.initial.max_clique_size, 6);
        assert_eq!(report.fill_count, 0);
        assert_eq!(report.blocks.len(), 1);
        assert_eq!(report.blocks[0].len(), 6);
        assert!(report.tree.is_empty());
    }
}

#[test]
fn lmbm3_real_pipeline_decomposes_then_merges_to_one_block() {
    let report = run_pipeline(&lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 0)).unwrap();
    assert_eq!(report.initial.nc, 2);
    assert_eq!(report.initial.nlc, 10);
    assert_eq!(report.initial.max_clique_size, 5);
    assert_eq!(report.fill_count, 2);
    assert_eq!(report.tree.len(), 1);
    assert_eq!(report.tree[0].separator.len(), 4);

    let merged = run_pipeline(&lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 1)).unwrap();
    assert_eq!(merged.merge_rounds.len(), 1);
    assert_eq!(merged.merge_rounds[0].objective, 10);
    assert_eq!(merged.final_state.nc, 1);
    assert_eq!(merged.final_state.nlc, 0);
    assert_eq!(merged.final_state.max_clique_size, 6);
}

#[test]
fn identical_configs_produce_byte_identical_reports() {
    for cfg in [
        lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 4),
        lmbm3_config(Side::Complex, OrderingStrategy::Random { seed: 42 }, 2),
    ] {
        let a = to_canonical_json(&run_pipeline(&cfg).unwrap());
        let b = to_canonical_json(&run_pipeline(&cfg).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn compare_real_against_complex_matches_lmbm3_numbers() {
    let complex = lmbm3_config(Side::Complex, OrderingStrategy::MinDegree, 0);
    let real = lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 0);
    let cmp = compare(&complex, &real).unwrap();
    assert_eq!(cmp.nc_ratio_pct, Some(100.0)); // 2 cliques vs 1
    assert_eq!(cmp.nlc_ratio_pct, None); // complex side has zero links
    assert_eq!(cmp.a.final_state.nc, 1);
    assert_eq!(cmp.b.final_state.nc, 2);
}

#[test]
fn compare_identical_configs_is_all_zero() {
    let cfg = lmbm3_config(Side::Real, OrderingStrategy::Amd, 0);
    let cmp = compare(&cfg, &cfg).unwrap();
    assert_eq!(cmp.nc_ratio_pct, Some(0.0));
    assert_eq!(cmp.nlc_ratio_pct, Some(0.0));
}

#[test]
fn block_export_matches_golden_shapes() {
    let complex = run_pipeline(&lmbm3_config(Side::Complex, OrderingStrategy::Amd, 0)).unwrap();
    let text = render_block_export(&complex);
    assert_eq!(
        text,
        "block 0: 1_Re 1_Im 2_Re 2_Im 3_Re 3_Im\n"
    );

    let real = run_pipeline(&lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 0)).unwrap();
    let text = render_block_export(&real);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "block 0: 1_Re 2_Re 2_Im 3_Re 3_Im");
    assert_eq!(lines[1], "block 1: 1_Im 2_Re 2_Im 3_Re 3_Im");
    assert_eq!(lines[2], "sep 0 1: 2_Re 2_Im 3_Re 3_Im");
}

#[test]
fn empty_topology_exports_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "").unwrap();
    let cfg = PipelineConfig {
        input: path,
        format: InputFormat::EdgeList,
        side: Side::Complex,
        strategy: OrderingStrategy::Amd,
        s_max: 50,
        rounds: 0,
    };
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.blocks.is_empty());
    assert_eq!(render_block_export(&report), "");
}

#[test]
fn reports_round_trip_through_json() {
    let report = run_pipeline(&lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 4)).unwrap();
    let json = to_canonical_json(&report);
    let back: Report = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert_eq!(report.schema, 1);
}

#[test]
fn report_stats_are_consistent_with_serialized_blocks() {
    for (side, rounds) in [(Side::Real, 0), (Side::Real, 4), (Side::Complex, 4)] {
        let report =
            run_pipeline(&lmbm3_config(side, OrderingStrategy::MinDegree, rounds)).unwrap();
        let (nc, nlc, max) = common::recompute_stats(&report.blocks, &report.tree);
        assert_eq!(nc, report.final_state.nc);
        assert_eq!(nlc, report.final_state.nlc);
        assert_eq!(max, report.final_state.max_clique_size);
    }
}

#[test]
fn edge_list_input_goes_through_the_same_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lmbm3.txt");
    std::fs::write(&path, "1 2\n1 3\n2 3\n").unwrap();
    let cfg = PipelineConfig {
        input: path,
        format: InputFormat::Auto,
        side: Side::Real,
        strategy: OrderingStrategy::MinDegree,
        s_max: 50,
        rounds: 0,
    };
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.initial.nc, 2);
    assert_eq!(report.initial.nlc, 10);
}

#[test]
fn config_errors_are_reported_as_such() {
    let mut cfg = lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 0);
    cfg.s_max = 0;
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);

    let missing = PipelineConfig {
        input: PathBuf::from("/nonexistent/case.m"),
        ..lmbm3_config(Side::Real, OrderingStrategy::MinDegree, 0)
    };
    assert_eq!(run_pipeline(&missing).unwrap_err().exit_code(), 1);
}

// ---- CLI process-level checks ----

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opf-cliques"))
}

#[test]
fn cli_decompose_prints_valid_json() {
    let out = cli()
        .args(["decompose"])
        .arg(fixture("lmbm3.m"))
        .args(["--side", "real", "--order", "min-degree"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.initial.nc, 2);
    assert_eq!(report.rounds_requested, 0);
}

#[test]
fn cli_merge_defaults_to_four_rounds() {
    let out = cli()
        .args(["merge"])
        .arg(fixture("lmbm3.m"))
        .args(["--side", "real", "--order", "min-degree"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.rounds_requested, 4);
    assert_eq!(report.final_state.nlc, 0);
}

#[test]
fn cli_compare_and_export_run() {
    let out = cli()
        .args(["compare"])
        .arg(fixture("lmbm3.m"))
        .args(["--side", "complex", "--side-b", "real", "--order", "min-degree"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"nc_ratio_pct\": 100.0"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let blocks_path = dir.path().join("blocks.txt");
    let out = cli()
        .args(["export"])
        .arg(fixture("lmbm3.m"))
        .args(["--side", "complex", "-o"])
        .arg(&blocks_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&blocks_path).unwrap();
    assert!(text.starts_with("block 0: 1_Re 1_Im"));
}

#[test]
fn cli_exit_codes_distinguish_input_and_config_errors() {
    let out = cli().args(["decompose", "/no/such/file.m"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = cli()
        .args(["decompose"])
        .arg(fixture("lmbm3.m"))
        .args(["--smax", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // --seed without --order random is a config error
    let out = cli()
        .args(["decompose"])
        .arg(fixture("lmbm3.m"))
        .args(["--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // random without a seed likewise
    let out = cli()
        .args(["decompose"])
        .arg(fixture("lmbm3.m"))
        .args(["--order", "random"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_runs_are_byte_identical() {
    let run = || {
        cli()
            .args(["merge"])
            .arg(fixture("lmbm3.m"))
            .args(["--side", "real", "--order", "random", "--seed", "11"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}
