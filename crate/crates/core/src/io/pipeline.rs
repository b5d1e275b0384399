//! End-to-end runs: compute, write every output under one directory and
//! record its checksum in the run manifest (`summary.json`).

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ConjectureConfig, SimulateConfig, VerifyConfig};
use super::manifest::RunManifest;
use super::pgm::render_field_pgm;
use super::tables;
use crate::error::{Error, Result};
use crate::measures::{Banded, TestFunction};
use crate::montecarlo::{
    pair_moment_table, replicate_field, replicate_path, run_replicates, scaling_check,
    tail_from_values, tail_table, McConfig, McSummary, PairMomentRow, ScalingReport, Study,
    TailRow, TheoremEntry,
};
use crate::sampling::{holder_norm, sample_bm};
use crate::stats;
use crate::verify::{
    conjecture_statistic_fields, decomposition_from_fields, joint_grid, rate_bound_value,
    theorem_discrepancy, werner_statistic, SandwichReport,
};
use crate::winding::{
    additivity_check, chord_polygon, subloop_fields, winding_field, AdditivityReport, ClosedLoop,
    GridSpec,
};

const PGM_SCALE: u32 = 8;

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn write_summary(out: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(out.join("summary.json"), text)?;
    Ok(())
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    manifest: &'a RunManifest,
    grid: GridSpec,
    steps: usize,
    holder_norm_quarter: f64,
    max_abs_winding: i32,
    on_curve_cells: usize,
    werner: Vec<WernerRow>,
}

#[derive(Serialize)]
struct WernerRow {
    n: i32,
    stat: Banded,
}

/// One path: `field.pgm`, `werner.csv`, `summary.json`.
pub fn run_simulate(cfg: &SimulateConfig, out: &Path) -> Result<RunManifest> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let path = sample_bm(cfg.seed, cfg.levels)?;
    let grid = GridSpec::for_path(&path, cfg.resolution)?;
    let field = winding_field(&ClosedLoop::from_path(&path), &grid, grid.default_eps())?;

    let mut manifest = RunManifest::new("simulate", cfg.seed, cfg)?;
    manifest.write_output(
        out,
        "field.pgm",
        &render_field_pgm(&field, cfg.pgm_scale, cfg.mark_curve)?,
    )?;
    let mut rows = Vec::new();
    let mut werner = Vec::new();
    for &n in &cfg.n_values {
        let w = werner_statistic(&field, n)?;
        rows.push((n, 0, w));
        werner.push(WernerRow { n, stat: w });
    }
    manifest.write_output(out, "werner.csv", &tables::werner_rows_csv(&rows))?;

    write_summary(
        out,
        &SimulateSummary {
            manifest: &manifest,
            grid,
            steps: path.steps(),
            holder_norm_quarter: holder_norm(&path, 0.25)?,
            max_abs_winding: field.max_abs(),
            on_curve_cells: field.on_curve.iter().filter(|&&c| c).count(),
            werner,
        },
    )?;
    Ok(manifest)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub manifest: RunManifest,
    /// One report per test function (`f = 1`, then the bump).
    pub sandwich: Vec<SandwichReport>,
    pub additivity: AdditivityReport,
    pub theorem: Vec<TheoremEntry>,
}

impl VerifyOutcome {
    /// Sandwich and additivity checks; the discrepancy table is informative.
    pub fn passed(&self) -> bool {
        self.additivity.violations == 0 && self.sandwich.iter().all(SandwichReport::holds)
    }
}

/// Sandwich, additivity and discrepancy checks on one path: `theorem.csv`,
/// `field.pgm`, `summary.json`.
pub fn run_verify(cfg: &VerifyConfig, out: &Path) -> Result<VerifyOutcome> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let path = sample_bm(cfg.seed, cfg.levels)?;
    let grid = GridSpec::for_path(&path, cfg.resolution)?;
    let eps = grid.default_eps();
    let full = winding_field(&ClosedLoop::from_path(&path), &grid, eps)?;
    let subs = subloop_fields(&path, cfg.t, &grid, eps)?;
    let chord = winding_field(&chord_polygon(&path, cfg.t)?, &grid, eps)?;

    let fs = [
        TestFunction::constant(1.0),
        TestFunction::gaussian_bump(cfg.bump.center, cfg.bump.width),
    ];
    let sandwich = fs
        .iter()
        .map(|f| decomposition_from_fields(&full, &subs, cfg.n, cfg.m, f))
        .collect::<Result<Vec<_>>>()?;
    let additivity = additivity_check(&full, &subs, &chord)?;

    let holder = holder_norm(&path, cfg.params.alpha)?;
    let mut theorem = Vec::new();
    for &n in &cfg.n_values {
        for f in &fs {
            theorem.push(TheoremEntry {
                n,
                f_name: f.name.clone(),
                discrepancy: theorem_discrepancy(&path, &full, f, n)?,
                bound: rate_bound_value(f, holder, n, &cfg.params, cfg.eta_variant),
            });
        }
    }

    let mut manifest = RunManifest::new("verify", cfg.seed, cfg)?;
    manifest.write_output(out, "theorem.csv", &tables::theorem_entries_csv(&theorem))?;
    manifest.write_output(
        out,
        "field.pgm",
        &render_field_pgm(&full, PGM_SCALE, false)?,
    )?;
    let outcome = VerifyOutcome {
        manifest,
        sandwich,
        additivity,
        theorem,
    };
    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        outcome: &'a VerifyOutcome,
        passed: bool,
    }
    write_summary(
        out,
        &Summary {
            outcome: &outcome,
            passed: outcome.passed(),
        },
    )?;
    Ok(outcome)
}

#[derive(Serialize)]
struct ScalingSummary<'a> {
    #[serde(flatten)]
    report: &'a ScalingReport,
    passes: bool,
}

#[derive(Serialize)]
struct McRunSummary<'a> {
    manifest: &'a RunManifest,
    werner: Option<&'a McSummary>,
    tail: &'a [TailRow],
    pair_moment: &'a [PairMomentRow],
    scaling: Option<ScalingSummary<'a>>,
}

/// Replicate studies. Always writes `werner.csv`, `theorem.csv`, `tail.csv`
/// and `pairmoment.csv` (header-only for studies not selected), the heatmap
/// of replicate 0 and `summary.json`; `scaling.csv` when that study runs.
pub fn run_mc(cfg: &McConfig, out: &Path) -> Result<RunManifest> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;

    let summary = if cfg.has(Study::Werner) {
        Some(run_replicates(cfg)?)
    } else {
        None
    };
    let tail = if cfg.has(Study::Tail) {
        let t = &cfg.tail;
        match summary.as_ref().and_then(|s| s.werner_values(t.n)) {
            Some(values) => tail_from_values(t.n, t.delta, &values, &t.r_values)?,
            None => tail_table(cfg, t.n, t.delta, &t.r_values)?,
        }
    } else {
        Vec::new()
    };
    let pair_moment = if cfg.has(Study::Pairmoment) {
        pair_moment_table(cfg, &cfg.pair_moment.t_values, &cfg.pair_moment.m_values)?
    } else {
        Vec::new()
    };
    let scaling = if cfg.has(Study::Scaling) {
        Some(scaling_check(cfg, cfg.scaling.t, cfg.scaling.n)?)
    } else {
        None
    };

    let mut manifest = RunManifest::new("mc", cfg.master_seed, cfg)?;
    manifest.write_output(out, "werner.csv", &tables::werner_csv(summary.as_ref()))?;
    manifest.write_output(out, "theorem.csv", &tables::theorem_csv(summary.as_ref()))?;
    manifest.write_output(out, "tail.csv", &tables::tail_csv(&tail))?;
    manifest.write_output(out, "pairmoment.csv", &tables::pairmoment_csv(&pair_moment))?;
    if let Some(s) = &scaling {
        manifest.write_output(out, "scaling.csv", &scaling_csv(s))?;
    }
    let (_, field) = pool(cfg.threads)?.install(|| replicate_field(cfg, 0))?;
    manifest.write_output(
        out,
        "field_r0.pgm",
        &render_field_pgm(&field, PGM_SCALE, false)?,
    )?;

    write_summary(
        out,
        &McRunSummary {
            manifest: &manifest,
            werner: summary.as_ref(),
            tail: &tail,
            pair_moment: &pair_moment,
            scaling: scaling.as_ref().map(|report| ScalingSummary {
                report,
                passes: report.passes(),
            }),
        },
    )?;
    Ok(manifest)
}

fn scaling_csv(s: &ScalingReport) -> String {
    let mut out = String::from("replicate,scaled_subloop_area,full_area\n");
    for (r, (a, b)) in s.subloop_sample.iter().zip(&s.full_sample).enumerate() {
        out.push_str(&format!(
            "{r},{},{}\n",
            tables::fmt_f64(*a),
            tables::fmt_f64(*b)
        ));
    }
    out
}

#[derive(Serialize)]
struct ConjectureRow {
    n: i32,
    mean_offcurve: f64,
    mean_inclusive: f64,
    half_width: f64,
}

#[derive(Serialize)]
struct ConjectureSummary<'a> {
    manifest: &'a RunManifest,
    per_n: Vec<ConjectureRow>,
    /// Log-log slope of the mean band-inclusive statistic against `N`.
    slope: f64,
}

/// `N^2 |{θ_X >= N, θ_X' >= N}|` for independent pairs; replicate `r` uses
/// streams `2r` and `2r + 1`. Writes `conjecture.csv` and `summary.json`.
pub fn run_conjecture(cfg: &ConjectureConfig, out: &Path) -> Result<RunManifest> {
    cfg.validate()?;
    std::fs::create_dir_all(out)?;
    let stats_per_rep: Vec<Vec<Banded>> = pool(cfg.threads)?.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| {
                let a = replicate_path(cfg.master_seed, 2 * r, cfg.levels)?;
                let b = replicate_path(cfg.master_seed, 2 * r + 1, cfg.levels)?;
                let grid = joint_grid(&a, &b, cfg.resolution)?;
                let eps = grid.default_eps();
                let fa = winding_field(&ClosedLoop::from_path(&a), &grid, eps)?;
                let fb = winding_field(&ClosedLoop::from_path(&b), &grid, eps)?;
                cfg.n_values
                    .iter()
                    .map(|&n| conjecture_statistic_fields(&fa, &fb, n))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    for (r, per_n) in stats_per_rep.iter().enumerate() {
        for (&n, &v) in cfg.n_values.iter().zip(per_n) {
            rows.push((n, r, v));
        }
    }
    let per_n: Vec<ConjectureRow> = cfg
        .n_values
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let incl: Vec<f64> = stats_per_rep.iter().map(|s| s[idx].inclusive).collect();
            let off: Vec<f64> = stats_per_rep.iter().map(|s| s[idx].off_curve).collect();
            ConjectureRow {
                n,
                mean_offcurve: stats::mean(&off),
                mean_inclusive: stats::mean(&incl),
                half_width: stats::half_width_95(&incl),
            }
        })
        .collect();
    let xs: Vec<f64> = per_n.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = per_n.iter().map(|r| r.mean_inclusive).collect();
    let slope = if xs.len() >= 2 {
        stats::log_log_slope(&xs, &ys)
    } else {
        f64::NAN
    };

    let mut manifest = RunManifest::new("conjecture", cfg.master_seed, cfg)?;
    manifest.write_output(out, "conjecture.csv", &tables::werner_rows_csv(&rows))?;
    write_summary(
        out,
        &ConjectureSummary {
            manifest: &manifest,
            per_n,
            slope,
        },
    )?;
    Ok(manifest)
}
