//! Replicated studies.
//!
//! Replicate `r` draws its path from the stream with id `r` and seed
//! `splitmix64(master_seed ^ (r + 1) * 0x9E3779B97F4A7C15)`. Replicates run on
//! a pool with the configured number of threads and are folded in index
//! order, so every summary is independent of the thread budget.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::measures::{threshold_area, Banded, TestFunction, ThresholdSet};
use crate::rng::{child_seed, BoxMuller, RngStream};
use crate::sampling::{holder_norm, sample_bm_with, PlanarPath, MAX_LEVELS};
use crate::stats;
use crate::verify::{
    rate_bound_value, theorem_discrepancy, werner_statistic, EtaVariant, ParamSet,
};
use crate::winding::{winding_field, ClosedLoop, GridSpec, WindingField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    Werner,
    Tail,
    Pairmoment,
    Scaling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BumpSpec {
    pub center: Point,
    pub width: f64,
}

impl Default for BumpSpec {
    fn default() -> Self {
        Self {
            center: Point::ORIGIN,
            width: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TailSpec {
    pub n: i32,
    pub delta: f64,
    pub r_values: Vec<f64>,
}

impl Default for TailSpec {
    fn default() -> Self {
        Self {
            n: 16,
            delta: 0.25,
            r_values: vec![0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairMomentSpec {
    pub t_values: Vec<usize>,
    pub m_values: Vec<i32>,
}

impl Default for PairMomentSpec {
    fn default() -> Self {
        Self {
            t_values: vec![2, 4],
            m_values: vec![1, 2, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingSpec {
    pub t: usize,
    pub n: i32,
}

impl Default for ScalingSpec {
    fn default() -> Self {
        Self { t: 4, n: 8 }
    }
}

/// Configuration of a replicated study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McConfig {
    pub master_seed: u64,
    pub replicates: usize,
    pub levels: u32,
    /// Cells per side of the square grid fitted to each path.
    pub resolution: usize,
    pub n_values: Vec<i32>,
    pub params: ParamSet,
    pub eta_variant: EtaVariant,
    pub bump: BumpSpec,
    pub studies: Vec<Study>,
    pub tail: TailSpec,
    pub pair_moment: PairMomentSpec,
    pub scaling: ScalingSpec,
    /// Worker threads; an execution setting that never affects results, so
    /// it is not echoed into outputs.
    #[serde(skip_serializing)]
    pub threads: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            replicates: 32,
            levels: 16,
            resolution: 1024,
            n_values: vec![4, 8, 16],
            params: ParamSet::default(),
            eta_variant: EtaVariant::default(),
            bump: BumpSpec::default(),
            studies: vec![Study::Werner],
            tail: TailSpec::default(),
            pair_moment: PairMomentSpec::default(),
            scaling: ScalingSpec::default(),
            threads: 1,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        if self.levels > MAX_LEVELS {
            return Err(Error::LevelsOutOfRange {
                got: self.levels,
                max: MAX_LEVELS,
            });
        }
        if self.resolution < 8 {
            return Err(Error::Config("resolution must be >= 8".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::Config("n_values must be nonempty".into()));
        }
        if self.n_values.iter().any(|&n| n < 1) || self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "n_values must be positive and strictly ascending".into(),
            ));
        }
        if self.bump.width.is_nan() || self.bump.width <= 0.0 {
            return Err(Error::Config("bump width must be positive".into()));
        }
        self.params.ensure_valid()
    }

    pub fn test_functions(&self) -> Vec<TestFunction> {
        vec![
            TestFunction::constant(1.0),
            TestFunction::gaussian_bump(self.bump.center, self.bump.width),
        ]
    }

    pub fn seed(&self, replicate: usize) -> u64 {
        child_seed(self.master_seed, replicate as u64)
    }

    pub fn has(&self, study: Study) -> bool {
        self.studies.contains(&study)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.max(1))
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }
}

/// Path of replicate `replicate`, at an explicit number of levels.
pub fn replicate_path(master_seed: u64, replicate: usize, levels: u32) -> Result<PlanarPath> {
    let mut g = BoxMuller::new(RngStream::for_replicate(master_seed, replicate as u64));
    sample_bm_with(&mut g, levels)
}

/// Path, grid and winding field of one replicate.
pub fn replicate_field(cfg: &McConfig, replicate: usize) -> Result<(PlanarPath, WindingField)> {
    let path = replicate_path(cfg.master_seed, replicate, cfg.levels)?;
    let grid = GridSpec::for_path(&path, cfg.resolution)?;
    let field = winding_field(&ClosedLoop::from_path(&path), &grid, grid.default_eps())?;
    Ok((path, field))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremEntry {
    pub n: i32,
    pub f_name: String,
    pub discrepancy: Banded,
    pub bound: f64,
}

impl TheoremEntry {
    pub fn ratio(&self) -> f64 {
        self.discrepancy.inclusive / self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    pub holder_norm: f64,
    /// `2πN|D_N|` per entry of `n_values`.
    pub werner: Vec<Banded>,
    pub theorem: Vec<TheoremEntry>,
}

fn run_one(cfg: &McConfig, fs: &[TestFunction], r: usize) -> Result<ReplicateRecord> {
    let (path, field) = replicate_field(cfg, r)?;
    let holder = holder_norm(&path, cfg.params.alpha)?;
    let mut werner = Vec::with_capacity(cfg.n_values.len());
    let mut theorem = Vec::new();
    for &n in &cfg.n_values {
        werner.push(werner_statistic(&field, n)?);
        for f in fs {
            theorem.push(TheoremEntry {
                n,
                f_name: f.name.clone(),
                discrepancy: theorem_discrepancy(&path, &field, f, n)?,
                bound: rate_bound_value(f, holder, n, &cfg.params, cfg.eta_variant),
            });
        }
    }
    Ok(ReplicateRecord {
        replicate: r,
        seed: cfg.seed(r),
        holder_norm: holder,
        werner,
        theorem,
    })
}

/// Replicate statistics of `2πN|D_N|` (band-inclusive counting).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NSummary {
    pub n: i32,
    pub mean: f64,
    pub variance: f64,
    pub median: f64,
    /// `mean((2πN|D_N| - 1)^2)`.
    pub l2_error: f64,
    pub half_width: f64,
    pub mean_offcurve: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremSummary {
    pub n: i32,
    pub f_name: String,
    pub median_discrepancy: f64,
    pub median_bound: f64,
    pub median_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McSummary {
    pub per_n: Vec<NSummary>,
    pub theorem: Vec<TheoremSummary>,
    pub replicates: Vec<ReplicateRecord>,
    /// False when some replicate failed; aggregates then cover the others.
    pub valid: bool,
    pub errors: Vec<String>,
}

impl McSummary {
    pub fn werner_values(&self, n: i32) -> Option<Vec<f64>> {
        let idx = self.per_n.iter().position(|s| s.n == n)?;
        Some(
            self.replicates
                .iter()
                .map(|r| r.werner[idx].inclusive)
                .collect(),
        )
    }

    pub fn discrepancies(&self, n: i32, f_name: &str) -> Vec<f64> {
        self.replicates
            .iter()
            .flat_map(|r| r.theorem.iter())
            .filter(|e| e.n == n && e.f_name == f_name)
            .map(|e| e.discrepancy.inclusive)
            .collect()
    }
}

pub fn run_replicates(cfg: &McConfig) -> Result<McSummary> {
    cfg.validate()?;
    let fs = cfg.test_functions();
    let results: Vec<Result<ReplicateRecord>> = cfg.pool()?.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| run_one(cfg, &fs, r))
            .collect()
    });
    Ok(summarize(cfg, &fs, results))
}

fn summarize(
    cfg: &McConfig,
    fs: &[TestFunction],
    results: Vec<Result<ReplicateRecord>>,
) -> McSummary {
    let mut replicates = Vec::new();
    let mut errors = Vec::new();
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok(rec) => replicates.push(rec),
            Err(e) => errors.push(format!("replicate {r}: {e}")),
        }
    }
    let per_n = cfg
        .n_values
        .iter()
        .enumerate()
        .map(|(idx, &n)| {
            let xs: Vec<f64> = replicates.iter().map(|r| r.werner[idx].inclusive).collect();
            let off: Vec<f64> = replicates.iter().map(|r| r.werner[idx].off_curve).collect();
            let sq: Vec<f64> = xs.iter().map(|x| (x - 1.0) * (x - 1.0)).collect();
            NSummary {
                n,
                mean: stats::mean(&xs),
                variance: stats::variance(&xs),
                median: stats::median(&xs),
                l2_error: stats::mean(&sq),
                half_width: stats::half_width_95(&xs),
                mean_offcurve: stats::mean(&off),
            }
        })
        .collect();
    let mut theorem = Vec::new();
    for &n in &cfg.n_values {
        for f in fs {
            let entries: Vec<&TheoremEntry> = replicates
                .iter()
                .flat_map(|r| r.theorem.iter())
                .filter(|e| e.n == n && e.f_name == f.name)
                .collect();
            let col = |g: &dyn Fn(&TheoremEntry) -> f64| {
                stats::median(&entries.iter().map(|e| g(e)).collect::<Vec<_>>())
            };
            theorem.push(TheoremSummary {
                n,
                f_name: f.name.clone(),
                median_discrepancy: col(&|e| e.discrepancy.inclusive),
                median_bound: col(&|e| e.bound),
                median_ratio: col(&|e| e.ratio()),
            });
        }
    }
    McSummary {
        per_n,
        theorem,
        valid: errors.is_empty(),
        errors,
        replicates,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub n: i32,
    pub r: f64,
    pub ccdf: f64,
}

/// Empirical `P(N^δ |2πN|D_N| - 1| >= R)` from `2πN|D_N|` samples.
pub fn tail_from_values(
    n: i32,
    delta: f64,
    werner: &[f64],
    r_values: &[f64],
) -> Result<Vec<TailRow>> {
    if delta.is_nan() || delta >= 0.5 {
        return Err(Error::Precondition(format!(
            "tail exponent δ must be < 1/2, got {delta}"
        )));
    }
    let scale = (n as f64).powf(delta);
    let dev: Vec<f64> = werner.iter().map(|w| scale * (w - 1.0).abs()).collect();
    Ok(r_values
        .iter()
        .map(|&r| TailRow {
            n,
            r,
            ccdf: stats::ccdf(&dev, r),
        })
        .collect())
}

/// Runs the replicates at a single `N` and tabulates the tail.
pub fn tail_table(cfg: &McConfig, n: i32, delta: f64, r_values: &[f64]) -> Result<Vec<TailRow>> {
    if delta.is_nan() || delta >= 0.5 {
        return Err(Error::Precondition(format!(
            "tail exponent δ must be < 1/2, got {delta}"
        )));
    }
    let one = McConfig {
        n_values: vec![n],
        ..cfg.clone()
    };
    let summary = run_replicates(&one)?;
    tail_from_values(
        n,
        delta,
        &summary.werner_values(n).unwrap_or_default(),
        r_values,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairMomentRow {
    pub t: usize,
    pub m: i32,
    /// Mean of `(Σ_{i<j} |D^{i,j}_M|)^2` over replicates.
    pub estimate: f64,
    pub stderr: f64,
}

/// `Σ_{i<j} |D^{i,j}_M|` for each requested `M`, holding one subloop field
/// at a time.
fn pair_sums(path: &PlanarPath, parts: usize, grid: &GridSpec, ms: &[i32]) -> Result<Vec<f64>> {
    let mut counts = vec![vec![0u32; grid.cells()]; ms.len()];
    for i in 1..=parts {
        let f = winding_field(
            &ClosedLoop::subloop(path, i, parts)?,
            grid,
            grid.default_eps(),
        )?;
        for (c, &m) in counts.iter_mut().zip(ms) {
            for (ck, th) in c.iter_mut().zip(&f.theta) {
                *ck += u32::from(th.abs() >= m);
            }
        }
    }
    let area = grid.cell_area();
    Ok(counts
        .iter()
        .map(|c| {
            let pairs: u64 = c
                .iter()
                .map(|&k| u64::from(k) * u64::from(k.saturating_sub(1)) / 2)
                .sum();
            pairs as f64 * area
        })
        .collect())
}

pub fn pair_moment_table(
    cfg: &McConfig,
    t_values: &[usize],
    m_values: &[i32],
) -> Result<Vec<PairMomentRow>> {
    cfg.validate()?;
    let steps = 1usize << cfg.levels;
    if let Some(&t) = t_values
        .iter()
        .find(|&&t| t == 0 || !steps.is_multiple_of(t))
    {
        return Err(Error::NotDivisible { parts: t, steps });
    }
    // sums[r][ti][mi]
    let sums: Vec<Vec<Vec<f64>>> = cfg.pool()?.install(|| {
        (0..cfg.replicates)
            .into_par_iter()
            .map(|r| {
                let path = replicate_path(cfg.master_seed, r, cfg.levels)?;
                let grid = GridSpec::for_path(&path, cfg.resolution)?;
                t_values
                    .iter()
                    .map(|&t| pair_sums(&path, t, &grid, m_values))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut rows = Vec::new();
    for (ti, &t) in t_values.iter().enumerate() {
        for (mi, &m) in m_values.iter().enumerate() {
            let sq: Vec<f64> = sums.iter().map(|s| s[ti][mi] * s[ti][mi]).collect();
            rows.push(PairMomentRow {
                t,
                m,
                estimate: stats::mean(&sq),
                stderr: (stats::variance(&sq) / sq.len() as f64).sqrt(),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub t: usize,
    pub n: i32,
    /// `T |D^1_N|` from the first subloop of replicate paths.
    pub subloop_sample: Vec<f64>,
    /// `|D_N|` from independent full paths with `2^L / T` steps.
    pub full_sample: Vec<f64>,
    pub statistic: f64,
    pub critical_1pct: f64,
}

impl ScalingReport {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_1pct
    }
}

fn self_fitted_area(points: Vec<Point>, resolution: usize, n: i32) -> Result<f64> {
    let lp = ClosedLoop::new(points)?;
    let grid = GridSpec::padded(lp.bbox(), resolution, resolution, 2)?;
    let f = winding_field(&lp, &grid, grid.default_eps())?;
    Ok(threshold_area(&ThresholdSet::one_sided(&f, n))?.inclusive)
}

/// Compares `T |D^1_N|` with `|D_N|` by a two-sample KS statistic.
///
/// Subloop 1 of a level-`L` path has `2^L / T` steps; the comparison sample
/// uses full paths at level `L - log2 T` from streams `R..2R`, and each loop is
/// measured on a grid fitted to its own bounding box, so the two samples
/// share their law exactly, discretization included.
pub fn scaling_check(cfg: &McConfig, t: usize, n: i32) -> Result<ScalingReport> {
    cfg.validate()?;
    let steps = 1usize << cfg.levels;
    if t == 0 || !steps.is_multiple_of(t) {
        return Err(Error::NotDivisible { parts: t, steps });
    }
    let sub_levels = cfg.levels - t.trailing_zeros();
    let r_count = cfg.replicates;
    let (subloop_sample, full_sample) = cfg.pool()?.install(|| -> Result<_> {
        let a = (0..r_count)
            .into_par_iter()
            .map(|r| {
                let path = replicate_path(cfg.master_seed, r, cfg.levels)?;
                let pts = path.subpath(1, t)?.points().to_vec();
                Ok(t as f64 * self_fitted_area(pts, cfg.resolution, n)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        let b = (0..r_count)
            .into_par_iter()
            .map(|r| {
                let path = replicate_path(cfg.master_seed, r_count + r, sub_levels)?;
                self_fitted_area(path.points().to_vec(), cfg.resolution, n)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((a, b))
    })?;
    let statistic = stats::ks_statistic(&subloop_sample, &full_sample);
    Ok(ScalingReport {
        t,
        n,
        critical_1pct: stats::ks_critical_value(subloop_sample.len(), full_sample.len(), 0.01),
        subloop_sample,
        full_sample,
        statistic,
    })
}
