//! Monte Carlo experiment harness: sample degree sequences, generate
//! graphs, measure the bucketing algorithm's work, and summarize how the
//! per-vertex work approaches its limit as n grows.
//!
//! Every trial is keyed by (master seed, n, trial index) alone, so a
//! run is reproducible record-for-record no matter how many workers
//! execute it, and any single trial's graph can be regenerated later
//! without re-running the sweep.

use std::fmt;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{limit_constant, BoundReport, LimitConstant};
use crate::degrees::{
    power_law_sequence, sample_iid_degrees, DegreeSequence, Moment, PowerLawParams,
    ReferenceDistribution,
};
use crate::enumerate::{assign_buckets, TieMode};
use crate::error::{Error, Result};
use crate::graphgen::{generate_ecm, SimpleGraph};

/// Relative tolerance for the reference limit constant computed once per
/// experiment.
const LIMIT_TOL: f64 = 1e-9;

/// Salt for deriving a degree-sampling seed from a trial seed.
const DEGREE_SALT: u64 = 0x8EBC_6AF0_9C88_C6E3;
/// Salt for deriving a graph-generation seed from a trial seed.
const GRAPH_SALT: u64 = 0x5899_65CC_7537_4CC3;

/// How the maximum degree scales with the instance size n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapRule {
    /// Cap at ⌊√n⌋.
    SqrtN,
    /// Cap at ⌊√n / ln²n⌋, floored at 1.
    SqrtNOverLog2,
    /// Cap at a constant, independent of n.
    Fixed(u64),
}

impl CapRule {
    /// The degree cap for instance size `n` (always ≥ 1 for n ≥ 1).
    pub fn cap_for(&self, n: u64) -> u64 {
        match *self {
            CapRule::SqrtN => isqrt(n),
            CapRule::SqrtNOverLog2 => {
                let ln = (n as f64).ln();
                ((isqrt(n) as f64) / (ln * ln)).floor().max(1.0) as u64
            }
            CapRule::Fixed(k) => k,
        }
    }
}

/// ⌊√n⌋ exactly: f64 sqrt plus integer correction.
fn isqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s.checked_mul(s).map_or(true, |sq| sq > n) {
        s -= 1;
    }
    while (s + 1).checked_mul(s + 1).map_or(false, |sq| sq <= n) {
        s += 1;
    }
    s
}

impl fmt::Display for CapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CapRule::SqrtN => f.write_str("sqrt-n"),
            CapRule::SqrtNOverLog2 => f.write_str("sqrt-n-over-log2"),
            CapRule::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

impl FromStr for CapRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-");
        match norm.as_str() {
            "sqrt-n" => return Ok(CapRule::SqrtN),
            "sqrt-n-over-log2" => return Ok(CapRule::SqrtNOverLog2),
            _ => {}
        }
        let body = norm
            .strip_prefix("fixed:")
            .or_else(|| norm.strip_prefix("fixed(").and_then(|r| r.strip_suffix(')')));
        if let Some(k) = body {
            let k: u64 = k.parse().map_err(|_| {
                Error::Parameter(format!("invalid fixed cap {k:?} in {s:?}"))
            })?;
            if k == 0 {
                return Err(Error::Parameter("fixed cap must be at least 1".into()));
            }
            return Ok(CapRule::Fixed(k));
        }
        Err(Error::Parameter(format!(
            "unknown cap rule {s:?} (expected sqrt-n, sqrt-n-over-log2, or fixed:<k>)"
        )))
    }
}

/// How each trial's degree sequence is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeModel {
    /// n i.i.d. draws from the truncated power-law distribution.
    Iid,
    /// The deterministic quantile sequence of the truncated power law.
    DeterministicPowerLaw,
}

impl fmt::Display for DegreeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeModel::Iid => "iid",
            DegreeModel::DeterministicPowerLaw => "deterministic-powerlaw",
        })
    }
}

impl FromStr for DegreeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('_', "-").as_str() {
            "iid" => Ok(DegreeModel::Iid),
            "deterministic-powerlaw" => Ok(DegreeModel::DeterministicPowerLaw),
            other => Err(Error::Parameter(format!(
                "unknown degree model {other:?} (expected iid or deterministic-powerlaw)"
            ))),
        }
    }
}

/// Full description of a work-measurement sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Power-law exponent of the degree distribution.
    pub alpha: f64,
    /// Instance sizes, ascending.
    pub n_values: Vec<u64>,
    /// Monte Carlo trials per instance size.
    pub trials: u32,
    /// Degree cap as a function of n.
    pub cap_rule: CapRule,
    /// Tie handling in the bucket assignment.
    pub tie_mode: TieMode,
    /// Degree sequence model.
    pub degree_model: DegreeModel,
    /// Root of all per-trial seeds.
    pub master_seed: u64,
    /// Worker threads; results are identical for any value.
    pub worker_count: usize,
    /// Sample the degree sequence once per n instead of per trial.
    pub fixed_sequence: bool,
    /// Memory budget; sweeps stop cleanly before an n that would
    /// exceed it. `None` disables the guard.
    pub max_memory_mb: Option<u64>,
}

impl Default for ExperimentConfig {
    /// Desk-scale defaults: α = 2.4, n ∈ {10⁴, 10⁵, 10⁶}, 10 trials,
    /// √n cap, both-bucket ties, i.i.d. degrees, single worker, 4 GiB
    /// memory budget.
    fn default() -> Self {
        ExperimentConfig {
            alpha: 2.4,
            n_values: vec![10_000, 100_000, 1_000_000],
            trials: 10,
            cap_rule: CapRule::SqrtN,
            tie_mode: TieMode::Both,
            degree_model: DegreeModel::Iid,
            master_seed: 1,
            worker_count: 1,
            fixed_sequence: false,
            max_memory_mb: Some(4096),
        }
    }
}

impl ExperimentConfig {
    /// Checks the cross-field invariants: α ∈ (1, ∞), at least one
    /// instance size, sizes ascending and ≥ 2, at least one trial, at
    /// least one worker.
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 1.0 {
            return Err(Error::Parameter(format!(
                "power-law exponent must be finite and > 1, got {}",
                self.alpha
            )));
        }
        if self.n_values.is_empty() {
            return Err(Error::Parameter("n_values must be nonempty".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(
                "n_values must be strictly ascending".into(),
            ));
        }
        if self.n_values[0] < 2 {
            return Err(Error::Parameter("instance sizes must be at least 2".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::Parameter("worker_count must be at least 1".into()));
        }
        Ok(())
    }

    /// Overrides the fields an overlay sets, leaving the rest untouched.
    pub fn apply_overlay(&mut self, overlay: &ConfigOverlay) {
        if let Some(v) = overlay.alpha {
            self.alpha = v;
        }
        if let Some(v) = &overlay.n_values {
            self.n_values = v.clone();
        }
        if let Some(v) = overlay.trials {
            self.trials = v;
        }
        if let Some(v) = overlay.cap_rule {
            self.cap_rule = v;
        }
        if let Some(v) = overlay.tie_mode {
            self.tie_mode = v;
        }
        if let Some(v) = overlay.degree_model {
            self.degree_model = v;
        }
        if let Some(v) = overlay.master_seed {
            self.master_seed = v;
        }
        if let Some(v) = overlay.worker_count {
            self.worker_count = v;
        }
        if let Some(v) = overlay.fixed_sequence {
            self.fixed_sequence = v;
        }
        if let Some(v) = overlay.max_memory_mb {
            self.max_memory_mb = v;
        }
    }
}

/// Partial configuration parsed from a key=value file; unset fields keep
/// their previous values when applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    /// `alpha = 2.4`
    pub alpha: Option<f64>,
    /// `n_list = 1e4, 1e5` (plain integers or mantissa-exponent form)
    pub n_values: Option<Vec<u64>>,
    /// `trials = 10`
    pub trials: Option<u32>,
    /// `cap = sqrt-n | sqrt-n-over-log2 | fixed:<k>`
    pub cap_rule: Option<CapRule>,
    /// `tie = consistent | both`
    pub tie_mode: Option<TieMode>,
    /// `degree_model = iid | deterministic-powerlaw`
    pub degree_model: Option<DegreeModel>,
    /// `seed = 42`
    pub master_seed: Option<u64>,
    /// `workers = 8`
    pub worker_count: Option<usize>,
    /// `fixed_sequence = true | false`
    pub fixed_sequence: Option<bool>,
    /// `max_memory_mb = 4096 | none` (outer None: key absent)
    pub max_memory_mb: Option<Option<u64>>,
}

/// Parses a flat `key = value` configuration, one pair per line, with
/// `#` comments and blank lines ignored. `origin` names the source in
/// parse errors.
pub fn parse_config_overlay(text: &str, origin: &Path) -> Result<ConfigOverlay> {
    let mut overlay = ConfigOverlay::default();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::parse(origin, lineno, format!("expected key = value, got {raw:?}"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let fail = |message: String| Error::parse(origin, lineno, message);
        match key {
            "alpha" => {
                overlay.alpha = Some(
                    value
                        .parse()
                        .map_err(|_| fail(format!("invalid alpha {value:?}")))?,
                )
            }
            "n_list" => {
                let mut ns = Vec::new();
                for tok in value.split(',') {
                    ns.push(
                        parse_count(tok.trim())
                            .ok_or_else(|| fail(format!("invalid instance size {tok:?}")))?,
                    );
                }
                overlay.n_values = Some(ns);
            }
            "trials" => {
                overlay.trials = Some(
                    value
                        .parse()
                        .map_err(|_| fail(format!("invalid trial count {value:?}")))?,
                )
            }
            "cap" => overlay.cap_rule = Some(value.parse().map_err(|e| fail(format!("{e}")))?),
            "tie" => overlay.tie_mode = Some(value.parse().map_err(|e| fail(format!("{e}")))?),
            "degree_model" => {
                overlay.degree_model = Some(value.parse().map_err(|e| fail(format!("{e}")))?)
            }
            "seed" => {
                overlay.master_seed = Some(
                    value
                        .parse()
                        .map_err(|_| fail(format!("invalid seed {value:?}")))?,
                )
            }
            "workers" => {
                overlay.worker_count = Some(
                    value
                        .parse()
                        .map_err(|_| fail(format!("invalid worker count {value:?}")))?,
                )
            }
            "fixed_sequence" => {
                overlay.fixed_sequence = Some(match value {
                    "true" => true,
                    "false" => false,
                    other => return Err(fail(format!("expected true or false, got {other:?}"))),
                })
            }
            "max_memory_mb" => {
                overlay.max_memory_mb = Some(if value == "none" {
                    None
                } else {
                    Some(
                        value
                            .parse()
                            .map_err(|_| fail(format!("invalid memory budget {value:?}")))?,
                    )
                })
            }
            other => return Err(fail(format!("unknown configuration key {other:?}"))),
        }
    }
    Ok(overlay)
}

/// Parses an instance size given as a plain integer or in
/// mantissa-exponent form ("1e6"); the value must be a whole number.
pub fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let v: f64 = s.parse().ok()?;
    if v.is_finite() && v >= 0.0 && v <= 2f64.powi(53) && v.fract() == 0.0 {
        Some(v as u64)
    } else {
        None
    }
}

/// SplitMix64 finalizer: a bijective avalanche mix.
fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// The seed of trial `trial` at instance size `n`: a chained avalanche
/// of the master seed, so any worker — or a later session — can
/// reconstruct a trial from its coordinates alone.
pub fn trial_seed(master_seed: u64, n: u64, trial: u32) -> u64 {
    let a = mix64(master_seed ^ 0xA076_1D64_78BD_642F);
    let b = mix64(a ^ n);
    mix64(b ^ trial as u64)
}

/// Regenerates the degree sequence and graph of one trial, exactly as
/// [`run_experiment`] saw them.
pub fn generate_trial_graph(
    cfg: &ExperimentConfig,
    n: u64,
    trial: u32,
) -> Result<(DegreeSequence, SimpleGraph)> {
    let seed = trial_seed(cfg.master_seed, n, trial);
    let cap = cfg.cap_rule.cap_for(n);
    let seq = match cfg.degree_model {
        DegreeModel::Iid => {
            let dist = ReferenceDistribution::power_law(cfg.alpha)?.truncate(cap)?;
            let deg_base = if cfg.fixed_sequence {
                trial_seed(cfg.master_seed, n, 0)
            } else {
                seed
            };
            sample_iid_degrees(&dist, n as usize, mix64(deg_base ^ DEGREE_SALT))?
        }
        DegreeModel::DeterministicPowerLaw => {
            let d_max: u32 = cap.try_into().map_err(|_| {
                Error::Parameter(format!("degree cap {cap} too large for a vertex degree"))
            })?;
            power_law_sequence(&PowerLawParams::new(cfg.alpha, n as usize, d_max)?)?
        }
    };
    let (graph, _) = generate_ecm(&seq, mix64(seed ^ GRAPH_SALT));
    Ok((seq, graph))
}

/// One trial's measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Instance size.
    pub n: u64,
    /// Trial index within this n.
    pub trial: u32,
    /// The trial seed, for regeneration.
    pub seed: u64,
    /// Bucketing work Σ C(Xᵥ, 2) under the configured tie mode.
    pub work: u64,
    /// Baseline work Σ C(Dᵥ, 2) on the same graph.
    pub trivial_work: u64,
    /// Edges in the generated graph.
    pub edge_count: u64,
    /// Realized mean degree 2·edges/n.
    pub mean_degree: f64,
}

/// Per-instance-size aggregation over trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NSummary {
    /// Instance size.
    pub n: u64,
    /// Mean bucketing work.
    pub mean_work: f64,
    /// Sample standard deviation (n−1 denominator; 0 for one trial).
    pub stddev_work: f64,
    /// Mean work per vertex.
    pub mean_ratio: f64,
    /// Sample standard deviation of the per-vertex work.
    pub stddev_ratio: f64,
    /// The limit prediction C·n, when the constant is finite.
    pub reference_cn: Option<f64>,
}

/// A completed (or cleanly aborted) sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// The power-law exponent the sweep ran with.
    pub alpha: f64,
    /// All trial records, ordered by (n, trial).
    pub trials: Vec<TrialRecord>,
    /// One summary per completed instance size, ascending in n.
    pub summaries: Vec<NSummary>,
    /// The limit constant, computed once when α > 7/3.
    pub limit_constant: Option<LimitConstant>,
    /// Why the sweep stopped early, if it did; completed sizes keep
    /// their records and summaries.
    pub aborted: Option<String>,
}

fn run_trial(cfg: &ExperimentConfig, n: u64, trial: u32) -> Result<TrialRecord> {
    let (_, graph) = generate_trial_graph(cfg, n, trial)?;
    let assignment = assign_buckets(&graph, cfg.tie_mode);
    let trivial_work: u64 = (0..graph.n() as u32)
        .map(|v| {
            let d = graph.degree(v) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    Ok(TrialRecord {
        n,
        trial,
        seed: trial_seed(cfg.master_seed, n, trial),
        work: assignment.wedge_work(),
        trivial_work,
        edge_count: graph.edge_count(),
        mean_degree: 2.0 * graph.edge_count() as f64 / n as f64,
    })
}

fn summarize(n: u64, records: &[TrialRecord], constant: Option<&LimitConstant>) -> NSummary {
    let t = records.len() as f64;
    let mean_work = records.iter().map(|r| r.work as f64).sum::<f64>() / t;
    let stddev_work = if records.len() >= 2 {
        let ss = records
            .iter()
            .map(|r| {
                let d = r.work as f64 - mean_work;
                d * d
            })
            .sum::<f64>();
        (ss / (t - 1.0)).sqrt()
    } else {
        0.0
    };
    NSummary {
        n,
        mean_work,
        stddev_work,
        mean_ratio: mean_work / n as f64,
        stddev_ratio: stddev_work / n as f64,
        reference_cn: constant.map(|c| c.value * n as f64),
    }
}

/// Rough peak resident bytes for one instance size, in MB: stub and
/// adjacency arrays dominate at ≈ 16 bytes per stub plus 12 per vertex,
/// per concurrently running trial, with 50% slack for sort scratch.
fn estimated_peak_mb(cfg: &ExperimentConfig, n: u64) -> Result<f64> {
    let cap = cfg.cap_rule.cap_for(n);
    let dist = ReferenceDistribution::power_law(cfg.alpha)?.truncate(cap)?;
    let mean = match dist.moment(1.0, 1e-9)? {
        Moment::Finite(v) => v,
        Moment::Divergent => unreachable!("truncated distributions have finite moments"),
    };
    let stubs = n as f64 * mean;
    let concurrent = cfg.worker_count.min(cfg.trials as usize).max(1) as f64;
    Ok((16.0 * stubs + 12.0 * n as f64) * concurrent * 1.5 / (1024.0 * 1024.0))
}

/// Runs the configured sweep: for each instance size, `trials`
/// independent (sequence, graph) generations and work measurements,
/// summarized against the limit prediction when one exists.
///
/// Trials are distributed over `worker_count` threads; because every
/// trial is a pure function of (master seed, n, trial), the result is
/// identical for any worker count. If the memory guard trips, the sweep
/// stops before the offending size and returns what completed, with
/// [`ExperimentResult::aborted`] explaining why.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let constant = if cfg.alpha > 7.0 / 3.0 {
        Some(limit_constant(
            &ReferenceDistribution::power_law(cfg.alpha)?,
            LIMIT_TOL,
        )?)
    } else {
        None
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::Resource(format!("failed to build worker pool: {e}")))?;

    let mut trials = Vec::new();
    let mut summaries = Vec::new();
    let mut aborted = None;
    for &n in &cfg.n_values {
        if let Some(budget) = cfg.max_memory_mb {
            let estimate = estimated_peak_mb(cfg, n)?;
            if estimate > budget as f64 {
                aborted = Some(format!(
                    "stopped before n = {n}: estimated peak memory {estimate:.0} MB \
                     exceeds the {budget} MB budget"
                ));
                break;
            }
        }
        let rows: Result<Vec<TrialRecord>> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(cfg, n, t))
                .collect()
        });
        let rows = rows?;
        summaries.push(summarize(n, &rows, constant.as_ref()));
        trials.extend(rows);
    }
    Ok(ExperimentResult {
        alpha: cfg.alpha,
        trials,
        summaries,
        limit_constant: constant,
        aborted,
    })
}

/// Writes the per-trial records as CSV:
/// `n,alpha,trial,work,trivial_work,edges,ratio` with the per-vertex
/// ratio at six decimals. Byte-identical for identical results.
pub fn write_csv<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "n,alpha,trial,work,trivial_work,edges,ratio")?;
    for r in &result.trials {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.6}",
            r.n,
            result.alpha,
            r.trial,
            r.work,
            r.trivial_work,
            r.edge_count,
            r.work as f64 / r.n as f64
        )?;
    }
    Ok(())
}

/// [`write_csv`] to a file path.
pub fn emit_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_csv(result, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes the per-size summaries as CSV:
/// `n,mean_ratio,stddev,reference_Cn`, with the reference column empty
/// when no limit constant exists (α ≤ 7/3).
pub fn write_plot_data<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "n,mean_ratio,stddev,reference_Cn")?;
    for s in &result.summaries {
        match s.reference_cn {
            Some(c) => writeln!(
                out,
                "{},{:.6},{:.6},{:.6}",
                s.n, s.mean_ratio, s.stddev_ratio, c
            )?,
            None => writeln!(out, "{},{:.6},{:.6},", s.n, s.mean_ratio, s.stddev_ratio)?,
        }
    }
    Ok(())
}

/// [`write_plot_data`] to a file path.
pub fn emit_plot_data(result: &ExperimentResult, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_plot_data(result, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Measured mean work at one instance size next to the limit
/// prediction C·n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    /// Instance size.
    pub n: u64,
    /// Mean measured bucketing work.
    pub empirical_mean_work: f64,
    /// The prediction C·n.
    pub predicted_work: f64,
    /// empirical / predicted; approaches 1 from below as n grows when
    /// the cap grows with n.
    pub ratio: f64,
}

/// Lines up an experiment's measured work against a bound report's
/// limit prediction. The report must carry the same exponent as the
/// experiment and a finite limit constant.
pub fn compare_bounds(
    result: &ExperimentResult,
    report: &BoundReport,
) -> Result<Vec<ComparisonRow>> {
    let alpha = report.alpha.ok_or_else(|| {
        Error::Usage("the bound report carries no power-law exponent to compare against".into())
    })?;
    if alpha != result.alpha {
        return Err(Error::Usage(format!(
            "exponent mismatch: experiment ran with α = {}, report describes α = {alpha}",
            result.alpha
        )));
    }
    let constant = report.limit_constant.as_ref().ok_or_else(|| {
        Error::Usage(format!(
            "the bound report has no limit constant (α = {alpha} ≤ 7/3 has none)"
        ))
    })?;
    Ok(result
        .summaries
        .iter()
        .map(|s| {
            let predicted = constant.value * s.n as f64;
            ComparisonRow {
                n: s.n,
                empirical_mean_work: s.mean_work,
                predicted_work: predicted,
                ratio: s.mean_work / predicted,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> ExperimentConfig {
        ExperimentConfig {
            alpha: 2.4,
            n_values: vec![500],
            trials: 3,
            cap_rule: CapRule::SqrtN,
            tie_mode: TieMode::Both,
            degree_model: DegreeModel::Iid,
            master_seed: 7,
            worker_count: 1,
            fixed_sequence: false,
            max_memory_mb: None,
        }
    }

    #[test]
    fn cap_rules() {
        assert_eq!(CapRule::SqrtN.cap_for(10_000), 100);
        assert_eq!(CapRule::SqrtN.cap_for(999), 31);
        assert_eq!(CapRule::SqrtN.cap_for(1_000_000), 1000);
        assert_eq!(CapRule::SqrtN.cap_for(35), 5);
        assert_eq!(CapRule::SqrtN.cap_for(36), 6);
        assert_eq!(CapRule::SqrtN.cap_for(2), 1);

        // √10⁴ / ln²10⁴ = 100/84.83 → 1; √10⁶ / ln²10⁶ = 1000/190.9 → 5.
        assert_eq!(CapRule::SqrtNOverLog2.cap_for(10_000), 1);
        assert_eq!(CapRule::SqrtNOverLog2.cap_for(1_000_000), 5);
        // Tiny n would round to 0; the rule floors at 1.
        assert_eq!(CapRule::SqrtNOverLog2.cap_for(10), 1);

        assert_eq!(CapRule::Fixed(7).cap_for(5), 7);
        assert_eq!(CapRule::Fixed(7).cap_for(1_000_000_000), 7);
    }

    #[test]
    fn cap_rule_tokens() {
        assert_eq!("sqrt-n".parse::<CapRule>().unwrap(), CapRule::SqrtN);
        assert_eq!("sqrt_n".parse::<CapRule>().unwrap(), CapRule::SqrtN);
        assert_eq!(
            "sqrt-n-over-log2".parse::<CapRule>().unwrap(),
            CapRule::SqrtNOverLog2
        );
        assert_eq!("fixed:12".parse::<CapRule>().unwrap(), CapRule::Fixed(12));
        assert_eq!("fixed(12)".parse::<CapRule>().unwrap(), CapRule::Fixed(12));
        assert!("fixed:0".parse::<CapRule>().is_err());
        assert!("sqrt".parse::<CapRule>().is_err());
        assert_eq!(CapRule::Fixed(12).to_string(), "fixed:12");
        assert_eq!(CapRule::SqrtN.to_string(), "sqrt-n");
    }

    #[test]
    fn seeds_are_distinct_and_reproducible() {
        let mut seen = std::collections::BTreeSet::new();
        for &n in &[10_000u64, 100_000, 1_000_000] {
            for trial in 0..10 {
                let s = trial_seed(1, n, trial);
                assert_eq!(s, trial_seed(1, n, trial));
                assert!(seen.insert(s), "seed collision at n = {n}, trial {trial}");
            }
        }
        assert_ne!(trial_seed(1, 100, 0), trial_seed(2, 100, 0));
    }

    #[test]
    fn degenerate_cap_yields_zero_work() {
        // Capping degrees at 1 makes every graph a partial matching:
        // no vertex has two bucket entries, so the work is zero.
        let cfg = ExperimentConfig {
            cap_rule: CapRule::Fixed(1),
            n_values: vec![100],
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();
        assert!(result.trials.iter().all(|r| r.work == 0));
        assert!(result.trials.iter().all(|r| r.trivial_work == 0));
        assert_eq!(result.summaries[0].mean_ratio, 0.0);
    }

    #[test]
    fn records_are_ordered_and_self_consistent() {
        let cfg = ExperimentConfig {
            n_values: vec![300, 600],
            trials: 4,
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();
        assert_eq!(result.trials.len(), 8);
        assert_eq!(result.summaries.len(), 2);
        let coords: Vec<(u64, u32)> = result.trials.iter().map(|r| (r.n, r.trial)).collect();
        assert_eq!(
            coords,
            vec![
                (300, 0),
                (300, 1),
                (300, 2),
                (300, 3),
                (600, 0),
                (600, 1),
                (600, 2),
                (600, 3)
            ]
        );
        for r in &result.trials {
            assert_eq!(r.seed, trial_seed(cfg.master_seed, r.n, r.trial));
            assert_eq!(r.mean_degree, 2.0 * r.edge_count as f64 / r.n as f64);
        }
        // Summaries match a recomputation from the records.
        for s in &result.summaries {
            let rows: Vec<TrialRecord> = result
                .trials
                .iter()
                .copied()
                .filter(|r| r.n == s.n)
                .collect();
            let again = summarize(s.n, &rows, result.limit_constant.as_ref());
            assert_eq!(*s, again);
        }
    }

    #[test]
    fn size_subsets_reproduce_identical_records() {
        // Seeds depend only on (master, n, trial), so dropping an n from
        // the sweep leaves the others' records untouched.
        let full = run_experiment(&ExperimentConfig {
            n_values: vec![300, 600],
            ..quick_config()
        })
        .unwrap();
        let only_600 = run_experiment(&ExperimentConfig {
            n_values: vec![600],
            ..quick_config()
        })
        .unwrap();
        let full_600: Vec<TrialRecord> = full
            .trials
            .iter()
            .copied()
            .filter(|r| r.n == 600)
            .collect();
        assert_eq!(full_600, only_600.trials);
        assert_eq!(full.summaries[1], only_600.summaries[0]);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let base = quick_config();
        let one = run_experiment(&ExperimentConfig {
            worker_count: 1,
            ..base.clone()
        })
        .unwrap();
        let four = run_experiment(&ExperimentConfig {
            worker_count: 4,
            ..base
        })
        .unwrap();
        assert_eq!(one.trials, four.trials);
        assert_eq!(one.summaries, four.summaries);

        let mut csv_one = Vec::new();
        let mut csv_four = Vec::new();
        write_csv(&one, &mut csv_one).unwrap();
        write_csv(&four, &mut csv_four).unwrap();
        assert_eq!(csv_one, csv_four);
    }

    #[test]
    fn fixed_sequence_shares_degrees_across_trials() {
        let cfg = ExperimentConfig {
            fixed_sequence: true,
            n_values: vec![400],
            ..quick_config()
        };
        let (seq0, g0) = generate_trial_graph(&cfg, 400, 0).unwrap();
        let (seq1, g1) = generate_trial_graph(&cfg, 400, 1).unwrap();
        assert_eq!(seq0.degrees(), seq1.degrees());
        assert_ne!(g0, g1, "graphs should still vary by trial");

        let varying = ExperimentConfig {
            fixed_sequence: false,
            ..cfg
        };
        let (v0, _) = generate_trial_graph(&varying, 400, 0).unwrap();
        let (v1, _) = generate_trial_graph(&varying, 400, 1).unwrap();
        assert_ne!(v0.degrees(), v1.degrees());
    }

    #[test]
    fn deterministic_model_is_seed_free() {
        let cfg = ExperimentConfig {
            degree_model: DegreeModel::DeterministicPowerLaw,
            n_values: vec![400],
            ..quick_config()
        };
        let (seq0, _) = generate_trial_graph(&cfg, 400, 0).unwrap();
        let (seq1, _) = generate_trial_graph(&cfg, 400, 1).unwrap();
        assert_eq!(seq0.degrees(), seq1.degrees());
        let other_master = ExperimentConfig {
            master_seed: 999,
            ..cfg
        };
        let (seq2, _) = generate_trial_graph(&other_master, 400, 0).unwrap();
        assert_eq!(seq0.degrees(), seq2.degrees());
    }

    #[test]
    fn desk_scale_ratio_band() {
        // At α = 2.4, n = 10⁴, √n cap, both-bucket ties, the mean
        // per-vertex work sits well below the n → ∞ limit but clearly
        // above zero.
        let cfg = ExperimentConfig {
            n_values: vec![10_000],
            trials: 10,
            master_seed: 1,
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();
        let ratio = result.summaries[0].mean_ratio;
        assert!(
            ratio > 0.15 && ratio < 1.0,
            "mean work per vertex = {ratio}"
        );
        let c = result.limit_constant.unwrap();
        assert!(c.value > 0.9 && c.value < 1.1);
    }

    #[test]
    fn memory_guard_aborts_cleanly() {
        let cfg = ExperimentConfig {
            n_values: vec![300, 1_000_000],
            max_memory_mb: Some(1),
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();
        assert_eq!(result.summaries.len(), 1);
        assert_eq!(result.summaries[0].n, 300);
        assert_eq!(result.trials.len(), 3);
        let message = result.aborted.expect("sweep should have aborted");
        assert!(message.contains("n = 1000000"), "message: {message}");
    }

    #[test]
    fn csv_and_plot_formats() {
        let cfg = ExperimentConfig {
            n_values: vec![300],
            trials: 2,
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();

        let mut csv = Vec::new();
        write_csv(&result, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,alpha,trial,work,trivial_work,edges,ratio");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("300,2.4,0,"));
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 7);
        let ratio: f64 = fields[6].parse().unwrap();
        let work: f64 = fields[3].parse().unwrap();
        assert!((ratio - work / 300.0).abs() < 1e-6);

        let mut plot = Vec::new();
        write_plot_data(&result, &mut plot).unwrap();
        let text = String::from_utf8(plot).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,mean_ratio,stddev,reference_Cn");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("300,"));
        // α = 2.4 > 7/3 has a reference column.
        assert!(!lines[1].ends_with(','));

        // Below the threshold the reference column is empty.
        let sub = run_experiment(&ExperimentConfig {
            alpha: 2.2,
            n_values: vec![300],
            trials: 2,
            ..quick_config()
        })
        .unwrap();
        assert!(sub.limit_constant.is_none());
        let mut plot = Vec::new();
        write_plot_data(&sub, &mut plot).unwrap();
        let text = String::from_utf8(plot).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn comparison_rows_and_errors() {
        let cfg = ExperimentConfig {
            n_values: vec![300, 600],
            ..quick_config()
        };
        let result = run_experiment(&cfg).unwrap();
        let report = BoundReport::for_power_law(2.4, 1e-9).unwrap();
        let rows = compare_bounds(&result, &report).unwrap();
        assert_eq!(rows.len(), 2);
        for (row, summary) in rows.iter().zip(&result.summaries) {
            assert_eq!(row.n, summary.n);
            assert_eq!(row.empirical_mean_work, summary.mean_work);
            assert_eq!(row.ratio, row.empirical_mean_work / row.predicted_work);
        }

        let mismatched = BoundReport::for_power_law(2.5, 1e-9).unwrap();
        assert!(matches!(
            compare_bounds(&result, &mismatched),
            Err(Error::Usage(_))
        ));
        let no_constant = BoundReport::for_power_law(2.2, 1e-9).unwrap();
        let sub = run_experiment(&ExperimentConfig {
            alpha: 2.2,
            n_values: vec![300],
            ..quick_config()
        })
        .unwrap();
        assert!(matches!(
            compare_bounds(&sub, &no_constant),
            Err(Error::Usage(_))
        ));
        let seq_only = BoundReport::for_sequence(
            &crate::degrees::DegreeSequence::from_degrees(vec![1, 1]).unwrap(),
        );
        assert!(matches!(
            compare_bounds(&result, &seq_only),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn config_overlay_round_trip() {
        let text = "\
# sweep setup
alpha = 2.3
n_list = 1e3, 5000   # mantissa-exponent and plain forms mix
trials = 4
tie = consistent
cap = fixed:12
seed = 99
workers = 2
degree_model = deterministic_powerlaw
fixed_sequence = true
max_memory_mb = none
";
        let overlay = parse_config_overlay(text, Path::new("test.conf")).unwrap();
        let mut cfg = ExperimentConfig::default();
        cfg.apply_overlay(&overlay);
        assert_eq!(cfg.alpha, 2.3);
        assert_eq!(cfg.n_values, vec![1000, 5000]);
        assert_eq!(cfg.trials, 4);
        assert_eq!(cfg.tie_mode, TieMode::Consistent);
        assert_eq!(cfg.cap_rule, CapRule::Fixed(12));
        assert_eq!(cfg.master_seed, 99);
        assert_eq!(cfg.worker_count, 2);
        assert_eq!(cfg.degree_model, DegreeModel::DeterministicPowerLaw);
        assert!(cfg.fixed_sequence);
        assert_eq!(cfg.max_memory_mb, None);

        // An empty overlay changes nothing.
        let empty = parse_config_overlay("# nothing here\n\n", Path::new("t")).unwrap();
        let mut untouched = ExperimentConfig::default();
        untouched.apply_overlay(&empty);
        assert_eq!(untouched, ExperimentConfig::default());
    }

    #[test]
    fn config_parse_errors_carry_lines() {
        let origin = Path::new("bad.conf");
        match parse_config_overlay("alpha = 2.4\nbogus_key = 3\n", origin) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("bogus_key"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            parse_config_overlay("just words\n", origin),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_overlay("cap = sqrt\n", origin),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config_overlay("n_list = 1e3.5\n", origin),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let ok = quick_config();
        assert!(ok.validate().is_ok());
        let bad = |f: &dyn Fn(&mut ExperimentConfig)| {
            let mut c = quick_config();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(&|c| c.alpha = 1.0));
        assert!(bad(&|c| c.alpha = f64::NAN));
        assert!(bad(&|c| c.n_values = vec![]));
        assert!(bad(&|c| c.n_values = vec![500, 500]));
        assert!(bad(&|c| c.n_values = vec![600, 300]));
        assert!(bad(&|c| c.n_values = vec![1]));
        assert!(bad(&|c| c.trials = 0));
        assert!(bad(&|c| c.worker_count = 0));
    }

    #[test]
    fn parse_count_forms() {
        assert_eq!(parse_count("10000"), Some(10_000));
        assert_eq!(parse_count("1e4"), Some(10_000));
        assert_eq!(parse_count("2.5e3"), Some(2500));
        assert_eq!(parse_count("1e3.5"), None);
        assert_eq!(parse_count("1.5"), None);
        assert_eq!(parse_count("-3"), None);
        assert_eq!(parse_count("x"), None);
    }
}
