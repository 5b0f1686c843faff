//! Channel simulation and experiment runs.
//!
//! Every trial draws its message and its channel realisation from its own
//! ChaCha8 stream seeded with `seed + trial`, so results do not depend on
//! the thread count or completion order.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concat::{DecodeOptions, ErasurePattern};
use crate::config::{Algorithm, CodeConfig, Codec};
use crate::error::{CodecError, Result};
use crate::galois::{Field, Symbol};
use crate::matrix::{self, Matrix};
use crate::report::DecodeReport;

/// Environment variable capping the worker threads; 0 or unset means one
/// per core.
pub const THREADS_ENV: &str = "GCC_CODEC_THREADS";

/// q-ary symmetric channel with erasures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelModel {
    /// Probability that a symbol is replaced by a uniformly random other symbol.
    #[serde(default)]
    pub p_error: f64,
    /// Probability that a symbol is erased.
    #[serde(default)]
    pub p_erasure: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ChannelModel {
    pub fn new(p_error: f64, p_erasure: f64, seed: u64) -> Result<Self> {
        let model = ChannelModel { p_error, p_erasure, seed };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let valid = |p: f64| (0.0..=1.0).contains(&p);
        if !valid(self.p_error) || !valid(self.p_erasure) || self.p_error + self.p_erasure > 1.0 {
            return Err(CodecError::Config(format!(
                "invalid channel probabilities p_error = {}, p_erasure = {}",
                self.p_error, self.p_erasure
            )));
        }
        Ok(())
    }

    /// The random stream of trial `trial`.
    pub fn stream(&self, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(trial))
    }
}

/// Sends `word` through the channel. Erased symbols arrive as 0 and are
/// listed in the pattern; the returned error matrix is `r - word` outside
/// the erasures and 0 on them.
pub fn apply_channel<R: Rng + ?Sized>(
    field: &Field,
    word: &Matrix,
    channel: &ChannelModel,
    rng: &mut R,
) -> Result<(Matrix, ErasurePattern, Matrix)> {
    channel.validate()?;
    let q = field.order();
    let (rows, cols) = (word.rows(), word.cols());
    let mut received = word.clone();
    let mut errors = Matrix::zeros(rows, cols);
    let mut erased = Vec::with_capacity(rows);
    for j in 0..rows {
        let mut row_erasures = Vec::new();
        for i in 0..cols {
            let u: f64 = rng.random();
            if u < channel.p_erasure {
                received.set(j, i, 0);
                row_erasures.push(i);
            } else if u < channel.p_erasure + channel.p_error {
                let e = rng.random_range(1..q) as Symbol;
                received.set(j, i, field.add(word.get(j, i), e));
                errors.set(j, i, e);
            }
        }
        erased.push(row_erasures);
    }
    Ok((received, ErasurePattern::new(&erased, cols)?, errors))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub code: CodeConfig,
    pub channel: ChannelModel,
    pub trials: u64,
    #[serde(default)]
    pub options: DecodeOptions,
    /// Multistage decoder for GCC and MPC codes; chosen automatically when absent.
    #[serde(default)]
    pub algorithm: Option<Algorithm>,
    /// JSON lines destination; standard output when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Success,
    Miscorrection,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub error_weight: usize,
    pub erasures: usize,
    /// Whether the decoder is guaranteed to succeed on this channel output.
    pub inside_region: bool,
    pub outcome: TrialOutcome,
    pub inner_invocations: usize,
    pub outer_invocations: usize,
    pub gmd_trials: usize,
    pub max_column_trials: usize,
    /// Guarantee or counter bounds broken by this trial.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentStats {
    pub trials: u64,
    pub word_errors: u64,
    pub miscorrections: u64,
    pub failures: u64,
    /// Trials per number of symbol errors.
    pub error_weight_histogram: BTreeMap<usize, u64>,
    pub mean_inner_invocations: f64,
    pub max_inner_invocations: usize,
    pub mean_outer_invocations: f64,
    pub max_outer_invocations: usize,
    pub mean_gmd_trials: f64,
    pub max_gmd_trials: usize,
    pub inside_region: u64,
    pub inside_region_successes: u64,
    /// Success rate over trials inside the guarantee region; 1 when empty.
    pub inside_success_rate: f64,
    pub violations: u64,
    pub violation: bool,
}

impl ExperimentStats {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let mut s = ExperimentStats { trials: records.len() as u64, ..Default::default() };
        let (mut inner, mut outer, mut gmd) = (0usize, 0usize, 0usize);
        for r in records {
            match r.outcome {
                TrialOutcome::Success => {}
                TrialOutcome::Miscorrection => s.miscorrections += 1,
                TrialOutcome::Failure => s.failures += 1,
            }
            *s.error_weight_histogram.entry(r.error_weight).or_default() += 1;
            inner += r.inner_invocations;
            outer += r.outer_invocations;
            gmd += r.gmd_trials;
            s.max_inner_invocations = s.max_inner_invocations.max(r.inner_invocations);
            s.max_outer_invocations = s.max_outer_invocations.max(r.outer_invocations);
            s.max_gmd_trials = s.max_gmd_trials.max(r.max_column_trials);
            if r.inside_region {
                s.inside_region += 1;
                if r.outcome == TrialOutcome::Success {
                    s.inside_region_successes += 1;
                }
            }
            if !r.violations.is_empty() {
                s.violations += 1;
            }
        }
        s.word_errors = s.miscorrections + s.failures;
        let n = records.len().max(1) as f64;
        s.mean_inner_invocations = inner as f64 / n;
        s.mean_outer_invocations = outer as f64 / n;
        s.mean_gmd_trials = gmd as f64 / n;
        s.inside_success_rate = if s.inside_region == 0 {
            1.0
        } else {
            s.inside_region_successes as f64 / s.inside_region as f64
        };
        s.violation = s.violations > 0;
        s
    }
}

/// Per-trial records in trial order, plus their summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub records: Vec<TrialRecord>,
    pub stats: ExperimentStats,
}

impl ExperimentResult {
    /// One JSON object per trial followed by `{"summary": ...}`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            writeln!(out)?;
        }
        serde_json::to_writer(&mut out, &serde_json::json!({ "summary": self.stats }))?;
        writeln!(out)
    }
}

/// Worker count from `GCC_CODEC_THREADS`, 0 meaning automatic.
pub fn configured_threads() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    if config.trials == 0 {
        return Err(CodecError::Config("trial count must be at least 1".into()));
    }
    config.channel.validate()?;
    let codec = config.code.build()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(configured_threads())
        .build()
        .map_err(|e| CodecError::Config(e.to_string()))?;
    let records = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| run_trial(&codec, config, t))
            .collect::<Result<Vec<_>>>()
    })?;
    let stats = ExperimentStats::from_records(&records);
    Ok(ExperimentResult { records, stats })
}

/// Random messages for every level of `codec`.
pub fn random_messages<R: Rng + ?Sized>(codec: &Codec, rng: &mut R) -> Vec<Vec<Symbol>> {
    codec
        .message_codes()
        .iter()
        .map(|c| {
            let q = c.field().order();
            (0..c.k()).map(|_| rng.random_range(0..q) as Symbol).collect()
        })
        .collect()
}

/// Runs trial `trial` of an experiment.
pub fn run_trial(codec: &Codec, config: &ExperimentConfig, trial: u64) -> Result<TrialRecord> {
    let mut rng = config.channel.stream(trial);
    let msgs = random_messages(codec, &mut rng);
    let word = codec.encode(&msgs)?;
    let (received, erasures, errors) = apply_channel(codec.field(), &word, &config.channel, &mut rng)?;
    let inside = codec.correctable(&errors, &erasures)?;
    let algorithm = config.algorithm.unwrap_or_else(|| codec.default_algorithm(&erasures, &config.options));
    let (outcome, report) = match codec.decode(&received, &erasures, &config.options, Some(algorithm)) {
        Ok(report) => {
            let outcome = if report.messages == msgs {
                TrialOutcome::Success
            } else {
                TrialOutcome::Miscorrection
            };
            (outcome, report)
        }
        Err(CodecError::DecodeFailure { report, .. }) => (TrialOutcome::Failure, *report),
        Err(e) => return Err(e),
    };
    let mut violations = Vec::new();
    if inside && outcome != TrialOutcome::Success {
        violations.push("decoding failed inside the guarantee region".to_string());
    }
    check_counters(codec, config, algorithm, erasures.has_erasures(), &report, &mut violations)?;
    Ok(TrialRecord {
        trial,
        error_weight: matrix::weight(errors.data()),
        erasures: erasures.total(),
        inside_region: inside,
        outcome,
        inner_invocations: report.inner_invocations(),
        outer_invocations: report.outer_invocations(),
        gmd_trials: report.gmd_trials(),
        max_column_trials: report.max_column_trials(),
        violations,
    })
}

fn check_counters(
    codec: &Codec,
    config: &ExperimentConfig,
    algorithm: Algorithm,
    erasure_mode: bool,
    report: &DecodeReport,
    violations: &mut Vec<String>,
) -> Result<()> {
    // extended radii may rerun the inner decoder through the oracle
    if config.options.radius.is_none() {
        if let Some(bound) = codec.inner_invocation_bound(algorithm)? {
            if report.inner_invocations() > bound {
                violations.push(format!("{} inner invocations exceed {bound}", report.inner_invocations()));
            }
        }
    }
    if config.options.mode == crate::gmd::GmdMode::UpToGmd {
        let bound = codec.column_trial_bound(erasure_mode)?;
        if report.max_column_trials() > bound {
            violations.push(format!("{} GMD trials in one column exceed {bound}", report.max_column_trials()));
        }
        if let (Codec::Concat(cc), true) = (codec, config.options.carry_over) {
            let total = cc.columns() + bound - 1;
            if report.outer_invocations() > total {
                violations.push(format!("{} outer invocations exceed {total}", report.outer_invocations()));
            }
        }
    }
    Ok(())
}
