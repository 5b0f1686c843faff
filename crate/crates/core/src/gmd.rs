//! Generalized minimum distance decoding over any error-and-erasure decoder.
//!
//! Reliabilities are integers `w_i` in `[0, D]` standing for `w_i / D`, so
//! the Forney acceptance test is evaluated exactly.

use serde::{Deserialize, Serialize};

use crate::code::{DecodeOutcome, ErasureSet, LinearCode};
use crate::error::{CodecError, Result};
use crate::galois::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityVector {
    weights: Vec<u64>,
    denominator: u64,
}

impl ReliabilityVector {
    pub fn new(weights: Vec<u64>, denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(CodecError::InvalidParams("reliability denominator must be positive".into()));
        }
        if let Some(&w) = weights.iter().find(|&&w| w > denominator) {
            return Err(CodecError::InvalidParams(format!("reliability {w} exceeds denominator {denominator}")));
        }
        Ok(ReliabilityVector { weights, denominator })
    }

    /// Every coordinate fully reliable.
    pub fn uniform(n: usize, denominator: u64) -> Self {
        ReliabilityVector { weights: vec![denominator; n], denominator }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Distinct weights in ascending order.
    pub fn classes(&self) -> Vec<u64> {
        let mut c = self.weights.clone();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Nested erasure sets `E_0 = {} ⊆ E_1 ⊆ ... ⊆ E_J`, where `E_j` holds the
/// coordinates whose key is at most the j-th smallest class value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasureChain {
    sets: Vec<ErasureSet>,
}

impl ErasureChain {
    /// Chain ordered by `keys`, with `extra` added as a class value even
    /// if no coordinate carries it.
    pub fn from_keys(keys: &[u64], extra: Option<u64>) -> Self {
        let mut classes: Vec<u64> = keys.iter().copied().chain(extra).collect();
        classes.sort_unstable();
        classes.dedup();
        let mut sets = vec![ErasureSet::empty(keys.len())];
        for &a in &classes {
            sets.push(ErasureSet::from_mask(keys.iter().map(|&k| k <= a).collect()));
        }
        ErasureChain { sets }
    }

    /// Number of classes J; valid indices run from 0 to J.
    pub fn classes(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn set(&self, j: usize) -> &ErasureSet {
        &self.sets[j]
    }

    pub fn sets(&self) -> &[ErasureSet] {
        &self.sets
    }
}

pub fn erasure_chain(reliability: &ReliabilityVector) -> ErasureChain {
    ErasureChain::from_keys(reliability.weights(), None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrialSkip {
    /// `E_j = E_{j-1}`.
    EmptyClass,
    /// The next set adds one coordinate and `d - |E_j|` is even, so the next
    /// trial returns the same codeword whenever this one succeeds.
    Redundant,
    /// `|E_j| >= d`.
    TooManyErasures,
    /// Before the carried-over start index.
    BeforeStart,
}

/// Viability of trial `j` (`0 <= j <= J`), or the reason to skip it.
pub fn trial_skip(j: usize, chain: &ErasureChain, d: usize) -> Option<TrialSkip> {
    let size = chain.set(j).size();
    if j > 0 && chain.set(j) == chain.set(j - 1) {
        return Some(TrialSkip::EmptyClass);
    }
    if size >= d {
        return Some(TrialSkip::TooManyErasures);
    }
    if j < chain.classes() && (d - size).is_multiple_of(2) && chain.set(j + 1).size() == size + 1 {
        return Some(TrialSkip::Redundant);
    }
    None
}

/// Whether trial `j` needs to run.
pub fn viable(j: usize, chain: &ErasureChain, d: usize) -> bool {
    trial_skip(j, chain, d).is_none()
}

/// Scaled left-hand side of the Forney criterion:
/// `sum over agreeing coordinates of (D - w_i) + sum over disagreeing of (D + w_i)`.
pub fn forney_lhs(c: &[Symbol], r: &[Symbol], reliability: &ReliabilityVector) -> u64 {
    let dd = reliability.denominator;
    c.iter()
        .zip(r)
        .zip(&reliability.weights)
        .map(|((x, y), &w)| if x == y { dd - w } else { dd + w })
        .sum()
}

/// Forney's acceptance test, `lhs < d * D`.
pub fn forney_check(c: &[Symbol], r: &[Symbol], reliability: &ReliabilityVector, d: usize) -> bool {
    forney_lhs(c, r, reliability) < d as u64 * reliability.denominator
}

/// Upper bound on the trials a GMD decoder needs for distance `d`.
pub fn trial_bound(d: usize) -> usize {
    d.div_ceil(2)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GmdMode {
    /// Return the first candidate that passes the Forney test.
    #[default]
    #[serde(alias = "upto")]
    UpToGmd,
    /// Run every viable trial and return the candidate with the smallest
    /// Forney left-hand side, ties to the smallest j.
    #[serde(alias = "beyond")]
    BeyondGmd,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GmdOptions {
    pub mode: GmdMode,
    /// Never run the trial without erasures. Trial 1 then always runs, even
    /// when `E_1` is empty.
    pub skip_zero_trial: bool,
    /// First trial index considered in `UpToGmd` mode.
    pub start: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TrialStatus {
    Skipped(TrialSkip),
    Failed,
    Rejected { lhs: u64 },
    Accepted { lhs: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub j: usize,
    pub erasures: usize,
    pub status: TrialStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GmdReport {
    pub codeword: Option<Vec<Symbol>>,
    /// Trial that produced `codeword`.
    pub accepted: Option<usize>,
    pub forney_lhs: Option<u64>,
    /// Whether `codeword` passes the Forney test. Always true in `UpToGmd` mode.
    pub forney_ok: bool,
    /// Decoder invocations.
    pub trials_attempted: usize,
    pub trials: Vec<TrialRecord>,
}

/// GMD decoding with the chain induced by the reliabilities themselves.
pub fn gmd_decode(
    code: &LinearCode,
    r: &[Symbol],
    reliability: &ReliabilityVector,
    options: GmdOptions,
) -> Result<GmdReport> {
    let extra = options.skip_zero_trial.then_some(0);
    let chain = ErasureChain::from_keys(reliability.weights(), extra);
    gmd_decode_chain(code, r, reliability, &chain, options)
}

/// GMD decoding where the erasure chain may come from a different ordering
/// than the Forney weights.
pub fn gmd_decode_chain(
    code: &LinearCode,
    r: &[Symbol],
    reliability: &ReliabilityVector,
    chain: &ErasureChain,
    options: GmdOptions,
) -> Result<GmdReport> {
    let n = code.n();
    if r.len() != n || reliability.len() != n {
        return Err(CodecError::LengthMismatch { expected: n, found: r.len().min(reliability.len()) });
    }
    if chain.set(0).len() != n {
        return Err(CodecError::LengthMismatch { expected: n, found: chain.set(0).len() });
    }
    let d = code.require_distance()?;
    let bound = d as u64 * reliability.denominator;
    let first = usize::from(options.skip_zero_trial);
    let start = match options.mode {
        GmdMode::UpToGmd => options.start.max(first),
        GmdMode::BeyondGmd => first,
    };
    let mut report = GmdReport::default();
    let mut best: Option<(u64, usize, Vec<Symbol>)> = None;
    for j in first..=chain.classes() {
        let erasures = chain.set(j);
        let skip = if j < start {
            Some(TrialSkip::BeforeStart)
        } else if options.skip_zero_trial && j == 1 && erasures.size() < d {
            // trial 1 stands in for the skipped trial 0
            let redundant = (d - erasures.size()).is_multiple_of(2)
                && j < chain.classes()
                && chain.set(j + 1).size() == erasures.size() + 1;
            redundant.then_some(TrialSkip::Redundant)
        } else {
            trial_skip(j, chain, d)
        };
        if let Some(reason) = skip {
            report.trials.push(TrialRecord { j, erasures: erasures.size(), status: TrialStatus::Skipped(reason) });
            continue;
        }
        report.trials_attempted += 1;
        let status = match code.decode(r, erasures)? {
            DecodeOutcome::Failure => TrialStatus::Failed,
            DecodeOutcome::Decoded { codeword, .. } => {
                let lhs = forney_lhs(&codeword, r, reliability);
                let better = best.as_ref().is_none_or(|(b, _, _)| lhs < *b);
                if better {
                    best = Some((lhs, j, codeword));
                }
                if lhs < bound {
                    TrialStatus::Accepted { lhs }
                } else {
                    TrialStatus::Rejected { lhs }
                }
            }
        };
        report.trials.push(TrialRecord { j, erasures: erasures.size(), status });
        if options.mode == GmdMode::UpToGmd && matches!(status, TrialStatus::Accepted { .. }) {
            break;
        }
    }
    if let Some((lhs, j, codeword)) = best {
        let ok = lhs < bound;
        if ok || options.mode == GmdMode::BeyondGmd {
            report.codeword = Some(codeword);
            report.accepted = Some(j);
            report.forney_lhs = Some(lhs);
            report.forney_ok = ok;
        }
    }
    Ok(report)
}
