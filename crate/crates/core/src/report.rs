//! Instrumentation returned by the concatenated, GCC and MPC decoders.

use serde::Serialize;

use crate::galois::Symbol;
use crate::matrix::Matrix;

/// Why a row was not decoded during a round of the improved GCC decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SkipReason {
    /// The row was decoded correctly in the previous round, so its error
    /// estimate carries over.
    NotInSuT,
    /// The row is known to be miscorrected and the smaller subcode cannot
    /// reach the true error weight.
    SRedecodeBound,
    /// The row failed before and the subcode corrects no more errors.
    TNoGain,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SkipCounts {
    pub not_in_s_or_t: usize,
    pub s_redecode_bound: usize,
    pub t_no_gain: usize,
}

impl SkipCounts {
    pub fn record(&mut self, reason: SkipReason) {
        match reason {
            SkipReason::NotInSuT => self.not_in_s_or_t += 1,
            SkipReason::SRedecodeBound => self.s_redecode_bound += 1,
            SkipReason::TNoGain => self.t_no_gain += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.not_in_s_or_t + self.s_redecode_bound + self.t_no_gain
    }
}

/// GMD decoding of one outer column.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ColumnReport {
    /// Outer decoder invocations.
    pub trials: usize,
    /// Index j of the erasure set that produced the returned codeword.
    pub accepted: Option<usize>,
    /// Scaled left-hand side of the Forney criterion for the returned codeword.
    pub forney_lhs: Option<u64>,
    /// Whether the returned codeword passed the Forney criterion.
    pub forney_ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    /// Level i of the outer code decoded in this round, 1-based. Concatenated
    /// codes have a single round at level 1.
    pub level: usize,
    /// Minimum distance of the inner (sub)code used for the rows.
    pub inner_distance: usize,
    pub inner_invocations: usize,
    pub outer_invocations: usize,
    pub rows_decoded: usize,
    pub skipped: SkipCounts,
    /// Rows whose inner decoding failed, including carried failures.
    pub failed_rows: usize,
    /// Scaled row reliabilities, out of `inner_distance`.
    pub row_weights: Vec<u64>,
    pub columns: Vec<ColumnReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    /// Decoded outer codewords over the extension fields, one per level
    /// (GCC) or per column (concatenated code). Filled in decoding order.
    pub outer_codewords: Vec<Vec<Symbol>>,
    /// Messages recovered from `outer_codewords`, in level order.
    pub messages: Vec<Vec<Symbol>>,
    /// Re-encoded codeword matrix when decoding succeeded.
    pub codeword: Option<Matrix>,
    /// Rounds in execution order.
    pub rounds: Vec<RoundReport>,
}

impl DecodeReport {
    pub fn inner_invocations(&self) -> usize {
        self.rounds.iter().map(|r| r.inner_invocations).sum()
    }

    pub fn outer_invocations(&self) -> usize {
        self.rounds.iter().map(|r| r.outer_invocations).sum()
    }

    pub fn gmd_trials(&self) -> usize {
        self.rounds.iter().flat_map(|r| &r.columns).map(|c| c.trials).sum()
    }

    pub fn max_column_trials(&self) -> usize {
        self.rounds.iter().flat_map(|r| &r.columns).map(|c| c.trials).max().unwrap_or(0)
    }

    /// Number of rounds in which at least one row was run through an inner decoder.
    pub fn rounds_with_row_decoding(&self) -> usize {
        self.rounds.iter().filter(|r| r.inner_invocations > 0).count()
    }
}
