//! Concatenated codes: an outer code over GF(q^s) whose codeword columns
//! are expanded over GF(q) and encoded row by row with an inner code.
//!
//! Decoding runs the inner decoder on every row, turns the outcome into a
//! per-row reliability and GMD-decodes each outer column.

use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, DecodeOutcome, ErasureSet, LinearCode};
use crate::error::{CodecError, Result};
use crate::galois::Symbol;
use crate::gmd::{self, ErasureChain, GmdMode, GmdOptions, GmdReport, ReliabilityVector};
use crate::matrix::{self, Matrix};
use crate::oracle;
use crate::report::{ColumnReport, DecodeReport, RoundReport};
use crate::tower::TowerView;

/// Per-row erasure sets, column indices within each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    rows: Vec<ErasureSet>,
}

impl ErasurePattern {
    pub fn new(rows: &[Vec<usize>], row_len: usize) -> Result<Self> {
        let rows = rows.iter().map(|r| ErasureSet::new(r, row_len)).collect::<Result<_>>()?;
        Ok(ErasurePattern { rows })
    }

    pub fn empty(rows: usize, row_len: usize) -> Self {
        ErasurePattern { rows: vec![ErasureSet::empty(row_len); rows] }
    }

    pub fn from_sets(rows: Vec<ErasureSet>) -> Self {
        ErasurePattern { rows }
    }

    pub fn rows(&self) -> &[ErasureSet] {
        &self.rows
    }

    pub fn row(&self, j: usize) -> &ErasureSet {
        &self.rows[j]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Total number of erased symbols.
    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.size()).sum()
    }

    pub fn has_erasures(&self) -> bool {
        self.total() > 0
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.rows.iter().map(|r| r.indices().to_vec()).collect()
    }

    pub(crate) fn check_shape(&self, rows: usize, row_len: usize) -> Result<()> {
        if self.rows.len() != rows || self.rows.iter().any(|r| r.len() != row_len) {
            return Err(CodecError::DimensionMismatch(format!(
                "erasure pattern does not match a {rows}x{row_len} word"
            )));
        }
        Ok(())
    }
}

/// Outcome of decoding every row with the inner code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDecodeResult {
    /// Row estimates; failure rows are zero.
    pub estimate: Matrix,
    /// `R - estimate`.
    pub errors: Matrix,
    /// Scaled reliabilities `d_b - w_j`.
    pub weights: Vec<u64>,
    pub failed: Vec<bool>,
    /// Ordering of rows for the erasure chain; equals `weights` unless an
    /// extended decoding radius is in use.
    pub order_keys: Vec<u64>,
    /// Inner decoder invocations, counting a radius fallback as one more.
    pub invocations: usize,
}

impl RowDecodeResult {
    pub fn reliability(&self, d_b: usize) -> ReliabilityVector {
        ReliabilityVector::new(self.weights.clone(), d_b as u64).expect("weights never exceed the inner distance")
    }
}

/// Decodes each row of `r` with `inner` under the row's erasures. A row
/// decoded with apparent error weight `t` and erasure count `x` gets
/// `w = 2t + x`; a failed row gets `w = d_b`. The scaled reliability is
/// `d_b - w`.
///
/// With `radius = Some(t')`, rows the inner decoder rejects fall back to
/// the unique codeword within distance `t'`, if there is one. Such rows keep
/// reliability zero but are ordered in the erasure chain by apparent weight,
/// `t'` first.
pub fn row_decode(
    inner: &LinearCode,
    r: &Matrix,
    erasures: &ErasurePattern,
    radius: Option<usize>,
) -> Result<RowDecodeResult> {
    let (m, n) = (r.rows(), r.cols());
    if n != inner.n() {
        return Err(CodecError::DimensionMismatch(format!("rows have length {n}, inner code has {}", inner.n())));
    }
    erasures.check_shape(m, n)?;
    let field = inner.field();
    let d_b = inner.require_distance()?;
    if radius.is_some() && erasures.has_erasures() {
        return Err(CodecError::InvalidOptions("an extended decoding radius cannot be combined with erasures".into()));
    }
    let t = (d_b - 1) / 2;
    let t_ext = radius.unwrap_or(t).max(t);
    let mut out = RowDecodeResult {
        estimate: Matrix::zeros(m, n),
        errors: Matrix::zeros(m, n),
        weights: vec![0; m],
        failed: vec![false; m],
        order_keys: vec![0; m],
        invocations: 0,
    };
    for j in 0..m {
        let row = r.row(j);
        let x = erasures.row(j);
        out.invocations += 1;
        let mut outcome = inner.decode(row, x)?;
        if outcome.is_failure() && t_ext > t {
            out.invocations += 1;
            outcome = oracle::oracle_radius(inner, row, t_ext)?;
        }
        match outcome {
            DecodeOutcome::Decoded { codeword, error, weight } => {
                let w = 2 * weight + x.size();
                let w = if w < d_b { w } else { d_b };
                out.weights[j] = (d_b - w) as u64;
                out.order_keys[j] = if t_ext > t { (1 + t_ext - weight) as u64 } else { out.weights[j] };
                out.estimate.row_mut(j).copy_from_slice(&codeword);
                out.errors.row_mut(j).copy_from_slice(&error);
            }
            DecodeOutcome::Failure => {
                out.failed[j] = true;
                out.errors.row_mut(j).copy_from_slice(row);
                out.weights[j] = 0;
                out.order_keys[j] = 0;
            }
        }
    }
    debug_assert!(out.estimate.data().iter().all(|&s| field.contains(s)));
    Ok(out)
}

/// Guarantee predicate for the concatenated decoder:
/// `sum_j min(2 wt_{X_j}(E_j) + |X_j|, 2 d_b) < d_a d_b`.
pub fn correctable_cc(e: &Matrix, x: &ErasurePattern, d_a: usize, d_b: usize) -> bool {
    row_costs(e, x, d_b).sum::<usize>() < d_a * d_b
}

pub(crate) fn row_costs<'a>(e: &'a Matrix, x: &'a ErasurePattern, cap: usize) -> impl Iterator<Item = usize> + 'a {
    (0..e.rows()).map(move |j| {
        let xs = x.rows().get(j);
        let cost = match xs {
            Some(set) => 2 * set.punctured_weight(e.row(j)) + set.size(),
            None => 2 * matrix::weight(e.row(j)),
        };
        cost.min(2 * cap)
    })
}

/// Trials per outer column: errors only `floor((min(d_a, d_b) + 1) / 2)`,
/// with erasures `min(d_b, floor((d_a + 1) / 2))`.
pub fn trial_bound_cc(d_a: usize, d_b: usize, erasure_mode: bool) -> usize {
    if erasure_mode {
        d_b.min(d_a.div_ceil(2))
    } else {
        d_a.min(d_b).div_ceil(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecodeOptions {
    pub mode: GmdMode,
    /// Start each column's GMD trials where the previous column succeeded.
    pub carry_over: bool,
    /// Inner decoding radius beyond half the inner distance.
    pub radius: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcatConfig {
    pub outer: CodeSpec,
    pub inner: CodeSpec,
    pub s: usize,
}

impl ConcatConfig {
    pub fn build(&self) -> Result<ConcatCode> {
        ConcatCode::new(self.outer.build()?, self.inner.build()?, self.s)
    }
}

/// Outer code `A = [M, k_a, d_a]` over GF(q^s), inner code
/// `B = [N, K, d_b]` over GF(q) with `K = k s`. A codeword is an `M x N`
/// matrix `W = V B` whose `k` big-field columns of `V` are codewords of `A`.
#[derive(Debug, Clone)]
pub struct ConcatCode {
    outer: LinearCode,
    inner: LinearCode,
    s: usize,
    columns: usize,
    tower: TowerView,
}

impl ConcatCode {
    pub fn new(outer: LinearCode, inner: LinearCode, s: usize) -> Result<Self> {
        if s == 0 || !inner.k().is_multiple_of(s) {
            return Err(CodecError::InvalidParams(format!(
                "inner dimension {} is not a multiple of s = {s}",
                inner.k()
            )));
        }
        let (big, base) = (outer.field(), inner.field());
        if big.degree() != base.degree() * s as u32 {
            return Err(CodecError::InvalidParams(format!(
                "outer field {big:?} is not an extension of degree {s} of {base:?}"
            )));
        }
        let tower = TowerView::new(big, base)?;
        let columns = inner.k() / s;
        Ok(ConcatCode { outer, inner, s, columns, tower })
    }

    pub fn config(&self) -> ConcatConfig {
        ConcatConfig { outer: self.outer.spec(), inner: self.inner.spec(), s: self.s }
    }

    pub fn outer(&self) -> &LinearCode {
        &self.outer
    }

    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of outer codewords per concatenated codeword, `K / s`.
    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn tower(&self) -> &TowerView {
        &self.tower
    }

    /// `(M, N)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.outer.n(), self.inner.n())
    }

    /// Total GF(q) message symbols.
    pub fn dimension(&self) -> usize {
        self.columns * self.outer.k() * self.s
    }

    /// `d_a d_b`.
    pub fn designed_distance(&self) -> Result<usize> {
        Ok(self.outer.require_distance()? * self.inner.require_distance()?)
    }

    pub fn trial_bound(&self, erasure_mode: bool) -> Result<usize> {
        Ok(trial_bound_cc(self.outer.require_distance()?, self.inner.require_distance()?, erasure_mode))
    }

    pub fn correctable(&self, e: &Matrix, x: &ErasurePattern) -> Result<bool> {
        Ok(correctable_cc(e, x, self.outer.require_distance()?, self.inner.require_distance()?))
    }

    /// Encodes `k` outer messages.
    pub fn encode(&self, msgs: &[Vec<Symbol>]) -> Result<Matrix> {
        if msgs.len() != self.columns {
            return Err(CodecError::LengthMismatch { expected: self.columns, found: msgs.len() });
        }
        let cols = msgs.iter().map(|x| self.outer.encode(x)).collect::<Result<Vec<_>>>()?;
        self.encode_columns(&cols)
    }

    /// Encodes already-encoded outer codewords.
    pub fn encode_columns(&self, cols: &[Vec<Symbol>]) -> Result<Matrix> {
        let m = self.outer.n();
        let mut v = Matrix::zeros(m, self.inner.k());
        for (c, col) in cols.iter().enumerate() {
            for (j, &sym) in col.iter().enumerate() {
                v.row_mut(j)[c * self.s..(c + 1) * self.s].copy_from_slice(&self.tower.expand(sym));
            }
        }
        v.mul(self.inner.field(), self.inner.generator())
    }

    pub fn decode(&self, r: &Matrix, x: &ErasurePattern, options: &DecodeOptions) -> Result<DecodeReport> {
        let (m, n) = self.shape();
        if r.rows() != m || r.cols() != n {
            return Err(CodecError::DimensionMismatch(format!(
                "received word is {}x{}, expected {m}x{n}",
                r.rows(),
                r.cols()
            )));
        }
        self.inner.field().check_all(r.data())?;
        let d_b = self.inner.require_distance()?;
        let rows = row_decode(&self.inner, r, x, options.radius)?;
        let v_hat = coordinates(&self.inner, &rows)?;
        let reliability = rows.reliability(d_b);
        let chain = ErasureChain::from_keys(&rows.order_keys, Some(0));

        let mut report = DecodeReport::default();
        let mut round = RoundReport {
            level: 1,
            inner_distance: d_b,
            inner_invocations: rows.invocations,
            rows_decoded: m,
            failed_rows: rows.failed.iter().filter(|&&f| f).count(),
            row_weights: rows.weights.clone(),
            ..Default::default()
        };
        let mut start = 1;
        let mut failed = false;
        for c in 0..self.columns {
            let column: Vec<Symbol> = (0..m)
                .map(|j| self.tower.fold(&v_hat.row(j)[c * self.s..(c + 1) * self.s]))
                .collect();
            let opts = GmdOptions { mode: options.mode, skip_zero_trial: true, start };
            let g = gmd::gmd_decode_chain(&self.outer, &column, &reliability, &chain, opts)?;
            round.outer_invocations += g.trials_attempted;
            round.columns.push(column_report(&g));
            match g.codeword {
                Some(cw) => {
                    if options.carry_over {
                        start = g.accepted.unwrap_or(1);
                    }
                    report.outer_codewords.push(cw);
                }
                None => {
                    // later columns restart from the first trial
                    start = 1;
                    failed = true;
                    report.outer_codewords.push(Vec::new());
                }
            }
        }
        report.rounds.push(round);
        if failed {
            return Err(CodecError::DecodeFailure { round: 1, report: Box::new(report) });
        }
        report.messages = report
            .outer_codewords
            .iter()
            .map(|cw| self.outer.message_of(cw))
            .collect::<Result<_>>()?;
        report.codeword = Some(self.encode_columns(&report.outer_codewords)?);
        Ok(report)
    }
}

pub(crate) fn column_report(g: &GmdReport) -> ColumnReport {
    ColumnReport {
        trials: g.trials_attempted,
        accepted: g.accepted,
        forney_lhs: g.forney_lhs,
        forney_ok: g.forney_ok,
    }
}

/// `estimate * B^-1` with failure rows set to zero.
pub(crate) fn coordinates(inner: &LinearCode, rows: &RowDecodeResult) -> Result<Matrix> {
    let mut v = rows.estimate.mul(inner.field(), inner.unencoder())?;
    for (j, &f) in rows.failed.iter().enumerate() {
        if f {
            v.row_mut(j).fill(0);
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{make_field, prime_field};

    fn small_cc() -> ConcatCode {
        let gf2 = prime_field(2).unwrap();
        let gf4 = make_field(2, 2, None).unwrap();
        let outer = LinearCode::reed_solomon(&gf4, 3, 1).unwrap();
        let inner = LinearCode::generic(
            &gf2,
            Matrix::from_rows(&[vec![1, 0, 1, 1, 0], vec![0, 1, 0, 1, 1]]).unwrap(),
            Some(3),
        )
        .unwrap();
        ConcatCode::new(outer, inner, 2).unwrap()
    }

    #[test]
    fn trial_bound_examples() {
        assert_eq!(trial_bound_cc(7, 3, false), 2);
        assert_eq!(trial_bound_cc(7, 3, true), 3);
        assert_eq!(trial_bound_cc(3, 9, false), 2);
    }

    #[test]
    fn correctable_examples() {
        let e = Matrix::zeros(3, 5);
        let x = ErasurePattern::empty(3, 5);
        assert!(correctable_cc(&e, &x, 3, 3));
        let mut burst = Matrix::zeros(3, 5);
        burst.row_mut(1).fill(1);
        assert!(correctable_cc(&burst, &x, 3, 3));
        burst.row_mut(2).fill(1);
        assert!(!correctable_cc(&burst, &x, 3, 3));
    }

    #[test]
    fn row_weight_examples() {
        let gf8 = make_field(2, 3, None).unwrap();
        let inner = LinearCode::reed_solomon(&gf8, 7, 3).unwrap();
        let mut r = Matrix::zeros(3, 7);
        r.set(0, 2, 5);
        r.set(1, 4, 1);
        let x = ErasurePattern::new(&[vec![], vec![0], vec![]], 7).unwrap();
        let rows = row_decode(&inner, &r, &x, None).unwrap();
        // reliabilities d_b - w with w = 2, 3 and 0
        assert_eq!(rows.weights, vec![3, 2, 5]);

        let gf2 = prime_field(2).unwrap();
        let rep = LinearCode::repetition(&gf2, 3).unwrap();
        let r = Matrix::from_rows(&[vec![1, 1, 0]]).unwrap();
        let x = ErasurePattern::new(&[vec![0, 1, 2]], 3).unwrap();
        let rows = row_decode(&rep, &r, &x, None).unwrap();
        assert!(rows.failed[0]);
        assert_eq!(rows.weights, vec![0]);
    }

    #[test]
    fn encode_examples() {
        let cc = small_cc();
        assert_eq!(cc.columns(), 1);
        let zero = cc.encode(&[vec![0]]).unwrap();
        assert!(zero.data().iter().all(|&s| s == 0));
        for x in 0..4 {
            let w = cc.encode(&[vec![x]]).unwrap();
            assert_eq!((w.rows(), w.cols()), (3, 5));
            for j in 0..3 {
                assert!(cc.inner().contains(w.row(j)));
            }
        }
    }

    #[test]
    fn decode_codeword_in_one_trial() {
        let cc = small_cc();
        let w = cc.encode(&[vec![3]]).unwrap();
        let rep = cc.decode(&w, &ErasurePattern::empty(3, 5), &DecodeOptions::default()).unwrap();
        assert_eq!(rep.messages, vec![vec![3]]);
        assert_eq!(rep.gmd_trials(), 1);
        assert_eq!(rep.codeword, Some(w));
    }

    #[test]
    fn rejects_mismatched_extension() {
        let gf2 = prime_field(2).unwrap();
        let gf8 = make_field(2, 3, None).unwrap();
        let outer = LinearCode::reed_solomon(&gf8, 3, 1).unwrap();
        let inner = LinearCode::repetition(&gf2, 3).unwrap();
        assert!(ConcatCode::new(outer.clone(), inner.clone(), 2).is_err());
        let inner2 = LinearCode::generic(&gf2, Matrix::identity(2), None).unwrap();
        assert!(ConcatCode::new(outer, inner2, 3).is_err());
    }

    #[test]
    fn radius_with_erasures_rejected() {
        let cc = small_cc();
        let w = cc.encode(&[vec![1]]).unwrap();
        let x = ErasurePattern::new(&[vec![0], vec![], vec![]], 5).unwrap();
        let opts = DecodeOptions { radius: Some(2), ..Default::default() };
        assert!(matches!(cc.decode(&w, &x, &opts), Err(CodecError::InvalidOptions(_))));
    }
}
