//! Generalized concatenated codes.
//!
//! Level i has an outer code `A_i = [M, k_i, d_{a,i}]` over GF(q^{s_i}). The
//! inner generator `B` (K x N over GF(q), `K = s_1 + ... + s_k`) defines the
//! nested subcodes `B^(i)` spanned by its first `b_i = s_1 + ... + s_i` rows.
//! A codeword is `W = V B` where the columns of `V` belonging to level i,
//! read over GF(q^{s_i}), form a codeword of `A_i`.
//!
//! Decoding proceeds in rounds from level k down to 1. Round i decodes the
//! concatenated code `A_i B^(i)` and strips its contribution off the
//! received word.

use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, DecodeOutcome, LinearCode};
use crate::concat::{self, row_costs, DecodeOptions, ErasurePattern};
use crate::error::{CodecError, Result};
use crate::galois::{Field, FieldSpec, Symbol};
use crate::gmd::{self, ErasureChain, GmdOptions, ReliabilityVector};
use crate::matrix::{self, Matrix};
use crate::report::{DecodeReport, RoundReport, SkipReason};
use crate::tower::TowerView;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GccConfig {
    pub outers: Vec<CodeSpec>,
    pub s: Vec<usize>,
    pub inner_generator: Vec<Vec<Symbol>>,
    pub field: FieldSpec,
}

impl GccConfig {
    pub fn build(&self) -> Result<GccSpec> {
        let field = self.field.build()?;
        let outers = self.outers.iter().map(|c| c.build()).collect::<Result<Vec<_>>>()?;
        GccSpec::new(&field, outers, &self.s, Matrix::from_rows(&self.inner_generator)?)
    }
}

#[derive(Debug, Clone)]
pub struct GccSpec {
    field: Field,
    outers: Vec<LinearCode>,
    s: Vec<usize>,
    // b[i] = s_1 + ... + s_i, b[0] = 0
    b: Vec<usize>,
    generator: Matrix,
    prefix: Vec<LinearCode>,
    towers: Vec<TowerView>,
}

impl GccSpec {
    pub fn new(field: &Field, outers: Vec<LinearCode>, s: &[usize], generator: Matrix) -> Result<Self> {
        Self::with_inner_distances(field, outers, s, generator, None)
    }

    /// Like `new`, with known minimum distances of the prefix subcodes.
    /// Enumerable subcodes are still checked against them.
    pub fn with_inner_distances(
        field: &Field,
        outers: Vec<LinearCode>,
        s: &[usize],
        generator: Matrix,
        inner_distances: Option<&[usize]>,
    ) -> Result<Self> {
        let k = outers.len();
        if inner_distances.is_some_and(|d| d.len() != k) {
            return Err(CodecError::InvalidParams("need one inner distance per level".into()));
        }
        if k == 0 || s.len() != k {
            return Err(CodecError::InvalidParams(format!(
                "need one extension degree per outer code, got {} outer codes and {} degrees",
                k,
                s.len()
            )));
        }
        if s.contains(&0) {
            return Err(CodecError::InvalidParams("extension degrees must be positive".into()));
        }
        let mut b = vec![0];
        for &si in s {
            b.push(b.last().unwrap() + si);
        }
        if generator.rows() != b[k] {
            return Err(CodecError::DimensionMismatch(format!(
                "inner generator has {} rows, the extension degrees sum to {}",
                generator.rows(),
                b[k]
            )));
        }
        let m = outers[0].n();
        if outers.iter().any(|a| a.n() != m) {
            return Err(CodecError::InvalidParams("outer codes must share one length".into()));
        }
        let mut prefix = Vec::with_capacity(k);
        let mut towers = Vec::with_capacity(k);
        for (i, outer) in outers.iter().enumerate() {
            let big = outer.field();
            if big.degree() != field.degree() * s[i] as u32 {
                return Err(CodecError::InvalidParams(format!(
                    "outer code {} is over {big:?}, expected an extension of degree {} of {field:?}",
                    i + 1,
                    s[i]
                )));
            }
            towers.push(TowerView::new(big, field)?);
            prefix.push(LinearCode::generic(field, generator.top_rows(b[i + 1]), inner_distances.map(|d| d[i]))?);
        }
        Ok(GccSpec {
            field: field.clone(),
            outers,
            s: s.to_vec(),
            b,
            generator,
            prefix,
            towers,
        })
    }

    pub fn config(&self) -> GccConfig {
        GccConfig {
            outers: self.outers.iter().map(|a| a.spec()).collect(),
            s: self.s.clone(),
            inner_generator: self.generator.to_rows(),
            field: self.field.spec(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of levels k.
    pub fn levels(&self) -> usize {
        self.outers.len()
    }

    /// Outer code of level `i`, 1-based.
    pub fn outer(&self, i: usize) -> &LinearCode {
        &self.outers[i - 1]
    }

    pub fn outers(&self) -> &[LinearCode] {
        &self.outers
    }

    pub fn extension_degrees(&self) -> &[usize] {
        &self.s
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// `(M, N)`.
    pub fn shape(&self) -> (usize, usize) {
        (self.outers[0].n(), self.generator.cols())
    }

    /// Total GF(q) message symbols.
    pub fn dimension(&self) -> usize {
        self.outers.iter().zip(&self.s).map(|(a, &s)| a.k() * s).sum()
    }

    /// The subcode `B^(i)` spanned by the first `b_i` generator rows, 1-based.
    pub fn prefix_subcode(&self, i: usize) -> Result<&LinearCode> {
        if i == 0 || i > self.levels() {
            return Err(CodecError::IndexOutOfRange { index: i, len: self.levels() });
        }
        Ok(&self.prefix[i - 1])
    }

    /// `d_{b,1}, ..., d_{b,k}`.
    pub fn inner_distances(&self) -> Result<Vec<usize>> {
        self.prefix.iter().map(|c| c.require_distance()).collect()
    }

    pub fn outer_distances(&self) -> Result<Vec<usize>> {
        self.outers.iter().map(|c| c.require_distance()).collect()
    }

    /// `min_i d_{a,i} d_{b,i}`.
    pub fn designed_distance(&self) -> Result<usize> {
        let da = self.outer_distances()?;
        let db = self.inner_distances()?;
        Ok(da.iter().zip(&db).map(|(a, b)| a * b).min().unwrap())
    }

    /// Bound on inner decoder calls of the improved decoder,
    /// `M + sum_i (d_{a,i} - 1)`.
    pub fn inner_invocation_bound(&self) -> Result<usize> {
        Ok(self.shape().0 + self.outer_distances()?.iter().map(|d| d - 1).sum::<usize>())
    }

    /// Guarantee predicate of both decoders:
    /// `sum_j min(2 wt_{X_j}(E_j) + |X_j|, 2 d_{b,1}) < d*`.
    pub fn correctable(&self, e: &Matrix, x: &ErasurePattern) -> Result<bool> {
        let d_b1 = self.prefix[0].require_distance()?;
        Ok(row_costs(e, x, d_b1).sum::<usize>() < self.designed_distance()?)
    }

    pub fn encode(&self, msgs: &[Vec<Symbol>]) -> Result<Matrix> {
        if msgs.len() != self.levels() {
            return Err(CodecError::LengthMismatch { expected: self.levels(), found: msgs.len() });
        }
        let cols = self
            .outers
            .iter()
            .zip(msgs)
            .map(|(a, x)| a.encode(x))
            .collect::<Result<Vec<_>>>()?;
        self.encode_columns(&cols)
    }

    /// Encodes one outer codeword per level.
    pub fn encode_columns(&self, cols: &[Vec<Symbol>]) -> Result<Matrix> {
        let m = self.shape().0;
        let mut v = Matrix::zeros(m, self.b[self.levels()]);
        for (i, col) in cols.iter().enumerate() {
            if col.len() != m {
                return Err(CodecError::LengthMismatch { expected: m, found: col.len() });
            }
            for (j, &sym) in col.iter().enumerate() {
                v.row_mut(j)[self.b[i]..self.b[i + 1]].copy_from_slice(&self.towers[i].expand(sym));
            }
        }
        v.mul(&self.field, &self.generator)
    }

    // expand(col) times the generator rows of level `i` (1-based)
    fn contribution(&self, i: usize, col: &[Symbol]) -> Result<Matrix> {
        let rows = self.generator.row_range(self.b[i - 1], self.b[i]);
        let mut v = Matrix::zeros(col.len(), self.s[i - 1]);
        for (j, &sym) in col.iter().enumerate() {
            v.row_mut(j).copy_from_slice(&self.towers[i - 1].expand(sym));
        }
        v.mul(&self.field, &rows)
    }

    fn fold_level(&self, i: usize, coords: &Matrix) -> Vec<Symbol> {
        (0..coords.rows())
            .map(|j| self.towers[i - 1].fold(&coords.row(j)[self.b[i - 1]..self.b[i]]))
            .collect()
    }

    /// The whole code as a linear code over GF(q) of length `M N`, words
    /// flattened row by row.
    pub fn as_linear_code(&self) -> Result<LinearCode> {
        let (m, n) = self.shape();
        let mut rows = Vec::with_capacity(self.dimension());
        for (i, outer) in self.outers.iter().enumerate() {
            for l in 0..outer.k() {
                for &omega in self.towers[i].basis() {
                    let mut msgs: Vec<Vec<Symbol>> = self.outers.iter().map(|a| vec![0; a.k()]).collect();
                    msgs[i][l] = omega;
                    rows.push(self.encode(&msgs)?.into_data());
                }
            }
        }
        let flat = LinearCode::generic(&self.field, Matrix::from_rows(&rows)?, None)?;
        debug_assert_eq!(flat.n(), m * n);
        Ok(flat)
    }

    pub(crate) fn check_received(&self, r: &Matrix) -> Result<()> {
        let (m, n) = self.shape();
        if r.rows() != m || r.cols() != n {
            return Err(CodecError::DimensionMismatch(format!(
                "received word is {}x{}, expected {m}x{n}",
                r.rows(),
                r.cols()
            )));
        }
        self.field.check_all(r.data())
    }

    fn finish(&self, mut report: DecodeReport) -> Result<DecodeReport> {
        report.messages = self
            .outers
            .iter()
            .zip(&report.outer_codewords)
            .map(|(a, cw)| a.message_of(cw))
            .collect::<Result<_>>()?;
        report.codeword = Some(self.encode_columns(&report.outer_codewords)?);
        Ok(report)
    }

    /// Multistage decoding: every round decodes all rows with `B^(i)`.
    /// Supports erasures (Wainberg weights) and an extended inner radius.
    pub fn decode_basic(&self, r: &Matrix, x: &ErasurePattern, options: &DecodeOptions) -> Result<DecodeReport> {
        self.check_received(r)?;
        let k = self.levels();
        let mut residual = r.clone();
        let mut report = DecodeReport { outer_codewords: vec![Vec::new(); k], ..Default::default() };
        for i in (1..=k).rev() {
            let code = &self.prefix[i - 1];
            let d = code.require_distance()?;
            let rows = concat::row_decode(code, &residual, x, options.radius)?;
            let coords = concat::coordinates(code, &rows)?;
            let column = self.fold_level(i, &coords);
            let chain = ErasureChain::from_keys(&rows.order_keys, Some(0));
            let round = RoundReport {
                level: i,
                inner_distance: d,
                inner_invocations: rows.invocations,
                rows_decoded: rows.weights.len(),
                failed_rows: rows.failed.iter().filter(|&&f| f).count(),
                row_weights: rows.weights.clone(),
                ..Default::default()
            };
            let reliability = rows.reliability(d);
            let cw = self.gmd_round(i, &column, &reliability, &chain, options, round, &mut report)?;
            residual = residual.sub(&self.field, &self.contribution(i, &cw)?)?;
            report.outer_codewords[i - 1] = cw;
        }
        self.finish(report)
    }

    #[allow(clippy::too_many_arguments)]
    fn gmd_round(
        &self,
        i: usize,
        column: &[Symbol],
        reliability: &ReliabilityVector,
        chain: &ErasureChain,
        options: &DecodeOptions,
        mut round: RoundReport,
        report: &mut DecodeReport,
    ) -> Result<Vec<Symbol>> {
        let opts = GmdOptions { mode: options.mode, skip_zero_trial: true, start: 1 };
        let g = gmd::gmd_decode_chain(&self.outers[i - 1], column, reliability, chain, opts)?;
        round.outer_invocations = g.trials_attempted;
        round.columns.push(concat::column_report(&g));
        report.rounds.push(round);
        g.codeword.ok_or_else(|| CodecError::DecodeFailure { round: i, report: Box::new(report.clone()) })
    }

    /// Multistage decoding that reuses the previous round's row decisions:
    /// rows decoded correctly at level i keep their error estimate for
    /// level i-1, known miscorrections are re-decoded only when the smaller
    /// subcode can reach them, and failed rows only when the subcode corrects
    /// more errors. Errors only.
    pub fn decode_improved(&self, r: &Matrix, options: &DecodeOptions) -> Result<DecodeReport> {
        self.check_received(r)?;
        if options.radius.is_some() {
            return Err(CodecError::InvalidOptions("the improved decoder does not support an extended radius".into()));
        }
        let (m, n) = self.shape();
        let k = self.levels();
        let mut report = DecodeReport { outer_codewords: vec![Vec::new(); k], ..Default::default() };
        let mut residual = r.clone();

        // level k: every row is decoded
        let code = &self.prefix[k - 1];
        let d = code.require_distance()?;
        let rows = concat::row_decode(code, &residual, &ErasurePattern::empty(m, n), None)?;
        let mut coords = concat::coordinates(code, &rows)?;
        let mut errors = rows.errors.clone();
        let mut failed = rows.failed.clone();
        let column = self.fold_level(k, &coords);
        let round = RoundReport {
            level: k,
            inner_distance: d,
            inner_invocations: m,
            rows_decoded: m,
            failed_rows: failed.iter().filter(|&&f| f).count(),
            row_weights: rows.weights.clone(),
            ..Default::default()
        };
        let reliability = rows.reliability(d);
        let chain = ErasureChain::from_keys(reliability.weights(), Some(0));
        let mut cw = self.gmd_round(k, &column, &reliability, &chain, options, round, &mut report)?;
        let mut miscorrected: Vec<bool> = (0..m).map(|j| !failed[j] && column[j] != cw[j]).collect();
        residual = residual.sub(&self.field, &self.contribution(k, &cw)?)?;
        report.outer_codewords[k - 1] = cw;
        let mut d_prev = d;

        for i in (1..k).rev() {
            let code = &self.prefix[i - 1];
            let d = code.require_distance()?;
            let t = (d - 1) / 2;
            let gains = t > (d_prev - 1) / 2;
            let width = self.b[i];
            let mut next_coords = Matrix::zeros(m, width);
            let mut next_errors = Matrix::zeros(m, n);
            let mut next_failed = vec![false; m];
            let mut weights = vec![0u64; m];
            let mut round = RoundReport { level: i, inner_distance: d, ..Default::default() };

            for j in 0..m {
                let row = residual.row(j);
                let decode = if failed[j] {
                    if !gains {
                        round.skipped.record(SkipReason::TNoGain);
                        next_failed[j] = true;
                        next_errors.row_mut(j).copy_from_slice(row);
                    }
                    gains
                } else if miscorrected[j] {
                    let redecode = d_prev <= matrix::weight(errors.row(j)) + t;
                    if !redecode {
                        // the true error weight exceeds t, so the row is
                        // unreliable but keeps its previous message
                        round.skipped.record(SkipReason::SRedecodeBound);
                        let c = &coords.row(j)[..width];
                        next_coords.row_mut(j).copy_from_slice(c);
                        let w_hat = code.generator().left_mul(&self.field, c)?;
                        next_errors.row_mut(j).copy_from_slice(&matrix::vec_sub(&self.field, row, &w_hat));
                    }
                    redecode
                } else {
                    let w_hat = matrix::vec_sub(&self.field, row, errors.row(j));
                    assert!(code.contains(&w_hat), "carried row estimate left the subcode at level {i}");
                    let wt = matrix::weight(errors.row(j));
                    if 2 * wt < d {
                        round.skipped.record(SkipReason::NotInSuT);
                        weights[j] = (d - 2 * wt) as u64;
                        next_coords.row_mut(j).copy_from_slice(&code.unencoder().left_mul(&self.field, &w_hat)?);
                        next_errors.row_mut(j).copy_from_slice(errors.row(j));
                        false
                    } else {
                        true
                    }
                };
                if !decode {
                    continue;
                }
                round.inner_invocations += 1;
                round.rows_decoded += 1;
                match code.decode(row, &crate::code::ErasureSet::empty(n))? {
                    DecodeOutcome::Decoded { codeword, error, weight } => {
                        weights[j] = (d - 2 * weight) as u64;
                        next_coords.row_mut(j).copy_from_slice(&code.unencoder().left_mul(&self.field, &codeword)?);
                        next_errors.row_mut(j).copy_from_slice(&error);
                    }
                    DecodeOutcome::Failure => {
                        next_failed[j] = true;
                        next_errors.row_mut(j).copy_from_slice(row);
                    }
                }
            }

            round.failed_rows = next_failed.iter().filter(|&&f| f).count();
            round.row_weights = weights.clone();
            let column = self.fold_level(i, &next_coords);
            let reliability = ReliabilityVector::new(weights, d as u64)?;
            let chain = ErasureChain::from_keys(reliability.weights(), Some(0));
            cw = self.gmd_round(i, &column, &reliability, &chain, options, round, &mut report)?;
            miscorrected = (0..m).map(|j| !next_failed[j] && column[j] != cw[j]).collect();
            residual = residual.sub(&self.field, &self.contribution(i, &cw)?)?;
            report.outer_codewords[i - 1] = cw.clone();
            coords = next_coords;
            errors = next_errors;
            failed = next_failed;
            d_prev = d;
        }
        self.finish(report)
    }
}
