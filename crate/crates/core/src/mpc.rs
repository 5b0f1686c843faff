//! Matrix-product codes `[A_1 ... A_k] B`.
//!
//! A matrix-product code is a generalized concatenated code whose outer
//! codes all live over the base field GF(q) (every extension degree is 1)
//! and whose inner generator is a k x N matrix `B`. When `B` is non-singular
//! by columns (NSC) every prefix subcode `B^(i)` is MDS with distance
//! `N - i + 1`, which fixes the round schedule of the improved decoder.
//!
//! Besides the generic decoder this module carries hand-written decoders for
//! the `(u | u + v)` and `(u + v + w | 2u + v | u)` constructions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, DecodeOutcome, ErasureSet, LinearCode};
use crate::concat::DecodeOptions;
use crate::error::{CodecError, Result};
use crate::galois::{Field, FieldSpec, Symbol};
use crate::gcc::GccSpec;
use crate::gmd::{forney_check, ReliabilityVector};
use crate::matrix::{self, Matrix};
use crate::report::DecodeReport;

/// Largest column count accepted by [`is_triangular`].
pub const TRIANGULAR_MAX_COLS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpcConfig {
    pub outers: Vec<CodeSpec>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Symbol>>,
    pub field: FieldSpec,
}

impl MpcConfig {
    pub fn build(&self) -> Result<MpcSpec> {
        let field = self.field.build()?;
        let outers = self.outers.iter().map(|c| c.build()).collect::<Result<Vec<_>>>()?;
        MpcSpec::new(&field, outers, Matrix::from_rows(&self.b)?)
    }
}

/// True iff for every t, every t x t minor of the first t rows of `b` is
/// non-singular.
pub fn is_nsc(field: &Field, b: &Matrix) -> Result<bool> {
    b.check_field(field)?;
    let (k, n) = (b.rows(), b.cols());
    if k > n {
        return Err(CodecError::ShapeError(format!("{k} rows exceed {n} columns")));
    }
    for t in 1..=k {
        let top = b.top_rows(t);
        let mut cols: Vec<usize> = (0..t).collect();
        loop {
            if !top.select_columns(&cols).is_nonsingular(field) {
                return Ok(false);
            }
            if !next_subset(&mut cols, n) {
                break;
            }
        }
    }
    Ok(true)
}

// advances `cols` to the next t-subset of 0..n in lexicographic order
fn next_subset(cols: &mut [usize], n: usize) -> bool {
    let t = cols.len();
    let Some(i) = (0..t).rev().find(|&i| cols[i] < n - t + i) else {
        return false;
    };
    cols[i] += 1;
    for j in i + 1..t {
        cols[j] = cols[j - 1] + 1;
    }
    true
}

/// True iff some column permutation of `b` is upper-triangular with a
/// non-zero diagonal. Row `i` then needs a column whose lowest non-zero
/// entry sits in row `i`; such columns are automatically distinct.
pub fn is_triangular(b: &Matrix) -> Result<bool> {
    if b.cols() > TRIANGULAR_MAX_COLS {
        return Err(CodecError::TooLarge(format!(
            "{} columns, at most {TRIANGULAR_MAX_COLS} supported",
            b.cols()
        )));
    }
    let lowest: Vec<Option<usize>> = (0..b.cols())
        .map(|c| (0..b.rows()).rev().find(|&r| b.get(r, c) != 0))
        .collect();
    Ok((0..b.rows()).all(|r| lowest.contains(&Some(r))))
}

/// The `(u | u + v)` matrix `[[1, 1], [0, 1]]`.
pub fn uuv_matrix() -> Matrix {
    Matrix::from_rows(&[vec![1, 1], vec![0, 1]]).expect("constant matrix")
}

/// The `(u + v + w | 2u + v | u)` matrix `[[1, 2, 1], [1, 1, 0], [1, 0, 0]]`.
/// Needs odd characteristic.
pub fn uvw_matrix(field: &Field) -> Result<Matrix> {
    if field.characteristic() == 2 {
        return Err(CodecError::InvalidParams(
            "the (u+v+w | 2u+v | u) matrix is not NSC in characteristic 2".into(),
        ));
    }
    Matrix::from_rows(&[vec![1, field.from_int(2), 1], vec![1, 1, 0], vec![1, 0, 0]])
}

/// Samples a random k x N NSC matrix row by row, redrawing a row until all
/// new minors are non-singular. Returns `None` when a row needs more than
/// `max_attempts` draws.
pub fn random_nsc_matrix<R: Rng + ?Sized>(
    field: &Field,
    k: usize,
    n: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Option<Matrix>> {
    if k == 0 || k > n {
        return Err(CodecError::ShapeError(format!("cannot build a {k} x {n} NSC matrix")));
    }
    let q = field.order() as Symbol;
    let mut rows: Vec<Vec<Symbol>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut found = false;
        for _ in 0..max_attempts {
            let row: Vec<Symbol> = (0..n).map(|_| rng.random_range(0..q)).collect();
            rows.push(row);
            if prefix_minors_ok(field, &rows, n)? {
                found = true;
                break;
            }
            rows.pop();
        }
        if !found {
            return Ok(None);
        }
    }
    let b = Matrix::from_rows(&rows)?;
    debug_assert!(is_nsc(field, &b)?);
    Ok(Some(b))
}

fn prefix_minors_ok(field: &Field, rows: &[Vec<Symbol>], n: usize) -> Result<bool> {
    let t = rows.len();
    let top = Matrix::from_rows(rows)?;
    let mut cols: Vec<usize> = (0..t).collect();
    loop {
        if !top.select_columns(&cols).is_nonsingular(field) {
            return Ok(false);
        }
        if !next_subset(&mut cols, n) {
            return Ok(true);
        }
    }
}

/// Result of `nsc-check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NscSummary {
    pub nsc: bool,
    pub triangular: bool,
    /// `min_i d_{a,i} (N - i + 1)`, when NSC and outer distances are known.
    pub d_star: Option<usize>,
    /// Whether `d_star` is the exact minimum distance.
    pub exact: Option<bool>,
}

pub fn nsc_summary(field: &Field, b: &Matrix, outer_distances: Option<&[usize]>) -> Result<NscSummary> {
    let nsc = b.rows() <= b.cols() && is_nsc(field, b)?;
    let triangular = is_triangular(b)?;
    let d_star = match outer_distances {
        Some(da) if nsc => {
            if da.len() != b.rows() {
                return Err(CodecError::LengthMismatch { expected: b.rows(), found: da.len() });
            }
            Some(designed_distance(da, b.cols()))
        }
        _ => None,
    };
    Ok(NscSummary { nsc, triangular, d_star, exact: d_star.map(|_| triangular) })
}

fn designed_distance(da: &[usize], n: usize) -> usize {
    da.iter().enumerate().map(|(i, d)| d * (n - i)).min().unwrap()
}

/// Output of the hand-written decoders, with per-decoder call counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorkedDecode {
    pub outer_codewords: Vec<Vec<Symbol>>,
    pub messages: Vec<Vec<Symbol>>,
    pub codeword: Matrix,
    /// Calls of the decoder of `A_i`, level 1 first.
    pub outer_calls: Vec<usize>,
    /// Calls of a row decoder.
    pub inner_calls: usize,
}

#[derive(Debug, Clone)]
pub struct MpcSpec {
    gcc: GccSpec,
    b: Matrix,
    nsc: bool,
    triangular: bool,
}

impl MpcSpec {
    pub fn new(field: &Field, outers: Vec<LinearCode>, b: Matrix) -> Result<Self> {
        let k = outers.len();
        if b.rows() != k {
            return Err(CodecError::DimensionMismatch(format!("B has {} rows for {k} outer codes", b.rows())));
        }
        if let Some(a) = outers.iter().find(|a| a.field() != field) {
            return Err(CodecError::InvalidParams(format!(
                "outer codes must be over the base field {field:?}, got {:?}",
                a.field()
            )));
        }
        let nsc = k <= b.cols() && is_nsc(field, &b)?;
        let triangular = is_triangular(&b)?;
        let mds: Vec<usize> = (0..k).map(|i| b.cols() - i).collect();
        let gcc = GccSpec::with_inner_distances(field, outers, &vec![1; k], b.clone(), nsc.then_some(&mds[..]))?;
        Ok(MpcSpec { gcc, b, nsc, triangular })
    }

    pub fn config(&self) -> MpcConfig {
        let g = self.gcc.config();
        MpcConfig { outers: g.outers, b: self.b.to_rows(), field: g.field }
    }

    pub fn gcc(&self) -> &GccSpec {
        &self.gcc
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn field(&self) -> &Field {
        self.gcc.field()
    }

    pub fn levels(&self) -> usize {
        self.gcc.levels()
    }

    pub fn is_nsc(&self) -> bool {
        self.nsc
    }

    pub fn is_triangular(&self) -> bool {
        self.triangular
    }

    fn require_nsc(&self) -> Result<()> {
        if self.nsc {
            Ok(())
        } else {
            Err(CodecError::NotNsc)
        }
    }

    /// `(d*, exact)` with `d* = min_i d_{a,i} (N - i + 1)`; exact when `B`
    /// is also triangular.
    pub fn designed_distance(&self) -> Result<(usize, bool)> {
        self.require_nsc()?;
        Ok((designed_distance(&self.gcc.outer_distances()?, self.b.cols()), self.triangular))
    }

    /// Rounds in which the improved decoder may decode rows:
    /// `1 + (k - 1) / 2` for odd `d_{b,k}`, `1 + k / 2` for even.
    pub fn row_decoding_rounds_bound(&self) -> Result<usize> {
        self.require_nsc()?;
        let k = self.levels();
        let d_bk = self.b.cols() - k + 1;
        Ok(if d_bk % 2 == 1 { 1 + (k - 1) / 2 } else { 1 + k / 2 })
    }

    /// Bound on inner decoder calls of the improved decoder for NSC `B`:
    /// `M + sum_{i<t} (d_{a,k-1-2i} - 1)` with `t = (k - 1) / 2` for odd
    /// `d_{b,k}`, and `M + sum_{i<t} (d_{a,k-2i} - 1)` with `t = k / 2` for
    /// even `d_{b,k}`.
    pub fn inner_invocation_bound(&self) -> Result<usize> {
        self.require_nsc()?;
        let k = self.levels();
        let da = self.gcc.outer_distances()?;
        let m = self.gcc.shape().0;
        let d_bk = self.b.cols() - k + 1;
        // levels are 1-based in the formulas
        let extra: usize = if d_bk % 2 == 1 {
            (0..(k - 1) / 2).map(|i| da[k - 1 - 2 * i - 1] - 1).sum()
        } else {
            (0..k / 2).map(|i| da[k - 2 * i - 1] - 1).sum()
        };
        Ok(m + extra)
    }

    pub fn encode(&self, msgs: &[Vec<Symbol>]) -> Result<Matrix> {
        self.gcc.encode(msgs)
    }

    /// The improved multistage decoder; requires NSC `B`.
    pub fn decode(&self, r: &Matrix, options: &DecodeOptions) -> Result<DecodeReport> {
        self.require_nsc()?;
        self.gcc.decode_improved(r, options)
    }

    fn require_matrix(&self, expected: &Matrix, name: &str) -> Result<()> {
        if &self.b != expected {
            return Err(CodecError::InvalidParams(format!("decoder needs the {name} matrix")));
        }
        Ok(())
    }

    fn finish(&self, cols: Vec<Vec<Symbol>>, outer_calls: Vec<usize>, inner_calls: usize) -> Result<WorkedDecode> {
        let messages = self
            .gcc
            .outers()
            .iter()
            .zip(&cols)
            .map(|(a, c)| a.message_of(c))
            .collect::<Result<_>>()?;
        let codeword = self.gcc.encode_columns(&cols)?;
        Ok(WorkedDecode { outer_codewords: cols, messages, codeword, outer_calls, inner_calls })
    }

    /// `(u | u + v)` decoding with one call per outer decoder: decode
    /// `R^2 - R^1` with `A_2`, then decode `R^1` with `A_1`, erasing the
    /// positions where the first decoder corrected an error.
    pub fn decode_uuv(&self, r: &Matrix) -> Result<WorkedDecode> {
        self.require_matrix(&uuv_matrix(), "(u | u+v)")?;
        self.gcc.check_received(r)?;
        let f = self.field();
        let (a1, a2) = (self.gcc.outer(1), self.gcc.outer(2));
        let (r1, r2) = (r.column(0), r.column(1));
        let m = r1.len();

        let v2_hat = matrix::vec_sub(f, &r2, &r1);
        let (v2, e) = decoded_or_fail(a2.decode(&v2_hat, &ErasureSet::empty(m))?, 2)?;
        let erased = ErasureSet::from_mask(e.iter().map(|&x| x != 0).collect());
        let (v1, _) = decoded_or_fail(a1.decode(&r1, &erased)?, 1)?;
        self.finish(vec![v1, v2], vec![1, 1], 0)
    }

    /// The naive `(u | u + v)` decoder: decode `R^2 - R^1` with `A_2`, then
    /// `R^1` with `A_1`; if the result is closer than `d*/2` to `R` return
    /// it, otherwise decode `R^2 - V^2` with `A_1`.
    pub fn decode_uuv_naive(&self, r: &Matrix) -> Result<WorkedDecode> {
        self.require_matrix(&uuv_matrix(), "(u | u+v)")?;
        self.gcc.check_received(r)?;
        let f = self.field();
        let (a1, a2) = (self.gcc.outer(1), self.gcc.outer(2));
        let (r1, r2) = (r.column(0), r.column(1));
        let none = ErasureSet::empty(r1.len());
        let (d_star, _) = self.designed_distance()?;

        let (v2, _) = decoded_or_fail(a2.decode(&matrix::vec_sub(f, &r2, &r1), &none)?, 2)?;
        if let Some(v1) = a1.decode(&r1, &none)?.codeword() {
            let w = self.gcc.encode_columns(&[v1.to_vec(), v2.clone()])?;
            if 2 * matrix::distance(w.data(), r.data()) < d_star {
                return self.finish(vec![v1.to_vec(), v2], vec![1, 1], 0);
            }
        }
        let (v1, _) = decoded_or_fail(a1.decode(&matrix::vec_sub(f, &r2, &v2), &none)?, 1)?;
        self.finish(vec![v1, v2], vec![2, 1], 0)
    }

    /// `(u + v + w | 2u + v | u)` decoding:
    /// 1. decode `R^1 - R^2 + R^3` with `A_3`, error vector `e`;
    /// 2. strip `V^3`, decode `R'^1 - R'^3` with `A_2` erasing `{e != 0}`,
    ///    error vector `e'`;
    /// 3. strip `V^2`, decode the rows with `e != 0` or `e' != 0` with
    ///    `B^(1)`, read `V''` off the third column;
    /// 4. decode `V''` with `A_1` erasing the failed rows, accept if Forney's
    ///    test passes;
    /// 5. otherwise decode again also erasing the rows that needed a
    ///    correction.
    pub fn decode_uvw(&self, r: &Matrix) -> Result<WorkedDecode> {
        self.require_matrix(&uvw_matrix(self.field())?, "(u+v+w | 2u+v | u)")?;
        self.gcc.check_received(r)?;
        let f = self.field();
        let (a1, a2, a3) = (self.gcc.outer(1), self.gcc.outer(2), self.gcc.outer(3));
        let b1 = self.gcc.prefix_subcode(1)?;
        let d_b1 = b1.require_distance()?;
        let m = r.rows();
        let mut outer_calls = vec![0; 3];

        let v3_hat = matrix::vec_add(f, &matrix::vec_sub(f, &r.column(0), &r.column(1)), &r.column(2));
        outer_calls[2] += 1;
        let (v3, e) = decoded_or_fail(a3.decode(&v3_hat, &ErasureSet::empty(m))?, 3)?;

        let r1 = matrix::vec_sub(f, &r.column(0), &v3);
        let v2_hat = matrix::vec_sub(f, &r1, &r.column(2));
        outer_calls[1] += 1;
        let f1 = ErasureSet::from_mask(e.iter().map(|&x| x != 0).collect());
        let (v2, e2) = decoded_or_fail(a2.decode(&v2_hat, &f1)?, 2)?;

        // R'' = R - V^3 (1, 0, 0) - V^2 (1, 1, 0)
        let mut inner_calls = 0;
        let mut weights = vec![d_b1 as u64; m];
        let mut v1_hat = vec![0; m];
        for j in 0..m {
            let row = vec![f.sub(r1[j], v2[j]), f.sub(r.get(j, 1), v2[j]), r.get(j, 2)];
            v1_hat[j] = row[2];
            if e[j] == 0 && e2[j] == 0 {
                continue;
            }
            inner_calls += 1;
            match b1.decode(&row, &ErasureSet::empty(3))? {
                DecodeOutcome::Decoded { codeword, weight, .. } => {
                    weights[j] = (d_b1 - 2 * weight) as u64;
                    v1_hat[j] = codeword[2];
                }
                DecodeOutcome::Failure => weights[j] = 0,
            }
        }
        let reliability = ReliabilityVector::new(weights.clone(), d_b1 as u64)?;
        let d_a1 = a1.require_distance()?;

        outer_calls[0] += 1;
        let first = ErasureSet::from_mask(weights.iter().map(|&w| w == 0).collect());
        if let Some(v1) = a1.decode(&v1_hat, &first)?.codeword() {
            if forney_check(v1, &v1_hat, &reliability, d_a1) {
                return self.finish(vec![v1.to_vec(), v2, v3], outer_calls, inner_calls);
            }
        }
        outer_calls[0] += 1;
        let second = ErasureSet::from_mask(weights.iter().map(|&w| w <= 1).collect());
        let (v1, _) = decoded_or_fail(a1.decode(&v1_hat, &second)?, 1)?;
        self.finish(vec![v1, v2, v3], outer_calls, inner_calls)
    }
}

fn decoded_or_fail(outcome: DecodeOutcome, round: usize) -> Result<(Vec<Symbol>, Vec<Symbol>)> {
    match outcome {
        DecodeOutcome::Decoded { codeword, error, .. } => Ok((codeword, error)),
        DecodeOutcome::Failure => Err(CodecError::DecodeFailure { round, report: Box::default() }),
    }
}
