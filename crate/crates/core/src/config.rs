//! JSON code descriptions and a single handle over every code family.

use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, DecodeOutcome, ErasureSet, LinearCode};
use crate::concat::{ConcatCode, ConcatConfig, DecodeOptions, ErasurePattern};
use crate::error::{CodecError, Result};
use crate::galois::{Field, FieldSpec, Symbol};
use crate::gcc::{GccConfig, GccSpec};
use crate::matrix::Matrix;
use crate::mpc::{MpcConfig, MpcSpec};
use crate::report::{ColumnReport, DecodeReport, RoundReport};

/// Any supported code, told apart by its keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeConfig {
    Mpc(MpcConfig),
    Gcc(GccConfig),
    Concat(ConcatConfig),
    Code(CodeSpec),
}

impl CodeConfig {
    pub fn build(&self) -> Result<Codec> {
        Ok(match self {
            CodeConfig::Code(c) => Codec::Code(c.build()?),
            CodeConfig::Concat(c) => Codec::Concat(c.build()?),
            CodeConfig::Gcc(c) => Codec::Gcc(c.build()?),
            CodeConfig::Mpc(c) => Codec::Mpc(c.build()?),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CodecError::Config(e.to_string()))
    }
}

/// Multistage decoder used for GCC and MPC codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Every round decodes every row; supports erasures and extended radii.
    Basic,
    /// Rows are decoded only when the previous round cannot vouch for them.
    Improved,
}

#[derive(Debug, Clone)]
pub enum Codec {
    Code(LinearCode),
    Concat(ConcatCode),
    Gcc(GccSpec),
    Mpc(MpcSpec),
}

/// Summary printed by `code-info`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeInfo {
    pub kind: &'static str,
    pub field: FieldSpec,
    /// Length over the base field.
    pub n: usize,
    /// Dimension over the base field.
    pub k: usize,
    /// Minimum distance, or the designed distance of a composite code.
    pub d: Option<usize>,
    /// Whether `d` is the exact minimum distance.
    pub exact: bool,
    /// `(rows, columns)` of a codeword matrix.
    pub shape: (usize, usize),
}

impl Codec {
    pub fn kind(&self) -> &'static str {
        match self {
            Codec::Code(_) => "code",
            Codec::Concat(_) => "concat",
            Codec::Gcc(_) => "gcc",
            Codec::Mpc(_) => "mpc",
        }
    }

    pub fn config(&self) -> CodeConfig {
        match self {
            Codec::Code(c) => CodeConfig::Code(c.spec()),
            Codec::Concat(c) => CodeConfig::Concat(c.config()),
            Codec::Gcc(c) => CodeConfig::Gcc(c.config()),
            Codec::Mpc(c) => CodeConfig::Mpc(c.config()),
        }
    }

    /// Field of the codeword symbols.
    pub fn field(&self) -> &Field {
        match self {
            Codec::Code(c) => c.field(),
            Codec::Concat(c) => c.inner().field(),
            Codec::Gcc(c) => c.field(),
            Codec::Mpc(c) => c.field(),
        }
    }

    /// `(rows, columns)` of a codeword; a plain code is one row.
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Codec::Code(c) => (1, c.n()),
            Codec::Concat(c) => c.shape(),
            Codec::Gcc(c) => c.shape(),
            Codec::Mpc(c) => c.gcc().shape(),
        }
    }

    /// The codes whose messages make up a full message, in order.
    pub fn message_codes(&self) -> Vec<&LinearCode> {
        match self {
            Codec::Code(c) => vec![c],
            Codec::Concat(c) => vec![c.outer(); c.columns()],
            Codec::Gcc(c) => c.outers().iter().collect(),
            Codec::Mpc(c) => c.gcc().outers().iter().collect(),
        }
    }

    pub fn encode(&self, msgs: &[Vec<Symbol>]) -> Result<Matrix> {
        match self {
            Codec::Code(c) => {
                if msgs.len() != 1 {
                    return Err(CodecError::LengthMismatch { expected: 1, found: msgs.len() });
                }
                Matrix::from_rows(&[c.encode(&msgs[0])?])
            }
            Codec::Concat(c) => c.encode(msgs),
            Codec::Gcc(c) => c.encode(msgs),
            Codec::Mpc(c) => c.encode(msgs),
        }
    }

    /// `(d, exact)`: the minimum distance of a plain code, the designed
    /// distance otherwise.
    pub fn distance(&self) -> Result<(usize, bool)> {
        match self {
            Codec::Code(c) => {
                let d = c.distance_info().ok_or(CodecError::UnknownDistance)?;
                Ok((d.value, d.exact))
            }
            Codec::Concat(c) => Ok((c.designed_distance()?, false)),
            Codec::Gcc(c) => Ok((c.designed_distance()?, false)),
            Codec::Mpc(c) => c.designed_distance(),
        }
    }

    pub fn info(&self) -> CodeInfo {
        let (rows, cols) = self.shape();
        let k = match self {
            Codec::Code(c) => c.k(),
            Codec::Concat(c) => c.dimension(),
            Codec::Gcc(c) => c.dimension(),
            Codec::Mpc(c) => c.gcc().dimension(),
        };
        let (d, exact) = match self.distance() {
            Ok((d, exact)) => (Some(d), exact),
            Err(_) => (None, false),
        };
        CodeInfo { kind: self.kind(), field: self.field().spec(), n: rows * cols, k, d, exact, shape: (rows, cols) }
    }

    /// Whether the decoder is guaranteed to correct the error matrix `e`
    /// with erasures `x`.
    pub fn correctable(&self, e: &Matrix, x: &ErasurePattern) -> Result<bool> {
        match self {
            Codec::Code(c) => {
                let d = c.require_distance()?;
                Ok(2 * x.row(0).punctured_weight(e.row(0)) + x.row(0).size() < d)
            }
            Codec::Concat(c) => c.correctable(e, x),
            Codec::Gcc(c) => c.correctable(e, x),
            Codec::Mpc(c) => c.gcc().correctable(e, x),
        }
    }

    /// Largest per-column GMD trial count the decoder may use.
    pub fn column_trial_bound(&self, erasure_mode: bool) -> Result<usize> {
        match self {
            Codec::Code(_) => Ok(1),
            Codec::Concat(c) => c.trial_bound(erasure_mode),
            Codec::Gcc(c) => gcc_trial_bound(c, erasure_mode),
            Codec::Mpc(c) => gcc_trial_bound(c.gcc(), erasure_mode),
        }
    }

    /// Bound on inner decoder calls for the chosen algorithm, if any.
    pub fn inner_invocation_bound(&self, algorithm: Algorithm) -> Result<Option<usize>> {
        Ok(match (self, algorithm) {
            (Codec::Gcc(c), Algorithm::Improved) => Some(c.inner_invocation_bound()?),
            (Codec::Mpc(c), Algorithm::Improved) if c.is_nsc() => Some(c.inner_invocation_bound()?),
            (Codec::Mpc(c), Algorithm::Improved) => Some(c.gcc().inner_invocation_bound()?),
            _ => None,
        })
    }

    /// The decoder `decode` would run: improved for GCC and MPC codes when
    /// there are no erasures and no extended radius, basic otherwise.
    pub fn default_algorithm(&self, x: &ErasurePattern, options: &DecodeOptions) -> Algorithm {
        match self {
            Codec::Gcc(_) | Codec::Mpc(_) if !x.has_erasures() && options.radius.is_none() => Algorithm::Improved,
            _ => Algorithm::Basic,
        }
    }

    pub fn decode(
        &self,
        r: &Matrix,
        x: &ErasurePattern,
        options: &DecodeOptions,
        algorithm: Option<Algorithm>,
    ) -> Result<DecodeReport> {
        let algorithm = algorithm.unwrap_or_else(|| self.default_algorithm(x, options));
        if algorithm == Algorithm::Improved && x.has_erasures() {
            return Err(CodecError::InvalidOptions("the improved decoder is errors-only".into()));
        }
        match self {
            Codec::Code(c) => decode_plain(c, r, x, options),
            Codec::Concat(c) => c.decode(r, x, options),
            Codec::Gcc(c) => match algorithm {
                Algorithm::Basic => c.decode_basic(r, x, options),
                Algorithm::Improved => c.decode_improved(r, options),
            },
            Codec::Mpc(c) => match algorithm {
                Algorithm::Basic => c.gcc().decode_basic(r, x, options),
                Algorithm::Improved if c.is_nsc() => c.decode(r, options),
                Algorithm::Improved => c.gcc().decode_improved(r, options),
            },
        }
    }
}

fn gcc_trial_bound(spec: &GccSpec, erasure_mode: bool) -> Result<usize> {
    let da = spec.outer_distances()?;
    let db = spec.inner_distances()?;
    Ok(da
        .iter()
        .zip(&db)
        .map(|(&a, &b)| crate::concat::trial_bound_cc(a, b, erasure_mode))
        .max()
        .unwrap_or(0))
}

fn decode_plain(code: &LinearCode, r: &Matrix, x: &ErasurePattern, options: &DecodeOptions) -> Result<DecodeReport> {
    if r.rows() != 1 || r.cols() != code.n() {
        return Err(CodecError::DimensionMismatch(format!(
            "received word is {}x{}, expected 1x{}",
            r.rows(),
            r.cols(),
            code.n()
        )));
    }
    if options.radius.is_some() {
        return Err(CodecError::InvalidOptions("an extended radius applies to composite codes only".into()));
    }
    x.check_shape(1, code.n())?;
    code.field().check_all(r.data())?;
    let erasures: &ErasureSet = x.row(0);
    let outcome = code.decode(r.row(0), erasures)?;
    let ok = !outcome.is_failure();
    let mut report = DecodeReport {
        rounds: vec![RoundReport {
            level: 1,
            inner_distance: code.require_distance()?,
            outer_invocations: 1,
            columns: vec![ColumnReport { trials: 1, accepted: ok.then_some(0), forney_lhs: None, forney_ok: ok }],
            ..Default::default()
        }],
        ..Default::default()
    };
    match outcome {
        DecodeOutcome::Decoded { codeword, .. } => {
            report.messages = vec![code.message_of(&codeword)?];
            report.codeword = Some(Matrix::from_rows(std::slice::from_ref(&codeword))?);
            report.outer_codewords = vec![codeword];
            Ok(report)
        }
        DecodeOutcome::Failure => Err(CodecError::DecodeFailure { round: 1, report: Box::new(report) }),
    }
}
