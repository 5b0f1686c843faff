//! Linear block codes over GF(q) and the bounded-distance error-and-erasure
//! decoding contract shared by every component decoder.
//!
//! A decoder for a code of minimum distance `d`, given a word `r` and an
//! erasure set `E`, returns the codeword `c` with `2 wt_E(r - c) + |E| < d`
//! when one exists and fails otherwise. It never returns a codeword outside
//! that bound, even when one is nearest.

use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{CodecError, Result};
use crate::galois::{Field, FieldSpec, Symbol};
use crate::matrix::{self, Matrix};
use crate::{oracle, rs};

/// Codes with at most this many codewords can be enumerated.
pub const ENUMERATION_CAP: f64 = (1u64 << 20) as f64;
/// Codes with at most this many codewords keep a codeword list and get an
/// exhaustive decoder.
pub const DECODER_CAP: f64 = (1u64 << 16) as f64;

/// Sorted set of erased coordinates, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErasureSet {
    indices: Vec<usize>,
    mask: Vec<bool>,
}

impl ErasureSet {
    pub fn new(indices: &[usize], len: usize) -> Result<Self> {
        let mut mask = vec![false; len];
        for &i in indices {
            if i >= len {
                return Err(CodecError::IndexOutOfRange { index: i, len });
            }
            if mask[i] {
                return Err(CodecError::DuplicateIndex(i));
            }
            mask[i] = true;
        }
        Ok(Self::from_mask(mask))
    }

    pub fn empty(len: usize) -> Self {
        ErasureSet { indices: Vec::new(), mask: vec![false; len] }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let indices = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        ErasureSet { indices, mask }
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    /// |E|
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    /// Hamming weight of `v` outside the erased coordinates.
    pub fn punctured_weight(&self, v: &[Symbol]) -> usize {
        v.iter().enumerate().filter(|&(i, &x)| x != 0 && !self.contains(i)).count()
    }
}

/// `|supp(v) \ E|` for raw 0-based indices.
pub fn wt_punctured(v: &[Symbol], erasures: &[usize]) -> Result<usize> {
    Ok(ErasureSet::new(erasures, v.len())?.punctured_weight(v))
}

/// Whether `c` lies inside the error-and-erasure decoding bound around `r`.
pub fn within_bound(r: &[Symbol], c: &[Symbol], erasures: &ErasureSet, d: usize) -> bool {
    let wt = r
        .iter()
        .zip(c)
        .enumerate()
        .filter(|&(i, (x, y))| x != y && !erasures.contains(i))
        .count();
    2 * wt + erasures.size() < d
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded {
        codeword: Vec<Symbol>,
        /// `r - codeword`
        error: Vec<Symbol>,
        /// `wt_E(error)`
        weight: usize,
    },
    Failure,
}

impl DecodeOutcome {
    pub fn decoded(field: &Field, r: &[Symbol], codeword: Vec<Symbol>, erasures: &ErasureSet) -> Self {
        let error = matrix::vec_sub(field, r, &codeword);
        let weight = erasures.punctured_weight(&error);
        DecodeOutcome::Decoded { codeword, error, weight }
    }

    pub fn codeword(&self) -> Option<&[Symbol]> {
        match self {
            DecodeOutcome::Decoded { codeword, .. } => Some(codeword),
            DecodeOutcome::Failure => None,
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, DecodeOutcome::Failure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distance {
    pub value: usize,
    /// False when the value was declared and could not be verified by enumeration.
    pub exact: bool,
}

#[derive(Debug, Clone)]
enum DecoderKind {
    ReedSolomon { points: Vec<Symbol> },
    Exhaustive,
    Identity,
    None,
}

struct CodeInner {
    field: Field,
    n: usize,
    k: usize,
    generator: Matrix,
    unencoder: Matrix,
    distance: Option<Distance>,
    decoder: DecoderKind,
    codewords: OnceLock<Vec<Symbol>>,
}

/// An `[n, k, d]_q` linear code given by a `k x n` generator matrix.
#[derive(Clone)]
pub struct LinearCode {
    inner: Arc<CodeInner>,
}

impl std::fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}, {:?}] over {:?}",
            self.inner.n, self.inner.k, self.inner.distance, self.inner.field
        )
    }
}

/// JSON form of a code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub kind: CodeKind,
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<Vec<Symbol>>>,
    #[serde(default)]
    pub d: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Rs,
    Generic,
}

impl CodeSpec {
    pub fn build(&self) -> Result<LinearCode> {
        let field = self.field.build()?;
        match self.kind {
            CodeKind::Rs => {
                let code = LinearCode::reed_solomon(&field, self.n, self.k)?;
                if let Some(d) = self.d {
                    if d != self.n - self.k + 1 {
                        return Err(CodecError::InvalidParams(format!(
                            "declared distance {d} but an RS code has n - k + 1 = {}",
                            self.n - self.k + 1
                        )));
                    }
                }
                Ok(code)
            }
            CodeKind::Generic => {
                let rows = self.generator.as_ref().ok_or_else(|| {
                    CodecError::InvalidParams("generic code needs a generator matrix".into())
                })?;
                let g = Matrix::from_rows(rows)?;
                if g.rows() != self.k || g.cols() != self.n {
                    return Err(CodecError::DimensionMismatch(format!(
                        "generator is {}x{}, expected {}x{}",
                        g.rows(),
                        g.cols(),
                        self.k,
                        self.n
                    )));
                }
                LinearCode::generic(&field, g, self.d)
            }
        }
    }
}

impl LinearCode {
    fn assemble(field: &Field, generator: Matrix, distance: Option<Distance>, decoder: DecoderKind) -> Result<Self> {
        let unencoder = generator.right_inverse(field)?;
        Ok(LinearCode {
            inner: Arc::new(CodeInner {
                field: field.clone(),
                n: generator.cols(),
                k: generator.rows(),
                generator,
                unencoder,
                distance,
                decoder,
                codewords: OnceLock::new(),
            }),
        })
    }

    /// A code from an arbitrary full-rank generator matrix. Small codes get
    /// their exact minimum distance by enumeration and an exhaustive
    /// decoder; larger ones keep the declared distance and can only encode.
    pub fn generic(field: &Field, generator: Matrix, declared_d: Option<usize>) -> Result<Self> {
        generator.check_field(field)?;
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || n == 0 {
            return Err(CodecError::InvalidParams("code must have positive length and dimension".into()));
        }
        if generator.rank(field) != k {
            return Err(CodecError::InvalidParams("generator matrix does not have full rank".into()));
        }
        let count = (field.order() as f64).powi(k as i32);
        let decoder = if k == n {
            DecoderKind::Identity
        } else if count <= DECODER_CAP {
            DecoderKind::Exhaustive
        } else {
            DecoderKind::None
        };
        let code = Self::assemble(field, generator, None, decoder)?;
        let distance = if k == n {
            Some(Distance { value: 1, exact: true })
        } else if count <= ENUMERATION_CAP {
            let d = code.min_distance()?;
            if let Some(declared) = declared_d {
                if declared != d {
                    return Err(CodecError::InvalidParams(format!(
                        "declared distance {declared} but enumeration gives {d}"
                    )));
                }
            }
            Some(Distance { value: d, exact: true })
        } else {
            declared_d.map(|value| Distance { value, exact: false })
        };
        let inner = Arc::into_inner(code.inner).expect("freshly built code is uniquely owned");
        Ok(LinearCode { inner: Arc::new(CodeInner { distance, ..inner }) })
    }

    /// `[n, 1, n]` repetition code.
    pub fn repetition(field: &Field, n: usize) -> Result<Self> {
        Self::generic(field, Matrix::from_rows(&[vec![1; n]])?, Some(n))
    }

    /// Reed-Solomon code evaluating messages (polynomial coefficients, low
    /// degree first) at the field elements `0, 1, ..., n - 1` in integer
    /// encoding order.
    pub fn reed_solomon(field: &Field, n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n as u64 > field.order() {
            return Err(CodecError::InvalidParams(format!(
                "RS code needs 1 <= k <= n <= q, got n = {n}, k = {k}, q = {}",
                field.order()
            )));
        }
        let points: Vec<Symbol> = (0..n as Symbol).collect();
        let mut g = Matrix::zeros(k, n);
        for (j, &x) in points.iter().enumerate() {
            for i in 0..k {
                g.set(i, j, field.pow(x, i as u64));
            }
        }
        let distance = Some(Distance { value: n - k + 1, exact: true });
        Self::assemble(field, g, distance, DecoderKind::ReedSolomon { points })
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn k(&self) -> usize {
        self.inner.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.inner.generator
    }

    /// Right inverse of the generator, mapping codewords back to messages.
    pub fn unencoder(&self) -> &Matrix {
        &self.inner.unencoder
    }

    pub fn distance(&self) -> Option<usize> {
        self.inner.distance.map(|d| d.value)
    }

    pub fn distance_info(&self) -> Option<Distance> {
        self.inner.distance
    }

    pub fn require_distance(&self) -> Result<usize> {
        self.distance().ok_or(CodecError::UnknownDistance)
    }

    pub fn is_reed_solomon(&self) -> bool {
        matches!(self.inner.decoder, DecoderKind::ReedSolomon { .. })
    }

    pub fn spec(&self) -> CodeSpec {
        let (kind, generator) = if self.is_reed_solomon() {
            (CodeKind::Rs, None)
        } else {
            (CodeKind::Generic, Some(self.inner.generator.to_rows()))
        };
        CodeSpec {
            kind,
            field: self.inner.field.spec(),
            n: self.inner.n,
            k: self.inner.k,
            generator,
            d: self.distance(),
        }
    }

    pub fn has_decoder(&self) -> bool {
        !matches!(self.inner.decoder, DecoderKind::None)
    }

    /// Number of codewords, q^k, as a float since it may be astronomically large.
    pub fn codeword_count(&self) -> f64 {
        (self.inner.field.order() as f64).powi(self.inner.k as i32)
    }

    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        self.inner.field.check_all(msg)?;
        self.inner.generator.left_mul(&self.inner.field, msg)
    }

    /// Message of a codeword; errors if the word is not in the code.
    pub fn message_of(&self, codeword: &[Symbol]) -> Result<Vec<Symbol>> {
        let msg = self.inner.unencoder.left_mul(&self.inner.field, codeword)?;
        if self.encode(&msg)? != codeword {
            return Err(CodecError::InvalidParams("word is not a codeword".into()));
        }
        Ok(msg)
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        word.len() == self.inner.n
            && self.inner.field.check_all(word).is_ok()
            && self
                .inner
                .unencoder
                .left_mul(&self.inner.field, word)
                .and_then(|m| self.encode(&m))
                .is_ok_and(|c| c == word)
    }

    /// Error-and-erasure decoding under the bounded-distance contract.
    pub fn decode(&self, r: &[Symbol], erasures: &ErasureSet) -> Result<DecodeOutcome> {
        let n = self.inner.n;
        if r.len() != n {
            return Err(CodecError::LengthMismatch { expected: n, found: r.len() });
        }
        if erasures.len() != n {
            return Err(CodecError::LengthMismatch { expected: n, found: erasures.len() });
        }
        let field = &self.inner.field;
        match &self.inner.decoder {
            DecoderKind::ReedSolomon { points } => Ok(rs::decode(field, points, self.inner.k, r, erasures)),
            DecoderKind::Identity => Ok(if erasures.is_empty() {
                DecodeOutcome::decoded(field, r, r.to_vec(), erasures)
            } else {
                DecodeOutcome::Failure
            }),
            DecoderKind::Exhaustive => oracle::oracle_sigma(self, r, erasures),
            DecoderKind::None => Err(CodecError::NoDecoder),
        }
    }

    fn ensure_enumerable(&self) -> Result<()> {
        let count = self.codeword_count();
        if count > ENUMERATION_CAP {
            return Err(CodecError::TooLargeToEnumerate { count: count as u128 });
        }
        Ok(())
    }

    /// Visits every codeword once, stopping early on `Break`.
    pub fn for_each_codeword(&self, mut visit: impl FnMut(&[Symbol]) -> ControlFlow<()>) -> Result<()> {
        self.ensure_enumerable()?;
        let n = self.inner.n;
        if self.codeword_count() <= DECODER_CAP {
            let list = self.inner.codewords.get_or_init(|| {
                let mut flat = Vec::with_capacity(self.codeword_count() as usize * n);
                self.stream_codewords(|c| {
                    flat.extend_from_slice(c);
                    ControlFlow::Continue(())
                });
                flat
            });
            for c in list.chunks(n) {
                if visit(c).is_break() {
                    break;
                }
            }
            return Ok(());
        }
        self.stream_codewords(visit);
        Ok(())
    }

    // Walks the GF(p)-span of {x^a * g_i} with a base-p counter, adding one
    // generator per counter digit that moves. A digit wrapping from p - 1 to
    // 0 also adds its generator, which cancels the p copies already added.
    fn stream_codewords(&self, mut visit: impl FnMut(&[Symbol]) -> ControlFlow<()>) {
        let field = &self.inner.field;
        let p = field.characteristic();
        let x = field.generator_x();
        let mut gens: Vec<Vec<Symbol>> = Vec::new();
        for i in 0..self.inner.k {
            let row = self.inner.generator.row(i);
            for a in 0..field.degree() {
                let scale = field.pow(x, a as u64);
                gens.push(matrix::vec_scale(field, scale, row));
            }
        }
        let mut digits = vec![0u32; gens.len()];
        let mut cur = vec![0; self.inner.n];
        loop {
            if visit(&cur).is_break() {
                return;
            }
            let mut j = 0;
            loop {
                if j == gens.len() {
                    return;
                }
                for (c, &g) in cur.iter_mut().zip(&gens[j]) {
                    *c = field.add(*c, g);
                }
                digits[j] += 1;
                if digits[j] == p {
                    digits[j] = 0;
                    j += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Minimum nonzero codeword weight by exhaustive enumeration.
    pub fn min_distance(&self) -> Result<usize> {
        let mut best = self.inner.n;
        self.for_each_codeword(|c| {
            let w = matrix::weight(c);
            if w > 0 && w < best {
                best = w;
            }
            if best == 1 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(best)
    }
}
