//! Brute-force reference decoders over the full codeword list.

use std::ops::ControlFlow;

use crate::code::{within_bound, DecodeOutcome, ErasureSet, LinearCode};
use crate::error::{CodecError, Result};
use crate::galois::Symbol;
use crate::matrix;

/// The exact error-and-erasure map: the unique codeword `c` with
/// `2 wt_E(r - c) + |E| < d`, or `Failure`.
///
/// Panics if two codewords satisfy the bound, which would contradict the
/// code's minimum distance.
pub fn oracle_sigma(code: &LinearCode, r: &[Symbol], erasures: &ErasureSet) -> Result<DecodeOutcome> {
    check_len(code, r)?;
    let d = code.require_distance()?;
    if erasures.size() >= d {
        code.for_each_codeword(|_| ControlFlow::Break(()))?;
        return Ok(DecodeOutcome::Failure);
    }
    let mut found: Option<Vec<Symbol>> = None;
    code.for_each_codeword(|c| {
        if within_bound(r, c, erasures, d) {
            assert!(found.is_none(), "two codewords inside the decoding bound");
            found = Some(c.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    Ok(match found {
        Some(c) => DecodeOutcome::decoded(code.field(), r, c, erasures),
        None => DecodeOutcome::Failure,
    })
}

/// All codewords at minimum Hamming distance from `r`, with that distance.
pub fn oracle_nearest(code: &LinearCode, r: &[Symbol]) -> Result<(Vec<Vec<Symbol>>, usize)> {
    check_len(code, r)?;
    let mut best = usize::MAX;
    let mut winners = Vec::new();
    code.for_each_codeword(|c| {
        let dist = matrix::distance(r, c);
        if dist < best {
            best = dist;
            winners.clear();
        }
        if dist == best {
            winners.push(c.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    Ok((winners, best))
}

/// The unique codeword within Hamming distance `radius` of `r`; no
/// codeword or several codewords in the ball give `Failure`.
pub fn oracle_radius(code: &LinearCode, r: &[Symbol], radius: usize) -> Result<DecodeOutcome> {
    check_len(code, r)?;
    let mut found: Option<Vec<Symbol>> = None;
    let mut ambiguous = false;
    code.for_each_codeword(|c| {
        if matrix::distance(r, c) <= radius {
            if found.is_some() {
                ambiguous = true;
                return ControlFlow::Break(());
            }
            found = Some(c.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    Ok(match found {
        Some(c) if !ambiguous => DecodeOutcome::decoded(code.field(), r, c, &ErasureSet::empty(r.len())),
        _ => DecodeOutcome::Failure,
    })
}

fn check_len(code: &LinearCode, r: &[Symbol]) -> Result<()> {
    if r.len() != code.n() {
        return Err(CodecError::LengthMismatch { expected: code.n(), found: r.len() });
    }
    Ok(())
}
