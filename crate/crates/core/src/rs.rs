//! Error-and-erasure decoding of Reed-Solomon codes.
//!
//! Erased coordinates are punctured away, the remaining `n' = n - |E|`
//! coordinates form an `[n', k]` RS code, and Gao's extended-Euclid decoder
//! corrects up to `(n' - k) / 2` errors there. The result is re-encoded on
//! all `n` points and checked against the decoding bound.

use crate::code::{within_bound, DecodeOutcome, ErasureSet};
use crate::galois::{Field, Symbol};
use crate::poly;

pub(crate) fn decode(field: &Field, points: &[Symbol], k: usize, r: &[Symbol], erasures: &ErasureSet) -> DecodeOutcome {
    let n = points.len();
    let d = n - k + 1;
    if erasures.size() >= d {
        return DecodeOutcome::Failure;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| !erasures.contains(i)).collect();
    let xs: Vec<Symbol> = keep.iter().map(|&i| points[i]).collect();
    let ys: Vec<Symbol> = keep.iter().map(|&i| r[i]).collect();
    let n_kept = keep.len();

    let g0 = poly::from_roots(field, &xs);
    let g1 = poly::interpolate(field, &xs, &ys);

    // Partial extended Euclid on (g0, g1), tracking only the g1 cofactor.
    let (mut r0, mut r1) = (g0, g1);
    let (mut v0, mut v1): (Vec<Symbol>, Vec<Symbol>) = (Vec::new(), vec![1]);
    while poly::degree(&r1).is_some_and(|deg| 2 * deg >= n_kept + k) {
        let (q, rem) = poly::divrem(field, &r0, &r1);
        let v2 = poly::sub(field, &v0, &poly::mul(field, &q, &v1));
        r0 = std::mem::replace(&mut r1, rem);
        v0 = std::mem::replace(&mut v1, v2);
    }
    let (f, rem) = poly::divrem(field, &r1, &v1);
    if !rem.is_empty() || f.len() > k {
        return DecodeOutcome::Failure;
    }
    let codeword: Vec<Symbol> = points.iter().map(|&x| poly::eval(field, &f, x)).collect();
    if !within_bound(r, &codeword, erasures, d) {
        return DecodeOutcome::Failure;
    }
    DecodeOutcome::decoded(field, r, codeword, erasures)
}
