//! Univariate polynomials over a [`Field`], little-endian coefficient vectors.
//!
//! The zero polynomial is the empty vector; results are always trimmed.

use crate::galois::{Field, Symbol};

pub type Poly = Vec<Symbol>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(a: &[Symbol]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(f: &Field, a: &[Symbol], b: &[Symbol]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(out)
}

pub fn sub(f: &Field, a: &[Symbol], b: &[Symbol]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(out)
}

pub fn mul(f: &Field, a: &[Symbol], b: &[Symbol]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder. Panics on division by the zero polynomial.
pub fn divrem(f: &Field, a: &[Symbol], b: &[Symbol]) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = f.inv(b[db]).expect("leading coefficient is nonzero");
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let shift = dr - db;
        let c = f.mul(rem[dr], lead_inv);
        quot[shift] = c;
        for (i, &bc) in b[..=db].iter().enumerate() {
            rem[shift + i] = f.sub(rem[shift + i], f.mul(c, bc));
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn eval(f: &Field, a: &[Symbol], x: Symbol) -> Symbol {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `prod (x - r)` over the given roots.
pub fn from_roots(f: &Field, roots: &[Symbol]) -> Poly {
    roots.iter().fold(vec![1], |acc, &r| mul(f, &acc, &[f.neg(r), 1]))
}

/// Lagrange interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
pub fn interpolate(f: &Field, xs: &[Symbol], ys: &[Symbol]) -> Poly {
    let mut out: Poly = Vec::new();
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi == 0 {
            continue;
        }
        let mut basis = vec![1];
        let mut denom = 1;
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            basis = mul(f, &basis, &[f.neg(xj), 1]);
            denom = f.mul(denom, f.sub(xi, xj));
        }
        let scale = f.div(yi, denom).expect("interpolation points are distinct");
        let term: Poly = basis.iter().map(|&c| f.mul(c, scale)).collect();
        out = add(f, &out, &term);
    }
    out
}
