//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored in polynomial basis and packed into a single integer
//! with little-endian base-p digits, so `x^2 + 1` in GF(8) is `0b101 = 5`.
//! Fields with at most 256 elements precompute full operation tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CodecError, Result};

/// A field element in packed integer form. Only meaningful together with a [`Field`].
pub type Symbol = u32;

const TABLE_LIMIT: u64 = 256;
const MAX_ORDER: u64 = 1 << 32;

struct Tables {
    add: Vec<Symbol>,
    mul: Vec<Symbol>,
    neg: Vec<Symbol>,
    inv: Vec<Symbol>,
}

struct FieldInner {
    p: u32,
    m: u32,
    q: u64,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Handle to a finite field GF(p^m). Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

/// JSON form of a field: `{"p": 2, "m": 3, "modulus": [1, 1, 0, 1]}`.
///
/// A missing or null modulus selects the smallest irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        make_field(self.p, self.m, self.modulus.as_deref())
    }
}

/// Builds GF(p^m). `modulus` holds `m + 1` little-endian coefficients of a
/// monic irreducible polynomial; `None` picks the smallest one in the order
/// of the packed integer value of its lower coefficients.
pub fn make_field(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
    if !is_prime(p) {
        return Err(CodecError::NotPrime(p));
    }
    if m == 0 {
        return Err(CodecError::InvalidField("extension degree must be at least 1".into()));
    }
    let q = (p as u64).checked_pow(m).filter(|&q| q < MAX_ORDER).ok_or_else(|| {
        CodecError::InvalidField(format!("field order {p}^{m} exceeds 2^32 - 1"))
    })?;
    let modulus = match modulus {
        Some(coeffs) => {
            if coeffs.len() != m as usize + 1 {
                return Err(CodecError::InvalidField(format!(
                    "modulus must have {} coefficients, got {}",
                    m + 1,
                    coeffs.len()
                )));
            }
            if coeffs.iter().any(|&c| c >= p) {
                return Err(CodecError::InvalidField("modulus coefficient out of range".into()));
            }
            if coeffs[m as usize] != 1 {
                return Err(CodecError::InvalidField("modulus must be monic".into()));
            }
            if !is_irreducible(coeffs, p) {
                return Err(CodecError::ReducibleModulus);
            }
            coeffs.to_vec()
        }
        None => smallest_irreducible(p, m),
    };
    let mut inner = FieldInner { p, m, q, modulus, tables: None };
    if q <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(Field { inner: Arc::new(inner) })
}

/// GF(p) for a prime p.
pub fn prime_field(p: u32) -> Result<Field> {
    make_field(p, 1, None)
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let mut lower = 0u64;
    loop {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut v = lower;
        for _ in 0..m {
            coeffs.push((v % p as u64) as u32);
            v /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
        lower += 1;
    }
}

// Dense polynomial helpers over GF(p), little-endian, used only for the
// irreducibility test.
fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmod(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = ptrim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = mod_pow(f[df], p - 2, p);
    while r.len() > df {
        let shift = r.len() - 1 - df;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &fc) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fc % p) % p;
        }
        r = ptrim(r);
    }
    r
}

fn pmulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    pmod(&out, f, p)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = ptrim(a.to_vec());
    let mut b = ptrim(b.to_vec());
    while !b.is_empty() {
        let r = pmod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Ben-Or test: a monic `f` of degree m is irreducible iff
/// `gcd(f, x^(p^i) - x) = 1` for every `1 <= i <= m/2`.
fn is_irreducible(coeffs: &[u32], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut h = pmod(&x, &f, p);
    for _ in 0..m / 2 {
        // h <- h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pmulmod(&acc, &base, &f, p);
            }
            base = pmulmod(&base, &base, &f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = pgcd(&f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn build_tables(f: &FieldInner) -> Tables {
    let q = f.q as usize;
    let mut add = vec![0; q * q];
    let mut mul = vec![0; q * q];
    let mut neg = vec![0; q];
    let mut inv = vec![0; q];
    for a in 0..q {
        neg[a] = f.slow_neg(a as Symbol);
        for b in 0..q {
            add[a * q + b] = f.slow_add(a as Symbol, b as Symbol);
            let prod = f.slow_mul(a as Symbol, b as Symbol);
            mul[a * q + b] = prod;
            if prod == 1 {
                inv[a] = b as Symbol;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

impl FieldInner {
    fn digits(&self, mut x: Symbol) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        for d in out.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> Symbol {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p as u64 + d as u64) as Symbol
    }

    fn slow_add(&self, a: Symbol, b: Symbol) -> Symbol {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p as u64) as Symbol;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    fn slow_neg(&self, a: Symbol) -> Symbol {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.pack(&d)
    }

    fn slow_mul(&self, a: Symbol, b: Symbol) -> Symbol {
        let p = self.p as u64;
        if self.m == 1 {
            return (a as u64 * b as u64 % p) as Symbol;
        }
        let m = self.m as usize;
        if self.p == 2 {
            let mut prod = 0u64;
            for i in 0..m {
                if (b >> i) & 1 == 1 {
                    prod ^= (a as u64) << i;
                }
            }
            let mut poly = 0u64;
            for (i, &c) in self.modulus.iter().enumerate() {
                poly |= (c as u64) << i;
            }
            for i in (m..2 * m).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= poly << (i - m);
                }
            }
            return prod as Symbol;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for (t, &mc) in self.modulus.iter().enumerate() {
                prod[i - m + t] = (prod[i - m + t] + p - c * mc as u64 % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.pack(&digits)
    }
}

impl Field {
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// Number of elements q = p^m.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// `q` as a `usize`, for sizing tables and loops.
    pub fn size(&self) -> usize {
        self.inner.q as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.inner.p, m: self.inner.m, modulus: Some(self.inner.modulus.clone()) }
    }

    pub fn contains(&self, x: Symbol) -> bool {
        (x as u64) < self.inner.q
    }

    pub fn check(&self, x: Symbol) -> Result<Symbol> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(CodecError::ElementOutOfRange { value: x as u64, order: self.inner.q })
        }
    }

    pub fn check_all(&self, xs: &[Symbol]) -> Result<()> {
        xs.iter().try_for_each(|&x| self.check(x).map(|_| ()))
    }

    /// Coefficients of `x` in the polynomial basis, little-endian.
    pub fn digits(&self, x: Symbol) -> Vec<u32> {
        self.inner.digits(x)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Symbol {
        self.inner.pack(digits)
    }

    /// The element `x` of the polynomial basis (the class of the indeterminate).
    pub fn generator_x(&self) -> Symbol {
        if self.inner.m == 1 {
            // x is congruent to -modulus[0] in GF(p)[x]/(x + c)
            self.neg(self.inner.modulus[0])
        } else {
            self.inner.p
        }
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.inner.tables {
            Some(t) => t.add[a as usize * self.inner.q as usize + b as usize],
            None => self.inner.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Symbol) -> Symbol {
        match &self.inner.tables {
            Some(t) => t.neg[a as usize],
            None => self.inner.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        match &self.inner.tables {
            Some(t) => t.mul[a as usize * self.inner.q as usize + b as usize],
            None => self.inner.slow_mul(a, b),
        }
    }

    pub fn pow(&self, mut base: Symbol, mut exp: u64) -> Symbol {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(CodecError::DivisionByZero);
        }
        Ok(match &self.inner.tables {
            Some(t) => t.inv[a as usize],
            None => self.pow(a, self.inner.q - 2),
        })
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Embeds an integer into the prime subfield (`n mod p`).
    pub fn from_int(&self, n: i64) -> Symbol {
        n.rem_euclid(self.inner.p as i64) as Symbol
    }

    pub fn elements(&self) -> impl Iterator<Item = Symbol> {
        0..self.inner.q as Symbol
    }

    pub fn element(&self, value: Symbol) -> Result<FieldElement> {
        FieldElement::new(self, value)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.inner.p, self.inner.m, self.inner.modulus)
    }
}

/// A field element that remembers its field, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Symbol,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

impl FieldElement {
    pub fn new(field: &Field, value: Symbol) -> Result<Self> {
        field.check(value)?;
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Symbol {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(CodecError::FieldMismatch)
        }
    }

    fn with(&self, value: Symbol) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({}^{})", self.value, self.field.characteristic(), self.field.degree())
    }
}

/// Applies `op` to `a` and `b`. The unary operations `Inv` and `Neg` act on
/// `a` alone, but `b` must still come from the same field.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.checked_add(b),
        FieldOp::Sub => a.checked_sub(b),
        FieldOp::Mul => a.checked_mul(b),
        FieldOp::Div => a.checked_div(b),
        FieldOp::Inv => {
            a.same_field(b)?;
            a.inv()
        }
        FieldOp::Neg => {
            a.same_field(b)?;
            Ok(a.neg())
        }
    }
}
