//! Coordinates of GF(q^s) elements with respect to a fixed basis over GF(q).

use crate::error::{CodecError, Result};
use crate::galois::{make_field, Field, FieldElement, Symbol};
use crate::matrix::Matrix;

const TABLE_LIMIT: u64 = 1 << 16;

/// A big field GF(q^s), a base field GF(q) embedded in it, and a basis of
/// the big field over the base. Both fields must share the characteristic
/// and the base degree must divide the big degree.
#[derive(Clone, Debug)]
pub struct TowerView {
    big: Field,
    base: Field,
    s: usize,
    basis: Vec<Symbol>,
    // image of each base element in the big field
    embed: Vec<Symbol>,
    // inverse of the matrix whose rows are the prime-field digits of
    // rho^a * basis[i], row index i * m + a
    coords: Matrix,
    prime: Field,
    table: Option<Vec<Symbol>>,
}

impl TowerView {
    /// Uses the polynomial basis `1, x, ..., x^(s-1)` of the big field.
    pub fn new(big: &Field, base: &Field) -> Result<Self> {
        let s = Self::relative_degree(big, base)?;
        let x = big.generator_x();
        let basis: Vec<Symbol> = (0..s).map(|i| big.pow(x, i as u64)).collect();
        Self::with_basis(big, base, &basis)
    }

    fn relative_degree(big: &Field, base: &Field) -> Result<usize> {
        if big.characteristic() != base.characteristic() || !big.degree().is_multiple_of(base.degree()) {
            return Err(CodecError::InvalidParams(format!(
                "{base:?} is not a subfield of {big:?}"
            )));
        }
        Ok((big.degree() / base.degree()) as usize)
    }

    pub fn with_basis(big: &Field, base: &Field, basis: &[Symbol]) -> Result<Self> {
        let s = Self::relative_degree(big, base)?;
        if basis.len() != s {
            return Err(CodecError::InvalidParams(format!(
                "basis has {} elements, expected {s}",
                basis.len()
            )));
        }
        big.check_all(basis)?;
        let prime = make_field(big.characteristic(), 1, None)?;
        let m = base.degree() as usize;
        let rho = if base.degree() == 1 {
            1
        } else {
            find_root(big, base.modulus())?
        };
        let rho_pows: Vec<Symbol> = (0..m).map(|a| big.pow(rho, a as u64)).collect();
        let embed_one = |c: Symbol| -> Symbol {
            base.digits(c)
                .iter()
                .zip(&rho_pows)
                .fold(0, |acc, (&d, &r)| big.add(acc, big.mul(d, r)))
        };
        let embed: Vec<Symbol> = base.elements().map(embed_one).collect();
        let big_m = big.degree() as usize;
        let mut u = Matrix::zeros(big_m, big_m);
        for (i, &b) in basis.iter().enumerate() {
            for (a, &r) in rho_pows.iter().enumerate() {
                let digits = big.digits(big.mul(r, b));
                u.row_mut(i * m + a).copy_from_slice(&digits);
            }
        }
        let coords = u.inverse(&prime).map_err(|_| {
            CodecError::InvalidParams("basis is not linearly independent over the base field".into())
        })?;
        let mut view = TowerView {
            big: big.clone(),
            base: base.clone(),
            s,
            basis: basis.to_vec(),
            embed,
            coords,
            prime,
            table: None,
        };
        if big.order() <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(big.size() * s);
            for e in big.elements() {
                table.extend(view.solve(e));
            }
            view.table = Some(table);
        }
        Ok(view)
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    /// Extension degree s of the big field over the base.
    pub fn degree(&self) -> usize {
        self.s
    }

    pub fn basis(&self) -> &[Symbol] {
        &self.basis
    }

    /// Image of a base-field symbol inside the big field.
    pub fn embed(&self, c: Symbol) -> Symbol {
        self.embed[c as usize]
    }

    fn solve(&self, e: Symbol) -> Vec<Symbol> {
        let m = self.base.degree() as usize;
        let flat = self
            .coords
            .left_mul(&self.prime, &self.big.digits(e))
            .expect("digit vector has the big field degree");
        flat.chunks(m).map(|chunk| self.base.from_digits(chunk)).collect()
    }

    /// Coordinates of `e` in the basis, as `s` base-field symbols.
    pub fn expand(&self, e: Symbol) -> Vec<Symbol> {
        match &self.table {
            Some(t) => t[e as usize * self.s..(e as usize + 1) * self.s].to_vec(),
            None => self.solve(e),
        }
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn fold(&self, v: &[Symbol]) -> Symbol {
        v.iter()
            .zip(&self.basis)
            .fold(0, |acc, (&c, &b)| self.big.add(acc, self.big.mul(self.embed(c), b)))
    }

    pub fn to_base_vector(&self, e: &FieldElement) -> Result<Vec<FieldElement>> {
        if e.field() != &self.big {
            return Err(CodecError::FieldMismatch);
        }
        self.expand(e.value()).into_iter().map(|c| FieldElement::new(&self.base, c)).collect()
    }

    pub fn from_base_vector(&self, v: &[FieldElement]) -> Result<FieldElement> {
        if v.len() != self.s {
            return Err(CodecError::LengthMismatch { expected: self.s, found: v.len() });
        }
        if v.iter().any(|c| c.field() != &self.base) {
            return Err(CodecError::FieldMismatch);
        }
        let raw: Vec<Symbol> = v.iter().map(|c| c.value()).collect();
        FieldElement::new(&self.big, self.fold(&raw))
    }
}

fn find_root(big: &Field, poly: &[Symbol]) -> Result<Symbol> {
    big.elements()
        .find(|&y| crate::poly::eval(big, poly, y) == 0)
        .ok_or_else(|| CodecError::InvalidParams("base modulus has no root in the big field".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::prime_field;
    use proptest::prelude::*;

    #[test]
    fn zero_and_basis_elements() {
        let base = make_field(2, 2, None).unwrap();
        let big = make_field(2, 6, None).unwrap();
        let tv = TowerView::new(&big, &base).unwrap();
        assert_eq!(tv.degree(), 3);
        assert_eq!(tv.expand(0), vec![0, 0, 0]);
        for (i, &b) in tv.basis().iter().enumerate() {
            let mut unit = vec![0; 3];
            unit[i] = 1;
            assert_eq!(tv.expand(b), unit);
        }
    }

    #[test]
    fn prime_base_matches_digits() {
        let gf2 = prime_field(2).unwrap();
        let gf16 = make_field(2, 4, None).unwrap();
        let tv = TowerView::new(&gf16, &gf2).unwrap();
        for e in gf16.elements() {
            assert_eq!(tv.expand(e), gf16.digits(e));
        }
    }

    #[test]
    fn rejects_bad_pairs_and_dependent_basis() {
        let gf4 = make_field(2, 2, None).unwrap();
        let gf8 = make_field(2, 3, None).unwrap();
        assert!(TowerView::new(&gf8, &gf4).is_err());
        let gf2 = prime_field(2).unwrap();
        assert!(TowerView::with_basis(&gf4, &gf2, &[1, 1]).is_err());
        let tv = TowerView::with_basis(&gf4, &gf2, &[2, 3]).unwrap();
        for e in gf4.elements() {
            assert_eq!(tv.fold(&tv.expand(e)), e);
        }
        let e = gf4.element(1).unwrap();
        assert_eq!(TowerView::new(&gf4, &gf2).unwrap().to_base_vector(&gf8.element(1).unwrap()).unwrap_err(), CodecError::FieldMismatch);
        assert_eq!(tv.to_base_vector(&e).unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn roundtrip_and_linearity(
            pair in prop::sample::select(vec![(2u32, 1u32, 4u32), (2, 2, 4), (2, 2, 6), (3, 1, 3), (3, 2, 4), (2, 3, 12), (2, 2, 18)]),
            a in any::<u32>(), b in any::<u32>(), c in any::<u32>(),
        ) {
            let (p, m, big_m) = pair;
            let base = make_field(p, m, None).unwrap();
            let big = make_field(p, big_m, None).unwrap();
            let tv = TowerView::new(&big, &base).unwrap();
            let q = big.order() as u32;
            let (a, b, c) = (a % q, b % q, c % base.order() as u32);
            prop_assert_eq!(tv.fold(&tv.expand(a)), a);
            let lhs = tv.expand(big.add(big.mul(tv.embed(c), a), b));
            let ea = tv.expand(a);
            let eb = tv.expand(b);
            let rhs: Vec<Symbol> = ea.iter().zip(&eb).map(|(&x, &y)| base.add(base.mul(c, x), y)).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
