//! Dense univariate polynomials over a [`FieldCtx`].

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// Coefficients constant term first, with no trailing zeros. The zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        Poly::new(vec![c])
    }

    /// `x - a`
    pub fn linear_root(f: &FieldCtx, a: FieldElem) -> Self {
        Poly::new(vec![f.neg(a), f.one()])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self, f: &FieldCtx) -> bool {
        self.leading() == Some(f.one())
    }

    pub fn eval(&self, f: &FieldCtx, x: FieldElem) -> FieldElem {
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &FieldCtx, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(f.zero());
        Poly::new((0..len).map(|i| f.add(get(self, i), get(other, i))).collect())
    }

    pub fn sub(&self, f: &FieldCtx, other: &Poly) -> Poly {
        self.add(f, &other.scale(f, f.neg(f.one())))
    }

    pub fn scale(&self, f: &FieldCtx, c: FieldElem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, f: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(lead)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = f.sub(rem[k], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, f: &FieldCtx, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(f, divisor)?.1)
    }

    pub fn monic(&self, f: &FieldCtx) -> Result<Poly> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        Ok(self.scale(f, f.inv(lead)?))
    }

    /// Inverse of `self` modulo `modulus` by the extended Euclidean algorithm.
    pub fn inverse_mod(&self, f: &FieldCtx, modulus: &Poly) -> Result<Poly> {
        let (mut r0, mut r1) = (modulus.clone(), self.rem(f, modulus)?);
        let (mut s0, mut s1) = (Poly::zero(), Poly::constant(f.one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(f, &r1)?;
            let s = s0.sub(f, &q.mul(f, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is the gcd; it must be a nonzero constant.
        match r0.degree() {
            Some(0) => {
                let c = f.inv(r0.coeffs[0])?;
                s0.scale(f, c).rem(f, modulus)
            }
            _ => Err(Error::DivisionByZero),
        }
    }

    /// `self(a x + b)`.
    pub fn compose_affine(&self, f: &FieldCtx, a: FieldElem, b: FieldElem) -> Poly {
        let inner = Poly::new(vec![b, a]);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, &c| {
            acc.mul(f, &inner).add(f, &Poly::constant(c))
        })
    }

    /// Applies `map` to every coefficient.
    pub fn map_coeffs(&self, map: impl FnMut(FieldElem) -> FieldElem) -> Poly {
        Poly::new(self.coeffs.iter().copied().map(map).collect())
    }

    /// Coefficient-wise conversion into another field, failing if any coefficient has no image.
    pub fn try_map_coeffs(&self, map: impl FnMut(FieldElem) -> Option<FieldElem>) -> Option<Poly> {
        self.coeffs.iter().copied().map(map).collect::<Option<Vec<_>>>().map(Poly::new)
    }
}
