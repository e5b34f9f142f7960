//! Prime-power fields GF(p^d) over F_p with log/antilog tables.
//!
//! Elements are stored by value as the base-p integer `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`
//! of their coordinates in the power basis of the modulus root. The modulus is the
//! lexicographically smallest primitive polynomial of degree `d` (coefficients compared
//! from `c_{d-1}` down to `c_0`), so the indeterminate's class is a primitive element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Which field of the tower a context represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    /// The prime field F_p.
    #[serde(rename = "p")]
    Prime,
    /// GF(q).
    #[serde(rename = "q")]
    Base,
    /// GF(q^n), the field of code locators.
    #[serde(rename = "qn")]
    Middle,
    /// GF(q^{nr}), the field holding the Goppa roots.
    #[serde(rename = "qnr")]
    Top,
}

impl Level {
    pub fn tag(self) -> &'static str {
        match self {
            Level::Prime => "p",
            Level::Base => "q",
            Level::Middle => "qn",
            Level::Top => "qnr",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "p" => Some(Level::Prime),
            "q" => Some(Level::Base),
            "qn" => Some(Level::Middle),
            "qnr" => Some(Level::Top),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An element of one of the tower fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    level: Level,
    value: u32,
}

impl FieldElem {
    pub fn level(self) -> Level {
        self.level
    }

    /// Base-p encoding of the coordinate vector.
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

/// Discrete logarithm with respect to the primitive element.
///
/// Exponents live in `1..=order`, so the element `1` has logarithm `order`
/// and zero maps to the distinguished `NegInfinity` slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dlog {
    NegInfinity,
    Power(u32),
}

/// GF(p^d) with the table machinery needed for exact arithmetic.
#[derive(Clone)]
pub struct FieldCtx {
    level: Level,
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("level", &self.level)
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn encode(p: u32, digits: &[u32]) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn decode_into(p: u32, mut value: u32, digits: &mut [u32]) {
    for d in digits.iter_mut() {
        *d = value % p;
        value /= p;
    }
}

/// Multiplies the residue `digits` by x modulo the monic `modulus` (constant term first,
/// leading 1 included).
fn mul_by_x(p: u32, modulus: &[u32], digits: &mut [u32]) {
    let d = digits.len();
    let top = digits[d - 1];
    for i in (1..d).rev() {
        digits[i] = (digits[i - 1] + (p - top) * modulus[i] % p) % p;
    }
    digits[0] = (p - top) * modulus[0] % p % p;
}

/// Builds the antilog table for `modulus` if its root is primitive.
fn primitive_exp_table(p: u32, modulus: &[u32]) -> Option<Vec<u32>> {
    let d = modulus.len() - 1;
    let size = (p as u64).pow(d as u32);
    let order = (size - 1) as usize;
    if modulus[0] == 0 {
        return None;
    }
    let mut exp = Vec::with_capacity(order);
    let mut digits = vec![0u32; d];
    digits[0] = 1;
    for i in 0..order {
        let v = encode(p, &digits);
        if i > 0 && v == 1 {
            return None;
        }
        exp.push(v);
        mul_by_x(p, modulus, &mut digits);
    }
    (encode(p, &digits) == 1).then_some(exp)
}

/// Lexicographically smallest primitive polynomial of degree `d` over F_p,
/// compared from the highest non-leading coefficient down.
pub fn smallest_primitive_modulus(p: u32, d: u32) -> Result<Vec<u32>> {
    find_primitive(p, d).map(|(m, _)| m)
}

fn find_primitive(p: u32, d: u32) -> Result<(Vec<u32>, Vec<u32>)> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("p = {p} is not prime")));
    }
    if d == 0 {
        return Err(Error::InvalidParams("field degree must be at least 1".into()));
    }
    let size = (p as u64).checked_pow(d).filter(|&s| s <= MAX_FIELD_SIZE).ok_or_else(|| {
        Error::SizeGuard(format!("GF({p}^{d}) exceeds {MAX_FIELD_SIZE} elements"))
    })?;
    let mut tail = vec![0u32; d as usize];
    for k in 0..size as u32 {
        decode_into(p, k, &mut tail);
        let mut modulus = tail.clone();
        modulus.push(1);
        if let Some(exp) = primitive_exp_table(p, &modulus) {
            return Ok((modulus, exp));
        }
    }
    Err(Error::Internal(format!("no primitive polynomial of degree {d} over F_{p}")))
}

impl FieldCtx {
    /// GF(p^d) with the canonical primitive modulus.
    pub fn new(p: u32, degree: u32, level: Level) -> Result<Self> {
        let (modulus, exp) = find_primitive(p, degree)?;
        let size = p.pow(degree);
        let mut log = vec![0u32; size as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        Ok(FieldCtx { level, p, degree, size, modulus, exp, log })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.size - 1
    }

    /// Monic modulus, constant term first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { level: self.level, value: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { level: self.level, value: 1 }
    }

    /// The residue class of the indeterminate.
    pub fn primitive(&self) -> FieldElem {
        self.exp(1)
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value >= self.size {
            return Err(Error::InvalidParams(format!(
                "value {value} out of range for a field of size {}",
                self.size
            )));
        }
        Ok(FieldElem { level: self.level, value })
    }

    /// Element from its coordinate vector, constant term first.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() != self.degree as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Decode(format!(
                "expected {} digits below {}, got {:?}",
                self.degree, self.p, coeffs
            )));
        }
        Ok(FieldElem { level: self.level, value: encode(self.p, coeffs) })
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut digits = vec![0; self.degree as usize];
        decode_into(self.p, x.value, &mut digits);
        digits
    }

    /// Every element, in value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(move |value| FieldElem { level: self.level, value })
    }

    pub fn ensure(&self, x: FieldElem) -> Result<()> {
        if x.level != self.level {
            return Err(Error::ContextMismatch {
                expected: self.level.to_string(),
                found: x.level.to_string(),
            });
        }
        Ok(())
    }

    #[inline]
    fn wrap(&self, value: u32) -> FieldElem {
        FieldElem { level: self.level, value }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert_eq!(a.level, self.level);
        debug_assert_eq!(b.level, self.level);
        let p = self.p;
        if p == 2 {
            return self.wrap(a.value ^ b.value);
        }
        if self.degree == 1 {
            return self.wrap((a.value + b.value) % p);
        }
        let (mut x, mut y) = (a.value, b.value);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        self.wrap(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        debug_assert_eq!(a.level, self.level);
        let p = self.p;
        if p == 2 {
            return a;
        }
        if self.degree == 1 {
            return self.wrap((p - a.value) % p);
        }
        let mut x = a.value;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        self.wrap(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert_eq!(a.level, self.level);
        debug_assert_eq!(b.level, self.level);
        if a.value == 0 || b.value == 0 {
            return self.zero();
        }
        let order = self.order() as u64;
        let e = (self.log[a.value as usize] as u64 + self.log[b.value as usize] as u64) % order;
        self.wrap(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        self.ensure(a)?;
        if a.value == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.order();
        let l = self.log[a.value as usize];
        Ok(self.wrap(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.ensure(a)?;
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn try_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_sub(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.sub(a, b))
    }

    pub fn try_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.ensure(a)?;
        self.ensure(b)?;
        Ok(self.mul(a, b))
    }

    /// `a^e` for a non-negative exponent; `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        debug_assert_eq!(a.level, self.level);
        if e == 0 {
            return self.one();
        }
        if a.value == 0 {
            return self.zero();
        }
        let order = self.order() as u64;
        let l = self.log[a.value as usize] as u64;
        let e = e % order;
        self.wrap(self.exp[((l * e) % order) as usize])
    }

    /// `a^{p^k}`.
    pub fn pow_p_power(&self, a: FieldElem, k: u32) -> FieldElem {
        let k = k % self.degree;
        let e = mod_pow(self.p as u64, k as u64, self.order().max(1) as u64);
        if a.value == 0 {
            return a;
        }
        // p^k mod order is 0 only when order is 1 (GF(2)).
        self.pow(a, if e == 0 { self.order() as u64 } else { e })
    }

    /// `ε^t` for any integer exponent.
    pub fn exp(&self, t: i64) -> FieldElem {
        let order = self.order() as i64;
        self.wrap(self.exp[t.rem_euclid(order) as usize])
    }

    pub fn dlog(&self, x: FieldElem) -> Dlog {
        debug_assert_eq!(x.level, self.level);
        if x.value == 0 {
            return Dlog::NegInfinity;
        }
        let l = self.log[x.value as usize];
        Dlog::Power(if l == 0 { self.order() } else { l })
    }

    /// Sort key following the logarithm order, with zero first.
    pub fn dlog_key(&self, x: FieldElem) -> u32 {
        match self.dlog(x) {
            Dlog::NegInfinity => 0,
            Dlog::Power(t) => t,
        }
    }

    /// Multiplicative order by direct iteration.
    pub fn multiplicative_order(&self, x: FieldElem) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cur = x;
        let mut k = 1;
        while cur != self.one() {
            cur = self.mul(cur, x);
            k += 1;
        }
        Ok(k)
    }

    /// Evaluates a polynomial with F_p coefficients (constant first) at `x`.
    pub fn eval_prime_poly(&self, coeffs: &[u32], x: FieldElem) -> FieldElem {
        coeffs.iter().rev().fold(self.zero(), |acc, &c| {
            let c = self.wrap(c % self.p);
            self.add(self.mul(acc, x), c)
        })
    }

    /// Embeds an F_p digit into this field.
    pub fn from_prime(&self, c: u32) -> FieldElem {
        self.wrap(c % self.p)
    }
}

pub(crate) fn make_elem(level: Level, value: u32) -> FieldElem {
    FieldElem { level, value }
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_modulus_is_x3_x_1() {
        assert_eq!(smallest_primitive_modulus(2, 3).unwrap(), vec![1, 1, 0, 1]);
    }

    // Naive polynomial arithmetic over F_p, independent of the table code.
    fn poly_mod(a: &[i64], f: &[i64], p: i64) -> Vec<i64> {
        let mut r: Vec<i64> = a.iter().map(|c| c.rem_euclid(p)).collect();
        let df = f.len() - 1;
        let lead_inv = (1..p).find(|x| (x * f[df]).rem_euclid(p) == 1).unwrap();
        while r.len() > df {
            let c = r.pop().unwrap() * lead_inv % p;
            let shift = r.len() - df;
            for i in 0..df {
                r[shift + i] = (r[shift + i] - c * f[i]).rem_euclid(p);
            }
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        r
    }

    fn poly_mulmod(a: &[i64], b: &[i64], f: &[i64], p: i64) -> Vec<i64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        poly_mod(&out, f, p)
    }

    fn naive_is_primitive(f: &[i64], p: i64) -> bool {
        let d = f.len() - 1;
        if f[0] == 0 {
            return false;
        }
        // irreducible: no monic factor of degree 1..=d/2
        for deg in 1..=d / 2 {
            for k in 0..p.pow(deg as u32) {
                let mut g: Vec<i64> = (0..deg).map(|i| k / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_mod(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        let order = p.pow(d as u32) - 1;
        let x_pow = |e: i64| {
            let mut acc = vec![1i64];
            let mut base = poly_mod(&[0, 1], f, p);
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, f, p);
                }
                base = poly_mulmod(&base, &base, f, p);
                e >>= 1;
            }
            acc
        };
        let mut m = order;
        let mut l = 2;
        while m > 1 {
            if m % l == 0 {
                if x_pow(order / l) == vec![1] {
                    return false;
                }
                while m % l == 0 {
                    m /= l;
                }
            }
            l += 1;
        }
        true
    }

    #[test]
    fn smallest_primitive_matches_naive_scan() {
        for (p, d) in [(2u32, 2u32), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (5, 1), (5, 2), (7, 1)] {
            let mut found = None;
            for k in 0..p.pow(d) {
                let mut m: Vec<i64> = (0..d).map(|i| (k / p.pow(i) % p) as i64).collect();
                m.push(1);
                if naive_is_primitive(&m, p as i64) {
                    found = Some(m.iter().map(|&c| c as u32).collect::<Vec<_>>());
                    break;
                }
            }
            assert_eq!(smallest_primitive_modulus(p, d).unwrap(), found.unwrap(), "p={p} d={d}");
        }
    }

    #[test]
    fn epsilon_cubed_in_gf8() {
        let f = FieldCtx::new(2, 3, Level::Middle).unwrap();
        let e = f.primitive();
        let e3 = f.pow(e, 3);
        assert_eq!(f.coeffs(e3), vec![1, 1, 0]);
        assert_eq!(f.mul(f.inv(e).unwrap(), e), f.one());
    }

    #[test]
    fn identities() {
        let f = FieldCtx::new(3, 2, Level::Middle).unwrap();
        for x in f.elements() {
            assert_eq!(f.mul(x, f.one()), x);
            assert_eq!(f.add(x, f.neg(x)), f.zero());
        }
    }

    #[test]
    fn dlog_conventions() {
        let f = FieldCtx::new(2, 3, Level::Middle).unwrap();
        assert_eq!(f.dlog(f.primitive()), Dlog::Power(1));
        assert_eq!(f.dlog(f.one()), Dlog::Power(7));
        assert_eq!(f.dlog(f.zero()), Dlog::NegInfinity);
        for t in 1..=7 {
            assert_eq!(f.dlog(f.exp(t)), Dlog::Power(t as u32));
        }
    }

    #[test]
    fn primitive_order_is_full() {
        for (p, d) in [(2, 1), (2, 3), (2, 6), (3, 4), (5, 2), (7, 2)] {
            let f = FieldCtx::new(p, d, Level::Top).unwrap();
            assert_eq!(f.multiplicative_order(f.primitive()).unwrap(), p.pow(d) - 1);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, d) in [(2, 2), (3, 1), (2, 3), (3, 2), (2, 4), (5, 1), (7, 1)] {
            let f = FieldCtx::new(p, d, Level::Middle).unwrap();
            let all: Vec<_> = f.elements().collect();
            for &x in &all {
                for &y in &all {
                    assert_eq!(f.add(x, y), f.add(y, x));
                    assert_eq!(f.mul(x, y), f.mul(y, x));
                    for &z in &all {
                        assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn errors() {
        let f = FieldCtx::new(2, 3, Level::Middle).unwrap();
        let g = FieldCtx::new(2, 6, Level::Top).unwrap();
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
        assert!(matches!(f.try_add(f.one(), g.one()), Err(Error::ContextMismatch { .. })));
        assert!(matches!(FieldCtx::new(4, 1, Level::Base), Err(Error::InvalidParams(_))));
    }
}
