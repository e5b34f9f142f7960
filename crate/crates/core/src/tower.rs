//! The tower F_p ⊂ GF(q) ⊂ GF(q^n) ⊂ GF(q^{nr}).
//!
//! All three proper fields are built directly over F_p (degrees m, nm, nmr). The
//! inclusions are explicit [`Embedding`] tables; the GF(q) → GF(q^{nr}) inclusion is the
//! composite through GF(q^n), so the three maps always commute.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, make_elem, FieldCtx, FieldElem, Level, MAX_FIELD_SIZE};
use crate::poly::Poly;

/// Goppa parameters `(p, m, n, r)` with `q = p^m` and code length `N = q^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub r: u32,
}

impl Params {
    pub fn new(p: u32, m: u32, n: u32, r: u32) -> Result<Self> {
        let params = Params { p, m, n, r };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::InvalidParams(format!("p = {} is not prime", self.p)));
        }
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParams("m and n must be at least 1".into()));
        }
        if self.r < 2 {
            return Err(Error::InvalidParams(format!("r = {} but r >= 2 is required", self.r)));
        }
        let top = (self.m as u64)
            .checked_mul(self.n as u64)
            .and_then(|d| d.checked_mul(self.r as u64))
            .and_then(|d| u32::try_from(d).ok())
            .and_then(|d| (self.p as u64).checked_pow(d));
        match top {
            Some(size) if size <= MAX_FIELD_SIZE => Ok(()),
            _ => Err(Error::SizeGuard(format!(
                "GF({}^{}) exceeds {MAX_FIELD_SIZE} elements",
                self.p,
                self.m as u64 * self.n as u64 * self.r as u64
            ))),
        }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.m)
    }

    /// Code length `N = q^n`.
    pub fn length(&self) -> usize {
        self.q().pow(self.n) as usize
    }
}

/// Inclusion of one tower field into a larger one.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: Level,
    target: Level,
    image: FieldElem,
    table: Vec<u32>,
}

impl Embedding {
    /// Sends the source primitive element to the dlog-minimal root of the source modulus
    /// in the target.
    pub fn new(source: &FieldCtx, target: &FieldCtx) -> Result<Self> {
        if source.characteristic() != target.characteristic()
            || target.degree() % source.degree() != 0
        {
            return Err(Error::InvalidParams(format!(
                "GF({}^{}) does not embed in GF({}^{})",
                source.characteristic(),
                source.degree(),
                target.characteristic(),
                target.degree()
            )));
        }
        let modulus = source.modulus();
        let image = (1..=target.order() as i64)
            .map(|t| target.exp(t))
            .find(|&y| target.eval_prime_poly(modulus, y).is_zero())
            .ok_or_else(|| Error::Internal("source modulus has no root in target".into()))?;
        let table = source
            .elements()
            .map(|x| target.eval_prime_poly(&source.coeffs(x), image).value())
            .collect();
        Ok(Embedding { source: source.level(), target: target.level(), image, table })
    }

    fn compose(inner: &Embedding, outer: &Embedding, target: &FieldCtx) -> Self {
        let table = inner.table.iter().map(|&v| outer.table[v as usize]).collect();
        let image = target.elem(outer.table[inner.image.value() as usize]).expect("in range");
        Embedding { source: inner.source, target: outer.target, image, table }
    }

    pub fn source(&self) -> Level {
        self.source
    }

    pub fn target(&self) -> Level {
        self.target
    }

    /// Image of the source primitive element.
    pub fn image(&self) -> FieldElem {
        self.image
    }

    pub fn apply(&self, x: FieldElem) -> FieldElem {
        debug_assert_eq!(x.level(), self.source);
        make_elem(self.target, self.table[x.value() as usize])
    }

    fn inverse_table(&self, target_size: u32) -> Vec<u32> {
        let mut inv = vec![u32::MAX; target_size as usize];
        for (src, &tgt) in self.table.iter().enumerate() {
            inv[tgt as usize] = src as u32;
        }
        inv
    }
}

/// JSON form of a field element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemRepr {
    pub ctx: Level,
    pub coeffs: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDescription {
    pub ctx: Level,
    pub degree: u32,
    pub size: u32,
    pub modulus: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingDescription {
    pub source: Level,
    pub target: Level,
    pub image: ElemRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerDescription {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pub q: u32,
    #[serde(rename = "N")]
    pub length: usize,
    pub fields: Vec<FieldDescription>,
    pub embeddings: Vec<EmbeddingDescription>,
}

/// GF(q) ⊂ GF(q^n) ⊂ GF(q^{nr}) plus the prime field, with embeddings.
#[derive(Debug, Clone)]
pub struct Tower {
    params: Params,
    prime: FieldCtx,
    base: FieldCtx,
    mid: FieldCtx,
    top: FieldCtx,
    base_to_mid: Embedding,
    mid_to_top: Embedding,
    base_to_top: Embedding,
    top_to_mid: Vec<u32>,
    mid_to_base: Vec<u32>,
}

impl Tower {
    pub fn new(params: Params) -> Result<Self> {
        params.validate()?;
        let Params { p, m, n, r } = params;
        let prime = FieldCtx::new(p, 1, Level::Prime)?;
        let base = FieldCtx::new(p, m, Level::Base)?;
        let mid = FieldCtx::new(p, m * n, Level::Middle)?;
        let top = FieldCtx::new(p, m * n * r, Level::Top)?;
        let base_to_mid = Embedding::new(&base, &mid)?;
        let mid_to_top = Embedding::new(&mid, &top)?;
        let base_to_top = Embedding::compose(&base_to_mid, &mid_to_top, &top);
        let top_to_mid = mid_to_top.inverse_table(top.size());
        let mid_to_base = base_to_mid.inverse_table(mid.size());
        Ok(Tower {
            params,
            prime,
            base,
            mid,
            top,
            base_to_mid,
            mid_to_top,
            base_to_top,
            top_to_mid,
            mid_to_base,
        })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn q(&self) -> u32 {
        self.params.q()
    }

    /// Code length `N = q^n`.
    pub fn length(&self) -> usize {
        self.mid.size() as usize
    }

    pub fn prime(&self) -> &FieldCtx {
        &self.prime
    }

    /// GF(q).
    pub fn base(&self) -> &FieldCtx {
        &self.base
    }

    /// GF(q^n).
    pub fn mid(&self) -> &FieldCtx {
        &self.mid
    }

    /// GF(q^{nr}).
    pub fn top(&self) -> &FieldCtx {
        &self.top
    }

    pub fn ctx(&self, level: Level) -> &FieldCtx {
        match level {
            Level::Prime => &self.prime,
            Level::Base => &self.base,
            Level::Middle => &self.mid,
            Level::Top => &self.top,
        }
    }

    pub fn base_to_mid(&self) -> &Embedding {
        &self.base_to_mid
    }

    pub fn mid_to_top(&self) -> &Embedding {
        &self.mid_to_top
    }

    pub fn base_to_top(&self) -> &Embedding {
        &self.base_to_top
    }

    /// GF(q^n) → GF(q^{nr}).
    pub fn lift(&self, x: FieldElem) -> FieldElem {
        self.mid_to_top.apply(x)
    }

    /// Preimage of a GF(q^{nr}) element in GF(q^n), if it lies in the subfield.
    pub fn restrict(&self, x: FieldElem) -> Option<FieldElem> {
        debug_assert_eq!(x.level(), Level::Top);
        let v = self.top_to_mid[x.value() as usize];
        (v != u32::MAX).then(|| make_elem(Level::Middle, v))
    }

    /// Preimage of a GF(q^n) element in GF(q), if it lies in the subfield.
    pub fn restrict_to_base(&self, x: FieldElem) -> Option<FieldElem> {
        debug_assert_eq!(x.level(), Level::Middle);
        let v = self.mid_to_base[x.value() as usize];
        (v != u32::MAX).then(|| make_elem(Level::Base, v))
    }

    /// Number of q-Frobenius steps after which every element of `level` is fixed.
    pub fn frobenius_period(&self, level: Level) -> u32 {
        match level {
            Level::Prime | Level::Base => 1,
            Level::Middle => self.params.n,
            Level::Top => self.params.n * self.params.r,
        }
    }

    /// `x^{q^e}`, with `e` reduced modulo the Frobenius period of `x`'s field.
    pub fn frobenius(&self, x: FieldElem, e: i64) -> FieldElem {
        let level = x.level();
        if level == Level::Prime {
            return x;
        }
        let period = self.frobenius_period(level) as i64;
        let e = e.rem_euclid(period) as u32;
        self.ctx(level).pow_p_power(x, e * self.params.m)
    }

    /// `[GF(q^n)(α) : GF(q^n)]` for `α` in GF(q^{nr}).
    pub fn degree_over(&self, alpha: FieldElem) -> u32 {
        debug_assert_eq!(alpha.level(), Level::Top);
        let n = self.params.n as i64;
        (1..=self.params.r)
            .find(|&d| self.frobenius(alpha, n * d as i64) == alpha)
            .expect("α^{q^{nr}} = α")
    }

    /// `α, α^{q^n}, …, α^{q^{n(d-1)}}` for `d = degree_over(α)`.
    pub fn conjugates(&self, alpha: FieldElem) -> Vec<FieldElem> {
        let n = self.params.n as i64;
        (0..self.degree_over(alpha) as i64).map(|i| self.frobenius(alpha, n * i)).collect()
    }

    /// `∏ (x − α^{q^{ni}})` over GF(q^n); requires `degree_over(α) = r`.
    pub fn minimal_polynomial(&self, alpha: FieldElem) -> Result<Poly> {
        self.top.ensure(alpha)?;
        let d = self.degree_over(alpha);
        if d != self.params.r {
            return Err(Error::RootDegree { expected: self.params.r, found: d });
        }
        let top = &self.top;
        let product = self
            .conjugates(alpha)
            .into_iter()
            .fold(Poly::constant(top.one()), |acc, c| acc.mul(top, &Poly::linear_root(top, c)));
        product
            .try_map_coeffs(|c| self.restrict(c))
            .ok_or_else(|| Error::Internal("minimal polynomial not defined over GF(q^n)".into()))
    }

    pub fn to_repr(&self, x: FieldElem) -> ElemRepr {
        ElemRepr { ctx: x.level(), coeffs: self.ctx(x.level()).coeffs(x) }
    }

    pub fn from_repr(&self, repr: &ElemRepr) -> Result<FieldElem> {
        self.ctx(repr.ctx).from_coeffs(&repr.coeffs)
    }

    pub fn describe(&self) -> TowerDescription {
        let field = |f: &FieldCtx| FieldDescription {
            ctx: f.level(),
            degree: f.degree(),
            size: f.size(),
            modulus: f.modulus().to_vec(),
        };
        let emb = |e: &Embedding| EmbeddingDescription {
            source: e.source(),
            target: e.target(),
            image: self.to_repr(e.image()),
        };
        let Params { p, m, n, r } = self.params;
        TowerDescription {
            p,
            m,
            n,
            r,
            q: self.q(),
            length: self.length(),
            fields: vec![field(&self.base), field(&self.mid), field(&self.top)],
            embeddings: vec![emb(&self.base_to_mid), emb(&self.mid_to_top), emb(&self.base_to_top)],
        }
    }
}
