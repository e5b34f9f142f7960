//! Maximal irreducible Goppa codes `C(α)`.
//!
//! The support is all of GF(q^n) in the fixed order `(ε, ε², …, ε^{q^n−1}, 0)`; column
//! `c` (1-based) carries `ε^c` for `c < N` and column `N` carries `0`. Internally columns
//! are 0-based positions.

use serde::Serialize;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Dlog, FieldElem, Level};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::tower::{ElemRepr, Tower};

/// An ordering of the elements of GF(q^n) used as code support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationOrder {
    elements: Vec<FieldElem>,
    position: Vec<usize>,
}

impl EvaluationOrder {
    /// `(ε, ε², …, ε^{N−1} = 1, 0)`.
    pub fn standard(tower: &Tower) -> Self {
        let mid = tower.mid();
        let mut elements: Vec<FieldElem> = (1..=mid.order() as i64).map(|t| mid.exp(t)).collect();
        elements.push(mid.zero());
        Self::from_elements(elements)
    }

    fn from_elements(elements: Vec<FieldElem>) -> Self {
        let mut position = vec![usize::MAX; elements.len()];
        for (i, x) in elements.iter().enumerate() {
            position[x.value() as usize] = i;
        }
        EvaluationOrder { elements, position }
    }

    /// The order obtained by moving the element at position `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut elements = self.elements.clone();
        for (i, &x) in self.elements.iter().enumerate() {
            elements[perm[i]] = x;
        }
        Self::from_elements(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[FieldElem] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> FieldElem {
        self.elements[i]
    }

    /// 0-based position of a GF(q^n) element.
    pub fn position_of(&self, x: FieldElem) -> usize {
        self.position[x.value() as usize]
    }
}

/// 1-based column of `x` in the standard order: `dlog(x)` for `x ≠ 0`, `N` for `x = 0`.
pub fn standard_column(tower: &Tower, x: FieldElem) -> usize {
    match tower.mid().dlog(x) {
        Dlog::Power(t) => t as usize,
        Dlog::NegInfinity => tower.length(),
    }
}

/// The single parity row `(1/(α − ε_1), …, 1/(α − ε_N))` over GF(q^{nr}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityRow {
    alpha: FieldElem,
    entries: Vec<FieldElem>,
}

impl ParityRow {
    pub fn alpha(&self) -> FieldElem {
        self.alpha
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }
}

fn check_root(tower: &Tower, alpha: FieldElem) -> Result<()> {
    tower.top().ensure(alpha)?;
    let d = tower.degree_over(alpha);
    if d != tower.params().r {
        return Err(Error::RootDegree { expected: tower.params().r, found: d });
    }
    Ok(())
}

pub fn build_parity_row(tower: &Tower, alpha: FieldElem) -> Result<ParityRow> {
    build_parity_row_with_order(tower, alpha, &EvaluationOrder::standard(tower))
}

pub fn build_parity_row_with_order(
    tower: &Tower,
    alpha: FieldElem,
    order: &EvaluationOrder,
) -> Result<ParityRow> {
    check_root(tower, alpha)?;
    let top = tower.top();
    let entries = order
        .elements()
        .iter()
        .map(|&e| top.inv(top.sub(alpha, tower.lift(e))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParityRow { alpha, entries })
}

/// The GF(q)-kernel of a parity row, as a code in canonical generator form.
///
/// Each unknown `c_i ∈ GF(q)` is written as `Σ_j x_{ij} ε_q^j` with `x_{ij} ∈ F_p`, giving an
/// F_p-linear system of `nmr` equations in `mN` unknowns. Its solutions span the
/// (GF(q)-closed) kernel, which is then re-reduced over GF(q).
pub fn subfield_subcode(tower: &Tower, row: &ParityRow) -> LinearCode {
    let (prime, base, top) = (tower.prime(), tower.base(), tower.top());
    let m = base.degree() as usize;
    let big_d = top.degree() as usize;
    let n_cols = row.entries.len();
    let basis: Vec<FieldElem> =
        (0..m as i64).map(|j| tower.base_to_top().apply(base.pow(base.primitive(), j as u64))).collect();
    let mut system = Matrix::zeros(prime, big_d, m * n_cols);
    for (i, &h) in row.entries.iter().enumerate() {
        for (j, &b) in basis.iter().enumerate() {
            for (s, digit) in top.coeffs(top.mul(b, h)).into_iter().enumerate() {
                system.set(s, i * m + j, prime.from_prime(digit));
            }
        }
    }
    let kernel = system.kernel(prime);
    let rows = kernel
        .iter_rows()
        .map(|sol| {
            sol.chunks(m)
                .map(|digits| {
                    let d: Vec<u32> = digits.iter().map(|x| x.value()).collect();
                    base.from_coeffs(&d).expect("digits below p")
                })
                .collect()
        })
        .collect();
    LinearCode::from_rows(base, rows, n_cols)
}

/// Precomputed inverses `(x − ε_i)^{-1} mod g` for repeated membership tests.
#[derive(Debug, Clone)]
pub struct GoppaChecker {
    g: Poly,
    inverses: Vec<Poly>,
}

impl GoppaChecker {
    pub fn new(tower: &Tower, g: &Poly, order: &EvaluationOrder) -> Result<Self> {
        let mid = tower.mid();
        let inverses = order
            .elements()
            .iter()
            .map(|&e| Poly::linear_root(mid, e).inverse_mod(mid, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(GoppaChecker { g: g.clone(), inverses })
    }

    /// `Σ c_i (x − ε_i)^{-1} ≡ 0 (mod g)`.
    pub fn check(&self, tower: &Tower, codeword: &[FieldElem]) -> bool {
        if codeword.len() != self.inverses.len() {
            return false;
        }
        let mid = tower.mid();
        let sum = codeword.iter().zip(&self.inverses).fold(Poly::zero(), |acc, (&c, inv)| {
            if c.is_zero() {
                acc
            } else {
                acc.add(mid, &inv.scale(mid, tower.base_to_mid().apply(c)))
            }
        });
        sum.rem(mid, &self.g).map(|r| r.is_zero()).unwrap_or(false)
    }
}

/// Goppa membership by the defining congruence, with inverses from extended Euclid.
pub fn check_goppa_condition(
    tower: &Tower,
    codeword: &[FieldElem],
    g: &Poly,
    order: &EvaluationOrder,
) -> Result<bool> {
    Ok(GoppaChecker::new(tower, g, order)?.check(tower, codeword))
}

/// Membership by the `r` equations `Σ c_i / (α^{q^{nj}} − ε_i) = 0`, `0 ≤ j < r`.
pub fn check_r_equations(
    tower: &Tower,
    codeword: &[FieldElem],
    alpha: FieldElem,
    order: &EvaluationOrder,
) -> Result<bool> {
    check_root(tower, alpha)?;
    if codeword.len() != order.len() {
        return Ok(false);
    }
    let top = tower.top();
    let n = tower.params().n as i64;
    for j in 0..tower.params().r as i64 {
        let conj = tower.frobenius(alpha, n * j);
        let mut sum = top.zero();
        for (&c, &e) in codeword.iter().zip(order.elements()) {
            if c.is_zero() {
                continue;
            }
            let term = top.div(tower.base_to_top().apply(c), top.sub(conj, tower.lift(e)))?;
            sum = top.add(sum, term);
        }
        if !sum.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C(α)` together with the data it was built from.
#[derive(Debug, Clone)]
pub struct GoppaCode {
    pub alpha: FieldElem,
    pub g: Poly,
    pub row: ParityRow,
    pub code: LinearCode,
}

pub fn code_of_root(tower: &Tower, alpha: FieldElem) -> Result<GoppaCode> {
    let row = build_parity_row(tower, alpha)?;
    let g = tower.minimal_polynomial(alpha)?;
    let code = subfield_subcode(tower, &row);
    Ok(GoppaCode { alpha, g, row, code })
}

/// All `α ∈ GF(q^{nr})` of degree exactly `r` over GF(q^n), in dlog order.
pub fn root_set(tower: &Tower) -> Vec<FieldElem> {
    let top = tower.top();
    let r = tower.params().r;
    (1..=top.order() as i64)
        .map(|t| top.exp(t))
        .filter(|&a| tower.degree_over(a) == r)
        .collect()
}

/// JSON record for one code.
#[derive(Debug, Clone, Serialize)]
pub struct CodeRecord {
    pub alpha: ElemRepr,
    pub g: Vec<ElemRepr>,
    #[serde(rename = "N")]
    pub length: usize,
    pub k: usize,
    pub generator: Vec<Vec<u32>>,
    pub weight_enumerator: Vec<u64>,
    pub min_distance: Option<usize>,
}

impl CodeRecord {
    pub fn new(tower: &Tower, code: &GoppaCode) -> Result<Self> {
        let weights = code.code.weight_enumerator_auto(tower.base())?;
        let min_distance = weights.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(i, _)| i);
        Ok(CodeRecord {
            alpha: tower.to_repr(code.alpha),
            g: code.g.coeffs().iter().map(|&c| tower.to_repr(c)).collect(),
            length: code.code.length(),
            k: code.code.dim(),
            generator: code.code.generator_values(),
            weight_enumerator: weights,
            min_distance,
        })
    }
}

/// Sanity check used by callers that receive roots from outside.
pub fn is_root(tower: &Tower, alpha: FieldElem) -> bool {
    alpha.level() == Level::Top && tower.degree_over(alpha) == tower.params().r
}
