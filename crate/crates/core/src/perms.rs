//! Column permutations induced by `AΓL(1,q^n)`, the explicit permutation `ρ` linking two
//! parity rows, decoding of permutations back into semiaffine maps, parities and the
//! affine embedding into `AGL(nm, p)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::actions::SemiaffineMap;
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldElem};
use crate::goppa::{EvaluationOrder, ParityRow};
use crate::linalg::Matrix;
use crate::tower::{Params, Tower};

/// A permutation of `0..N`, sending position `i` to `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnPerm {
    image: Vec<usize>,
}

impl ColumnPerm {
    pub fn identity(len: usize) -> Self {
        ColumnPerm { image: (0..len).collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Decode(format!("not a permutation: {image:?}")));
            }
        }
        Ok(ColumnPerm { image })
    }

    /// From a 1-based image array.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        let zero: Option<Vec<usize>> = image.iter().map(|&i| i.checked_sub(1)).collect();
        Self::from_image(zero.ok_or_else(|| Error::Decode("1-based image contains 0".into()))?)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|&i| i + 1).collect()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ColumnPerm) -> ColumnPerm {
        assert_eq!(self.len(), other.len());
        ColumnPerm { image: other.image.iter().map(|&i| self.image[i]).collect() }
    }

    pub fn inverse(&self) -> ColumnPerm {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        ColumnPerm { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.image.iter().enumerate().filter(|&(i, &j)| i == j).count()
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut lengths = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// `+1` for even permutations, `−1` for odd ones.
    pub fn sign(&self) -> i8 {
        let cycles = self.cycle_type().len();
        if (self.len() - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Steps `perm` to its lexicographic successor; false once the last permutation is reached.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Calls `visit` on every permutation of `0..n` whose first entry is `first`.
pub fn for_each_with_first(n: usize, first: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&i| i != first)).collect();
    loop {
        visit(&perm);
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
}

/// The column permutation `c ↦ position of ψ(ε_c)` under the standard order.
pub fn perm_of_semiaffine(tower: &Tower, map: &SemiaffineMap) -> ColumnPerm {
    let order = EvaluationOrder::standard(tower);
    perm_of_semiaffine_in(tower, map, &order)
}

pub fn perm_of_semiaffine_in(tower: &Tower, map: &SemiaffineMap, order: &EvaluationOrder) -> ColumnPerm {
    let image = order.elements().iter().map(|&x| order.position_of(map.apply_field(tower, x))).collect();
    ColumnPerm { image }
}

/// A permutation recognised as an element of `AΓL(1,q^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgElement {
    pub map: SemiaffineMap,
    pub perm: ColumnPerm,
}

impl FgElement {
    /// True when the Frobenius part is trivial, i.e. the element lies in `AGL(1,q^n)`.
    pub fn is_affine(&self) -> bool {
        self.map.frob_exp() == 0
    }
}

/// Decodes `perm` as `x ↦ a x^{q^t} + b`: `b` is the image of 0, `a` the image of 1 minus
/// `b`, and each `t < n` is verified on all `N` points.
pub fn membership_in_fg(tower: &Tower, perm: &ColumnPerm) -> Option<FgElement> {
    let order = EvaluationOrder::standard(tower);
    if perm.len() != order.len() {
        return None;
    }
    let mid = tower.mid();
    let f = |x: FieldElem| order.get(perm.apply(order.position_of(x)));
    let b = f(mid.zero());
    let a = mid.sub(f(mid.one()), b);
    if a.is_zero() {
        return None;
    }
    (0..tower.params().n as i64).find_map(|t| {
        let map = SemiaffineMap::on_field(tower, a, b, t).ok()?;
        order
            .elements()
            .iter()
            .all(|&x| map.apply_field(tower, x) == f(x))
            .then(|| FgElement { map, perm: perm.clone() })
    })
}

/// The map `x ↦ ζ^{-1} x^{q^j} + δ` with `δ = α − ζ^{-1} β^{q^j}`, provided `δ ∈ GF(q^n)`.
pub fn rho_map(tower: &Tower, zeta: FieldElem, j: i64, alpha: FieldElem, beta: FieldElem) -> Result<SemiaffineMap> {
    let (mid, top) = (tower.mid(), tower.top());
    mid.ensure(zeta)?;
    top.ensure(alpha)?;
    top.ensure(beta)?;
    let zeta_inv = mid.inv(zeta).map_err(|_| Error::InvalidMap("ζ must be nonzero".into()))?;
    let delta_top = top.sub(alpha, top.mul(tower.lift(zeta_inv), tower.frobenius(beta, j)));
    let delta = tower
        .restrict(delta_top)
        .ok_or_else(|| Error::Incompatible("α − ζ^{-1}β^{q^j} does not lie in GF(q^n)".into()))?;
    SemiaffineMap::on_field(tower, zeta_inv, delta, j)
}

/// `ρ = τ_δ μ_{ζ^{-1}} σ^j`, the column permutation with `H_α[ρ(t)] = ζ·H_β[t]^{q^j}`.
pub fn build_rho(tower: &Tower, zeta: FieldElem, j: i64, alpha: FieldElem, beta: FieldElem) -> Result<ColumnPerm> {
    Ok(perm_of_semiaffine(tower, &rho_map(tower, zeta, j, alpha, beta)?))
}

/// `ζ·H^{q^j}` entrywise.
pub fn twisted_row(tower: &Tower, row: &ParityRow, zeta: FieldElem, j: i64) -> Vec<FieldElem> {
    let top = tower.top();
    row.entries().iter().map(|&h| top.mul(tower.lift(zeta), tower.frobenius(h, j))).collect()
}

/// Whether `row[ρ(t)] = target[t]` for every column `t`.
pub fn maps_row_onto(perm: &ColumnPerm, row: &[FieldElem], target: &[FieldElem]) -> bool {
    row.len() == target.len() && target.iter().enumerate().all(|(t, &x)| row[perm.apply(t)] == x)
}

/// Every permutation of the columns with `row[ρ(t)] = target[t]`, by scanning all `N!`
/// candidates. Only for `N ≤ 8`.
pub fn exhaustive_row_matches(row: &[FieldElem], target: &[FieldElem]) -> Result<Vec<ColumnPerm>> {
    let n = row.len();
    if n > 8 || n != target.len() {
        return Err(Error::SizeGuard(format!("exhaustive scan needs N <= 8, got {n}")));
    }
    let mut found: Vec<ColumnPerm> = (0..n)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut hits = Vec::new();
            for_each_with_first(n, first, |perm| {
                if (0..n).all(|t| row[perm[t]] == target[t]) {
                    hits.push(ColumnPerm { image: perm.to_vec() });
                }
            });
            hits
        })
        .collect();
    found.sort();
    Ok(found)
}

/// Splits a prime power `q` into `(p, m)`.
pub fn prime_power(q: u32) -> Result<(u32, u32)> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    Ok((p, m))
}

/// Tower whose middle field is GF(q^n); the top field is only used as scaffolding.
pub fn field_tower(q: u32, n: u32) -> Result<Tower> {
    let (p, m) = prime_power(q)?;
    Tower::new(Params::new(p, m, n, 2)?)
}

/// One row of the parity table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityRecord {
    pub q: u32,
    pub n: u32,
    pub generator: &'static str,
    pub cycle_type: Vec<usize>,
    pub sign: i8,
}

/// Cycle types and signs of the column permutations of `τ_ε`, `μ_ε` and `σ`.
pub fn generator_parities(q: u32, n: u32) -> Result<Vec<ParityRecord>> {
    let tower = field_tower(q, n)?;
    let names = ["mu_eps", "tau_eps", "sigma"];
    Ok(SemiaffineMap::generators(&tower, n)
        .iter()
        .zip(names)
        .map(|(g, name)| {
            let perm = perm_of_semiaffine(&tower, g);
            ParityRecord { q, n, generator: name, cycle_type: perm.cycle_type(), sign: perm.sign() }
        })
        .collect())
}

/// Whether every generator of `AΓL(1,q^n)` acts as an even permutation.
pub fn fg_in_alternating(q: u32, n: u32) -> Result<bool> {
    Ok(generator_parities(q, n)?.iter().all(|r| r.sign == 1))
}

/// An element of `AGL(d, p)`: `x ↦ Mx + v` on F_p-coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineRep {
    pub p: u32,
    /// Row-major `d × d` matrix over F_p.
    pub matrix: Vec<Vec<u32>>,
    pub translation: Vec<u32>,
}

impl AffineRep {
    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, &v)| {
                let s = row.iter().zip(x).fold(v as u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineRep) -> AffineRep {
        let d = self.dim();
        let p = self.p as u64;
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| ((0..d).map(|k| self.matrix[i][k] as u64 * other.matrix[k][j] as u64).sum::<u64>() % p) as u32)
                    .collect()
            })
            .collect();
        AffineRep { p: self.p, matrix, translation: self.apply(&other.translation) }
    }

    pub fn is_translation(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &a)| a == u32::from(i == j)))
    }
}

/// Writes `ψ` as an affine map of `F_p^{nm}` in the power basis of GF(q^n), and checks the
/// result on every point.
pub fn affine_embed(tower: &Tower, map: &SemiaffineMap) -> Result<AffineRep> {
    let (mid, prime) = (tower.mid(), tower.prime());
    let d = mid.degree() as usize;
    let p = mid.characteristic();
    let linear = |x: FieldElem| mid.sub(map.apply_field(tower, x), map.shift());
    let columns: Vec<Vec<u32>> = (0..d).map(|j| mid.coeffs(linear(mid.elem(p.pow(j as u32)).expect("basis")))).collect();
    let matrix: Vec<Vec<u32>> = (0..d).map(|i| (0..d).map(|j| columns[j][i]).collect()).collect();
    let rep = AffineRep { p, matrix, translation: mid.coeffs(map.shift()) };
    for x in mid.elements() {
        if rep.apply(&mid.coeffs(x)) != mid.coeffs(map.apply_field(tower, x)) {
            return Err(Error::Internal("semiaffine map is not F_p-affine".into()));
        }
    }
    let m = Matrix::from_rows(
        rep.matrix.iter().map(|row| row.iter().map(|&a| prime.from_prime(a)).collect()).collect(),
        d,
    );
    if m.rank(prime) != d {
        return Err(Error::Internal("linear part is singular".into()));
    }
    Ok(rep)
}
