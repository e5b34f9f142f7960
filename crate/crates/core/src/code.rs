//! Linear codes over GF(q) stored by their canonical generator matrix.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::linalg::Matrix;

/// Largest dimension for which codewords are enumerated.
pub const MAX_ENUM_DIM: usize = 24;

/// A linear `[N, k]` code. The generator is kept in reduced row-echelon form with
/// leftmost pivots, which is unique for the row space, so equality of values is
/// equality of codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    length: usize,
    generator: Matrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    pub fn from_generator(f: &FieldCtx, mut generator: Matrix) -> Self {
        let pivots = generator.rref(f);
        generator.truncate_zero_rows();
        LinearCode { length: generator.cols(), generator, pivots }
    }

    pub fn from_rows(f: &FieldCtx, rows: Vec<Vec<FieldElem>>, length: usize) -> Self {
        Self::from_generator(f, Matrix::from_rows(rows, length))
    }

    /// The zero code `{0}` of the given length.
    pub fn zero(f: &FieldCtx, length: usize) -> Self {
        Self::from_generator(f, Matrix::zeros(f, 0, length))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row-major generator values.
    pub fn generator_values(&self) -> Vec<Vec<u32>> {
        self.generator.iter_rows().map(|r| r.iter().map(|x| x.value()).collect()).collect()
    }

    pub fn contains(&self, f: &FieldCtx, word: &[FieldElem]) -> bool {
        if word.len() != self.length {
            return false;
        }
        let mut w = word.to_vec();
        for (i, &c) in self.pivots.iter().enumerate() {
            let factor = w[c];
            if factor.is_zero() {
                continue;
            }
            for (j, &g) in self.generator.row(i).iter().enumerate() {
                w[j] = f.sub(w[j], f.mul(factor, g));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Encodes the message `msg` (length k).
    pub fn encode(&self, f: &FieldCtx, msg: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = vec![f.zero(); self.length];
        for (row, &m) in self.generator.iter_rows().zip(msg) {
            if m.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        out
    }

    /// All `q^k` codewords, messages in base-q counting order.
    pub fn codewords<'a>(&'a self, f: &'a FieldCtx) -> Result<impl Iterator<Item = Vec<FieldElem>> + 'a> {
        let k = self.dim();
        if k > MAX_ENUM_DIM {
            return Err(Error::SizeGuard(format!("dimension {k} above enumeration guard {MAX_ENUM_DIM}")));
        }
        let q = f.size() as u64;
        let count = q.checked_pow(k as u32).ok_or_else(|| Error::SizeGuard("too many codewords".into()))?;
        Ok((0..count).map(move |mut idx| {
            let msg: Vec<FieldElem> = (0..k)
                .map(|_| {
                    let v = (idx % q) as u32;
                    idx /= q;
                    f.elem(v).expect("digit in range")
                })
                .collect();
            self.encode(f, &msg)
        }))
    }

    /// Number of codewords of each Hamming weight, by direct enumeration.
    pub fn weight_enumerator(&self, f: &FieldCtx) -> Result<Vec<u64>> {
        let mut w = vec![0u64; self.length + 1];
        for word in self.codewords(f)? {
            w[word.iter().filter(|x| !x.is_zero()).count()] += 1;
        }
        Ok(w)
    }

    /// Weight enumerator computed from whichever of the code and its dual is smaller,
    /// using the MacWilliams transform in the latter case.
    pub fn weight_enumerator_auto(&self, f: &FieldCtx) -> Result<Vec<u64>> {
        if self.dim() <= self.length - self.dim() {
            return self.weight_enumerator(f);
        }
        let dual = self.dual(f);
        macwilliams(&dual.weight_enumerator(f)?, f.size() as u64, dual.dim())
    }

    /// Minimum nonzero weight; `None` for the zero code.
    pub fn min_distance(&self, f: &FieldCtx) -> Result<Option<usize>> {
        let w = self.weight_enumerator_auto(f)?;
        Ok(w.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(i, _)| i))
    }

    /// Moves coordinate `i` to position `perm[i]`.
    pub fn permute(&self, f: &FieldCtx, perm: &[usize]) -> LinearCode {
        assert_eq!(perm.len(), self.length);
        let rows = self
            .generator
            .iter_rows()
            .map(|row| permute_word(row, perm))
            .collect();
        LinearCode::from_rows(f, rows, self.length)
    }

    /// The dual code under the standard inner product.
    pub fn dual(&self, f: &FieldCtx) -> LinearCode {
        LinearCode::from_generator(f, self.generator.kernel(f))
    }
}

/// `out[perm[i]] = word[i]`.
pub fn permute_word(word: &[FieldElem], perm: &[usize]) -> Vec<FieldElem> {
    let mut out = word.to_vec();
    for (i, &x) in word.iter().enumerate() {
        out[perm[i]] = x;
    }
    out
}

fn binom(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Weight distribution of `C` from that of its dual (`dual_dim = dim C⊥`).
pub fn macwilliams(dual_weights: &[u64], q: u64, dual_dim: usize) -> Result<Vec<u64>> {
    let n = dual_weights.len() as u64 - 1;
    let overflow = || Error::SizeGuard("MacWilliams transform overflow".into());
    let dual_size = (q as i128).checked_pow(dual_dim as u32).ok_or_else(overflow)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let mut acc: i128 = 0;
        for (j, &b) in dual_weights.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let j = j as u64;
            let mut k: i128 = 0;
            for s in 0..=i.min(j) {
                let sign = if s % 2 == 0 { 1 } else { -1 };
                let term = ((q - 1) as i128)
                    .checked_pow((i - s) as u32)
                    .and_then(|v| v.checked_mul(binom(j, s)))
                    .and_then(|v| v.checked_mul(binom(n - j, i - s)))
                    .ok_or_else(overflow)?;
                k = k.checked_add(sign * term).ok_or_else(overflow)?;
            }
            acc = acc.checked_add(k.checked_mul(b as i128).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        if acc % dual_size != 0 || acc < 0 {
            return Err(Error::Internal("MacWilliams transform is not integral".into()));
        }
        out.push((acc / dual_size) as u64);
    }
    Ok(out)
}
