//! Permutation equivalence of linear codes: invariants, an exact canonical labeling with
//! witness extraction, an exhaustive oracle for short codes, the orbit witnesses built
//! from `ρ`, and the classification of all maximal irreducible Goppa codes of a tower.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::actions::{Orbit, OrbitData};
use crate::code::{LinearCode, MAX_ENUM_DIM};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::goppa::code_of_root;
use crate::linalg::Matrix;
use crate::perms::{for_each_with_first, membership_in_fg, rho_map, perm_of_semiaffine, ColumnPerm};
use crate::tower::{ElemRepr, Params, Tower};

pub const MAX_EQUIV_LENGTH: usize = 64;
pub const MAX_BRUTE_FORCE_LENGTH: usize = 8;
/// Node budget of one canonical-labeling search.
pub const MAX_SEARCH_NODES: u64 = 20_000_000;
/// Largest `|P|` classified without `force`.
pub const MAX_CLASSIFY_POLYS: usize = 2_000;

/// Necessary conditions for permutation equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeInvariant {
    pub length: usize,
    pub dim: usize,
    pub weight_enumerator: Vec<u64>,
    /// Sorted multiset of column profiles.
    pub column_profiles: Vec<Vec<u64>>,
}

impl CodeInvariant {
    pub fn compute(f: &FieldCtx, code: &LinearCode) -> Result<Self> {
        check_guards(code)?;
        let mut column_profiles = column_profiles(f, &small_side(f, code))?;
        column_profiles.sort();
        Ok(CodeInvariant {
            length: code.length(),
            dim: code.dim(),
            weight_enumerator: code.weight_enumerator_auto(f)?,
            column_profiles,
        })
    }
}

fn check_guards(code: &LinearCode) -> Result<()> {
    if code.length() > MAX_EQUIV_LENGTH {
        return Err(Error::SizeGuard(format!("length {} exceeds {MAX_EQUIV_LENGTH}", code.length())));
    }
    if code.dim() > MAX_ENUM_DIM {
        return Err(Error::SizeGuard(format!("dimension {} exceeds {MAX_ENUM_DIM}", code.dim())));
    }
    Ok(())
}

/// Whichever of `C` and `C⊥` has the smaller dimension (`C` on ties). Both are carried to
/// their counterparts by the same permutations.
fn small_side(f: &FieldCtx, code: &LinearCode) -> LinearCode {
    if 2 * code.dim() <= code.length() {
        code.clone()
    } else {
        code.dual(f)
    }
}

/// For each column, the weight histogram of the codewords that are nonzero there.
fn column_profiles(f: &FieldCtx, code: &LinearCode) -> Result<Vec<Vec<u64>>> {
    let n = code.length();
    let mut profiles = vec![vec![0u64; n + 1]; n];
    for word in code.codewords(f)? {
        let w = word.iter().filter(|x| !x.is_zero()).count();
        for (c, x) in word.iter().enumerate() {
            if !x.is_zero() {
                profiles[c][w] += 1;
            }
        }
    }
    Ok(profiles)
}

/// The canonical form of a code: its length and dimension, together with the smallest
/// (over ordered information sets of the smaller of `C`, `C⊥`) sorted list of non-pivot
/// columns of the systematic generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub length: usize,
    pub dim: usize,
    pub columns: Vec<Vec<u32>>,
}

/// A canonical form with a permutation `π` such that `C·π` is the canonical code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    pub form: CanonicalForm,
    pub perm: ColumnPerm,
}

struct Search<'a> {
    f: &'a FieldCtx,
    k: usize,
    n: usize,
    first_allowed: Vec<bool>,
    best: Option<(Vec<Vec<u32>>, Vec<usize>)>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, m: &Matrix, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        if self.nodes > MAX_SEARCH_NODES {
            return;
        }
        let depth = chosen.len();
        if depth == self.k {
            self.leaf(m, chosen);
            return;
        }
        for c in 0..self.n {
            if chosen.contains(&c) || (depth == 0 && !self.first_allowed[c]) {
                continue;
            }
            let Some(r) = (depth..self.k).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            let mut next = m.clone();
            next.swap_rows(depth, r);
            next.pivot_on(self.f, depth, c);
            chosen.push(c);
            self.run(&next, chosen);
            chosen.pop();
        }
    }

    fn leaf(&mut self, m: &Matrix, chosen: &[usize]) {
        let mut rest: Vec<(Vec<u32>, usize)> = (0..self.n)
            .filter(|c| !chosen.contains(c))
            .map(|c| ((0..self.k).map(|r| m.get(r, c).value()).collect(), c))
            .collect();
        rest.sort();
        let better = match &self.best {
            None => true,
            Some((key, _)) => rest.iter().map(|(v, _)| v).lt(key.iter()),
        };
        if better {
            let order = chosen.iter().copied().chain(rest.iter().map(|&(_, c)| c)).collect();
            self.best = Some((rest.into_iter().map(|(v, _)| v).collect(), order));
        }
    }
}

/// Exact canonical labeling. The first pivot is restricted to the nonzero columns of
/// smallest profile, which is a labeling-independent choice.
pub fn canonical_labeling(f: &FieldCtx, code: &LinearCode) -> Result<Labeling> {
    check_guards(code)?;
    let side = small_side(f, code);
    let (k, n) = (side.dim(), side.length());
    let profiles = column_profiles(f, &side)?;
    let nonzero = |c: usize| (0..k).any(|r| !side.generator().get(r, c).is_zero());
    let min_profile = (0..n).filter(|&c| nonzero(c)).map(|c| &profiles[c]).min();
    let first_allowed = (0..n).map(|c| nonzero(c) && Some(&profiles[c]) == min_profile).collect();
    let mut search = Search { f, k, n, first_allowed, best: None, nodes: 0 };
    search.run(side.generator(), &mut Vec::with_capacity(k));
    if search.nodes > MAX_SEARCH_NODES {
        return Err(Error::SizeGuard(format!("canonical search exceeded {MAX_SEARCH_NODES} nodes")));
    }
    let (columns, order) = search.best.ok_or_else(|| Error::Internal("no information set".into()))?;
    let mut image = vec![0; n];
    for (pos, &c) in order.iter().enumerate() {
        image[c] = pos;
    }
    Ok(Labeling {
        form: CanonicalForm { length: code.length(), dim: code.dim(), columns },
        perm: ColumnPerm::from_image(image)?,
    })
}

/// Outcome of an equivalence test; the witness satisfies `C₂ = C₁·π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(ColumnPerm),
    NotEquivalent,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&ColumnPerm> {
        match self {
            Equivalence::Equivalent(w) => Some(w),
            Equivalence::NotEquivalent => None,
        }
    }
}

/// Whether `C₁·π = C₂`: every generator of `C₁`, moved by `π`, is a codeword of `C₂`, and the
/// dimensions agree, so the codeword sets coincide.
pub fn verify_witness(f: &FieldCtx, c1: &LinearCode, c2: &LinearCode, perm: &ColumnPerm) -> bool {
    c1.length() == c2.length()
        && perm.len() == c1.length()
        && c1.dim() == c2.dim()
        && c1.generator().iter_rows().all(|row| c2.contains(f, &crate::code::permute_word(row, perm.image())))
}

/// `C₂ = C₁·π` from two labelings.
fn witness_from(l1: &Labeling, l2: &Labeling) -> ColumnPerm {
    l2.perm.inverse().compose(&l1.perm)
}

pub fn are_perm_equivalent(f: &FieldCtx, c1: &LinearCode, c2: &LinearCode) -> Result<Equivalence> {
    check_guards(c1)?;
    check_guards(c2)?;
    if c1.length() != c2.length() || c1.dim() != c2.dim() {
        return Ok(Equivalence::NotEquivalent);
    }
    if CodeInvariant::compute(f, c1)? != CodeInvariant::compute(f, c2)? {
        return Ok(Equivalence::NotEquivalent);
    }
    let (l1, l2) = (canonical_labeling(f, c1)?, canonical_labeling(f, c2)?);
    if l1.form != l2.form {
        return Ok(Equivalence::NotEquivalent);
    }
    let w = witness_from(&l1, &l2);
    if !verify_witness(f, c1, c2, &w) {
        return Err(Error::Internal("canonical witness failed verification".into()));
    }
    Ok(Equivalence::Equivalent(w))
}

/// Scans all `N!` permutations and returns the lexicographically first witness.
pub fn brute_force_equiv(f: &FieldCtx, c1: &LinearCode, c2: &LinearCode) -> Result<Equivalence> {
    let n = c1.length();
    if n > MAX_BRUTE_FORCE_LENGTH || c2.length() > MAX_BRUTE_FORCE_LENGTH {
        return Err(Error::SizeGuard(format!("brute force needs N <= {MAX_BRUTE_FORCE_LENGTH}, got {n}")));
    }
    if n != c2.length() || c1.dim() != c2.dim() {
        return Ok(Equivalence::NotEquivalent);
    }
    let q = f.size() as usize;
    let index = |word: &[u32]| word.iter().rev().fold(0usize, |acc, &d| acc * q + d as usize);
    let mut in_c2 = vec![false; q.pow(n as u32)];
    for word in c2.codewords(f)? {
        in_c2[index(&word.iter().map(|x| x.value()).collect::<Vec<_>>())] = true;
    }
    let rows = c1.generator_values();
    let found = (0..n.max(1)).into_par_iter().find_map_first(|first| {
        if n == 0 {
            return Some(Vec::new());
        }
        let mut hit = None;
        let mut moved = vec![0u32; n];
        for_each_with_first(n, first, |perm| {
            if hit.is_some() {
                return;
            }
            let ok = rows.iter().all(|row| {
                for (i, &x) in row.iter().enumerate() {
                    moved[perm[i]] = x;
                }
                in_c2[index(&moved)]
            });
            if ok {
                hit = Some(perm.to_vec());
            }
        });
        hit
    });
    match found {
        Some(image) => {
            let w = ColumnPerm::from_image(image)?;
            if !verify_witness(f, c1, c2, &w) {
                return Err(Error::Internal("brute-force witness failed verification".into()));
            }
            Ok(Equivalence::Equivalent(w))
        }
        None => Ok(Equivalence::NotEquivalent),
    }
}

/// A random `[n, ≤k]` code from `k` uniformly random rows.
pub fn random_code<R: Rng>(rng: &mut R, f: &FieldCtx, n: usize, k: usize) -> LinearCode {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| f.elem(rng.gen_range(0..f.size())).expect("in range")).collect())
        .collect();
    LinearCode::from_rows(f, rows, n)
}

/// A uniformly random permutation of `0..n`.
pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> ColumnPerm {
    let mut image: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        image.swap(i, rng.gen_range(0..=i));
    }
    ColumnPerm::from_image(image).expect("shuffle is a permutation")
}

/// An ordered pair of roots of one orbit that did not get a verified `ρ` witness.
#[derive(Debug, Clone, Serialize)]
pub struct PairFailure {
    pub alpha: ElemRepr,
    pub beta: ElemRepr,
    pub reason: String,
    /// Verdict of the generic search for this pair.
    pub equivalent_by_search: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitWitnessReport {
    pub rep: ElemRepr,
    pub orbit_size: usize,
    pub pairs: usize,
    pub verified: usize,
    pub identity_witnesses: usize,
    pub all_in_fg: bool,
    pub failures: Vec<PairFailure>,
}

impl OrbitWitnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.all_in_fg && self.verified == self.pairs
    }
}

/// A witness `w` with `C(α)·w = C(β)` derived from the first compatible `(ζ, j)`
/// (ζ in dlog order, then `j`), or a reason for failure.
fn rho_witness(tower: &Tower, alpha: FieldElem, beta: FieldElem) -> std::result::Result<ColumnPerm, String> {
    let mid = tower.mid();
    let Params { n, r, .. } = tower.params();
    let compatible = (0..(n * r) as i64)
        .flat_map(|j| (1..=mid.order() as i64).map(move |e| (e, j)))
        .find_map(|(e, j)| rho_map(tower, mid.exp(e), j, alpha, beta).ok());
    let map = compatible.ok_or_else(|| "no compatible (ζ, j)".to_string())?;
    Ok(perm_of_semiaffine(tower, &map).inverse())
}

/// For every ordered pair of the orbit, checks that the `ρ` witness carries `C(α)` onto
/// `C(β)` and decodes into `AΓL(1,q^n)`.
pub fn verify_orbit_equivalence(tower: &Tower, orbit: &Orbit<FieldElem>) -> Result<OrbitWitnessReport> {
    let f = tower.base();
    let codes: Vec<LinearCode> = orbit
        .members
        .par_iter()
        .map(|&a| code_of_root(tower, a).map(|c| c.code))
        .collect::<Result<_>>()?;
    let results: Vec<(bool, bool, bool, Option<PairFailure>)> = (0..orbit.len() * orbit.len())
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / orbit.len(), idx % orbit.len());
            let (alpha, beta) = (orbit.members[i], orbit.members[j]);
            let failure = |reason: String| -> Result<(bool, bool, bool, Option<PairFailure>)> {
                let equivalent_by_search = are_perm_equivalent(f, &codes[i], &codes[j])?.is_equivalent();
                Ok((false, false, true, Some(PairFailure {
                    alpha: tower.to_repr(alpha),
                    beta: tower.to_repr(beta),
                    reason,
                    equivalent_by_search,
                })))
            };
            match rho_witness(tower, alpha, beta) {
                Err(reason) => failure(reason),
                Ok(w) if !verify_witness(f, &codes[i], &codes[j], &w) => failure("witness does not map C(α) onto C(β)".into()),
                Ok(w) => Ok((true, w.is_identity(), membership_in_fg(tower, &w).is_some(), None)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(OrbitWitnessReport {
        rep: tower.to_repr(orbit.rep()),
        orbit_size: orbit.len(),
        pairs: results.len(),
        verified: results.iter().filter(|r| r.0).count(),
        identity_witnesses: results.iter().filter(|r| r.1).count(),
        all_in_fg: results.iter().all(|r| r.2),
        failures: results.into_iter().filter_map(|r| r.3).collect(),
    })
}

/// One permutation-equivalence class of `Ω(q,n,r)`.
#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub rep_root: ElemRepr,
    pub k: usize,
    /// Number of distinct codes in the class.
    pub codes: usize,
    /// All roots in `S` whose code lies in the class, in dlog order.
    pub members: Vec<ElemRepr>,
    /// 1-based `w` with `C(rep)·w = C(member)`, aligned with `members`.
    pub witnesses: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub params: Params,
    #[serde(rename = "S_size")]
    pub s_size: usize,
    #[serde(rename = "P_size")]
    pub p_size: usize,
    pub distinct_codes: usize,
    pub orbit_count: usize,
    pub class_count: usize,
    pub gap: i64,
    pub correspondence: bool,
    pub classes: Vec<ClassEntry>,
}

impl Classification {
    pub const CSV_HEADER: &'static str = "p,m,n,r,|S|,|P|,orbit_count,class_count,gap";

    pub fn csv_row(&self) -> String {
        let Params { p, m, n, r } = self.params;
        format!(
            "{p},{m},{n},{r},{},{},{},{},{}",
            self.s_size, self.p_size, self.orbit_count, self.class_count, self.gap
        )
    }
}

/// Classifies `Ω(q,n,r)` up to permutation equivalence and compares with the `T`-orbits on
/// `S`. Fails with a falsification error if a class is not a union of orbits or if there
/// are more classes than orbits.
pub fn classify_omega(tower: &Tower, force: bool) -> Result<Classification> {
    let data = OrbitData::compute(tower)?;
    classify_with_orbits(tower, &data, force)
}

pub fn classify_with_orbits(tower: &Tower, data: &OrbitData, force: bool) -> Result<Classification> {
    if data.polys.len() > MAX_CLASSIFY_POLYS && !force {
        return Err(Error::SizeGuard(format!("|P| = {} exceeds {MAX_CLASSIFY_POLYS}", data.polys.len())));
    }
    let f = tower.base();
    let poly_codes: Vec<LinearCode> = (0..data.polys.len())
        .into_par_iter()
        .map(|i| code_of_root(tower, data.polys.root(i)).map(|c| c.code))
        .collect::<Result<_>>()?;
    let mut distinct: Vec<LinearCode> = Vec::new();
    let mut code_index: HashMap<LinearCode, usize> = HashMap::new();
    let code_of_poly: Vec<usize> = poly_codes
        .into_iter()
        .map(|c| {
            *code_index.entry(c.clone()).or_insert_with(|| {
                distinct.push(c);
                distinct.len() - 1
            })
        })
        .collect();
    let labelings: Vec<Labeling> = distinct.par_iter().map(|c| canonical_labeling(f, c)).collect::<Result<_>>()?;

    let poly_of_root = |alpha: FieldElem| -> Result<usize> {
        let g = tower.minimal_polynomial(alpha)?;
        data.polys.index_of(&g).ok_or_else(|| Error::Internal("root without polynomial".into()))
    };
    // classes keyed by form, ordered by their first root in dlog order
    let mut class_of_form: BTreeMap<&CanonicalForm, usize> = BTreeMap::new();
    let mut members: Vec<Vec<(FieldElem, usize)>> = Vec::new();
    let mut class_of_root: HashMap<FieldElem, usize> = HashMap::new();
    for &alpha in &data.roots {
        let code = code_of_poly[poly_of_root(alpha)?];
        let next = members.len();
        let class = *class_of_form.entry(&labelings[code].form).or_insert(next);
        if class == next {
            members.push(Vec::new());
        }
        members[class].push((alpha, code));
        class_of_root.insert(alpha, class);
    }

    for orbit in &data.s_orbits {
        let class = class_of_root[&orbit.rep()];
        if orbit.members.iter().any(|a| class_of_root[a] != class) {
            return Err(Error::Falsification(format!(
                "orbit of {:?} meets several equivalence classes",
                tower.to_repr(orbit.rep())
            )));
        }
    }

    let classes = members
        .iter()
        .map(|list| {
            let (rep_root, rep_code) = list[0];
            let mut codes: Vec<usize> = list.iter().map(|&(_, c)| c).collect();
            codes.sort_unstable();
            codes.dedup();
            let witnesses = list
                .iter()
                .map(|&(_, c)| {
                    let w = witness_from(&labelings[rep_code], &labelings[c]);
                    if !verify_witness(f, &distinct[rep_code], &distinct[c], &w) {
                        return Err(Error::Internal("class witness failed verification".into()));
                    }
                    Ok(w.to_one_based())
                })
                .collect::<Result<_>>()?;
            Ok(ClassEntry {
                rep_root: tower.to_repr(rep_root),
                k: distinct[rep_code].dim(),
                codes: codes.len(),
                members: list.iter().map(|&(a, _)| tower.to_repr(a)).collect(),
                witnesses,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (orbit_count, class_count) = (data.s_orbits.len(), classes.len());
    if class_count > orbit_count {
        return Err(Error::Falsification(format!("{class_count} classes exceed {orbit_count} orbits")));
    }
    Ok(Classification {
        params: tower.params(),
        s_size: data.roots.len(),
        p_size: data.polys.len(),
        distinct_codes: distinct.len(),
        orbit_count,
        class_count,
        gap: orbit_count as i64 - class_count as i64,
        correspondence: data.correspondence,
        classes,
    })
}
