//! Semiaffine maps `x ↦ a·x^{q^t} + b` and their actions on roots (the group
//! `T = AGL(1,q^n)⟨σ⟩`, exponent mod `nr`), on irreducible polynomials (`AΓL(1,q^n)`,
//! exponent mod `n`), and the resulting orbit partitions.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElem, Level};
use crate::goppa::root_set;
use crate::poly::Poly;
use crate::tower::{ElemRepr, Params, Tower};

/// Largest ground set accepted by the orbit routines.
pub const MAX_ORBIT_GROUND_SET: usize = 100_000;

/// `x ↦ scale·x^{q^frob_exp} + shift` with `scale, shift ∈ GF(q^n)`.
///
/// `period` is `n` for maps acting on GF(q^n) and `nr` for elements of `T` acting on
/// roots; the exponent is stored reduced modulo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemiaffineMap {
    scale: FieldElem,
    shift: FieldElem,
    frob_exp: u32,
    period: u32,
}

impl SemiaffineMap {
    pub fn new(scale: FieldElem, shift: FieldElem, frob_exp: i64, period: u32) -> Result<Self> {
        if scale.level() != Level::Middle || shift.level() != Level::Middle {
            return Err(Error::InvalidMap("scale and shift must lie in GF(q^n)".into()));
        }
        if scale.is_zero() {
            return Err(Error::InvalidMap("scale must be nonzero".into()));
        }
        if period == 0 {
            return Err(Error::InvalidMap("period must be positive".into()));
        }
        let frob_exp = frob_exp.rem_euclid(period as i64) as u32;
        Ok(SemiaffineMap { scale, shift, frob_exp, period })
    }

    /// Element of `T`, acting on GF(q^{nr}).
    pub fn on_roots(tower: &Tower, scale: FieldElem, shift: FieldElem, i: i64) -> Result<Self> {
        let Params { n, r, .. } = tower.params();
        Self::new(scale, shift, i, n * r)
    }

    /// Element of `AΓL(1, q^n)`, acting on GF(q^n).
    pub fn on_field(tower: &Tower, scale: FieldElem, shift: FieldElem, t: i64) -> Result<Self> {
        Self::new(scale, shift, t, tower.params().n)
    }

    pub fn identity(tower: &Tower, period: u32) -> Self {
        Self::new(tower.mid().one(), tower.mid().zero(), 0, period).expect("valid")
    }

    /// `μ_ε : x ↦ εx`.
    pub fn mu(tower: &Tower, period: u32) -> Self {
        Self::new(tower.mid().primitive(), tower.mid().zero(), 0, period).expect("valid")
    }

    /// `τ_ε : x ↦ x + ε`.
    pub fn tau(tower: &Tower, period: u32) -> Self {
        Self::new(tower.mid().one(), tower.mid().primitive(), 0, period).expect("valid")
    }

    /// `σ : x ↦ x^q`.
    pub fn sigma(tower: &Tower, period: u32) -> Self {
        Self::new(tower.mid().one(), tower.mid().zero(), 1, period).expect("valid")
    }

    /// The three generators `μ_ε, τ_ε, σ`.
    pub fn generators(tower: &Tower, period: u32) -> [Self; 3] {
        [Self::mu(tower, period), Self::tau(tower, period), Self::sigma(tower, period)]
    }

    pub fn scale(&self) -> FieldElem {
        self.scale
    }

    pub fn shift(&self) -> FieldElem {
        self.shift
    }

    pub fn frob_exp(&self) -> u32 {
        self.frob_exp
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, tower: &Tower, other: &SemiaffineMap) -> Result<SemiaffineMap> {
        if self.period != other.period {
            return Err(Error::InvalidMap(format!(
                "cannot compose maps with periods {} and {}",
                self.period, other.period
            )));
        }
        let mid = tower.mid();
        let t = self.frob_exp as i64;
        let scale = mid.mul(self.scale, tower.frobenius(other.scale, t));
        let shift = mid.add(mid.mul(self.scale, tower.frobenius(other.shift, t)), self.shift);
        Self::new(scale, shift, t + other.frob_exp as i64, self.period)
    }

    pub fn inverse(&self, tower: &Tower) -> SemiaffineMap {
        // y = a x^{q^t} + b  ⇒  x = (a^{-1} y − a^{-1} b)^{q^{-t}}
        let mid = tower.mid();
        let a_inv = mid.inv(self.scale).expect("nonzero scale");
        let minus_t = -(self.frob_exp as i64);
        let scale = tower.frobenius(a_inv, minus_t);
        let shift = tower.frobenius(mid.neg(mid.mul(a_inv, self.shift)), minus_t);
        Self::new(scale, shift, minus_t, self.period).expect("valid")
    }

    /// The same triple with the exponent reduced mod `n`.
    pub fn reduce_to_field(&self, tower: &Tower) -> SemiaffineMap {
        Self::new(self.scale, self.shift, self.frob_exp as i64, tower.params().n).expect("valid")
    }

    /// Evaluates the map on GF(q^n).
    pub fn apply_field(&self, tower: &Tower, x: FieldElem) -> FieldElem {
        let mid = tower.mid();
        mid.add(mid.mul(self.scale, tower.frobenius(x, self.frob_exp as i64)), self.shift)
    }

    /// Evaluates the map on GF(q^{nr}) with scale and shift embedded.
    pub fn apply_top(&self, tower: &Tower, x: FieldElem) -> FieldElem {
        let top = tower.top();
        top.add(
            top.mul(tower.lift(self.scale), tower.frobenius(x, self.frob_exp as i64)),
            tower.lift(self.shift),
        )
    }

    /// Every element of `T` (period `nr`) or of `AΓL(1,q^n)` (period `n`).
    pub fn all(tower: &Tower, period: u32) -> Vec<SemiaffineMap> {
        let mid = tower.mid();
        let mut out = Vec::new();
        for a in mid.elements().filter(|a| !a.is_zero()) {
            for b in mid.elements() {
                for t in 0..period as i64 {
                    out.push(Self::new(a, b, t, period).expect("valid"));
                }
            }
        }
        out
    }
}

/// `|T| = q^n (q^n − 1) n r`.
pub fn order_of_t(tower: &Tower) -> u64 {
    let big_n = tower.length() as u64;
    let Params { n, r, .. } = tower.params();
    big_n * (big_n - 1) * (n * r) as u64
}

/// `β = ζ·α^{q^i} + ξ`.
pub fn act_on_root(tower: &Tower, map: &SemiaffineMap, alpha: FieldElem) -> Result<FieldElem> {
    tower.top().ensure(alpha)?;
    Ok(map.apply_top(tower, alpha))
}

/// The root `((α − b)/a)^{q^{nr−t}}` of the transformed polynomial.
fn transformed_root(tower: &Tower, map: &SemiaffineMap, alpha: FieldElem) -> FieldElem {
    let top = tower.top();
    let y = top.div(top.sub(alpha, tower.lift(map.shift)), tower.lift(map.scale)).expect("a ≠ 0");
    tower.frobenius(y, -(map.frob_exp as i64))
}

fn find_root(tower: &Tower, g: &Poly) -> Result<FieldElem> {
    let lifted = g.map_coeffs(|c| tower.lift(c));
    tower
        .top()
        .elements()
        .find(|&x| lifted.eval(tower.top(), x).is_zero())
        .ok_or_else(|| Error::InvalidParams("polynomial has no root in GF(q^{nr})".into()))
}

fn check_poly(tower: &Tower, g: &Poly) -> Result<()> {
    if g.degree() != Some(tower.params().r as usize) || !g.is_monic(tower.mid()) {
        return Err(Error::InvalidParams(format!("expected a monic polynomial of degree {}", tower.params().r)));
    }
    Ok(())
}

/// `g^{σ(ψ)}`: the minimal polynomial of `((α − b)/a)^{q^{nr−t}}` for a root `α` of `g`.
pub fn act_on_poly(tower: &Tower, map: &SemiaffineMap, g: &Poly) -> Result<Poly> {
    check_poly(tower, g)?;
    let alpha = find_root(tower, g)?;
    tower.minimal_polynomial(transformed_root(tower, map, alpha))
}

/// Same action computed on coefficients: `f = monic(ḡ(ā x + b̄))` where the bars apply the
/// inverse Frobenius `y ↦ y^{q^{-t}}` on GF(q^n).
pub fn act_on_poly_coefficients(tower: &Tower, map: &SemiaffineMap, g: &Poly) -> Result<Poly> {
    check_poly(tower, g)?;
    let mid = tower.mid();
    let back = -(map.frob_exp as i64);
    let g_bar = g.map_coeffs(|c| tower.frobenius(c, back));
    let a_bar = tower.frobenius(map.scale, back);
    let b_bar = tower.frobenius(map.shift, back);
    g_bar.compose_affine(mid, a_bar, b_bar).monic(mid)
}

/// The irreducible monic degree-`r` polynomials, materialized from the roots.
#[derive(Debug, Clone)]
pub struct PolySet {
    polys: Vec<Poly>,
    index: HashMap<Poly, usize>,
    root_of: Vec<FieldElem>,
}

impl PolySet {
    pub fn from_roots(tower: &Tower, roots: &[FieldElem]) -> Result<Self> {
        let mut found: HashMap<Poly, FieldElem> = HashMap::new();
        for &alpha in roots {
            let g = tower.minimal_polynomial(alpha)?;
            found.entry(g).or_insert(alpha);
        }
        let mid = tower.mid();
        let mut entries: Vec<(Poly, FieldElem)> = found.into_iter().collect();
        entries.sort_by_key(|(g, _)| poly_key(mid, g));
        let index = entries.iter().enumerate().map(|(i, (g, _))| (g.clone(), i)).collect();
        let (polys, root_of) = entries.into_iter().unzip();
        Ok(PolySet { polys, index, root_of })
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn get(&self, i: usize) -> &Poly {
        &self.polys[i]
    }

    pub fn index_of(&self, g: &Poly) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// The dlog-minimal root of the `i`-th polynomial.
    pub fn root(&self, i: usize) -> FieldElem {
        self.root_of[i]
    }

    /// Index of the image of the `i`-th polynomial under `map` (period `n`).
    pub fn act(&self, tower: &Tower, map: &SemiaffineMap, i: usize) -> Result<usize> {
        let f = tower.minimal_polynomial(transformed_root(tower, map, self.root_of[i]))?;
        self.index_of(&f).ok_or_else(|| Error::Internal("image polynomial outside P".into()))
    }
}

/// Sort key for GF(q^n) polynomials: coefficient dlogs, constant term first.
pub fn poly_key(mid: &crate::field::FieldCtx, g: &Poly) -> Vec<u32> {
    g.coeffs().iter().map(|&c| mid.dlog_key(c)).collect()
}

/// One orbit with its canonical representative (the first member in canonical order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit<T> {
    pub members: Vec<T>,
}

impl<T: Copy> Orbit<T> {
    pub fn rep(&self) -> T {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Orbits of a finite group given by generators, explored breadth-first from the
/// smallest unvisited point. Points are `0..size`; members are returned sorted.
fn orbits_by_closure(size: usize, mut step: impl FnMut(usize, usize) -> Result<usize>, gens: usize) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; size];
    let mut orbits = Vec::new();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for g in 0..gens {
                let y = step(g, x)?;
                if y >= size {
                    return Err(Error::Internal("action left the ground set".into()));
                }
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    Ok(orbits)
}

/// `T`-orbits on the root set `S`; `roots` must be in dlog order.
pub fn orbits_on_s(tower: &Tower, roots: &[FieldElem]) -> Result<Vec<Orbit<FieldElem>>> {
    if roots.len() > MAX_ORBIT_GROUND_SET {
        return Err(Error::SizeGuard(format!("|S| = {} exceeds {MAX_ORBIT_GROUND_SET}", roots.len())));
    }
    let mut position = vec![usize::MAX; tower.top().size() as usize];
    for (i, a) in roots.iter().enumerate() {
        position[a.value() as usize] = i;
    }
    let Params { n, r, .. } = tower.params();
    let gens = SemiaffineMap::generators(tower, n * r);
    let orbits = orbits_by_closure(
        roots.len(),
        |g, i| {
            let beta = act_on_root(tower, &gens[g], roots[i])?;
            Ok(position[beta.value() as usize])
        },
        gens.len(),
    )?;
    Ok(orbits
        .into_iter()
        .map(|m| Orbit { members: m.into_iter().map(|i| roots[i]).collect() })
        .collect())
}

/// Orbits of `AΓL(1,q^n)` on `P`, as indices into `polys`.
pub fn orbits_on_p(tower: &Tower, polys: &PolySet) -> Result<Vec<Orbit<usize>>> {
    if polys.len() > MAX_ORBIT_GROUND_SET {
        return Err(Error::SizeGuard(format!("|P| = {} exceeds {MAX_ORBIT_GROUND_SET}", polys.len())));
    }
    let gens = SemiaffineMap::generators(tower, tower.params().n);
    let orbits = orbits_by_closure(polys.len(), |g, i| polys.act(tower, &gens[g], i), gens.len())?;
    Ok(orbits.into_iter().map(|members| Orbit { members }).collect())
}

/// Whether `α ↦ minimal_polynomial(α)` maps the `T`-orbits on `S` bijectively onto the
/// orbits on `P`.
pub fn correspondence_check(
    tower: &Tower,
    s_orbits: &[Orbit<FieldElem>],
    p_orbits: &[Orbit<usize>],
    polys: &PolySet,
) -> bool {
    let mut p_orbit_of = vec![usize::MAX; polys.len()];
    for (k, orbit) in p_orbits.iter().enumerate() {
        for &i in &orbit.members {
            p_orbit_of[i] = k;
        }
    }
    let mut hit = vec![false; p_orbits.len()];
    for orbit in s_orbits {
        let mut images: Vec<usize> = Vec::new();
        for &alpha in &orbit.members {
            match tower.minimal_polynomial(alpha).ok().and_then(|g| polys.index_of(&g)) {
                Some(i) => images.push(i),
                None => return false,
            }
        }
        images.sort_unstable();
        images.dedup();
        let k = p_orbit_of[images[0]];
        if k == usize::MAX || hit[k] || p_orbits[k].members != images {
            return false;
        }
        hit[k] = true;
    }
    hit.iter().all(|&h| h)
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitEntry<T> {
    pub rep: T,
    pub size: usize,
    pub members: Vec<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport<T> {
    pub params: Params,
    pub set: &'static str,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitEntry<T>>,
}

pub fn s_orbit_report(tower: &Tower, orbits: &[Orbit<FieldElem>]) -> OrbitReport<ElemRepr> {
    OrbitReport {
        params: tower.params(),
        set: "S",
        orbit_count: orbits.len(),
        orbits: orbits
            .iter()
            .map(|o| OrbitEntry {
                rep: tower.to_repr(o.rep()),
                size: o.len(),
                members: o.members.iter().map(|&a| tower.to_repr(a)).collect(),
            })
            .collect(),
    }
}

pub fn p_orbit_report(tower: &Tower, orbits: &[Orbit<usize>], polys: &PolySet) -> OrbitReport<Vec<ElemRepr>> {
    let repr = |i: usize| polys.get(i).coeffs().iter().map(|&c| tower.to_repr(c)).collect::<Vec<_>>();
    OrbitReport {
        params: tower.params(),
        set: "P",
        orbit_count: orbits.len(),
        orbits: orbits
            .iter()
            .map(|o| OrbitEntry { rep: repr(o.rep()), size: o.len(), members: o.members.iter().map(|&i| repr(i)).collect() })
            .collect(),
    }
}

/// `S`, `P`, both orbit partitions and the correspondence verdict for one tower.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub roots: Vec<FieldElem>,
    pub polys: PolySet,
    pub s_orbits: Vec<Orbit<FieldElem>>,
    pub p_orbits: Vec<Orbit<usize>>,
    pub correspondence: bool,
}

impl OrbitData {
    pub fn compute(tower: &Tower) -> Result<Self> {
        let roots = root_set(tower);
        let polys = PolySet::from_roots(tower, &roots)?;
        let s_orbits = orbits_on_s(tower, &roots)?;
        let p_orbits = orbits_on_p(tower, &polys)?;
        let correspondence = correspondence_check(tower, &s_orbits, &p_orbits, &polys);
        Ok(OrbitData { roots, polys, s_orbits, p_orbits, correspondence })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn tower(p: u32, m: u32, n: u32, r: u32) -> Tower {
        Tower::new(Params::new(p, m, n, r).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_frobenius_n() {
        let t = tower(2, 1, 3, 2);
        let id = SemiaffineMap::identity(&t, 6);
        let fr = SemiaffineMap::on_roots(&t, t.mid().one(), t.mid().zero(), 3).unwrap();
        for alpha in root_set(&t) {
            assert_eq!(act_on_root(&t, &id, alpha).unwrap(), alpha);
            let beta = act_on_root(&t, &fr, alpha).unwrap();
            assert_eq!(beta, t.frobenius(alpha, 3));
            assert_eq!(t.minimal_polynomial(beta).unwrap(), t.minimal_polynomial(alpha).unwrap());
        }
        assert!(SemiaffineMap::on_roots(&t, t.mid().zero(), t.mid().one(), 0).is_err());
    }

    #[test]
    fn group_action_laws_exhaustive() {
        for (p, m, n, r) in [(2, 1, 3, 2), (2, 1, 2, 2)] {
            let t = tower(p, m, n, r);
            let roots = root_set(&t);
            let all = SemiaffineMap::all(&t, n * r);
            assert_eq!(all.len() as u64, order_of_t(&t));
            // compatibility on a spread of pairs, identity and degree preservation on all
            for (k, g1) in all.iter().enumerate() {
                for &alpha in &roots {
                    let b = act_on_root(&t, g1, alpha).unwrap();
                    assert_eq!(t.degree_over(b), r);
                    let back = act_on_root(&t, &g1.inverse(&t), b).unwrap();
                    assert_eq!(back, alpha);
                }
                for g2 in all.iter().skip(k % 7).step_by(13) {
                    let comp = g2.compose(&t, g1).unwrap();
                    for &alpha in roots.iter().step_by(3) {
                        let two = act_on_root(&t, g2, act_on_root(&t, g1, alpha).unwrap()).unwrap();
                        assert_eq!(act_on_root(&t, &comp, alpha).unwrap(), two);
                    }
                }
            }
        }
    }

    /// Orbits from the closure over every element of `T`.
    fn closure_oracle(t: &Tower, roots: &[FieldElem]) -> BTreeSet<BTreeSet<u32>> {
        let all = SemiaffineMap::all(t, t.params().n * t.params().r);
        let top = t.top();
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for &alpha in roots {
            if seen.contains(&alpha) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for g in &all {
                let y = g.apply_top(t, alpha);
                orbit.insert(top.dlog_key(y));
                seen.insert(y);
            }
            out.insert(orbit);
        }
        out
    }

    #[test]
    fn orbits_match_closure_oracle() {
        for (p, m, n, r) in [(2, 1, 3, 2), (2, 1, 2, 2), (3, 1, 2, 2)] {
            let t = tower(p, m, n, r);
            let roots = root_set(&t);
            let orbits = orbits_on_s(&t, &roots).unwrap();
            let got: BTreeSet<BTreeSet<u32>> = orbits
                .iter()
                .map(|o| o.members.iter().map(|&a| t.top().dlog_key(a)).collect())
                .collect();
            assert_eq!(got, closure_oracle(&t, &roots));
            let total: usize = orbits.iter().map(|o| o.len()).sum();
            assert_eq!(total, roots.len());
            for o in &orbits {
                assert_eq!(order_of_t(&t) % o.len() as u64, 0);
                for c in t.conjugates(o.rep()) {
                    assert!(o.members.contains(&c));
                }
                let keys: Vec<u32> = o.members.iter().map(|&a| t.top().dlog_key(a)).collect();
                assert!(keys.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn poly_routes_agree() {
        let t = tower(2, 1, 3, 2);
        let roots = root_set(&t);
        let polys = PolySet::from_roots(&t, &roots).unwrap();
        assert_eq!(polys.len(), 28);
        let maps = SemiaffineMap::all(&t, 3);
        for g in polys.polys() {
            assert_eq!(&act_on_poly(&t, &SemiaffineMap::identity(&t, 3), g).unwrap(), g);
            for map in maps.iter().step_by(5) {
                let a = act_on_poly(&t, map, g).unwrap();
                let b = act_on_poly_coefficients(&t, map, g).unwrap();
                assert_eq!(a, b);
                assert!(polys.index_of(&a).is_some());
            }
        }
    }

    #[test]
    fn pure_shift_is_substitution() {
        let t = tower(3, 1, 2, 2);
        let mid = t.mid();
        let roots = root_set(&t);
        let polys = PolySet::from_roots(&t, &roots).unwrap();
        for g in polys.polys().iter().take(6) {
            for b in mid.elements() {
                let map = SemiaffineMap::on_field(&t, mid.one(), b, 0).unwrap();
                // expand g(x + b) coefficient by coefficient via the binomial theorem
                let mut expanded = Poly::zero();
                for (i, &c) in g.coeffs().iter().enumerate() {
                    let mut term = Poly::constant(c);
                    for _ in 0..i {
                        term = term.mul(mid, &Poly::new(vec![b, mid.one()]));
                    }
                    expanded = expanded.add(mid, &term);
                }
                assert_eq!(act_on_poly(&t, &map, g).unwrap(), expanded);
            }
        }
    }

    #[test]
    fn correspondence_holds() {
        for (p, m, n, r) in [(2, 1, 3, 2), (2, 1, 2, 2), (3, 1, 2, 2), (2, 2, 2, 2)] {
            let t = tower(p, m, n, r);
            let data = OrbitData::compute(&t).unwrap();
            assert!(data.correspondence, "({p},{m},{n},{r})");
            assert_eq!(data.s_orbits.len(), data.p_orbits.len());
            assert_eq!(data.polys.len() * r as usize, data.roots.len());
        }
    }
}
