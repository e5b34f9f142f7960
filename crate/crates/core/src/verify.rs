//! Verification suites run by `--cmd verify`. Each suite returns named checks plus a JSON
//! payload; a suite passes when all of its checks do.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::actions::{OrbitData, SemiaffineMap};
use crate::code::LinearCode;
use crate::equiv::{
    are_perm_equivalent, brute_force_equiv, classify_with_orbits, random_code, random_perm, verify_orbit_equivalence,
};
use crate::error::Result;
use crate::field::{FieldCtx, Level};
use crate::goppa::{build_parity_row, code_of_root, check_goppa_condition, check_r_equations, EvaluationOrder};
use crate::perms::{
    affine_embed, build_rho, exhaustive_row_matches, field_tower, generator_parities, membership_in_fg,
    perm_of_semiaffine, rho_map, twisted_row, ParityRecord,
};
use crate::tower::{Params, Tower};

/// Suite names with one-line descriptions, in run order.
pub const SUITES: [(&str, &str); 7] = [
    ("construction", "|S|, |P|, code parameters and agreement of the two membership tests"),
    ("orbit-witnesses", "rho witnesses map C(alpha) onto C(beta) for every pair in every T-orbit"),
    ("rho-exhaustive", "all 8! column permutations matching sampled twisted parity rows lie in AGammaL(1,8)"),
    ("parity", "signs of the generators of AGammaL(1,q^n) and the alternating-group containment"),
    ("agl-embedding", "AGammaL(1,q^n) embeds homomorphically in AGL(nm,p)"),
    ("oracle-equivalence", "canonical-form equivalence agrees with exhaustive search"),
    ("classification", "equivalence classes versus T-orbits"),
];

pub const DEFAULT_CONSTRUCTION: [(u32, u32, u32, u32); 1] = [(2, 1, 3, 2)];
pub const DEFAULT_ORBIT_WITNESS: [(u32, u32, u32, u32); 2] = [(2, 1, 3, 2), (2, 1, 2, 2)];
pub const DEFAULT_CLASSIFICATION: [(u32, u32, u32, u32); 4] = [(2, 1, 3, 2), (2, 1, 2, 2), (3, 1, 2, 2), (2, 2, 2, 2)];
pub const PARITY_CASES: [(u32, u32); 6] = [(2, 2), (2, 3), (2, 4), (4, 2), (3, 2), (5, 2)];
pub const AGL_CASES: [(u32, u32); 4] = [(2, 3), (3, 2), (2, 4), (4, 2)];
pub const SYNTHETIC_SEED: u64 = 0x5EED_C0DE;
pub const SYNTHETIC_CODES: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: Value,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, found: T, expected: T) {
        let passed = found == expected;
        self.push(name, passed, format!("found {found:?}, expected {expected:?}"));
    }

    fn finish(self, name: &str, data: Value) -> SuiteReport {
        SuiteReport { name: name.into(), passed: self.0.iter().all(|c| c.passed), checks: self.0, data }
    }
}

/// Parameter sets for the parametric suites; `None` selects the shipped defaults.
#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    pub params: Option<Params>,
    pub force: bool,
}

impl SuiteOptions {
    fn sets(&self, defaults: &[(u32, u32, u32, u32)]) -> Result<Vec<Params>> {
        match self.params {
            Some(p) => Ok(vec![p]),
            None => defaults.iter().map(|&(p, m, n, r)| Params::new(p, m, n, r)).collect(),
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    match name {
        "construction" => construction(&opts.sets(&DEFAULT_CONSTRUCTION)?),
        "orbit-witnesses" => orbit_witnesses(&opts.sets(&DEFAULT_ORBIT_WITNESS)?),
        "rho-exhaustive" => rho_exhaustive(),
        "parity" => parity(),
        "agl-embedding" => agl_embedding(),
        "oracle-equivalence" => oracle_equivalence(),
        "classification" => classification(&opts.sets(&DEFAULT_CLASSIFICATION)?, opts.force),
        other => Err(crate::Error::InvalidParams(format!("unknown suite {other:?}"))),
    }
}

fn tag(p: &Params) -> String {
    format!("({},{},{},{})", p.p, p.m, p.n, p.r)
}

fn construction(sets: &[Params]) -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let mut data = Vec::new();
    for &params in sets {
        let t = Tower::new(params)?;
        let label = tag(&params);
        let orbit_data = OrbitData::compute(&t)?;
        let (s, p) = (orbit_data.roots.len(), orbit_data.polys.len());
        checks.eq(format!("{label} |S| = r|P|"), s, params.r as usize * p);
        let order = EvaluationOrder::standard(&t);
        let f = t.base();
        let n = t.length();
        let exhaustive = (f.size() as u64).checked_pow(n as u32).is_some_and(|c| c <= 1 << 16);
        let results: Vec<(usize, Option<usize>, bool, bool)> = (0..p)
            .into_par_iter()
            .map(|i| {
                let code = code_of_root(&t, orbit_data.polys.root(i))?;
                let c = &code.code;
                let eq1 = |w: &[_]| check_goppa_condition(&t, w, &code.g, &order);
                let eq2 = |w: &[_]| check_r_equations(&t, w, code.alpha, &order);
                let mut rows_pass = true;
                for row in c.generator().iter_rows() {
                    rows_pass &= eq1(row)? && eq2(row)?;
                }
                let mut agree = true;
                if exhaustive {
                    let mut accepted = 0u64;
                    for idx in 0..(f.size() as u64).pow(n as u32) {
                        let mut v = idx;
                        let w: Vec<_> = (0..n)
                            .map(|_| {
                                let d = (v % f.size() as u64) as u32;
                                v /= f.size() as u64;
                                f.elem(d).expect("digit")
                            })
                            .collect();
                        let (a, b) = (eq1(&w)?, eq2(&w)?);
                        agree &= a == b && a == c.contains(f, &w);
                        accepted += a as u64;
                    }
                    agree &= accepted == (f.size() as u64).pow(c.dim() as u32);
                }
                Ok((c.dim(), c.min_distance(f)?, rows_pass, agree))
            })
            .collect::<Result<_>>()?;
        let mut dims: Vec<usize> = results.iter().map(|r| r.0).collect();
        dims.sort_unstable();
        dims.dedup();
        let mut dists: Vec<Option<usize>> = results.iter().map(|r| r.1).collect();
        dists.sort_unstable();
        dists.dedup();
        checks.push(
            format!("{label} generator rows satisfy both membership tests"),
            results.iter().all(|r| r.2),
            format!("{p} codes"),
        );
        if exhaustive {
            checks.push(
                format!("{label} membership tests agree on all words"),
                results.iter().all(|r| r.3),
                format!("{} words per code", (f.size() as u64).pow(n as u32)),
            );
        }
        let lower = n.saturating_sub((params.m * params.n * params.r) as usize);
        checks.push(format!("{label} k >= N - mnr"), dims.iter().all(|&k| k >= lower), format!("k values {dims:?}"));
        if (params.p, params.m, params.n, params.r) == (2, 1, 3, 2) {
            checks.eq(format!("{label} |S|"), s, 56);
            checks.eq(format!("{label} |P|"), p, 28);
            checks.eq(format!("{label} N"), n, 8);
            checks.eq(format!("{label} k"), dims.clone(), vec![2]);
            checks.eq(format!("{label} minimum distance"), dists.clone(), vec![Some(5)]);
        }
        data.push(json!({"params": params, "S_size": s, "P_size": p, "N": n, "k_values": dims, "min_distances": dists}));
    }
    Ok(checks.finish("construction", Value::Array(data)))
}

fn orbit_witnesses(sets: &[Params]) -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let mut data = Vec::new();
    for &params in sets {
        let t = Tower::new(params)?;
        let orbits = OrbitData::compute(&t)?.s_orbits;
        let reports = orbits.iter().map(|o| verify_orbit_equivalence(&t, o)).collect::<Result<Vec<_>>>()?;
        let pairs: usize = reports.iter().map(|r| r.pairs).sum();
        let verified: usize = reports.iter().map(|r| r.verified).sum();
        checks.eq(format!("{} verified pairs", tag(&params)), verified, pairs);
        checks.push(
            format!("{} witnesses decode into AGammaL(1,q^n)", tag(&params)),
            reports.iter().all(|r| r.all_in_fg),
            format!("{} orbits", reports.len()),
        );
        data.push(json!({"params": params, "orbits": reports}));
    }
    Ok(checks.finish("orbit-witnesses", Value::Array(data)))
}

fn rho_exhaustive() -> Result<SuiteReport> {
    let t = Tower::new(Params::new(2, 1, 3, 2)?)?;
    let mut checks = Checks::default();
    let orbit_data = OrbitData::compute(&t)?;
    let mid = t.mid();
    let Params { n, r, .. } = t.params();
    let alpha = orbit_data.roots[0];
    let orbit = orbit_data.s_orbits.iter().find(|o| o.members.contains(&alpha)).expect("alpha lies in an orbit");
    let mut compatible = Vec::new();
    let mut incompatible = Vec::new();
    for j in 0..(n * r) as i64 {
        for &beta in &orbit.members {
            for e in 1..=mid.order() as i64 {
                let zeta = mid.exp(e);
                match rho_map(&t, zeta, j, alpha, beta) {
                    Ok(_) => compatible.push((beta, zeta, j)),
                    Err(_) => incompatible.push((beta, zeta, j)),
                }
            }
        }
    }
    let pick = |v: &[_], count: usize| -> Vec<_> { (0..count.min(v.len())).map(|i| v[(i * v.len() / count + i) % v.len()]).collect() };
    let h_alpha = build_parity_row(&t, alpha)?;
    let mut targets = Vec::new();
    for (beta, zeta, j) in pick(&compatible, 4) {
        let target = twisted_row(&t, &build_parity_row(&t, beta)?, zeta, j);
        let matches = exhaustive_row_matches(h_alpha.entries(), &target)?;
        let members = matches.iter().filter(|p| membership_in_fg(&t, p).is_some()).count();
        let rho = build_rho(&t, zeta, j, alpha, beta)?;
        let label = format!("target beta={:?} zeta={} j={j}", t.to_repr(beta).coeffs, zeta.value());
        checks.push(format!("{label}: at least one match"), !matches.is_empty(), format!("{} matches", matches.len()));
        checks.eq(format!("{label}: every match lies in AGammaL(1,8)"), members, matches.len());
        checks.push(format!("{label}: rho is among the matches"), matches.contains(&rho), String::new());
        targets.push(json!({
            "beta": t.to_repr(beta), "zeta": t.to_repr(zeta), "j": j,
            "matches": matches.iter().map(|p| p.to_one_based()).collect::<Vec<_>>(),
        }));
    }
    checks.push("at least three compatible targets", targets.len() >= 3, format!("{}", targets.len()));
    let mut incompatible_matches = Vec::new();
    for (beta, zeta, j) in pick(&incompatible, 2) {
        let target = twisted_row(&t, &build_parity_row(&t, beta)?, zeta, j);
        incompatible_matches.push(exhaustive_row_matches(h_alpha.entries(), &target)?.len());
    }
    Ok(checks.finish(
        "rho-exhaustive",
        json!({"alpha": t.to_repr(alpha), "targets": targets, "incompatible_target_matches": incompatible_matches}),
    ))
}

/// Parity table rows for every `(q, n)` case.
pub fn parity_table() -> Result<Vec<ParityRecord>> {
    let mut rows = Vec::new();
    for (q, n) in PARITY_CASES {
        rows.extend(generator_parities(q, n)?);
    }
    Ok(rows)
}

fn parity() -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let rows = parity_table()?;
    for (q, n) in PARITY_CASES {
        let all_even = rows.iter().filter(|r| r.q == q && r.n == n).all(|r| r.sign == 1);
        checks.eq(format!("q={q} n={n}: inside the alternating group iff q even"), all_even, q % 2 == 0);
        // σ on GF(4) over F_2 is a single transposition, so q^n = 4 with q even is odd
        let corrected = q % 2 == 0 && q.pow(n) > 4;
        checks.eq(format!("q={q} n={n}: inside the alternating group iff q even and q^n > 4"), all_even, corrected);
    }
    for d in 1..=4u32 {
        let t = field_tower(2, d)?;
        let tau = perm_of_semiaffine(&t, &SemiaffineMap::tau(&t, d));
        checks.eq(format!("translation on F_2^{d} cycle type"), tau.cycle_type(), vec![2; 1 << (d - 1)]);
    }
    let t = field_tower(3, 2)?;
    let mu = perm_of_semiaffine(&t, &SemiaffineMap::mu(&t, 2));
    checks.eq("mu_eps on F_9 sign", mu.sign(), -1);
    checks.eq("mu_eps on F_9 cycle type", mu.cycle_type(), vec![8, 1]);
    Ok(checks.finish("parity", serde_json::to_value(&rows).expect("serializable")))
}

fn agl_embedding() -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let mut data = Vec::new();
    for (q, n) in AGL_CASES {
        let t = field_tower(q, n)?;
        let label = format!("q^n = {}^{n}", q);
        let gens = SemiaffineMap::generators(&t, n);
        let mut hom = true;
        for a in &gens {
            for b in &gens {
                hom &= affine_embed(&t, &a.compose(&t, b)?)? == affine_embed(&t, a)?.compose(&affine_embed(&t, b)?);
            }
        }
        checks.push(format!("{label}: homomorphic on generator pairs"), hom, String::new());
        let all = SemiaffineMap::all(&t, n);
        let reps = all.iter().map(|g| affine_embed(&t, g)).collect::<Result<Vec<_>>>()?;
        let translations_exact = all.iter().zip(&reps).all(|(g, rep)| {
            let is_tau = g.scale() == t.mid().one() && g.frob_exp() == 0;
            rep.is_translation() == is_tau && (!is_tau || rep.translation == t.mid().coeffs(g.shift()))
        });
        checks.push(format!("{label}: identity linear part exactly on translations"), translations_exact, String::new());
        if t.length() <= 8 {
            let mut full = true;
            for (a, ra) in all.iter().zip(&reps) {
                for (b, rb) in all.iter().zip(&reps) {
                    full &= affine_embed(&t, &a.compose(&t, b)?)? == ra.compose(rb);
                }
            }
            checks.push(format!("{label}: homomorphic on all pairs"), full, format!("{} elements", all.len()));
        }
        data.push(json!({"q": q, "n": n, "dimension": t.mid().degree(), "group_order": all.len()}));
    }
    Ok(checks.finish("agl-embedding", Value::Array(data)))
}

/// The 100 synthetic pairs: a random `[8,k]` code against either a permuted copy or an
/// independent random code of the same requested dimension.
pub fn synthetic_pairs() -> Vec<(FieldCtx, LinearCode, LinearCode)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SYNTHETIC_SEED);
    (0..SYNTHETIC_CODES)
        .map(|i| {
            let f = FieldCtx::new(if i % 4 == 3 { 3 } else { 2 }, 1, Level::Base).expect("prime field");
            let k = 1 + i % 7;
            let a = random_code(&mut rng, &f, 8, k);
            let b = if i % 2 == 0 {
                let pi = random_perm(&mut rng, 8);
                a.permute(&f, pi.image())
            } else {
                random_code(&mut rng, &f, 8, k)
            };
            (f, a, b)
        })
        .collect()
}

fn oracle_equivalence() -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let t = Tower::new(Params::new(2, 1, 3, 2)?)?;
    let polys = OrbitData::compute(&t)?.polys;
    let codes = (0..polys.len()).map(|i| code_of_root(&t, polys.root(i)).map(|c| c.code)).collect::<Result<Vec<_>>>()?;
    let f = t.base();
    let pairs: Vec<(usize, usize)> = (0..codes.len()).flat_map(|i| (i + 1..codes.len()).map(move |j| (i, j))).collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| {
            let fast = are_perm_equivalent(f, &codes[i], &codes[j])?.is_equivalent();
            let slow = brute_force_equiv(f, &codes[i], &codes[j])?.is_equivalent();
            Ok((fast, slow))
        })
        .collect::<Result<Vec<_>>>()?;
    let agree = verdicts.iter().filter(|(a, b)| a == b).count();
    let equivalent = verdicts.iter().filter(|(_, b)| *b).count();
    checks.eq("Goppa pairs (2,1,3,2): agreement", agree, pairs.len());
    checks.eq("Goppa pairs (2,1,3,2): pair count", pairs.len(), 378);

    let synthetic = synthetic_pairs();
    let syn = synthetic
        .par_iter()
        .map(|(f, a, b)| {
            let fast = are_perm_equivalent(f, a, b)?.is_equivalent();
            let slow = brute_force_equiv(f, a, b)?.is_equivalent();
            Ok((fast, slow))
        })
        .collect::<Result<Vec<_>>>()?;
    let syn_agree = syn.iter().filter(|(a, b)| a == b).count();
    let syn_equivalent = syn.iter().filter(|(_, b)| *b).count();
    checks.eq("synthetic [8,k] pairs: agreement", syn_agree, synthetic.len());
    Ok(checks.finish(
        "oracle-equivalence",
        json!({
            "goppa_pairs": pairs.len(), "goppa_equivalent_pairs": equivalent,
            "synthetic_pairs": synthetic.len(), "synthetic_equivalent_pairs": syn_equivalent,
        }),
    ))
}

/// Partition of the distinct codes found by pairwise exhaustive search, as sorted blocks of
/// indices into `codes`.
pub fn brute_force_partition(f: &FieldCtx, codes: &[LinearCode]) -> Result<Vec<Vec<usize>>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, c) in codes.iter().enumerate() {
        let mut home = None;
        for (b, block) in blocks.iter().enumerate() {
            if brute_force_equiv(f, &codes[block[0]], c)?.is_equivalent() {
                home = Some(b);
                break;
            }
        }
        match home {
            Some(b) => blocks[b].push(i),
            None => blocks.push(vec![i]),
        }
    }
    Ok(blocks)
}

fn classification(sets: &[Params], force: bool) -> Result<SuiteReport> {
    let mut checks = Checks::default();
    let mut data = Vec::new();
    for &params in sets {
        let t = Tower::new(params)?;
        let label = tag(&params);
        let orbit_data = OrbitData::compute(&t)?;
        checks.push(format!("{label} orbit correspondence S/P"), orbit_data.correspondence, String::new());
        let c = classify_with_orbits(&t, &orbit_data, force)?;
        checks.push(
            format!("{label} class_count <= orbit_count"),
            c.class_count <= c.orbit_count,
            format!("{} classes, {} orbits, gap {}", c.class_count, c.orbit_count, c.gap),
        );
        if t.length() <= 8 {
            let f = t.base();
            let mut distinct: Vec<LinearCode> = Vec::new();
            for i in 0..orbit_data.polys.len() {
                let code = code_of_root(&t, orbit_data.polys.root(i))?.code;
                if !distinct.contains(&code) {
                    distinct.push(code);
                }
            }
            let blocks = brute_force_partition(f, &distinct)?;
            checks.eq(format!("{label} class count matches exhaustive search"), c.class_count, blocks.len());
        }
        data.push(json!({
            "params": params, "S_size": c.s_size, "P_size": c.p_size, "distinct_codes": c.distinct_codes,
            "orbit_count": c.orbit_count, "class_count": c.class_count, "gap": c.gap,
        }));
    }
    Ok(checks.finish("classification", Value::Array(data)))
}
