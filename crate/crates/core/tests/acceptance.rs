//! Acceptance run: one line per criterion. Expected values come from the brute-force
//! oracles in this file, not from the library routines under test.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use goppa_equiv::actions::{OrbitData, SemiaffineMap};
use goppa_equiv::equiv::{are_perm_equivalent, brute_force_equiv, classify_with_orbits};
use goppa_equiv::goppa::{check_goppa_condition, check_r_equations, code_of_root, EvaluationOrder};
use goppa_equiv::perms::{affine_embed, build_rho, fg_in_alternating, field_tower, membership_in_fg, perm_of_semiaffine};
use goppa_equiv::verify::synthetic_pairs;
use goppa_equiv::{FieldCtx, FieldElem, Params, Tower};

fn tower(p: u32, m: u32, n: u32, r: u32) -> Tower {
    Tower::new(Params::new(p, m, n, r).unwrap()).unwrap()
}

/// Columns ε^1, …, ε^{N−1}, 0 of GF(q^n).
fn columns(t: &Tower) -> Vec<FieldElem> {
    let mid = t.mid();
    (1..t.length() as i64).map(|i| mid.exp(i)).chain([mid.zero()]).collect()
}

/// Every word of GF(q)^len, digits little-endian.
fn all_words(q: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..(q as u64).pow(len as u32)).map(move |mut idx| {
        (0..len)
            .map(|_| {
                let d = (idx % q as u64) as u32;
                idx /= q as u64;
                d
            })
            .collect()
    })
}

/// Elements of degree exactly `r` over GF(q^n), by testing `x^{Q^d} = x` for `d ≤ r`.
fn degree_filter(t: &Tower) -> Vec<FieldElem> {
    let top = t.top();
    let Params { r, .. } = t.params();
    let big_q = t.mid().size() as u64;
    top.elements()
        .filter(|&x| {
            let fixed = |d: u32| top.pow(x, big_q.pow(d)) == x;
            fixed(r) && (1..r).all(|d| !fixed(d))
        })
        .collect()
}

/// Words of GF(q)^N annihilated by `1/(α − ε_i)`, by exhaustive enumeration.
fn kernel_oracle(t: &Tower, alpha: FieldElem) -> Vec<Vec<u32>> {
    let (top, base) = (t.top(), t.base());
    let cols = columns(t);
    let inv: Vec<FieldElem> = cols.iter().map(|&e| top.inv(top.sub(alpha, t.lift(e))).unwrap()).collect();
    all_words(base.size(), cols.len())
        .filter(|w| {
            let sum = w.iter().zip(&inv).fold(top.zero(), |acc, (&c, &h)| {
                top.add(acc, top.mul(t.base_to_top().apply(base.elem(c).unwrap()), h))
            });
            sum.is_zero()
        })
        .collect()
}

/// `T`-orbits on `roots`, by applying every `x ↦ ζ x^{q^i} + ξ` to every root.
fn t_orbits(t: &Tower, roots: &[FieldElem]) -> Vec<BTreeSet<u32>> {
    let (mid, top) = (t.mid(), t.top());
    let Params { n, r, .. } = t.params();
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for &alpha in roots {
        if seen.contains(&alpha.value()) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for zeta in mid.elements().filter(|z| !z.is_zero()) {
            for xi in mid.elements() {
                for i in 0..(n * r) as i64 {
                    let beta = top.add(top.mul(t.lift(zeta), t.frobenius(alpha, i)), t.lift(xi));
                    orbit.insert(beta.value());
                }
            }
        }
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }
    orbits
}

/// Heap's algorithm over all permutations of `0..n`.
fn each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    visit(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn sign_by_inversions(image: &[usize]) -> i8 {
    let inversions = (0..image.len()).flat_map(|i| (i + 1..image.len()).map(move |j| (i, j)));
    if inversions.filter(|&(i, j)| image[i] > image[j]).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `out[perm[i]] = word[i]`.
fn moved(word: &[u32], perm: &[usize]) -> Vec<u32> {
    let mut out = vec![0; word.len()];
    for (i, &x) in word.iter().enumerate() {
        out[perm[i]] = x;
    }
    out
}

fn codeword_set(f: &FieldCtx, rows: &[Vec<u32>]) -> HashSet<Vec<u32>> {
    let len = rows.first().map_or(0, |r| r.len());
    all_words(f.size(), rows.len())
        .map(|msg| {
            let mut w = vec![f.zero(); len];
            for (m, row) in msg.iter().zip(rows) {
                for (x, &g) in w.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(f.elem(*m).unwrap(), f.elem(g).unwrap()));
                }
            }
            w.iter().map(|x| x.value()).collect()
        })
        .collect()
}

/// Exhaustive permutation-equivalence oracle on codeword sets.
fn equivalent_oracle(f: &FieldCtx, g1: &[Vec<u32>], g2: &[Vec<u32>], len: usize) -> bool {
    let (s1, s2) = (codeword_set(f, g1), codeword_set(f, g2));
    if s1.len() != s2.len() {
        return false;
    }
    let mut found = false;
    each_permutation(len, |perm| {
        if !found && g1.iter().all(|row| s2.contains(&moved(row, perm))) {
            found = true;
        }
    });
    found
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn construction() -> Outcome {
    let start = Instant::now();
    let t = tower(2, 1, 3, 2);
    let f = t.base();
    let roots = degree_filter(&t);
    let conj_classes: BTreeSet<Vec<u32>> = roots
        .iter()
        .map(|&a| {
            let mut c: Vec<u32> = (0..2).map(|j| t.frobenius(a, 3 * j).value()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let data = OrbitData::compute(&t).unwrap();
    let mut problems = Vec::new();
    if roots.len() != 56 || data.roots.len() != 56 {
        problems.push(format!("|S| oracle {} library {}", roots.len(), data.roots.len()));
    }
    if conj_classes.len() != 28 || data.polys.len() != 28 {
        problems.push(format!("|P| oracle {} library {}", conj_classes.len(), data.polys.len()));
    }
    let order = EvaluationOrder::standard(&t);
    for i in 0..data.polys.len() {
        let code = code_of_root(&t, data.polys.root(i)).unwrap();
        let kernel = kernel_oracle(&t, code.alpha);
        let k = kernel.len().trailing_zeros() as usize;
        let d = kernel.iter().map(|w| w.iter().filter(|&&x| x != 0).count()).filter(|&w| w > 0).min();
        if (code.code.length(), code.code.dim(), k, d) != (8, 2, 2, Some(5)) {
            problems.push(format!("code {i}: N {} k {} oracle k {k} d {d:?}", code.code.length(), code.code.dim()));
        }
        if code.code.min_distance(f).unwrap() != d {
            problems.push(format!("code {i}: library minimum distance differs from enumeration"));
        }
        for row in code.code.generator().iter_rows() {
            let eq1 = check_goppa_condition(&t, row, &code.g, &order).unwrap();
            let eq2 = check_r_equations(&t, row, code.alpha, &order).unwrap();
            if !(eq1 && eq2) {
                problems.push(format!("code {i}: generator row rejected ({eq1}, {eq2})"));
            }
        }
        let kernel: HashSet<Vec<u32>> = kernel.into_iter().collect();
        for w in all_words(2, 8) {
            let word: Vec<FieldElem> = w.iter().map(|&c| f.elem(c).unwrap()).collect();
            let eq1 = check_goppa_condition(&t, &word, &code.g, &order).unwrap();
            let eq2 = check_r_equations(&t, &word, code.alpha, &order).unwrap();
            if eq1 != eq2 || eq1 != kernel.contains(&w) {
                problems.push(format!("code {i}: membership tests disagree on {w:?}"));
                break;
            }
        }
    }
    let elapsed = start.elapsed();
    if !within(elapsed, 60) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    outcome(problems.is_empty(), if problems.is_empty() { "|S|=56 |P|=28 N=8 k=2 d=5".into() } else { problems.join("; ") })
}

fn orbit_witnesses() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut pairs = 0;
    for t in [tower(2, 1, 3, 2), tower(2, 1, 2, 2)] {
        let mid = t.mid();
        let Params { n, r, .. } = t.params();
        let roots = degree_filter(&t);
        let orbits = t_orbits(&t, &roots);
        let lib_orbits: Vec<BTreeSet<u32>> = OrbitData::compute(&t)
            .unwrap()
            .s_orbits
            .iter()
            .map(|o| o.members.iter().map(|a| a.value()).collect())
            .collect();
        if BTreeSet::from_iter(orbits.iter().cloned()) != BTreeSet::from_iter(lib_orbits) {
            problems.push(format!("{:?}: orbit partition differs from closure oracle", t.params()));
        }
        let words: std::collections::HashMap<u32, HashSet<Vec<u32>>> =
            roots.iter().map(|&a| (a.value(), kernel_oracle(&t, a).into_iter().collect())).collect();
        for orbit in &orbits {
            for &a in orbit {
                for &b in orbit {
                    pairs += 1;
                    let (alpha, beta) = (t.top().elem(a).unwrap(), t.top().elem(b).unwrap());
                    let rho = (0..(n * r) as i64)
                        .flat_map(|j| mid.elements().filter(|z| !z.is_zero()).map(move |z| (z, j)))
                        .find_map(|(z, j)| build_rho(&t, z, j, alpha, beta).ok());
                    let Some(rho) = rho else {
                        problems.push(format!("no compatible quadruple for ({a}, {b})"));
                        continue;
                    };
                    let w = rho.inverse();
                    let image: HashSet<Vec<u32>> = words[&a].iter().map(|c| moved(c, w.image())).collect();
                    if image != words[&b] {
                        problems.push(format!("witness fails for ({a}, {b})"));
                    }
                    if membership_in_fg(&t, &w).is_none() {
                        problems.push(format!("witness for ({a}, {b}) is not semiaffine"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if !within(elapsed, 300) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    problems.truncate(5);
    outcome(problems.is_empty(), if problems.is_empty() { format!("{pairs} ordered pairs verified") } else { problems.join("; ") })
}

fn rho_exhaustive() -> Outcome {
    let start = Instant::now();
    let t = tower(2, 1, 3, 2);
    let (mid, top) = (t.mid(), t.top());
    let cols = columns(&t);
    let row = |a: FieldElem| -> Vec<FieldElem> { cols.iter().map(|&e| top.inv(top.sub(a, t.lift(e))).unwrap()).collect() };
    let roots = degree_filter(&t);
    let alpha = roots[0];
    let h_alpha = row(alpha);
    // β = a α^{q^i} + b is linked to α by j = −i and ζ = a^{q^j}; the last two targets
    // use an arbitrary (ζ, j), and admit permutations exactly when compatible.
    let nr = 6;
    let linked = [(1, None, 1), (2, Some(3), 2), (4, Some(0), 3), (6, Some(5), 5), (0, Some(1), 0)];
    let mut samples = Vec::new();
    for (ea, eb, i) in linked {
        let a = mid.exp(ea);
        let b = eb.map_or(mid.zero(), |e| mid.exp(e));
        let beta = top.add(top.mul(t.lift(a), t.frobenius(alpha, i)), t.lift(b));
        let j = (nr - i) % nr;
        samples.push((beta, t.frobenius(a, j), j, true));
    }
    samples.push((roots[17], mid.exp(3), 2, false));
    samples.push((roots[40], mid.exp(5), 1, false));
    let mut problems = Vec::new();
    let mut compatible_targets = 0;
    let mut total_matches = 0;
    for (beta, zeta, j, linked) in samples {
        let target: Vec<FieldElem> =
            row(beta).iter().map(|&h| top.mul(t.lift(zeta), t.frobenius(h, j))).collect();
        let mut matches = Vec::new();
        each_permutation(8, |perm| {
            if (0..8).all(|i| h_alpha[perm[i]] == target[i]) {
                matches.push(perm.to_vec());
            }
        });
        let compatible = build_rho(&t, zeta, j, alpha, beta).is_ok();
        if linked && !compatible {
            problems.push(format!("linked target (β #{}, j={j}) reported incompatible", beta.value()));
        }
        compatible_targets += compatible as usize;
        total_matches += matches.len();
        if compatible && matches.is_empty() {
            problems.push(format!("no permutation for compatible target (β #{}, j={j})", beta.value()));
        }
        if !compatible && !matches.is_empty() {
            problems.push(format!("incompatible target (β #{}, j={j}) has {} matches", beta.value(), matches.len()));
        }
        for m in &matches {
            let perm = goppa_equiv::perms::ColumnPerm::from_image(m.clone()).unwrap();
            if membership_in_fg(&t, &perm).is_none() {
                problems.push(format!("match {m:?} is not in AΓL(1,8)"));
            }
        }
    }
    if compatible_targets < 3 {
        problems.push(format!("only {compatible_targets} compatible targets"));
    }
    let elapsed = start.elapsed();
    if !within(elapsed, 600) {
        problems.push(format!("runtime {elapsed:?}"));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!("{compatible_targets} compatible targets, {total_matches} matches, all semiaffine")
        } else {
            problems.join("; ")
        },
    )
}

/// Also returns the cases where the literal containment claim fails and whether every
/// other check held.
fn parity() -> (Outcome, Vec<(u32, u32)>, bool) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut claim_fails = Vec::new();
    for (q, n) in [(2, 2), (2, 3), (2, 4), (4, 2), (3, 2), (5, 2)] {
        let t = field_tower(q, n).unwrap();
        let mid = t.mid();
        let elems: Vec<FieldElem> = mid.elements().collect();
        let index = |x: FieldElem| elems.iter().position(|&y| y == x).unwrap();
        let maps: [Box<dyn Fn(FieldElem) -> FieldElem>; 3] = [
            Box::new(|x| mid.add(x, mid.primitive())),
            Box::new(|x| mid.mul(x, mid.primitive())),
            Box::new(|x| mid.pow(x, q as u64)),
        ];
        let oracle = maps.iter().all(|g| sign_by_inversions(&elems.iter().map(|&x| index(g(x))).collect::<Vec<_>>()) == 1);
        let lib = fg_in_alternating(q, n).unwrap();
        if lib != oracle {
            problems.push(format!("q={q} n={n}: library {lib}, inversion oracle {oracle}"));
        }
        if lib != (q % 2 == 0) {
            claim_fails.push((q, n));
        }
    }
    for d in 1..=4 {
        let t = field_tower(2, d).unwrap();
        let tau = perm_of_semiaffine(&t, &SemiaffineMap::tau(&t, d));
        if tau.cycle_type() != vec![2; 1 << (d - 1)] {
            problems.push(format!("translation on F_2^{d}: {:?}", tau.cycle_type()));
        }
    }
    let t = field_tower(3, 2).unwrap();
    let mu = perm_of_semiaffine(&t, &SemiaffineMap::mu(&t, 2));
    if sign_by_inversions(mu.image()) != -1 || mu.sign() != -1 {
        problems.push("μ_ε on F_9 is not odd".into());
    }
    if !within(start.elapsed(), 60) {
        problems.push(format!("runtime {:?}", start.elapsed()));
    }
    let passed = problems.is_empty() && claim_fails.is_empty();
    let detail = if passed {
        "containment iff q even on all six cases".to_string()
    } else {
        let mut parts: Vec<String> = claim_fails
            .iter()
            .map(|(q, n)| format!("containment claim fails at q={q} n={n} (q^n={}: σ is a single transposition)", q.pow(*n)))
            .collect();
        parts.extend(problems.iter().cloned());
        parts.join("; ")
    };
    let others_ok = problems.is_empty();
    (outcome(passed, detail), claim_fails, others_ok)
}

fn agl_embedding() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    for (q, n) in [(2, 3), (3, 2), (2, 4), (4, 2)] {
        let t = field_tower(q, n).unwrap();
        let mid = t.mid();
        let p = mid.characteristic();
        let gens = SemiaffineMap::generators(&t, n);
        let embed = |g: &SemiaffineMap| {
            let rep = affine_embed(&t, g).unwrap();
            for x in mid.elements() {
                let coords = mid.coeffs(x);
                let image: Vec<u32> = rep
                    .matrix
                    .iter()
                    .zip(&rep.translation)
                    .map(|(row, &v)| (row.iter().zip(&coords).map(|(a, b)| a * b).sum::<u32>() + v) % p)
                    .collect();
                assert_eq!(image, mid.coeffs(g.apply_field(&t, x)), "representation disagrees with the map");
            }
            rep
        };
        for a in &gens {
            for b in &gens {
                let ab = a.compose(&t, b).unwrap();
                if embed(&ab) != embed(a).compose(&embed(b)) {
                    problems.push(format!("q={q} n={n}: not multiplicative on a generator pair"));
                }
            }
        }
        for b in mid.elements() {
            let rep = embed(&SemiaffineMap::on_field(&t, mid.one(), b, 0).unwrap());
            let identity = rep.matrix.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == (i == j) as u32));
            if !identity || rep.translation != mid.coeffs(b) {
                problems.push(format!("q={q} n={n}: translation by {} is not a pure translation", b.value()));
            }
        }
    }
    if !within(start.elapsed(), 60) {
        problems.push(format!("runtime {:?}", start.elapsed()));
    }
    outcome(problems.is_empty(), if problems.is_empty() { "q^n in {8, 9, 16}".into() } else { problems.join("; ") })
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let t = tower(2, 1, 3, 2);
    let f = t.base();
    let data = OrbitData::compute(&t).unwrap();
    let codes: Vec<_> = (0..data.polys.len()).map(|i| code_of_root(&t, data.polys.root(i)).unwrap().code).collect();
    let mut problems = Vec::new();
    let mut pairs = 0;
    let mut equivalent = 0;
    for i in 0..codes.len() {
        for j in i + 1..codes.len() {
            pairs += 1;
            let fast = are_perm_equivalent(f, &codes[i], &codes[j]).unwrap().is_equivalent();
            let lib_brute = brute_force_equiv(f, &codes[i], &codes[j]).unwrap().is_equivalent();
            let oracle = equivalent_oracle(f, &codes[i].generator_values(), &codes[j].generator_values(), 8);
            equivalent += oracle as usize;
            if fast != oracle || lib_brute != oracle {
                problems.push(format!("Goppa pair ({i},{j}): fast {fast} brute {lib_brute} oracle {oracle}"));
            }
        }
    }
    if pairs != 378 {
        problems.push(format!("{pairs} pairs"));
    }
    let synthetic = synthetic_pairs();
    let mut syn_equivalent = 0;
    for (idx, (f, a, b)) in synthetic.iter().enumerate() {
        let fast = are_perm_equivalent(f, a, b).unwrap().is_equivalent();
        let lib_brute = brute_force_equiv(f, a, b).unwrap().is_equivalent();
        let oracle = a.dim() == b.dim() && equivalent_oracle(f, &a.generator_values(), &b.generator_values(), 8);
        syn_equivalent += oracle as usize;
        if fast != oracle || lib_brute != oracle {
            problems.push(format!("synthetic pair {idx}: fast {fast} brute {lib_brute} oracle {oracle}"));
        }
    }
    if !within(start.elapsed(), 1800) {
        problems.push(format!("runtime {:?}", start.elapsed()));
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            format!(
                "{pairs} Goppa pairs ({equivalent} equivalent), {} synthetic pairs ({syn_equivalent} equivalent)",
                synthetic.len()
            )
        } else {
            problems.join("; ")
        },
    )
}

fn classification() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut summary = Vec::new();
    for t in [tower(2, 1, 3, 2), tower(2, 1, 2, 2), tower(3, 1, 2, 2), tower(2, 2, 2, 2)] {
        let Params { p, m, n, r } = t.params();
        let label = format!("({p},{m},{n},{r})");
        let (mid, top) = (t.mid(), t.top());
        let roots = degree_filter(&t);
        let s_orbits = t_orbits(&t, &roots);
        // AΓL(1,q^n) on conjugacy classes of roots, i.e. on P
        let conj = |a: u32| -> Vec<u32> {
            let mut c: Vec<u32> = (0..r as i64).map(|j| t.frobenius(top.elem(a).unwrap(), n as i64 * j).value()).collect();
            c.sort_unstable();
            c
        };
        let mut p_orbits: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        for &alpha in &roots {
            let cls = conj(alpha.value());
            if seen.contains(&cls) {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for a in mid.elements().filter(|a| !a.is_zero()) {
                for b in mid.elements() {
                    for s in 0..n as i64 {
                        let image = top.add(top.mul(t.lift(a), t.frobenius(alpha, s)), t.lift(b));
                        orbit.insert(conj(image.value()));
                    }
                }
            }
            seen.extend(orbit.iter().cloned());
            p_orbits.push(orbit);
        }
        let correspondence = s_orbits.len() == p_orbits.len()
            && s_orbits.iter().all(|o| {
                let classes: BTreeSet<Vec<u32>> = o.iter().map(|&a| conj(a)).collect();
                p_orbits.contains(&classes)
            });
        let data = OrbitData::compute(&t).unwrap();
        if !correspondence || !data.correspondence {
            problems.push(format!("{label}: correspondence oracle {correspondence} library {}", data.correspondence));
        }
        let c = classify_with_orbits(&t, &data, false).unwrap();
        if c.orbit_count != s_orbits.len() {
            problems.push(format!("{label}: orbit count {} vs oracle {}", c.orbit_count, s_orbits.len()));
        }
        if c.class_count > c.orbit_count {
            problems.push(format!("{label}: {} classes exceed {} orbits", c.class_count, c.orbit_count));
        }
        if t.length() <= 8 {
            let f = t.base();
            let mut reps: Vec<Vec<Vec<u32>>> = Vec::new();
            for i in 0..data.polys.len() {
                let g = code_of_root(&t, data.polys.root(i)).unwrap().code.generator_values();
                if !reps.iter().any(|h| equivalent_oracle(f, h, &g, t.length())) {
                    reps.push(g);
                }
            }
            if reps.len() != c.class_count {
                problems.push(format!("{label}: {} classes vs oracle {}", c.class_count, reps.len()));
            }
        }
        summary.push(format!("{label} orbits {} classes {} gap {}", c.orbit_count, c.class_count, c.gap));
    }
    outcome(
        problems.is_empty(),
        format!("{} [{:.1?}]", if problems.is_empty() { summary.join(", ") } else { problems.join("; ") }, start.elapsed()),
    )
}

fn main() {
    // `cargo test -- --list` and similar harness flags
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut unexpected = 0;
    let mut report = |id: usize, name: &str, o: Outcome, expected_failure: bool| {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let note = if !o.passed && expected_failure { " (expected failure, see project notes)" } else { "" };
        println!("criterion {id} {name:<20} {status}{note}: {}", o.detail);
        if !o.passed && !expected_failure {
            unexpected += 1;
        }
    };
    report(1, "construction", construction(), false);
    report(2, "orbit-witnesses", orbit_witnesses(), false);
    report(3, "rho-exhaustive", rho_exhaustive(), false);
    let (parity_outcome, claim_fails, others_ok) = parity();
    // Only the q^n = 4 counterexample is tolerated; any other deviation counts.
    let known = claim_fails == [(2, 2)] && others_ok;
    report(4, "parity", parity_outcome, known);
    report(5, "agl-embedding", agl_embedding(), false);
    report(6, "oracle-equivalence", oracle_equivalence(), false);
    report(7, "classification", classification(), false);
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
