//! Independent commutator identities used as test oracles. Left-hand sides
//! are evaluated by raw normal ordering; right-hand sides by closed forms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::{apply_word_tau, b_class, heisenberg_basis, Bracket, FockVector};
use crate::partition::enumerate_basis;
use crate::rational::{self, q};
use crate::report::CheckReport;
use crate::surface::{GradedClass, SurfaceModel};
use crate::vertex::Applier;

/// `[a_m(α), a_n(β)]` against `κ·m·δ_{m,−n}·∫αβ` on `v`.
pub fn heisenberg_relation_holds(
    model: &SurfaceModel,
    bracket: &Bracket,
    (m, a): (i64, usize),
    (n, b): (i64, usize),
    v: &FockVector,
) -> bool {
    let ab = heisenberg_basis(
        model,
        bracket,
        m,
        a,
        &heisenberg_basis(model, bracket, n, b, v),
    );
    let ba = heisenberg_basis(
        model,
        bracket,
        n,
        b,
        &heisenberg_basis(model, bracket, m, a, v),
    );
    let sign = rational::sign(model.is_odd(a) && model.is_odd(b));
    let lhs = &ab - &ba.scaled(&sign);
    let rhs = if m == -n {
        v.scaled(&(&bracket.kappa * q(m) * model.pairing(a, b)))
    } else {
        FockVector::zero()
    };
    lhs == rhs
}

/// Commutator of two `τ`-words against the single-contraction closed form.
pub fn ks_part_one(
    model: &SurfaceModel,
    bracket: &Bracket,
    ns: &[i64],
    alpha: usize,
    ms: &[i64],
    beta: usize,
    v: &FockVector,
) -> Result<bool> {
    let (a, b) = (GradedClass::basis(alpha), GradedClass::basis(beta));
    let bv = apply_word_tau(model, bracket, ms, &b, v)?;
    let av = apply_word_tau(model, bracket, ns, &a, v)?;
    let ab = apply_word_tau(model, bracket, ns, &a, &bv)?;
    let ba = apply_word_tau(model, bracket, ms, &b, &av)?;
    let sign = rational::sign(model.is_odd(alpha) && model.is_odd(beta));
    let lhs = &ab - &ba.scaled(&sign);

    let prod = model.mul(&a, &b)?;
    let mut rhs = FockVector::zero();
    for (t, nt) in ns.iter().enumerate() {
        for (j, mj) in ms.iter().enumerate() {
            if *nt != -*mj {
                continue;
            }
            let mut word: Vec<i64> = ms[..j].to_vec();
            word.extend(
                ns.iter()
                    .enumerate()
                    .filter(|(u, _)| *u != t)
                    .map(|(_, x)| *x),
            );
            word.extend_from_slice(&ms[j + 1..]);
            let term = apply_word_tau(model, bracket, &word, &prod, v)?;
            rhs.add_scaled(&term, &(&bracket.kappa * q(*nt)));
        }
    }
    Ok(lhs == rhs)
}

/// Swapping adjacent indices `j, j+1` of a `τ`-word, with the Euler-class
/// correction when they are opposite. `j` is zero-based.
pub fn ks_part_two(
    model: &SurfaceModel,
    bracket: &Bracket,
    ns: &[i64],
    j: usize,
    alpha: usize,
    v: &FockVector,
) -> Result<bool> {
    let a = GradedClass::basis(alpha);
    let lhs = apply_word_tau(model, bracket, ns, &a, v)?;
    let mut swapped = ns.to_vec();
    swapped.swap(j, j + 1);
    let mut rhs = apply_word_tau(model, bracket, &swapped, &a, v)?;
    if ns[j] == -ns[j + 1] {
        let ea = model.mul(&model.euler, &a)?;
        let rest: Vec<i64> = ns
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != j && *s != j + 1)
            .map(|(_, x)| *x)
            .collect();
        let corr = apply_word_tau(model, bracket, &rest, &ea, v)?;
        rhs.add_scaled(&corr, &(&bracket.kappa * q(ns[j])));
    }
    Ok(lhs == rhs)
}

/// A `g` whose `(k+2)`-fold commutators with creation operators vanish,
/// evaluated directly on `A = a_{-n_1}(α_1)⋯a_{-n_b}(α_b)|0⟩` and through the
/// expansion over increasing maps `σ_i`. `g_parity` is the parity of `g`.
pub fn nonsense1_holds<G>(
    model: &SurfaceModel,
    g: G,
    g_parity: bool,
    k: usize,
    word: &[(u32, usize)],
) -> Result<bool>
where
    G: Fn(&FockVector) -> Result<FockVector>,
{
    let br = Bracket::hilbert();
    let create = |n: u32, c: usize, v: &FockVector| heisenberg_basis(model, &br, -(n as i64), c, v);
    let mut a = FockVector::vacuum();
    for (n, c) in word.iter().rev() {
        a = create(*n, *c, &a);
    }
    let direct = g(&a)?;

    // nested commutator [[g, a_1], …, a_i] applied to `v`
    fn nested<G: Fn(&FockVector) -> Result<FockVector>>(
        model: &SurfaceModel,
        g: &G,
        g_parity: bool,
        ops: &[(u32, usize)],
        v: &FockVector,
    ) -> Result<FockVector> {
        let Some((&(n, c), inner)) = ops.split_last() else {
            return g(v);
        };
        let br = Bracket::hilbert();
        let inner_parity = inner
            .iter()
            .fold(g_parity, |p, (_, c)| p ^ model.is_odd(*c));
        let av = heisenberg_basis(model, &br, -(n as i64), c, v);
        let first = nested(model, g, g_parity, inner, &av)?;
        let cv = nested(model, g, g_parity, inner, v)?;
        let second = heisenberg_basis(model, &br, -(n as i64), c, &cv);
        let sign = rational::sign(inner_parity && model.is_odd(c));
        Ok(&first - &second.scaled(&sign))
    }

    let b = word.len();
    let mut expansion = FockVector::zero();
    for i in 0..=(k + 1).min(b) {
        for sigma in increasing_maps(i, b) {
            let rest: Vec<usize> = (0..b).filter(|l| !sigma.contains(l)).collect();
            let mut parity = false;
            for l in &rest {
                parity ^= g_parity && model.is_odd(word[*l].1);
            }
            for s in &sigma {
                for l in rest.iter().filter(|l| *l > s) {
                    parity ^= model.is_odd(word[*s].1) && model.is_odd(word[*l].1);
                }
            }
            let ops: Vec<(u32, usize)> = sigma.iter().map(|s| word[*s]).collect();
            let mut v = nested(model, &g, g_parity, &ops, &FockVector::vacuum())?;
            for l in rest.iter().rev() {
                v = create(word[*l].0, word[*l].1, &v);
            }
            expansion.add_scaled(&v, &rational::sign(parity));
        }
    }
    Ok(direct == expansion)
}

fn increasing_maps(i: usize, b: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, left: usize, b: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for s in start..b {
            cur.push(s);
            go(s + 1, left - 1, b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, i, b, &mut Vec::new(), &mut out);
    out
}

/// Index words of the given length over `values`.
pub fn index_words(values: &[i64], len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                values.iter().map(move |x| {
                    let mut w = w.clone();
                    w.push(*x);
                    w
                })
            })
            .collect();
    }
    out
}

/// `b_ρ(w)` for every basis `ρ` and `w ≤ max_weight`, on the projective model.
pub fn spanning_set(model: &SurfaceModel, max_weight: u32) -> Vec<FockVector> {
    let base = model.projective_base();
    (0..=max_weight)
        .flat_map(|w| {
            let base = &base;
            enumerate_basis(base, w)
                .into_iter()
                .map(move |r| b_class(base, &r, w))
        })
        .collect()
}

/// Heisenberg relations for all basis pairs and `0 < |m|, |n| ≤ max_index`.
pub fn verify_heisenberg(model: &SurfaceModel, max_index: i64, max_weight: u32) -> CheckReport {
    let base = model.projective_base();
    let br = Bracket::hilbert();
    let idx: Vec<i64> = (-max_index..=max_index).filter(|x| *x != 0).collect();
    let mut rep = CheckReport::default();
    for v in spanning_set(&base, max_weight) {
        for a in 0..base.dim() {
            for b in 0..base.dim() {
                for &m in &idx {
                    for &n in &idx {
                        let ok = heisenberg_relation_holds(&base, &br, (m, a), (n, b), &v);
                        rep.record(ok, || {
                            format!(
                                "[a_{m}({}), a_{n}({})] on {}",
                                base.name_of(a),
                                base.name_of(b),
                                v.format(&base)
                            )
                        });
                    }
                }
            }
        }
    }
    rep
}

fn random_index(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let x = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

/// Both parts of the commutator lemma. Word pairs with one index each are
/// checked exhaustively for `|n| ≤ 2` on vectors of weight at most 3; every
/// shape with total length at most `max_total` is then sampled `samples`
/// times, half of the samples forced to contain a contraction.
pub fn verify_ks(
    model: &SurfaceModel,
    max_total: usize,
    max_weight: u32,
    samples: usize,
    seed: u64,
) -> Result<CheckReport> {
    let base = model.projective_base();
    let br = Bracket::hilbert();
    let mut rep = CheckReport::default();
    let small = spanning_set(&base, max_weight.min(3));
    let vectors = spanning_set(&base, max_weight);
    let dim = base.dim();
    for ns in index_words(&[-2, -1, 1, 2], 1) {
        for ms in index_words(&[-2, -1, 1, 2], 1) {
            for a in 0..dim {
                for b in 0..dim {
                    for v in &small {
                        let ok = ks_part_one(&base, &br, &ns, a, &ms, b, v)?;
                        rep.record(ok, || {
                            format!("(i) {ns:?} {} {ms:?} {}", base.name_of(a), base.name_of(b))
                        });
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 1..max_total {
        for s in 1..=(max_total - k) {
            for t in 0..samples {
                let mut ns: Vec<i64> = (0..k).map(|_| random_index(&mut rng, 3)).collect();
                let mut ms: Vec<i64> = (0..s).map(|_| random_index(&mut rng, 3)).collect();
                if t % 2 == 0 {
                    let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..s));
                    ms[j] = -ns[i];
                }
                if t % 4 == 1 {
                    ns.iter_mut().for_each(|x| *x = x.abs());
                    ms.iter_mut().for_each(|x| *x = x.abs());
                }
                let (a, b) = (rng.gen_range(0..dim), rng.gen_range(0..dim));
                let v = vectors.choose(&mut rng).expect("nonempty spanning set");
                let ok = ks_part_one(&base, &br, &ns, a, &ms, b, v)?;
                rep.record(ok, || {
                    format!(
                        "(i) {ns:?} {} {ms:?} {} on {}",
                        base.name_of(a),
                        base.name_of(b),
                        v.format(&base)
                    )
                });
            }
        }
    }
    for k in 2..=max_total {
        for t in 0..samples {
            let mut ns: Vec<i64> = (0..k).map(|_| random_index(&mut rng, 3)).collect();
            let j = rng.gen_range(0..k - 1);
            if t % 2 == 0 {
                ns[j + 1] = -ns[j];
            }
            let a = rng.gen_range(0..dim);
            let v = vectors.choose(&mut rng).expect("nonempty spanning set");
            let ok = ks_part_two(&base, &br, &ns, j, a, v)?;
            rep.record(ok, || {
                format!(
                    "(ii) {ns:?} j={j} {} on {}",
                    base.name_of(a),
                    v.format(&base)
                )
            });
        }
    }
    Ok(rep)
}

/// Creation words `[(n_j, c_j)]` with `1 ≤ len ≤ max_len` and weight at most
/// `max_weight`, in every order.
pub fn creation_words(
    model: &SurfaceModel,
    max_len: usize,
    max_weight: u32,
) -> Vec<Vec<(u32, usize)>> {
    let mut out = Vec::new();
    fn go(
        model: &SurfaceModel,
        max_len: usize,
        rem: u32,
        cur: &mut Vec<(u32, usize)>,
        out: &mut Vec<Vec<(u32, usize)>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        for n in 1..=rem {
            for c in 0..model.dim() {
                cur.push((n, c));
                go(model, max_len, rem - n, cur, out);
                cur.pop();
            }
        }
    }
    go(model, max_len, max_weight, &mut Vec::new(), &mut out);
    out
}

/// A creation word, a Chern-character index and a class index.
type Case = (Vec<(u32, usize)>, u32, usize);

/// The σ-expansion for `𝔊_k(α)`, `k ≤ max_k`, on creation words. Models with
/// `K ≠ 0` use the known part of the operator, which has the same vanishing
/// commutator property. With `samples` set, that many (word, k, α) triples
/// are drawn instead of the full enumeration.
pub fn verify_nonsense1(
    model: &SurfaceModel,
    max_k: u32,
    max_len: usize,
    max_weight: u32,
    samples: Option<(usize, u64)>,
) -> Result<CheckReport> {
    let base = model.projective_base();
    let ap = Applier::hilbert(&base, false)?;
    let known_only = ap.check_gate().is_err();
    let mut cases: Vec<Case> = Vec::new();
    let mut words = creation_words(&base, max_len, max_weight);
    words.insert(0, Vec::new());
    for w in &words {
        for k in 0..=max_k {
            for c in 0..base.dim() {
                cases.push((w.clone(), k, c));
            }
        }
    }
    if let Some((count, seed)) = samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        cases = cases.choose_multiple(&mut rng, count).cloned().collect();
    }
    let mut rep = CheckReport::default();
    for (word, k, c) in cases {
        let alpha = GradedClass::basis(c);
        let g = |v: &FockVector| {
            if known_only {
                ap.apply_known(k, &alpha, v)
            } else {
                ap.apply(k, &alpha, v)
            }
        };
        let ok = nonsense1_holds(&base, g, base.is_odd(c), k as usize, &word)?;
        rep.record(ok, || format!("k={k} α={} word={word:?}", base.name_of(c)));
    }
    Ok(rep)
}
