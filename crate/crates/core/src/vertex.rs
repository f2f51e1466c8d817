//! Chern character operators `𝔊_k(α)` and their orbifold counterparts.
//!
//! An operator is a weighted sum of `a_λ(τ_*(εα))` with `|λ| = 0`. The
//! infinite λ-sum is truncated per monomial: annihilation parts must match
//! entries of the monomial they act on.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{apply_a_lambda_tau, heisenberg_basis, Bracket, FockVector, Monomial};
use crate::partition::{partitions_with_length, GenPartition};
use crate::rational::{self, q, Q};
use crate::surface::{GradedClass, SurfaceModel};

/// Classes `ε ∈ {K, K²}` multiplying the terms with unknown coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Epsilon {
    K,
    K2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermTag {
    Known,
    /// Weight `g_ε(λ)/λ^!` is not known; the term must die in the quotient.
    KIdeal(Epsilon),
}

#[derive(Clone, Debug)]
pub struct OperatorTerm {
    /// `None` for `KIdeal` terms.
    pub weight: Option<Q>,
    pub lambda: GenPartition,
    pub class: GradedClass,
    pub tag: TermTag,
}

#[derive(Clone, Debug)]
pub struct OperatorExpression {
    pub k: u32,
    pub alpha: GradedClass,
    pub terms: Vec<OperatorTerm>,
}

impl OperatorExpression {
    pub fn k_term_count(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.tag != TermTag::Known)
            .count()
    }
}

/// Generalized partitions with `ℓ(λ) = len`, `|λ| = 0`, positive part sum at
/// most `max_annihilation`. Empty λ is never produced.
pub fn zero_sum_partitions(len: usize, max_annihilation: u32) -> Vec<GenPartition> {
    let mut out = Vec::new();
    for total in 1..=max_annihilation {
        for q_len in 1..len {
            for pos in partitions_with_length(total, q_len) {
                for neg in partitions_with_length(total, len - q_len) {
                    let parts = pos
                        .iter()
                        .map(|p| *p as i64)
                        .chain(neg.iter().map(|p| -(*p as i64)));
                    out.push(GenPartition::from_parts(parts).expect("nonzero parts"));
                }
            }
        }
    }
    out
}

fn known_weight_main(l: &GenPartition) -> Q {
    -(Q::one() / l.mult_factorial())
}

fn known_weight_euler(l: &GenPartition) -> Q {
    q(l.square_sum() - 2) / (q(24) * l.mult_factorial())
}

/// `𝔊_k(α)` with λ truncated at `max_annihilation`. The orbifold operator is
/// the same expression without the `K` terms.
pub fn chern_operator(
    model: &SurfaceModel,
    k: u32,
    alpha: &GradedClass,
    max_annihilation: u32,
) -> Result<OperatorExpression> {
    let mut op = orbifold_operator(model, k, alpha, max_annihilation)?;
    for (eps, class, len) in k_classes(model, k, alpha) {
        for l in zero_sum_partitions(len, max_annihilation) {
            op.terms.push(OperatorTerm {
                weight: None,
                lambda: l,
                class: class.clone(),
                tag: TermTag::KIdeal(eps),
            });
        }
    }
    Ok(op)
}

/// `𝔒_k(α)`: the first two sums only.
pub fn orbifold_operator(
    model: &SurfaceModel,
    k: u32,
    alpha: &GradedClass,
    max_annihilation: u32,
) -> Result<OperatorExpression> {
    model.check_class(alpha)?;
    let mut terms = Vec::new();
    for l in zero_sum_partitions(k as usize + 2, max_annihilation) {
        terms.push(OperatorTerm {
            weight: Some(known_weight_main(&l)),
            lambda: l,
            class: alpha.clone(),
            tag: TermTag::Known,
        });
    }
    let ea = model.mul_unchecked(&model.euler, alpha);
    if !ea.is_zero() {
        for l in zero_sum_partitions(k as usize, max_annihilation) {
            terms.push(OperatorTerm {
                weight: Some(known_weight_euler(&l)),
                lambda: l,
                class: ea.clone(),
                tag: TermTag::Known,
            });
        }
    }
    Ok(OperatorExpression {
        k,
        alpha: alpha.clone(),
        terms,
    })
}

/// Nonzero `(ε, εα, ℓ(λ))` for the unknown-coefficient sums.
fn k_classes(
    model: &SurfaceModel,
    k: u32,
    alpha: &GradedClass,
) -> Vec<(Epsilon, GradedClass, usize)> {
    let kk = &model.canonical;
    let mut out = Vec::new();
    if kk.is_zero() {
        return out;
    }
    let ka = model.mul_unchecked(kk, alpha);
    if !ka.is_zero() {
        out.push((Epsilon::K, ka, k as usize + 1));
    }
    let k2a = model.mul_unchecked(&model.mul_unchecked(kk, kk), alpha);
    if !k2a.is_zero() && k >= 1 {
        out.push((Epsilon::K2, k2a, k as usize));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Walks the recursion for `τ_{ℓ*}` and prunes vanishing branches.
    Tree,
    /// Expands the full Künneth tensor first.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Hilbert,
    Orbifold,
}

/// Applies Chern-type operators to Fock vectors for one model and bracket.
/// In reduced mode inputs carry no `S_ℐ` labels and outputs are taken
/// modulo `I^[n]`.
pub struct Applier<'m> {
    pub model: &'m SurfaceModel,
    pub bracket: Bracket,
    pub side: Side,
    pub reduced: bool,
    pub strategy: Strategy,
    by_b: Vec<(usize, Vec<(usize, Q)>)>,
}

impl<'m> Applier<'m> {
    pub fn new(
        model: &'m SurfaceModel,
        side: Side,
        bracket: Bracket,
        reduced: bool,
    ) -> Result<Self> {
        if reduced && model.ideal.is_none() {
            return Err(Error::NoIdeal);
        }
        let mut groups: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for (a, b, c) in model.copairing()? {
            groups.entry(*b).or_default().push((*a, c.clone()));
        }
        Ok(Self {
            model,
            bracket,
            side,
            reduced,
            strategy: Strategy::Tree,
            by_b: groups.into_iter().collect(),
        })
    }

    pub fn hilbert(model: &'m SurfaceModel, reduced: bool) -> Result<Self> {
        Self::new(model, Side::Hilbert, Bracket::hilbert(), reduced)
    }

    pub fn orbifold(model: &'m SurfaceModel, s: Q, reduced: bool) -> Result<Self> {
        Self::new(model, Side::Orbifold, Bracket::orbifold(s)?, reduced)
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Whether the unknown `g_ε(λ)` can be avoided for this applier.
    pub fn check_gate(&self) -> Result<()> {
        if self.side == Side::Orbifold || self.model.canonical.is_zero() {
            return Ok(());
        }
        let k_in_ideal = self
            .model
            .ideal
            .as_ref()
            .is_some_and(|i| i.contains(&self.model.canonical));
        if self.reduced && k_in_ideal {
            return Ok(());
        }
        Err(Error::Computability(format!(
            "K = {} is nonzero{}",
            self.model.format_class(&self.model.canonical),
            if k_in_ideal {
                " and the computation is not taken modulo the ideal"
            } else {
                " and not in the restriction ideal"
            }
        )))
    }

    fn prune_creation_label(&self, n: i64, c: usize) -> bool {
        self.reduced && n < 0 && self.model.in_ideal(c)
    }

    fn in_ideal(&self, x: &GradedClass) -> bool {
        self.reduced && self.model.ideal.as_ref().is_some_and(|i| i.contains(x))
    }

    /// `a_{parts}(τ_*x)` on `v`, parts in operator order (leftmost first).
    pub fn apply_word(&self, parts: &[i64], x: &GradedClass, v: &FockVector) -> Result<FockVector> {
        match self.strategy {
            Strategy::Tree => {
                let mut out = FockVector::zero();
                let Some(first) = parts.first() else {
                    return Err(Error::Usage("a_λ needs ℓ(λ) ≥ 1".into()));
                };
                if !(*first < 0 && self.in_ideal(x)) {
                    self.tree(
                        parts,
                        parts.len() - 1,
                        x.clone(),
                        v.clone(),
                        Q::one(),
                        &mut out,
                    );
                }
                Ok(out)
            }
            Strategy::Raw => {
                let l = GenPartition::from_parts(parts.iter().copied())?;
                if l.parts_ascending() != parts {
                    return Err(Error::Internal("raw path expects ascending parts".into()));
                }
                let out = apply_a_lambda_tau(self.model, &self.bracket, &l, x, v)?;
                Ok(if self.reduced {
                    self.drop_ideal(out)
                } else {
                    out
                })
            }
        }
    }

    fn drop_ideal(&self, mut v: FockVector) -> FockVector {
        v.retain(|m, _| !m.has_ideal_label(self.model));
        v
    }

    fn tree(
        &self,
        parts: &[i64],
        pos: usize,
        x: GradedClass,
        v: FockVector,
        w: Q,
        out: &mut FockVector,
    ) {
        let n = parts[pos];
        if pos == 0 {
            for (c, coef) in x.iter() {
                if self.prune_creation_label(n, c) {
                    continue;
                }
                let r = heisenberg_basis(self.model, &self.bracket, n, c, &v);
                out.add_scaled(&r, &(&w * coef));
            }
            return;
        }
        for (b, pairs) in &self.by_b {
            if self.prune_creation_label(n, *b) {
                continue;
            }
            let nv = heisenberg_basis(self.model, &self.bracket, n, *b, &v);
            if nv.is_zero() {
                continue;
            }
            for (a, c) in pairs {
                let nx = self.model.mul_by_basis(&x, *a);
                if nx.is_zero() || self.in_ideal(&nx) && parts[0] < 0 {
                    continue;
                }
                self.tree(parts, pos - 1, nx, nv.clone(), &w * c, out);
            }
        }
    }

    /// Known part of `𝔊_k(α)` (or `𝔒_k(α)`) on `v`; no gate check.
    pub fn apply_known(&self, k: u32, alpha: &GradedClass, v: &FockVector) -> Result<FockVector> {
        let ea = self.model.mul_unchecked(&self.model.euler, alpha);
        let mut out = FockVector::zero();
        for (m, coef) in v.iter() {
            let single = FockVector::monomial(m.clone(), coef.clone());
            for l in lambdas_for(m, k as usize + 2) {
                let r = self.apply_word(&l.parts_ascending(), alpha, &single)?;
                out.add_scaled(&r, &known_weight_main(&l));
            }
            if k >= 1 && !ea.is_zero() {
                for l in lambdas_for(m, k as usize) {
                    let r = self.apply_word(&l.parts_ascending(), &ea, &single)?;
                    out.add_scaled(&r, &known_weight_euler(&l));
                }
            }
        }
        Ok(out)
    }

    /// Full operator. Unknown-coefficient terms are applied with weight one
    /// and must vanish, which the gate guarantees.
    pub fn apply(&self, k: u32, alpha: &GradedClass, v: &FockVector) -> Result<FockVector> {
        self.check_gate()?;
        if self.reduced && v.iter().any(|(m, _)| m.has_ideal_label(self.model)) {
            return Err(Error::Internal(
                "reduced input carries an ideal label".into(),
            ));
        }
        let out = self.apply_known(k, alpha, v)?;
        if self.side == Side::Hilbert {
            for ((eps, l), marker) in self.k_markers(k, alpha, v)? {
                if !marker.is_zero() {
                    return Err(Error::Internal(format!(
                        "unknown-coefficient term {eps:?} λ={:?} survives",
                        l.parts_ascending()
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Each `a_λ(τ_*(εα))` term of `𝔊_k(α)` on `v` with unit weight, grouped
    /// by `(ε, λ)`. Zero vectors are kept so callers see every term.
    pub fn k_markers(
        &self,
        k: u32,
        alpha: &GradedClass,
        v: &FockVector,
    ) -> Result<Vec<((Epsilon, GenPartition), FockVector)>> {
        let mut acc: BTreeMap<(Epsilon, GenPartition), FockVector> = BTreeMap::new();
        for (eps, class, len) in k_classes(self.model, k, alpha) {
            for (m, coef) in v.iter() {
                let single = FockVector::monomial(m.clone(), coef.clone());
                for l in lambdas_for(m, len) {
                    let r = self.apply_word(&l.parts_ascending(), &class, &single)?;
                    acc.entry((eps, l)).or_default().add_scaled(&r, &Q::one());
                }
            }
        }
        Ok(acc.into_iter().collect())
    }

    /// `G_k(α, n) = 𝔊_k(α) 1_{-n}|0⟩` (zero for `n = 0`).
    pub fn g_class(&self, k: u32, alpha: &GradedClass, n: u32) -> Result<FockVector> {
        if n == 0 {
            return Ok(FockVector::zero());
        }
        self.apply(k, alpha, &FockVector::unit_class(self.model, n))
    }
}

/// The λ with `ℓ(λ) = len`, `|λ| = 0` whose positive parts form a
/// sub-multiset of the weights of `m`.
fn lambdas_for(m: &Monomial, len: usize) -> Vec<GenPartition> {
    if len < 2 {
        return Vec::new();
    }
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for (n, _) in m.entries() {
        *counts.entry(*n).or_insert(0) += 1;
    }
    let values: Vec<(u32, u32)> = counts.into_iter().collect();
    let mut subs: Vec<Vec<u32>> = Vec::new();
    fn go(
        values: &[(u32, u32)],
        i: usize,
        left: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for j in i..values.len() {
            let (val, cnt) = values[j];
            let used = cur.iter().filter(|x| **x == val).count() as u32;
            if used < cnt {
                cur.push(val);
                go(values, j, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    go(&values, 0, len - 1, &mut Vec::new(), &mut subs);
    let mut out = Vec::new();
    for pos in subs {
        let total: u32 = pos.iter().sum();
        for neg in partitions_with_length(total, len - pos.len()) {
            let parts = pos
                .iter()
                .map(|p| *p as i64)
                .chain(neg.iter().map(|p| -(*p as i64)));
            out.push(GenPartition::from_parts(parts).expect("nonzero parts"));
        }
    }
    out
}

/// Applies a materialised expression; `KIdeal` terms require reduction and
/// are asserted to vanish.
pub fn apply_operator(
    applier: &Applier,
    op: &OperatorExpression,
    v: &FockVector,
) -> Result<FockVector> {
    if op.k_term_count() > 0 {
        applier.check_gate()?;
    }
    let mut out = FockVector::zero();
    for t in &op.terms {
        let r = applier.apply_word(&t.lambda.parts_ascending(), &t.class, v)?;
        match &t.weight {
            Some(w) => out.add_scaled(&r, w),
            None => {
                let reduced = if applier.reduced {
                    r
                } else {
                    crate::fock::reduce_mod_ideal(applier.model, &r)?
                };
                if !reduced.is_zero() {
                    return Err(Error::Internal("unknown-coefficient term survives".into()));
                }
            }
        }
    }
    Ok(out)
}

/// The known sums of the closed formula for `G_k(α, n)` as creation
/// monomials on `1_{-(n-j-1)}`.
pub fn g_class_closed_form(
    model: &SurfaceModel,
    k: u32,
    alpha: &GradedClass,
    n: u32,
) -> Result<FockVector> {
    let br = Bracket::hilbert();
    let ea = model.mul(&model.euler, alpha)?;
    let mut out = FockVector::zero();
    for j in 0..=k {
        if j + 1 > n {
            break;
        }
        let base = FockVector::unit_class(model, n - j - 1);
        let size = j + 1;
        let main_len = (k - j + 1) as usize;
        for lam in partitions_with_length(size, main_len) {
            let l = GenPartition::from_parts(lam.iter().map(|p| *p as i64))?;
            let neg = l.negate();
            let w = rational::sign((size - 1) % 2 == 1)
                / (l.mult_factorial() * rational::factorial(size as u64));
            let r = apply_a_lambda_tau(model, &br, &neg, alpha, &base)?;
            out.add_scaled(&r, &w);
        }
        if k > j && !ea.is_zero() {
            let len = (k - j - 1) as usize;
            if len == 0 {
                continue;
            }
            for lam in partitions_with_length(size, len) {
                let l = GenPartition::from_parts(lam.iter().map(|p| *p as i64))?;
                let neg = l.negate();
                let w = rational::sign(size % 2 == 1)
                    / (l.mult_factorial() * rational::factorial(size as u64))
                    * q(size as i64 + l.square_sum() - 2)
                    / q(24);
                let r = apply_a_lambda_tau(model, &br, &neg, &ea, &base)?;
                out.add_scaled(&r, &w);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::fock::{b_class, creation_word, reduce_mod_ideal};
    use crate::partition::enumerate_basis;
    use crate::rational::frac;

    #[test]
    fn zero_sum_partition_enumeration() {
        let ls = zero_sum_partitions(2, 3);
        assert_eq!(ls.len(), 3);
        for l in zero_sum_partitions(4, 4) {
            assert_eq!(l.length(), 4);
            assert_eq!(l.size(), 0);
        }
        assert!(zero_sum_partitions(0, 5).is_empty());
        assert!(zero_sum_partitions(1, 5).is_empty());
    }

    #[test]
    fn k_free_models_have_no_markers() {
        let m = builtin::toy();
        let op = chern_operator(&m, 2, &GradedClass::basis(0), 4).unwrap();
        assert_eq!(op.k_term_count(), 0);
        let c2 = builtin::c2();
        let op = chern_operator(&c2, 1, &GradedClass::basis(0), 3).unwrap();
        assert!(op.k_term_count() > 0);
        let orb = orbifold_operator(&c2, 1, &GradedClass::basis(0), 3).unwrap();
        assert_eq!(orb.k_term_count(), 0);
    }

    #[test]
    fn tree_matches_raw_expansion() {
        for m in builtin::all_models() {
            let tree = Applier::hilbert(&m, false).unwrap();
            let raw = Applier::hilbert(&m, false)
                .unwrap()
                .with_strategy(Strategy::Raw);
            for n in 1..=3 {
                for rho in enumerate_basis(&m.projective_base(), n) {
                    let v = b_class(&m, &rho, n);
                    for k in 0..=2 {
                        for a in 0..m.dim() {
                            let alpha = GradedClass::basis(a);
                            assert_eq!(
                                tree.apply_known(k, &alpha, &v).unwrap(),
                                raw.apply_known(k, &alpha, &v).unwrap(),
                                "{} n={n} k={k} a={a}",
                                m.name
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_tree_matches_reduction() {
        for m in [builtin::c2(), builtin::ale(2), builtin::cotangent(1)] {
            let up = Applier::hilbert(&m, false).unwrap();
            let down = Applier::hilbert(&m, true).unwrap();
            for n in 1..=3 {
                for rho in enumerate_basis(&m, n) {
                    let v = b_class(&m, &rho, n);
                    for k in 0..n {
                        for a in m.surviving_basis() {
                            let alpha = GradedClass::basis(a);
                            let full = up.apply_known(k, &alpha, &v).unwrap();
                            assert_eq!(
                                reduce_mod_ideal(&m, &full).unwrap(),
                                down.apply(k, &alpha, &v).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gate_rejects_projective_k() {
        let c2 = builtin::c2();
        let up = Applier::hilbert(&c2, false).unwrap();
        assert!(matches!(
            up.apply(0, &GradedClass::basis(0), &FockVector::unit_class(&c2, 2)),
            Err(Error::Computability(_))
        ));
        let proj = c2.projective_base();
        let a = Applier::hilbert(&proj, false).unwrap();
        assert!(matches!(a.check_gate(), Err(Error::Computability(_))));
        let toy = builtin::toy();
        assert!(Applier::hilbert(&toy, false).unwrap().check_gate().is_ok());
    }

    #[test]
    fn g_class_examples() {
        let toy = builtin::toy();
        let a = Applier::hilbert(&toy, false).unwrap();
        for c in 0..toy.dim() {
            let alpha = GradedClass::basis(c);
            for n in 1..=4 {
                let base = FockVector::unit_class(&toy, n - 1);
                let expect =
                    crate::fock::apply_heisenberg(&toy, &Bracket::hilbert(), -1, &alpha, &base)
                        .unwrap();
                assert_eq!(a.g_class(0, &alpha, n).unwrap(), expect, "c={c} n={n}");
            }
            assert!(a.g_class(2, &alpha, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn g_class_matches_closed_form() {
        for m in [
            builtin::toy(),
            builtin::k3_like(),
            builtin::cotangent(1).projective_base(),
        ] {
            let a = Applier::hilbert(&m, false).unwrap();
            for k in 0..=3 {
                for n in 1..=5 {
                    for c in 0..m.dim() {
                        let alpha = GradedClass::basis(c);
                        assert_eq!(
                            a.apply_known(k, &alpha, &FockVector::unit_class(&m, n))
                                .unwrap(),
                            g_class_closed_form(&m, k, &alpha, n).unwrap(),
                            "{} k={k} n={n} c={c}",
                            m.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn g_of_unit_modulo_positive_degrees() {
        let m = builtin::k3_like().with_positive_degree_ideal().unwrap();
        let a = Applier::hilbert(&m, true).unwrap();
        let one = GradedClass::basis(m.unit);
        for n in 1..=6u32 {
            for k in 0..n {
                let got = a.g_class(k, &one, n).unwrap();
                let base = FockVector::unit_class(&m, n - k - 1);
                let r = crate::fock::apply_heisenberg(
                    &m,
                    &Bracket::hilbert(),
                    -(k as i64 + 1),
                    &one,
                    &base,
                )
                .unwrap();
                let expect =
                    r.scaled(&(rational::sign(k % 2 == 1) / rational::factorial(k as u64 + 1)));
                assert_eq!(got, expect, "n={n} k={k}");
            }
        }
        let g = a.g_class(1, &one, 2).unwrap();
        let q2 = creation_word(&m, &[(2, one.clone())]).unwrap();
        assert_eq!(g, q2.scaled(&frac(-1, 2)));
    }

    #[test]
    fn degree_shift_of_operators() {
        let m = builtin::cotangent(1).projective_base();
        let a = Applier::hilbert(&m, false).unwrap();
        for rho in enumerate_basis(&m, 3) {
            let v = b_class(&m, &rho, 3);
            let d = rho.degree(&m);
            for k in 0..3 {
                for c in 0..m.dim() {
                    let out = a.apply_known(k, &GradedClass::basis(c), &v).unwrap();
                    if let Some(od) = out.is_homogeneous_degree(&m) {
                        assert_eq!(od, d + 2 * k + m.degree(c) as u32);
                    } else {
                        assert!(out.is_zero());
                    }
                }
            }
        }
    }
}
