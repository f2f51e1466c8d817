//! Fock space spanned by normally ordered creation monomials.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{sort_entries, Entry, GenPartition, PartitionFunction};
use crate::rational::{self, q, Q};
use crate::surface::{GradedClass, SurfaceModel};

/// `a_{-n_1}(c_1)⋯a_{-n_k}(c_k)|0⟩` with entries in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<Entry>);

impl Monomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Sorts `entries` canonically; `None` when an odd entry repeats.
    pub fn from_entries(model: &SurfaceModel, entries: &[Entry]) -> Option<(Self, bool)> {
        let mut m = Self::vacuum();
        let mut sign = false;
        for &(n, c) in entries.iter().rev() {
            let (next, s) = m.create(model, n, c)?;
            m = next;
            sign ^= s;
        }
        Some((m, sign))
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|e| e.0).sum()
    }

    pub fn degree(&self, model: &SurfaceModel) -> u32 {
        self.0
            .iter()
            .map(|(n, c)| 2 * (n - 1) + model.degree(*c) as u32)
            .sum()
    }

    pub fn has_ideal_label(&self, model: &SurfaceModel) -> bool {
        self.0.iter().any(|(_, c)| model.in_ideal(*c))
    }

    /// `a_{-n}(e_c)` applied in front, then moved to its canonical slot.
    /// Returns the Koszul sign as a parity.
    pub fn create(&self, model: &SurfaceModel, n: u32, c: usize) -> Option<(Self, bool)> {
        let odd = model.is_odd(c);
        let pos = self
            .0
            .iter()
            .position(|e| e.0 < n || (e.0 == n && e.1 >= c))
            .unwrap_or(self.0.len());
        if odd && self.0.get(pos) == Some(&(n, c)) {
            return None;
        }
        let sign = odd && self.0[..pos].iter().filter(|e| model.is_odd(e.1)).count() % 2 == 1;
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..pos]);
        v.push((n, c));
        v.extend_from_slice(&self.0[pos..]);
        Some((Self(v), sign))
    }

    fn without(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(j);
        Self(v)
    }

    pub fn to_partition(&self, unit: usize) -> PartitionFunction {
        PartitionFunction::from_entries(&self.0, unit)
    }
}

/// Value of the Heisenberg bracket: `[a_m(α), a_n(β)] = κ·m·δ_{m,−n}·∫αβ`.
/// The Hilbert-scheme side has `κ = −1`; the orbifold side uses `κ = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub kappa: Q,
}

impl Bracket {
    pub fn hilbert() -> Self {
        Self { kappa: -Q::one() }
    }

    pub fn orbifold(s: Q) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Usage("orbifold parameter s must be nonzero".into()));
        }
        Ok(Self { kappa: s })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<Monomial, Q>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(Monomial::vacuum(), Q::one())
    }

    pub fn monomial(m: Monomial, c: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    /// `1_{-n}|0⟩ = a_{-1}(1_X)^n / n! |0⟩`.
    pub fn unit_class(model: &SurfaceModel, n: u32) -> Self {
        let m = Monomial(vec![(1, model.unit); n as usize]);
        Self::monomial(m, Q::one() / rational::factorial(n as u64))
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, f: &Q) {
        if f.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * f);
        }
    }

    pub fn scaled(&self, f: &Q) -> FockVector {
        if f.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * f)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight of all monomials (`None` for zero or mixed weight).
    pub fn weight(&self) -> Option<u32> {
        let mut w = self.terms.keys().map(Monomial::weight);
        let first = w.next()?;
        w.all(|x| x == first).then_some(first)
    }

    pub fn check_weight(&self, n: u32) -> Result<()> {
        for m in self.terms.keys() {
            if m.weight() != n {
                return Err(Error::WeightMismatch {
                    expected: n as usize,
                    found: m.weight() as usize,
                });
            }
        }
        Ok(())
    }

    pub fn is_homogeneous_degree(&self, model: &SurfaceModel) -> Option<u32> {
        let mut d = self.terms.keys().map(|m| m.degree(model));
        let first = d.next()?;
        d.all(|x| x == first).then_some(first)
    }

    /// True when every monomial carries a label from `S_ℐ`.
    pub fn in_ideal(&self, model: &SurfaceModel) -> bool {
        self.terms.keys().all(|m| m.has_ideal_label(model))
    }

    pub fn retain(&mut self, f: impl FnMut(&Monomial, &mut Q) -> bool) {
        self.terms.retain(f);
    }

    pub fn format(&self, model: &SurfaceModel) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let ops: Vec<String> =
                    m.0.iter()
                        .map(|(n, i)| format!("a_-{}({})", n, model.name_of(*i)))
                        .collect();
                format!("{}·{}|0⟩", rational::pretty(c), ops.join(""))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl std::ops::Sub<&FockVector> for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl std::ops::Add<&FockVector> for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

/// `a_{-n}(e_c)` on `v`, accumulated into `out` with factor `f`.
pub(crate) fn create_into(
    model: &SurfaceModel,
    n: u32,
    c: usize,
    v: &FockVector,
    f: &Q,
    out: &mut FockVector,
) {
    for (m, x) in v.iter() {
        if let Some((nm, s)) = m.create(model, n, c) {
            let w = x * f;
            out.add_term(nm, if s { -w } else { w });
        }
    }
}

/// `a_n(e_b)` for `n > 0` on `v`, accumulated into `out` with factor `f`.
pub(crate) fn annihilate_into(
    model: &SurfaceModel,
    bracket: &Bracket,
    n: u32,
    b: usize,
    v: &FockVector,
    f: &Q,
    out: &mut FockVector,
) {
    let odd_b = model.is_odd(b);
    let base = &bracket.kappa * q(n as i64) * f;
    for (m, x) in v.iter() {
        let mut odd_before = false;
        for (j, &(nj, cj)) in m.0.iter().enumerate() {
            if nj == n {
                let p = model.pairing(b, cj);
                if !p.is_zero() {
                    let w = x * &base * p;
                    out.add_term(m.without(j), if odd_b && odd_before { -w } else { w });
                }
            }
            if model.is_odd(cj) {
                odd_before = !odd_before;
            }
        }
    }
}

/// `a_n(e_b)` for a single basis label and any nonzero `n`.
pub(crate) fn heisenberg_basis(
    model: &SurfaceModel,
    bracket: &Bracket,
    n: i64,
    b: usize,
    v: &FockVector,
) -> FockVector {
    let mut out = FockVector::zero();
    if n < 0 {
        create_into(model, (-n) as u32, b, v, &Q::one(), &mut out);
    } else {
        annihilate_into(model, bracket, n as u32, b, v, &Q::one(), &mut out);
    }
    out
}

/// `a_n(c)` applied to `v` with bracket value `κ`.
pub fn apply_heisenberg(
    model: &SurfaceModel,
    bracket: &Bracket,
    n: i64,
    c: &GradedClass,
    v: &FockVector,
) -> Result<FockVector> {
    if n == 0 {
        return Err(Error::ZeroIndex);
    }
    model.check_class(c)?;
    let mut out = FockVector::zero();
    for (b, x) in c.iter() {
        if n < 0 {
            create_into(model, (-n) as u32, b, v, x, &mut out);
        } else {
            annihilate_into(model, bracket, n as u32, b, v, x, &mut out);
        }
    }
    Ok(out)
}

/// `a_{i_1}⋯a_{i_k}(τ_{k*}a)` for an arbitrary index word; the empty word
/// is `τ_{0*}(a) = ∫a` times the identity.
pub fn apply_word_tau(
    model: &SurfaceModel,
    bracket: &Bracket,
    indices: &[i64],
    a: &GradedClass,
    v: &FockVector,
) -> Result<FockVector> {
    if indices.contains(&0) {
        return Err(Error::ZeroIndex);
    }
    if indices.is_empty() {
        return Ok(v.scaled(&model.integrate(a)));
    }
    let tensor = model.diagonal_pushforward(a, indices.len())?;
    let mut out = FockVector::zero();
    for (factors, w) in tensor.iter() {
        let mut cur = v.clone();
        for (p, c) in indices.iter().zip(factors).rev() {
            cur = heisenberg_basis(model, bracket, *p, *c, &cur);
            if cur.is_zero() {
                break;
            }
        }
        out.add_scaled(&cur, w);
    }
    Ok(out)
}

/// `a_λ(τ_*a)` by explicit expansion of `τ_{ℓ(λ)*}(a)` into tensor summands
/// and termwise application of the ordered operator word.
pub fn apply_a_lambda_tau(
    model: &SurfaceModel,
    bracket: &Bracket,
    lambda: &GenPartition,
    a: &GradedClass,
    v: &FockVector,
) -> Result<FockVector> {
    if lambda.is_empty() {
        return Err(Error::Usage("a_λ needs ℓ(λ) ≥ 1".into()));
    }
    apply_word_tau(model, bracket, &lambda.parts_ascending(), a, v)
}

/// The canonical monomial of `b_ρ(n)` and its normalisation `1/z`.
pub fn b_monomial(model: &SurfaceModel, rho: &PartitionFunction, n: u32) -> Option<(Monomial, Q)> {
    let level = rho.level(model.unit);
    if n < level {
        return None;
    }
    let mut e = rho.core_entries(model.unit);
    e.extend(std::iter::repeat_n((1, model.unit), (n - level) as usize));
    sort_entries(&mut e);
    Some((Monomial(e), Q::one() / rho.normalization(model.unit, n)))
}

/// `b_ρ(n)`; zero below level `‖ρ‖ + ℓ(ρ(1_X))`.
pub fn b_class(model: &SurfaceModel, rho: &PartitionFunction, n: u32) -> FockVector {
    match b_monomial(model, rho, n) {
        Some((m, c)) => FockVector::monomial(m, c),
        None => FockVector::zero(),
    }
}

/// Coordinates of a weight-`n` vector in the `b_ρ(n)` basis.
pub fn expand_in_basis(
    model: &SurfaceModel,
    v: &FockVector,
    n: u32,
) -> Result<BTreeMap<PartitionFunction, Q>> {
    v.check_weight(n)?;
    let mut out = BTreeMap::new();
    for (m, c) in v.iter() {
        let rho = m.to_partition(model.unit);
        let (bm, inv_z) = b_monomial(model, &rho, n)
            .ok_or_else(|| Error::Internal("monomial below its own level".into()))?;
        if bm != *m {
            return Err(Error::Internal("non-canonical monomial".into()));
        }
        out.insert(rho, c / inv_z);
    }
    let mut back = FockVector::zero();
    for (rho, c) in &out {
        back.add_scaled(&b_class(model, rho, n), c);
    }
    if back != *v {
        return Err(Error::Internal(
            "basis expansion does not reproduce the vector".into(),
        ));
    }
    Ok(out)
}

/// `ι_n^*`: drops monomials with a label in `S_ℐ`.
pub fn reduce_mod_ideal(model: &SurfaceModel, v: &FockVector) -> Result<FockVector> {
    if model.ideal.is_none() {
        return Err(Error::NoIdeal);
    }
    let mut out = v.clone();
    out.retain(|m, _| !m.has_ideal_label(model));
    Ok(out)
}

/// `𝔄 = −a_1([x])`.
pub fn annihilate_point(model: &SurfaceModel, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    annihilate_into(
        model,
        &Bracket::hilbert(),
        1,
        model.point,
        v,
        &-Q::one(),
        &mut out,
    );
    out
}

/// Builds `a_{-n_1}(c_1)⋯a_{-n_k}(c_k)|0⟩` from classes, applying the
/// rightmost operator first.
pub fn creation_word(model: &SurfaceModel, word: &[(u32, GradedClass)]) -> Result<FockVector> {
    let mut v = FockVector::vacuum();
    for (n, c) in word.iter().rev() {
        if *n == 0 {
            return Err(Error::ZeroIndex);
        }
        v = apply_heisenberg(model, &Bracket::hilbert(), -(*n as i64), c, &v)?;
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FockTermJson {
    #[serde(with = "rational::serde_q")]
    pub coeff: Q,
    pub monomial: Vec<(u32, String)>,
}

pub fn to_json(model: &SurfaceModel, v: &FockVector) -> Vec<FockTermJson> {
    v.iter()
        .map(|(m, c)| FockTermJson {
            coeff: c.clone(),
            monomial: m
                .entries()
                .iter()
                .map(|(n, i)| (*n, model.name_of(*i).to_string()))
                .collect(),
        })
        .collect()
}

pub fn from_json(model: &SurfaceModel, terms: &[FockTermJson]) -> Result<FockVector> {
    let mut v = FockVector::zero();
    for t in terms {
        let mut word = Vec::new();
        for (n, name) in &t.monomial {
            word.push((*n, GradedClass::basis(model.index_of(name)?)));
        }
        v.add_scaled(&creation_word(model, &word)?, &t.coeff);
    }
    Ok(v)
}
