//! Finite graded Frobenius algebras standing in for `H*(X̄)` of a projective
//! surface, optionally paired with a restriction ideal that encodes a
//! quasi-projective surface `X ⊂ X̄`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: u8,
}

impl BasisElement {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Sparse coefficient vector over the model basis. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedClass {
    coeffs: BTreeMap<usize, Q>,
}

impl GradedClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Q::one())
    }

    pub fn term(i: usize, c: Q) -> Self {
        let mut g = Self::zero();
        g.add_term(i, c);
        g
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Q)>>(terms: I) -> Self {
        let mut g = Self::zero();
        for (i, c) in terms {
            g.add_term(i, c);
        }
        g
    }

    pub fn add_term(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(i).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedClass, f: &Q) {
        for (i, c) in &other.coeffs {
            self.add_term(*i, c * f);
        }
    }

    pub fn scaled(&self, f: &Q) -> GradedClass {
        if f.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * f)).collect(),
        }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The common degree of all nonzero coefficients, if there is one.
    pub fn homogeneous_degree(&self, model: &SurfaceModel) -> Option<u8> {
        let mut degs = self.support().map(|i| model.degree(i));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, model: &SurfaceModel) -> bool {
        self.is_zero() || self.homogeneous_degree(model).is_some()
    }

    pub fn component(&self, model: &SurfaceModel, degree: u8) -> GradedClass {
        Self::from_terms(
            self.iter()
                .filter(|(i, _)| model.degree(*i) == degree)
                .map(|(i, c)| (i, c.clone())),
        )
    }
}

impl std::ops::Add<&GradedClass> for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl std::ops::Sub<&GradedClass> for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

/// `Σ_j w_j α_{j,1} ⊗ ⋯ ⊗ α_{j,k}` in `H*(X̄^k)`, stored over basis tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KunnethTensor {
    pub k: usize,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl KunnethTensor {
    pub fn add_term(&mut self, factors: Vec<usize>, w: Q) {
        if w.is_zero() {
            return;
        }
        let slot = self.terms.entry(factors.clone()).or_insert_with(Q::zero);
        *slot += w;
        if slot.is_zero() {
            self.terms.remove(&factors);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &Q)> {
        self.terms.iter().map(|(f, w)| (f.as_slice(), w))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Restriction ideal `ℐ = ker(ι*)` in an adapted basis: `members[i]` marks
/// the elements of `S_ℐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub members: Vec<bool>,
}

impl Ideal {
    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn contains(&self, c: &GradedClass) -> bool {
        c.support().all(|i| self.members[i])
    }
}

/// Raw model description before the ideal is saturated and the basis adapted.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub name: String,
    pub basis: Vec<BasisElement>,
    /// Products of ordered basis pairs. Unit products and the super-commuted
    /// partner of a listed pair are filled in when absent.
    pub products: Vec<(usize, usize, GradedClass)>,
    pub unit: usize,
    pub point: usize,
    pub euler: GradedClass,
    pub canonical: GradedClass,
    pub ideal: Vec<GradedClass>,
}

#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub name: String,
    pub basis: Vec<BasisElement>,
    table: Vec<Vec<GradedClass>>,
    pub unit: usize,
    pub point: usize,
    pub euler: GradedClass,
    pub canonical: GradedClass,
    pub ideal: Option<Ideal>,
    gram: Matrix,
    /// Nonzero coefficients `C_ab` of `τ_{2*}(1_X) = Σ C_ab e_a ⊗ e_b`.
    copairing: Option<Vec<(usize, usize, Q)>>,
    /// Problems found while assembling the model (reported by validation).
    pub(crate) build_notes: Vec<Diagnostic>,
    pub(crate) explicit_pairs: Vec<(usize, usize, GradedClass)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub invariant: String,
    pub message: String,
    pub witness: Vec<String>,
}

impl Diagnostic {
    fn new(invariant: &str, message: String, witness: Vec<String>) -> Self {
        Self {
            invariant: invariant.to_string(),
            message,
            witness,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn mentions(&self, needle: &str) -> bool {
        self.violations
            .iter()
            .any(|d| d.invariant.contains(needle) || d.message.contains(needle))
    }
}

impl SurfaceModel {
    /// Builds a model: fills implicit products, saturates the ideal and
    /// rewrites everything in a basis adapted to it.
    pub fn new(spec: ModelSpec) -> Result<Self> {
        let n = spec.basis.len();
        if n == 0 {
            return Err(Error::Model("empty basis".into()));
        }
        if spec.basis.iter().any(|b| b.degree > 4) {
            return Err(Error::Model("basis degrees must lie in 0..=4".into()));
        }
        for (i, b) in spec.basis.iter().enumerate() {
            if spec.basis[..i].iter().any(|o| o.name == b.name) {
                return Err(Error::Model(format!("duplicate basis name {:?}", b.name)));
            }
        }
        if spec.unit >= n || spec.point >= n {
            return Err(Error::ModelMismatch);
        }
        if spec.basis[spec.unit].degree != 0 {
            return Err(Error::Model("unit must have degree 0".into()));
        }
        if spec.basis[spec.point].degree != 4 {
            return Err(Error::Model("point class must have degree 4".into()));
        }
        let mut notes = Vec::new();
        let mut table: Vec<Vec<Option<GradedClass>>> = vec![vec![None; n]; n];
        for (a, b, c) in &spec.products {
            if *a >= n || *b >= n || c.support().any(|i| i >= n) {
                return Err(Error::ModelMismatch);
            }
            if let Some(prev) = &table[*a][*b] {
                if prev != c {
                    notes.push(Diagnostic::new(
                        "mul_table",
                        format!(
                            "conflicting products listed for ({}, {})",
                            spec.basis[*a].name, spec.basis[*b].name
                        ),
                        vec![spec.basis[*a].name.clone(), spec.basis[*b].name.clone()],
                    ));
                }
            }
            table[*a][*b] = Some(c.clone());
        }
        let listed = table.clone();
        for a in 0..n {
            for b in 0..n {
                if table[a][b].is_some() {
                    continue;
                }
                let filled = if a == spec.unit {
                    GradedClass::basis(b)
                } else if b == spec.unit {
                    GradedClass::basis(a)
                } else if let Some(rev) = &listed[b][a] {
                    let odd = spec.basis[a].is_odd() && spec.basis[b].is_odd();
                    rev.scaled(&rational::sign(odd))
                } else {
                    GradedClass::zero()
                };
                table[a][b] = Some(filled);
            }
        }
        let table: Vec<Vec<GradedClass>> = table
            .into_iter()
            .map(|r| r.into_iter().map(Option::unwrap).collect())
            .collect();

        let mut model = SurfaceModel {
            name: spec.name,
            basis: spec.basis,
            table,
            unit: spec.unit,
            point: spec.point,
            euler: spec.euler,
            canonical: spec.canonical,
            ideal: None,
            gram: Vec::new(),
            copairing: None,
            build_notes: notes,
            explicit_pairs: spec.products,
        };
        model.refresh_pairing();
        if !spec.ideal.is_empty() {
            model = model.with_ideal(&spec.ideal)?;
        }
        Ok(model)
    }

    fn refresh_pairing(&mut self) {
        let n = self.dim();
        let mut gram = linalg::zeros(n, n);
        for (row, products) in gram.iter_mut().zip(&self.table) {
            for (g, p) in row.iter_mut().zip(products) {
                *g = p.coeff(self.point);
            }
        }
        self.copairing = linalg::inverse(&gram).map(|inv| {
            // C' = G^{-T} G G^{-1}, C_ab = (-1)^{|a|} C'_ab
            let cp = linalg::mul(&linalg::mul(&linalg::transpose(&inv), &gram), &inv);
            let mut out = Vec::new();
            for (a, row) in cp.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        out.push((a, b, x * rational::sign(self.is_odd(a))));
                    }
                }
            }
            out
        });
        self.gram = gram;
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u8 {
        self.basis[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].is_odd()
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn is_projective(&self) -> bool {
        self.ideal.is_none()
    }

    pub fn in_ideal(&self, i: usize) -> bool {
        self.ideal.as_ref().is_some_and(|id| id.members[i])
    }

    /// `S ∖ S_ℐ` in index order (all of `S` for a projective model).
    pub fn surviving_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| !self.in_ideal(i)).collect()
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &GradedClass {
        &self.table[a][b]
    }

    pub fn check_class(&self, a: &GradedClass) -> Result<()> {
        if a.support().any(|i| i >= self.dim()) {
            return Err(Error::ModelMismatch);
        }
        Ok(())
    }

    /// Cup product in `H*(X̄)`.
    pub fn mul(&self, a: &GradedClass, b: &GradedClass) -> Result<GradedClass> {
        self.check_class(a)?;
        self.check_class(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &GradedClass, b: &GradedClass) -> GradedClass {
        let mut out = GradedClass::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&self.table[i][j], &(x * y));
            }
        }
        out
    }

    pub(crate) fn mul_by_basis(&self, a: &GradedClass, j: usize) -> GradedClass {
        let mut out = GradedClass::zero();
        for (i, x) in a.iter() {
            out.add_scaled(&self.table[i][j], x);
        }
        out
    }

    /// `∫_X̄ a`, the coefficient of the point class.
    pub fn integrate(&self, a: &GradedClass) -> Q {
        a.coeff(self.point)
    }

    pub fn pairing(&self, a: usize, b: usize) -> &Q {
        &self.gram[a][b]
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn copairing(&self) -> Result<&[(usize, usize, Q)]> {
        self.copairing.as_deref().ok_or(Error::DegeneratePairing)
    }

    /// `τ_{k*}(a)`: `τ_{2*}(x) = Σ C_ab (x e_a) ⊗ e_b`, and higher pushforwards
    /// split the first tensor factor again.
    pub fn diagonal_pushforward(&self, a: &GradedClass, k: usize) -> Result<KunnethTensor> {
        self.check_class(a)?;
        if k == 0 {
            return Err(Error::Usage("use integrate for τ_0".into()));
        }
        let cop = self.copairing()?;
        // Each partial term: (first-slot class, remaining factors).
        let mut partial: Vec<(GradedClass, Vec<usize>)> = vec![(a.clone(), Vec::new())];
        for _ in 1..k {
            let mut next = Vec::new();
            for (x, rest) in &partial {
                for (ea, eb, c) in cop {
                    let y = self.mul_by_basis(x, *ea).scaled(c);
                    if y.is_zero() {
                        continue;
                    }
                    let mut r = Vec::with_capacity(rest.len() + 1);
                    r.push(*eb);
                    r.extend_from_slice(rest);
                    next.push((y, r));
                }
            }
            partial = next;
        }
        let mut out = KunnethTensor {
            k,
            ..Default::default()
        };
        for (x, rest) in partial {
            for (i, c) in x.iter() {
                let mut f = Vec::with_capacity(k);
                f.push(i);
                f.extend_from_slice(&rest);
                out.add_term(f, c.clone());
            }
        }
        Ok(out)
    }

    /// Image of `a` under `ι*`, written in `S ∖ S_ℐ`.
    pub fn reduce_class(&self, a: &GradedClass) -> Result<GradedClass> {
        let ideal = self.ideal.as_ref().ok_or(Error::NoIdeal)?;
        self.check_class(a)?;
        Ok(GradedClass::from_terms(
            a.iter()
                .filter(|(i, _)| !ideal.members[*i])
                .map(|(i, c)| (i, c.clone())),
        ))
    }

    /// Degree-4 class `e` as the product of the copairing, `Σ C_ab e_a e_b`.
    pub fn intrinsic_euler(&self) -> Result<GradedClass> {
        let mut e = GradedClass::zero();
        for (a, b, c) in self.copairing()? {
            e.add_scaled(&self.table[*a][*b], c);
        }
        Ok(e)
    }

    /// Same algebra with ideal generated by `gens` (saturated, basis adapted).
    pub fn with_ideal(&self, gens: &[GradedClass]) -> Result<SurfaceModel> {
        for g in gens {
            self.check_class(g)?;
        }
        let n = self.dim();
        let mut notes = Vec::new();
        // Homogeneous components of the generators, then saturation.
        let mut span: Vec<Vec<Q>> = Vec::new();
        let to_dense = |c: &GradedClass| {
            let mut v = vec![Q::zero(); n];
            for (i, x) in c.iter() {
                v[i] = x.clone();
            }
            v
        };
        let mut frontier: Vec<GradedClass> = Vec::new();
        for g in gens {
            if !g.is_homogeneous(self) {
                notes.push(Diagnostic::new(
                    "ideal homogeneity",
                    "ideal generator is not homogeneous".into(),
                    vec![self.format_class(g)],
                ));
            }
            for d in 0..=4 {
                let comp = g.component(self, d);
                if !comp.is_zero() {
                    frontier.push(comp);
                }
            }
        }
        let mut rank = 0;
        while let Some(c) = frontier.pop() {
            let mut trial = span.clone();
            trial.push(to_dense(&c));
            let r = linalg::rank(&trial);
            if r == rank {
                continue;
            }
            rank = r;
            span = trial;
            for j in 0..n {
                frontier.push(self.mul_by_basis(&c, j));
                frontier.push(self.mul_unchecked(&GradedClass::basis(j), &c));
            }
        }
        let mut members = vec![false; n];
        let mut new_vectors: Vec<GradedClass> = (0..n).map(GradedClass::basis).collect();
        for d in 0..=4u8 {
            let idx: Vec<usize> = (0..n).filter(|&i| self.degree(i) == d).collect();
            let mut rows: Matrix = span
                .iter()
                .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
                .filter(|r: &Vec<Q>| r.iter().any(|x| !x.is_zero()))
                .collect();
            let piv = linalg::rref(&mut rows);
            for (r, &p) in piv.iter().enumerate() {
                let vec =
                    GradedClass::from_terms(idx.iter().zip(&rows[r]).map(|(&i, x)| (i, x.clone())));
                new_vectors[idx[p]] = vec;
                members[idx[p]] = true;
            }
        }
        if members[self.unit] {
            return Err(Error::Model("restriction ideal contains the unit".into()));
        }
        let changed = (0..n).any(|i| new_vectors[i] != GradedClass::basis(i));
        let mut out = if changed {
            self.change_basis(&new_vectors, &members)?
        } else {
            self.clone()
        };
        out.ideal = Some(Ideal { members });
        out.build_notes.extend(notes);
        Ok(out)
    }

    fn change_basis(&self, vectors: &[GradedClass], members: &[bool]) -> Result<SurfaceModel> {
        let n = self.dim();
        let p: Matrix = vectors
            .iter()
            .map(|v| (0..n).map(|j| v.coeff(j)).collect())
            .collect();
        // Row i of p is the new element i in old coordinates.
        let pinv = linalg::inverse(&p).ok_or_else(|| Error::Internal("adapted basis".into()))?;
        let to_new = |old: &GradedClass| {
            let mut out = GradedClass::zero();
            for (j, x) in old.iter() {
                for (i, y) in pinv[j].iter().enumerate() {
                    if !y.is_zero() {
                        out.add_term(i, x * y);
                    }
                }
            }
            out
        };
        let mut basis = self.basis.clone();
        let mut counter = 0;
        for i in 0..n {
            if vectors[i] != GradedClass::basis(i) {
                basis[i].name = format!("I{}_{}", basis[i].degree, counter);
                counter += 1;
                debug_assert!(members[i]);
            }
        }
        let mut table = vec![vec![GradedClass::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                table[a][b] = to_new(&self.mul_unchecked(&vectors[a], &vectors[b]));
            }
        }
        let mut out = SurfaceModel {
            name: self.name.clone(),
            basis,
            table,
            unit: self.unit,
            point: self.point,
            euler: to_new(&self.euler),
            canonical: to_new(&self.canonical),
            ideal: None,
            gram: Vec::new(),
            copairing: None,
            build_notes: self.build_notes.clone(),
            explicit_pairs: Vec::new(),
        };
        if vectors[self.point] != GradedClass::basis(self.point) {
            return Err(Error::Model(
                "ideal changes the point class normalisation".into(),
            ));
        }
        out.refresh_pairing();
        Ok(out)
    }

    /// Projective model with `ℐ = H⁴`.
    pub fn with_top_degree_ideal(&self) -> Result<SurfaceModel> {
        let base = self.projective_base();
        let gens: Vec<GradedClass> = (0..base.dim())
            .filter(|&i| base.degree(i) == 4)
            .map(GradedClass::basis)
            .collect();
        base.with_ideal(&gens)
    }

    /// Projective model with `ℐ = ⊕_{ℓ≥1} H^ℓ`.
    pub fn with_positive_degree_ideal(&self) -> Result<SurfaceModel> {
        let base = self.projective_base();
        let gens: Vec<GradedClass> = (0..base.dim())
            .filter(|&i| base.degree(i) >= 1)
            .map(GradedClass::basis)
            .collect();
        base.with_ideal(&gens)
    }

    /// The same algebra with any restriction ideal forgotten.
    pub fn projective_base(&self) -> SurfaceModel {
        let mut m = self.clone();
        m.ideal = None;
        m
    }

    pub fn format_class(&self, c: &GradedClass) -> String {
        if c.is_zero() {
            return "0".into();
        }
        c.iter()
            .map(|(i, x)| format!("{}*{}", rational::pretty(x), self.basis[i].name))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Checks every structural invariant; never fails.
    pub fn validate(&self, check_euler: bool) -> ValidationReport {
        validate_model(self, check_euler)
    }
}

/// Lists violated invariants: unit, grading, super-commutativity,
/// associativity, odd squares, Frobenius non-degeneracy, ideal closure.
pub fn validate_model(m: &SurfaceModel, check_euler: bool) -> ValidationReport {
    let mut rep = ValidationReport::default();
    rep.violations.extend(m.build_notes.iter().cloned());
    let n = m.dim();
    let name = |i: usize| m.basis[i].name.clone();
    for (a, b, c) in &m.explicit_pairs {
        if *a == m.unit && *c != GradedClass::basis(*b)
            || *b == m.unit && *c != GradedClass::basis(*a)
        {
            rep.violations.push(Diagnostic::new(
                "unit",
                format!(
                    "1_X is not a two-sided unit on {}",
                    name(if *a == m.unit { *b } else { *a })
                ),
                vec![name(*a), name(*b)],
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let p = m.mul_basis(a, b);
            let target = m.degree(a) + m.degree(b);
            if p.support().any(|i| m.degree(i) != target) {
                rep.violations.push(Diagnostic::new(
                    "grading",
                    format!(
                        "product {}·{} is not of degree {}",
                        name(a),
                        name(b),
                        target
                    ),
                    vec![name(a), name(b)],
                ));
            }
            let odd = m.is_odd(a) && m.is_odd(b);
            let rev = m.mul_basis(b, a).scaled(&rational::sign(odd));
            if a < b && *p != rev {
                rep.violations.push(Diagnostic::new(
                    "super-commutativity",
                    format!("{}·{} ≠ ±{}·{}", name(a), name(b), name(b), name(a)),
                    vec![name(a), name(b)],
                ));
            }
        }
        if m.is_odd(a) && !m.mul_basis(a, a).is_zero() {
            rep.violations.push(Diagnostic::new(
                "odd square",
                format!("{}² ≠ 0", name(a)),
                vec![name(a)],
            ));
        }
    }
    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = m.mul_basis(a, b);
            for c in 0..n {
                let left = m.mul_by_basis(ab, c);
                let right = m.mul_unchecked(&GradedClass::basis(a), m.mul_basis(b, c));
                if left != right {
                    rep.violations.push(Diagnostic::new(
                        "associativity",
                        format!(
                            "({}·{})·{} ≠ {}·({}·{})",
                            name(a),
                            name(b),
                            name(c),
                            name(a),
                            name(b),
                            name(c)
                        ),
                        vec![name(a), name(b), name(c)],
                    ));
                    break 'assoc;
                }
            }
        }
    }
    if m.copairing.is_none() {
        rep.violations.push(Diagnostic::new(
            "Frobenius",
            "Frobenius pairing degenerate".into(),
            Vec::new(),
        ));
    }
    if m.euler.homogeneous_degree(m).is_some_and(|d| d != 4) {
        rep.violations.push(Diagnostic::new(
            "euler",
            "e must have degree 4".into(),
            Vec::new(),
        ));
    }
    if m.canonical.homogeneous_degree(m).is_some_and(|d| d != 2) || !m.canonical.is_homogeneous(m) {
        rep.violations.push(Diagnostic::new(
            "canonical",
            "K must have degree 2".into(),
            Vec::new(),
        ));
    }
    if let Some(ideal) = &m.ideal {
        for i in (0..n).filter(|&i| ideal.members[i]) {
            for j in 0..n {
                if !ideal.contains(m.mul_basis(i, j)) || !ideal.contains(m.mul_basis(j, i)) {
                    rep.violations.push(Diagnostic::new(
                        "ideal closure",
                        format!("{}·{} leaves the ideal", name(i), name(j)),
                        vec![name(i), name(j)],
                    ));
                }
            }
        }
    }
    if let Ok(e) = m.intrinsic_euler() {
        let chi: i64 = (0..n).map(|i| if m.is_odd(i) { -1 } else { 1 }).sum();
        let message = if m.integrate(&m.euler) != rational::q(chi) {
            format!(
                "∫e = {} but 2 − 2b₁ + b₂ = {chi}",
                rational::pretty(&m.integrate(&m.euler))
            )
        } else {
            format!(
                "e = {} differs from the diagonal self-intersection {}",
                m.format_class(&m.euler),
                m.format_class(&e)
            )
        };
        let note = Diagnostic::new("euler consistency", message, Vec::new());
        if m.integrate(&m.euler) != rational::q(chi) || e != m.euler {
            if check_euler {
                rep.violations.push(note);
            } else {
                rep.warnings.push(note);
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::rational::q;

    /// `∫_{X̄^k} T·(γ_1⊗⋯⊗γ_k)` with the Koszul sign of moving each γ_l past
    /// the later tensor factors of T.
    fn pair_tensor(m: &SurfaceModel, t: &KunnethTensor, gammas: &[usize]) -> Q {
        let mut total = Q::zero();
        for (f, w) in t.iter() {
            let mut sgn = false;
            for (i, &fi) in f.iter().enumerate() {
                for &g in &gammas[..i] {
                    if m.is_odd(fi) && m.is_odd(g) {
                        sgn = !sgn;
                    }
                }
            }
            let mut prod = w * rational::sign(sgn);
            for (fi, g) in f.iter().zip(gammas) {
                prod *= m.pairing(*fi, *g);
            }
            total += prod;
        }
        total
    }

    fn product_integral(m: &SurfaceModel, a: usize, gammas: &[usize]) -> Q {
        let mut x = GradedClass::basis(a);
        for g in gammas {
            x = m.mul_by_basis(&x, *g);
        }
        m.integrate(&x)
    }

    fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn p2_copairing_is_the_expected_tensor() {
        let m = builtin::c2();
        let t = m
            .diagonal_pushforward(&GradedClass::basis(m.unit), 2)
            .unwrap();
        let (one, h, x) = (0, 1, 2);
        let mut expect = KunnethTensor {
            k: 2,
            ..Default::default()
        };
        expect.add_term(vec![one, x], q(1));
        expect.add_term(vec![h, h], q(1));
        expect.add_term(vec![x, one], q(1));
        assert_eq!(t, expect);
        let tx = m.diagonal_pushforward(&GradedClass::basis(x), 2).unwrap();
        assert_eq!(tx.len(), 1);
        assert_eq!(tx.terms.get(&vec![x, x]), Some(&q(1)));
    }

    #[test]
    fn pushforward_of_degree_one_is_identity() {
        let m = builtin::cotangent(1);
        for a in 0..m.dim() {
            let t = m.diagonal_pushforward(&GradedClass::basis(a), 1).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t.terms.get(&vec![a]), Some(&q(1)));
        }
    }

    #[test]
    fn pairing_identity_for_all_models() {
        for m in builtin::all_models() {
            for k in 2..=3 {
                for a in 0..m.dim() {
                    let t = m.diagonal_pushforward(&GradedClass::basis(a), k).unwrap();
                    for gam in all_tuples(m.dim(), k) {
                        assert_eq!(
                            pair_tensor(&m, &t, &gam),
                            product_integral(&m, a, &gam),
                            "{} k={k} a={a} γ={gam:?}",
                            m.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pushforward_summands_respect_degree_and_top_class_split() {
        for m in builtin::all_models() {
            for k in 2..=4 {
                for a in 0..m.dim() {
                    let t = m.diagonal_pushforward(&GradedClass::basis(a), k).unwrap();
                    for (f, _) in t.iter() {
                        let total: usize = f.iter().map(|&i| m.degree(i) as usize).sum();
                        assert_eq!(total, 4 * (k - 1) + m.degree(a) as usize);
                        let has_top = f.iter().any(|&i| m.degree(i) == 4);
                        let all_mid = f.iter().all(|&i| (1..4).contains(&m.degree(i)));
                        assert!(has_top || all_mid);
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_pushforward_has_an_ideal_factor() {
        for m in builtin::all_models()
            .into_iter()
            .filter(|m| m.ideal.is_some())
        {
            let ideal = m.ideal.clone().unwrap();
            for a in (0..m.dim()).filter(|&a| ideal.members[a]) {
                for k in 2..=3 {
                    let t = m.diagonal_pushforward(&GradedClass::basis(a), k).unwrap();
                    for (f, _) in t.iter() {
                        assert!(f.iter().any(|&i| ideal.members[i]), "{} {f:?}", m.name);
                    }
                }
            }
        }
    }

    #[test]
    fn mul_and_integrate_examples() {
        let m = builtin::c2();
        let (one, h, x) = (
            GradedClass::basis(0),
            GradedClass::basis(1),
            GradedClass::basis(2),
        );
        assert_eq!(m.mul(&one, &h).unwrap(), h);
        assert!(m.mul(&x, &h).unwrap().is_zero());
        assert_eq!(m.mul(&h, &h).unwrap(), x);
        assert_eq!(m.integrate(&x), q(1));
        assert_eq!(m.integrate(&one), q(0));
        assert_eq!(m.integrate(&(&x.scaled(&q(3)) + &h)), q(3));
        assert!(m.mul(&GradedClass::basis(7), &h).is_err());
    }

    #[test]
    fn reduce_class_examples() {
        let m = builtin::c2();
        let c = &GradedClass::basis(0).scaled(&q(2)) + &GradedClass::basis(1).scaled(&q(5));
        assert_eq!(
            m.reduce_class(&c).unwrap(),
            GradedClass::basis(0).scaled(&q(2))
        );
        assert!(m.reduce_class(&GradedClass::basis(1)).unwrap().is_zero());
        assert_eq!(
            m.reduce_class(&GradedClass::basis(0)).unwrap(),
            GradedClass::basis(0)
        );
        assert!(matches!(
            builtin::toy().reduce_class(&GradedClass::basis(0)),
            Err(Error::NoIdeal)
        ));
    }

    #[test]
    fn builtin_models_validate() {
        for m in builtin::all_models() {
            let rep = m.validate(true);
            assert!(rep.is_ok(), "{}: {:?}", m.name, rep.violations);
        }
    }

    #[test]
    fn degenerate_pairing_is_reported() {
        let mut spec = builtin::toy_spec();
        spec.products.retain(|(a, b, _)| !(*a == 1 && *b == 1));
        let m = SurfaceModel::new(spec).unwrap();
        let rep = m.validate(false);
        assert!(rep.mentions("Frobenius pairing degenerate"));
        assert!(matches!(
            m.diagonal_pushforward(&GradedClass::basis(0), 2),
            Err(Error::DegeneratePairing)
        ));
    }

    #[test]
    fn ideal_is_saturated() {
        let m = builtin::toy().with_ideal(&[GradedClass::basis(1)]).unwrap();
        let ideal = m.ideal.as_ref().unwrap();
        assert_eq!(ideal.members, vec![false, true, true]);
        assert!(m.validate(false).is_ok());
    }

    #[test]
    fn non_adapted_ideal_gets_adapted_basis() {
        // ideal generated by h + [x] in the toy model: saturation adds [x].
        let gen = &GradedClass::basis(1) + &GradedClass::basis(2);
        let m = builtin::toy().with_ideal(&[gen]).unwrap();
        assert!(m.validate(false).mentions("ideal homogeneity"));
        // ideal generated by u + v in the K3-like lattice: one new basis vector.
        let k3 = builtin::k3_like();
        let u = k3.index_of("u").unwrap();
        let v = k3.index_of("v").unwrap();
        let m = k3
            .with_ideal(&[&GradedClass::basis(u) + &GradedClass::basis(v)])
            .unwrap();
        assert!(m.validate(false).is_ok());
        let members = &m.ideal.as_ref().unwrap().members;
        assert_eq!(members.iter().filter(|x| **x).count(), 2);
        assert!(members[m.point]);
    }
}
