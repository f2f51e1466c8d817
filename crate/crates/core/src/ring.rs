//! Cup products in `H*(X^[n])` through the generator-expression algorithm.
//!
//! Every basis class `b_ρ(n)` has a generator word, one `G_{m−1}(c, n)` per
//! core entry `(m, c)` of `ρ`. Evaluating the word on the unit gives `b_ρ(n)`
//! up to a nonzero multiple plus classes of strictly smaller level, so the
//! word values form a triangular system. Inverting it expresses each basis
//! class in generators; products then become operator applications.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{b_class, expand_in_basis, FockVector};
use crate::partition::{enumerate_basis, PartitionFunction};
use crate::rational::{self, Q};
use crate::surface::{GradedClass, SurfaceModel};
use crate::vertex::{Applier, Side, Strategy};

/// Coordinates in the `b_ρ(n)` basis.
pub type Coords = BTreeMap<PartitionFunction, Q>;

/// `G_k(c, n)` for a basis index `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Generator {
    pub k: u32,
    pub class: usize,
}

/// `Π_j G_{k_j}(c_j, n)`, evaluated with the last factor applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeneratorWord(pub Vec<Generator>);

impl GeneratorWord {
    /// The word whose leading term is a multiple of `b_ρ`.
    pub fn for_partition(rho: &PartitionFunction, unit: usize) -> Self {
        Self(
            rho.core_entries(unit)
                .into_iter()
                .map(|(m, c)| Generator { k: m - 1, class: c })
                .collect(),
        )
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|g| format!("G_{}({})", g.k, model.name_of(g.class)))
            .collect::<Vec<_>>()
            .join("·")
    }
}

pub fn add_scaled(acc: &mut Coords, other: &Coords, f: &Q) {
    if f.is_zero() {
        return;
    }
    for (rho, c) in other {
        let slot = acc.entry(rho.clone()).or_insert_with(Q::zero);
        *slot += c * f;
        if slot.is_zero() {
            acc.remove(rho);
        }
    }
}

fn indicator(rho: &PartitionFunction) -> Coords {
    Coords::from([(rho.clone(), Q::one())])
}

/// Structure constants at one `n` over a (possibly level-restricted) basis.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub n: u32,
    pub side: Side,
    pub basis: Vec<PartitionFunction>,
    pub entries: BTreeMap<(usize, usize), Coords>,
}

impl StructureTable {
    pub fn constant(&self, rho: usize, sigma: usize, nu: &PartitionFunction) -> Q {
        self.entries
            .get(&(rho, sigma))
            .and_then(|row| row.get(nu).cloned())
            .unwrap_or_else(Q::zero)
    }

    /// Degree additivity and super-commutativity; returns violations.
    pub fn audit(&self, model: &SurfaceModel) -> Vec<String> {
        let mut out = Vec::new();
        let deg: Vec<u32> = self.basis.iter().map(|r| r.degree(model)).collect();
        for ((i, j), row) in &self.entries {
            for nu in row.keys() {
                if nu.degree(model) != deg[*i] + deg[*j] {
                    out.push(format!(
                        "degree: {} · {} has {} in n = {}",
                        self.basis[*i].display(model),
                        self.basis[*j].display(model),
                        nu.display(model),
                        self.n
                    ));
                }
            }
            if let Some(other) = self.entries.get(&(*j, *i)) {
                let sign = rational::sign(deg[*i] % 2 == 1 && deg[*j] % 2 == 1);
                let mut flipped = Coords::new();
                add_scaled(&mut flipped, other, &sign);
                if &flipped != row {
                    out.push(format!(
                        "super-commutativity: {} and {} at n = {}",
                        self.basis[*i].display(model),
                        self.basis[*j].display(model),
                        self.n
                    ));
                }
            }
        }
        out
    }

    pub fn to_json(&self, model: &SurfaceModel) -> TableJson {
        let rows = self
            .entries
            .iter()
            .map(|((i, j), row)| RowJson {
                rho: self.basis[*i].to_named(model),
                sigma: self.basis[*j].to_named(model),
                entries: row
                    .iter()
                    .map(|(nu, c)| EntryJson {
                        nu: nu.to_named(model),
                        coeff: c.clone(),
                    })
                    .collect(),
            })
            .collect();
        TableJson {
            n: self.n,
            side: match self.side {
                Side::Hilbert => "hilbert",
                Side::Orbifold => "orbifold",
            },
            s: None,
            rows,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryJson {
    pub nu: BTreeMap<String, Vec<u32>>,
    #[serde(with = "rational::serde_q")]
    pub coeff: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowJson {
    pub rho: BTreeMap<String, Vec<u32>>,
    pub sigma: BTreeMap<String, Vec<u32>>,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableJson {
    pub n: u32,
    pub side: &'static str,
    /// Bracket value of an orbifold table, as `"p/q"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    pub rows: Vec<RowJson>,
}

type ColumnKey = (Generator, PartitionFunction);
type TableEntry = ((usize, usize), Coords);

/// Product engine at a fixed `n`.
///
/// With `max_level` set, only classes of level at most that bound take part
/// as left factors; the triangular system is closed under that restriction.
pub struct Engine<'m> {
    pub applier: Applier<'m>,
    pub n: u32,
    pub basis: Vec<PartitionFunction>,
    index: HashMap<PartitionFunction, usize>,
    words: Vec<GeneratorWord>,
    inverse: Vec<Coords>,
    columns: Mutex<HashMap<ColumnKey, Arc<Coords>>>,
}

impl<'m> Engine<'m> {
    pub fn new(applier: Applier<'m>, n: u32, max_level: Option<u32>) -> Result<Self> {
        applier.check_gate()?;
        let model = applier.model;
        if !applier.reduced && model.ideal.is_some() {
            return Err(Error::Usage(
                "an unreduced engine needs the projective model".into(),
            ));
        }
        let unit = model.unit;
        let basis: Vec<PartitionFunction> = enumerate_basis(model, n)
            .into_iter()
            .filter(|r| max_level.is_none_or(|l| r.level(unit) <= l))
            .collect();
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let words = basis
            .iter()
            .map(|r| GeneratorWord::for_partition(r, unit))
            .collect();
        let mut engine = Self {
            applier,
            n,
            basis,
            index,
            words,
            inverse: Vec::new(),
            columns: Mutex::new(HashMap::new()),
        };
        engine.eliminate()?;
        Ok(engine)
    }

    /// Engine on `model` itself, reduced when it carries an ideal. The
    /// orbifold side uses the plain operator expansion; `s` is ignored on the
    /// Hilbert side.
    pub fn for_model(
        model: &'m SurfaceModel,
        side: Side,
        s: &Q,
        n: u32,
        max_level: Option<u32>,
    ) -> Result<Self> {
        let reduced = model.ideal.is_some();
        let applier = match side {
            Side::Hilbert => Applier::hilbert(model, reduced)?,
            Side::Orbifold => {
                Applier::orbifold(model, s.clone(), reduced)?.with_strategy(Strategy::Raw)
            }
        };
        Self::new(applier, n, max_level)
    }

    pub fn model(&self) -> &'m SurfaceModel {
        self.applier.model
    }

    pub fn position(&self, rho: &PartitionFunction) -> Option<usize> {
        self.index.get(rho).copied()
    }

    /// Triangular elimination in increasing level.
    fn eliminate(&mut self) -> Result<()> {
        let unit = self.model().unit;
        let empty = PartitionFunction::empty();
        let mut inverse: Vec<Coords> = Vec::with_capacity(self.basis.len());
        for (i, rho) in self.basis.iter().enumerate() {
            let value = self.evaluate_word(&self.words[i], &indicator(&empty))?;
            let level = rho.level(unit);
            let lead = value.get(rho).cloned().unwrap_or_else(Q::zero);
            if lead.is_zero() {
                return Err(Error::Internal(format!(
                    "generator word of {} has no leading term",
                    rho.display(self.model())
                )));
            }
            let mut row = indicator(rho);
            for (tau, c) in &value {
                if tau == rho {
                    continue;
                }
                if tau.level(unit) >= level {
                    return Err(Error::Internal(format!(
                        "elimination is not triangular at {} (term {})",
                        rho.display(self.model()),
                        tau.display(self.model())
                    )));
                }
                let j = self.index[tau];
                let sub = inverse[j].clone();
                add_scaled(&mut row, &sub, &-c.clone());
            }
            let inv_lead = Q::one() / lead;
            let row = row.into_iter().map(|(t, c)| (t, c * &inv_lead)).collect();
            inverse.push(row);
        }
        self.inverse = inverse;
        Ok(())
    }

    /// `G_k(c, n) · b_σ(n)` in coordinates, memoised.
    pub fn column(&self, g: Generator, sigma: &PartitionFunction) -> Result<Arc<Coords>> {
        let key = (g, sigma.clone());
        if let Some(c) = self.columns.lock().expect("column cache").get(&key) {
            return Ok(c.clone());
        }
        let v = b_class(self.model(), sigma, self.n);
        let out = self.applier.apply(g.k, &GradedClass::basis(g.class), &v)?;
        let coords = Arc::new(expand_in_basis(self.model(), &out, self.n)?);
        self.columns
            .lock()
            .expect("column cache")
            .entry(key)
            .or_insert_with(|| coords.clone());
        Ok(coords)
    }

    pub fn apply_generator(&self, g: Generator, x: &Coords) -> Result<Coords> {
        let mut out = Coords::new();
        for (sigma, c) in x {
            let col = self.column(g, sigma)?;
            add_scaled(&mut out, &col, c);
        }
        Ok(out)
    }

    pub fn evaluate_word(&self, w: &GeneratorWord, x: &Coords) -> Result<Coords> {
        let mut cur = x.clone();
        for g in w.0.iter().rev() {
            if cur.is_empty() {
                break;
            }
            cur = self.apply_generator(*g, &cur)?;
        }
        Ok(cur)
    }

    /// `b_ρ(n)` as a combination of generator words.
    pub fn express_in_generators(
        &self,
        rho: &PartitionFunction,
    ) -> Result<Vec<(Q, GeneratorWord)>> {
        let i = self.position(rho).ok_or_else(|| self.outside(rho))?;
        Ok(self.inverse[i]
            .iter()
            .map(|(tau, c)| (c.clone(), self.words[self.index[tau]].clone()))
            .collect())
    }

    fn outside(&self, rho: &PartitionFunction) -> Error {
        Error::Usage(format!(
            "{} is not in the basis used at n = {}",
            rho.display(self.model()),
            self.n
        ))
    }

    /// `b_ρ(n) · x`.
    pub fn multiply_basis(&self, rho: &PartitionFunction, x: &Coords) -> Result<Coords> {
        let i = self.position(rho).ok_or_else(|| self.outside(rho))?;
        let mut out = Coords::new();
        for (tau, c) in &self.inverse[i] {
            let w = self.evaluate_word(&self.words[self.index[tau]], x)?;
            add_scaled(&mut out, &w, c);
        }
        Ok(out)
    }

    /// `b_ρ(n) · b_σ(n)`, asserting degree additivity.
    pub fn product(&self, rho: &PartitionFunction, sigma: &PartitionFunction) -> Result<Coords> {
        let out = self.multiply_basis(rho, &indicator(sigma))?;
        let model = self.model();
        let d = rho.degree(model) + sigma.degree(model);
        if let Some(nu) = out.keys().find(|nu| nu.degree(model) != d) {
            return Err(Error::Internal(format!(
                "degree additivity fails: {} · {} contains {}",
                rho.display(model),
                sigma.display(model),
                nu.display(model)
            )));
        }
        Ok(out)
    }

    pub fn cup_coords(&self, u: &Coords, v: &Coords) -> Result<Coords> {
        let mut out = Coords::new();
        for (rho, c) in u {
            add_scaled(&mut out, &self.multiply_basis(rho, v)?, c);
        }
        Ok(out)
    }

    pub fn cup_product(&self, u: &FockVector, v: &FockVector) -> Result<FockVector> {
        let model = self.model();
        let u = expand_in_basis(model, u, self.n)?;
        let v = expand_in_basis(model, v, self.n)?;
        Ok(self.to_vector(&self.cup_coords(&u, &v)?))
    }

    pub fn to_vector(&self, x: &Coords) -> FockVector {
        let mut out = FockVector::zero();
        for (rho, c) in x {
            out.add_scaled(&b_class(self.model(), rho, self.n), c);
        }
        out
    }

    /// Products over the engine's basis, rows split across `jobs` threads.
    /// `right` restricts the right factors (all basis classes by default).
    pub fn structure_table(&self, jobs: usize, right: Option<&[usize]>) -> Result<StructureTable> {
        let all: Vec<usize> = (0..self.basis.len()).collect();
        let right = right.unwrap_or(&all);
        let rows: Vec<usize> = all.clone();
        let jobs = jobs.max(1).min(rows.len().max(1));
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|t| rows.iter().copied().skip(t).step_by(jobs).collect())
            .collect();
        let results: Vec<Result<Vec<TableEntry>>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    s.spawn(move || {
                        let mut out = Vec::new();
                        for &i in chunk {
                            for &j in right {
                                out.push(((i, j), self.product(&self.basis[i], &self.basis[j])?));
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("structure table worker"))
                .collect()
        });
        let mut entries = BTreeMap::new();
        for r in results {
            entries.extend(r?);
        }
        Ok(StructureTable {
            n: self.n,
            side: self.applier.side,
            basis: self.basis.clone(),
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::partition::PartitionFunction as P;
    use crate::rational::q;

    fn hilbert_engine(m: &SurfaceModel, n: u32) -> Engine<'_> {
        let reduced = m.ideal.is_some();
        Engine::new(Applier::hilbert(m, reduced).unwrap(), n, None).unwrap()
    }

    #[test]
    fn unit_row_is_identity() {
        for m in [builtin::c2(), builtin::toy(), builtin::cotangent(1)] {
            for n in 0..=3 {
                let e = hilbert_engine(&m, n);
                for s in &e.basis {
                    assert_eq!(e.product(&P::empty(), s).unwrap(), indicator(s));
                }
            }
        }
    }

    #[test]
    fn c2_square_vanishes_at_two() {
        let m = builtin::c2();
        let e = hilbert_engine(&m, 2);
        let r = P::single(m.unit, 1);
        assert!(e.product(&r, &r).unwrap().is_empty());
        let words = e.express_in_generators(&r).unwrap();
        assert_eq!(words.len(), 1);
        // G_1(1, 2) ≡ −a_{-2}(1)/2 and b = a_{-2}(1)/2
        assert_eq!(words[0].0, q(-1));
        assert_eq!(
            words[0].1,
            GeneratorWord(vec![Generator {
                k: 1,
                class: m.unit
            }])
        );
        assert_eq!(
            e.express_in_generators(&P::empty()).unwrap(),
            vec![(Q::one(), GeneratorWord::default())]
        );
    }

    #[test]
    fn level_one_matches_surface_algebra() {
        let m = builtin::toy();
        let e = hilbert_engine(&m, 1);
        for a in 0..m.dim() {
            for b in 0..m.dim() {
                let cls = |i: usize| {
                    if i == m.unit {
                        P::empty()
                    } else {
                        P::single(i, 1)
                    }
                };
                let got = e.product(&cls(a), &cls(b)).unwrap();
                let mut want = Coords::new();
                for (c, x) in m.mul_basis(a, b).iter() {
                    add_scaled(&mut want, &indicator(&cls(c)), x);
                }
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn generator_expressions_reproduce_basis() {
        let m = builtin::cotangent(1);
        let e = hilbert_engine(&m, 3);
        for rho in &e.basis {
            let mut total = Coords::new();
            for (c, w) in e.express_in_generators(rho).unwrap() {
                let empty = indicator(&P::empty());
                add_scaled(&mut total, &e.evaluate_word(&w, &empty).unwrap(), &c);
            }
            assert_eq!(total, indicator(rho));
        }
    }

    #[test]
    fn associativity_and_audits() {
        for m in [builtin::toy(), builtin::cotangent(1)] {
            for n in 1..=3 {
                let e = hilbert_engine(&m, n);
                let t = e.structure_table(2, None).unwrap();
                assert!(t.audit(&m).is_empty());
                for a in &e.basis {
                    for b in &e.basis {
                        let ab = e.product(a, b).unwrap();
                        for c in &e.basis {
                            let left = e.multiply_basis(c, &ab).unwrap();
                            let bc = e.product(b, c).unwrap();
                            let right = e.multiply_basis(a, &bc).unwrap();
                            // (ab)c = c(ab)·sign, compare through super-commutativity
                            let sign = rational::sign(
                                (a.degree(&m) + b.degree(&m)) % 2 == 1 && c.degree(&m) % 2 == 1,
                            );
                            let mut lhs = Coords::new();
                            add_scaled(&mut lhs, &left, &sign);
                            assert_eq!(
                                lhs,
                                right,
                                "{} {} {} n={n}",
                                a.display(&m),
                                b.display(&m),
                                c.display(&m)
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gate_blocks_projective_canonical_class() {
        let m = builtin::c2().projective_base();
        assert!(matches!(
            Engine::new(Applier::hilbert(&m, false).unwrap(), 2, None),
            Err(Error::Computability(_))
        ));
    }
}
