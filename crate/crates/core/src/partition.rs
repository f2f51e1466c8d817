//! Generalized partitions and partition-valued functions.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, q, Q};
use crate::surface::SurfaceModel;

/// Finitely supported multiplicities on nonzero integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenPartition {
    mults: BTreeMap<i64, u32>,
}

impl GenPartition {
    pub fn from_parts<I: IntoIterator<Item = i64>>(parts: I) -> Result<Self> {
        let mut p = Self::default();
        for i in parts {
            if i == 0 {
                return Err(Error::ZeroIndex);
            }
            *p.mults.entry(i).or_insert(0) += 1;
        }
        Ok(p)
    }

    pub fn multiplicity(&self, i: i64) -> u32 {
        self.mults.get(&i).copied().unwrap_or(0)
    }

    pub fn length(&self) -> usize {
        self.mults.values().map(|m| *m as usize).sum()
    }

    pub fn size(&self) -> i64 {
        self.mults.iter().map(|(i, m)| i * *m as i64).sum()
    }

    pub fn square_sum(&self) -> i64 {
        self.mults.iter().map(|(i, m)| i * i * *m as i64).sum()
    }

    /// `λ^! = Π m_i!`.
    pub fn mult_factorial(&self) -> Q {
        self.mults
            .values()
            .fold(Q::one(), |acc, m| acc * rational::factorial(*m as u64))
    }

    pub fn negate(&self) -> Self {
        Self {
            mults: self.mults.iter().map(|(i, m)| (-i, *m)).collect(),
        }
    }

    /// Parts in operator order: most negative first, largest positive last.
    pub fn parts_ascending(&self) -> Vec<i64> {
        self.mults
            .iter()
            .flat_map(|(i, m)| std::iter::repeat_n(*i, *m as usize))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }
}

/// Partitions of `total` into exactly `parts` positive parts, each given in
/// descending order.
pub fn partitions_with_length(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(rem: u32, slots: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rem < slots as u32 {
            return;
        }
        let hi = max.min(rem - (slots as u32 - 1));
        for p in (1..=hi).rev() {
            cur.push(p);
            go(rem - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// All partitions of `total` in descending part order.
pub fn partitions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    (1..=total as usize)
        .flat_map(|l| partitions_with_length(total, l))
        .collect()
}

/// Partition-valued function on basis indices. Each stored partition is
/// non-empty with parts in descending order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionFunction {
    parts: BTreeMap<usize, Vec<u32>>,
}

/// One creation entry `a_{-n}(c)`: weight `n`, basis index `c`.
pub type Entry = (u32, usize);

impl PartitionFunction {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(parts: BTreeMap<usize, Vec<u32>>) -> Self {
        let mut p = Self::default();
        for (c, mut v) in parts {
            v.retain(|x| *x > 0);
            v.sort_unstable_by(|a, b| b.cmp(a));
            if !v.is_empty() {
                p.parts.insert(c, v);
            }
        }
        p
    }

    pub fn single(c: usize, r: u32) -> Self {
        Self::new(BTreeMap::from([(c, vec![r])]))
    }

    pub fn parts(&self) -> &BTreeMap<usize, Vec<u32>> {
        &self.parts
    }

    pub fn at(&self, c: usize) -> &[u32] {
        self.parts.get(&c).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `‖ρ‖`.
    pub fn norm(&self) -> u32 {
        self.parts.values().flatten().sum()
    }

    /// `‖ρ‖ + ℓ(ρ(1_X))`, the least level where `b_ρ` is nonzero.
    pub fn level(&self, unit: usize) -> u32 {
        self.norm() + self.at(unit).len() as u32
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        for (c, v) in &self.parts {
            if *c >= model.dim() {
                return Err(Error::ModelMismatch);
            }
            if model.is_odd(*c) && v.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Usage(format!(
                    "partition on odd class {} must be strict",
                    model.name_of(*c)
                )));
            }
        }
        Ok(())
    }

    /// Entries of the monomial of `b_ρ` other than the `a_{-1}(1_X)` fillers,
    /// in canonical order.
    pub fn core_entries(&self, unit: usize) -> Vec<Entry> {
        let mut e: Vec<Entry> = Vec::new();
        for (c, v) in &self.parts {
            let shift = u32::from(*c == unit);
            e.extend(v.iter().map(|r| (r + shift, *c)));
        }
        sort_entries(&mut e);
        e
    }

    /// Inverse of [`core_entries`](Self::core_entries); fillers are ignored.
    pub fn from_entries(entries: &[Entry], unit: usize) -> Self {
        let mut parts: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
        for &(n, c) in entries {
            if c == unit {
                if n >= 2 {
                    parts.entry(c).or_default().push(n - 1);
                }
            } else {
                parts.entry(c).or_default().push(n);
            }
        }
        Self::new(parts)
    }

    /// `Π_r r^{m_r} m_r!` over the `1_X` entries of `ρ̃` at level `n`.
    pub fn normalization(&self, unit: usize, n: u32) -> Q {
        let fill = n - self.level(unit);
        let mut z = rational::factorial(fill as u64);
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for r in self.at(unit) {
            *counts.entry(r + 1).or_insert(0) += 1;
        }
        for (r, m) in counts {
            z *= num_traits::pow(q(r as i64), m as usize) * rational::factorial(m);
        }
        z
    }

    pub fn to_named(&self, model: &SurfaceModel) -> BTreeMap<String, Vec<u32>> {
        self.parts
            .iter()
            .map(|(c, v)| (model.name_of(*c).to_string(), v.clone()))
            .collect()
    }

    pub fn from_named(model: &SurfaceModel, named: &BTreeMap<String, Vec<u32>>) -> Result<Self> {
        let mut parts = BTreeMap::new();
        for (name, v) in named {
            if v.contains(&0) {
                return Err(Error::Usage("partition parts must be positive".into()));
            }
            parts.insert(model.index_of(name)?, v.clone());
        }
        let p = Self::new(parts);
        p.validate(model)?;
        Ok(p)
    }

    /// Cohomological degree of `b_ρ(n)`: `Σ (2(r−1) + |c|)` over `ρ̃`.
    /// Fillers `a_{-1}(1_X)` have degree zero, so this does not depend on `n`.
    pub fn degree(&self, model: &SurfaceModel) -> u32 {
        self.core_entries(model.unit)
            .iter()
            .map(|(r, c)| 2 * (r - 1) + model.degree(*c) as u32)
            .sum()
    }

    pub fn display(&self, model: &SurfaceModel) -> String {
        if self.parts.is_empty() {
            return "∅".into();
        }
        self.parts
            .iter()
            .map(|(c, v)| {
                let ps: Vec<String> = v.iter().map(u32::to_string).collect();
                format!("{}:({})", model.name_of(*c), ps.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Serialize for PartitionFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.parts.iter().map(|(c, v)| (c.to_string(), v)))
    }
}

/// Canonical entry order: weight descending, then basis index ascending.
pub fn sort_entries(e: &mut [Entry]) {
    e.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
}

/// Multisets of core entries of total weight `w` over `labels`; odd labels
/// appear at most once per weight. Each result is in canonical order.
pub fn core_multisets(model: &SurfaceModel, labels: &[usize], w: u32) -> Vec<Vec<Entry>> {
    let mut types: Vec<Entry> = Vec::new();
    for n in (1..=w).rev() {
        for &c in labels {
            if c == model.unit && n == 1 {
                continue;
            }
            types.push((n, c));
        }
    }
    let mut out = Vec::new();
    fn go(
        model: &SurfaceModel,
        types: &[Entry],
        start: usize,
        rem: u32,
        cur: &mut Vec<Entry>,
        out: &mut Vec<Vec<Entry>>,
    ) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for t in start..types.len() {
            let (n, c) = types[t];
            if n > rem {
                continue;
            }
            let next = if model.is_odd(c) { t + 1 } else { t };
            cur.push((n, c));
            go(model, types, next, rem - n, cur, out);
            cur.pop();
        }
    }
    go(model, &types, 0, w, &mut Vec::new(), &mut out);
    out
}

/// Basis of `H*(X^[n])`: every admissible `ρ` with level at most `n`,
/// ordered by level, then by canonical core entries. A model with an ideal
/// only uses labels outside `S_ℐ`.
pub fn enumerate_basis(model: &SurfaceModel, n: u32) -> Vec<PartitionFunction> {
    let labels = model.surviving_basis();
    let mut out = Vec::new();
    for w in 0..=n {
        // the level ‖ρ‖ + ℓ(ρ(1_X)) is the core weight
        let mut level = core_multisets(model, &labels, w);
        level.sort();
        out.extend(
            level
                .iter()
                .map(|e| PartitionFunction::from_entries(e, model.unit)),
        );
    }
    out
}
