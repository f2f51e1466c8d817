//! Finite-instance checks of the structural theorems about `H*(X^[n])`.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{
    annihilate_point, apply_heisenberg, b_class, expand_in_basis, reduce_mod_ideal, Bracket,
    FockVector,
};
use crate::lehn::{lehn_apply, phi_map, SparsePolynomial};
use crate::linalg::{self, Echelon};
use crate::partition::{enumerate_basis, PartitionFunction};
use crate::rational::{self, q, Q};
use crate::report::{CheckReport, TheoremReport};
use crate::ring::{Coords, Engine, GeneratorWord, StructureTable};
use crate::surface::{GradedClass, SurfaceModel};
use crate::vertex::{Applier, Side};

/// Compares every constant of `low` whose classes also index `high`,
/// restricted to `ν` defined at `low.n`. One check per `(ρ, σ)`.
pub fn compare_tables(
    model: &SurfaceModel,
    low: &StructureTable,
    high: &StructureTable,
    check: &mut CheckReport,
) {
    let unit = model.unit;
    let pos: HashMap<&PartitionFunction, usize> =
        high.basis.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let empty = Coords::new();
    for ((i, j), lrow) in &low.entries {
        let (r, s) = (&low.basis[*i], &low.basis[*j]);
        let (Some(hi), Some(hj)) = (pos.get(r), pos.get(s)) else {
            continue;
        };
        let hrow: Coords = high
            .entries
            .get(&(*hi, *hj))
            .unwrap_or(&empty)
            .iter()
            .filter(|(nu, _)| nu.level(unit) <= low.n)
            .map(|(nu, c)| (nu.clone(), c.clone()))
            .collect();
        check.record(*lrow == hrow, || {
            format!(
                "{} · {} differs between n = {} and n = {}",
                r.display(model),
                s.display(model),
                low.n,
                high.n
            )
        });
    }
}

/// Quotient structure constants agree across consecutive `n` in `range`.
pub fn n_independence(
    model: &SurfaceModel,
    side: Side,
    s: &Q,
    range: RangeInclusive<u32>,
    jobs: usize,
) -> Result<TheoremReport> {
    if model.ideal.is_none() {
        return Err(Error::NoIdeal);
    }
    let mut rep = TheoremReport::default();
    let mut prev: Option<StructureTable> = None;
    for n in range {
        let e = Engine::for_model(model, side, s, n, None)?;
        let t = e.structure_table(jobs, None)?;
        rep.audit(t.audit(model));
        if let Some(p) = &prev {
            compare_tables(model, p, &t, rep.check("equal-constants"));
        }
        prev = Some(t);
    }
    Ok(rep)
}

/// Projective `K = 0` model, constants taken modulo `H⁴`.
pub fn mod_h4_independence(
    model: &SurfaceModel,
    range: RangeInclusive<u32>,
    jobs: usize,
) -> Result<TheoremReport> {
    require_projective_k_trivial(model)?;
    let top = model.with_top_degree_ideal()?;
    n_independence(&top, Side::Hilbert, &-Q::one(), range, jobs)
}

fn require_projective_k_trivial(model: &SurfaceModel) -> Result<()> {
    if model.ideal.is_some() {
        return Err(Error::Usage(format!(
            "{} must be projective here",
            model.name
        )));
    }
    if !model.canonical.is_zero() {
        return Err(Error::Computability(format!(
            "{} has K ≠ 0 and no ideal to absorb the unknown coefficients",
            model.name
        )));
    }
    Ok(())
}

/// Coefficients, lowest degree first, of the polynomial through `points`.
pub fn interpolate(points: &[(Q, Q)]) -> Vec<Q> {
    let m = points.len();
    // Newton divided differences, then expansion into the monomial basis
    let mut dd: Vec<Q> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..m {
        for i in (j..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut coeffs: Vec<Q> = Vec::new();
    for i in (0..m).rev() {
        // coeffs = coeffs·(x − x_i) + dd[i]
        let mut next = vec![Q::zero(); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * &points[i].0;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

pub fn evaluate(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

#[derive(Clone, Debug, Serialize)]
pub struct PolynomialFit {
    pub rho: String,
    pub sigma: String,
    pub nu: String,
    pub bound: i64,
    /// Coefficients of `n^0, n^1, …`.
    pub coefficients: Vec<String>,
}

/// Each constant with `ℓ(ρ) + ℓ(σ) − ℓ(ν) ≤ max_bound` (levels `ℓ`) is
/// interpolated through the first `bound + 1` values of `range` and must hit
/// the remaining ones exactly. Negative bounds demand the zero polynomial.
/// Only classes defined at the start of the range take part; `only`
/// restricts to listed triples.
pub fn polynomiality(
    model: &SurfaceModel,
    range: RangeInclusive<u32>,
    max_bound: i64,
    jobs: usize,
    only: Option<&[(PartitionFunction, PartitionFunction, PartitionFunction)]>,
) -> Result<(TheoremReport, Vec<PolynomialFit>)> {
    require_projective_k_trivial(model)?;
    let unit = model.unit;
    let low = *range.start();
    let ns: Vec<u32> = range.collect();
    if ns.len() < (max_bound.max(0) as usize) + 3 {
        return Err(Error::Usage(format!(
            "range of {} values is too short for degree bound {max_bound} plus two checks",
            ns.len()
        )));
    }
    let mut rep = TheoremReport::default();
    let mut tables = Vec::new();
    for &n in &ns {
        let e = Engine::new(Applier::hilbert(model, false)?, n, Some(low))?;
        let t = e.structure_table(jobs, None)?;
        rep.audit(t.audit(model));
        tables.push(t);
    }
    let basis = tables[0].basis.clone();
    if tables.iter().any(|t| t.basis != basis) {
        return Err(Error::Internal("restricted bases differ across n".into()));
    }
    let lvl: Vec<i64> = basis.iter().map(|r| r.level(unit) as i64).collect();
    let xs: Vec<Q> = ns.iter().map(|n| q(*n as i64)).collect();
    let wanted = |i: usize, j: usize, l: usize| {
        only.is_none_or(|ts| {
            ts.iter()
                .any(|(a, b, c)| *a == basis[i] && *b == basis[j] && *c == basis[l])
        })
    };
    let mut fits = Vec::new();
    let check = rep.check("polynomial");
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            for l in 0..basis.len() {
                let bound = lvl[i] + lvl[j] - lvl[l];
                if bound > max_bound || !wanted(i, j, l) {
                    continue;
                }
                let values: Vec<Q> = tables.iter().map(|t| t.constant(i, j, &basis[l])).collect();
                let need = (bound + 1).max(0) as usize;
                let pts: Vec<(Q, Q)> = xs.iter().cloned().zip(values.iter().cloned()).collect();
                let coeffs = interpolate(&pts[..need]);
                let ok = pts.iter().all(|(x, y)| evaluate(&coeffs, x) == *y);
                check.record(ok, || {
                    format!(
                        "({}, {}, {}) values {:?} exceed degree {bound}",
                        basis[i].display(model),
                        basis[j].display(model),
                        basis[l].display(model),
                        values.iter().map(rational::format).collect::<Vec<_>>()
                    )
                });
                if ok && !coeffs.is_empty() {
                    fits.push(PolynomialFit {
                        rho: basis[i].display(model),
                        sigma: basis[j].display(model),
                        nu: basis[l].display(model),
                        bound,
                        coefficients: coeffs.iter().map(rational::format).collect(),
                    });
                }
            }
        }
    }
    Ok((rep, fits))
}

fn has_ideal_label(model: &SurfaceModel, rho: &PartitionFunction) -> bool {
    rho.parts().keys().any(|c| model.in_ideal(*c))
}

fn coords_in_ideal(model: &SurfaceModel, x: &Coords) -> bool {
    x.keys().all(|r| has_ideal_label(model, r))
}

/// The ideal `I^[n]` for a model with restriction ideal, computed upstairs.
///
/// The unknown coefficients only multiply `K`-terms, so every statement is
/// checked on the known part and on each `K`-term separately:
/// * `absorption`: every generator operator `𝔊_k(β)`, `k < n`, maps `I^[n]`
///   into itself (these operators generate all cup products);
/// * `g-in-ideal`: `G_k(α, n) ∈ I^[n]` for `α ∈ S_ℐ`;
/// * `filtration`: known parts raise the level by at most `k + 1`, `K`-terms
///   by at most `k`;
/// * `generation`: for each basis class of `I^[n]` a product of generators
///   with one factor `G_k(α, n)`, `α ∈ S_ℐ`, whose top-level part is
///   independent of the unknown coefficients; those parts have full rank in
///   every (degree, level) block.
///
/// With `K = 0` the same statements are also checked on exact products.
pub fn ideal_suite(model: &SurfaceModel, n: u32, jobs: usize) -> Result<TheoremReport> {
    model.ideal.as_ref().ok_or(Error::NoIdeal)?;
    let base = model.projective_base();
    let unit = base.unit;
    let ap = Applier::hilbert(&base, false)?;
    let basis = enumerate_basis(&base, n);
    let level_of = |v: &FockVector| {
        v.iter()
            .map(|(m, _)| m.to_partition(unit).level(unit))
            .max()
            .unwrap_or(0)
    };
    let mut rep = TheoremReport::default();
    for rho in &basis {
        let x = b_class(&base, rho, n);
        let lx = rho.level(unit);
        let x_in = has_ideal_label(model, rho);
        for k in 0..n {
            for c in 0..base.dim() {
                let beta = GradedClass::basis(c);
                let known = ap.apply_known(k, &beta, &x)?;
                let markers = ap.k_markers(k, &beta, &x)?;
                let ok = level_of(&known) <= lx + k + 1
                    && markers
                        .iter()
                        .all(|(_, m)| m.is_zero() || level_of(m) <= lx + k);
                rep.check("filtration").record(ok, || {
                    format!("G_{k}({}) on {}", base.name_of(c), rho.display(&base))
                });
                if x_in {
                    let ok =
                        known.in_ideal(model) && markers.iter().all(|(_, m)| m.in_ideal(model));
                    rep.check("absorption").record(ok, || {
                        format!(
                            "G_{k}({}) · {} leaves the ideal",
                            base.name_of(c),
                            rho.display(&base)
                        )
                    });
                }
            }
        }
    }
    let unit_n = FockVector::unit_class(&base, n);
    for c in (0..base.dim()).filter(|c| model.in_ideal(*c)) {
        for k in 0..n {
            let alpha = GradedClass::basis(c);
            let known = ap.apply_known(k, &alpha, &unit_n)?;
            let markers = ap.k_markers(k, &alpha, &unit_n)?;
            let ok = known.in_ideal(model) && markers.iter().all(|(_, m)| m.in_ideal(model));
            rep.check("g-in-ideal")
                .record(ok, || format!("G_{k}({}, {n})", base.name_of(c)));
        }
    }
    let ideal_basis: Vec<&PartitionFunction> =
        basis.iter().filter(|r| has_ideal_label(model, r)).collect();
    let mut blocks: BTreeMap<(u32, u32), (usize, Echelon<PartitionFunction>)> = BTreeMap::new();
    for rho in &ideal_basis {
        let mut entries = rho.core_entries(unit);
        let pick = entries
            .iter()
            .position(|(_, c)| model.in_ideal(*c))
            .expect("ideal class has an ideal label");
        let (m, c) = entries.remove(pick);
        let mut v = ap.apply_known(m - 1, &GradedClass::basis(c), &unit_n)?;
        for (m, c) in entries.iter().rev() {
            v = ap.apply_known(m - 1, &GradedClass::basis(*c), &v)?;
        }
        let coords = expand_in_basis(&base, &v, n)?;
        let top_level = rho.level(unit);
        let overflow = coords.keys().any(|r| r.level(unit) > top_level);
        rep.check("generation").record(!overflow, || {
            format!("leading word of {} exceeds its level", rho.display(&base))
        });
        let top: Coords = coords
            .into_iter()
            .filter(|(r, _)| r.level(unit) == top_level)
            .collect();
        let block = blocks.entry((rho.degree(&base), top_level)).or_default();
        block.0 += 1;
        block.1.insert(&top);
    }
    for ((deg, lvl), (count, ech)) in &blocks {
        rep.check("generation").record(ech.rank() == *count, || {
            format!("degree {deg}, level {lvl}: rank {} of {count}", ech.rank())
        });
    }
    if base.canonical.is_zero() {
        direct_ideal_checks(model, &base, n, jobs, &mut rep)?;
    }
    Ok(rep)
}

fn direct_ideal_checks(
    model: &SurfaceModel,
    base: &SurfaceModel,
    n: u32,
    jobs: usize,
    rep: &mut TheoremReport,
) -> Result<()> {
    let e = Engine::new(Applier::hilbert(base, false)?, n, None)?;
    let ideal_idx: Vec<usize> = (0..e.basis.len())
        .filter(|i| has_ideal_label(model, &e.basis[*i]))
        .collect();
    let table = e.structure_table(jobs, None)?;
    rep.audit(table.audit(base));
    for ((i, j), row) in &table.entries {
        if ideal_idx.contains(i) {
            rep.check("absorption-direct")
                .record(coords_in_ideal(model, row), || {
                    format!(
                        "{} · {}",
                        e.basis[*i].display(base),
                        e.basis[*j].display(base)
                    )
                });
        }
    }
    let mut ech: Echelon<PartitionFunction> = Echelon::default();
    for c in (0..base.dim()).filter(|c| model.in_ideal(*c)) {
        for k in 0..n {
            let g = e.applier.g_class(k, &GradedClass::basis(c), n)?;
            let g = expand_in_basis(base, &g, n)?;
            for sigma in &e.basis {
                let p = e.multiply_basis(sigma, &g)?;
                rep.check("generation-direct")
                    .record(coords_in_ideal(model, &p), || {
                        format!("{} · G_{k}({})", sigma.display(base), base.name_of(c))
                    });
                ech.insert(&p);
            }
        }
    }
    rep.check("generation-direct")
        .record(ech.rank() == ideal_idx.len(), || {
            format!(
                "generated rank {} vs dim I^[{n}] = {}",
                ech.rank(),
                ideal_idx.len()
            )
        });
    Ok(())
}

/// `b_{r,c}` for `c ∈ S_X` up to the given level.
pub fn fh_generators(model: &SurfaceModel, max_level: u32) -> Vec<PartitionFunction> {
    let mut out = Vec::new();
    for c in model.surviving_basis() {
        for r in 1.. {
            let p = PartitionFunction::single(c, r);
            if p.level(model.unit) > max_level {
                break;
            }
            out.push(p);
        }
    }
    out
}

fn odd_count(model: &SurfaceModel, rho: &PartitionFunction) -> bool {
    rho.degree(model) % 2 == 1
}

/// Monomials in `b_{r,c}` with `Σ r ≤ norm_bound`, odd factors distinct.
pub fn fh_monomials(model: &SurfaceModel, norm_bound: u32) -> Vec<Vec<PartitionFunction>> {
    let gens = fh_generators(model, 2 * norm_bound);
    let gens: Vec<PartitionFunction> = gens
        .into_iter()
        .filter(|g| g.norm() <= norm_bound)
        .collect();
    let mut out = Vec::new();
    fn go(
        model: &SurfaceModel,
        gens: &[PartitionFunction],
        start: usize,
        rem: u32,
        cur: &mut Vec<PartitionFunction>,
        out: &mut Vec<Vec<PartitionFunction>>,
    ) {
        out.push(cur.clone());
        for i in start..gens.len() {
            if gens[i].norm() > rem {
                continue;
            }
            let next = if odd_count(model, &gens[i]) { i + 1 } else { i };
            cur.push(gens[i].clone());
            go(model, gens, next, rem - gens[i].norm(), cur, out);
            cur.pop();
        }
    }
    go(model, &gens, 0, norm_bound, &mut Vec::new(), &mut out);
    out
}

/// FH ring of a model with ideal: generation by `b_{r,c}` and vanishing odd
/// squares for `n ≤ max_n`, independence of monomials with `Σ r ≤
/// norm_bound`, and `𝔄` as a surjective ring map for targets `n < max_n`.
pub fn fh_ring(
    model: &SurfaceModel,
    max_n: u32,
    norm_bound: u32,
    jobs: usize,
) -> Result<TheoremReport> {
    model.ideal.as_ref().ok_or(Error::NoIdeal)?;
    let mut rep = TheoremReport::default();
    for n in 1..=max_n {
        let e = Engine::for_model(model, Side::Hilbert, &-Q::one(), n, None)?;
        let gens = fh_generators(model, n);
        // closure of the unit under multiplication by generators
        let mut ech = Echelon::default();
        let unit = Coords::from([(PartitionFunction::empty(), Q::one())]);
        ech.insert(&unit);
        let mut queue = vec![unit];
        while let Some(v) = queue.pop() {
            for g in &gens {
                let w = e.multiply_basis(g, &v)?;
                if ech.insert(&w) {
                    queue.push(w);
                }
            }
        }
        rep.check("generation")
            .record(ech.rank() == e.basis.len(), || {
                format!(
                    "n = {n}: generated rank {} of {}",
                    ech.rank(),
                    e.basis.len()
                )
            });
        for g in gens.iter().filter(|g| odd_count(model, g)) {
            let sq = e.product(g, g)?;
            rep.check("odd-squares").record(sq.is_empty(), || {
                format!("{}² at n = {n}", g.display(model))
            });
        }
    }
    let monomials = fh_monomials(model, norm_bound);
    let unit = model.unit;
    let top = monomials
        .iter()
        .map(|m| m.iter().map(|g| g.level(unit)).sum::<u32>())
        .max()
        .unwrap_or(0);
    let max_gen = fh_generators(model, 2 * norm_bound)
        .iter()
        .filter(|g| g.norm() <= norm_bound)
        .map(|g| g.level(unit))
        .max()
        .unwrap_or(0);
    let e = Engine::for_model(model, Side::Hilbert, &-Q::one(), top, Some(max_gen))?;
    let mut ech = Echelon::default();
    for m in &monomials {
        let mut v = Coords::from([(PartitionFunction::empty(), Q::one())]);
        for g in m.iter().rev() {
            v = e.multiply_basis(g, &v)?;
        }
        let fresh = ech.insert(&v);
        rep.check("monomial-independence").record(fresh, || {
            let names: Vec<String> = m.iter().map(|g| g.display(model)).collect();
            format!("monomial {} is dependent at n = {top}", names.join("·"))
        });
    }
    for n in 1..max_n {
        rep.merge(a_homomorphism(model, n, jobs)?);
    }
    Ok(rep)
}

fn annihilate_coords(engine_hi: &Engine, engine_lo: &Engine, x: &Coords) -> Result<Coords> {
    let model = engine_hi.model();
    let v = annihilate_point(model, &engine_hi.to_vector(x));
    expand_in_basis(model, &v, engine_lo.n)
}

/// `𝔄: H*(X^[n+1]) → H*(X^[n])` is a surjective ring map with
/// `𝔄(b_ρ(n+1)) = b_ρ(n)`.
pub fn a_homomorphism(model: &SurfaceModel, n: u32, jobs: usize) -> Result<TheoremReport> {
    model.ideal.as_ref().ok_or(Error::NoIdeal)?;
    let hi = Engine::for_model(model, Side::Hilbert, &-Q::one(), n + 1, None)?;
    let lo = Engine::for_model(model, Side::Hilbert, &-Q::one(), n, None)?;
    let mut rep = TheoremReport::default();
    let images: Vec<Coords> = hi
        .basis
        .iter()
        .map(|r| annihilate_coords(&hi, &lo, &Coords::from([(r.clone(), Q::one())])))
        .collect::<Result<_>>()?;
    let mut ech = Echelon::default();
    for (r, img) in hi.basis.iter().zip(&images) {
        let want = if r.level(model.unit) <= n {
            Coords::from([(r.clone(), Q::one())])
        } else {
            Coords::new()
        };
        rep.check("diagram").record(*img == want, || {
            format!("𝔄 b_{}({})", r.display(model), n + 1)
        });
        ech.insert(img);
    }
    rep.check("a-surjective")
        .record(ech.rank() == lo.basis.len(), || {
            format!("image rank {} of {} at n = {n}", ech.rank(), lo.basis.len())
        });
    let table = hi.structure_table(jobs, None)?;
    rep.audit(table.audit(model));
    for ((i, j), row) in &table.entries {
        let left = annihilate_coords(&hi, &lo, row)?;
        let right = lo.cup_coords(&images[*i], &images[*j])?;
        rep.check("a-homomorphism").record(left == right, || {
            format!(
                "𝔄({} · {}) at n = {}",
                hi.basis[*i].display(model),
                hi.basis[*j].display(model),
                n + 1
            )
        });
    }
    Ok(rep)
}

/// Structure constants of the quotient by `⊕_{ℓ≥1} H^ℓ` from Lehn's operators
/// on `ℚ[q]`, by dense elimination independent of the Fock engine.
pub fn lehn_table(
    model: &SurfaceModel,
    n: u32,
) -> Result<BTreeMap<(PartitionFunction, PartitionFunction), Coords>> {
    let unit = model.unit;
    let basis: Vec<PartitionFunction> = enumerate_basis(model, n)
        .into_iter()
        .filter(|r| r.parts().keys().all(|c| *c == unit))
        .collect();
    let polys: Vec<SparsePolynomial> = basis
        .iter()
        .map(|r| phi_map(model, &b_class(model, r, n)))
        .collect::<Result<_>>()?;
    let mut lookup = BTreeMap::new();
    for (i, p) in polys.iter().enumerate() {
        let (e, c) = p
            .iter()
            .next()
            .ok_or_else(|| Error::Internal("zero basis polynomial".into()))?;
        lookup.insert(e.clone(), (i, c.clone()));
    }
    let coords = |p: &SparsePolynomial| -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); basis.len()];
        for (e, c) in p.iter() {
            let (i, scale) = lookup
                .get(e)
                .ok_or_else(|| Error::Internal("polynomial outside the basis".into()))?;
            out[*i] = c / scale;
        }
        Ok(out)
    };
    let word_apply = |w: &GeneratorWord, p: &SparsePolynomial| {
        w.0.iter()
            .rev()
            .fold(p.clone(), |acc, g| lehn_apply(g.k, &acc))
    };
    let unit_poly = phi_map(model, &FockVector::unit_class(model, n))?;
    let words: Vec<GeneratorWord> = basis
        .iter()
        .map(|r| GeneratorWord::for_partition(r, unit))
        .collect();
    let t: linalg::Matrix = words
        .iter()
        .map(|w| coords(&word_apply(w, &unit_poly)))
        .collect::<Result<_>>()?;
    let tinv = linalg::inverse(&t)
        .ok_or_else(|| Error::Internal("Lehn word matrix is singular".into()))?;
    let mut out = BTreeMap::new();
    for (i, r) in basis.iter().enumerate() {
        for (j, s) in basis.iter().enumerate() {
            let mut acc = vec![Q::zero(); basis.len()];
            for (tau, w) in words.iter().enumerate() {
                if tinv[i][tau].is_zero() {
                    continue;
                }
                let v = coords(&word_apply(w, &polys[j]))?;
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += &tinv[i][tau] * x;
                }
            }
            let row: Coords = basis
                .iter()
                .cloned()
                .zip(acc)
                .filter(|(_, x)| !x.is_zero())
                .collect();
            out.insert((r.clone(), s.clone()), row);
        }
    }
    Ok(out)
}

/// The quotient by `⊕_{ℓ≥1} H^ℓ` against Lehn's operators, and
/// `G_k(1_X, n) ≡ ((−1)^k/(k+1)!)·1_{-(n−k−1)} a_{-(k+1)}(1_X)|0⟩` for `k < n`.
pub fn c2_quotient(model: &SurfaceModel, max_n: u32, jobs: usize) -> Result<TheoremReport> {
    if model.ideal.is_some() {
        return Err(Error::Usage(format!(
            "{} must be projective here",
            model.name
        )));
    }
    let quot = model.with_positive_degree_ideal()?;
    let unit = quot.unit;
    let one = GradedClass::basis(unit);
    let upstairs = Applier::hilbert(model, false)?;
    let upstairs_ok = upstairs.check_gate().is_ok();
    let mut rep = TheoremReport::default();
    for n in 1..=max_n {
        let e = Engine::for_model(&quot, Side::Hilbert, &-Q::one(), n, None)?;
        let table = e.structure_table(jobs, None)?;
        rep.audit(table.audit(&quot));
        let lehn = lehn_table(&quot, n)?;
        for ((i, j), row) in &table.entries {
            let key = (e.basis[*i].clone(), e.basis[*j].clone());
            let ok = lehn.get(&key) == Some(row);
            rep.check("lehn-table").record(ok, || {
                format!(
                    "{} · {} at n = {n}",
                    key.0.display(&quot),
                    key.1.display(&quot)
                )
            });
        }
        for k in 0..n {
            let mut want = FockVector::unit_class(&quot, n - k - 1);
            want = apply_heisenberg(&quot, &Bracket::hilbert(), -(k as i64 + 1), &one, &want)?;
            want = want.scaled(&(rational::sign(k % 2 == 1) / rational::factorial(k as u64 + 1)));
            let got = e.applier.g_class(k, &one, n)?;
            rep.check("char-class")
                .record(got == want, || format!("G_{k}(1, {n}) in the quotient"));
            if upstairs_ok {
                let up = reduce_mod_ideal(&quot, &upstairs.g_class(k, &one, n)?)?;
                rep.check("char-class").record(up == want, || {
                    format!("G_{k}(1, {n}) reduced from upstairs")
                });
            }
            let lhs = phi_map(&quot, &got)?;
            let rhs = lehn_apply(k, &phi_map(&quot, &FockVector::unit_class(&quot, n))?);
            rep.check("lehn-operator")
                .record(lhs == rhs, || format!("Φ(G_{k}(1, {n})) vs g_{k}"));
        }
    }
    Ok(rep)
}
