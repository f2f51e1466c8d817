//! Polynomials in `q_1, q_2, …` and Lehn's operators `g_k`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::rational::{self, q, Q};
use crate::surface::SurfaceModel;

/// Exponent vector: variable index `i` of `q_i` mapped to its exponent.
pub type Exponents = BTreeMap<u32, u32>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePolynomial {
    terms: BTreeMap<Exponents, Q>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Exponents::new(), Q::one())
    }

    pub fn var(i: u32) -> Self {
        Self::monomial(Exponents::from([(i, 1)]), Q::one())
    }

    pub fn monomial(e: Exponents, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_scaled(&mut self, other: &SparsePolynomial, f: &Q) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * f);
        }
    }

    pub fn scaled(&self, f: &Q) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, f);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ i·e_i`, if the same for every term.
    pub fn weight(&self) -> Option<u32> {
        let mut w = self
            .terms
            .keys()
            .map(|e| e.iter().map(|(i, x)| i * x).sum::<u32>());
        let first = w.next()?;
        w.all(|x| x == first).then_some(first)
    }

    pub fn mul_var(&self, i: u32) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e = e.clone();
            *e.entry(i).or_insert(0) += 1;
            out.add_term(e, c.clone());
        }
        out
    }

    /// `∂_i = i·∂/∂q_i`.
    pub fn scaled_derivative(&self, i: u32) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let Some(&x) = e.get(&i) else { continue };
            let mut e = e.clone();
            if x == 1 {
                e.remove(&i);
            } else {
                e.insert(i, x - 1);
            }
            out.add_term(e, c * q(i as i64) * q(x as i64));
        }
        out
    }

    fn variables(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|e| e.keys().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| PolyTermJson {
                    coeff: c.clone(),
                    monomial: e.iter().map(|(i, x)| (i.to_string(), *x)).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolynomialJson) -> Result<Self> {
        let mut p = Self::zero();
        for t in &j.terms {
            let mut e = Exponents::new();
            for (k, x) in &t.monomial {
                let i: u32 = k
                    .parse()
                    .ok()
                    .filter(|i| *i > 0)
                    .ok_or_else(|| Error::Parse(format!("bad variable index {k:?}")))?;
                if *x > 0 {
                    e.insert(i, *x);
                }
            }
            p.add_term(e, t.coeff.clone());
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    #[serde(with = "rational::serde_q")]
    pub coeff: Q,
    pub monomial: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<PolyTermJson>,
}

/// `g_k(p) = ((−1)^k/(k+1)!) Σ q_{n_1+⋯+n_{k+1}} ∂_{n_1}⋯∂_{n_{k+1}} p`.
/// Ordered tuples are enumerated over variables still present, so each
/// contributing tuple is visited once.
pub fn lehn_apply(k: u32, p: &SparsePolynomial) -> SparsePolynomial {
    fn go(depth: u32, sum: u32, p: &SparsePolynomial, out: &mut SparsePolynomial) {
        if depth == 0 {
            out.add_scaled(&p.mul_var(sum), &Q::one());
            return;
        }
        for i in p.variables() {
            let d = p.scaled_derivative(i);
            if !d.is_zero() {
                go(depth - 1, sum + i, &d, out);
            }
        }
    }
    let mut out = SparsePolynomial::zero();
    go(k + 1, 0, p, &mut out);
    out.scaled(&(rational::sign(k % 2 == 1) / rational::factorial(k as u64 + 1)))
}

/// `Φ`: `a_{-n_1}(1_X)⋯a_{-n_k}(1_X)|0⟩ ↦ q_{n_1}⋯q_{n_k}`.
pub fn phi_map(model: &SurfaceModel, v: &FockVector) -> Result<SparsePolynomial> {
    let mut out = SparsePolynomial::zero();
    for (m, c) in v.iter() {
        let mut e = Exponents::new();
        for (n, label) in m.entries() {
            if *label != model.unit {
                return Err(Error::NotUnitLabelled);
            }
            *e.entry(*n).or_insert(0) += 1;
        }
        out.add_term(e, c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::fock::creation_word;
    use crate::rational::frac;
    use crate::surface::GradedClass;

    fn qvar(i: u32, e: u32) -> Exponents {
        Exponents::from([(i, e)])
    }

    #[test]
    fn lehn_examples() {
        for m in 1..5 {
            assert_eq!(
                lehn_apply(0, &SparsePolynomial::var(m)),
                SparsePolynomial::var(m).scaled(&q(m as i64))
            );
        }
        let q1sq = SparsePolynomial::monomial(qvar(1, 2), Q::one());
        assert_eq!(
            lehn_apply(1, &q1sq),
            SparsePolynomial::var(2).scaled(&q(-1))
        );
        assert!(lehn_apply(1, &SparsePolynomial::var(2)).is_zero());
        let half = SparsePolynomial::monomial(qvar(1, 2), frac(1, 2));
        assert_eq!(
            lehn_apply(1, &half),
            SparsePolynomial::var(2).scaled(&frac(-1, 2))
        );
    }

    #[test]
    fn phi_examples() {
        let m = builtin::c2();
        for n in 0..5 {
            let p = phi_map(&m, &FockVector::unit_class(&m, n)).unwrap();
            let expect = if n == 0 {
                SparsePolynomial::one()
            } else {
                SparsePolynomial::monomial(qvar(1, n), Q::one() / rational::factorial(n as u64))
            };
            assert_eq!(p, expect);
        }
        let v = creation_word(&m, &[(2, GradedClass::basis(0))]).unwrap();
        assert_eq!(phi_map(&m, &v).unwrap(), SparsePolynomial::var(2));
        assert!(phi_map(&m, &FockVector::zero()).unwrap().is_zero());
        let h = creation_word(&m, &[(1, GradedClass::basis(1))]).unwrap();
        assert!(matches!(phi_map(&m, &h), Err(Error::NotUnitLabelled)));
    }

    #[test]
    fn json_round_trip() {
        let mut p = SparsePolynomial::monomial(Exponents::from([(1, 3), (2, 1)]), frac(-2, 7));
        p.add_term(qvar(5, 1), q(4));
        let s = serde_json::to_string(&p.to_json()).unwrap();
        let back: PolynomialJson = serde_json::from_str(&s).unwrap();
        assert_eq!(SparsePolynomial::from_json(&back).unwrap(), p);
    }
}
