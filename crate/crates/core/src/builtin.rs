//! Built-in surface models.

use crate::rational::q;
use crate::surface::{BasisElement, GradedClass, ModelSpec, SurfaceModel};

struct Builder {
    spec: ModelSpec,
}

impl Builder {
    fn new(name: &str) -> Self {
        Self {
            spec: ModelSpec {
                name: name.to_string(),
                basis: Vec::new(),
                products: Vec::new(),
                unit: 0,
                point: 0,
                euler: GradedClass::zero(),
                canonical: GradedClass::zero(),
                ideal: Vec::new(),
            },
        }
    }

    fn elem(&mut self, name: &str, degree: u8) -> &mut Self {
        self.spec.basis.push(BasisElement {
            name: name.to_string(),
            degree,
        });
        self
    }

    fn idx(&self, name: &str) -> usize {
        self.spec
            .basis
            .iter()
            .position(|b| b.name == name)
            .unwrap_or_else(|| panic!("unknown basis name {name}"))
    }

    fn class(&self, terms: &[(&str, i64)]) -> GradedClass {
        GradedClass::from_terms(terms.iter().map(|(n, c)| (self.idx(n), q(*c))))
    }

    fn prod(&mut self, a: &str, b: &str, result: &[(&str, i64)]) -> &mut Self {
        let r = self.class(result);
        let (ia, ib) = (self.idx(a), self.idx(b));
        self.spec.products.push((ia, ib, r));
        self
    }

    fn finish(
        &mut self,
        euler: &[(&str, i64)],
        canonical: &[(&str, i64)],
        ideal: &[&str],
    ) -> ModelSpec {
        self.spec.unit = self.idx("1");
        self.spec.point = self.idx("x");
        self.spec.euler = self.class(euler);
        self.spec.canonical = self.class(canonical);
        self.spec.ideal = ideal.iter().map(|n| self.class(&[(n, 1)])).collect();
        self.spec.clone()
    }
}

fn build(spec: ModelSpec) -> SurfaceModel {
    SurfaceModel::new(spec).expect("built-in model is well formed")
}

pub fn c2_spec() -> ModelSpec {
    Builder::new("c2")
        .elem("1", 0)
        .elem("h", 2)
        .elem("x", 4)
        .prod("h", "h", &[("x", 1)])
        .finish(&[("x", 3)], &[("h", -3)], &["h"])
}

/// `X = C²` inside `X̄ = P²`; the ideal is spanned by `h` and `[x]`.
pub fn c2() -> SurfaceModel {
    build(c2_spec())
}

pub fn toy_spec() -> ModelSpec {
    Builder::new("toy_b2=1")
        .elem("1", 0)
        .elem("h", 2)
        .elem("x", 4)
        .prod("h", "h", &[("x", 1)])
        .finish(&[("x", 3)], &[], &[])
}

/// Projective toy with `b₂ = 1` and `K = 0`.
pub fn toy() -> SurfaceModel {
    build(toy_spec())
}

pub fn k3_like_spec() -> ModelSpec {
    Builder::new("k3_like")
        .elem("1", 0)
        .elem("u", 2)
        .elem("v", 2)
        .elem("x", 4)
        .prod("u", "v", &[("x", 1)])
        .prod("v", "u", &[("x", 1)])
        .finish(&[("x", 4)], &[], &[])
}

/// `K = 0` projective model on a single hyperbolic plane `uv = [x]`.
/// `e` is the product of the copairing, so `∫e = 4`.
pub fn k3_like() -> SurfaceModel {
    build(k3_like_spec())
}

pub fn ale_spec(k: usize) -> ModelSpec {
    assert!(k >= 1);
    let name = format!("ale_{k}");
    let mut b = Builder::new(&name);
    b.elem("1", 0).elem("H", 2);
    let es: Vec<String> = (1..=k).map(|i| format!("E{i}")).collect();
    for e in &es {
        b.elem(e, 2);
    }
    b.elem("x", 4).prod("H", "H", &[("x", 1)]);
    for i in 0..k {
        b.prod(&es[i], &es[i], &[("x", -2)]);
        if i + 1 < k {
            b.prod(&es[i], &es[i + 1], &[("x", 1)]);
            b.prod(&es[i + 1], &es[i], &[("x", 1)]);
        }
    }
    b.finish(&[("x", k as i64 + 3)], &[("H", -3)], &["H"])
}

/// Resolved `A_k` singularity: exceptional curves `E_i` with intersection
/// matrix minus the Cartan matrix, and a boundary class `H`.
pub fn ale(k: usize) -> SurfaceModel {
    build(ale_spec(k))
}

pub fn cotangent_spec(g: usize) -> ModelSpec {
    assert!(g >= 1);
    let name = format!("cotangent_g{g}");
    let mut b = Builder::new(&name);
    let al: Vec<String> = (1..=g).map(|i| format!("alpha{i}")).collect();
    let be: Vec<String> = (1..=g).map(|i| format!("beta{i}")).collect();
    let aa: Vec<String> = (1..=g).map(|i| format!("a{i}")).collect();
    let bb: Vec<String> = (1..=g).map(|i| format!("b{i}")).collect();
    b.elem("1", 0);
    for n in al.iter().chain(&be) {
        b.elem(n, 1);
    }
    b.elem("f", 2).elem("s", 2);
    for n in aa.iter().chain(&bb) {
        b.elem(n, 3);
    }
    b.elem("x", 4);
    for i in 0..g {
        b.prod(&al[i], &be[i], &[("f", 1)]);
        b.prod(&al[i], &bb[i], &[("x", 1)]);
        b.prod(&be[i], &aa[i], &[("x", -1)]);
        b.prod("s", &al[i], &[(&aa[i], 1)]);
        b.prod("s", &be[i], &[(&bb[i], 1)]);
    }
    b.prod("s", "s", &[("x", 2 - 2 * g as i64)]);
    b.prod("s", "f", &[("x", 1)]);
    b.finish(&[("x", 4 - 4 * g as i64)], &[("s", -2)], &["s"])
}

/// Total space of `T*C` for a genus-`g` curve, compactified fibrewise:
/// `f` is the fibre class and `s` the section at infinity.
pub fn cotangent(g: usize) -> SurfaceModel {
    build(cotangent_spec(g))
}

pub fn all_specs() -> Vec<ModelSpec> {
    vec![
        c2_spec(),
        toy_spec(),
        k3_like_spec(),
        ale_spec(1),
        ale_spec(2),
        cotangent_spec(1),
    ]
}

pub fn all_models() -> Vec<SurfaceModel> {
    all_specs().into_iter().map(build).collect()
}

/// Looks up a built-in model by name (`c2`, `toy_b2=1`, `k3_like`, `ale_k`,
/// `cotangent_gN`).
pub fn by_name(name: &str) -> Option<SurfaceModel> {
    match name {
        "c2" => Some(c2()),
        "toy" | "toy_b2=1" => Some(toy()),
        "k3_like" => Some(k3_like()),
        _ => {
            if let Some(k) = name.strip_prefix("ale_") {
                let k: usize = k.parse().ok().filter(|k| *k >= 1)?;
                Some(ale(k))
            } else if let Some(g) = name.strip_prefix("cotangent_g") {
                let g: usize = g.parse().ok().filter(|g| *g >= 1)?;
                Some(cotangent(g))
            } else {
                None
            }
        }
    }
}
