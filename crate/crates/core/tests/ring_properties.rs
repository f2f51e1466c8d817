use hilbfock::builtin;
use hilbfock::rational;
use hilbfock::ring::{Coords, Engine};
use hilbfock::vertex::Side;
use hilbfock::SurfaceModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn engine(m: &SurfaceModel, n: u32) -> Engine<'_> {
    Engine::for_model(m, Side::Hilbert, &-rational::one(), n, None).unwrap()
}

fn ring_models() -> Vec<SurfaceModel> {
    vec![
        builtin::c2(),
        builtin::toy(),
        builtin::k3_like(),
        builtin::ale(2),
        builtin::cotangent(1),
    ]
}

fn indicator(e: &Engine, i: usize) -> Coords {
    Coords::from([(e.basis[i].clone(), rational::one())])
}

fn check_triple(e: &Engine, m: &SurfaceModel, a: usize, b: usize, c: usize) {
    let ab = e.product(&e.basis[a], &e.basis[b]).unwrap();
    let left = e.cup_coords(&ab, &indicator(e, c)).unwrap();
    let bc = e.product(&e.basis[b], &e.basis[c]).unwrap();
    let right = e.multiply_basis(&e.basis[a], &bc).unwrap();
    assert_eq!(
        left,
        right,
        "{}: ({} {} {}) at n = {}",
        m.name,
        e.basis[a].display(m),
        e.basis[b].display(m),
        e.basis[c].display(m),
        e.n
    );
}

#[test]
fn associativity_all_triples_up_to_three() {
    for m in ring_models() {
        for n in 1..=3 {
            let e = engine(&m, n);
            let k = e.basis.len();
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        check_triple(&e, &m, a, b, c);
                    }
                }
            }
        }
    }
}

#[test]
fn associativity_sampled_at_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for m in ring_models() {
        let e = engine(&m, 4);
        let k = e.basis.len();
        for _ in 0..300 {
            check_triple(
                &e,
                &m,
                rng.gen_range(0..k),
                rng.gen_range(0..k),
                rng.gen_range(0..k),
            );
        }
    }
}

#[test]
fn super_commutativity_and_degrees_up_to_four() {
    for m in ring_models() {
        for n in 1..=4 {
            let t = engine(&m, n).structure_table(2, None).unwrap();
            assert_eq!(t.audit(&m), Vec::<String>::new(), "{} n = {n}", m.name);
        }
    }
}

#[test]
fn unit_is_neutral() {
    for m in ring_models() {
        let e = engine(&m, 3);
        let unit = hilbfock::partition::PartitionFunction::empty();
        for (i, r) in e.basis.iter().enumerate() {
            assert_eq!(e.product(&unit, r).unwrap(), indicator(&e, i));
            assert_eq!(e.product(r, &unit).unwrap(), indicator(&e, i));
        }
    }
}
