//! Acceptance run: one line per criterion, exact rational equality throughout.

use std::process::ExitCode;
use std::time::Instant;

use hilbfock::report::{CheckReport, TheoremReport};
use hilbfock::vertex::Side;
use hilbfock::{builtin, oracle, orbifold, rational, theorems, Result, SurfaceModel};

const KS_SAMPLES: usize = 1000;
const SEED: u64 = 20241015;

fn model(name: &str) -> SurfaceModel {
    builtin::by_name(name).expect("built-in model")
}

fn single(name: &str, rep: CheckReport) -> TheoremReport {
    let mut t = TheoremReport::default();
    *t.check(name) = rep;
    t
}

fn heisenberg() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for m in builtin::all_models() {
        t.merge(single(&m.name, oracle::verify_heisenberg(&m, 4, 5)));
    }
    Ok(t)
}

fn lemma_ks() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for name in ["toy_b2=1", "cotangent_g1"] {
        t.merge(single(
            name,
            oracle::verify_ks(&model(name), 5, 5, KS_SAMPLES, SEED)?,
        ));
    }
    Ok(t)
}

fn nonsense1() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for name in ["toy_b2=1", "k3_like", "cotangent_g1"] {
        t.merge(single(
            name,
            oracle::verify_nonsense1(&model(name), 2, 3, 4, None)?,
        ));
    }
    Ok(t)
}

fn ideal() -> Result<TheoremReport> {
    let k3_top = builtin::k3_like().with_top_degree_ideal()?;
    let mut t = TheoremReport::default();
    for m in [model("c2"), model("ale_2"), model("cotangent_g1"), k3_top] {
        for n in 1..=4 {
            t.merge(theorems::ideal_suite(&m, n, 1)?);
        }
    }
    Ok(t)
}

fn n_independence() -> Result<TheoremReport> {
    let minus_one = -rational::one();
    let mut t = theorems::n_independence(&model("c2"), Side::Hilbert, &minus_one, 2..=6, 1)?;
    for name in ["ale_2", "cotangent_g1"] {
        t.merge(theorems::n_independence(
            &model(name),
            Side::Hilbert,
            &minus_one,
            2..=4,
            1,
        )?);
    }
    let h4 = theorems::mod_h4_independence(&builtin::k3_like(), 2..=5, 1)?;
    for (k, v) in h4.checks {
        t.check(&format!("mod-h4 {k}")).merge(v);
    }
    Ok(t)
}

fn polynomiality() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for m in [builtin::k3_like(), builtin::toy()] {
        let (rep, fits) = theorems::polynomiality(&m, 3..=9, 4, 1, None)?;
        t.merge(rep);
        t.check("nonconstant-fits")
            .record(fits.iter().any(|f| f.coefficients.len() > 1), || {
                format!("{}: every constant is independent of n", m.name)
            });
    }
    Ok(t)
}

fn fh_ring() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for name in ["c2", "cotangent_g1"] {
        t.merge(theorems::fh_ring(&model(name), 5, 5, 1)?);
    }
    Ok(t)
}

fn c2_quotient() -> Result<TheoremReport> {
    theorems::c2_quotient(&builtin::k3_like(), 6, 1)
}

fn ring_isom() -> Result<TheoremReport> {
    let mut t = TheoremReport::default();
    for (name, max_n) in [("c2", 5), ("ale_2", 3), ("cotangent_g1", 3)] {
        let m = model(name);
        for n in 1..=max_n {
            t.merge(orbifold::ring_isom(&m, n, 1)?);
        }
    }
    Ok(t)
}

fn summary(t: &TheoremReport) -> (usize, usize) {
    t.checks
        .values()
        .fold((0, 0), |(c, f), r| (c + r.checked, f + r.failed))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Result<TheoremReport>);
    let criteria: [Criterion; 9] = [
        ("Heisenberg relations", heisenberg),
        ("commutator lemma for operator words", lemma_ks),
        (
            "sigma-expansion of the Chern character operators",
            nonsense1,
        ),
        ("ideal suite", ideal),
        ("n-independence of structure constants", n_independence),
        ("polynomiality in n", polynomiality),
        ("FH ring structure and the A map", fh_ring),
        (
            "affine-plane quotient against Lehn's operators",
            c2_quotient,
        ),
        ("Hilbert/orbifold ring isomorphism", ring_isom),
    ];
    let mut audits = CheckReport::default();
    let mut all_ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let line = match run() {
            Ok(mut t) => {
                if let Some(a) = t.checks.remove("audit") {
                    audits.merge(a);
                }
                let (checked, failed) = summary(&t);
                let vacuous: Vec<&String> = t
                    .checks
                    .iter()
                    .filter(|(_, r)| r.checked == 0)
                    .map(|(k, _)| k)
                    .collect();
                let ok = t.passed() && checked > 0 && vacuous.is_empty();
                all_ok &= ok;
                let mut line = format!(
                    "criterion {:>2} {}: {} ({checked} checks, {failed} failed, {:.1}s)",
                    i + 1,
                    name,
                    if ok { "PASS" } else { "FAIL" },
                    started.elapsed().as_secs_f64()
                );
                for w in t.witnesses().iter().take(5) {
                    line += &format!("\n    witness: {w}");
                }
                for k in vacuous {
                    line += &format!("\n    no instances for {k}");
                }
                line
            }
            Err(e) => {
                all_ok = false;
                format!("criterion {:>2} {}: FAIL (error: {e})", i + 1, name)
            }
        };
        println!("{line}");
    }
    let ok = audits.passed() && audits.checked > 0;
    all_ok &= ok;
    println!(
        "criterion 10 degree and sign audits of every table: {} ({} tables, {} failed)",
        if ok { "PASS" } else { "FAIL" },
        audits.checked,
        audits.failed
    );
    for w in audits.witnesses.iter().take(5) {
        println!("    witness: {w}");
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
