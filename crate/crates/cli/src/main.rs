mod args;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use hilbfock::lehn::{lehn_apply, PolynomialJson, SparsePolynomial};
use hilbfock::model_file::load_model;
use hilbfock::partition::PartitionFunction;
use hilbfock::report::TheoremReport;
use hilbfock::ring::{Engine, EntryJson};
use hilbfock::vertex::Side;
use hilbfock::{oracle, orbifold, rational, theorems, Error, Result, SurfaceModel, Q};
use serde::Deserialize;
use serde_json::{json, Value};

use args::{Cli, Command, NRange, SideArg, TheoremId, VerifyArgs};
use report::RunReport;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Computability(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn side_of(s: SideArg) -> Side {
    match s {
        SideArg::Hilbert => Side::Hilbert,
        SideArg::Orbifold => Side::Orbifold,
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Validate { .. } => "validate".into(),
        Command::Product { .. } => "product".into(),
        Command::StructureConstants { .. } => "structure-constants".into(),
        Command::OrbStructureConstants { .. } => "orb-structure-constants".into(),
        Command::LehnApply { .. } => "lehn-apply".into(),
        Command::Verify(v) => format!(
            "verify {}",
            clap::ValueEnum::to_possible_value(&v.id)
                .expect("named")
                .get_name()
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rep = RunReport::new(&command_name(&cli.command));
    let started = Instant::now();
    let outcome = run(&cli, &mut rep);
    if cli.timing {
        rep.timing_ms = Some(started.elapsed().as_millis());
    }
    let code = match outcome {
        Ok(()) if rep.passed() => 0,
        Ok(()) => 1,
        Err(e) => {
            eprintln!("hilbfock: {e}");
            rep.status = "error".into();
            rep.error = Some(e.to_string());
            exit_code(&e)
        }
    };
    println!("{}", rep.render(cli.pretty));
    ExitCode::from(code)
}

fn load(path: &Path, rep: &mut RunReport) -> Result<SurfaceModel> {
    let (model, hash) = load_model(path)?;
    rep.model = Some(model.name.clone());
    rep.model_hash = Some(hash);
    Ok(model)
}

fn write_out(cli: &Cli, value: &Value) -> Result<()> {
    if let Some(path) = &cli.out {
        std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    }
    Ok(())
}

fn parse_partition(model: &SurfaceModel, text: &str) -> Result<PartitionFunction> {
    let named: BTreeMap<String, Vec<u32>> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("partition {text:?}: {e}")))?;
    PartitionFunction::from_named(model, &named)
}

fn cache_path(hash: &str, side: Side, s: &Q, n: u32) -> Option<PathBuf> {
    let dir = std::env::var_os("HILBFOCK_CACHE_DIR")?;
    let side = match side {
        Side::Hilbert => "hilbert".to_string(),
        Side::Orbifold => format!("orbifold_s{}", rational::format(s).replace('/', "_")),
    };
    Some(PathBuf::from(dir).join(format!("{hash}-{side}-n{n}.json")))
}

/// Structure table as JSON, read from or written to the cache directory
/// when `HILBFOCK_CACHE_DIR` is set.
fn table_json(
    cli: &Cli,
    model: &SurfaceModel,
    hash: &str,
    side: Side,
    s: &Q,
    n: u32,
) -> Result<Value> {
    let path = cache_path(hash, side, s, n);
    if let Some(p) = path.as_ref().filter(|p| p.exists()) {
        eprintln!("hilbfock: table from cache {}", p.display());
        return Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?);
    }
    let engine = Engine::for_model(model, side, s, n, None)?;
    let table = engine.structure_table(cli.jobs, None)?;
    let audit = table.audit(model);
    if !audit.is_empty() {
        return Err(Error::Internal(format!(
            "audit failed: {}",
            audit.join("; ")
        )));
    }
    let mut j = table.to_json(model);
    if side == Side::Orbifold {
        j.s = Some(rational::format(s));
    }
    let value = serde_json::to_value(&j)?;
    if let Some(p) = path {
        if let Some(dir) = p.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&p, serde_json::to_string(&value)?)?;
    }
    Ok(value)
}

fn run(cli: &Cli, rep: &mut RunReport) -> Result<()> {
    match &cli.command {
        Command::Validate { model } => {
            let m = load(model, rep)?;
            let v = m.validate(true);
            for d in &v.violations {
                rep.witnesses.push(format!(
                    "{}: {} [{}]",
                    d.invariant,
                    d.message,
                    d.witness.join(", ")
                ));
            }
            if !v.is_ok() {
                rep.status = "fail".into();
            }
            if !v.warnings.is_empty() {
                rep.result = Some(json!({ "warnings": v.warnings }));
            }
            Ok(())
        }
        Command::Product {
            model,
            n,
            rho,
            sigma,
            side,
            s,
        } => {
            let m = load(model, rep)?;
            let s = rational::parse(s)?;
            let side = side_of(*side);
            rep.param("n", n);
            rep.param("rho", rho);
            rep.param("sigma", sigma);
            rep.param("side", format!("{side:?}").to_lowercase());
            if side == Side::Orbifold {
                rep.param("s", rational::format(&s));
            }
            let (r, t) = (parse_partition(&m, rho)?, parse_partition(&m, sigma)?);
            let engine = Engine::for_model(&m, side, &s, *n, None)?;
            for p in [&r, &t] {
                if engine.position(p).is_none() {
                    return Err(Error::Usage(format!(
                        "{} is not a basis class at n = {n}",
                        p.display(&m)
                    )));
                }
            }
            let prod = engine.product(&r, &t)?;
            let entries: Vec<EntryJson> = prod
                .iter()
                .map(|(nu, c)| EntryJson {
                    nu: nu.to_named(&m),
                    coeff: c.clone(),
                })
                .collect();
            let text: Vec<String> = prod
                .iter()
                .map(|(nu, c)| format!("{}·b{}", rational::pretty(c), nu.display(&m)))
                .collect();
            let value = json!({ "entries": entries, "text": if text.is_empty() { "0".to_string() } else { text.join(" + ") } });
            write_out(cli, &value)?;
            rep.result = Some(value);
            Ok(())
        }
        Command::StructureConstants { model, n } => {
            let m = load(model, rep)?;
            rep.param("n", n);
            let hash = rep.model_hash.clone().unwrap_or_default();
            let value = table_json(cli, &m, &hash, Side::Hilbert, &-rational::one(), *n)?;
            finish_table(cli, rep, value)
        }
        Command::OrbStructureConstants { model, n, s } => {
            let m = load(model, rep)?;
            let s = rational::parse(s)?;
            rep.param("n", n);
            rep.param("s", rational::format(&s));
            let hash = rep.model_hash.clone().unwrap_or_default();
            let value = table_json(cli, &m, &hash, Side::Orbifold, &s, *n)?;
            finish_table(cli, rep, value)
        }
        Command::LehnApply { k, poly } => {
            rep.param("k", k);
            let text = std::fs::read_to_string(poly)?;
            let j: PolynomialJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let p = SparsePolynomial::from_json(&j)?;
            let value = serde_json::to_value(lehn_apply(*k, &p).to_json())?;
            write_out(cli, &value)?;
            rep.result = Some(value);
            Ok(())
        }
        Command::Verify(v) => verify(cli, v, rep),
    }
}

fn finish_table(cli: &Cli, rep: &mut RunReport, value: Value) -> Result<()> {
    if cli.out.is_some() {
        write_out(cli, &value)?;
        let rows = value["rows"].as_array().map_or(0, Vec::len);
        rep.result = Some(json!({ "rows": rows }));
    } else {
        rep.result = Some(value);
    }
    Ok(())
}

#[derive(Deserialize)]
struct TripleJson {
    rho: BTreeMap<String, Vec<u32>>,
    sigma: BTreeMap<String, Vec<u32>>,
    nu: BTreeMap<String, Vec<u32>>,
}

type Triple = (PartitionFunction, PartitionFunction, PartitionFunction);

fn read_triples(model: &SurfaceModel, path: &Path) -> Result<Vec<Triple>> {
    let text = std::fs::read_to_string(path)?;
    let raw: Vec<TripleJson> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("triple file: {e}")))?;
    raw.iter()
        .map(|t| {
            Ok((
                PartitionFunction::from_named(model, &t.rho)?,
                PartitionFunction::from_named(model, &t.sigma)?,
                PartitionFunction::from_named(model, &t.nu)?,
            ))
        })
        .collect()
}

fn keep(rep: TheoremReport, names: &[&str]) -> TheoremReport {
    TheoremReport {
        checks: rep
            .checks
            .into_iter()
            .filter(|(k, _)| names.contains(&k.as_str()))
            .collect(),
    }
}

fn verify(cli: &Cli, v: &VerifyArgs, rep: &mut RunReport) -> Result<()> {
    let m = load(&v.model, rep)?;
    let jobs = cli.jobs;
    let range = |default: (u32, u32)| {
        v.n.unwrap_or(NRange {
            start: default.0,
            end: default.1,
        })
    };
    let s =
        v.s.as_deref()
            .map(rational::parse)
            .transpose()?
            .unwrap_or_else(|| -rational::one());
    let mut total = TheoremReport::default();
    match v.id {
        TheoremId::Heisenberg => {
            let w = range((5, 5)).end;
            let idx = v.max_index.unwrap_or(4);
            rep.param("max_weight", w);
            rep.param("max_index", idx);
            *total.check("heisenberg") = oracle::verify_heisenberg(&m, idx, w);
        }
        TheoremId::LemmaKs => {
            let w = range((5, 5)).end;
            let k = v.k.unwrap_or(5) as usize;
            let samples = v.samples.unwrap_or(200);
            rep.param("max_weight", w);
            rep.param("max_total", k);
            rep.param("samples", samples);
            rep.param("seed", v.seed);
            *total.check("lemma-ks") = oracle::verify_ks(&m, k, w, samples, v.seed)?;
        }
        TheoremId::Nonsense1 => {
            let w = range((4, 4)).end;
            let k = v.k.unwrap_or(2);
            let len = v.len.unwrap_or(3);
            rep.param("max_weight", w);
            rep.param("max_k", k);
            rep.param("max_len", len);
            let samples = v.samples.map(|x| (x, v.seed));
            if let Some((x, seed)) = samples {
                rep.param("samples", x);
                rep.param("seed", seed);
            }
            *total.check("nonsense1") = oracle::verify_nonsense1(&m, k, len, w, samples)?;
        }
        TheoremId::Ideal | TheoremId::IdealGenerators => {
            let r = range((1, 4));
            rep.param("n", r);
            for n in r.start..=r.end {
                let suite = theorems::ideal_suite(&m, n, jobs)?;
                total.merge(if v.id == TheoremId::Ideal {
                    keep(
                        suite,
                        &[
                            "absorption",
                            "absorption-direct",
                            "g-in-ideal",
                            "filtration",
                            "audit",
                        ],
                    )
                } else {
                    keep(suite, &["generation", "generation-direct", "audit"])
                });
            }
        }
        TheoremId::NIndependence | TheoremId::OrbNIndependence => {
            let r = range((2, 4));
            let side = if v.id == TheoremId::OrbNIndependence {
                Side::Orbifold
            } else {
                side_of(v.side.unwrap_or(SideArg::Hilbert))
            };
            rep.param("n", r);
            rep.param("side", format!("{side:?}").to_lowercase());
            if side == Side::Orbifold {
                rep.param("s", rational::format(&s));
            }
            total = theorems::n_independence(&m, side, &s, r.start..=r.end, jobs)?;
        }
        TheoremId::ModH4Independence => {
            let r = range((2, 5));
            rep.param("n", r);
            total = theorems::mod_h4_independence(&m, r.start..=r.end, jobs)?;
        }
        TheoremId::Polynomiality => {
            let r = range((3, 9));
            let bound = v.bound.unwrap_or(4);
            rep.param("n", r);
            rep.param("bound", bound);
            let triples = v
                .triple
                .as_deref()
                .map(|p| read_triples(&m, p))
                .transpose()?;
            if let Some(p) = &v.triple {
                rep.param("triple", p.display());
            }
            let (t, fits) =
                theorems::polynomiality(&m, r.start..=r.end, bound, jobs, triples.as_deref())?;
            total = t;
            let value = serde_json::to_value(&fits)?;
            write_out(cli, &value)?;
            rep.result = Some(json!({ "interpolants": value }));
        }
        TheoremId::FhRing => {
            let n = range((4, 4)).end;
            let norm = v.norm.unwrap_or(5);
            rep.param("max_n", n);
            rep.param("norm", norm);
            total = theorems::fh_ring(&m, n, norm, jobs)?;
        }
        TheoremId::C2Quotient => {
            let n = range((6, 6)).end;
            rep.param("max_n", n);
            total = theorems::c2_quotient(&m, n, jobs)?;
        }
        TheoremId::AHomomorphism => {
            let r = range((1, 3));
            rep.param("n", r);
            for n in r.start..=r.end {
                total.merge(theorems::a_homomorphism(&m, n, jobs)?);
            }
        }
        TheoremId::RingIsom => {
            let r = range((3, 3));
            rep.param("n", r);
            for n in r.start..=r.end {
                total.merge(orbifold::ring_isom(&m, n, jobs)?);
            }
        }
    }
    rep.absorb(&total);
    if v.id != TheoremId::Polynomiality {
        write_out(cli, &serde_json::to_value(&*rep)?)?;
    }
    Ok(())
}
