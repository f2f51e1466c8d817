use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hilbfock",
    version,
    about = "Exact cohomology rings of Hilbert schemes of points on surfaces"
)]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Worker threads for table computations.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Also write the main payload (table, fits or report) to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a model file against the Frobenius-algebra invariants.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// Expand `b_ρ(n) · b_σ(n)` in the basis.
    Product {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u32,
        /// Partition function as JSON, e.g. `{"h":[1]}`; `{}` is the unit.
        #[arg(long)]
        rho: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, value_enum, default_value_t = SideArg::Hilbert)]
        side: SideArg,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        s: String,
    },
    /// Full structure-constant table of the Hilbert-side ring.
    StructureConstants {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u32,
    },
    /// Full structure-constant table of the orbifold ring at bracket value `s`.
    OrbStructureConstants {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        s: String,
    },
    /// Apply Lehn's operator `g_k` to a polynomial in `q_1, q_2, …`.
    LehnApply {
        #[arg(long)]
        k: u32,
        /// JSON file `{"terms":[{"coeff":"p/q","monomial":{"2":1}}]}`.
        #[arg(long)]
        poly: PathBuf,
    },
    /// Check a theorem on finite instances.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub id: TheoremId,
    #[arg(long)]
    pub model: PathBuf,
    /// `a..b` (inclusive) or a single value; the meaning depends on the check.
    #[arg(long)]
    pub n: Option<NRange>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// JSON list of `{"rho":…, "sigma":…, "nu":…}` restricting polynomiality.
    #[arg(long)]
    pub triple: Option<PathBuf>,
    /// Degree bound for polynomiality.
    #[arg(long)]
    pub bound: Option<i64>,
    /// Largest `|m|` for Heisenberg indices.
    #[arg(long)]
    pub max_index: Option<i64>,
    /// Largest `k` (commutator lemma: total word length).
    #[arg(long)]
    pub k: Option<u32>,
    /// Longest creation word for the σ-expansion check.
    #[arg(long)]
    pub len: Option<usize>,
    /// Norm bound for FH monomial independence.
    #[arg(long)]
    pub norm: Option<u32>,
    /// Random samples per shape (commutator lemma, σ-expansion).
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    Hilbert,
    Orbifold,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    Heisenberg,
    LemmaKs,
    Nonsense1,
    Ideal,
    IdealGenerators,
    NIndependence,
    ModH4Independence,
    Polynomiality,
    FhRing,
    C2Quotient,
    AHomomorphism,
    RingIsom,
    OrbNIndependence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u32,
    pub end: u32,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("invalid n {x:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if start > end {
            return Err(format!("empty range {s}"));
        }
        Ok(NRange { start, end })
    }
}

impl std::fmt::Display for NRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(
            "2..6".parse::<NRange>().unwrap(),
            NRange { start: 2, end: 6 }
        );
        assert_eq!(
            "2..=6".parse::<NRange>().unwrap(),
            NRange { start: 2, end: 6 }
        );
        assert_eq!("4".parse::<NRange>().unwrap(), NRange { start: 4, end: 4 });
        assert!("6..2".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }
}
