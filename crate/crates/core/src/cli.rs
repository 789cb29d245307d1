//! Command-line front end. Every command prints one JSON report on stdout;
//! exit status is 0 on success, 1 when a check fails, 2 on usage or data
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::bigexpr::parse_big_uint;
use crate::frobenius::tau_mod_ell;
use crate::galverify::{verify_record, VerifyOptions};
use crate::genus1::{self, EllipticCurveQ};
use crate::lehmer::{self, DetectorTable};
use crate::modcurve;
use crate::modsym;
use crate::records::{self, GaloisPolyRecord};
use crate::report::ReportDocument;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "galrep", version, about = "Mod-ℓ Galois representation polynomials of level-one cusp forms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full verification pipeline on a projective record.
    Verify(VerifyArgs),
    /// τ(p) mod ℓ (up to sign) from the Frobenius pattern of a record.
    TauMod(TauModArgs),
    /// Serre sieve, zero detectors and range search.
    Lehmer {
        #[command(subcommand)]
        command: LehmerCommand,
    },
    /// Build the ℓ = 11 polynomial of Δ from the 11-torsion of X₀(11).
    BuildGenus1(BuildGenus1Args),
    /// Genus, Jacobian dimensions and the modular-symbol eigensystem check.
    Tables {
        #[command(subcommand)]
        command: TablesCommand,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct RecordChoice {
    /// Embedded record id: k12l31, k16l29, k20l31 or k22l31.
    #[arg(long)]
    pub record: Option<String>,
    /// GALREP v1 file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl RecordChoice {
    fn load(&self) -> Result<GaloisPolyRecord, String> {
        match (&self.record, &self.file) {
            (Some(id), _) => records::embedded(id).map_err(|e| e.to_string()),
            (_, Some(path)) => GaloisPolyRecord::read_file(path).map_err(|e| e.to_string()),
            _ => Err("one of --record or --file is required".into()),
        }
    }

    fn describe(&self) -> String {
        match (&self.record, &self.file) {
            (Some(id), _) => id.clone(),
            (_, Some(p)) => p.display().to_string(),
            _ => String::new(),
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: RecordChoice,
    /// Bound for the Frobenius/q-expansion consistency check.
    #[arg(long, default_value_t = 500)]
    pub pmax: u64,
    /// Bound for trial division of the discriminant.
    #[arg(long, default_value_t = 1_000_000)]
    pub trial_bound: u64,
    /// Stop at the first failing check.
    #[arg(long)]
    pub fail_fast: bool,
}

#[derive(Args, Debug)]
pub struct TauModArgs {
    #[command(flatten)]
    pub source: RecordChoice,
    /// Prime, e.g. 7 or 10^1000+4351.
    #[arg(long)]
    pub p: String,
}

#[derive(Args, Debug)]
pub struct DetectorArgs {
    /// Comma-separated list of ℓ.
    #[arg(long, value_delimiter = ',', default_value = "11,31")]
    pub detectors: Vec<u64>,
    /// Extra weight-12 projective records (GALREP files), e.g. for ℓ = 13, 17, 19.
    #[arg(long = "record-file")]
    pub record_files: Vec<PathBuf>,
    /// Also evaluate the secondary detectors and require agreement.
    #[arg(long)]
    pub cross_check: bool,
}

impl DetectorArgs {
    fn table(&self) -> Result<DetectorTable, String> {
        let mut t = DetectorTable::builtin().map_err(|e| e.to_string())?;
        for f in &self.record_files {
            t.load_file(f).map_err(|e| e.to_string())?;
        }
        t.cross_check = self.cross_check;
        Ok(t)
    }
}

#[derive(Subcommand, Debug)]
pub enum LehmerCommand {
    /// Check one prime against the congruences and detectors.
    VerifyCandidate {
        #[arg(long)]
        p: String,
        #[command(flatten)]
        detectors: DetectorArgs,
    },
    /// Least prime in [from, to) passing all checks.
    Search {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[command(flatten)]
        detectors: DetectorArgs,
        /// Resumable per-class cursor file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Worker threads (default: logical cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Also state the non-vanishing bound (needs ℓ = 11, 13, 17, 19, 31 and from ≤ 2).
        #[arg(long)]
        bound: bool,
    },
}

#[derive(Args, Debug)]
pub struct BuildGenus1Args {
    /// Working precision in bits (doubled up to twice on recognition failure).
    #[arg(long, default_value_t = genus1::DEFAULT_BITS, value_parser = clap::value_parser!(u32).range(128..))]
    pub bits: u32,
    /// Where to write the GALREP record.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Build the degree-120 polynomial instead of the degree-12 one.
    #[arg(long)]
    pub full: bool,
}

#[derive(Subcommand, Debug)]
pub enum TablesCommand {
    /// Genus of X₁(ℓ).
    Genus {
        #[arg(long)]
        ell: u64,
    },
    /// gcd(k−2, ℓ−1), dim J₁(ℓ), dim J_{Γ_H} for the four records.
    Dims,
    /// Joint kernel of T_p − a_p(Δ_k) on mod-ℓ modular symbols.
    ModsymCheck {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 20)]
        pmax: u64,
    },
}

enum Failure {
    Usage(String),
}

type Outcome = Result<ReportDocument, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_prime(s: &str) -> Result<BigUint, Failure> {
    parse_big_uint(s).map_err(usage)
}

fn parse_u128(s: &str) -> Result<u128, Failure> {
    parse_prime(s)?
        .to_u128()
        .ok_or_else(|| usage(format!("{s} does not fit in 128 bits")))
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let mut rep = ReportDocument::new("verify");
    rep.input("record", a.source.describe()).input("pmax", a.pmax).input("trial_bound", a.trial_bound);
    let record = a.source.load().map_err(usage)?;
    let opts = VerifyOptions {
        consistency_pmax: a.pmax,
        trial_bound: a.trial_bound,
        fail_fast: a.fail_fast,
        ..VerifyOptions::default()
    };
    let out = rep.timed("verify", || verify_record(&record, &opts)).map_err(usage)?;
    rep.pass = out.pass;
    rep.set_results(out);
    Ok(rep)
}

fn cmd_tau_mod(a: &TauModArgs) -> Outcome {
    let mut rep = ReportDocument::new("tau-mod");
    rep.input("record", a.source.describe()).input("p", &a.p);
    let record = a.source.load().map_err(usage)?;
    let p = parse_prime(&a.p)?;
    let out = rep.timed("tau_mod", || tau_mod_ell(&record, &p)).map_err(usage)?;
    rep.set_results(out);
    Ok(rep)
}

fn cmd_lehmer(c: &LehmerCommand) -> Outcome {
    match c {
        LehmerCommand::VerifyCandidate { p, detectors } => {
            let mut rep = ReportDocument::new("lehmer verify-candidate");
            rep.input("p", p).input("detectors", &detectors.detectors);
            let pv = parse_prime(p)?;
            let table = detectors.table().map_err(usage)?;
            let cand = rep
                .timed("verify", || lehmer::verify_candidate(&pv, &detectors.detectors, &table))
                .map_err(usage)?;
            rep.pass = cand.accepted;
            rep.set_results(cand);
            Ok(rep)
        }
        LehmerCommand::Search {
            from,
            to,
            detectors,
            checkpoint,
            threads,
            bound,
        } => {
            let mut rep = ReportDocument::new("lehmer search");
            rep.input("from", from).input("to", to).input("detectors", &detectors.detectors);
            let (lo, hi) = (parse_u128(from)?, parse_u128(to)?);
            let table = detectors.table().map_err(usage)?;
            let mut pool = rayon::ThreadPoolBuilder::new();
            if let Some(n) = threads {
                pool = pool.num_threads(*n);
            }
            let pool = pool.build().map_err(usage)?;
            let res = rep
                .timed("search", || {
                    pool.install(|| lehmer::search_with_checkpoint(lo, hi, &detectors.detectors, &table, checkpoint.as_deref()))
                })
                .map_err(usage)?;
            let mut out = json!({
                "found": res.found.map(|p| p.to_string()),
                "range": [res.lo.to_string(), res.hi.to_string()],
                "ells": res.ells,
                "primes_examined": res.primes_examined,
            });
            if *bound {
                let b = lehmer::nonvanishing_bound(&res).map_err(usage)?;
                out["bound"] = serde_json::to_value(b).unwrap();
            }
            rep.set_results(out);
            Ok(rep)
        }
    }
}

fn cmd_build_genus1(a: &BuildGenus1Args) -> Outcome {
    let mut rep = ReportDocument::new("build-genus1");
    rep.input("bits", a.bits).input("full", a.full);
    let e = EllipticCurveQ::x0_11();
    let (record, results) = if a.full {
        let ((record, check), used) = rep
            .timed("build", || genus1::with_retries(a.bits, |b| genus1::build_full_poly(&e, 11, b)))
            .map_err(usage)?;
        let r = json!({ "bits_used": used, "check": check, "record": record.id(), "kind": "full", "degree": record.degree() });
        (record, r)
    } else {
        let (b, used) = rep
            .timed("build", || genus1::with_retries(a.bits, |b| genus1::build_projective_poly(&e, 11, b)))
            .map_err(usage)?;
        let coeffs: Vec<String> = b.record.poly.coeffs().iter().map(|c| c.to_string()).collect();
        let r = json!({
            "bits_used": used,
            "record": b.record.id(),
            "kind": "projective",
            "degree": b.record.degree(),
            "coefficients": coeffs,
            "charpol_consistency": b.consistency,
        });
        (b.record, r)
    };
    if let Some(path) = &a.out {
        record.write_file(path).map_err(usage)?;
    }
    rep.set_results(results);
    Ok(rep)
}

fn cmd_tables(c: &TablesCommand) -> Outcome {
    match c {
        TablesCommand::Genus { ell } => {
            let mut rep = ReportDocument::new("tables genus");
            rep.input("ell", ell);
            let g = modcurve::genus_x1(*ell).map_err(usage)?;
            rep.set_results(json!({ "genus_x1": g }));
            Ok(rep)
        }
        TablesCommand::Dims => {
            let mut rep = ReportDocument::new("tables dims");
            let mut rows = Vec::new();
            for (k, ell) in [(12u64, 31u64), (16, 29), (20, 31), (22, 31)] {
                let spec = modcurve::gamma_h(k, ell).map_err(usage)?;
                rows.push(json!({
                    "k": k,
                    "ell": ell,
                    "gcd": spec.gcd,
                    "dim_j1": modcurve::genus_x1(ell).map_err(usage)?,
                    "dim_j_gamma_h": modcurve::dim_j_gamma_h(k, ell).map_err(usage)?,
                }));
            }
            rep.set_results(rows);
            Ok(rep)
        }
        TablesCommand::ModsymCheck { k, ell, pmax } => {
            let mut rep = ReportDocument::new("tables modsym-check");
            rep.input("k", k).input("ell", ell).input("pmax", pmax);
            let out = rep
                .timed("eigensystem", || modsym::eigensystem_check(*k, *ell, *pmax))
                .map_err(usage)?;
            rep.pass = out.pass;
            rep.set_results(out);
            Ok(rep)
        }
    }
}

/// Parses `args`, runs the command, writes the report to `out` and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::TauMod(a) => cmd_tau_mod(a),
        Command::Lehmer { command } => cmd_lehmer(command),
        Command::BuildGenus1(a) => cmd_build_genus1(a),
        Command::Tables { command } => cmd_tables(command),
    };
    match outcome {
        Ok(rep) => {
            let _ = writeln!(out, "{}", rep.to_json());
            if rep.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}
