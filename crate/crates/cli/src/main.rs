//! `symjoin` command-line front end.
//!
//! Exit codes: 0 when every report passes (or fails only as a documented
//! known failure), 1 on a verification failure, 2 on usage or input errors.

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use symjoin::chains::{chains_of, ChainComplex, Label};
use symjoin::coactions::{steenrod_report, Cochains};
use symjoin::operads::{certify_einfinity, complex, Operad};
use symjoin::presheaves::{fixtures, from_facets_named, ComplexSet, PresheafRef};
use symjoin::report::IdentityReport;
use symjoin::verify::{self, Suite, SuiteBounds};
use symjoin::{Fp, Ring};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest total basis size `certify` accepts (all degrees of the window).
const MAX_CERTIFY_BASIS: u128 = 500_000;

#[derive(Parser)]
#[command(name = "symjoin", version, about = "Exact verification of the symmetric join operad and its cochain operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run bounded exhaustive verification suites.
    Verify(VerifyArgs),
    /// Certify that 𝔧(n) is acyclic with H₀ = ℤ on a degree window.
    Certify(CertifyArgs),
    /// Steenrod squares of a simplicial complex, mod 2.
    Steenrod(SteenrodArgs),
    /// Export a chain complex as sparse-triplet JSON.
    Export(ExportArgs),
}

#[derive(Args, Serialize)]
struct Common {
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    /// Seed for every sampled check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 2)]
    arity: usize,
    #[arg(long, default_value_t = 3)]
    deg: usize,
    /// Largest source/target size for the morphism calculus.
    #[arg(long, default_value_t = 5)]
    max_size: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct CertifyArgs {
    #[arg(long)]
    arity: usize,
    /// Certify degrees `0..window` (the complex is built through `window`).
    #[arg(long)]
    window: i64,
    #[arg(long, default_value = "Z")]
    ring: String,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Serialize)]
struct SteenrodArgs {
    /// A JSON file `{"vertices": [...], "facets": [[...], ...]}` or `fixture:NAME`.
    #[arg(long)]
    input: String,
    /// Top cohomological degree (default: the dimension of the complex).
    #[arg(long)]
    deg: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ExportTarget {
    /// The chain complex 𝔧(n) on degrees `0..=window`.
    Operad,
    /// Simplicial chains of a complex on degrees `0..=deg`.
    Chains,
}

#[derive(Args, Serialize)]
struct ExportArgs {
    target: ExportTarget,
    #[arg(long, default_value_t = 2)]
    arity: usize,
    #[arg(long, default_value_t = 3)]
    window: i64,
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value_t = 2)]
    deg: i64,
    #[arg(long, default_value = "Z")]
    ring: String,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        2
    }
}

/// Coefficient selector: `Z`, `F2`, or `Fp(p)` / `Fp` for a supported prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RingChoice {
    Z,
    Fp(u64),
}

/// Primes with a compiled field type.
const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

impl FromStr for RingChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("z") {
            return Ok(RingChoice::Z);
        }
        let digits = t
            .strip_prefix("Fp(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('F').or_else(|| t.strip_prefix('f')));
        let p = digits.and_then(|d| d.parse::<u64>().ok());
        match p {
            Some(p) if PRIMES.contains(&p) => Ok(RingChoice::Fp(p)),
            Some(p) => Err(CliError::Usage(format!("unsupported prime {p}; choose one of {PRIMES:?}"))),
            None => Err(CliError::Usage(format!("unknown ring {s:?}; expected Z, F2 or Fp(p)"))),
        }
    }
}

#[derive(Deserialize)]
struct ComplexInput {
    vertices: Vec<i64>,
    facets: Vec<Vec<i64>>,
}

/// Built-in complexes for `fixture:NAME`.
fn builtin(name: &str) -> Option<Arc<ComplexSet>> {
    Some(match name {
        "simplex1" => fixtures::simplex(1),
        "simplex2" => fixtures::simplex(2),
        "simplex3" => fixtures::simplex(3),
        "boundary3" => fixtures::boundary_simplex(3),
        "circle" => fixtures::circle(),
        "rp2" => fixtures::rp2(),
        _ => return None,
    })
}

fn load_space(input: &str) -> Result<(String, Arc<ComplexSet>), CliError> {
    if let Some(name) = input.strip_prefix("fixture:") {
        let y = builtin(name).ok_or_else(|| {
            CliError::Input(format!("unknown fixture {name:?}; known: simplex1-3, boundary3, circle, rp2"))
        })?;
        return Ok((name.to_string(), y));
    }
    let text = fs::read_to_string(input).map_err(|e| CliError::Input(format!("{input}: {e}")))?;
    let c: ComplexInput = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{input}: {e}")))?;
    let name = PathBuf::from(input).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let y = from_facets_named(&name, &c.vertices, &c.facets).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((name, y))
}

fn envelope(command: &str, config: &impl Serialize, body: Value) -> Value {
    json!({
        "tool": "symjoin",
        "version": VERSION,
        "command": command,
        "config": config,
        "result": body,
    })
}

fn emit(common: &Common, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match &common.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn status(reports: &[IdentityReport]) -> u8 {
    if reports.iter().all(IdentityReport::acceptable) {
        0
    } else {
        1
    }
}

fn summarize(reports: &[IdentityReport]) {
    for r in reports {
        eprintln!("{r}");
    }
}

fn parse_suites(s: &str) -> Result<Vec<Suite>, CliError> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    s.split(',').map(|x| Suite::from_str(x.trim()).map_err(|e| CliError::Usage(e.to_string()))).collect()
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let suites = parse_suites(&a.suite)?;
    if a.arity == 0 || a.max_size == 0 {
        return Err(CliError::Usage("--arity and --max-size must be positive".into()));
    }
    let bounds = SuiteBounds { max_size: a.max_size, arity: a.arity, degree: a.deg as i64, seed: a.common.seed };
    let mut all = Vec::new();
    let mut sections = Vec::new();
    for s in suites {
        let reports = verify::run(s, &bounds);
        summarize(&reports);
        sections.push(json!({"suite": s, "passed": reports.iter().all(IdentityReport::passed), "reports": reports}));
        all.extend(reports);
    }
    let code = status(&all);
    let body = json!({"status": if code == 0 { "PASS" } else { "FAIL" }, "suites": sections});
    emit(&a.common, &envelope("verify", a, body))?;
    Ok(code)
}

/// `rank 𝔧(n)_d = C(d+n−1, n−1)·(d+n)!`.
fn j_rank(n: usize, d: i64) -> u128 {
    let m = d as u128 + n as u128;
    let binom = (1..n as u128).fold(1u128, |acc, i| acc * (d as u128 + i) / i);
    binom.saturating_mul((1..=m).product())
}

fn cmd_certify(a: &CertifyArgs) -> Result<u8, CliError> {
    if RingChoice::from_str(&a.ring)? != RingChoice::Z {
        return Err(CliError::Usage("certify works over Z".into()));
    }
    if a.arity == 0 || a.window <= 0 {
        return Err(CliError::Usage("--arity and --window must be positive".into()));
    }
    let total: u128 = (0..=a.window).map(|d| j_rank(a.arity, d)).fold(0, u128::saturating_add);
    if total > MAX_CERTIFY_BASIS {
        // one column per basis element, about (d+n) entries of 24 bytes each
        let bytes = total.saturating_mul((a.window as u128 + a.arity as u128) * 24);
        return Err(CliError::Usage(format!(
            "window overflow: 𝔧({}) through degree {} has {total} basis elements (limit {MAX_CERTIFY_BASIS}), needing about {} MiB",
            a.arity,
            a.window,
            bytes >> 20
        )));
    }
    let c = certify_einfinity(a.arity, a.window).map_err(|e| CliError::Input(e.to_string()))?;
    summarize(&c.reports);
    let code = status(&c.reports);
    let free = c.reports.iter().any(|r| r.identity.contains("freely") && r.passed());
    let body = json!({
        "arity": c.arity,
        "window": c.window,
        "homology": c.homology.iter().enumerate().map(|(d, h)| json!({"degree": d, "group": h})).collect::<Vec<_>>(),
        "sigma-free": free,
        "passed": c.passed(),
        "reports": c.reports,
    });
    emit(&a.common, &envelope("certify", a, body))?;
    Ok(code)
}

/// Fixed number of coboundary perturbations per class.
const PERTURBATIONS: usize = 10;

fn cmd_steenrod(a: &SteenrodArgs) -> Result<u8, CliError> {
    let (name, space) = load_space(&a.input)?;
    let top = a.deg.unwrap_or_else(|| space.dimension());
    let cochains = Cochains::new(space as PresheafRef, top).map_err(|e| CliError::Input(e.to_string()))?;
    let (table, report) = steenrod_report(&cochains, &name, PERTURBATIONS, a.common.seed);
    let dims: Vec<usize> = (0..=top).map(|d| cochains.cohomology_basis(d).len()).collect();
    summarize(std::slice::from_ref(&report));
    let code = status(std::slice::from_ref(&report));
    let body = json!({"cohomology-dimensions": dims, "table": table, "report": report});
    emit(&a.common, &envelope("steenrod", a, body))?;
    Ok(code)
}

fn export_json<K: Label, R: Ring>(c: Result<ChainComplex<K, R>, String>) -> Result<Value, CliError> {
    c.and_then(|c| c.to_json().map_err(|e| e.to_string())).map_err(CliError::Input)
}

fn export_with<R: Ring>(a: &ExportArgs) -> Result<Value, CliError> {
    match a.target {
        ExportTarget::Operad => {
            if a.arity == 0 || a.window < 0 {
                return Err(CliError::Usage("--arity must be positive and --window non-negative".into()));
            }
            export_json(complex::<R>(Operad::J, a.arity, a.window).map_err(|e| e.to_string()))
        }
        ExportTarget::Chains => {
            let input = a.input.as_deref().ok_or_else(|| CliError::Usage("export chains needs --input".into()))?;
            if a.deg < 0 {
                return Err(CliError::Usage("--deg must be non-negative".into()));
            }
            let (_, space) = load_space(input)?;
            export_json(chains_of::<R>(space as PresheafRef, a.deg).map_err(|e| e.to_string()))
        }
    }
}

fn cmd_export(a: &ExportArgs) -> Result<u8, CliError> {
    let body = match RingChoice::from_str(&a.ring)? {
        RingChoice::Z => export_with::<i64>(a)?,
        RingChoice::Fp(2) => export_with::<Fp<2>>(a)?,
        RingChoice::Fp(3) => export_with::<Fp<3>>(a)?,
        RingChoice::Fp(5) => export_with::<Fp<5>>(a)?,
        RingChoice::Fp(7) => export_with::<Fp<7>>(a)?,
        RingChoice::Fp(11) => export_with::<Fp<11>>(a)?,
        RingChoice::Fp(13) => export_with::<Fp<13>>(a)?,
        RingChoice::Fp(p) => unreachable!("prime {p} is rejected while parsing"),
    };
    emit(&a.common, &envelope("export", a, body))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Steenrod(a) => cmd_steenrod(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_selector() {
        assert_eq!("Z".parse::<RingChoice>().unwrap(), RingChoice::Z);
        assert_eq!("F2".parse::<RingChoice>().unwrap(), RingChoice::Fp(2));
        assert_eq!("Fp(7)".parse::<RingChoice>().unwrap(), RingChoice::Fp(7));
        assert!("Fp(4)".parse::<RingChoice>().is_err());
        assert!("Q".parse::<RingChoice>().is_err());
    }

    #[test]
    fn j_ranks_match_enumeration() {
        for n in 1..=3 {
            for d in 0..=3 {
                assert_eq!(j_rank(n, d), symjoin::operads::basis(Operad::J, n, d).len() as u128, "n={n} d={d}");
            }
        }
    }
}
