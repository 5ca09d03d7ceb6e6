mod describe;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use k3lat::exact::Signature;
use k3lat::fibration::{analyze_fibration, FibrationError};
use k3lat::lattice::expr::{parse_lattice, ParseError};
use k3lat::lattice::{LatticeClass, LatticeError, TwoElemInvariants};
use k3lat::roots::{enumerate_norm_vectors, RootError};
use k3lat::scenarios::{verify_cases, CaseId, VerifySummary};
use k3lat::fibration::admissible_triples;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(name = "k3lat", version, about = "Exact lattice tools for 2-elementary K3 Picard lattices")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice queries.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Enumerate vectors of a given square (up to sign).
    Roots {
        /// Lattice expression, e.g. `E8(2)` or `U' + D4`.
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        norm: String,
    },
    /// Elliptic fibration analysis.
    Fibration {
        #[command(subcommand)]
        command: FibrationCommand,
    },
    /// Check the worked cases.
    Verify {
        /// Case name, or `all`.
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// List admissible (r, a, delta).
    Triples,
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// Rank, signature, parity, determinant and discriminant invariants.
    Info { expr: String },
}

#[derive(Subcommand)]
enum FibrationCommand {
    /// Analyze the pencil described in a file.
    Analyze {
        #[arg(long)]
        file: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: EXIT_USAGE, message: message.to_string() }
    }

    fn domain(message: impl ToString) -> Self {
        Failure { code: EXIT_DOMAIN, message: message.to_string() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::usage(e)
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::UnknownLabel(_) | LatticeError::LatticeMismatch { .. } => Failure::usage(e),
            _ => Failure::domain(e),
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        match e {
            RootError::InvalidNorm(_) => Failure::usage(e),
            RootError::Lattice(l) => l.into(),
            _ => Failure::domain(e),
        }
    }
}

impl From<FibrationError> for Failure {
    fn from(e: FibrationError) -> Self {
        match e {
            FibrationError::Lattice(l) => l.into(),
            FibrationError::Roots(r) => r.into(),
            _ => Failure::domain(e),
        }
    }
}

/// Output text and exit code of a successful dispatch.
struct Output {
    text: String,
    code: u8,
}

pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return f.code;
    }
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("K3LAT_THREADS") else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| Failure::usage(format!("K3LAT_THREADS must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Failure::usage)?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Lattice { command: LatticeCommand::Info { expr } } => lattice_info(expr, cli.json),
        Command::Roots { expr, norm } => roots(expr, norm, cli.json),
        Command::Fibration { command: FibrationCommand::Analyze { file } } => fibration_analyze(file, cli.json),
        Command::Verify { case } => verify(case, cli.json),
        Command::Triples => Ok(triples(cli.json)),
    }
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ok(text: String) -> Result<Output, Failure> {
    Ok(Output { text, code: EXIT_OK })
}

/// Integers fitting in an i64 become JSON numbers, larger ones strings.
fn int_value(n: &BigInt) -> Value {
    i64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::from(n.to_string()))
}

fn class_value(c: &LatticeClass) -> Value {
    Value::Array(c.coords().iter().map(int_value).collect())
}

#[derive(Serialize)]
struct LatticeInfo {
    rank: usize,
    signature: Signature,
    even: bool,
    determinant: Value,
    invariant_factors: Vec<Value>,
    two_elementary: Option<TwoElemInvariants>,
}

fn lattice_info(expr: &str, as_json: bool) -> Result<Output, Failure> {
    let lattice = parse_lattice(expr)?;
    let group = lattice.discriminant_group()?;
    let two_elementary = match lattice.two_elementary_invariants() {
        Ok(_) if !lattice.is_even() => None,
        Ok(inv) => Some(inv),
        Err(LatticeError::NotTwoElementary(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let info = LatticeInfo {
        rank: lattice.rank(),
        signature: lattice.signature(),
        even: lattice.is_even(),
        determinant: int_value(&lattice.determinant()),
        invariant_factors: group.invariant_factors.iter().map(int_value).collect(),
        two_elementary,
    };
    if as_json {
        return ok(json(&info));
    }
    let mut s = String::new();
    writeln!(s, "rank         {}", info.rank).unwrap();
    writeln!(s, "signature    {}", info.signature).unwrap();
    writeln!(s, "even         {}", info.even).unwrap();
    writeln!(s, "determinant  {}", lattice.determinant()).unwrap();
    let factors: Vec<String> = group.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
    writeln!(s, "discriminant {}", if factors.is_empty() { "trivial".into() } else { factors.join(" + ") }).unwrap();
    match info.two_elementary {
        Some(inv) => writeln!(s, "2-elementary r={}, a={}, delta={}", inv.r, inv.a, inv.delta).unwrap(),
        None if !info.even => writeln!(s, "2-elementary undefined for an odd lattice").unwrap(),
        None => writeln!(s, "2-elementary no").unwrap(),
    }
    ok(s)
}

#[derive(Serialize)]
struct RootsOutput {
    norm: Value,
    count: usize,
    vectors: Vec<Value>,
}

fn roots(expr: &str, norm: &str, as_json: bool) -> Result<Output, Failure> {
    let norm: BigInt = norm.trim().parse().map_err(|_| Failure::usage(format!("--norm must be an integer, got `{norm}`")))?;
    let lattice = parse_lattice(expr)?;
    let list = enumerate_norm_vectors(&lattice, &norm)?;
    if as_json {
        let out = RootsOutput {
            norm: int_value(&norm),
            count: list.len(),
            vectors: list.vectors.iter().map(class_value).collect(),
        };
        return ok(json(&out));
    }
    let mut s = format!("{} vectors of square {norm} (up to sign)\n", list.len());
    for v in &list.vectors {
        writeln!(s, "{v}  {}", v.format_with(lattice.labels())).unwrap();
    }
    ok(s)
}

#[derive(Serialize)]
struct FiberOutput {
    kind: String,
    components: Vec<String>,
    marks: Option<Vec<Value>>,
}

#[derive(Serialize)]
struct AnalyzeOutput {
    fiber_class: Value,
    fibers: Vec<FiberOutput>,
    sections: Vec<String>,
    shioda_tate_rank: i64,
    mw_rank: usize,
    mw_radical_rank: usize,
    mw_signature: Signature,
    mw_rootless: bool,
}

fn fibration_analyze(path: &PathBuf, as_json: bool) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let desc = describe::parse(&text).map_err(Failure::usage)?;
    let lookup = |name: &String| desc.class(name).cloned().ok_or_else(|| Failure::usage(format!("unknown class `{name}`")));
    let fiber = lookup(&desc.fiber)?;
    let components = desc.components.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
    let candidates = desc.sections.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
    let report = analyze_fibration(&desc.lattice, &fiber, &components, &candidates)?;

    let sections: Vec<String> = desc
        .sections
        .iter()
        .zip(&candidates)
        .filter(|(_, c)| report.sections.contains(c))
        .map(|(n, _)| n.clone())
        .collect();
    let out = AnalyzeOutput {
        fiber_class: class_value(&report.fiber_class),
        fibers: report
            .fibers
            .iter()
            .map(|f| FiberOutput {
                kind: f.kind.to_string(),
                components: f.members.iter().map(|&m| desc.components[m].clone()).collect(),
                marks: f.marks.as_ref().map(|ms| ms.iter().map(int_value).collect()),
            })
            .collect(),
        sections,
        shioda_tate_rank: report.shioda_tate_rank,
        mw_rank: report.mw_rank,
        mw_radical_rank: report.mw_radical_rank,
        mw_signature: report.mw_signature,
        mw_rootless: report.mw_rootless,
    };
    if as_json {
        return ok(json(&out));
    }
    let mut s = String::new();
    writeln!(s, "fibre class  {}", report.fiber_class.format_with(desc.lattice.labels())).unwrap();
    if out.fibers.is_empty() {
        writeln!(s, "fibres       none reducible").unwrap();
    }
    for f in &out.fibers {
        let parts: Vec<String> = match &f.marks {
            Some(ms) => f.components.iter().zip(ms).map(|(c, m)| format!("{m}{c}")).collect(),
            None => f.components.clone(),
        };
        writeln!(s, "fibre        {}: {}", f.kind, parts.join(" + ")).unwrap();
    }
    let sections = if out.sections.is_empty() { "none".to_string() } else { out.sections.join(", ") };
    writeln!(s, "sections     {sections}").unwrap();
    writeln!(s, "Shioda-Tate  {}", out.shioda_tate_rank).unwrap();
    writeln!(s, "MW rank      {} (radical {})", out.mw_rank, out.mw_radical_rank).unwrap();
    writeln!(s, "MW signature {}", out.mw_signature).unwrap();
    writeln!(s, "MW rootless  {}", out.mw_rootless).unwrap();
    ok(s)
}

fn verify(filter: &str, as_json: bool) -> Result<Output, Failure> {
    let ids = if filter == "all" {
        CaseId::all()
    } else {
        vec![filter.parse::<CaseId>().map_err(Failure::usage)?]
    };
    let summary = VerifySummary::new(verify_cases(&ids));
    let code = if summary.pass { EXIT_OK } else { EXIT_FAILED };
    if as_json {
        return Ok(Output { text: json(&summary), code });
    }
    let mut s = String::new();
    for report in &summary.cases {
        let passed = report.checks.iter().filter(|c| c.pass).count();
        let verdict = if report.pass { "PASS" } else { "FAIL" };
        writeln!(s, "{verdict} {} ({passed}/{} checks)", report.case, report.checks.len()).unwrap();
        for c in &report.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            write!(s, "  {mark} {}: {}", c.name, c.actual).unwrap();
            if !c.pass {
                write!(s, " (expected {})", c.expected).unwrap();
            }
            s.push('\n');
        }
    }
    writeln!(s, "{}/{} cases pass", summary.passed, summary.total).unwrap();
    Ok(Output { text: s, code })
}

#[derive(Serialize)]
struct TriplesOutput {
    count: usize,
    triples: Vec<TwoElemInvariants>,
}

fn triples(as_json: bool) -> Output {
    let list = admissible_triples();
    let text = if as_json {
        json(&TriplesOutput { count: list.len(), triples: list })
    } else {
        let mut s = String::from("r a delta\n");
        for t in &list {
            writeln!(s, "{} {} {}", t.r, t.a, t.delta).unwrap();
        }
        writeln!(s, "{} admissible triples", list.len()).unwrap();
        s
    };
    Output { text, code: EXIT_OK }
}
