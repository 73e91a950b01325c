//! `polytriple`: classify triples, sieve representations, query local
//! symbols and exceptional square classes. Results go to stdout as a JSON
//! envelope; diagnostics go to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polytriple::classifier::{
    classify, classify_consecutive, classify_power_family, fermat_mersenne_guarantee, ClassificationResult,
    SpecialFamily,
};
use polytriple::exceptional::{exceptional_membership, ExceptionalSet};
use polytriple::localfield::oracle::IsotropyOracle;
use polytriple::localfield::{
    anisotropic_primes, hasse_symbol, hilbert_symbol, is_isotropic_ternary, PadicDiagForm, Place, Prime,
};
use polytriple::search::{gap_report, SieveOptions, DEFAULT_MEMORY_CAP};
use polytriple::{Error, TripleInvariants};

const SCHEMA_VERSION: &str = "1.0";

const EXIT_USAGE: u8 = 2;
const EXIT_TENSION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "polytriple", version, about = "Sums of three generalized polygonal numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a triple or one of the parametrized families.
    Classify(ClassifyArgs),
    /// Sieve represented integers up to a bound and annotate the gaps.
    Search(SearchArgs),
    /// Hilbert and Hasse symbols, isotropy and anisotropic primes.
    Symbols {
        #[command(subcommand)]
        kind: SymbolsCommand,
    },
    /// Membership of n in the exceptional square classes.
    Exceptional(ExceptionalArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "subject")]
struct Subject {
    /// Orders a,b,c.
    #[arg(long)]
    triple: Option<Triple>,
    /// Classify (m, m+1, m+2).
    #[arg(long)]
    consecutive: Option<i64>,
    /// k,l,m,alpha,beta,gamma for orders 2^k alpha + 2, 2^l beta + 2, 2^m gamma + 2.
    #[arg(long)]
    power_family: Option<IntList<6>>,
    /// Indices k,l,m of Fermat numbers.
    #[arg(long)]
    fermat: Option<Triple>,
    /// Odd primes p,q,r of Mersenne numbers.
    #[arg(long)]
    mersenne: Option<Triple>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    subject: Subject,
    /// JSON envelope (the default).
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// One CSV row with a header.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    triple: Triple,
    #[arg(long)]
    bound: u64,
    /// Gaps below this are never flagged as tension.
    #[arg(long, default_value_t = 1000)]
    window: u64,
    /// Write the gaps as CSV.
    #[arg(long)]
    gaps_out: Option<PathBuf>,
    /// Exit with status 3 when a gap is flagged as tension.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    workers: Option<usize>,
    /// Byte cap on the sieve's bit sets.
    #[arg(long)]
    memory_cap: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum SymbolsCommand {
    /// (x, y)_v for rationals x, y and a place (a prime or `inf`).
    Hilbert {
        #[arg(long)]
        verify: bool,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        place: String,
    },
    /// Hasse symbol of a diagonal ternary form.
    Hasse {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        verify: bool,
    },
    /// Whether a diagonal ternary form is isotropic at p.
    Isotropic {
        #[arg(long)]
        form: Form,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        verify: bool,
    },
    /// Primes where <a-2, b-2, c-2> is anisotropic.
    AnisoPrimes {
        #[arg(long)]
        triple: Triple,
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Args, Debug)]
struct ExceptionalArgs {
    #[arg(long)]
    triple: Triple,
    #[arg(long, conflicts_with = "range", required_unless_present = "range")]
    n: Option<u64>,
    /// Inclusive range a:b.
    #[arg(long)]
    range: Option<Range>,
    /// Restrict to a single squarefree divisor of the level.
    #[arg(long)]
    t: Option<u64>,
}

/// `N` comma-separated integers.
#[derive(Debug, Clone, Copy)]
struct IntList<const N: usize>([i64; N]);

impl<const N: usize> Serialize for IntList<N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

type Triple = IntList<3>;

impl<const N: usize> FromStr for IntList<N> {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        <[i64; N]>::try_from(parts)
            .map(IntList)
            .map_err(|_| format!("expected {N} comma-separated integers"))
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Form([i128; 3]);

impl FromStr for Form {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<i128> = s
            .split(',')
            .map(|p| p.trim().parse::<i128>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<Result<_, _>>()?;
        <[i128; 3]>::try_from(parts)
            .map(Form)
            .map_err(|_| "expected three comma-separated integers".to_string())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct Range {
    start: u64,
    end: u64,
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected a:b")?;
        let start = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
        let end = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
        if start > end {
            return Err("range start exceeds end".into());
        }
        Ok(Range { start, end })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    memory_cap: Option<u64>,
    workers: Option<usize>,
}

fn load_config() -> Result<Config, String> {
    let Some(path) = std::env::var_os("POLYTRIPLE_CONFIG") else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", PathBuf::from(&path).display()))?;
    toml::from_str(&text).map_err(|e| format!("config: {e}"))
}

/// Everything a command writes to stdout.
#[derive(Debug, Serialize, Deserialize)]
struct Envelope {
    schema_version: String,
    command: String,
    inputs: Value,
    result: Value,
    provenance: Value,
}

enum Failure {
    Usage(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => Failure::Resource(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serialization: {e}"))
    }
}

struct Outcome {
    envelope: Option<Envelope>,
    text: Option<String>,
    code: u8,
}

impl Outcome {
    fn json(envelope: Envelope) -> Self {
        Self { envelope: Some(envelope), text: None, code: 0 }
    }
}

fn envelope(command: &str, inputs: Value, result: Value, provenance: Value) -> Envelope {
    Envelope {
        schema_version: SCHEMA_VERSION.into(),
        command: command.into(),
        inputs,
        result,
        provenance,
    }
}

fn provenance_of(r: &ClassificationResult) -> Value {
    json!({
        "matched_statement": r.matched_statement,
        "chain": r.chain,
        "notes": r.notes,
    })
}

fn run_classify(args: ClassifyArgs) -> Result<Outcome, Failure> {
    let s = &args.subject;
    let index = |x: i64| u32::try_from(x).map_err(|_| Failure::Usage(format!("{x} out of range")));
    let (inputs, res) = if let Some(IntList([a, b, c])) = s.triple {
        (json!({ "triple": [a, b, c] }), classify(a, b, c)?)
    } else if let Some(m) = s.consecutive {
        (json!({ "consecutive": m }), classify_consecutive(m)?)
    } else if let Some(IntList(v)) = s.power_family {
        let (k, l, m) = (index(v[0])?, index(v[1])?, index(v[2])?);
        let inputs = json!({ "power_family": { "k": k, "l": l, "m": m, "alpha": v[3], "beta": v[4], "gamma": v[5] } });
        (inputs, classify_power_family(v[3], v[4], v[5], k, l, m)?)
    } else if let Some(IntList(v)) = s.fermat {
        let indices = [index(v[0])?, index(v[1])?, index(v[2])?];
        (json!({ "fermat": v }), fermat_mersenne_guarantee(SpecialFamily::Fermat, indices)?)
    } else if let Some(IntList(v)) = s.mersenne {
        let indices = [index(v[0])?, index(v[1])?, index(v[2])?];
        (json!({ "mersenne": v }), fermat_mersenne_guarantee(SpecialFamily::Mersenne, indices)?)
    } else {
        return Err(Failure::Usage("nothing to classify".into()));
    };

    if args.csv {
        return Ok(Outcome { envelope: None, text: Some(classification_csv(&inputs, &res)?), code: 0 });
    }
    let provenance = provenance_of(&res);
    Ok(Outcome::json(envelope("classify", inputs, serde_json::to_value(&res)?, provenance)))
}

#[derive(Serialize)]
struct ClassificationRow {
    inputs: String,
    verdict: String,
    residue: Option<u8>,
    matched_statement: String,
    condition_i_prime: Option<u64>,
    exceptional_divisors: String,
    asymptotic: bool,
    chain_length: usize,
}

fn tag(v: &impl Serialize, key: &str) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        Ok(Value::Object(m)) => m.get(key).and_then(Value::as_str).unwrap_or_default().to_string(),
        _ => String::new(),
    }
}

fn classification_csv(inputs: &Value, r: &ClassificationResult) -> Result<String, Failure> {
    let residue = match r.verdict {
        polytriple::classifier::Verdict::AlmostUniversalOnClass { residue } => Some(residue),
        _ => None,
    };
    let row = ClassificationRow {
        inputs: inputs.to_string(),
        verdict: tag(&r.verdict, "kind"),
        residue,
        matched_statement: tag(&r.matched_statement, ""),
        condition_i_prime: r.witnesses.condition_i_prime,
        exceptional_divisors: r
            .witnesses
            .exceptional_divisors
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        asymptotic: r.asymptotic,
        chain_length: r.chain.len(),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(row).map_err(|e| Failure::Usage(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct GapRow {
    n: u64,
    #[serde(rename = "in_S")]
    in_s: bool,
    witness_t: Option<u64>,
    witness_r: Option<u128>,
    tension: bool,
}

fn run_search(args: SearchArgs, config: &Config) -> Result<Outcome, Failure> {
    let IntList([a, b, c]) = args.triple;
    let t = TripleInvariants::new(a, b, c)?;
    let options = SieveOptions {
        workers: args.workers.or(config.workers),
        memory_cap: args.memory_cap.or(config.memory_cap).unwrap_or(DEFAULT_MEMORY_CAP),
    };
    let report = gap_report(&t, args.bound, args.window, options)?;
    eprintln!(
        "sieved {} to {}: {} gaps, {} tension, {:.3}s",
        args.triple.0.map(|m| m.to_string()).join(","),
        args.bound,
        report.gaps.len(),
        report.tension_count,
        report.elapsed_micros as f64 / 1e6
    );

    if let Some(path) = &args.gaps_out {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        for g in &report.annotations {
            let first = g.witnesses.first();
            w.serialize(GapRow {
                n: g.n,
                in_s: g.in_s(),
                witness_t: first.map(|w| w.t),
                witness_r: first.map(|w| w.r),
                tension: g.tension,
            })
            .map_err(|e| Failure::Usage(e.to_string()))?;
        }
        if report.annotations.is_empty() {
            w.write_record(["n", "in_S", "witness_t", "witness_r", "tension"])
                .map_err(|e| Failure::Usage(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
    }

    let classification = classify(a, b, c)?;
    let inputs = json!({
        "triple": [a, b, c],
        "bound": args.bound,
        "window": args.window,
        "strict": args.strict,
        "workers": options.workers,
        "memory_cap": options.memory_cap,
    });
    let code = if args.strict && report.tension_count > 0 { EXIT_TENSION } else { 0 };
    let env = envelope("search", inputs, serde_json::to_value(&report)?, provenance_of(&classification));
    Ok(Outcome { envelope: Some(env), text: None, code })
}

fn parse_place(s: &str) -> Result<Place, Failure> {
    match s {
        "inf" | "real" | "oo" => Ok(Place::Real),
        _ => {
            let p: u64 = s.parse().map_err(|_| Failure::Usage(format!("bad place {s:?}")))?;
            Ok(Place::finite(p)?)
        }
    }
}

fn parse_rational(s: &str) -> Result<Ratio<i64>, Failure> {
    let q = Ratio::<i64>::from_str(s).map_err(|_| Failure::Usage(format!("bad rational {s:?}")))?;
    if q == Ratio::from_integer(0) {
        return Err(Failure::Usage("Hilbert symbol arguments must be nonzero".into()));
    }
    Ok(q)
}

fn square_class(q: Ratio<i64>) -> i128 {
    *q.numer() as i128 * *q.denom() as i128
}

fn run_symbols(kind: SymbolsCommand) -> Result<Outcome, Failure> {
    let mut oracle = IsotropyOracle::new();
    let (command, inputs, result, verified) = match kind {
        SymbolsCommand::Hilbert { verify, x, y, place } => {
            let (qx, qy, v) = (parse_rational(&x)?, parse_rational(&y)?, parse_place(&place)?);
            let value = hilbert_symbol(qx, qy, v)?;
            let check = verify.then(|| match v {
                Place::Real => value == if *qx.numer() < 0 && *qy.numer() < 0 { -1 } else { 1 },
                Place::Finite(p) => oracle.hilbert(p.get(), square_class(qx), square_class(qy)) == value,
            });
            ("symbols hilbert", json!({ "x": x, "y": y, "place": v.to_string() }), json!(value), check)
        }
        SymbolsCommand::Hasse { form, p, verify } => {
            let f = PadicDiagForm::new(Prime::new(p)?, form.0)?;
            let value = hasse_symbol(&f);
            let check = verify.then(|| {
                let d = form.0;
                oracle.hilbert(p, d[0], d[1]) * oracle.hilbert(p, d[0], d[2]) * oracle.hilbert(p, d[1], d[2]) == value
            });
            ("symbols hasse", json!({ "form": form, "p": p }), json!(value), check)
        }
        SymbolsCommand::Isotropic { form, p, verify } => {
            let f = PadicDiagForm::new(Prime::new(p)?, form.0)?;
            let value = is_isotropic_ternary(&f);
            let check = verify.then(|| oracle.is_isotropic(p, form.0) == value);
            ("symbols isotropic", json!({ "form": form, "p": p }), json!(value), check)
        }
        SymbolsCommand::AnisoPrimes { triple, verify } => {
            let IntList([a, b, c]) = triple;
            let t = TripleInvariants::new(a, b, c)?;
            let value = anisotropic_primes(&t);
            let check = verify.then(|| {
                let by_search: Vec<u64> = polytriple::localfield::bad_primes(&t)
                    .into_iter()
                    .filter(|&p| !oracle.is_isotropic(p, t.leads()))
                    .collect();
                by_search == value
            });
            ("symbols aniso-primes", json!({ "triple": triple }), json!(value), check)
        }
    };
    let provenance = match verified {
        Some(ok) => json!({ "oracle_agrees": ok }),
        None => json!({}),
    };
    Ok(Outcome::json(envelope(command, inputs, result, provenance)))
}

fn run_exceptional(args: ExceptionalArgs) -> Result<Outcome, Failure> {
    let IntList([a, b, c]) = args.triple;
    let t = TripleInvariants::new(a, b, c)?;
    let (start, end) = match (args.n, args.range) {
        (Some(n), _) => (n, n),
        (None, Some(r)) => (r.start, r.end),
        (None, None) => return Err(Failure::Usage("--n or --range is required".into())),
    };
    let set = ExceptionalSet::new(&t);
    let mut rows = Vec::new();
    for n in start..=end {
        let witnesses = match args.t {
            Some(d) => exceptional_membership(&t, d, n)?.into_iter().collect(),
            None => set.witnesses(n),
        };
        rows.push(json!({ "n": n, "witnesses": witnesses }));
    }
    let result = if args.n.is_some() {
        rows.pop().expect("one row")["witnesses"].take()
    } else {
        Value::Array(rows)
    };
    let inputs = json!({ "triple": [a, b, c], "n": args.n, "range": args.range, "t": args.t });
    let provenance = json!({ "divisors": args.t.map(|d| vec![d]).unwrap_or_else(|| set.divisors().to_vec()) });
    Ok(Outcome::json(envelope("exceptional", inputs, result, provenance)))
}

// A closed pipe downstream is not an error worth reporting.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let outcome = match cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Search(args) => run_search(args, &config),
        Command::Symbols { kind } => run_symbols(kind),
        Command::Exceptional(args) => run_exceptional(args),
    };
    match outcome {
        Ok(out) => {
            if let Some(env) = out.envelope {
                match serde_json::to_string_pretty(&env) {
                    Ok(s) => emit(&format!("{s}\n")),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
            }
            if let Some(text) = out.text {
                emit(&text);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}
