mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entropia::entropy::EntropyReport;
use entropia::laws::product_entropy_gap;
use entropia::numfield::{ideal_entropy, ideal_tau, ideal_tau_e, split_prime, FieldSpec};
use entropia::suites::{self, SuiteParams};
use entropia::{factorize, Error, Limits};
use serde_json::{json, Value};

use output::{render_text, Envelope, Status};

/// Entropies of natural numbers and of ideals in number fields.
#[derive(Debug, Parser)]
#[command(name = "entropia", version, about)]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// H, H̄ and the arithmetic functions of n.
    Entropy { n: u64 },
    /// Exponential divisors of n, in increasing order.
    Edivisors { n: u64 },
    /// Compare H(mn) with H(m) + H(n) for coprime m, n.
    Compare { m: u64, n: u64 },
    /// Splitting of p in a field given as quad:<d>, cyclo:<l> or cubic:<m>.
    Ideal { field: String, p: u64 },
    /// Run a named verification suite.
    Verify {
        suite: String,
        /// Upper end of the swept range (suite specific).
        #[arg(long)]
        max: Option<u64>,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Outcome {
    result: Value,
    status: Status,
    text: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, status: Status::Ok, text: None }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

fn entropy(n: u64, limits: &Limits) -> Result<Outcome, Error> {
    if n >= 1 << 63 {
        return Err(Error::Domain(format!("n = {n} must be below 2^63")));
    }
    Ok(Outcome::ok(to_value(&EntropyReport::new(n, limits)?)))
}

fn edivisors(n: u64, limits: &Limits) -> Result<Outcome, Error> {
    let f = factorize(n)?;
    let values: Vec<u64> = f.exponential_divisors(limits.max_divisors)?.iter().map(|d| d.value()).collect();
    let text = values.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n";
    Ok(Outcome {
        result: json!({ "n": n, "tauE": f.tau_e(), "divisors": values }),
        status: Status::Ok,
        text: Some(text),
    })
}

fn compare(m: u64, n: u64) -> Result<Outcome, Error> {
    Ok(Outcome::ok(to_value(&product_entropy_gap(m, n)?)))
}

fn ideal(field: &str, p: u64) -> Result<Outcome, Error> {
    let field: FieldSpec = field.parse()?;
    let sp = split_prime(field, p)?;
    let mut result = to_value(&sp);
    let extra = json!({
        "degree": field.degree(),
        "g": sp.g(),
        "H": ideal_entropy(&sp),
        "tau": ideal_tau(&sp),
        "tauE": ideal_tau_e(&sp),
    });
    result.as_object_mut().expect("pattern is an object").extend(extra.as_object().cloned().unwrap_or_default());
    let mut shown = result.clone();
    let pattern: Vec<String> = sp.factors().iter().map(|x| format!("(e={}, f={})", x.e, x.f)).collect();
    shown["factors"] = Value::String(pattern.join(" "));
    Ok(Outcome { result, status: Status::Ok, text: Some(render_text(&output::canonical(shown))) })
}

fn verify(suite: &str, max: Option<u64>, seed: u64, limits: Limits) -> Result<Outcome, Error> {
    let outcome = suites::run(suite, &SuiteParams { max, seed, limits })?;
    let status = if outcome.ok() { Status::Ok } else { Status::Violation };
    Ok(Outcome { result: to_value(&outcome), status, text: None })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::from_env();
    let (name, inputs, outcome) = match &cli.command {
        Command::Entropy { n } => ("entropy", json!({ "n": n }), entropy(*n, &limits)),
        Command::Edivisors { n } => ("edivisors", json!({ "n": n }), edivisors(*n, &limits)),
        Command::Compare { m, n } => ("compare", json!({ "m": m, "n": n }), compare(*m, *n)),
        Command::Ideal { field, p } => ("ideal", json!({ "field": field, "p": p }), ideal(field, *p)),
        Command::Verify { suite, max, seed } => {
            ("verify", json!({ "suite": suite, "max": max, "seed": seed }), verify(suite, *max, *seed, limits))
        }
    };

    let (envelope, text) = match outcome {
        Ok(o) => (Envelope::new(name, inputs, o.result, o.status), o.text),
        Err(e) => {
            let envelope = Envelope::new(name, inputs, json!({ "error": e.to_string() }), Status::Error);
            if !cli.json {
                eprintln!("error: {e}");
                return ExitCode::from(envelope.status.exit_code());
            }
            (envelope, None)
        }
    };

    if cli.json {
        println!("{}", envelope.to_json());
    } else {
        print!("{}", text.unwrap_or_else(|| render_text(&envelope.result)));
        if envelope.status == Status::Violation {
            eprintln!("{name}: violations found");
        }
    }
    ExitCode::from(envelope.status.exit_code())
}
