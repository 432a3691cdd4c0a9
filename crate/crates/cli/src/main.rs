//! `partiality`: command-line front end to the partiality toolkit.
//!
//! Every command prints a single machine-parsable record on stdout (except
//! `compile`, which prints a listing, and `laws`, which prints one line per
//! suite). Exit codes: 0 success, 1 input error, 2 timeout or unknown,
//! 3 stuck.

use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use partiality::cpo::{search, Stream};
use partiality::lang::{compile, eval, exec, parse, Outcome, Term, Value};
use partiality::laws;
use partiality::reals::{is_positive, Bit, CauchySeq, Rational};
use partiality::{converges_within, Delay, RunResult};

const DEFAULT_FUEL: usize = 1000;

#[derive(Parser, Debug)]
#[command(
    name = "partiality",
    version,
    about = "Fuel-bounded experiments with partial computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a term with the definitional interpreter.
    Run {
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// A file in the term grammar, or the term itself.
        input: String,
    },
    /// Compile a term and run it on the stack machine.
    Vm {
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        input: String,
    },
    /// Print the machine code for a term.
    Compile { input: String },
    /// Semidecide the sign of a rational, given as `p/q`.
    Ispositive {
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(allow_hyphen_values = true)]
        rational: String,
    },
    /// Search the stream `from, from+step, ...` for an element satisfying
    /// a predicate.
    Search {
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long, default_value_t = 1)]
        step: u64,
        /// `even`, `odd`, `prime`, `square`, `mod:M:R` or `ge:N`.
        #[arg(long)]
        pred: Pred,
    },
    /// Run the randomized law suites.
    Laws {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
        /// Also run a non-monotone functional, which must be reported.
        #[arg(long)]
        inject_nonmonotone: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pred {
    Even,
    Odd,
    Prime,
    Square,
    Mod(u64, u64),
    AtLeast(u64),
}

impl Pred {
    fn holds(self, x: u64) -> bool {
        match self {
            Pred::Even => x.is_multiple_of(2),
            Pred::Odd => x % 2 == 1,
            Pred::Prime => {
                x >= 2
                    && (2..)
                        .take_while(|d| d * d <= x)
                        .all(|d| !x.is_multiple_of(d))
            }
            Pred::Square => x.isqrt().pow(2) == x,
            Pred::Mod(m, r) => x % m == r,
            Pred::AtLeast(n) => x >= n,
        }
    }
}

#[derive(Debug)]
struct PredParseError(String);

impl fmt::Display for PredParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown predicate `{}`", self.0)
    }
}

impl std::error::Error for PredParseError {}

impl FromStr for Pred {
    type Err = PredParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PredParseError(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["even"] => Ok(Pred::Even),
            ["odd"] => Ok(Pred::Odd),
            ["prime"] => Ok(Pred::Prime),
            ["square"] => Ok(Pred::Square),
            ["mod", m, r] => {
                let m: u64 = m.parse().map_err(|_| bad())?;
                let r: u64 = r.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                Ok(Pred::Mod(m, r))
            }
            ["ge", n] => n.parse().map(Pred::AtLeast).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

enum Status {
    Ok,
    Error,
    Unknown,
    Stuck,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(match s {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Unknown => 2,
            Status::Stuck => 3,
        })
    }
}

/// Read `input` as a file if one exists at that path, else use it verbatim.
fn load_term(input: &str) -> Result<Term, String> {
    let path = Path::new(input);
    let (source, origin) = if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| format!("{input}: {e}"))?;
        (text, input)
    } else {
        (input.to_string(), "<input>")
    };
    parse(&source).map_err(|e| format!("{origin}:{e}"))
}

fn report(result: RunResult<Value>, fuel: usize) -> Status {
    match result.map(|v| v.outcome()) {
        RunResult::Converged {
            value: Outcome::Stuck,
            ..
        } => {
            println!("stuck");
            Status::Stuck
        }
        RunResult::Converged { value, steps } => {
            println!("now {value} steps={steps}");
            Status::Ok
        }
        RunResult::Timeout => {
            println!("timeout fuel={fuel}");
            Status::Unknown
        }
    }
}

fn evaluate(input: &str, fuel: usize, run: impl Fn(&Term) -> Delay<Value>) -> Status {
    match load_term(input) {
        Ok(t) => report(run(&t).run_fuel(fuel), fuel),
        Err(e) => {
            eprintln!("error: {e}");
            Status::Error
        }
    }
}

fn cmd_ispositive(text: &str, fuel: usize) -> Status {
    let r: Rational = match text.parse() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Status::Error;
        }
    };
    match converges_within(&is_positive(&CauchySeq::constant(r)), fuel) {
        Some(w) => {
            let sign = if w.value == Bit::One {
                "positive"
            } else {
                "negative"
            };
            println!("{sign} index={}", w.index);
            Status::Ok
        }
        None => {
            println!("unknown fuel={fuel}");
            Status::Unknown
        }
    }
}

fn cmd_search(fuel: usize, from: u64, step: u64, pred: Pred) -> Status {
    let xs = Stream::iterate(from, move |x| x.saturating_add(step));
    match converges_within(&search(move |&x: &u64| pred.holds(x), &xs), fuel) {
        Some(w) => {
            println!("found {} index={}", w.value, w.index);
            Status::Ok
        }
        None => {
            println!("unknown fuel={fuel}");
            Status::Unknown
        }
    }
}

fn cmd_laws(seed: u64, fuel: usize, inject_nonmonotone: bool) -> Status {
    let mut reports = laws::run_all(seed, fuel);
    if inject_nonmonotone {
        reports.push(laws::non_monotone_fixture(fuel));
    }
    for r in &reports {
        println!("{r}");
    }
    let failed: usize = reports.iter().map(|r| r.failed()).sum();
    if failed == 0 {
        println!("all suites passed");
        Status::Ok
    } else {
        println!("{failed} checks failed");
        Status::Error
    }
}

fn main() -> ExitCode {
    // clap's own usage errors exit with 2, which here means "timeout".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Status::Error.into()
            } else {
                Status::Ok.into()
            };
        }
    };
    let status = match cli.command {
        Command::Run { fuel, input } => evaluate(&input, fuel, eval),
        Command::Vm { fuel, input } => evaluate(&input, fuel, |t| exec(&compile(t))),
        Command::Compile { input } => match load_term(&input) {
            Ok(t) => {
                print!("{}", compile(&t));
                Status::Ok
            }
            Err(e) => {
                eprintln!("error: {e}");
                Status::Error
            }
        },
        Command::Ispositive { fuel, rational } => cmd_ispositive(&rational, fuel),
        Command::Search {
            fuel,
            from,
            step,
            pred,
        } => cmd_search(fuel, from, step, pred),
        Command::Laws {
            seed,
            fuel,
            inject_nonmonotone,
        } => cmd_laws(seed, fuel, inject_nonmonotone),
    };
    status.into()
}
