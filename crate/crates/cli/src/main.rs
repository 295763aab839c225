//! Command-line frontend over the library: link tables, classification
//! reports, witness checks, degree bounds, triple search, Hensel lifting,
//! and the relator/linearization comparison.
//!
//! Exit status: 0 on success, 1 when a check ran but the queried condition
//! does not hold (a failing witness, a mismatched linearization, a prime
//! product too large for the degree bound), 2 on validation errors.
//!
//! Identical invocations produce byte-identical output. The only
//! environment input is `LOG_LEVEL`, which controls diagnostic verbosity on
//! standard error and never changes the report itself.

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use tamelink::classify::{
    classify_with_choice, search_labute_triples, tame_degree_bound, ClassificationReport,
    Conclusion, TameBoundResult,
};
use tamelink::koch::{local_witness, KochPresentation, PresentationCheck, TraceZeroMat};
use tamelink::linkdata::{LinkTable, RootChoice, TamePrimeSet};
use tamelink::padic::hensel_sqrt;

#[derive(Parser)]
#[command(
    name = "tamelink",
    version,
    about = "Link numbers and finiteness checks for tame prime sets",
    max_term_width = 100
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the link-number table of a prime set.
    Link {
        /// The pro-p coefficient prime (odd).
        #[arg(short)]
        p: u64,
        /// Comma-separated ramified primes, each distinct from p.
        #[arg(short = 'S', long = "primes", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Use second-smallest primitive roots instead of smallest.
        #[arg(long)]
        second_roots: bool,
    },
    /// Run every applicable finiteness and image check on a prime set.
    Classify {
        #[arg(short)]
        p: u64,
        #[arg(short = 'S', long = "primes", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Use second-smallest primitive roots instead of smallest.
        #[arg(long)]
        second_roots: bool,
    },
    /// Check the explicit one-prime matrix witness against its relator.
    VerifyWitness {
        #[arg(short)]
        p: u64,
        /// The ramified prime, q = 1 mod p.
        #[arg(short)]
        q: u64,
        /// Working precision: computations are exact mod p^K.
        #[arg(short = 'K', default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=64))]
        precision: u32,
    },
    /// Degree bound for tame number fields unramified outside the set.
    TameBound {
        #[arg(short = 'S', long = "primes", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Enumerate prime triples passing every powerful-triple condition.
    SearchTriples {
        #[arg(short)]
        p: u64,
        /// Largest candidate prime to consider.
        #[arg(long, default_value_t = 1000)]
        qmax: u64,
        /// Evaluate candidate triples in parallel (output is unchanged).
        #[arg(long)]
        parallel: bool,
    },
    /// Square root of q in the p-adic integers by Hensel lifting.
    HenselSqrt {
        #[arg(short)]
        p: u64,
        /// The integer to lift a square root of; q = 1 mod p required.
        #[arg(short)]
        q: u64,
        #[arg(short = 'K', default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=64))]
        precision: u32,
    },
    /// Compare direct relator evaluation against the mod-p^3 linearization
    /// on a seeded random inertia assignment.
    Linearize {
        #[arg(short)]
        p: u64,
        /// Primes of the presentation; each must be 1 mod p and not 1 mod p^2.
        #[arg(short = 'S', long = "primes", value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Seed for the random trace-zero assignment (replayable).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A finished report plus whether the queried condition held. `ok = false`
/// maps to exit status 1.
struct Outcome {
    report: String,
    ok: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("LOG_LEVEL", "warn")).init();
    let cli = Cli::parse();
    let format = cli.format;
    let out = cli.out.clone();
    match run(cli.command, format) {
        Ok(outcome) => {
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, format!("{}\n", outcome.report)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                // A consumer that stops reading (`tamelink ... | head`) closes
                // the pipe; that is not an error and must not panic. The exit
                // status still reflects the queried condition.
                let mut stdout = std::io::stdout().lock();
                if let Err(e) = writeln!(stdout, "{}", outcome.report) {
                    if e.kind() != std::io::ErrorKind::BrokenPipe {
                        eprintln!("error: cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, format: Format) -> Result<Outcome, String> {
    match command {
        Command::Link {
            p,
            primes,
            second_roots,
        } => {
            let set = TamePrimeSet::new(p, primes).map_err(|e| e.to_string())?;
            let table = LinkTable::compute_with_choice(&set, choice(second_roots));
            log::debug!("computed link table for {} primes", table.len());
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&table),
                    Format::Text => render_link_table(&table),
                },
                ok: true,
            })
        }
        Command::Classify {
            p,
            primes,
            second_roots,
        } => {
            let set = TamePrimeSet::new(p, primes).map_err(|e| e.to_string())?;
            let report = classify_with_choice(&set, choice(second_roots));
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&report),
                    Format::Text => render_classification(&report),
                },
                ok: true,
            })
        }
        Command::VerifyWitness { p, q, precision } => {
            let set = TamePrimeSet::new(p, vec![q]).map_err(|e| e.to_string())?;
            let pres = KochPresentation::new(set).map_err(|e| e.to_string())?;
            let witness = local_witness(p, q, precision).map_err(|e| e.to_string())?;
            let check = pres.verify(&witness).map_err(|e| e.to_string())?;
            let ok = check.passed;
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&WitnessReport {
                        p,
                        q,
                        precision,
                        check: &check,
                    }),
                    Format::Text => render_witness(p, q, precision, &check),
                },
                ok,
            })
        }
        Command::TameBound { primes } => {
            let result = tame_degree_bound(&primes).map_err(|e| e.to_string())?;
            let ok = result.bounded;
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&result),
                    Format::Text => render_tame_bound(&result),
                },
                ok,
            })
        }
        Command::SearchTriples { p, qmax, parallel } => {
            let triples = search_labute_triples(p, qmax, parallel).map_err(|e| e.to_string())?;
            log::info!("search over q <= {qmax} found {} triples", triples.len());
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&SearchReport {
                        p,
                        qmax,
                        triples: &triples,
                    }),
                    Format::Text => render_triples(p, qmax, &triples),
                },
                ok: true,
            })
        }
        Command::HenselSqrt { p, q, precision } => {
            let root = hensel_sqrt(q, p, precision).map_err(|e| e.to_string())?;
            let square = root.mul(&root).expect("same context");
            let target =
                tamelink::padic::PadicInt::from_u64(p, precision, q).map_err(|e| e.to_string())?;
            let verified = square == target;
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&HenselReport {
                        p,
                        q,
                        precision,
                        root: root.residue().to_string(),
                        root_squared_equals_q: verified,
                    }),
                    Format::Text => format!(
                        "sqrt({q}) = {} mod {p}^{precision} (square checks: {verified})",
                        root.residue()
                    ),
                },
                ok: verified,
            })
        }
        Command::Linearize { p, primes, seed } => {
            let set = TamePrimeSet::new(p, primes.clone()).map_err(|e| e.to_string())?;
            let pres = KochPresentation::new(set).map_err(|e| e.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mats: Vec<TraceZeroMat> = (0..pres.d())
                .map(|_| {
                    TraceZeroMat::from_upper(
                        p,
                        rng.random_range(0..p),
                        rng.random_range(0..p),
                        rng.random_range(0..p),
                    )
                })
                .collect();
            let residuals = pres.linearized_residual(&mats).map_err(|e| e.to_string())?;
            let taus: Vec<_> = mats
                .iter()
                .map(|a| a.unipotent_lift(1, 3))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let assign = pres.assignment_from_taus(taus).map_err(|e| e.to_string())?;
            let mut relators = Vec::with_capacity(pres.d());
            for (i, residual) in residuals.iter().enumerate() {
                let direct = pres.relator_eval(&assign, i).map_err(|e| e.to_string())?;
                let predicted = residual.unipotent_lift(2, 3).map_err(|e| e.to_string())?;
                relators.push(LinearizeRelator {
                    index: i,
                    q: pres.set().primes()[i],
                    matched: direct == predicted,
                });
            }
            let all_matched = relators.iter().all(|r| r.matched);
            Ok(Outcome {
                report: match format {
                    Format::Json => to_json(&LinearizeReport {
                        p,
                        primes: &primes,
                        seed,
                        precision: 3,
                        relators: &relators,
                        all_matched,
                    }),
                    Format::Text => render_linearize(p, seed, &relators, all_matched),
                },
                ok: all_matched,
            })
        }
    }
}

fn choice(second: bool) -> RootChoice {
    if second {
        RootChoice::SecondSmallest
    } else {
        RootChoice::Smallest
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    p: u64,
    q: u64,
    precision: u32,
    check: &'a PresentationCheck,
}

#[derive(Serialize)]
struct SearchReport<'a> {
    p: u64,
    qmax: u64,
    triples: &'a [[u64; 3]],
}

#[derive(Serialize)]
struct HenselReport {
    p: u64,
    q: u64,
    precision: u32,
    root: String,
    root_squared_equals_q: bool,
}

#[derive(Serialize)]
struct LinearizeRelator {
    index: usize,
    q: u64,
    matched: bool,
}

#[derive(Serialize)]
struct LinearizeReport<'a> {
    p: u64,
    primes: &'a [u64],
    seed: u64,
    precision: u32,
    relators: &'a [LinearizeRelator],
    all_matched: bool,
}

fn join(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(", ")
}

fn render_link_table(t: &LinkTable) -> String {
    let mut s = String::new();
    let n = t.len();
    let _ = writeln!(s, "p = {}", t.p());
    let _ = writeln!(
        s,
        "primes = {}",
        join(t.primes().iter().map(|q| q.to_string()))
    );
    let _ = writeln!(s, "roots = {}", join((0..n).map(|j| t.root(j).to_string())));
    let cell = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    let _ = writeln!(
        s,
        "L (row i, column j, L[i][j] from q_i = root_j^-L mod q_j):"
    );
    for i in 0..n {
        let _ = writeln!(s, "  {}", join((0..n).map(|j| cell(t.l(i, j)))));
    }
    let _ = writeln!(s, "ell = L mod p:");
    for i in 0..n {
        let _ = writeln!(s, "  {}", join((0..n).map(|j| cell(t.ell(i, j)))));
    }
    let _ = writeln!(
        s,
        "c = (q - 1)/p where defined: {}",
        join((0..n).map(|i| cell(t.c(i))))
    );
    let _ = write!(
        s,
        "f = v_p(q - 1): {}",
        join((0..n).map(|i| t.f(i).to_string()))
    );
    s
}

fn conclusion_label(c: &Conclusion) -> String {
    match c {
        Conclusion::HomsToGLnM0Trivial { m0 } => format!("HomsToGLnM0Trivial(m0 = {m0})"),
        other => format!("{other:?}"),
    }
}

fn render_classification(r: &ClassificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}", r.p);
    let _ = writeln!(
        s,
        "primes = {}",
        join(r.primes.iter().map(|q| q.to_string()))
    );
    let _ = writeln!(s, "s_min = {}", join(r.s_min.iter().map(|q| q.to_string())));
    for f in &r.findings {
        let conds = join(
            f.preconditions
                .iter()
                .map(|c| format!("{} = {}", c.name, c.holds)),
        );
        let _ = write!(
            s,
            "finding {}: {} [{}]",
            f.rule,
            conclusion_label(&f.conclusion),
            conds
        );
        if !f.assumptions.is_empty() {
            let _ = write!(s, " assuming: {}", f.assumptions.join("; "));
        }
        for note in &f.notes {
            let _ = write!(s, " note: {note}");
        }
        let _ = writeln!(s);
    }
    match &r.tame_bound {
        Some(b) => {
            let _ = write!(s, "{}", render_tame_bound(b));
        }
        None => {
            let _ = write!(s, "tame bound: not computed (empty set)");
        }
    }
    s
}

fn render_witness(p: u64, q: u64, precision: u32, check: &PresentationCheck) -> String {
    let r = &check.relators[0];
    if r.passed {
        format!("relator = I at precision {p}^{precision} (q = {q}, witness verified)")
    } else {
        format!(
            "relator != I at precision {p}^{precision} (q = {q}, residual level {})",
            r.residual.level()
        )
    }
}

fn render_tame_bound(b: &TameBoundResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "product = {}", b.product);
    match b.bound {
        Some(bound) => {
            let _ = writeln!(s, "bounded = true, degree bound = {bound}");
        }
        None => {
            let _ = writeln!(
                s,
                "bounded = false (product exceeds 60.1), no bound from this method"
            );
        }
    }
    let _ = write!(
        s,
        "components: 254 - ln(product) = {:.6}, ln(60.1/product) = {:.6}",
        b.components.numerator, b.components.denominator
    );
    if let Some(note) = &b.note {
        let _ = write!(s, "\nnote: {note}");
    }
    s
}

fn render_triples(p: u64, qmax: u64, triples: &[[u64; 3]]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {p}, qmax = {qmax}, {} triple(s)", triples.len());
    for t in triples {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    s.pop();
    s
}

fn render_linearize(p: u64, seed: u64, relators: &[LinearizeRelator], all: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {p}, seed = {seed}, precision = {p}^3");
    for r in relators {
        let _ = writeln!(
            s,
            "relator {} (q = {}): {}",
            r.index,
            r.q,
            if r.matched {
                "matches linearization"
            } else {
                "MISMATCH"
            }
        );
    }
    let _ = write!(s, "all relators match: {all}");
    s
}
