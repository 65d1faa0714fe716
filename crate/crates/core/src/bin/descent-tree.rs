use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use descent_tree::descent::DEFAULT_BRUTE_CAP;
use descent_tree::poset::DEFAULT_EXTENSION_CAP;
use descent_tree::roots::{complex_roots, verify_roots_of, DEFAULT_TOL};
use descent_tree::sweep::{check_tree, reproducer, CheckContext, Status};
use descent_tree::{
    build_poset, expand, run_sweep, Algo, Basis, Check, Engine, Error, MarkedTree, SweepConfig,
};

const EXIT_USAGE: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "descent-tree", version, about = "Descent polynomials of marked rooted trees")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the descent polynomial d(T; n).
    Poly {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value = "cut")]
        algo: Algo,
    },
    /// Evaluate d(T; n) at one n.
    Eval {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "cut")]
        algo: Algo,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
    },
    /// Expand d(T; n) in a binomial basis: a, abar, c, c:<offset>, nk.
    Expand {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        basis: Basis,
    },
    /// Integer roots, optional complex roots, and the predicted root facts.
    Roots {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Number of natural labelings (hook-length formula).
    Natlab {
        #[arg(long)]
        tree: String,
    },
    /// The associated poset and the height polynomial of the root element.
    Poset {
        #[arg(long)]
        tree: String,
    },
    /// A labeling of G(T; n) whose descent set is the marked set.
    Witness {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        n: usize,
    },
    /// Check properties over every marked tree up to a size.
    Sweep {
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, env = "DESCENT_TREE_JOBS")]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run sweep checks on a single tree.
    Check {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        brute_cap: usize,
    },
}

enum Failure {
    Usage(String),
    Internal(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::NoConvergence(_) | Error::ZeroPolynomial => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn load_tree(source: &str) -> Result<MarkedTree, Failure> {
    let text = match source.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        None => source.to_string(),
    };
    MarkedTree::parse_any(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn parse_checks(text: &str) -> Result<BTreeSet<Check>, Failure> {
    Ok(Check::parse_list(text)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Poly { tree, algo } => {
            let t = load_tree(&tree)?;
            let p = Engine::default().polynomial(&t, algo)?;
            if json {
                print_json(&json!({
                    "tree": t.to_string(),
                    "algo": algo.to_string(),
                    "degree": t.degree(),
                    "polynomial": p,
                    "text": p.to_string(),
                }))?;
            } else {
                println!("{p}");
            }
        }
        Command::Eval {
            tree,
            n,
            algo,
            brute_cap,
        } => {
            let t = load_tree(&tree)?;
            let v = Engine::with_brute_cap(brute_cap).count(&t, n, algo)?;
            if json {
                print_json(&json!({
                    "tree": t.to_string(),
                    "n": n,
                    "algo": algo.to_string(),
                    "value": v.to_string(),
                }))?;
            } else {
                println!("{v}");
            }
        }
        Command::Expand { tree, basis } => {
            let t = load_tree(&tree)?;
            let e = expand(&t, basis, &Engine::default())?;
            if json {
                print_json(&e)?;
            } else {
                let coeffs: Vec<String> = e.coeffs.iter().map(|c| c.to_string()).collect();
                println!("basis {} anchored at {}", e.basis, e.degree_param);
                println!("coefficients: {}", coeffs.join(", "));
            }
        }
        Command::Roots { tree, complex, tol } => {
            let t = load_tree(&tree)?;
            let p = Engine::default().polynomial(&t, Algo::Auto)?;
            let mut report = verify_roots_of(&t, p);
            report.complex_roots = match report.polynomial.degree() {
                Some(d) if complex && d >= 1 => Some(complex_roots(&report.polynomial, tol)?),
                _ => None,
            };
            if json {
                print_json(&report)?;
            } else {
                let ints: Vec<String> = report
                    .integer_roots
                    .iter()
                    .map(|r| match r.multiplicity {
                        1 => r.value.to_string(),
                        m => format!("{} (x{m})", r.value),
                    })
                    .collect();
                println!("integer roots: {}", ints.join(", "));
                if let Some(cr) = &report.complex_roots {
                    println!("complex roots:");
                    for z in &cr.roots {
                        println!("  {:.12} {:+.12}i", z.re, z.im);
                    }
                    if !cr.converged {
                        eprintln!("warning: residual {:e} exceeds tolerance {tol:e}", cr.max_residual);
                    }
                }
                for v in &report.verdicts {
                    let mark = if v.pass { "ok" } else { "FAILED" };
                    println!("{mark:>6}  {}: {}", v.fact, v.detail);
                }
                for n in &report.notes {
                    println!("  note: {n}");
                }
            }
        }
        Command::Natlab { tree } => {
            let t = load_tree(&tree)?;
            let count = t.natlab();
            if json {
                print_json(&json!({
                    "tree": t.to_string(),
                    "hooks": t.hook_lengths().0,
                    "natlab": count.to_string(),
                }))?;
            } else {
                println!("{count}");
            }
        }
        Command::Poset { tree } => {
            let t = load_tree(&tree)?;
            let p = build_poset(&t);
            let total = p.linear_extension_count(DEFAULT_EXTENSION_CAP)?;
            let heights = p.height_polynomial(t.root(), DEFAULT_EXTENSION_CAP)?;
            if json {
                print_json(&json!({
                    "tree": t.to_string(),
                    "covers": p.covers(),
                    "linear_extensions": total.to_string(),
                    "heights": heights,
                }))?;
            } else {
                let covers: Vec<String> = p.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
                let counts: Vec<String> = heights.counts.iter().map(|c| c.to_string()).collect();
                println!("covers: {}", covers.join(" "));
                println!("linear extensions: {total}");
                println!("heights of element {}: {}", heights.element, counts.join(", "));
            }
        }
        Command::Witness { tree, n } => {
            let t = load_tree(&tree)?;
            let w = t.witness_labeling(n)?;
            if json {
                print_json(&json!({ "tree": t.to_string(), "n": n, "labels": w.labels() }))?;
            } else {
                let labels: Vec<String> = w.labels().iter().map(|l| l.to_string()).collect();
                println!("{}", labels.join(" "));
            }
        }
        Command::Sweep {
            max_size,
            checks,
            jobs,
            brute_cap,
            out,
        } => {
            let cfg = SweepConfig {
                max_size,
                checks: parse_checks(&checks)?,
                brute_cap,
                jobs: jobs.unwrap_or_else(|| {
                    std::thread::available_parallelism().map_or(1, |n| n.get())
                }),
                out: Some(out),
                fault: None,
            };
            let report = run_sweep(&cfg).map_err(|e| match e {
                Error::Io(e) => Failure::Internal(format!("cannot write report: {e}")),
                e => e.into(),
            })?;
            if json {
                print_json(&report)?;
            } else {
                for c in &report.checks {
                    println!("{:<11} {:<42} pass {:>8}  fail {:>6}", c.check, c.name, c.pass, c.fail);
                }
                for d in &report.downgrades {
                    println!("downgraded {}.{} x{}: {}", d.check, d.property, d.count, d.reason);
                }
                let t = &report.totals;
                println!(
                    "{} shapes, {} marked trees, {} passed, {} failed, {} ms",
                    t.shapes, t.marked_trees, t.pass, t.fail, report.wall_time_ms
                );
            }
            for c in report.checks.iter().filter(|c| c.fail > 0) {
                for x in &c.counterexamples {
                    eprintln!("{}: {} ({})\n  reproduce: {}", c.name, x.tree, x.detail, x.reproduce);
                }
            }
            if report.failures() > 0 {
                return Err(Failure::Checks);
            }
        }
        Command::Check {
            tree,
            checks,
            brute_cap,
        } => {
            let t = load_tree(&tree)?;
            let checks = parse_checks(&checks)?;
            let engine = Engine::with_brute_cap(brute_cap);
            let ctx = CheckContext {
                engine: &engine,
                fault: None,
            };
            let outcomes = check_tree(&t, &checks, &ctx);
            let failed = outcomes.iter().any(|o| matches!(o.status, Status::Fail(_)));
            if json {
                let rows: Vec<_> = outcomes
                    .iter()
                    .map(|o| {
                        let (status, detail) = match &o.status {
                            Status::Pass => ("pass", None),
                            Status::Fail(d) => ("fail", Some(d.as_str())),
                            Status::Downgraded(d) => ("downgraded", Some(d.as_str())),
                        };
                        json!({ "check": o.check, "property": o.property, "status": status, "detail": detail })
                    })
                    .collect();
                print_json(&json!({ "tree": t.to_string(), "outcomes": rows }))?;
            } else {
                for o in &outcomes {
                    match &o.status {
                        Status::Pass => println!("    ok  {}.{}", o.check, o.property),
                        Status::Fail(d) => println!("FAILED  {}.{}: {d}", o.check, o.property),
                        Status::Downgraded(d) => println!("  skip  {}.{}: {d}", o.check, o.property),
                    }
                }
            }
            if failed {
                let bad: BTreeSet<Check> = outcomes
                    .iter()
                    .filter(|o| matches!(o.status, Status::Fail(_)))
                    .map(|o| o.check)
                    .collect();
                for c in bad {
                    eprintln!("reproduce: {}", reproducer(&t, c));
                }
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Checks) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
