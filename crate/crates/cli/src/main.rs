use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use topoforce::opens::{frac, int, Partition};
use topoforce::suites::{self, SuiteReport};
use topoforce::syntax::{parse_context, parse_formula_file, parse_opens, parse_rat, parse_term_file, SymbolTable};
use topoforce::terms::{generic, grid_cut, Grid};
use topoforce::{witnesses, Context, OpenSet, Semantics, Term};

/// Evaluate forcing over exact rational open sets.
#[derive(Parser, Debug)]
#[command(name = "topoforce", version)]
struct Cli {
    /// Forcing relation: `std` or `settle`.
    #[arg(long, global = true, default_value = "std")]
    sem: Semantics,
    /// Context file with `(def ...)` forms and one `(context ...)`.
    #[arg(long, global = true, env = "TOPOFORCE_CTX")]
    ctx: Option<PathBuf>,
    /// Output format for regions and partitions.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the maximal open forcing a sentence.
    Value {
        /// File with definitions and one sentence.
        #[arg(long)]
        formula: PathBuf,
    },
    /// Test whether an open forces a sentence.
    Forces {
        #[arg(long)]
        formula: PathBuf,
        /// An open set, e.g. `(opens (iv 0 1))`.
        #[arg(long)]
        open: String,
    },
    /// Print the settled term at a rational.
    Settle {
        /// File with definitions and one term.
        #[arg(long)]
        term: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Print the breakpoints and cells of a term.
    Partition {
        #[arg(long)]
        term: PathBuf,
    },
    /// Run a property suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Rank bound for random terms.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        rank: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Largest grid size for the generic suite.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        grid_points: u64,
        /// Print every individual check.
        #[arg(long)]
        verbose: bool,
    },
    /// Show the generic real and the power-set failure term.
    Demo {
        /// Grid for the generic real, e.g. `0,1/2,1`.
        #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
        grid: String,
        /// Threshold of the power-set failure term.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        at: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    EqualityAxioms,
    HelpfulLemma,
    SettleLemma,
    Witnesses,
    Generic,
    Reals,
    Heyting,
    PowersetDemo,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_context(path: Option<&Path>) -> Result<(SymbolTable, Context)> {
    match path {
        Some(p) => parse_context(&read(p)?).with_context(|| p.display().to_string()),
        None => Ok((SymbolTable::new(), Context::with_terms(Vec::new()))),
    }
}

fn load_term(path: &Path, symbols: &SymbolTable) -> Result<Term> {
    parse_term_file(&read(path)?, symbols).with_context(|| path.display().to_string())
}

fn parse_grid(text: &str) -> Result<Grid> {
    let pts = text.split(',').map(|p| parse_rat(p.trim())).collect::<topoforce::Result<Vec<_>>>()?;
    Ok(Grid::new(pts)?)
}

fn region_text(r: &OpenSet, format: Format) -> String {
    match format {
        Format::Text => format!("{r}\n"),
        Format::Tsv => {
            let mut out = String::from("lo\thi\n");
            for (lo, hi) in r.intervals() {
                let _ = writeln!(out, "{lo}\t{hi}");
            }
            out
        }
    }
}

fn partition_text(t: &Term, format: Format) -> String {
    let p = t.partition();
    let mut out = String::new();
    match format {
        Format::Text => {
            let pts: Vec<String> = p.points().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "breakpoints: {}", pts.join(" "));
            for c in p.cells() {
                let _ = writeln!(out, "cell ({} {}) rep {} settles to {}", c.lo, c.hi, c.rep, t.settle(&c.rep));
            }
            for q in p.points() {
                let _ = writeln!(out, "point {q} settles to {}", t.settle(q));
            }
        }
        Format::Tsv => {
            out.push_str("kind\tlo\thi\trep\tsettled\n");
            for c in p.cells() {
                let _ = writeln!(out, "cell\t{}\t{}\t{}\t{}", c.lo, c.hi, c.rep, t.settle(&c.rep));
            }
            for q in p.points() {
                let _ = writeln!(out, "point\t{q}\t{q}\t{q}\t{}", t.settle(q));
            }
        }
    }
    out
}

fn report_text(rep: &SuiteReport, verbose: bool) -> String {
    let mut out = String::new();
    if verbose {
        for l in &rep.lines {
            let _ = writeln!(out, "{l}");
        }
    }
    let _ = writeln!(out, "{rep}");
    out
}

fn demo_text(grid: &Grid, r: &topoforce::Rat) -> String {
    let mut out = String::new();
    let g = generic(grid);
    let _ = writeln!(out, "generic real G = {g}");
    for s in Partition::new(grid.points().iter().cloned()).representatives() {
        let settled = g.settle(&s);
        let tag = if settled == grid_cut(grid, &s) { "ground cut" } else { "MISMATCH" };
        let _ = writeln!(out, "G at {s} settles to {settled} ({tag})");
    }
    let ctx = Context::with_generators(Vec::new(), Vec::new(), grid.clone());
    for sem in [Semantics::Std, Semantics::Settle] {
        for w in witnesses::check_not_ground(&ctx, sem) {
            let _ = writeln!(out, "{sem} {w}");
        }
    }
    let d = witnesses::powerset_failure_demo(r);
    let _ = writeln!(out, "power-set failure term D = {d}");
    for s in [r - int(1), r.clone(), r + frac(1, 2)] {
        let _ = writeln!(out, "D at {s} settles to {}", d.settle(&s));
    }
    out
}

/// Runs one command. `Ok(false)` means a failed check or an unforced
/// sentence; every `Err` is a usage or input error.
fn run(cli: Cli) -> Result<bool> {
    let sem = cli.sem;
    let format = cli.format;
    let ctx_path = cli.ctx.as_deref();
    let load_formula = |path: &Path, symbols: &SymbolTable| -> Result<_> {
        parse_formula_file(&read(path)?, symbols).with_context(|| path.display().to_string())
    };
    let (out, ok) = match cli.command {
        Command::Value { formula } => {
            let (symbols, ctx) = load_context(ctx_path)?;
            let phi = load_formula(&formula, &symbols)?;
            (region_text(&sem.value(&phi, &ctx), format), true)
        }
        Command::Forces { formula, open } => {
            let (symbols, ctx) = load_context(ctx_path)?;
            let phi = load_formula(&formula, &symbols)?;
            let j = parse_opens(&open).context("--open")?;
            let forced = sem.forces(&j, &phi, &ctx);
            (format!("{}\n", if forced { "forced" } else { "not forced" }), forced)
        }
        Command::Settle { term, at } => {
            let (symbols, _) = load_context(ctx_path)?;
            let t = load_term(&term, &symbols)?;
            let r = parse_rat(&at).context("--at")?;
            (format!("{}\n", t.settle(&r)), true)
        }
        Command::Partition { term } => {
            let (symbols, _) = load_context(ctx_path)?;
            (partition_text(&load_term(&term, &symbols)?, format), true)
        }
        Command::Check { suite, seed, rank, count, grid_points, verbose } => {
            let rank = rank as usize;
            let rep = match suite {
                Suite::EqualityAxioms => suites::equality_axioms(sem, seed, rank, count),
                Suite::HelpfulLemma => suites::helpful_lemma(sem, seed, count),
                Suite::SettleLemma => suites::settle_lemma(seed, rank, count),
                Suite::Witnesses => suites::witness_suite(),
                Suite::Generic => suites::generic_suite(seed, grid_points as usize),
                Suite::Reals => suites::reals_suite(seed, count),
                Suite::Heyting => suites::heyting_laws(seed, count),
                Suite::PowersetDemo => suites::powerset_demo(seed, count),
            };
            (report_text(&rep, verbose), rep.passed())
        }
        Command::Demo { grid, at } => {
            let g = parse_grid(&grid).context("--grid")?;
            let r = parse_rat(&at).context("--at")?;
            (demo_text(&g, &r), true)
        }
    };
    print!("{out}");
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
