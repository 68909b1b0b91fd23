//! Command-line front end: one subcommand per search or computation, with
//! deterministic CSV/JSON/table output.
//!
//! Exit codes: 0 on success, 1 on a runtime failure (reported on stderr),
//! 2 on invalid arguments (usage text on stderr).

mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use conductors::arith::is_prime;
use conductors::curves::{
    family_admissible, family_conductor, family_model, invariants, FamilyParams,
};
use conductors::diophantine::{
    residue_obstruction, solve_equation, two_torsion_obstructed, Equation, ObstructionKind,
    SearchBounds,
};
use conductors::existence::{almost_prime_count, hl_constant, search_conductors, setzer_prime_search};
use conductors::nonexistence::{congruence_candidates, nonexistence_search};
use conductors::quadforms::field_class_data;
use output::{Cell, Doc, Format};

#[derive(Parser)]
#[command(name = "conductors", version, about = "Searches and class-number computations for elliptic curves of prime and semiprime conductor")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Write results to this file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Worker threads for the parallel searches (default: one per CPU)
    #[arg(long, global = true, value_name = "W", value_parser = clap::value_parser!(u32).range(1..=4096))]
    workers: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search the curve family y^2 + y = x^3 + ax^2 + bx + n for prime and
    /// semiprime conductors
    Table1 {
        /// Strict bound on |a|, |b| and |n|
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(i64).range(1..=100_000))]
        bound: i64,
        /// Largest conductor kept
        #[arg(long, default_value_t = 999, value_parser = clap::value_parser!(u64).range(1..=1_000_000_000_000_000))]
        max_conductor: u64,
    },
    /// List semiprimes below the limit proven to be the conductor of no
    /// elliptic curve
    Table2 {
        /// Upper bound on N = pq
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
        /// Also write the per-candidate class-number verdicts to this file
        #[arg(long, value_name = "PATH")]
        verdicts: Option<PathBuf>,
    },
    /// List semiprimes N = pq passing the candidate congruences
    Candidates {
        /// Upper bound on N = pq
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
    },
    /// Class data of the quadratic field Q(sqrt(m))
    Classnum {
        /// Squarefree radicand, not 0 or 1
        #[arg(short, long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-1_000_000_000_000..=1_000_000_000_000))]
        m: i64,
    },
    /// Invariants and conductor of one family curve
    /// y^2 + y = x^3 + ax^2 + bx + n
    Curve {
        /// Quadratic coefficient a
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-10_000..=10_000))]
        a: i64,
        /// Linear coefficient b
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-10_000..=10_000))]
        b: i64,
        /// Constant term n
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-10_000..=10_000))]
        n: i64,
    },
    /// Bounded search of the seven exponential Diophantine equations at a
    /// prime pair (p, q)
    Dioph {
        /// First odd prime of the pair
        #[arg(long)]
        p: u64,
        /// Second odd prime of the pair
        #[arg(long)]
        q: u64,
        /// Equation number 1..7, or all
        #[arg(long, default_value = "all", value_parser = parse_eq)]
        eq: EqChoice,
        /// Largest exponent tried on p
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..=1000))]
        a_max: u32,
        /// Largest exponent tried on q
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..=1000))]
        b_max: u32,
        /// Largest |A| admitted
        #[arg(long = "A-max", default_value_t = 1_000_000, value_parser = clap::value_parser!(i64).range(0..=1_000_000_000_000))]
        a_value_max: i64,
    },
    /// Residue certificates that the seven equations have no solutions at a
    /// prime pair, in both orders
    Obstruct {
        /// First odd prime of the pair
        #[arg(long)]
        p: u64,
        /// Second odd prime of the pair
        #[arg(long)]
        q: u64,
        /// Equation number 1..7, or all
        #[arg(long, default_value = "all", value_parser = parse_eq)]
        eq: EqChoice,
    },
    /// Prime-density constant for one curve family column
    Hl {
        /// Quadratic coefficient a
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-100_000..=100_000))]
        a: i64,
        /// Linear coefficient b
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-100_000..=100_000))]
        b: i64,
        /// Truncate the Euler product at this prime bound
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..=10_000_000_000))]
        prime_limit: u64,
    },
    /// Count prime and semiprime |Delta(n)| for 0 < n <= limit in one family
    /// column
    AlmostPrime {
        /// Quadratic coefficient a
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-100_000..=100_000))]
        a: i64,
        /// Linear coefficient b
        #[arg(long, allow_negative_numbers = true, value_parser = clap::value_parser!(i64).range(-100_000..=100_000))]
        b: i64,
        /// Upper bound on n
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..=1_000_000_000))]
        limit: u64,
    },
    /// Primes of the form u^2 + 64 up to the limit
    SetzerPrimes {
        /// Upper bound on the primes kept
        #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..=1_000_000_000_000_000_000))]
        limit: u64,
    },
}

/// Either one equation or the whole family of seven.
#[derive(Debug, Clone, Copy)]
enum EqChoice {
    All,
    One(Equation),
}

impl EqChoice {
    fn list(self) -> Vec<Equation> {
        match self {
            EqChoice::All => Equation::ALL.to_vec(),
            EqChoice::One(eq) => vec![eq],
        }
    }
}

fn parse_eq(s: &str) -> Result<EqChoice, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(EqChoice::All);
    }
    s.parse::<u8>()
        .ok()
        .and_then(Equation::from_number)
        .map(EqChoice::One)
        .ok_or_else(|| format!("expected an equation number 1..7 or 'all', got '{s}'"))
}

fn main() {
    // clap itself exits with code 2 on a usage error
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .format_timestamp(None)
        .init();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err:#}");
        process::exit(1);
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build_global()
            .context("building the worker pool")?;
    }
    let doc = match &cli.command {
        Command::Table1 {
            bound,
            max_conductor,
        } => cmd_table1(*bound, *max_conductor),
        Command::Table2 { limit, verdicts } => {
            cmd_table2(*limit, verdicts.as_deref(), cli.format)?
        }
        Command::Candidates { limit } => cmd_candidates(*limit)?,
        Command::Classnum { m } => cmd_classnum(*m)?,
        Command::Curve { a, b, n } => cmd_curve(*a, *b, *n),
        Command::Dioph {
            p,
            q,
            eq,
            a_max,
            b_max,
            a_value_max,
        } => cmd_dioph(*p, *q, *eq, *a_max, *b_max, *a_value_max)?,
        Command::Obstruct { p, q, eq } => cmd_obstruct(*p, *q, *eq)?,
        Command::Hl { a, b, prime_limit } => cmd_hl(*a, *b, *prime_limit)?,
        Command::AlmostPrime { a, b, limit } => cmd_almost_prime(*a, *b, *limit)?,
        Command::SetzerPrimes { limit } => cmd_setzer_primes(*limit),
    };
    emit(&doc, cli.format, cli.output.as_deref())
}

/// Render the document and deliver it: to the output path when given, else
/// to standard output. Notes ride along on stderr for CSV, where the data
/// stream must stay clean; JSON and table embed them.
fn emit(doc: &Doc, format: Format, path: Option<&Path>) -> Result<()> {
    let text = doc.render(format);
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    if format == Format::Csv {
        for note in doc.notes() {
            eprintln!("# {note}");
        }
    }
    Ok(())
}

fn cmd_table1(bound: i64, max_conductor: u64) -> Doc {
    let m = bound - 1;
    let rows = search_conductors(-m..=m, -m..=m, -m..=m, max_conductor);
    let mut doc = Doc::new(&["a", "b", "n", "delta", "N", "p", "q"]);
    for r in rows {
        doc.push(vec![
            r.a.into(),
            r.b.into(),
            r.n.into(),
            r.delta.into(),
            r.conductor.into(),
            r.p.into(),
            // prime conductors leave the q column empty
            (r.q != 1).then_some(r.q).into(),
        ]);
    }
    doc
}

fn cmd_table2(limit: u64, verdicts_path: Option<&Path>, format: Format) -> Result<Doc> {
    let verdicts = nonexistence_search(limit)?;
    if let Some(path) = verdicts_path {
        let mut vdoc = Doc::new(&["N", "p", "q", "congruence_pass", "failing_field", "h_values"]);
        for v in &verdicts {
            // the failing field is the last one tested: the search stops at
            // the first 3-divisible class number
            let failing = (!v.nonexistent)
                .then(|| v.class_data.last().expect("a failed verdict names a field").m);
            let hs: Vec<String> = v
                .class_data
                .iter()
                .map(|f| format!("{}:{}", f.m, f.h))
                .collect();
            vdoc.push(vec![
                v.candidate.n.into(),
                v.candidate.p.into(),
                v.candidate.q.into(),
                v.congruence_pass.into(),
                failing.into(),
                hs.join(";").into(),
            ]);
        }
        emit(&vdoc, format, Some(path))?;
    }
    let mut doc = Doc::new(&["N", "p", "q"]);
    for v in verdicts.iter().filter(|v| v.nonexistent) {
        doc.push(vec![
            v.candidate.n.into(),
            v.candidate.p.into(),
            v.candidate.q.into(),
        ]);
    }
    Ok(doc)
}

fn cmd_candidates(limit: u64) -> Result<Doc> {
    let mut doc = Doc::new(&["N", "p", "q"]);
    for c in congruence_candidates(limit)? {
        doc.push(vec![c.n.into(), c.p.into(), c.q.into()]);
    }
    Ok(doc)
}

fn cmd_classnum(m: i64) -> Result<Doc> {
    let data = field_class_data(m)?;
    let mut doc = Doc::new(&["m", "d", "h", "div3"]);
    doc.push(vec![
        data.m.into(),
        data.d.into(),
        data.h.into(),
        data.divisible_by_3.into(),
    ]);
    if m > 0 {
        doc.note("h is the narrow class number; 3-divisibility matches the wide one");
    }
    Ok(doc)
}

fn cmd_curve(a: i64, b: i64, n: i64) -> Doc {
    let params = FamilyParams { a, b, n };
    let model = family_model(params);
    let inv = invariants(&model);
    let mut doc = Doc::new(&[
        "a", "b", "n", "a1", "a2", "a3", "a4", "a6", "b2", "b4", "b6", "b8", "c4", "c6", "delta",
        "admissible", "N",
    ]);
    doc.push(vec![
        a.into(),
        b.into(),
        n.into(),
        model.a1.into(),
        model.a2.into(),
        model.a3.into(),
        model.a4.into(),
        model.a6.into(),
        inv.b2.into(),
        inv.b4.into(),
        inv.b6.into(),
        inv.b8.into(),
        inv.c4.into(),
        inv.c6.into(),
        inv.delta.into(),
        family_admissible(a, b).into(),
        // empty N when the conductor is not |delta| (or delta = 0)
        family_conductor(params).into(),
    ]);
    doc
}

fn cmd_dioph(p: u64, q: u64, eq: EqChoice, a_max: u32, b_max: u32, a_value_max: i64) -> Result<Doc> {
    let bounds = SearchBounds {
        a_max,
        b_max,
        a_value_max,
    };
    let mut doc = Doc::new(&["eq", "a", "b", "A", "term_sign", "rhs_sign"]);
    for eq in eq.list() {
        for sol in solve_equation(eq, p, q, bounds)? {
            doc.push(vec![
                sol.eq.number().into(),
                sol.a.into(),
                sol.b.into(),
                sol.a_value.into(),
                sol.term_sign.into(),
                sol.rhs_sign.into(),
            ]);
        }
    }
    Ok(doc)
}

fn cmd_obstruct(p: u64, q: u64, eq: EqChoice) -> Result<Doc> {
    for r in [p, q] {
        if r == 2 || !is_prime(r as i128) {
            bail!("invalid input: {r} is not an odd prime");
        }
    }
    if p == q {
        bail!("invalid input: primes must be distinct, got {p} twice");
    }
    let mut doc = Doc::new(&["p", "q", "eq", "kind", "detail"]);
    for (p, q) in [(p, q), (q, p)] {
        for eq in eq.list() {
            let row = match residue_obstruction(eq, p, q) {
                Some(ob) => vec![
                    p.into(),
                    q.into(),
                    eq.number().into(),
                    kind_name(ob.kind).into(),
                    ob.detail.into(),
                ],
                None => vec![
                    p.into(),
                    q.into(),
                    eq.number().into(),
                    "none".into(),
                    Cell::Empty,
                ],
            };
            doc.push(row);
        }
        doc.note(format!(
            "curves of conductor pq with a rational 2-torsion point ruled out at (p, q) = ({p}, {q}): {}",
            two_torsion_obstructed(p, q)
        ));
    }
    Ok(doc)
}

fn kind_name(kind: ObstructionKind) -> &'static str {
    match kind {
        ObstructionKind::Mod3 => "mod3",
        ObstructionKind::Mod16Factorization => "mod16-factorization",
        ObstructionKind::GaussianPrime => "gaussian-prime",
        ObstructionKind::Mod3Mod5 => "mod3-mod5",
    }
}

fn cmd_hl(a: i64, b: i64, prime_limit: u64) -> Result<Doc> {
    let est = hl_constant(a, b, prime_limit)?;
    let mut doc = Doc::new(&["a", "b", "prime_cutoff", "constant"]);
    doc.push(vec![
        est.a.into(),
        est.b.into(),
        est.prime_cutoff.into(),
        est.constant.into(),
    ]);
    doc.note(
        "the Euler product converges only conditionally; the constant drifts slowly with the prime cutoff",
    );
    Ok(doc)
}

fn cmd_almost_prime(a: i64, b: i64, limit: u64) -> Result<Doc> {
    let (primes, semiprimes) = almost_prime_count(a, b, limit)?;
    let mut doc = Doc::new(&["a", "b", "limit", "primes", "semiprimes"]);
    doc.push(vec![
        a.into(),
        b.into(),
        limit.into(),
        primes.into(),
        semiprimes.into(),
    ]);
    Ok(doc)
}

fn cmd_setzer_primes(limit: u64) -> Doc {
    let mut doc = Doc::new(&["u", "p"]);
    for hit in setzer_prime_search(limit) {
        doc.push(vec![hit.u.into(), hit.p.into()]);
    }
    doc
}
