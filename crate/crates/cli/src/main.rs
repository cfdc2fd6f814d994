use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use monofact::deciders::Property;
use monofact::dsl::{self, Parsed, SpecText};
use monofact::query::{Outcome, OutcomeStatus, Query, QueryResult};
use monofact::verify::{parse_fixtures, run_fixtures, FixtureReport, EMBEDDED_FIXTURES};
use monofact::{Budget, Error, MonoidSpec};

const EXIT_FAILS: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_DEFECT: u8 = 70;

/// Factorization invariants of commutative monoids.
#[derive(Parser, Debug)]
#[command(name = "monofact", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print one JSON object instead of a summary line.
    #[arg(long, global = true)]
    json: bool,
    /// Search-tree node cap.
    #[arg(long, global = true, value_name = "N")]
    budget_nodes: Option<u64>,
    /// Largest denominator tried by rational searches.
    #[arg(long, global = true, value_name = "N")]
    budget_denom: Option<u64>,
    /// Largest coordinate tried by lattice-region searches.
    #[arg(long, global = true, value_name = "N")]
    budget_coord: Option<i64>,
    /// Cap on the number of results returned.
    #[arg(long, global = true, value_name = "N")]
    budget_results: Option<usize>,
    /// Seed for sampled verification reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report wall-clock time in `elapsed_ms` (off by default so output is reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

impl Global {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(n) = self.budget_nodes {
            b = b.with_nodes(n);
        }
        if let Some(d) = self.budget_denom {
            b = b.with_denominator(d);
        }
        if let Some(c) = self.budget_coord {
            b = b.with_coordinate(c);
        }
        if let Some(r) = self.budget_results {
            b = b.with_results(r);
        }
        b
    }
}

#[derive(Args, Debug)]
struct SpecElem {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    elem: String,
}

#[derive(Args, Debug)]
struct SpecOnly {
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Membership test.
    Contains(SpecElem),
    /// `a` divides `b` in the monoid.
    Divides {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Unit test.
    Unit(SpecElem),
    /// Atom test.
    Atom(SpecElem),
    /// Atoms inside a bounded region.
    Atoms {
        #[arg(long)]
        spec: String,
        /// Denominator and coordinate cap of the region.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Factorizations of an element.
    Factorize {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        elem: String,
        #[arg(long)]
        exact_len: Option<u64>,
        #[arg(long)]
        max_results: Option<usize>,
    },
    /// Length set of an element.
    Lengths(SpecElem),
    /// Decide a factorization property (exit 1 when it fails, 2 when unknown).
    Decide {
        #[arg(long)]
        spec: String,
        #[arg(long, value_parser = ["atomic", "accp", "bfm", "ffm", "lffm", "hfm", "lfm"])]
        property: String,
    },
    /// All seven property verdicts and their consistency.
    Audit(SpecOnly),
    /// Grothendieck group.
    Gp(SpecOnly),
    /// Group of units.
    Units(SpecOnly),
    /// Whether SUB has the same Grothendieck group as AMBIENT.
    Undermonoid {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        sub: String,
    },
    /// Constructions with bounded verification reports.
    #[command(subcommand)]
    Construct(Construct),
    /// Componentwise-order utilities on points of N0^r.
    Dickson {
        #[arg(value_parser = ["min", "chain"])]
        mode: String,
        /// A file of points, or the points inline: `(1,2) (2,1)`.
        #[arg(long)]
        points: String,
    },
    /// Classify an integer in the Hilbert monoid 4N0+1.
    Hilbert {
        #[arg(value_parser = ["classify"])]
        mode: String,
        n: u64,
    },
    /// Run one DSL query line.
    Query { text: String },
    /// Parse DSL text and print its canonical form.
    Parse { text: String },
    /// Run the fixture corpus of worked examples.
    VerifyPaper {
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Run this fixture file instead of the embedded corpus.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// SUB united with the elements of AMBIENT that do not divide B.
    Union {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        b: String,
    },
    /// BASE + N0 (2B + U).
    Adjoin {
        #[arg(long)]
        base: String,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Block sums along a chain (1-based index pairs).
    Blocks {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        chain: String,
        #[arg(long)]
        pairs: String,
    },
    /// The corner-monoid embedding (m,n) -> p^m q^n.
    Embed {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        elem: String,
    },
}

/// A failure to turn arguments into a query.
enum Failure {
    Usage(String),
    Parse(Vec<String>),
}

fn located(origin: &str, e: Error) -> Failure {
    match e {
        Error::Parse(ds) => Failure::Parse(ds.iter().map(|d| format!("{origin}: {d}")).collect()),
        e => Failure::Usage(format!("{origin}: {e}")),
    }
}

fn spec_arg(name: &str, text: &str) -> Result<MonoidSpec, Failure> {
    dsl::parse_spec(text).map_err(|e| located(name, e))
}

fn elem_arg(name: &str, spec: &MonoidSpec, text: &str) -> Result<monofact::Element, Failure> {
    dsl::parse_element(spec, text).map_err(|e| located(name, e))
}

fn query_from(cmd: &Command) -> Result<Query, Failure> {
    Ok(match cmd {
        Command::Contains(a) | Command::Unit(a) | Command::Atom(a) | Command::Lengths(a) => {
            let spec = spec_arg("--spec", &a.spec)?;
            let x = elem_arg("--elem", &spec, &a.elem)?;
            match cmd {
                Command::Contains(_) => Query::Contains { spec, x },
                Command::Unit(_) => Query::Unit { spec, x },
                Command::Atom(_) => Query::Atom { spec, x },
                _ => Query::Lengths { spec, x },
            }
        }
        Command::Divides { spec, a, b } => {
            let spec = spec_arg("--spec", spec)?;
            let a = elem_arg("--a", &spec, a)?;
            let b = elem_arg("--b", &spec, b)?;
            Query::Divides { spec, a, b }
        }
        Command::Atoms { spec, bound } => Query::Atoms { spec: spec_arg("--spec", spec)?, bound: *bound },
        Command::Factorize { spec, elem, exact_len, max_results } => {
            let spec = spec_arg("--spec", spec)?;
            let x = elem_arg("--elem", &spec, elem)?;
            Query::Factorize { spec, x, exact_length: *exact_len, max_results: *max_results }
        }
        Command::Decide { spec, property } => {
            let property: Property = property.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            Query::Decide { spec: spec_arg("--spec", spec)?, property }
        }
        Command::Audit(a) => Query::Audit { spec: spec_arg("--spec", &a.spec)? },
        Command::Gp(a) => Query::Gp { spec: spec_arg("--spec", &a.spec)? },
        Command::Units(a) => Query::Units { spec: spec_arg("--spec", &a.spec)? },
        Command::Undermonoid { ambient, sub } => {
            Query::Undermonoid { ambient: spec_arg("--ambient", ambient)?, sub: spec_arg("--sub", sub)? }
        }
        Command::Construct(c) => match c {
            Construct::Union { ambient, sub, b } => {
                let ambient = spec_arg("--ambient", ambient)?;
                let sub = spec_arg("--sub", sub)?;
                let b = elem_arg("--b", &sub, b)?;
                Query::Union { ambient, sub, b }
            }
            Construct::Adjoin { base, b, u } => {
                // reuse the query grammar, which knows how to read `u`
                let text = format!("adjoin {base} {b} {u}");
                dsl::parse_query(&text).map_err(|e| located("construct adjoin", e))?
            }
            Construct::Blocks { spec, chain, pairs } => {
                let spec = spec_arg("--spec", spec)?;
                let chain = dsl::parse_element_list(&spec, chain).map_err(|e| located("--chain", e))?;
                let pairs = dsl::parse_pairs(pairs).map_err(|e| located("--pairs", e))?;
                Query::Blocks { spec, chain, pairs }
            }
            Construct::Embed { p, q, elem } => {
                let corner = MonoidSpec::corner_n2();
                Query::Embed { p: *p, q: *q, x: elem_arg("--elem", &corner, elem)? }
            }
        },
        Command::Dickson { mode, points } => {
            let path = std::path::Path::new(points);
            let (origin, text) = if path.is_file() {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{points}: {e}")))?;
                (points.clone(), text)
            } else {
                ("--points".to_string(), points.clone())
            };
            let points = dsl::parse_points(&text).map_err(|e| located(&origin, e))?;
            if mode == "min" {
                Query::Minimal { points }
            } else {
                Query::Chain { points }
            }
        }
        Command::Hilbert { n, .. } => Query::Hilbert { n: *n },
        Command::Query { text } => dsl::parse_query(text).map_err(|e| located("query", e))?,
        Command::Parse { .. } | Command::VerifyPaper { .. } => unreachable!("handled before query construction"),
    })
}

#[derive(Serialize)]
struct Flags {
    status: OutcomeStatus,
    summary: String,
    /// Present for enumerations: whether the listed set is complete.
    exhaustive: Option<bool>,
}

#[derive(Serialize)]
struct OutputRecord<'a, R: Serialize> {
    command: String,
    spec: Option<String>,
    result: &'a R,
    flags: Flags,
    budget: Budget,
    elapsed_ms: Option<u128>,
}

fn exhaustive_flag(result: &QueryResult) -> Option<bool> {
    match result {
        QueryResult::Atoms(a) => Some(a.exhaustive),
        QueryResult::Factorizations(f) => Some(f.exhaustive),
        QueryResult::Lengths(l) => Some(l.is_exact()),
        _ => None,
    }
}

fn exit_for(status: OutcomeStatus) -> u8 {
    match status {
        OutcomeStatus::Ok => 0,
        OutcomeStatus::Fails => EXIT_FAILS,
        OutcomeStatus::Unknown => EXIT_UNKNOWN,
        OutcomeStatus::Defect => EXIT_DEFECT,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), u8> {
    match serde_json::to_string(value) {
        Ok(s) => {
            println!("{s}");
            Ok(())
        }
        Err(e) => {
            eprintln!("internal error: cannot serialize output: {e}");
            Err(EXIT_DEFECT)
        }
    }
}

fn run_query(global: &Global, query: &Query) -> u8 {
    let budget = global.budget();
    let start = Instant::now();
    let outcome: Outcome = match query.execute(&budget, global.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return if matches!(e, Error::Parse(_)) { EXIT_PARSE } else { EXIT_USAGE };
        }
    };
    let elapsed_ms = global.timing.then(|| start.elapsed().as_millis());
    let code = exit_for(outcome.status);
    if global.json {
        let record = OutputRecord {
            command: query.to_string(),
            spec: query.spec().map(ToString::to_string),
            result: &outcome.result,
            flags: Flags {
                status: outcome.status,
                summary: outcome.summary.clone(),
                exhaustive: exhaustive_flag(&outcome.result),
            },
            budget,
            elapsed_ms,
        };
        if let Err(c) = print_json(&record) {
            return c;
        }
    } else {
        println!("{}", outcome.summary);
        if let Some(ms) = elapsed_ms {
            println!("elapsed: {ms} ms");
        }
    }
    code
}

fn run_parse(global: &Global, text: &str) -> u8 {
    match dsl::parse(&SpecText::new(text, "<arg>")) {
        Ok(parsed) => {
            let rendered = match &parsed {
                Parsed::Spec(s) => s.to_string(),
                Parsed::Query(q) => q.to_string(),
                Parsed::Literal(x) => x.to_string(),
            };
            let kind = match parsed {
                Parsed::Spec(_) => "spec",
                Parsed::Query(_) => "query",
                Parsed::Literal(_) => "element",
            };
            if global.json {
                #[derive(Serialize)]
                struct ParseResult<'a> {
                    kind: &'a str,
                    canonical: &'a str,
                }
                let result = ParseResult { kind, canonical: &rendered };
                let record = OutputRecord {
                    command: format!("parse {text}"),
                    spec: None,
                    result: &result,
                    flags: Flags { status: OutcomeStatus::Ok, summary: rendered.clone(), exhaustive: None },
                    budget: global.budget(),
                    elapsed_ms: None,
                };
                if let Err(c) = print_json(&record) {
                    return c;
                }
            } else {
                println!("{rendered}");
            }
            0
        }
        Err(diags) => {
            for d in diags {
                eprintln!("<arg>: {d}");
            }
            EXIT_PARSE
        }
    }
}

fn run_verify(global: &Global, report_path: Option<&PathBuf>, fixtures: Option<&PathBuf>) -> u8 {
    let (origin, text) = match fixtures {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => (p.display().to_string(), t),
            Err(e) => {
                eprintln!("{}: {e}", p.display());
                return EXIT_USAGE;
            }
        },
        None => ("<embedded>".to_string(), EMBEDDED_FIXTURES.to_string()),
    };
    let fixtures = match parse_fixtures(&text) {
        Ok(f) => f,
        Err(diags) => {
            for d in diags {
                eprintln!("{origin}: {d}");
            }
            return EXIT_PARSE;
        }
    };
    let budget = global.budget();
    let start = Instant::now();
    let report: FixtureReport = run_fixtures(&fixtures, &budget, global.seed);
    let elapsed_ms = global.timing.then(|| start.elapsed().as_millis());
    if let Some(path) = report_path {
        let body = match serde_json::to_string_pretty(&report) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("internal error: cannot serialize report: {e}");
                return EXIT_DEFECT;
            }
        };
        if let Err(e) = std::fs::write(path, body + "\n") {
            eprintln!("{}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let status = if report.all_passed() { OutcomeStatus::Ok } else { OutcomeStatus::Fails };
    let summary = format!("{} passed, {} failed", report.passed, report.failed);
    if global.json {
        let record = OutputRecord {
            command: "verify-paper".to_string(),
            spec: None,
            result: &report,
            flags: Flags { status, summary, exhaustive: None },
            budget,
            elapsed_ms,
        };
        if let Err(c) = print_json(&record) {
            return c;
        }
    } else {
        for r in &report.results {
            let mark = if r.pass { "PASS" } else { "FAIL" };
            if r.pass {
                println!("{mark} {}: {}", r.id, r.observed);
            } else {
                println!("{mark} {}: expected `{}`, observed `{}`", r.id, r.expectation, r.observed);
            }
        }
        println!("{summary}");
    }
    exit_for(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match &cli.command {
        Command::Parse { text } => run_parse(&cli.global, text),
        Command::VerifyPaper { report, fixtures } => run_verify(&cli.global, report.as_ref(), fixtures.as_ref()),
        cmd => match query_from(cmd) {
            Ok(q) => run_query(&cli.global, &q),
            Err(Failure::Usage(m)) => {
                eprintln!("error: {m}");
                EXIT_USAGE
            }
            Err(Failure::Parse(lines)) => {
                for l in lines {
                    eprintln!("{l}");
                }
                EXIT_PARSE
            }
        },
    };
    ExitCode::from(code)
}
