//! Queries: one DSL line, one operation, one [`Outcome`].

use std::fmt;

use serde::Serialize;

use crate::constructions::{
    adjoin_extension, block_sums, corner_embedding, hilbert_classify, undermonoid_union, AdjoinReport, HilbertClass,
    UnionReport,
};
use crate::deciders::{decide, implication_audit, is_undermonoid, AuditReport, Property, PropertyVerdict, Status};
use crate::dsl::render_query;
use crate::error::{Error, Result};
use crate::factor::{
    atoms_up_to, dickson_minimal, factorizations, is_atom, length_set, render_factorizations, AtomList,
    FactorSearchLimits, FactorSet, LengthSet,
};
use crate::monoid::{Budget, Element, GroupDesc, MonoidSpec, Tri};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Contains {
        spec: MonoidSpec,
        x: Element,
    },
    Divides {
        spec: MonoidSpec,
        a: Element,
        b: Element,
    },
    Unit {
        spec: MonoidSpec,
        x: Element,
    },
    Atom {
        spec: MonoidSpec,
        x: Element,
    },
    /// `bound` caps both denominators and coordinates of the region searched.
    Atoms {
        spec: MonoidSpec,
        bound: Option<u64>,
    },
    Factorize {
        spec: MonoidSpec,
        x: Element,
        exact_length: Option<u64>,
        max_results: Option<usize>,
    },
    Lengths {
        spec: MonoidSpec,
        x: Element,
    },
    Decide {
        spec: MonoidSpec,
        property: Property,
    },
    Audit {
        spec: MonoidSpec,
    },
    Gp {
        spec: MonoidSpec,
    },
    Units {
        spec: MonoidSpec,
    },
    Undermonoid {
        ambient: MonoidSpec,
        sub: MonoidSpec,
    },
    Union {
        ambient: MonoidSpec,
        sub: MonoidSpec,
        b: Element,
    },
    Adjoin {
        base: MonoidSpec,
        b: Element,
        u: Element,
    },
    Hilbert {
        n: u64,
    },
    Minimal {
        points: Vec<Vec<i64>>,
    },
    Chain {
        points: Vec<Vec<i64>>,
    },
    Blocks {
        spec: MonoidSpec,
        chain: Vec<Element>,
        pairs: Vec<(usize, usize)>,
    },
    Embed {
        p: u64,
        q: u64,
        x: Element,
    },
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_query(self))
    }
}

/// How an outcome maps to a process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeStatus {
    Ok,
    /// A property verdict or verification report came back negative.
    Fails,
    Unknown,
    /// An internal inconsistency (for example a failed implication audit).
    Defect,
}

#[derive(Clone, Debug, Serialize)]
pub struct TriAnswer {
    pub answer: Tri,
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertAnswer {
    pub n: u64,
    pub class: HilbertClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegerAnswer {
    /// Decimal string, so that values beyond 2^53 survive JSON readers.
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum QueryResult {
    Tri(TriAnswer),
    Atoms(AtomList),
    Factorizations(FactorSet),
    Lengths(LengthSet),
    Verdict(PropertyVerdict),
    Audit(AuditReport),
    Group(GroupDesc),
    Union(UnionReport),
    Adjoin(AdjoinReport),
    Hilbert(HilbertAnswer),
    Points(Vec<Vec<i64>>),
    Elements(Vec<Element>),
    Integer(IntegerAnswer),
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    /// One-line form used by fixture expectations.
    pub summary: String,
    pub status: OutcomeStatus,
    pub result: QueryResult,
}

fn tri_outcome(t: Tri) -> Outcome {
    Outcome {
        summary: t.to_string(),
        status: if t == Tri::Unknown { OutcomeStatus::Unknown } else { OutcomeStatus::Ok },
        result: QueryResult::Tri(TriAnswer { answer: t }),
    }
}

fn verdict_outcome(v: PropertyVerdict) -> Outcome {
    let status = match v.status {
        Status::Holds => OutcomeStatus::Ok,
        Status::Fails => OutcomeStatus::Fails,
        Status::Unknown => OutcomeStatus::Unknown,
    };
    Outcome { summary: v.summary(), status, result: QueryResult::Verdict(v) }
}

fn ok(summary: String, result: QueryResult) -> Outcome {
    Outcome { summary, status: OutcomeStatus::Ok, result }
}

fn render_elements(xs: &[Element]) -> String {
    format!("{{{}}}", xs.iter().map(Element::to_string).collect::<Vec<_>>().join(", "))
}

fn render_points(open: char, close: char, ps: &[Vec<i64>]) -> String {
    let parts: Vec<String> =
        ps.iter().map(|p| format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
    format!("{open}{}{close}", parts.join(", "))
}

fn checks_summary(checks: &[crate::constructions::Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{}={}", c.name, if c.passed { "pass" } else { "FAIL" }))
        .collect::<Vec<_>>()
        .join(" ")
}

impl Query {
    /// The spec the query is about, if any (the ambient for two-spec queries).
    pub fn spec(&self) -> Option<&MonoidSpec> {
        match self {
            Query::Contains { spec, .. }
            | Query::Divides { spec, .. }
            | Query::Unit { spec, .. }
            | Query::Atom { spec, .. }
            | Query::Atoms { spec, .. }
            | Query::Factorize { spec, .. }
            | Query::Lengths { spec, .. }
            | Query::Decide { spec, .. }
            | Query::Audit { spec }
            | Query::Gp { spec }
            | Query::Units { spec }
            | Query::Blocks { spec, .. } => Some(spec),
            Query::Undermonoid { ambient, .. } | Query::Union { ambient, .. } => Some(ambient),
            Query::Adjoin { base, .. } => Some(base),
            Query::Hilbert { .. } | Query::Minimal { .. } | Query::Chain { .. } | Query::Embed { .. } => None,
        }
    }

    /// Command-line arguments (after the program name) that run this query.
    pub fn to_argv(&self) -> Vec<String> {
        let s = |x: &dyn fmt::Display| x.to_string();
        let mut v: Vec<String> = Vec::new();
        let mut push = |xs: &[&str]| v.extend(xs.iter().map(|x| x.to_string()));
        match self {
            Query::Contains { spec, x } => push(&["contains", "--spec", &s(spec), "--elem", &s(x)]),
            Query::Unit { spec, x } => push(&["unit", "--spec", &s(spec), "--elem", &s(x)]),
            Query::Atom { spec, x } => push(&["atom", "--spec", &s(spec), "--elem", &s(x)]),
            Query::Lengths { spec, x } => push(&["lengths", "--spec", &s(spec), "--elem", &s(x)]),
            Query::Divides { spec, a, b } => push(&["divides", "--spec", &s(spec), "--a", &s(a), "--b", &s(b)]),
            Query::Atoms { spec, bound } => {
                push(&["atoms", "--spec", &s(spec)]);
                if let Some(n) = bound {
                    push(&["--bound", &n.to_string()]);
                }
            }
            Query::Factorize { spec, x, exact_length, max_results } => {
                push(&["factorize", "--spec", &s(spec), "--elem", &s(x)]);
                if let Some(l) = exact_length {
                    push(&["--exact-len", &l.to_string()]);
                }
                if let Some(k) = max_results {
                    push(&["--max-results", &k.to_string()]);
                }
            }
            Query::Decide { spec, property } => push(&["decide", "--spec", &s(spec), "--property", property.as_str()]),
            Query::Audit { spec } => push(&["audit", "--spec", &s(spec)]),
            Query::Gp { spec } => push(&["gp", "--spec", &s(spec)]),
            Query::Units { spec } => push(&["units", "--spec", &s(spec)]),
            Query::Undermonoid { ambient, sub } => push(&["undermonoid", "--ambient", &s(ambient), "--sub", &s(sub)]),
            Query::Union { ambient, sub, b } => {
                push(&["construct", "union", "--ambient", &s(ambient), "--sub", &s(sub), "--b", &s(b)])
            }
            Query::Adjoin { base, b, u } => {
                push(&["construct", "adjoin", "--base", &s(base), "--b", &s(b), "--u", &s(u)])
            }
            Query::Blocks { spec, chain, pairs } => {
                let chain = format!("[{}]", chain.iter().map(Element::to_string).collect::<Vec<_>>().join(","));
                let pairs =
                    format!("[{}]", pairs.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(","));
                push(&["construct", "blocks", "--spec", &s(spec), "--chain", &chain, "--pairs", &pairs])
            }
            Query::Embed { p, q, x } => {
                push(&["construct", "embed", "--p", &p.to_string(), "--q", &q.to_string(), "--elem", &s(x)])
            }
            Query::Hilbert { n } => push(&["hilbert", "classify", &n.to_string()]),
            Query::Minimal { points } | Query::Chain { points } => {
                let which = if matches!(self, Query::Minimal { .. }) { "min" } else { "chain" };
                let text = points
                    .iter()
                    .map(|p| format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join(" ");
                push(&["dickson", which, "--points", &text])
            }
        }
        v
    }

    /// Runs the query. `seed` only affects sampled verification reports.
    pub fn execute(&self, budget: &Budget, seed: u64) -> Result<Outcome> {
        Ok(match self {
            Query::Contains { spec, x } => tri_outcome(spec.contains(x, budget)?),
            Query::Divides { spec, a, b } => tri_outcome(spec.divides(a, b, budget)?),
            Query::Unit { spec, x } => tri_outcome(spec.is_unit(x, budget)?),
            Query::Atom { spec, x } => tri_outcome(is_atom(spec, x, budget)?),
            Query::Atoms { spec, bound } => {
                let region = match bound {
                    Some(n) => budget.with_denominator(*n).with_coordinate((*n).min(i64::MAX as u64) as i64),
                    None => *budget,
                };
                let list = atoms_up_to(spec, &region)?;
                let tag = if list.exhaustive { "exhaustive" } else { "truncated" };
                ok(format!("{} {tag}", render_elements(&list.atoms)), QueryResult::Atoms(list))
            }
            Query::Factorize { spec, x, exact_length, max_results } => {
                let mut limits = FactorSearchLimits::from_budget(budget);
                if let Some(l) = exact_length {
                    limits = limits.with_exact_length(*l);
                }
                if let Some(k) = max_results {
                    limits = limits.with_max_results(*k);
                }
                let fs = factorizations(spec, x, &limits, budget)?;
                let tag = if fs.exhaustive { "exhaustive" } else { "truncated" };
                ok(format!("{} {tag}", render_factorizations(&fs.factorizations)), QueryResult::Factorizations(fs))
            }
            Query::Lengths { spec, x } => {
                let ls = length_set(spec, x, budget)?;
                ok(ls.to_string(), QueryResult::Lengths(ls))
            }
            Query::Decide { spec, property } => verdict_outcome(decide(spec, *property, budget)?),
            Query::Audit { spec } => {
                let report = implication_audit(spec, budget)?;
                let status = if report.consistent { OutcomeStatus::Ok } else { OutcomeStatus::Defect };
                Outcome { summary: report.summary(), status, result: QueryResult::Audit(report) }
            }
            Query::Gp { spec } => {
                let g = spec.grothendieck()?;
                ok(g.to_string(), QueryResult::Group(g))
            }
            Query::Units { spec } => {
                let g = spec.units_group()?;
                ok(g.to_string(), QueryResult::Group(g))
            }
            Query::Undermonoid { ambient, sub } => verdict_outcome(is_undermonoid(ambient, sub, budget)?),
            Query::Union { ambient, sub, b } => {
                let r = undermonoid_union(ambient, sub, b, budget, seed)?;
                let status = if r.all_passed() { OutcomeStatus::Ok } else { OutcomeStatus::Fails };
                Outcome { summary: checks_summary(&r.checks), status, result: QueryResult::Union(r) }
            }
            Query::Adjoin { base, b, u } => {
                let r = adjoin_extension(base, b, u, budget)?;
                let status = if r.all_passed() { OutcomeStatus::Ok } else { OutcomeStatus::Fails };
                let mut summary = checks_summary(&r.checks);
                if r.conditions.warning.is_some() {
                    summary.push_str(" warning");
                }
                Outcome { summary, status, result: QueryResult::Adjoin(r) }
            }
            Query::Hilbert { n } => {
                let class = hilbert_classify(*n);
                ok(class.to_string(), QueryResult::Hilbert(HilbertAnswer { n: *n, class }))
            }
            Query::Minimal { points } => {
                let m = dickson_minimal(points)?;
                ok(render_points('{', '}', &m), QueryResult::Points(m))
            }
            Query::Chain { points } => {
                let c = crate::factor::longest_chain(points)?;
                ok(render_points('[', ']', &c), QueryResult::Points(c))
            }
            Query::Blocks { spec, chain, pairs } => {
                let sums = block_sums(spec, chain, pairs)?;
                let text = format!("[{}]", sums.iter().map(Element::to_string).collect::<Vec<_>>().join(", "));
                ok(text, QueryResult::Elements(sums))
            }
            Query::Embed { p, q, x } => {
                let v = corner_embedding(*p, *q, x)?;
                ok(v.to_string(), QueryResult::Integer(IntegerAnswer { value: v.to_string() }))
            }
        })
    }
}

/// Summary used for a query that returned an error: `error <kind>`.
pub fn error_summary(e: &Error) -> String {
    let kind = match e {
        Error::Input(_) => "input",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Overflow(_) => "overflow",
        Error::Parse(_) => "parse",
    };
    format!("error {kind}")
}
