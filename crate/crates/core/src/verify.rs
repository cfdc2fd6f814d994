//! Fixture corpus runner: each line `id: query  # expect: summary` is
//! parsed, executed and compared verbatim with the expected summary.

use serde::Serialize;

use crate::dsl::{parse_query, Diagnostic, Severity};
use crate::error::Error;
use crate::monoid::Budget;
use crate::query::{error_summary, Query};

/// The built-in corpus of worked examples.
pub const EMBEDDED_FIXTURES: &str = include_str!("fixtures.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub line: usize,
    pub query: Query,
    pub expect: String,
}

/// Parses a fixture file. Blank lines and `#` comment lines are skipped;
/// any malformed line yields a diagnostic with its line number.
pub fn parse_fixtures(text: &str) -> Result<Vec<Fixture>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err =
            |column: usize, message: String| Diagnostic { severity: Severity::Error, message, line, column, span: 1 };
        let Some((body, expect)) = raw.split_once("# expect:") else {
            diags.push(err(1, "missing `# expect:` annotation".into()));
            continue;
        };
        let Some((id, query_text)) = body.split_once(':') else {
            diags.push(err(1, "missing `id:` prefix".into()));
            continue;
        };
        let offset = id.chars().count() + 1;
        match parse_query(query_text) {
            Ok(query) => {
                out.push(Fixture { id: id.trim().to_string(), line, query, expect: expect.trim().to_string() })
            }
            Err(Error::Parse(ds)) => diags.extend(ds.into_iter().map(|d| Diagnostic {
                line,
                column: if d.line == 1 { d.column + offset } else { d.column },
                ..d
            })),
            Err(e) => diags.push(err(1, e.to_string())),
        }
    }
    if diags.is_empty() {
        Ok(out)
    } else {
        Err(diags)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub id: String,
    pub query: String,
    pub expectation: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
    pub passed: usize,
    pub failed: usize,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// The summary a query produces: its outcome summary, or `error <kind>`.
pub fn observe(query: &Query, budget: &Budget, seed: u64) -> String {
    match query.execute(budget, seed) {
        Ok(o) => o.summary,
        Err(e) => error_summary(&e),
    }
}

pub fn run_fixtures(fixtures: &[Fixture], budget: &Budget, seed: u64) -> FixtureReport {
    let results: Vec<FixtureResult> = fixtures
        .iter()
        .map(|f| {
            let observed = observe(&f.query, budget, seed);
            FixtureResult {
                id: f.id.clone(),
                query: f.query.to_string(),
                expectation: f.expect.clone(),
                pass: observed == f.expect,
                observed,
            }
        })
        .collect();
    let passed = results.iter().filter(|r| r.pass).count();
    FixtureReport { failed: results.len() - passed, passed, results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_parse() {
        let fs = parse_fixtures(EMBEDDED_FIXTURES).unwrap();
        assert!(fs.len() > 60);
        let mut ids: Vec<&str> = fs.iter().map(|f| f.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), fs.len(), "fixture ids are unique");
    }

    #[test]
    fn malformed_lines_are_reported() {
        let ds = parse_fixtures("a: contains N<2,3> 1\nb: contains N<2,,3> 1 # expect: no\n").unwrap_err();
        assert_eq!(ds.len(), 2);
        assert_eq!((ds[1].line, ds[1].column), (2, 17));
    }
}
