use serde::Serialize;
use serde_json::{json, Value};
use springer_rca::operators::GradedOperator;
use springer_rca::rational;
use springer_rca::verify::{Suite, SuiteOutcome};
use springer_rca::{Cocharacter, Params};

use crate::config::Format;

#[derive(Debug, Serialize)]
pub struct Envelope {
    params: Value,
    command: String,
    results: Value,
    version: &'static str,
}

impl Envelope {
    pub fn new(p: &Params, max_degree: usize, command: &str) -> Self {
        Envelope {
            params: json!({
                "n": p.n(),
                "k": p.k(),
                "m": rational::to_string(p.m()),
                "hbar": rational::to_string(p.hbar()),
                "max_degree": max_degree,
            }),
            command: command.into(),
            results: Value::Null,
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// A finished command: the JSON envelope plus the same data as CSV rows.
pub struct Emit {
    envelope: Envelope,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    passed: bool,
}

impl Emit {
    pub fn fixed_points(mut envelope: Envelope, strata: Vec<Vec<Cocharacter>>) -> Self {
        let mut rows = Vec::new();
        for (d, points) in strata.iter().enumerate() {
            for (i, a) in points.iter().enumerate() {
                rows.push(vec![d.to_string(), i.to_string(), a.to_string()]);
            }
        }
        envelope.results = json!({
            "counts": strata.iter().map(Vec::len).collect::<Vec<_>>(),
            "strata": strata
                .iter()
                .enumerate()
                .map(|(d, points)| json!({ "degree": d, "points": points }))
                .collect::<Vec<_>>(),
        });
        Emit {
            envelope,
            header: vec!["degree", "index", "point"],
            rows,
            passed: true,
        }
    }

    pub fn operator(mut envelope: Envelope, name: &str, op: &GradedOperator) -> Self {
        let basis = op.basis();
        let labels = |d: i64| {
            basis
                .stratum(d)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        };
        let mut rows = Vec::new();
        let blocks: Vec<Value> = op
            .blocks()
            .iter()
            .map(|(&d, m)| {
                let entries: Vec<Value> = m
                    .triples()
                    .into_iter()
                    .map(|(row, col, q)| {
                        let v = rational::to_string(q);
                        rows.push(vec![
                            d.to_string(),
                            row.to_string(),
                            col.to_string(),
                            v.clone(),
                        ]);
                        json!([row, col, v])
                    })
                    .collect();
                json!({
                    "degree": d,
                    "target_degree": d as i64 + op.shift(),
                    "rows": m.nrows(),
                    "cols": m.ncols(),
                    "sources": labels(d as i64),
                    "targets": labels(d as i64 + op.shift()),
                    "entries": entries,
                })
            })
            .collect();
        envelope.results = json!({
            "operator": name,
            "shift": op.shift(),
            "blocks": blocks,
        });
        Emit {
            envelope,
            header: vec!["degree", "row", "col", "value"],
            rows,
            passed: true,
        }
    }

    pub fn verify(mut envelope: Envelope, suite: Suite, outcome: SuiteOutcome) -> Self {
        let passed = outcome.passed();
        let rows = outcome
            .reports
            .iter()
            .map(|r| {
                let w = r.witness.clone().unwrap_or_default();
                vec![
                    r.claim.clone(),
                    if r.passed() { "pass" } else { "fail" }.into(),
                    r.checks.to_string(),
                    w.degree.map(|d| d.to_string()).unwrap_or_default(),
                    w.labels.join(" -> "),
                    w.expected.unwrap_or_default(),
                    w.actual.unwrap_or_default(),
                    w.note,
                ]
            })
            .collect();
        envelope.results = json!({
            "suite": suite.name(),
            "passed": passed,
            "reports": outcome.reports,
            "skipped": outcome.skipped,
        });
        Emit {
            envelope,
            header: vec![
                "claim", "status", "checks", "degree", "labels", "expected", "actual", "note",
            ],
            rows,
            passed,
        }
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Json => {
                let mut out =
                    serde_json::to_vec_pretty(&self.envelope).map_err(|e| e.to_string())?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(|e| e.to_string())?;
                for row in &self.rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                w.into_inner().map_err(|e| e.to_string())
            }
        }
    }
}
