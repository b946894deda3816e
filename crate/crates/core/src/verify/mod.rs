//! Machine checks of the algebra relations and of the module structure.
//!
//! Every check returns a [`VerificationReport`]; a failing report always
//! carries a [`Witness`]. Errors are reserved for unsupported parameters and
//! under-truncation.

mod boundary;
mod closed_forms;
mod kernels;
mod relations;
mod stabilizer;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{GradedBasis, Params};
use crate::operators::EntryDifference;
use crate::rational::{self, Q};

pub use boundary::check_boundary_vanishing;
pub use closed_forms::{
    appendix_b_closed_forms, appendix_b_kernel_y_basis, check_appendix_b_kernel_y, closed_form_e,
    closed_form_f, closed_form_x, closed_form_y, KernelYVector,
};
pub use kernels::{
    check_euler, check_kernel_y, check_lowest_weights, check_singular_vectors,
    finite_part_character, graded_kernel, kernel_y, lowest_weight_decomposition, singular_vectors,
    GradedKernelSummary, KernelVector, LowestWeightVector,
};
pub use relations::{
    check_commutator, check_sl2_and_casimir, check_weyl_relation, compare_operators,
};
pub use stabilizer::{verify_stabilizer, verify_stabilizer_with, LaurentPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A concrete counterexample.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    pub note: String,
}

impl Witness {
    pub fn at_degree(degree: i64) -> Self {
        Witness {
            degree: Some(degree),
            ..Default::default()
        }
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn expected(mut self, v: impl Into<String>) -> Self {
        self.expected = Some(v.into());
        self
    }

    pub fn actual(mut self, v: impl Into<String>) -> Self {
        self.actual = Some(v.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    /// Witness for a differing matrix entry, labelled `source -> target`.
    pub fn from_entry(diff: &EntryDifference, basis: &GradedBasis, shift: i64, what: &str) -> Self {
        let d = diff.degree as i64;
        let source = basis.stratum(d)[diff.col].to_string();
        let target = basis.stratum(d + shift)[diff.row].to_string();
        Witness::at_degree(d)
            .labels(vec![source, target])
            .expected(rational::to_string(&diff.expected))
            .actual(rational::to_string(&diff.actual))
            .note(format!("{what}: entry differs"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub n: usize,
    pub k: usize,
    pub max_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    pub params: ReportParams,
    pub status: Status,
    pub checks: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, p: &Params, max_degree: usize) -> Self {
        VerificationReport {
            claim: claim.into(),
            params: ReportParams {
                n: p.n(),
                k: p.k(),
                max_degree,
            },
            status: Status::Pass,
            checks: 0,
            witness: None,
            facts: BTreeMap::new(),
        }
    }

    pub fn check(&mut self) {
        self.checks += 1;
    }

    pub fn fact(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.facts.insert(key.into(), value.into());
    }

    pub fn fail(mut self, witness: Witness) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Folds `other` into `self`, keeping the first failure.
    pub fn absorb(mut self, other: VerificationReport) -> Self {
        self.checks += other.checks;
        for (key, value) in &other.facts {
            self.facts
                .insert(format!("{}.{key}", other.claim), value.clone());
        }
        if self.passed() && !other.passed() {
            self.status = Status::Fail;
            let mut w = other.witness.expect("failed report has a witness");
            w.note = format!("{}: {}", other.claim, w.note);
            self.witness = Some(w);
        }
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} (n={}, k={}, D={}, {} checks)",
            self.claim, self.params.n, self.params.k, self.params.max_degree, self.checks
        )?;
        if let Some(w) = &self.witness {
            write!(f, ": {}", w.note)?;
            if let Some(d) = w.degree {
                write!(f, " at degree {d}")?;
            }
            if !w.labels.is_empty() {
                write!(f, " [{}]", w.labels.join(" -> "))?;
            }
            if let (Some(e), Some(a)) = (&w.expected, &w.actual) {
                write!(f, " expected {e}, got {a}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Weyl,
    Sl2,
    Singular,
    KernelY,
    AppendixB,
    Stabilizer,
    Euler,
    Oracle,
    Boundary,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Weyl,
        Suite::Sl2,
        Suite::Singular,
        Suite::KernelY,
        Suite::AppendixB,
        Suite::Stabilizer,
        Suite::Euler,
        Suite::Oracle,
        Suite::Boundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::Sl2 => "sl2",
            Suite::Singular => "singular",
            Suite::KernelY => "kernel-y",
            Suite::AppendixB => "appendix-b",
            Suite::Stabilizer => "stabilizer",
            Suite::Euler => "euler",
            Suite::Oracle => "oracle",
            Suite::Boundary => "boundary",
            Suite::All => "all",
        }
    }

    fn rank_two_only(self) -> bool {
        matches!(self, Suite::Sl2 | Suite::AppendixB)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub suite: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    pub skipped: Vec<Skipped>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }
}

fn rank_two_ell(p: &Params) -> Result<usize> {
    if p.n() != 2 || p.k().is_multiple_of(2) {
        return Err(Error::Unsupported {
            n: p.n(),
            k: p.k(),
            reason: "this suite needs n = 2 and odd k".into(),
        });
    }
    Ok((p.k() - 1) / 2)
}

fn run_one(suite: Suite, p: &Params, d: usize) -> Result<Vec<VerificationReport>> {
    Ok(match suite {
        Suite::Weyl => vec![check_weyl_relation(p, d)?],
        Suite::Sl2 => {
            rank_two_ell(p)?;
            vec![check_sl2_and_casimir(p, d)?, check_lowest_weights(p, d)?]
        }
        Suite::Singular => vec![check_singular_vectors(p, d)?],
        Suite::KernelY => vec![check_kernel_y(p, d)?],
        Suite::AppendixB => {
            let ell = rank_two_ell(p)?;
            vec![
                appendix_b_closed_forms(ell, d)?,
                check_appendix_b_kernel_y(ell)?,
            ]
        }
        Suite::Stabilizer => vec![verify_stabilizer(p)?],
        Suite::Euler => vec![check_euler(p, d)?],
        Suite::Oracle => vec![crate::oracle::compare_with_fixed_points(p, d)?],
        Suite::Boundary => vec![check_boundary_vanishing(p, d)?],
        Suite::All => unreachable!("expanded by run_suite"),
    })
}

/// Runs one suite, or every suite for [`Suite::All`]. Under `All`, rank-two
/// suites are skipped (and listed) when `(n, k)` is not `(2, odd)`.
pub fn run_suite(suite: Suite, p: &Params, max_degree: usize) -> Result<SuiteOutcome> {
    p.require_coprime()?;
    let mut outcome = SuiteOutcome {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    let list: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    for s in list {
        if suite == Suite::All && s.rank_two_only() && rank_two_ell(p).is_err() {
            outcome.skipped.push(Skipped {
                suite: s.name().into(),
                reason: "needs n = 2 and odd k".into(),
            });
            continue;
        }
        outcome.reports.extend(run_one(s, p, max_degree)?);
    }
    Ok(outcome)
}

pub(crate) fn q_string(q: &Q) -> String {
    rational::to_string(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn absorb_keeps_first_failure() {
        let p = Params::new(2, 3).unwrap();
        let mut a = VerificationReport::new("a", &p, 1);
        a.check();
        let b = VerificationReport::new("b", &p, 1).fail(Witness::at_degree(3).note("boom"));
        let c = VerificationReport::new("c", &p, 1).fail(Witness::at_degree(4).note("later"));
        let merged = a.absorb(b).absorb(c);
        assert!(!merged.passed());
        let w = merged.witness.unwrap();
        assert_eq!((w.degree, w.note.as_str()), (Some(3), "b: boom"));
    }

    #[test]
    fn all_skips_rank_two_suites_for_three_four() {
        let out = run_suite(Suite::All, &Params::new(3, 4).unwrap(), 9).unwrap();
        assert!(
            out.passed(),
            "{:?}",
            out.reports
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
        );
        let skipped: Vec<_> = out.skipped.iter().map(|s| s.suite.as_str()).collect();
        assert_eq!(skipped, ["sl2", "appendix-b"]);
    }

    #[test]
    fn rank_two_suites_reject_other_ranks() {
        let p = Params::new(3, 4).unwrap();
        assert!(matches!(
            run_suite(Suite::Sl2, &p, 6),
            Err(Error::Unsupported { .. })
        ));
        assert!(matches!(
            run_suite(Suite::Weyl, &Params::new(2, 4).unwrap(), 6),
            Err(Error::Unsupported { .. })
        ));
    }
}
