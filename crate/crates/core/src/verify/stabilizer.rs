use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::model::{stabilizer_cocharacter, Params, StabilizerCocharacter};

use super::{VerificationReport, Witness};

/// Integer Laurent polynomial in `ν` and `t`, keyed by `(ν-exponent, t-exponent)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly(BTreeMap<(i64, i64), i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: i64, nu: i64, t: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((nu, t), c);
        p
    }

    fn add_term(&mut self, key: (i64, i64), c: i64) {
        let v = self.0.entry(key).or_insert(0);
        *v += c;
        if *v == 0 {
            self.0.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &LaurentPoly) -> Self {
        let mut out = self.clone();
        for (&key, &c) in &other.0 {
            out.add_term(key, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.0 {
            for (&(x, y), &d) in &other.0 {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }

    /// `t ↦ ν^e t`.
    pub fn rescale_t(&self, e: i64) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.0 {
            out.add_term((a + e * b, b), c);
        }
        out
    }

    /// `ν ↦ 1`.
    pub fn at_nu_one(&self) -> Self {
        let mut out = Self::zero();
        for (&(_, b), &c) in &self.0 {
            out.add_term((0, b), c);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(&(a, b), &c)| format!("{c}ν^{a}t^{b}"))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

type Matrix = Vec<Vec<LaurentPoly>>;

/// Companion matrix of `x^n - t^k`: `x e_i = e_{i+1}`, `x e_n = t^k e_1`.
fn companion(n: usize, k: usize) -> Matrix {
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n.saturating_sub(1) {
        m[i + 1][i] = LaurentPoly::monomial(1, 0, 0);
    }
    m[0][n - 1] = m[0][n - 1].add(&LaurentPoly::monomial(1, 0, k as i64));
    m
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(LaurentPoly::zero(), |acc, l| {
                        acc.add(&a[i][l].mul(&b[l][j]))
                    })
                })
                .collect()
        })
        .collect()
}

fn diagonal(exps: &[i64], sign: i64) -> Matrix {
    let n = exps.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::monomial(1, sign * exps[i], 0)
                    } else {
                        LaurentPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Checks `ν^f · g · γ(ν^r t) · g^{-1} = γ(t)` and `g e_1 = e_1` symbolically,
/// plus the `ν = 1` specialization, for the given cocharacter.
pub fn verify_stabilizer_with(p: &Params, c: &StabilizerCocharacter) -> Result<VerificationReport> {
    let n = p.n();
    let mut report = VerificationReport::new("stabilizer: cocharacter fixes (γ, e1)", p, 0);
    report.fact("g", format!("diag{:?}", c.diag_exponents));
    report.fact("flavor", c.flavor_exponent.to_string());
    report.fact("rotation", c.rot_exponent.to_string());
    let gamma = companion(n, p.k());
    let scaled: Matrix = gamma
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    x.rescale_t(c.rot_exponent)
                        .mul(&LaurentPoly::monomial(1, c.flavor_exponent, 0))
                })
                .collect()
        })
        .collect();
    let conj = matmul(
        &matmul(&diagonal(&c.diag_exponents, 1), &scaled),
        &diagonal(&c.diag_exponents, -1),
    );
    for (i, (got_row, want_row)) in conj.iter().zip(&gamma).enumerate() {
        for (j, (got, want)) in got_row.iter().zip(want_row).enumerate() {
            report.check();
            if got != want {
                return Ok(report.fail(
                    Witness::default()
                        .labels(vec![format!("entry ({}, {})", i + 1, j + 1)])
                        .expected(want.to_string())
                        .actual(got.to_string())
                        .note("conjugated companion matrix differs"),
                ));
            }
            report.check();
            if got.at_nu_one() != *want {
                return Ok(report.fail(
                    Witness::default()
                        .labels(vec![format!("entry ({}, {})", i + 1, j + 1)])
                        .note("ν = 1 specialization does not fix γ"),
                ));
            }
        }
    }
    report.check();
    if c.diag_exponents.first() != Some(&0) {
        return Ok(report.fail(
            Witness::default()
                .expected("ν^0")
                .actual(format!(
                    "ν^{}",
                    c.diag_exponents.first().copied().unwrap_or_default()
                ))
                .note("g e1 != e1"),
        ));
    }
    Ok(report)
}

pub fn verify_stabilizer(p: &Params) -> Result<VerificationReport> {
    verify_stabilizer_with(p, &stabilizer_cocharacter(p)?)
}
