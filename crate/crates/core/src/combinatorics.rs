//! q-series bookkeeping: Gaussian binomials, the fixed-point generating
//! function, the compactified Jacobian dimension and the Betti polynomials of
//! the `(2, k)` Hilbert schemes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Params;

/// Polynomial in `q` with integer coefficients, lowest power first.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QPolynomial(Vec<i128>);

impl QPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial(coeffs)
    }

    pub fn one() -> Self {
        QPolynomial(vec![1])
    }

    pub fn monomial(c: i128, power: usize) -> Self {
        let mut v = vec![0; power + 1];
        v[power] = c;
        Self::new(v)
    }

    pub fn coefficients(&self) -> &[i128] {
        &self.0
    }

    pub fn coeff(&self, power: usize) -> i128 {
        self.0.get(power).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> i128 {
        self.0.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn truncated(&self, max_power: usize) -> Self {
        Self::new(self.0.iter().take(max_power + 1).copied().collect())
    }

    pub fn add(&self, other: &QPolynomial) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &QPolynomial) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &QPolynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplies by `1/(1 - q^step)` and keeps powers `<= max_power`.
    pub fn div_one_minus_q_pow(&self, step: usize, max_power: usize) -> Self {
        assert!(step > 0);
        let mut out = vec![0; max_power + 1];
        for i in 0..=max_power {
            out[i] = self.coeff(i) + if i >= step { out[i - step] } else { 0 };
        }
        Self::new(out)
    }
}

/// Gaussian binomial `[a choose b]_q`, built with the q-Pascal rule
/// `[a, b] = [a-1, b-1] + q^b [a-1, b]`.
pub fn qbinomial(a: usize, b: usize) -> Result<QPolynomial> {
    if b > a {
        return Err(Error::InvalidArgument(format!(
            "q-binomial needs 0 <= b <= a, got a = {a}, b = {b}"
        )));
    }
    let mut row = vec![QPolynomial::one()];
    for top in 1..=a {
        let mut next = Vec::with_capacity(top + 1);
        for j in 0..=top {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPolynomial::default()
            };
            let right = if j < top {
                QPolynomial::monomial(1, j).mul(&row[j])
            } else {
                QPolynomial::default()
            };
            next.push(left.add(&right));
        }
        row = next;
    }
    Ok(row.swap_remove(b))
}

/// Truncation of `[n-1+k choose n-1]_q / (1 - q^n)` through `q^max_degree`.
pub fn euler_series(p: &Params, max_degree: usize) -> Result<QPolynomial> {
    p.require_coprime()?;
    let num = qbinomial(p.n() - 1 + p.k(), p.n() - 1)?;
    Ok(num.div_one_minus_q_pow(p.n(), max_degree))
}

fn binomial(a: u128, b: u128) -> u128 {
    (0..b).fold(1u128, |acc, i| acc * (a - i) / (i + 1))
}

/// `C(n+k-1, n-1) / n`, the total Betti number of the compactified Jacobian.
pub fn compactified_jacobian_dim(p: &Params) -> Result<u128> {
    p.require_coprime()?;
    let n = p.n() as u128;
    let c = binomial(n + p.k() as u128 - 1, n - 1);
    if !c.is_multiple_of(n) {
        return Err(Error::Invariant(format!(
            "C({}, {}) = {c} is not divisible by n = {n}",
            n + p.k() as u128 - 1,
            n - 1
        )));
    }
    Ok(c / n)
}

/// Poincaré polynomial (in `q`, real grading) of the degree-`|m|` piece of the
/// `(2, k)` Hilbert scheme, `m <= 0`.
///
/// Odd `k = 2ℓ+1`: `P^{min(⌊|m|/2⌋, ℓ)}`. Even `k = 2ℓ`: `P^{⌊|m|/2⌋}` up to
/// `|m| = 2ℓ`, then a chain of `c = |m| - 2ℓ + 1` copies of `P^ℓ` meeting in
/// points, with `b_0 = 1` and `b_{2i} = c` for `1 <= i <= ℓ`.
pub fn betti_2k(k: usize, m: i64) -> Result<QPolynomial> {
    if m > 0 {
        return Err(Error::InvalidArgument(format!("m must be <= 0, got {m}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let abs = m.unsigned_abs() as usize;
    let ell = k / 2;
    let projective = |dim: usize| {
        QPolynomial::new(
            (0..=2 * dim)
                .map(|i| if i % 2 == 0 { 1 } else { 0 })
                .collect(),
        )
    };
    if k % 2 == 1 {
        return Ok(projective((abs / 2).min(ell)));
    }
    if abs <= 2 * ell {
        return Ok(projective(abs / 2));
    }
    let copies = (abs - 2 * ell + 1) as i128;
    let mut coeffs = vec![0; 2 * ell + 1];
    coeffs[0] = 1;
    for i in 1..=ell {
        coeffs[2 * i] = copies;
    }
    Ok(QPolynomial::new(coeffs))
}
