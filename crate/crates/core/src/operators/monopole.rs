use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::bracket::tangent_euler;
use super::dress::DressPolynomial;
use super::graded::{natural_domain, GradedOperator};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::{admissible_entries, weights_of, Cocharacter, GradedBasis, Params};
use crate::rational::{int, Q};

/// `±λ_r = ±(1, ..., 1, 0, ..., 0)` with `r` nonzero entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinusculeCoweight {
    sign: i64,
    r: usize,
    n: usize,
}

impl MinusculeCoweight {
    pub fn new(sign: i64, r: usize, n: usize) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!(
                "sign must be ±1, got {sign}"
            )));
        }
        if r == 0 || r > n {
            return Err(Error::InvalidArgument(format!(
                "minuscule coweight needs 1 <= r <= n = {n}, got r = {r}"
            )));
        }
        Ok(MinusculeCoweight { sign, r, n })
    }

    pub fn raising(r: usize, n: usize) -> Result<Self> {
        Self::new(1, r, n)
    }

    pub fn lowering(r: usize, n: usize) -> Result<Self> {
        Self::new(-1, r, n)
    }

    /// Recognizes any Weyl conjugate of `±λ_r`.
    pub fn from_vector(v: &[i64]) -> Result<Self> {
        let plus = v.iter().filter(|&&x| x == 1).count();
        let minus = v.iter().filter(|&&x| x == -1).count();
        let zeros = v.iter().filter(|&&x| x == 0).count();
        match (plus, minus) {
            (r, 0) if r > 0 && r + zeros == v.len() => Self::raising(r, v.len()),
            (0, r) if r > 0 && r + zeros == v.len() => Self::lowering(r, v.len()),
            _ => Err(Error::InvalidArgument(format!(
                "{v:?} is not conjugate to ±(1,...,1,0,...,0)"
            ))),
        }
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree change `±r` of the associated operator.
    pub fn shift(&self) -> i64 {
        self.sign * self.r as i64
    }

    pub fn vector(&self) -> Vec<i64> {
        (0..self.n)
            .map(|a| if a < self.r { self.sign } else { 0 })
            .collect()
    }
}

/// Distinct permutations of `lambda`, in lexicographic order.
pub fn weyl_orbit(lambda: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = lambda.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next_permutation over the multiset
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let pivot = i - 1;
        let j = (i..cur.len())
            .rev()
            .find(|&j| cur[j] > cur[pivot])
            .expect("successor exists");
        cur.swap(pivot, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// A permutation `π` with `target[π(i)] = lambda[i]`, matching equal entries in order.
fn weyl_permutation(lambda: &[i64], target: &[i64]) -> Vec<usize> {
    let mut used = vec![false; target.len()];
    lambda
        .iter()
        .map(|l| {
            let j = (0..target.len())
                .find(|&j| !used[j] && target[j] == *l)
                .expect("target is a permutation of lambda");
            used[j] = true;
            j
        })
        .collect()
}

/// One term of the localization formula for `[R_{≤λ}][f] |A⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonopoleCoefficient {
    pub target: Cocharacter,
    pub numerator: Q,
    pub denominator: Q,
    pub dressing: Q,
    pub value: Q,
}

/// Coefficient of `|A + λ'⟩` in `[R_{≤λ}][f] |A⟩`, with every weight (numerator,
/// denominator and the dressing `w.f`) evaluated at the target `A + λ'`.
pub fn monopole_coefficient(
    source: &Cocharacter,
    orbit_element: &[i64],
    lambda: &[i64],
    f: &DressPolynomial,
    p: &Params,
) -> Result<MonopoleCoefficient> {
    let n = p.n();
    if source.len() != n || orbit_element.len() != n || lambda.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: source.len().min(orbit_element.len()).min(lambda.len()),
        });
    }
    let target = source.shifted(orbit_element);
    let phi = weights_of(target.entries(), p);
    let lp = orbit_element;

    let mut numerator = Q::one();
    for a in 0..n {
        if lp[a] < 0 {
            for alpha in 1..=-lp[a] {
                numerator *= &phi[a] - int(alpha);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if lp[a] > lp[b] {
                for beta in 1..=lp[a] - lp[b] {
                    numerator *= &phi[b] - &phi[a] + p.m() - int(beta);
                }
            }
        }
    }
    let denominator = tangent_euler(&phi, lp);
    if denominator.is_zero() {
        return Err(Error::Invariant(format!(
            "vanishing denominator at target {target} for (n, k) = ({}, {})",
            p.n(),
            p.k()
        )));
    }
    let perm = weyl_permutation(lambda, lp);
    let permuted: Vec<Q> = perm.iter().map(|&j| phi[j].clone()).collect();
    let dressing = f.evaluate(&permuted, p.m(), p.hbar());
    let value = &numerator * &dressing / &denominator;
    Ok(MonopoleCoefficient {
        target,
        numerator,
        denominator,
        dressing,
        value,
    })
}

/// Matrix of the dressed minuscule monopole `[R_{≤λ}][f]` on a truncated basis.
///
/// Orbit terms landing outside the fixed-point set must have a vanishing
/// numerator; anything else is reported as an invariant violation.
pub fn minuscule_monopole(
    lambda: &MinusculeCoweight,
    f: &DressPolynomial,
    basis: &Arc<GradedBasis>,
) -> Result<GradedOperator> {
    let p = basis.params();
    p.require_coprime()?;
    if lambda.n() != p.n() || f.n() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            actual: if lambda.n() != p.n() {
                lambda.n()
            } else {
                f.n()
            },
        });
    }
    let lam = lambda.vector();
    if !f.is_invariant_under_stabilizer(&lam) {
        return Err(Error::InvalidArgument(
            "dressing is not invariant under the stabilizer of λ".into(),
        ));
    }
    let orbit = weyl_orbit(&lam);
    let shift = lambda.shift();
    let degrees: Vec<usize> = natural_domain(basis.max_degree(), shift).collect();
    let blocks = degrees
        .into_par_iter()
        .map(|d| {
            let sources = basis.stratum(d as i64);
            let targets = basis.stratum(d as i64 + shift);
            let mut m = SparseMatrix::zeros(targets.len(), sources.len());
            for (col, a) in sources.iter().enumerate() {
                for lp in &orbit {
                    let c = monopole_coefficient(a, lp, &lam, f, p)?;
                    if admissible_entries(c.target.entries(), p.k()) {
                        let row = targets.binary_search(&c.target).map_err(|_| {
                            Error::Invariant(format!("target {} missing from basis", c.target))
                        })?;
                        m.add_to(row, col, &c.value);
                    } else if !c.numerator.is_zero() {
                        return Err(Error::Invariant(format!(
                            "nonzero numerator {} for inadmissible target {} from {a}",
                            c.numerator, c.target
                        )));
                    }
                }
            }
            Ok((d, m))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    GradedOperator::from_blocks(basis.clone(), shift, blocks)
}

/// `E_r[f] = [R_{≤λ_r}][f]`.
pub fn operator_e(
    r: usize,
    f: &DressPolynomial,
    basis: &Arc<GradedBasis>,
) -> Result<GradedOperator> {
    let lambda = MinusculeCoweight::raising(r, basis.params().n())?;
    minuscule_monopole(&lambda, f, basis)
}

/// `F_r[f] = [R_{≤-λ_r}][f̃]` with `f̃(φ) = f(φ - ħ)`.
pub fn operator_f(
    r: usize,
    f: &DressPolynomial,
    basis: &Arc<GradedBasis>,
) -> Result<GradedOperator> {
    let lambda = MinusculeCoweight::lowering(r, basis.params().n())?;
    minuscule_monopole(&lambda, &f.shift_phi_by_hbar(), basis)
}

/// `X = E_1[1]`.
pub fn operator_x(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    operator_e(1, &DressPolynomial::one(basis.params().n()), basis)
}

/// `Y = F_1[1]`.
pub fn operator_y(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    operator_f(1, &DressPolynomial::one(basis.params().n()), basis)
}

/// `H = ħ - φ_1 - φ_2`, only for `n = 2`.
pub fn operator_h(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    let p = basis.params().clone();
    if p.n() != 2 {
        return Err(Error::Unsupported {
            n: p.n(),
            k: p.k(),
            reason: "H is only defined for n = 2".into(),
        });
    }
    p.require_coprime()?;
    Ok(GradedOperator::diagonal(basis.clone(), |a| {
        let phi = weights_of(a.entries(), &p);
        p.hbar() - &phi[0] - &phi[1]
    }))
}

/// The `sl_2` triple `E = E_2[1]`, `F = -F_2[1]`, `H` for `n = 2`.
#[derive(Debug, Clone)]
pub struct Sl2Triple {
    pub e: GradedOperator,
    pub f: GradedOperator,
    pub h: GradedOperator,
}

pub fn sl2_triple(basis: &Arc<GradedBasis>) -> Result<Sl2Triple> {
    let h = operator_h(basis)?;
    let one = DressPolynomial::one(2);
    Ok(Sl2Triple {
        e: operator_e(2, &one, basis)?,
        f: operator_f(2, &one, basis)?.scale(&int(-1)),
        h,
    })
}
