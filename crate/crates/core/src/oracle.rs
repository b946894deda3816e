//! Brute-force count of monomial ideals in `C[[t^n, t^k]]`.
//!
//! A monomial ideal is recorded by its valuation set `Δ ⊆ Γ = ⟨n, k⟩`, which
//! must satisfy `Δ + Γ ⊆ Δ`; its colength is the size of the gap set `Γ \ Δ`.
//! Gap sets are exactly the finite down-sets of `Γ` under `s ≤ t ⇔ t - s ∈ Γ`,
//! so they can be grown one element at a time in increasing numeric order.
//!
//! Nothing here looks at cocharacters.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{enumerate_fixed_points, Params};
use crate::verify::{VerificationReport, Witness};

pub const DEFAULT_BUDGET: usize = 64;

/// The semigroup `{an + bk : a, b >= 0}` with a membership table on `[0, window]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalSemigroup {
    n: usize,
    k: usize,
    member: Vec<bool>,
}

impl NumericalSemigroup {
    pub fn new(n: usize, k: usize, window: usize) -> Result<Self> {
        if n == 0 || k == 0 || n.gcd(&k) != 1 {
            return Err(Error::not_coprime(n, k));
        }
        let mut member = vec![false; window + 1];
        member[0] = true;
        for s in 1..=window {
            member[s] = (s >= n && member[s - n]) || (s >= k && member[s - k]);
        }
        Ok(NumericalSemigroup { n, k, member })
    }

    pub fn generators(&self) -> (usize, usize) {
        (self.n, self.k)
    }

    /// Largest integer not in the semigroup, `nk - n - k` (or `-1` if none).
    pub fn frobenius(&self) -> i64 {
        (self.n * self.k) as i64 - self.n as i64 - self.k as i64
    }

    pub fn window(&self) -> usize {
        self.member.len() - 1
    }

    pub fn contains(&self, s: i64) -> bool {
        if s < 0 {
            return false;
        }
        if s > self.frobenius() {
            return true;
        }
        self.member[s as usize]
    }
}

/// `Δ = Γ \ gaps`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SemigroupIdeal {
    pub gaps: BTreeSet<usize>,
}

impl SemigroupIdeal {
    pub fn colength(&self) -> usize {
        self.gaps.len()
    }

    /// `Δ + g ⊆ Δ` for both generators, checked on every element of `Δ` below
    /// `max(gaps) + 1`; beyond that every element of `Γ` is in `Δ` anyway.
    pub fn is_stable(&self, gamma: &NumericalSemigroup) -> bool {
        let top = self.gaps.iter().next_back().map_or(0, |&g| g + 1);
        let (n, k) = gamma.generators();
        (0..=top).all(|s| {
            let in_delta = gamma.contains(s as i64) && !self.gaps.contains(&s);
            !in_delta || (!self.gaps.contains(&(s + n)) && !self.gaps.contains(&(s + k)))
        }) && self.gaps.iter().all(|&g| gamma.contains(g as i64))
    }
}

struct Search<'a> {
    gamma: &'a NumericalSemigroup,
    bound: usize,
    max_colength: usize,
}

impl Search<'_> {
    /// Extends the down-set `gaps` (largest element `last`) by larger elements.
    fn walk(&self, gaps: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        visit(gaps);
        if gaps.len() == self.max_colength {
            return;
        }
        let (n, k) = self.gamma.generators();
        let start = gaps.last().map_or(0, |&g| g + 1);
        for x in start..=self.bound {
            if !self.gamma.contains(x as i64) {
                continue;
            }
            let below_ok =
                |d: usize| x < d || !self.gamma.contains((x - d) as i64) || gaps.contains(&(x - d));
            if below_ok(n) && below_ok(k) {
                gaps.push(x);
                self.walk(gaps, visit);
                gaps.pop();
            }
        }
    }
}

fn search_for(
    n: usize,
    k: usize,
    max_colength: usize,
    budget: usize,
) -> Result<(NumericalSemigroup, usize)> {
    if max_colength > budget {
        return Err(Error::BudgetExceeded {
            requested: max_colength,
            budget,
        });
    }
    let frob = (n * k) as i64 - n as i64 - k as i64;
    // a gap g > F + mn would drag g - n, ..., g - mn (all in Γ) into the gap set too
    let bound = (frob.max(0) as usize) + max_colength * n;
    Ok((NumericalSemigroup::new(n, k, bound + n + k)?, bound))
}

/// Number of ideals of colength `d` for every `d <= max_colength`.
pub fn count_ideals_up_to(
    n: usize,
    k: usize,
    max_colength: usize,
    budget: usize,
) -> Result<Vec<u64>> {
    let (gamma, bound) = search_for(n, k, max_colength, budget)?;
    let mut counts = vec![0u64; max_colength + 1];
    counts[0] = 1;
    if max_colength == 0 {
        return Ok(counts);
    }
    let search = Search {
        gamma: &gamma,
        bound,
        max_colength,
    };
    // Every nonempty gap set contains 0; split on its second element.
    let mut seconds: Vec<Option<usize>> = vec![None];
    seconds.extend((1..=bound).filter(|&x| gamma.contains(x as i64)).map(Some));
    let partial: Vec<Vec<u64>> = seconds
        .into_par_iter()
        .map(|second| {
            let mut local = vec![0u64; max_colength + 1];
            match second {
                None => local[1] = 1,
                Some(x) => {
                    let mut gaps = vec![0];
                    let ok = |d: usize| x < d || !gamma.contains((x - d) as i64) || x == d;
                    if max_colength >= 2 && ok(n) && ok(k) {
                        gaps.push(x);
                        search.walk(&mut gaps, &mut |g| local[g.len()] += 1);
                    }
                }
            }
            local
        })
        .collect();
    for local in partial {
        for (c, l) in counts.iter_mut().zip(local) {
            *c += l;
        }
    }
    Ok(counts)
}

pub fn count_ideals(n: usize, k: usize, m: usize) -> Result<u64> {
    Ok(count_ideals_up_to(n, k, m, DEFAULT_BUDGET)?[m])
}

/// All ideals of colength exactly `m`, sorted by gap set.
pub fn enumerate_ideals(n: usize, k: usize, m: usize) -> Result<Vec<SemigroupIdeal>> {
    let (gamma, bound) = search_for(n, k, m, DEFAULT_BUDGET)?;
    let search = Search {
        gamma: &gamma,
        bound,
        max_colength: m,
    };
    let mut out = Vec::new();
    search.walk(&mut Vec::new(), &mut |g| {
        if g.len() == m {
            out.push(SemigroupIdeal {
                gaps: g.iter().copied().collect(),
            });
        }
    });
    out.sort();
    Ok(out)
}

/// Compares ideal counts with fixed-point counts in every degree `<= max_degree`.
pub fn compare_with_fixed_points(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    p.require_coprime()?;
    let claim = "oracle: colength-d monomial ideals = fixed points of degree d";
    let ideals = count_ideals_up_to(p.n(), p.k(), max_degree, DEFAULT_BUDGET.max(max_degree))?;
    let mut points = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        points.push(enumerate_fixed_points(p, d)?.len() as u64);
    }
    let mut report = VerificationReport::new(claim, p, max_degree);
    report.fact("ideal_counts", format!("{ideals:?}"));
    report.fact("fixed_point_counts", format!("{points:?}"));
    for d in 0..=max_degree {
        report.check();
        if ideals[d] != points[d] {
            return Ok(report.fail(
                Witness::at_degree(d as i64)
                    .expected(points[d].to_string())
                    .actual(ideals[d].to_string())
                    .note("ideal count differs from fixed-point count"),
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_counts() {
        assert_eq!(count_ideals(2, 3, 0).unwrap(), 1);
        assert_eq!(count_ideals(2, 3, 1).unwrap(), 1);
        assert_eq!(count_ideals(2, 3, 2).unwrap(), 2);
        let two: Vec<_> = enumerate_ideals(2, 3, 2)
            .unwrap()
            .into_iter()
            .map(|i| i.gaps.into_iter().collect::<Vec<_>>())
            .collect();
        assert_eq!(two, vec![vec![0, 2], vec![0, 3]]);
        assert_eq!(
            enumerate_ideals(2, 3, 1).unwrap()[0].gaps,
            BTreeSet::from([0])
        );
    }

    #[test]
    fn semigroup_membership() {
        let g = NumericalSemigroup::new(3, 4, 20).unwrap();
        assert_eq!(g.frobenius(), 5);
        let members: Vec<i64> = (0..10).filter(|&s| g.contains(s)).collect();
        assert_eq!(members, vec![0, 3, 4, 6, 7, 8, 9]);
        assert!(NumericalSemigroup::new(2, 4, 10).is_err());
        let trivial = NumericalSemigroup::new(1, 3, 5).unwrap();
        assert!((0..5).all(|s| trivial.contains(s)));
    }

    #[test]
    fn enumerated_ideals_are_stable_and_distinct() {
        for (n, k) in [(2, 3), (3, 4), (3, 5), (4, 5)] {
            let gamma = NumericalSemigroup::new(n, k, 200).unwrap();
            for m in 0..7 {
                let ideals = enumerate_ideals(n, k, m).unwrap();
                assert_eq!(ideals.len() as u64, count_ideals(n, k, m).unwrap());
                for w in ideals.windows(2) {
                    assert!(w[0] < w[1]);
                }
                for i in &ideals {
                    assert!(i.is_stable(&gamma), "{:?}", i.gaps);
                }
            }
        }
    }

    #[test]
    fn unstable_gap_sets_are_detected() {
        let gamma = NumericalSemigroup::new(2, 3, 50).unwrap();
        // removing 2 alone leaves 0 in Δ but 0 + 2 outside
        let bad = SemigroupIdeal {
            gaps: BTreeSet::from([2]),
        };
        assert!(!bad.is_stable(&gamma));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            count_ideals_up_to(2, 3, 10, 5),
            Err(Error::BudgetExceeded {
                requested: 10,
                budget: 5
            })
        );
    }

    #[test]
    fn compare_small_cases() {
        let p = Params::new(2, 3).unwrap();
        let r = compare_with_fixed_points(&p, 8).unwrap();
        assert!(r.passed());
        assert_eq!(r.facts["ideal_counts"], "[1, 1, 2, 2, 2, 2, 2, 2, 2]");
        assert!(compare_with_fixed_points(&p, 0).unwrap().passed());
        assert!(compare_with_fixed_points(&Params::new(3, 4).unwrap(), 6)
            .unwrap()
            .passed());
    }
}
