use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{int, Q};

/// Polynomial with rational coefficients in `φ_1, ..., φ_n, m, ħ`.
///
/// Variables are indexed `0..n` for the weights, `n` for `m` and `n + 1` for `ħ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DressPolynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl DressPolynomial {
    pub fn zero(n: usize) -> Self {
        DressPolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Self::zero(n);
        p.insert(vec![0; n + 2], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Q::one())
    }

    fn variable(n: usize, index: usize) -> Self {
        let mut e = vec![0; n + 2];
        e[index] = 1;
        let mut p = Self::zero(n);
        p.insert(e, Q::one());
        p
    }

    /// `φ_a` for `a` in `1..=n`.
    pub fn phi(n: usize, a: usize) -> Self {
        assert!((1..=n).contains(&a), "weight index out of range");
        Self::variable(n, a - 1)
    }

    pub fn m(n: usize) -> Self {
        Self::variable(n, n)
    }

    pub fn hbar(n: usize) -> Self {
        Self::variable(n, n + 1)
    }

    /// Elementary symmetric polynomial `e_j` in the weights `φ_a`, `a ∈ vars` (1-based).
    pub fn elementary(n: usize, j: usize, vars: &[usize]) -> Self {
        // e_j via the generating product Π (1 + φ_a z), degree-j part.
        let mut by_degree = vec![Self::one(n)];
        for &a in vars {
            let x = Self::phi(n, a);
            let mut next = by_degree.clone();
            next.push(Self::zero(n));
            for d in 0..by_degree.len() {
                next[d + 1] = &next[d + 1] + &(&by_degree[d] * &x);
            }
            by_degree = next;
        }
        by_degree.get(j).cloned().unwrap_or_else(|| Self::zero(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn insert(&mut self, exps: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn evaluate(&self, phi: &[Q], m: &Q, hbar: &Q) -> Q {
        assert_eq!(phi.len(), self.n);
        let mut total = Q::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                let x = match i {
                    i if i < self.n => &phi[i],
                    i if i == self.n => m,
                    _ => hbar,
                };
                for _ in 0..e {
                    term *= x;
                }
            }
            total += term;
        }
        total
    }

    /// `f(φ_{π(1)}, ..., φ_{π(n)}, m, ħ)`, with `perm` 0-based.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zero(self.n);
        for (exps, c) in &self.terms {
            let mut e = vec![0; self.n + 2];
            for (i, &p) in perm.iter().enumerate() {
                e[p] += exps[i];
            }
            e[self.n] = exps[self.n];
            e[self.n + 1] = exps[self.n + 1];
            out.insert(e, c.clone());
        }
        out
    }

    /// Substitutes polynomial images for every variable.
    pub fn substitute(&self, images: &[DressPolynomial]) -> Self {
        assert_eq!(images.len(), self.n + 2);
        let mut out = Self::zero(self.n);
        for (exps, c) in &self.terms {
            let mut term = Self::constant(self.n, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `f(φ - ħ, m, ħ)`.
    pub fn shift_phi_by_hbar(&self) -> Self {
        let n = self.n;
        let mut images: Vec<_> = (1..=n).map(|a| &Self::phi(n, a) - &Self::hbar(n)).collect();
        images.push(Self::m(n));
        images.push(Self::hbar(n));
        self.substitute(&images)
    }

    /// True if `f` is unchanged by every transposition of weights whose
    /// coweight entries agree, i.e. `f` is invariant under the stabilizer of `lambda`.
    pub fn is_invariant_under_stabilizer(&self, lambda: &[i64]) -> bool {
        assert_eq!(lambda.len(), self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                if lambda[a] == lambda[b] {
                    let mut perm: Vec<usize> = (0..self.n).collect();
                    perm.swap(a, b);
                    if self.permuted(&perm) != *self {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.insert(e.clone(), v * c);
        }
        out
    }
}

impl Add for &DressPolynomial {
    type Output = DressPolynomial;
    fn add(self, rhs: &DressPolynomial) -> DressPolynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DressPolynomial {
    type Output = DressPolynomial;
    fn sub(self, rhs: &DressPolynomial) -> DressPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &DressPolynomial {
    type Output = DressPolynomial;
    fn neg(self) -> DressPolynomial {
        self.scale(&int(-1))
    }
}

impl Mul for &DressPolynomial {
    type Output = DressPolynomial;
    fn mul(self, rhs: &DressPolynomial) -> DressPolynomial {
        assert_eq!(self.n, rhs.n);
        let mut out = DressPolynomial::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }
}
