//! Singularity parameters, torus fixed points and their equivariant weights.
//!
//! Fixed points of `C^×` acting on the Hilbert schemes of `x^n = t^k` are labeled
//! by integer vectors `A = (A_1, ..., A_n)` with
//!
//! ```text
//! A_1 >= 0,   A_1 <= A_2 <= ... <= A_n,   A_n - A_1 <= k
//! ```
//!
//! and the number of points is `d(A) = A_1 + ... + A_n`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Q};

/// The datum `(n, k)` of `x^n = t^k`, with `ħ = 1` and `m = -k/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    k: usize,
    m: Q,
    hbar: Q,
}

impl Params {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "n and k must be positive, got (n, k) = ({n}, {k})"
            )));
        }
        Ok(Params {
            n,
            k,
            m: frac(-(k as i64), n as i64),
            hbar: int(1),
        })
    }

    /// Like [`Params::new`], but rejects non-coprime `(n, k)`.
    pub fn coprime(n: usize, k: usize) -> Result<Self> {
        let p = Self::new(n, k)?;
        p.require_coprime()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> &Q {
        &self.m
    }

    pub fn hbar(&self) -> &Q {
        &self.hbar
    }

    pub fn is_coprime(&self) -> bool {
        self.n.gcd(&self.k) == 1
    }

    pub fn require_coprime(&self) -> Result<()> {
        if self.is_coprime() {
            Ok(())
        } else {
            Err(Error::not_coprime(self.n, self.k))
        }
    }

    /// `k / n` as an exact rational.
    pub fn slope(&self) -> Q {
        frac(self.k as i64, self.n as i64)
    }

    /// Top degree `(n-1)(k-1)` of the finite part of the character.
    pub fn finite_part_degree(&self) -> usize {
        (self.n - 1) * (self.k - 1)
    }

    /// Smallest truncation at which kernel and character suites are trusted.
    pub fn stabilization_degree(&self) -> usize {
        self.finite_part_degree() + self.n
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Params", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("m", &rational::to_string(&self.m))?;
        st.serialize_field("hbar", &rational::to_string(&self.hbar))?;
        st.end()
    }
}

/// Integer vector labeling a fixed point. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Cocharacter(Vec<i64>);

impl Cocharacter {
    pub fn new(entries: Vec<i64>) -> Self {
        Cocharacter(entries)
    }

    pub fn zero(n: usize) -> Self {
        Cocharacter(vec![0; n])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `A + λ`. Panics if the lengths differ.
    pub fn shifted(&self, lambda: &[i64]) -> Cocharacter {
        assert_eq!(self.0.len(), lambda.len());
        Cocharacter(self.0.iter().zip(lambda).map(|(a, l)| a + l).collect())
    }
}

impl From<Vec<i64>> for Cocharacter {
    fn from(v: Vec<i64>) -> Self {
        Cocharacter(v)
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

fn check_len(a: &Cocharacter, p: &Params) -> Result<()> {
    if a.len() != p.n {
        return Err(Error::Dimension {
            expected: p.n,
            actual: a.len(),
        });
    }
    Ok(())
}

pub(crate) fn admissible_entries(a: &[i64], k: usize) -> bool {
    match (a.first(), a.last()) {
        (Some(&first), Some(&last)) => {
            first >= 0 && a.windows(2).all(|w| w[0] <= w[1]) && last - first <= k as i64
        }
        _ => false,
    }
}

pub fn is_admissible(a: &Cocharacter, p: &Params) -> Result<bool> {
    check_len(a, p)?;
    Ok(admissible_entries(a.entries(), p.k))
}

/// All admissible cocharacters of degree `d`, lexicographically sorted.
pub fn enumerate_fixed_points(p: &Params, d: usize) -> Result<Vec<Cocharacter>> {
    p.require_coprime()?;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(p.n);
    for first in 0..=d as i64 {
        current.push(first);
        extend_fixed_points(p, d as i64 - first, first, first, &mut current, &mut out);
        current.pop();
    }
    Ok(out)
}

// Depth-first in increasing entry order, so the output is already lexicographic.
fn extend_fixed_points(
    p: &Params,
    remaining: i64,
    first: i64,
    prev: i64,
    current: &mut Vec<i64>,
    out: &mut Vec<Cocharacter>,
) {
    let left = (p.n - current.len()) as i64;
    if left == 0 {
        if remaining == 0 {
            out.push(Cocharacter(current.clone()));
        }
        return;
    }
    // Every later entry is >= prev, so remaining >= left * prev is needed.
    if remaining < left * prev {
        return;
    }
    let hi = (first + p.k as i64).min(remaining);
    for a in prev..=hi {
        current.push(a);
        extend_fixed_points(p, remaining - a, first, a, current, out);
        current.pop();
    }
}

/// Per-degree canonically ordered fixed points up to a truncation degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    params: Params,
    max_degree: usize,
    strata: Vec<Vec<Cocharacter>>,
}

impl GradedBasis {
    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Fixed points of degree `d`; empty outside `[0, max_degree]`.
    pub fn stratum(&self, d: i64) -> &[Cocharacter] {
        if d < 0 || d as usize > self.max_degree {
            return &[];
        }
        &self.strata[d as usize]
    }

    pub fn dim(&self, d: i64) -> usize {
        self.stratum(d).len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    /// Position of `a` inside its stratum.
    pub fn position(&self, a: &Cocharacter) -> Option<usize> {
        self.stratum(a.degree()).binary_search(a).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Cocharacter])> {
        self.strata
            .iter()
            .enumerate()
            .map(|(d, s)| (d, s.as_slice()))
    }

    pub fn same_space(&self, other: &GradedBasis) -> bool {
        self.params == other.params && self.max_degree == other.max_degree
    }
}

pub fn build_graded_basis(p: &Params, max_degree: usize) -> Result<GradedBasis> {
    p.require_coprime()?;
    let strata = (0..=max_degree)
        .into_par_iter()
        .map(|d| enumerate_fixed_points(p, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedBasis {
        params: p.clone(),
        max_degree,
        strata,
    })
}

/// Equivariant weights `φ_a(A) = (a-1)k/n - A_a` at `ħ = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    #[serde(serialize_with = "rational::serialize_vec")]
    pub phis: Vec<Q>,
}

/// The weight formula applied to any integer vector, admissible or not.
pub(crate) fn weights_of(a: &[i64], p: &Params) -> Vec<Q> {
    let slope = p.slope();
    a.iter()
        .enumerate()
        .map(|(i, &ai)| &slope * int(i as i64) - int(ai))
        .collect()
}

pub fn phi_weights(a: &Cocharacter, p: &Params) -> Result<WeightVector> {
    if !is_admissible(a, p)? {
        return Err(Error::InvalidArgument(format!(
            "{a} is not an admissible cocharacter for (n, k) = ({}, {})",
            p.n, p.k
        )));
    }
    Ok(WeightVector {
        phis: weights_of(a.entries(), p),
    })
}

/// Exponents of the cocharacter `ν ↦ (diag(1, ν^k, ..., ν^{(n-1)k}), ν^{-k}, ν^n)`
/// whose image is the stabilizer of `(γ, e_1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerCocharacter {
    pub diag_exponents: Vec<i64>,
    pub flavor_exponent: i64,
    pub rot_exponent: i64,
}

pub fn stabilizer_cocharacter(p: &Params) -> Result<StabilizerCocharacter> {
    p.require_coprime()?;
    let k = p.k as i64;
    Ok(StabilizerCocharacter {
        diag_exponents: (0..p.n as i64).map(|a| a * k).collect(),
        flavor_exponent: -k,
        rot_exponent: p.n as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: &[i64]) -> Cocharacter {
        Cocharacter::new(v.to_vec())
    }

    #[test]
    fn admissibility_examples() {
        let p = Params::new(2, 3).unwrap();
        assert!(is_admissible(&c(&[0, 0]), &p).unwrap());
        assert!(!is_admissible(&c(&[0, 4]), &p).unwrap());
        assert!(!is_admissible(&c(&[1, 0]), &p).unwrap());
        assert!(!is_admissible(&c(&[-1, 0]), &p).unwrap());
        assert_eq!(
            is_admissible(&c(&[0, 0, 0]), &p),
            Err(Error::Dimension {
                expected: 2,
                actual: 3
            })
        );
    }

    #[test]
    fn params_relation() {
        for (n, k) in [(2, 3), (3, 4), (4, 5), (5, 2)] {
            let p = Params::new(n, k).unwrap();
            assert_eq!(p.m() * int(n as i64) + p.hbar() * int(k as i64), int(0));
        }
        assert!(Params::new(0, 3).is_err());
        assert!(matches!(
            Params::coprime(2, 4),
            Err(Error::Unsupported { n: 2, k: 4, .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(enumerate_fixed_points(&p, 0).unwrap(), vec![c(&[0, 0])]);
        assert_eq!(enumerate_fixed_points(&p, 1).unwrap(), vec![c(&[0, 1])]);
        assert_eq!(
            enumerate_fixed_points(&p, 2).unwrap(),
            vec![c(&[0, 2]), c(&[1, 1])]
        );
        let q = Params::new(2, 4).unwrap();
        assert!(matches!(
            enumerate_fixed_points(&q, 2),
            Err(Error::Unsupported { .. })
        ));
    }

    #[test]
    fn graded_basis_counts() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(
            build_graded_basis(&p, 3).unwrap().counts(),
            vec![1, 1, 2, 2]
        );
        let b0 = build_graded_basis(&p, 0).unwrap();
        assert_eq!(b0.stratum(0), &[c(&[0, 0])]);
        assert!(b0.stratum(-1).is_empty());
        assert!(b0.stratum(1).is_empty());

        let p = Params::new(3, 4).unwrap();
        let b = build_graded_basis(&p, 2).unwrap();
        assert_eq!(b.counts(), vec![1, 1, 2]);
        assert_eq!(b.stratum(2), &[c(&[0, 0, 2]), c(&[0, 1, 1])]);
    }

    #[test]
    fn phi_examples() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(
            phi_weights(&c(&[0, 0]), &p).unwrap().phis,
            vec![int(0), frac(3, 2)]
        );
        assert_eq!(
            phi_weights(&c(&[0, 1]), &p).unwrap().phis,
            vec![int(0), frac(1, 2)]
        );
        assert!(phi_weights(&c(&[1, 0]), &p).is_err());
        let p = Params::new(4, 7).unwrap();
        let w = phi_weights(&Cocharacter::zero(4), &p).unwrap().phis;
        let expected: Vec<Q> = (0..4).map(|a| frac(7 * a, 4)).collect();
        assert_eq!(w, expected);
    }

    #[test]
    fn stabilizer_examples() {
        let s = stabilizer_cocharacter(&Params::new(2, 3).unwrap()).unwrap();
        assert_eq!(
            (s.diag_exponents, s.flavor_exponent, s.rot_exponent),
            (vec![0, 3], -3, 2)
        );
        let s = stabilizer_cocharacter(&Params::new(3, 4).unwrap()).unwrap();
        assert_eq!(
            (s.diag_exponents, s.flavor_exponent, s.rot_exponent),
            (vec![0, 4, 8], -4, 3)
        );
        let s = stabilizer_cocharacter(&Params::new(1, 9).unwrap()).unwrap();
        assert_eq!(
            (s.diag_exponents, s.flavor_exponent, s.rot_exponent),
            (vec![0], -9, 1)
        );
        assert!(stabilizer_cocharacter(&Params::new(4, 6).unwrap()).is_err());
    }

    // Brute force over the box 0 <= A_a <= d, independent of the recursive generator.
    fn brute_force(p: &Params, d: usize) -> Vec<Cocharacter> {
        let n = p.n();
        let mut out = Vec::new();
        let total = (d + 1).pow(n as u32);
        for mut code in 0..total {
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push((code % (d + 1)) as i64);
                code /= d + 1;
            }
            v.reverse();
            let a = Cocharacter::new(v);
            if a.degree() == d as i64 && is_admissible(&a, p).unwrap() {
                out.push(a);
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn enumeration_is_exhaustive((n, k) in (1usize..5, 1usize..8), d in 0usize..9) {
            let p = Params::new(n, k).unwrap();
            prop_assume!(p.is_coprime());
            let got = enumerate_fixed_points(&p, d).unwrap();
            prop_assert_eq!(&got, &brute_force(&p, d));
            prop_assert_eq!(got, enumerate_fixed_points(&p, d).unwrap());
        }

        #[test]
        fn phi_differences_are_never_integers(
            (n, k) in (2usize..6, 1usize..10),
            raw in proptest::collection::vec(0i64..12, 6),
        ) {
            let p = Params::new(n, k).unwrap();
            prop_assume!(p.is_coprime());
            let mut v: Vec<i64> = raw[..n].to_vec();
            v.sort();
            let w = weights_of(&v, &p);
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        prop_assert!(!(&w[a] - &w[b]).is_integer());
                    }
                }
            }
        }
    }
}
