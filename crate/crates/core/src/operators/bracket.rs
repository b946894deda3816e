use num_traits::{One, Zero};

use crate::error::Result;
use crate::model::{is_admissible, weights_of, Cocharacter, Params};
use crate::rational::{int, Q};
use crate::Error;

/// Rising/falling product `[x]^r` at `ħ = 1`:
/// `x(x+1)...(x+r-1)` for `r > 0`, `1` for `r = 0`, `(x-1)...(x-|r|)` for `r < 0`.
pub fn bracket_pow(x: &Q, r: i64) -> Q {
    if r >= 0 {
        (0..r).map(|j| x + int(j)).fold(Q::one(), |acc, f| acc * f)
    } else {
        (1..=-r)
            .map(|j| x - int(j))
            .fold(Q::one(), |acc, f| acc * f)
    }
}

fn require_admissible(a: &Cocharacter, p: &Params) -> Result<()> {
    if is_admissible(a, p)? {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{a} is not admissible")))
    }
}

fn check_lambda(lambda: &[i64], p: &Params) -> Result<()> {
    if lambda.len() != p.n() {
        return Err(Error::Dimension {
            expected: p.n(),
            actual: lambda.len(),
        });
    }
    Ok(())
}

/// Coefficient of the abelianized monopole `[t^λ]|A⟩ = c·|A + λ⟩`, in the
/// closed form written for `GL_n` with `N = Ad ⊕ V`.
pub fn abelian_monopole_coeff(a: &Cocharacter, lambda: &[i64], p: &Params) -> Result<Q> {
    require_admissible(a, p)?;
    check_lambda(lambda, p)?;
    let slope = p.slope();
    let entries = a.entries();
    let mut c = Q::one();
    for (i, &l) in lambda.iter().enumerate() {
        if l < 0 {
            let base = &slope * int(i as i64) - int(entries[i]);
            for alpha in 0..-l {
                c *= &base + int(alpha);
            }
        }
    }
    for i in 0..p.n() {
        for j in 0..p.n() {
            if lambda[i] > lambda[j] {
                // (a - b + 1) k/n - A_a + A_b, with a = i+1, b = j+1
                let base =
                    &slope * int(i as i64 - j as i64 + 1) - int(entries[i]) + int(entries[j]);
                for beta in 0..lambda[i] - lambda[j] {
                    c *= &base + int(beta);
                }
            }
        }
    }
    Ok(c)
}

/// Excess intersection factor `e(E_{A,ν}) = Π [⟨μ̃, φ(A) + m⟩]^{-⟨μ, ν⟩}` over the
/// weights of `N = Ad ⊕ V` pairing negatively with `ν`. Adjoint weights
/// `e_a - e_b` carry the flavor and pair to `φ_a - φ_b + m`; weights `e_a` of
/// `V` pair to `φ_a`.
pub fn excess_factor(a: &Cocharacter, nu: &[i64], p: &Params) -> Result<Q> {
    require_admissible(a, p)?;
    check_lambda(nu, p)?;
    let phi = weights_of(a.entries(), p);
    let mut c = Q::one();
    for i in 0..p.n() {
        for j in 0..p.n() {
            let pairing = nu[i] - nu[j];
            if i != j && pairing < 0 {
                c *= bracket_pow(&(&phi[i] - &phi[j] + p.m()), -pairing);
            }
        }
    }
    for (i, &v) in nu.iter().enumerate() {
        if v < 0 {
            c *= bracket_pow(&phi[i], -v);
        }
        if c.is_zero() {
            break;
        }
    }
    Ok(c)
}

/// Tangent Euler product `Π_{λ'_a > λ'_b} Π_{γ=1}^{λ'_a-λ'_b} (φ_b - φ_a - γ)` at the weights `phi`.
pub fn tangent_euler(phi: &[Q], lambda: &[i64]) -> Q {
    let mut c = Q::one();
    for (a, &la) in lambda.iter().enumerate() {
        for (b, &lb) in lambda.iter().enumerate() {
            if la > lb {
                for gamma in 1..=la - lb {
                    c *= &phi[b] - &phi[a] - int(gamma);
                }
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn c(v: &[i64]) -> Cocharacter {
        Cocharacter::new(v.to_vec())
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_pow(&frac(3, 2), 0), int(1));
        assert_eq!(bracket_pow(&frac(1, 2), 2), frac(3, 4));
        assert_eq!(bracket_pow(&frac(1, 2), -1), frac(-1, 2));
        assert_eq!(bracket_pow(&int(5), -2), int(12));
    }

    #[test]
    fn abelian_examples() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(
            abelian_monopole_coeff(&c(&[0, 1]), &[0, 0], &p).unwrap(),
            int(1)
        );
        for a in [[0, 0], [0, 3], [2, 4]] {
            assert_eq!(abelian_monopole_coeff(&c(&a), &[1, 1], &p).unwrap(), int(1));
        }
        assert_eq!(
            abelian_monopole_coeff(&c(&[1, 2]), &[-1, -1], &p).unwrap(),
            frac(1, 2)
        );
        assert!(abelian_monopole_coeff(&c(&[1, 0]), &[0, 0], &p).is_err());
        assert!(abelian_monopole_coeff(&c(&[0, 0]), &[0], &p).is_err());
    }

    #[test]
    fn excess_examples() {
        let p = Params::new(2, 3).unwrap();
        assert_eq!(excess_factor(&c(&[0, 3]), &[0, 0], &p).unwrap(), int(1));
        assert_eq!(excess_factor(&c(&[0, 0]), &[0, 1], &p).unwrap(), int(-3));
        assert_eq!(excess_factor(&c(&[0, 0]), &[1, 0], &p).unwrap(), int(0));
    }

    #[test]
    fn excess_matches_abelian_on_central_coweights() {
        // No adjoint pairs for ±(1,...,1), so both descriptions reduce to the V factor.
        for (n, k) in [(2, 3), (3, 4), (4, 5)] {
            let p = Params::new(n, k).unwrap();
            let basis = crate::model::build_graded_basis(&p, 6).unwrap();
            for (_, stratum) in basis.iter() {
                for a in stratum {
                    for s in [1, -1] {
                        let lam = vec![s; n];
                        assert_eq!(
                            excess_factor(a, &lam, &p).unwrap(),
                            abelian_monopole_coeff(a, &lam, &p).unwrap()
                        );
                    }
                }
            }
        }
    }
}
