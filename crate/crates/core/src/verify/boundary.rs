use rayon::prelude::*;

use num_traits::Zero;

use crate::error::Result;
use crate::model::{admissible_entries, build_graded_basis, Params};
use crate::operators::{monopole_coefficient, weyl_orbit, DressPolynomial, MinusculeCoweight};

use super::{q_string, VerificationReport, Witness};

/// For every fixed point `A` of degree `<= D` and every `λ'` in the orbit of
/// `±λ_r` with `A + λ'` inadmissible, the localization numerator vanishes.
pub fn check_boundary_vanishing(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    p.require_coprime()?;
    let basis = build_graded_basis(p, max_degree)?;
    let one = DressPolynomial::one(p.n());
    let mut lambdas = Vec::new();
    for r in 1..=p.n() {
        for sign in [1, -1] {
            let lam = MinusculeCoweight::new(sign, r, p.n())?.vector();
            for lp in weyl_orbit(&lam) {
                lambdas.push((lam.clone(), lp));
            }
        }
    }
    let sources: Vec<_> = basis.iter().flat_map(|(_, s)| s.iter()).collect();
    let outcomes = sources
        .par_iter()
        .map(|a| {
            let mut checked = 0u64;
            for (lam, lp) in &lambdas {
                let c = monopole_coefficient(a, lp, lam, &one, p)?;
                if admissible_entries(c.target.entries(), p.k()) {
                    continue;
                }
                checked += 1;
                if !c.numerator.is_zero() {
                    let w = Witness::at_degree(a.degree())
                        .labels(vec![a.to_string(), c.target.to_string()])
                        .expected("0")
                        .actual(q_string(&c.numerator))
                        .note("numerator does not vanish at an inadmissible target");
                    return Ok((checked, Some(w)));
                }
            }
            Ok((checked, None))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = VerificationReport::new(
        "boundary: numerators vanish off the fixed-point set",
        p,
        max_degree,
    );
    for (checked, witness) in outcomes {
        report.checks += checked;
        if let Some(w) = witness {
            return Ok(report.fail(w));
        }
    }
    report.fact("inadmissible_targets", report.checks.to_string());
    Ok(report)
}
