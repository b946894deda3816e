use std::sync::Arc;

use crate::error::Result;
use crate::model::{build_graded_basis, GradedBasis, Params};
use crate::operators::{operator_x, operator_y, sl2_triple, GradedOperator};
use crate::rational::{frac, int, Q};

use super::{q_string, VerificationReport, Witness};

/// Compares `actual` with `expected` block by block on the common domain,
/// which must contain every degree `<= required_top`.
pub fn compare_operators(
    mut report: VerificationReport,
    what: &str,
    actual: &GradedOperator,
    expected: &GradedOperator,
    required_top: i64,
) -> Result<VerificationReport> {
    let a = actual.domain();
    let e = expected.domain();
    for d in 0..=required_top {
        if d >= 0 && !(a.contains(&(d as usize)) && e.contains(&(d as usize))) {
            return Ok(report.fail(
                Witness::at_degree(d).note(format!("{what}: degree outside the computed domain")),
            ));
        }
    }
    report.checks += a.iter().filter(|d| e.contains(d)).count() as u64;
    if let Some(diff) = actual.first_difference(expected)? {
        return Ok(report.fail(Witness::from_entry(
            &diff,
            actual.basis(),
            actual.shift(),
            what,
        )));
    }
    Ok(report)
}

/// `[a, b] = expected` on every degree where both products are defined,
/// `d <= D - max(0, shift a) - max(0, shift b)` (for `[X, Y]` that is `D - 1`).
pub fn check_commutator(
    claim: &str,
    a: &GradedOperator,
    b: &GradedOperator,
    expected: &GradedOperator,
) -> Result<VerificationReport> {
    let basis = a.basis();
    let d = basis.max_degree();
    let report = VerificationReport::new(claim, basis.params(), d);
    let top = d as i64 - a.shift().max(0) - b.shift().max(0);
    compare_operators(report, claim, &a.commutator(b)?, expected, top)
}

fn basis_for(p: &Params, max_degree: usize) -> Result<Arc<GradedBasis>> {
    p.require_coprime()?;
    Ok(Arc::new(build_graded_basis(p, max_degree)?))
}

/// `[X, Y] = n` on all degrees `<= D - 2`.
pub fn check_weyl_relation(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let basis = basis_for(p, max_degree)?;
    let x = operator_x(&basis)?;
    let y = operator_y(&basis)?;
    let n_id = GradedOperator::identity(basis.clone()).scale(&int(p.n() as i64));
    check_commutator("weyl: [X,Y] = n", &x, &y, &n_id)
}

/// The `sl_2` and Weyl relations, the diagonal Casimir and the quadratic
/// relation `C_2 = 2(E W^- + F W^+) + H W^0 + m(m - ħ)` for `n = 2`.
pub fn check_sl2_and_casimir(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let basis = basis_for(p, max_degree)?;
    let t = sl2_triple(&basis)?;
    let (e, f, h) = (&t.e, &t.f, &t.h);
    let x = operator_x(&basis)?;
    let y = operator_y(&basis)?;
    let zero = |shift| GradedOperator::zero(basis.clone(), shift);
    let id = GradedOperator::identity(basis.clone());

    let relations: Vec<(&str, &GradedOperator, &GradedOperator, GradedOperator)> = vec![
        ("[E,F] = H", e, f, h.clone()),
        ("[H,E] = 2E", h, e, e.scale(&int(2))),
        ("[H,F] = -2F", h, f, f.scale(&int(-2))),
        ("[X,Y] = 2", &x, &y, id.scale(&int(2))),
        ("[E,X] = 0", e, &x, zero(3)),
        ("[F,Y] = 0", f, &y, zero(-3)),
        ("[H,X] = X", h, &x, x.clone()),
        ("[E,Y] = X", e, &y, x.clone()),
        ("[H,Y] = -Y", h, &y, y.scale(&int(-1))),
        ("[F,X] = Y", f, &x, y.clone()),
    ];
    let mut report = VerificationReport::new("sl2: relations and Casimir", p, max_degree);
    for (name, a, b, expected) in &relations {
        report = report.absorb(check_commutator(name, a, b, expected)?);
        if !report.passed() {
            return Ok(report);
        }
    }

    let casimir = e
        .compose(f)?
        .add(&f.compose(e)?)?
        .scale(&int(2))
        .add(&h.compose(h)?)?;
    let half_k = frac(p.k() as i64, 2);
    let diagonal = GradedOperator::diagonal(basis.clone(), |a| {
        let delta = int(a.entries()[1] - a.entries()[0]) - &half_k;
        &delta * &delta - int(1)
    });
    let sub = VerificationReport::new("C2 eigenvalue (A2-A1-k/2)^2-1", p, max_degree);
    report = report.absorb(compare_operators(
        sub,
        "Casimir",
        &casimir,
        &diagonal,
        max_degree as i64 - 2,
    )?);

    let half = frac(1, 2);
    let w_plus = x.compose(&x)?.scale(&half);
    let w_zero = x.compose(&y)?.add(&y.compose(&x)?)?.scale(&-&half);
    let w_minus = y.compose(&y)?.scale(&-&half);
    let m = p.m();
    let constant: Q = m * (m - p.hbar());
    let rhs = e
        .compose(&w_minus)?
        .add(&f.compose(&w_plus)?)?
        .scale(&int(2))
        .add(&h.compose(&w_zero)?)?
        .add(&id.scale(&constant))?;
    let sub = VerificationReport::new("C2 = 2(EW- + FW+) + HW0 + m(m-1)", p, max_degree);
    report = report.absorb(compare_operators(
        sub,
        "presentation",
        &casimir,
        &rhs,
        max_degree as i64 - 2,
    )?);

    for d in 0..=1usize.min(max_degree.saturating_sub(2)) {
        if let Some(block) = casimir.block(d) {
            for (i, a) in basis.stratum(d as i64).iter().enumerate() {
                report.fact(format!("casimir{a}"), q_string(&block.get(i, i)));
            }
        }
    }
    Ok(report)
}
