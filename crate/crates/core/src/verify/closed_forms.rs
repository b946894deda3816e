//! Closed forms for `n = 2`, `k = 2ℓ + 1`, written directly in the coordinates
//! `(A_1, A_2)` with `s = k/2` and `δ = A_2 - A_1`:
//!
//! ```text
//! X|A⟩ = (δ - k)/(δ - s) |A_1, A_2+1⟩ + δ/(δ - s) |A_1+1, A_2⟩
//! Y|A⟩ = δ(s - A_2)/(δ - s) |A_1, A_2-1⟩ + A_1(k - δ)/(δ - s) |A_1-1, A_2⟩
//! E|A⟩ = |A_1+1, A_2+1⟩
//! F|A⟩ = A_1(s - A_2) |A_1-1, A_2-1⟩
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::{admissible_entries, build_graded_basis, Cocharacter, GradedBasis, Params};
use crate::operators::graded::natural_domain;
use crate::operators::{operator_x, operator_y, sl2_triple, GradedOperator, GradedVector};
use crate::rational::{frac, int, Q};

use super::kernels::kernel_y;
use super::relations::compare_operators;
use super::{q_string, VerificationReport, Witness};

type Terms = Vec<((i64, i64), Q)>;

fn x_terms(a1: i64, a2: i64, k: i64) -> Terms {
    let s = frac(k, 2);
    let delta = int(a2 - a1);
    let den = &delta - &s;
    vec![
        ((a1, a2 + 1), (&delta - int(k)) / &den),
        ((a1 + 1, a2), &delta / &den),
    ]
}

fn y_terms(a1: i64, a2: i64, k: i64) -> Terms {
    let s = frac(k, 2);
    let delta = int(a2 - a1);
    let den = &delta - &s;
    vec![
        ((a1, a2 - 1), &delta * (&s - int(a2)) / &den),
        ((a1 - 1, a2), int(a1) * (int(k) - &delta) / &den),
    ]
}

fn e_terms(a1: i64, a2: i64, _k: i64) -> Terms {
    vec![((a1 + 1, a2 + 1), int(1))]
}

fn f_terms(a1: i64, a2: i64, k: i64) -> Terms {
    vec![((a1 - 1, a2 - 1), int(a1) * (frac(k, 2) - int(a2)))]
}

/// A nonzero closed-form coefficient pointing outside the fixed-point set.
struct Stray {
    degree: usize,
    source: Cocharacter,
    target: (i64, i64),
    value: Q,
}

fn build(
    basis: &Arc<GradedBasis>,
    shift: i64,
    terms: fn(i64, i64, i64) -> Terms,
) -> Result<(GradedOperator, Option<Stray>)> {
    let p = basis.params();
    if p.n() != 2 || p.k().is_multiple_of(2) {
        return Err(Error::Unsupported {
            n: p.n(),
            k: p.k(),
            reason: "closed forms need n = 2 and odd k".into(),
        });
    }
    let k = p.k() as i64;
    let mut stray = None;
    let mut blocks = BTreeMap::new();
    for d in natural_domain(basis.max_degree(), shift) {
        let sources = basis.stratum(d as i64);
        let targets = basis.stratum(d as i64 + shift);
        let mut m = SparseMatrix::zeros(targets.len(), sources.len());
        for (col, a) in sources.iter().enumerate() {
            let (a1, a2) = (a.entries()[0], a.entries()[1]);
            for ((b1, b2), value) in terms(a1, a2, k) {
                if value.is_zero() {
                    continue;
                }
                if !admissible_entries(&[b1, b2], p.k()) {
                    stray.get_or_insert(Stray {
                        degree: d,
                        source: a.clone(),
                        target: (b1, b2),
                        value,
                    });
                    continue;
                }
                let row = targets
                    .binary_search(&Cocharacter::new(vec![b1, b2]))
                    .map_err(|_| Error::Invariant(format!("({b1},{b2}) missing from basis")))?;
                m.add_to(row, col, &value);
            }
        }
        blocks.insert(d, m);
    }
    Ok((
        GradedOperator::from_blocks(basis.clone(), shift, blocks)?,
        stray,
    ))
}

fn build_strict(
    basis: &Arc<GradedBasis>,
    shift: i64,
    terms: fn(i64, i64, i64) -> Terms,
) -> Result<GradedOperator> {
    match build(basis, shift, terms)? {
        (op, None) => Ok(op),
        (_, Some(s)) => Err(Error::Invariant(format!(
            "closed form sends {} to inadmissible ({},{}) with coefficient {}",
            s.source,
            s.target.0,
            s.target.1,
            q_string(&s.value)
        ))),
    }
}

pub fn closed_form_x(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    build_strict(basis, 1, x_terms)
}

pub fn closed_form_y(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    build_strict(basis, -1, y_terms)
}

pub fn closed_form_e(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    build_strict(basis, 2, e_terms)
}

pub fn closed_form_f(basis: &Arc<GradedBasis>) -> Result<GradedOperator> {
    build_strict(basis, -2, f_terms)
}

fn rank_two(ell: usize) -> Result<Params> {
    Params::new(2, 2 * ell + 1)
}

fn image(op: &GradedOperator, basis: &GradedBasis, a: &[i64]) -> Option<String> {
    let v = GradedVector::basis_vector(basis, &Cocharacter::new(a.to_vec())).ok()?;
    let w = op.apply(&v).ok()?;
    let terms: Vec<String> = w
        .terms(basis)
        .into_iter()
        .map(|(b, q)| {
            format!(
                "{}|{}⟩",
                q_string(q),
                &b.to_string()[1..b.to_string().len() - 1]
            )
        })
        .collect();
    Some(if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    })
}

/// Generic localization matrices of `X, Y, E, F` against the closed forms,
/// entry by entry on every degree of the truncation.
pub fn appendix_b_closed_forms(ell: usize, max_degree: usize) -> Result<VerificationReport> {
    let p = rank_two(ell)?;
    let basis = Arc::new(build_graded_basis(&p, max_degree)?);
    let t = sl2_triple(&basis)?;
    let generic = [
        (
            "X",
            operator_x(&basis)?,
            x_terms as fn(i64, i64, i64) -> Terms,
        ),
        ("Y", operator_y(&basis)?, y_terms),
        ("E", t.e, e_terms),
        ("F", t.f, f_terms),
    ];
    let mut report =
        VerificationReport::new("appendix-b: closed forms for X, Y, E, F", &p, max_degree);
    for (name, op, terms) in &generic {
        let (closed, stray) = build(&basis, op.shift(), *terms)?;
        if let Some(s) = stray {
            return Ok(report.fail(
                Witness::at_degree(s.degree as i64)
                    .labels(vec![
                        s.source.to_string(),
                        format!("({},{})", s.target.0, s.target.1),
                    ])
                    .expected("0")
                    .actual(q_string(&s.value))
                    .note(format!("{name}: closed form leaves the fixed-point set")),
            ));
        }
        let sub = VerificationReport::new(*name, &p, max_degree);
        let top = max_degree as i64 - op.shift().max(0);
        report = report.absorb(compare_operators(sub, name, op, &closed, top)?);
        if !report.passed() {
            return Ok(report);
        }
        for a in [[0, 0], [0, 1], [1, 2]] {
            if let Some(s) = image(op, &basis, &a) {
                report.fact(format!("{name}|{},{}⟩", a[0], a[1]), s);
            }
        }
    }
    Ok(report)
}

/// `Σ_j (-1)^j C(N, j) Π_{i<j} c_i |N - j, N + j⟩`, one vector per `N = 0..=ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelYVector {
    pub index: usize,
    pub degree: usize,
    pub terms: Vec<(Cocharacter, Q)>,
}

impl Serialize for KernelYVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a>(&'a Cocharacter, String);
        #[derive(Serialize)]
        struct Repr<'a> {
            index: usize,
            degree: usize,
            terms: TermList<'a>,
        }
        struct TermList<'a>(&'a [(Cocharacter, Q)]);
        impl Serialize for TermList<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (a, q) in self.0 {
                    seq.serialize_element(&Term(a, q_string(q)))?;
                }
                seq.end()
            }
        }
        Repr {
            index: self.index,
            degree: self.degree,
            terms: TermList(&self.terms),
        }
        .serialize(s)
    }
}

fn displayed_vector(ell: usize, big_n: usize) -> KernelYVector {
    let k = (2 * ell + 1) as i64;
    let nn = big_n as i64;
    let mut terms = Vec::new();
    let mut product = int(1);
    let mut binom = int(1);
    for j in 0..=nn {
        if j > 0 {
            let i = j - 1;
            product *=
                int((k - 2 * i) * (k - 4 * (i + 1))) / int((k - 2 * (nn + i + 1)) * (k - 4 * i));
            binom = binom * int(nn - j + 1) / int(j);
        }
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        let c = sign * &binom * &product;
        if !c.is_zero() {
            terms.push((Cocharacter::new(vec![nn - j, nn + j]), c));
        }
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    KernelYVector {
        index: big_n,
        degree: 2 * big_n,
        terms,
    }
}

/// The displayed vectors for `N = 0..=ℓ`, each checked to satisfy `Y v = 0` exactly.
pub fn appendix_b_kernel_y_basis(ell: usize) -> Result<Vec<KernelYVector>> {
    let p = rank_two(ell)?;
    let basis = Arc::new(build_graded_basis(&p, 2 * ell)?);
    let y = operator_y(&basis)?;
    (0..=ell)
        .map(|big_n| {
            let v = displayed_vector(ell, big_n);
            let mut coords = vec![Q::zero(); basis.dim(v.degree as i64)];
            for (a, c) in &v.terms {
                let i = basis
                    .position(a)
                    .ok_or_else(|| Error::Invariant(format!("{a} is not a fixed point")))?;
                coords[i] = c.clone();
            }
            if !y
                .apply(&GradedVector::homogeneous(v.degree, coords))?
                .is_zero()
            {
                return Err(Error::Invariant(format!(
                    "Y does not annihilate vector N = {big_n}"
                )));
            }
            Ok(v)
        })
        .collect()
}

/// The displayed vectors number `ℓ + 1`, sit in degrees `2N`, are killed by
/// `Y`, and match `dim ker Y` degree by degree.
pub fn check_appendix_b_kernel_y(ell: usize) -> Result<VerificationReport> {
    let p = rank_two(ell)?;
    let top = p.stabilization_degree();
    let mut report = VerificationReport::new("appendix-b: ker Y basis", &p, top);
    let vectors = match appendix_b_kernel_y_basis(ell) {
        Ok(v) => v,
        Err(Error::Invariant(msg)) => return Ok(report.fail(Witness::default().note(msg))),
        Err(e) => return Err(e),
    };
    report.checks += vectors.len() as u64;
    report.check();
    if vectors.len() != ell + 1 {
        return Ok(report.fail(
            Witness::default()
                .expected((ell + 1).to_string())
                .actual(vectors.len().to_string())
                .note("number of displayed vectors"),
        ));
    }
    let kernel = kernel_y(&p, top)?;
    for (d, &dim) in kernel.dims.iter().enumerate() {
        report.check();
        let displayed = vectors.iter().filter(|v| v.degree == d).count();
        if displayed != dim {
            return Ok(report.fail(
                Witness::at_degree(d as i64)
                    .expected(dim.to_string())
                    .actual(displayed.to_string())
                    .note("displayed vectors vs dim ker Y"),
            ));
        }
    }
    for v in &vectors {
        let terms: Vec<String> = v
            .terms
            .iter()
            .map(|(a, q)| format!("{} {a}", q_string(q)))
            .collect();
        report.fact(format!("N={}", v.index), terms.join(" + "));
    }
    Ok(report)
}
