use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{betti_2k, compactified_jacobian_dim, euler_series, QPolynomial};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::{build_graded_basis, GradedBasis, Params};
use crate::operators::{operator_f, operator_y, sl2_triple, DressPolynomial, GradedOperator};
use crate::rational::{frac, int, Q};

use super::{q_string, VerificationReport, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelVector {
    pub degree: usize,
    #[serde(serialize_with = "crate::rational::serialize_vec")]
    pub coords: Vec<Q>,
}

/// Joint kernel of a family of operators, degree by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedKernelSummary {
    pub operators: String,
    pub dims: Vec<usize>,
    pub total: usize,
    pub vectors: Vec<KernelVector>,
}

impl GradedKernelSummary {
    pub fn in_degree(&self, d: usize) -> impl Iterator<Item = &KernelVector> {
        self.vectors.iter().filter(move |v| v.degree == d)
    }
}

fn block_at(op: &GradedOperator, d: usize) -> Result<&SparseMatrix> {
    op.block(d).ok_or(Error::Truncation { degree: d })
}

/// `∩ ker ops` in each degree `0..=top`; every returned vector is checked to
/// be annihilated exactly.
pub fn graded_kernel(
    name: &str,
    ops: &[&GradedOperator],
    top: usize,
) -> Result<GradedKernelSummary> {
    let per_degree = (0..=top)
        .into_par_iter()
        .map(|d| {
            let blocks = ops
                .iter()
                .map(|op| block_at(op, d))
                .collect::<Result<Vec<_>>>()?;
            let null = SparseMatrix::vstack(&blocks)?.nullspace();
            for v in &null {
                for b in &blocks {
                    if b.mul_vec(v)?.iter().any(|x| !x.is_zero()) {
                        return Err(Error::Invariant(format!(
                            "{name}: kernel vector not annihilated"
                        )));
                    }
                }
            }
            Ok(null)
        })
        .collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = per_degree.iter().map(Vec::len).collect();
    let vectors = per_degree
        .into_iter()
        .enumerate()
        .flat_map(|(degree, vs)| {
            vs.into_iter()
                .map(move |coords| KernelVector { degree, coords })
        })
        .collect();
    Ok(GradedKernelSummary {
        operators: name.into(),
        total: dims.iter().sum(),
        dims,
        vectors,
    })
}

fn basis_for(p: &Params, max_degree: usize) -> Result<Arc<GradedBasis>> {
    p.require_coprime()?;
    Ok(Arc::new(build_graded_basis(p, max_degree)?))
}

fn require_degree(what: &str, required: usize, actual: usize) -> Result<()> {
    if actual < required {
        return Err(Error::UnderTruncation {
            what: what.into(),
            required,
            actual,
        });
    }
    Ok(())
}

/// `∩_{r=1}^{n} ker F_r[1]` in every degree `<= D`.
pub fn singular_vectors(p: &Params, max_degree: usize) -> Result<GradedKernelSummary> {
    let basis = basis_for(p, max_degree)?;
    let one = DressPolynomial::one(p.n());
    let fs = (1..=p.n())
        .map(|r| operator_f(r, &one, &basis))
        .collect::<Result<Vec<_>>>()?;
    graded_kernel(
        "F_1[1], ..., F_n[1]",
        &fs.iter().collect::<Vec<_>>(),
        max_degree,
    )
}

/// Dressings `f` invariant under the stabilizer of `-λ_r`, used to sample the
/// inclusion `∩_{s >= r} ker F_s[1] ⊆ ker F_r[f]`.
fn dressing_family(n: usize, r: usize) -> Vec<(String, DressPolynomial)> {
    let all: Vec<usize> = (1..=n).collect();
    let block = DressPolynomial::elementary(n, 1, &all[..r]);
    let rest = DressPolynomial::elementary(n, 1, &all[r..]);
    let mixed = &(&block * &block) + &rest.scale(&int(3));
    vec![
        ("e1".into(), DressPolynomial::elementary(n, 1, &all)),
        (format!("e1(1..{r})"), block),
        (format!("e1(1..{r})^2 + 3 e1({}..{n})", r + 1), mixed),
    ]
}

/// Singular-vector uniqueness plus the sampled dressed inclusion.
pub fn check_singular_vectors(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let summary = singular_vectors(p, max_degree)?;
    let mut report = VerificationReport::new("singular: ∩ ker F_r[1] = span{|0>}", p, max_degree);
    report.fact("dims", format!("{:?}", summary.dims));
    for (d, &dim) in summary.dims.iter().enumerate() {
        report.check();
        let want = usize::from(d == 0);
        if dim != want {
            return Ok(report.fail(
                Witness::at_degree(d as i64)
                    .expected(want.to_string())
                    .actual(dim.to_string())
                    .note("joint kernel dimension"),
            ));
        }
    }
    report.check();
    if summary.vectors[0].coords != [Q::one()] {
        return Ok(report.fail(Witness::at_degree(0).note("degree-0 kernel vector is not |0>")));
    }

    let basis = basis_for(p, max_degree)?;
    let one = DressPolynomial::one(p.n());
    let fs = (1..=p.n())
        .map(|r| operator_f(r, &one, &basis))
        .collect::<Result<Vec<_>>>()?;
    let mut sampled = 0;
    for r in 1..=p.n() {
        let tail: Vec<&GradedOperator> = fs[r - 1..].iter().collect();
        let chain = graded_kernel("F_r[1], ..., F_n[1]", &tail, max_degree)?;
        for (label, f) in dressing_family(p.n(), r) {
            let dressed = operator_f(r, &f, &basis)?;
            for v in &chain.vectors {
                report.check();
                sampled += 1;
                let image = block_at(&dressed, v.degree)?.mul_vec(&v.coords)?;
                if let Some(x) = image.iter().find(|x| !x.is_zero()) {
                    return Ok(report.fail(
                        Witness::at_degree(v.degree as i64)
                            .labels(vec![format!("F_{r}[{label}]")])
                            .expected("0")
                            .actual(q_string(x))
                            .note("chain kernel vector not killed by dressed lowering operator"),
                    ));
                }
            }
        }
    }
    report.fact("dressed_samples", sampled.to_string());
    Ok(report)
}

/// `ker Y` in every degree `<= D`; needs `D >= (n-1)(k-1) + n`.
pub fn kernel_y(p: &Params, max_degree: usize) -> Result<GradedKernelSummary> {
    p.require_coprime()?;
    require_degree("kernel of Y", p.stabilization_degree(), max_degree)?;
    let basis = basis_for(p, max_degree)?;
    let y = operator_y(&basis)?;
    graded_kernel("Y", &[&y], max_degree)
}

/// `(1 - q)` times the fixed-point generating function, checked to be a
/// polynomial of degree `(n-1)(k-1)` with nonnegative coefficients summing to
/// the compactified Jacobian dimension.
pub fn finite_part_character(p: &Params, max_degree: usize) -> Result<QPolynomial> {
    p.require_coprime()?;
    require_degree(
        "finite-part character",
        p.stabilization_degree(),
        max_degree,
    )?;
    let chi = euler_series(p, max_degree)?;
    let poly = chi
        .sub(&QPolynomial::monomial(1, 1).mul(&chi))
        .truncated(max_degree);
    let want_degree = p.finite_part_degree();
    if poly.degree() != Some(want_degree) {
        return Err(Error::Invariant(format!(
            "(1-q)χ has degree {:?}, expected {want_degree}",
            poly.degree()
        )));
    }
    if poly.coefficients().iter().any(|&c| c < 0) {
        return Err(Error::Invariant("(1-q)χ has a negative coefficient".into()));
    }
    let total = compactified_jacobian_dim(p)?;
    if poly.eval_at_one() != total as i128 {
        return Err(Error::Invariant(format!(
            "(1-q)χ at q = 1 is {}, expected {total}",
            poly.eval_at_one()
        )));
    }
    Ok(poly)
}

/// Per-degree `dim ker Y` equals the finite-part character and the total equals
/// `C(n+k-1, n-1) / n`.
pub fn check_kernel_y(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let summary = kernel_y(p, max_degree)?;
    let character = finite_part_character(p, max_degree)?;
    let total = compactified_jacobian_dim(p)?;
    let mut report = VerificationReport::new("kernel-y: dim ker Y = C(n+k-1,n-1)/n", p, max_degree);
    report.fact("dims", format!("{:?}", summary.dims));
    report.fact("total", summary.total.to_string());
    report.fact("character", format!("{:?}", character.coefficients()));
    for (d, &dim) in summary.dims.iter().enumerate() {
        report.check();
        let want = character.coeff(d);
        if dim as i128 != want {
            return Ok(report.fail(
                Witness::at_degree(d as i64)
                    .expected(want.to_string())
                    .actual(dim.to_string())
                    .note("dim ker Y differs from the finite-part character"),
            ));
        }
    }
    report.check();
    if summary.total as u128 != total {
        return Ok(report.fail(
            Witness::default()
                .expected(total.to_string())
                .actual(summary.total.to_string())
                .note("total dim ker Y"),
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowestWeightVector {
    pub degree: usize,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub weight: Q,
    #[serde(serialize_with = "crate::rational::serialize_vec")]
    pub coords: Vec<Q>,
}

/// Kernel of `F` for `n = 2`, each vector tagged with its `H`-eigenvalue.
pub fn lowest_weight_decomposition(
    p: &Params,
    max_degree: usize,
) -> Result<Vec<LowestWeightVector>> {
    if p.n() != 2 {
        return Err(Error::Unsupported {
            n: p.n(),
            k: p.k(),
            reason: "the sl2 triple needs n = 2".into(),
        });
    }
    p.require_coprime()?;
    require_degree("lowest-weight decomposition", p.k(), max_degree)?;
    let basis = basis_for(p, max_degree)?;
    let t = sl2_triple(&basis)?;
    let summary = graded_kernel("F", &[&t.f], max_degree)?;
    summary
        .vectors
        .into_iter()
        .map(|v| {
            let hv = block_at(&t.h, v.degree)?.mul_vec(&v.coords)?;
            let i = v
                .coords
                .iter()
                .position(|x| !x.is_zero())
                .expect("kernel vectors are nonzero");
            let weight = &hv[i] / &v.coords[i];
            if hv.iter().zip(&v.coords).any(|(a, b)| *a != &weight * b) {
                return Err(Error::Invariant(format!(
                    "lowest-weight vector in degree {} is not an H-eigenvector",
                    v.degree
                )));
            }
            Ok(LowestWeightVector {
                degree: v.degree,
                weight,
                coords: v.coords,
            })
        })
        .collect()
}

/// Exactly `k + 1` lowest-weight vectors `|0, A_2⟩`, weights `A_2 + 1 - k/2`.
pub fn check_lowest_weights(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let vectors = lowest_weight_decomposition(p, max_degree)?;
    let basis = basis_for(p, max_degree)?;
    let mut report = VerificationReport::new("sl2: lowest-weight vectors |0,A2>", p, max_degree);
    report.fact("count", vectors.len().to_string());
    report.fact(
        "weights",
        vectors
            .iter()
            .map(|v| q_string(&v.weight))
            .collect::<Vec<_>>()
            .join(", "),
    );
    report.check();
    if vectors.len() != p.k() + 1 {
        return Ok(report.fail(
            Witness::default()
                .expected((p.k() + 1).to_string())
                .actual(vectors.len().to_string())
                .note("number of lowest-weight vectors"),
        ));
    }
    let shift = frac(p.k() as i64, 2);
    for v in &vectors {
        report.check();
        let stratum = basis.stratum(v.degree as i64);
        let support: Vec<_> = (0..stratum.len())
            .filter(|&i| !v.coords[i].is_zero())
            .collect();
        let label = stratum[support[0]].to_string();
        if support.len() != 1 || stratum[support[0]].entries()[0] != 0 {
            return Ok(report.fail(
                Witness::at_degree(v.degree as i64)
                    .labels(vec![label])
                    .note("lowest-weight vector is not a single class |0,A2>"),
            ));
        }
        let want = int(v.degree as i64 + 1) - &shift;
        if v.weight != want {
            return Ok(report.fail(
                Witness::at_degree(v.degree as i64)
                    .labels(vec![label])
                    .expected(q_string(&want))
                    .actual(q_string(&v.weight))
                    .note("H-weight"),
            ));
        }
    }
    Ok(report)
}

/// Fixed-point counts against the coefficients of `[n-1+k choose n-1]_q / (1 - q^n)`;
/// for `n = 2`, odd `k` also the total Betti numbers of each Hilbert scheme.
pub fn check_euler(p: &Params, max_degree: usize) -> Result<VerificationReport> {
    let basis = basis_for(p, max_degree)?;
    let series = euler_series(p, max_degree)?;
    let counts = basis.counts();
    let mut report = VerificationReport::new("euler: fixed points = q-series", p, max_degree);
    report.fact("counts", format!("{counts:?}"));
    for (d, &c) in counts.iter().enumerate() {
        report.check();
        if c as i128 != series.coeff(d) {
            return Ok(report.fail(
                Witness::at_degree(d as i64)
                    .expected(series.coeff(d).to_string())
                    .actual(c.to_string())
                    .note("fixed-point count differs from the series coefficient"),
            ));
        }
        if p.n() == 2 && p.k() % 2 == 1 {
            report.check();
            let betti = betti_2k(p.k(), -(d as i64))?.eval_at_one();
            if betti != c as i128 {
                return Ok(report.fail(
                    Witness::at_degree(d as i64)
                        .expected(c.to_string())
                        .actual(betti.to_string())
                        .note("total Betti number differs from the fixed-point count"),
                ));
            }
        }
    }
    Ok(report)
}
