//! Monopole operators acting on the fixed-point basis.
//!
//! All operators are assembled from the localization formula for minuscule
//! monopoles: for a source class `|A⟩` and each `λ'` in the Weyl orbit of `λ`,
//! the coefficient of `|A + λ'⟩` is a ratio of products of linear forms in the
//! weights `φ`, `m`, `ħ`, all evaluated at the target `A + λ'`.

mod bracket;
mod dress;
pub(crate) mod graded;
mod monopole;

pub use bracket::{abelian_monopole_coeff, bracket_pow, excess_factor, tangent_euler};
pub use dress::DressPolynomial;
pub use graded::{EntryDifference, GradedOperator, GradedVector};
pub use monopole::{
    minuscule_monopole, monopole_coefficient, operator_e, operator_f, operator_h, operator_x,
    operator_y, sl2_triple, weyl_orbit, MinusculeCoweight, MonopoleCoefficient, Sl2Triple,
};
