//! Pfister numbers, their bounds and the classification procedures.

pub mod bounds;
pub mod certificate;
pub mod classify;
pub mod divisibility;
pub mod generators;
mod linalg;
pub mod random;
pub mod search;

pub use bounds::{
    applicable_bound, bounds_table, faulhaber_sum, poly_bound, three_pfister_bound, two_pfister_bound,
    BoundPoly, BoundsRow,
};
pub use certificate::{witt_class_hash, PfisterCertificate};
pub use classify::{classify14, classify16, find_gp2_subform, gp2_isometric_decomposition};
pub use divisibility::{common_slot, divisible_by_pfister, Divisibility};
pub use generators::enumerate_GPn_classes;
pub use search::{pfister_number, SearchOptions};

use crate::error::{Error, Result};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{FieldDesc, SquareClass};

/// `<1, t1, ..., tn, (-1)^((n+2)/2) t1...tn>`.
#[allow(non_snake_case)]
pub fn generic_I2_form(field: &FieldDesc, n: usize) -> Result<DiagonalForm> {
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("generic I^2 form needs even n, got {n}")));
    }
    if n > field.nvars {
        return Err(Error::InsufficientVariables { needed: n, have: field.nvars });
    }
    let mut e = vec![SquareClass::ONE];
    let mut prod = SquareClass::ONE;
    for i in 1..=n {
        let t = field.var(i)?;
        e.push(t);
        prod *= t;
    }
    e.push(if (n / 2).is_multiple_of(2) { field.negate(prod) } else { prod });
    DiagonalForm::new(*field, e)
}

/// `<<t_{m+1}>> ⊗ generic_I2_form(m)` with `m = 2*floor(d/4) - 2`, whose
/// `GP_3` is `m/2 = floor(d/4) - 1`.
pub fn lower_bound_generic(field: &FieldDesc, d: usize) -> Result<(DiagonalForm, usize)> {
    if d < 8 {
        return Err(Error::Precondition(format!("lower bound form needs d >= 8, got {d}")));
    }
    let m = 2 * (d / 4) - 2;
    if field.nvars < m + 1 {
        return Err(Error::InsufficientVariables { needed: m + 1, have: field.nvars });
    }
    let psi = generic_I2_form(field, m)?;
    let t = field.var(m + 1)?;
    let phi = PfisterSpec::unscaled(vec![t]).expand(field).tensor(&psi)?;
    Ok((phi, m / 2))
}
