//! Divisibility by Pfister forms and common slots.

use std::collections::HashSet;

use super::linalg::solvable;
use crate::error::{Error, Result};
use crate::ideals::extend_scalars_quadratic;
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::SquareClass;
use crate::witt::{anisotropic_part, is_hyperbolic, is_isotropic, value_set, GroupRing};

/// `phi ≅ <<slots>> ⊗ quotient`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    pub quotient: Option<DiagonalForm>,
}

/// Membership of `phi` in the principal ideal of `<<slots>>` in the group ring.
pub fn divisible_linear(phi: &DiagonalForm, slots: &[SquareClass]) -> bool {
    let f = phi.field();
    let ring = GroupRing::new(f);
    let pi = ring.counts(&ring.from_pfister(&PfisterSpec::unscaled(slots.to_vec())));
    let target = ring.counts(&ring.from_form(phi));
    let size = ring.size();
    // Row i, column j: coefficient of pi at i*j, with the sign of the
    // unit bit when H omits -1.
    let a: Vec<Vec<i64>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let (k, neg) = ring.index(ring.class_at(i) * ring.class_at(j));
                    if neg {
                        -pi[k]
                    } else {
                        pi[k]
                    }
                })
                .collect()
        })
        .collect();
    solvable(&a, &target, ring.modulus())
}

/// Greedy peeling: take `x` in `D(phi)` with `x<<slots>> ⊆ phi` and recurse
/// on the complement, backtracking on failure.
pub fn divisible_peeling(phi: &DiagonalForm, slots: &[SquareClass]) -> Result<Option<DiagonalForm>> {
    let f = *phi.field();
    let pi = PfisterSpec::unscaled(slots.to_vec()).expand(&f);
    if is_isotropic(&pi) {
        return Ok(phi.is_zero().then(|| DiagonalForm::zero(f)));
    }
    let mut failed = HashSet::new();
    let mut out = Vec::new();
    Ok(peel(phi, &pi, &mut out, &mut failed)?.then(|| DiagonalForm::from_unchecked(f, out)))
}

fn peel(
    phi: &DiagonalForm,
    pi: &DiagonalForm,
    out: &mut Vec<SquareClass>,
    failed: &mut HashSet<DiagonalForm>,
) -> Result<bool> {
    if phi.is_zero() {
        return Ok(true);
    }
    if !phi.dim().is_multiple_of(pi.dim()) || failed.contains(phi) {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    for x in value_set(phi) {
        let piece = pi.scale(x);
        if !seen.insert(piece.clone()) || !piece.is_subform(phi)? {
            continue;
        }
        let rest = phi.complement(&piece)?;
        out.push(x);
        if peel(&rest, pi, out, failed)? {
            return Ok(true);
        }
        out.pop();
    }
    failed.insert(phi.clone());
    Ok(false)
}

/// Whether `phi` splits over `F(sqrt a)`.
pub fn divisible_by_extension(phi: &DiagonalForm, a: SquareClass) -> Result<bool> {
    match extend_scalars_quadratic(phi, a) {
        Ok((_, image)) => Ok(is_hyperbolic(&image)),
        Err(Error::SquareClassIsOne) => Ok(phi.is_zero()),
        Err(e) => Err(e),
    }
}

/// Decide `phi ≅ <<slots>> ⊗ rho`; the linear and peeling verdicts must agree.
pub fn divisible_by_pfister(phi: &DiagonalForm, slots: &[SquareClass]) -> Result<Divisibility> {
    let f = phi.field();
    for &a in slots {
        f.check(a)?;
    }
    if is_isotropic(phi) {
        return Err(Error::IsotropicInput(crate::syntax::print_form(phi)));
    }
    let linear = divisible_linear(phi, slots);
    let quotient = divisible_peeling(phi, slots)?;
    if linear != quotient.is_some() {
        return Err(Error::InternalContradiction(format!(
            "divisibility of {phi}: linear system says {linear}, peeling says {}",
            quotient.is_some()
        )));
    }
    Ok(Divisibility { divisible: linear, quotient })
}

/// Some `d` with both forms divisible by `<<d>>`.
pub fn common_slot(pi1: &PfisterSpec, pi2: &PfisterSpec, field: &crate::sqclass::FieldDesc) -> Option<SquareClass> {
    let a = anisotropic_part(&pi1.expand(field));
    let b = anisotropic_part(&pi2.expand(field));
    field
        .classes()
        .into_iter()
        .filter(|&d| d != SquareClass::ONE)
        .find(|&d| divisible_linear(&a, &[d]) && divisible_linear(&b, &[d]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sqclass::FieldDesc;
    use crate::syntax::parse_form;

    fn f(field: &FieldDesc, s: &str) -> DiagonalForm {
        parse_form(s, field).unwrap()
    }

    #[test]
    fn examples() {
        let k = FieldDesc::f3(2);
        let t1 = SquareClass(2);
        let phi = f(&k, "<1,t1,t2,t1*t2>");
        let d = divisible_by_pfister(&phi, &[k.negate(t1)]).unwrap();
        assert!(d.divisible);
        let q = d.quotient.unwrap();
        assert_eq!(q.tensor(&f(&k, "<1,t1>")).unwrap(), phi);
        assert!(!divisible_by_pfister(&f(&k, "<1,-t1,t2,t1*t2>"), &[t1]).unwrap().divisible);
        assert!(!divisible_by_pfister(&phi, &[t1]).unwrap().divisible);
        assert!(matches!(
            divisible_by_pfister(&f(&k, "<1,-1>"), &[t1]),
            Err(Error::IsotropicInput(_))
        ));
        assert!(divisible_by_pfister(&DiagonalForm::zero(k), &[t1]).unwrap().divisible);
    }

    #[test]
    fn constructed_products_divide() {
        let k = FieldDesc::real(2);
        let phi = f(&k, "<<-1,t1>>").tensor(&f(&k, "<1,t2>")).unwrap();
        let phi = anisotropic_part(&phi);
        let d = divisible_by_pfister(&phi, &[k.minus_one(), SquareClass(2)]).unwrap();
        assert!(d.divisible);
    }

    #[test]
    fn common_slots() {
        let k = FieldDesc::f3(4);
        let c = |i: u32| SquareClass(1 << i);
        let p1 = PfisterSpec::unscaled(vec![c(1), c(2)]);
        let p2 = PfisterSpec::unscaled(vec![c(1), c(3)]);
        let d = common_slot(&p1, &p2, &k).unwrap();
        let e1 = p1.expand(&k);
        assert!(divisible_linear(&e1, &[d]));
        let p3 = PfisterSpec::unscaled(vec![c(3), c(4)]);
        assert_eq!(common_slot(&p1, &p3, &k), None);
        assert!(common_slot(&p1, &p1, &k).is_some());
    }

    #[test]
    fn one_slot_matches_extension() {
        let k = FieldDesc::f3(2);
        for s in ["<1,t1,t2,t1*t2>", "<1,-t1>", "<1,1>", "<t1,t2>", "<1,t1,-t2,t1*t2>"] {
            let phi = f(&k, s);
            for a in k.classes() {
                let lin = divisible_linear(&phi, &[a]);
                assert_eq!(lin, divisible_by_extension(&phi, a).unwrap(), "{s} by {a:?}");
                assert_eq!(lin, divisible_peeling(&phi, &[a]).unwrap().is_some());
            }
        }
    }
}
