//! Anisotropic parts, Witt indices and value sets.

mod group_ring;

use std::collections::BTreeSet;

pub use group_ring::{group_ring_equal, to_group_ring, Coeffs, GroupRing, GroupRingElt, WittVec};

use crate::error::{Error, Result};
use crate::qform::{decompose_over_split, DiagonalForm};
use crate::sqclass::{Base, FieldDesc, Level, SquareClass};

/// A Witt class, stored as its canonical anisotropic representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittClass {
    repr: DiagonalForm,
}

impl WittClass {
    pub fn of(form: &DiagonalForm) -> WittClass {
        WittClass { repr: anisotropic_part(form) }
    }

    pub fn repr(&self) -> &DiagonalForm {
        &self.repr
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }
}

fn base_case(base: Base, entries: &[u32]) -> Vec<u32> {
    let q = entries.iter().filter(|&&b| b & 1 != 0).count();
    let p = entries.len() - q;
    match base {
        Base::F3 => match (p as i64 - q as i64).rem_euclid(4) {
            0 => vec![],
            1 => vec![0],
            2 => vec![0, 0],
            _ => vec![1],
        },
        Base::R => {
            if p >= q {
                vec![0; p - q]
            } else {
                vec![1; q - p]
            }
        }
        Base::C => {
            if entries.len() % 2 == 1 {
                vec![0]
            } else {
                vec![]
            }
        }
        // Each of the two unit classes is killed in pairs.
        Base::SquareMinusOne => {
            let mut v = Vec::new();
            if p % 2 == 1 {
                v.push(0);
            }
            if q % 2 == 1 {
                v.push(1);
            }
            v
        }
    }
}

fn springer(base: Base, entries: Vec<u32>, var: usize) -> Vec<u32> {
    if var == 0 {
        return base_case(base, &entries);
    }
    let bit = 1u32 << var;
    let (second, first): (Vec<u32>, Vec<u32>) = entries.into_iter().partition(|&b| b & bit != 0);
    let mut out = springer(base, first, var - 1);
    let second = springer(base, second.into_iter().map(|b| b ^ bit).collect(), var - 1);
    out.extend(second.into_iter().map(|b| b | bit));
    out
}

/// Anisotropic part by Springer's theorem: split off the last variable,
/// recurse on both residue forms and reassemble.
pub fn anisotropic_part(form: &DiagonalForm) -> DiagonalForm {
    let f = form.field();
    let bits = form.entries().iter().map(|a| a.0).collect();
    let out = springer(f.base, bits, f.nvars);
    DiagonalForm::from_unchecked(*f, out.into_iter().map(SquareClass).collect())
}

pub fn witt_index(form: &DiagonalForm) -> usize {
    (form.dim() - anisotropic_part(form).dim()) / 2
}

pub fn is_isotropic(form: &DiagonalForm) -> bool {
    anisotropic_part(form).dim() < form.dim()
}

pub fn is_hyperbolic(form: &DiagonalForm) -> bool {
    anisotropic_part(form).is_zero()
}

/// Residue forms with respect to `t_i`, over the field without `t_i`.
pub fn residues(form: &DiagonalForm, i: usize) -> Result<(DiagonalForm, DiagonalForm)> {
    let f = form.field();
    if i == 0 || i > f.nvars {
        return Err(Error::IndexOutOfRange { index: i, nvars: f.nvars });
    }
    let small = FieldDesc { base: f.base, nvars: f.nvars - 1 };
    let low = (1u32 << i) - 1;
    let project = |b: u32| SquareClass((b & low) | ((b >> (i + 1)) << i));
    let mut first = Vec::new();
    let mut second = Vec::new();
    for a in form.entries() {
        if a.has_var(i) {
            second.push(project(a.0));
        } else {
            first.push(project(a.0));
        }
    }
    Ok((
        DiagonalForm::from_unchecked(small, first),
        DiagonalForm::from_unchecked(small, second),
    ))
}

/// Square classes represented by the form.
pub fn value_set(form: &DiagonalForm) -> BTreeSet<SquareClass> {
    let f = form.field();
    let an = anisotropic_part(form);
    if an.dim() < form.dim() {
        return f.classes().into_iter().collect();
    }
    let mut out = BTreeSet::new();
    for (a, m) in form.multiplicities() {
        out.insert(a);
        if m >= 2 && f.level() == Level::Two {
            out.insert(f.negate(a));
        }
    }
    out
}

/// `a ∈ D(phi)` iff `phi` or `phi ⊥ <-a>` is isotropic.
pub fn represents(a: SquareClass, form: &DiagonalForm) -> bool {
    let f = form.field();
    if is_isotropic(form) {
        return true;
    }
    let with = form
        .orth_sum(&DiagonalForm::one(*f, f.negate(a)))
        .expect("same field");
    is_isotropic(&with)
}

/// Data describing how `phi1 ⊥ phi2 ⊥ phi3` reaches its Witt index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeFormWitness {
    pub psi1: DiagonalForm,
    pub psi2: DiagonalForm,
    /// Extra classes, only at level 2; pairwise distinct and outside
    /// `D(phi1) ∪ D(phi2)`.
    pub xs: Vec<SquareClass>,
}

impl ThreeFormWitness {
    pub fn dim(&self) -> usize {
        self.psi1.dim() + self.psi2.dim() + self.xs.len()
    }
}

/// Decide `i_W(phi1 ⊥ phi2 ⊥ phi3) >= m` and return the witness forms
/// `psi1 ⊆ phi1`, `psi2 ⊆ phi2` and classes `x_i` with
/// `-(psi1 ⊥ psi2 ⊥ <x_1..x_r>) ⊆ phi3`.
pub fn three_form_witt_index_check(
    phi1: &DiagonalForm,
    phi2: &DiagonalForm,
    phi3: &DiagonalForm,
    m: usize,
) -> Result<(bool, ThreeFormWitness)> {
    let f = *phi1.field();
    let sum = phi1.orth_sum(phi2)?;
    let _ = sum.orth_sum(phi3)?;
    for (name, phi) in [("phi1", phi1), ("phi2", phi2), ("phi3", phi3), ("phi1 ⊥ phi2", &sum)] {
        if is_isotropic(phi) {
            return Err(Error::Precondition(format!("{name} must be anisotropic")));
        }
    }
    // Greedy common subform of phi1 ⊥ phi2 and -phi3; each step drops the
    // Witt index of the remaining sum by exactly one.
    let mut a = sum.clone();
    let mut b = phi3.negate();
    let mut psi = Vec::new();
    loop {
        let da = value_set(&a);
        let db = value_set(&b);
        let Some(x) = da.intersection(&db).next().copied() else { break };
        let one = DiagonalForm::one(f, x);
        a = a.complement(&one)?;
        b = b.complement(&one)?;
        psi.push(x);
    }
    let psi = DiagonalForm::from_unchecked(f, psi);
    let (psi1, psi2, psi3) = decompose_over_split(&psi, phi1, phi2)?;
    let w = ThreeFormWitness { psi1, psi2, xs: psi3.entries().to_vec() };
    Ok((w.dim() >= m, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_form;

    fn f(field: &FieldDesc, s: &str) -> DiagonalForm {
        parse_form(s, field).unwrap()
    }

    #[test]
    fn springer_examples() {
        let f3 = FieldDesc::f3(0);
        assert!(anisotropic_part(&f(&f3, "<1,-1>")).is_zero());
        assert_eq!(anisotropic_part(&f(&f3, "<1,1,1>")), f(&f3, "<-1>"));
        let f31 = FieldDesc::f3(1);
        assert_eq!(anisotropic_part(&f(&f31, "<1,1,t1,t1,t1>")), f(&f31, "<1,1,-t1>"));
        let r = FieldDesc::real(0);
        assert_eq!(anisotropic_part(&f(&r, "<1,1,1,-1>")), f(&r, "<1,1>"));
        let c = FieldDesc::complex(1);
        assert_eq!(anisotropic_part(&f(&c, "<1,1,1,t1,t1>")), f(&c, "<1>"));
    }

    #[test]
    fn witt_index_examples() {
        let f3 = FieldDesc::f3(0);
        assert_eq!(witt_index(&f(&f3, "<1,-1>")), 1);
        assert_eq!(witt_index(&f(&f3, "<1,1,1>")), 1);
        let k = FieldDesc::f3(3);
        for s in ["<<t1,t2,t3>>", "<<-1,t1,t2>>", "<<t1,t1,t2>>", "<<-t1,t1*t2,-1>>"] {
            let i = witt_index(&f(&k, s));
            assert!(i == 0 || i == 4, "{s}: {i}");
        }
    }

    #[test]
    fn residue_examples() {
        let k = FieldDesc::f3(2);
        let k1 = FieldDesc::f3(1);
        let (a, b) = residues(&f(&k, "<1,t2,t1*t2>"), 2).unwrap();
        assert_eq!((a, b), (f(&k1, "<1>"), f(&k1, "<1,t1>")));
        let (a, b) = residues(&f(&k, "<1,-1>"), 1).unwrap();
        assert_eq!((a.dim(), b.dim()), (2, 0));
        let (a, b) = residues(&f(&k, "<t1>"), 1).unwrap();
        assert_eq!((a.dim(), b), (0, f(&k1, "<1>")));
        // Projection removes the bit and shifts the higher variables down.
        let (_, b) = residues(&f(&k, "<t1*t2>"), 1).unwrap();
        assert_eq!(b, f(&k1, "<t1>"));
        assert!(matches!(residues(&f(&k, "<1>"), 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn value_set_examples() {
        let f3 = FieldDesc::f3(1);
        let d: Vec<_> = value_set(&f(&f3, "<t1,t1>")).into_iter().collect();
        assert_eq!(d, vec![SquareClass(2), SquareClass(3)]);
        let r = FieldDesc::real(0);
        assert_eq!(value_set(&f(&r, "<1,1>")).len(), 1);
        let c = FieldDesc::complex(1);
        assert_eq!(value_set(&f(&c, "<1,t1>")).len(), 2);
        assert_eq!(value_set(&f(&f3, "<1,-1>")).len(), 4);
        assert!(represents(SquareClass(1), &f(&f3, "<1,1>")));
        assert!(!represents(SquareClass(1), &f(&r, "<1,1>")));
    }

    #[test]
    fn three_form_examples() {
        let k = FieldDesc::f3(2);
        let p1 = f(&k, "<1,t1>");
        let p2 = f(&k, "<t2>");
        let (ok, w) = three_form_witt_index_check(&p1, &p2, &f(&k, "<t1*t2>"), 0).unwrap();
        assert!(ok);
        assert_eq!(w.dim(), 0);
        let p3 = p1.orth_sum(&p2).unwrap().negate();
        let (ok, w) = three_form_witt_index_check(&p1, &p2, &p3, 3).unwrap();
        assert!(ok);
        assert_eq!((w.psi1, w.psi2), (p1, p2));
    }
}
