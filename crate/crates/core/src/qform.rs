//! Diagonal quadratic forms over a rigid-field model.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::sqclass::{ClassAutomorphism, FieldDesc, Level, SquareClass};
use crate::witt;

/// A multiset of square classes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    field: FieldDesc,
    entries: Vec<SquareClass>,
}

impl DiagonalForm {
    pub fn new(field: FieldDesc, entries: Vec<SquareClass>) -> Result<Self> {
        for &a in &entries {
            field.check(a)?;
        }
        Ok(Self::from_unchecked(field, entries))
    }

    /// Caller guarantees every entry belongs to `field`.
    pub(crate) fn from_unchecked(field: FieldDesc, mut entries: Vec<SquareClass>) -> Self {
        entries.sort_unstable();
        DiagonalForm { field, entries }
    }

    pub fn zero(field: FieldDesc) -> Self {
        DiagonalForm { field, entries: Vec::new() }
    }

    pub fn one(field: FieldDesc, a: SquareClass) -> Self {
        DiagonalForm { field, entries: vec![a] }
    }

    pub fn hyperbolic_plane(field: FieldDesc) -> Self {
        Self::from_unchecked(field, vec![SquareClass::ONE, field.minus_one()])
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn entries(&self) -> &[SquareClass] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn same_field(&self, other: &DiagonalForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn orth_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.same_field(other)?;
        let mut e = self.entries.clone();
        e.extend_from_slice(&other.entries);
        Ok(Self::from_unchecked(self.field, e))
    }

    pub fn scale(&self, c: SquareClass) -> DiagonalForm {
        Self::from_unchecked(self.field, self.entries.iter().map(|&a| a * c).collect())
    }

    pub fn negate(&self) -> DiagonalForm {
        self.scale(self.field.minus_one())
    }

    pub fn tensor(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.same_field(other)?;
        let mut e = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.entries {
            for &b in &other.entries {
                e.push(a * b);
            }
        }
        Ok(Self::from_unchecked(self.field, e))
    }

    pub fn determinant(&self) -> SquareClass {
        self.entries.iter().fold(SquareClass::ONE, |acc, &a| acc * a)
    }

    /// `(-1)^(d(d-1)/2) * det`.
    pub fn discriminant(&self) -> SquareClass {
        let d = self.dim();
        let det = self.determinant();
        if (d * d.saturating_sub(1) / 2) % 2 == 1 {
            self.field.negate(det)
        } else {
            det
        }
    }

    pub fn multiplicities(&self) -> BTreeMap<SquareClass, usize> {
        let mut m = BTreeMap::new();
        for &a in &self.entries {
            *m.entry(a).or_insert(0) += 1;
        }
        m
    }

    pub fn contains_entry(&self, a: SquareClass) -> bool {
        self.entries.binary_search(&a).is_ok()
    }

    /// Unique diagonalization of an anisotropic form: sorted, and at level 2
    /// every pair `<x,x>` written with the smaller of `x`, `-x`.
    pub fn canonicalize(&self) -> Result<DiagonalForm> {
        if witt::is_isotropic(self) {
            return Err(Error::IsotropicInput(crate::syntax::print_form(self)));
        }
        Ok(self.canonical_unchecked())
    }

    pub(crate) fn canonical_unchecked(&self) -> DiagonalForm {
        if self.field.level() != Level::Two {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.dim());
        for (a, m) in self.multiplicities() {
            let a = if m == 2 { a.min(self.field.negate(a)) } else { a };
            out.extend(std::iter::repeat_n(a, m));
        }
        Self::from_unchecked(self.field, out)
    }

    pub fn is_isometric(&self, other: &DiagonalForm) -> Result<bool> {
        self.same_field(other)?;
        if self.dim() != other.dim() {
            return Ok(false);
        }
        Ok(witt::is_hyperbolic(&self.orth_sum(&other.negate())?))
    }

    /// `self ⊆ phi` iff `i_W(phi ⊥ -self) >= dim self`.
    pub fn is_subform(&self, phi: &DiagonalForm) -> Result<bool> {
        self.same_field(phi)?;
        if self.dim() > phi.dim() {
            return Ok(false);
        }
        Ok(witt::witt_index(&phi.orth_sum(&self.negate())?) >= self.dim())
    }

    /// The form `rest` with `self ≅ rest ⊥ sub`, for a subform `sub`.
    pub fn complement(&self, sub: &DiagonalForm) -> Result<DiagonalForm> {
        if !sub.is_subform(self)? {
            return Err(Error::NotASubform(crate::syntax::print_form(sub)));
        }
        let rest = witt::anisotropic_part(&self.orth_sum(&sub.negate())?);
        if rest.dim() + sub.dim() != self.dim() {
            // `self` was isotropic; the Witt class alone does not fix the complement.
            let mut hyp = rest;
            while hyp.dim() + sub.dim() < self.dim() {
                hyp = hyp.orth_sum(&DiagonalForm::hyperbolic_plane(self.field))?;
            }
            return Ok(hyp);
        }
        Ok(rest)
    }

    /// Apply an automorphism of the class group to every entry.
    pub fn map_classes(&self, m: &ClassAutomorphism) -> DiagonalForm {
        Self::from_unchecked(self.field, self.entries.iter().map(|&a| m.apply(a)).collect())
    }

    /// Same entries over a field with `k` more variables.
    pub fn extend_fresh_variable(&self, k: usize) -> DiagonalForm {
        DiagonalForm { field: self.field.with_extra_vars(k), entries: self.entries.clone() }
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_form(self))
    }
}

/// `scalar * <<slots>>`, where `<<a>> = <1,-a>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PfisterSpec {
    pub scalar: SquareClass,
    pub slots: Vec<SquareClass>,
}

impl PfisterSpec {
    pub fn new(scalar: SquareClass, slots: Vec<SquareClass>) -> Self {
        PfisterSpec { scalar, slots }
    }

    pub fn unscaled(slots: Vec<SquareClass>) -> Self {
        PfisterSpec { scalar: SquareClass::ONE, slots }
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    pub fn expand(&self, field: &FieldDesc) -> DiagonalForm {
        let mut e = vec![self.scalar];
        for &a in &self.slots {
            let neg_a = field.negate(a);
            let mut next = Vec::with_capacity(e.len() * 2);
            next.extend_from_slice(&e);
            next.extend(e.iter().map(|&x| x * neg_a));
            e = next;
        }
        DiagonalForm::from_unchecked(*field, e)
    }

    /// The complement of `<1>` in the unscaled Pfister form.
    pub fn pure_part(&self, field: &FieldDesc) -> DiagonalForm {
        let full = PfisterSpec::unscaled(self.slots.clone()).expand(field);
        let mut e = full.entries.clone();
        let i = e.iter().position(|&a| a == SquareClass::ONE).unwrap();
        e.remove(i);
        DiagonalForm::from_unchecked(*field, e)
    }

    pub fn scaled(&self, c: SquareClass) -> PfisterSpec {
        PfisterSpec { scalar: self.scalar * c, slots: self.slots.clone() }
    }

    pub fn with_slot(&self, a: SquareClass) -> PfisterSpec {
        let mut slots = self.slots.clone();
        slots.push(a);
        PfisterSpec { scalar: self.scalar, slots }
    }

    pub fn map_classes(&self, m: &ClassAutomorphism) -> PfisterSpec {
        PfisterSpec {
            scalar: m.apply(self.scalar),
            slots: self.slots.iter().map(|&a| m.apply(a)).collect(),
        }
    }
}

/// Split `psi ⊆ phi1 ⊥ phi2` as `psi1 ⊥ psi2 ⊥ psi3` with `psi1 ⊆ phi1`,
/// `psi2 ⊆ phi2` and `D(psi3)` disjoint from `D(phi1) ∪ D(phi2)`.
pub fn decompose_over_split(
    psi: &DiagonalForm,
    phi1: &DiagonalForm,
    phi2: &DiagonalForm,
) -> Result<(DiagonalForm, DiagonalForm, DiagonalForm)> {
    psi.same_field(phi1)?;
    psi.same_field(phi2)?;
    let field = psi.field;
    let sum = phi1.orth_sum(phi2)?;
    if witt::is_isotropic(&sum) {
        return Err(Error::IsotropicSum);
    }
    if !psi.is_subform(&sum)? {
        return Err(Error::NotASubform(crate::syntax::print_form(psi)));
    }
    let mut rest = witt::anisotropic_part(psi);
    let mut p1 = witt::anisotropic_part(phi1);
    let mut p2 = witt::anisotropic_part(phi2);
    let mut out1 = Vec::new();
    let mut out2 = Vec::new();
    loop {
        let d_rest = witt::value_set(&rest);
        let d1 = witt::value_set(&p1);
        let d2 = witt::value_set(&p2);
        let pick = d_rest.iter().copied().find(|x| d1.contains(x) || d2.contains(x));
        let Some(x) = pick else { break };
        let one = DiagonalForm::one(field, x);
        if d1.contains(&x) {
            p1 = p1.complement(&one)?;
            out1.push(x);
        } else {
            p2 = p2.complement(&one)?;
            out2.push(x);
        }
        rest = rest.complement(&one)?;
    }
    Ok((
        DiagonalForm::from_unchecked(field, out1),
        DiagonalForm::from_unchecked(field, out2),
        rest,
    ))
}
