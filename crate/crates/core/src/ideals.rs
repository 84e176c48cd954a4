//! Powers of the fundamental ideal, residue decompositions and scalar
//! extensions.

use crate::error::{Error, Result};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{find_basis_change, Base, ClassAutomorphism, FieldDesc, SquareClass};
use crate::witt::{anisotropic_part, value_set};

fn negate_bits(base: Base, b: u32) -> u32 {
    match base {
        Base::F3 | Base::R => b ^ 1,
        Base::C | Base::SquareMinusOne => b,
    }
}

fn in_base(base: Base, entries: &[u32], n: u32) -> bool {
    let q = entries.iter().filter(|&&b| b & 1 != 0).count() as i64;
    let p = entries.len() as i64 - q;
    let even = entries.len().is_multiple_of(2);
    match base {
        Base::C => even,
        Base::SquareMinusOne => {
            if n == 1 {
                even
            } else {
                p % 2 == 0 && q % 2 == 0
            }
        }
        Base::R => {
            if n >= 62 {
                p == q
            } else {
                (p - q).rem_euclid(1i64 << n) == 0
            }
        }
        Base::F3 => {
            if n == 1 {
                even
            } else {
                (p - q).rem_euclid(4) == 0
            }
        }
    }
}

fn in_rec(base: Base, entries: Vec<u32>, var: usize, n: u32) -> bool {
    if n == 0 {
        return true;
    }
    if var == 0 {
        return in_base(base, &entries, n);
    }
    let bit = 1u32 << var;
    let (second, first): (Vec<u32>, Vec<u32>) = entries.into_iter().partition(|&b| b & bit != 0);
    let second: Vec<u32> = second.into_iter().map(|b| b ^ bit).collect();
    let mut diff = first;
    diff.extend(second.iter().map(|&b| negate_bits(base, b)));
    in_rec(base, second, var - 1, n - 1) && in_rec(base, diff, var - 1, n)
}

/// Membership in `I^n` via `phi = (phi1 - phi2) + <<-t>> phi2` on residues.
#[allow(non_snake_case)]
pub fn in_In(form: &DiagonalForm, n: u32) -> bool {
    let f = form.field();
    in_rec(f.base, form.entries().iter().map(|a| a.0).collect(), f.nvars, n)
}

/// The largest `n <= cap` with `form ∈ I^n`.
pub fn ideal_depth(form: &DiagonalForm, cap: u32) -> u32 {
    (0..=cap).take_while(|&n| in_In(form, n)).last().unwrap_or(0)
}

/// `phi = sigma ⊥ <<-t>> ⊗ tau` in the Witt ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnimodularSplit {
    pub t: SquareClass,
    pub sigma: DiagonalForm,
    pub tau: DiagonalForm,
}

impl UnimodularSplit {
    /// `sigma ⊥ tau ⊥ t*tau`, Witt equivalent to the decomposed form.
    pub fn recombine(&self) -> DiagonalForm {
        self.sigma
            .orth_sum(&self.tau)
            .and_then(|s| s.orth_sum(&self.tau.scale(self.t)))
            .expect("same field")
    }

    fn map_classes(&self, m: &ClassAutomorphism) -> UnimodularSplit {
        UnimodularSplit {
            t: m.apply(self.t),
            sigma: self.sigma.map_classes(m),
            tau: self.tau.map_classes(m),
        }
    }
}

/// Split along `t_i` after changing the uniformizer to `u * t_i`, where `u`
/// ranges over `D(phi1) * D(phi2)` and minimizes `dim sigma` (ties: smallest `u`).
pub fn decompose_unimodular(form: &DiagonalForm, i: usize) -> Result<UnimodularSplit> {
    let f = *form.field();
    if i == 0 || i > f.nvars {
        return Err(Error::IndexOutOfRange { index: i, nvars: f.nvars });
    }
    let phi = anisotropic_part(form);
    let bit = 1u32 << i;
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &a in phi.entries() {
        if a.0 & bit != 0 {
            second.push(SquareClass(a.0 ^ bit));
        } else {
            first.push(a);
        }
    }
    if first.is_empty() || second.is_empty() {
        return Err(Error::HyperbolicResidue(i));
    }
    let phi1 = DiagonalForm::from_unchecked(f, first);
    let phi2 = DiagonalForm::from_unchecked(f, second);
    let d1 = value_set(&phi1);
    let d2 = value_set(&phi2);
    let mut us: Vec<SquareClass> = d1.iter().flat_map(|&a| d2.iter().map(move |&b| a * b)).collect();
    us.sort();
    us.dedup();
    let neg2 = phi2.negate();
    let (u, sigma) = us
        .into_iter()
        .map(|u| (u, anisotropic_part(&phi1.orth_sum(&neg2.scale(u)).expect("same field"))))
        .min_by_key(|(u, s)| (s.dim(), *u))
        .expect("value sets are nonempty");
    Ok(UnimodularSplit { t: SquareClass(u.0 | bit), sigma, tau: phi2.scale(u) })
}

/// Decompose along the valuation in which `a` becomes the last uniformizer.
pub fn rigid_decompose(form: &DiagonalForm, a: SquareClass) -> Result<UnimodularSplit> {
    let f = *form.field();
    let m = find_basis_change(&f, a)?;
    let inv = m.inverse().expect("automorphism");
    let split = decompose_unimodular(&form.map_classes(&m), f.nvars)?;
    Ok(split.map_classes(&inv))
}

/// Representations over `K` read over `K((t))`; the class bits are unchanged.
pub fn lift_representation(
    residue_field: &FieldDesc,
    reps: &[PfisterSpec],
) -> (FieldDesc, Vec<PfisterSpec>) {
    (residue_field.with_extra_vars(1), reps.to_vec())
}

pub fn extend_fresh_variable(form: &DiagonalForm, k: usize) -> DiagonalForm {
    form.extend_fresh_variable(k)
}

/// Scalar extension `F(sqrt a)`, acting on square classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticExtension {
    pub source: FieldDesc,
    pub target: FieldDesc,
    map: Option<ClassAutomorphism>,
    clear: u32,
}

impl QuadraticExtension {
    pub fn new(field: &FieldDesc, a: SquareClass) -> Result<Self> {
        field.check(a)?;
        if a == SquareClass::ONE {
            return Err(Error::SquareClassIsOne);
        }
        if !a.is_unit() {
            let m = find_basis_change(field, a)?;
            return Ok(QuadraticExtension {
                source: *field,
                target: *field,
                map: Some(m),
                clear: 1 << field.nvars,
            });
        }
        let base = match field.base {
            Base::F3 => Base::SquareMinusOne,
            Base::R => Base::C,
            Base::SquareMinusOne => Base::SquareMinusOne,
            Base::C => unreachable!("C has no nontrivial unit class"),
        };
        Ok(QuadraticExtension {
            source: *field,
            target: FieldDesc { base, nvars: field.nvars },
            map: None,
            clear: 1,
        })
    }

    pub fn image_class(&self, a: SquareClass) -> SquareClass {
        let b = match &self.map {
            Some(m) => m.apply(a),
            None => a,
        };
        SquareClass(b.0 & !self.clear)
    }

    pub fn image_form(&self, form: &DiagonalForm) -> DiagonalForm {
        DiagonalForm::from_unchecked(
            self.target,
            form.entries().iter().map(|&a| self.image_class(a)).collect(),
        )
    }
}

pub fn extend_scalars_quadratic(
    form: &DiagonalForm,
    a: SquareClass,
) -> Result<(FieldDesc, DiagonalForm)> {
    let ext = QuadraticExtension::new(form.field(), a)?;
    Ok((ext.target, ext.image_form(form)))
}
