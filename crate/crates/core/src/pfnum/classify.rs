//! Witness-producing classification of 14- and 16-dimensional `I^3` forms.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::Serialize;

use super::certificate::PfisterCertificate;
use super::search::{pfister_number, two_term_certificates, SearchOptions};
use crate::error::{Error, Result};
use crate::ideals::{in_In, QuadraticExtension};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::SquareClass;
use crate::syntax::{print_form, print_pfister};
use crate::witt::{is_hyperbolic, is_isotropic, value_set, GroupRing};

/// Visit every `GP_2` subform `<a,b,c,abc> = a<<-ab,-ac>>` of `phi` with
/// `a <= b <= c <= abc`, together with its complement.
pub fn for_each_gp2_subform<B>(
    phi: &DiagonalForm,
    mut visit: impl FnMut(PfisterSpec, DiagonalForm) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let f = *phi.field();
    if is_isotropic(phi) {
        return Err(Error::IsotropicInput(print_form(phi)));
    }
    if phi.dim() < 4 {
        return Ok(None);
    }
    let ring = GroupRing::new(&f);
    let whole = ring.from_form(phi);
    let target = phi.dim() - 4;
    let d: Vec<SquareClass> = value_set(phi).into_iter().collect();
    for (i, &a) in d.iter().enumerate() {
        for (j, &b) in d.iter().enumerate().skip(i) {
            for &c in &d[j..] {
                let e = a * b * c;
                if e < c || !d.contains(&e) {
                    continue;
                }
                let sigma = DiagonalForm::from_unchecked(f, vec![a, b, c, e]);
                if whole.diff_dim(&ring.from_form(&sigma)) != target {
                    continue;
                }
                let spec = PfisterSpec::new(a, vec![f.negate(a * b), f.negate(a * c)]);
                if let ControlFlow::Break(r) = visit(spec, phi.complement(&sigma)?) {
                    return Ok(Some(r));
                }
            }
        }
    }
    Ok(None)
}

/// Some `sigma ∈ GP_2` with `sigma ⊆ phi`, and its complement.
pub fn find_gp2_subform(phi: &DiagonalForm) -> Result<Option<(PfisterSpec, DiagonalForm)>> {
    for_each_gp2_subform(phi, |s, c| ControlFlow::Break((s, c)))
}

/// `phi ≅ sigma_1 ⊥ ... ⊥ sigma_k` with every `sigma_i ∈ GP_2`.
pub fn gp2_isometric_decomposition(phi: &DiagonalForm) -> Result<Option<Vec<PfisterSpec>>> {
    let mut failed = HashSet::new();
    gp2_decompose(phi, &mut failed)
}

fn gp2_decompose(
    phi: &DiagonalForm,
    failed: &mut HashSet<DiagonalForm>,
) -> Result<Option<Vec<PfisterSpec>>> {
    if phi.is_zero() {
        return Ok(Some(Vec::new()));
    }
    if !phi.dim().is_multiple_of(4) || failed.contains(phi) {
        return Ok(None);
    }
    let mut inner: Result<()> = Ok(());
    let found = for_each_gp2_subform(phi, |s, rest| match gp2_decompose(&rest, failed) {
        Ok(Some(mut tail)) => {
            tail.insert(0, s);
            ControlFlow::Break(tail)
        }
        Ok(None) => ControlFlow::Continue(()),
        Err(e) => {
            inner = Err(e);
            ControlFlow::Break(Vec::new())
        }
    })?;
    inner?;
    if found.is_none() {
        failed.insert(phi.clone());
    }
    Ok(found)
}

fn check_input(phi: &DiagonalForm, dim: usize) -> Result<()> {
    if phi.dim() != dim {
        return Err(Error::Precondition(format!("expected dimension {dim}, got {}", phi.dim())));
    }
    if is_isotropic(phi) {
        return Err(Error::IsotropicInput(print_form(phi)));
    }
    if !in_In(phi, 3) {
        return Err(Error::NotInIdeal(3));
    }
    Ok(())
}

/// `phi ≅ s(tau_1' ⊥ -tau_2')` with `tau_i` unscaled 3-fold Pfister forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurePartShape {
    pub s: SquareClass,
    pub tau1: PfisterSpec,
    pub tau2: PfisterSpec,
}

#[derive(Debug, Clone)]
pub struct Classify14Report {
    pub gp3: usize,
    pub certificate: PfisterCertificate,
    pub two_term_certificates: usize,
    pub subform: Option<(PfisterSpec, DiagonalForm)>,
    pub pure_part_shape: Option<PurePartShape>,
    /// Condition (i) holds iff condition (iii) does.
    pub equivalence_holds: bool,
    /// No 2-term certificate had the pure-part shape.
    pub flagged: bool,
}

const PAIR_LIMIT: usize = 4096;

fn pure_part_shape(
    phi: &DiagonalForm,
    pairs: &[(PfisterSpec, PfisterSpec)],
) -> Result<Option<PurePartShape>> {
    let f = *phi.field();
    for (p1, p2) in pairs {
        let tau1 = PfisterSpec::unscaled(p1.slots.clone());
        let tau2 = PfisterSpec::unscaled(p2.slots.clone());
        let d1 = value_set(&tau1.expand(&f));
        let d2 = value_set(&tau2.expand(&f));
        let s = d1
            .iter()
            .map(|&x| p1.scalar * x)
            .find(|&s| d2.iter().any(|&y| f.negate(p2.scalar * y) == s));
        let Some(s) = s else { continue };
        let shape = tau1.pure_part(&f).orth_sum(&tau2.pure_part(&f).negate())?.scale(s);
        if shape.is_isometric(phi)? {
            return Ok(Some(PurePartShape { s, tau1, tau2 }));
        }
    }
    Ok(None)
}

pub fn classify14(phi: &DiagonalForm) -> Result<Classify14Report> {
    check_input(phi, 14)?;
    let (gp3, certificate) = pfister_number(phi, 3, &SearchOptions::default())?;
    let pairs = two_term_certificates(phi, 3, PAIR_LIMIT);
    let subform = find_gp2_subform(phi)?;
    let pure_part_shape = pure_part_shape(phi, &pairs)?;
    let equivalence_holds = (gp3 <= 2) == subform.is_some();
    Ok(Classify14Report {
        gp3,
        two_term_certificates: pairs.len(),
        flagged: pure_part_shape.is_none(),
        certificate,
        subform,
        pure_part_shape,
        equivalence_holds,
    })
}

#[derive(Debug, Clone)]
pub struct Classify16Report {
    pub gp3: usize,
    pub certificate: PfisterCertificate,
    pub subform: (PfisterSpec, DiagonalForm),
    pub gp2_decomposition: Vec<PfisterSpec>,
    pub biquadratic: (SquareClass, SquareClass),
    /// A single quadratic extension that already splits `phi`, if any.
    pub quadratic: Option<SquareClass>,
}

/// First `a` with `phi` hyperbolic over `F(sqrt a)`, then the first pair
/// `(a, b)` with `phi` hyperbolic over `F(sqrt a)(sqrt b)`.
pub fn splitting_extensions(
    phi: &DiagonalForm,
) -> Result<(Option<SquareClass>, Option<(SquareClass, SquareClass)>)> {
    let f = *phi.field();
    let classes: Vec<SquareClass> = f.classes().into_iter().filter(|&a| a != SquareClass::ONE).collect();
    let mut single = None;
    let mut pair = None;
    for (i, &a) in classes.iter().enumerate() {
        let e1 = QuadraticExtension::new(&f, a)?;
        let phi1 = e1.image_form(phi);
        if is_hyperbolic(&phi1) {
            single.get_or_insert(a);
        }
        if pair.is_some() {
            if single.is_some() {
                break;
            }
            continue;
        }
        for &b in &classes[i + 1..] {
            let b1 = e1.image_class(b);
            if b1 == SquareClass::ONE {
                continue;
            }
            let e2 = QuadraticExtension::new(&e1.target, b1)?;
            if is_hyperbolic(&e2.image_form(&phi1)) {
                pair = Some((a, b));
                break;
            }
        }
    }
    Ok((single, pair))
}

pub fn classify16(phi: &DiagonalForm) -> Result<Classify16Report> {
    check_input(phi, 16)?;
    let missing = |what: &str| Error::InternalContradiction(format!("{what} not found for {}", print_form(phi)));
    let (gp3, certificate) = match pfister_number(phi, 3, &SearchOptions::default()) {
        Ok(r) => r,
        Err(Error::DepthCapExceeded { .. }) => return Err(missing("certificate with at most 3 terms")),
        Err(e) => return Err(e),
    };
    let subform = find_gp2_subform(phi)?.ok_or_else(|| missing("GP_2 subform"))?;
    let gp2_decomposition = gp2_isometric_decomposition(phi)?.ok_or_else(|| missing("GP_2 decomposition"))?;
    let (quadratic, pair) = splitting_extensions(phi)?;
    let biquadratic = pair.ok_or_else(|| missing("biquadratic splitting pair"))?;
    Ok(Classify16Report { gp3, certificate, subform, gp2_decomposition, biquadratic, quadratic })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubformJson {
    pub sigma: String,
    pub complement: String,
}

impl Classify14Report {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.certificate.field;
        serde_json::json!({
            "gp3": self.gp3,
            "certificate": self.certificate.to_json(),
            "two_term_certificates": self.two_term_certificates,
            "subform": self.subform.as_ref().map(|(s, c)| SubformJson {
                sigma: print_pfister(&f, s),
                complement: print_form(c),
            }),
            "pure_part_shape": self.pure_part_shape.as_ref().map(|p| serde_json::json!({
                "s": f.print_class(p.s),
                "tau1": print_pfister(&f, &p.tau1),
                "tau2": print_pfister(&f, &p.tau2),
            })),
            "equivalence_holds": self.equivalence_holds,
            "flagged": self.flagged,
        })
    }
}

impl Classify16Report {
    pub fn to_json(&self) -> serde_json::Value {
        let f = self.certificate.field;
        serde_json::json!({
            "gp3": self.gp3,
            "certificate": self.certificate.to_json(),
            "subform": SubformJson {
                sigma: print_pfister(&f, &self.subform.0),
                complement: print_form(&self.subform.1),
            },
            "gp2_decomposition": self.gp2_decomposition.iter().map(|s| print_pfister(&f, s)).collect::<Vec<_>>(),
            "biquadratic": [f.print_class(self.biquadratic.0), f.print_class(self.biquadratic.1)],
            "quadratic": self.quadratic.map(|a| f.print_class(a)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sqclass::FieldDesc;
    use crate::syntax::parse_form;
    use crate::witt::anisotropic_part;

    fn f(field: &FieldDesc, s: &str) -> DiagonalForm {
        parse_form(s, field).unwrap()
    }

    #[test]
    fn subform_examples() {
        let k = FieldDesc::f3(3);
        let phi = f(&k, "<<t1,t2>> + <t3,t3>");
        let (s, rest) = find_gp2_subform(&phi).unwrap().unwrap();
        assert_eq!(s.expand(&k).orth_sum(&rest).unwrap(), phi);
        assert!(find_gp2_subform(&f(&k, "<1,t1,t2>")).unwrap().is_none());
        let k6 = FieldDesc::f3(6);
        let generic = f(&k6, "<1,t1,t2,t3,t4,t5,t6,t1*t2*t3*t4*t5*t6>");
        assert!(find_gp2_subform(&generic).unwrap().is_none());
    }

    #[test]
    fn decomposition_into_gp2() {
        let k = FieldDesc::f3(4);
        let phi = f(&k, "<<t1,t2>> + t3*<<t1,t4>>");
        let parts = gp2_isometric_decomposition(&phi).unwrap().unwrap();
        assert_eq!(parts.len(), 2);
        let sum = parts
            .iter()
            .fold(DiagonalForm::zero(k), |acc, p| acc.orth_sum(&p.expand(&k)).unwrap());
        assert_eq!(sum, phi);
    }

    #[test]
    fn preconditions() {
        let k = FieldDesc::f3(3);
        assert!(matches!(classify14(&f(&k, "<1,t1>")), Err(Error::Precondition(_))));
        let linked = anisotropic_part(&f(&k, "<<t1,t2,t3>> + -1*<<t1,t2,-1>>"));
        assert!(linked.dim() < 14);
        assert!(classify14(&linked).is_err());
    }

    #[test]
    fn fourteen_from_two_pfister_forms() {
        let k = FieldDesc::f3(5);
        let phi = anisotropic_part(&f(&k, "<<t1,t2,t3>> + -t5*<<t4,t5,-t1*t2>>"));
        if phi.dim() == 14 {
            let r = classify14(&phi).unwrap();
            assert!(r.gp3 <= 2 && r.certificate.verify());
            assert!(r.subform.is_some() && r.equivalence_holds);
        }
    }

    #[test]
    fn sixteen_disjoint_pfister_forms() {
        let k = FieldDesc::f3(6);
        let phi = f(&k, "<<t1,t2,t3>> + <<t4,t5,t6>>");
        let r = classify16(&phi).unwrap();
        assert!(r.gp3 <= 2);
        assert_eq!(r.gp2_decomposition.len(), 4);
        assert_eq!(r.quadratic, None);
        let (a, b) = r.biquadratic;
        let e1 = QuadraticExtension::new(&k, a).unwrap();
        let e2 = QuadraticExtension::new(&e1.target, e1.image_class(b)).unwrap();
        assert!(is_hyperbolic(&e2.image_form(&e1.image_form(&phi))));
    }
}
