use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::FieldDesc;
use crate::syntax::print_form;
use crate::witt::{to_group_ring, GroupRing, WittClass};

/// `target = terms[0] + ... + terms[k-1]` in the Witt ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfisterCertificate {
    pub n: usize,
    pub field: FieldDesc,
    pub terms: Vec<PfisterSpec>,
    pub target: WittClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub scalar: String,
    pub slots: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub field: String,
    pub n: usize,
    pub target: String,
    pub terms: Vec<TermJson>,
    pub witt_class_sha256: String,
}

/// SHA-256 of `"<field>:<canonical anisotropic form>"`.
pub fn witt_class_hash(form: &DiagonalForm) -> String {
    let canon = crate::witt::anisotropic_part(form).canonical_unchecked();
    let text = format!("{}:{}", form.field(), print_form(&canon));
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl PfisterCertificate {
    pub fn new(n: usize, target: &DiagonalForm, terms: Vec<PfisterSpec>) -> Self {
        PfisterCertificate { n, field: *target.field(), terms, target: WittClass::of(target) }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Witt sum of the terms.
    pub fn sum(&self) -> DiagonalForm {
        let ring = GroupRing::new(&self.field);
        let v = self
            .terms
            .iter()
            .fold(ring.zero(), |acc, t| acc.add(&ring.from_pfister(t)));
        ring.to_form(&v)
    }

    /// Re-check in the group ring: right folds and the sum hits the target.
    pub fn verify(&self) -> bool {
        let ring = GroupRing::new(&self.field);
        let ok_folds = self.terms.iter().all(|t| t.fold() == self.n);
        let ok_classes = self
            .terms
            .iter()
            .all(|t| self.field.contains(t.scalar) && t.slots.iter().all(|&a| self.field.contains(a)));
        ok_folds
            && ok_classes
            && ring.from_form(&self.sum()) == to_group_ring(self.target.repr()).coeffs
    }

    pub fn to_json(&self) -> CertificateJson {
        let f = &self.field;
        CertificateJson {
            field: f.to_string(),
            n: self.n,
            target: print_form(self.target.repr()),
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    scalar: f.print_class(t.scalar),
                    slots: t.slots.iter().map(|&a| f.print_class(a)).collect(),
                })
                .collect(),
            witt_class_sha256: witt_class_hash(self.target.repr()),
        }
    }
}
