//! Test oracles that do not go through the group ring.
//!
//! The Witt class of a form over `K((t_1))...((t_n))` is read off from the
//! `2^n` iterated residue forms over the base field; the base Witt groups are
//! written down directly, and base isotropy is decided by searching vectors.
#![allow(dead_code)]

use proptest::prelude::*;
use rigidwitt::{Base, DiagonalForm, FieldDesc, SquareClass};

pub fn fields(max_nvars: usize) -> Vec<FieldDesc> {
    let mut out = Vec::new();
    for nvars in 0..=max_nvars {
        for base in [Base::F3, Base::R, Base::C, Base::SquareMinusOne] {
            out.push(FieldDesc { base, nvars });
        }
    }
    out
}

pub fn arb_field(max_nvars: usize) -> impl Strategy<Value = FieldDesc> {
    (
        prop_oneof![Just(Base::F3), Just(Base::R), Just(Base::C), Just(Base::SquareMinusOne)],
        0..=max_nvars,
    )
        .prop_map(|(base, nvars)| FieldDesc { base, nvars })
}

pub fn arb_class(field: FieldDesc) -> impl Strategy<Value = SquareClass> {
    let classes = field.classes();
    (0..classes.len()).prop_map(move |i| classes[i])
}

pub fn arb_form(field: FieldDesc, max_dim: usize) -> impl Strategy<Value = DiagonalForm> {
    prop::collection::vec(arb_class(field), 0..=max_dim)
        .prop_map(move |e| DiagonalForm::new(field, e).unwrap())
}

pub fn arb_field_form(max_nvars: usize, max_dim: usize) -> impl Strategy<Value = DiagonalForm> {
    arb_field(max_nvars).prop_flat_map(move |f| arb_form(f, max_dim))
}

/// All multisets of size `k` drawn from `classes`.
pub fn multisets(classes: &[SquareClass], k: usize) -> Vec<Vec<SquareClass>> {
    fn rec(classes: &[SquareClass], k: usize, start: usize, cur: &mut Vec<SquareClass>, out: &mut Vec<Vec<SquareClass>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..classes.len() {
            cur.push(classes[i]);
            rec(classes, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(classes, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn all_forms(field: &FieldDesc, max_dim: usize) -> Vec<DiagonalForm> {
    let classes = field.classes();
    (0..=max_dim)
        .flat_map(|k| multisets(&classes, k))
        .map(|e| DiagonalForm::new(*field, e).unwrap())
        .collect()
}

/// Element of the base Witt group, from the counts of the two unit classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseWitt {
    Mod4(u8),
    Int(i64),
    Mod2(u8),
    Pair(u8, u8),
}

impl BaseWitt {
    fn of(base: Base, plus: i64, minus: i64) -> BaseWitt {
        match base {
            Base::F3 => BaseWitt::Mod4((plus - minus).rem_euclid(4) as u8),
            Base::R => BaseWitt::Int(plus - minus),
            Base::C => BaseWitt::Mod2(((plus + minus) % 2) as u8),
            Base::SquareMinusOne => BaseWitt::Pair((plus % 2) as u8, (minus % 2) as u8),
        }
    }

    fn aniso_dim(self) -> usize {
        match self {
            BaseWitt::Mod4(r) => [0, 1, 2, 1][r as usize],
            BaseWitt::Int(r) => r.unsigned_abs() as usize,
            BaseWitt::Mod2(r) => r as usize,
            BaseWitt::Pair(a, b) => (a + b) as usize,
        }
    }
}

/// Residue forms along every path of variables, as unit counts.
fn leaves(field: &FieldDesc, entries: &[SquareClass]) -> Vec<(i64, i64)> {
    let mut out = vec![(0i64, 0i64); 1 << field.nvars];
    for a in entries {
        let leaf = (a.0 >> 1) as usize;
        if a.0 & 1 == 0 {
            out[leaf].0 += 1;
        } else {
            out[leaf].1 += 1;
        }
    }
    out
}

/// The Witt class as one base Witt element per residue leaf.
pub fn witt_key(form: &DiagonalForm) -> Vec<BaseWitt> {
    let f = form.field();
    leaves(f, form.entries())
        .into_iter()
        .map(|(p, m)| BaseWitt::of(f.base, p, m))
        .collect()
}

pub fn oracle_aniso_dim(form: &DiagonalForm) -> usize {
    witt_key(form).into_iter().map(BaseWitt::aniso_dim).sum()
}

pub fn oracle_witt_index(form: &DiagonalForm) -> usize {
    (form.dim() - oracle_aniso_dim(form)) / 2
}

pub fn oracle_isotropic(form: &DiagonalForm) -> bool {
    oracle_witt_index(form) > 0
}

pub fn oracle_hyperbolic(form: &DiagonalForm) -> bool {
    oracle_aniso_dim(form) == 0
}

pub fn oracle_isometric(a: &DiagonalForm, b: &DiagonalForm) -> bool {
    a.dim() == b.dim() && witt_key(a) == witt_key(b)
}

/// Springer: anisotropic iff every residue leaf is anisotropic, with the
/// base decided by brute-force search for an isotropic vector.
pub fn springer_isotropic(form: &DiagonalForm) -> bool {
    let f = form.field();
    leaves(f, form.entries())
        .into_iter()
        .any(|(p, m)| base_isotropic_search(f.base, p as usize, m as usize))
}

/// F9 as pairs `(x, y) = x + i y` over F3 with `i^2 = -1`.
fn f9_mul(a: (u8, u8), b: (u8, u8)) -> (u8, u8) {
    ((a.0 * b.0 + 2 * a.1 * b.1) % 3, (a.0 * b.1 + a.1 * b.0) % 3)
}

/// Look for a nonzero vector with `sum c_i x_i^2 = 0` over the base field.
pub fn base_isotropic_search(base: Base, plus: usize, minus: usize) -> bool {
    let k = plus + minus;
    match base {
        Base::R => plus > 0 && minus > 0,
        Base::C => k >= 2,
        Base::F3 => {
            let coeffs: Vec<u32> = (0..k).map(|i| if i < plus { 1 } else { 2 }).collect();
            let k = k.min(4);
            (1..3u32.pow(k as u32)).any(|mut code| {
                let mut s = 0;
                for c in coeffs.iter().take(k) {
                    let x = code % 3;
                    code /= 3;
                    s += c * x * x;
                }
                s % 3 == 0
            })
        }
        Base::SquareMinusOne => {
            // `u = 1 + i` has norm 2, a non-square in F3.
            let coeffs: Vec<(u8, u8)> = (0..k).map(|i| if i < plus { (1, 0) } else { (1, 1) }).collect();
            let k = k.min(3);
            (1..9u32.pow(k as u32)).any(|mut code| {
                let mut s = (0u8, 0u8);
                for &c in coeffs.iter().take(k) {
                    let x = ((code % 3) as u8, ((code / 3) % 3) as u8);
                    code /= 9;
                    let t = f9_mul(c, f9_mul(x, x));
                    s = ((s.0 + t.0) % 3, (s.1 + t.1) % 3);
                }
                s == (0, 0)
            })
        }
    }
}

pub fn form(field: &FieldDesc, s: &str) -> DiagonalForm {
    rigidwitt::parse_form(s, field).unwrap()
}
