//! The Witt ring of a rigid-field model as a group ring `(Z/n)[H]`.
//!
//! For the F3, R and C bases `H` is the subgroup of classes with unit bit 0
//! and `<a>` maps to `[a]` or `-[-a]`. For the `F9` base `-1` is a square,
//! `H` is the whole class group and coefficients live in `Z/2`.

use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{Base, FieldDesc, SquareClass};

type Plane = SmallVec<[u64; 2]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coeffs {
    /// `Z/2`: bases C and F9.
    Mod2,
    /// `Z/4`: base F3.
    Mod4,
    /// `Z`: base R.
    Int,
}

/// Coefficient vector of a Witt class, indexed by elements of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WittVec {
    Mod2(Plane),
    /// Bit planes of the two binary digits.
    Mod4(Plane, Plane),
    Int(Box<[i32]>),
}

impl WittVec {
    pub fn is_zero(&self) -> bool {
        match self {
            WittVec::Mod2(p) => p.iter().all(|&w| w == 0),
            WittVec::Mod4(lo, hi) => lo.iter().chain(hi.iter()).all(|&w| w == 0),
            WittVec::Int(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// Dimension of the anisotropic part.
    pub fn aniso_dim(&self) -> usize {
        match self {
            WittVec::Mod2(p) => p.iter().map(|w| w.count_ones() as usize).sum(),
            WittVec::Mod4(lo, hi) => lo
                .iter()
                .zip(hi.iter())
                .map(|(&l, &h)| l.count_ones() as usize + 2 * (h & !l).count_ones() as usize)
                .sum(),
            WittVec::Int(v) => v.iter().map(|c| c.unsigned_abs() as usize).sum(),
        }
    }

    pub fn add(&self, other: &WittVec) -> WittVec {
        match (self, other) {
            (WittVec::Mod2(a), WittVec::Mod2(b)) => {
                WittVec::Mod2(a.iter().zip(b.iter()).map(|(x, y)| x ^ y).collect())
            }
            (WittVec::Mod4(l1, h1), WittVec::Mod4(l2, h2)) => {
                let mut lo = Plane::with_capacity(l1.len());
                let mut hi = Plane::with_capacity(l1.len());
                for i in 0..l1.len() {
                    lo.push(l1[i] ^ l2[i]);
                    hi.push(h1[i] ^ h2[i] ^ (l1[i] & l2[i]));
                }
                WittVec::Mod4(lo, hi)
            }
            (WittVec::Int(a), WittVec::Int(b)) => {
                WittVec::Int(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect())
            }
            _ => panic!("WittVec coefficient rings differ"),
        }
    }

    pub fn neg(&self) -> WittVec {
        match self {
            WittVec::Mod2(_) => self.clone(),
            WittVec::Mod4(lo, hi) => {
                WittVec::Mod4(lo.clone(), lo.iter().zip(hi.iter()).map(|(l, h)| h ^ l).collect())
            }
            WittVec::Int(v) => WittVec::Int(v.iter().map(|c| -c).collect()),
        }
    }

    pub fn sub(&self, other: &WittVec) -> WittVec {
        match (self, other) {
            (WittVec::Mod4(l1, h1), WittVec::Mod4(l2, h2)) => {
                // a - b = a + (lo2, hi2 ^ lo2)
                let mut lo = Plane::with_capacity(l1.len());
                let mut hi = Plane::with_capacity(l1.len());
                for i in 0..l1.len() {
                    lo.push(l1[i] ^ l2[i]);
                    hi.push(h1[i] ^ h2[i] ^ l2[i] ^ (l1[i] & l2[i]));
                }
                WittVec::Mod4(lo, hi)
            }
            (WittVec::Int(a), WittVec::Int(b)) => {
                WittVec::Int(a.iter().zip(b.iter()).map(|(x, y)| x - y).collect())
            }
            _ => self.add(other),
        }
    }

    /// `aniso_dim(self - other)` without allocating.
    pub fn diff_dim(&self, other: &WittVec) -> usize {
        match (self, other) {
            (WittVec::Mod2(a), WittVec::Mod2(b)) => {
                a.iter().zip(b.iter()).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
            }
            (WittVec::Mod4(l1, h1), WittVec::Mod4(l2, h2)) => {
                let mut d = 0usize;
                for i in 0..l1.len() {
                    let l = l1[i] ^ l2[i];
                    let h = h1[i] ^ h2[i] ^ l2[i] ^ (l1[i] & l2[i]);
                    d += l.count_ones() as usize + 2 * (h & !l).count_ones() as usize;
                }
                d
            }
            (WittVec::Int(a), WittVec::Int(b)) => {
                a.iter().zip(b.iter()).map(|(x, y)| (x - y).unsigned_abs() as usize).sum()
            }
            _ => panic!("WittVec coefficient rings differ"),
        }
    }

    /// Coefficient at index `i`, as a representative in `0..n` (or in `Z`).
    pub fn coeff(&self, i: usize) -> i64 {
        let bit = |p: &Plane| (p[i / 64] >> (i % 64) & 1) as i64;
        match self {
            WittVec::Mod2(p) => bit(p),
            WittVec::Mod4(lo, hi) => bit(lo) + 2 * bit(hi),
            WittVec::Int(v) => v[i] as i64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            WittVec::Mod2(p) | WittVec::Mod4(p, _) => p.len() * 64,
            WittVec::Int(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Coordinates for the group-ring model of one field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupRing {
    field: FieldDesc,
    coeffs: Coeffs,
    size: usize,
    full_group: bool,
}

impl GroupRing {
    pub fn new(field: &FieldDesc) -> Self {
        let (coeffs, full_group) = match field.base {
            Base::F3 => (Coeffs::Mod4, false),
            Base::R => (Coeffs::Int, false),
            Base::C => (Coeffs::Mod2, false),
            Base::SquareMinusOne => (Coeffs::Mod2, true),
        };
        let size = if full_group { 2usize << field.nvars } else { 1usize << field.nvars };
        GroupRing { field: *field, coeffs, size, full_group }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> Coeffs {
        self.coeffs
    }

    /// Number of elements of `H`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The modulus `n` of `Z/n` (0 for `Z`).
    pub fn modulus(&self) -> u32 {
        match self.coeffs {
            Coeffs::Mod2 => 2,
            Coeffs::Mod4 => 4,
            Coeffs::Int => 0,
        }
    }

    fn words(&self) -> usize {
        self.size.div_ceil(64)
    }

    /// Index in `H` and sign of the image of `<a>`.
    #[inline]
    pub fn index(&self, a: SquareClass) -> (usize, bool) {
        if self.full_group {
            (a.0 as usize, false)
        } else {
            ((a.0 >> 1) as usize, a.0 & 1 != 0)
        }
    }

    #[inline]
    pub fn class_at(&self, i: usize) -> SquareClass {
        if self.full_group {
            SquareClass(i as u32)
        } else {
            SquareClass((i as u32) << 1)
        }
    }

    pub fn zero(&self) -> WittVec {
        match self.coeffs {
            Coeffs::Mod2 => WittVec::Mod2(smallvec![0; self.words()]),
            Coeffs::Mod4 => WittVec::Mod4(smallvec![0; self.words()], smallvec![0; self.words()]),
            Coeffs::Int => WittVec::Int(vec![0; self.size].into_boxed_slice()),
        }
    }

    /// Build from integer coefficients, reducing modulo `n`.
    pub fn from_counts(&self, counts: &[i64]) -> WittVec {
        match self.coeffs {
            Coeffs::Int => WittVec::Int(counts.iter().map(|&c| c as i32).collect()),
            Coeffs::Mod2 => {
                let mut p: Plane = smallvec![0; self.words()];
                for (i, &c) in counts.iter().enumerate() {
                    if c.rem_euclid(2) == 1 {
                        p[i / 64] |= 1 << (i % 64);
                    }
                }
                WittVec::Mod2(p)
            }
            Coeffs::Mod4 => {
                let mut lo: Plane = smallvec![0; self.words()];
                let mut hi: Plane = smallvec![0; self.words()];
                for (i, &c) in counts.iter().enumerate() {
                    let r = c.rem_euclid(4);
                    if r & 1 != 0 {
                        lo[i / 64] |= 1 << (i % 64);
                    }
                    if r & 2 != 0 {
                        hi[i / 64] |= 1 << (i % 64);
                    }
                }
                WittVec::Mod4(lo, hi)
            }
        }
    }

    pub fn counts(&self, v: &WittVec) -> Vec<i64> {
        (0..self.size).map(|i| v.coeff(i)).collect()
    }

    pub fn from_entries(&self, entries: &[SquareClass]) -> WittVec {
        let mut counts = vec![0i64; self.size];
        for &a in entries {
            let (i, neg) = self.index(a);
            counts[i] += if neg { -1 } else { 1 };
        }
        self.from_counts(&counts)
    }

    pub fn from_form(&self, form: &DiagonalForm) -> WittVec {
        debug_assert_eq!(form.field(), &self.field);
        self.from_entries(form.entries())
    }

    pub fn from_pfister(&self, spec: &PfisterSpec) -> WittVec {
        self.from_form(&spec.expand(&self.field))
    }

    /// The anisotropic form with this Witt class.
    pub fn to_form(&self, v: &WittVec) -> DiagonalForm {
        let mut e = Vec::new();
        for i in 0..self.size {
            let c = v.coeff(i);
            if c == 0 {
                continue;
            }
            let h = self.class_at(i);
            let neg_h = self.field.negate(h);
            match self.coeffs {
                Coeffs::Mod2 => e.push(h),
                Coeffs::Mod4 => match c {
                    1 => e.push(h),
                    2 => e.extend([h, h]),
                    _ => e.push(neg_h),
                },
                Coeffs::Int => {
                    let x = if c > 0 { h } else { neg_h };
                    e.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
                }
            }
        }
        DiagonalForm::from_unchecked(self.field, e)
    }

    /// Product in the group ring (convolution over the XOR group).
    pub fn mul(&self, a: &WittVec, b: &WittVec) -> WittVec {
        let ca = self.counts(a);
        let cb = self.counts(b);
        let mut out = vec![0i64; self.size];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                if y != 0 {
                    out[i ^ j] += x * y;
                }
            }
        }
        self.from_counts(&out)
    }

    pub fn format(&self, v: &WittVec) -> String {
        let terms: Vec<String> = (0..self.size)
            .filter_map(|i| {
                let c = v.coeff(i);
                (c != 0).then(|| format!("{c}·[{}]", self.field.print_class(self.class_at(i))))
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A Witt class in group-ring coordinates, tied to its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElt {
    pub ring: GroupRing,
    pub coeffs: WittVec,
}

impl GroupRingElt {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn to_form(&self) -> DiagonalForm {
        self.ring.to_form(&self.coeffs)
    }
}

impl std::ops::Add for &GroupRingElt {
    type Output = GroupRingElt;
    fn add(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.ring, rhs.ring, "group rings differ");
        GroupRingElt { ring: self.ring, coeffs: self.coeffs.add(&rhs.coeffs) }
    }
}

impl std::ops::Mul for &GroupRingElt {
    type Output = GroupRingElt;
    fn mul(self, rhs: &GroupRingElt) -> GroupRingElt {
        assert_eq!(self.ring, rhs.ring, "group rings differ");
        GroupRingElt { ring: self.ring, coeffs: self.ring.mul(&self.coeffs, &rhs.coeffs) }
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.coeffs))
    }
}

pub fn to_group_ring(form: &DiagonalForm) -> GroupRingElt {
    let ring = GroupRing::new(form.field());
    GroupRingElt { ring, coeffs: ring.from_form(form) }
}

/// Witt equivalence decided in the group ring.
pub fn group_ring_equal(phi: &DiagonalForm, psi: &DiagonalForm) -> bool {
    phi.field() == psi.field() && to_group_ring(phi) == to_group_ring(psi)
}
