//! Square classes of iterated Laurent series fields `K((t1))...((tn))`.
//!
//! A class is a sign (or, over the `F9` base, a non-square unit) times a
//! squarefree monomial. It is stored as a bitmask: bit 0 is the unit bit,
//! bit `i` is the exponent of `t_i` modulo 2.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limit on Laurent variables; keeps every class inside a `u32`.
pub const MAX_VARS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    F3,
    R,
    C,
    /// A base of level 1 with two unit square classes, e.g. `F9`.
    #[serde(rename = "F9")]
    SquareMinusOne,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::F3 => "F3",
            Base::R => "R",
            Base::C => "C",
            Base::SquareMinusOne => "F9",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    One,
    Two,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub base: Base,
    pub nvars: usize,
}

impl FieldDesc {
    pub fn new(base: Base, nvars: usize) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::Precondition(format!(
                "at most {MAX_VARS} Laurent variables are supported"
            )));
        }
        Ok(FieldDesc { base, nvars })
    }

    pub fn f3(nvars: usize) -> Self {
        FieldDesc { base: Base::F3, nvars }
    }

    pub fn real(nvars: usize) -> Self {
        FieldDesc { base: Base::R, nvars }
    }

    pub fn complex(nvars: usize) -> Self {
        FieldDesc { base: Base::C, nvars }
    }

    pub fn level(&self) -> Level {
        match self.base {
            Base::F3 => Level::Two,
            Base::R => Level::Infinite,
            Base::C | Base::SquareMinusOne => Level::One,
        }
    }

    pub fn unit_classes(&self) -> usize {
        match self.base {
            Base::C => 1,
            _ => 2,
        }
    }

    pub fn square_class_count(&self) -> usize {
        self.unit_classes() << self.nvars
    }

    /// Bits that may be set in a class of this field.
    pub fn class_mask(&self) -> u32 {
        let vars = ((1u64 << (self.nvars + 1)) - 2) as u32;
        match self.base {
            Base::C => vars,
            _ => vars | 1,
        }
    }

    pub fn contains(&self, a: SquareClass) -> bool {
        a.0 & !self.class_mask() == 0
    }

    pub fn check(&self, a: SquareClass) -> Result<SquareClass> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::Precondition(format!(
                "square class {:#x} does not belong to {self}",
                a.0
            )))
        }
    }

    pub fn minus_one(&self) -> SquareClass {
        match self.base {
            Base::F3 | Base::R => SquareClass(1),
            Base::C | Base::SquareMinusOne => SquareClass::ONE,
        }
    }

    pub fn negate(&self, a: SquareClass) -> SquareClass {
        a * self.minus_one()
    }

    pub fn var(&self, i: usize) -> Result<SquareClass> {
        if i == 0 || i > self.nvars {
            return Err(Error::UnknownVariable { index: i, nvars: self.nvars });
        }
        Ok(SquareClass(1 << i))
    }

    /// The same base with `k` extra variables appended.
    pub fn with_extra_vars(&self, k: usize) -> FieldDesc {
        FieldDesc { base: self.base, nvars: self.nvars + k }
    }

    /// All square classes in ascending order.
    pub fn classes(&self) -> Vec<SquareClass> {
        let mask = self.class_mask();
        let mut out: Vec<SquareClass> = (0..=mask)
            .filter(|b| b & !mask == 0)
            .map(SquareClass)
            .collect();
        out.sort();
        out
    }

    pub fn print_class(&self, a: SquareClass) -> String {
        let mut factors = Vec::new();
        let mut neg = false;
        if a.0 & 1 != 0 {
            match self.base {
                Base::SquareMinusOne => factors.push("u".to_string()),
                _ => neg = true,
            }
        }
        for i in 1..=MAX_VARS {
            if a.0 >> i & 1 != 0 {
                factors.push(format!("t{i}"));
            }
        }
        let body = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.nvars).map(|i| format!("t{i}")).collect();
        write!(f, "{}[{}]", self.base.name(), vars.join(","))
    }
}

/// Element of `F*/F*^2`. Multiplication is XOR of the bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SquareClass(pub u32);

impl SquareClass {
    pub const ONE: SquareClass = SquareClass(0);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn unit_bit(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn exps(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_unit(self) -> bool {
        self.0 >> 1 == 0
    }

    pub fn has_var(self, i: usize) -> bool {
        self.0 >> i & 1 != 0
    }

    /// Index of the highest Laurent variable occurring, if any.
    pub fn top_var(self) -> Option<usize> {
        if self.is_unit() {
            None
        } else {
            Some(31 - self.0.leading_zeros() as usize)
        }
    }
}

impl std::ops::Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: SquareClass) -> SquareClass {
        SquareClass(self.0 ^ rhs.0)
    }
}

impl std::ops::MulAssign for SquareClass {
    fn mul_assign(&mut self, rhs: SquareClass) {
        self.0 ^= rhs.0;
    }
}

/// Lexicographic on `(unit, t1, ..., tn)`.
impl Ord for SquareClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for SquareClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checked multiplication of two classes of `field`.
pub fn mul(field: &FieldDesc, a: SquareClass, b: SquareClass) -> Result<SquareClass> {
    field.check(a)?;
    field.check(b)?;
    Ok(a * b)
}

/// An invertible F2-linear map on the `(1 + nvars)`-bit class space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassAutomorphism {
    /// `cols[j]` is the image of the basis vector `e_j`.
    cols: Vec<u32>,
}

impl ClassAutomorphism {
    pub fn identity(nvars: usize) -> Self {
        ClassAutomorphism { cols: (0..=nvars).map(|j| 1u32 << j).collect() }
    }

    pub fn from_columns(cols: Vec<u32>) -> Result<Self> {
        let m = ClassAutomorphism { cols };
        if m.inverse().is_none() {
            return Err(Error::Precondition("matrix is singular over F2".into()));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[u32] {
        &self.cols
    }

    pub fn apply(&self, a: SquareClass) -> SquareClass {
        let mut out = 0u32;
        let mut bits = a.0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            out ^= self.cols[j];
            bits &= bits - 1;
        }
        SquareClass(out)
    }

    pub fn compose(&self, inner: &ClassAutomorphism) -> ClassAutomorphism {
        ClassAutomorphism {
            cols: inner.cols.iter().map(|&c| self.apply(SquareClass(c)).0).collect(),
        }
    }

    /// Gauss-Jordan over F2; `None` if singular.
    pub fn inverse(&self) -> Option<ClassAutomorphism> {
        let d = self.cols.len();
        // Row i of the augmented matrix: low word = row of M, high word = row of I.
        let mut rows: Vec<(u32, u32)> = (0..d)
            .map(|i| {
                let mut r = 0u32;
                for (j, &c) in self.cols.iter().enumerate() {
                    if c >> i & 1 != 0 {
                        r |= 1 << j;
                    }
                }
                (r, 1u32 << i)
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| rows[r].0 >> col & 1 != 0)?;
            rows.swap(col, pivot);
            let (pr, pa) = rows[col];
            for r in 0..d {
                if r != col && rows[r].0 >> col & 1 != 0 {
                    rows[r].0 ^= pr;
                    rows[r].1 ^= pa;
                }
            }
        }
        // rows[i].1 is row i of the inverse; transpose back into columns.
        let cols = (0..d)
            .map(|j| {
                let mut c = 0u32;
                for (i, row) in rows.iter().enumerate() {
                    if row.1 >> j & 1 != 0 {
                        c |= 1 << i;
                    }
                }
                c
            })
            .collect();
        Some(ClassAutomorphism { cols })
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }
}

/// An automorphism fixing the class of `-1` (the unit bit) and sending `a`
/// to `t_n`.
///
/// Built as the inverse of the matrix whose columns are `e_0`, the
/// remaining `e_i` (skipping the highest variable of `a`) and `a` itself.
pub fn find_basis_change(field: &FieldDesc, a: SquareClass) -> Result<ClassAutomorphism> {
    field.check(a)?;
    let pivot = a
        .top_var()
        .ok_or_else(|| Error::UnitClass(field.print_class(a)))?;
    let mut cols = vec![1u32];
    cols.extend((1..=field.nvars).filter(|&i| i != pivot).map(|i| 1u32 << i));
    cols.push(a.0);
    let n = ClassAutomorphism { cols };
    Ok(n.inverse().expect("columns form a basis"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(unit: u32, exps: &[u32]) -> SquareClass {
        let mut b = unit;
        for (i, &e) in exps.iter().enumerate() {
            b |= e << (i + 1);
        }
        SquareClass(b)
    }

    #[test]
    fn mul_examples() {
        assert_eq!(c(0, &[0, 1]) * c(0, &[0, 1]), c(0, &[0, 0]));
        assert_eq!(c(1, &[1, 0]) * c(0, &[1, 1]), c(1, &[0, 1]));
        assert_eq!(c(1, &[0, 0]) * c(1, &[0, 0]), SquareClass::ONE);
    }

    #[test]
    fn mul_rejects_foreign_class() {
        let f = FieldDesc::f3(1);
        assert!(mul(&f, c(0, &[1]), c(0, &[0, 1])).is_err());
        let cf = FieldDesc::complex(1);
        assert!(mul(&cf, SquareClass(1), SquareClass::ONE).is_err());
    }

    #[test]
    fn negate_examples() {
        assert_eq!(FieldDesc::f3(2).negate(c(0, &[1, 0])), c(1, &[1, 0]));
        assert_eq!(FieldDesc::complex(2).negate(c(0, &[1, 0])), c(0, &[1, 0]));
        assert_eq!(FieldDesc::real(2).negate(c(1, &[0, 0])), c(0, &[0, 0]));
        let f9 = FieldDesc { base: Base::SquareMinusOne, nvars: 1 };
        assert_eq!(f9.negate(SquareClass(1)), SquareClass(1));
    }

    #[test]
    fn order_is_lexicographic_unit_first() {
        let f = FieldDesc::f3(2);
        let names: Vec<String> = f.classes().iter().map(|&a| f.print_class(a)).collect();
        assert_eq!(names, ["1", "t2", "t1", "t1*t2", "-1", "-t2", "-t1", "-t1*t2"]);
    }

    #[test]
    fn basis_change_examples() {
        let f = FieldDesc::f3(2);
        let m = find_basis_change(&f, c(0, &[1, 1])).unwrap();
        assert_eq!(m.apply(c(0, &[1, 1])), c(0, &[0, 1]));
        // The inverse sends t2 back to t1*t2 and fixes t1.
        let inv = m.inverse().unwrap();
        assert_eq!(inv.apply(c(0, &[1, 0])), c(0, &[1, 0]));
        assert_eq!(inv.apply(c(0, &[0, 1])), c(0, &[1, 1]));

        let m = find_basis_change(&f, c(1, &[0, 1])).unwrap();
        assert_eq!(m.apply(c(1, &[0, 1])), c(0, &[0, 1]));
        assert_eq!(m.apply(SquareClass(1)), SquareClass(1));
        assert_eq!(m.apply(c(0, &[0, 1])), c(1, &[0, 1]));

        assert!(matches!(find_basis_change(&f, SquareClass::ONE), Err(Error::UnitClass(_))));
        assert!(matches!(find_basis_change(&f, SquareClass(1)), Err(Error::UnitClass(_))));
    }

    #[test]
    fn basis_change_exhaustive() {
        for base in [Base::F3, Base::R, Base::C, Base::SquareMinusOne] {
            for n in 1..=4 {
                let f = FieldDesc { base, nvars: n };
                let tn = SquareClass(1 << n);
                for a in f.classes().into_iter().filter(|a| !a.is_unit()) {
                    let m = find_basis_change(&f, a).unwrap();
                    assert!(m.is_invertible());
                    assert_eq!(m.apply(SquareClass(1)), SquareClass(1));
                    assert_eq!(m.apply(a), tn);
                    for x in f.classes() {
                        assert!(f.contains(m.apply(x)), "{base:?} {n} {a:?} {x:?}");
                    }
                    let inv = m.inverse().unwrap();
                    assert_eq!(inv.compose(&m), ClassAutomorphism::identity(n));
                }
            }
        }
    }

    #[test]
    fn group_laws_exhaustive() {
        for n in 0..=4 {
            let f = FieldDesc::f3(n);
            let all = f.classes();
            assert_eq!(all.len(), f.square_class_count());
            for &a in &all {
                assert_eq!(a * SquareClass::ONE, a);
                assert_eq!(a * a, SquareClass::ONE);
                assert_eq!(f.negate(f.negate(a)), a);
                for &b in &all {
                    assert_eq!(a * b, b * a);
                    for &d in &all {
                        assert_eq!((a * b) * d, a * (b * d));
                    }
                }
            }
        }
    }

    #[test]
    fn field_invariants() {
        assert_eq!(FieldDesc::f3(3).level(), Level::Two);
        assert_eq!(FieldDesc::real(0).level(), Level::Infinite);
        assert_eq!(FieldDesc::complex(2).square_class_count(), 4);
        assert_eq!(FieldDesc::f3(2).square_class_count(), 8);
        assert!(FieldDesc::new(Base::R, MAX_VARS + 1).is_err());
    }
}
