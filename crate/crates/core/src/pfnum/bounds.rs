//! Upper bounds for Pfister numbers and exact polynomial bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPoly {
    coeffs: Vec<BigRational>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl BoundPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BoundPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&rat(x, 1))
    }

    pub fn add(&self, other: &BoundPoly) -> BoundPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> BoundPoly {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(lambda * X)`.
    pub fn substitute_scaled(&self, lambda: &BigRational) -> BoundPoly {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= lambda;
        }
        Self::new(out)
    }
}

impl fmt::Display for BoundPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*X"),
                _ => format!("{c}*X^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Bernoulli numbers `B_0..=B_m` with `B_1 = +1/2`.
pub fn bernoulli_plus(m: usize) -> Vec<BigRational> {
    // Recurrence for B^- : sum_{j<=k} C(k+1, j) B_j = 0.
    let mut b: Vec<BigRational> = Vec::with_capacity(m + 1);
    b.push(BigRational::one());
    for k in 1..=m {
        let mut s = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from(binomial(k + 1, j)) * bj;
        }
        b.push(-s / BigRational::from(BigInt::from(k + 1)));
    }
    if m >= 1 {
        b[1] = rat(1, 2);
    }
    b
}

/// The polynomial `p` with `p(n) = q(1) + ... + q(n)` for all `n >= 0`.
pub fn faulhaber_sum(q: &BoundPoly) -> BoundPoly {
    let deg = q.coeffs.len();
    let b = bernoulli_plus(deg);
    let mut out = vec![BigRational::zero(); deg + 1];
    for (m, a) in q.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // 1^m + ... + n^m = 1/(m+1) sum_j C(m+1, j) B_j n^(m+1-j)
        let inv = rat(1, m as i64 + 1);
        for (j, bj) in b.iter().enumerate().take(m + 1) {
            let c = BigRational::from(binomial(m + 1, j)) * bj * &inv * a;
            out[m + 1 - j] += c;
        }
    }
    BoundPoly::new(out)
}

fn check_even(d: u64) -> Result<()> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d as usize));
    }
    Ok(())
}

/// `GP_2(phi) <= dim/2 - 1`.
pub fn two_pfister_bound(d: u64) -> Result<u64> {
    check_even(d)?;
    Ok((d / 2).saturating_sub(1))
}

/// Exact small values below 16, the closed form from 16 on.
pub fn three_pfister_bound(d: u64) -> Result<u64> {
    check_even(d)?;
    Ok(match d {
        0..=7 => 0,
        8 | 10 => 1,
        12 | 14 => 2,
        _ => refined_three_bound(d),
    })
}

fn refined_three_bound(d: u64) -> u64 {
    let sign: i64 = if (d / 2).is_multiple_of(2) { 1 } else { -1 };
    let d = d as i64;
    let v = rat(d * d, 16) - rat(d, 2) - rat(82 - 2 * sign, 16);
    v.floor().to_integer().to_u64().unwrap_or(0)
}

/// `d^2 / 16`, the coarse bound for all even `d`.
pub fn coarse_three_bound() -> BoundPoly {
    BoundPoly::new(vec![BigRational::zero(), BigRational::zero(), rat(1, 16)])
}

/// `p_3 = X^2/16`, `p_n(X) = 1 + 2 p_{n-1}(X/2)`.
pub fn poly_bound(n: u32) -> Result<BoundPoly> {
    if n < 3 {
        return Err(Error::Precondition("poly_bound needs n >= 3".into()));
    }
    let mut p = coarse_three_bound();
    for _ in 4..=n {
        p = BoundPoly::constant(BigRational::one())
            .add(&p.substitute_scaled(&rat(1, 2)).scale(&rat(2, 1)));
    }
    Ok(p)
}

/// `q_3 = X^2/16`, `q_n(X) = 1 + 2 P(X/2)` with `P(k) = q_{n-1}(1) + ... + q_{n-1}(k)`;
/// degree `n - 1`.
pub fn faulhaber_poly_bound(n: u32) -> Result<BoundPoly> {
    if n < 3 {
        return Err(Error::Precondition("faulhaber_poly_bound needs n >= 3".into()));
    }
    let mut q = coarse_three_bound();
    for _ in 4..=n {
        let p = faulhaber_sum(&q);
        q = BoundPoly::constant(BigRational::one())
            .add(&p.substitute_scaled(&rat(1, 2)).scale(&rat(2, 1)));
    }
    Ok(q)
}

fn floor_nonneg(v: &BigRational) -> u64 {
    if v.is_negative() {
        0
    } else {
        v.floor().to_integer().to_u64().unwrap_or(u64::MAX)
    }
}

/// The bound a search for `GP_n` of a `d`-dimensional form may rely on.
pub fn applicable_bound(n: u32, d: u64) -> Result<u64> {
    check_even(d)?;
    match n {
        0 => Ok(d),
        1 => Ok(d / 2),
        2 => two_pfister_bound(d),
        3 => three_pfister_bound(d),
        _ => {
            if d < 1u64 << n.min(63) {
                return Ok(0);
            }
            let p = faulhaber_poly_bound(n)?;
            Ok(floor_nonneg(&p.eval_int(d as i64)).max(1))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsRow {
    pub d: u64,
    pub two_pfister: u64,
    pub three_pfister: u64,
    pub coarse: String,
    pub poly: String,
    pub faulhaber_poly: String,
    pub lower_generic: u64,
}

/// One row per even `d <= dmax`.
pub fn bounds_table(n: u32, dmax: u64) -> Result<Vec<BoundsRow>> {
    let p = poly_bound(n.max(3))?;
    let fp = faulhaber_poly_bound(n.max(3))?;
    let coarse = coarse_three_bound();
    Ok((0..=dmax)
        .step_by(2)
        .map(|d| BoundsRow {
            d,
            two_pfister: two_pfister_bound(d).unwrap(),
            three_pfister: three_pfister_bound(d).unwrap(),
            coarse: coarse.eval_int(d as i64).to_string(),
            poly: p.eval_int(d as i64).to_string(),
            faulhaber_poly: fp.eval_int(d as i64).to_string(),
            lower_generic: if d >= 8 { d / 4 - 1 } else { 0 },
        })
        .collect())
}
