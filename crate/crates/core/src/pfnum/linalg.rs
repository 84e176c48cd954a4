//! Solvability of `A x = b` over `Z/m` (`m = 0` meaning `Z`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn reduce(x: &mut BigInt, m: &BigInt) {
    if !m.is_zero() {
        *x = x.mod_floor(m);
    }
}

/// Diagonalize `a` by unimodular row and column operations, applying the
/// row operations to `b`, then test each diagonal equation.
pub fn solvable(a: &[Vec<i64>], b: &[i64], m: u32) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let m = BigInt::from(m);
    let mut a: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| {
                    let mut v = BigInt::from(x);
                    reduce(&mut v, &m);
                    v
                })
                .collect()
        })
        .collect();
    let mut b: Vec<BigInt> = b
        .iter()
        .map(|&x| {
            let mut v = BigInt::from(x);
            reduce(&mut v, &m);
            v
        })
        .collect();

    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            for j in t..cols {
                let d = &q * &a[t][j];
                a[i][j] -= d;
                reduce(&mut a[i][j], &m);
            }
            let d = &q * &b[t];
            b[i] -= d;
            reduce(&mut b[i], &m);
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for i in t..rows {
                let d = &q * &a[i][t];
                a[i][j] -= d;
                reduce(&mut a[i][j], &m);
            }
            clean &= a[t][j].is_zero();
        }
        if clean {
            t += 1;
        }
    }

    (0..rows).all(|i| {
        let d = if i < cols { a[i][i].clone() } else { BigInt::zero() };
        let g = if m.is_zero() { d.abs() } else { d.gcd(&m) };
        if g.is_zero() {
            b[i].is_zero()
        } else {
            b[i].mod_floor(&g).is_zero()
        }
    })
}
