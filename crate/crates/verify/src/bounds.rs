use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rigidwitt::pfnum::{faulhaber_sum, poly_bound, three_pfister_bound, two_pfister_bound, BoundPoly};

use crate::{timed, Context, Outcome};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn faulhaber_against_summation() -> Result<String, String> {
    let mut polys: Vec<BoundPoly> = (0..=6)
        .map(|k| {
            let mut c = vec![0i64; k + 1];
            c[k] = 1;
            BoundPoly::from_ints(&c)
        })
        .collect();
    polys.push(BoundPoly::new(vec![rat(3, 2), rat(-1, 3), rat(0, 1), rat(5, 7), rat(0, 1), rat(0, 1), rat(-2, 9)]));
    polys.push(BoundPoly::from_ints(&[-4, 1, 1, 1, 1, 1, 1]));
    for q in &polys {
        let p = faulhaber_sum(q);
        if p.degree() != q.degree() + 1 && !q.coeffs().is_empty() {
            return Err(format!("degree of sum of {q} is {}", p.degree()));
        }
        let mut acc = BigRational::zero();
        for n in 1..=100i64 {
            acc += q.eval_int(n);
            if p.eval_int(n) != acc {
                return Err(format!("sum of {q} at n = {n}"));
            }
        }
    }
    Ok(format!("{} polynomials, n <= 100", polys.len()))
}

pub(crate) fn run(ctx: &mut Context) -> Vec<Outcome> {
    let records = ctx.records.len();
    let violations: Vec<String> = ctx
        .bound_violations()
        .iter()
        .map(|r| format!("{}: GP_{}={} at d={}", r.source, r.n, r.value, r.dim))
        .collect();
    let coarse = ctx
        .records
        .iter()
        .filter(|r| {
            let d = r.dim as i64;
            match r.n {
                2 => two_pfister_bound(r.dim as u64).map_or(true, |b| r.value as u64 > b),
                3 => BigRational::from_integer(BigInt::from(r.value)) > rat(d * d, 16),
                _ => false,
            }
        })
        .count();
    vec![timed("8", "bounds", || {
        let t16 = three_pfister_bound(16).map_err(|e| e.to_string())?;
        if t16 != 3 {
            return Err(format!("three_pfister_bound(16) = {t16}"));
        }
        if !violations.is_empty() || coarse > 0 {
            return Err(format!("bound violations: {}", violations.join("; ")));
        }
        let faul = faulhaber_against_summation()?;
        let p4 = poly_bound(4).map_err(|e| e.to_string())?;
        let want = BoundPoly::new(vec![rat(1, 1), rat(0, 1), rat(1, 32)]);
        if p4 != want {
            return Err(format!("poly_bound(4) = {p4}"));
        }
        for n in 3..=8 {
            let p = poly_bound(n).map_err(|e| e.to_string())?;
            let vals: Vec<BigRational> = (0..=400).step_by(4).map(|x| p.eval_int(x)).collect();
            if vals.windows(2).any(|w| w[1] < w[0]) {
                return Err(format!("poly_bound({n}) not monotone"));
            }
        }
        Ok(format!(
            "three_pfister_bound(16) = 3; {records} computed values within bounds; faulhaber: {faul}; poly_bound(4) = {p4}"
        ))
    })]
}
