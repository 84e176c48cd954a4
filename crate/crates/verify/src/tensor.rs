use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidwitt::pfnum::random::random_pfister_sum;
use rigidwitt::pfnum::{pfister_number, SearchOptions};
use rigidwitt::{DiagonalForm, FieldDesc, PfisterSpec};

use crate::{timed, Context, Outcome};

const INSTANCES: usize = 50;

fn gp(phi: &DiagonalForm, n: usize) -> Result<usize, String> {
    let (k, cert) = pfister_number(phi, n, &SearchOptions::default()).map_err(|e| e.to_string())?;
    if !cert.verify() {
        return Err("certificate fails to verify".into());
    }
    Ok(k)
}

pub(crate) fn run(ctx: &mut Context) -> Outcome {
    let mut records = Vec::new();
    let seed = ctx.seed ^ 0x7e45;
    let o = timed("6", "tensor and lift identities", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = FieldDesc::f3(3);
        let mut failures = Vec::new();
        let mut done = 0;
        let mut dims = [0usize; 5];
        while done < INSTANCES {
            let terms = rng.gen_range(1..=3);
            let (_, psi) = random_pfister_sum(&field, 2, terms, &mut rng);
            if psi.is_zero() || psi.dim() > 8 {
                continue;
            }
            done += 1;
            dims[psi.dim() / 2] += 1;
            let g2 = gp(&psi, 2)?;
            let lifted = psi.extend_fresh_variable(1);
            let f4 = *lifted.field();
            let t = f4.var(4).map_err(|e| e.to_string())?;
            let phi = PfisterSpec::unscaled(vec![t]).expand(&f4).tensor(&lifted).map_err(|e| e.to_string())?;
            let g3 = gp(&phi, 3)?;
            let g2_lift = gp(&lifted, 2)?;
            records.push((2, psi.dim(), g2));
            records.push((3, phi.dim(), g3));
            if g3 != g2 || g2_lift != g2 {
                failures.push(format!("{psi}: GP_2 = {g2}, GP_3 of tensor = {g3}, lifted GP_2 = {g2_lift}"));
            }
        }
        let detail = format!(
            "{INSTANCES} forms (dims 4/6/8: {}/{}/{}), {} failures",
            dims[2],
            dims[3],
            dims[4],
            failures.len()
        );
        if failures.is_empty() {
            Ok(detail)
        } else {
            Err(format!("{detail}: {}", failures.join("; ")))
        }
    });
    for (n, d, v) in records {
        ctx.record("tensor-lift", n, d, v);
    }
    o
}
