use std::time::Instant;

use rigidwitt::pfnum::{generic_I2_form, pfister_number, SearchOptions};
use rigidwitt::{Base, FieldDesc};

use crate::{timed, Context, Outcome};

const TIME_LIMIT_SECS: f64 = 10.0;

pub(crate) fn run(ctx: &mut Context) -> Vec<Outcome> {
    let mut records = Vec::new();
    let outcome = timed("1", "generic I^2 Pfister numbers", || {
        let mut parts = Vec::new();
        for base in [Base::F3, Base::R, Base::C] {
            for (nvars, expected) in [(2usize, 1usize), (4, 2)] {
                let field = FieldDesc::new(base, nvars).map_err(|e| e.to_string())?;
                let phi = generic_I2_form(&field, nvars).map_err(|e| e.to_string())?;
                let start = Instant::now();
                let (k, cert) =
                    pfister_number(&phi, 2, &SearchOptions::default()).map_err(|e| format!("{field}: {e}"))?;
                let secs = start.elapsed().as_secs_f64();
                if !cert.verify() {
                    return Err(format!("{field}: certificate does not verify"));
                }
                if k != expected {
                    return Err(format!("{field}: GP_2 = {k}, expected {expected}"));
                }
                if secs > TIME_LIMIT_SECS {
                    return Err(format!("{field}: took {secs:.1}s"));
                }
                records.push(("generic-i2", 2, phi.dim(), k));
                parts.push(format!("{field}={k}"));
            }
        }
        Ok(parts.join(" "))
    });
    for (s, n, d, v) in records {
        ctx.record(s, n, d, v);
    }
    vec![outcome]
}
