use rigidwitt::pfnum::{generic_I2_form, pfister_number, SearchOptions};
use rigidwitt::{DiagonalForm, Error, FieldDesc, PfisterSpec};

use crate::{timed, Context, Outcome};

/// Node budget for the direct 3-fold computation over seven variables.
const DIRECT_BUDGET: u64 = 400_000_000;

fn tensor_with_fresh(psi: &DiagonalForm) -> Result<DiagonalForm, String> {
    let lifted = psi.extend_fresh_variable(1);
    let f = *lifted.field();
    let t = f.var(f.nvars).map_err(|e| e.to_string())?;
    PfisterSpec::unscaled(vec![t]).expand(&f).tensor(&lifted).map_err(|e| e.to_string())
}

fn gp(phi: &DiagonalForm, n: usize, budget: u64) -> Result<usize, Error> {
    let opts = SearchOptions { node_budget: budget, ..Default::default() };
    let (k, cert) = pfister_number(phi, n, &opts)?;
    if !cert.verify() {
        return Err(Error::InternalContradiction("certificate fails to verify".into()));
    }
    Ok(k)
}

pub(crate) fn run(ctx: &mut Context) -> Vec<Outcome> {
    let mut records = Vec::new();
    let o = timed("5", "sharpness at dimension 16", || {
        let mut parts = Vec::new();
        // Fallback instance, always run: 4 variables.
        let psi4 = generic_I2_form(&FieldDesc::f3(4), 4).map_err(|e| e.to_string())?;
        let g2 = gp(&psi4, 2, u64::MAX).map_err(|e| e.to_string())?;
        let phi4 = tensor_with_fresh(&psi4)?;
        let g3 = gp(&phi4, 3, u64::MAX).map_err(|e| e.to_string())?;
        records.push((2, psi4.dim(), g2));
        records.push((3, phi4.dim(), g3));
        parts.push(format!("4 vars: GP_2 = {g2}, GP_3 = {g3}"));
        if (g2, g3) != (2, 2) {
            return Err(parts.join("; "));
        }

        let psi6 = generic_I2_form(&FieldDesc::f3(6), 6).map_err(|e| e.to_string())?;
        let g2 = gp(&psi6, 2, u64::MAX).map_err(|e| e.to_string())?;
        records.push((2, psi6.dim(), g2));
        parts.push(format!("6 vars: GP_2 = {g2}"));
        if g2 != 3 {
            return Err(parts.join("; "));
        }
        let phi7 = tensor_with_fresh(&psi6)?;
        match gp(&phi7, 3, DIRECT_BUDGET) {
            Ok(g3) => {
                records.push((3, phi7.dim(), g3));
                parts.push(format!("direct GP_3 over 7 vars = {g3}"));
                if g3 != 3 {
                    return Err(parts.join("; "));
                }
            }
            Err(Error::SearchBudgetExceeded { .. }) => {
                parts.push("direct 7-variable GP_3 search is long-running, identity route used".into());
            }
            Err(e) => return Err(format!("{}; {e}", parts.join("; "))),
        }
        Ok(parts.join("; "))
    });
    for (n, d, v) in records {
        ctx.record("sharpness16", n, d, v);
    }
    vec![o]
}
