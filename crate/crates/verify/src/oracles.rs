//! Agreement between independent routes to the same answer.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidwitt::ideals::in_In;
use rigidwitt::pfnum::divisibility::{divisible_by_extension, divisible_linear, divisible_peeling};
use rigidwitt::sqclass::Level;
use rigidwitt::witt::{anisotropic_part, group_ring_equal, is_isotropic, represents, value_set, Coeffs, GroupRing};
use rigidwitt::{Base, DiagonalForm, FieldDesc, SquareClass};

use crate::{timed, Context, Outcome};

const BASES: [Base; 4] = [Base::F3, Base::R, Base::C, Base::SquareMinusOne];
const RANDOM_PAIRS: usize = 10_000;

/// Every multiset of `classes` with at most `max` elements.
pub fn for_each_multiset(classes: &[SquareClass], max: usize, f: &mut impl FnMut(&[SquareClass])) {
    fn go(
        classes: &[SquareClass],
        start: usize,
        max: usize,
        cur: &mut Vec<SquareClass>,
        f: &mut impl FnMut(&[SquareClass]),
    ) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for i in start..classes.len() {
            cur.push(classes[i]);
            go(classes, i, max, cur, f);
            cur.pop();
        }
    }
    go(classes, 0, max, &mut Vec::new(), f);
}

/// Every Witt class whose anisotropic part has dimension at most `max`,
/// as that anisotropic form.
pub fn for_each_witt_class(field: &FieldDesc, max: usize, f: &mut impl FnMut(DiagonalForm)) {
    let ring = GroupRing::new(field);
    let choices: Vec<(i64, usize)> = match ring.coeffs() {
        Coeffs::Mod2 => vec![(0, 0), (1, 1)],
        Coeffs::Mod4 => vec![(0, 0), (1, 1), (2, 2), (3, 1)],
        Coeffs::Int => {
            let m = max as i64;
            (-m..=m).map(|c| (c, c.unsigned_abs() as usize)).collect()
        }
    };
    fn go(
        ring: &GroupRing,
        choices: &[(i64, usize)],
        i: usize,
        left: usize,
        counts: &mut Vec<i64>,
        f: &mut impl FnMut(DiagonalForm),
    ) {
        if i == counts.len() {
            f(ring.to_form(&ring.from_counts(counts)));
            return;
        }
        for &(c, d) in choices {
            if d <= left {
                counts[i] = c;
                go(ring, choices, i + 1, left - d, counts, f);
            }
        }
        counts[i] = 0;
    }
    let mut counts = vec![0; ring.size()];
    go(&ring, &choices, 0, max, &mut counts, f);
}

fn random_form<R: Rng>(field: &FieldDesc, rng: &mut R) -> DiagonalForm {
    let classes = field.classes();
    let d = rng.gen_range(0..=8);
    let e = (0..d).map(|_| *classes.choose(rng).unwrap()).collect();
    DiagonalForm::new(*field, e).unwrap()
}

/// A form Witt-equivalent to `phi`, disguised by hyperbolic planes and,
/// where `<x,x> = <-x,-x>`, by flipping pairs.
fn disguise<R: Rng>(phi: &DiagonalForm, rng: &mut R) -> DiagonalForm {
    let f = *phi.field();
    let classes = f.classes();
    let mut e = phi.entries().to_vec();
    for _ in 0..rng.gen_range(0..3) {
        let x = *classes.choose(rng).unwrap();
        e.extend([x, f.negate(x)]);
    }
    if f.level() != Level::Infinite {
        let mut counts = std::collections::BTreeMap::new();
        for &x in &e {
            *counts.entry(x).or_insert(0) += 1;
        }
        for (x, c) in counts {
            if c >= 2 && rng.gen_bool(0.5) {
                for _ in 0..2 {
                    let i = e.iter().position(|&y| y == x).unwrap();
                    e[i] = f.negate(x);
                }
            }
        }
    }
    DiagonalForm::new(f, e).unwrap()
}

fn oracle_a(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equal = 0;
    let mut bad = Vec::new();
    for _ in 0..RANDOM_PAIRS {
        let base = *BASES.choose(&mut rng).unwrap();
        let field = FieldDesc::new(base, rng.gen_range(0..=3)).unwrap();
        let phi = random_form(&field, &mut rng);
        let psi = if rng.gen_bool(0.5) { disguise(&phi, &mut rng) } else { random_form(&field, &mut rng) };
        let ring = group_ring_equal(&phi, &psi);
        let a = anisotropic_part(&phi).canonicalize().map_err(|e| e.to_string())?;
        let b = anisotropic_part(&psi).canonicalize().map_err(|e| e.to_string())?;
        let springer = a == b;
        equal += usize::from(springer);
        if ring != springer && bad.len() < 5 {
            bad.push(format!("{phi} vs {psi}"));
        }
    }
    if bad.is_empty() {
        Ok(format!("{RANDOM_PAIRS} pairs, {equal} Witt-equivalent"))
    } else {
        Err(format!("discrepancies: {}", bad.join("; ")))
    }
}

fn oracle_b() -> Result<String, String> {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for base in BASES {
        for nvars in 0..=3 {
            let field = FieldDesc::new(base, nvars).unwrap();
            let classes = field.classes();
            for_each_multiset(&classes, 4, &mut |e| {
                let phi = DiagonalForm::new(field, e.to_vec()).unwrap();
                if is_isotropic(&phi) {
                    return;
                }
                let d = value_set(&phi);
                for &a in &classes {
                    checked += 1;
                    if d.contains(&a) != represents(a, &phi) && bad.len() < 5 {
                        bad.push(format!("{a:?} in {phi}"));
                    }
                }
            });
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} (class, form) pairs"))
    } else {
        Err(format!("discrepancies: {}", bad.join("; ")))
    }
}

fn oracle_c() -> Result<String, String> {
    let mut checked = 0usize;
    let mut members = 0usize;
    let mut bad = Vec::new();
    for base in BASES {
        for nvars in 0..=2 {
            let field = FieldDesc::new(base, nvars).unwrap();
            for_each_multiset(&field.classes(), 6, &mut |e| {
                let phi = DiagonalForm::new(field, e.to_vec()).unwrap();
                let algebraic = in_In(&phi, 2);
                let invariants = phi.dim().is_multiple_of(2) && phi.discriminant() == SquareClass::ONE;
                checked += 1;
                members += usize::from(algebraic);
                if algebraic != invariants && bad.len() < 5 {
                    bad.push(phi.to_string());
                }
            });
        }
    }
    if bad.is_empty() {
        Ok(format!("{checked} forms, {members} in I^2"))
    } else {
        Err(format!("discrepancies: {}", bad.join("; ")))
    }
}

/// Fields for the divisibility sweep.
pub const DIVISIBILITY_FIELDS: [(Base, usize); 4] =
    [(Base::F3, 3), (Base::C, 3), (Base::SquareMinusOne, 2), (Base::R, 2)];

fn oracle_d() -> Result<String, String> {
    let mut one_slot = 0usize;
    let mut two_slot = 0usize;
    let mut divisible = 0usize;
    let mut bad = Vec::new();
    for (base, max_vars) in DIVISIBILITY_FIELDS {
        for nvars in 0..=max_vars {
            let field = FieldDesc::new(base, nvars).unwrap();
            let classes = field.classes();
            let mut pairs = Vec::new();
            for (i, &a) in classes.iter().enumerate() {
                for &b in &classes[i + 1..] {
                    pairs.push([a, b]);
                }
            }
            let mut err = None;
            for_each_witt_class(&field, 8, &mut |phi| {
                if err.is_some() {
                    return;
                }
                for &a in &classes {
                    one_slot += 1;
                    let lin = divisible_linear(&phi, &[a]);
                    let peel = match divisible_peeling(&phi, &[a]) {
                        Ok(q) => q,
                        Err(e) => {
                            err = Some(e.to_string());
                            return;
                        }
                    };
                    let ext = match divisible_by_extension(&phi, a) {
                        Ok(x) => x,
                        Err(e) => {
                            err = Some(e.to_string());
                            return;
                        }
                    };
                    let witness_ok = peel.as_ref().is_none_or(|q| {
                        let pi = rigidwitt::PfisterSpec::unscaled(vec![a]).expand(&field);
                        pi.tensor(q).is_ok_and(|p| p.is_isometric(&phi).unwrap_or(false))
                    });
                    divisible += usize::from(lin);
                    if (lin != peel.is_some() || lin != ext || !witness_ok) && bad.len() < 5 {
                        bad.push(format!("{phi} by <<{}>>", field.print_class(a)));
                    }
                }
                if phi.dim() % 4 != 0 {
                    return;
                }
                for p in &pairs {
                    two_slot += 1;
                    let lin = divisible_linear(&phi, p);
                    let peel = divisible_peeling(&phi, p).map(|q| q.is_some());
                    if peel.as_ref().map_or(true, |&q| q != lin) && bad.len() < 5 {
                        bad.push(format!("{phi} by <<{},{}>>", field.print_class(p[0]), field.print_class(p[1])));
                    }
                }
            });
            if let Some(e) = err {
                return Err(format!("{field}: {e}"));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{one_slot} one-slot checks ({divisible} divisible), {two_slot} two-slot checks"))
    } else {
        Err(format!("discrepancies: {}", bad.join("; ")))
    }
}

pub(crate) fn run(ctx: &mut Context) -> Vec<Outcome> {
    vec![
        timed("7a", "group-ring equality vs anisotropic parts", || oracle_a(ctx.seed ^ 0xa)),
        timed("7b", "value_set vs represents", oracle_b),
        timed("7c", "I^2 membership vs dimension and discriminant", oracle_c),
        timed("7d", "divisibility: linear system, peeling, quadratic extension", oracle_d),
    ]
}
