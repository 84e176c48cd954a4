mod common;

use std::collections::{BTreeSet, HashMap};

use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rigidwitt::qform::decompose_over_split;
use rigidwitt::sqclass::Level;
use rigidwitt::witt::{is_hyperbolic, is_isotropic};
use rigidwitt::{DiagonalForm, FieldDesc, PfisterSpec, SquareClass};

fn sum(a: &DiagonalForm, b: &DiagonalForm) -> DiagonalForm {
    a.orth_sum(b).unwrap()
}

fn oracle_represents(field: &FieldDesc, a: SquareClass, phi: &DiagonalForm) -> bool {
    oracle_isotropic(phi) || oracle_isotropic(&sum(phi, &DiagonalForm::one(*field, field.negate(a))))
}

fn oracle_value_set(phi: &DiagonalForm) -> BTreeSet<SquareClass> {
    let f = *phi.field();
    f.classes().into_iter().filter(|&a| oracle_represents(&f, a, phi)).collect()
}

#[test]
fn isotropy_routes_agree() {
    for f in fields(3) {
        for phi in all_forms(&f, 4) {
            let lib = is_isotropic(&phi);
            assert_eq!(lib, springer_isotropic(&phi), "{phi}");
            assert_eq!(lib, oracle_isotropic(&phi), "{phi}");
        }
    }
}

#[test]
fn canonicalize_is_idempotent_and_classifies_isometry() {
    for f in fields(3) {
        let aniso: Vec<DiagonalForm> = all_forms(&f, 4).into_iter().filter(|p| !oracle_isotropic(p)).collect();
        let mut by_canon: HashMap<DiagonalForm, (usize, Vec<BaseWitt>)> = HashMap::new();
        let mut by_key: HashMap<(usize, Vec<BaseWitt>), DiagonalForm> = HashMap::new();
        for phi in &aniso {
            let c = phi.canonicalize().unwrap();
            assert_eq!(c.canonicalize().unwrap(), c);
            assert!(oracle_isometric(&c, phi), "{phi} vs {c}");
            let key = (phi.dim(), witt_key(phi));
            assert_eq!(by_canon.entry(c.clone()).or_insert_with(|| key.clone()), &key, "{phi}");
            assert_eq!(by_key.entry(key).or_insert_with(|| c.clone()), &c, "{phi}");
        }
        // is_isometric agrees with the oracle on a stride of pairs.
        for (i, a) in aniso.iter().enumerate().step_by(7) {
            for b in aniso.iter().skip(i % 5).step_by(11) {
                assert_eq!(a.is_isometric(b).unwrap(), oracle_isometric(a, b), "{a} {b}");
            }
        }
        assert!(all_forms(&f, 4).iter().filter(|p| oracle_isotropic(p)).all(|p| p.canonicalize().is_err()));
    }
}

#[test]
fn anisotropic_multiplicity_law() {
    for f in fields(3) {
        for phi in all_forms(&f, 5) {
            if springer_isotropic(&phi) {
                continue;
            }
            let m = phi.multiplicities();
            for (&a, &k) in &m {
                let neg = m.contains_key(&f.negate(a)) && f.negate(a) != a;
                match f.level() {
                    Level::One => assert!(k <= 1, "{phi}"),
                    Level::Two => assert!(k <= 2 && !neg, "{phi}"),
                    Level::Infinite => assert!(!neg, "{phi}"),
                }
            }
        }
    }
}

#[test]
fn is_subform_matches_complement_search() {
    for f in fields(2) {
        let forms = all_forms(&f, 4);
        let keys: Vec<Vec<BaseWitt>> = forms.iter().map(witt_key).collect();
        for psi in &forms {
            // Every Witt key of psi ⊥ rho, grouped by dim rho.
            let mut reach: Vec<BTreeSet<Vec<BaseWitt>>> = vec![BTreeSet::new(); 5];
            for rho in forms.iter().filter(|r| r.dim() + psi.dim() <= 4) {
                reach[rho.dim()].insert(witt_key(&sum(psi, rho)));
            }
            for (phi, key) in forms.iter().zip(&keys) {
                let expected = phi.dim() >= psi.dim() && reach[phi.dim() - psi.dim()].contains(key);
                assert_eq!(psi.is_subform(phi).unwrap(), expected, "{psi} in {phi}");
            }
        }
    }
}

#[test]
fn pfister_forms_are_anisotropic_or_hyperbolic() {
    for f in fields(3) {
        let cs = f.classes();
        for &a in &cs {
            for &b in &cs {
                let two = PfisterSpec::unscaled(vec![a, b]).expand(&f);
                assert_eq!(is_isotropic(&two), is_hyperbolic(&two), "{two}");
                assert!(!oracle_isotropic(&two) || oracle_hyperbolic(&two), "{two}");
                for &c in &cs {
                    let three = PfisterSpec::unscaled(vec![a, b, c]).expand(&f);
                    assert_eq!(is_isotropic(&three), is_hyperbolic(&three), "{three}");
                    assert!(!oracle_isotropic(&three) || oracle_hyperbolic(&three), "{three}");
                }
            }
        }
    }
}

fn random_form(rng: &mut ChaCha8Rng, f: &FieldDesc, dim: usize) -> DiagonalForm {
    let cs = f.classes();
    DiagonalForm::new(*f, (0..dim).map(|_| *cs.choose(rng).unwrap()).collect()).unwrap()
}

#[test]
fn decompose_over_split_postconditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    let mut nontrivial_rest = 0;
    while checked < 1200 {
        let f = *fields(3).choose(&mut rng).unwrap();
        let d1 = rng.gen_range(0..=4);
        let d2 = rng.gen_range(0..=4);
        let phi1 = random_form(&mut rng, &f, d1);
        let phi2 = random_form(&mut rng, &f, d2);
        let total = sum(&phi1, &phi2);
        if oracle_isotropic(&total) {
            continue;
        }
        // A subform: part of the entries, then rewritten by random isometries
        // of the sum where possible.
        let k = rng.gen_range(0..=total.dim());
        let mut pool = total.entries().to_vec();
        pool.shuffle(&mut rng);
        let psi = {
            let mut cand = random_form(&mut rng, &f, k);
            if !cand.is_subform(&total).unwrap() {
                cand = DiagonalForm::new(f, pool[..k].to_vec()).unwrap();
            }
            cand
        };
        let (p1, p2, p3) = decompose_over_split(&psi, &phi1, &phi2).unwrap();
        assert!(oracle_isometric(&sum(&sum(&p1, &p2), &p3), &psi), "{psi}");
        assert!(p1.is_subform(&phi1).unwrap() && p2.is_subform(&phi2).unwrap());
        let d3 = oracle_value_set(&p3);
        let forbidden: BTreeSet<SquareClass> = oracle_value_set(&phi1).union(&oracle_value_set(&phi2)).copied().collect();
        assert!(p3.is_zero() || d3.is_disjoint(&forbidden), "{psi} over {phi1} | {phi2}");
        if f.level() != Level::Two {
            assert!(p3.is_zero());
        }
        for x in f.classes() {
            assert!(!DiagonalForm::new(f, vec![x, x]).unwrap().is_subform(&p3).unwrap());
        }
        nontrivial_rest += usize::from(!p3.is_zero());
        checked += 1;
    }
    assert!(nontrivial_rest > 0, "no instance exercised the level-2 remainder");
}
