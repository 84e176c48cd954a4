mod common;

use common::*;
use proptest::prelude::*;
use rigidwitt::ideals::{decompose_unimodular, extend_scalars_quadratic, in_In};
use rigidwitt::pfnum::divisible_by_pfister;
use rigidwitt::witt::{anisotropic_part, group_ring_equal, is_hyperbolic};
use rigidwitt::{DiagonalForm, Error, FieldDesc, PfisterSpec, SquareClass};

fn arb_spec(f: FieldDesc, n: usize) -> impl Strategy<Value = PfisterSpec> {
    (arb_class(f), prop::collection::vec(arb_class(f), n)).prop_map(|(c, s)| PfisterSpec::new(c, s))
}

/// A field, a fold and a Witt sum of up to four scaled Pfister forms of that fold.
fn arb_pfister_sum(max_nvars: usize, folds: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (usize, DiagonalForm)> {
    (arb_field(max_nvars), folds)
        .prop_flat_map(|(f, n)| (Just(f), Just(n), prop::collection::vec(arb_spec(f, n), 1..=4)))
        .prop_map(|(f, n, specs)| {
            let phi = specs
                .iter()
                .fold(DiagonalForm::zero(f), |acc, s| acc.orth_sum(&s.expand(&f)).unwrap());
            (n, phi)
        })
}

fn signed_discriminant_trivial(phi: &DiagonalForm) -> bool {
    let f = phi.field();
    let d = phi.dim();
    let mut det = phi.entries().iter().fold(SquareClass::ONE, |acc, &a| acc * a);
    if (d / 2) % 2 == 1 {
        det *= f.minus_one();
    }
    det == SquareClass::ONE
}

#[test]
fn first_two_powers_match_dimension_and_discriminant() {
    for f in fields(2) {
        for phi in all_forms(&f, 6) {
            let even = phi.dim() % 2 == 0;
            assert_eq!(in_In(&phi, 1), even, "{phi}");
            assert_eq!(in_In(&phi, 2), even && signed_discriminant_trivial(&phi), "{phi}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pfister_sums_lie_in_the_ideal((n, phi) in arb_pfister_sum(4, 0..=4)) {
        prop_assert!(in_In(&phi, n as u32), "{} not in I^{}", phi, n);
        prop_assert!(in_In(&anisotropic_part(&phi), n as u32));
    }

    #[test]
    fn unimodular_split_postconditions((n, phi) in arb_pfister_sum(4, 1..=3).prop_filter("variables", |(_, p)| p.field().nvars > 0)) {
        let phi = anisotropic_part(&phi);
        let i = phi.field().nvars;
        match decompose_unimodular(&phi, i) {
            Err(Error::HyperbolicResidue(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
            Ok(s) => {
                let t_tau = DiagonalForm::new(*phi.field(), vec![SquareClass::ONE, s.t]).unwrap().tensor(&s.tau).unwrap();
                prop_assert!(group_ring_equal(&phi, &s.sigma.orth_sum(&t_tau).unwrap()));
                prop_assert!(group_ring_equal(&phi, &s.recombine()));
                prop_assert!(in_In(&s.sigma, n as u32));
                prop_assert!(in_In(&s.tau, n as u32 - 1));
                prop_assert!(s.sigma.dim() < phi.dim());
                prop_assert!(s.t.has_var(i));
            }
        }
    }

    #[test]
    fn quadratic_extension_kernel(
        (phi, a) in arb_field(3)
            .prop_filter("needs a nontrivial class", |f| f.square_class_count() > 1)
            .prop_flat_map(|f| (arb_form(f, 8), arb_class(f)))
    ) {
        let phi = anisotropic_part(&phi);
        prop_assume!(a != SquareClass::ONE);
        let (_, image) = extend_scalars_quadratic(&phi, a).unwrap();
        let verdict = divisible_by_pfister(&phi, &[a]).unwrap();
        prop_assert_eq!(is_hyperbolic(&image), verdict.divisible, "{} by {:?}", phi, a);
    }
}
