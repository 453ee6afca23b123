//! Randomized laws for the lift, rotation numbers, and constructions:
//! floors agree with iterated products, are superadditive with defect one,
//! certified intervals enclose every exact path, the coboundary identity
//! trivializes the cocycle on order-induced orderings, conjugation fixes
//! both invariants, pullbacks evaluate through the morphism, and finite
//! quotients reproduce the standard cyclic orderings.

mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use circord::construct::{cofinal_central, pullback, quotient_circular};
use circord::groups::Group;
use circord::lift::{cocycle_f, eta_of_secret, lift_mul, power_floor, LiftElement};
use circord::morphism::Morphism;
use circord::orders::{CircularOrder, LeftOrder};
use circord::semiconj::{check_conjugation_invariance, rot_estimate, rot_exact};

const COORD: std::ops::RangeInclusive<i64> = -6..=6;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn power_floors_match_iterated_products(
        pick in 0usize..64,
        a in proptest::array::uniform3(COORD),
        n in 1u64..48,
    ) {
        let matrix = common::ordering_matrix();
        let ord = &matrix[pick % matrix.len()];
        let g = common::element_from_raw(ord.group(), &a);
        let step = LiftElement::canonical(g.clone());
        let mut x = step.clone();
        for _ in 1..n {
            x = lift_mul(ord, &x, &step);
        }
        prop_assert_eq!(
            x.level().clone(),
            BigInt::from(power_floor(ord, &g, n)),
            "the cocycle sum is the level of the n-th power"
        );
    }

    #[test]
    fn power_floors_are_superadditive_with_defect_one(
        pick in 0usize..64,
        a in proptest::array::uniform3(COORD),
        m in 1u64..40,
        n in 1u64..40,
    ) {
        let matrix = common::ordering_matrix();
        let ord = &matrix[pick % matrix.len()];
        let g = common::element_from_raw(ord.group(), &a);
        let defect = power_floor(ord, &g, m + n)
            - power_floor(ord, &g, m)
            - power_floor(ord, &g, n);
        prop_assert!(defect <= 1, "combining powers adds at most one wrap");
    }

    #[test]
    fn certified_intervals_enclose_exact_values(
        pick in 0usize..64,
        a in proptest::array::uniform3(COORD),
        n in 4u64..256,
    ) {
        let matrix = common::ordering_matrix();
        let ord = &matrix[pick % matrix.len()];
        let g = common::element_from_raw(ord.group(), &a);
        if let Some(exact) = rot_exact(ord, &g) {
            let est = rot_estimate(ord, &g, n);
            let gap = (exact.value.center() - est.value.center()).abs();
            prop_assert!(
                gap <= est.value.radius(),
                "estimate at depth {} strays {} from the exact value",
                n,
                gap
            );
        }
    }

    #[test]
    fn eta_trivializes_the_wraparound_cocycle(
        pick in 0usize..64,
        a in proptest::array::uniform3(COORD),
        b in proptest::array::uniform3(COORD),
    ) {
        let cones = common::cone_matrix();
        let cone = &cones[pick % cones.len()];
        let group = cone.group();
        let ord = circord::orders::secret_from_left(cone);
        let eta = eta_of_secret(cone);
        let g = common::element_from_raw(group, &a);
        let h = common::element_from_raw(group, &b);
        let lhs = i16::from(cocycle_f(&ord, &g, &h));
        let rhs = i16::from(eta.eta(&g)) + i16::from(eta.eta(&h))
            - i16::from(eta.eta(&group.mul(&g, &h)));
        prop_assert_eq!(lhs, rhs, "f is the coboundary of eta");
    }

    #[test]
    fn conjugation_preserves_rotation_and_defect(
        pick in 0usize..64,
        t in proptest::array::uniform3(COORD),
    ) {
        let matrix = common::ordering_matrix();
        let ord = &matrix[pick % matrix.len()];
        let group = ord.group();
        let conjugator = common::element_from_raw(group, &t);
        let elements = group.ball(1).unwrap();
        let pairs: Vec<_> = elements
            .iter()
            .zip(elements.iter().rev())
            .map(|(g, h)| (g.clone(), h.clone()))
            .collect();
        let report = check_conjugation_invariance(ord, &conjugator, &elements, &pairs, 64);
        prop_assert!(
            report.passed(),
            "violations: {:?}",
            report.violations
        );
    }

    #[test]
    fn pullbacks_evaluate_through_the_morphism(
        scale in prop_oneof![1i64..6, -5i64..-1],
        a in COORD,
        b in COORD,
        c in COORD,
        n in 2u64..8,
    ) {
        let z = Group::free_abelian(1).unwrap();
        let order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
        let one = z.element_from_i64(&[1]).unwrap();
        let datum = cofinal_central(&order, &one, 64).unwrap();
        let target = circord::construct::approx_dn(&datum, n).unwrap();
        let phi = Morphism::scale_z(BigInt::from(scale));
        let pulled = pullback(&target, &phi).unwrap();
        let (x, y, w) = (
            z.element_from_i64(&[a]).unwrap(),
            z.element_from_i64(&[b]).unwrap(),
            z.element_from_i64(&[c]).unwrap(),
        );
        prop_assert_eq!(
            pulled.eval(&x, &y, &w),
            target.eval(&phi.apply(&x), &phi.apply(&y), &phi.apply(&w)),
            "evaluation commutes with the embedding"
        );
    }

    #[test]
    fn finite_quotients_are_standard_cyclic_orderings(
        step in 1i64..4,
        n in 1u64..8,
        a in 0i64..24,
        b in 0i64..24,
        c in 0i64..24,
    ) {
        let z = Group::free_abelian(1).unwrap();
        let order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
        let zel = z.element_from_i64(&[step]).unwrap();
        let datum = cofinal_central(&order, &zel, 64).unwrap();
        let q = quotient_circular(&datum, n).unwrap();
        let modulus = (step as u64) * n;
        let standard = CircularOrder::cyclic_standard(modulus, 1).unwrap();
        prop_assert_eq!(q.group(), standard.group());
        let (x, y, w) = (
            q.group().element_from_i64(&[a]).unwrap(),
            q.group().element_from_i64(&[b]).unwrap(),
            q.group().element_from_i64(&[c]).unwrap(),
        );
        prop_assert_eq!(
            q.eval(&x, &y, &w),
            standard.eval(&x, &y, &w),
            "minimal representatives sort like residues"
        );
    }

    #[test]
    fn exact_rotations_are_stable_under_estimate_depth(
        pick in 0usize..64,
        a in proptest::array::uniform3(COORD),
    ) {
        let matrix = common::ordering_matrix();
        let ord = &matrix[pick % matrix.len()];
        let g = common::element_from_raw(ord.group(), &a);
        if let Some(exact) = rot_exact(ord, &g) {
            prop_assert!(exact.value.is_exact());
            let lo = exact.value.mod_z();
            let hi = rot_exact(ord, &g).unwrap().value.mod_z();
            prop_assert_eq!(lo.clone(), hi, "recomputation is deterministic");
            let frac = lo.center();
            prop_assert!(
                frac >= &ratio(0, 1) && frac < &ratio(1, 1),
                "the reduced value lies in [0, 1)"
            );
        }
    }
}
