//! Release gate: ten end-to-end checks, one test each, covering exact
//! rotation numbers, the approximation family, order-induced orderings,
//! semiconjugacy verdicts, enumeration regressions, lift-group laws,
//! neighborhood determinacy, empirical convergence, and the genuineness
//! pipeline. Every check carries a wall-clock budget; blowing the budget
//! fails the criterion even if the values are right.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use circord::construct::{approx_dn, approx_rot, cofinal_central, convergence_table, lex_extend};
use circord::enumerate::{canonical_tararin_cones, enumerate_co_cyclic, enumerate_lo_ball};
use circord::groups::{Element, Group};
use circord::lift::{eta_of_secret, floor, lift_inv, lift_mul, lift_positive, lift_z, LiftElement};
use circord::morphism::Morphism;
use circord::orders::{CircularOrder, LeftOrder};
use circord::sample::Sampler;
use circord::lift::power_floor_chain;
use circord::semiconj::{
    default_pair_sample, is_secret, rot_exact, semiconjugate, tau, RotationValue, Verdict,
};
use circord::Ses;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn budget(name: &str, start: Instant, limit_secs: f64) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed <= limit_secs,
        "{name}: took {elapsed:.2}s, budget {limit_secs}s"
    );
    println!("{name}: pass ({elapsed:.2}s / {limit_secs}s)");
}

fn secret_lex(group: Group, signs: Vec<i8>) -> CircularOrder {
    CircularOrder::secret(LeftOrder::lex(group, signs).unwrap())
}

#[test]
fn criterion_01_cyclic_rotation_numbers_are_exact() {
    let start = Instant::now();
    for n in 2..=12u64 {
        let c = CircularOrder::cyclic_standard(n, 1).unwrap();
        for g in 0..n {
            let e = c.group().element_from_i64(&[g as i64]).unwrap();
            let r = rot_exact(&c, &e).expect("torsion path is exact");
            assert!(r.value.is_exact());
            assert_eq!(
                r.value,
                RotationValue::Exact(ratio(g as i64, n as i64)),
                "rot of {g} in the {n}-cycle"
            );
        }
    }
    budget("criterion 01 cyclic rotation numbers exact", start, 1.0);
}

#[test]
fn criterion_02_approximation_rotations_on_the_integers() {
    let start = Instant::now();
    let h = Group::free_abelian(1).unwrap();
    let order = LeftOrder::lex(h.clone(), vec![1]).unwrap();
    let z = h.element_from_i64(&[1]).unwrap();
    let datum = cofinal_central(&order, &z, 64).unwrap();
    let g = h.element_from_i64(&[2]).unwrap();
    let mut seen = Vec::new();
    for n in 3..=10u64 {
        let v = approx_rot(&datum, n, &g).unwrap();
        assert_eq!(v, RotationValue::Exact(ratio(2, n as i64)));
        seen.push(v);
    }
    seen.dedup();
    assert_eq!(seen.len(), 8, "the eight values are pairwise distinct");
    budget("criterion 02 approximation rotations on Z", start, 1.0);
}

#[test]
fn criterion_03_order_induced_orderings_have_zero_invariants() {
    let start = Instant::now();
    let mut cones = vec![
        LeftOrder::lex(Group::free_abelian(1).unwrap(), vec![1]).unwrap(),
        LeftOrder::lex(Group::free_abelian(2).unwrap(), vec![1, 1]).unwrap(),
        LeftOrder::lex(Group::heisenberg(), vec![1, 1, 1]).unwrap(),
    ];
    cones.extend(canonical_tararin_cones(2).unwrap());
    let zero = RotationValue::exact_int(0);
    for cone in &cones {
        let c = CircularOrder::secret(cone.clone());
        let eta = eta_of_secret(cone);
        let mut sampler = Sampler::new(3);
        let elements: Vec<Element> = (0..1000).map(|_| sampler.element(c.group(), 5)).collect();
        for pair in elements.chunks(2) {
            if let [g, h] = pair {
                assert_eq!(
                    tau(&c, g, h, 8),
                    zero,
                    "tau vanishes on {}",
                    c.group().name()
                );
            }
        }
        for g in &elements {
            let r = rot_exact(&c, g).expect("declared orderings have exact rotations");
            assert_eq!(r.value.mod_z(), zero);
            let step = eta.section(g);
            let mut power = step.clone();
            for _ in 1..=256u32 {
                let f = floor(&power);
                assert!(
                    f == BigInt::from(-1) || f.is_zero(),
                    "floors of bounded-section powers stay in {{-1, 0}}"
                );
                power = lift_mul(&c, &power, &step);
            }
        }
    }
    budget("criterion 03 zero invariants for order-induced", start, 30.0);
}

#[test]
fn criterion_04_semiconjugacy_verdicts_on_desk_instances() {
    let start = Instant::now();

    let g = Group::tararin_ext(1, 2).unwrap();
    let ses = Ses::mod_torsion(&g).unwrap();
    let quotient = CircularOrder::cyclic_standard(2, 1).unwrap();
    let up = LeftOrder::lex(ses.kernel_group().clone(), vec![1]).unwrap();
    let down = LeftOrder::lex(ses.kernel_group().clone(), vec![-1]).unwrap();
    let c = lex_extend(&ses, &up, &quotient).unwrap();
    let d = lex_extend(&ses, &down, &quotient).unwrap();
    let gens = vec![
        g.element_from_i64(&[1, 0]).unwrap(),
        g.element_from_i64(&[0, 1]).unwrap(),
    ];
    let pairs = default_pair_sample(&g, 2, 0).unwrap();
    let verdict = semiconjugate(&c, &d, &gens, &pairs, 64).unwrap();
    assert!(
        matches!(verdict, Verdict::CertifiedEqual),
        "reversing the convex kernel preserves the class: {verdict:?}"
    );

    let std3 = CircularOrder::cyclic_standard(3, 1).unwrap();
    let rev3 = CircularOrder::cyclic_standard(3, 2).unwrap();
    let gens = vec![std3.group().element_from_i64(&[1]).unwrap()];
    let pairs = default_pair_sample(std3.group(), 1, 0).unwrap();
    let verdict = semiconjugate(&std3, &rev3, &gens, &pairs, 64).unwrap();
    match verdict {
        Verdict::Refuted(w) => {
            assert_eq!(w.quantity, "rot");
            assert!(w.left.is_exact() && w.right.is_exact());
            assert_ne!(w.left, w.right);
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
    budget("criterion 04 semiconjugacy desk verdicts", start, 5.0);
}

#[test]
fn criterion_05_cyclic_enumeration_counts() {
    let start = Instant::now();
    let expected = [(2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (7, 6), (8, 4)];
    for (n, count) in expected {
        let found = enumerate_co_cyclic(n, 100_000_000).unwrap();
        assert_eq!(found.len(), count, "orderings of the {n}-cycle");
    }
    budget("criterion 05 cyclic enumeration counts", start, 60.0);
}

#[test]
fn criterion_06_tararin_cone_counts_and_ball_containment() {
    let start = Instant::now();
    for k in 1..=3usize {
        let cones = canonical_tararin_cones(k).unwrap();
        assert_eq!(cones.len(), 1 << k);
        for (i, a) in cones.iter().enumerate() {
            for b in cones.iter().skip(i + 1) {
                assert_ne!(a.descriptor(), b.descriptor());
            }
        }
        let group = Group::tararin(k).unwrap();
        let ball = group.ball(2).unwrap();
        for cone in &cones {
            for g in &ball {
                let s = cone.sign(g);
                let si = cone.sign(&group.inv(g));
                if group.is_id(g) {
                    assert_eq!(s, 0);
                } else {
                    assert_eq!(s * si, -1, "antisymmetry on the ball");
                }
            }
        }
        let candidates = enumerate_lo_ball(&group, 2, 1 << 24).unwrap();
        for cone in &cones {
            assert!(
                candidates.iter().any(|cand| cand.restricts(cone)),
                "canonical cone missing from the radius-2 ball search"
            );
        }
    }
    budget("criterion 06 tararin cones and ball search", start, 30.0);
}

#[test]
fn criterion_07_lift_group_laws_across_the_matrix() {
    let start = Instant::now();
    let z = Group::free_abelian(1).unwrap();
    let z_order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
    let one = z.element_from_i64(&[1]).unwrap();
    let datum = cofinal_central(&z_order, &one, 64).unwrap();
    let tze = Group::tararin_ext(1, 2).unwrap();
    let ses = Ses::mod_torsion(&tze).unwrap();
    let ztc = Group::z_times_cyclic(3).unwrap();
    let ses3 = Ses::mod_torsion(&ztc).unwrap();

    let matrix: Vec<CircularOrder> = vec![
        CircularOrder::cyclic_standard(5, 1).unwrap(),
        CircularOrder::cyclic_standard(7, 3).unwrap(),
        CircularOrder::cyclic_arrangement(5, &[0, 2, 4, 1, 3]).unwrap(),
        secret_lex(z.clone(), vec![1]),
        secret_lex(Group::free_abelian(2).unwrap(), vec![1, -1]),
        secret_lex(Group::tararin(2).unwrap(), vec![1, 1]),
        secret_lex(Group::heisenberg(), vec![1, 1, 1]),
        lex_extend(
            &ses,
            &LeftOrder::lex(ses.kernel_group().clone(), vec![1]).unwrap(),
            &CircularOrder::cyclic_standard(2, 1).unwrap(),
        )
        .unwrap(),
        lex_extend(
            &ses3,
            &LeftOrder::lex(ses3.kernel_group().clone(), vec![1]).unwrap(),
            &CircularOrder::cyclic_standard(3, 1).unwrap(),
        )
        .unwrap(),
        approx_dn(&datum, 4).unwrap(),
        circord::construct::quotient_circular(&datum, 4).unwrap(),
        CircularOrder::cyclic_standard(7, 3)
            .unwrap()
            .conjugate(&Group::cyclic(7).unwrap().element_from_i64(&[2]).unwrap()),
        circord::construct::pullback(
            &approx_dn(&datum, 6).unwrap(),
            &Morphism::scale_z(BigInt::from(2)),
        )
        .unwrap(),
    ];

    for c in &matrix {
        let group = c.group().clone();
        let mut sampler = Sampler::new(11);
        let lift_sample = |sampler: &mut Sampler| {
            let base = sampler.element(&group, 3);
            let level = BigInt::from(sampler.index(5) as i64 - 2);
            LiftElement::new(base, level)
        };
        let zc = lift_z(c);
        let id = circord::lift::lift_id(c);
        for _ in 0..2500 {
            let x = lift_sample(&mut sampler);
            let y = lift_sample(&mut sampler);
            let w = lift_sample(&mut sampler);
            let xy_w = lift_mul(c, &lift_mul(c, &x, &y), &w);
            let x_yw = lift_mul(c, &x, &lift_mul(c, &y, &w));
            assert_eq!(xy_w, x_yw, "associativity in the lift of {}", group.name());
            assert_eq!(
                lift_mul(c, &x, &zc),
                lift_mul(c, &zc, &x),
                "the marked element is central"
            );
            let trichotomy = [
                lift_positive(c, &x),
                lift_positive(c, &lift_inv(c, &x)),
                x == id,
            ];
            assert_eq!(
                trichotomy.iter().filter(|&&b| b).count(),
                1,
                "exactly one of x > id, x < id, x = id"
            );
            if lift_positive(c, &x) && lift_positive(c, &y) {
                assert!(
                    lift_positive(c, &lift_mul(c, &x, &y)),
                    "positives are closed under products"
                );
            }
        }
    }
    budget("criterion 07 lift group laws", start, 60.0);
}

#[test]
fn criterion_08_neighborhoods_determine_power_floors() {
    let start = Instant::now();

    let c7 = CircularOrder::cyclic_standard(7, 1).unwrap();
    let g7 = Group::cyclic(7).unwrap();
    let mut family7 = enumerate_co_cyclic(7, 100_000_000).unwrap();
    let two = g7.element_from_i64(&[2]).unwrap();
    family7.extend(
        enumerate_co_cyclic(7, 100_000_000)
            .unwrap()
            .iter()
            .map(|d| d.conjugate(&two)),
    );
    for u in 1..7 {
        family7.push(CircularOrder::cyclic_standard(7, u).unwrap());
    }

    let z = Group::free_abelian(1).unwrap();
    let cz = secret_lex(z.clone(), vec![1]);
    let z_order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
    let one = z.element_from_i64(&[1]).unwrap();
    let datum = cofinal_central(&z_order, &one, 64).unwrap();
    let mut family_z = vec![cz.clone(), secret_lex(z.clone(), vec![-1])];
    for n in 2..=8 {
        family_z.push(approx_dn(&datum, n).unwrap());
    }
    family_z.push(
        circord::construct::pullback(
            &approx_dn(&datum, 4).unwrap(),
            &Morphism::scale_z(BigInt::from(2)),
        )
        .unwrap(),
    );

    let cases: [(&CircularOrder, Vec<Element>, &[CircularOrder]); 2] = [
        (
            &c7,
            (1..7).map(|r| g7.element_from_i64(&[r]).unwrap()).collect(),
            &family7,
        ),
        (
            &cz,
            (-3..=3)
                .filter(|&a| a != 0)
                .map(|a| z.element_from_i64(&[a]).unwrap())
                .collect(),
            &family_z,
        ),
    ];

    let mut matched = 0u64;
    for (c, elements, family) in cases {
        for g in &elements {
            for n in [1u64, 2, 4, 8, 16, 32] {
                let constraints = c.neighborhood_un(g, n);
                for d in family {
                    if d.satisfies(&constraints) {
                        matched += 1;
                        assert_eq!(
                            power_floor_chain(d, g, n + 1),
                            power_floor_chain(c, g, n + 1),
                            "membership in the depth-{n} neighborhood pins the first {n} floors"
                        );
                    }
                }
            }
        }
    }
    assert!(matched > 100, "the families exercise the neighborhoods");
    budget("criterion 08 neighborhoods pin power floors", start, 30.0);
}

#[test]
fn criterion_09_convergence_of_the_approximation_family() {
    let start = Instant::now();
    let z = Group::free_abelian(1).unwrap();
    let target = secret_lex(z.clone(), vec![1]);
    let order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
    let one = z.element_from_i64(&[1]).unwrap();
    let datum = cofinal_central(&order, &one, 64).unwrap();
    let sequence: Vec<(u64, CircularOrder)> = (1..=12)
        .map(|n| (n, approx_dn(&datum, n).unwrap()))
        .collect();
    let ball = z.ball(3).unwrap();
    let mut triples = Vec::new();
    for a in &ball {
        for b in &ball {
            for c in &ball {
                triples.push([a.clone(), b.clone(), c.clone()]);
            }
        }
    }
    let rows = convergence_table(&target, &sequence, &triples);
    assert_eq!(rows.len(), 343);
    for row in rows {
        let maxcoord: i64 = row
            .triple
            .iter()
            .flat_map(|e| e.coords())
            .map(|c| i64::try_from(c).unwrap().abs())
            .max()
            .unwrap();
        let idx = row
            .first_agreement
            .expect("every triple eventually agrees");
        assert!(
            idx <= (2 * maxcoord + 3) as u64,
            "agreement from {idx} exceeds the bound for coordinates up to {maxcoord}"
        );
    }
    budget("criterion 09 approximation family converges", start, 10.0);
}

#[test]
fn criterion_10_genuine_orderings_from_the_heisenberg_group() {
    let start = Instant::now();
    let phi = Morphism::heisenberg_to_z2();
    let ns: Vec<u64> = (2..=8).collect();
    let orderings = circord::construct::genuine_sequence(&phi, None, &ns).unwrap();
    for (n, c) in ns.iter().zip(&orderings) {
        let verdict = is_secret(c, 2, 256).unwrap();
        match verdict {
            Verdict::Refuted(w) => {
                assert_eq!(w.quantity, "rot");
                assert_eq!(
                    w.left,
                    RotationValue::Exact(ratio(1, *n as i64)),
                    "the witness rotation number is exactly 1/{n}"
                );
                assert!(w.right.is_exact());
            }
            other => panic!("expected a genuine ordering for n = {n}, got {other:?}"),
        }
    }
    budget("criterion 10 genuine orderings detected", start, 30.0);
}
