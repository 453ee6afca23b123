//! Shared families of oracles driven by the integration suites.

use num_bigint::BigInt;

use circord::construct::{
    approx_dn, cofinal_central, genuine_sequence, lex_extend, pullback, quotient_circular,
};
use circord::enumerate::canonical_tararin_cones;
use circord::groups::{Element, Group};
use circord::morphism::Morphism;
use circord::orders::{CircularOrder, LeftOrder};
use circord::Ses;

pub fn secret_lex(group: Group, signs: Vec<i8>) -> CircularOrder {
    CircularOrder::secret(LeftOrder::lex(group, signs).unwrap())
}

/// One ordering per construction path, over every group backend.
pub fn ordering_matrix() -> Vec<CircularOrder> {
    let z = Group::free_abelian(1).unwrap();
    let z_order = LeftOrder::lex(z.clone(), vec![1]).unwrap();
    let one = z.element_from_i64(&[1]).unwrap();
    let datum = cofinal_central(&z_order, &one, 64).unwrap();
    let tze = Group::tararin_ext(1, 2).unwrap();
    let ses = Ses::mod_torsion(&tze).unwrap();
    let ztc = Group::z_times_cyclic(3).unwrap();
    let ses3 = Ses::mod_torsion(&ztc).unwrap();
    let c73 = CircularOrder::cyclic_standard(7, 3).unwrap();
    let by = c73.group().element_from_i64(&[2]).unwrap();
    let genuine = genuine_sequence(&Morphism::heisenberg_to_z2(), None, &[3])
        .unwrap()
        .pop()
        .unwrap();

    vec![
        CircularOrder::cyclic_standard(5, 1).unwrap(),
        CircularOrder::cyclic_standard(7, 3).unwrap(),
        CircularOrder::cyclic_arrangement(5, &[0, 2, 4, 1, 3]).unwrap(),
        c73.conjugate(&by),
        secret_lex(z.clone(), vec![1]),
        secret_lex(z.clone(), vec![-1]),
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
            &LeftOrder::lex(ses3.kernel_group().clone(), vec![-1]).unwrap(),
            &CircularOrder::cyclic_standard(3, 1).unwrap(),
        )
        .unwrap(),
        approx_dn(&datum, 4).unwrap(),
        quotient_circular(&datum, 4).unwrap(),
        pullback(
            &approx_dn(&datum, 6).unwrap(),
            &Morphism::scale_z(BigInt::from(2)),
        )
        .unwrap(),
        genuine,
    ]
}

/// One left order per cone representation.
pub fn cone_matrix() -> Vec<LeftOrder> {
    let z2 = Group::free_abelian(2).unwrap();
    let mut out = vec![
        LeftOrder::lex(Group::free_abelian(1).unwrap(), vec![1]).unwrap(),
        LeftOrder::lex(z2.clone(), vec![1, -1]).unwrap(),
        LeftOrder::lex(Group::heisenberg(), vec![1, 1, 1]).unwrap(),
        LeftOrder::lift_cone(CircularOrder::cyclic_standard(5, 2).unwrap()),
        LeftOrder::restrict(
            LeftOrder::lex(z2.clone(), vec![1, 1]).unwrap(),
            Morphism::inclusion_axis(0, z2).unwrap(),
        )
        .unwrap(),
        circord::orders::cone_from_secret(&secret_lex(
            Group::free_abelian(1).unwrap(),
            vec![-1],
        ))
        .unwrap(),
    ];
    out.extend(canonical_tararin_cones(2).unwrap());
    out
}

/// An element of `group` from raw coordinates, truncated to the arity;
/// residue coordinates are reduced by construction.
pub fn element_from_raw(group: &Group, raw: &[i64]) -> Element {
    group.element_from_i64(&raw[..group.arity()]).unwrap()
}
