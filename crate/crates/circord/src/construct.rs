//! Ordering factories: lexicographic extensions along short exact sequences,
//! quotient circular orderings from a cofinal central element, and the
//! approximation sequence d_n with its pullbacks.
//!
//! The quotient constructions share one geometric fact: a positive cofinal
//! central z cuts H into the fundamental domains [z^(nj), z^(n(j+1))), so
//! every coset of <z^n> has a unique minimal representative in [id, z^n)
//! and cosets inherit a circular arrangement from sorting representatives.
//! d_n is the lexicographic extension of that arrangement by the kernel
//! order with z^n > id; as n grows, d_n agrees with the ambient order on
//! ever larger balls while keeping rotation number 1/n on z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::groups::{Element, Group, GroupRepr};
use crate::morphism::{MorKind, Morphism};
use crate::orders::{CircEval, CircularOrder, ConeEval, LeftOrder};
use crate::semiconj::{rot_exact, RotationValue};

/// Largest power searched for a cofinality witness.
pub const DEFAULT_COFINALITY_BOUND: u32 = 64;

#[derive(Clone)]
pub(crate) enum SesKind {
    /// 1 -> K -> G -> Z/n -> 1 splitting off the torsion coordinate.
    ModTorsion,
    /// 1 -> Z -> Heisenberg -> Z^2 -> 1 along the center.
    HeisenbergCenter,
}

/// A short exact sequence 1 -> K -> G -> H -> 1 with computable projection
/// and kernel coordinates.
#[derive(Clone)]
pub struct Ses {
    total: Group,
    kernel: Group,
    quotient: Group,
    kind: SesKind,
}

impl Ses {
    /// The sequence quotienting a group by its torsion-free part onto the
    /// torsion coordinate: kernel = the coordinates below, quotient = Z/n.
    pub fn mod_torsion(total: &Group) -> Result<Self> {
        let (kernel, quotient) = match total.repr() {
            GroupRepr::TararinExt { k, n } => (Group::tararin(*k)?, Group::cyclic(*n)?),
            GroupRepr::ZTimesCyclic { n } => (Group::free_abelian(1)?, Group::cyclic(*n)?),
            _ => {
                return Err(Error::invalid(format!(
                    "{} has no torsion coordinate to quotient onto",
                    total.name()
                )))
            }
        };
        Ok(Ses {
            total: total.clone(),
            kernel,
            quotient,
            kind: SesKind::ModTorsion,
        })
    }

    /// The central sequence of the Heisenberg group: kernel the center Z,
    /// quotient the abelianization Z^2.
    pub fn heisenberg_center() -> Self {
        Ses {
            total: Group::heisenberg(),
            kernel: Group::free_abelian(1).expect("rank 1"),
            quotient: Group::free_abelian(2).expect("rank 2"),
            kind: SesKind::HeisenbergCenter,
        }
    }

    pub fn total(&self) -> &Group {
        &self.total
    }

    pub fn kernel_group(&self) -> &Group {
        &self.kernel
    }

    pub fn quotient_group(&self) -> &Group {
        &self.quotient
    }

    pub(crate) fn kind(&self) -> &SesKind {
        &self.kind
    }

    /// The projection q; a homomorphism onto the quotient group.
    pub fn project(&self, g: &Element) -> Element {
        let coords = g.coords();
        let image = match self.kind {
            SesKind::ModTorsion => vec![coords[coords.len() - 1].clone()],
            SesKind::HeisenbergCenter => vec![coords[0].clone(), coords[1].clone()],
        };
        self.quotient
            .element(image)
            .expect("projection lands in the quotient")
    }

    pub fn in_kernel(&self, g: &Element) -> bool {
        self.quotient.is_id(&self.project(g))
    }

    /// Coordinates of a kernel element in the kernel group.
    pub fn kernel_coords(&self, g: &Element) -> Element {
        debug_assert!(self.in_kernel(g), "kernel coordinates of a non-kernel element");
        let coords = g.coords();
        let inner = match self.kind {
            SesKind::ModTorsion => coords[..coords.len() - 1].to_vec(),
            SesKind::HeisenbergCenter => vec![coords[2].clone()],
        };
        self.kernel
            .element(inner)
            .expect("kernel coordinates form a kernel element")
    }
}

/// Lexicographic extension of a kernel left order by a quotient circular
/// ordering along a short exact sequence. Triples in one coset fall to the
/// kernel order, triples with distinct images to the quotient ordering, and
/// the mixed cases to the kernel comparison of the coinciding pair.
pub fn lex_extend(
    ses: &Ses,
    kernel_order: &LeftOrder,
    quotient_order: &CircularOrder,
) -> Result<CircularOrder> {
    if kernel_order.group() != ses.kernel_group() {
        return Err(Error::invalid(
            "kernel order must order the sequence's kernel group",
        ));
    }
    if quotient_order.group() != ses.quotient_group() {
        return Err(Error::invalid(
            "quotient ordering must order the sequence's quotient group",
        ));
    }
    Ok(CircularOrder::from_eval(
        ses.total().clone(),
        CircEval::LexSes {
            ses: ses.clone(),
            kernel: kernel_order.clone(),
            quotient: quotient_order.clone(),
        },
    ))
}

/// A positive cofinal central element of an ordered group, with the largest
/// cofinality witness found on the sampled ball.
#[derive(Clone)]
pub struct CofinalCentralDatum {
    h_order: LeftOrder,
    z: Element,
    max_witness: u32,
}

impl CofinalCentralDatum {
    pub fn group(&self) -> &Group {
        self.h_order.group()
    }

    pub fn order(&self) -> &LeftOrder {
        &self.h_order
    }

    pub fn z(&self) -> &Element {
        &self.z
    }

    /// Largest power k needed so that z^-k < g < z^k over the checked ball.
    pub fn max_witness(&self) -> u32 {
        self.max_witness
    }

    pub fn zn(&self, n: u64) -> Element {
        self.group().pow(&self.z, &BigInt::from(n))
    }
}

/// Validates that z is a positive cofinal element of the coordinate-lex
/// order: for every g in ball(2) some power k <= bound has z^-k < g < z^k.
/// The supported groups are abelian, so centrality holds identically.
pub fn cofinal_central(h_order: &LeftOrder, z: &Element, bound: u32) -> Result<CofinalCentralDatum> {
    let h = h_order.group().clone();
    if !matches!(h.repr(), GroupRepr::FreeAbelian { .. }) {
        return Err(Error::invalid(
            "quotient data requires a free abelian group",
        ));
    }
    if !matches!(h_order.eval_kind(), ConeEval::Lex { .. }) {
        return Err(Error::invalid(
            "quotient data requires a coordinate-lex order",
        ));
    }
    if h.is_id(z) {
        return Err(Error::invalid("cofinal element must not be the identity"));
    }
    if h_order.sign(z) <= 0 {
        return Err(Error::invalid("cofinal element must be positive"));
    }
    let mut max_witness = 0;
    for g in h.ball(2)? {
        let mut k: u32 = 1;
        let mut zk = z.clone();
        loop {
            if h_order.less(&h.inv(&zk), &g) && h_order.less(&g, &zk) {
                max_witness = max_witness.max(k);
                break;
            }
            k += 1;
            if k > bound {
                return Err(Error::NotCofinal {
                    g: g.to_string(),
                    bound,
                });
            }
            zk = h.mul(&zk, z);
        }
    }
    Ok(CofinalCentralDatum {
        h_order: h_order.clone(),
        z: z.clone(),
        max_witness,
    })
}

/// The unique representative of the coset g<z^n> inside [id, z^n).
/// The top nonzero tier of z^n pins the candidate power to within one step;
/// the winner is selected by exact cone comparisons.
pub(crate) fn minimal_rep(h_order: &LeftOrder, zn: &Element, g: &Element) -> Element {
    let h = h_order.group().clone();
    let priority: &[usize] = match h_order.eval_kind() {
        ConeEval::Lex { priority, .. } => priority,
        _ => panic!("representative search requires a coordinate-lex order"),
    };
    let top = priority
        .iter()
        .copied()
        .find(|&i| !zn.coords()[i].is_zero())
        .expect("kernel generator is nontrivial");
    let step = zn.coords()[top].clone();
    let j0 = -g.coords()[top].div_floor(&step);
    let mut found: Option<Element> = None;
    for dj in -1..=1 {
        let j = &j0 + BigInt::from(dj);
        let x = h.mul(g, &h.pow(zn, &j));
        let nonneg = h.is_id(&x) || h_order.sign(&x) > 0;
        if nonneg && h_order.less(&x, zn) {
            debug_assert!(found.is_none(), "fundamental domain representative is unique");
            if found.is_none() {
                found = Some(x);
            }
        }
    }
    found.expect("representative lies within one step of the estimate")
}

/// Least m >= 1 with g^m in <zn>, if any: on a free abelian group this is
/// the reduced denominator of the ratio g = (p/q) zn, provided g and zn are
/// parallel.
pub(crate) fn coset_order(group: &Group, g: &Element, zn: &Element) -> Option<BigInt> {
    if !matches!(group.repr(), GroupRepr::FreeAbelian { .. }) {
        return None;
    }
    let gc = g.coords();
    let zc = zn.coords();
    let k = gc.len();
    for i in 0..k {
        for j in (i + 1)..k {
            if &gc[i] * &zc[j] != &gc[j] * &zc[i] {
                return None;
            }
        }
    }
    let i = (0..k).find(|&i| !zc[i].is_zero())?;
    let d = gc[i].gcd(&zc[i]);
    Some((&zc[i] / &d).abs())
}

/// The circular ordering of the finite quotient H/<z^n>, materialized on
/// the cyclic group of order |z|*n and evaluated by sorting minimal
/// representatives. Only rank-one H has a finite quotient.
pub fn quotient_circular(datum: &CofinalCentralDatum, n: u64) -> Result<CircularOrder> {
    if n == 0 {
        return Err(Error::invalid("quotient power must be positive"));
    }
    let h = datum.group();
    if h.arity() != 1 {
        return Err(Error::InfiniteQuotient { h: h.name(), n });
    }
    let step = datum.z().coords()[0]
        .abs()
        .try_into()
        .map_err(|_| Error::invalid("cofinal step exceeds the materializable range"))?;
    let modulus = n
        .checked_mul(step)
        .ok_or_else(|| Error::invalid("quotient order overflows"))?;
    Ok(CircularOrder::from_eval(
        Group::cyclic(modulus)?,
        CircEval::QuotientReps {
            h_order: datum.order().clone(),
            z: datum.z().clone(),
            n,
            zn: datum.zn(n),
        },
    ))
}

/// The approximation ordering d_n on H itself: the lexicographic extension
/// along 1 -> <z^n> -> H -> H/<z^n> -> 1, evaluated in place so the
/// quotient never needs to be finite.
pub fn approx_dn(datum: &CofinalCentralDatum, n: u64) -> Result<CircularOrder> {
    if n == 0 {
        return Err(Error::invalid("approximation index must be positive"));
    }
    Ok(CircularOrder::from_eval(
        datum.group().clone(),
        CircEval::ApproxDn {
            h_order: datum.order().clone(),
            z: datum.z().clone(),
            zn: datum.zn(n),
            n,
        },
    ))
}

/// The exact rotation number of g under d_n, reduced mod Z. Defined
/// whenever the image of g in H/<z^n> has finite order.
pub fn approx_rot(datum: &CofinalCentralDatum, n: u64, g: &Element) -> Result<RotationValue> {
    let d = approx_dn(datum, n)?;
    let r = rot_exact(&d, g).ok_or_else(|| {
        Error::invalid("element has infinite order in the quotient, no exact rotation value")
    })?;
    Ok(r.value.mod_z())
}

/// The pulled-back ordering (phi* c)(x,y,z) = c(phi x, phi y, phi z);
/// injectivity is checked on ball(2) so nondegeneracy survives.
pub fn pullback(c: &CircularOrder, phi: &Morphism) -> Result<CircularOrder> {
    if phi.codomain() != c.group() {
        return Err(Error::invalid(
            "pullback morphism must land in the ordering's group",
        ));
    }
    phi.check_injective_on_ball(2)?;
    Ok(CircularOrder::from_eval(
        phi.domain().clone(),
        CircEval::Pullback {
            of: c.clone(),
            phi: phi.clone(),
        },
    ))
}

/// The approximation sequence on the domain of phi: c_n is the pullback of
/// d_n when phi is injective, and otherwise the lexicographic extension of
/// the kernel order by d_n along the central kernel. Every member carries
/// the exact rotation witness rot(z-preimage) = 1/n, so none is induced by
/// a left order. `kernel_order` is only consulted on the non-injective
/// path; it defaults to the standard order of the central Z.
pub fn genuine_sequence(
    phi: &Morphism,
    kernel_order: Option<&LeftOrder>,
    ns: &[u64],
) -> Result<Vec<CircularOrder>> {
    let h = phi.codomain().clone();
    let k = match h.repr() {
        GroupRepr::FreeAbelian { k } => *k,
        _ => {
            return Err(Error::invalid(
                "approximation target must be free abelian with the lex order",
            ))
        }
    };
    let h_order = LeftOrder::lex(h.clone(), vec![1; k])?;
    let mut zc = vec![0i64; k];
    zc[k - 1] = 1;
    let z = h.element_from_i64(&zc)?;
    let datum = cofinal_central(&h_order, &z, DEFAULT_COFINALITY_BOUND)?;
    // The image must reach the cofinal generator; otherwise it is bounded
    // in the top tier and the pulled-back rotation witnesses vanish.
    let reaches = phi.domain().ball(1)?.iter().any(|x| phi.apply(x) == z);
    if !reaches {
        return Err(Error::invalid(
            "morphism image misses the cofinal generator",
        ));
    }
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let d = approx_dn(&datum, n)?;
        let c = if matches!(phi.kind(), MorKind::HeisenbergToZ2) {
            let ses = Ses::heisenberg_center();
            let korder = match kernel_order {
                Some(o) => o.clone(),
                None => LeftOrder::lex(ses.kernel_group().clone(), vec![1])?,
            };
            lex_extend(&ses, &korder, &d)?
        } else {
            pullback(&d, phi)?
        };
        out.push(c);
    }
    Ok(out)
}

/// One row of the empirical convergence table: the least listed index from
/// which every later sequence member agrees with the target on the triple.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub triple: [Element; 3],
    pub first_agreement: Option<u64>,
}

/// Stabilization indices of a sequence of orderings against a target, per
/// triple. `sequence` must be listed in increasing index order; `None`
/// means no suffix of the listed members agrees.
pub fn convergence_table(
    target: &CircularOrder,
    sequence: &[(u64, CircularOrder)],
    triples: &[[Element; 3]],
) -> Vec<ConvergenceRow> {
    triples
        .iter()
        .map(|t| {
            let want = target.eval(&t[0], &t[1], &t[2]);
            let mut first = None;
            for (n, d) in sequence.iter().rev() {
                if d.eval(&t[0], &t[1], &t[2]) == want {
                    first = Some(*n);
                } else {
                    break;
                }
            }
            ConvergenceRow {
                triple: t.clone(),
                first_agreement: first,
            }
        })
        .collect()
}
