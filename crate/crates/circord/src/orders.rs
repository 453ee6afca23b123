//! Left orders and circular orderings as evaluable oracles.
//!
//! A left order is carried by its positive cone: `sign(g)` is +1 on the cone,
//! 0 at the identity, -1 otherwise, and `a < b` iff `sign(a^-1 b) = +1`,
//! which makes the order left-invariant by construction.
//!
//! A circular ordering is a function c: G^3 -> {-1, 0, +1} subject to three
//! axioms: c vanishes exactly on degenerate triples; the coboundary
//! c(g2,g3,g4) - c(g1,g3,g4) + c(g1,g2,g4) - c(g1,g2,g3) vanishes on all
//! quadruples; and c(g g1, g g2, g g3) = c(g1, g2, g3). `validate` checks
//! these on seeded samples, switching to exhaustive enumeration when the
//! ball is small enough to cover every quadruple.
//!
//! Oracles are immutable and cheap to clone; every oracle is reconstructible
//! from a serializable descriptor rather than a raw closure.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::construct::{minimal_rep, Ses};
use crate::error::{Error, Result};
use crate::groups::{Element, Group, GroupRepr};
use crate::morphism::Morphism;
use crate::sample::Sampler;

/// Cap on memoized cocycle entries per ordering.
pub(crate) const FCACHE_CAP: usize = 1 << 16;

#[derive(Clone)]
pub(crate) enum ConeEval {
    /// First nonzero coordinate in `priority` order decides; `signs[i]` is
    /// the positive direction of coordinate i.
    Lex { signs: Vec<i8>, priority: Vec<usize> },
    /// Canonical cone of a lift backend: level nonnegative, excluding id.
    LiftCone,
    /// Cone pulled back along an injective morphism.
    Pullback { of: LeftOrder, phi: Morphism },
    /// Cone recovered from a circular ordering: g positive iff
    /// c(g^-1, id, g) = +1.
    FromCircular { of: CircularOrder },
}

struct ConeInner {
    group: Group,
    eval: ConeEval,
}

/// A left-invariant total order, carried by its positive cone.
#[derive(Clone)]
pub struct LeftOrder {
    inner: Arc<ConeInner>,
}

impl fmt::Debug for LeftOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "left_order({})", self.group().name())
    }
}

impl PartialEq for LeftOrder {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}
impl Eq for LeftOrder {}

/// Lex priority for the backends that admit coordinate-lex cones. The top
/// coordinate of the filtration decides first; for Heisenberg the two image
/// coordinates decide before the central one (the center is the last tier,
/// which is exactly what makes the cone closed under products).
fn lex_priority(group: &Group) -> Result<Vec<usize>> {
    match group.repr() {
        GroupRepr::FreeAbelian { k } | GroupRepr::Tararin { k } => Ok((0..*k).rev().collect()),
        GroupRepr::Heisenberg => Ok(vec![1, 0, 2]),
        _ => Err(Error::invalid(format!(
            "{} does not carry a coordinate-lex left order",
            group.name()
        ))),
    }
}

impl LeftOrder {
    fn new(group: Group, eval: ConeEval) -> Self {
        LeftOrder {
            inner: Arc::new(ConeInner { group, eval }),
        }
    }

    /// Coordinate-lex cone with one sign per coordinate.
    pub fn lex(group: Group, signs: Vec<i8>) -> Result<Self> {
        let priority = lex_priority(&group)?;
        if signs.len() != group.arity() {
            return Err(Error::Arity {
                group: group.name(),
                expected: group.arity(),
                got: signs.len(),
            });
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::invalid("cone signs must be +1 or -1"));
        }
        Ok(LeftOrder::new(group, ConeEval::Lex { signs, priority }))
    }

    /// The canonical order of the central extension defined by `order`.
    pub fn lift_cone(order: CircularOrder) -> Self {
        let group = Group::lift(order);
        LeftOrder::new(group, ConeEval::LiftCone)
    }

    /// Restriction of `of` along an injective morphism.
    pub fn restrict(of: LeftOrder, phi: Morphism) -> Result<Self> {
        if phi.codomain() != of.group() {
            return Err(Error::invalid(
                "restriction morphism must land in the order's group",
            ));
        }
        phi.check_injective_on_ball(2)?;
        let group = phi.domain().clone();
        Ok(LeftOrder::new(group, ConeEval::Pullback { of, phi }))
    }

    pub fn group(&self) -> &Group {
        &self.inner.group
    }

    pub(crate) fn eval_kind(&self) -> &ConeEval {
        &self.inner.eval
    }

    /// +1 on the cone, 0 at the identity, -1 on inverses of the cone.
    pub fn sign(&self, g: &Element) -> i8 {
        if self.inner.group.is_id(g) {
            return 0;
        }
        match &self.inner.eval {
            ConeEval::Lex { signs, priority } => {
                for &i in priority {
                    let c = &g.coords()[i];
                    if !c.is_zero() {
                        let s = if c.is_positive() { 1 } else { -1 };
                        return s * signs[i];
                    }
                }
                0
            }
            ConeEval::LiftCone => {
                let level = g.coords().last().expect("lift level");
                if level.is_negative() {
                    -1
                } else {
                    1
                }
            }
            ConeEval::Pullback { of, phi } => of.sign(&phi.apply(g)),
            ConeEval::FromCircular { of } => {
                of.eval(&self.inner.group.inv(g), &self.inner.group.id(), g)
            }
        }
    }

    pub fn in_cone(&self, g: &Element) -> bool {
        self.sign(g) > 0
    }

    pub fn less(&self, a: &Element, b: &Element) -> bool {
        self.sign(&self.inner.group.mul(&self.inner.group.inv(a), b)) > 0
    }
}

#[derive(Clone)]
pub(crate) enum CircEval {
    /// Sign of the permutation sorting the triple ascending under the cone.
    Secret { cone: LeftOrder },
    /// Standard rotational ordering of Z/n precomposed with x -> unit*x.
    CyclicStandard { n: u64, unit: u64 },
    /// Residues placed around the circle in a fixed arrangement; `pos[r]` is
    /// the position of residue r, with the identity pinned at position 0.
    CyclicArrangement { n: u64, pos: Vec<u64> },
    /// +1 on every distinct triple. Violates the coboundary axiom; kept as
    /// the canonical invalid input for validation demonstrations.
    ConstPlus,
    /// (c.g)(x, y, z) = c(x g^-1, y g^-1, z g^-1).
    Conjugated {
        of: CircularOrder,
        by: Element,
        by_inv: Element,
    },
    /// (phi* c)(x, y, z) = c(phi x, phi y, phi z), phi injective.
    Pullback { of: CircularOrder, phi: Morphism },
    /// Three-case extension along a short exact sequence: distinct images
    /// fall to the quotient ordering, coincident images to the kernel order.
    LexSes {
        ses: Ses,
        kernel: LeftOrder,
        quotient: CircularOrder,
    },
    /// The approximation ordering d_n on H: the lex extension along
    /// 1 -> <z^n> -> H -> H/<z^n> -> 1 with the kernel ordered so z^n > id
    /// and cosets ordered by their minimal representatives in [id, z^n).
    /// Both cases reduce to the ambient order, so the quotient is never
    /// materialized.
    ApproxDn {
        h_order: LeftOrder,
        z: Element,
        zn: Element,
        n: u64,
    },
    /// The ordering of the finite quotient Z/<z^n>, materialized on the
    /// cyclic backend of order |z|*n and evaluated by sorting minimal
    /// representatives.
    QuotientReps {
        h_order: LeftOrder,
        z: Element,
        n: u64,
        zn: Element,
    },
}

pub(crate) struct CircInner {
    group: Group,
    eval: CircEval,
    fcache: Mutex<HashMap<(Element, Element), u8>>,
}

/// A left-invariant circular ordering oracle. Cheap to clone; evaluation is
/// pure and the internal cocycle memo is concurrency-safe.
#[derive(Clone)]
pub struct CircularOrder {
    inner: Arc<CircInner>,
}

impl fmt::Debug for CircularOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circular_order({})", self.group().name())
    }
}

impl PartialEq for CircularOrder {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}
impl Eq for CircularOrder {}

/// Number of inversions among three values under `less`; the sorting
/// permutation is even iff the count is even.
fn sort_sign3<T>(x1: &T, x2: &T, x3: &T, less: impl Fn(&T, &T) -> bool) -> i8 {
    let inversions =
        u8::from(less(x2, x1)) + u8::from(less(x3, x1)) + u8::from(less(x3, x2));
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Orientation of three distinct residue positions on the n-cycle: +1 iff a
/// forward walk from x meets y before z.
fn cycle_orientation(n: u64, x: u64, y: u64, z: u64) -> i8 {
    let fy = (y + n - x) % n;
    let fz = (z + n - x) % n;
    if fy < fz {
        1
    } else {
        -1
    }
}

impl CircularOrder {
    pub(crate) fn from_eval(group: Group, eval: CircEval) -> Self {
        CircularOrder {
            inner: Arc::new(CircInner {
                group,
                eval,
                fcache: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// The circular ordering induced by a left order: the sign of the
    /// permutation sorting the triple ascending.
    pub fn secret(cone: LeftOrder) -> Self {
        let group = cone.group().clone();
        CircularOrder::from_eval(group, CircEval::Secret { cone })
    }

    /// Standard ordering of Z/n twisted by a unit (c_u(a,b,c) is the
    /// rotational orientation of (ua, ub, uc)).
    pub fn cyclic_standard(n: u64, unit: u64) -> Result<Self> {
        let group = Group::cyclic(n)?;
        let u = unit % n;
        if num_integer::gcd(u, n) != 1 {
            return Err(Error::invalid(format!(
                "unit {} is not invertible mod {}",
                unit, n
            )));
        }
        Ok(CircularOrder::from_eval(
            group,
            CircEval::CyclicStandard { n, unit: u },
        ))
    }

    /// Ordering of Z/n from an explicit arrangement around the circle. The
    /// arrangement lists the residues in circular order and must start at 0.
    pub fn cyclic_arrangement(n: u64, arrangement: &[u64]) -> Result<Self> {
        let group = Group::cyclic(n)?;
        if arrangement.len() != n as usize || arrangement.first() != Some(&0) {
            return Err(Error::invalid(
                "arrangement must list every residue once, starting at 0",
            ));
        }
        let mut pos = vec![u64::MAX; n as usize];
        for (p, &r) in arrangement.iter().enumerate() {
            if r >= n || pos[r as usize] != u64::MAX {
                return Err(Error::invalid(
                    "arrangement must list every residue once, starting at 0",
                ));
            }
            pos[r as usize] = p as u64;
        }
        Ok(CircularOrder::from_eval(
            group,
            CircEval::CyclicArrangement { n, pos },
        ))
    }

    /// The invalid all-plus stub (fails the coboundary axiom).
    pub fn const_plus(group: Group) -> Self {
        CircularOrder::from_eval(group, CircEval::ConstPlus)
    }

    /// The right action c.g. Conjugating by the identity is the identity,
    /// and nested conjugations compose, so the action is a right action on
    /// descriptors as well as on values.
    pub fn conjugate(&self, g: &Element) -> CircularOrder {
        if self.group().is_id(g) {
            return self.clone();
        }
        let (of, by) = match &self.inner.eval {
            CircEval::Conjugated { of, by, .. } => (of.clone(), self.group().mul(by, g)),
            _ => (self.clone(), g.clone()),
        };
        if of.group().is_id(&by) {
            return of;
        }
        let by_inv = self.group().inv(&by);
        CircularOrder::from_eval(
            self.group().clone(),
            CircEval::Conjugated { of, by, by_inv },
        )
    }

    pub fn group(&self) -> &Group {
        &self.inner.group
    }

    pub(crate) fn eval_kind(&self) -> &CircEval {
        &self.inner.eval
    }

    pub(crate) fn fcache(&self) -> &Mutex<HashMap<(Element, Element), u8>> {
        &self.inner.fcache
    }

    /// The cocycle value on one triple.
    pub fn eval(&self, g1: &Element, g2: &Element, g3: &Element) -> i8 {
        if g1 == g2 || g1 == g3 || g2 == g3 {
            return 0;
        }
        let group = &self.inner.group;
        match &self.inner.eval {
            CircEval::Secret { cone } => sort_sign3(g1, g2, g3, |a, b| cone.less(a, b)),
            CircEval::CyclicStandard { n, unit } => {
                let r = |g: &Element| {
                    let v = g.coords()[0].to_u64().expect("residue fits u64");
                    v * *unit % *n
                };
                cycle_orientation(*n, r(g1), r(g2), r(g3))
            }
            CircEval::CyclicArrangement { n, pos } => {
                let p = |g: &Element| {
                    let v = g.coords()[0].to_u64().expect("residue fits u64");
                    pos[v as usize]
                };
                cycle_orientation(*n, p(g1), p(g2), p(g3))
            }
            CircEval::ConstPlus => 1,
            CircEval::Conjugated { of, by_inv, .. } => of.eval(
                &group.mul(g1, by_inv),
                &group.mul(g2, by_inv),
                &group.mul(g3, by_inv),
            ),
            CircEval::Pullback { of, phi } => {
                of.eval(&phi.apply(g1), &phi.apply(g2), &phi.apply(g3))
            }
            CircEval::LexSes {
                ses,
                kernel,
                quotient,
            } => {
                let q1 = ses.project(g1);
                let q2 = ses.project(g2);
                let q3 = ses.project(g3);
                let ksign = |a: &Element, b: &Element| {
                    let d = group.mul(&group.inv(a), b);
                    kernel.sign(&ses.kernel_coords(&d))
                };
                match (q1 == q2, q1 == q3, q2 == q3) {
                    // Whole triple in one coset: the kernel's secret
                    // ordering of (id, g1^-1 g2, g1^-1 g3).
                    (true, true, true) => {
                        let d2 = ses.kernel_coords(&group.mul(&group.inv(g1), g2));
                        let d3 = ses.kernel_coords(&group.mul(&group.inv(g1), g3));
                        let kg = kernel.group().clone();
                        sort_sign3(&kg.id(), &d2, &d3, |a, b| {
                            kernel.sign(&kg.mul(&kg.inv(a), b)) > 0
                        })
                    }
                    (true, false, false) => ksign(g1, g2),
                    (false, false, true) => ksign(g2, g3),
                    (false, true, false) => ksign(g3, g1),
                    (false, false, false) => quotient.eval(&q1, &q2, &q3),
                    _ => unreachable!("coset coincidence is an equivalence"),
                }
            }
            CircEval::ApproxDn { h_order, zn, .. } => {
                let diff = |a: &Element, b: &Element| group.mul(&group.inv(a), b);
                let same = |a: &Element, b: &Element| {
                    group.as_power_of(&diff(a, b), zn).is_some()
                };
                match (same(g1, g2), same(g1, g3), same(g2, g3)) {
                    // One coset: the kernel order is the restriction of the
                    // ambient order (z^n > id there), so sort directly.
                    (true, true, true) => {
                        sort_sign3(g1, g2, g3, |a, b| h_order.less(a, b))
                    }
                    (true, false, false) => h_order.sign(&diff(g1, g2)),
                    (false, false, true) => h_order.sign(&diff(g2, g3)),
                    (false, true, false) => h_order.sign(&diff(g3, g1)),
                    (false, false, false) => {
                        let r1 = minimal_rep(h_order, zn, g1);
                        let r2 = minimal_rep(h_order, zn, g2);
                        let r3 = minimal_rep(h_order, zn, g3);
                        sort_sign3(&r1, &r2, &r3, |a, b| h_order.less(a, b))
                    }
                    _ => unreachable!("coset coincidence is an equivalence"),
                }
            }
            CircEval::QuotientReps { h_order, zn, .. } => {
                let h = h_order.group().clone();
                let rep = |g: &Element| {
                    let lifted = h
                        .element(vec![g.coords()[0].clone()])
                        .expect("residue lifts to Z");
                    minimal_rep(h_order, zn, &lifted)
                };
                let (r1, r2, r3) = (rep(g1), rep(g2), rep(g3));
                sort_sign3(&r1, &r2, &r3, |a, b| h_order.less(a, b))
            }
        }
    }

    /// Membership in the subbasic open set: c(triple) = i.
    pub fn in_subbasic(&self, triple: &[Element; 3], i: i8) -> bool {
        self.eval(&triple[0], &triple[1], &triple[2]) == i
    }

    /// The n defining constraints of the neighborhood U_n of c around g:
    /// (id, g^i, g^(i+1)) must take c's value for i = 1..n. Any ordering
    /// meeting them reproduces the first n power floors of g.
    pub fn neighborhood_un(&self, g: &Element, n: u64) -> Vec<([Element; 3], i8)> {
        let group = self.group();
        let id = group.id();
        let mut out = Vec::with_capacity(n as usize);
        let mut p = g.clone();
        for _ in 1..=n {
            let next = group.mul(&p, g);
            let value = self.eval(&id, &p, &next);
            out.push(([id.clone(), p.clone(), next.clone()], value));
            p = next;
        }
        out
    }

    /// Whether this oracle meets every listed subbasic constraint.
    pub fn satisfies(&self, constraints: &[([Element; 3], i8)]) -> bool {
        constraints
            .iter()
            .all(|(t, v)| self.eval(&t[0], &t[1], &t[2]) == *v)
    }
}

/// Recovers the positive cone from a circular ordering assumed secret:
/// cone(g) = [c(g^-1, id, g) = +1]. Inputs with a certified nonzero rotation
/// number cannot be secret and are rejected with the witness.
pub fn cone_from_secret(c: &CircularOrder) -> Result<LeftOrder> {
    crate::semiconj::reject_if_nonzero_rot(c)?;
    Ok(LeftOrder::new(
        c.group().clone(),
        ConeEval::FromCircular { of: c.clone() },
    ))
}

/// The circular ordering induced by a left order.
pub fn secret_from_left(cone: &LeftOrder) -> CircularOrder {
    CircularOrder::secret(cone.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// c vanishes exactly on degenerate triples.
    Degeneracy,
    /// The coboundary of c vanishes on quadruples.
    Cocycle,
    /// c is invariant under left translation.
    LeftInvariance,
}

impl Axiom {
    pub fn label(&self) -> &'static str {
        match self {
            Axiom::Degeneracy => "degeneracy",
            Axiom::Cocycle => "cocycle",
            Axiom::LeftInvariance => "left_invariance",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
}

#[derive(Debug)]
pub struct ValidationReport {
    pub radius: u32,
    pub exhaustive: bool,
    pub checked_triples: u64,
    pub checked_quadruples: u64,
    pub checked_translations: u64,
    pub violation_count: u64,
    /// First violations found, capped; `violation_count` has the full tally.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const REPORT_WITNESS_CAP: usize = 32;

struct ValidationRun<'a> {
    c: &'a CircularOrder,
    report: ValidationReport,
}

impl<'a> ValidationRun<'a> {
    fn record(&mut self, axiom: Axiom, witness: &[&Element]) {
        self.report.violation_count += 1;
        if self.report.violations.len() < REPORT_WITNESS_CAP {
            self.report.violations.push(Violation {
                axiom,
                witness: witness.iter().map(|e| (*e).clone()).collect(),
            });
        }
    }

    fn check_triple(&mut self, t: [&Element; 3]) {
        let v = self.c.eval(t[0], t[1], t[2]);
        let distinct = t[0] != t[1] && t[0] != t[2] && t[1] != t[2];
        if (v == 0) == distinct {
            self.record(Axiom::Degeneracy, &t);
        }
        self.report.checked_triples += 1;
    }

    fn check_quadruple(&mut self, q: [&Element; 4]) {
        let c = self.c;
        let sum = i32::from(c.eval(q[1], q[2], q[3])) - i32::from(c.eval(q[0], q[2], q[3]))
            + i32::from(c.eval(q[0], q[1], q[3]))
            - i32::from(c.eval(q[0], q[1], q[2]));
        if sum != 0 {
            self.record(Axiom::Cocycle, &q);
        }
        self.report.checked_quadruples += 1;
    }

    fn check_translation(&mut self, g: &Element, t: [&Element; 3]) {
        let group = self.c.group();
        let v = self.c.eval(t[0], t[1], t[2]);
        let w = self.c.eval(
            &group.mul(g, t[0]),
            &group.mul(g, t[1]),
            &group.mul(g, t[2]),
        );
        if v != w {
            self.record(Axiom::LeftInvariance, &[g, t[0], t[1], t[2]]);
        }
        self.report.checked_translations += 1;
    }
}

/// Checks the three axioms on `samples` seeded draws from ball(radius), or
/// exhaustively when the ball is small enough that all quadruples fit in the
/// same budget. An empty violation list means the oracle passed at this
/// coverage; it is bounded verification, not a proof.
pub fn validate(
    c: &CircularOrder,
    radius: u32,
    samples: u64,
    seed: u64,
) -> ValidationReport {
    let report = ValidationReport {
        radius,
        exhaustive: false,
        checked_triples: 0,
        checked_quadruples: 0,
        checked_translations: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    let mut run = ValidationRun { c, report };
    let group = c.group().clone();
    let ball_size = group.ball_size(radius);
    let exhaustive = ball_size.checked_pow(4).is_some_and(|q| q <= samples as u128);
    if exhaustive {
        run.report.exhaustive = true;
        let ball = group.ball(radius).expect("exhaustive ball is small");
        for a in &ball {
            for b in &ball {
                for x in &ball {
                    run.check_triple([a, b, x]);
                    for y in &ball {
                        run.check_quadruple([a, b, x, y]);
                        run.check_translation(y, [a, b, x]);
                    }
                }
            }
        }
    } else {
        let mut sampler = Sampler::new(seed);
        for _ in 0..samples {
            let [a, b, x] = sampler.triple(&group, radius);
            run.check_triple([&a, &b, &x]);
            let y = sampler.element(&group, radius);
            run.check_quadruple([&a, &b, &x, &y]);
            let g = sampler.element(&group, radius);
            run.check_translation(&g, [&a, &b, &x]);
        }
    }
    run.report
}
