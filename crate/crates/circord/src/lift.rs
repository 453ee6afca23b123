//! The central extension of a circularly ordered group by Z.
//!
//! A circular ordering c on G determines a {0,1}-valued 2-cocycle
//!
//! ```text
//! f_c(g, h) = 0  if g = id, h = id, or c(id, g, gh) = +1
//!             1  if gh = id (g != id), or c(id, gh, g) = +1
//! ```
//!
//! and the extension G~ = G x Z with (g,n)(h,m) = (gh, n+m+f_c(g,h)).
//! The element z = (id, 1) is central, and P = {(g,n) | n >= 0} \ {(id,0)}
//! is the positive cone of a left order in which z is cofinal. The integer
//! part [x] with respect to z-powers is exactly the level coordinate, so
//! `floor` is symbolic and O(1).
//!
//! Associativity of the lift product is equivalent to the cocycle identity
//! for f_c, which is why the sampled group-law tests double as the deep
//! cocycle test.
//!
//! Cocycle values are memoized per ordering up to a bounded cache size;
//! repeated power-floor sweeps at growing depth share the cached band.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::groups::Element;
use crate::orders::{CircularOrder, LeftOrder, FCACHE_CAP};

/// An element (base, level) of the extension of `G` by `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiftElement {
    base: Element,
    level: BigInt,
}

impl LiftElement {
    pub fn new(base: Element, level: BigInt) -> Self {
        LiftElement { base, level }
    }

    /// The canonical lift (g, 0).
    pub fn canonical(base: Element) -> Self {
        LiftElement::new(base, BigInt::zero())
    }

    pub fn base(&self) -> &Element {
        &self.base
    }

    pub fn level(&self) -> &BigInt {
        &self.level
    }

    pub fn into_parts(self) -> (Element, BigInt) {
        (self.base, self.level)
    }
}

/// The wrap-around cocycle of the ordering, memoized per (g, h).
pub fn cocycle_f(c: &CircularOrder, g: &Element, h: &Element) -> u8 {
    let group = c.group();
    if group.is_id(g) || group.is_id(h) {
        return 0;
    }
    let key = (g.clone(), h.clone());
    if let Some(v) = c.fcache().lock().expect("cocycle cache").get(&key) {
        return *v;
    }
    let gh = group.mul(g, h);
    // For valid orderings id, g, gh are distinct unless gh = id, where the
    // value is 1; both cases collapse to testing c(id, g, gh) = +1.
    let value = if c.eval(&group.id(), g, &gh) == 1 { 0 } else { 1 };
    let mut cache = c.fcache().lock().expect("cocycle cache");
    if cache.len() < FCACHE_CAP {
        cache.insert(key, value);
    }
    value
}

pub fn lift_id(c: &CircularOrder) -> LiftElement {
    LiftElement::canonical(c.group().id())
}

/// The central generator z = (id, 1).
pub fn lift_z(c: &CircularOrder) -> LiftElement {
    LiftElement::new(c.group().id(), BigInt::from(1))
}

pub fn lift_mul(c: &CircularOrder, x: &LiftElement, y: &LiftElement) -> LiftElement {
    let f = cocycle_f(c, &x.base, &y.base);
    LiftElement::new(
        c.group().mul(&x.base, &y.base),
        &x.level + &y.level + f,
    )
}

pub fn lift_inv(c: &CircularOrder, x: &LiftElement) -> LiftElement {
    let base_inv = c.group().inv(&x.base);
    let f = cocycle_f(c, &x.base, &base_inv);
    LiftElement::new(base_inv, -&x.level - f)
}

/// Membership in the canonical positive cone.
pub fn lift_positive(c: &CircularOrder, x: &LiftElement) -> bool {
    if x.level.is_negative() {
        return false;
    }
    !(x.level.is_zero() && c.group().is_id(&x.base))
}

/// The integer part of x with respect to z-powers: the unique k with
/// z^k <= x < z^(k+1), which the cone definition makes equal to the level.
pub fn floor(x: &LiftElement) -> BigInt {
    x.level.clone()
}

/// The integer part of (g, 0)^n, as the cocycle sum over i = 1..n-1 of
/// f_c(g^i, g). Agrees with repeated `lift_mul` by induction on n.
pub fn power_floor(c: &CircularOrder, g: &Element, n: u64) -> u64 {
    let group = c.group();
    let mut acc = 0u64;
    let mut p = g.clone();
    for _ in 1..n {
        acc += u64::from(cocycle_f(c, &p, g));
        p = group.mul(&p, g);
    }
    acc
}

/// The integer parts of (g, 0)^i for i = 1..=n, in one incremental sweep.
pub fn power_floor_chain(c: &CircularOrder, g: &Element, n: u64) -> Vec<u64> {
    let group = c.group();
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = 0u64;
    let mut p = g.clone();
    for i in 1..=n {
        out.push(acc);
        if i < n {
            acc += u64::from(cocycle_f(c, &p, g));
            p = group.mul(&p, g);
        }
    }
    out
}

/// The coboundary trivializing f_c on a left-ordered group: eta(g) = 0 on
/// the cone and at id, 1 otherwise, so that f(g,h) = eta(g) - eta(gh) +
/// eta(h) for the induced circular ordering.
pub struct EtaFunction {
    cone: LeftOrder,
}

impl EtaFunction {
    pub fn eta(&self, g: &Element) -> u8 {
        if self.cone.sign(g) < 0 {
            1
        } else {
            0
        }
    }

    /// The bounded section g -> (g, -eta(g)); its powers have integer part
    /// in {-1, 0}.
    pub fn section(&self, g: &Element) -> LiftElement {
        LiftElement::new(g.clone(), -BigInt::from(self.eta(g)))
    }
}

pub fn eta_of_secret(cone: &LeftOrder) -> EtaFunction {
    EtaFunction { cone: cone.clone() }
}
