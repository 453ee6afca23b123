//! Exact arithmetic for the finitely generated group backends.
//!
//! Every element is a coordinate vector of arbitrary-precision integers in
//! the backend's normal form; there is no floating point anywhere in the
//! group layer. Backends:
//!
//! - `Cyclic(n)`: residues in `[0, n)` under addition mod n.
//! - `FreeAbelian(k)`: `Z^k` under coordinatewise addition.
//! - `Tararin(k)`: generators `x_1 .. x_k` with `x_{i+1} x_i x_{i+1}^-1 = x_i^-1`
//!   and `x_{i+1} x_j x_{i+1}^-1 = x_j` for `j < i`, written in the normal form
//!   `x_1^{a_1} .. x_k^{a_k}`. Products twist each coordinate by the parity of
//!   the next one: `c_i = a_i + (-1)^{a_{i+1}} b_i` for `i < k`, `c_k = a_k + b_k`.
//! - `TararinExt(k, n)` (n even): `Tararin(k) x| Z/n`, the generator of `Z/n`
//!   inverting `x_k` and fixing `x_j` for `j < k`. Coordinates `(a_1..a_k, t)`.
//! - `ZTimesCyclic(n)`: the direct product `Z x Z/n`, coordinates `(a, t)`.
//! - `Heisenberg`: integer upper unitriangular 3x3 matrices, coordinates
//!   `(a, b, c)` for the matrix with superdiagonal `(a, b)` and corner `c`;
//!   `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')`.
//! - `Lift`: the central extension of an ordered group by `Z` determined by a
//!   circular ordering's cocycle; coordinates are the base coordinates plus a
//!   final level coordinate.
//!
//! `ball(r)` is the coordinate box `[-r, r]` in each unbounded coordinate;
//! residue coordinates always range over the whole cyclic factor.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lift;
use crate::orders::CircularOrder;

/// Cap on materialized ball sizes.
pub const BALL_CAP: u128 = 1 << 20;

/// A group element: coordinates in the owning backend's normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    coords: Vec<BigInt>,
}

impl Element {
    pub(crate) fn new(coords: Vec<BigInt>) -> Self {
        Element { coords }
    }

    /// Coordinates in the backend normal form.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Builds an element from machine integers (test and descriptor plumbing).
    pub fn from_i64(coords: &[i64]) -> Self {
        Element::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Coordinates as machine integers, or an error when one does not fit.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                c.to_i64().ok_or_else(|| Error::CoordinateRange {
                    value: c.to_string(),
                })
            })
            .collect()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone)]
pub(crate) enum GroupRepr {
    Cyclic { n: u64 },
    FreeAbelian { k: usize },
    Tararin { k: usize },
    TararinExt { k: usize, n: u64 },
    ZTimesCyclic { n: u64 },
    Heisenberg,
    Lift { base: Group, order: CircularOrder },
}

/// A group backend. Cheap to clone; all state is shared.
#[derive(Clone)]
pub struct Group {
    repr: Arc<GroupRepr>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.descriptor() == other.descriptor()
    }
}
impl Eq for Group {}

impl Group {
    fn from_repr(repr: GroupRepr) -> Self {
        Group {
            repr: Arc::new(repr),
        }
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic group order must be positive"));
        }
        Ok(Group::from_repr(GroupRepr::Cyclic { n }))
    }

    pub fn free_abelian(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("free abelian rank must be positive"));
        }
        Ok(Group::from_repr(GroupRepr::FreeAbelian { k }))
    }

    pub fn tararin(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("tararin rank must be positive"));
        }
        Ok(Group::from_repr(GroupRepr::Tararin { k }))
    }

    pub fn tararin_ext(k: usize, n: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("tararin rank must be positive"));
        }
        // The torsion generator acts by an order-2 automorphism, so the
        // cyclic factor must have even order for the action to be defined.
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::invalid(
                "tararin extension requires an even cyclic factor",
            ));
        }
        Ok(Group::from_repr(GroupRepr::TararinExt { k, n }))
    }

    pub fn z_times_cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cyclic factor order must be positive"));
        }
        Ok(Group::from_repr(GroupRepr::ZTimesCyclic { n }))
    }

    pub fn heisenberg() -> Self {
        Group::from_repr(GroupRepr::Heisenberg)
    }

    /// The central extension of `order.group()` by `Z` along the ordering's
    /// cocycle. Elements carry the base coordinates plus a level coordinate.
    pub fn lift(order: CircularOrder) -> Self {
        Group::from_repr(GroupRepr::Lift {
            base: order.group().clone(),
            order,
        })
    }

    pub(crate) fn repr(&self) -> &GroupRepr {
        &self.repr
    }

    /// Short human-readable name used in error messages.
    pub fn name(&self) -> String {
        match &*self.repr {
            GroupRepr::Cyclic { n } => format!("cyclic({})", n),
            GroupRepr::FreeAbelian { k } => format!("free_abelian({})", k),
            GroupRepr::Tararin { k } => format!("tararin({})", k),
            GroupRepr::TararinExt { k, n } => format!("tararin_ext({}, {})", k, n),
            GroupRepr::ZTimesCyclic { n } => format!("z_times_cyclic({})", n),
            GroupRepr::Heisenberg => "heisenberg".to_string(),
            GroupRepr::Lift { base, .. } => format!("lift({})", base.name()),
        }
    }

    /// Number of coordinates in an element's normal form.
    pub fn arity(&self) -> usize {
        match &*self.repr {
            GroupRepr::Cyclic { .. } => 1,
            GroupRepr::FreeAbelian { k } => *k,
            GroupRepr::Tararin { k } => *k,
            GroupRepr::TararinExt { k, .. } => k + 1,
            GroupRepr::ZTimesCyclic { .. } => 2,
            GroupRepr::Heisenberg => 3,
            GroupRepr::Lift { base, .. } => base.arity() + 1,
        }
    }

    /// The base group of a lift backend.
    pub fn lift_base(&self) -> Option<&Group> {
        match &*self.repr {
            GroupRepr::Lift { base, .. } => Some(base),
            _ => None,
        }
    }

    /// The ordering whose cocycle defines a lift backend.
    pub fn lift_order(&self) -> Option<&CircularOrder> {
        match &*self.repr {
            GroupRepr::Lift { order, .. } => Some(order),
            _ => None,
        }
    }

    pub fn id(&self) -> Element {
        Element::new(vec![BigInt::zero(); self.arity()])
    }

    pub fn is_id(&self, e: &Element) -> bool {
        e.coords.iter().all(|c| c.is_zero())
    }

    /// Validates arity and reduces residue coordinates into normal form.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<Element> {
        if coords.len() != self.arity() {
            return Err(Error::Arity {
                group: self.name(),
                expected: self.arity(),
                got: coords.len(),
            });
        }
        let mut e = Element::new(coords);
        match &*self.repr {
            GroupRepr::Cyclic { n } => reduce_residue(&mut e.coords[0], *n),
            GroupRepr::TararinExt { k, n } => reduce_residue(&mut e.coords[*k], *n),
            GroupRepr::ZTimesCyclic { n } => reduce_residue(&mut e.coords[1], *n),
            GroupRepr::Lift { base, .. } => {
                let inner = Element::new(e.coords[..base.arity()].to_vec());
                let inner = base.element(inner.coords)?;
                let level = e.coords[base.arity()].clone();
                let mut coords = inner.coords;
                coords.push(level);
                e = Element::new(coords);
            }
            _ => {}
        }
        Ok(e)
    }

    /// Validates arity from machine integers and normalizes.
    pub fn element_from_i64(&self, coords: &[i64]) -> Result<Element> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        debug_assert_eq!(a.coords.len(), self.arity());
        debug_assert_eq!(b.coords.len(), self.arity());
        match &*self.repr {
            GroupRepr::Cyclic { n } => {
                let mut c = &a.coords[0] + &b.coords[0];
                reduce_residue(&mut c, *n);
                Element::new(vec![c])
            }
            GroupRepr::FreeAbelian { .. } => Element::new(
                a.coords
                    .iter()
                    .zip(&b.coords)
                    .map(|(x, y)| x + y)
                    .collect(),
            ),
            GroupRepr::Tararin { .. } => Element::new(tararin_mul(&a.coords, &b.coords)),
            GroupRepr::TararinExt { k, n } => {
                let mut bt = b.coords[..*k].to_vec();
                if a.coords[*k].is_odd() {
                    bt[*k - 1] = -&bt[*k - 1];
                }
                let mut c = tararin_mul(&a.coords[..*k], &bt);
                let mut t = &a.coords[*k] + &b.coords[*k];
                reduce_residue(&mut t, *n);
                c.push(t);
                Element::new(c)
            }
            GroupRepr::ZTimesCyclic { n } => {
                let x = &a.coords[0] + &b.coords[0];
                let mut t = &a.coords[1] + &b.coords[1];
                reduce_residue(&mut t, *n);
                Element::new(vec![x, t])
            }
            GroupRepr::Heisenberg => Element::new(vec![
                &a.coords[0] + &b.coords[0],
                &a.coords[1] + &b.coords[1],
                &a.coords[2] + &b.coords[2] + &a.coords[0] * &b.coords[1],
            ]),
            GroupRepr::Lift { base, order } => {
                let (ga, la) = split_lift(base, a);
                let (gb, lb) = split_lift(base, b);
                let prod = lift::lift_mul(
                    order,
                    &lift::LiftElement::new(ga, la),
                    &lift::LiftElement::new(gb, lb),
                );
                join_lift(prod)
            }
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        debug_assert_eq!(a.coords.len(), self.arity());
        match &*self.repr {
            GroupRepr::Cyclic { n } => {
                let mut c = -&a.coords[0];
                reduce_residue(&mut c, *n);
                Element::new(vec![c])
            }
            GroupRepr::FreeAbelian { .. } => {
                Element::new(a.coords.iter().map(|x| -x).collect())
            }
            GroupRepr::Tararin { .. } => Element::new(tararin_inv(&a.coords)),
            GroupRepr::TararinExt { k, n } => {
                let mut c = tararin_inv(&a.coords[..*k]);
                if a.coords[*k].is_odd() {
                    c[*k - 1] = -&c[*k - 1];
                }
                let mut t = -&a.coords[*k];
                reduce_residue(&mut t, *n);
                c.push(t);
                Element::new(c)
            }
            GroupRepr::ZTimesCyclic { n } => {
                let mut t = -&a.coords[1];
                reduce_residue(&mut t, *n);
                Element::new(vec![-&a.coords[0], t])
            }
            GroupRepr::Heisenberg => Element::new(vec![
                -&a.coords[0],
                -&a.coords[1],
                &a.coords[0] * &a.coords[1] - &a.coords[2],
            ]),
            GroupRepr::Lift { base, order } => {
                let (g, l) = split_lift(base, a);
                join_lift(lift::lift_inv(order, &lift::LiftElement::new(g, l)))
            }
        }
    }

    /// `a^e` by binary exponentiation; negative exponents go through `inv`.
    pub fn pow(&self, a: &Element, e: &BigInt) -> Element {
        if e.is_negative() {
            return self.pow(&self.inv(a), &-e);
        }
        let mut result = self.id();
        let mut base = a.clone();
        let mut e = e.clone();
        while !e.is_zero() {
            if e.is_odd() {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if !e.is_zero() {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn pow_i64(&self, a: &Element, e: i64) -> Element {
        self.pow(a, &BigInt::from(e))
    }

    /// Conjugate `h g h^-1`.
    pub fn conj(&self, h: &Element, g: &Element) -> Element {
        self.mul(&self.mul(h, g), &self.inv(h))
    }

    /// Number of elements in `ball(r)` without materializing it.
    pub fn ball_size(&self, r: u32) -> u128 {
        let w = 2 * r as u128 + 1;
        match &*self.repr {
            GroupRepr::Cyclic { n } => *n as u128,
            GroupRepr::FreeAbelian { k } | GroupRepr::Tararin { k } => w.pow(*k as u32),
            GroupRepr::TararinExt { k, n } => w.pow(*k as u32) * *n as u128,
            GroupRepr::ZTimesCyclic { n } => w * *n as u128,
            GroupRepr::Heisenberg => w.pow(3),
            GroupRepr::Lift { base, .. } => base.ball_size(r) * w,
        }
    }

    /// The coordinate box of radius `r`: every unbounded coordinate ranges
    /// over `[-r, r]`, residue coordinates over the whole cyclic factor.
    pub fn ball(&self, r: u32) -> Result<Vec<Element>> {
        let size = self.ball_size(r);
        if size > BALL_CAP {
            return Err(Error::BallOverflow {
                group: self.name(),
                radius: r,
                size,
                cap: BALL_CAP,
            });
        }
        let mut out = Vec::with_capacity(size as usize);
        match &*self.repr {
            GroupRepr::Cyclic { n } => {
                for a in 0..*n {
                    out.push(Element::new(vec![BigInt::from(a)]));
                }
            }
            GroupRepr::FreeAbelian { k } | GroupRepr::Tararin { k } => {
                box_coords(*k, r, &mut |c| out.push(Element::new(c)));
            }
            GroupRepr::TararinExt { k, n } => {
                box_coords(*k, r, &mut |c| {
                    for t in 0..*n {
                        let mut c = c.clone();
                        c.push(BigInt::from(t));
                        out.push(Element::new(c));
                    }
                });
            }
            GroupRepr::ZTimesCyclic { n } => {
                box_coords(1, r, &mut |c| {
                    for t in 0..*n {
                        let mut c = c.clone();
                        c.push(BigInt::from(t));
                        out.push(Element::new(c));
                    }
                });
            }
            GroupRepr::Heisenberg => {
                box_coords(3, r, &mut |c| out.push(Element::new(c)));
            }
            GroupRepr::Lift { base, .. } => {
                for inner in base.ball(r)? {
                    for l in -(r as i64)..=(r as i64) {
                        let mut c = inner.coords.clone();
                        c.push(BigInt::from(l));
                        out.push(Element::new(c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact order of `a`, or `None` when infinite.
    pub fn order_of(&self, a: &Element) -> Option<u64> {
        if self.is_id(a) {
            return Some(1);
        }
        match &*self.repr {
            GroupRepr::Cyclic { n } => {
                let r = a.coords[0].to_u64().expect("residue fits u64");
                Some(n / n.gcd(&r))
            }
            GroupRepr::FreeAbelian { .. }
            | GroupRepr::Tararin { .. }
            | GroupRepr::Heisenberg => None,
            GroupRepr::ZTimesCyclic { n } => {
                if !a.coords[0].is_zero() {
                    return None;
                }
                let r = a.coords[1].to_u64().expect("residue fits u64");
                Some(n / n.gcd(&r))
            }
            GroupRepr::TararinExt { k, n } => {
                let t = a.coords[*k].to_u64().expect("residue fits u64");
                if t == 0 {
                    return None; // nontrivial torsion-free part
                }
                let m = n / n.gcd(&t);
                let p = self.pow(a, &BigInt::from(m));
                if self.is_id(&p) {
                    Some(m)
                } else {
                    None
                }
            }
            GroupRepr::Lift { base, .. } => {
                let (g, _) = split_lift(base, a);
                let m = base.order_of(&g)?;
                let p = self.pow(a, &BigInt::from(m));
                if self.is_id(&p) {
                    Some(m)
                } else {
                    None
                }
            }
        }
    }

    /// Solves `x = z^m` in a free abelian backend. `None` when unsolvable.
    pub fn as_power_of(&self, x: &Element, z: &Element) -> Option<BigInt> {
        match &*self.repr {
            GroupRepr::FreeAbelian { .. } => {
                if self.is_id(z) {
                    return self.is_id(x).then(BigInt::zero);
                }
                let i = z.coords.iter().position(|c| !c.is_zero())?;
                let (m, rem) = x.coords[i].div_rem(&z.coords[i]);
                if !rem.is_zero() {
                    return None;
                }
                let ok = x
                    .coords
                    .iter()
                    .zip(&z.coords)
                    .all(|(xc, zc)| *xc == zc * &m);
                ok.then_some(m)
            }
            _ => None,
        }
    }
}

/// Reduces a residue coordinate into `[0, n)`.
fn reduce_residue(c: &mut BigInt, n: u64) {
    let n = BigInt::from(n);
    *c = c.mod_floor(&n);
}

/// Normal-form product in `Tararin(k)`: coordinate `i` of the right factor
/// is negated when the left factor's coordinate `i+1` is odd.
fn tararin_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let k = a.len();
    (0..k)
        .map(|i| {
            if i + 1 < k && a[i + 1].is_odd() {
                &a[i] - &b[i]
            } else {
                &a[i] + &b[i]
            }
        })
        .collect()
}

fn tararin_inv(a: &[BigInt]) -> Vec<BigInt> {
    let k = a.len();
    (0..k)
        .map(|i| {
            if i + 1 < k && a[i + 1].is_odd() {
                a[i].clone()
            } else {
                -&a[i]
            }
        })
        .collect()
}

fn box_coords(k: usize, r: u32, emit: &mut dyn FnMut(Vec<BigInt>)) {
    let mut current = vec![-(r as i64); k];
    loop {
        emit(current.iter().map(|&c| BigInt::from(c)).collect());
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            current[i] += 1;
            if current[i] <= r as i64 {
                break;
            }
            current[i] = -(r as i64);
            i += 1;
        }
    }
}

pub(crate) fn split_lift(base: &Group, a: &Element) -> (Element, BigInt) {
    let g = Element::new(a.coords[..base.arity()].to_vec());
    let l = a.coords[base.arity()].clone();
    (g, l)
}

pub(crate) fn join_lift(x: lift::LiftElement) -> Element {
    let (g, l) = x.into_parts();
    let mut coords = g.coords;
    coords.push(l);
    Element::new(coords)
}
