//! Named homomorphisms between group backends.
//!
//! Only a small fixed family is provided; each is a homomorphism by
//! construction. Injectivity is not implied (the Heisenberg projection kills
//! the center, scaling by zero kills everything) and is checked separately
//! where callers require it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groups::{Element, Group, GroupRepr};

#[derive(Clone, Debug)]
pub(crate) enum MorKind {
    /// x -> x.
    Identity,
    /// Z -> Z^k, n -> n * e_axis.
    InclusionAxis { axis: usize },
    /// Heisenberg -> Z^2, (a, b, c) -> (a, b). Kernel is the center.
    HeisenbergToZ2,
    /// Z -> Z, n -> factor * n. Realizes the subgroup factor*Z.
    ScaleZ { factor: BigInt },
}

struct MorInner {
    domain: Group,
    codomain: Group,
    kind: MorKind,
}

/// A homomorphism between backends. Cheap to clone.
#[derive(Clone)]
pub struct Morphism {
    inner: Arc<MorInner>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}: {} -> {}",
            self.inner.kind,
            self.inner.domain.name(),
            self.inner.codomain.name()
        )
    }
}

impl Morphism {
    fn new(domain: Group, codomain: Group, kind: MorKind) -> Self {
        Morphism {
            inner: Arc::new(MorInner {
                domain,
                codomain,
                kind,
            }),
        }
    }

    pub fn identity(group: Group) -> Self {
        Morphism::new(group.clone(), group, MorKind::Identity)
    }

    pub fn inclusion_axis(axis: usize, codomain: Group) -> Result<Self> {
        match codomain.repr() {
            GroupRepr::FreeAbelian { k } if axis < *k => Ok(Morphism::new(
                Group::free_abelian(1)?,
                codomain,
                MorKind::InclusionAxis { axis },
            )),
            GroupRepr::FreeAbelian { k } => Err(Error::invalid(format!(
                "axis {} out of range for free_abelian({})",
                axis, k
            ))),
            _ => Err(Error::invalid(
                "axis inclusion requires a free abelian codomain",
            )),
        }
    }

    pub fn heisenberg_to_z2() -> Self {
        Morphism::new(
            Group::heisenberg(),
            Group::free_abelian(2).expect("rank 2"),
            MorKind::HeisenbergToZ2,
        )
    }

    pub fn scale_z(factor: BigInt) -> Self {
        let z = Group::free_abelian(1).expect("rank 1");
        Morphism::new(z.clone(), z, MorKind::ScaleZ { factor })
    }

    pub fn domain(&self) -> &Group {
        &self.inner.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.inner.codomain
    }

    pub(crate) fn kind(&self) -> &MorKind {
        &self.inner.kind
    }

    pub fn apply(&self, x: &Element) -> Element {
        match &self.inner.kind {
            MorKind::Identity => x.clone(),
            MorKind::InclusionAxis { axis } => {
                let mut coords = vec![BigInt::zero(); self.inner.codomain.arity()];
                coords[*axis] = x.coords()[0].clone();
                self.inner
                    .codomain
                    .element(coords)
                    .expect("arity matches codomain")
            }
            MorKind::HeisenbergToZ2 => self
                .inner
                .codomain
                .element(x.coords()[..2].to_vec())
                .expect("two coordinates"),
            MorKind::ScaleZ { factor } => self
                .inner
                .codomain
                .element(vec![factor * &x.coords()[0]])
                .expect("one coordinate"),
        }
    }

    /// Whether the kernel is trivial by construction.
    pub fn is_injective(&self) -> bool {
        match &self.inner.kind {
            MorKind::Identity | MorKind::InclusionAxis { .. } => true,
            MorKind::HeisenbergToZ2 => false,
            MorKind::ScaleZ { factor } => !factor.is_zero(),
        }
    }

    /// Rejects morphisms whose domain ball(r) contains two elements with the
    /// same image. This is the bounded witness search used by pullbacks.
    pub fn check_injective_on_ball(&self, r: u32) -> Result<()> {
        let mut seen: std::collections::HashMap<Element, Element> =
            std::collections::HashMap::new();
        for x in self.inner.domain.ball(r)? {
            let image = self.apply(&x);
            if let Some(prev) = seen.get(&image) {
                return Err(Error::NotInjective {
                    a: prev.to_string(),
                    b: x.to_string(),
                });
            }
            seen.insert(image, x);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_maps_are_homomorphisms_on_samples() {
        let maps = vec![
            Morphism::identity(Group::heisenberg()),
            Morphism::inclusion_axis(1, Group::free_abelian(3).unwrap()).unwrap(),
            Morphism::heisenberg_to_z2(),
            Morphism::scale_z(BigInt::from(2)),
        ];
        for phi in maps {
            let dom = phi.domain().clone();
            for x in dom.ball(1).unwrap() {
                for y in dom.ball(1).unwrap() {
                    let lhs = phi.apply(&dom.mul(&x, &y));
                    let rhs = phi
                        .codomain()
                        .mul(&phi.apply(&x), &phi.apply(&y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn injectivity_witnesses() {
        assert!(Morphism::heisenberg_to_z2()
            .check_injective_on_ball(1)
            .is_err());
        assert!(Morphism::scale_z(BigInt::zero())
            .check_injective_on_ball(1)
            .is_err());
        assert!(Morphism::scale_z(BigInt::from(2))
            .check_injective_on_ball(3)
            .is_ok());
        assert!(Morphism::inclusion_axis(0, Group::free_abelian(2).unwrap())
            .unwrap()
            .check_injective_on_ball(3)
            .is_ok());
    }

    #[test]
    fn axis_inclusion_places_coordinate() {
        let phi = Morphism::inclusion_axis(1, Group::free_abelian(3).unwrap()).unwrap();
        let x = phi.domain().element_from_i64(&[5]).unwrap();
        assert_eq!(
            phi.apply(&x),
            phi.codomain().element_from_i64(&[0, 5, 0]).unwrap()
        );
    }
}
