//! Seeded random sampling of group elements.
//!
//! Samples are coordinate-uniform over the radius-r box (residue coordinates
//! uniform over the whole cyclic factor), matching the ball used for
//! enumeration. One `Sampler` carries all randomness of a run, so a seed
//! fully determines every sampled element.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::groups::{Element, Group, GroupRepr};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn free_coord(&mut self, r: u32) -> BigInt {
        BigInt::from(self.rng.gen_range(-(r as i64)..=r as i64))
    }

    fn residue(&mut self, n: u64) -> BigInt {
        BigInt::from(self.rng.gen_range(0..n))
    }

    /// One element, coordinate-uniform over ball(r).
    pub fn element(&mut self, group: &Group, r: u32) -> Element {
        let coords = match group.repr() {
            GroupRepr::Cyclic { n } => vec![self.residue(*n)],
            GroupRepr::FreeAbelian { k } | GroupRepr::Tararin { k } => {
                (0..*k).map(|_| self.free_coord(r)).collect()
            }
            GroupRepr::TararinExt { k, n } => {
                let mut c: Vec<BigInt> = (0..*k).map(|_| self.free_coord(r)).collect();
                c.push(self.residue(*n));
                c
            }
            GroupRepr::ZTimesCyclic { n } => vec![self.free_coord(r), self.residue(*n)],
            GroupRepr::Heisenberg => (0..3).map(|_| self.free_coord(r)).collect(),
            GroupRepr::Lift { base, .. } => {
                let mut c = self.element(base, r).coords().to_vec();
                c.push(self.free_coord(r));
                c
            }
        };
        group.element(coords).expect("sampled coordinates are valid")
    }

    /// One element distinct from the identity when the ball contains any;
    /// falls back to the identity for trivial groups.
    pub fn nonidentity(&mut self, group: &Group, r: u32) -> Element {
        for _ in 0..64 {
            let x = self.element(group, r);
            if !group.is_id(&x) {
                return x;
            }
        }
        group.id()
    }

    pub fn triple(&mut self, group: &Group, r: u32) -> [Element; 3] {
        [
            self.element(group, r),
            self.element(group, r),
            self.element(group, r),
        ]
    }

    pub fn pair(&mut self, group: &Group, r: u32) -> (Element, Element) {
        (self.element(group, r), self.element(group, r))
    }

    /// An index below `bound`, for seeded subset selection.
    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }
}
